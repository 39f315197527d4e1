"""测试公共设置：仓库根目录加入 sys.path，配置文件路径固定为仓库内的默认文件"""

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

os.environ.setdefault("PIBI_CONFIG", os.path.join(ROOT, "config.yml"))
os.environ.setdefault("PIBI_SDP_CONFIG", os.path.join(ROOT, "sdp_config.yaml"))


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240611)
