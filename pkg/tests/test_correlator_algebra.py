"""关联量代数与内置目录的测试"""

import dataclasses
import json
from fractions import Fraction
from math import comb, perm

import numpy as np
import pytest

from correlator_algebra import (CorrelatorVector, InequalityFamily, NPolynomial, Partition,
                                brute_force_correlators, canonical_label, eval_inequality,
                                eval_partition_correlators, evaluate_on_partitions, i3_factored, labels_up_to,
                                partition_arrays, partition_iter, verify_classical_bound)
from exceptions import MissingCorrelator, ValidationError
from inequality_catalog import builtin_catalog, dump_catalog, get_family, load_catalog, resolve_families


class TestLabels:
    def test_canonical_order(self):
        assert labels_up_to(3) == ["0", "1", "00", "01", "11", "000", "001", "011", "111"]
        assert len(labels_up_to(4)) == 14

    def test_label_is_sorted(self):
        assert canonical_label("10") == "01"
        assert canonical_label("S_110") == "011"

    @pytest.mark.parametrize("bad", ["", "012", "00000"])
    def test_invalid_label(self, bad):
        with pytest.raises(ValidationError):
            canonical_label(bad)


class TestPartitions:
    def test_partition_count_and_uniqueness(self):
        for n in (1, 4, 7):
            parts = list(partition_iter(n))
            assert len(parts) == comb(n + 3, 3)
            assert len({p.as_tuple() for p in parts}) == len(parts)
            assert all(p.n_parties == n for p in parts)

    def test_negative_entry_rejected(self):
        with pytest.raises(ValidationError):
            Partition(1, -1, 0, 0)

    @pytest.mark.parametrize("n", [1, 2, 3, 5, 7])
    def test_closed_forms_match_brute_force(self, n):
        for p in partition_iter(n):
            assert eval_partition_correlators(p, 4).values == brute_force_correlators(p, 4).values

    def test_correlators_bounded_by_tuple_count(self):
        for p in partition_iter(6):
            vector = eval_partition_correlators(p, 4)
            assert vector.validate() == []
            assert all(abs(vector[label]) <= perm(6, len(label)) for label in vector.labels)


class TestInequalities:
    def test_catalog_contents(self):
        names = [f.name for f in builtin_catalog()]
        assert names[:2] == ["I2", "I3"]
        assert names[-1] == "I4"
        assert len(names) == 20

    def test_family_name_aliases(self):
        assert get_family("I3^(5)").name == "I3_5"
        assert get_family("I3(5)").name == "I3_5"
        with pytest.raises(ValidationError):
            get_family("I9")

    def test_validate(self):
        assert all(family.validate() for family in builtin_catalog())
        negative = dataclasses.replace(get_family("I2"), constant=NPolynomial.from_coefficients(1, -1))
        assert not negative.validate()

    def test_validate_reports_bad_constant(self):
        class BadConstant:
            def __init__(self, error):
                self.error = error

            @property
            def degree(self):
                raise self.error

        family = get_family("I2")
        assert not dataclasses.replace(family, constant=BadConstant(ValueError("bad"))).validate()
        with pytest.raises(ZeroDivisionError):
            dataclasses.replace(family, constant=BadConstant(ZeroDivisionError())).validate()

    def test_i2_keeps_half_integer_coefficients(self):
        coeffs = get_family("I2").coefficients_at(10)
        assert coeffs["00"] == Fraction(1, 2)
        assert coeffs["11"] == Fraction(1, 2)
        assert get_family("I2").constant_at(10) == 20

    def test_i3_matches_factored_form(self):
        family = get_family("I3")
        checked = 0
        for n in range(2, 41):
            values, den = evaluate_on_partitions(family, n)
            a, b, c, d = partition_arrays(n)
            factored = 8 * (a - d) * (a - d - 1) * (3 * c + 2 * d + a - 2) + 48 * b * (c + d)
            assert den == 1
            np.testing.assert_array_equal(values, factored)
            checked += len(values)
        assert checked >= 10 ** 5

    def test_i3_factored_scalar_form(self):
        p = Partition(3, 1, 4, 2)
        assert eval_inequality(get_family("I3"), eval_partition_correlators(p, 3)) == i3_factored(p)

    def test_lowered_constant_fails_with_witness(self):
        i3 = get_family("I3")
        lowered = dataclasses.replace(i3, name="I3_lowered", constant=NPolynomial.from_coefficients(-1, -12, 12))
        report = verify_classical_bound(lowered, [5])
        assert not report.passed
        assert report.worst.min_value == -1
        assert report.worst.argmin == Partition(0, 0, 5, 0)
        assert i3_factored(report.worst.argmin) == 0
        assert report.to_dict()["status"] == "FAIL"

    def test_missing_correlator(self):
        p = Partition(2, 1, 1, 0)
        with pytest.raises(MissingCorrelator):
            eval_inequality(get_family("I3"), eval_partition_correlators(p, 2))

    def test_classical_bound_small_n(self):
        for family in builtin_catalog():
            report = verify_classical_bound(family, range(family.n_min, 13))
            assert report.passed, report.to_dict()

    def test_report_records_argmin(self):
        report = verify_classical_bound(get_family("I3"), range(2, 8))
        data = report.to_dict()
        assert data["status"] == "PASS"
        assert len(data["checks"]) == 6
        assert sum(data["argmin"]) == data["argmin_N"]

    @pytest.mark.slow
    def test_classical_bound_up_to_hundred(self):
        for family in builtin_catalog():
            assert verify_classical_bound(family, range(family.n_min, 101)).passed


class TestSerialization:
    def test_family_json_round_trip(self, tmp_path):
        path = tmp_path / "catalog.json"
        dump_catalog(builtin_catalog(), str(path))
        loaded = load_catalog(str(path))
        for original, restored in zip(builtin_catalog(), loaded):
            assert restored.name == original.name
            for n in (4, 17):
                assert restored.coefficients_at(n) == original.coefficients_at(n)
                assert restored.constant_at(n) == original.constant_at(n)

    def test_half_integers_serialize_as_strings(self):
        data = get_family("I2").to_dict()
        assert data["coeffs"]["00"] == [[0, "1/2"]]

    def test_rejects_high_degree(self):
        entry = {"name": "bad", "K": 2, "coeffs": {"00": [[3, 1]]}, "constant": [[1, 2]]}
        with pytest.raises(ValidationError):
            InequalityFamily.from_dict(entry)

    def test_rejects_fractional_float(self):
        entry = {"name": "bad", "K": 2, "coeffs": {"00": [[0, 0.5]]}, "constant": [[1, 2]]}
        with pytest.raises(ValidationError):
            InequalityFamily.from_dict(entry)

    def test_rejects_unknown_label(self):
        entry = {"name": "bad", "K": 2, "coeffs": {"02": [[0, 1]]}, "constant": [[1, 2]]}
        with pytest.raises(ValidationError):
            InequalityFamily.from_dict(entry)

    def test_user_family_shadows_builtin(self, tmp_path):
        custom = InequalityFamily("I2", 2, {"00": NPolynomial.from_coefficients(1)},
                                  NPolynomial.from_coefficients(0, 1))
        path = tmp_path / "user.json"
        path.write_text(json.dumps({"families": [custom.to_dict()]}))
        resolved = resolve_families(["I2", "I3"], load_catalog(str(path)))
        assert resolved[0].coefficients_at(5) == {"00": 1}
        assert resolved[1].name == "I3"

    def test_vector_round_trip(self):
        vector = eval_partition_correlators(Partition(3, 1, 0, 2), 3)
        assert CorrelatorVector.from_dict(vector.to_dict()).values == vector.values
