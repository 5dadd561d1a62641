import json
import math

import pytest
from hypothesis import given, strategies as st

from borwein_lab.analysis import (
    NONNEG, NONPOS, SignPattern, Violation, a_positivity_report, check_borwein, check_iks_even, check_iks_odd,
    check_pattern, conj1_components, dissect, find_threshold, iks_classes, reversal_holds, slice_status,
    table_csv, threshold_from_scan, threshold_table, tridissect_borwein, violations_json,
)
from borwein_lab.poly import LaurentPoly
from borwein_lab.qseries import BadParameters, conj1_spec, conj3_spec, expand, iks_spec

from conftest import laurent

q = LaurentPoly.gen("q")


def test_dissect_examples():
    d = dissect(1 - q - q ** 2 + q ** 3, 3)
    assert (d[0], d[1], d[2]) == (1 + q, -1, -1)
    f = 3 * q ** -7 + q ** 2
    assert dissect(f, 1)[0] == f
    d = dissect(q ** -1, 3)
    assert d[2] == q ** -1 and not d[0] and not d[1]


@given(laurent(("q",), -30, 30, 10), st.integers(1, 12))
def test_recombination(f, M):
    assert dissect(f, M).recombine() == f


def test_tridissect_examples():
    assert tridissect_borwein((1 - q) * (1 - q ** 2)) == (1 + q, 1, 1)
    A, B, C = tridissect_borwein(LaurentPoly.const(1, ("q",)))
    assert (A, B, C) == (1, 0, 0)


def test_check_borwein_examples():
    for n in range(16):
        assert check_borwein(expand(conj1_spec(0, n), 0)[0]) == []
    assert check_borwein(1 + q ** 3) == []
    v = check_borwein(q)
    assert v == [Violation(0, 1, 1, NONPOS)]


def test_sign_pattern():
    assert SignPattern.for_K(1).plus_residues == {0}
    assert SignPattern.for_K(2).signs() == "++--+"
    assert SignPattern.for_K(3).signs() == "++----+"
    for K in range(1, 30):
        pat = SignPattern.for_K(K)
        assert len(pat.plus_residues) == 2 * ((2 * K + 1) // 4) + 1


def test_check_pattern_examples():
    assert check_pattern(1 - q - q ** 2 + q ** 3, 1) == []
    assert check_pattern(1 + q - q ** 2 - q ** 3 + q ** 4, 2) == []
    assert len(check_pattern(q ** 2, 2)) == 1


@given(laurent(("q",), -20, 20, 10))
def test_pattern_k1_agrees_with_borwein(f):
    assert check_pattern(f, 1, 3) == check_borwein(f, 3)


def test_iks_odd_examples():
    plus, minus = iks_classes(1, 3)
    assert plus == {0} and minus == {1, 2}
    assert check_iks_odd(expand(iks_spec(2, 5, 3), 0)[0], 2, 5) == []
    with pytest.raises(BadParameters):
        check_iks_odd(q, 2, 4)


def test_iks_floor_half_matches_pattern():
    for K in range(3, 30, 2):
        a = K // 2
        if math.gcd(a, K) != 1:
            continue
        plus, _ = iks_classes(a, K)
        pat = SignPattern.for_K((K - 1) // 2)
        assert plus == pat.plus_residues, K


def test_iks_even_examples():
    assert check_iks_even(1 - q - q ** 3 + q ** 4) == []
    assert check_iks_even(LaurentPoly.const(1, ("q",))) == []
    assert check_iks_even(q) != []


def test_violation_json():
    v = [Violation(2, 5, -3, NONNEG), Violation(1, 7, 4, NONPOS)]
    data = json.loads(violations_json(v))
    assert data[0] == {"k": 1, "M": 7, "coeff": "4", "expected": "nonpos"}


def test_threshold_examples():
    assert find_threshold(1, 5, 25).N == 2
    assert find_threshold(2, 15, 25).N == 23
    assert find_threshold(1, 3, 25).N == 0


def test_threshold_from_scan():
    verdicts = {0: True, 1: False, 2: True, 3: True}
    assert threshold_from_scan(verdicts, 3) == 2
    assert threshold_from_scan({0: True, 1: True, 2: False}, 2) is None


def test_threshold_invariant():
    # the condition holds on [N, ceiling] and fails at N - 1
    res = find_threshold(1, 9, 12)
    assert res.N == 3
    for n in range(res.N, 13):
        assert slice_status(conj1_spec(1, n), [9])[9] == "pass"
    assert slice_status(conj1_spec(1, res.N - 1), [9])[9] != "pass"


def test_table_checkpoint_resume(tmp_path):
    first = threshold_table([1], range(8), 10, checkpoint_dir=tmp_path)
    assert any(tmp_path.iterdir())
    again = threshold_table([1], range(8), 10, checkpoint_dir=tmp_path)
    assert first == again
    assert table_csv(first).splitlines()[1] == "1,0,0,0,0,0,2,2,2"


def test_table_parallel_matches_serial():
    assert threshold_table([1, 2], range(6), 9, jobs=3) == threshold_table([1, 2], range(6), 9, jobs=1)


def test_reversal_symmetry_small():
    for m in range(3):
        for n in range(1, 4):
            for k, (A, B, C) in enumerate(conj1_components(m, n)):
                assert reversal_holds(B, C, n), (m, n, k)


def test_a_positivity_small_grid():
    assert a_positivity_report([1, 2], range(1, 5), 6) == []


def test_conj3_diagonal_threshold_runs():
    res = find_threshold(2, 2, 8, K=2, conj="conj3-diagonal")
    assert res.conj == "conj3-diagonal" and res.K == 2
