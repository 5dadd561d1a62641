import json

import pytest
from hypothesis import assume, given

from borwein_lab.poly import (
    LaurentPoly, NonInvertiblePoint, NotDivisible, add, eval_mod, exact_div, mul, mul_truncated, shift,
    substitute_power,
)

from conftest import laurent

q = LaurentPoly.gen("q")
p = LaurentPoly.gen("p")
t = LaurentPoly.gen("t")
PRIME = 4611686018427387847


def test_add_examples():
    assert add(1 - q, q) == 1
    f = 3 * q ** 2 - p
    assert add(LaurentPoly.zero(), f) == f
    assert q ** -1 + q ** -1 == 2 * q ** -1


def test_mul_examples():
    assert mul(1 - q, 1 + q) == 1 - q ** 2
    assert mul(1 - q, 1 - q ** 2) == 1 - q - q ** 2 + q ** 3
    assert q ** -2 * q ** 2 == 1


def test_mul_truncated_examples():
    assert mul_truncated(1 + p, 1 + p, "p", 1) == 1 + 2 * p
    f = (1 - p * q) * (1 + q)
    assert mul_truncated(f, LaurentPoly.const(1), "p", 5) == f
    a, b, c = 1 - p * q, 1 - p * q ** -1, 1 - p ** 2 * q
    full = a * b * c
    trunc = mul_truncated(mul_truncated(a, b, "p", 2), c, "p", 2)
    assert trunc == LaurentPoly(("p", "q"), {e: v for e, v in full.with_vars(("p", "q")).terms.items() if e[0] <= 2})


def test_exact_div_examples():
    assert exact_div(1 - q ** 2, 1 - q) == 1 + q
    assert exact_div(1 - t ** 3, 1 - t) == 1 + t + t ** 2

    def qfact(n):
        out = LaurentPoly.const(1)
        for i in range(1, n + 1):
            out = out * (1 - q ** i)
        return out

    assert exact_div(qfact(4), qfact(2) * qfact(2)) == 1 + q + 2 * q ** 2 + q ** 3 + q ** 4


def test_exact_div_remainder():
    with pytest.raises(NotDivisible) as info:
        exact_div(1 + q, 1 - q)
    assert info.value.leading_term is not None
    with pytest.raises(ZeroDivisionError):
        exact_div(1 + q, LaurentPoly.zero())


def test_eval_mod_examples():
    assert eval_mod(1 - q, {"q": 2}, 101) == 100
    assert eval_mod(q ** -1, {"q": 2}, 5) == 3
    with pytest.raises(NonInvertiblePoint):
        eval_mod(q, {"q": 5}, 5)


def test_substitute_power_examples():
    assert substitute_power(1 + q, "q", 3) == 1 + q ** 3
    assert substitute_power(1 + q, "q", -1) == 1 + q ** -1
    with pytest.raises(ValueError):
        substitute_power(1 + q, "q", 0)


def test_display_and_ranges():
    f = (1 - q) * (1 - q ** 2)
    assert str(f) == "1 - q - q^2 + q^3"
    r = (q ** -2 + q ** 5).exponent_range("q")
    assert (r.min, r.max) == (-2, 5)
    with pytest.raises(ValueError):
        LaurentPoly.zero(("q",)).exponent_range("q")


@given(laurent(), laurent(), laurent())
def test_ring_axioms(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f + g - g == f


@given(laurent(), laurent())
def test_exact_division_roundtrip(f, g):
    assume(g)
    assert exact_div(f * g, g) == f


@given(laurent(), laurent(), laurent(("p", "q"), 1, 1, 1, 1))
def test_eval_is_homomorphism(f, g, _):
    pt = {"p": 123456789, "q": 987654321}
    assert eval_mod(f * g, pt, PRIME) == eval_mod(f, pt, PRIME) * eval_mod(g, pt, PRIME) % PRIME
    assert eval_mod(f + g, pt, PRIME) == (eval_mod(f, pt, PRIME) + eval_mod(g, pt, PRIME)) % PRIME


@given(laurent(("p", "q", "z", "t"), -4, 4, 8, 10 ** 30))
def test_json_roundtrip(f):
    data = json.loads(json.dumps(f.to_json()))
    assert LaurentPoly.from_json(data) == f
    assert LaurentPoly.from_json(data).to_json() == f.to_json()


@given(laurent(), laurent())
def test_truncation_matches_full_product(f, g):
    assume(all(e[0] >= 0 for e in f.terms) and all(e[0] >= 0 for e in g.with_vars(("p", "q")).terms))
    full = (f * g).with_vars(("p", "q"))
    want = LaurentPoly(("p", "q"), {e: c for e, c in full.terms.items() if e[0] <= 2})
    assert mul_truncated(f, g, "p", 2) == want


def test_shift_and_zero_invariants():
    f = shift(1 - q, q=3, p=-1)
    assert f == p ** -1 * q ** 3 - p ** -1 * q ** 4
    assert all(c != 0 for c in (f - f).terms.values())
    assert not (f - f)
