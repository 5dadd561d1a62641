import pytest

from borwein_lab.identity import (
    DEFAULT_PRIME, DegenerateSampling, check_prime, default_prime, theorem_components_from_product_mod,
    theorem_terms_mod, verify_andrews, verify_general, verify_identity_modular, verify_kaneko, verify_theorem,
    verify_theorem_modular,
)
from borwein_lab.multisum import theorem_components
from borwein_lab.poly import eval_mod


def test_default_prime(monkeypatch):
    assert default_prime() == DEFAULT_PRIME
    check_prime(DEFAULT_PRIME)
    monkeypatch.setenv("BORWEIN_LAB_PRIME", "2305843009213693951")
    assert default_prime() == 2305843009213693951
    with pytest.raises(ValueError):
        check_prime(1000000007)
    with pytest.raises(ValueError):
        check_prime((1 << 61) + 1)


def test_modular_components_match_exact():
    m, n, P = 1, 2, DEFAULT_PRIME
    F = theorem_components(m, n)
    p0, x = 987654321987, 123456789123
    q0 = pow(x, 3, P)
    from_sum = theorem_terms_mod(m, n, p0, q0, P)
    from_prod = theorem_components_from_product_mod(m, n, p0, x, P)
    for l in range(3):
        want = eval_mod(F[l], {"p": p0, "q": q0}, P)
        assert from_sum[l] == want == from_prod[l]


def test_kaneko_modular_small():
    assert verify_kaneko(3, 3, "modular", trials=20).passed


def test_theorem_modular_small():
    assert verify_theorem(2, 3, "modular", trials=5).passed


def test_general_modular():
    assert verify_general(1, 3, 2, 2, "modular", trials=5).passed
    assert verify_general(2, 2, 3, 4, "modular", trials=5).passed


def test_planted_bug_is_caught():
    rep = verify_theorem_modular(1, 3, trials=20, perturb=5)
    assert rep.status == "fail"
    assert rep.witness["agreed_before"] == 0


def test_non_1mod3_prime_falls_back():
    P = 2305843009213693951  # 2^61 - 1, = 1 mod 3; pick a 2 mod 3 prime instead
    P = next(c for c in range(P, P + 2000) if c % 3 == 2 and check_prime_ok(c))
    assert verify_theorem(1, 2, "modular", trials=3, prime=P).passed


def check_prime_ok(c):
    try:
        check_prime(c)
        return True
    except ValueError:
        return False


def test_degenerate_sampling():
    with pytest.raises(DegenerateSampling):
        verify_identity_modular(lambda pt, P: None, lambda pt, P: 0, 5, DEFAULT_PRIME, ("q",))


def test_report_json_shape():
    rep = verify_andrews(5)
    assert set(rep.to_json()) == {"identity", "mode", "params", "status", "witness"}
    assert rep.passed
    assert verify_kaneko(2, 2).to_json()["mode"] == "exact"
