"""Exact and probabilistic (random-point, mod prime) checks of the multisum identities."""
from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence

import gmpy2
import numpy as np

from .analysis import dissect, tridissect_borwein
from .multisum import (
    MultisumParams, andrews_ABC, binom2, general_multisum, general_prefactor, kaneko_product_lhs,
    kaneko_sum_rhs, theorem_components,
)
from .poly import LaurentPoly, eval_mod
from .qseries import conj1_spec, eval_product_mod, expand, remark_spec

DEFAULT_PRIME = 4611686018427387847  # 2^62 - 57, = 1 mod 3
PRIME_ENV = "BORWEIN_LAB_PRIME"


class DegenerateSampling(RuntimeError):
    """Too many random points hit a vanishing denominator."""


def default_prime() -> int:
    raw = os.environ.get(PRIME_ENV)
    return int(raw) if raw else DEFAULT_PRIME


def check_prime(prime: int) -> int:
    if prime <= 1 << 60 or not gmpy2.is_prime(prime):
        raise ValueError(f"modulus must be a prime above 2^60, got {prime}")
    return prime


@dataclass
class Report:
    identity: str
    mode: str
    params: Dict
    status: str
    witness: Dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"identity": self.identity, "mode": self.mode, "params": self.params,
                "status": self.status, "witness": self.witness}


Evaluator = Callable[[Mapping[str, int], int], Optional[int]]


def _reduce(v, prime):
    # evaluators may return a tuple of values (one per residue class)
    return tuple(x % prime for x in v) if isinstance(v, tuple) else v % prime


def _show(v):
    return [str(x) for x in v] if isinstance(v, tuple) else str(v)


def verify_identity_modular(
    lhs: Evaluator,
    rhs: Evaluator,
    trials: int,
    prime: int,
    variables: Sequence[str],
    seed: int = 0,
    identity: str = "custom",
    params: Optional[Dict] = None,
    max_draws: Optional[int] = None,
) -> Report:
    """Compare ``lhs`` and ``rhs`` at ``trials`` random nonzero points mod ``prime``.

    An evaluator returns an integer or a tuple of integers, or None (or raises
    ZeroDivisionError) when a denominator vanishes; that draw is discarded and
    another one made.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    check_prime(prime)
    rng = random.Random(seed)
    max_draws = max_draws or 10 * trials + 10
    draws = discarded = agreed = 0
    while agreed < trials:
        if draws >= max_draws:
            raise DegenerateSampling(f"{discarded} of {draws} draws discarded")
        draws += 1
        point = {v: rng.randrange(1, prime) for v in variables}
        try:
            a, b = lhs(point, prime), rhs(point, prime)
        except ZeroDivisionError:
            a = b = None
        if a is None or b is None:
            discarded += 1
            if draws >= 10 and discarded * 10 > 9 * draws:
                raise DegenerateSampling(f"{discarded} of {draws} draws discarded")
            continue
        a, b = _reduce(a, prime), _reduce(b, prime)
        if a != b:
            return Report(identity, "modular", dict(params or {}), "fail",
                          {"point": {k: str(v) for k, v in point.items()}, "lhs": _show(a), "rhs": _show(b),
                           "prime": str(prime), "agreed_before": agreed})
        agreed += 1
    return Report(identity, "modular", dict(params or {}), "pass",
                  {"trials": agreed, "discarded": discarded, "prime": str(prime), "seed": seed})


# vectorised partition sums mod P -----------------------------------------


def _partition_array(L: int, n: int) -> np.ndarray:
    vals = range(n, -n - 1, -1)
    return np.array(list(itertools.combinations_with_replacement(vals, L)), dtype=np.int64).reshape(-1, L)


def _tables(X: int, Y: int, amax: int, rmax: int, P: int):
    A0 = np.empty((amax + 1, rmax + 1), dtype=object)  # prod_{s<r} (1 - X^a Y^s)
    A1 = np.empty((amax + 1, rmax + 1), dtype=object)  # prod_{1<=s<=r} (1 - X^a Y^s)
    BIN = np.empty((amax + 1, rmax + 1), dtype=object)  # 1 - X^a Y^r
    for a in range(amax + 1):
        xa = pow(X, a, P)
        acc0 = acc1 = 1
        ys = 1
        for r in range(rmax + 1):
            A0[a, r], A1[a, r] = acc0, acc1
            BIN[a, r] = (1 - xa * ys) % P
            acc0 = acc0 * BIN[a, r] % P
            ys = ys * Y % P
            acc1 = acc1 * (1 - xa * ys) % P
    return A0, A1, BIN


def _powers(base: int, exps: np.ndarray, P: int) -> np.ndarray:
    uniq, inv = np.unique(exps, return_inverse=True)
    vals = np.array([pow(base, int(e), P) for e in uniq] + [0], dtype=object)[:-1]
    return vals[inv.reshape(-1)]


def partition_sum_mod(lams: np.ndarray, n: int, X: int, Y: int, weights: np.ndarray, P: int,
                      perturb: Optional[int] = None) -> Optional[int]:
    """``sum_lam weights[lam] * num(lam) / den(lam)`` mod P for the common summand shape.

    Returns None if some denominator vanishes at this point.  ``perturb``
    negates the summand with that row index (for fault-injection tests).
    """
    if len(lams) == 0:
        return 0
    L = lams.shape[1]
    A0, A1, BIN = _tables(X % P, Y % P, L, 2 * n, P)
    # fold the per-pair and per-part factors into single lookup tables
    r = np.arange(2 * n + 1)
    pair_num = [None] + [BIN[d, r] * A0[d + 1, r] % P for d in range(1, L)]
    pair_den = [None] + [BIN[d, 0] * A1[d - 1, r] % P for d in range(1, L)]
    part_den = [A1[i - 1, n - r + n] * A1[L - i, r] % P for i in range(1, L + 1)]  # indexed by n + lam_i
    const = 1
    for i in range(1, L + 1):
        const = const * A1[i - 1, 2 * n] % P
    num = weights * const % P
    den = np.ones(len(lams), dtype=object)
    for i in range(L):
        for j in range(i + 1, L):
            d = j - i
            diff = lams[:, i] - lams[:, j]
            num = num * pair_num[d][diff] % P
            den = den * pair_den[d][diff] % P
    for i in range(L):
        den = den * part_den[i][n + lams[:, i]] % P
    if (den == 0).any():
        return None
    if perturb is not None:
        num[perturb] = -num[perturb] % P
    inv = np.frompyfunc(lambda v: pow(int(v), -1, P), 1, 1)(den)
    return int((num * inv % P).sum()) % P


def _signs(sizes: np.ndarray) -> np.ndarray:
    return np.where(sizes % 2 == 0, 1, -1).astype(object)


def theorem_terms_mod(m: int, n: int, p0: int, q0: int, P: int, perturb: Optional[int] = None) -> Dict[int, Optional[int]]:
    """``{l: F^l_{m,n}(p0, q0) mod P}`` evaluated from the multisum."""
    lams = _partition_array(2 * m + 1, n)
    sizes = lams.sum(axis=1)
    ls = (-sizes) % 3
    ep = (lams * (np.arange(2 * m + 1) - m)).sum(axis=1)
    eq = (lams * (lams + 1) // 2).sum(axis=1) - (sizes + ls) // 3
    w = _signs(sizes) * _powers(p0, ep, P) % P * _powers(q0, eq, P) % P
    out = {}
    for l in range(3):
        mask = ls == l
        pert = None
        if perturb is not None and mask[perturb]:
            pert = int(mask[:perturb].sum())
        s = partition_sum_mod(lams[mask], n, p0, q0, w[mask], P, pert)
        if s is None:
            out[l] = None
            continue
        P_ = MultisumParams(m, n, l)
        out[l] = P_.sign * s * pow(p0, P_.p_shift, P) % P * pow(q0, P_.q_shift, P) % P
    return out


def _cube_root_of_unity(P: int) -> int:
    for g in range(2, 1000):
        w = pow(g, (P - 1) // 3, P)
        if w != 1:
            return w
    raise ValueError("no primitive cube root of unity")


def theorem_components_from_product_mod(m: int, n: int, p0: int, x: int, P: int) -> Optional[Dict[int, int]]:
    """``{l: F^l_{m,n}(p0, x^3)}`` from the product alone, by a cube-root-of-unity filter.

    Requires ``P = 1 mod 3``.
    """
    if P % 3 != 1:
        raise ValueError("the residue filter needs P = 1 mod 3")
    w = _cube_root_of_unity(P)
    spec = conj1_spec(m, n)
    vals = []
    for k in range(3):
        vals.append(eval_product_mod(spec, {"p": p0, "q": pow(w, k, P) * x % P}, P))
    inv3 = pow(3, -1, P)
    out = {}
    for l in range(3):
        G = sum(pow(w, (-k * l) % 3, P) * vals[k] for k in range(3)) * inv3 % P
        eps = 1 if l == 0 else -1
        out[l] = eps * G * pow(x, -l, P) % P
    return out


# verification drivers ----------------------------------------------------


def verify_andrews(n_max: int) -> Report:
    for n in range(n_max + 1):
        got = andrews_ABC(n)
        want = tridissect_borwein(expand(conj1_spec(0, n), 0)[0])
        for name, g, w in zip("ABC", got, want):
            if g != w:
                return Report("andrews", "exact", {"n_max": n_max}, "fail",
                              {"n": n, "component": name, "sum": str(g), "product": str(w)})
    return Report("andrews", "exact", {"n_max": n_max}, "pass", {"checked": n_max + 1})


def _first_difference(a: LaurentPoly, b: LaurentPoly) -> Dict:
    d = (a - b)
    e, c = d.leading_term()
    return {"monomial": dict(zip(d.vars, e)), "difference": str(c)}


def verify_theorem_exact(m: int, n: int) -> Report:
    params = {"m": m, "n": n}
    F = theorem_components(m, n)
    D = dissect(expand(conj1_spec(m, n)).flatten(), 3)
    deg = 2 * m * (m + 1) * n
    for l in range(3):
        want = (D[l] if l == 0 else -D[l]).with_vars(("p", "q"))
        if F[l] != want:
            return Report("theorem", "exact", params, "fail", {"l": l, **_first_difference(F[l], want)})
        if F[l] and (F[l].valuation("p") < 0 or F[l].degree("p") != deg):
            return Report("theorem", "exact", params, "fail",
                          {"l": l, "p_range": [F[l].valuation("p"), F[l].degree("p")], "expected_degree": deg})
    return Report("theorem", "exact", params, "pass", {"p_degree": deg})


def verify_theorem_modular(m: int, n: int, trials: int = 20, prime: Optional[int] = None, seed: int = 0,
                           perturb: Optional[int] = None) -> Report:
    P = check_prime(prime or default_prime())
    params = {"m": m, "n": n, "trials": trials}
    if P % 3 != 1:
        # no cube roots of unity: fall back to the exact dissection as the left side
        D = dissect(expand(conj1_spec(m, n)).flatten(), 3)
        comps = {l: (D[l] if l == 0 else -D[l]) for l in range(3)}

        def lhs_at(p0, x):
            q0 = pow(x, 3, P)
            return {l: eval_mod(comps[l].with_vars(("p", "q")), {"p": p0, "q": q0}, P) for l in range(3)}
    else:
        def lhs_at(p0, x):
            return theorem_components_from_product_mod(m, n, p0, x, P)

    def lhs(pt, P):
        v = lhs_at(pt["p"], pt["x"])
        return tuple(v[l] for l in range(3))

    def rhs(pt, P):
        v = theorem_terms_mod(m, n, pt["p"], pow(pt["x"], 3, P), P, perturb)
        if any(v[l] is None for l in range(3)):
            return None
        return tuple(v[l] for l in range(3))

    return verify_identity_modular(lhs, rhs, trials, P, ("p", "x"), seed, "theorem", params)


def kaneko_rhs_mod(n_vars: int, N: int, q0: int, z0: int, t0: int, P: int) -> Optional[int]:
    lams = _partition_array(n_vars, N)
    sizes = lams.sum(axis=1)
    et = (lams * np.arange(n_vars)).sum(axis=1)
    eq = (lams * (lams + 1) // 2).sum(axis=1)
    mz = (-pow(z0, -1, P)) % P
    w = _powers(q0, eq, P) * _powers(t0, et, P) % P * _powers(mz, sizes, P) % P
    return partition_sum_mod(lams, N, t0, q0, w, P)


def kaneko_lhs_mod(n_vars: int, N: int, q0: int, z0: int, t0: int, P: int) -> int:
    zi = pow(z0, -1, P)
    acc = 1
    for i in range(1, n_vars + 1):
        for s in range(N):
            acc = acc * (1 - z0 * pow(t0, 1 - i, P) * pow(q0, s, P)) % P
            acc = acc * (1 - zi * pow(t0, i - 1, P) * pow(q0, s + 1, P)) % P
    return acc


def verify_kaneko(n_vars: int, N: int, mode: str = "exact", trials: int = 20, prime: Optional[int] = None,
                  seed: int = 0) -> Report:
    params = {"n_vars": n_vars, "N": N}
    if mode == "exact":
        lhs, rhs = kaneko_product_lhs(n_vars, N), kaneko_sum_rhs(n_vars, N)
        if lhs != rhs:
            return Report("kaneko", "exact", params, "fail", _first_difference(rhs, lhs))
        return Report("kaneko", "exact", params, "pass", {"terms": len(lhs)})
    P = check_prime(prime or default_prime())
    params["trials"] = trials
    return verify_identity_modular(
        lambda pt, P: kaneko_lhs_mod(n_vars, N, pt["q"], pt["z"], pt["t"], P),
        lambda pt, P: kaneko_rhs_mod(n_vars, N, pt["q"], pt["z"], pt["t"], P),
        trials, P, ("q", "z", "t"), seed, "kaneko", params)


def general_rhs_mod(m: int, n: int, a: int, K: int, p0: int, q0: int, P: int) -> Optional[int]:
    b = 2 * K + 1
    lams = _partition_array(2 * m + 1, n)
    sizes = lams.sum(axis=1)
    ep = (lams * np.arange(2 * m + 1)).sum(axis=1) - m * sizes
    eq = b * (lams * (lams + 1) // 2).sum(axis=1) - a * sizes
    w = _signs(sizes) * _powers(p0, ep, P) % P * _powers(q0, eq, P) % P
    s = partition_sum_mod(lams, n, p0, pow(q0, b, P), w, P)
    if s is None:
        return None
    sp, sq = general_prefactor(m, n, K)
    return s * pow(p0, sp, P) % P * pow(q0, sq, P) % P


def verify_general(m: int, n: int, a: int, K: int, mode: str = "exact", trials: int = 20,
                   prime: Optional[int] = None, seed: int = 0) -> Report:
    params = {"m": m, "n": n, "a": a, "K": K}
    spec = remark_spec(m, n, a, K)
    if mode == "exact":
        got = general_multisum(m, n, a, K)
        want = expand(spec).flatten()
        if got != want:
            return Report("general", "exact", params, "fail", _first_difference(got, want))
        return Report("general", "exact", params, "pass", {"terms": len(got)})
    P = check_prime(prime or default_prime())
    params["trials"] = trials
    return verify_identity_modular(
        lambda pt, P: eval_product_mod(spec, pt, P),
        lambda pt, P: general_rhs_mod(m, n, a, K, pt["p"], pt["q"], P),
        trials, P, ("p", "q"), seed, "general", params)


def verify_theorem(m: int, n: int, mode: str = "exact", trials: int = 20, prime: Optional[int] = None,
                   seed: int = 0) -> Report:
    if mode == "exact":
        return verify_theorem_exact(m, n)
    return verify_theorem_modular(m, n, trials, prime, seed)
