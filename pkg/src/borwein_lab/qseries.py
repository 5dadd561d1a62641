"""Truncated theta-type products as explicit factor lists, and their expansion.

A product is a list of binomials ``(1 - p^a q^b)``.  :func:`expand` multiplies
them out exactly, keeping only powers ``p^0 .. p^kmax``, and returns one
Laurent polynomial in ``q`` per power of ``p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .poly import LaurentPoly, NonInvertiblePoint, mul_truncated

_INT64_SAFE = 1 << 62


class BadParameters(ValueError):
    """Parameters outside the hypotheses of a construction."""


@dataclass(frozen=True, order=True)
class BinomialFactor:
    """The factor ``1 - p**p_exp * q**q_exp``."""

    p_exp: int
    q_exp: int

    def as_poly(self) -> LaurentPoly:
        return 1 - LaurentPoly.monomial(p=self.p_exp, q=self.q_exp)


@dataclass(frozen=True)
class ProductSpec:
    factors: Tuple[BinomialFactor, ...]
    provenance: Mapping = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.factors)

    @property
    def p_degree(self) -> int:
        """Largest power of p the product can reach (sum of the p-exponents)."""
        return sum(f.p_exp for f in self.factors)

    def to_json(self) -> dict:
        return {"provenance": dict(self.provenance), "factors": [[f.p_exp, f.q_exp] for f in self.factors]}

    @classmethod
    def from_json(cls, data: Mapping) -> "ProductSpec":
        return cls(tuple(BinomialFactor(int(a), int(b)) for a, b in data["factors"]), dict(data.get("provenance", {})))

    def as_poly(self) -> LaurentPoly:
        """Untruncated product as a (p, q) Laurent polynomial.  Slow; for small specs."""
        out = LaurentPoly.const(1, ("p", "q"))
        for f in sorted(self.factors):
            out = out * f.as_poly()
        return out


def qpochhammer_spec(a_pexp: int, a_qexp: int, base_qexp: int, n: int) -> List[BinomialFactor]:
    """Factors of ``(p^a_pexp q^a_qexp ; q^base_qexp)_n``."""
    if n < 0:
        raise BadParameters("n must be non-negative")
    return [BinomialFactor(a_pexp, a_qexp + j * base_qexp) for j in range(n)]


def _nonneg(**kw):
    for k, v in kw.items():
        if v < 0:
            raise BadParameters(f"{k} must be non-negative, got {v}")


def conj1_spec(m: int, n: int) -> ProductSpec:
    _nonneg(m=m, n=n)
    fs = qpochhammer_spec(0, 1, 3, n) + qpochhammer_spec(0, 2, 3, n)
    for j in range(1, m + 1):
        fs += qpochhammer_spec(j, 1, 3, n) + qpochhammer_spec(j, 2, 3, n)
        fs += qpochhammer_spec(j, -1, -3, n) + qpochhammer_spec(j, -2, -3, n)
    return ProductSpec(tuple(fs), {"conj": "1", "m": m, "n": n})


def conj3_spec(m1: int, m2: int, n1: int, n2: int, n3: int, K: int) -> ProductSpec:
    _nonneg(m1=m1, m2=m2, n1=n1, n2=n2, n3=n3)
    if K < 1:
        raise BadParameters("K must be a positive integer")
    b = 2 * K + 1
    fs = qpochhammer_spec(0, K, b, n1) + qpochhammer_spec(0, K + 1, b, n1)
    for j in range(1, m1 + 1):
        fs += qpochhammer_spec(j, K, b, n2) + qpochhammer_spec(j, K + 1, b, n2)
    for j in range(1, m2 + 1):
        fs += qpochhammer_spec(j, -K, -b, n3) + qpochhammer_spec(j, -K - 1, -b, n3)
    return ProductSpec(tuple(fs), {"conj": "3", "m1": m1, "m2": m2, "n1": n1, "n2": n2, "n3": n3, "K": K})


def conj2_spec(m1: int, m2: int, n1: int, n2: int, n3: int) -> ProductSpec:
    spec = conj3_spec(m1, m2, n1, n2, n3, 1)
    return ProductSpec(spec.factors, {"conj": "2", "m1": m1, "m2": m2, "n1": n1, "n2": n2, "n3": n3})


def iks_spec(a: int, K: int, n: int) -> ProductSpec:
    """``(q^a, q^(K-a); q^K)_n`` for coprime ``a < K/2``."""
    _nonneg(n=n)
    if a < 1 or K < 1 or math.gcd(a, K) != 1 or 2 * a >= K:
        raise BadParameters(f"need gcd(a, K) = 1 and 0 < a < K/2, got a={a}, K={K}")
    fs = qpochhammer_spec(0, a, K, n) + qpochhammer_spec(0, K - a, K, n)
    return ProductSpec(tuple(fs), {"conj": "iks", "a": a, "K": K, "n": n})


def remark_spec(m: int, n: int, a: int, K: int) -> ProductSpec:
    """Product with general residue ``a`` mod ``2K+1`` (equals conj3_spec(m, m, n, n, n, K) when a = K)."""
    _nonneg(m=m, n=n)
    if K < 1 or a < 1:
        raise BadParameters("a and K must be positive")
    b = 2 * K + 1
    fs: List[BinomialFactor] = []
    for j in range(0, m + 1):
        fs += qpochhammer_spec(j, a, b, n) + qpochhammer_spec(j, b - a, b, n)
    for j in range(1, m + 1):
        fs += qpochhammer_spec(j, -a, -b, n) + qpochhammer_spec(j, a - b, -b, n)
    return ProductSpec(tuple(fs), {"conj": "remark", "m": m, "n": n, "a": a, "K": K})


# expansion -----------------------------------------------------------------


@dataclass(frozen=True)
class PGradedSeries:
    """Coefficients of ``p^0 .. p^kmax`` of a product, each a Laurent polynomial in q."""

    kmax: int
    slices: Tuple[LaurentPoly, ...]

    def __post_init__(self):
        if len(self.slices) != self.kmax + 1:
            raise ValueError("need exactly kmax + 1 slices")

    def slice(self, k: int) -> LaurentPoly:
        if k < 0:
            raise IndexError(k)
        if k > self.kmax:
            raise IndexError(f"slice {k} beyond truncation order {self.kmax}")
        return self.slices[k]

    def __getitem__(self, k: int) -> LaurentPoly:
        return self.slice(k)

    @property
    def top(self) -> int:
        """Largest k with a nonzero slice, or -1 if every slice vanishes."""
        for k in range(self.kmax, -1, -1):
            if self.slices[k]:
                return k
        return -1

    def flatten(self) -> LaurentPoly:
        """The truncated product as one (p, q) Laurent polynomial."""
        terms = {}
        for k, s in enumerate(self.slices):
            for e, c in s.with_vars(("q",)).terms.items():
                terms[(k, e[0])] = c
        return LaurentPoly(("p", "q"), terms)

    def mul_truncated(self, other: "PGradedSeries") -> "PGradedSeries":
        """Product of two truncated series, truncated at the smaller order."""
        kmax = min(self.kmax, other.kmax)
        out = []
        for k in range(kmax + 1):
            acc = LaurentPoly.zero(("q",))
            for i in range(k + 1):
                a, b = self.slices[i], other.slices[k - i]
                if a and b:
                    acc = acc + a * b
            out.append(acc.with_vars(("q",)))
        return PGradedSeries(kmax, tuple(out))

    def to_json(self) -> dict:
        return {"kmax": self.kmax, "slices": [{"k": k, "poly": s.to_json()} for k, s in enumerate(self.slices)]}

    @classmethod
    def from_json(cls, data: Mapping) -> "PGradedSeries":
        slices = [None] * (int(data["kmax"]) + 1)
        for item in data["slices"]:
            slices[int(item["k"])] = LaurentPoly.from_json(item["poly"])
        return cls(int(data["kmax"]), tuple(slices))


def _q_window(factors: Sequence[BinomialFactor], kmax: int) -> Tuple[int, int]:
    # Every monomial of slice k is a sum of q-exponents over a selection of factors
    # whose p-exponents sum to k; with p-exponents >= 1 outside the p-free part,
    # at most k such factors are chosen.
    free_lo = sum(f.q_exp for f in factors if f.p_exp == 0 and f.q_exp < 0)
    free_hi = sum(f.q_exp for f in factors if f.p_exp == 0 and f.q_exp > 0)
    neg = sorted(f.q_exp for f in factors if f.p_exp > 0 and f.q_exp < 0)
    pos = sorted((f.q_exp for f in factors if f.p_exp > 0 and f.q_exp > 0), reverse=True)
    return free_lo + sum(neg[:kmax]), free_hi + sum(pos[:kmax])


def expand_dense(spec: ProductSpec, kmax: Optional[int] = None) -> Tuple[np.ndarray, int]:
    """Dense truncated expansion.

    Returns ``(arr, lo)`` where ``arr[k, i]`` is the coefficient of
    ``p^k q^(lo + i)``.  The array is int64 while every coefficient provably
    fits, and is promoted to Python integers (object dtype) otherwise.
    """
    if any(f.p_exp < 0 for f in spec.factors):
        raise BadParameters("negative p-exponents are not supported by the truncated expansion")
    if kmax is None:
        kmax = spec.p_degree
    if kmax < 0:
        raise BadParameters("kmax must be non-negative")
    factors = sorted(f for f in spec.factors if f.p_exp <= kmax)
    lo, hi = _q_window(factors, kmax)
    width = hi - lo + 1
    arr = np.zeros((kmax + 1, width), dtype=np.int64)
    arr[0, -lo] = 1
    bound = 1  # upper bound on max |coefficient|
    for f in factors:
        a, b = f.p_exp, f.q_exp
        if arr.dtype != object:
            bound *= 2
            if bound >= _INT64_SAFE:
                actual = int(np.abs(arr).max())
                if 2 * actual >= _INT64_SAFE:
                    arr = arr.astype(object)
                else:
                    bound = 2 * max(actual, 1)
        if abs(b) >= width:
            # the shifted copy lies entirely outside the window, so it is zero
            continue
        src = arr[: kmax + 1 - a]
        if b >= 0:
            arr[a:, b:] -= src[:, : width - b]
        else:
            arr[a:, : width + b] -= src[:, -b:]
    return arr, lo


def dense_row_to_poly(row: np.ndarray, lo: int) -> LaurentPoly:
    nz = np.nonzero(row)[0]
    return LaurentPoly._raw(("q",), {(int(i) + lo,): int(row[i]) for i in nz})


def expand(spec: ProductSpec, kmax: Optional[int] = None) -> PGradedSeries:
    """Exact coefficients of ``p^0 .. p^kmax`` (default: the full p-degree)."""
    if kmax is None:
        kmax = spec.p_degree
    arr, lo = expand_dense(spec, kmax)
    return PGradedSeries(kmax, tuple(dense_row_to_poly(arr[k], lo) for k in range(kmax + 1)))


def expand_reference(spec: ProductSpec, kmax: int) -> PGradedSeries:
    """Slow sparse expansion through :func:`mul_truncated`; used to cross-check :func:`expand`."""
    acc = LaurentPoly.const(1, ("p", "q"))
    for f in spec.factors:
        acc = mul_truncated(acc, f.as_poly(), "p", kmax)
    slices = []
    for k in range(kmax + 1):
        terms = {(e[1],): c for e, c in acc.with_vars(("p", "q")).terms.items() if e[0] == k}
        slices.append(LaurentPoly(("q",), terms))
    return PGradedSeries(kmax, tuple(slices))


def eval_product_mod(spec: ProductSpec, point: Mapping[str, int], prime: int) -> int:
    """Value of the untruncated product at ``point`` (keys ``p``, ``q``) mod ``prime``."""
    p0 = point.get("p", 1) % prime
    q0 = point["q"] % prime
    if q0 == 0 or p0 == 0:
        raise NonInvertiblePoint("p and q must be nonzero mod prime")
    val = 1
    for f in spec.factors:
        val = val * (1 - pow(p0, f.p_exp, prime) * pow(q0, f.q_exp, prime)) % prime
    return val
