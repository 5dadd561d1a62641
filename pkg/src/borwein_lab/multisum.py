"""Gaussian binomials, Andrews' single sums and the multisum representations.

Every summand of the multisums is a ratio of products of binomials
``1 - X^a Y^b``; such a summand is stored as two multisets of *atoms*
``(a, b)``.  Exact sums go through :mod:`borwein_lab._packed`.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ._packed import NotPolynomial, Term, sum_terms
from .poly import LaurentPoly, eval_mod, exact_div
from .qseries import BadParameters

__all__ = [
    "NotPolynomial", "NonIntegralExponent", "PartitionSeq", "MultisumParams", "RationalTerm",
    "q_binomial", "andrews_ABC", "enumerate_partitions", "lambda_atoms", "theorem_term",
    "theorem_multisum", "theorem_components", "theorem_multisum_reference",
    "kaneko_product_lhs", "kaneko_sum_rhs", "general_multisum", "general_prefactor",
]


class NonIntegralExponent(ValueError):
    """A summand was requested outside its residue class."""


def binom2(x: int) -> int:
    """``C(x+1, 2) = x(x+1)/2``, taken literally for negative x."""
    return x * (x + 1) // 2


# q-binomials and Andrews' sums --------------------------------------------


@lru_cache(maxsize=None)
def _qbin_coeffs(mm: int, j: int) -> Tuple[int, ...]:
    """Coefficient list of [mm, j], swept row by row with [r, i] = [r-1, i] + q^(r-i) [r-1, i-1]."""
    if j < 0 or j > mm:
        return ()
    row: Dict[int, List[int]] = {0: [1]}
    for r in range(1, mm + 1):
        lo, hi = max(0, j - (mm - r)), min(j, r)
        new = {}
        for i in range(lo, hi + 1):
            a = row.get(i, [])
            b = row.get(i - 1, [])
            out = [0] * (i * (r - i) + 1)
            out[:len(a)] = a
            for e, c in enumerate(b):
                out[e + r - i] += c
            new[i] = out
        row = new
    return tuple(row[j])


def q_binomial(mm: int, j: int) -> LaurentPoly:
    if mm < 0:
        raise ValueError("mm must be non-negative")
    if j < 0 or j > mm:
        return LaurentPoly.zero(("q",))
    return LaurentPoly.from_univariate("q", dict(enumerate(_qbin_coeffs(mm, j))))


def andrews_ABC(n: int) -> Tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    if n < 0:
        raise ValueError("n must be non-negative")
    out = []
    for shift, expo in ((0, lambda l: l * (9 * l + 1) // 2),
                        (-1, lambda l: l * (9 * l - 5) // 2),
                        (1, lambda l: l * (9 * l + 7) // 2)):
        acc = LaurentPoly.zero(("q",))
        lo = -((n + shift) // 3) - 1
        hi = (n - shift) // 3 + 1
        for lam in range(lo, hi + 1):
            j = n + 3 * lam + shift
            if 0 <= j <= 2 * n:
                term = q_binomial(2 * n, j) * LaurentPoly.monomial((-1) ** (lam % 2), q=expo(lam))
                acc = acc + term
        out.append(acc.with_vars(("q",)))
    return tuple(out)


# summation index -------------------------------------------------------------


@dataclass(frozen=True, order=True)
class PartitionSeq:
    """Non-increasing integer sequence with parts in ``[-n, n]``."""

    parts: Tuple[int, ...]
    n: int

    def __post_init__(self):
        ps = self.parts
        if any(ps[i] < ps[i + 1] for i in range(len(ps) - 1)):
            raise ValueError(f"parts must be non-increasing: {ps}")
        if ps and (ps[0] > self.n or ps[-1] < -self.n):
            raise ValueError(f"parts must lie in [-{self.n}, {self.n}]: {ps}")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


def _nonincreasing(L: int, lo: int, hi: int) -> Iterator[Tuple[int, ...]]:
    if L == 0:
        yield ()
        return
    for first in range(lo, hi + 1):
        for rest in _nonincreasing(L - 1, lo, first):
            yield (first,) + rest


def enumerate_partitions(L: int, n: int, residue: Optional[int] = None) -> Iterator[PartitionSeq]:
    """Non-increasing L-sequences in ``[-n, n]`` in ascending lexicographic order.

    With ``residue`` set, only sequences with ``|lam| = -residue (mod 3)``.
    """
    if L < 1 or n < 0:
        raise ValueError("need L >= 1 and n >= 0")
    for parts in _nonincreasing(L, -n, n):
        if residue is None or (sum(parts) + residue) % 3 == 0:
            yield PartitionSeq(parts, n)


def _raw_partitions(L: int, n: int):
    # faster stream for internal sums (order irrelevant, results are order-free)
    return itertools.combinations_with_replacement(range(n, -n - 1, -1), L)


def lambda_atoms(lam: Sequence[int], n: int) -> Tuple[Counter, Counter]:
    """Numerator and denominator atoms of one summand (common to every variant).

    Atom ``(a, b)`` is ``1 - X^a Y^b`` where X is ``p`` (or ``t``) and Y the
    base of the q-shifted factorials.
    """
    L = len(lam)
    num: Counter = Counter()
    den: Counter = Counter()
    for i in range(L):
        for j in range(i + 1, L):
            d, r = j - i, lam[i] - lam[j]
            num[(d, r)] += 1
            for s in range(r):
                num[(d + 1, s)] += 1
            den[(d, 0)] += 1
            for s in range(1, r + 1):
                den[(d - 1, s)] += 1
    for i in range(1, L + 1):
        li = lam[i - 1]
        for s in range(n - li + 1, 2 * n + 1):
            num[(i - 1, s)] += 1
        for s in range(1, n + li + 1):
            den[(L - i, s)] += 1
    common = num & den
    return num - common, den - common


# Theorem-type multisum ----------------------------------------------------------


@dataclass(frozen=True)
class MultisumParams:
    m: int
    n: int
    l: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise BadParameters("m and n must be non-negative")
        if self.l not in (0, 1, 2):
            raise BadParameters("l must be 0, 1 or 2")

    @property
    def L(self) -> int:
        return 2 * self.m + 1

    @property
    def sign(self) -> int:
        return -1 if binom2(self.l) % 2 else 1

    @property
    def p_shift(self) -> int:
        return self.m * (self.m + 1) * self.n

    @property
    def q_shift(self) -> int:
        return -self.m * self.n * self.n

    def prefactor(self) -> LaurentPoly:
        return LaurentPoly.monomial(self.sign, p=self.p_shift, q=self.q_shift)


@dataclass(frozen=True)
class RationalTerm:
    num: LaurentPoly
    den: LaurentPoly

    def __post_init__(self):
        if not self.den:
            raise ZeroDivisionError("zero denominator")

    def __eq__(self, other):
        if not isinstance(other, RationalTerm):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("RationalTerm is unhashable")

    def __add__(self, other: "RationalTerm") -> "RationalTerm":
        return RationalTerm(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return RationalTerm(-self.num, self.den)

    def to_poly(self) -> LaurentPoly:
        return exact_div(self.num, self.den)

    def eval_mod(self, point, prime: int) -> int:
        d = eval_mod(self.den, point, prime)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return eval_mod(self.num, point, prime) * pow(d, -1, prime) % prime


def _atoms_poly(atoms: Counter, xv: str, yv: str, ystep: int = 1) -> LaurentPoly:
    out = LaurentPoly.const(1, (xv, yv))
    for (a, b), k in sorted(atoms.items()):
        out = out * (1 - LaurentPoly.monomial(**{xv: a, yv: b * ystep})) ** k
    return out


def _theorem_mono(m: int, lam: Sequence[int], l: int) -> Tuple[int, int, int]:
    size = sum(lam)
    if (size + l) % 3:
        raise NonIntegralExponent(f"|lambda| = {size} is not congruent to -{l} mod 3")
    sign = -1 if size % 2 else 1
    ep = sum((i - m) * x for i, x in enumerate(lam))
    eq = sum(binom2(x) for x in lam) - (size + l) // 3
    return sign, ep, eq


def theorem_term(params: MultisumParams, lam) -> RationalTerm:
    """One summand (without the global prefactor) as a ratio in (p, q)."""
    parts = tuple(lam.parts if isinstance(lam, PartitionSeq) else lam)
    if len(parts) != params.L:
        raise ValueError(f"need {params.L} parts")
    sign, ep, eq = _theorem_mono(params.m, parts, params.l)
    num, den = lambda_atoms(parts, params.n)
    return RationalTerm(_atoms_poly(num, "p", "q") * LaurentPoly.monomial(sign, p=ep, q=eq), _atoms_poly(den, "p", "q"))


def _theorem_terms(m: int, n: int, ls=(0, 1, 2)):
    L = 2 * m + 1
    for lam in _raw_partitions(L, n):
        l = (-sum(lam)) % 3
        if l not in ls:
            continue
        sign, ep, eq = _theorem_mono(m, lam, l)
        num, den = lambda_atoms(lam, n)
        yield Term(l, sign, ep, eq, num, den)


def theorem_components(m: int, n: int, ls=(0, 1, 2)) -> Dict[int, LaurentPoly]:
    """``{l: F^l_{m,n}}`` as (p, q) Laurent polynomials."""
    sums = sum_terms(_theorem_terms(m, n, ls))
    out = {}
    for l in ls:
        P = MultisumParams(m, n, l)
        terms = {(ex + P.p_shift, ey + P.q_shift): P.sign * c for (ex, ey), c in sums.get(l, {}).items()}
        out[l] = LaurentPoly(("p", "q"), terms)
    return out


def theorem_multisum(params: MultisumParams) -> LaurentPoly:
    return theorem_components(params.m, params.n, (params.l,))[params.l]


def theorem_multisum_reference(params: MultisumParams) -> LaurentPoly:
    """Same value through :class:`RationalTerm` sums and one sparse exact division.

    Only practical for tiny parameters; used to cross-check the packed engine.
    """
    acc = None
    for lam in enumerate_partitions(params.L, params.n, params.l):
        t = theorem_term(params, lam)
        acc = t if acc is None else acc + t
    if acc is None:
        return LaurentPoly.zero(("p", "q"))
    try:
        return (acc.to_poly() * params.prefactor()).with_vars(("p", "q"))
    except ArithmeticError as exc:
        raise NotPolynomial(str(exc)) from exc


# Kaneko-type identity ---------------------------------------------------


def kaneko_product_lhs(n_vars: int, N: int) -> LaurentPoly:
    """``prod_i (z t^(1-i), z^-1 q t^(i-1); q)_N`` in (q, z, t)."""
    if n_vars < 1 or N < 0:
        raise ValueError("need n_vars >= 1 and N >= 0")
    out = LaurentPoly.const(1, ("q", "z", "t"))
    for i in range(1, n_vars + 1):
        for s in range(N):
            out = out * (1 - LaurentPoly.monomial(z=1, t=1 - i, q=s))
            out = out * (1 - LaurentPoly.monomial(z=-1, t=i - 1, q=1 + s))
    return out


def kaneko_sum_rhs(n_vars: int, N: int) -> LaurentPoly:
    """The partition sum of the Kaneko-type identity, reduced exactly."""
    if n_vars < 1 or N < 0:
        raise ValueError("need n_vars >= 1 and N >= 0")

    def terms():
        for lam in _raw_partitions(n_vars, N):
            size = sum(lam)
            num, den = lambda_atoms(lam, N)
            et = sum(i * x for i, x in enumerate(lam))
            eq = sum(binom2(x) for x in lam)
            # X = t, Y = q; the z-power is the group key
            yield Term(size, -1 if size % 2 else 1, et, eq, num, den)

    out = {}
    for size, poly in sum_terms(terms()).items():
        for (et, eq), c in poly.items():
            out[(eq, -size, et)] = c
    return LaurentPoly(("q", "z", "t"), out)


# general residue a modulo 2K+1 ---------------------------------------------


def general_prefactor(m: int, n: int, K: int) -> Tuple[int, int]:
    """``(p-exponent, q-exponent)`` of the monomial pulled out of the product.

    Writing ``1 - p^j q^-c = -p^j q^-c (1 - p^-j q^c)`` for the factors with
    negative base and pairing the two shifted factorials for each j gives
    ``p^(2jn) q^(-(2K+1) n^2)`` per j, independent of a.
    """
    return m * (m + 1) * n, -(2 * K + 1) * m * n * n


def _general_terms(m: int, n: int, a: int, K: int):
    b = 2 * K + 1
    for lam in _raw_partitions(2 * m + 1, n):
        size = sum(lam)
        num, den = lambda_atoms(lam, n)
        num = Counter({(x, y * b): k for (x, y), k in num.items()})
        den = Counter({(x, y * b): k for (x, y), k in den.items()})
        ep = sum(i * x for i, x in enumerate(lam)) - m * size
        eq = b * sum(binom2(x) for x in lam) - a * size
        yield Term(eq % b, -1 if size % 2 else 1, ep, eq, num, den)


def general_multisum(m: int, n: int, a: int, K: int) -> LaurentPoly:
    """Multisum for the product with residues ``a, 2K+1-a`` modulo ``2K+1``."""
    if m < 0 or n < 0:
        raise BadParameters("m and n must be non-negative")
    if K < 1 or a < 1:
        raise BadParameters("a and K must be positive")
    sp, sq = general_prefactor(m, n, K)
    out: Dict[Tuple[int, int], int] = {}
    for _, poly in sorted(sum_terms(_general_terms(m, n, a, K)).items()):
        for (ep, eq), c in poly.items():
            key = (ep + sp, eq + sq)
            out[key] = out.get(key, 0) + c
    return LaurentPoly(("p", "q"), out)
