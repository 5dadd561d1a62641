"""Exact summation of many rational terms in two variables via Kronecker packing.

Each term is ``sign * X^ex Y^ey * prod(num atoms) / prod(den atoms)`` where an
atom ``(a, b)`` stands for ``1 - X^a Y^b`` with ``a, b >= 0``.  Terms sharing a
group key are brought over the least common multiple of their denominators
(as atom multisets), summed as one big integer (coefficient ``c`` of
``X^i Y^j`` sits at bit offset ``B * (i*W + j)``), and the common denominator
is removed by exact division, one atom at a time.

Multiplication and division by ``1 - X^a Y^b`` are a shift and a subtraction
on the packed integer, so the whole sum costs a few big-integer operations
per atom.  After unpacking, a bound check certifies that no digit overflowed.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Tuple

import gmpy2
from gmpy2 import mpz


class NotPolynomial(ArithmeticError):
    """A sum that should be a Laurent polynomial left a nonzero remainder."""


Atoms = Counter  # (a, b) -> multiplicity


@dataclass
class Term:
    key: Hashable
    sign: int
    ex: int
    ey: int
    num: Atoms
    den: Atoms


def _cancel(num: Atoms, den: Atoms) -> Tuple[Atoms, Atoms]:
    common = num & den
    return num - common, den - common


def _degrees(atoms: Atoms) -> Tuple[int, int]:
    return sum(a * k for (a, _), k in atoms.items()), sum(b * k for (_, b), k in atoms.items())


def _packed_atoms(v, atoms: Atoms, B: int, W: int):
    for (a, b), k in sorted(atoms.items()):
        sh = B * (a * W + b)
        for _ in range(k):
            v = v - (v << sh)
    return v


def _divide_atom(N, sh: int):
    """Exact quotient of the integer ``N`` by ``1 - 2^sh``, or None."""
    if N == 0:
        return N
    M = N.bit_length() + 2
    mask = (mpz(1) << M) - 1
    # (1 - 2^sh)^-1 = (1 + 2^sh)(1 + 2^2sh)(1 + 2^4sh)... in the 2-adic integers
    S = N & mask
    s = sh
    while s < M:
        S = (S + (S << s)) & mask
        s *= 2
    Q = S if not S.bit_test(M - 1) else S - (mpz(1) << M)
    if Q - (Q << sh) != N:
        return None
    return Q


def _unpack(N, B: int, ndig: int) -> Dict[int, int]:
    """Balanced base-2^B digits of ``N`` (index -> nonzero digit)."""
    if N == 0:
        return {}
    if B % 8:
        raise ValueError("digit width must be a multiple of 8")
    half = mpz(1) << (B - 1)
    nd = ndig + 1
    ones = ((mpz(1) << (B * nd)) - 1) // ((mpz(1) << B) - 1)
    X = N + ones * half
    if X < 0 or X.bit_length() > B * nd:
        raise OverflowError("packed value outside the digit window")
    width = B // 8
    raw = gmpy2.to_binary(X)[2:]  # little-endian magnitude
    raw = raw + b"\0" * (width * nd - len(raw))
    zero = int(half).to_bytes(width, "little")
    hv = int(half)
    out = {}
    for i in range(nd):
        chunk = raw[i * width:(i + 1) * width]
        if chunk != zero:
            out[i] = int.from_bytes(chunk, "little") - hv
    return out


def sum_terms(terms: Iterable[Term], extra_bits: int = 64, retries: int = 3) -> Dict[Hashable, Dict[Tuple[int, int], int]]:
    """Sum terms by group key; each group must reduce to a Laurent polynomial.

    Returns ``{key: {(ex, ey): coeff}}`` with zero coefficients omitted.
    """
    prepared: List[Term] = []
    lcm: Dict[Hashable, Atoms] = {}
    for t in terms:
        num, den = _cancel(Counter(t.num), Counter(t.den))
        prepared.append(Term(t.key, t.sign, t.ex, t.ey, num, den))
        lcm[t.key] = lcm.get(t.key, Counter()) | den

    out = {}
    for key, D in lcm.items():
        group = [t for t in prepared if t.key == key]
        out[key] = _sum_group(group, D, extra_bits, retries)
    return out


def _sum_group(group: List[Term], D: Atoms, extra_bits: int, retries: int) -> Dict[Tuple[int, int], int]:
    mults = []
    xmin = ymin = None
    xmax = ymax = None
    norm_bound = 0
    for t in group:
        mult = t.num + (D - t.den)
        dx, dy = _degrees(mult)
        xmin = t.ex if xmin is None else min(xmin, t.ex)
        ymin = t.ey if ymin is None else min(ymin, t.ey)
        xmax = t.ex + dx if xmax is None else max(xmax, t.ex + dx)
        ymax = t.ey + dy if ymax is None else max(ymax, t.ey + dy)
        norm_bound += 1 << sum(mult.values())
        mults.append(mult)
    if not group:
        return {}
    W = ymax - ymin + 1
    ndig = (xmax - xmin + 1) * W
    datoms = sum(D.values())
    dx, dy = _degrees(D)
    B = norm_bound.bit_length() + 1 + datoms + extra_bits
    for _ in range(retries + 1):
        B = -(-B // 8) * 8
        acc = mpz(0)
        for t, mult in zip(group, mults):
            v = _packed_atoms(mpz(1), mult, B, W) << (B * ((t.ex - xmin) * W + (t.ey - ymin)))
            acc = acc + v if t.sign > 0 else acc - v
        for (a, b), k in sorted(D.items()):
            sh = B * (a * W + b)
            for _ in range(k):
                acc = _divide_atom(acc, sh)
                if acc is None:
                    raise NotPolynomial(f"remainder after dividing by (1 - X^{a} Y^{b})")
        digits = _unpack(acc, B, ndig)
        # Certificate: F * D computed on digits neither wraps in Y nor overflows
        # a digit, so the packed identity F * D = N is a polynomial identity.
        fmax = max((abs(c) for c in digits.values()), default=0)
        ymax_f = max((i % W for i in digits), default=0)
        if ymax_f + dy < W and fmax << datoms < (1 << (B - 1)):
            return {(i // W + xmin, i % W + ymin): int(c) for i, c in digits.items()}
        B *= 2
    raise NotPolynomial("quotient coefficients exceed every digit width tried")
