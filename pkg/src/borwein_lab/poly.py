"""Sparse multivariate Laurent polynomials with integer coefficients.

Every polynomial object in the package is a :class:`LaurentPoly`: a mapping
from exponent vectors (one signed integer per variable) to nonzero Python
integers.  Variables come from a fixed ordered alphabet ``p, q, z, t``; the
monomial order used for division is lexicographic in that order with larger
exponents first.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

VARIABLES = ("p", "q", "z", "t")
_RANK = {v: i for i, v in enumerate(VARIABLES)}

Exponent = Tuple[int, ...]


class NotDivisible(ArithmeticError):
    """Raised by :func:`exact_div` when no exact Laurent quotient exists."""

    def __init__(self, leading_term, message="division leaves a nonzero remainder"):
        self.leading_term = leading_term
        super().__init__(f"{message}; remainder leading term {leading_term}")


class NonInvertiblePoint(ValueError):
    """A variable was assigned a value that is zero modulo the prime."""


@dataclass(frozen=True)
class ExponentRange:
    var: str
    min: int
    max: int

    def __post_init__(self):
        if self.min > self.max:
            raise ValueError("empty exponent range")


def _canonical_vars(names: Iterable[str]) -> Tuple[str, ...]:
    names = set(names)
    unknown = names - set(VARIABLES)
    if unknown:
        raise ValueError(f"unknown variable(s) {sorted(unknown)}; allowed: {VARIABLES}")
    return tuple(sorted(names, key=_RANK.__getitem__))


class LaurentPoly:
    """Immutable sparse Laurent polynomial over the integers.

    >>> q = LaurentPoly.gen("q")
    >>> (1 - q) * (1 + q)
    LaurentPoly('1 - q^2')
    """

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str] = (), terms: Optional[Mapping[Exponent, int]] = None):
        cvars = _canonical_vars(vars)
        if len(set(vars)) != len(vars):
            raise ValueError("duplicate variable names")
        clean: Dict[Exponent, int] = {}
        if terms:
            perm = None if tuple(vars) == cvars else [list(vars).index(v) for v in cvars]
            for exp, c in terms.items():
                if len(exp) != len(cvars):
                    raise ValueError(f"exponent {exp} does not match variables {cvars}")
                if perm is not None:
                    exp = tuple(exp[i] for i in perm)
                c = int(c)
                if c:
                    clean[tuple(int(e) for e in exp)] = c
        object.__setattr__(self, "vars", cvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    @classmethod
    def _raw(cls, vars: Tuple[str, ...], terms: Dict[Exponent, int]) -> "LaurentPoly":
        # trusted constructor: vars canonical, terms already zero-free
        obj = object.__new__(cls)
        object.__setattr__(obj, "vars", vars)
        object.__setattr__(obj, "terms", terms)
        object.__setattr__(obj, "_hash", None)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, vars: Sequence[str] = ()) -> "LaurentPoly":
        return cls(vars)

    @classmethod
    def const(cls, c: int, vars: Sequence[str] = ()) -> "LaurentPoly":
        cvars = _canonical_vars(vars)
        return cls._raw(cvars, {(0,) * len(cvars): int(c)} if c else {})

    @classmethod
    def gen(cls, name: str) -> "LaurentPoly":
        return cls((name,), {(1,): 1})

    @classmethod
    def monomial(cls, coeff: int = 1, **exps: int) -> "LaurentPoly":
        """``LaurentPoly.monomial(-2, p=1, q=-3)`` is ``-2 p q^-3``."""
        cvars = _canonical_vars(exps)
        if not coeff:
            return cls._raw(cvars, {})
        return cls._raw(cvars, {tuple(exps[v] for v in cvars): int(coeff)})

    @classmethod
    def from_univariate(cls, var: str, coeffs: Mapping[int, int]) -> "LaurentPoly":
        return cls((var,), {(e,): c for e, c in coeffs.items()})

    # basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coeff(self, **exps: int) -> int:
        """Coefficient of the monomial given by keyword exponents (missing ones are 0)."""
        extra = set(exps) - set(self.vars)
        if any(exps[v] for v in extra):
            return 0
        return self.terms.get(tuple(exps.get(v, 0) for v in self.vars), 0)

    def univariate(self) -> Dict[int, int]:
        """Exponent -> coefficient map of a polynomial in at most one variable."""
        if len(self.vars) > 1:
            raise ValueError(f"not univariate: {self.vars}")
        if not self.vars:
            return {0: self.terms[()]} if self.terms else {}
        return {e[0]: c for e, c in self.terms.items()}

    def exponent_range(self, var: str) -> ExponentRange:
        if not self.terms:
            raise ValueError("the zero polynomial has no exponent range")
        if var not in self.vars:
            return ExponentRange(var, 0, 0)
        i = self.vars.index(var)
        es = [e[i] for e in self.terms]
        return ExponentRange(var, min(es), max(es))

    def degree(self, var: str) -> int:
        return self.exponent_range(var).max

    def valuation(self, var: str) -> int:
        return self.exponent_range(var).min

    def leading_term(self) -> Tuple[Exponent, int]:
        """Largest exponent under lex order on (p, q, z, t), with its coefficient."""
        if not self.terms:
            raise ValueError("the zero polynomial has no leading term")
        e = max(self.terms)
        return e, self.terms[e]

    # alignment ----------------------------------------------------------

    def with_vars(self, vars: Sequence[str]) -> "LaurentPoly":
        """Re-express over a superset of the current variables."""
        cvars = _canonical_vars(vars)
        if cvars == self.vars:
            return self
        missing = set(self.vars) - set(cvars)
        if missing:
            # allowed only if the dropped variables never occur
            idx = [self.vars.index(v) for v in missing]
            if any(e[i] for e in self.terms for i in idx):
                raise ValueError(f"cannot drop variables {sorted(missing)} that occur")
        pos = [self.vars.index(v) if v in self.vars else None for v in cvars]
        terms = {tuple(0 if i is None else e[i] for i in pos): c for e, c in self.terms.items()}
        return LaurentPoly._raw(cvars, terms)

    def _align(self, other) -> Tuple["LaurentPoly", "LaurentPoly"]:
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(int(other), self.vars)
        if other.vars == self.vars:
            return self, other
        allv = _canonical_vars(set(self.vars) | set(other.vars))
        return self.with_vars(allv), other.with_vars(allv)

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return add(self, other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, LaurentPoly)):
            return add(self, -other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return add(-self, other)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly._raw(self.vars, {})
            return LaurentPoly._raw(self.vars, {e: c * other for e, c in self.terms.items()})
        if isinstance(other, LaurentPoly):
            return mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) != 1 or abs(next(iter(self.terms.values()))) != 1:
                raise ValueError("negative powers only for unit monomials")
            (e, c), = self.terms.items()
            return LaurentPoly._raw(self.vars, {tuple(x * k for x in e): c ** k})
        result = LaurentPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.const(other, self.vars)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self._align(other)
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            # hash the variable-free content so equal polys over different var sets agree
            used = [i for i, v in enumerate(self.vars) if any(e[i] for e in self.terms)]
            key = frozenset(
                (tuple((self.vars[i], e[i]) for i in used if e[i]), c) for e, c in self.terms.items()
            )
            object.__setattr__(self, "_hash", hash(key))
        return self._hash

    # display / serialization -------------------------------------------

    def sorted_terms(self):
        """Terms in descending lex order (the division order)."""
        return sorted(self.terms.items(), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: tuple(-x for x in t[0][::-1]), reverse=True):
            mono = []
            for v, x in zip(self.vars, e):
                if x == 1:
                    mono.append(v)
                elif x:
                    mono.append(f"{v}^{x}")
            m = "*".join(mono)
            a = abs(c)
            body = m if (m and a == 1) else (f"{a}*{m}" if m else str(a))
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    def to_json(self) -> dict:
        return {
            "vars": list(self.vars),
            "terms": [[list(e), str(c)] for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        vars = tuple(data["vars"])
        if _canonical_vars(vars) != vars:
            raise ValueError(f"variables not in canonical order: {vars}")
        terms: Dict[Exponent, int] = {}
        for exp, c in data["terms"]:
            exp = tuple(int(x) for x in exp)
            if exp in terms:
                raise ValueError(f"duplicate exponent {exp}")
            terms[exp] = int(c)
        if any(c == 0 for c in terms.values()):
            raise ValueError("zero coefficient in canonical form")
        return cls(vars, terms)


# free functions ----------------------------------------------------------


def add(a: LaurentPoly, b) -> LaurentPoly:
    a, b = a._align(b)
    out = dict(a.terms)
    for e, c in b.terms.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return LaurentPoly._raw(a.vars, out)


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    a, b = a._align(b)
    if len(a.terms) < len(b.terms):
        a, b = b, a
    out: Dict[Exponent, int] = {}
    get = out.get
    if len(a.vars) == 1:
        # fast path for the very common univariate case
        bt = [(e[0], c) for e, c in b.terms.items()]
        for (ea,), ca in a.terms.items():
            for eb, cb in bt:
                k = (ea + eb,)
                out[k] = get(k, 0) + ca * cb
    else:
        bt = list(b.terms.items())
        for ea, ca in a.terms.items():
            for eb, cb in bt:
                k = tuple(x + y for x, y in zip(ea, eb))
                out[k] = get(k, 0) + ca * cb
    return LaurentPoly._raw(a.vars, {e: c for e, c in out.items() if c})


def mul_truncated(a: LaurentPoly, b: LaurentPoly, var: str, max_deg: int) -> LaurentPoly:
    """Product of ``a`` and ``b`` keeping only terms of ``var``-degree <= ``max_deg``."""
    a, b = a._align(b)
    if var not in a.vars:
        a = a.with_vars(a.vars + (var,))
        b = b.with_vars(a.vars)
    i = a.vars.index(var)
    out: Dict[Exponent, int] = {}
    get = out.get
    bt = list(b.terms.items())
    for ea, ca in a.terms.items():
        room = max_deg - ea[i]
        for eb, cb in bt:
            if eb[i] > room:
                continue
            k = tuple(x + y for x, y in zip(ea, eb))
            out[k] = get(k, 0) + ca * cb
    return LaurentPoly._raw(a.vars, {e: c for e, c in out.items() if c})


def shift(f: LaurentPoly, **exps: int) -> LaurentPoly:
    """Multiply by the monomial given by keyword exponents."""
    g = f.with_vars(set(f.vars) | set(exps)) if set(exps) - set(f.vars) else f
    delta = tuple(exps.get(v, 0) for v in g.vars)
    return LaurentPoly._raw(g.vars, {tuple(x + d for x, d in zip(e, delta)): c for e, c in g.terms.items()})


def _min_exponents(f: LaurentPoly) -> Exponent:
    return tuple(min(e[i] for e in f.terms) for i in range(len(f.vars)))


def exact_div(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Exact quotient ``num / den`` in the Laurent ring.

    Both operands are first shifted by monomials so their lowest exponents are
    zero, which turns the problem into ordinary polynomial division; the
    quotient is then found by repeatedly cancelling the leading term (lex order
    on p, q, z, t) of the remainder.
    """
    if not den.terms:
        raise ZeroDivisionError("division by the zero polynomial")
    num, den = num._align(den)
    vars = num.vars
    if not num.terms:
        return LaurentPoly._raw(vars, {})
    nshift = _min_exponents(num)
    dshift = _min_exponents(den)
    dterms = [(tuple(x - s for x, s in zip(e, dshift)), c) for e, c in den.terms.items()]
    lead_e, lead_c = max(dterms)
    rem = {tuple(x - s for x, s in zip(e, nshift)): c for e, c in num.terms.items()}
    heap = [tuple(-x for x in e) for e in rem]
    heapq.heapify(heap)
    quot: Dict[Exponent, int] = {}
    while heap:
        e = tuple(-x for x in heapq.heappop(heap))
        c = rem.get(e, 0)
        if not c:
            continue
        qe = tuple(x - y for x, y in zip(e, lead_e))
        if min(qe, default=0) < 0 or c % lead_c:
            lt = tuple(x + s for x, s in zip(e, nshift))
            raise NotDivisible((dict(zip(vars, lt)), c))
        qc = c // lead_c
        quot[qe] = qc
        for de, dc in dterms:
            k = tuple(x + y for x, y in zip(qe, de))
            v = rem.get(k, 0) - qc * dc
            if v:
                if k not in rem:
                    heapq.heappush(heap, tuple(-x for x in k))
                rem[k] = v
            else:
                rem.pop(k, None)
    back = tuple(a - b for a, b in zip(nshift, dshift))
    return LaurentPoly._raw(vars, {tuple(x + s for x, s in zip(e, back)): c for e, c in quot.items()})


def eval_mod(f: LaurentPoly, point: Mapping[str, int], prime: int) -> int:
    """Value of ``f`` at ``point`` in the integers modulo ``prime``."""
    vals = []
    for v in f.vars:
        if v not in point:
            raise ValueError(f"no value given for variable {v!r}")
        x = point[v] % prime
        if x == 0:
            raise NonInvertiblePoint(f"{v} = 0 mod {prime}")
        vals.append(x)
    cache: Dict[Tuple[int, int], int] = {}
    total = 0
    for e, c in f.terms.items():
        t = c
        for i, k in enumerate(e):
            if k:
                key = (i, k)
                pw = cache.get(key)
                if pw is None:
                    pw = cache[key] = pow(vals[i], k, prime)
                t = t * pw % prime
        total += t
    return total % prime


def substitute_power(f: LaurentPoly, var: str, d: int) -> LaurentPoly:
    """Replace ``var`` by ``var**d`` (``d`` may be negative, not zero)."""
    if d == 0:
        raise ValueError("substitution exponent must be nonzero")
    if var not in f.vars:
        return f
    i = f.vars.index(var)
    return LaurentPoly._raw(
        f.vars, {e[:i] + (e[i] * d,) + e[i + 1:]: c for e, c in f.terms.items()}
    )
