"""Residue-class dissections, sign-pattern checks and threshold scans."""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .poly import LaurentPoly, shift, substitute_power
from .qseries import BadParameters, ProductSpec, conj1_spec, conj3_spec, expand, expand_dense, dense_row_to_poly

NONNEG = "nonneg"
NONPOS = "nonpos"


@dataclass(frozen=True)
class Dissection:
    modulus: int
    components: Tuple[LaurentPoly, ...]
    var: str = "q"

    def __getitem__(self, r: int) -> LaurentPoly:
        return self.components[r]

    def recombine(self) -> LaurentPoly:
        out = LaurentPoly.zero((self.var,))
        for r, comp in enumerate(self.components):
            out = out + shift(substitute_power(comp, self.var, self.modulus), **{self.var: r})
        return out


def dissect(f: LaurentPoly, M: int, var: str = "q") -> Dissection:
    """Split ``f`` as ``sum_r var^r D_r(var^M)``; other variables ride along."""
    if M < 1:
        raise ValueError("modulus must be positive")
    if var not in f.vars:
        f = f.with_vars(f.vars + (var,))
    i = f.vars.index(var)
    parts: List[Dict] = [{} for _ in range(M)]
    for e, c in f.terms.items():
        r = e[i] % M
        parts[r][e[:i] + ((e[i] - r) // M,) + e[i + 1:]] = c
    return Dissection(M, tuple(LaurentPoly._raw(f.vars, d) for d in parts), var)


def tridissect_borwein(f: LaurentPoly, var: str = "q") -> Tuple[LaurentPoly, LaurentPoly, LaurentPoly]:
    """``(A, B, C)`` with ``f = A(q^3) - q B(q^3) - q^2 C(q^3)``."""
    d = dissect(f, 3, var)
    return d[0], -d[1], -d[2]


@dataclass(frozen=True)
class SignPattern:
    """Sign prediction by residue of the q-exponent modulo ``modulus``."""

    modulus: int
    plus_residues: FrozenSet[int]

    @classmethod
    def for_K(cls, K: int) -> "SignPattern":
        if K < 1:
            raise BadParameters("K must be a positive integer")
        mod = 2 * K + 1
        l = mod // 4
        plus = {0}
        for i in range(1, l + 1):
            plus.add(i % mod)
            plus.add(-i % mod)
        return cls(mod, frozenset(plus))

    def expected(self, M: int) -> str:
        return NONNEG if M % self.modulus in self.plus_residues else NONPOS

    def signs(self) -> str:
        """Residue-ordered pattern, e.g. ``'++--+'`` for modulus 5."""
        return "".join("+" if r in self.plus_residues else "-" for r in range(self.modulus))


@dataclass(frozen=True, order=True)
class Violation:
    k: int
    M: int
    coeff: int
    expected: str

    def to_json(self) -> dict:
        return {"k": self.k, "M": self.M, "coeff": str(self.coeff), "expected": self.expected}


def violations_json(violations: Iterable[Violation]) -> str:
    return json.dumps([v.to_json() for v in sorted(violations)], indent=1)


def _breaks(c: int, expected: str) -> bool:
    return c < 0 if expected == NONNEG else c > 0


def _scan(f: LaurentPoly, expected_of, k: int) -> List[Violation]:
    out = []
    for (M,), c in f.with_vars(("q",)).terms.items():
        exp = expected_of(M)
        if _breaks(c, exp):
            out.append(Violation(k, M, c, exp))
    out.sort()
    return out


def check_borwein(f: LaurentPoly, k: int = 0) -> List[Violation]:
    """Violations of the Borwein ``+ - -`` condition, reported at exponents of ``f``."""
    A, B, C = tridissect_borwein(f.with_vars(("q",)))
    out = []
    for comp, r, flip in ((A, 0, 1), (B, 1, -1), (C, 2, -1)):
        for (e,), c in comp.with_vars(("q",)).terms.items():
            if c < 0:
                out.append(Violation(k, 3 * e + r, flip * c, NONNEG if r == 0 else NONPOS))
    out.sort()
    return out


def check_pattern(f: LaurentPoly, K: int, k: int = 0) -> List[Violation]:
    pattern = SignPattern.for_K(K)
    return _scan(f, pattern.expected, k)


def iks_classes(a: int, K: int) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """Residues mod ``K`` predicted non-negative and non-positive for odd ``K``."""
    if K % 2 == 0 or math.gcd(a, K) != 1 or not 0 < 2 * a < K:
        raise BadParameters(f"need odd K, gcd(a, K) = 1 and 0 < a < K/2; got a={a}, K={K}")
    plus, minus = set(), set()
    for j in range(0, (K + 1) // 2):
        target = plus if j % 2 == 0 else minus
        target.add(a * j % K)
        target.add(-a * j % K)
    return frozenset(plus), frozenset(minus)


def check_iks_odd(f: LaurentPoly, a: int, K: int, k: int = 0) -> List[Violation]:
    plus, _ = iks_classes(a, K)
    return _scan(f, lambda M: NONNEG if M % K in plus else NONPOS, k)


def check_iks_even(f: LaurentPoly, k: int = 0) -> List[Violation]:
    """Violations of ``(-1)^M a_M >= 0``; a theorem for even K, so this should be empty."""
    return _scan(f, lambda M: NONNEG if M % 2 == 0 else NONPOS, k)


# threshold search ---------------------------------------------------------


@dataclass(frozen=True)
class ThresholdResult:
    m: int
    k: int
    n_scan_max: int
    N: Optional[int]
    K: int = 1
    conj: str = "conj1"

    def cell(self) -> str:
        return str(self.N) if self.N is not None else f">{self.n_scan_max}"


def product_for(conj: str, m: int, n: int, K: int = 1) -> ProductSpec:
    if conj == "conj1":
        if K != 1:
            raise BadParameters("conj1 has K = 1")
        return conj1_spec(m, n)
    if conj == "conj3-diagonal":
        return conj3_spec(m, m, n, n, n, K)
    raise BadParameters(f"unknown product family {conj!r}")


def slice_status(spec: ProductSpec, ks: Sequence[int], K: int = 1) -> Dict[int, str]:
    """Per-slice verdict: ``'pass'``, ``'fail'`` or ``'empty'`` (identically zero)."""
    kmax = max(ks)
    arr, lo = expand_dense(spec, kmax)
    pattern = SignPattern.for_K(K)
    mod = pattern.modulus
    residues = (np.arange(arr.shape[1]) + lo) % mod
    plus_mask = np.isin(residues, sorted(pattern.plus_residues))
    out = {}
    for k in ks:
        row = arr[k]
        nz = row != 0
        if not nz.any():
            out[k] = "empty"
            continue
        bad = (nz & plus_mask & (row < 0)).any() or (nz & ~plus_mask & (row > 0)).any()
        out[k] = "fail" if bad else "pass"
    return out


def cell_passes(n: int, status: str) -> bool:
    # At n = 0 the product is 1 and the statement holds trivially.  For n >= 1 a
    # slice that is still identically zero (k beyond the p-degree) does not count.
    return n == 0 or status == "pass"


def _scan_unit(args):
    conj, m, n, K, ks = args
    return (m, n), slice_status(product_for(conj, m, n, K), ks, K)


def _checkpoint_path(directory: Path, conj: str, K: int, m: int, n: int, kmax: int) -> Path:
    return directory / f"{conj}_K{K}_m{m}_n{n}_k{kmax}.json"


def scan_grid(
    ms: Sequence[int],
    ks: Sequence[int],
    n_scan_max: int,
    K: int = 1,
    conj: str = "conj1",
    jobs: int = 1,
    checkpoint_dir: Optional[os.PathLike] = None,
) -> Dict[Tuple[int, int], Dict[int, str]]:
    """Slice verdicts for every (m, n) with n in ``0..n_scan_max`` and every k in ``ks``.

    Each (m, n) expansion is one unit of work; with ``checkpoint_dir`` its
    verdicts are stored and reused on the next call.
    """
    ks = sorted(set(ks))
    kmax = max(ks)
    units = [(conj, m, n, K, ks) for m in sorted(set(ms)) for n in range(n_scan_max + 1)]
    results: Dict[Tuple[int, int], Dict[int, str]] = {}
    todo = []
    cdir = Path(checkpoint_dir) if checkpoint_dir is not None else None
    if cdir is not None:
        cdir.mkdir(parents=True, exist_ok=True)
    for u in units:
        if cdir is not None:
            path = _checkpoint_path(cdir, conj, K, u[1], u[2], kmax)
            if path.exists():
                stored = json.loads(path.read_text())
                results[(u[1], u[2])] = {int(k): v for k, v in stored["status"].items()}
                continue
        todo.append(u)
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_scan_unit, todo))
    else:
        done = [_scan_unit(u) for u in todo]
    for key, status in done:
        results[key] = status
        if cdir is not None:
            path = _checkpoint_path(cdir, conj, K, key[0], key[1], kmax)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps({"status": {str(k): v for k, v in sorted(status.items())}}, sort_keys=True))
            tmp.replace(path)
    return results


def threshold_from_scan(verdicts: Mapping[int, bool], n_scan_max: int) -> Optional[int]:
    """Least n0 with a pass at every n in ``n0..n_scan_max``; None if the top fails."""
    N = None
    for n in range(n_scan_max, -1, -1):
        if not verdicts[n]:
            break
        N = n
    return N


def threshold_table(
    ms: Sequence[int],
    ks: Sequence[int],
    n_scan_max: int = 25,
    K: int = 1,
    conj: str = "conj1",
    jobs: int = 1,
    checkpoint_dir: Optional[os.PathLike] = None,
) -> Dict[Tuple[int, int], ThresholdResult]:
    if n_scan_max < 1:
        raise BadParameters("the scan ceiling must be at least 1")
    grid = scan_grid(ms, ks, n_scan_max, K, conj, jobs, checkpoint_dir)
    table = {}
    for m in sorted(set(ms)):
        for k in sorted(set(ks)):
            verdicts = {n: cell_passes(n, grid[(m, n)][k]) for n in range(n_scan_max + 1)}
            table[(m, k)] = ThresholdResult(m, k, n_scan_max, threshold_from_scan(verdicts, n_scan_max), K, conj)
    return table


def find_threshold(m: int, k: int, n_scan_max: int = 25, K: int = 1, conj: str = "conj1") -> ThresholdResult:
    return threshold_table([m], [k], n_scan_max, K, conj)[(m, k)]


def table_csv(table: Mapping[Tuple[int, int], ThresholdResult]) -> str:
    ms = sorted({m for m, _ in table})
    ks = sorted({k for _, k in table})
    lines = ["m\\k," + ",".join(str(k) for k in ks)]
    for m in ms:
        lines.append(f"{m}," + ",".join(table[(m, k)].cell() for k in ks))
    return "\n".join(lines) + "\n"


# invariants of Conjecture 1 ----------------------------------------------


def conj1_components(m: int, n: int, kmax: Optional[int] = None):
    """``[(A_k, B_k, C_k) for k in 0..kmax]`` for the first conjecture's product."""
    series = expand(conj1_spec(m, n), kmax if kmax is not None else 2 * m * (m + 1) * n)
    return [tridissect_borwein(series[k]) for k in range(series.kmax + 1)]


def reversal_holds(B: LaurentPoly, C: LaurentPoly, n: int) -> bool:
    """``q^(n^2 - 1) B(1/q) == C(q)``."""
    lhs = shift(substitute_power(B.with_vars(("q",)), "q", -1), q=n * n - 1)
    return lhs == C


def a_positivity_report(ms: Iterable[int], ns: Iterable[int], kmax: int) -> List[Tuple[int, int, int, int, int]]:
    """All negative coefficients of A_{m,n,k} on the grid, as ``(m, n, k, exponent, coeff)``."""
    bad = []
    for m in ms:
        for n in ns:
            for k, (A, _, _) in enumerate(conj1_components(m, n, kmax)):
                for (e,), c in A.with_vars(("q",)).terms.items():
                    if c < 0:
                        bad.append((m, n, k, e, c))
    return sorted(bad)


# counterexamples ---------------------------------------------------------


@dataclass
class CounterexampleReport:
    yee_violations: List[Violation]
    iks_coefficients: Dict[int, int]
    iks_stable_value: Optional[int]
    iks_expected: str
    control_violations: List[Violation] = field(default_factory=list)

    @property
    def yee_reproduced(self) -> bool:
        return bool(self.yee_violations)

    @property
    def iks_reproduced(self) -> bool:
        return self.iks_stable_value is not None and _breaks(self.iks_stable_value, self.iks_expected)

    @property
    def reproduced(self) -> bool:
        return self.yee_reproduced and self.iks_reproduced

    def to_json(self) -> dict:
        return {
            "yee": {
                "product": "(q,q^2;q^3)_1 (pq,pq^2;q^3)_40",
                "k": 40,
                "violations": [v.to_json() for v in self.yee_violations],
                "reproduced": self.yee_reproduced,
            },
            "iks_pattern": {
                "params": {"m1": 4, "m2": 0, "K": 3, "k": 18, "M": 26},
                "coefficients": {str(n): str(c) for n, c in sorted(self.iks_coefficients.items())},
                "stable_value": None if self.iks_stable_value is None else str(self.iks_stable_value),
                "predicted": self.iks_expected,
                "reproduced": self.iks_reproduced,
            },
            "control": {
                "params": {"conj": 1, "m": 1, "n": 10, "k": "0..4"},
                "violations": [v.to_json() for v in self.control_violations],
            },
        }


def yee_violations(n2: int = 40, k: int = 40) -> List[Violation]:
    """Borwein-condition violations in the p^k slice of (q,q^2;q^3)_1 (pq,pq^2;q^3)_n2."""
    spec = conj3_spec(1, 0, 1, n2, 0, 1)
    series = expand(spec, k)
    return check_borwein(series[k], k)


def iks_pattern_coefficient(n: int, k: int = 18, M: int = 26, m1: int = 4, K: int = 3) -> int:
    arr, lo = expand_dense(conj3_spec(m1, 0, n, n, 0, K), k)
    i = M - lo
    return int(arr[k, i]) if 0 <= i < arr.shape[1] else 0


def reproduce_counterexamples(n_start: int = 10, stable_runs: int = 3, n_limit: int = 60) -> CounterexampleReport:
    yee = yee_violations()
    coeffs: Dict[int, int] = {}
    stable = None
    run = 0
    prev = None
    for n in range(n_start, n_limit + 1):
        c = iks_pattern_coefficient(n)
        coeffs[n] = c
        run = run + 1 if c == prev else 1
        prev = c
        if run >= stable_runs:
            stable = c
            break
    expected = SignPattern.for_K(3).expected(26)
    series = expand(conj1_spec(1, 10), 4)
    control = [v for k in range(5) for v in check_borwein(series[k], k)]
    return CounterexampleReport(yee, coeffs, stable, expected, control)
