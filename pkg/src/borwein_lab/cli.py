"""Command-line front end: ``borwein-lab {expand,check,table1,verify,counterexamples}``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import List, Optional

from . import __version__
from .analysis import (
    check_borwein, check_iks_even, check_iks_odd, check_pattern, reproduce_counterexamples, table_csv,
    threshold_table,
)
from .identity import default_prime, verify_andrews, verify_general, verify_kaneko, verify_theorem
from .qseries import BadParameters, conj1_spec, conj2_spec, conj3_spec, expand, iks_spec

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def parse_range(text: Optional[str]) -> Optional[List[int]]:
    """``"3"`` -> [3], ``"1..4"`` -> [1, 2, 3, 4], ``"1,5,7"`` -> [1, 5, 7]."""
    if text is None:
        return None
    out: List[int] = []
    for piece in text.split(","):
        piece = piece.strip()
        if ".." in piece:
            a, b = piece.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise UsageError(f"empty range {piece!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(piece))
    if not out:
        raise UsageError("empty range")
    return out


@dataclass
class RunConfig:
    command: str
    conj: Optional[str] = None
    m: Optional[List[int]] = None
    m1: Optional[List[int]] = None
    m2: Optional[List[int]] = None
    n: Optional[List[int]] = None
    n1: Optional[List[int]] = None
    n2: Optional[List[int]] = None
    n3: Optional[List[int]] = None
    k: Optional[List[int]] = None
    kmax: Optional[int] = None
    K: int = 1
    a: Optional[int] = None
    ceiling: int = 25
    mode: str = "exact"
    identity: Optional[str] = None
    n_max: Optional[int] = None
    n_vars: Optional[int] = None
    trials: int = 20
    prime: Optional[int] = None
    seed: int = 0
    jobs: int = 1
    format: str = "json"
    out: Optional[str] = None
    checkpoint: Optional[str] = None

    def __post_init__(self):
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if self.format not in ("json", "csv", "text"):
            raise UsageError(f"unknown format {self.format!r}")

    def echo(self) -> dict:
        # jobs and output locations do not influence results, so they stay out
        # of the header and outputs are byte-identical across them
        d = {k: v for k, v in asdict(self).items() if k not in ("jobs", "out", "checkpoint") and v is not None}
        return d


def header(cfg: RunConfig) -> dict:
    return {"tool": "borwein-lab", "version": __version__, "config": cfg.echo()}


def _one(values: Optional[List[int]], name: str, default: Optional[int] = None) -> int:
    if values is None:
        if default is None:
            raise UsageError(f"--{name} is required")
        return default
    if len(values) != 1:
        raise UsageError(f"--{name} takes a single value here")
    return values[0]


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _comment_header(cfg: RunConfig) -> str:
    return "# " + json.dumps(header(cfg), sort_keys=True) + "\n"


# expand ----------------------------------------------------------------


def build_spec(cfg: RunConfig, m=None, n=None, m1=None, m2=None, n1=None, n2=None, n3=None):
    conj = cfg.conj or "1"
    if conj == "1":
        return conj1_spec(m, n)
    if conj in ("2", "3"):
        n2 = n1 if n2 is None else n2
        n3 = n1 if n3 is None else n3
        if conj == "2":
            if cfg.K != 1:
                raise UsageError("--conj 2 has K = 1")
            return conj2_spec(m1, m2, n1, n2, n3)
        return conj3_spec(m1, m2, n1, n2, n3, cfg.K)
    if conj == "iks":
        if cfg.a is None:
            raise UsageError("--conj iks needs --a")
        return iks_spec(cfg.a, cfg.K, n)
    raise UsageError(f"unknown --conj {conj!r}")


def _spec_from_single(cfg: RunConfig):
    conj = cfg.conj or "1"
    if conj == "1":
        return build_spec(cfg, m=_one(cfg.m, "m"), n=_one(cfg.n, "n"))
    if conj == "iks":
        return build_spec(cfg, n=_one(cfg.n, "n"))
    n1 = _one(cfg.n1 or cfg.n, "n1")
    return build_spec(cfg, m1=_one(cfg.m1, "m1", 0), m2=_one(cfg.m2, "m2", 0), n1=n1,
                      n2=_one(cfg.n2, "n2", n1), n3=_one(cfg.n3, "n3", n1))


def cmd_expand(cfg: RunConfig) -> int:
    spec = _spec_from_single(cfg)
    kmax = cfg.kmax if cfg.kmax is not None else spec.p_degree
    series = expand(spec, kmax)
    if cfg.format == "json":
        _emit(cfg, _json({"header": header(cfg), "spec": spec.to_json(), "series": series.to_json()}))
    elif cfg.format == "csv":
        lines = [_comment_header(cfg), "k,exponent,coeff\n"]
        for k in range(kmax + 1):
            for (e,), c in sorted(series[k].with_vars(("q",)).terms.items()):
                lines.append(f"{k},{e},{c}\n")
        _emit(cfg, "".join(lines))
    else:
        lines = [_comment_header(cfg)]
        for k in range(kmax + 1):
            lines.append(f"p^{k}: {series[k]}\n")
        _emit(cfg, "".join(lines))
    return EXIT_OK


# check -------------------------------------------------------------------


def _check_cells(cfg: RunConfig):
    """Yield (params, spec, checker) for every requested product."""
    conj = cfg.conj or "1"
    if conj == "1":
        for m in cfg.m or [0]:
            for n in cfg.n or _required("n"):
                yield {"m": m, "n": n}, conj1_spec(m, n), lambda f, k: check_borwein(f, k)
    elif conj in ("2", "3"):
        K = 1 if conj == "2" else cfg.K
        if conj == "2" and cfg.K != 1:
            raise UsageError("--conj 2 has K = 1")
        n1s = cfg.n1 or cfg.n or _required("n1")
        for m1 in cfg.m1 or [0]:
            for m2 in cfg.m2 or [0]:
                for n1 in n1s:
                    for n2 in cfg.n2 or [n1]:
                        for n3 in cfg.n3 or [n1]:
                            spec = conj3_spec(m1, m2, n1, n2, n3, K)
                            params = {"m1": m1, "m2": m2, "n1": n1, "n2": n2, "n3": n3, "K": K}
                            yield params, spec, lambda f, k, K=K: check_pattern(f, K, k)
    elif conj == "iks":
        if cfg.a is None:
            raise UsageError("--conj iks needs --a")
        a, K = cfg.a, cfg.K
        for n in cfg.n or _required("n"):
            spec = iks_spec(a, K, n)
            if K % 2 == 0:
                checker = lambda f, k: check_iks_even(f, k)
            else:
                checker = lambda f, k: check_iks_odd(f, a, K, k)
            yield {"a": a, "K": K, "n": n}, spec, checker
    else:
        raise UsageError(f"unknown --conj {conj!r}")


def _required(name):
    raise UsageError(f"--{name} is required")


def cmd_check(cfg: RunConfig) -> int:
    cells = []
    failed = 0
    for params, spec, checker in _check_cells(cfg):
        kmax_default = spec.p_degree if cfg.kmax is None else cfg.kmax
        ks = cfg.k if cfg.k is not None else list(range(kmax_default + 1))
        series = expand(spec, max(ks))
        for k in ks:
            v = checker(series[k], k)
            status = "fail" if v else "pass"
            if not v and not series[k] and len(spec):
                # same convention as the threshold table: a vanishing slice of a
                # nontrivial product does not count as satisfying the pattern
                status = "empty"
            failed += status != "pass"
            cells.append({"params": params, "k": k, "status": status,
                          "violations": [x.to_json() for x in v]})
    status = "fail" if failed else "pass"
    if cfg.format == "json":
        _emit(cfg, _json({"header": header(cfg), "status": status, "failed_cells": failed, "cells": cells}))
    elif cfg.format == "csv":
        lines = [_comment_header(cfg), "params,k,M,coeff,expected\n"]
        for c in cells:
            tag = ";".join(f"{a}={b}" for a, b in c["params"].items())
            for v in c["violations"]:
                lines.append(f"{tag},{c['k']},{v['M']},{v['coeff']},{v['expected']}\n")
        _emit(cfg, "".join(lines))
    else:
        lines = [_comment_header(cfg)]
        for c in cells:
            tag = " ".join(f"{a}={b}" for a, b in c["params"].items())
            lines.append(f"{tag} k={c['k']}: {c['status']} ({len(c['violations'])} violations)\n")
        lines.append(f"status: {status}\n")
        _emit(cfg, "".join(lines))
    return EXIT_VIOLATION if failed else EXIT_OK


# table1 --------------------------------------------------------------------


def cmd_table1(cfg: RunConfig) -> int:
    ms = cfg.m or [1, 2, 3]
    ks = cfg.k or list(range(16))
    conj = "conj1" if (cfg.conj or "1") == "1" else "conj3-diagonal"
    if conj == "conj1" and cfg.K != 1:
        raise UsageError("--conj 1 has K = 1")
    ckpt = cfg.checkpoint
    if ckpt is None and cfg.out:
        ckpt = str(Path(cfg.out).with_name(Path(cfg.out).name + ".ckpt"))
    table = threshold_table(ms, ks, cfg.ceiling, cfg.K, conj, cfg.jobs, ckpt)
    if cfg.format == "csv":
        _emit(cfg, _comment_header(cfg) + table_csv(table))
    elif cfg.format == "json":
        rows = {str(m): {str(k): table[(m, k)].N for k in ks} for m in ms}
        _emit(cfg, _json({"header": header(cfg), "ceiling": cfg.ceiling, "N": rows}))
    else:
        lines = [_comment_header(cfg), "m\\k " + " ".join(f"{k:>3}" for k in ks) + "\n"]
        for m in ms:
            lines.append(f"{m:<3} " + " ".join(f"{table[(m, k)].cell():>3}" for k in ks) + "\n")
        _emit(cfg, "".join(lines))
    return EXIT_OK


# verify ----------------------------------------------------------------------


def cmd_verify(cfg: RunConfig) -> int:
    ident = cfg.identity
    prime = cfg.prime or default_prime()
    if cfg.mode not in ("exact", "modular"):
        raise UsageError("--mode is exact or modular")
    reports = []
    if ident == "andrews":
        if cfg.mode != "exact":
            raise UsageError("the single-sum identity is checked exactly")
        reports.append(verify_andrews(cfg.n_max if cfg.n_max is not None else 30))
    elif ident == "theorem":
        for m in cfg.m or _required("m"):
            for n in cfg.n or _required("n"):
                reports.append(verify_theorem(m, n, cfg.mode, cfg.trials, prime, cfg.seed))
    elif ident == "kaneko":
        nvs = [cfg.n_vars] if cfg.n_vars is not None else _required("n-vars")
        for nv in nvs:
            for N in cfg.n or _required("n"):
                reports.append(verify_kaneko(nv, N, cfg.mode, cfg.trials, prime, cfg.seed))
    elif ident == "general":
        if cfg.a is None:
            raise UsageError("--identity general needs --a")
        for m in cfg.m or _required("m"):
            for n in cfg.n or _required("n"):
                reports.append(verify_general(m, n, cfg.a, cfg.K, cfg.mode, cfg.trials, prime, cfg.seed))
    else:
        raise UsageError("--identity must be andrews, kaneko, theorem or general")
    ok = all(r.passed for r in reports)
    if cfg.format == "json":
        _emit(cfg, _json({"header": header(cfg), "status": "pass" if ok else "fail",
                          "reports": [r.to_json() for r in reports]}))
    else:
        sep = "," if cfg.format == "csv" else " "
        lines = [_comment_header(cfg)]
        for r in reports:
            tag = ";".join(f"{a}={b}" for a, b in r.params.items())
            lines.append(sep.join([r.identity, r.mode, tag, r.status]) + "\n")
        _emit(cfg, "".join(lines))
    return EXIT_OK if ok else EXIT_VIOLATION


# counterexamples ---------------------------------------------------------


def cmd_counterexamples(cfg: RunConfig) -> int:
    rep = reproduce_counterexamples()
    doc = rep.to_json()
    if cfg.format == "json":
        _emit(cfg, _json({"header": header(cfg), "reproduced": rep.reproduced, **doc}))
    else:
        lines = [_comment_header(cfg)]
        lines.append(f"two-factor product, p^40 slice: {len(rep.yee_violations)} violations"
                     f" (reproduced: {rep.yee_reproduced})\n")
        for n, c in sorted(rep.iks_coefficients.items()):
            lines.append(f"m1=4 m2=0 K=3 n1=n2={n}: coeff of p^18 q^26 = {c}\n")
        lines.append(f"stable value {rep.iks_stable_value}, pattern predicts {rep.iks_expected}"
                     f" (reproduced: {rep.iks_reproduced})\n")
        lines.append(f"control m=1 n=10 k<=4: {len(rep.control_violations)} violations\n")
        _emit(cfg, "".join(lines))
    return EXIT_OK if rep.reproduced else EXIT_VIOLATION


COMMANDS = {
    "expand": cmd_expand,
    "check": cmd_check,
    "table1": cmd_table1,
    "verify": cmd_verify,
    "counterexamples": cmd_counterexamples,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="borwein-lab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--conj", choices=["1", "2", "3", "iks"], default=None)
        for flag in ("m", "m1", "m2", "n", "n1", "n2", "n3", "k"):
            sp.add_argument(f"--{flag}", type=str, default=None, help="value or range a..b")
        sp.add_argument("--kmax", type=int, default=None)
        sp.add_argument("--K", type=int, default=1)
        sp.add_argument("--a", type=int, default=None)
        sp.add_argument("--ceiling", type=int, default=25)
        sp.add_argument("--mode", choices=["exact", "modular"], default="exact")
        sp.add_argument("--identity", choices=["andrews", "kaneko", "theorem", "general"], default=None)
        sp.add_argument("--n-max", type=int, default=None)
        sp.add_argument("--n-vars", type=int, default=None)
        sp.add_argument("--trials", type=int, default=20)
        sp.add_argument("--prime", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--format", choices=["json", "csv", "text"],
                        default="csv" if name == "table1" else ("text" if name == "counterexamples" else "json"))
        sp.add_argument("--out", type=str, default=None)
        sp.add_argument("--checkpoint", type=str, default=None, help="directory for resumable scan state")
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    kw = vars(ns).copy()
    for flag in ("m", "m1", "m2", "n", "n1", "n2", "n3", "k"):
        kw[flag] = parse_range(kw[flag])
    return RunConfig(**kw)


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    ns = ap.parse_args(argv)
    t0 = time.perf_counter()
    try:
        cfg = config_from_args(ns)
        code = COMMANDS[cfg.command](cfg)
    except (UsageError, BadParameters, ValueError) as exc:
        print(f"borwein-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"[{ns.command}] wall time {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
