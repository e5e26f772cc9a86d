"""Command-line interface: nlfft <command> [options].

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass

from . import io
from .complement import complete_b_outer, enumerate_complements, flip_to_antiouter
from .diagnostics import (
    build_strip_matrices,
    instability_experiment,
    lipschitz_checks,
    norm_bounds_report,
    residual_on_circle,
    verify_L_system,
)
from .errors import InvalidInput, NumericalFailure
from .inverse import invert
from .laurent import LaurentPoly
from .nlft import ComplexSequence, NlftPair, eta_of, forward_nlft, pair_check
from .qsp import TargetPoly, solve_gqsp, solve_qsp

log = logging.getLogger("nlfft")

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

COMMANDS = ("forward", "invert", "complete", "enumerate", "flip", "qsp", "gqsp", "diagnose", "bench")


@dataclass
class JobConfig:
    command: str
    action: str | None = None
    method: str | None = None
    input: str | None = None
    other: str | None = None
    output: str | None = None
    grid: int | None = None
    seed: int = 0
    n: int = 80
    min_n: int = 1024
    max_n: int = 16384
    reps: int = 3
    tol: float | None = None
    windows: int = 0
    pqr: tuple = (2.0, 2.0, 2.0)

    def validate(self):
        if self.command not in COMMANDS:
            raise InvalidInput(f"unknown command {self.command!r}")
        if self.method is not None and self.command != "invert":
            raise InvalidInput("--method only applies to invert")
        if self.grid is not None and self.grid < 4:
            raise InvalidInput("--grid must be at least 4")
        for path in (self.input, self.other):
            if path is not None and not os.access(path, os.R_OK):
                raise OSError(f"cannot read {path}")
        if self.output is not None:
            d = os.path.dirname(os.path.abspath(self.output))
            if not os.access(d, os.W_OK):
                raise OSError(f"cannot write into {d}")


class _Summary:
    def __init__(self, cfg):
        self.cfg = cfg
        self.t0 = time.perf_counter()

    def emit(self, **fields):
        fields["time_s"] = round(time.perf_counter() - self.t0, 4)
        line = " ".join(f"{k}={_fmt(v)}" for k, v in fields.items())
        # keep stdout clean for data when no --out was given
        print(f"{self.cfg.command}: {line}", file=sys.stdout if self.cfg.output else sys.stderr)


def _fmt(v):
    return f"{v:.3e}" if isinstance(v, float) else str(v)


def _load(path, kind):
    try:
        d = io.read_json(path)
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{path}: malformed JSON ({e})") from e
    try:
        if kind == "sequence":
            return ComplexSequence.from_json(d)
        if kind == "poly":
            return LaurentPoly.from_json(d)
        if kind == "pair":
            return NlftPair.from_json(d)
        return d
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InvalidInput):
            raise
        raise InvalidInput(f"{path}: not a valid {kind} ({e})") from e


def _need_input(cfg):
    if cfg.input is None:
        raise InvalidInput(f"{cfg.command} needs --in")
    return cfg.input


def run(cfg: JobConfig) -> int:
    cfg.validate()
    s = _Summary(cfg)
    c = cfg.command
    if c == "forward":
        g = _load(_need_input(cfg), "sequence")
        p = forward_nlft(g, "fast")
        io.write_json(cfg.output, p)
        s.emit(n=len(g), residual=pair_check(p).residual)
    elif c == "invert":
        p = _load(_need_input(cfg), "pair")
        g = invert(p, cfg.method or "fast")
        io.write_json(cfg.output, g)
        s.emit(n=len(g), method=cfg.method or "fast", residual=residual_on_circle(p, g, cfg.grid))
    elif c == "complete":
        b = _load(_need_input(cfg), "poly")
        p = complete_b_outer(b)
        io.write_json(cfg.output, p)
        s.emit(degree=b.coeffs.size - 1, residual=pair_check(p).residual, eta=eta_of(p, cfg.grid))
    elif c == "enumerate":
        b = _load(_need_input(cfg), "poly")
        pairs = enumerate_complements(b)
        io.write_json(cfg.output, pairs)
        s.emit(degree=b.coeffs.size - 1, count=len(pairs))
    elif c == "flip":
        p = flip_to_antiouter(_load(_need_input(cfg), "pair"))
        io.write_json(cfg.output, p)
        s.emit(residual=pair_check(p).residual)
    elif c in ("qsp", "gqsp"):
        t = TargetPoly.from_json(_load(_need_input(cfg), "raw"), kind=c)
        ph = solve_qsp(t) if c == "qsp" else solve_gqsp(t)
        io.write_json(cfg.output, ph)
        s.emit(degree=t.degree, residual=ph.residual)
    elif c == "diagnose":
        _diagnose(cfg, s)
    elif c == "bench":
        from .bench import bench

        res = bench(cfg.min_n, cfg.max_n, cfg.reps, cfg.seed)
        rows = [(r.n, r.t_layer, r.t_fast, r.max_diff) for r in res.rows]
        io.write_text(cfg.output, io.csv_text(["n", "t_layer", "t_fast", "max_diff"], rows))
        s.emit(slope_layer=res.slope_layer, slope_fast=res.slope_fast)
    return EXIT_OK


def _diagnose(cfg, s):
    a = cfg.action
    if a == "instability":
        rows = instability_experiment(cfg.n, cfg.seed)
        io.write_text(cfg.output, io.csv_text(
            ["n", "residual_outer", "residual_flipped"],
            [(r.n, r.residual_outer, r.residual_flipped) for r in rows]))
        s.emit(n=cfg.n, seed=cfg.seed, residual_outer=rows[0].residual_outer,
               residual_flipped=rows[0].residual_flipped)
    elif a == "structure":
        p = _load(_need_input(cfg), "pair")
        S = build_strip_matrices(p)
        report = {
            "n": int(S.gamma.size),
            "ldl_residual": S.ldl_residual(),
            "displacement_residual": S.displacement_residual(),
            "L_system_residual": verify_L_system(p).residual,
        }
        try:
            nb = norm_bounds_report(p, windows=cfg.windows, rng=cfg.seed, S=S)
            report.update(eta=nb.eta, lam_min=nb.lam_min, lam_max=nb.lam_max, norm_L=nb.norm_L,
                          norm_Linv=nb.norm_Linv, norm_DLinv=nb.norm_DLinv,
                          bounds=nb.checks(), windows_ok=nb.window_checks())
        except InvalidInput as e:
            report["norm_bounds"] = f"skipped: {e}"
        io.write_json(cfg.output, report)
        s.emit(n=report["n"], ldl=report["ldl_residual"], L_system=report["L_system_residual"])
    elif a == "lipschitz":
        if cfg.other is None:
            raise InvalidInput("diagnose lipschitz needs --other")
        g1 = _load(_need_input(cfg), "sequence")
        g2 = _load(cfg.other, "sequence")
        r = lipschitz_checks(g1, g2, cfg.pqr)
        io.write_json(cfg.output, {"n": r.n, "p": _exp_str(r.p), "q": _exp_str(r.q), "r": _exp_str(r.r),
                                   "lhs": r.lhs, "rhs": r.rhs, "holds": r.holds})
        s.emit(lhs=r.lhs, rhs=r.rhs, holds=r.holds)
    else:
        raise InvalidInput(f"unknown diagnose action {a!r}")


def _exp_str(v):
    return "inf" if v == float("inf") else v


def _exponent(v):
    return float("inf") if v in ("inf", "Inf", "infinity") else float(v)


def build_parser():
    ap = argparse.ArgumentParser(prog="nlfft", description="SU(2) nonlinear Fourier transform tools")
    sub = ap.add_subparsers(dest="command", required=True)

    def io_args(p, inp=True):
        if inp:
            p.add_argument("--in", dest="input", help="input JSON file")
        p.add_argument("--out", dest="output", help="output file (stdout if omitted)")

    p = sub.add_parser("forward", help="gamma.json -> pair.json")
    io_args(p)
    p = sub.add_parser("invert", help="pair.json -> gamma.json")
    io_args(p)
    p.add_argument("--method", choices=["layer", "fast"], default=None)
    p.add_argument("--grid", type=int, default=None, help="circle grid for the residual")
    for name, h in (("complete", "b.json -> outer pair"), ("enumerate", "b.json -> all complements"),
                    ("flip", "outer pair -> anti-outer pair")):
        p = sub.add_parser(name, help=h)
        io_args(p)
        if name == "complete":
            p.add_argument("--grid", type=int, default=None)
    for name in ("qsp", "gqsp"):
        p = sub.add_parser(name, help=f"{name.upper()} phase factors")
        p.add_argument("action", choices=["solve"])
        p.add_argument("--target", dest="input", required=True)
        p.add_argument("--out", dest="output")
    p = sub.add_parser("diagnose", help="stability and structure diagnostics")
    p.add_argument("action", choices=["instability", "structure", "lipschitz"])
    io_args(p)
    p.add_argument("--other", help="second sequence for lipschitz")
    p.add_argument("--n", type=int, default=80)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--windows", type=int, default=0, help="random index windows for submatrix bounds")
    p.add_argument("--p", type=_exponent, default=2.0)
    p.add_argument("--q", type=_exponent, default=2.0)
    p.add_argument("--r", type=_exponent, default=2.0)
    p = sub.add_parser("bench", help="timing table for both inverse solvers")
    p.add_argument("--min", dest="min_n", type=int, default=1024)
    p.add_argument("--max", dest="max_n", type=int, default=16384)
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="output")
    return ap


def config_from_args(ns) -> JobConfig:
    d = vars(ns)
    cfg = JobConfig(command=d["command"])
    for k in ("action", "method", "input", "other", "output", "grid", "seed", "n", "min_n", "max_n",
              "reps", "windows"):
        if d.get(k) is not None:
            setattr(cfg, k, d[k])
    if "p" in d:
        cfg.pqr = (d["p"], d["q"], d["r"])
    return cfg


def _fail(code, exc):
    err = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    step = getattr(exc, "step", None)
    if step is not None:
        err["step"] = step
    print(json.dumps(err), file=sys.stderr)
    return code


def main(argv=None) -> int:
    level = os.environ.get("NLFFT_LOG", "error").upper()
    logging.basicConfig(level=getattr(logging, level, logging.ERROR), stream=sys.stderr)
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        log.info("running %s", cfg)
        return run(cfg)
    except InvalidInput as e:
        return _fail(EXIT_INVALID, e)
    except NumericalFailure as e:
        return _fail(EXIT_NUMERIC, e)
    except OSError as e:
        return _fail(EXIT_IO, e)


if __name__ == "__main__":
    sys.exit(main())
