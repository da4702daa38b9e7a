"""Command line front end: spectra tables, verification suites and scans.

    grasstrans spectrum --field C --n 5 --r 2 --nu 1 --kind cosine --deg 6 --verify quad
    grasstrans verify bs-cos --r 2 --a 1 --b2 0 --iota 0 --delta 2 --trials 20
    grasstrans stein --field C --r 2 --deg 12 --grid 99
    grasstrans branching --field H --alpha 1 --r 2 --deg 8

Exit status is 0 iff every requested check passes; on failure (or invalid
parameters) a JSON object describing the problem goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass
from dataclasses import field as dc_field
from fractions import Fraction

import numpy as np

from . import cherednik, grassgeo, jacobi, spectra
from .rootsystem import (
    FIELD_DIM,
    even_dominant_weights,
    grassmannian_preset,
    is_generic,
    root_system,
)

BS_TOL = 1e-8
QUAD_TOL = 1e-6
KERNEL_TOL = 1e-9


class CheckFailed(Exception):
    def __init__(self, message, details=None):
        super().__init__(message)
        self.details = details or {}


def fmt(x) -> str:
    """17 significant digits for floats, num/den for rationals."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, (tuple, list)):
        return " ".join(fmt(v) for v in x)
    if x is None:
        return ""
    return str(x)


def jsonable(x):
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, float):
        return float(format(x, ".17g")) if math.isfinite(x) else fmt(x)
    if isinstance(x, (tuple, list)):
        return [jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return jsonable(float(x))
    return x


@dataclass
class RunConfig:
    command: str
    suite: str | None = None
    field: str = "R"
    n: int | None = None
    r: int = 1
    nu: str = "1"
    kind: str = "cosine"
    deg: int = 4
    verify: str | None = None
    order: int = 48
    a: str = "1"
    b2: str = "0"
    iota: str = "0"
    delta: str = "2"
    trials: int = 20
    samples: int = 1_000_000
    seed: int = 0
    t: str = "0.25"
    grid: int = 99
    alpha: int = 1
    format: str = "csv"
    out: str | None = None
    extra: dict = dc_field(default_factory=dict)


# ------------------------------------------------------------------ output


def emit_table(cfg: RunConfig, columns: list[str], rows: list[dict], meta: dict | None = None) -> str:
    if cfg.format == "json":
        doc = {"columns": columns, "rows": [jsonable({c: r.get(c) for c in columns}) for r in rows]}
        if meta:
            doc["meta"] = jsonable(meta)
        text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([fmt(r.get(c)) for c in columns])
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def emit_report(cfg: RunConfig, report: dict) -> None:
    text = json.dumps(jsonable(report), indent=1, sort_keys=True) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------------ helpers


def _preset(cfg: RunConfig):
    if cfg.field not in FIELD_DIM:
        raise ValueError(f"--field must be R, C or H (got {cfg.field})")
    if cfg.n is None:
        raise ValueError("--n is required")
    return grassmannian_preset(cfg.field, cfg.n, cfg.r)


def _custom_rs(cfg: RunConfig):
    return root_system(cfg.r, Fraction(cfg.a), Fraction(cfg.b2), Fraction(cfg.iota))


def _random_generic_points(r: int, trials: int, seed: int) -> list[np.ndarray]:
    rng = grassgeo.make_rng(seed, 1)
    pts = []
    while len(pts) < trials:
        t = np.sort(rng.uniform(0.05, np.pi / 2 - 0.05, r))[::-1]
        if is_generic(t, tol=0.05):
            pts.append(t)
    return pts


# ------------------------------------------------------------------ commands


def cmd_spectrum(cfg: RunConfig) -> int:
    rs = _preset(cfg)
    nu = spectra.as_number(cfg.nu)
    if cfg.kind not in ("cosine", "sine"):
        raise ValueError("--kind must be cosine or sine")
    fn = spectra.cosine_symbol if cfg.kind == "cosine" else spectra.sine_symbol
    cols = ["kind", "field", "n", "r", "nu", "m", "value", "ratio", "exact_zero", "zero_witness_factor"]
    if cfg.verify == "quad":
        cols += ["quad", "rel_err"]
    rows, worst = [], 0.0
    for m in even_dominant_weights(rs.rank, cfg.deg):
        sym = fn(rs, nu, m)
        row = {
            "kind": cfg.kind,
            "field": cfg.field,
            "n": cfg.n,
            "r": cfg.r,
            "nu": nu,
            "m": m,
            "value": sym.value,
            "ratio": sym.ratio if isinstance(sym.ratio, Fraction) else float(sym.ratio),
            "exact_zero": sym.is_exact_zero,
            "zero_witness_factor": sym.zero_witness,
        }
        if cfg.verify == "quad":
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", spectra.QuadratureWarning)
                q = spectra.quadrature_symbol(rs, nu, cfg.kind[:3], m, order=cfg.order)
            scale = abs(sym.value) if not sym.is_exact_zero else abs(sym.norm)
            err = abs(q - sym.value) / scale
            worst = max(worst, err)
            row.update(quad=q, rel_err=err)
        rows.append(row)
    emit_table(cfg, cols, rows)
    if cfg.verify == "quad" and worst > QUAD_TOL:
        raise CheckFailed("quadrature disagrees with closed form", {"max_rel_err": worst})
    return 0


def _suite_bs(cfg: RunConfig, kind: str) -> dict:
    rs = _custom_rs(cfg)
    delta = float(Fraction(cfg.delta))
    const = abs(float(cherednik.bs_constant(rs, delta, kind)))
    worst = 0.0
    for t in _random_generic_points(rs.rank, cfg.trials, cfg.seed):
        res = cherednik.bs_chain(rs, delta, t, kind).residual / const
        worst = max(worst, res)
    return {"root_system": str(rs), "delta": delta, "trials": cfg.trials, "max_residual": worst, "passed": worst <= BS_TOL}


def _suite_factors(cfg: RunConfig) -> dict:
    rs = _custom_rs(cfg)
    delta = float(Fraction(cfg.delta))
    worst = 0.0
    for t in _random_generic_points(rs.rank, cfg.trials, cfg.seed):
        for j in range(1, rs.rank + 1):
            worst = max(worst, max(cherednik.verify_factor_identities(rs, delta, j, t).values()))
    return {"root_system": str(rs), "delta": delta, "trials": cfg.trials, "max_residual": worst, "passed": worst <= BS_TOL}


def _suite_eigen(cfg: RunConfig) -> dict:
    rs = _preset(cfg) if cfg.n is not None else _custom_rs(cfg)
    nus = [Fraction(x) for x in cfg.extra.get("nus", ["0", "1", "3/2"])]
    checked, failures = 0, []
    for m in even_dominant_weights(rs.rank, cfg.deg):
        phi = jacobi.jacobi_polynomial(rs, m).to_laurent()
        for nu in nus:
            lhs = cherednik.apply_M(rs, 2 * nu + 2, phi)
            rhs = phi.scale(cherednik.eigenvalue_of_M(rs, nu, m))
            checked += 1
            if lhs != rhs:
                failures.append({"m": list(m), "nu": fmt(nu)})
    return {"root_system": str(rs), "checked": checked, "failures": failures, "passed": not failures}


def _suite_mc(cfg: RunConfig) -> dict:
    rs = _preset(cfg)
    nus = [spectra.as_number(cfg.nu)]
    report = grassgeo.mc_grid(cfg.field, cfg.n, cfg.r, nus, cfg.deg, cfg.samples, cfg.seed)
    report["root_system"] = str(rs)
    return report


def _suite_ks(cfg: RunConfig) -> dict:
    t = float(Fraction(cfg.t))
    rep = grassgeo.knapp_stein_kernel_check(cfg.field, cfg.r, t, min(cfg.samples, 100_000), cfg.seed)
    worst = max(rep["sin"], rep["delta"])
    return {"field": cfg.field, "r": cfg.r, "t": t, **rep, "passed": worst <= KERNEL_TOL}


SUITES = {
    "bs-cos": lambda cfg: _suite_bs(cfg, "cos"),
    "bs-sin": lambda cfg: _suite_bs(cfg, "sin"),
    "factors": _suite_factors,
    "eigen": _suite_eigen,
    "mc": _suite_mc,
    "ks-kernel": _suite_ks,
}


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.suite not in SUITES:
        raise ValueError(f"unknown suite {cfg.suite!r}; choose from {sorted(SUITES)}")
    report = SUITES[cfg.suite](cfg)
    report["suite"] = cfg.suite
    emit_report(cfg, report)
    if not report["passed"]:
        raise CheckFailed(f"suite {cfg.suite} failed", {k: v for k, v in report.items() if k != "cells"})
    return 0


def cmd_stein(cfg: RunConfig) -> int:
    if cfg.field not in FIELD_DIM:
        raise ValueError(f"--field must be R, C or H (got {cfg.field})")
    rows, failed = [], []
    for k in range(1, cfg.grid + 1):
        t = Fraction(k, cfg.grid + 1)
        rep = spectra.stein_positivity_scan(cfg.field, cfg.r, t, cfg.deg)
        status = {True: "PASS", False: "FAIL", None: "REPORT"}[rep.passed]
        if rep.passed is False:
            failed.append(fmt(t))
        rows.append(
            {
                "t": t,
                "nu": rep.nu,
                "min_normalized_symbol": rep.min_ratio,
                "argmin": rep.argmin,
                "witness": rep.witness,
                "status": status,
            }
        )
    emit_table(cfg, ["t", "nu", "min_normalized_symbol", "argmin", "witness", "status"], rows)
    if failed:
        raise CheckFailed("positivity fails inside 0 < t < 1/2", {"t": failed})
    return 0


def cmd_branching(cfg: RunConfig) -> int:
    if cfg.field not in ("R", "H"):
        raise ValueError("branching needs --field R or H")
    weights = spectra.branching_list(cfg.field, cfg.alpha, cfg.r, cfg.deg)
    nu = Fraction(cfg.alpha, 2) if cfg.field == "R" else Fraction(cfg.alpha)
    rows = [{"field": cfg.field, "alpha": cfg.alpha, "nu": nu, "m": m} for m in weights]
    emit_table(cfg, ["field", "alpha", "nu", "m"], rows)
    return 0


COMMANDS = {"spectrum": cmd_spectrum, "verify": cmd_verify, "stein": cmd_stein, "branching": cmd_branching}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="grasstrans", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=["csv", "json"], default="csv")
        sp.add_argument("--out")
        sp.add_argument("--field", default="R")
        sp.add_argument("--r", type=int, default=1)
        sp.add_argument("--deg", type=int, default=4)

    sp = sub.add_parser("spectrum", help="closed-form cosine/sine spectra")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--nu", default="1")
    sp.add_argument("--kind", default="cosine", choices=["cosine", "sine"])
    sp.add_argument("--verify", choices=["quad"])
    sp.add_argument("--order", type=int, default=48)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=sorted(SUITES))
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--nu", default="1")
    sp.add_argument("--a", default="1")
    sp.add_argument("--b2", default="0")
    sp.add_argument("--iota", default="0")
    sp.add_argument("--delta", default="2")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--t", default="0.25")

    sp = sub.add_parser("stein", help="positivity scan of the Knapp-Stein spectrum")
    common(sp)
    sp.add_argument("--grid", type=int, default=99)

    sp = sub.add_parser("branching", help="weights in the branching of H_alpha")
    common(sp)
    sp.add_argument("--alpha", type=int, default=1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    known = set(RunConfig.__dataclass_fields__)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in known})
    try:
        if cfg.r < 1:
            raise ValueError("--r must be >= 1")
        if cfg.deg < 0:
            raise ValueError("--deg must be >= 0")
        return COMMANDS[cfg.command](cfg)
    except CheckFailed as exc:
        err = {"status": "fail", "command": cfg.command, "message": str(exc), "details": exc.details}
        sys.stderr.write(json.dumps(jsonable(err), sort_keys=True) + "\n")
        return 1
    except (ValueError, ArithmeticError) as exc:
        err = {"status": "error", "command": cfg.command, "message": str(exc)}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
