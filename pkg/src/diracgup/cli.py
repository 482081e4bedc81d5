"""Command-line front end.

    diracgup classify --rho 5 --rho-star 20
    diracgup levels --rho 25 --rho-star 20 --n-max 4
    diracgup wavefunction --rho 5 --rho-star 20 --n 1 --m 0
    diracgup qpt --mass 1 --omega 1 --b0 3 --beta 0.1 --n-max 10
    diracgup figure1 --rho-min -30 --rho-max 30 --step 0.05 --curves 6
    diracgup verify --rho 5 --rho-star 20 --m -2..3 --n-max 3

Exit codes: 0 success, 1 physics-domain error (or a failed verification),
2 usage error.  ``DIRACGUP_THREADS`` caps the worker threads of ``verify``.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from .errors import DiracGUPError
from .oracle import FAIL, verify_spectrum
from .params import DimensionlessConfig, PhysicalConfig, dimensionless_from_physical
from .qpt import critical_fields, critical_rhos, figure1_dataset, rho_grid
from .spectrum import enumerate_levels, table_classes
from .wavefunction import assemble_spinor, default_p_grid, normalized, profile_csv

THREADS_ENV = "DIRACGUP_THREADS"


def _fmt(x) -> str:
    return format(float(x), ".15g")


def _branch(text: str) -> int:
    table = {"+": 1, "1": 1, "+1": 1, "-": -1, "-1": -1}
    if text not in table:
        raise argparse.ArgumentTypeError(f"branch must be + or -, got {text!r}")
    return table[text]


def _m_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or a range a..b, got {text!r}") from None


def _ladder(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_params(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("dimensionless parameters")
    g.add_argument("--rho", type=float)
    g.add_argument("--rho-star", type=float)
    g.add_argument("--boundary-tol", type=float, default=0.0)
    ph = p.add_argument_group("physical parameters (alternative to --rho/--rho-star)")
    for name in ("mass", "omega", "b0", "beta"):
        ph.add_argument(f"--{name}", type=Fraction)
    for name in ("hbar", "c", "e"):
        ph.add_argument(f"--{name}", type=Fraction, default=Fraction(1))


def _add_output(p: argparse.ArgumentParser, formats=("csv", "json")) -> None:
    p.add_argument("--format", choices=formats, default=formats[0])
    p.add_argument("--output", "-o", help="write here instead of stdout")


def _physical(args) -> PhysicalConfig | None:
    vals = [args.mass, args.omega, args.b0, args.beta]
    if all(v is None for v in vals):
        return None
    if any(v is None for v in vals):
        raise _Usage("physical parameters need all of --mass, --omega, --b0, --beta")
    return PhysicalConfig(args.mass, args.omega, args.b0, args.beta, args.hbar, args.c, args.e)


class _Usage(Exception):
    pass


def _config(args) -> DimensionlessConfig:
    cfg = _physical(args)
    if cfg is not None:
        if args.rho is not None:
            raise _Usage("give either --rho/--rho-star or the physical set, not both")
        return dimensionless_from_physical(cfg, args.boundary_tol)
    if args.rho is None or args.rho_star is None:
        raise _Usage("need --rho and --rho-star, or --mass --omega --b0 --beta")
    return DimensionlessConfig(args.rho, args.rho_star, args.boundary_tol)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------


def cmd_classify(args) -> int:
    d = _config(args)
    rec = {
        "rho": d.rho,
        "rho_star": d.rho_star,
        "regime": d.regime.display,
        "tau": d.tau,
        "critical_rhos": [[cp.index, cp.rho, cp.kind] for cp in critical_rhos(d.rho_star, args.n_max)],
    }
    if args.format == "json":
        _emit(args, json.dumps(rec) + "\n")
    else:
        lines = [f"regime {rec['regime']}", f"tau {_fmt(rec['tau'])}"]
        lines += [f"rho_{i} {_fmt(r)} {kind}" for i, r, kind in rec["critical_rhos"]]
        _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_levels(args) -> int:
    d = _config(args)
    levels = enumerate_levels(d, args.branch, args.n_max)
    if args.format == "json":
        _emit(args, json.dumps([L.to_dict() for L in levels]) + "\n")
        return 0
    rows = [["energy", "degeneracy", "persistence", "labels"]]
    for L in levels:
        rows.append([_fmt(L.energy), L.degeneracy, L.persistence, ";".join(f"{f}:{N}" for f, N in L.labels)])
    _emit(args, _csv(rows))
    return 0


def cmd_wavefunction(args) -> int:
    d = _config(args)
    state = assemble_spinor(args.n, args.m, d, args.branch)
    if args.normalize:
        state = normalized(state)
    if args.p_max is None:
        p = np.concatenate([[0.0], default_p_grid(d, args.points - 1)])
    else:
        p = np.linspace(0.0, args.p_max, args.points)
    _emit(args, profile_csv(state, p, args.theta))
    return 0


def cmd_qpt(args) -> int:
    cfg = _physical(args)
    if cfg is None:
        if args.rho_star is None:
            raise _Usage("qpt needs --rho-star or the physical set --mass --omega --b0 --beta")
        rows = [["N", "rho_N", "kind"]]
        for sign in (1, -1):
            for cp in critical_rhos(args.rho_star, args.n_max):
                if (cp.rho > 0) == (sign > 0):
                    rows.append([cp.index, _fmt(cp.rho), cp.kind])
        _emit(args, _csv(rows) if args.format == "csv" else json.dumps(rows[1:]) + "\n")
        return 0
    signs = (1, -1) if args.both_signs else (1,)
    fields = critical_fields(cfg, args.n_max, signs)
    if args.format == "json":
        recs = [{"N": f.index, "sign": f.sign, "b_cr_n": str(f.b_cr_n), "b_cr": str(f.b_cr)} for f in fields]
        _emit(args, json.dumps(recs) + "\n")
        return 0
    rows = [["N", "sign", "B_cr_N", "B_cr"]] + [[f.index, f.sign, _fmt(f.b_cr_n), _fmt(f.b_cr)] for f in fields]
    _emit(args, _csv(rows))
    return 0


def cmd_figure1(args) -> int:
    if args.step <= 0 or args.rho_max <= args.rho_min:
        raise _Usage("need --step > 0 and --rho-max > --rho-min")
    grid = rho_grid(args.rho_min, args.rho_max, args.step)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        ds = figure1_dataset(args.rho_star, grid, args.curves, args.branch)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _emit(args, ds.to_csv() if args.format == "csv" else ds.to_json() + "\n")
    return 0


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return min(8, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise _Usage(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise _Usage(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


def cmd_verify(args) -> int:
    d = _config(args)
    comps = (1, 2) if args.component is None else (args.component,)
    jobs = [(m, c) for m in args.m for c in comps if table_classes(m, c, d)]
    skipped = [(m, c) for m in args.m for c in comps if not table_classes(m, c, d)]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        reports = list(
            pool.map(lambda job: verify_spectrum(job[0], job[1], d, args.n_max, args.ladder, args.tol), jobs)
        )
    lines = [r.to_json() for r in reports]
    _emit(args, "\n".join(lines) + ("\n" if lines else ""))
    for m, c in skipped:
        print(f"note: m={m} component {c} has no admissible class in this regime", file=sys.stderr)
    counts = {}
    for r in reports:
        counts[r.status] = counts.get(r.status, 0) + 1
    print("summary " + " ".join(f"{k}={v}" for k, v in sorted(counts.items())), file=sys.stderr)
    return 1 if any(r.status == FAIL for r in reports) else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diracgup", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="regime, tau and the critical rho list")
    _add_params(p)
    p.add_argument("--n-max", type=int, default=10)
    _add_output(p, ("text", "json"))
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("levels", help="distinct levels with degeneracy and provenance")
    _add_params(p)
    p.add_argument("--branch", type=_branch, default=1)
    p.add_argument("--n-max", type=int, default=6)
    _add_output(p)
    p.set_defaults(func=cmd_levels)

    p = sub.add_parser("wavefunction", help="spinor profile CSV")
    _add_params(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--branch", type=_branch, default=1)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--p-max", type=float, help="uniform grid on [0, p_max]; default spreads points over all p")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--normalize", action="store_true")
    _add_output(p, ("csv",))
    p.set_defaults(func=cmd_wavefunction)

    p = sub.add_parser("qpt", help="critical fields B_cr^N (or critical rho values)")
    _add_params(p)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--both-signs", action="store_true", help="include the rho < 0 family of fields")
    _add_output(p)
    p.set_defaults(func=cmd_qpt)

    p = sub.add_parser("figure1", help="lowest level curves across a rho grid")
    p.add_argument("--rho-star", type=float, default=20.0)
    p.add_argument("--rho-min", type=float, default=-30.0)
    p.add_argument("--rho-max", type=float, default=30.0)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--curves", type=int, default=6)
    p.add_argument("--branch", type=_branch, default=1)
    _add_output(p)
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("verify", help="finite-difference certification of k_n")
    _add_params(p)
    p.add_argument("--m", type=_m_range, default=_m_range("-5..5"))
    p.add_argument("--component", type=int, choices=(1, 2))
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--ladder", type=_ladder, default=(512, 1024, 2048))
    p.add_argument("--tol", type=float, default=1e-4)
    _add_output(p, ("json",))
    p.set_defaults(func=cmd_verify)
    return ap


def _glue_negative_ranges(argv: list[str]) -> list[str]:
    # argparse would read "-2..3" as an option; bind it to the preceding --m
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--m":
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append(f"--m={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative_ranges(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _Usage as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except DiracGUPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
