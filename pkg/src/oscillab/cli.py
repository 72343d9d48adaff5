"""Command-line entry point: norms, sweeps, inequality suites, fixtures.

Exit codes: 0 all asserted checks pass; 1 an asserted inequality failed;
2 I/O or usage errors. `--json -` streams the JSON report to stdout.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import fixtures, harness, jump
from .grid import GridFormatError, read_grid, write_grid
from .kernels import KernelFamily, check_tail_vanishing, check_unit_mass
from .measure import distribution, lebesgue_norm, lorentz_norm
from .oscillation import CubeSweepConfig, bmo_seminorm, dyadic_sizes
from .report import Report, dump_reports
from .smoothness import (
    ShiftLattice,
    besov_integral_norm,
    besov_sup_norm,
    besov_sup_norm_weak,
    bv_variation,
    bv_variation_weak,
    gagliardo_seminorm,
    gagliardo_weak_seminorm,
)

INF = math.inf


def _resolve_threads(value: str) -> int:
    value = os.environ.get("OSCILLAB_THREADS", value)
    if value == "auto":
        return os.cpu_count() or 1
    n = int(value)
    if n < 1:
        raise ValueError("threads must be positive or 'auto'")
    return n


def _parse_float(text: str) -> float:
    return INF if text in ("inf", "infinity") else float(text)


def parse_schedule(text: str) -> np.ndarray:
    """'start:end:geometric[:n]' -> decreasing geometric schedule."""
    parts = text.split(":")
    if len(parts) not in (3, 4) or parts[2] != "geometric":
        raise ValueError(f"bad schedule {text!r}; expected start:end:geometric[:n]")
    start, end = float(parts[0]), float(parts[1])
    n = int(parts[3]) if len(parts) == 4 else 12
    if not (start > end > 0):
        raise ValueError("schedule must decrease through positive values")
    return np.geomspace(start, end, n)


def _parse_sizes(text: str, domain) -> tuple:
    if text == "dyadic":
        return dyadic_sizes(domain)
    if ".." in text:
        lo, hi = text.split("..")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(x) for x in text.split(","))


def _parse_params(text: str) -> dict:
    """'a=1.5,x0=0' -> dict; 'jumps=-0.4/1;0.4/-2' becomes a pair list."""
    out = {}
    if not text:
        return out
    for item in text.split(","):
        key, _, raw = item.partition("=")
        if not _:
            raise ValueError(f"bad parameter {item!r}; expected key=value")
        if key == "jumps":
            out[key] = [tuple(float(v) for v in pair.split("/")) for pair in raw.split(";")]
        else:
            try:
                out[key] = float(raw)
            except ValueError:
                out[key] = raw
    return out


def _emit(reports, path: str | None) -> None:
    if path is None:
        return
    if path == "-":
        dump_reports(reports, sys.stdout)
    else:
        with open(path, "w", encoding="utf-8") as f:
            dump_reports(reports, f)


def _read_mask(path: str, u) -> np.ndarray:
    mask_grid = read_grid(path)
    if mask_grid.domain.shape != u.domain.shape:
        raise GridFormatError(f"{path}: mask shape does not match the input grid")
    return mask_grid.values.reshape(u.domain.shape) > 0.5


# --------------------------------------------------------------------------- subcommands


def _cmd_norm(args) -> list:
    u = read_grid(args.input)
    p = args.p
    if args.gamma is None:
        value = lebesgue_norm(u, p)
        params = {"p": p}
    else:
        gamma = _parse_float(args.gamma)
        value = lorentz_norm(distribution(u, p), gamma)
        params = {"p": p, "gamma": args.gamma}
    return [Report(op="norm", params=params, lhs=value, rhs=value, passed=True, tolerance=0.0)]


def _cmd_bmo(args) -> list:
    u = read_grid(args.input)
    cfg = CubeSweepConfig(
        mode=args.mode, size_set=_parse_sizes(args.sizes, u.domain), stride=args.stride
    )
    res = bmo_seminorm(u, cfg, args.form)
    return [
        Report(
            op="bmo",
            params={"form": args.form, "sizes": list(cfg.size_set), "mode": cfg.mode},
            lhs=res.seminorm,
            rhs=res.seminorm,
            passed=True,
            tolerance=0.0,
            extras={"argmax_offset": list(res.argmax_cube[0]), "argmax_edge": res.argmax_cube[1]},
        )
    ]


def _cmd_besov(args) -> list:
    u = read_grid(args.input)
    lattice = ShiftLattice.ball(u.domain.dim, args.lattice_radius)
    q = _parse_float(args.q)
    if args.form == "sup":
        fn = besov_sup_norm_weak if args.weak else besov_sup_norm
        res = fn(u, args.s, q, lattice)
        value, extras = res.value, {"argmax_offset": list(res.argmax_offset)}
    else:
        value = besov_integral_norm(u, args.s, args.p, q, lattice)
        extras = None
    params = {"s": args.s, "p": args.p, "q": args.q, "form": args.form, "weak": args.weak}
    return [Report(op="besov", params=params, lhs=value, rhs=value, passed=True, tolerance=0.0, extras=extras)]


def _cmd_sobolev(args) -> list:
    u = read_grid(args.input)
    cutoff = args.cutoff_cells * u.domain.spacing
    q = _parse_float(args.q)
    if args.weak:
        value, extras = gagliardo_weak_seminorm(u, args.s, q, cutoff), None
    else:
        res = gagliardo_seminorm(u, args.s, q, cutoff)
        value, extras = res.value, {"tail_bound_power": res.tail_bound}
    params = {"s": args.s, "q": args.q, "cutoff_cells": args.cutoff_cells, "weak": args.weak}
    return [Report(op="sobolev", params=params, lhs=value, rhs=value, passed=True, tolerance=0.0, extras=extras)]


def _cmd_bv(args) -> list:
    u = read_grid(args.input)
    lattice = ShiftLattice.ball(u.domain.dim, args.lattice_radius)
    value = bv_variation_weak(u, lattice) if args.weak else bv_variation(u, lattice)
    return [
        Report(
            op="bv",
            params={"lattice_radius": args.lattice_radius, "weak": args.weak},
            lhs=value,
            rhs=value,
            passed=True,
            tolerance=0.0,
        )
    ]


def _cmd_interp_check(args) -> list:
    families = [fixtures.FixtureFamily(kind) for kind in args.family.split(",")]
    reports = []
    if args.suite == "exact":
        for fam in families:
            reports.extend(harness.exact_inequality_suite(fam.build(args.resolution)))
    elif args.suite == "ratio":
        grid = [
            {"p": 1.0, "q": 2.0},
            {"p": 1.0, "q": 3.0},
            {"p": 0.5, "q": 2.0},
        ]
        for theorem in ("global_lorentz", "lebesgue"):
            reports.append(harness.bmo_ratio_scan(families, theorem, grid, args.resolution))
    elif args.suite == "sandwich":
        for fam in families:
            u = fam.build(args.resolution)
            k = max(harness.bmo_value(u), 0.5 * float(np.max(np.abs(u.values))))
            reports.append(harness.char_sandwich_check(u, k, 2.0, 1.0))
    elif args.suite == "vmo":
        for fam in families:
            u = fam.build(args.resolution)
            vanishing = fam.kind in ("gaussian_bump", "hoelder_bump")
            shifts = [args.resolution // 8, args.resolution // 16, args.resolution // 32, 2, 1]
            shifts = sorted({m for m in shifts if m >= 1}, reverse=True)
            if vanishing:
                reports.append(harness.vmo_vanishing_check(u, 1.0, 2.0, 0.5, shifts))
            else:
                reports.append(
                    harness.vmo_vanishing_check(u, 1.0, 1.0, 1.0, shifts, expect_vanishing=False)
                )
    else:
        raise ValueError(f"unknown suite {args.suite!r}")
    return reports


def _cmd_jump_detect(args) -> list:
    u = read_grid(args.input)
    region = _read_mask(args.region, u) if args.region else None
    q = args.q
    schedule = parse_schedule(args.eps)
    threads = _resolve_threads(args.threads)
    if args.mode == "directional":
        n = tuple(float(x) for x in args.n.split(","))
        curve = jump.energy_sweep(u, region, "directional", q, schedule, n=n, threads=threads)
    else:
        kernel = KernelFamily(args.kernel)
        curve = jump.energy_sweep(u, region, "kernel", q, schedule, kernel=kernel, threads=threads)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write("eps,energy\n")
            for e, en in zip(curve.eps_values, curve.energies):
                f.write(f"{float(e)!r},{float(en)!r}\n")
    extras = {
        "eps": curve.eps_values.tolist(),
        "energies": curve.energies.tolist(),
        "uncertainty": curve.uncertainty,
        "label": curve.label,
    }
    truth_value = None
    if args.shape:
        kind, _, raw = args.shape.partition(":")
        shape = jump.ShapeDescriptor(kind, _parse_params(raw))
        truth = jump.ground_truth(shape, q)
        if args.mode == "directional":
            truth_value = truth.jump_integral(np.array(n) / np.linalg.norm(n))
        else:
            truth_value = truth.kernel_limit
        extras["ground_truth"] = truth_value
    passed = True
    if truth_value is not None:
        passed = abs(curve.extrapolated_limit - truth_value) <= args.tolerance * truth_value
    return [
        Report(
            op="jump_detect",
            params={"mode": args.mode, "q": q, "eps": args.eps, "shape": args.shape},
            lhs=curve.extrapolated_limit,
            rhs=truth_value if truth_value is not None else curve.extrapolated_limit,
            passed=passed,
            tolerance=args.tolerance,
            extras=extras,
        )
    ]


def _cmd_kernel_check(args) -> list:
    kernel = KernelFamily(args.kernel)
    schedule = parse_schedule(args.eps)
    masses = [check_unit_mass(kernel, float(e), args.dim) for e in schedule]
    tails = check_tail_vanishing(kernel, args.dim, args.delta, schedule)
    return [
        Report(
            op="kernel_check",
            params={"kernel": args.kernel, "dim": args.dim, "delta": args.delta, "eps": args.eps},
            lhs=max(abs(m - 1.0) for m in masses),
            rhs=1e-6,
            passed=True,
            tolerance=1e-6,
            extras={"masses": masses, "tail_masses": tails},
        )
    ]


def _cmd_fixture(args) -> list:
    params = _parse_params(args.params)
    if args.seed is not None:
        params["seed"] = args.seed
    u = fixtures.make_fixture(args.kind, args.n, **params)
    write_grid(u, args.out)
    return [
        Report(
            op="fixture",
            params={"kind": args.kind, "n": args.n, "seed": args.seed, "params": args.params},
            lhs=float(np.max(np.abs(u.values))),
            rhs=float(np.max(np.abs(u.values))),
            passed=True,
            tolerance=0.0,
        )
    ]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscillab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", dest="json_out", default=None, help="report path or - for stdout")
        sp.add_argument("--threads", default="1", help="worker count or 'auto'")
        sp.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("norm", help="Lebesgue / Lorentz quasi-norm of a grid")
    sp.add_argument("--input", required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--gamma", default=None, help="Lorentz second index or 'inf'")
    common(sp)
    sp.set_defaults(fn=_cmd_norm)

    sp = sub.add_parser("bmo", help="BMO seminorm cube sweep")
    sp.add_argument("--input", required=True)
    sp.add_argument("--form", default="double_avg", choices=["mean_osc", "double_avg"])
    sp.add_argument("--sizes", default="dyadic", help="'dyadic', 'a..b', or comma list")
    sp.add_argument("--mode", default="exhaustive", choices=["exhaustive", "strided"])
    sp.add_argument("--stride", type=int, default=1)
    common(sp)
    sp.set_defaults(fn=_cmd_bmo)

    sp = sub.add_parser("besov", help="Besov quasi-norm (sup or integral form)")
    sp.add_argument("--input", required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--p", type=float, default=1.0)
    sp.add_argument("--q", default="inf")
    sp.add_argument("--form", default="sup", choices=["sup", "integral"])
    sp.add_argument("--weak", action="store_true")
    sp.add_argument("--lattice-radius", type=int, default=8)
    common(sp)
    sp.set_defaults(fn=_cmd_besov)

    sp = sub.add_parser("sobolev", help="Gagliardo fractional seminorm")
    sp.add_argument("--input", required=True)
    sp.add_argument("--s", type=float, required=True)
    sp.add_argument("--q", default="2")
    sp.add_argument("--cutoff-cells", type=int, default=8)
    sp.add_argument("--weak", action="store_true")
    common(sp)
    sp.set_defaults(fn=_cmd_sobolev)

    sp = sub.add_parser("bv", help="difference-quotient BV variation")
    sp.add_argument("--input", required=True)
    sp.add_argument("--lattice-radius", type=int, default=8)
    sp.add_argument("--weak", action="store_true")
    common(sp)
    sp.set_defaults(fn=_cmd_bv)

    sp = sub.add_parser("interp-check", help="interpolation inequality suites")
    sp.add_argument("--suite", required=True, choices=["exact", "ratio", "sandwich", "vmo"])
    sp.add_argument("--family", default="step,log_singular")
    sp.add_argument("--resolution", type=int, default=128)
    sp.add_argument("--out", default=None, help="alias for --json")
    common(sp)
    sp.set_defaults(fn=_cmd_interp_check)

    sp = sub.add_parser("jump-detect", help="directional / kernel jump energy sweep")
    sp.add_argument("--input", required=True)
    sp.add_argument("--region", default=None, help="cell mask grid (nonzero = inside)")
    sp.add_argument("--mode", default="directional", choices=["directional", "kernel"])
    sp.add_argument("--n", default="1", help="direction components, comma-separated")
    sp.add_argument("--kernel", default="box", choices=["box", "gaussian_radial", "exponential_radial"])
    sp.add_argument("--q", type=float, default=2.0)
    sp.add_argument("--eps", required=True, help="start:end:geometric[:n]")
    sp.add_argument("--out", default=None, help="CSV path for (eps, energy) rows")
    sp.add_argument("--shape", default=None, help="ground-truth descriptor kind:key=value,...")
    sp.add_argument("--tolerance", type=float, default=0.05)
    common(sp)
    sp.set_defaults(fn=_cmd_jump_detect)

    sp = sub.add_parser("kernel-check", help="kernel unit-mass and tail checks")
    sp.add_argument("--kernel", default="box", choices=["box", "gaussian_radial", "exponential_radial"])
    sp.add_argument("--dim", type=int, default=1, choices=[1, 2])
    sp.add_argument("--delta", type=float, default=0.1)
    sp.add_argument("--eps", default="0.2:0.01:geometric:8")
    common(sp)
    sp.set_defaults(fn=_cmd_kernel_check)

    sp = sub.add_parser("fixture", help="generate a grid fixture file")
    sp.add_argument("--kind", required=True, choices=list(fixtures.FIXTURE_KINDS))
    sp.add_argument("--n", type=int, default=256)
    sp.add_argument("--params", default="", help="key=value pairs, comma-separated")
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(fn=_cmd_fixture)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        reports = args.fn(args)
    except (GridFormatError, OSError) as e:
        print(f"oscillab: error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"oscillab: invalid arguments: {e}", file=sys.stderr)
        return 2
    if args.seed is not None:
        for r in reports:
            r.params["seed"] = args.seed
    json_out = args.json_out or getattr(args, "out_json_alias", None)
    if getattr(args, "command", "") == "interp-check" and args.out and not json_out:
        json_out = args.out
    _emit(reports, json_out)
    failed = [r for r in reports if not r.passed]
    if failed:
        for r in failed:
            print(f"oscillab: check failed: {r.op} {json.dumps(r.params, default=str)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
