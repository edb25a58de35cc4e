"""Command-line interface: Haar scans, family sweeps, verification suites,
and frontier extraction, emitting versioned CSV.

Exit codes: 0 success, 1 claim violation / suite failure, 2 precondition or
I/O error, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import math
import multiprocessing
import os
import sys

import numpy as np

from . import bell, complementarity, discord, engine, entanglement, qmath, states
from .errors import (
    MalformedStateError,
    ParameterError,
    UnsupportedClosedFormError,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PRECONDITION = 2
EXIT_USAGE = 64

MEASURE_CHOICES = ("tangle", "ggm", "bell", "dms")
FRONTIER_MEASURES = ("tangle", "ggm", "dms")

_SCAN_BASE_COLUMNS = (
    "index",
    "tau",
    "ggm",
    "ggm_split",
    "m_ab",
    "m_bc",
    "m_ac",
    "b_max",
    "violating_pair",
    "tau_slack",
    "ggm_slack",
)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _state_repr(psi: np.ndarray) -> str:
    """Full-precision (re, im) amplitude list, basis order |000>..|111>."""
    return "[" + ", ".join(f"({_fmt(z.real)}, {_fmt(z.imag)})" for z in psi) + "]"


def _write_header(fh, columns) -> csv.writer:
    fh.write(f"# schema_version={SCHEMA_VERSION}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    return writer


def _map_ordered(fn, tasks, workers: int):
    """Apply fn over tasks, in order, optionally across forked workers."""
    if workers <= 1:
        yield from map(fn, tasks)
        return
    with multiprocessing.get_context("fork").Pool(workers) as pool:
        yield from pool.imap(fn, tasks)


def _scan_chunk(task):
    seed, start, count, want_dms, convention, tol = task
    amps = states.haar_block(seed, start, count)
    meas = engine.measures_block(amps)
    if want_dms:
        dvals = [
            discord.dms(amps[i], convention=convention).delta_d for i in range(count)
        ]
    rows = []
    violations = []
    for i in range(count):
        row = [
            str(start + i),
            _fmt(meas["tau"][i]),
            _fmt(meas["ggm"][i]),
            engine.SPLIT_LABELS[int(meas["split_idx"][i])],
        ]
        if want_dms:
            row.append(_fmt(dvals[i]))
        row.extend(
            (
                _fmt(meas["m_ab"][i]),
                _fmt(meas["m_bc"][i]),
                _fmt(meas["m_ac"][i]),
                _fmt(meas["b_max"][i]),
                engine.VIOLATION_LABELS[int(meas["viol_idx"][i])],
                _fmt(meas["tau_slack"][i]),
                _fmt(meas["ggm_slack"][i]),
            )
        )
        rows.append(row)
        if meas["tau_slack"][i] < -tol or meas["ggm_slack"][i] < -tol:
            violations.append((start + i, row, _state_repr(amps[i])))
    return start, rows, violations


def cmd_scan(args) -> int:
    measures = set(args.measures.split(","))
    unknown = measures - set(MEASURE_CHOICES)
    if unknown:
        args.parser.error(f"unknown measures: {sorted(unknown)}")
    want_dms = "dms" in measures
    columns = list(_SCAN_BASE_COLUMNS)
    if want_dms:
        columns.insert(4, "dms")

    chunk = complementarity.DEFAULT_CHUNK
    tasks = [
        (args.seed, start, min(chunk, args.samples - start), want_dms,
         args.dms_convention, args.tol)
        for start in range(0, args.samples, chunk)
    ]
    with open(args.out, "w", newline="") as fh:
        writer = _write_header(fh, columns)
        for start, rows, violations in _map_ordered(_scan_chunk, tasks, args.workers):
            if violations:
                vidx, vrow, vamp = violations[0]
                writer.writerows(rows[: vidx - start + 1])
                print(
                    f"complementarity violation at sample {vidx}: {','.join(vrow)}",
                    file=sys.stderr,
                )
                print(f"state amplitudes (re, im): {vamp}", file=sys.stderr)
                return EXIT_VIOLATION
            writer.writerows(rows)
    return EXIT_OK


def _measure_cells(numeric: float, closed) -> list[str]:
    """numeric, closed, |difference| cells; closed None marks no closed form."""
    if closed is None:
        return [_fmt(numeric), "", ""]
    return [_fmt(numeric), _fmt(closed), _fmt(abs(numeric - closed))]


def _family_common_cells(params, psi):
    tau = entanglement.tangle_pure(psi).tau
    tau_c = entanglement.tangle_closed(params)
    g = entanglement.ggm(psi).ggm
    g_c = entanglement.ggm_closed(params).ggm
    rec = bell.bmax(psi)
    cells = _measure_cells(tau, tau_c) + _measure_cells(g, g_c)
    for pair, mval in (("AB", rec.m_ab), ("BC", rec.m_bc), ("AC", rec.m_ac)):
        try:
            closed = bell.bell_m_closed(params, pair)
        except UnsupportedClosedFormError:
            closed = None
        cells.extend(_measure_cells(mval, closed))
    return cells, rec, tau


_MEASURE_COLUMNS = [
    f"{name}{suffix}"
    for name in ("tau", "ggm", "m_ab", "m_bc", "m_ac")
    for suffix in ("", "_closed", "_absdiff")
]


def _pair_density(psi: np.ndarray, pair: str) -> np.ndarray:
    return qmath.partial_trace(states.density(psi), pair)


def _w_ordering_ok(params: states.WParams, psi: np.ndarray) -> bool:
    for pair in bell.PAIRS:
        eig = bell.ttt_eigenvalues(_pair_density(psi, pair))
        lo, mid, hi = bell.w_ttt_eigenvalues_closed(params, pair)
        if abs(eig[0] - lo) > 1e-8 or abs(eig[1] - mid) > 1e-8 or abs(eig[2] - hi) > 1e-8:
            return False
        if lo > mid + 1e-9 or mid > hi + 1e-9:
            return False
    return True


def _ghz_ordering_ok(params: states.GhzParams, psi: np.ndarray) -> bool:
    for pair in bell.PAIRS:
        eig = bell.ttt_eigenvalues(_pair_density(psi, pair))
        if abs(eig[0] - bell.ghz_ttt_smallest_closed(params, pair)) > 1e-8:
            return False
    return True


def _family_rows_mbv(grid: int):
    header = ["index", "m", *_MEASURE_COLUMNS, "b_max", "identity_residual"]
    rows = []
    for i, m in enumerate(np.linspace(0.0, 1.0, grid)):
        params = states.MbvParams(float(m))
        psi = states.mbv_state(float(m))
        cells, rec, tau = _family_common_cells(params, psi)
        rows.append(
            [str(i), _fmt(m), *cells, _fmt(rec.b_max), _fmt(tau + rec.b_max - 1.0)]
        )
    return header, rows


def _family_rows_ghzr(grid: int):
    header = [
        "index", "alpha", "beta", "gamma", "delta", "phi",
        *_MEASURE_COLUMNS, "b_max", "ordering_ok",
    ]
    rows = []
    index = 0
    steps = [k / grid for k in range(1, grid + 1)]
    for sa in steps:
        for sb in steps:
            for sg in steps:
                for sd in steps:
                    params = states.GhzParams(
                        alpha=0.5 * math.pi * sa,
                        beta=0.5 * math.pi * sb,
                        gamma=0.5 * math.pi * sg,
                        delta=0.25 * math.pi * sd,
                    )
                    psi = states.ghz_state(params)
                    cells, rec, _ = _family_common_cells(params, psi)
                    rows.append(
                        [
                            str(index),
                            _fmt(params.alpha), _fmt(params.beta),
                            _fmt(params.gamma), _fmt(params.delta), _fmt(0.0),
                            *cells,
                            _fmt(rec.b_max),
                            str(_ghz_ordering_ok(params, psi)).lower(),
                        ]
                    )
                    index += 1
    return header, rows


def _family_rows_w(grid: int):
    header = ["index", "a", "b", "c", "d", *_MEASURE_COLUMNS, "b_max", "ordering_ok"]
    rows = []
    index = 0
    for i in range(1, grid - 1):
        for j in range(1, grid - i):
            for k in range(1, grid - i - j + 1):
                params = states.WParams(a=i / grid, b=j / grid, c=k / grid)
                psi = states.w_state(params)
                cells, rec, _ = _family_common_cells(params, psi)
                rows.append(
                    [
                        str(index),
                        _fmt(params.a), _fmt(params.b), _fmt(params.c), _fmt(params.d),
                        *cells,
                        _fmt(rec.b_max),
                        str(_w_ordering_ok(params, psi)).lower(),
                    ]
                )
                index += 1
    return header, rows


def cmd_family(args) -> int:
    builders = {"mbv": _family_rows_mbv, "ghzr": _family_rows_ghzr, "w": _family_rows_w}
    header, rows = builders[args.family](args.grid)
    with open(args.out, "w", newline="") as fh:
        writer = _write_header(fh, header)
        writer.writerows(rows)
    return EXIT_OK


def cmd_frontier(args) -> int:
    measures = args.measures.split(",")
    if len(measures) != 1 or measures[0] not in FRONTIER_MEASURES:
        args.parser.error(
            f"frontier needs exactly one measure from {FRONTIER_MEASURES}"
        )
    bins = complementarity.frontier_scan(
        args.samples,
        args.seed,
        measures[0],
        args.bins,
        convention=args.dms_convention,
        workers=args.workers,
    )
    with open(args.out, "w", newline="") as fh:
        writer = _write_header(
            fh, ["bin_lo", "bin_hi", "count", "max_b", "mbv_b", "excess"]
        )
        for fb in bins:
            if fb.count:
                max_b = _fmt(fb.max_b)
                excess = _fmt(fb.max_b - fb.mbv_b - fb.bin_slack)
            else:
                max_b = excess = ""
            writer.writerow(
                [_fmt(fb.measure_lo), _fmt(fb.measure_hi), str(fb.count),
                 max_b, _fmt(fb.mbv_b), excess]
            )
    return EXIT_OK


# split A:BC can only shield pair BC, etc.; indices into engine.PAIR_LABELS
_COMPLEMENT_IDX = np.array([1, 2, 0])


def _verify_haar_suite(seed: int, samples: int, tol: float):
    """Vectorized split-lemma and no-go counts over Haar states."""
    determinate = ties = lemma_fail = nogo_fail = 0
    first_bad = None
    chunk = complementarity.DEFAULT_CHUNK
    for start in range(0, samples, chunk):
        n = min(chunk, samples - start)
        amps = states.haar_block(seed, start, n)
        meas = engine.measures_block(amps)
        m = np.stack([meas["m_ab"], meas["m_bc"], meas["m_ac"]], axis=1)
        n_viol = (m > 1.0 + tol).sum(axis=1)
        nogo_bad = n_viol > 1
        nogo_fail += int(nogo_bad.sum())
        # a tie only blocks the check when there is a violation to attribute
        tie = (meas["g_gap"] < engine.GGM_TIE_TOL) & (n_viol > 0)
        ties += int(tie.sum())
        ok = (n_viol == 0) | (
            (n_viol == 1) & (np.argmax(m, axis=1) == _COMPLEMENT_IDX[meas["split_idx"]])
        )
        bad = ~tie & ~ok
        lemma_fail += int(bad.sum())
        determinate += int((~tie).sum())
        if first_bad is None and (bad | nogo_bad).any():
            i = int(np.argmax(bad | nogo_bad))
            first_bad = (start + i, _state_repr(amps[i]))
    return determinate, ties, lemma_fail, nogo_fail, first_bad


def cmd_verify(args) -> int:
    if args.inject == "corrupt-state":
        # deliberately unnormalized input; the library must refuse it
        complementarity.slack(states.mbv_state(0.5) * 0.9)
    seed, tol, samples = args.seed, args.tol, args.samples
    lines = []
    failures = []

    fails = 0
    witness = None
    for i, p in enumerate(states.ghz_draws(seed, 0, samples)):
        if not complementarity.theorem_tangle_pair(p):
            fails += 1
            witness = witness or (i, repr(p))
    lines.append(("tangle-pair theorem", samples - fails, samples, "draws"))
    if fails:
        failures.append(("tangle-pair theorem", witness))

    fails = 0
    witness = None
    for i, p in enumerate(states.w_draws(seed, 0, samples)):
        if not complementarity.theorem_w_max(p):
            fails += 1
            witness = witness or (i, repr(p))
    lines.append(("w-max theorem", samples - fails, samples, "draws"))
    if fails:
        failures.append(("w-max theorem", witness))

    determinate, ties, lemma_fail, nogo_fail, bad = _verify_haar_suite(
        seed, samples, tol
    )
    lines.append(
        ("split lemma", determinate - lemma_fail, determinate, f"determinate ({ties} ties skipped)")
    )
    lines.append(("violation no-go", samples - nogo_fail, samples, "states"))
    if lemma_fail:
        failures.append(("split lemma", bad))
    if nogo_fail:
        failures.append(("violation no-go", bad))

    n_convex = max(1, samples // 10)
    rng = np.random.default_rng([seed, 0x1B873593])
    fails = 0
    witness = None
    for i in range(n_convex):
        k = 2 + int(rng.integers(3))
        weights = rng.dirichlet(np.ones(k))
        comps = []
        for w in weights:
            z = rng.standard_normal(8) + 1j * rng.standard_normal(8)
            comps.append((float(w), z / np.linalg.norm(z)))
        if not complementarity.convexity_chain_check(comps, tol=tol):
            fails += 1
            witness = witness or (i, repr(weights))
    lines.append(("convexity chain", n_convex - fails, n_convex, "ensembles"))
    if fails:
        failures.append(("convexity chain", witness))

    n_mixed = max(1, samples // 100)
    fails = 0
    witness = None
    for i in range(n_mixed):
        rank_env = (2, 4, 8)[i % 3]
        rho = states.induced_mixed(seed, rank_env, index=i)
        rec = complementarity.mixed_claim_check(rho, trials=512, seed=seed)
        if rec.tau_slack < -1e-6:
            fails += 1
            witness = witness or (i, f"rank_env={rank_env} tau_slack={_fmt(rec.tau_slack)}")
    lines.append(("mixed-state bound", n_mixed - fails, n_mixed, "states"))
    if fails:
        failures.append(("mixed-state bound", witness))

    failed_names = {name for name, _ in failures}
    print(f"verification report (seed={seed}, samples={samples})")
    for name, passed, total, unit in lines:
        tag = "FAIL" if name in failed_names else "PASS"
        print(f"[{tag}] {name}: {passed}/{total} {unit}")
    for name, witness in failures:
        print(f"counterexample ({name}): {witness}", file=sys.stderr)
    return EXIT_VIOLATION if failures else EXIT_OK


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("TRICORR_WORKERS", "1")))
    except ValueError:
        return 1


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage failures exit with code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_scan_args(p, *, need_out: bool) -> None:
    p.add_argument("--samples", type=int, required=True, help="number of Haar samples")
    p.add_argument("--seed", type=int, default=0, help="64-bit stream seed")
    p.add_argument("--tol", type=float, default=1e-9, help="inequality tolerance")
    p.add_argument(
        "--workers", type=int, default=_default_workers(),
        help="parallel workers (default: TRICORR_WORKERS or 1)",
    )
    p.add_argument(
        "--dms-convention", choices=discord.CONVENTIONS,
        default=discord.DEFAULT_CONVENTION,
        help="which party each pair discord measures",
    )
    if need_out:
        p.add_argument("--out", required=True, help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tricorr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="per-state measures over Haar samples")
    _add_scan_args(p, need_out=True)
    p.add_argument(
        "--measures", default="tangle,ggm,bell",
        help="comma list from tangle,ggm,bell,dms (dms adds a column)",
    )
    p.set_defaults(func=cmd_scan, parser=p)

    p = sub.add_parser("family", help="parametric family sweep, numeric vs closed forms")
    p.add_argument("--family", choices=("mbv", "ghzr", "w"), required=True)
    p.add_argument(
        "--grid", type=int, default=101,
        help="grid resolution (per axis for ghzr/w; row count scales accordingly)",
    )
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_family, parser=p)

    p = sub.add_parser("verify", help="theorem, lemma, convexity, and mixed-bound suites")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--inject", choices=("corrupt-state",), help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify, parser=p)

    p = sub.add_parser("frontier", help="binned per-bin max violation along a measure")
    _add_scan_args(p, need_out=True)
    p.add_argument("--measures", required=True, help="exactly one of tangle,ggm,dms")
    p.add_argument("--bins", type=int, default=200)
    p.set_defaults(func=cmd_frontier, parser=p)
    return parser


def _validate(args) -> None:
    if getattr(args, "samples", 1) < 1:
        args.parser.error("--samples must be >= 1")
    if getattr(args, "seed", 0) < 0:
        args.parser.error("--seed must be >= 0")
    if getattr(args, "tol", 1.0) <= 0.0:
        args.parser.error("--tol must be > 0")
    if getattr(args, "bins", 1) < 1:
        args.parser.error("--bins must be >= 1")
    if getattr(args, "grid", 1) < 1:
        args.parser.error("--grid must be >= 1")
    if getattr(args, "workers", 1) < 1:
        args.parser.error("--workers must be >= 1")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.parser = getattr(args, "parser", parser)
    _validate(args)
    try:
        return args.func(args)
    except (MalformedStateError, ParameterError, UnsupportedClosedFormError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
