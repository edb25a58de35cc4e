"""Numerical certification of the complementarity relations and frontiers.

Two per-state claims are scored as slacks (nonnegative iff the claim holds):

    tau_slack = 1 - tau - b_max
    ggm_slack = 1 - 4 G (1 - G) - b_max

Frontier scans bin Haar samples along a measure axis and compare the per-bin
maximum CHSH violation against the boundary traced by the one-parameter
maximally-violating family, with a curve-variation allowance per bin.
"""
from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass

import numpy as np

from . import bell, discord, engine, entanglement, qmath, states
from .errors import ParameterError, UnsupportedClosedFormError

DEFAULT_CHUNK = 8192

MEASURE_RANGES = {"tangle": (0.0, 1.0), "ggm": (0.0, 0.5), "dms": (-1.0, 1.0)}

# complement pair of each GGM split: the pair not containing the split party
_COMPLEMENT_PAIR = {"A:BC": "BC", "B:AC": "AC", "C:AB": "AB"}


@dataclass(frozen=True)
class SlackRecord:
    tau_slack: float
    ggm_slack: float
    state_id: str


@dataclass(frozen=True)
class FrontierBin:
    measure_lo: float
    measure_hi: float
    max_b: float  # nan when the bin is empty
    mbv_b: float  # boundary value at the bin center
    count: int
    bin_slack: float


def slack(psi: np.ndarray, state_id: str = "") -> SlackRecord:
    """Both complementarity slacks of a pure three-qubit state."""
    tau = entanglement.tangle_pure(psi).tau
    g = entanglement.ggm(psi).ggm
    b = bell.bmax(psi).b_max
    return SlackRecord(
        tau_slack=1.0 - tau - b,
        ggm_slack=1.0 - 4.0 * g * (1.0 - g) - b,
        state_id=state_id,
    )


def partner_m(tau: float) -> float:
    """The m whose closed-form tangle equals tau, from the square-root form."""
    s = math.sqrt(min(max(tau, 0.0), 1.0))
    return math.sqrt((1.0 - s) / (1.0 + s))


def partner_m_quadratic(tau: float) -> float:
    """Same inversion via the quadratic in m^2; cross-checked against partner_m."""
    u = 1.0 - min(max(tau, 0.0), 1.0)
    if u == 0.0:
        return 0.0
    return math.sqrt(((2.0 - u) - 2.0 * math.sqrt(1.0 - u)) / u)


def theorem_tangle_pair(params: states.GhzParams, tol: float = 1e-9) -> bool:
    """Equal-tangle pairing check for a phi=0 GHZ-class state.

    The frontier family satisfies b_max + tau = 1, so the frontier state with
    the same tangle tau* reaches b_max = 1 - tau*; the claim under test is
    that the GHZ-class state cannot exceed it.
    """
    if params.phi != 0.0:
        raise UnsupportedClosedFormError("pairing check requires phi = 0")
    psi = states.ghz_state(params)
    tau = entanglement.tangle_pure(psi).tau
    return 1.0 - tau >= bell.bmax(psi).b_max - tol


def theorem_w_max(params: states.WParams, tol: float = 1e-12) -> bool:
    """W-class states never exceed b_max = 1 (attained only in the m=1 limit)."""
    return bell.bmax(states.w_state(params)).b_max <= 1.0 + tol


def lemma_split_check(psi: np.ndarray, tol: float = 1e-9) -> bool | None:
    """True iff any violating pair is the complement of the GGM split.

    A state with no violating pair passes vacuously. Otherwise, if the two
    largest marginal eigenvalues tie within 1e-12 the split label is
    arbitrary and the result is None (indeterminate).
    """
    rec = bell.bmax(psi)
    violating = [
        p for p, m in zip(bell.PAIRS, (rec.m_ab, rec.m_bc, rec.m_ac)) if m > 1.0 + tol
    ]
    if not violating:
        return True
    g = entanglement.ggm(psi)
    top_two = sorted((g.g_a, g.g_b, g.g_c), reverse=True)[:2]
    if top_two[0] - top_two[1] < engine.GGM_TIE_TOL:
        return None
    return violating == [_COMPLEMENT_PAIR[g.split]]


def convexity_chain_check(
    components: list[tuple[float, np.ndarray]], tol: float = 1e-9
) -> bool:
    """Mixing can only lower the CHSH quantities: checks, per reduced pair,
    sqrt(M(mix)) <= sum_i p_i sqrt(M_i) and B(mix) <= sum_i p_i B_i, plus the
    same mixture bound for b_max."""
    weights = np.array([w for w, _ in components], dtype=float)
    if weights.min() < 0.0 or abs(weights.sum() - 1.0) > 1e-12:
        raise ParameterError("weights must be nonnegative and sum to 1")
    rho = np.zeros((8, 8), dtype=complex)
    for w, psi in components:
        rho += w * np.outer(psi, psi.conj())
    recs = [bell.bmax(psi) for _, psi in components]
    mix = bell.bmax_mixed(rho)
    for pair in ("ab", "bc", "ac"):
        m_mix = getattr(mix, f"m_{pair}")
        b_mix = getattr(mix, f"b_{pair}")
        m_avg_sqrt = sum(w * math.sqrt(getattr(r, f"m_{pair}")) for w, r in zip(weights, recs))
        b_avg = sum(w * getattr(r, f"b_{pair}") for w, r in zip(weights, recs))
        if math.sqrt(m_mix) > m_avg_sqrt + tol or b_mix > b_avg + tol:
            return False
    b_max_avg = sum(w * r.b_max for w, r in zip(weights, recs))
    return mix.b_max <= b_max_avg + tol


def mixed_claim_check(
    rho: np.ndarray,
    trials: int = 512,
    seed: int = 0,
    tol: float = 1e-6,
) -> SlackRecord:
    """Conservative tau + b_max <= 1 check for a mixed three-qubit state.

    Uses the decomposition-search upper bound in place of the convex-roof
    tangle, so a nonnegative tau_slack certifies the claim for this state.
    A slack below -tol is treated as inconclusive and refined with 4x and
    then 16x the trial budget before the record is returned; it is never a
    counterexample (the bound may simply be loose). ggm_slack is nan since
    the marginal-eigenvalue measure is defined here for pure states only.
    """
    b = bell.bmax_mixed(rho).b_max
    budget = trials
    for _ in range(3):
        tau_ub = entanglement.tangle_upper_bound(rho, trials=budget, seed=seed)
        tau_slack = 1.0 - tau_ub - b
        if tau_slack >= -tol:
            break
        budget *= 4
    return SlackRecord(tau_slack=tau_slack, ggm_slack=float("nan"), state_id="")


_DMS_CURVE_CACHE: dict[tuple[int, str], np.ndarray] = {}


def mbv_dms_curve(
    points: int = 1001, convention: str = discord.DEFAULT_CONVENTION
) -> np.ndarray:
    """(points, 2) array of (delta_d, b_max) along the frontier family.

    b_max is the closed form 4 m^2 / (1+m^2)^2; delta_d comes from the
    discord optimizer. Rows are sorted ascending in delta_d (the score is
    monotone decreasing in m, from 1 at m=0 down to 0 at m=1).
    """
    key = (points, convention)
    if key not in _DMS_CURVE_CACHE:
        ms = np.linspace(0.0, 1.0, points)
        rows = np.empty((points, 2))
        for i, m in enumerate(ms):
            rows[i, 0] = discord.dms(states.mbv_state(m), convention).delta_d
            rows[i, 1] = 4.0 * m * m / (1.0 + m * m) ** 2
        _DMS_CURVE_CACHE[key] = rows[np.argsort(rows[:, 0])]
    return _DMS_CURVE_CACHE[key]


def dms_boundary(delta_d: np.ndarray, curve: np.ndarray) -> np.ndarray:
    """Boundary b value at each delta_d, interpolated from the family curve.

    Scores below the curve range fall back to the trivial bound b = 1;
    scores cannot exceed the upper end (delta_d <= 1 with equality only at
    the zero-violation corner).
    """
    return np.interp(delta_d, curve[:, 0], curve[:, 1], left=1.0, right=0.0)


def _dms_bin_slack(curve: np.ndarray, lo: float, hi: float) -> float:
    """Max |curve slope| over segments overlapping [lo, hi], times bin width."""
    d, b = curve[:, 0], curve[:, 1]
    overlap = (d[1:] >= lo) & (d[:-1] <= hi)
    dd = d[1:] - d[:-1]
    valid = overlap & (dd > 1e-15)
    if not valid.any():
        return 0.0
    slopes = np.abs((b[1:] - b[:-1])[valid] / dd[valid])
    return float(slopes.max() * (hi - lo))


def _bin_slacks(measure: str, edges: np.ndarray, curve: np.ndarray | None) -> np.ndarray:
    width = edges[1] - edges[0]
    if measure == "tangle":
        # boundary 1 - x has unit slope everywhere
        return np.full(edges.size - 1, width)
    if measure == "ggm":
        # |d/dx 4(1/2 - x)^2| = 8(1/2 - x), largest at the bin's low edge
        return 8.0 * np.clip(0.5 - edges[:-1], 0.0, None) * width
    return np.array([_dms_bin_slack(curve, lo, lo + width) for lo in edges[:-1]])


def _boundary_values(measure: str, centers: np.ndarray, curve: np.ndarray | None) -> np.ndarray:
    if measure == "tangle":
        return 1.0 - centers
    if measure == "ggm":
        return 4.0 * (0.5 - centers) ** 2
    return dms_boundary(centers, curve)


def frontier_chunk(
    seed: int, start: int, count: int, measure: str, convention: str
) -> tuple[np.ndarray, np.ndarray]:
    """Measure values and b_max for Haar states [start, start+count)."""
    amps = states.haar_block(seed, start, count)
    meas = engine.measures_block(amps)
    if measure == "tangle":
        x = meas["tau"]
    elif measure == "ggm":
        x = meas["ggm"]
    else:
        x = np.array(
            [discord.dms(amps[i], convention).delta_d for i in range(count)]
        )
    return x, meas["b_max"]


def _frontier_task(task: tuple) -> tuple[np.ndarray, np.ndarray]:
    return frontier_chunk(*task)


def frontier_scan(
    samples: int,
    seed: int,
    measure: str,
    bins: int,
    convention: str = discord.DEFAULT_CONVENTION,
    chunk: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> list[FrontierBin]:
    """Binned per-bin maximum of b_max over Haar samples along a measure axis.

    Bin ranges are fixed per measure (tangle [0,1], ggm [0,0.5],
    dms [-1,1]) so results do not depend on the sampled extremes. Chunks are
    counter-addressed by sample index, and bins merge by max/count, so the
    result does not depend on the worker count.
    """
    if measure not in MEASURE_RANGES:
        raise ParameterError(f"measure must be one of {tuple(MEASURE_RANGES)}, got {measure!r}")
    if samples < bins:
        raise ParameterError(f"need samples >= bins, got {samples} < {bins}")
    lo, hi = MEASURE_RANGES[measure]
    edges = np.linspace(lo, hi, bins + 1)
    counts = np.zeros(bins, dtype=np.int64)
    max_b = np.full(bins, -np.inf)

    tasks = [
        (seed, start, min(chunk, samples - start), measure, convention)
        for start in range(0, samples, chunk)
    ]
    if workers > 1:
        with multiprocessing.get_context("fork").Pool(workers) as pool:
            results = pool.map(_frontier_task, tasks)
    else:
        results = map(_frontier_task, tasks)
    for x, b in results:
        idx = np.clip(((x - lo) / (hi - lo) * bins).astype(np.int64), 0, bins - 1)
        counts += np.bincount(idx, minlength=bins)
        np.maximum.at(max_b, idx, b)

    curve = mbv_dms_curve(convention=convention) if measure == "dms" else None
    centers = 0.5 * (edges[:-1] + edges[1:])
    mbv_b = _boundary_values(measure, centers, curve)
    slacks = _bin_slacks(measure, edges, curve)
    return [
        FrontierBin(
            measure_lo=float(edges[i]),
            measure_hi=float(edges[i + 1]),
            max_b=float(max_b[i]) if counts[i] else float("nan"),
            mbv_b=float(mbv_b[i]),
            count=int(counts[i]),
            bin_slack=float(slacks[i]),
        )
        for i in range(bins)
    ]
