"""Concurrence, tangle, GGM, and a decomposition-search tangle upper bound.

The tangle has two independent routes: the monogamy-difference form
tau = C^2(A:BC) - C^2(AB) - C^2(AC) and the degree-4 hyperdeterminant; they
agree on pure states and are cross-checked in the test suite. Closed forms
for the parametric families are implemented separately so numeric routes can
be validated against them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import engine, qmath, states
from .errors import MalformedStateError, ParameterError

GGM_TIE_TOL = engine.GGM_TIE_TOL
SPLIT_LABELS = engine.SPLIT_LABELS


@dataclass(frozen=True)
class TangleBreakdown:
    c2_a_bc: float
    c2_ab: float
    c2_ac: float
    tau: float


@dataclass(frozen=True)
class GgmBreakdown:
    g_a: float
    g_b: float
    g_c: float
    ggm: float
    split: str


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    max{0, l1 - l2 - l3 - l4} with li the descending square roots of the
    eigenvalues of rho rho-tilde, rho-tilde = (sy x sy) rho* (sy x sy).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise MalformedStateError(f"expected a 4x4 matrix, got {rho.shape}")
    qmath.check_hermitian(rho)
    if abs(rho.trace().real - 1.0) > qmath.TRACE_TOL:
        raise MalformedStateError("trace is not 1")
    yy = np.kron(qmath.SIGMA_Y, qmath.SIGMA_Y)
    rr = rho @ (yy @ rho.conj() @ yy)
    lam = np.sqrt(np.clip(np.linalg.eigvals(rr).real, 0.0, None))
    lam[::-1].sort()
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def tangle_pure(psi: np.ndarray) -> TangleBreakdown:
    """Tangle of a pure three-qubit state via the monogamy difference.

    C^2 across the A:BC cut is 4 det(rho_A), exact for pure states. The
    difference is clamped to 0 when within -1e-10 (floating-point zero-tangle
    states) and capped at 1.
    """
    psi = states.check_unit_norm(psi)
    rho = np.outer(psi, psi.conj())
    ra = qmath.partial_trace(rho, "A")
    c2_cut = float(4.0 * np.linalg.det(ra).real)
    c2_ab = concurrence(qmath.partial_trace(rho, "AB")) ** 2
    c2_ac = concurrence(qmath.partial_trace(rho, "AC")) ** 2
    raw = c2_cut - c2_ab - c2_ac
    tau = 0.0 if -1e-10 <= raw < 0.0 else min(raw, 1.0)
    return TangleBreakdown(c2_a_bc=c2_cut, c2_ab=c2_ab, c2_ac=c2_ac, tau=tau)


def tangle_hyperdet(psi: np.ndarray) -> float:
    """Tangle via the hyperdeterminant route, 4|s1 - 2 s2 + 4 s3|."""
    psi = states.check_unit_norm(psi)
    return float(engine.tangle_batch(psi[None, :])[0])


def tangle_closed(params: states.FamilyParams) -> float:
    """Closed-form tangle for a family parameter record.

    W-class states have identically zero tangle, so W params return exact
    0.0 (no evaluation happens); the numeric routes confirm this on sweeps.
    """
    if isinstance(params, states.MbvParams):
        m2 = params.m * params.m
        return 1.0 - 4.0 * m2 / (1.0 + m2) ** 2
    if isinstance(params, states.GhzParams):
        sa, sb, sg = math.sin(params.alpha), math.sin(params.beta), math.sin(params.gamma)
        s2d = math.sin(2.0 * params.delta)
        x = (
            math.cos(params.alpha)
            * math.cos(params.beta)
            * math.cos(params.gamma)
            * math.cos(params.phi)
            * s2d
        )
        return (sa * sb * sg * s2d) ** 2 / (1.0 + x) ** 2
    if isinstance(params, states.WParams):
        return 0.0
    raise ParameterError(f"unknown family parameter record {params!r}")


def _split_from_g(g_a: float, g_b: float, g_c: float) -> tuple[float, str]:
    gmax = max(g_a, g_b, g_c)
    for g, label in zip((g_a, g_b, g_c), SPLIT_LABELS):
        if g > gmax - GGM_TIE_TOL:
            return gmax, label
    raise AssertionError("unreachable")


def ggm(psi: np.ndarray) -> GgmBreakdown:
    """Genuine-multipartite-entanglement measure 1 - max marginal eigenvalue.

    The split label names the first single-qubit marginal (A, then B, then C)
    whose largest eigenvalue is within 1e-12 of the maximum.
    """
    psi = states.check_unit_norm(psi)
    a = psi.reshape(1, 8)
    ra, rb, rc = engine.single_marginals(a)
    g_a = float(engine.eigmax_2x2(ra)[0])
    g_b = float(engine.eigmax_2x2(rb)[0])
    g_c = float(engine.eigmax_2x2(rc)[0])
    gmax, split = _split_from_g(g_a, g_b, g_c)
    return GgmBreakdown(g_a=g_a, g_b=g_b, g_c=g_c, ggm=1.0 - gmax, split=split)


def ggm_closed(params: states.FamilyParams) -> GgmBreakdown:
    """Closed-form largest marginal eigenvalues and the resulting GGM."""
    if isinstance(params, states.MbvParams):
        states.mbv_state(params.m)  # range check
        g_b = 0.5 + params.m / (1.0 + params.m * params.m)
        g_a = g_c = 0.5
    elif isinstance(params, states.GhzParams):
        states.ghz_state(params)  # range check
        ca2 = math.cos(params.alpha) ** 2
        cb2 = math.cos(params.beta) ** 2
        cg2 = math.cos(params.gamma) ** 2
        s2d2 = math.sin(2.0 * params.delta) ** 2
        x = math.sqrt(ca2 * cb2 * cg2 * s2d2) * math.cos(params.phi)
        den = (1.0 + x) ** 2

        def g_of(s2: float, prod_c2: float) -> float:
            return 0.5 * (1.0 + math.sqrt(1.0 + s2 * (prod_c2 - 1.0) * s2d2 / den))

        g_a = g_of(1.0 - ca2, cb2 * cg2)
        g_b = g_of(1.0 - cb2, ca2 * cg2)
        g_c = g_of(1.0 - cg2, ca2 * cb2)
    elif isinstance(params, states.WParams):
        states.w_state(params)  # range check
        a, b, c = params.a, params.b, params.c
        g_a = 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * (a + b) * c))
        g_b = 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * (a + c) * b))
        g_c = 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * (b + c) * a))
    else:
        raise ParameterError(f"unknown family parameter record {params!r}")
    gmax, split = _split_from_g(g_a, g_b, g_c)
    return GgmBreakdown(g_a=g_a, g_b=g_b, g_c=g_c, ggm=1.0 - gmax, split=split)


def tangle_upper_bound(rho: np.ndarray, trials: int = 512, seed: int = 0) -> float:
    """Upper bound on the convex-roof tangle of an 8x8 density matrix.

    Minimizes the ensemble-average tangle over sampled pure-state
    decompositions: the eigendecomposition mixed by Haar-random isometries
    with cardinalities cycling over rank..8. The result is always >= the true
    convex roof and is non-increasing in `trials` for a fixed seed.
    """
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials!r}")
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise MalformedStateError(f"expected an 8x8 matrix, got {rho.shape}")
    qmath.check_hermitian(rho)
    if abs(rho.trace().real - 1.0) > qmath.TRACE_TOL:
        raise MalformedStateError("trace is not 1")
    lam, vec = np.linalg.eigh(rho)
    if lam[0] < -qmath.EIG_CLAMP:
        raise MalformedStateError(f"negative eigenvalue {lam[0]:.3e}")
    keep = lam > 1e-12
    lam = lam[keep]
    vec = vec[:, keep]
    rank = int(lam.size)
    if rank == 1:
        return float(engine.tangle_batch(vec[:, 0][None, :])[0])

    root = vec * np.sqrt(lam)[None, :]  # (8, rank), columns sqrt(lam_k) e_k
    best = float(lam @ engine.tangle_batch(np.ascontiguousarray(vec.T)))

    u = states.roof_isometry_uniforms(seed, 0, trials)
    for t in range(trials):
        n = rank + (t % (9 - rank))
        g = states._complex_gaussians(u[t])[: n * rank].reshape(n, rank)
        q, _ = np.linalg.qr(g)
        sub = q @ root.T  # rows are subnormalized ensemble members
        p = np.einsum("ij,ij->i", sub, sub.conj()).real
        ok = p > 1e-14
        vals = engine.tangle_batch(sub[ok] / np.sqrt(p[ok])[:, None])
        best = min(best, float(p[ok] @ vals))
    return best
