"""Horodecki CHSH criterion for two-qubit states and three-qubit reductions.

M(rho) is the sum of the two largest eigenvalues of T^T T, where T is the
3x3 matrix of Pauli-Pauli expectations T_ij = Tr[(sigma_i x sigma_j) rho]
in (x, y, z) index order. The CHSH inequality is violated iff M > 1; the
maximum CHSH value is 2 sqrt(M). B = max{0, M-1} quantifies the violation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import engine, qmath, states
from .errors import MalformedStateError, ParameterError, UnsupportedClosedFormError

PAIRS = ("AB", "BC", "AC")


@dataclass(frozen=True)
class BellRecord:
    m_ab: float
    m_bc: float
    m_ac: float
    b_ab: float
    b_bc: float
    b_ac: float
    b_max: float
    violating_pair: str  # "AB", "BC", "AC", or "none"


def _check_two_qubit(rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise MalformedStateError(f"expected a 4x4 matrix, got {rho.shape}")
    qmath.check_hermitian(rho)
    if abs(rho.trace().real - 1.0) > qmath.TRACE_TOL:
        raise MalformedStateError("trace is not 1")
    return rho


def correlation_matrix(rho: np.ndarray) -> np.ndarray:
    """3x3 real matrix of Pauli-Pauli expectations, (x, y, z) order."""
    rho = _check_two_qubit(rho)
    return engine.correlation_matrices(rho[None, :, :])[0]


def bell_m(rho: np.ndarray) -> float:
    """Sum of the two largest eigenvalues of T^T T."""
    rho = _check_two_qubit(rho)
    return float(engine.bell_m_batch(rho[None, :, :])[0])


def bell_b(rho: np.ndarray) -> float:
    """Violation amount max{0, M(rho) - 1}."""
    return max(0.0, bell_m(rho) - 1.0)


def _record_from_m(m_ab: float, m_bc: float, m_ac: float) -> BellRecord:
    ms = (m_ab, m_bc, m_ac)
    bs = tuple(max(0.0, m - 1.0) for m in ms)
    b_max = max(bs)
    pair = PAIRS[bs.index(b_max)] if b_max > 1e-9 else "none"
    return BellRecord(
        m_ab=m_ab, m_bc=m_bc, m_ac=m_ac,
        b_ab=bs[0], b_bc=bs[1], b_ac=bs[2],
        b_max=b_max, violating_pair=pair,
    )


def bmax(psi: np.ndarray) -> BellRecord:
    """Per-pair M and B values of a pure state plus the maximum over pairs."""
    psi = states.check_unit_norm(psi)
    rab, rbc, rac = engine.pair_marginals(psi[None, :])
    return _record_from_m(
        float(engine.bell_m_batch(rab)[0]),
        float(engine.bell_m_batch(rbc)[0]),
        float(engine.bell_m_batch(rac)[0]),
    )


def bmax_mixed(rho: np.ndarray) -> BellRecord:
    """Same as bmax via the three partial traces of an 8x8 density matrix.

    The at-most-one-violating-pair property holds for reductions of pure
    states and is NOT asserted here; general mixed inputs may violate it.
    """
    return _record_from_m(
        bell_m(qmath.partial_trace(rho, "AB")),
        bell_m(qmath.partial_trace(rho, "BC")),
        bell_m(qmath.partial_trace(rho, "AC")),
    )


def w_pair_v(p: states.WParams) -> float:
    """The quartic V shared by every W-class pair formula (symmetric in a, b, c)."""
    ra, rb, rc = math.sqrt(p.a), math.sqrt(p.b), math.sqrt(p.c)
    d = max(p.d, 0.0)
    return (
        ((ra + rb - rc) ** 2 + d)
        * ((ra - rb + rc) ** 2 + d)
        * ((-ra + rb + rc) ** 2 + d)
        * ((ra + rb + rc) ** 2 + d)
    )


def bell_m_closed(params: states.FamilyParams, pair: str) -> float:
    """Closed-form M for a family state and a reduced pair.

    GHZ-class forms require phi = 0; the one-parameter Bell-frontier family
    has a cited form for pair AC only (its AB and BC correlation matrices
    coincide and never violate). Unsupported combinations raise.
    """
    if pair not in PAIRS:
        raise ParameterError(f"pair must be one of {PAIRS}, got {pair!r}")
    if isinstance(params, states.MbvParams):
        states.mbv_state(params.m)  # range check
        if pair != "AC":
            raise UnsupportedClosedFormError(
                "closed-form M is available for pair AC only in this family"
            )
        m2 = params.m * params.m
        return 1.0 + 4.0 * m2 / (1.0 + m2) ** 2
    if isinstance(params, states.WParams):
        states.w_state(params)  # range check
        a, b, c = params.a, params.b, params.c
        v = math.sqrt(w_pair_v(params))
        if pair == "BC":
            lin = 12.0 * a * b - 4.0 * a * c - 4.0 * b * c
        elif pair == "AC":
            lin = 12.0 * a * c - 4.0 * a * b - 4.0 * b * c
        else:
            lin = 12.0 * b * c - 4.0 * a * b - 4.0 * a * c
        return 0.5 + 0.5 * (lin + v)
    if isinstance(params, states.GhzParams):
        if params.phi != 0.0:
            raise UnsupportedClosedFormError("GHZ-class closed forms require phi = 0")
        states.ghz_state(params)  # range check
        ca2 = math.cos(params.alpha) ** 2
        cb2 = math.cos(params.beta) ** 2
        cg2 = math.cos(params.gamma) ** 2
        s2d = math.sin(2.0 * params.delta)
        x = math.sqrt(ca2 * cb2 * cg2) * s2d
        if pair == "BC":
            lead = ca2 - cb2 - cg2 + 2.0 * cb2 * cg2
        elif pair == "AC":
            lead = cb2 - ca2 - cg2 + 2.0 * ca2 * cg2
        else:
            lead = cg2 - ca2 - cb2 + 2.0 * ca2 * cb2
        return 1.0 + (lead * s2d * s2d - x * x) / (1.0 + x) ** 2
    raise ParameterError(f"unknown family parameter record {params!r}")


def ttt_eigenvalues(rho: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of T^T T for a two-qubit state."""
    t = correlation_matrix(rho)
    return np.linalg.eigvalsh(t.T @ t)


def w_ttt_eigenvalues_closed(
    params: states.WParams, pair: str
) -> tuple[float, float, float]:
    """Closed-form T^T T spectrum of a W-class reduced pair, claimed ascending.

    The middle value is 4 times the product of the pair's two leading
    weights; the outer two are the square-root branches. That this really is
    the ascending order is part of what the family sweep flags.
    """
    if pair not in PAIRS:
        raise ParameterError(f"pair must be one of {PAIRS}, got {pair!r}")
    states.w_state(params)  # range check
    a, b, c = params.a, params.b, params.c
    if pair == "BC":
        prod, inner = a * b, a * b - a * c - b * c
    elif pair == "AC":
        prod, inner = a * c, a * c - a * b - b * c
    else:
        prod, inner = b * c, b * c - a * b - a * c
    v = math.sqrt(w_pair_v(params))
    return (0.5 + 2.0 * inner - 0.5 * v, 4.0 * prod, 0.5 + 2.0 * inner + 0.5 * v)


def ghz_ttt_smallest_closed(params: states.GhzParams, pair: str) -> float:
    """Closed-form smallest T^T T eigenvalue for a phi = 0 GHZ-class pair.

    cos^2 of the traced-out party times sin^2 of the two kept parties, scaled
    by sin^2(2 delta) / (1 + x)^2.
    """
    if pair not in PAIRS:
        raise ParameterError(f"pair must be one of {PAIRS}, got {pair!r}")
    if params.phi != 0.0:
        raise UnsupportedClosedFormError("GHZ-class closed forms require phi = 0")
    states.ghz_state(params)  # range check
    ca2 = math.cos(params.alpha) ** 2
    cb2 = math.cos(params.beta) ** 2
    cg2 = math.cos(params.gamma) ** 2
    s2d = math.sin(2.0 * params.delta)
    x = math.sqrt(ca2 * cb2 * cg2) * s2d
    if pair == "BC":
        lead = ca2 * (1.0 - cb2) * (1.0 - cg2)
    elif pair == "AC":
        lead = cb2 * (1.0 - ca2) * (1.0 - cg2)
    else:
        lead = cg2 * (1.0 - ca2) * (1.0 - cb2)
    return lead * s2d * s2d / (1.0 + x) ** 2


def nogo_check(psi: np.ndarray, tol: float = 1e-9) -> bool:
    """True iff at most one reduced pair has M > 1 + tol."""
    rec = bmax(psi)
    return sum(m > 1.0 + tol for m in (rec.m_ab, rec.m_bc, rec.m_ac)) <= 1
