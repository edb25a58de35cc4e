"""Vectorized kernels for Monte Carlo scans over pure three-qubit states.

Everything here operates on a block of states at once: `amps` is an (N, 8)
complex array of unit-norm amplitude rows. These kernels exploit structure
that only holds for reductions of *pure* three-qubit states (pair marginals
have rank <= 2); general mixed-state inputs go through the scalar routines
in the measure modules instead.
"""
from __future__ import annotations

import numpy as np

SPLIT_LABELS = ("A:BC", "B:AC", "C:AB")
PAIR_LABELS = ("AB", "BC", "AC")
VIOLATION_LABELS = ("AB", "BC", "AC", "none")
GGM_TIE_TOL = 1e-12

# spin-flip sigma_y (x) sigma_y is the signed anti-diagonal (-1, 1, 1, -1)
_YSIGN = np.array([-1.0, 1.0, 1.0, -1.0])
_YMASK = np.outer(_YSIGN, _YSIGN)

_S = [
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
]
# the 9 Pauli-Pauli observables in row-major (x, y, z) x (x, y, z) order
_PAULI_PAIRS = np.stack([np.kron(_S[i], _S[j]) for i in range(3) for j in range(3)])


def single_marginals(amps: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    a = amps.reshape(-1, 2, 2, 2)
    ac = a.conj()
    ra = np.einsum("nibc,njbc->nij", a, ac)
    rb = np.einsum("naic,najc->nij", a, ac)
    rc = np.einsum("nabi,nabj->nij", a, ac)
    return ra, rb, rc


def pair_marginals(amps: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Reduced pair states (rho_AB, rho_BC, rho_AC), each (N, 4, 4)."""
    a = amps.reshape(-1, 2, 2, 2)
    ac = a.conj()
    n = a.shape[0]
    rab = np.einsum("nabc,nxyc->nabxy", a, ac).reshape(n, 4, 4)
    rbc = np.einsum("nabc,nayz->nbcyz", a, ac).reshape(n, 4, 4)
    rac = np.einsum("nabc,nxbz->nacxz", a, ac).reshape(n, 4, 4)
    return rab, rbc, rac


def eigmax_2x2(r: np.ndarray) -> np.ndarray:
    """Largest eigenvalue of trace-1 Hermitian 2x2 blocks, closed form."""
    p = r[..., 0, 0].real
    q = r[..., 0, 1]
    return 0.5 + np.sqrt((p - 0.5) ** 2 + q.real**2 + q.imag**2)


def cut_concurrence_sq(r: np.ndarray) -> np.ndarray:
    """C^2 across a 1:2 cut of a pure state, as 4 det of the qubit marginal."""
    p = r[..., 0, 0].real
    q = r[..., 0, 1]
    return 4.0 * (p * (1.0 - p) - (q.real**2 + q.imag**2))


def pair_concurrence_sq(r: np.ndarray) -> np.ndarray:
    """Squared Wootters concurrence for rank<=2 two-qubit states.

    With R = rho rho-tilde of rank <= 2, the two nonzero eigenvalues mu1,
    mu2 give C = sqrt(mu1) - sqrt(mu2), so C^2 = tr R - 2 sqrt(e2(R)) where
    e2 = ((tr R)^2 - tr R^2) / 2 picks out mu1 mu2. Exact for reductions of
    pure three-qubit states; not valid at higher rank.
    """
    rt = _YMASK * r.conj()[..., ::-1, ::-1]
    rr = r @ rt
    tr1 = np.einsum("nii->n", rr).real
    tr2 = np.einsum("nij,nji->n", rr, rr).real
    e2 = np.clip(0.5 * (tr1 * tr1 - tr2), 0.0, None)
    return np.clip(tr1 - 2.0 * np.sqrt(e2), 0.0, None)


def tangle_batch(amps: np.ndarray) -> np.ndarray:
    """Three-tangle of each row via the degree-4 hyperdeterminant."""
    c = amps.T
    c000, c001, c010, c011, c100, c101, c110, c111 = (c[i] for i in range(8))
    s1 = (
        c000**2 * c111**2
        + c001**2 * c110**2
        + c010**2 * c101**2
        + c100**2 * c011**2
    )
    s2 = (
        c000 * c111 * (c011 * c100 + c101 * c010 + c110 * c001)
        + c011 * c100 * (c101 * c010 + c110 * c001)
        + c101 * c010 * c110 * c001
    )
    s3 = c000 * c110 * c101 * c011 + c111 * c001 * c010 * c100
    return 4.0 * np.abs(s1 - 2.0 * s2 + 4.0 * s3)


def correlation_matrices(r: np.ndarray) -> np.ndarray:
    """Pauli-Pauli expectation matrices T for a block of two-qubit states."""
    return np.einsum("pij,nji->np", _PAULI_PAIRS, r).real.reshape(-1, 3, 3)


def bell_m_batch(r: np.ndarray) -> np.ndarray:
    """Sum of the two largest eigenvalues of T^T T per state."""
    t = correlation_matrices(r)
    ev = np.linalg.eigvalsh(np.einsum("nki,nkj->nij", t, t))
    return ev[:, 1] + ev[:, 2]


def measures_block(amps: np.ndarray) -> dict[str, np.ndarray]:
    """Tangle, GGM, per-pair CHSH quantities, and slacks for a state block.

    Returns a dict of (N,) arrays: tau, ggm, split_idx (into SPLIT_LABELS),
    g_gap, m_ab, m_bc, m_ac, b_max, viol_idx (into VIOLATION_LABELS),
    tau_slack, ggm_slack.
    """
    ra, rb, rc = single_marginals(amps)
    rab, rbc, rac = pair_marginals(amps)

    c2_cut = cut_concurrence_sq(ra)
    tau = np.clip(c2_cut - pair_concurrence_sq(rab) - pair_concurrence_sq(rac), 0.0, 1.0)

    g = np.stack([eigmax_2x2(ra), eigmax_2x2(rb), eigmax_2x2(rc)], axis=1)
    gmax = g.max(axis=1)
    # first marginal within tie tolerance of the max wins (A, then B, then C)
    near = g > (gmax - GGM_TIE_TOL)[:, None]
    split_idx = np.argmax(near, axis=1)
    ggm = 1.0 - gmax
    # gap to the runner-up marginal; a near-zero gap makes the split label arbitrary
    g_gap = gmax - np.partition(g, 1, axis=1)[:, 1]

    m = np.stack([bell_m_batch(rab), bell_m_batch(rbc), bell_m_batch(rac)], axis=1)
    b = np.clip(m - 1.0, 0.0, None)
    b_max = b.max(axis=1)
    viol_idx = np.where(b_max > 1e-9, np.argmax(b, axis=1), 3)

    return {
        "tau": tau,
        "ggm": ggm,
        "split_idx": split_idx,
        "g_gap": g_gap,
        "m_ab": m[:, 0],
        "m_bc": m[:, 1],
        "m_ac": m[:, 2],
        "b_max": b_max,
        "viol_idx": viol_idx,
        "tau_slack": 1.0 - tau - b_max,
        "ggm_slack": 1.0 - 4.0 * ggm * (1.0 - ggm) - b_max,
    }
