"""Dense complex linear algebra sized for 2/3/4/8-dimensional problems.

Qubit ordering convention used everywhere in this package: the three-qubit
basis label |abc> maps to the integer index 4a + 2b + c, so qubit A is the
most significant bit. All matrices are plain complex ndarrays.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MalformedStateError, ParameterError, UnsupportedDimensionError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
# density-matrix eigenvalues in (-EIG_CLAMP, 0) are treated as exact zeros
EIG_CLAMP = 1e-9

I2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_ROW = {"A": "a", "B": "b", "C": "c"}
_COL = {"A": "x", "B": "y", "C": "z"}


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues sorted descending."""

    values: tuple[float, ...]
    dim: int


def tensor_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, capped at working dimension 64."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape[0] * b.shape[0] > 64:
        raise UnsupportedDimensionError(
            f"tensor product dimension {a.shape[0] * b.shape[0]} exceeds 64"
        )
    return np.kron(a, b)


def check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    if np.abs(m - m.conj().T).max() > tol:
        raise MalformedStateError(f"matrix is not Hermitian within {tol:g}")


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Trace an 8x8 three-qubit density matrix down to the kept subsystems.

    Parameters
    ----------
    rho : (8, 8) complex ndarray, Hermitian with unit trace.
    keep : subsystem labels drawn from {A, B, C} without repeats, e.g. "B"
        or "AC". Output qubit order follows the order of `keep`, so "CA"
        returns the C-then-A ordering of the same reduced state.

    Returns
    -------
    (2, 2) or (4, 4) complex ndarray.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (8, 8):
        raise UnsupportedDimensionError(f"expected an 8x8 matrix, got {rho.shape}")
    check_hermitian(rho)
    tr = rho.trace().real
    if abs(tr - 1.0) > TRACE_TOL:
        raise MalformedStateError(f"trace {tr:.17g} is not 1 within {TRACE_TOL:g}")
    keep = "".join(keep) if not isinstance(keep, str) else keep
    labels = list(keep.upper())
    if not labels or len(labels) > 2 or len(set(labels)) != len(labels) or any(
        ch not in _ROW for ch in labels
    ):
        raise ParameterError(f"keep must be a singleton or pair over A/B/C, got {keep!r}")
    # traced-out subsystems get matching row/column einsum letters
    cols = {ch: (_COL[ch] if ch in labels else _ROW[ch]) for ch in "ABC"}
    src = "".join(_ROW[ch] for ch in "ABC") + "".join(cols[ch] for ch in "ABC")
    dst = "".join(_ROW[ch] for ch in labels) + "".join(_COL[ch] for ch in labels)
    t = np.einsum(f"{src}->{dst}", rho.reshape(2, 2, 2, 2, 2, 2))
    d = 2 ** len(labels)
    return t.reshape(d, d)


def hermitian_eigenvalues(m: np.ndarray) -> Spectrum:
    """Eigenvalues of a Hermitian matrix, sorted descending."""
    m = np.asarray(m, dtype=complex)
    check_hermitian(m)
    vals = np.linalg.eigvalsh(m)[::-1]
    return Spectrum(values=tuple(float(v) for v in vals), dim=m.shape[0])


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) = -Tr[rho log2 rho] in bits, with 0 log 0 taken as 0."""
    rho = np.asarray(rho, dtype=complex)
    check_hermitian(rho)
    tr = rho.trace().real
    if abs(tr - 1.0) > TRACE_TOL:
        raise MalformedStateError(f"trace {tr:.17g} is not 1 within {TRACE_TOL:g}")
    vals = np.linalg.eigvalsh(rho)
    if vals[0] < -EIG_CLAMP:
        raise MalformedStateError(f"negative eigenvalue {vals[0]:.3e} below -{EIG_CLAMP:g}")
    # upper clip too: an eigenvalue at 1 + noise would drag the sum negative
    vals = np.clip(vals, 0.0, 1.0)
    nz = vals[vals > 0.0]
    return float(-(nz * np.log2(nz)).sum())


def entropy_of_probabilities(p: np.ndarray) -> float:
    """Shannon entropy in bits of a nonnegative vector summing to ~1."""
    p = np.asarray(p, dtype=float)
    nz = p[p > 0.0]
    return float(-(nz * np.log2(nz)).sum())
