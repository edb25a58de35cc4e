"""Constructors and samplers for three-qubit pure and mixed states.

Pure states are length-8 complex ndarrays indexed by |abc> -> 4a + 2b + c.
All samplers are counter-addressed: draw `index` is reachable without
generating draws 0..index-1, so any parallel partition of an index range
reproduces the exact same stream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MalformedStateError, ParameterError

NORM_TOL = 1e-12

# domain-separation tags XORed into the Philox key, one per stream kind
_HAAR_TAG = 0x243F6A8885A308D3
_MIXED_TAG = 0x13198A2E03707344
_ROOF_TAG = 0xA4093822299F31D0
_GHZ_TAG = 0x082EFA98EC4E6C89
_W_TAG = 0x452821E638D01377


@dataclass(frozen=True)
class MbvParams:
    """Parameter of the maximally-Bell-violating one-parameter family."""

    m: float


@dataclass(frozen=True)
class GhzParams:
    """Five GHZ-class angles; phi is the relative phase of the second branch."""

    alpha: float
    beta: float
    gamma: float
    delta: float
    phi: float = 0.0


@dataclass(frozen=True)
class WParams:
    """W-class probabilities a, b, c (the fourth weight is d = 1-a-b-c)."""

    a: float
    b: float
    c: float

    @property
    def d(self) -> float:
        return 1.0 - self.a - self.b - self.c


FamilyParams = MbvParams | GhzParams | WParams


def check_unit_norm(psi: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.shape != (8,):
        raise MalformedStateError(f"expected 8 amplitudes, got shape {psi.shape}")
    n2 = float(np.vdot(psi, psi).real)
    if abs(n2 - 1.0) > tol:
        raise MalformedStateError(f"squared norm {n2:.17g} is not 1 within {tol:g}")
    return psi


def mbv_state(m: float) -> np.ndarray:
    """(|000> + m|010> + m|101> + |111>) / sqrt(2 + 2m^2), m in [0, 1].

    m=0 is the GHZ state; m=1 factorizes as qubit B times a Bell pair on AC
    and attains the largest possible reduced-pair CHSH violation.
    """
    if not 0.0 <= m <= 1.0:
        raise ParameterError(f"m must lie in [0, 1], got {m!r}")
    psi = np.zeros(8, dtype=complex)
    psi[0] = 1.0
    psi[2] = m
    psi[5] = m
    psi[7] = 1.0
    return psi / math.sqrt(2.0 + 2.0 * m * m)


def ghz_state(p: GhzParams) -> np.ndarray:
    """GHZ-class state sqrt(K) (cos(delta)|000> + sin(delta) e^{i phi} |u_a u_b u_c>).

    The single-qubit kets are |u_x> = cos(x)|0> + sin(x)|1> and K normalizes
    the state. Angle ranges: alpha, beta, gamma in (0, pi/2], delta in
    (0, pi/4], phi in [0, 2 pi).
    """
    for name, val, hi in (
        ("alpha", p.alpha, math.pi / 2),
        ("beta", p.beta, math.pi / 2),
        ("gamma", p.gamma, math.pi / 2),
        ("delta", p.delta, math.pi / 4),
    ):
        if not 0.0 < val <= hi:
            raise ParameterError(f"{name} must lie in (0, {hi:.6g}], got {val!r}")
    if not 0.0 <= p.phi < 2.0 * math.pi:
        raise ParameterError(f"phi must lie in [0, 2 pi), got {p.phi!r}")
    ca, cb, cg = math.cos(p.alpha), math.cos(p.beta), math.cos(p.gamma)
    cd, sd = math.cos(p.delta), math.sin(p.delta)
    k = 1.0 / (1.0 + ca * cb * cg * math.cos(p.phi) * math.sin(2.0 * p.delta))
    ua = np.array([ca, math.sin(p.alpha)], dtype=complex)
    ub = np.array([cb, math.sin(p.beta)], dtype=complex)
    uc = np.array([cg, math.sin(p.gamma)], dtype=complex)
    branch = np.einsum("a,b,c->abc", ua, ub, uc).reshape(8)
    psi = sd * np.exp(1j * p.phi) * branch
    psi[0] += cd
    return math.sqrt(k) * psi


def w_state(p: WParams) -> np.ndarray:
    """W-class state sqrt(d)|000> + sqrt(a)|001> + sqrt(b)|010> + sqrt(c)|100>."""
    if min(p.a, p.b, p.c) <= 0.0:
        raise ParameterError(f"a, b, c must be positive, got {(p.a, p.b, p.c)!r}")
    if p.a + p.b + p.c > 1.0 + 1e-12:
        raise ParameterError(f"a + b + c = {p.a + p.b + p.c!r} exceeds 1")
    psi = np.zeros(8, dtype=complex)
    psi[0] = math.sqrt(max(p.d, 0.0))
    psi[1] = math.sqrt(p.a)
    psi[2] = math.sqrt(p.b)
    psi[4] = math.sqrt(p.c)
    return psi / math.sqrt(float(np.vdot(psi, psi).real))


def state_from_params(params: FamilyParams) -> np.ndarray:
    if isinstance(params, MbvParams):
        return mbv_state(params.m)
    if isinstance(params, GhzParams):
        return ghz_state(params)
    if isinstance(params, WParams):
        return w_state(params)
    raise ParameterError(f"unknown family parameter record {params!r}")


def density(psi: np.ndarray) -> np.ndarray:
    """Rank-one projector |psi><psi| as an 8x8 matrix."""
    psi = check_unit_norm(psi, tol=1e-9)
    return np.outer(psi, psi.conj())


def uniform_stream(seed: int, tag: int, start: int, count: int, doubles_per_draw: int) -> np.ndarray:
    """Uniform doubles for draws [start, start+count) of a tagged stream.

    Philox generates 4 doubles per 256-bit counter block, so a fixed
    doubles_per_draw (multiple of 4) makes every draw counter-addressable.
    """
    if doubles_per_draw % 4:
        raise ParameterError("doubles_per_draw must be a multiple of 4")
    blocks = doubles_per_draw // 4
    bg = np.random.Philox(key=np.uint64(seed) ^ np.uint64(tag), counter=blocks * start)
    u = np.random.Generator(bg).random(count * doubles_per_draw)
    return u.reshape(count, doubles_per_draw)


def _complex_gaussians(u: np.ndarray) -> np.ndarray:
    """Box-Muller: uniform pairs to standard complex Gaussians."""
    # u in [0, 1), so 1-u in (0, 1] keeps the log finite
    r = np.sqrt(-2.0 * np.log1p(-u[..., 0::2]))
    return r * np.exp(2j * np.pi * u[..., 1::2])


def haar_block(seed: int, start: int, count: int) -> np.ndarray:
    """Haar-uniform pure states for indices [start, start+count), shape (count, 8).

    Amplitudes are i.i.d. standard complex Gaussians, normalized; each state
    consumes exactly 16 uniforms (4 Philox blocks) of its own counter range.
    """
    z = _complex_gaussians(uniform_stream(seed, _HAAR_TAG, start, count, 16))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_pure(seed: int, index: int) -> np.ndarray:
    """Haar-uniform pure state number `index` of the stream for `seed`."""
    return haar_block(seed, index, 1)[0]


def induced_mixed(seed: int, rank_env: int, index: int = 0) -> np.ndarray:
    """Mixed 8x8 state induced by tracing a K-dimensional environment.

    Draws a Haar-uniform pure state on an 8K-dimensional system-environment
    space and traces out the environment; the result has rank <= K.
    """
    if not 1 <= rank_env <= 8:
        raise ParameterError(f"rank_env must lie in 1..8, got {rank_env!r}")
    u = uniform_stream(seed, _MIXED_TAG, index, 1, 128)[0]
    g = _complex_gaussians(u)[: 8 * rank_env].reshape(8, rank_env)
    g /= np.linalg.norm(g)
    return g @ g.conj().T


def roof_isometry_uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Uniform blocks (count, 128) for decomposition-search trials."""
    return uniform_stream(seed, _ROOF_TAG, start, count, 128)


def ghz_draws(seed: int, start: int, count: int, random_phi: bool = False) -> list[GhzParams]:
    """Uniform GHZ-class parameter draws; phi is 0 unless random_phi is set."""
    u = uniform_stream(seed, _GHZ_TAG, start, count, 8)
    half_pi = math.pi / 2
    out = []
    for row in u:
        # 1-u maps [0,1) onto the half-open-from-below ranges (0, hi]
        out.append(
            GhzParams(
                alpha=half_pi * (1.0 - row[0]),
                beta=half_pi * (1.0 - row[1]),
                gamma=half_pi * (1.0 - row[2]),
                delta=(math.pi / 4) * (1.0 - row[3]),
                phi=(2.0 * math.pi * row[4]) if random_phi else 0.0,
            )
        )
    return out


def w_draws(seed: int, start: int, count: int) -> list[WParams]:
    """Uniform W-class draws: (a, b, c, d) is flat on the probability simplex."""
    u = uniform_stream(seed, _W_TAG, start, count, 4)
    e = -np.log1p(-u)
    e /= e.sum(axis=1, keepdims=True)
    return [WParams(a=float(r[0]), b=float(r[1]), c=float(r[2])) for r in e]
