"""Tripartite correlation measures and Bell-CHSH complementarity checks
for three-qubit states.
"""
from .bell import (
    BellRecord,
    bell_b,
    bell_m,
    bell_m_closed,
    bmax,
    bmax_mixed,
    correlation_matrix,
    nogo_check,
)
from .complementarity import (
    FrontierBin,
    SlackRecord,
    convexity_chain_check,
    frontier_scan,
    lemma_split_check,
    mbv_dms_curve,
    mixed_claim_check,
    partner_m,
    slack,
    theorem_tangle_pair,
    theorem_w_max,
)
# the bare measure function stays at tricorr.discord.discord so the
# submodule name is not shadowed by a same-named callable
from .discord import (
    DEFAULT_CONVENTION,
    DmsBreakdown,
    conditional_entropy_min,
    discord_pure_cut,
    dms,
)
from .entanglement import (
    GgmBreakdown,
    TangleBreakdown,
    concurrence,
    ggm,
    ggm_closed,
    tangle_closed,
    tangle_hyperdet,
    tangle_pure,
    tangle_upper_bound,
)
from .errors import (
    MalformedStateError,
    ParameterError,
    UnsupportedClosedFormError,
    UnsupportedDimensionError,
)
from .qmath import partial_trace, von_neumann_entropy
from .states import (
    GhzParams,
    MbvParams,
    WParams,
    density,
    ghz_state,
    haar_block,
    haar_pure,
    induced_mixed,
    mbv_state,
    state_from_params,
    w_state,
)

__version__ = "0.1.0"

__all__ = [
    "BellRecord",
    "DEFAULT_CONVENTION",
    "DmsBreakdown",
    "FrontierBin",
    "GgmBreakdown",
    "GhzParams",
    "MalformedStateError",
    "MbvParams",
    "ParameterError",
    "SlackRecord",
    "TangleBreakdown",
    "UnsupportedClosedFormError",
    "UnsupportedDimensionError",
    "WParams",
    "bell_b",
    "bell_m",
    "bell_m_closed",
    "bmax",
    "bmax_mixed",
    "concurrence",
    "conditional_entropy_min",
    "convexity_chain_check",
    "correlation_matrix",
    "density",
    "discord_pure_cut",
    "dms",
    "frontier_scan",
    "ggm",
    "ggm_closed",
    "ghz_state",
    "haar_block",
    "haar_pure",
    "induced_mixed",
    "lemma_split_check",
    "mbv_dms_curve",
    "mbv_state",
    "mixed_claim_check",
    "nogo_check",
    "partial_trace",
    "partner_m",
    "slack",
    "state_from_params",
    "tangle_closed",
    "tangle_hyperdet",
    "tangle_pure",
    "tangle_upper_bound",
    "theorem_tangle_pair",
    "theorem_w_max",
    "von_neumann_entropy",
    "w_state",
]
