"""Numerical toolkit for capacity bounds on quantum channels via their
complementary channels: channel/state representations, entropic kernels,
heuristic capacity estimators, SDP certificates, inequality-chain reports,
one-way distillation estimators, and a bi-PPT channel search.
"""

from .channels import (
    BipartiteState,
    Channel,
    ChannelError,
    ChoiMatrix,
    amplitude_damping,
    choi_state,
    completely_depolarizing,
    complementary_channel,
    complementary_state,
    depolarizing,
    erasure,
    identity_channel,
    kraus_to_choi,
    purify,
    random_channel,
    symmetric_side_channel,
    tensor,
)
from .entropy import (
    LabeledState,
    channel_coherent_information,
    coherent_information,
    conditional_mutual_information,
    entropy,
    mutual_information,
    relative_entropy,
)
from .optimize import DEFAULT_SEED, EstimateResult, OptOptions, ce, holevo_chi, p1, pe, q1, qe, qss_lower, r1_estimate
from .sdp import (
    SolverError,
    channel_distance,
    diamond_norm,
    eps_antidegradable,
    eps_degradable,
    f1,
    f2,
    ppt_check,
    ppt_distance,
    transpose_q_upper,
)
from .bounds import BoundReport, Term, approx_degradability_bounds, classical_bounds, qp_bounds, ss_bounds, strict_gap_certificate
from .distill import DistillEstimate, Instrument, d1_arrow, k1_arrow, state_bounds, state_order_epsilons
from .bippt import SearchConfig, SearchRecord, bippt_verdict, search

__version__ = "0.1.0"
