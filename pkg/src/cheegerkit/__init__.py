"""Spectral gaps of graph Hamiltonians and weighted Cheeger constants."""

__version__ = "0.1.0"

from .graph_core import (  # noqa: E402
    Hamiltonian,
    HostGraphEmbedding,
    LaplacianKind,
    SignedWeightedGraph,
    build_laplacian,
    dense_hamiltonian,
    embed_dirichlet,
    positive_subgraph,
)
from .spectral import (  # noqa: E402
    EigenSystem,
    GroundState,
    dirichlet_ground,
    eigendecompose,
    ground_state,
    ground_weighted_gap_quotient,
    rayleigh_quotient,
    spectrum,
)
from .cheeger import CheegerReport, cheeger_exhaustive, cheeger_sweep, cut_ratio, functional_ratio  # noqa: E402
from .stoquastic import cycle_signature, phase_pattern, rotate_to_real, stoquasticity_check  # noqa: E402
from .routing import (  # noqa: E402
    RoutingPlan,
    auto_route,
    check_simpler_reduction,
    compare_routed_gap,
    distributed_cheeger,
    validate_plan,
)
from .bounds import (  # noqa: E402
    BoundCertificate,
    verify_comparison,
    verify_epsilon_relaxed,
    verify_lower_nonstoquastic,
    verify_lower_stoquastic,
    verify_potential_bound,
    verify_subgraph_bottleneck,
    verify_upper,
)
from .baa import BAAConfig, BAARun, Schedule, evolve, estimate_h_from_samples, run_baa, sample_state, weyl_step  # noqa: E402
