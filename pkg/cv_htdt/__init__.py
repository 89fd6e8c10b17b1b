"""Gaussian phase-space algebra and the hybrid analog teleportation-direct transmission protocol."""

from .config import load_config_dotenv, load_toml_config, merge_options
from .distribution import (
    GeometryConfig,
    SourceSpec,
    distribute_resource,
    distributed_htdt_threshold,
    distributed_log_negativity,
    htdt_condition_distributed,
    position_independent_threshold,
    sweep_fig5,
    transmissivity,
)
from .errors import DimensionMismatchError, HTDTError, PhysicalityError, ValidationError
from .fidelity import (
    CodebookSpec,
    avg_fidelity,
    fidelity_an,
    fidelity_ef,
    fidelity_qt,
    fig3_table,
    infidelity_ratio,
    no_cloning_entanglement,
    optimized_fidelity,
)
from .gaussian import (
    ChannelSpec,
    GaussianMap,
    GaussianState,
    ResourceTriplet,
    apply_map,
    log_negativity,
    partial_trace,
    resource_to_state,
    symplectic_eigenvalues,
    tensor,
)
from .montecarlo import OracleEstimate, monte_carlo_oracle
from .protocol import (
    OptimizationResult,
    ProtocolParams,
    added_noise,
    htdt_beats_teleportation,
    noise_discarded,
    noise_ef,
    noise_qt,
    optimal_teleport_triplet,
    optimize_d,
    run_protocol_matrix,
    simulate_channel,
)
from .tables import enforce_column_order, validate_rows, write_csv

__all__ = [
    "HTDTError",
    "ValidationError",
    "DimensionMismatchError",
    "PhysicalityError",
    "GaussianState",
    "GaussianMap",
    "ResourceTriplet",
    "ChannelSpec",
    "apply_map",
    "tensor",
    "partial_trace",
    "symplectic_eigenvalues",
    "log_negativity",
    "resource_to_state",
    "ProtocolParams",
    "OptimizationResult",
    "run_protocol_matrix",
    "simulate_channel",
    "added_noise",
    "noise_qt",
    "noise_discarded",
    "noise_ef",
    "optimal_teleport_triplet",
    "htdt_beats_teleportation",
    "optimize_d",
    "OracleEstimate",
    "monte_carlo_oracle",
    "CodebookSpec",
    "avg_fidelity",
    "fidelity_qt",
    "fidelity_an",
    "fidelity_ef",
    "optimized_fidelity",
    "infidelity_ratio",
    "no_cloning_entanglement",
    "fig3_table",
    "GeometryConfig",
    "SourceSpec",
    "transmissivity",
    "distribute_resource",
    "distributed_log_negativity",
    "distributed_htdt_threshold",
    "position_independent_threshold",
    "htdt_condition_distributed",
    "sweep_fig5",
    "enforce_column_order",
    "validate_rows",
    "write_csv",
    "load_config_dotenv",
    "load_toml_config",
    "merge_options",
]
