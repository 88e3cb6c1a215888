"""Mutual-information decay along Langevin, ULA and proximal sampler chains."""

from ._midec import (
    CapabilityError,
    ChainFailure,
    ConfigError,
    DomainError,
    Error,
    InputError,
    OptimizationError,
    PreconditionError,
    bound_cov_from_mi,
    bound_mi_langevin,
    bound_mi_proximal,
    bound_mi_regularity_ld,
    bound_mi_regularity_ula,
    bound_mi_ula,
    iters_proximal,
    iters_ula,
    mi_plugin,
    ou_mi_exact,
    phi_divergence_gaussian,
    phi_mutual_info_gaussian,
    preset_json,
    preset_names,
    proximal_gaussian_mi_exact,
    run_chains,
    run_experiment,
    sobolev_evolution_langevin,
    sobolev_evolution_proximal,
    sobolev_evolution_ula,
    ula_gaussian_mi_exact,
)

__all__ = [name for name in dir() if not name.startswith("_")]
