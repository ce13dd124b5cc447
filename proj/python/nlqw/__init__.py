"""Nonlinear quantum walks on the line: evolution, scattering and weak limits."""

from ._core import (
    BaseCoin,
    CoinFamily,
    ConvergenceReport,
    DefectSample,
    Error,
    LatticeState,
    NonlinearCoinModel,
    ScatteringResult,
    VelocityDensity,
    density_moment,
    eigenpair,
    evolve,
    extract_asymptotic,
    group_velocity,
    k_branch,
    konno_density,
    limit_density,
    parse_config,
    position_distribution,
    run_density,
    run_evolve,
    run_scatter,
    run_verify,
    verify,
)

__all__ = [name for name in dir() if not name.startswith("_")]
