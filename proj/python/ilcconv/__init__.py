"""Convergence domains of iterative learning control around a first-order sampled plant."""

from ._core import (
    Error,
    InvalidArgument,
    PoleError,
    Unsupported,
    ab_from_plant,
    ac_region_analytic,
    build_lifted,
    gelfand_radius,
    iterate,
    lifted_spectral_radius,
    learning_taps,
    max_sv_sq,
    mc_region_analytic,
    no_ilc_gain_limits,
    plant_from_ab,
    run_sweep,
    simulate_trial,
    spectral_radius,
    sup_t,
    t_of_theta,
)

__all__ = [
    "Error",
    "InvalidArgument",
    "PoleError",
    "Unsupported",
    "ab_from_plant",
    "ac_region_analytic",
    "build_lifted",
    "gelfand_radius",
    "iterate",
    "lifted_spectral_radius",
    "learning_taps",
    "max_sv_sq",
    "mc_region_analytic",
    "no_ilc_gain_limits",
    "plant_from_ab",
    "run_sweep",
    "simulate_trial",
    "spectral_radius",
    "sup_t",
    "t_of_theta",
]
