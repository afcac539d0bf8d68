from ._core import (
    ConjugatePoint,
    ControllerState,
    LewisState,
    PhiSpec,
    audit_step_identity,
    audit_telescope,
    brute_min,
    controller_step,
    corollary_bound,
    eps_min,
    hypergraph_cuts,
    is_submodular,
    l1_sensitivity_average,
    l1_solve,
    lewis_weights,
    offline_submod_solve,
    phi_star,
    rademacher_opt,
    simulate_majority,
    tv_conditional_bound,
    tv_discrete,
    tv_product_bound,
    tv_uniform_intervals,
    weighted_median_theta,
)

__all__ = [
    "ConjugatePoint",
    "ControllerState",
    "LewisState",
    "PhiSpec",
    "audit_step_identity",
    "audit_telescope",
    "brute_min",
    "controller_step",
    "corollary_bound",
    "eps_min",
    "hypergraph_cuts",
    "is_submodular",
    "l1_sensitivity_average",
    "l1_solve",
    "lewis_weights",
    "offline_submod_solve",
    "phi_star",
    "rademacher_opt",
    "simulate_majority",
    "tv_conditional_bound",
    "tv_discrete",
    "tv_product_bound",
    "tv_uniform_intervals",
    "weighted_median_theta",
]
