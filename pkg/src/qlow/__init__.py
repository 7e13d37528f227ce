"""Simulation laboratory for low-depth quantum optimization mechanisms.

Diagonal cost functions over n-bit strings are evolved under alternating
problem phases and graph-Laplacian mixers; closed-form per-spin oracles,
relaxed-angle searches, mean-field stepping, iterated rounding, and scripted
experiment pipelines sit on top of the dense statevector core.

Conventions (everywhere in the package): bit i of the basis index is qubit i
(little-endian), Z_i |z> = (1 - 2 z_i) |z>, the mixer evolution is
exp(-i beta L_bar) with L_bar = -(D - A), and printed bitstrings put qubit 0
leftmost.
"""

from .analytic import (
    GammaBound,
    LandauZener,
    distribution_qaoa,
    gamma_success_bound,
    landau_zener,
    measure_vote_bound,
    optimal_gamma,
    single_spin_overlap,
)
from .ansatz import (
    Schedule,
    meanfield_evolve,
    meanfield_step,
    multilinear_value,
    product_state,
    qaoa_state,
)
from .errors import ConfigError, NumericError, QlowError, ResourceError
from .laplacians import (
    BallCut,
    CompleteGraph,
    CustomSparse,
    WeightedHypercube,
    ball_uniform_state,
    custom_from_edges,
    evolve,
    hamming_shell_state,
    hypercube,
    kinetic_energy,
    randomize_phases,
)
from .objectives import (
    CVaR,
    Combined,
    Gibbs,
    Mean,
    approximation_ratio,
    evaluate,
    improvement_proxy,
    mean_via_terms,
)
from .optimize import (
    RoundingConfig,
    SearchConfig,
    classical_restart_baseline,
    greedy_beta_branch,
    iterated_rounding,
    optimize_relaxed_schedule,
    optimize_schedule,
)
from .problems import (
    DiagonalProblem,
    ZTerm,
    bush,
    chain_detuned,
    conflicted_pairs,
    fisher_chain,
    freeze,
    from_dense,
    from_terms,
    grid_ferromagnet_2d,
    hamming_ramp,
    kspin_ferromagnet,
    maxcut_3regular,
    spike,
    uncoupled_spins,
)
from .statevector import (
    Statevector,
    apply_phase,
    basis_state,
    fwht,
    ground_state_mass,
    plus_state,
)

__version__ = "0.1.0"

__all__ = [
    "BallCut",
    "CVaR",
    "Combined",
    "CompleteGraph",
    "ConfigError",
    "CustomSparse",
    "DiagonalProblem",
    "GammaBound",
    "Gibbs",
    "LandauZener",
    "Mean",
    "NumericError",
    "QlowError",
    "ResourceError",
    "RoundingConfig",
    "Schedule",
    "SearchConfig",
    "Statevector",
    "WeightedHypercube",
    "ZTerm",
    "apply_phase",
    "approximation_ratio",
    "ball_uniform_state",
    "basis_state",
    "bush",
    "chain_detuned",
    "classical_restart_baseline",
    "conflicted_pairs",
    "custom_from_edges",
    "distribution_qaoa",
    "evaluate",
    "evolve",
    "fisher_chain",
    "freeze",
    "from_dense",
    "from_terms",
    "fwht",
    "gamma_success_bound",
    "greedy_beta_branch",
    "grid_ferromagnet_2d",
    "ground_state_mass",
    "hamming_ramp",
    "hamming_shell_state",
    "hypercube",
    "improvement_proxy",
    "iterated_rounding",
    "kinetic_energy",
    "kspin_ferromagnet",
    "landau_zener",
    "maxcut_3regular",
    "mean_via_terms",
    "meanfield_evolve",
    "meanfield_step",
    "measure_vote_bound",
    "multilinear_value",
    "optimal_gamma",
    "optimize_relaxed_schedule",
    "optimize_schedule",
    "plus_state",
    "product_state",
    "qaoa_state",
    "randomize_phases",
    "single_spin_overlap",
    "spike",
    "uncoupled_spins",
]
