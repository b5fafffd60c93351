"""Public goods game with generalized optional participation.

Numerical toolkit for the three-strategy replicator-mutator dynamics of
cooperators, defectors and non-participants, where abstaining yields an
outside payoff and injects a direct influence (help or harm) into the
game.  Provides closed-form payoffs with a brute-force oracle, adaptive
simplex-preserving integration, equilibrium and invasion analysis, and
parallel phase-diagram sweeps.
"""

__version__ = "0.1.0"

from .game import (  # noqa: F401
    GameParams,
    PayoffTriple,
    SimplexState,
    brute_force_payoffs,
    mean_payoffs,
    payoff_gap,
    population_mean,
)
from .svo import SvoClass, classify_svo  # noqa: F401
from .dynamics import (  # noqa: F401
    Classification,
    ClassifierControls,
    HamiltonianValue,
    IntegrationControls,
    IntegrationError,
    ReducedState,
    Trajectory,
    classify_long_run,
    hamiltonian,
    integrate,
    reduced_field,
    to_reduced,
    vector_field,
    write_trajectory_csv,
)
from .equilibria import (  # noqa: F401
    EdgeReport,
    EdgeRoot,
    Equilibrium,
    edge_dynamics,
    find_edge_root,
    find_interior_equilibrium,
    invasion_map,
    jacobian,
    stability_from_eigenvalues,
    stationary_points,
)
from .sweep import (  # noqa: F401
    RegimeCell,
    SweepComparison,
    SweepConfig,
    SweepResult,
    compare_sweeps,
    evaluate_cell,
    run_sweep,
    write_sweep_csv,
    write_sweep_metadata,
)
