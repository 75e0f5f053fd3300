"""Signed-permutation automaton for wave transport on a lattice ring.

Four bit species hop on a checkerboard: right and left movers, each carrying
a two-component internal sign. Scattering events flip the direction of motion
and one of the two signs, which is exactly a discrete wave equation in
disguise; the package provides the automaton, the matching wave-equation
solvers, and tooling to compare the two on the same disorder field.
"""

from .errors import (
    DimensionMismatchError,
    GeometryError,
    InfeasiblePlanError,
    InvalidSiteError,
    NonUnitaryError,
    NormalizationError,
    OversizedKernelError,
    RangeOverflowError,
)
from .lattice import (
    LEFT,
    RIGHT,
    LatticeConfig,
    SitePosition,
    physical_coordinate,
    shift,
    slice_coordinates,
)
from .disorder import (
    DisorderField,
    DisorderPlan,
    PotentialProfile,
    block_counts,
    coarse_grained_potential,
    load_field,
    plan_from_potential,
    save_field,
    synthesize_disorder,
)
from .automaton import (
    ComplexWave,
    RealWave,
    SignedPermutation,
    TrajectoryState,
    build_step_operator,
    decode_wave,
    encode_wave,
    evolve_trajectories,
    evolve_wave,
    load_wave,
    save_wave,
)
from .quantum import (
    BranchFoldWarning,
    DiracSolver,
    HamiltonianMatrix,
    MomentumContentWarning,
    MomentumGrid,
    SchrodingerSolver,
    SchrodingerWave,
    SmoothnessWarning,
    complex_step_matrix,
    dirac_evolve,
    effective_hamiltonian,
    free_hamiltonian,
    free_step_matrix,
    leading_hamiltonian,
    nonrel_embed,
    scatter_hamiltonian,
    scatter_step_matrix,
    schrodinger_evolve,
)
from .observables import (
    ComparisonReport,
    OccupationDistribution,
    SmoothingKernel,
    coarse_grain,
    compare_distributions,
    momentum_expectation,
    occupation_from_complex,
    occupation_from_schrodinger,
    occupation_from_trajectories,
    occupation_probabilities,
)
from .experiments import (
    ExperimentConfig,
    RunReport,
    inspect_field,
    load_config,
    parse_config,
    run_experiment,
    tapered_gaussian,
)

__version__ = "0.1.0"

__all__ = [
    "BranchFoldWarning",
    "ComparisonReport",
    "ComplexWave",
    "DimensionMismatchError",
    "DiracSolver",
    "DisorderField",
    "DisorderPlan",
    "ExperimentConfig",
    "GeometryError",
    "HamiltonianMatrix",
    "InfeasiblePlanError",
    "InvalidSiteError",
    "LEFT",
    "LatticeConfig",
    "MomentumContentWarning",
    "MomentumGrid",
    "NonUnitaryError",
    "NormalizationError",
    "OccupationDistribution",
    "OversizedKernelError",
    "PotentialProfile",
    "RIGHT",
    "RangeOverflowError",
    "RealWave",
    "RunReport",
    "SchrodingerSolver",
    "SchrodingerWave",
    "SignedPermutation",
    "SitePosition",
    "SmoothingKernel",
    "SmoothnessWarning",
    "TrajectoryState",
    "block_counts",
    "build_step_operator",
    "coarse_grain",
    "coarse_grained_potential",
    "compare_distributions",
    "complex_step_matrix",
    "decode_wave",
    "dirac_evolve",
    "effective_hamiltonian",
    "encode_wave",
    "evolve_trajectories",
    "evolve_wave",
    "free_hamiltonian",
    "free_step_matrix",
    "inspect_field",
    "leading_hamiltonian",
    "load_config",
    "load_field",
    "load_wave",
    "momentum_expectation",
    "nonrel_embed",
    "occupation_from_complex",
    "occupation_from_schrodinger",
    "occupation_from_trajectories",
    "occupation_probabilities",
    "parse_config",
    "physical_coordinate",
    "plan_from_potential",
    "run_experiment",
    "save_field",
    "save_wave",
    "scatter_hamiltonian",
    "scatter_step_matrix",
    "schrodinger_evolve",
    "shift",
    "slice_coordinates",
    "synthesize_disorder",
    "tapered_gaussian",
    "__version__",
]
