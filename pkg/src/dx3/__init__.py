"""Classical Darboux III oscillator: factorisation, closed-form motion and a numerical oracle."""
from .errors import (
    DomainError,
    DX3Error,
    EventNotFound,
    MetricSingular,
    NoRealRoots,
    OffShell,
    RegimeError,
    SingularityApproach,
    StepFailure,
)
from .model import (
    CartesianState,
    EnergyRegime,
    FradkinTensor,
    Params,
    RadialState,
    classify_energy,
    demkov_fradkin,
    effective_potential,
    hamiltonian_nd,
    kinetic_factor,
    momentum_on_shell,
    potential_minimum,
    radial_hamiltonian,
    singular_radius,
    to_hyperspherical,
    turning_points,
)
from .sga import (
    LadderValue,
    SGARegime,
    StructureFunctions,
    amplitude,
    ladder,
    ladder_deformed,
    ladder_euclidean,
    ladder_unbounded,
    poisson_bracket,
    structure_functions,
    time_dependent_constant,
)
from .solutions import (
    OrbitGeometry,
    TrajectorySample,
    euclid_trajectory,
    invert_time,
    orbit_geometry,
    phase_from_initial,
    radial_period,
    time_of_radius_bounded,
    time_of_radius_unbounded,
)
from .oracle import (
    ConservationReport,
    IntegratorConfig,
    conservation_report,
    grid_minimize_potential,
    integrate_nd,
    integrate_radial,
    oracle_period,
    oracle_time_of_radius,
)

__version__ = "0.1.0"
