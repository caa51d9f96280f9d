"""Geometric-phase relaxation dynamics of driven non-reciprocal thermal networks.

The package splits into:

- :mod:`berryheat.network` -- thermal networks, driving laws, matrix assembly
- :mod:`berryheat.spectral` -- biorthogonal eigensystems and branch tracking
- :mod:`berryheat.phases` -- dynamical/geometric phase accumulation, adiabatic state
- :mod:`berryheat.geometry` -- parameter-space connection, curvature, loop integrals
- :mod:`berryheat.integrator` -- exact RK4 reference integration
- :mod:`berryheat.scenario` -- configuration files and bundled presets
- :mod:`berryheat.pipeline` -- end-to-end scenario helpers
- :mod:`berryheat.checks` / :mod:`berryheat.cli` -- invariant suite and front end
"""

from .errors import (
    BerryheatError,
    ConfigError,
    ExceptionalPointError,
    GaugeError,
    GridTooCoarseError,
    InstabilityError,
    InvalidModelError,
    OpenPathError,
    ParametrizationError,
)
from .geometry import (
    FieldMap,
    ParamPath,
    curvature,
    field_map,
    loop_integral,
    surface_integral,
    two_body_path,
    vector_potential,
    winding_numbers,
)
from .integrator import (
    DeviationReport,
    Trajectory,
    compare,
    integrate_exact,
    step_doubling_validate,
)
from .network import (
    DrivingProtocol,
    TabulatedConductance,
    ThermalNetwork,
    ThermalState,
    TwoBodyDriving,
    augmented_matrix,
    conductance_matrix,
    source_vector,
    toy_conductances,
    two_body_network,
)
from .phases import (
    PhaseTrajectory,
    accumulate_phases,
    adiabatic_state,
    adiabatic_trajectory,
    dynamical_phase,
    expansion_constants,
    geometric_phase,
    two_body_geometric_phase,
)
from .pipeline import (
    adiabatic_pipeline,
    branch_paths,
    eigen_trajectory,
    exact_trajectory,
    relaxation_window,
)
from .scenario import Scenario, common_period, load_config, parse_config, preset
from .spectral import (
    BiorthogonalBasis,
    EigenTrajectory,
    eigendecompose,
    track_branches,
    two_body_eigensystem,
    two_body_eigenvalues,
    two_body_parametrization,
)

__version__ = "0.1.0"
