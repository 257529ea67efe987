"""Depth-averaged solver for suspended sediment transport in turbulent
shallow flow: reduced evolution equations, steady states, vertical-profile
reconstruction, linear-spectrum diagnostics, and a rippled-bed scenario
driver."""

from .params import (Equilibrium, ModelParams, equilibrium_concentration,
                     falling_velocity, reference_concentration,
                     smagorinski_constant_consistency, steady_equilibrium)
from .profiles import (ProfileInputs, VerticalProfile, concentration_analytic,
                       concentration_profile, concentration_profile_steady,
                       eddy_diffusivity, sample_profile, shear_stress_profile,
                       velocity_profile, velocity_profile_steady)
from .solver import (FlowState, Grid, NonFiniteFieldError,
                     NonpositiveDepthError, SolverError, StepCounters,
                     Tendency, cfl_dt, ddx, ddy, regularized_speed, run,
                     step_rk4, tendency_full, tendency_leading,
                     tendency_reference)
from .spectrum import (SpectrumResult, compute_spectrum,
                       concentration_wavenumbers, decay_rates,
                       equilibrium_eddy_viscosity, velocity_wavenumbers)
from .config import ScenarioConfig, ConfigError, parse_config, parse_config_text, serialize_config
from .scenarios import (ProbeSeries, ScenarioResult, build_initial_state,
                        build_ripple_bed, emit_figure_data, froude,
                        run_scenario)

__version__ = "0.1.0"
