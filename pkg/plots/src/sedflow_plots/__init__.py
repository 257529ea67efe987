"""Figure rendering for sedflow CSV outputs."""

from .figures import (FigureSpec, load_csv, plot_profiles, plot_shear_profile,
                      plot_snapshot, plot_spectrum, plot_steepness,
                      plot_timeseries, plot_velocity_profile)

__version__ = "0.1.0"
