"""Collapse and revival of Rabi oscillations for a two-level atom in a lossy cavity (multi-mode Jaynes-Cummings)."""
from .calibrate import CalibrationProblem, collapse_time, f_of_g, revival_time, solve_coupling
from .dynamics import (
    TimeSeries,
    sweep,
    transition_probability_multimode,
    transition_probability_singlemode,
)
from .errors import ConvergenceError, InvalidInputError, NoRootError
from .model import (
    Calibration,
    DriveField,
    LossModel,
    ResonantSystem,
    energy_decay,
    escape_probability,
    field_fwhm,
    field_spectrum,
    field_spectrum_detuned,
    net_quality_factor,
    poisson_weights,
    single_photon_transition,
)
from .quad import (
    BACKEND,
    LineIntegralSpec,
    rabi_line_integral,
    rabi_line_integral_longtime,
    substituted_integrand,
    tail_bound,
)

__version__ = "0.1.0"
