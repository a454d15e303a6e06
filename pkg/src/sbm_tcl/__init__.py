"""Second-order steady state of the spin-boson model from TCL generators,
checked against the mean-force Gibbs state, plus TCL2 dynamics."""

__version__ = "0.1.0"

from .errors import ConvergenceError, DomainError, NumericalError, SbmError, ValidationError
from .spectral import CustomDensity, DqdSinc, Drude, SpectralDensity
from .generators import (
    GeneratorMatrix,
    SystemParams,
    Tcl2Cache,
    drude_tcl4_closed_form,
    tcl0,
    tcl2_asymptotic,
    tcl2_at_time,
    tcl4_f30,
    tcl4_f33,
)
from .steadystate import (
    BlochVector,
    SteadyStateReport,
    assemble_report,
    coherence_correction_mfgs,
    coherence_correction_tcl,
    gibbs_state,
    population_correction_mfgs,
    population_correction_tcl,
    v2_correction,
)
from .dynamics import NotConverged, Trajectory, detect_steady_state, evolve

__all__ = [
    "BlochVector", "ConvergenceError", "CustomDensity", "DomainError", "DqdSinc", "Drude",
    "GeneratorMatrix", "NotConverged", "NumericalError", "SbmError", "SpectralDensity",
    "SteadyStateReport", "SystemParams", "Tcl2Cache", "Trajectory", "ValidationError",
    "assemble_report", "coherence_correction_mfgs", "coherence_correction_tcl",
    "detect_steady_state", "drude_tcl4_closed_form", "evolve", "gibbs_state",
    "population_correction_mfgs", "population_correction_tcl", "tcl0", "tcl2_asymptotic",
    "tcl2_at_time", "tcl4_f30", "tcl4_f33", "v2_correction",
]
