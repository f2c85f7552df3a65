"""
Scattering, stability and output entanglement of a mechanical resonator
coupled to three cavities (one blue-detuned, two red-detuned with a direct
photon hopping between them).

All rates and frequencies are in MHz divided by 2 pi.
"""
from .entanglement import eof, eof_pair, log_negativity, tripartite_witness
from .errors import (
    ConditionError,
    ConvergenceError,
    NumericalError,
    SingularMatrixError,
    UnphysicalCovarianceError,
    UnstableOperatingPoint,
)
from .model import SystemParams, canonicalize, reference_params, sweet_spot
from .moments import output_covariance, reduce_pair, standard_form
from .scattering import closed_form, transmission
from .stability import is_stable_eig, is_stable_rh

__version__ = "0.1.0"

__all__ = [
    "ConditionError",
    "ConvergenceError",
    "NumericalError",
    "SingularMatrixError",
    "SystemParams",
    "UnphysicalCovarianceError",
    "UnstableOperatingPoint",
    "canonicalize",
    "closed_form",
    "eof",
    "eof_pair",
    "is_stable_eig",
    "is_stable_rh",
    "log_negativity",
    "output_covariance",
    "reduce_pair",
    "reference_params",
    "standard_form",
    "sweet_spot",
    "transmission",
    "tripartite_witness",
]
