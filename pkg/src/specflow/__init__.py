"""Continuous tracking of self-adjoint spectra, spectral flow and flat-torus
Dirac spectra."""

from .families import OperatorFamily, concatenate, constant_family, linear_family, sample_spectrum
from .growth import FamilyConstants, family_constants, growth_envelope, safe_step
from .lifting import TrackedPath, TrackingError, negative_index_flow_oracle, spectral_flow, track_path
from .linalg import eigh, eigvalsh
from .matching import Ambiguous, NoMatch, ShiftMatch, even_cover_radius, match_windows, monotone_rearrange
from .spectrum import ConfDistance, SpectrumWindow, canonical_window, d_a, quotient_distance, shift, spectral_part
from .torus import FlatTorus, lattice_enumerate, pullback, torus_spectrum

__version__ = "0.1.0"

__all__ = [
    "Ambiguous",
    "ConfDistance",
    "FamilyConstants",
    "FlatTorus",
    "NoMatch",
    "OperatorFamily",
    "ShiftMatch",
    "SpectrumWindow",
    "TrackedPath",
    "TrackingError",
    "canonical_window",
    "concatenate",
    "constant_family",
    "d_a",
    "eigh",
    "eigvalsh",
    "even_cover_radius",
    "family_constants",
    "growth_envelope",
    "lattice_enumerate",
    "linear_family",
    "match_windows",
    "monotone_rearrange",
    "negative_index_flow_oracle",
    "pullback",
    "quotient_distance",
    "safe_step",
    "sample_spectrum",
    "shift",
    "spectral_flow",
    "spectral_part",
    "torus_spectrum",
    "track_path",
]
