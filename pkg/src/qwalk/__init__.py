"""Right spectra of quaternionic Grover-type walks and weighted graph zeta functions."""

from .errors import QWalkError
from .graph import Graph, load, load_path
from .qlinalg import QuaternionMatrix, RightSpectrum, is_unitary, psi, right_spectrum
from .quat import Quaternion, class_rep, parse_quaternion
from .walk import (
    CoinMap,
    build_pm,
    build_U,
    check_unitary_conditions,
    grover_spectrum,
    spectrum_direct,
    spectrum_via_mapping,
)
from .zeta import ihara_edge, ihara_vertex, weighted_edge, weighted_vertex

__version__ = "0.1.0"

__all__ = [
    "QWalkError",
    "Graph",
    "load",
    "load_path",
    "Quaternion",
    "class_rep",
    "parse_quaternion",
    "QuaternionMatrix",
    "RightSpectrum",
    "psi",
    "right_spectrum",
    "is_unitary",
    "CoinMap",
    "build_U",
    "build_pm",
    "check_unitary_conditions",
    "spectrum_direct",
    "spectrum_via_mapping",
    "grover_spectrum",
    "ihara_edge",
    "ihara_vertex",
    "weighted_edge",
    "weighted_vertex",
]
