"""Exact computations in the finitary symmetric group, its group ring and its characters."""

from .characters import (
    ClassFunction,
    GramCertificate,
    ThomaParameters,
    certify_psd,
    gram_matrix,
    mixture_eval,
    thoma_eval,
    thoma_factor,
)
from .group_ring import GroupRingElement, Scalar, parse_element
from .perm import CycleType, Perm, parse_cycles
from .subalgebra import NormalSubgroup, expectation

__all__ = [
    "ClassFunction",
    "CycleType",
    "GramCertificate",
    "GroupRingElement",
    "NormalSubgroup",
    "Perm",
    "Scalar",
    "ThomaParameters",
    "certify_psd",
    "expectation",
    "gram_matrix",
    "mixture_eval",
    "parse_cycles",
    "parse_element",
    "thoma_eval",
    "thoma_factor",
]

__version__ = "0.1.0"
