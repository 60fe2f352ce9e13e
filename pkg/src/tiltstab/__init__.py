"""Exact tilt-stability computations on threefolds of the form Y x Z."""

from __future__ import annotations

from .chern import ProjectedChern, beta_bar, delta_bar, project, twist
from .exactnum import Polynomial, QuadraticNumber, parse_scalar
from .geometry import make_model
from .tilt import INFINITY, TiltPoint, bmt_surplus, central_charge, nu_slope, reduced_check

__all__ = [
    "INFINITY",
    "Polynomial",
    "ProjectedChern",
    "QuadraticNumber",
    "TiltPoint",
    "beta_bar",
    "bmt_surplus",
    "central_charge",
    "delta_bar",
    "make_model",
    "nu_slope",
    "parse_scalar",
    "project",
    "reduced_check",
    "twist",
]

__version__ = "0.1.0"
