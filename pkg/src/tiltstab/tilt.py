"""Tilt slopes, the central charge and the BMT inequality on projected characters.

Every function here takes an :class:`~tiltstab.chern.ProjectedChern` and
exact tilt parameters.  ``alpha`` may be a rational, a quadratic number or a
:class:`~tiltstab.exactnum.Polynomial` in a symbolic ``alpha``; formulas
only ever use ``alpha^2`` except the imaginary part of the central charge.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .chern import ProjectedChern, beta_bar, beta_bar_hypotheses, twist
from .exactnum import DomainError, Polynomial, QuadraticNumber, quad_sign, quad_sqrt, simplify


@functools.total_ordering
class _Infinity:
    """``+inf`` of the slope codomain, larger than every exact scalar."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self

    def __hash__(self) -> int:
        return hash("+inf")

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "+inf"


INFINITY = _Infinity()


@dataclass(frozen=True)
class TiltPoint:
    alpha: object
    beta: object

    def __post_init__(self) -> None:
        object.__setattr__(self, "alpha", simplify(self.alpha))
        object.__setattr__(self, "beta", simplify(self.beta))
        if not isinstance(self.alpha, Polynomial) and quad_sign(self.alpha) <= 0:
            raise DomainError("alpha must be positive")

    @property
    def alpha_sq(self):
        return simplify(self.alpha * self.alpha)

    @classmethod
    def symbolic(cls, beta=0) -> TiltPoint:
        return cls(Polynomial.variable("alpha"), beta)


@dataclass(frozen=True)
class CentralChargeValue:
    """``Z = re + i*sqrt(3)*im_over_sqrt3``; the sqrt(3) stays symbolic."""

    re: object
    im_over_sqrt3: object

    @property
    def im_sign(self) -> int:
        return quad_sign(self.im_over_sqrt3)


def mu_slope(p: ProjectedChern, beta):
    if p.e0 == 0:
        return INFINITY
    return simplify(twist(p, beta).e1 / p.e0)


def nu_numerator(p: ProjectedChern, t: TiltPoint):
    tw = twist(p, t.beta)
    return simplify(tw.e2 - t.alpha_sq * tw.e0 / 2)


def nu_slope(p: ProjectedChern, t: TiltPoint):
    tw = twist(p, t.beta)
    if tw.e1 == 0:
        return INFINITY
    return simplify((tw.e2 - t.alpha_sq * tw.e0 / 2) / tw.e1)


def central_charge(p: ProjectedChern, t: TiltPoint) -> CentralChargeValue:
    """``-int e^{-i omega} ch^beta`` with ``omega = alpha sqrt(3) H``."""
    tw = twist(p, t.beta)
    re = -tw.e3 + Fraction(3, 2) * t.alpha_sq * tw.e1
    im = t.alpha * (tw.e2 - t.alpha_sq * tw.e0 / 2)
    return CentralChargeValue(simplify(re), simplify(im))


def central_charge_real_alt(p: ProjectedChern, t: TiltPoint):
    """Real part in the normalization whose value on ``O_D[1]`` at beta = 1 is
    ``(3/8)(1 - alpha^2)``: ``-ch3^beta + alpha^2/6 H^2 ch1^beta``."""
    tw = twist(p, t.beta)
    return simplify(-tw.e3 + t.alpha_sq * tw.e1 / 6)


def bmt_surplus(p: ProjectedChern, t: TiltPoint):
    """``alpha^2/6 H^2 ch1^beta - ch3^beta``; non-negative when the inequality holds."""
    tw = twist(p, t.beta)
    return simplify(t.alpha_sq * tw.e1 / 6 - tw.e3)


@dataclass(frozen=True)
class ReducedCheck:
    verdict: bool
    value: object
    beta_bar: object
    hypotheses: dict

    def __iter__(self):
        return iter((self.verdict, self.value))


def reduced_check(p: ProjectedChern) -> ReducedCheck:
    """Evaluate ``ch3`` twisted at beta-bar exactly and test ``<= 0``."""
    b = beta_bar(p)
    value = twist(p, b).e3
    return ReducedCheck(quad_sign(value) <= 0, value, b, beta_bar_hypotheses(p))


INDEPENDENT = "independent"
EMPTY = "empty"


def nu_zero_alpha(p: ProjectedChern, beta):
    """``alpha > 0`` with ``nu_{alpha,beta}(p) = 0``, or ``"independent"``/``"empty"``."""
    tw = twist(p, beta)
    if tw.e0 == 0:
        return INDEPENDENT if tw.e2 == 0 else EMPTY
    radicand = simplify(2 * tw.e2 / tw.e0)
    if isinstance(radicand, QuadraticNumber):
        raise DomainError("alpha^2 on the nu = 0 locus is irrational; no exact square root")
    if radicand <= 0:
        return EMPTY
    return quad_sqrt(radicand)
