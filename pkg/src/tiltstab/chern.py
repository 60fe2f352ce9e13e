"""H-projected Chern vectors, twisting by ``beta H``, and the discriminant."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import DomainError, quad_sign, quad_sqrt, simplify
from .geometry import CohVector, DivisorClass, ModelError, ThreefoldModel, intersect3, is_ample


@dataclass(frozen=True)
class ProjectedChern:
    """``(H^3 ch0, H^2 ch1, H ch2, ch3)`` with exact entries."""

    e0: object
    e1: object
    e2: object
    e3: object

    def __post_init__(self) -> None:
        for name in ("e0", "e1", "e2", "e3"):
            object.__setattr__(self, name, simplify(getattr(self, name)))

    @classmethod
    def of(cls, *entries) -> ProjectedChern:
        from .exactnum import parse_scalar

        vals = [parse_scalar(e) if isinstance(e, str) else e for e in entries]
        if len(vals) != 4:
            raise ValueError("a projected character has four entries")
        return cls(*vals)

    def astuple(self) -> tuple:
        return (self.e0, self.e1, self.e2, self.e3)

    def __iter__(self):
        return iter(self.astuple())

    def __add__(self, other: ProjectedChern) -> ProjectedChern:
        return ProjectedChern(*(a + b for a, b in zip(self, other)))

    def __sub__(self, other: ProjectedChern) -> ProjectedChern:
        return ProjectedChern(*(a - b for a, b in zip(self, other)))

    def __neg__(self) -> ProjectedChern:
        return ProjectedChern(*(-a for a in self))

    def __mul__(self, c) -> ProjectedChern:
        return ProjectedChern(*(c * a for a in self))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(a == 0 for a in self)


def project(model: ThreefoldModel, H: DivisorClass, v: CohVector) -> ProjectedChern:
    if not is_ample(model, H):
        raise ModelError("polarization H is not ample")
    return ProjectedChern(
        v.ch0 * intersect3(model, H, H, H),
        intersect3(model, H, H, v.ch1),
        v.pair_ch2(H),
        v.ch3,
    )


def twist(p: ProjectedChern, beta) -> ProjectedChern:
    """``H.ch^beta = H.(e^{-beta H} ch)``."""
    e0, e1, e2, e3 = p
    b2 = beta * beta
    return ProjectedChern(
        e0,
        e1 - beta * e0,
        e2 - beta * e1 + b2 * e0 / 2,
        e3 - beta * e2 + b2 * e1 / 2 - b2 * beta * e0 / 6,
    )


def delta_bar(p: ProjectedChern):
    return simplify(p.e1 * p.e1 - 2 * p.e0 * p.e2)


def beta_bar(p: ProjectedChern):
    """Twist at which ``H ch2^beta`` vanishes: smaller root, or ``e2/e1`` in rank 0."""
    if p.e0 == 0:
        if p.e1 == 0:
            raise DomainError("beta-bar undefined for this character (e0 = e1 = 0)")
        return simplify(p.e2 / p.e1)
    disc = delta_bar(p)
    if quad_sign(disc) < 0:
        raise DomainError(f"discriminant {disc} is negative")
    return simplify((p.e1 - quad_sqrt(disc)) / p.e0)


def beta_bar_hypotheses(p: ProjectedChern) -> dict[str, bool]:
    """Flags for ``ch0 >= 0`` and ``beta-bar in [0, 1)``; reported, never enforced."""
    b = beta_bar(p)
    return {
        "ch0_nonnegative": quad_sign(p.e0) >= 0,
        "beta_bar_in_unit_interval": quad_sign(b) >= 0 and quad_sign(b - 1) < 0,
    }


def line_bundle_projection(model: ThreefoldModel, H: DivisorClass, c) -> ProjectedChern:
    """Projection of ``O(cH)``: ``H^3 (1, c, c^2/2, c^3/6)`` except ``ch3``."""
    from .geometry import chern_of_line_bundle

    return project(model, H, chern_of_line_bundle(model, H * Fraction(c)))
