"""Numerical walls in the (beta, alpha) half-plane and the plane counter-example.

Equality of tilt slopes of two characters ``v, w`` is, after clearing
denominators,

    k (beta^2 + alpha^2) + l beta + c = 0,
    k = (v1 w0 - v0 w1)/2,  l = v0 w2 - v2 w0,  c = v2 w1 - v1 w2,

a circle centred on the beta-axis when ``k != 0`` and a vertical line when
``k = 0, l != 0``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .chern import ProjectedChern, delta_bar, project, twist
from .exactnum import quad_sign, quad_sqrt, simplify
from .geometry import ThreefoldModel, cy3_with_plane, intersect3, is_ample, structure_sheaf_of_plane
from .tilt import (
    EMPTY,
    INDEPENDENT,
    TiltPoint,
    bmt_surplus,
    central_charge,
    central_charge_real_alt,
    nu_numerator,
    nu_zero_alpha,
)

NO_WALL = "no wall"
EVERYWHERE_EQUAL = "everywhere equal"


@dataclass(frozen=True)
class Wall:
    """Semicircle ``(beta - center)^2 + alpha^2 = radius^2``, or a vertical
    line ``beta = center`` when ``radius`` is None."""

    center_beta: object
    radius: object
    pair: tuple[ProjectedChern, ProjectedChern] = field(compare=False)

    @property
    def vertical(self) -> bool:
        return self.radius is None

    @property
    def radius_squared(self):
        return None if self.radius is None else simplify(self.radius * self.radius)

    def key(self) -> tuple:
        return (self.center_beta, self.radius_squared)


def wall_equation(v: ProjectedChern, w: ProjectedChern) -> tuple:
    k = simplify((v.e1 * w.e0 - v.e0 * w.e1) / 2)
    l = simplify(v.e0 * w.e2 - v.e2 * w.e0)
    c = simplify(v.e2 * w.e1 - v.e1 * w.e2)
    return k, l, c


def wall_between(v: ProjectedChern, w: ProjectedChern):
    k, l, c = wall_equation(v, w)
    if k == 0:
        if l == 0:
            return EVERYWHERE_EQUAL if c == 0 else NO_WALL
        return Wall(simplify(-c / l), None, (v, w))
    center = simplify(-l / (2 * k))
    r2 = simplify(center * center - c / k)
    if quad_sign(r2) <= 0:
        return NO_WALL
    return Wall(center, quad_sqrt(r2), (v, w))


def wall_center_rank0(p: ProjectedChern):
    if p.e0 != 0:
        raise ValueError("wall_center_rank0 needs a rank-zero character")
    if p.e1 == 0:
        raise ValueError("e1 = 0: no semicircular walls")
    return simplify(p.e2 / p.e1)


def sample_wall_points(wall: Wall, n: int = 8) -> list[TiltPoint]:
    """Rational beta values across the wall with exact alpha on it."""
    points = []
    if wall.vertical:
        for i in range(1, n + 1):
            points.append(TiltPoint(Fraction(i, 2), wall.center_beta))
        return points
    for i in range(1, n + 1):
        # rational points on the unit circle: ((1-t^2)/(1+t^2), 2t/(1+t^2))
        t = Fraction(i, n + 1)
        cos = (1 - t * t) / (1 + t * t)
        sin = 2 * t / (1 + t * t)
        points.append(TiltPoint(wall.radius * sin, wall.center_beta + wall.radius * cos))
    return points


def slopes_agree(v: ProjectedChern, w: ProjectedChern, t: TiltPoint) -> bool:
    """Cross-multiplied nu equality, valid even where one denominator vanishes."""
    tv, tw = twist(v, t.beta), twist(w, t.beta)
    return nu_numerator(v, t) * tw.e1 == nu_numerator(w, t) * tv.e1


# ---------------------------------------------------------------------------
# destabilizer scan


def _grid(lo, hi, max_den: int) -> list[Fraction]:
    lo, hi = Fraction(lo), Fraction(hi)
    values = set()
    for q in range(1, max_den + 1):
        start = -((-lo * q).__floor__())
        p = start
        while Fraction(p, q) <= hi:
            values.add(Fraction(p, q))
            p += 1
    return sorted(values)


def destabilizer_scan(
    v: ProjectedChern,
    box: Sequence[tuple],
    max_den: int = 1,
) -> list[Wall]:
    """Walls of ``v`` against every truncated character ``w`` in ``box``.

    ``box`` gives ``(lo, hi)`` for ``e0, e1, e2``; entries have denominator at
    most ``max_den``.  Candidates need ``Delta(w) >= 0`` and
    ``Delta(v - w) >= 0``.  The box is an explicit search region, not a
    proof that no other walls exist.
    """
    if quad_sign(delta_bar(v)) < 0:
        raise ValueError("v must have non-negative discriminant")
    if not box or any(Fraction(lo) > Fraction(hi) for lo, hi in box):
        return []
    axes = [_grid(lo, hi, max_den) for lo, hi in box[:3]]
    seen: dict = {}
    for e0, e1, e2 in itertools.product(*axes):
        w = ProjectedChern(e0, e1, e2, 0)
        if w.is_zero():
            continue
        if quad_sign(delta_bar(w)) < 0 or quad_sign(delta_bar(v - w)) < 0:
            continue
        wall = wall_between(v, w)
        if isinstance(wall, Wall) and wall.key() not in seen:
            seen[wall.key()] = wall
    return sorted(seen.values(), key=_wall_sort_key)


def _wall_sort_key(wall: Wall):
    r2 = wall.radius_squared
    return (wall.vertical, float(wall.center_beta), float(r2) if r2 is not None else 0.0, str(wall.center_beta), str(r2))


# ---------------------------------------------------------------------------
# BMT sign survey


SATURATED = "saturated"
SATISFIED = "satisfied"
VIOLATED = "violated-at-character-level"


@dataclass
class ScanEntry:
    character: ProjectedChern
    beta: object
    alpha: object
    surplus: object
    status: str


@dataclass
class BMTScanReport:
    entries: list = field(default_factory=list)
    classification: dict = field(default_factory=dict)
    note: str = (
        "a character-level violation contradicts the inequality only if a "
        "tilt-semistable object with that character exists"
    )


def _status(surplus) -> str:
    sgn = quad_sign(surplus)
    return SATURATED if sgn == 0 else (SATISFIED if sgn > 0 else VIOLATED)


def bmt_scan(
    characters: Iterable[ProjectedChern],
    betas: Sequence,
    alphas: Sequence = (),
) -> BMTScanReport:
    """Evaluate the BMT surplus of each character on its ``nu = 0`` locus.

    For each grid ``beta`` the locus is solved for ``alpha``; when the locus
    does not constrain ``alpha`` (rank zero with ``H ch2^beta = 0``) the
    ``alphas`` grid is used instead.
    """
    report = BMTScanReport()
    for idx, p in enumerate(characters):
        statuses = []
        for beta in betas:
            a = nu_zero_alpha(p, beta)
            if a == EMPTY:
                continue
            candidates = alphas if a == INDEPENDENT else [a]
            for alpha in candidates:
                t = TiltPoint(alpha, beta)
                s = bmt_surplus(p, t)
                st = _status(s)
                statuses.append(st)
                report.entries.append(ScanEntry(p, simplify(beta), t.alpha, s, st))
        if statuses:
            if VIOLATED in statuses:
                overall = VIOLATED
            elif all(st == SATURATED for st in statuses):
                overall = SATURATED
            else:
                overall = SATISFIED
            report.classification[idx] = overall
    return report


# ---------------------------------------------------------------------------
# the plane in a Calabi-Yau threefold


def cy_polarization(model: ThreefoldModel, m: int):
    return model.divisor(L=m, D=Fraction(-1, 2))


def radius_bound(s, m: int, r0: int = 1) -> Fraction:
    """``9 / (8 m^3 r0 s - 9 r0)``, cross-checked against ``H^3`` on the CY model."""
    s = Fraction(s)
    denom = 8 * m**3 * r0 * s - 9 * r0
    if denom <= 0:
        raise ValueError("8 m^3 r0 s - 9 r0 must be positive")
    model = cy3_with_plane(s)
    H = cy_polarization(model, m)
    r_A = intersect3(model, H, H, H) * r0
    if 8 * r_A != denom:
        raise AssertionError("H^3 on the model disagrees with m^3 s - 9/8")
    return Fraction(9) / denom


@dataclass(frozen=True)
class CounterexampleCertificate:
    s: Fraction
    m: int
    H: tuple
    projected: ProjectedChern
    twisted: ProjectedChern
    nu_at_beta1: object
    radius_bound: Fraction
    rez_thresholds: tuple
    window: tuple | None
    checks: dict

    @property
    def conservative_window(self):
        return self.window

    @property
    def window_nonempty(self) -> bool:
        return self.window is not None

    @property
    def alt_window(self):
        lo, hi = self.radius_bound, max(self.rez_thresholds)
        return (lo, hi) if lo < hi else None


EXPECTED_PROJECTION = ProjectedChern(0, Fraction(9, 4), Fraction(9, 4), Fraction(3, 2))
EXPECTED_TWIST = ProjectedChern(0, Fraction(9, 4), 0, Fraction(3, 8))


def counterexample_certificate(s, m: int) -> CounterexampleCertificate:
    s = Fraction(s)
    if m < 2:
        raise ValueError("m must be at least 2")
    model = cy3_with_plane(s)
    H = cy_polarization(model, m)
    assert is_ample(model, H)
    projected = project(model, H, structure_sheaf_of_plane(model))
    twisted = twist(projected, 1)
    symbolic = TiltPoint.symbolic(beta=1)
    nu_num = nu_numerator(projected, symbolic)
    shifted = -projected
    re_conv = central_charge(shifted, symbolic).re
    re_app = central_charge_real_alt(shifted, symbolic)
    # each real part is c0 - c2 alpha^2 with c0, c2 > 0; threshold sqrt(c0/c2)
    thresholds = tuple(
        sorted(quad_sqrt(simplify(re.coefficient(0) / -re.coefficient(2))) for re in (re_conv, re_app))
    )
    bound = radius_bound(s, m, 1)
    low = min(thresholds)
    window = (bound, low) if bound < low else None
    checks = {
        "projection_matches": projected == EXPECTED_PROJECTION,
        "twist_matches": twisted == EXPECTED_TWIST,
        "nu_identically_zero": nu_num == 0,
        "wall_center": wall_center_rank0(projected),
        "radius_bound_below_one": bound < 1,
        "central_charge_real_convention": str(re_conv),
        "central_charge_real_alt": str(re_app),
        "thresholds_disagree": thresholds[0] != thresholds[1],
    }
    return CounterexampleCertificate(
        s, m, tuple(H), projected, twisted, nu_num, bound, thresholds, window, checks
    )
