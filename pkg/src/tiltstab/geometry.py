"""Intersection-ring models of the four threefolds.

Each model carries a small divisor basis and a symmetric trilinear form on
it.  Three of them are products ``Y x Z`` of a toric factor ``Y`` (P1, P2,
P1xP1) with an abelian factor ``Z`` (an abelian surface or an elliptic
curve); the fourth is a Calabi-Yau threefold containing a plane, modelled
only by the intersection numbers of ``L`` and the plane ``D``.

Second Chern characters are kept as linear functionals on divisors (the
value of ``ch2 . g`` for each basis divisor ``g``), which is all the
projections and Riemann-Roch ever need.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactnum import Polynomial, PolynomialInM, as_fraction, simplify


class ModelError(ValueError):
    """Operation not available (or not decidable) on this model."""


PRODUCT_KINDS = ("P1xS", "P2xC", "P1xP1xC")
KIND_ALIASES = {
    "p1xs": "P1xS",
    "p1xabeliansurface": "P1xS",
    "p2xc": "P2xC",
    "p2xellipticcurve": "P2xC",
    "p1xp1xc": "P1xP1xC",
    "p1xp1xellipticcurve": "P1xP1xC",
    "cy3": "CY3",
    "cy3withplane": "CY3",
}


@dataclass(frozen=True)
class ToricFactor:
    name: str
    # Picard coordinates of every torus-invariant divisor D_rho
    rays: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.rays) - len(self.rays[0])

    @property
    def picard_rank(self) -> int:
        return len(self.rays[0])

    def rays_per_coordinate(self) -> tuple[int, ...]:
        return tuple(sum(r[i] for r in self.rays) for i in range(self.picard_rank))

    def anticanonical(self) -> tuple[int, ...]:
        return self.rays_per_coordinate()

    def euler_characteristic(self, D: Sequence[int]) -> Fraction:
        """chi(O(D)) on the toric surface/curve, closed form."""
        if self.name == "P1":
            (n,) = D
            return Fraction(n + 1)
        if self.name == "P2":
            (n,) = D
            return Fraction((n + 1) * (n + 2), 2)
        if self.name == "P1xP1":
            a, b = D
            return Fraction((a + 1) * (b + 1))
        raise ModelError(f"unknown toric factor {self.name}")


TORIC_FACTORS = {
    "P1": ToricFactor("P1", ((1,), (1,))),
    "P2": ToricFactor("P2", ((1,), (1,), (1,))),
    "P1xP1": ToricFactor("P1xP1", ((1, 0), (1, 0), (0, 1), (0, 1))),
}


@dataclass(frozen=True)
class DivisorClass:
    """Rational combination of the model's basis divisors."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficients", tuple(simplify(c) for c in self.coefficients))

    def __len__(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, i: int):
        return self.coefficients[i]

    def __iter__(self):
        return iter(self.coefficients)

    def __add__(self, other: DivisorClass) -> DivisorClass:
        _same_length(self, other)
        return DivisorClass(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        _same_length(self, other)
        return DivisorClass(tuple(a - b for a, b in zip(self, other)))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(tuple(-a for a in self))

    def __mul__(self, c) -> DivisorClass:
        return DivisorClass(tuple(c * a for a in self))

    __rmul__ = __mul__

    def __truediv__(self, c) -> DivisorClass:
        return DivisorClass(tuple(a / c for a in self))

    def is_zero(self) -> bool:
        return all(a == 0 for a in self)


def _same_length(a: DivisorClass, b: DivisorClass) -> None:
    if len(a) != len(b):
        raise ValueError("divisor classes from different models")


@dataclass(frozen=True)
class CohVector:
    """Graded Chern data ``(ch0, ch1, ch2, ch3)``; ``ch2`` as a functional."""

    ch0: object
    ch1: DivisorClass
    ch2: tuple
    ch3: object

    def __post_init__(self) -> None:
        if len(self.ch2) != len(self.ch1):
            raise ValueError("ch2 functional and ch1 must have the basis length")
        object.__setattr__(self, "ch0", simplify(self.ch0))
        object.__setattr__(self, "ch2", tuple(simplify(c) for c in self.ch2))
        object.__setattr__(self, "ch3", simplify(self.ch3))

    def __add__(self, other: CohVector) -> CohVector:
        return CohVector(
            self.ch0 + other.ch0,
            self.ch1 + other.ch1,
            tuple(a + b for a, b in zip(self.ch2, other.ch2)),
            self.ch3 + other.ch3,
        )

    def __neg__(self) -> CohVector:
        return CohVector(-self.ch0, -self.ch1, tuple(-a for a in self.ch2), -self.ch3)

    def __sub__(self, other: CohVector) -> CohVector:
        return self + (-other)

    def __mul__(self, c) -> CohVector:
        return CohVector(c * self.ch0, self.ch1 * c, tuple(c * a for a in self.ch2), c * self.ch3)

    __rmul__ = __mul__

    def pair_ch2(self, D: DivisorClass):
        return sum((c * x for c, x in zip(D, self.ch2)), Fraction(0))


@dataclass(frozen=True)
class ThreefoldModel:
    kind: str
    generators: tuple[str, ...]
    # nonzero entries of the symmetric form, keyed by sorted index triples
    form: dict = field(compare=False, hash=False, repr=False)
    parameter: Fraction | None = None
    toric: ToricFactor | None = None
    toric_generators: tuple[int, ...] = ()
    abelian_generators: tuple[int, ...] = ()
    abelian_dim: int = 0
    todd: CohVector | None = field(default=None, compare=False, repr=False)

    @property
    def is_product(self) -> bool:
        return self.kind in PRODUCT_KINDS

    @property
    def rank(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise ModelError(f"{self.kind} has no generator {name!r}") from None

    def divisor(self, *coeffs, **named) -> DivisorClass:
        if coeffs:
            if len(coeffs) != self.rank:
                raise ValueError(f"{self.kind} needs {self.rank} coefficients")
            return DivisorClass(tuple(c if isinstance(c, Polynomial) else as_fraction(c) for c in coeffs))
        values = [Fraction(0)] * self.rank
        for name, c in named.items():
            values[self.index(name)] = as_fraction(c)
        return DivisorClass(tuple(values))

    def zero_divisor(self) -> DivisorClass:
        return DivisorClass((Fraction(0),) * self.rank)

    def basis(self, name: str) -> DivisorClass:
        return self.divisor(**{name: 1})

    def form_value(self, i: int, j: int, k: int) -> Fraction:
        return self.form.get(tuple(sorted((i, j, k))), Fraction(0))

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "P1xS":
            out["d"] = str(self.parameter)
        elif self.kind == "CY3":
            out["s"] = str(self.parameter)
        return out

    def toric_part(self, D: DivisorClass) -> tuple:
        return tuple(D[i] for i in self.toric_generators)

    def from_parts(self, toric: Sequence, abelian: Sequence) -> DivisorClass:
        values = [Fraction(0)] * self.rank
        for i, c in zip(self.toric_generators, toric):
            values[i] = c
        for i, c in zip(self.abelian_generators, abelian):
            values[i] = c
        return DivisorClass(tuple(values))

    def default_polarization(self) -> DivisorClass:
        if self.kind == "CY3":
            return self.divisor(L=2, D=Fraction(-1, 2))
        return DivisorClass((Fraction(1),) * self.rank)


def _form_from(entries: dict[tuple[int, int, int], Fraction]) -> dict:
    return {tuple(sorted(k)): Fraction(v) for k, v in entries.items() if v != 0}


def _product_todd(rank: int, td1: Sequence, td2: Sequence) -> CohVector:
    # td3 pairs to chi(O_X) = 0 since the abelian factor has chi(O) = 0
    return CohVector(Fraction(1), DivisorClass(tuple(td1)), tuple(td2), Fraction(0))


def p1_x_abelian_surface(d=1) -> ThreefoldModel:
    d = as_fraction(d)
    if d <= 0 or d.denominator != 1:
        raise ModelError("polarization degree d must be a positive integer")
    # basis (h, l): h^2 = 0, l^3 = 0, h.l^2 = 2d
    form = _form_from({(0, 1, 1): 2 * d})
    todd = _product_todd(2, (Fraction(1), Fraction(0)), (Fraction(0), Fraction(0)))
    return ThreefoldModel(
        "P1xS", ("h", "l"), form, d, TORIC_FACTORS["P1"], (0,), (1,), 2, todd
    )


def p2_x_elliptic_curve() -> ThreefoldModel:
    form = _form_from({(0, 0, 1): 1})
    # td1 = (3/2)h ; td2 = h^2, so td2.h = 0 and td2.f = 1
    todd = _product_todd(2, (Fraction(3, 2), Fraction(0)), (Fraction(0), Fraction(1)))
    return ThreefoldModel(
        "P2xC", ("h", "f"), form, None, TORIC_FACTORS["P2"], (0,), (1,), 1, todd
    )


def p1_x_p1_x_elliptic_curve() -> ThreefoldModel:
    form = _form_from({(0, 1, 2): 1})
    # td1 = h1 + h2 ; td2 = h1 h2
    todd = _product_todd(
        3, (Fraction(1), Fraction(1), Fraction(0)), (Fraction(0), Fraction(0), Fraction(1))
    )
    return ThreefoldModel(
        "P1xP1xC", ("h1", "h2", "f"), form, None, TORIC_FACTORS["P1xP1"], (0, 1), (2,), 1, todd
    )


def cy3_with_plane(s) -> ThreefoldModel:
    s = as_fraction(s)
    if s <= 0:
        raise ModelError("L^3 must be positive")
    form = _form_from({(0, 0, 0): s, (1, 1, 1): 9})
    return ThreefoldModel("CY3", ("L", "D"), form, s)


def make_model(kind: str, d=None, s=None) -> ThreefoldModel:
    key = KIND_ALIASES.get(kind.replace("_", "").replace(" ", "").lower())
    if key is None:
        raise ModelError(f"unknown model kind {kind!r}")
    if key == "P1xS":
        return p1_x_abelian_surface(1 if d is None else d)
    if key == "P2xC":
        return p2_x_elliptic_curve()
    if key == "P1xP1xC":
        return p1_x_p1_x_elliptic_curve()
    if s is None:
        raise ModelError("CY3 model needs the parameter s = L^3")
    return cy3_with_plane(s)


def model_from_config(cfg: dict) -> ThreefoldModel:
    return make_model(cfg["kind"], d=cfg.get("d"), s=cfg.get("s"))


# ---------------------------------------------------------------------------
# intersection numbers and cones


def intersect3(model: ThreefoldModel, D1: DivisorClass, D2: DivisorClass, D3: DivisorClass):
    total = Fraction(0)
    for key, value in model.form.items():
        # each sorted key stands for all its distinct permutations
        for i, j, k in set(itertools.permutations(key)):
            c = D1[i] * D2[j] * D3[k]
            if c != 0:
                total = total + value * c
    return simplify(total)


def _cy_polarization_m(model: ThreefoldModel, D: DivisorClass) -> int | None:
    L, Dc = D[0], D[1]
    if Dc == Fraction(-1, 2) and isinstance(L, Fraction) and L.denominator == 1 and L >= 2:
        return int(L)
    return None


def is_ample(model: ThreefoldModel, D: DivisorClass) -> bool:
    """Ampleness on the model.

    Product models: every coordinate strictly positive.  The CY model only
    knows the family ``m L - D/2`` with integer ``m >= 2``; any other class is
    reported as undecidable.
    """
    if model.is_product:
        return all(c > 0 for c in D)
    if _cy_polarization_m(model, D) is not None:
        return True
    raise ModelError("ampleness undecidable in model: only m*L - 1/2*D with integer m >= 2 is known")


def is_nef(model: ThreefoldModel, D: DivisorClass) -> bool:
    if model.is_product:
        return all(c >= 0 for c in D)
    if _cy_polarization_m(model, D) is not None:
        return True
    raise ModelError("nefness undecidable in model")


def is_effective(model: ThreefoldModel, D: DivisorClass) -> bool:
    if model.is_product:
        return all(c >= 0 for c in D)
    if all(c >= 0 for c in D):
        return True
    raise ModelError("effectivity undecidable in model")


def is_anti_ample(model: ThreefoldModel, D: DivisorClass) -> bool:
    return is_ample(model, -D)


def effective_cone_generators(model: ThreefoldModel) -> list[DivisorClass]:
    # simplicial in every model here; on the CY side L is nef and big and D is the plane
    return [model.basis(g) for g in model.generators]


def check_negative_divisor_hypothesis(model: ThreefoldModel, H: DivisorClass) -> bool:
    """Whether ``H.D^2 >= 0`` on effective generators and their pairwise sums."""
    if not is_ample(model, H):
        raise ModelError("H must be ample")
    gens = effective_cone_generators(model)
    probes = gens + [a + b for a, b in itertools.combinations(gens, 2)]
    return all(intersect3(model, H, D, D) >= 0 for D in probes)


# ---------------------------------------------------------------------------
# Chern characters


def chern_of_line_bundle(model: ThreefoldModel, D: DivisorClass) -> CohVector:
    ch2 = tuple(
        intersect3(model, D, D, model.basis(g)) / 2 for g in model.generators
    )
    return CohVector(Fraction(1), D, ch2, intersect3(model, D, D, D) / 6)


def point_class(model: ThreefoldModel, n=1) -> CohVector:
    z = model.zero_divisor()
    return CohVector(Fraction(0), z, tuple(z), as_fraction(n))


def structure_sheaf_of_plane(model: ThreefoldModel) -> CohVector:
    """``ch(O_D) = 1 - e^{-D} = (0, D, -D^2/2, D^3/6)`` on the CY model."""
    if model.kind != "CY3":
        raise ModelError("the plane D only exists on the CY3 model")
    Dc = model.basis("D")
    line = chern_of_line_bundle(model, -Dc)
    zero = CohVector(Fraction(1), model.zero_divisor(), (Fraction(0),) * model.rank, Fraction(0))
    return zero - line


def canonical_divisor(model: ThreefoldModel) -> DivisorClass:
    if model.kind == "CY3":
        return model.zero_divisor()
    anti = model.toric.anticanonical()
    return -model.from_parts(anti, [0] * len(model.abelian_generators))


def torus_invariant_divisors(model: ThreefoldModel) -> list[DivisorClass]:
    if not model.is_product:
        raise ModelError("torus-invariant divisors exist only on product models")
    zeros = [0] * len(model.abelian_generators)
    return [model.from_parts(r, zeros) for r in model.toric.rays]


# ---------------------------------------------------------------------------
# Frobenius x multiplication action


def _scales(model: ThreefoldModel, a, b) -> tuple[list, object]:
    scale = [Fraction(1)] * model.rank
    for i in model.toric_generators:
        scale[i] = a
    for i in model.abelian_generators:
        scale[i] = b**2
    degree = a ** model.toric.dim * b ** (2 * model.abelian_dim)
    return scale, degree


def pullback_divisor(model: ThreefoldModel, a, b, D: DivisorClass) -> DivisorClass:
    if not model.is_product:
        raise ModelError("Frobenius action unsupported on the CY model")
    scale, _ = _scales(model, a, b)
    return DivisorClass(tuple(s * c for s, c in zip(scale, D)))


def frob_action(model: ThreefoldModel, a, b, v: CohVector) -> CohVector:
    """Pull back along toric Frobenius ``a`` times multiplication by ``b``.

    Divisors pick up ``a`` (toric) or ``b^2`` (abelian); top degree picks up
    the mapping degree.  ``ch2 . g`` transforms as ``deg * (ch2 . g) / scale(g)``
    by the projection formula; the quotient is formed by exponents so it
    stays a polynomial when ``a, b`` are symbolic.
    """
    if not model.is_product:
        raise ModelError("Frobenius action unsupported on the CY model")
    dimY, dimZ = model.toric.dim, model.abelian_dim
    ch1 = pullback_divisor(model, a, b, v.ch1)
    ch2 = []
    for i, c in enumerate(v.ch2):
        if i in model.toric_generators:
            factor = a ** (dimY - 1) * b ** (2 * dimZ)
        else:
            factor = a**dimY * b ** (2 * dimZ - 2)
        ch2.append(factor * c)
    _, degree = _scales(model, a, b)
    return CohVector(v.ch0, ch1, tuple(ch2), degree * v.ch3)


# ---------------------------------------------------------------------------
# Riemann-Roch


def euler_char(model: ThreefoldModel, v: CohVector):
    """``chi = integral of ch(v) td(X)`` for product models."""
    if not model.is_product:
        raise ModelError("todd data unavailable on the CY model")
    td = model.todd
    total = v.ch3 * td.ch0
    total = total + v.pair_ch2(td.ch1)
    total = total + sum((c * t for c, t in zip(v.ch1, td.ch2)), Fraction(0))
    total = total + v.ch0 * td.ch3
    return simplify(total)


def euler_polynomial(model: ThreefoldModel, v: CohVector) -> Polynomial:
    """``m -> chi(f^{(m^2, m)*} v)`` as an exact polynomial in ``m``."""
    if not model.is_product:
        raise ModelError("todd data unavailable on the CY model")
    m = Polynomial.variable("m")
    value = euler_char(model, frob_action(model, m * m, m, v))
    if not isinstance(value, Polynomial):
        value = PolynomialInM({0: value})
    return value


def kunneth_euler_characteristic(model: ThreefoldModel, D: DivisorClass) -> Fraction:
    """chi of ``O(D)`` for ``D = D_Y + D_Z`` via Kunneth, using closed forms."""
    if not model.is_product:
        raise ModelError("Kunneth needs a product model")
    toric = tuple(int(c) for c in model.toric_part(D))
    chi_y = model.toric.euler_characteristic(toric)
    # Riemann-Roch on the abelian factor: chi(L) = L^g / g!
    if model.kind == "P1xS":
        c = D[model.abelian_generators[0]]
        chi_z = c * c * 2 * model.parameter / 2
    else:
        chi_z = D[model.abelian_generators[0]]
    return simplify(chi_y * chi_z)
