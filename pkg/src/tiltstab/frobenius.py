"""Toric Frobenius pushforwards and the mechanical vanishing-lemma verifier.

Pushing ``O(D)`` forward along the degree-``m^dim`` toric Frobenius of ``Y``
splits it into line bundles ``L_j^*`` with
``L_j = O((-D + sum a_rho D_rho) / m)``, ``0 <= a_rho < m``.  On P1, P2 and
P1xP1 every ``D_rho`` is a Picard basis vector, so ``L_j`` only depends on the
per-coordinate sums of the ``a_rho``.  Enumeration is over those sums, each
weighted by the number of residue tuples producing it.

The verifier rebuilds, for every admissible residue, the twisted first
Chern class that the vanishing argument needs to be ample (``hom`` cases) or
anti-ample (``ext^2`` cases).  Each class is assembled twice: once by
tensoring the actual Thomsen summands and subtracting ``beta`` times the
pulled-back polarization, once from the closed simplified form.  Both must
agree and have the required sign.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .geometry import (
    TORIC_FACTORS,
    DivisorClass,
    ModelError,
    ThreefoldModel,
    ToricFactor,
    canonical_divisor,
    is_ample,
)

CASES = (
    "hom_integral",
    "ext2_integral",
    "hom_rational",
    "ext2_rational",
    "hom_irrational",
    "ext2_irrational",
)


class PreconditionError(ValueError):
    """A lemma hypothesis on the verifier parameters does not hold."""


@dataclass(frozen=True)
class FrobeniusDecomposition:
    """Summands ``(divisor of L_j^*, multiplicity)`` of a Frobenius pushforward."""

    summands: tuple[tuple[tuple[int, ...] | DivisorClass, int], ...]
    m: int
    source: tuple[int, ...] | DivisorClass

    @property
    def rank(self) -> int:
        return sum(n for _, n in self.summands)

    def as_dict(self) -> dict:
        return {d: n for d, n in self.summands}


def _toric(Y: str | ToricFactor) -> ToricFactor:
    if isinstance(Y, ToricFactor):
        return Y
    try:
        return TORIC_FACTORS[Y.replace(" ", "")]
    except KeyError:
        raise ModelError(f"unknown toric variety {Y!r}; expected P1, P2 or P1xP1") from None


def sum_counts(rays: int, modulus: int) -> list[int]:
    """``counts[s]`` = number of ``(a_1..a_rays)`` in ``[0, modulus)`` summing to ``s``."""
    counts = [1]
    for _ in range(rays):
        new = [0] * (len(counts) + modulus - 1)
        for s, c in enumerate(counts):
            if c:
                for a in range(modulus):
                    new[s + a] += c
        counts = new
    return counts


def thomsen_decompose(Y, D: Sequence[int], m: int) -> FrobeniusDecomposition:
    """``m_* O(D)`` on a toric factor as ``{L_j^*: eta_j}`` (Picard coordinates)."""
    Y = _toric(Y)
    if m < 1:
        raise ValueError("m must be a positive integer")
    D = tuple(int(c) for c in D)
    if len(D) != Y.picard_rank:
        raise ValueError(f"{Y.name} divisors have {Y.picard_rank} coordinates")
    per_coord = []
    for i, k in enumerate(Y.rays_per_coordinate()):
        options = []
        for s, n in enumerate(sum_counts(k, m)):
            if (s - D[i]) % m == 0:
                # summand is L_j^*, i.e. minus the Thomsen class
                options.append((-(s - D[i]) // m, n))
        per_coord.append(options)
    summands = []
    for combo in itertools.product(*per_coord):
        summands.append((tuple(c for c, _ in combo), _prod(n for _, n in combo)))
    summands.sort()
    return FrobeniusDecomposition(tuple(summands), m, D)


def _prod(values) -> int:
    out = 1
    for v in values:
        out *= v
    return out


def remark_ample_margin(Y, m: int, a: Sequence[int]) -> bool:
    """``-K_Y - sum a_rho D_rho / m - (1/m) sum D_rho`` is nef."""
    Y = _toric(Y)
    if len(a) != len(Y.rays) or any(not 0 <= x <= m - 1 for x in a):
        raise ValueError("residues must satisfy 0 <= a_rho <= m - 1, one per ray")
    anti = Y.anticanonical()
    for i in range(Y.picard_rank):
        s = sum(x * r[i] for x, r in zip(a, Y.rays))
        margin = Fraction(anti[i]) - Fraction(s, m) - Fraction(anti[i], m)
        if margin < 0:
            return False
    return True


def pushforward_line_bundle(model: ThreefoldModel, a: int, D: DivisorClass) -> FrobeniusDecomposition:
    """``f^{(a,1)}_* O(D)``: Thomsen on the toric part, abelian part unchanged."""
    if not model.is_product:
        raise ModelError("Frobenius pushforward unsupported on the CY model")
    toric = model.toric_part(D)
    if any(Fraction(c).denominator != 1 for c in toric):
        raise ValueError("D must be integral on the toric factor")
    abelian = [D[i] for i in model.abelian_generators]
    dec = thomsen_decompose(model.toric, toric, a)
    summands = tuple((model.from_parts(d, abelian), n) for d, n in dec.summands)
    return FrobeniusDecomposition(summands, a, D)


# ---------------------------------------------------------------------------
# vanishing verifier


@dataclass
class VanishingReport:
    case: str
    parameters: dict
    residues_checked: int = 0
    tuples_covered: int = 0
    failures: list = field(default_factory=list)
    wall_clock: float | None = None

    @property
    def passed(self) -> bool:
        return not self.failures


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def minimal_admissible_uv(model: ThreefoldModel, case: str, H: DivisorClass | None = None) -> tuple[int, int]:
    """Smallest ``(u, v)`` meeting the irrational-case hypotheses on this model."""
    if case == "ext2_irrational":
        return 3, 3
    if case != "hom_irrational":
        raise ValueError("u, v only enter the irrational cases")
    h = _toric_polarization(model, H)
    anti = model.toric.anticanonical()
    u = 1
    while not all((u - 2) * hi - ki >= 0 for hi, ki in zip(h, anti)):
        u += 1
    return u, 3


def _toric_polarization(model: ThreefoldModel, H: DivisorClass | None) -> tuple[int, ...]:
    H = H if H is not None else model.default_polarization()
    h = model.toric_part(H)
    if any(Fraction(c).denominator != 1 for c in h):
        raise PreconditionError("the toric part h of H must be integral")
    return tuple(int(c) for c in h)


def _layer_options(k: int, modulus: int):
    return [(s, n) for s, n in enumerate(sum_counts(k, modulus)) if n]


def verify_vanishing(
    model: ThreefoldModel,
    case: str,
    params: dict | None = None,
    H: DivisorClass | None = None,
    timed: bool = False,
) -> VanishingReport:
    """Check every residue class of the named vanishing lemma on ``model``.

    ``params``: ``m`` for integral cases; ``p, q, m`` for rational ones;
    ``p, q, u, v`` for irrational ones (``u, v`` default to the minimal
    admissible pair).
    """
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {', '.join(CASES)}")
    if not model.is_product:
        raise ModelError("the vanishing lemmas are stated for the product models")
    params = dict(params or {})
    H = H if H is not None else model.default_polarization()
    if not is_ample(model, H):
        raise PreconditionError("H must be ample")
    start = time.perf_counter()
    ctx = _Context(model, H)
    if case.endswith("_integral"):
        m = _positive_int(params, "m")
        report = VanishingReport(case, {"m": m})
        ctx.run_integral(case, m, report)
    elif case.endswith("_rational"):
        p, q, m = int(params.get("p", 0)), _positive_int(params, "q"), _positive_int(params, "m")
        if gcd(p, q) != 1:
            raise PreconditionError(f"p = {p} and q = {q} must be coprime")
        report = VanishingReport(case, {"p": p, "q": q, "m": m})
        ctx.run_rational(case, p, q, m, report)
    else:
        p, q = int(params.get("p", 0)), _positive_int(params, "q")
        u0, v0 = minimal_admissible_uv(model, case, H)
        u, v = int(params.get("u", u0)), int(params.get("v", v0))
        ctx.check_irrational_hypotheses(case, u, v)
        report = VanishingReport(case, {"p": p, "q": q, "u": u, "v": v})
        ctx.run_irrational(case, p, q, u, v, report)
    if timed:
        report.wall_clock = time.perf_counter() - start
    return report


def _positive_int(params: dict, key: str) -> int:
    if key not in params:
        raise PreconditionError(f"missing parameter {key}")
    value = int(params[key])
    if value < 1:
        raise PreconditionError(f"{key} must be a positive integer")
    return value


class _Context:
    def __init__(self, model: ThreefoldModel, H: DivisorClass) -> None:
        self.model = model
        self.Y = model.toric
        self.rays = self.Y.rays_per_coordinate()
        self.h = _toric_polarization(model, H)
        self.K = tuple(int(c) for c in model.toric_part(canonical_divisor(model)))
        self.f_coeffs = [H[i] for i in model.abelian_generators]
        self.hX = model.from_parts(self.h, [0] * len(self.f_coeffs))
        self.fX = model.from_parts([0] * len(self.h), self.f_coeffs)
        self.KX = canonical_divisor(model)

    def X(self, toric: Sequence) -> DivisorClass:
        return self.model.from_parts(toric, [0] * len(self.f_coeffs))

    @staticmethod
    def thomsen_class(DY: Sequence, s: Sequence, M: int):
        """``(-D_Y + s)/M`` coordinate-wise, or None when not integral."""
        out = []
        for d, si in zip(DY, s):
            num = -d + si
            if Fraction(num).denominator != 1 or int(num) % M:
                return None
            out.append(Fraction(int(num) // M))
        return tuple(out)

    def check_irrational_hypotheses(self, case: str, u: int, v: int) -> None:
        if case == "hom_irrational":
            if v <= 2:
                raise PreconditionError("hypothesis v > 2 violated")
            eff = [(u - 2) * hi + ki for hi, ki in zip(self.h, self.K)]
            if u < 1 or any(c < 0 for c in eff):
                raise PreconditionError("hypothesis '(u-2)h + K_X is effective' violated")
        else:
            if u <= 2 or v <= 2:
                raise PreconditionError("hypothesis u, v > 2 violated")

    def _judge(self, report, want: str, unsimplified, simplified, residue: dict) -> None:
        report.residues_checked += 1
        reason = None
        if unsimplified != simplified:
            reason = "tensor-product class disagrees with the simplified closed form"
        elif want == "ample" and not is_ample(self.model, simplified):
            reason = "class is not ample"
        elif want == "anti-ample" and not is_ample(self.model, -simplified):
            reason = "class is not anti-ample"
        if reason:
            report.failures.append(
                {
                    "residue": residue,
                    "class": {g: str(c) for g, c in zip(self.model.generators, simplified)},
                    "unsimplified": {g: str(c) for g, c in zip(self.model.generators, unsimplified)},
                    "expected": want,
                    "reason": reason,
                }
            )

    # one layer: sums of a_rho with 0 <= a_rho < M, per Picard coordinate
    def _single_layer(self, M: int, DY: Sequence):
        per_coord = []
        for i, k in enumerate(self.rays):
            per_coord.append(
                [
                    (s, n)
                    for s, n in _layer_options(k, M)
                    if self.thomsen_class((DY[i],), (s,), M) is not None
                ]
            )
        for combo in itertools.product(*per_coord):
            yield tuple(s for s, _ in combo), _prod(n for _, n in combo)

    def run_integral(self, case: str, m: int, report: VanishingReport) -> None:
        M = m * m
        zero = (0,) * len(self.h)
        if case == "hom_integral":
            # O(-K_X + f) (x) L_j^*,  L_j from pushing O(f) = O(-K + f + K) forward
            DY = zero
            for s, n in self._single_layer(M, DY):
                L = self.X(self.thomsen_class(DY, s, M))
                unsimplified = (-self.KX + self.fX) - L
                simplified = self.fX + (-self.KX - self.X(s) / M)
                report.tuples_covered += n
                self._judge(report, "ample", unsimplified, simplified, {"a_sums": list(s)})
        else:
            # O(-f) (x) L_j^*,  L_j from pushing O(-h + K_X) forward
            DY = tuple(-hi + ki for hi, ki in zip(self.h, self.K))
            for s, n in self._single_layer(M, DY):
                L = self.X(self.thomsen_class(DY, s, M))
                unsimplified = -self.fX - L
                simplified = -self.fX - (self.hX - self.KX + self.X(s)) / M
                report.tuples_covered += n
                self._judge(report, "anti-ample", unsimplified, simplified, {"a_sums": list(s)})

    def run_rational(self, case: str, p: int, q: int, m: int, report: VanishingReport) -> None:
        M1, M2 = m * m, q * q
        beta = Fraction(p, q)
        # polarization pulled back along f^{(1, mq)}
        H_pulled = self.hX + self.fX * (m * m * q * q)
        zero = (0,) * len(self.h)
        hom = case == "hom_rational"
        DY1 = zero if hom else tuple(-hi + ki for hi, ki in zip(self.h, self.K))
        for s_a, n_a in self._single_layer(M1, DY1):
            Lj = self.thomsen_class(DY1, s_a, M1)
            # second pushforward of O(pq h) (x) L_j^*
            DY2 = tuple(p * q * hi - l for hi, l in zip(self.h, Lj))
            for s_b, n_b in self._single_layer(M2, DY2):
                R = self.X(self.thomsen_class(DY2, s_b, M2))
                if hom:
                    bundle = self.fX * (p * q * m * m + 1) - self.KX - R
                    simplified = self.fX - self.KX - self.X(s_a) / (M1 * M2) - self.X(s_b) / M2
                    want = "ample"
                else:
                    bundle = self.fX * (p * q * m * m - 1) - R
                    simplified = (
                        -self.fX
                        - (self.hX - self.KX + self.X(s_a)) / (M1 * M2)
                        - self.X(s_b) / M2
                    )
                    want = "anti-ample"
                unsimplified = bundle - H_pulled * beta
                report.tuples_covered += n_a * n_b
                self._judge(
                    report, want, unsimplified, simplified, {"a_sums": list(s_a), "b_sums": list(s_b)}
                )

    def run_irrational(self, case: str, p: int, q: int, u: int, v: int, report: VanishingReport) -> None:
        M = q * q
        beta = Fraction(p, q)
        H_n = self.hX + self.fX * M
        if case == "hom_irrational":
            DY = tuple((p * q + u) * hi + ki for hi, ki in zip(self.h, self.K))
        else:
            DY = tuple((p * q - u) * hi + ki for hi, ki in zip(self.h, self.K))
        for s, n in self._single_layer(M, DY):
            L = self.X(self.thomsen_class(DY, s, M))
            if case == "hom_irrational":
                Mj = self.fX * (p * q + v) - self.KX - L
                unsimplified = Mj - H_n * beta - H_n * Fraction(2, M)
                simplified = (
                    self.fX * (v - 2)
                    - self.KX
                    - self.X(s) / M
                    + (self.hX * (u - 2) + self.KX) / M
                )
                want = "ample"
            else:
                Mj = self.fX * (p * q - v) - L
                unsimplified = Mj - H_n * beta + H_n * Fraction(2, M)
                simplified = -(self.fX * (v - 2)) - (self.hX * (u - 2) - self.KX + self.X(s)) / M
                want = "anti-ample"
            report.tuples_covered += n
            self._judge(report, want, unsimplified, simplified, {"a_sums": list(s)})


def expected_tuple_count(model: ThreefoldModel, case: str, params: dict) -> int:
    """Residue tuples an exhaustive enumeration must cover (integral ones only)."""
    dim = model.toric.dim
    if case.endswith("_integral"):
        return (params["m"] ** 2) ** dim
    if case.endswith("_rational"):
        return (params["m"] ** 2) ** dim * (params["q"] ** 2) ** dim
    return (params["q"] ** 2) ** dim
