"""JSON encodings of exact values and reports.

Rationals are strings ``"p/q"`` (``"p"`` for integers), quadratic numbers are
``{"a": "p/q", "b": "p/q", "d": int}``, polynomials are ``{"deg": "coeff"}``
maps.  Every encoder has a decoder that reproduces the value exactly.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .chern import ProjectedChern
from .exactnum import Polynomial, QuadraticNumber, parse_scalar, simplify
from .geometry import CohVector, DivisorClass, ThreefoldModel, make_model
from .tilt import INFINITY


def scalar_to_json(x):
    x = simplify(x)
    if x is INFINITY:
        return "+inf"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, QuadraticNumber):
        return {"a": str(x.a), "b": str(x.b), "d": x.d}
    if isinstance(x, Polynomial):
        if x.is_constant():
            return scalar_to_json(x.coefficient(0))
        return polynomial_to_json(x)
    raise TypeError(f"not an exact scalar: {x!r}")


def scalar_from_json(obj):
    if isinstance(obj, str):
        if obj == "+inf":
            return INFINITY
        return parse_scalar(obj)
    if isinstance(obj, int) and not isinstance(obj, bool):
        return Fraction(obj)
    if isinstance(obj, dict) and set(obj) == {"a", "b", "d"}:
        return simplify(QuadraticNumber(Fraction(obj["a"]), Fraction(obj["b"]), int(obj["d"])))
    if isinstance(obj, dict):
        return polynomial_from_json(obj)
    raise ValueError(f"cannot decode exact scalar from {obj!r}")


def polynomial_to_json(p: Polynomial) -> dict:
    return {str(k): scalar_to_json(c) for k, c in p.coefficients.items()}


def polynomial_from_json(obj: dict, var: str = "m") -> Polynomial:
    return Polynomial({int(k): scalar_from_json(v) for k, v in obj.items()}, var)


def divisor_to_json(model: ThreefoldModel, D: DivisorClass) -> dict:
    return {g: scalar_to_json(c) for g, c in zip(model.generators, D)}


def divisor_from_json(model: ThreefoldModel, obj: dict) -> DivisorClass:
    unknown = set(obj) - set(model.generators)
    if unknown:
        raise ValueError(f"{model.kind} has no generators {sorted(unknown)}")
    return DivisorClass(tuple(Fraction(0) if g not in obj else scalar_from_json(obj[g]) for g in model.generators))


_DIV_TERM = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*\*?\s*([A-Za-z][A-Za-z0-9_]*)\s*")


def parse_divisor(model: ThreefoldModel, text: str) -> DivisorClass:
    """``"h+f"``, ``"2L-1/2D"``, ``"2*L - 1/2*D"`` or ``"h:1,f:1"``."""
    text = text.strip()
    if not text or text == "0":
        return model.zero_divisor()
    if ":" in text:
        obj = {}
        for part in text.split(","):
            name, _, value = part.partition(":")
            obj[name.strip()] = value.strip()
        return divisor_from_json(model, obj)
    values = {g: Fraction(0) for g in model.generators}
    pos = 0
    first = True
    while pos < len(text):
        m = _DIV_TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"malformed divisor {text!r}")
        sign, coef, name = m.groups()
        if not first and sign is None:
            raise ValueError(f"malformed divisor {text!r}")
        if name not in values:
            raise ValueError(f"{model.kind} has no generator {name!r}")
        c = Fraction(coef) if coef else Fraction(1)
        values[name] += -c if sign == "-" else c
        pos = m.end()
        first = False
    return DivisorClass(tuple(values[g] for g in model.generators))


def projected_to_json(p: ProjectedChern) -> list:
    return [scalar_to_json(x) for x in p]


def projected_from_json(obj) -> ProjectedChern:
    if isinstance(obj, str):
        obj = [s for s in obj.split(",")]
    if len(obj) != 4:
        raise ValueError("a projected character has four entries")
    return ProjectedChern(*(scalar_from_json(x) for x in obj))


def coh_to_json(model: ThreefoldModel, v: CohVector) -> dict:
    return {
        "ch0": scalar_to_json(v.ch0),
        "ch1": divisor_to_json(model, v.ch1),
        "ch2": {g: scalar_to_json(c) for g, c in zip(model.generators, v.ch2)},
        "ch3": scalar_to_json(v.ch3),
    }


def coh_from_json(model: ThreefoldModel, obj: dict) -> CohVector:
    ch2 = obj.get("ch2", {})
    return CohVector(
        scalar_from_json(obj.get("ch0", "0")),
        divisor_from_json(model, obj.get("ch1", {})),
        tuple(scalar_from_json(ch2.get(g, "0")) for g in model.generators),
        scalar_from_json(obj.get("ch3", "0")),
    )


def model_from_json(obj) -> ThreefoldModel:
    if isinstance(obj, str):
        return make_model(obj)
    return make_model(obj["kind"], d=obj.get("d"), s=obj.get("s"))


def slope_to_json(x) -> dict:
    if x is INFINITY:
        return {"value": None, "infinite": True}
    return {"value": scalar_to_json(x), "infinite": False}


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False)
