"""Generalized polarized pairs on surfaces.

A pair lives either on a smooth :class:`SurfaceModel` or on the target of a
:class:`Contraction`. Its nef part ``M`` always sits on the smooth model; on a
contraction the nef part downstairs is *defined* as the pushforward of ``M``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from . import linalg
from .divisors import Contraction, combination_of_curves, pushforward
from .errors import NotLogResolution, UnknownCurveName, ValidationError
from .lattice import DivisorClass, SurfaceModel
from .positivity import is_nef_tracked, volume


def _coeff_map(boundary: Mapping[str, object] | None) -> dict[str, Fraction]:
    out = {}
    for k, v in (boundary or {}).items():
        v = linalg.as_fraction(v)
        if v:
            out[k] = v
    return out


def _check_base_boundary(model: SurfaceModel, boundary: Mapping[str, Fraction]) -> None:
    for name in boundary:
        if name not in model.base.curve_names:
            raise UnknownCurveName(f"boundary curve {name!r} is not tracked on the base")


def _tower_contraction(model: SurfaceModel) -> Contraction:
    return Contraction(model, model.exceptional_names)


def trace_MB_divisor(model: SurfaceModel, boundary_on_base: Mapping[str, object]) -> dict[str, Fraction]:
    """Strict transform of the boundary plus the reduced exceptional locus, curve by curve."""
    b = _coeff_map(boundary_on_base)
    _check_base_boundary(model, b)
    out = dict(b)
    for e in model.exceptional_names:
        out[e] = Fraction(1)
    return out


def trace_MB(model: SurfaceModel, boundary_on_base: Mapping[str, object]) -> DivisorClass:
    return combination_of_curves(model, trace_MB_divisor(model, boundary_on_base))


def log_pullback_boundary(model: SurfaceModel, boundary_on_base: Mapping[str, object]) -> dict[str, Fraction]:
    """The divisor B_Y with K_Y + B_Y = pullback(K + B), curve by curve."""
    b = _coeff_map(boundary_on_base)
    _check_base_boundary(model, b)
    out = dict(b)
    if model.depth:
        a = discrepancies(_tower_contraction(model), b, None)
        for e, ae in a.items():
            out[e] = -ae
    return out


def trace_LB_divisor(model: SurfaceModel, boundary_on_base: Mapping[str, object]) -> dict[str, Fraction]:
    return {k: v for k, v in log_pullback_boundary(model, boundary_on_base).items() if v > 0}


def trace_LB(model: SurfaceModel, boundary_on_base: Mapping[str, object]) -> DivisorClass:
    return combination_of_curves(model, trace_LB_divisor(model, boundary_on_base))


def discrepancies(contraction: Contraction, boundary_on_target: Mapping[str, object],
                  M_on_source: DivisorClass | None = None) -> dict[str, Fraction]:
    """Generalized discrepancies of the contracted curves.

    Solves K + strict(B') + M = pullback(K' + B' + M') + sum a_E E with
    M' = pushforward(M); since the pullback is orthogonal to every contracted
    curve, the a_E solve the negative-definite system G a = ((K + B + M).E_k).
    """
    src = contraction.source
    b = _coeff_map(boundary_on_target)
    for name in b:
        if name in contraction.contracted or not src.has_curve(name):
            raise UnknownCurveName(f"boundary curve {name!r} is not a curve of the contraction target")
    lhs = src.canonical_class() + combination_of_curves(src, b)
    if M_on_source is not None:
        lhs = lhs + src.check(M_on_source)
    if not contraction.contracted:
        return {}
    ex = [src.curve(n).cls for n in contraction.contracted]
    rhs = tuple(linalg.bilinear(src.gram, lhs.coeffs, e) for e in ex)
    a = linalg.solve(contraction.exceptional_gram, rhs)
    return dict(zip(contraction.contracted, a))


class Verdict(str, enum.Enum):
    GKLT = "gklt"
    GLC = "glc"
    NOT_GLC = "not_glc"


@dataclass(frozen=True)
class GenPair:
    carrier: SurfaceModel | Contraction
    boundary: Mapping[str, Fraction]
    nef_part: DivisorClass
    cartier_index: int = 1

    def __post_init__(self):
        b = _coeff_map(self.boundary)
        object.__setattr__(self, "boundary", b)
        carrier = self.carrier
        top = self.top
        for name, c in b.items():
            if not carrier.has_curve(name):
                raise UnknownCurveName(f"boundary curve {name!r} is not tracked on the carrier")
            if c < 0:
                raise ValidationError(f"boundary coefficient of {name!r} is negative")
        top.check(self.nef_part)
        r = self.cartier_index
        if isinstance(r, bool) or int(r) != r or r < 1:
            raise ValidationError("cartier index must be a positive integer")
        if any((r * c).denominator != 1 for c in self.nef_part.coeffs):
            raise ValidationError("r * M must have integer coefficients")
        nef, bad = is_nef_tracked(top, self.nef_part)
        if not nef:
            raise ValidationError(f"nef part is not nef on tracked curves: {bad}")

    @property
    def top(self) -> SurfaceModel:
        return self.carrier.source if isinstance(self.carrier, Contraction) else self.carrier

    @property
    def is_contraction(self) -> bool:
        return isinstance(self.carrier, Contraction)

    def log_divisor(self) -> DivisorClass:
        """K + B + M on the carrier (M pushed forward on a contraction)."""
        c = self.carrier
        m = pushforward(c, self.nef_part) if self.is_contraction else self.nef_part
        return c.canonical_class() + combination_of_curves(c, self.boundary) + m


def pair_discrepancies(pair: GenPair) -> dict[str, Fraction]:
    if not pair.is_contraction:
        return {}
    return discrepancies(pair.carrier, pair.boundary, pair.nef_part)


def classify(pair: GenPair) -> Verdict:
    """glc / gklt verdict; on a contraction it must be asserted to be a log resolution."""
    if pair.is_contraction and not pair.carrier.is_log_resolution:
        raise NotLogResolution("contraction is not asserted to be a log resolution; refusing a verdict")
    a = list(pair_discrepancies(pair).values())
    coeffs = list(pair.boundary.values())
    if all(x > -1 for x in a) and all(c < 1 for c in coeffs):
        return Verdict.GKLT
    if all(x >= -1 for x in a) and all(c <= 1 for c in coeffs):
        return Verdict.GLC
    return Verdict.NOT_GLC


def source_log_divisor(pair: GenPair) -> DivisorClass:
    """K + strict(B') + (exceptional part of the log pullback, clamped at 0) + M on the smooth model."""
    src = pair.top
    d = src.canonical_class() + combination_of_curves(src, pair.boundary) + pair.nef_part
    for e, a in pair_discrepancies(pair).items():
        if a < 0:
            d = d + (-a) * src.curve_class(e)
    return d


def pair_volume(pair: GenPair) -> Fraction:
    """vol(K + B + M), computed on the smooth model."""
    return volume(pair.top, source_log_divisor(pair))


def pair_volume_on_carrier(pair: GenPair) -> Fraction:
    """Same volume, computed directly with the (Mumford) form of the carrier."""
    return volume(pair.carrier, pair.log_divisor())


def in_dcc_set(x, n_max: int, extra: Iterable = ()) -> bool:
    """Membership in {1 - 1/n : 1 <= n <= n_max} union ``extra``."""
    x = linalg.as_fraction(x)
    if x in {linalg.as_fraction(e) for e in extra}:
        return True
    if x >= 1 or x < 0:
        return False
    n = 1 / (1 - x)
    return n.denominator == 1 and 1 <= n <= n_max
