"""Evaluators for the explicit intersection-number bounds on surfaces.

Every check returns ``(lhs, rhs, holds)`` with exact rationals and
``holds = lhs <= rhs``. Hypotheses that need cohomology (that |H| defines a
birational morphism, that F is its fixed part) cannot be verified from
lattice data; the caller asserts them through ``birational``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple

from . import linalg
from .divisors import combination_of_curves
from .errors import EParamInvalid, ValidationError
from .lattice import DivisorClass, SurfaceModel
from .pairs import GenPair, pair_volume
from .positivity import is_big, is_nef_tracked

DIM = 2


class BoundCheck(NamedTuple):
    lhs: Fraction
    rhs: Fraction
    holds: bool


def _check(lhs: Fraction, rhs: Fraction) -> BoundCheck:
    return BoundCheck(lhs, rhs, lhs <= rhs)


@dataclass(frozen=True)
class BoundInstance:
    """Data for the bound checks on a smooth model.

    ``F`` is a divisor (curve -> coefficient) and by default ``G = H + F``;
    H is the class of a general member of a free linear system, so it is
    irreducible and contributes H itself to the reduced support of G.
    Passing ``G_explicit`` (curve -> coefficient) replaces that derivation.
    """

    model: SurfaceModel
    B: Mapping[str, Fraction]
    M: DivisorClass
    H: DivisorClass
    F: Mapping[str, Fraction] = field(default_factory=dict)
    m0: int = 1
    delta: Fraction = Fraction(1)
    e_param: Fraction = Fraction(1, 2)
    birational: bool = False
    cartier_index: int = 1
    G_explicit: Mapping[str, Fraction] | None = None

    def __post_init__(self):
        object.__setattr__(self, "B", {k: linalg.as_fraction(v) for k, v in self.B.items() if v})
        object.__setattr__(self, "F", {k: linalg.as_fraction(v) for k, v in self.F.items() if v})
        if self.G_explicit is not None:
            g = {k: linalg.as_fraction(v) for k, v in self.G_explicit.items() if v}
            for k, v in g.items():
                self.model.curve(k)
                if v < 0:
                    raise ValidationError(f"G has negative coefficient on {k!r}")
            object.__setattr__(self, "G_explicit", g)
        object.__setattr__(self, "delta", linalg.as_fraction(self.delta))
        object.__setattr__(self, "e_param", linalg.as_fraction(self.e_param))
        self.model.check(self.M)
        self.model.check(self.H)
        for k, v in self.F.items():
            self.model.curve(k)
            if v < 0:
                raise ValidationError(f"F has negative coefficient on {k!r}")
        if isinstance(self.m0, bool) or int(self.m0) != self.m0 or self.m0 < 1:
            raise ValidationError("m0 must be a positive integer")
        if not 0 < self.delta <= 1:
            raise ValidationError("delta must lie in (0, 1]")
        if not 0 < self.e_param < 1:
            raise ValidationError("e must lie in (0, 1)")
        ok, bad = is_nef_tracked(self.model, self.H)
        if not ok:
            raise ValidationError(f"H is not nef on tracked curves: {bad}")

    @property
    def pair(self) -> GenPair:
        return GenPair(self.model, self.B, self.M, self.cartier_index)

    @property
    def G(self) -> DivisorClass:
        if self.G_explicit is not None:
            return combination_of_curves(self.model, self.G_explicit)
        return self.H + combination_of_curves(self.model, self.F)

    @property
    def G_red(self) -> DivisorClass:
        if self.G_explicit is not None:
            return _reduced(self.model, self.G_explicit)
        return self.H + _reduced(self.model, self.F)

    def volume(self) -> Fraction:
        return pair_volume(self.pair)


def _reduced(model: SurfaceModel, coeffs: Mapping[str, Fraction]) -> DivisorClass:
    return combination_of_curves(model, {k: 1 for k, v in coeffs.items() if v > 0})


def check_boundHB(inst: BoundInstance) -> BoundCheck:
    """B_red . H against (2((m0(n+1)+2)/delta + 2(2n+1)m0 + 2))^n vol(K+B+M)."""
    n, m0 = DIM, inst.m0
    lhs = _reduced(inst.model, inst.B) @ inst.H
    c = 2 * (Fraction(m0 * (n + 1) + 2) / inst.delta + 2 * (2 * n + 1) * m0 + 2)
    return _check(lhs, c ** n * inst.volume())


def check_boundHM(inst: BoundInstance) -> BoundCheck:
    """H.(M + 3H) against (6 m0 + 1)^2 / 2 vol(K+B+M)."""
    lhs = inst.H @ (inst.M + 3 * inst.H)
    return _check(lhs, Fraction((6 * inst.m0 + 1) ** 2, 2) * inst.volume())


def check_boundM2(inst: BoundInstance) -> BoundCheck:
    """M^2 against (1 - e)^-2 vol(K+B+M); e must make K + eB + eM big."""
    e, model = inst.e_param, inst.model
    probe = model.canonical_class() + e * (combination_of_curves(model, inst.B) + inst.M)
    if not is_big(model, probe):
        raise EParamInvalid(f"K + {e}(B + M) is not big")
    return _check(inst.M @ inst.M, (1 - e) ** -2 * inst.volume())


def check_boundHG(inst: BoundInstance) -> BoundCheck:
    """G_red . H against (2/5)(14 m0 + 2)^2 vol(K+B+M)."""
    lhs = inst.G_red @ inst.H
    return _check(lhs, Fraction(2, 5) * (14 * inst.m0 + 2) ** 2 * inst.volume())


CHECKS = {"HB": check_boundHB, "HM": check_boundHM, "M2": check_boundM2, "HG": check_boundHG}
