"""Divisor calculus along towers and contractions.

A :class:`Contraction` contracts a negative-definite set of tracked curves on
a smooth model. Its target is generally singular, so classes there are
Weil classes modulo numerical equivalence: coordinates in the quotient of
the source lattice by the span of the contracted curves, with Mumford's
rational intersection form.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import linalg
from .errors import InternalConsistencyError, NotExceptional, SingularGram, UnknownCurveName, ValidationError
from .lattice import Curve, DivisorClass, Lattice, SurfaceModel
from .linalg import Matrix, Vector


def gram_of(model: Lattice, classes: Iterable[Vector]) -> Matrix:
    cs = list(classes)
    return tuple(tuple(linalg.bilinear(model.gram, a, b) for b in cs) for a in cs)


@dataclass(frozen=True)
class Contraction(Lattice):
    """Contraction of tracked curves on ``source``; also the lattice of its target.

    The target basis is the set of source basis vectors that, together with
    the contracted classes, span the source lattice (chosen greedily in basis
    order). Target coordinates of a source class D are its coordinates on
    those vectors once D is written in the basis {chosen vectors, contracted
    classes}.
    """

    source: SurfaceModel
    contracted: tuple[str, ...]
    is_log_resolution: bool = False
    exceptional_gram: Matrix = field(init=False, compare=False, repr=False)
    rank: int = field(init=False, compare=False, repr=False)
    gram: Matrix = field(init=False, compare=False, repr=False)
    canonical: Vector = field(init=False, compare=False, repr=False)
    basis_names: tuple[str, ...] = field(init=False, compare=False, repr=False)
    curves: tuple[Curve, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        src = self.source
        names = tuple(self.contracted)
        object.__setattr__(self, "contracted", names)
        if len(set(names)) != len(names):
            raise ValidationError("contracted curves must be pairwise distinct")
        ex = [src.curve(n).cls for n in names]
        g = gram_of(src, ex)
        if not linalg.is_negative_definite(g):
            raise SingularGram("intersection matrix of the contracted curves is not negative definite")
        object.__setattr__(self, "exceptional_gram", g)

        chosen: list[int] = []
        rows = list(ex)
        for i in range(src.rank):
            if len(rows) == src.rank:
                break
            cand = rows + [linalg.unit(src.rank, i)]
            if linalg.rank(cand) == len(cand):
                rows = cand
                chosen.append(i)
        # columns: chosen unit vectors then contracted classes; invert to read coordinates
        cols = [linalg.unit(src.rank, i) for i in chosen] + ex
        change = linalg.transpose(cols)
        object.__setattr__(self, "_to_mixed", linalg.inverse(change))
        object.__setattr__(self, "_chosen", tuple(chosen))
        rank = len(chosen)
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "basis_names", tuple(src.basis_names[i] for i in chosen))

        lifts = [self._pullback_vec(linalg.unit(rank, j)) for j in range(rank)]
        object.__setattr__(self, "gram", gram_of(src, lifts))
        object.__setattr__(self, "canonical", self._push_vec(src.canonical))
        curves = tuple(Curve(c.name, self._push_vec(c.cls), c.is_exceptional)
                       for c in src.curves if c.name not in names)
        object.__setattr__(self, "curves", curves)

    @property
    def target(self) -> Contraction:
        return self

    @property
    def contracted_classes(self) -> list[DivisorClass]:
        return [self.source.curve_class(n) for n in self.contracted]

    def _push_vec(self, v: Vector) -> Vector:
        mixed = linalg.matvec(self._to_mixed, v)
        return mixed[: self.rank]

    def _exceptional_part(self, v: Vector) -> Vector:
        return linalg.matvec(self._to_mixed, v)[self.rank:]

    def _pullback_vec(self, w: Vector) -> Vector:
        src = self.source
        lift = linalg.zeros(src.rank)
        for j, i in enumerate(self._chosen):
            if w[j]:
                lift = linalg.add(lift, linalg.scale(w[j], linalg.unit(src.rank, i)))
        return self._orthogonalize(lift)

    def _orthogonalize(self, lift: Vector) -> Vector:
        """Add the unique exceptional combination making ``lift`` orthogonal to every contracted curve."""
        if not self.contracted:
            return lift
        src = self.source
        ex = [src.curve(n).cls for n in self.contracted]
        rhs = tuple(-linalg.bilinear(src.gram, lift, e) for e in ex)
        try:
            a = linalg.solve(self.exceptional_gram, rhs)
        except linalg.SingularMatrixError as exc:  # excluded by construction
            raise SingularGram(str(exc)) from exc
        out = lift
        for aj, e in zip(a, ex):
            if aj:
                out = linalg.add(out, linalg.scale(aj, e))
        return out

    def exceptional_coordinates(self, d: DivisorClass) -> dict[str, Fraction]:
        """Coefficients of the contracted curves when ``d`` has zero pushforward."""
        self.source.check(d)
        if any(self._push_vec(d.coeffs)):
            raise NotExceptional("class is not supported on the contracted curves")
        return dict(zip(self.contracted, self._exceptional_part(d.coeffs)))


def pushforward(contraction: Contraction, d: DivisorClass) -> DivisorClass:
    contraction.source.check(d)
    return DivisorClass(contraction, contraction._push_vec(d.coeffs))


def numerical_pullback(contraction: Contraction, d: DivisorClass) -> DivisorClass:
    """Unique lift of a target class that is orthogonal to all contracted curves."""
    contraction.check(d)
    return DivisorClass(contraction.source, contraction._pullback_vec(d.coeffs))


def strict_transform(model: SurfaceModel, curve_name: str) -> DivisorClass:
    if curve_name not in model.base.curve_names and curve_name not in model.exceptional_names:
        raise UnknownCurveName(f"no tracked curve named {curve_name!r}")
    return model.curve_class(curve_name)


def combination_of_curves(model: Lattice, coeffs: Mapping[str, object]) -> DivisorClass:
    """Class of the divisor sum(coeffs[C] * C) over tracked curves."""
    total = model.zero()
    for name, c in coeffs.items():
        c = linalg.as_fraction(c)
        if c:
            total = total + c * model.curve_class(name)
    return total


@dataclass(frozen=True)
class NegativityVerdict:
    coefficients: dict[str, Fraction]
    hypothesis_met: bool
    conclusion: bool | None  # None when the hypothesis fails

    @property
    def antieffective(self) -> bool:
        return all(c <= 0 for c in self.coefficients.values())


def check_negativity(contraction: Contraction, d: DivisorClass) -> NegativityVerdict:
    """Negativity lemma instance: if D is exceptional and D.E_k >= 0 for every contracted E_k, then -D >= 0.

    Raises :class:`InternalConsistencyError` if the conclusion fails under the
    hypothesis, which would mean the linear algebra is broken.
    """
    coeffs = contraction.exceptional_coordinates(d)
    src = contraction.source
    met = all(src.intersect(d, e) >= 0 for e in contraction.contracted_classes)
    if not met:
        return NegativityVerdict(coeffs, False, None)
    ok = all(c <= 0 for c in coeffs.values())
    if not ok:
        raise InternalConsistencyError(f"negativity lemma violated: {coeffs}")
    return NegativityVerdict(coeffs, True, True)


def pullback_along_tower(small: SurfaceModel, big: SurfaceModel, d: DivisorClass) -> DivisorClass:
    """Pull back from ``small`` to ``big`` when big's centers contain small's (matched by name)."""
    small.check(d)
    if small.base != big.base:
        raise ValidationError("models have different bases")
    idx = {n: i for i, n in enumerate(big.basis_names)}
    out = [Fraction(0)] * big.rank
    for n, c in zip(small.basis_names, d.coeffs):
        if n not in idx:
            raise ValidationError(f"{n!r} is not a basis vector of the larger model")
        out[idx[n]] = c
    return DivisorClass(big, tuple(out))


def pushforward_along_tower(big: SurfaceModel, small: SurfaceModel, d: DivisorClass) -> DivisorClass:
    """Push forward from ``big`` to a model obtained by removing some of its centers."""
    big.check(d)
    if small.base != big.base:
        raise ValidationError("models have different bases")
    idx = {n: i for i, n in enumerate(big.basis_names)}
    try:
        return DivisorClass(small, tuple(d.coeffs[idx[n]] for n in small.basis_names))
    except KeyError as exc:
        raise ValidationError(f"{exc.args[0]!r} is not a basis vector of the larger model") from None
