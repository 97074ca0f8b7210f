"""Picard lattices of base surfaces and of blow-up towers over them.

A :class:`SurfaceModel` is a base lattice plus an ordered list of point
blow-ups. Classes are written in the total-transform basis: pullbacks of the
base generators followed by one total exceptional class per blow-up. In that
basis the intersection form is ``diag(base.gram, -I)`` and the canonical class
is ``pullback(K_base) + sum(e_i)``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from . import linalg
from .errors import InconsistentCenter, InvalidLattice, InvalidMultiplicity, ModelMismatch, UnknownCurveName, ValidationError
from .linalg import Matrix, Vector

NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")


@dataclass(frozen=True)
class Curve:
    """A tracked irreducible curve: its name and class on the carrying lattice."""

    name: str
    cls: Vector
    is_exceptional: bool = False


class Lattice:
    """Shared lookups for anything carrying divisor classes.

    Subclasses provide ``rank``, ``gram``, ``canonical``, ``basis_names`` and
    ``curves``.
    """

    rank: int
    gram: Matrix
    canonical: Vector
    basis_names: tuple[str, ...]
    curves: tuple[Curve, ...]

    def _curve_index(self) -> dict[str, Curve]:
        idx = self.__dict__.get("_curve_idx")
        if idx is None:
            idx = {c.name: c for c in self.curves}
            object.__setattr__(self, "_curve_idx", idx)
        return idx

    @property
    def curve_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.curves)

    def curve(self, name: str) -> Curve:
        try:
            return self._curve_index()[name]
        except KeyError:
            raise UnknownCurveName(f"no tracked curve named {name!r}") from None

    def has_curve(self, name: str) -> bool:
        return name in self._curve_index()

    def divisor(self, coeffs: Iterable) -> DivisorClass:
        v = linalg.vector(coeffs)
        if len(v) != self.rank:
            raise ValidationError(f"expected {self.rank} coefficients, got {len(v)}")
        return DivisorClass(self, v)

    def zero(self) -> DivisorClass:
        return DivisorClass(self, linalg.zeros(self.rank))

    def basis(self, name: str) -> DivisorClass:
        try:
            i = self.basis_names.index(name)
        except ValueError:
            raise UnknownCurveName(f"no basis vector named {name!r}") from None
        return DivisorClass(self, linalg.unit(self.rank, i))

    def class_of(self, name: str) -> DivisorClass:
        """Resolve a name: tracked curves first, then basis vectors."""
        if self.has_curve(name):
            return DivisorClass(self, self.curve(name).cls)
        return self.basis(name)

    def combination(self, coeffs: Mapping[str, object]) -> DivisorClass:
        """Linear combination of named curves/basis vectors."""
        total = self.zero()
        for name, c in coeffs.items():
            total = total + linalg.as_fraction(c) * self.class_of(name)
        return total

    def canonical_class(self) -> DivisorClass:
        return DivisorClass(self, self.canonical)

    def intersect(self, d1: DivisorClass, d2: DivisorClass) -> Fraction:
        self.check(d1)
        self.check(d2)
        return linalg.bilinear(self.gram, d1.coeffs, d2.coeffs)

    def check(self, d: DivisorClass) -> DivisorClass:
        if not (d.model is self or d.model == self):
            raise ModelMismatch("divisor class lives on a different model")
        return d

    def curve_class(self, name: str) -> DivisorClass:
        return DivisorClass(self, self.curve(name).cls)

    def signature(self) -> tuple[int, int, int]:
        return linalg.inertia(self.gram)


@dataclass(frozen=True, eq=False)
class DivisorClass:
    """Exact rational coefficient vector on a lattice."""

    model: Lattice
    coeffs: Vector

    def _same(self, other: DivisorClass) -> None:
        if not (other.model is self.model or other.model == self.model):
            raise ModelMismatch("divisor classes live on different models")

    def __add__(self, other: DivisorClass) -> DivisorClass:
        self._same(other)
        return DivisorClass(self.model, linalg.add(self.coeffs, other.coeffs))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        self._same(other)
        return DivisorClass(self.model, linalg.sub(self.coeffs, other.coeffs))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(self.model, tuple(-c for c in self.coeffs))

    def __mul__(self, c) -> DivisorClass:
        return DivisorClass(self.model, linalg.scale(c, self.coeffs))

    __rmul__ = __mul__

    def __matmul__(self, other: DivisorClass) -> Fraction:
        """Intersection product."""
        self._same(other)
        return linalg.bilinear(self.model.gram, self.coeffs, other.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DivisorClass):
            return NotImplemented
        return self.coeffs == other.coeffs and (other.model is self.model or other.model == self.model)

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def square(self) -> Fraction:
        return self @ self

    def named(self) -> dict[str, Fraction]:
        return {n: c for n, c in zip(self.model.basis_names, self.coeffs) if c}

    def __repr__(self) -> str:
        terms = [f"{c}*{n}" for n, c in self.named().items()]
        return f"DivisorClass({' + '.join(terms) or '0'})"


@dataclass(frozen=True)
class BaseSurface(Lattice):
    name: str
    gram: Matrix
    canonical: Vector
    curves: tuple[Curve, ...]
    basis_names: tuple[str, ...]
    # Hand-verified: the tracked curves generate the effective cone.
    tracked_generate_effective: bool = False

    def __post_init__(self):
        n = len(self.gram)
        if n < 1:
            raise InvalidLattice("base surface needs rank >= 1")
        if not linalg.is_symmetric(self.gram):
            raise InvalidLattice("gram matrix must be square and symmetric")
        if len(self.canonical) != n or len(self.basis_names) != n:
            raise InvalidLattice("canonical class and basis names must have length rank")
        for c in self.curves:
            if len(c.cls) != n:
                raise InvalidLattice(f"curve {c.name!r} has wrong length")
            if c.is_exceptional:
                raise InvalidLattice("base curves are never exceptional")
        names = [c.name for c in self.curves] + list(self.basis_names)
        for nm in names:
            if not NAME_RE.match(nm):
                raise InvalidLattice(f"bad name {nm!r}")
        if len(set(c.name for c in self.curves)) != len(self.curves):
            raise InvalidLattice("duplicate curve names")
        if len(set(self.basis_names)) != n:
            raise InvalidLattice("duplicate basis names")
        if linalg.inertia(self.gram) != (1, n - 1, 0):
            raise InvalidLattice("gram matrix must have signature (1, rank-1)")

    @property
    def rank(self) -> int:
        return len(self.gram)


def raw_base(name: str, gram, canonical, curves: Mapping[str, Iterable] | Iterable[tuple[str, Iterable]],
             basis_names: Iterable[str] | None = None, tracked_generate_effective: bool = False) -> BaseSurface:
    g = linalg.matrix(gram)
    items = curves.items() if isinstance(curves, Mapping) else curves
    cs = tuple(Curve(n, linalg.vector(v)) for n, v in items)
    if basis_names is None:
        basis_names = tuple(f"b{i + 1}" for i in range(len(g)))
    return BaseSurface(name, g, linalg.vector(canonical), cs, tuple(basis_names), tracked_generate_effective)


def projective_plane(toric: bool = False) -> BaseSurface:
    """P^2 with one line ``L``, or with the three coordinate lines ``L, L2, L3``."""
    curves = {"L": [1]} if not toric else {"L": [1], "L2": [1], "L3": [1]}
    return raw_base("P2", [[1]], [-3], curves, ("L",), tracked_generate_effective=True)


def hirzebruch(n: int, toric: bool = False) -> BaseSurface:
    """F_n in the basis (C0, f), C0^2 = -n.

    The toric variant also tracks the section ``Cinf = C0 + n f`` and a second
    fibre ``f2``; the four curves form the boundary cycle C0, f, Cinf, f2.
    """
    if n < 0:
        raise InvalidLattice("Hirzebruch index must be >= 0")
    curves = {"C0": [1, 0], "f": [0, 1]}
    if toric:
        curves.update({"Cinf": [1, n], "f2": [0, 1]})
    return raw_base(f"F{n}", [[-n, 1], [1, 0]], [-2, -(n + 2)], curves, ("C0", "f"),
                    tracked_generate_effective=True)


def ruled_elliptic(n: int) -> BaseSurface:
    """Ruled surface over an elliptic curve with invariant e = n (the resolved cone of degree n).

    Basis (C0, f) with C0^2 = -n; K = -2 C0 - n f.
    """
    if n < 1:
        raise InvalidLattice("cone degree must be >= 1")
    return raw_base(f"ruled1_{n}", [[-n, 1], [1, 0]], [-2, -n], {"C0": [1, 0], "f": [0, 1]}, ("C0", "f"),
                    tracked_generate_effective=True)


PRESETS = {"P2": lambda n=None: projective_plane(), "Fn": hirzebruch, "ruled1": ruled_elliptic}


@dataclass(frozen=True)
class BlowupCenter:
    """A point to blow up, described by the multiplicities of tracked curves through it."""

    multiplicities: tuple[tuple[str, int], ...] = ()
    name: str | None = None

    def __post_init__(self):
        items = self.multiplicities
        if isinstance(items, Mapping):
            items = items.items()
        clean = []
        for k, v in items:
            if isinstance(v, bool) or int(v) != v or v < 0:
                raise InvalidMultiplicity(f"multiplicity of {k!r} must be a non-negative integer")
            if v:
                clean.append((str(k), int(v)))
        object.__setattr__(self, "multiplicities", tuple(sorted(clean)))

    def mult(self, curve_name: str) -> int:
        for k, v in self.multiplicities:
            if k == curve_name:
                return v
        return 0

    @classmethod
    def at(cls, name: str | None = None, **mults: int) -> BlowupCenter:
        return cls(tuple(mults.items()), name)


@dataclass(frozen=True)
class SurfaceModel(Lattice):
    """A blow-up tower over a base surface, with derived lattice data."""

    base: BaseSurface
    centers: tuple[BlowupCenter, ...] = ()
    rank: int = field(init=False, compare=False, repr=False)
    gram: Matrix = field(init=False, compare=False, repr=False)
    canonical: Vector = field(init=False, compare=False, repr=False)
    basis_names: tuple[str, ...] = field(init=False, compare=False, repr=False)
    curves: tuple[Curve, ...] = field(init=False, compare=False, repr=False)
    exceptional_names: tuple[str, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        centers = tuple(self.centers)
        object.__setattr__(self, "centers", centers)
        b = self.base
        k = len(centers)
        rank = b.rank + k
        exc_names = tuple(c.name or f"E{i + 1}" for i, c in enumerate(centers))
        taken = set(b.curve_names) | {"pi" + s for s in b.basis_names}
        for nm in exc_names:
            if not NAME_RE.match(nm):
                raise ValidationError(f"bad exceptional curve name {nm!r}")
            if nm in taken:
                raise ValidationError(f"exceptional curve name {nm!r} is already in use")
            taken.add(nm)

        gram = linalg.block_diag(b.gram, tuple(tuple(Fraction(-1 if i == j else 0) for j in range(k))
                                             for i in range(k)))

        # strict transforms, grown one center at a time
        classes: dict[str, list[Fraction]] = {c.name: list(c.cls) + [Fraction(0)] * k for c in b.curves}
        exceptional: set[str] = set()
        for i, center in enumerate(centers):
            n_exc = 0
            for cname, m in center.multiplicities:
                if cname not in classes:
                    raise UnknownCurveName(f"center {exc_names[i]!r} references unknown curve {cname!r}")
                if cname in exceptional:
                    if m > 1:
                        raise InvalidMultiplicity(
                            f"exceptional curve {cname!r} is smooth; multiplicity {m} at {exc_names[i]!r}")
                    n_exc += 1
            if n_exc > 2:
                raise InvalidMultiplicity(f"center {exc_names[i]!r} lies on {n_exc} exceptional curves")
            # curves through a common point with multiplicities m1, m2 meet there with multiplicity >= m1*m2
            for (c1, m1), (c2, m2) in itertools.combinations(center.multiplicities, 2):
                if linalg.bilinear(gram, classes[c1], classes[c2]) < m1 * m2:
                    raise InconsistentCenter(
                        f"center {exc_names[i]!r} lies on {c1!r} and {c2!r}, which do not meet there")
            col = b.rank + i
            for cname, m in center.multiplicities:
                classes[cname][col] -= m
            classes[exc_names[i]] = [Fraction(0)] * rank
            classes[exc_names[i]][col] = Fraction(1)
            exceptional.add(exc_names[i])

        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "canonical", tuple(b.canonical) + (Fraction(1),) * k)
        object.__setattr__(self, "basis_names", tuple("pi" + s for s in b.basis_names) + exc_names)
        object.__setattr__(self, "exceptional_names", exc_names)
        curves = tuple(Curve(c.name, tuple(classes[c.name]), False) for c in b.curves)
        curves += tuple(Curve(nm, tuple(classes[nm]), True) for nm in exc_names)
        object.__setattr__(self, "curves", curves)

    @property
    def depth(self) -> int:
        return len(self.centers)

    def include(self, d: DivisorClass) -> DivisorClass:
        """Pull back a class from the base surface."""
        self.base.check(d)
        return DivisorClass(self, tuple(d.coeffs) + linalg.zeros(self.depth))

    def base_class(self, d: DivisorClass) -> DivisorClass:
        """Push a class forward to the base (forget exceptional coordinates)."""
        self.check(d)
        return DivisorClass(self.base, d.coeffs[: self.base.rank])

    def exceptional_total(self, name: str) -> DivisorClass:
        return self.basis(name)

    def truncate(self, depth: int) -> SurfaceModel:
        return SurfaceModel(self.base, self.centers[:depth])

    def blow_up(self, center: BlowupCenter) -> SurfaceModel:
        return SurfaceModel(self.base, self.centers + (center,))

    def iter_exceptional(self) -> Iterator[Curve]:
        return (c for c in self.curves if c.is_exceptional)


def build_model(base: BaseSurface, centers: Iterable[BlowupCenter | Mapping[str, int]] = ()) -> SurfaceModel:
    cs = tuple(c if isinstance(c, BlowupCenter) else BlowupCenter(tuple(dict(c).items())) for c in centers)
    return SurfaceModel(base, cs)


def intersect(model: Lattice, d1: DivisorClass, d2: DivisorClass) -> Fraction:
    return model.intersect(d1, d2)


def canonical_class(model: Lattice) -> DivisorClass:
    return model.canonical_class()
