"""Descent of nef divisors along birational morphisms of smooth surfaces.

Given a tower Y -> X and a nef class M_Y on Y, blow down every exceptional
(-1)-curve that M_Y does not see. What is left is the smallest intermediate
model X' with M_Y pulled back from it, and X' -> X blows up at most
M^2 - M_Y^2 points, where M is the pushforward of M_Y to X.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .divisors import Contraction, pullback_along_tower, pushforward, pushforward_along_tower
from .errors import CriterionMismatch, InternalConsistencyError, NotMinusOneCurve, NotNef, PreconditionUnmet
from .lattice import BaseSurface, BlowupCenter, Curve, DivisorClass, SurfaceModel
from .positivity import is_nef_tracked


def blowup_nef_criterion(model: SurfaceModel, m: DivisorClass, center: BlowupCenter) -> bool:
    """Whether pullback(M) - E stays nef after blowing up ``center``.

    The multiplicity test (M.C >= mult(C) for every tracked C) and the direct
    nefness test on the blown-up model are both evaluated; they must agree.
    """
    model.check(m)
    by_mult = all(model.intersect(m, model.curve_class(c.name)) >= center.mult(c.name) for c in model.curves)
    up = model.blow_up(center)
    e = up.exceptional_names[-1]
    lifted = pullback_along_tower(model, up, m) - up.basis(e)
    direct = is_nef_tracked(up, lifted)[0]
    if by_mult != direct:
        raise CriterionMismatch(f"multiplicity criterion says {by_mult}, direct check says {direct}")
    return direct


@dataclass(frozen=True)
class Blowdown:
    """Blow-down of a (-1)-curve, with class transport in both directions."""

    source: SurfaceModel
    target: SurfaceModel
    curve: str
    structured: bool  # True when the target is the same tower with one center removed

    def push(self, d: DivisorClass) -> DivisorClass:
        self.source.check(d)
        if self.structured:
            return pushforward_along_tower(self.source, self.target, d)
        e = self.source.curve(self.curve).cls
        k = self._pivot
        ek = e[k]
        coeffs = tuple(d.coeffs[i] - d.coeffs[k] * e[i] / ek for i in range(len(e)) if i != k)
        return DivisorClass(self.target, coeffs)

    def pull(self, d: DivisorClass) -> DivisorClass:
        self.target.check(d)
        if self.structured:
            return pullback_along_tower(self.target, self.source, d)
        out = linalg.zeros(self.source.rank)
        for c, img in zip(d.coeffs, self._images):
            if c:
                out = linalg.add(out, linalg.scale(c, img))
        return DivisorClass(self.source, out)

    @property
    def _pivot(self) -> int:
        return _pivot_index(self.source.curve(self.curve).cls)

    @property
    def _images(self) -> list[linalg.Vector]:
        src = self.source
        e = src.curve(self.curve).cls
        k = self._pivot
        return [_reflect(src, linalg.unit(src.rank, i), e) for i in range(src.rank) if i != k]


def _pivot_index(e: Sequence[Fraction]) -> int:
    units = [i for i, x in enumerate(e) if abs(x) == 1]
    if units:
        return units[-1]
    return max(i for i, x in enumerate(e) if x)


def _reflect(model: SurfaceModel, v, e) -> linalg.Vector:
    # v + (v.E) E, the projection onto E^perp for E^2 = -1
    return linalg.add(v, linalg.scale(linalg.bilinear(model.gram, v, e), e))


def _strip_pi(name: str) -> str:
    return name[2:] if name.startswith("pi") and len(name) > 2 else name


def contract_minus_one_curve(model: SurfaceModel, curve_name: str) -> Blowdown:
    c = model.curve(curve_name)
    e2 = linalg.bilinear(model.gram, c.cls, c.cls)
    ke = linalg.dot(model.canonical, linalg.matvec(model.gram, c.cls))
    if e2 != -1 or ke != -1:
        raise NotMinusOneCurve(f"{curve_name!r} has E^2 = {e2}, K.E = {ke}")
    if c.is_exceptional:
        i = model.exceptional_names.index(curve_name)
        # E^2 = -1 forces that no later center lies on this curve; pin names so later ones keep theirs
        pinned = [BlowupCenter(c.multiplicities, n) for c, n in zip(model.centers, model.exceptional_names)]
        centers = tuple(pinned[:i] + pinned[i + 1:])
        return Blowdown(model, SurfaceModel(model.base, centers), curve_name, True)

    k = _pivot_index(c.cls)
    imgs = [_reflect(model, linalg.unit(model.rank, i), c.cls) for i in range(model.rank) if i != k]
    names = [_strip_pi(n) for i, n in enumerate(model.basis_names) if i != k]

    def coords(v):
        return tuple(v[i] - v[k] * c.cls[i] / c.cls[k] for i in range(model.rank) if i != k)

    gram = tuple(tuple(linalg.bilinear(model.gram, a, b) for b in imgs) for a in imgs)
    curves = tuple(Curve(x.name, coords(x.cls)) for x in model.curves if x.name != curve_name)
    base = BaseSurface(f"{model.base.name}/{curve_name}", gram, coords(model.canonical), curves, tuple(names))
    return Blowdown(model, SurfaceModel(base, ()), curve_name, False)


@dataclass(frozen=True)
class DescentResult:
    top: SurfaceModel
    M_top: DivisorClass
    intermediate_model: SurfaceModel
    M_prime: DivisorClass
    contractions_performed: tuple[str, ...]
    blowup_count: int

    @property
    def M_base(self) -> DivisorClass:
        return self.top.base_class(self.M_top)

    @property
    def bound(self) -> Fraction:
        """M^2 - M_Y^2, the maximal number of blow-ups between X and X'."""
        return self.M_base.square() - self.M_top.square()

    def violations(self) -> list[str]:
        out = []
        if pullback_along_tower(self.intermediate_model, self.top, self.M_prime) != self.M_top:
            out.append("pullback of M' differs from M_Y")
        if self.intermediate_model.base_class(self.M_prime) != self.M_base:
            out.append("pushforward of M' differs from M")
        if self.blowup_count > self.bound:
            out.append(f"blowup count {self.blowup_count} exceeds {self.bound}")
        for e in _minus_one_exceptionals(self.intermediate_model):
            if self.intermediate_model.intersect(self.M_prime, self.intermediate_model.curve_class(e)) <= 0:
                out.append(f"M'.{e} <= 0")
        return out


def _minus_one_exceptionals(model: SurfaceModel) -> list[str]:
    out = []
    for name in model.exceptional_names:
        cls = model.curve(name).cls
        if linalg.bilinear(model.gram, cls, cls) == -1:
            out.append(name)
    return out


def _eligible(model: SurfaceModel, m: DivisorClass) -> list[str]:
    return [e for e in _minus_one_exceptionals(model) if model.intersect(m, model.curve_class(e)) == 0]


def descend_nef(model: SurfaceModel, m_y: DivisorClass, order: Sequence[str] | None = None) -> DescentResult:
    """Blow down exceptional (-1)-curves orthogonal to M_Y until none is left.

    Curves are taken in tower order unless ``order`` gives a preference list;
    the outcome does not depend on the order.
    """
    model.check(m_y)
    nef, bad = is_nef_tracked(model, m_y)
    if not nef:
        raise NotNef(f"M_Y is not nef on tracked curves: {bad}")
    cur, m = model, m_y
    done: list[str] = []
    rank_of = {n: i for i, n in enumerate(order or ())}
    while True:
        elig = _eligible(cur, m)
        if not elig:
            break
        if order is not None:
            elig.sort(key=lambda n: rank_of.get(n, len(rank_of)))
        bd = contract_minus_one_curve(cur, elig[0])
        m = bd.push(m)
        cur = bd.target
        done.append(elig[0])
    res = DescentResult(model, m_y, cur, m, tuple(done), cur.depth)
    bad = res.violations()
    if bad:
        raise InternalConsistencyError("; ".join(bad))
    return res


def check_pushforward_nef(model: SurfaceModel, m: DivisorClass,
                          to: SurfaceModel | Blowdown | Contraction) -> bool:
    """Pushforward of a nef class along a tower truncation, blow-down or contraction is nef."""
    model.check(m)
    if not is_nef_tracked(model, m)[0]:
        raise NotNef("input class is not nef on tracked curves")
    if isinstance(to, Blowdown):
        pushed, target = to.push(m), to.target
    elif isinstance(to, Contraction):
        pushed, target = pushforward(to, m), to
    else:
        pushed, target = pushforward_along_tower(model, to, m), to
    ok, bad = is_nef_tracked(target, pushed)
    if not ok:
        raise InternalConsistencyError(f"pushforward of a nef class is not nef: {bad}")
    return True


def check_trivial_blowup(model: SurfaceModel, curve: str, m: DivisorClass, m_prime: DivisorClass,
                         x_depth: int = 0) -> tuple[bool, str | None]:
    """Blow-ups over a curve C with M.C = 0 cannot change a nef lift of M.

    ``model`` is Y; X is its truncation at ``x_depth`` and every later center
    must lie on C or on an exceptional curve created over it. Returns
    ``(True, None)`` when M'.E = 0 for every exceptional curve of Y -> X,
    otherwise ``(False, witness)``.
    """
    x = model.truncate(x_depth)
    if isinstance(m.model, BaseSurface) and x_depth == 0:
        m = x.include(m)
    x.check(m)
    model.check(m_prime)
    if x.intersect(m, x.curve_class(curve)) != 0:
        raise PreconditionUnmet(f"M.{curve} != 0")
    if pushforward_along_tower(model, x, m_prime) != m:
        raise PreconditionUnmet("M' does not push forward to M")
    nef, bad = is_nef_tracked(model, m_prime)
    if not nef:
        raise PreconditionUnmet(f"M' is not nef on tracked curves: {bad}")
    over = {curve}
    for name, center in zip(model.exceptional_names[x_depth:], model.centers[x_depth:]):
        if not any(center.mult(c) > 0 for c in over):
            raise PreconditionUnmet(f"center {name!r} does not lie over {curve!r}")
        over.add(name)
    for name in model.exceptional_names[x_depth:]:
        if model.intersect(m_prime, model.curve_class(name)) != 0:
            return False, name
    return True, None
