"""Nefness, Zariski decomposition and volumes, relative to the tracked curves.

Everything is computed against the finite set of tracked curves of a
lattice. When those curves generate the effective cone (P^2 with a line,
F_n with C0 and f, toric boundaries and blow-ups at their nodes) the answers
are the true ones; otherwise nefness is over-approximated and volumes may be
too large.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .divisors import gram_of
from .errors import NotPseudoeffective
from .lattice import DivisorClass, Lattice


def is_nef_tracked(model: Lattice, d: DivisorClass) -> tuple[bool, list[tuple[str, Fraction]]]:
    model.check(d)
    bad = []
    for c in model.curves:
        p = linalg.bilinear(model.gram, d.coeffs, c.cls)
        if p < 0:
            bad.append((c.name, p))
    return not bad, bad


def is_nef(model: Lattice, d: DivisorClass) -> bool:
    return is_nef_tracked(model, d)[0]


@dataclass(frozen=True)
class ZariskiDecomposition:
    P: DivisorClass
    N: DivisorClass
    support: tuple[str, ...]
    coefficients: dict[str, Fraction]

    def check(self) -> None:
        """Re-verify the defining properties; raises AssertionError on failure."""
        model = self.P.model
        assert all(self.coefficients[n] > 0 for n in self.support)
        g = gram_of(model, [model.curve(n).cls for n in self.support])
        assert linalg.is_negative_definite(g)
        for c in model.curves:
            p = linalg.bilinear(model.gram, self.P.coeffs, c.cls)
            if c.name in self.support:
                assert p == 0
            else:
                assert p >= 0


def _solve_negative_part(model: Lattice, d: DivisorClass, support: list[str]) -> tuple[Fraction, ...]:
    classes = [model.curve(n).cls for n in support]
    g = gram_of(model, classes)
    if not linalg.is_negative_definite(g):
        raise NotPseudoeffective(f"support {support} has a non-negative-definite intersection matrix")
    rhs = tuple(linalg.bilinear(model.gram, d.coeffs, c) for c in classes)
    return linalg.solve(g, rhs)


def _assemble(model: Lattice, d: DivisorClass, support: list[str], x) -> ZariskiDecomposition:
    n = model.zero()
    coeffs = {}
    for name, a in zip(support, x):
        coeffs[name] = a
        n = n + a * model.curve_class(name)
    keep = tuple(s for s in support if coeffs[s] != 0)
    return ZariskiDecomposition(d - n, n, keep, {s: coeffs[s] for s in keep})


def zariski(model: Lattice, d: DivisorClass) -> ZariskiDecomposition:
    """Zariski decomposition by support growth.

    Each round adds every tracked curve meeting the current positive part
    negatively, then re-solves for the negative part on the enlarged support.
    """
    model.check(d)
    support: list[str] = []
    x: tuple[Fraction, ...] = ()
    p = d
    while True:
        new = [c.name for c in model.curves
               if c.name not in support and linalg.bilinear(model.gram, p.coeffs, c.cls) < 0]
        if not new:
            break
        support += new
        x = _solve_negative_part(model, d, support)
        if any(a < 0 for a in x):
            raise NotPseudoeffective("negative part acquired a negative coefficient")
        p = _assemble(model, d, support, x).P
    return _assemble(model, d, support, x)


def volume(model: Lattice, d: DivisorClass) -> Fraction:
    try:
        z = zariski(model, d)
    except NotPseudoeffective:
        return Fraction(0)
    v = z.P @ z.P
    return v if v > 0 else Fraction(0)


def is_big(model: Lattice, d: DivisorClass) -> bool:
    return volume(model, d) > 0
