"""Random instance generators and independent oracles for the test suite.

The oracles deliberately avoid ``bgeom.linalg``: they use their own small
Fraction eliminations or sympy's exact matrices, so a bug in the engine's
elimination code cannot hide behind the same bug in the check.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

import sympy

from bgeom.descent import contract_minus_one_curve
from bgeom.lattice import BlowupCenter, SurfaceModel, build_model, hirzebruch, projective_plane
from bgeom.positivity import is_nef_tracked, zariski
from bgeom.errors import NotPseudoeffective


# -- generators ---------------------------------------------------------------

def random_base(rng: random.Random, toric: bool = False):
    if rng.random() < 0.5:
        return projective_plane(toric=toric)
    return hirzebruch(rng.randint(0, 3), toric=toric)


def random_tower(rng: random.Random, base=None, depth: int | None = None, max_tracked: int = 12) -> SurfaceModel:
    """Tower whose centers sit on no tracked curve, on one, or on a meeting point of two."""
    base = base or random_base(rng)
    depth = rng.randint(0, 5) if depth is None else depth
    model = build_model(base)
    for i in range(depth):
        if len(model.curves) >= max_tracked:
            break
        model = model.blow_up(random_center(rng, model))
    return model


def toric_tower(rng: random.Random, base=None, depth: int | None = None) -> SurfaceModel:
    """Blow-ups at nodes of the toric boundary; tracked curves then generate the effective cone."""
    if base is None:
        base = random_base(rng, toric=True)
    cycle = list(base.curve_names)  # toric presets list their boundary in cyclic order
    depth = rng.randint(0, 5) if depth is None else depth
    model = build_model(base)
    for i in range(depth):
        j = rng.randrange(len(cycle))
        a, b = cycle[j], cycle[(j + 1) % len(cycle)]
        name = f"E{i + 1}"
        model = model.blow_up(BlowupCenter(((a, 1), (b, 1)), name))
        cycle.insert(j + 1, name)
    return model


def random_divisor(rng: random.Random, model, lo: int = -5, hi: int = 5):
    return model.divisor([rng.randint(lo, hi) for _ in range(model.rank)])


def random_effective(rng: random.Random, model, hi: int = 4):
    """A non-negative integer combination of tracked curves."""
    out = model.zero()
    for name in model.curve_names:
        c = rng.randint(0, hi)
        if c:
            out = out + c * model.curve_class(name)
    return out


def random_nef(rng: random.Random, model):
    """An integral nef-tracked class.

    Half the time a pullback of a nef base class minus exceptional terms
    (rejection sampled), otherwise the positive part of an effective class
    scaled to clear denominators.
    """
    if rng.random() < 0.5:
        for _ in range(50):
            d = model.divisor([rng.randint(0, 6) for _ in range(model.base.rank)]
                              + [-rng.randint(0, 3) for _ in range(model.depth)])
            if is_nef_tracked(model, d)[0]:
                return d
    d = random_effective(rng, model) + model.divisor([rng.randint(1, 4)] + [0] * (model.rank - 1))
    try:
        p = zariski(model, d).P
    except NotPseudoeffective:
        return model.zero()
    den = 1
    for c in p.coeffs:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return den * p


def random_center(rng: random.Random, model) -> BlowupCenter:
    """A point on at most two tracked curves, each passing through it once."""
    k = rng.choice([0, 1, 1, 2, 2])
    if k == 2:
        meeting = [(a, b) for i, a in enumerate(model.curve_names) for b in model.curve_names[i + 1:]
                   if model.curve_class(a) @ model.curve_class(b) > 0]
        if meeting:
            return BlowupCenter(tuple((n, 1) for n in rng.choice(meeting)))
        k = 1
    names = rng.sample(model.curve_names, min(k, len(model.curve_names)))
    return BlowupCenter(tuple((n, 1) for n in names))


def minus_one_exceptionals(model) -> list[str]:
    return [e for e in model.exceptional_names if model.curve_class(e).square() == -1]


# -- oracles ------------------------------------------------------------------

def sym(m):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m])


def frac(x) -> Fraction:
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


def sym_negative_definite(m) -> bool:
    """Sylvester: -m positive definite iff every leading minor of -m is positive."""
    if not m:
        return True
    a = -sym(m)
    return all(a[:k, :k].det() > 0 for k in range(1, a.rows + 1))


def _gauss_solve(a, b):
    """Plain Gauss-Jordan over Fractions, written independently of the engine."""
    n = len(a)
    m = [list(map(Fraction, row)) + [Fraction(x)] for row, x in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n] for row in m]


def _leading_minors_positive(a) -> bool:
    """Every leading principal minor of ``a`` is positive (no pivoting, so minors are the pivot products)."""
    n = len(a)
    m = [list(map(Fraction, row)) for row in a]
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for r in range(k + 1, n):
            f = m[r][k] / m[k][k]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[k])]
    return True


def _form(gram, u, v):
    return sum(u[i] * gram[i][j] * v[j] for i in range(len(u)) if u[i] for j in range(len(v)) if v[j])


def oracle_zariski(model, d):
    """Brute force over subsets of tracked curves.

    Subsets whose gram is not negative definite are skipped together with
    all their supersets (negative definiteness is inherited by subsets).
    Returns (P coeffs, N coeffs, support) or None, asserting uniqueness.
    """
    curves = list(model.curves)
    gram = model.gram
    dv = list(d.coeffs)
    cls = [list(c.cls) for c in curves]
    g_all = [[_form(gram, u, v) for v in cls] for u in cls]
    d_dot = [_form(gram, dv, u) for u in cls]
    found = []

    def visit(sub):
        if sub:
            g = [[-g_all[i][j] for j in sub] for i in sub]
            if not _leading_minors_positive(g):
                return False
            x = _gauss_solve([[g_all[i][j] for j in sub] for i in sub], [d_dot[i] for i in sub])
        else:
            x = []
        if all(xi > 0 for xi in x):
            coef = dict(zip(sub, x))
            ok = True
            for k in range(len(curves)):
                val = d_dot[k] - sum(xi * g_all[i][k] for i, xi in coef.items())
                if (k in coef and val != 0) or (k not in coef and val < 0):
                    ok = False
                    break
            if ok:
                n = [sum((coef[i] * cls[i][t] for i in coef), Fraction(0)) for t in range(model.rank)]
                p = [a - b for a, b in zip(dv, n)]
                found.append((tuple(p), tuple(n), tuple(sorted(curves[i].name for i in sub))))
        return True

    def rec(sub, start):
        if not visit(sub):
            return
        for i in range(start, len(curves)):
            rec(sub + [i], i + 1)

    rec([], 0)
    assert len({f[:2] for f in found}) <= 1, f"non-unique decompositions: {found}"
    return found[0] if found else None


def engine_zariski(model, d):
    try:
        z = zariski(model, d)
    except NotPseudoeffective:
        return None
    return z.P.coeffs, z.N.coeffs, tuple(sorted(z.support))


def oracle_pullback(contraction, d_target):
    """Solve the orthogonality conditions with sympy from the engine's lift of the chosen basis."""
    src = contraction.source
    lift = sympy.zeros(src.rank, 1)
    for name, c in zip(contraction.basis_names, d_target.coeffs):
        lift[src.basis_names.index(name)] = sympy.Rational(c.numerator, c.denominator)
    gram = sym(src.gram)
    ex = [sympy.Matrix([sympy.Rational(x.numerator, x.denominator) for x in src.curve(n).cls])
          for n in contraction.contracted]
    if not ex:
        return tuple(frac(t) for t in lift)
    g = sympy.Matrix([[(u.T * gram * v)[0] for v in ex] for u in ex])
    rhs = sympy.Matrix([-(lift.T * gram * u)[0] for u in ex])
    a = g.LUsolve(rhs)
    out = lift + sum((ai * u for ai, u in zip(a, ex)), sympy.zeros(src.rank, 1))
    return tuple(frac(t) for t in out)


def random_negative_definite_subset(rng: random.Random, model, max_size: int = 6) -> tuple[str, ...]:
    names = list(model.curve_names)
    rng.shuffle(names)
    chosen: list[str] = []
    for n in names:
        if len(chosen) >= max_size:
            break
        cand = chosen + [n]
        g = [[model.curve_class(a) @ model.curve_class(b) for b in cand] for a in cand]
        if sym_negative_definite(g):
            chosen = cand
    return tuple(chosen)


def random_blowdown_chain(rng: random.Random, model, steps: int):
    """Successive (-1)-curve contractions; yields Blowdown objects."""
    cur = model
    out = []
    for _ in range(steps):
        cands = [c.name for c in cur.curves
                 if cur.curve_class(c.name).square() == -1 and cur.canonical_class() @ cur.curve_class(c.name) == -1]
        if not cands:
            break
        bd = contract_minus_one_curve(cur, rng.choice(cands))
        out.append(bd)
        cur = bd.target
    return out
