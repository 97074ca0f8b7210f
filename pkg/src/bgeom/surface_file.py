"""JSON surface descriptions and divisor expressions.

A surface file looks like::

    {
      "version": 1,
      "base": {"preset": "ruled1", "n": 3},
      "blowups": [{"multiplicities": {"L": 1}, "name": "E"}],
      "contraction": {"curves": ["C0"], "log_resolution": true},
      "pair": {"boundary": {"L": "1/2"}, "nef_part": {"piL": 4}, "cartier_index": 1}
    }

Rationals are integers or ``"p/q"`` strings, never floats.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any

from .divisors import Contraction
from .errors import ParseError, ValidationError
from .lattice import PRESETS, BaseSurface, BlowupCenter, DivisorClass, Lattice, SurfaceModel, raw_base
from .pairs import GenPair

VERSION = 1
_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def parse_rational(x: Any, path: str = "$") -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"expected an integer or 'p/q' string, got {x!r}", path)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str) and _RATIONAL_RE.match(x):
        try:
            return Fraction(x.replace(" ", ""))
        except ZeroDivisionError:
            raise ParseError("zero denominator", path) from None
    raise ParseError(f"expected an integer or 'p/q' string, got {x!r}", path)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _expect(obj: Any, typ, path: str, what: str):
    if typ is int and isinstance(obj, bool):
        raise ParseError(f"expected {what}", path)
    if not isinstance(obj, typ):
        raise ParseError(f"expected {what}", path)
    return obj


def _fields(obj: dict, path: str, required: set[str], optional: set[str] = frozenset()) -> None:
    _expect(obj, dict, path, "an object")
    unknown = set(obj) - required - optional
    if unknown:
        raise ParseError(f"unknown field(s) {sorted(unknown)}", path)
    missing = required - set(obj)
    if missing:
        raise ParseError(f"missing field(s) {sorted(missing)}", path)


def _rational_map(obj: Any, path: str) -> dict[str, Fraction]:
    _expect(obj, dict, path, "an object of rationals")
    return {str(k): parse_rational(v, f"{path}.{k}") for k, v in obj.items()}


@dataclass(frozen=True)
class BaseSpec:
    preset: str | None = None
    n: int | None = None
    raw: dict | None = None  # {"name", "gram", "canonical", "curves", "basis"?}

    def build(self) -> BaseSurface:
        if self.preset is not None:
            if self.preset == "P2":
                return PRESETS["P2"]()
            return PRESETS[self.preset](self.n)
        r = self.raw
        return raw_base(r["name"], r["gram"], r["canonical"], [(c["name"], c["class"]) for c in r["curves"]],
                        r.get("basis"), r.get("tracked_generate_effective", False))


@dataclass(frozen=True)
class SurfaceFile:
    version: int
    base: BaseSpec
    blowups: tuple[tuple[dict[str, int], str | None], ...] = ()
    contraction: tuple[tuple[str, ...], bool] | None = None
    pair: dict | None = None  # {"boundary", "nef_part", "cartier_index"}

    @cached_property
    def model(self) -> SurfaceModel:
        centers = tuple(BlowupCenter(tuple(m.items()), name) for m, name in self.blowups)
        return SurfaceModel(self.base.build(), centers)

    @cached_property
    def contraction_obj(self) -> Contraction | None:
        if self.contraction is None:
            return None
        curves, logres = self.contraction
        return Contraction(self.model, curves, logres)

    @cached_property
    def pair_obj(self) -> GenPair | None:
        carrier = self.contraction_obj or self.model
        if self.pair is None:
            return None
        nef = self.model.combination(self.pair["nef_part"])
        return GenPair(carrier, self.pair["boundary"], nef, self.pair["cartier_index"])

    def validate(self) -> SurfaceFile:
        self.model
        self.contraction_obj
        self.pair_obj
        return self

    def to_json(self) -> dict:
        base: dict[str, Any]
        if self.base.preset is not None:
            base = {"preset": self.base.preset}
            if self.base.n is not None:
                base["n"] = self.base.n
        else:
            r = self.base.raw
            raw = {
                "name": r["name"],
                "gram": [[format_rational(x) for x in row] for row in r["gram"]],
                "canonical": [format_rational(x) for x in r["canonical"]],
                "curves": [{"name": c["name"], "class": [format_rational(x) for x in c["class"]]}
                           for c in r["curves"]],
            }
            if r.get("basis") is not None:
                raw["basis"] = list(r["basis"])
            if r.get("tracked_generate_effective"):
                raw["tracked_generate_effective"] = True
            base = {"raw": raw}
        out: dict[str, Any] = {"version": self.version, "base": base}
        bl = []
        for mults, name in self.blowups:
            entry: dict[str, Any] = {"multiplicities": dict(mults)}
            if name is not None:
                entry["name"] = name
            bl.append(entry)
        out["blowups"] = bl
        if self.contraction is not None:
            out["contraction"] = {"curves": list(self.contraction[0]), "log_resolution": self.contraction[1]}
        if self.pair is not None:
            out["pair"] = {
                "boundary": {k: format_rational(v) for k, v in self.pair["boundary"].items()},
                "nef_part": {k: format_rational(v) for k, v in self.pair["nef_part"].items()},
                "cartier_index": self.pair["cartier_index"],
            }
        return out


def serialize(sf: SurfaceFile) -> bytes:
    return (json.dumps(sf.to_json(), sort_keys=True, indent=2) + "\n").encode("utf-8")


def _parse_base(obj: Any) -> BaseSpec:
    path = "$.base"
    _expect(obj, dict, path, "an object")
    if "preset" in obj:
        _fields(obj, path, {"preset"}, {"n"})
        preset = obj["preset"]
        if preset not in PRESETS:
            raise ParseError(f"unknown preset {preset!r}; expected one of {sorted(PRESETS)}", f"{path}.preset")
        n = obj.get("n")
        if preset == "P2":
            if n is not None:
                raise ParseError("preset P2 takes no parameter", f"{path}.n")
        else:
            if n is None:
                raise ParseError(f"preset {preset} needs parameter n", path)
            _expect(n, int, f"{path}.n", "an integer")
        return BaseSpec(preset=preset, n=n)
    _fields(obj, path, {"raw"})
    r = obj["raw"]
    rp = f"{path}.raw"
    _fields(r, rp, {"name", "gram", "canonical", "curves"}, {"basis", "tracked_generate_effective", "rank"})
    gram = _expect(r["gram"], list, f"{rp}.gram", "a list of rows")
    g = tuple(tuple(parse_rational(x, f"{rp}.gram[{i}][{j}]") for j, x in enumerate(_expect(row, list, f"{rp}.gram[{i}]", "a list")))
              for i, row in enumerate(gram))
    if "rank" in r and r["rank"] != len(g):
        raise ParseError(f"rank {r['rank']} does not match gram size {len(g)}", f"{rp}.rank")
    can = tuple(parse_rational(x, f"{rp}.canonical[{i}]")
                for i, x in enumerate(_expect(r["canonical"], list, f"{rp}.canonical", "a list")))
    curves = []
    for i, c in enumerate(_expect(r["curves"], list, f"{rp}.curves", "a list")):
        cp = f"{rp}.curves[{i}]"
        _fields(c, cp, {"name", "class"}, {"is_exceptional"})
        if c.get("is_exceptional"):
            raise ParseError("base curves cannot be exceptional", f"{cp}.is_exceptional")
        cls = tuple(parse_rational(x, f"{cp}.class[{j}]")
                    for j, x in enumerate(_expect(c["class"], list, f"{cp}.class", "a list")))
        curves.append({"name": _expect(c["name"], str, f"{cp}.name", "a string"), "class": cls})
    basis = r.get("basis")
    if basis is not None:
        basis = tuple(_expect(b, str, f"{rp}.basis", "strings") for b in _expect(basis, list, f"{rp}.basis", "a list"))
    teff = r.get("tracked_generate_effective", False)
    _expect(teff, bool, f"{rp}.tracked_generate_effective", "a boolean")
    raw = {"name": _expect(r["name"], str, f"{rp}.name", "a string"), "gram": g, "canonical": can,
           "curves": tuple(curves), "basis": basis, "tracked_generate_effective": teff}
    return BaseSpec(raw=raw)


def parse_obj(doc: Any) -> SurfaceFile:
    _fields(doc, "$", {"version", "base"}, {"blowups", "contraction", "pair"})
    version = _expect(doc["version"], int, "$.version", "an integer")
    if version != VERSION:
        raise ParseError(f"unsupported version {version}", "$.version")
    base = _parse_base(doc["base"])
    blowups = []
    for i, b in enumerate(_expect(doc.get("blowups", []), list, "$.blowups", "a list")):
        bp = f"$.blowups[{i}]"
        _fields(b, bp, {"multiplicities"}, {"name"})
        mults = {}
        for k, v in _expect(b["multiplicities"], dict, f"{bp}.multiplicities", "an object").items():
            mults[k] = _expect(v, int, f"{bp}.multiplicities.{k}", "an integer")
        name = b.get("name")
        if name is not None:
            _expect(name, str, f"{bp}.name", "a string")
        blowups.append((mults, name))
    contraction = None
    if "contraction" in doc:
        c = doc["contraction"]
        _fields(c, "$.contraction", {"curves"}, {"log_resolution"})
        curves = tuple(_expect(x, str, "$.contraction.curves", "strings")
                       for x in _expect(c["curves"], list, "$.contraction.curves", "a list"))
        logres = _expect(c.get("log_resolution", False), bool, "$.contraction.log_resolution", "a boolean")
        contraction = (curves, logres)
    pair = None
    if "pair" in doc:
        p = doc["pair"]
        _fields(p, "$.pair", set(), {"boundary", "nef_part", "cartier_index"})
        r = p.get("cartier_index", 1)
        _expect(r, int, "$.pair.cartier_index", "an integer")
        pair = {"boundary": _rational_map(p.get("boundary", {}), "$.pair.boundary"),
                "nef_part": _rational_map(p.get("nef_part", {}), "$.pair.nef_part"),
                "cartier_index": r}
    return SurfaceFile(version, base, tuple(blowups), contraction, pair)


def parse(data: bytes | str, validate: bool = True) -> SurfaceFile:
    """Strict parse of a surface file; with ``validate`` the engine objects are built too."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, "$", exc.lineno) from None
    sf = parse_obj(doc)
    if validate:
        sf.validate()
    return sf


def _reject_float(s: str):
    raise ParseError(f"floating point literal {s} is not allowed; use 'p/q'")


# -- divisor expressions ------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>[-+*]))")


def parse_terms(expr: str) -> list[tuple[Fraction, str | None]]:
    """Tokenize ``term (("+"|"-") term)*`` with ``term := [rational "*"] name | rational``.

    A bare rational contributes a constant term (name ``None``); only ``0`` is
    meaningful for divisor classes.
    """
    pos, toks = 0, []
    s = expr.strip()
    while pos < len(s):
        m = _TOKEN_RE.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse divisor expression {expr!r} near {s[pos:]!r}", "expression")
        kind = m.lastgroup
        toks.append((kind, m.group(kind)))
        pos = m.end()
    terms: list[tuple[Fraction, str | None]] = []
    i, sign = 0, 1
    if not toks:
        raise ParseError("empty divisor expression", "expression")
    first = True
    while i < len(toks):
        if toks[i][0] == "op" and toks[i][1] in "+-":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ParseError(f"expected '+' or '-' in {expr!r}", "expression")
        first = False
        coef = Fraction(1)
        if i < len(toks) and toks[i][0] == "num":
            coef = Fraction(toks[i][1])
            i += 1
            if i < len(toks) and toks[i] == ("op", "*"):
                i += 1
            else:
                terms.append((sign * coef, None))
                continue
        if i >= len(toks) or toks[i][0] != "name":
            raise ParseError(f"expected a curve or basis name in {expr!r}", "expression")
        terms.append((sign * coef, toks[i][1]))
        i += 1
    return terms


def parse_divisor(lattice: Lattice, expr: str) -> DivisorClass:
    total = lattice.zero()
    for coef, name in parse_terms(expr):
        if name is None:
            if coef != 0:
                raise ValidationError(f"constant term {coef} in a divisor expression")
            continue
        total = total + coef * lattice.class_of(name)
    return total


def parse_curve_divisor(lattice: Lattice, expr: str) -> dict[str, Fraction]:
    """An expression over tracked curve names only, returned curve by curve."""
    out: dict[str, Fraction] = {}
    for coef, name in parse_terms(expr):
        if name is None:
            if coef != 0:
                raise ValidationError(f"constant term {coef} in a divisor expression")
            continue
        lattice.curve(name)
        out[name] = out.get(name, Fraction(0)) + coef
    return {k: v for k, v in out.items() if v}
