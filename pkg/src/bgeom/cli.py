"""Command-line interface: ``bgeom <command> <surface.json> [options]``.

Every invocation prints one JSON report on stdout with sorted keys and exact
rationals (``"p/q"`` strings). Exit status: 0 on success, 1 on a domain
error, 2 on usage, parse or validation errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import bounds as bounds_mod
from .descent import descend_nef
from .errors import BGeomError, ParseError, RankLimitExceeded, ValidationError
from .lattice import DivisorClass, Lattice
from .pairs import GenPair, Verdict, classify, pair_discrepancies, pair_volume
from .positivity import volume, zariski
from .surface_file import SurfaceFile, format_rational, parse, parse_curve_divisor, parse_divisor, parse_rational

DEFAULT_MAX_RANK = 64
EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    code = "UsageError"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _class_json(d: DivisorClass) -> dict[str, str]:
    return {n: format_rational(c) for n, c in zip(d.model.basis_names, d.coeffs)}


def _rmap(m: dict[str, Fraction]) -> dict[str, str]:
    return {k: format_rational(v) for k, v in m.items()}


def _lattice(sf: SurfaceFile, on_target: bool) -> Lattice:
    if on_target:
        if sf.contraction_obj is None:
            raise ValidationError("--target needs a contraction in the surface file")
        return sf.contraction_obj
    return sf.model


def _need_pair(sf: SurfaceFile) -> GenPair:
    """The file's pair, or the plain pair (carrier, B = 0, M = 0) when the section is absent."""
    if sf.pair_obj is not None:
        return sf.pair_obj
    return GenPair(sf.contraction_obj or sf.model, {}, sf.model.zero())


def cmd_check(sf: SurfaceFile, args) -> Any:
    m = sf.model
    out: dict[str, Any] = {
        "rank": m.rank,
        "basis": list(m.basis_names),
        "canonical": _class_json(m.canonical_class()),
        "K2": format_rational(m.canonical_class().square()),
        "signature": list(m.signature()[:2]),
        "curves": {c.name: {"class": _class_json(m.curve_class(c.name)),
                            "self_intersection": format_rational(m.curve_class(c.name).square()),
                            "exceptional": c.is_exceptional} for c in m.curves},
    }
    c = sf.contraction_obj
    if c is not None:
        out["contraction"] = {"curves": list(c.contracted), "log_resolution": c.is_log_resolution,
                              "target_basis": list(c.basis_names),
                              "target_gram": [[format_rational(x) for x in row] for row in c.gram]}
    return out


def cmd_intersect(sf, args):
    lat = _lattice(sf, args.target)
    return format_rational(lat.intersect(parse_divisor(lat, args.D1), parse_divisor(lat, args.D2)))


def cmd_zariski(sf, args):
    lat = _lattice(sf, args.target)
    z = zariski(lat, parse_divisor(lat, args.D))
    return {"P": _class_json(z.P), "N": _class_json(z.N), "support": list(z.support),
            "coefficients": _rmap(z.coefficients)}


def cmd_volume(sf, args):
    lat = _lattice(sf, args.target)
    return format_rational(volume(lat, parse_divisor(lat, args.D)))


def cmd_pair_volume(sf, args):
    return format_rational(pair_volume(_need_pair(sf)))


def cmd_discrepancies(sf, args):
    c = sf.contraction_obj
    if c is None:
        raise ValidationError("discrepancies need a contraction in the surface file")
    return _rmap(pair_discrepancies(_need_pair(sf)))


def cmd_classify(sf, args):
    verdict = classify(_need_pair(sf))
    if args.strict and verdict is Verdict.NOT_GLC:
        raise _DomainFailure("NotGlc", "pair is not generalized log canonical", verdict.value)
    return verdict.value


def cmd_descend(sf, args):
    m = sf.model
    r = descend_nef(m, parse_divisor(m, args.M))
    return {"intermediate_centers": list(r.intermediate_model.exceptional_names),
            "M_prime": _class_json(r.M_prime),
            "contractions_performed": list(r.contractions_performed),
            "blowup_count": r.blowup_count,
            "bound": format_rational(r.bound)}


def cmd_bounds(sf, args):
    m = sf.model
    if sf.contraction_obj is not None:
        raise ValidationError("bound checks run on a smooth model; drop the contraction section")
    pair = sf.pair_obj
    inst = bounds_mod.BoundInstance(
        model=m,
        B=dict(pair.boundary) if pair else {},
        M=pair.nef_part if pair else m.zero(),
        H=parse_divisor(m, args.H),
        F=parse_curve_divisor(m, args.F) if args.F else {},
        G_explicit=parse_curve_divisor(m, args.G) if args.G else None,
        m0=args.m0,
        delta=parse_rational(args.delta, "--delta"),
        e_param=parse_rational(args.e, "--e"),
        birational=args.birational,
        cartier_index=pair.cartier_index if pair else 1,
    )
    lhs, rhs, holds = bounds_mod.CHECKS[args.which](inst)
    return {"which": args.which, "lhs": format_rational(lhs), "rhs": format_rational(rhs), "holds": holds,
            "birational_asserted": args.birational}


class _DomainFailure(Exception):
    def __init__(self, code: str, message: str, result: Any = None):
        super().__init__(message)
        self.code = code
        self.result = result


COMMANDS = {
    "check": cmd_check, "intersect": cmd_intersect, "zariski": cmd_zariski, "volume": cmd_volume,
    "pair-volume": cmd_pair_volume, "discrepancies": cmd_discrepancies, "classify": cmd_classify,
    "descend": cmd_descend, "bounds": cmd_bounds,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bgeom", description="Exact birational geometry of surfaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        if name == "bounds":
            sp.add_argument("which", choices=sorted(bounds_mod.CHECKS))
        sp.add_argument("file", help="surface description (JSON), or - for stdin")
        return sp

    add("check", "validate a surface file and print its lattice data")
    sp = add("intersect", "intersection number of two classes")
    sp.add_argument("-D1", required=True)
    sp.add_argument("-D2", required=True)
    sp.add_argument("--target", action="store_true", help="evaluate on the contraction target")
    for name in ("zariski", "volume"):
        sp = add(name, f"{name} of a class")
        sp.add_argument("-D", required=True)
        sp.add_argument("--target", action="store_true")
    add("pair-volume", "volume of K + B + M for the file's pair")
    add("discrepancies", "generalized discrepancies of the contracted curves")
    sp = add("classify", "gklt / glc / not_glc verdict")
    sp.add_argument("--strict", action="store_true", help="exit 1 on a not_glc verdict")
    sp = add("descend", "descend a nef class along the tower")
    sp.add_argument("-M", required=True)
    sp = add("bounds", "evaluate a bound inequality")
    sp.add_argument("-H", required=True, help="class of the free part H")
    sp.add_argument("-F", default=None, help="fixed part, over tracked curve names")
    sp.add_argument("-G", default=None, help="explicit G over tracked curve names (default H + F)")
    sp.add_argument("--m0", type=int, default=1)
    sp.add_argument("--delta", default="1")
    sp.add_argument("--e", default="1/2")
    sp.add_argument("--birational", action="store_true", help="assert that |H| is birational")
    return p


def _normalize_argv(argv: Sequence[str]) -> list[str]:
    # let divisor expressions start with '-': "-D -E1" becomes "-D=-E1"
    out: list[str] = []
    value_flags = {"-D", "-D1", "-D2", "-M", "-H", "-F", "-G"}
    it = iter(argv)
    for a in it:
        if a in value_flags:
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def _max_rank() -> int:
    raw = os.environ.get("BGEOM_MAX_RANK")
    if raw is None:
        return DEFAULT_MAX_RANK
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"BGEOM_MAX_RANK must be an integer, got {raw!r}") from None


def run(argv: Sequence[str], stdin: bytes | None = None) -> tuple[int, dict]:
    """Execute one command; returns (exit code, report)."""
    report: dict[str, Any] = {"command": None, "input_hash": None, "result": None, "exact": True}
    try:
        args = build_parser().parse_args(_normalize_argv(argv))
        report["command"] = args.command
        if args.file == "-":
            data = stdin if stdin is not None else sys.stdin.buffer.read()
        else:
            try:
                with open(args.file, "rb") as fh:
                    data = fh.read()
            except OSError as exc:
                raise UsageError(f"cannot read {args.file}: {exc.strerror}") from None
        report["input_hash"] = "sha256:" + hashlib.sha256(data).hexdigest()
        sf = parse(data, validate=False)
        cap = _max_rank()
        rank = sf.base.build().rank + len(sf.blowups)
        if rank > cap:
            raise RankLimitExceeded(f"model rank {rank} exceeds BGEOM_MAX_RANK={cap}")
        sf.validate()
        report["result"] = COMMANDS[args.command](sf, args)
        return EXIT_OK, report
    except UsageError as exc:
        report["error"] = {"code": "UsageError", "message": str(exc)}
        return EXIT_USAGE, report
    except (ParseError, ValidationError) as exc:
        report["error"] = {"code": exc.code, "message": str(exc)}
        return EXIT_USAGE, report
    except _DomainFailure as exc:
        report["result"] = exc.result
        report["error"] = {"code": exc.code, "message": str(exc)}
        return EXIT_DOMAIN, report
    except BGeomError as exc:
        report["error"] = {"code": exc.code, "message": str(exc)}
        return EXIT_DOMAIN, report


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, separators=(",", ":"))


def main(argv: Sequence[str] | None = None) -> int:
    code, report = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(dumps(report) + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
