"""Exact birational geometry of surfaces."""
from .divisors import Contraction, check_negativity, numerical_pullback, pushforward, strict_transform
from .lattice import (BaseSurface, BlowupCenter, Curve, DivisorClass, SurfaceModel, build_model, canonical_class,
                      hirzebruch, intersect, projective_plane, raw_base, ruled_elliptic)
from .pairs import GenPair, Verdict, classify, discrepancies, pair_volume, trace_LB, trace_MB
from .positivity import ZariskiDecomposition, is_big, is_nef_tracked, volume, zariski
from .descent import DescentResult, blowup_nef_criterion, contract_minus_one_curve, descend_nef

__all__ = [
    "Contraction",
    "check_negativity",
    "numerical_pullback",
    "pushforward",
    "strict_transform",
    "BaseSurface",
    "BlowupCenter",
    "Curve",
    "DivisorClass",
    "SurfaceModel",
    "build_model",
    "canonical_class",
    "hirzebruch",
    "intersect",
    "projective_plane",
    "raw_base",
    "ruled_elliptic",
    "GenPair",
    "Verdict",
    "classify",
    "discrepancies",
    "pair_volume",
    "trace_LB",
    "trace_MB",
    "ZariskiDecomposition",
    "is_big",
    "is_nef_tracked",
    "volume",
    "zariski",
    "DescentResult",
    "blowup_nef_criterion",
    "contract_minus_one_curve",
    "descend_nef",
]

__version__ = "0.1.0"
