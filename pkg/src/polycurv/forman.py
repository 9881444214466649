"""Forman-Ricci curvature of edges in a 2-skeleton, plus the bounds built on it.

All arithmetic here is exact (``int`` / ``Fraction``); positivity must never
hinge on rounding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

import mpmath

from .errors import HypothesisError, PolyCurvError
from .skeleton import FlagCounts, TwoSkeleton, find_isomorphism


def parallel_neighbors(sk: TwoSkeleton, e: int) -> set[int]:
    """Edges sharing an endpoint but no face with ``e``, or a face but no endpoint."""
    sk.graph.check_edge(e)
    a, b = sk.graph.edges[e]
    faces_e = set(sk.edge_faces[e])
    out = set()
    for x in (a, b):
        for e2 in sk.graph.incident[x]:
            if e2 != e and faces_e.isdisjoint(sk.edge_faces[e2]):
                out.add(e2)
    for fi in faces_e:
        for e2 in sk.face_edges[fi]:
            u, v = sk.graph.edges[e2]
            if u not in (a, b) and v not in (a, b):
                out.add(e2)
    return out


def forman_curvature(sk: TwoSkeleton, e: int) -> int:
    return len(sk.edge_faces[e]) + 2 - len(parallel_neighbors(sk, e))


def polyhedral_edge_curvature(deg_u: int, deg_v: int, len_a: int, len_b: int) -> int:
    """Closed form for an edge of a polyhedral skeleton with endpoint degrees and its two face lengths."""
    return 16 - deg_u - deg_v - len_a - len_b


@dataclass(frozen=True)
class FormanProfile:
    per_edge: tuple
    min: int
    average: Fraction
    positive: bool


def forman_profile(sk: TwoSkeleton) -> FormanProfile:
    vals = tuple(forman_curvature(sk, e) for e in range(sk.m))
    if not vals:
        raise PolyCurvError("skeleton has no edges", operation="forman_profile")
    lo = min(vals)
    return FormanProfile(vals, lo, Fraction(sum(vals), len(vals)), lo >= 1)


def average_via_flags(fc: FlagCounts) -> Fraction:
    if fc.f1 <= 0:
        raise PolyCurvError("f1 must be positive", operation="average_via_flags")
    sq_d = sum(k * k * c for k, c in fc.d_hist.items())
    sq_p = sum(k * k * c for k, c in fc.p_hist.items())
    return Fraction(6 * fc.f02 + 4 * fc.f1 - sq_d - sq_p, fc.f1)


def simplicial_average_bound(f0: int, f1: int, f2: int | None = None, *,
                             simplicial_5: bool = False) -> Fraction:
    """Upper bound on the average edge curvature of a simplicial polytope.

    With ``simplicial_5`` the 2-face count is replaced by 4*f1 - 10*f0 + 20.
    """
    if f0 <= 0 or f1 <= 0:
        raise PolyCurvError(f"f0 and f1 must be positive, got {f0}, {f1}",
                            operation="simplicial_average_bound")
    if simplicial_5:
        f2 = 4 * f1 - 10 * f0 + 20
    elif f2 is None:
        raise PolyCurvError("f2 is required unless simplicial_5 is set",
                            operation="simplicial_average_bound")
    return (9 * f2 + 4 * f1 - Fraction(4 * f1 * f1, f0)) / f1


def forman_diameter_bound(sk: TwoSkeleton, c) -> int:
    c = Fraction(c)
    if c <= 0:
        raise PolyCurvError(f"c must be positive, got {c}", operation="forman_diameter_bound")
    for e in range(sk.m):
        val = forman_curvature(sk, e)
        if val < c:
            raise HypothesisError(f"edge {sk.graph.edges[e]} has curvature {val} < {c}",
                                  witness=sk.graph.edges[e], operation="forman_diameter_bound")
    up = max((len(x) for x in sk.edge_faces), default=0)
    return math.floor(Fraction(2) / c * (1 + up))


def moore_bound(max_degree: int, diameter: int) -> int:
    if max_degree < 3:
        raise HypothesisError(f"Moore bound needs max degree >= 3, got {max_degree}",
                              witness=max_degree, operation="moore_bound")
    if diameter < 1:
        raise PolyCurvError(f"diameter must be >= 1, got {diameter}", operation="moore_bound")
    num = max_degree * (max_degree - 1) ** diameter - 2
    q, r = divmod(num, max_degree - 2)
    assert r == 0
    return q


@dataclass(frozen=True)
class VertexCountBound:
    rho: Fraction
    log10: float
    exact_floor: int | None  # floor of the bound, when it is rational
    formula: str  # "statement" or "proof"


def vertex_count_bound(rho, formula: Literal["statement", "proof"] = "statement") -> VertexCountBound:
    """log10 of the vertex-count bound for average degree ``rho``.

    ``formula="statement"`` uses base^(4+6 rho) over 2^(3 rho) rho - 1;
    ``"proof"`` uses the sharper base^(2+6 rho) over 2^(3 rho+1) rho - 2.
    """
    rho = Fraction(rho)
    if rho < 3:
        raise HypothesisError(f"rho must be >= 3, got {rho}", witness=rho, operation="vertex_count_bound")
    if formula == "statement":
        expo, den_scale, den_sub = 4 + 6 * rho, 1, 1
    elif formula == "proof":
        expo, den_scale, den_sub = 2 + 6 * rho, 2, 2
    else:
        raise PolyCurvError(f"unknown formula {formula!r}", operation="vertex_count_bound")
    with mpmath.workdps(60):
        r = mpmath.mpf(rho.numerator) / rho.denominator
        big = mpmath.power(2, 3 * r + 1) * r
        num = big * mpmath.power(big - 1, mpmath.mpf(expo.numerator) / expo.denominator) - 2
        den = den_scale * mpmath.power(2, 3 * r) * r - den_sub
        log10 = float(mpmath.log10(num / den))
    exact = None
    if (3 * rho).denominator == 1 and rho.denominator == 1 and expo.denominator == 1:
        big_i = 2 ** int(3 * rho + 1) * int(rho)
        num_i = big_i * (big_i - 1) ** int(expo) - 2
        den_i = den_scale * 2 ** int(3 * rho) * int(rho) - den_sub
        exact = num_i // den_i
    return VertexCountBound(rho, log10, exact, formula)


@dataclass(frozen=True)
class Violation:
    kind: str  # "degree" or "face"
    witness: int  # vertex or face index
    value: int

    def __str__(self):
        return f"{self.kind}[{self.witness}]={self.value}"


def screen_low_dimension(sk: TwoSkeleton, dim: int) -> list[Violation]:
    """Obstructions to Forman positivity; an empty list means the screen passes."""
    degs = sk.graph.degrees
    if dim == 4:
        return [Violation("degree", v, d) for v, d in enumerate(degs) if d > 12]
    if dim != 3:
        raise PolyCurvError(f"dim must be 3 or 4, got {dim}", operation="screen_low_dimension")
    if not sk.polyhedral:
        raise PolyCurvError("dimension-3 screen needs a polyhedral skeleton",
                            operation="screen_low_dimension")
    out = [Violation("degree", v, d) for v, d in enumerate(degs) if d >= 6]
    out += [Violation("face", i, len(c)) for i, c in enumerate(sk.faces) if len(c) >= 6]
    if out and _is_hexagonal_pyramid(sk):
        return []
    return out


def _is_hexagonal_pyramid(sk: TwoSkeleton) -> bool:
    if (sk.n, sk.m, sk.f) != (7, 12, 7):
        return False
    from .families import pyramid_skeleton

    return find_isomorphism(sk, pyramid_skeleton(6)) is not None
