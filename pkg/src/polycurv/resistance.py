"""Effective resistance, resistance curvature, and the bounds around them.

The Laplacian pseudoinverse is never formed by eigendecomposition.  We factor
the positive definite matrix L + J/n once (Cholesky) and solve against it;
for b orthogonal to the all-ones vector the solution equals pinv(L) b.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import HypothesisError, PolyCurvError
from .skeleton import Graph, TwoSkeleton

STRICT = 1e-12  # values within this of zero count as "boundary", not positive


def _graph(g) -> Graph:
    return g.graph if isinstance(g, TwoSkeleton) else g


def laplacian_matrix(g) -> np.ndarray:
    g = _graph(g)
    L = np.zeros((g.n, g.n))
    for u, v in g.edges:
        L[u, v] = L[v, u] = -1.0
    L[np.diag_indices(g.n)] = [len(a) for a in g.adjacency]
    return L


@dataclass(frozen=True, eq=False)
class LaplacianSystem:
    n: int
    laplacian: np.ndarray
    factor: tuple

    def solve(self, b: np.ndarray) -> np.ndarray:
        return cho_solve(self.factor, b)


def laplacian_system(g) -> LaplacianSystem:
    g = _graph(g)
    if not g.connected:
        raise PolyCurvError("graph is disconnected; resistances are undefined across components",
                            operation="laplacian_system")
    L = laplacian_matrix(g)
    L.setflags(write=False)
    return LaplacianSystem(g.n, L, cho_factor(L + 1.0 / g.n))


def effective_resistance(sys: LaplacianSystem, u: int, v: int) -> float:
    for x in (u, v):
        if not isinstance(x, (int, np.integer)) or not 0 <= x < sys.n:
            raise PolyCurvError(f"invalid vertex {x!r}", witness=x, operation="effective_resistance")
    if u == v:
        return 0.0
    b = np.zeros(sys.n)
    b[u], b[v] = 1.0, -1.0
    x = sys.solve(b)
    return float(x[u] - x[v])


def all_pairs_resistance(sys: LaplacianSystem) -> np.ndarray:
    M = sys.solve(np.eye(sys.n))
    d = np.diag(M)
    R = d[:, None] + d[None, :] - M - M.T
    np.fill_diagonal(R, 0.0)
    return R


def resistance_curvature(sys: LaplacianSystem, g, v: int) -> float:
    g = _graph(g)
    return 1.0 - 0.5 * sum(effective_resistance(sys, v, u) for u in g.adjacency[v])


@dataclass(frozen=True, eq=False)
class ResistanceProfile:
    curvature: np.ndarray  # per vertex
    edge_resistance: np.ndarray  # per canonical edge
    min: float
    positive: bool
    boundary: tuple  # vertices with |kappa| <= STRICT

    def status(self, v: int) -> str:
        k = self.curvature[v]
        if abs(k) <= STRICT:
            return "boundary"
        return "positive" if k > 0 else "negative"


def resistance_profile(g, sys: LaplacianSystem | None = None) -> ResistanceProfile:
    g = _graph(g)
    sys = sys or laplacian_system(g)
    R = all_pairs_resistance(sys)
    edges = np.array(g.edges, dtype=int).reshape(-1, 2)
    r_e = R[edges[:, 0], edges[:, 1]] if len(edges) else np.zeros(0)
    kappa = np.ones(g.n)
    np.subtract.at(kappa, edges[:, 0], 0.5 * r_e)
    np.subtract.at(kappa, edges[:, 1], 0.5 * r_e)
    lo = float(kappa.min())
    boundary = tuple(int(v) for v in np.flatnonzero(np.abs(kappa) <= STRICT))
    return ResistanceProfile(kappa, r_e, lo, lo > STRICT, boundary)


def transitive_curvature(n: int) -> float:
    if n < 1:
        raise PolyCurvError(f"n must be positive, got {n}", operation="transitive_curvature")
    return 1.0 / n


def path_upper_bound(lengths: Sequence[int]) -> float:
    if not lengths:
        raise PolyCurvError("need at least one path", operation="path_upper_bound")
    if any(x < 1 for x in lengths):
        raise PolyCurvError(f"path lengths must be positive: {list(lengths)}", operation="path_upper_bound")
    return float(1 / sum(Fraction(1, x) for x in lengths))


def edge_disjoint_paths(g, u: int, v: int) -> list[list[int]]:
    """Greedy family: repeatedly take a BFS shortest u-v path and delete its edges."""
    g = _graph(g)
    adj = [set(a) for a in g.adjacency]
    paths = []
    while True:
        prev = {u: None}
        queue = deque([u])
        while queue and v not in prev:
            x = queue.popleft()
            for w in sorted(adj[x]):
                if w not in prev:
                    prev[w] = x
                    queue.append(w)
        if v not in prev:
            return paths
        path = [v]
        while path[-1] != u:
            path.append(prev[path[-1]])
        path.reverse()
        for a, b in zip(path, path[1:]):
            adj[a].discard(b)
            adj[b].discard(a)
        paths.append(path)


def _check_three(lengths) -> list[int]:
    ls = [int(x) for x in lengths]
    if len(ls) != 3:
        raise PolyCurvError(f"need exactly 3 face lengths, got {len(ls)}", operation="simple3_lower_bound")
    if min(ls) < 3:
        raise PolyCurvError(f"face lengths must be >= 3: {ls}", operation="simple3_lower_bound")
    return ls


def _simple3_sum(ls) -> Fraction:
    s = sum(Fraction(1, x - 1) for x in ls)
    return sum(Fraction(x - 1) / ((x - 1) * (s + 1) - 1) for x in ls)


def simple3_lower_bound(lengths) -> Fraction:
    """Lower bound on the curvature at a degree-3 vertex of a simple 3-polytope.

    Exact rational; the argument is the lengths of the three incident faces.
    """
    return 1 - _simple3_sum(_check_three(lengths)) / 2


def face_vector_is_positive(lengths) -> bool:
    return _simple3_sum(_check_three(lengths)) < 2


def submatrix_lower_bound(g, A: Sequence[int], u: int, v: int) -> float:
    """Lower bound on r_uv from the principal submatrix of L on the vertex subset A."""
    g = _graph(g)
    A = sorted(set(int(x) for x in A))
    if u not in A or v not in A:
        raise PolyCurvError(f"u={u} and v={v} must both lie in A", witness=(u, v),
                            operation="submatrix_lower_bound")
    if u == v:
        raise PolyCurvError("u and v must differ", witness=u, operation="submatrix_lower_bound")
    pos = {x: i for i, x in enumerate(A)}
    LA = laplacian_matrix(g)[np.ix_(A, A)]
    b = np.zeros(len(A))
    b[pos[u]], b[pos[v]] = 1.0, -1.0
    if _covers_a_component(g, set(A)):
        x = np.linalg.pinv(LA, hermitian=True) @ b
    else:
        x = cho_solve(cho_factor(LA), b)
    return float(b @ x)


def _covers_a_component(g: Graph, A: set) -> bool:
    seen = set()
    for s in A:
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for w in g.adjacency[x]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        if comp <= A:
            return True
    return False


def degree_lower_bound(du: int, dv: int) -> float:
    if du < 1 or dv < 1 or du == dv == 1:
        raise HypothesisError(f"degree bound needs degrees >= 1, not both 1; got ({du}, {dv})",
                              witness=(du, dv), operation="degree_lower_bound")
    return float(max(Fraction(du + dv - 2, du * dv - 1), Fraction(4, du + dv + 2)))


def negative_curvature_criterion(g, v: int) -> bool:
    g = _graph(g)
    g.check_vertex(v)
    dv = g.degree(v)
    return dv >= 2 and all(g.degree(u) <= dv - 2 for u in g.adjacency[v])


def resistance_diameter_bound(g, profile: ResistanceProfile | None = None,
                              sys: LaplacianSystem | None = None) -> int:
    """ceil(sqrt(max_degree * k^T R k / min k) * ln n), natural logarithm."""
    g = _graph(g)
    sys = sys or laplacian_system(g)
    profile = profile or resistance_profile(g, sys)
    if not profile.positive:
        v = int(np.argmin(profile.curvature))
        raise HypothesisError(f"curvature at vertex {v} is {profile.curvature[v]:.6g}, not positive",
                              witness=v, operation="resistance_diameter_bound")
    k = profile.curvature
    quad = float(k @ all_pairs_resistance(sys) @ k)
    return math.ceil(math.sqrt(g.max_degree * quad / profile.min) * math.log(g.n))
