"""Generators for the polytope families used throughout the package.

Each generator returns a :class:`TwoSkeleton`.  :func:`generate` also returns
a side table of vertex roles ("apex", "cap", "level 3", ...) for readable
assertions; the skeleton itself stays role-agnostic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import HypothesisError, PolyCurvError
from .skeleton import (
    TwoSkeleton,
    attach_faces,
    build_graph,
    cartesian_product,
    cycle_graph,
    face_vector,
    path_graph,
    skeleton_from_faces,
)


def _need(cond: bool, msg: str, op: str):
    if not cond:
        raise PolyCurvError(msg, operation=op)


def simplex_skeleton(d: int) -> TwoSkeleton:
    _need(d >= 2, f"simplex needs d >= 2, got {d}", "simplex_skeleton")
    n = d + 1
    return attach_faces(build_graph(n, combinations(range(n), 2)), combinations(range(n), 3))


def hypercube_skeleton(d: int) -> TwoSkeleton:
    """Vertices are bitmasks in [0, 2^d); faces are the 2-dimensional subcubes."""
    _need(d >= 2, f"hypercube needs d >= 2, got {d}", "hypercube_skeleton")
    n = 1 << d
    edges = [(v, v | 1 << i) for v in range(n) for i in range(d) if not v >> i & 1]
    faces = []
    for i, j in combinations(range(d), 2):
        bi, bj = 1 << i, 1 << j
        for b in range(n):
            if not b & (bi | bj):
                faces.append((b, b | bi, b | bi | bj, b | bj))
    return attach_faces(build_graph(n, edges), faces)


def polygon_skeleton(n: int) -> TwoSkeleton:
    _need(n >= 3, f"polygon needs n >= 3, got {n}", "polygon_skeleton")
    return attach_faces(cycle_graph(n), [tuple(range(n))])


def prism_skeleton(n: int) -> TwoSkeleton:
    """Top rim 0..n-1, bottom rim n..2n-1, vertical edges i -- n+i."""
    _need(n >= 3, f"prism needs n >= 3, got {n}", "prism_skeleton")
    faces = [tuple(range(n)), tuple(range(n, 2 * n))]
    faces += [(i, (i + 1) % n, n + (i + 1) % n, n + i) for i in range(n)]
    return skeleton_from_faces(2 * n, faces)


def pyramid_skeleton(n: int) -> TwoSkeleton:
    """Base 0..n-1, apex n."""
    _need(n >= 3, f"pyramid needs n >= 3, got {n}", "pyramid_skeleton")
    faces = [tuple(range(n))] + [(i, (i + 1) % n, n) for i in range(n)]
    return skeleton_from_faces(n + 1, faces)


def square_cupola_skeleton() -> TwoSkeleton:
    """Top square 0..3, octagon 4..11; top vertex i sits over octagon vertices 2i, 2i+1."""
    o = lambda j: 4 + j % 8  # noqa: E731
    faces = [(0, 1, 2, 3), tuple(range(4, 12))]
    faces += [(i, o(2 * i), o(2 * i + 1)) for i in range(4)]
    faces += [(i, (i + 1) % 4, o(2 * i + 2), o(2 * i + 1)) for i in range(4)]
    return skeleton_from_faces(12, faces)


def tube_vertex(i: int, j: int) -> int:
    """Index of the vertex at cycle position ``i`` on level ``j`` (caps are 0 and 1)."""
    return 2 + 3 * j + i


def tube_skeleton(k: int) -> TwoSkeleton:
    """C3 x P_k with cap x=0 over level 0 and cap y=1 under level k-1."""
    _need(k >= 1, f"tube needs k >= 1, got {k}", "tube_skeleton")
    prod = cartesian_product(cycle_graph(3), path_graph(k) if k > 1 else build_graph(1, []))
    relabel = [tube_vertex(p // k, p % k) for p in range(3 * k)]
    edges = [(relabel[a], relabel[b]) for a, b in prod.edges]
    edges += [(0, tube_vertex(i, 0)) for i in range(3)]
    edges += [(1, tube_vertex(i, k - 1)) for i in range(3)]
    faces = [(0, tube_vertex(i, 0), tube_vertex((i + 1) % 3, 0)) for i in range(3)]
    faces += [(1, tube_vertex(i, k - 1), tube_vertex((i + 1) % 3, k - 1)) for i in range(3)]
    for j in range(k - 1):
        for i in range(3):
            i2 = (i + 1) % 3
            faces.append((tube_vertex(i, j), tube_vertex(i2, j), tube_vertex(i2, j + 1), tube_vertex(i, j + 1)))
    return attach_faces(build_graph(3 * k + 2, edges), faces)


def delta_expansion(sk: TwoSkeleton, v: int) -> TwoSkeleton:
    """Cut the degree-3 vertex ``v`` off by a triangle.

    The new vertices keep ``v``'s index for the one attached to v's smallest
    neighbour, then take n and n+1 for the other two (sorted neighbour order).
    """
    sk.graph.check_vertex(v)
    if not sk.polyhedral:
        raise PolyCurvError("delta expansion needs a polyhedral skeleton", operation="delta_expansion")
    nbrs = sk.graph.adjacency[v]
    if len(nbrs) != 3:
        raise HypothesisError(f"vertex {v} has degree {len(nbrs)}, expected 3", witness=v,
                              operation="delta_expansion")
    new = dict(zip(nbrs, (v, sk.n, sk.n + 1)))
    edges = [e for e in sk.graph.edges if v not in e]
    edges += [(new[w], w) for w in nbrs]
    edges += [(v, sk.n), (v, sk.n + 1), (sk.n, sk.n + 1)]
    faces = []
    for c in sk.faces:
        if v not in c:
            faces.append(c)
            continue
        i = c.index(v)
        before, after = c[i - 1], c[(i + 1) % len(c)]
        faces.append(c[:i] + (new[before], new[after]) + c[i + 1:])
    faces.append((v, sk.n, sk.n + 1))
    return attach_faces(build_graph(sk.n + 2, edges), faces)


@dataclass(frozen=True)
class HypothesisReport:
    holds: bool
    conditions: dict  # condition label -> bool
    witnesses: dict = field(default_factory=dict)  # condition label -> offending vertex


def delta_hypotheses(sk: TwoSkeleton, v: int) -> HypothesisReport:
    """Check the five sufficient conditions for the expansion at ``v`` to be resistance positive."""
    sk.graph.check_vertex(v)
    if not sk.polyhedral or any(d != 3 for d in sk.graph.degrees):
        raise HypothesisError("delta hypotheses need a simple (3-regular) polyhedral skeleton",
                              operation="delta_hypotheses")
    vec = [face_vector(sk, w) for w in range(sk.n)]
    conds: dict[str, bool] = {}
    wit: dict[str, int] = {}

    def check(label, bad):
        conds[label] = not bad
        if bad:
            wit[label] = bad[0]

    check("i", [w for w in range(sk.n) if not set(vec[w]) <= {3, 4, 5}])
    check("ii", [w for w in range(sk.n) if vec[w] == (5, 5, 5)])
    check("iii", [v] if vec[v].count(5) > 1 else [])
    at_v = set(sk.vertex_faces[v])
    far = []
    for u in sk.graph.adjacency[v]:
        (third,) = [fi for fi in sk.vertex_faces[u] if fi not in at_v]
        if len(sk.faces[third]) > 4:
            far.append(u)
    check("iv", far)
    ring = sorted({w for fi in at_v for w in sk.faces[fi]})
    check("v", [w for w in ring if vec[w] == (5, 5, 4)])
    return HypothesisReport(all(conds.values()), conds, wit)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int | None = None  # dimension, rim size or tube length depending on family
    base: TwoSkeleton | None = None
    vertex: int | None = None


FAMILIES = ("simplex", "hypercube", "polygon", "prism", "pyramid", "square_cupola", "tube",
            "delta_expansion")


def generate(spec: FamilySpec) -> tuple[TwoSkeleton, dict[int, str]]:
    fam = spec.family
    if fam == "simplex":
        return simplex_skeleton(spec.n), {}
    if fam == "hypercube":
        return hypercube_skeleton(spec.n), {}
    if fam == "polygon":
        return polygon_skeleton(spec.n), {}
    if fam == "prism":
        sk = prism_skeleton(spec.n)
        return sk, {v: "top" if v < spec.n else "bottom" for v in range(sk.n)}
    if fam == "pyramid":
        sk = pyramid_skeleton(spec.n)
        return sk, {v: "apex" if v == spec.n else "base" for v in range(sk.n)}
    if fam == "square_cupola":
        sk = square_cupola_skeleton()
        return sk, {v: "square" if v < 4 else "octagon" for v in range(sk.n)}
    if fam == "tube":
        sk = tube_skeleton(spec.n)
        roles = {0: "cap", 1: "cap"}
        roles.update({v: f"level {(v - 2) // 3}" for v in range(2, sk.n)})
        return sk, roles
    if fam == "delta_expansion":
        if spec.base is None or spec.vertex is None:
            raise PolyCurvError("delta_expansion needs a base skeleton and a vertex", operation="generate")
        sk = delta_expansion(spec.base, spec.vertex)
        v = spec.vertex
        return sk, {w: "triangle" if w in (v, spec.base.n, spec.base.n + 1) else "base" for w in range(sk.n)}
    raise PolyCurvError(f"unknown family {fam!r}", operation="generate")
