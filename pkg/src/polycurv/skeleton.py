"""Graphs, 2-skeletons and their combinatorics.

A :class:`TwoSkeleton` is the universal input: a simple graph on dense vertex
indices ``0..n-1`` plus a list of 2-faces, each a cyclic vertex sequence.
Everything here is exact and immutable.
"""
from __future__ import annotations

import json
import warnings
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import SkeletonError

Face = tuple  # canonical cyclic vertex tuple, see canonical_face


@dataclass(frozen=True)
class Graph:
    n: int
    adjacency: tuple
    edges: tuple
    edge_index: Mapping = field(repr=False, compare=False)
    connected: bool = field(compare=False)
    duplicates: int = field(default=0, compare=False)
    incident: tuple = field(default=(), repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_index

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self.edge_index[(min(u, v), max(u, v))]
        except KeyError:
            raise SkeletonError(f"({u}, {v}) is not an edge", witness=(u, v)) from None

    def check_vertex(self, v: int) -> None:
        if not isinstance(v, int) or not 0 <= v < self.n:
            raise SkeletonError(f"invalid vertex {v!r} for n={self.n}", witness=v)

    def check_edge(self, e: int) -> None:
        if not isinstance(e, int) or not 0 <= e < self.m:
            raise SkeletonError(f"invalid edge index {e!r} for m={self.m}", witness=e)


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """Canonical simple graph; duplicate pairs are collapsed with a warning."""
    if n < 1:
        raise SkeletonError(f"vertex count must be positive, got {n}", operation="build_graph")
    pairs = set()
    seen = 0
    for e in edges:
        u, v = (int(x) for x in e)
        if not (0 <= u < n and 0 <= v < n):
            raise SkeletonError(f"edge ({u}, {v}) out of range for n={n}", witness=(u, v),
                                operation="build_graph")
        if u == v:
            raise SkeletonError(f"self-loop at vertex {u}", witness=(u, v), operation="build_graph")
        pairs.add((min(u, v), max(u, v)))
        seen += 1
    duplicates = seen - len(pairs)
    if duplicates:
        warnings.warn(f"collapsed {duplicates} duplicate edge(s)", stacklevel=2)
    edge_list = tuple(sorted(pairs))
    adj: list[list[int]] = [[] for _ in range(n)]
    inc: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edge_list):
        adj[u].append(v)
        adj[v].append(u)
        inc[u].append(i)
        inc[v].append(i)
    return Graph(
        n=n,
        adjacency=tuple(tuple(sorted(a)) for a in adj),
        edges=edge_list,
        edge_index={e: i for i, e in enumerate(edge_list)},
        connected=_is_connected(n, adj),
        duplicates=duplicates,
        incident=tuple(tuple(x) for x in inc),
    )


def _is_connected(n: int, adj) -> bool:
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if not seen[w]:
                seen[w] = True
                count += 1
                queue.append(w)
    return count == n


def canonical_face(cycle: Sequence[int]) -> Face:
    """Rotate to the minimum vertex, then orient so the second entry is the smaller neighbour."""
    c = [int(x) for x in cycle]
    i = c.index(min(c))
    c = c[i:] + c[:i]
    if len(c) > 2 and c[-1] < c[1]:
        c = [c[0]] + c[:0:-1]
    return tuple(c)


@dataclass(frozen=True)
class TwoSkeleton:
    graph: Graph
    faces: tuple
    edge_faces: tuple
    vertex_faces: tuple
    face_edges: tuple = field(repr=False)
    polyhedral: bool = False

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def f(self) -> int:
        return len(self.faces)

    @property
    def edges(self) -> tuple:
        return self.graph.edges


def attach_faces(graph: Graph, faces: Iterable[Sequence[int]]) -> TwoSkeleton:
    canon: list[Face] = []
    seen: set[Face] = set()
    face_edges = []
    for raw in faces:
        cyc = [int(x) for x in raw]
        if len(cyc) < 3:
            raise SkeletonError(f"face {cyc} has fewer than 3 vertices", witness=tuple(cyc),
                                operation="attach_faces")
        if len(set(cyc)) != len(cyc):
            raise SkeletonError(f"face {cyc} repeats a vertex", witness=tuple(cyc),
                                operation="attach_faces")
        for v in cyc:
            graph.check_vertex(v)
        c = canonical_face(cyc)
        if c in seen:
            raise SkeletonError(f"duplicate face {c}", witness=c, operation="attach_faces")
        ids = []
        for a, b in zip(c, c[1:] + c[:1]):
            key = (min(a, b), max(a, b))
            if key not in graph.edge_index:
                raise SkeletonError(f"face {c} uses non-edge ({a}, {b})", witness=(a, b),
                                    operation="attach_faces")
            ids.append(graph.edge_index[key])
        seen.add(c)
        canon.append(c)
        face_edges.append(tuple(ids))
    edge_faces: list[list[int]] = [[] for _ in range(graph.m)]
    vertex_faces: list[list[int]] = [[] for _ in range(graph.n)]
    for fi, (c, ids) in enumerate(zip(canon, face_edges)):
        for e in ids:
            edge_faces[e].append(fi)
        for v in c:
            vertex_faces[v].append(fi)
    polyhedral = (
        graph.connected
        and all(len(x) == 2 for x in edge_faces)
        and graph.n - graph.m + len(canon) == 2
    )
    return TwoSkeleton(
        graph=graph,
        faces=tuple(canon),
        edge_faces=tuple(tuple(x) for x in edge_faces),
        vertex_faces=tuple(tuple(x) for x in vertex_faces),
        face_edges=tuple(face_edges),
        polyhedral=polyhedral,
    )


def make_skeleton(n: int, edges: Iterable[Sequence[int]], faces: Iterable[Sequence[int]]) -> TwoSkeleton:
    return attach_faces(build_graph(n, edges), faces)


def skeleton_from_faces(n: int, faces: Sequence[Sequence[int]]) -> TwoSkeleton:
    """Skeleton whose edge set is the union of the face boundaries."""
    edges = {(min(a, b), max(a, b)) for c in faces for a, b in zip(c, list(c[1:]) + [c[0]])}
    return make_skeleton(n, sorted(edges), faces)


@dataclass(frozen=True)
class RotationSystem:
    """Cyclic neighbour order at each vertex of a planar embedding."""

    n: int
    order: tuple

    @classmethod
    def from_lists(cls, order: Sequence[Sequence[int]]) -> "RotationSystem":
        return cls(len(order), tuple(tuple(int(x) for x in r) for r in order))


def faces_from_rotation(rot: RotationSystem) -> TwoSkeleton:
    """Trace faces: the successor of dart (u, v) is (v, w), w following u in v's order."""
    n = rot.n
    pos = []
    for v, r in enumerate(rot.order):
        if len(set(r)) != len(r):
            raise SkeletonError(f"vertex {v} lists a neighbour twice", witness=v,
                                operation="faces_from_rotation")
        for u in r:
            if not 0 <= u < n or u == v:
                raise SkeletonError(f"vertex {v} lists invalid neighbour {u}", witness=v,
                                    operation="faces_from_rotation")
        pos.append({u: i for i, u in enumerate(r)})
    for v, r in enumerate(rot.order):
        for u in r:
            if v not in pos[u]:
                raise SkeletonError(f"rotation inconsistent: {v} lists {u} but not conversely",
                                    witness=(v, u), operation="faces_from_rotation")
    graph = build_graph(n, ((v, u) for v, r in enumerate(rot.order) for u in r if v < u))
    used: set[tuple[int, int]] = set()
    faces = []
    for u0, r in enumerate(rot.order):
        for v0 in r:
            if (u0, v0) in used:
                continue
            face = []
            u, v = u0, v0
            while (u, v) not in used:
                used.add((u, v))
                face.append(u)
                rv = rot.order[v]
                u, v = v, rv[(pos[v][u] + 1) % len(rv)]
            faces.append(face)
    if not graph.connected or n - graph.m + len(faces) != 2:
        raise SkeletonError(
            f"Euler test failed: n - m + f = {n} - {graph.m} + {len(faces)} != 2 "
            "(non-planar or corrupted embedding)",
            operation="faces_from_rotation",
        )
    try:
        return attach_faces(graph, faces)
    except SkeletonError as exc:
        raise SkeletonError(f"traced faces invalid: {exc}", witness=exc.witness,
                            operation="faces_from_rotation") from None


def rotation_system(sk: TwoSkeleton) -> RotationSystem:
    """Recover a rotation system from a polyhedral skeleton by orienting its faces coherently."""
    if not sk.polyhedral:
        raise SkeletonError("rotation system needs a polyhedral skeleton", operation="rotation_system")
    oriented: list[tuple[int, ...] | None] = [None] * sk.f
    oriented[0] = sk.faces[0]
    queue = deque([0])
    while queue:
        fi = queue.popleft()
        cyc = oriented[fi]
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            e = sk.graph.edge_id(a, b)
            (g,) = [x for x in sk.edge_faces[e] if x != fi]
            darts = set(zip(sk.faces[g], sk.faces[g][1:] + sk.faces[g][:1]))
            want = sk.faces[g] if (b, a) in darts else tuple(reversed(sk.faces[g]))
            if oriented[g] is None:
                oriented[g] = want
                queue.append(g)
            elif oriented[g] != want:
                raise SkeletonError("faces cannot be oriented coherently", operation="rotation_system")
    succ: list[dict[int, int]] = [{} for _ in range(sk.n)]
    for cyc in oriented:
        k = len(cyc)
        for i in range(k):
            succ[cyc[i]][cyc[i - 1]] = cyc[(i + 1) % k]
    order = []
    for v in range(sk.n):
        nbrs = sk.graph.adjacency[v]
        seq = [nbrs[0]]
        while len(seq) < len(nbrs):
            seq.append(succ[v][seq[-1]])
        if len(set(seq)) != len(nbrs) or succ[v][seq[-1]] != seq[0]:
            raise SkeletonError(f"faces around vertex {v} do not form a disc", witness=v,
                                operation="rotation_system")
        order.append(tuple(seq))
    return RotationSystem(sk.n, tuple(order))


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """Vertex (a, b) is encoded row-major as a * h.n + b."""
    edges = [(a * h.n + b, a * h.n + c) for a in range(g.n) for b, c in h.edges]
    edges += [(a * h.n + b, c * h.n + b) for a, c in g.edges for b in range(h.n)]
    return build_graph(g.n * h.n, edges)


def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise SkeletonError(f"cycle needs n >= 3, got {n}", operation="cycle_graph")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return build_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


@dataclass(frozen=True)
class FlagCounts:
    f0: int
    f1: int
    f2: int
    f02: int
    f12: int
    d_hist: Mapping[int, int]
    p_hist: Mapping[int, int]


def flag_counts(sk: TwoSkeleton) -> FlagCounts:
    return FlagCounts(
        f0=sk.n,
        f1=sk.m,
        f2=sk.f,
        f02=sum(len(c) for c in sk.faces),
        f12=sum(len(x) for x in sk.edge_faces),
        d_hist=dict(sorted(Counter(sk.graph.degrees).items())),
        p_hist=dict(sorted(Counter(len(c) for c in sk.faces).items())),
    )


def planar_dual(sk: TwoSkeleton) -> tuple[TwoSkeleton, tuple[int, ...]]:
    """Dual skeleton and the edge correspondence ``sigma`` (primal edge i -> dual edge sigma[i])."""
    if not sk.polyhedral:
        raise SkeletonError("planar dual needs a polyhedral skeleton", operation="planar_dual")
    pairs = [tuple(sorted(fs)) for fs in sk.edge_faces]
    if len(set(pairs)) != len(pairs):
        raise SkeletonError("two faces share more than one edge; dual is not simple",
                            operation="planar_dual")
    graph = build_graph(sk.f, pairs)
    edges_at = [[] for _ in range(sk.f)]  # per face: vertex -> its two edges on the face
    for fi, ids in enumerate(sk.face_edges):
        table: dict[int, list[int]] = {}
        for e in ids:
            for v in sk.graph.edges[e]:
                table.setdefault(v, []).append(e)
        edges_at[fi] = table
    dual_faces = []
    for v in range(sk.n):
        start = sk.graph.incident[v][0]
        e, fi = start, sk.edge_faces[start][0]
        cycle = []
        while True:
            cycle.append(fi)
            a, b = edges_at[fi][v]
            e = b if a == e else a
            f0, f1 = sk.edge_faces[e]
            fi = f1 if f0 == fi else f0
            if e == start:
                break
        if len(cycle) != sk.graph.degree(v):
            raise SkeletonError(f"faces around vertex {v} do not form a single cycle", witness=v,
                                operation="planar_dual")
        dual_faces.append(cycle)
    dual = attach_faces(graph, dual_faces)
    sigma = tuple(graph.edge_index[p] for p in pairs)
    return dual, sigma


def face_vector(sk: TwoSkeleton, v: int) -> tuple[int, ...]:
    sk.graph.check_vertex(v)
    return tuple(sorted((len(sk.faces[fi]) for fi in sk.vertex_faces[v]), reverse=True))


def bfs_distances(g: Graph, source: int) -> list[int]:
    dist = [-1] * g.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.adjacency[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def graph_diameter(g: Graph) -> int:
    if not g.connected:
        raise SkeletonError("diameter of a disconnected graph", operation="graph_diameter")
    return max(max(bfs_distances(g, s)) for s in range(g.n))


# -- isomorphism (brute force; intended for small skeletons) -----------------

def _vertex_invariants(x) -> list[tuple]:
    g = x.graph if isinstance(x, TwoSkeleton) else x
    inv = []
    for v in range(g.n):
        key = (len(g.adjacency[v]), tuple(sorted(len(g.adjacency[w]) for w in g.adjacency[v])))
        if isinstance(x, TwoSkeleton):
            key += (face_vector(x, v),)
        inv.append(key)
    return inv


def _graph_isomorphisms(a: Graph, b: Graph, inv_a, inv_b) -> Iterator[list[int]]:
    if a.n != b.n or a.m != b.m or sorted(inv_a) != sorted(inv_b):
        return
    # BFS order from a vertex so each new vertex has an already-mapped neighbour when possible
    order: list[int] = []
    seen = [False] * a.n
    for root in range(a.n):
        if seen[root]:
            continue
        seen[root] = True
        queue = deque([root])
        while queue:
            u = queue.popleft()
            order.append(u)
            for w in a.adjacency[u]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    b_adj = [set(x) for x in b.adjacency]
    mapping = [-1] * a.n
    used = [False] * b.n

    def extend(i):
        if i == a.n:
            yield list(mapping)
            return
        u = order[i]
        mapped_nbrs = [mapping[w] for w in a.adjacency[u] if mapping[w] >= 0]
        cands = b_adj[mapped_nbrs[0]] if mapped_nbrs else range(b.n)
        for c in cands:
            if used[c] or inv_b[c] != inv_a[u]:
                continue
            if not all(y in b_adj[c] for y in mapped_nbrs):
                continue
            # non-edges must stay non-edges
            if sum(1 for w in order[:i] if mapping[w] in b_adj[c]) != len(mapped_nbrs):
                continue
            mapping[u] = c
            used[c] = True
            yield from extend(i + 1)
            mapping[u] = -1
            used[c] = False

    yield from extend(0)


def find_isomorphism(a, b) -> list[int] | None:
    """Vertex map a -> b preserving edges (and faces, for skeletons), or None."""
    ga = a.graph if isinstance(a, TwoSkeleton) else a
    gb = b.graph if isinstance(b, TwoSkeleton) else b
    both = isinstance(a, TwoSkeleton) and isinstance(b, TwoSkeleton)
    if both and a.f != b.f:
        return None
    inv_a, inv_b = _vertex_invariants(a if both else ga), _vertex_invariants(b if both else gb)
    target = {frozenset(c) for c in b.faces} if both else None
    for mp in _graph_isomorphisms(ga, gb, inv_a, inv_b):
        if not both or all(frozenset(mp[v] for v in c) in target for c in a.faces):
            return mp
    return None


def is_isomorphic(a, b) -> bool:
    return find_isomorphism(a, b) is not None


# -- JSON skeleton documents ---------------------------------------------------

def to_document(x) -> dict:
    g = x.graph if isinstance(x, TwoSkeleton) else x
    doc = {"n": g.n, "edges": [list(e) for e in g.edges]}
    if isinstance(x, TwoSkeleton):
        doc["faces"] = [list(c) for c in x.faces]
    return doc


def from_document(doc: Mapping):
    """Graph when the document has no ``faces`` key, TwoSkeleton otherwise."""
    try:
        n = int(doc["n"])
        edges = [tuple(e) for e in doc["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise SkeletonError(f"malformed skeleton document: {exc}", operation="load_skeleton") from None
    g = build_graph(n, edges)
    if "faces" not in doc or doc["faces"] is None:
        return g
    return attach_faces(g, doc["faces"])


def dumps(x, **kw) -> str:
    return json.dumps(to_document(x), **kw)


def loads(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SkeletonError(f"invalid JSON: {exc}", operation="load_skeleton") from None
    return from_document(doc)
