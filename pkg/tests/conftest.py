import os
from pathlib import Path

import numpy as np
import pytest

from polycurv.skeleton import build_graph, planar_dual, skeleton_from_faces

DATA = Path(__file__).parent / "data"
CORPUS_ENV = "POLYCURV_CORPUS"

_acceptance_lines: list[str] = []


def acceptance_line(line: str) -> None:
    _acceptance_lines.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def corpus_dir():
    path = os.environ.get(CORPUS_ENV)
    return Path(path) if path else None


def icosahedron():
    up = [1 + i for i in range(5)]
    lo = [6 + i for i in range(5)]
    faces = []
    for i in range(5):
        j = (i + 1) % 5
        faces += [(0, up[i], up[j]), (11, lo[i], lo[j]), (up[i], up[j], lo[i]), (lo[i], lo[j], up[j])]
    return skeleton_from_faces(12, faces)


def dodecahedron():
    return planar_dual(icosahedron())[0]


def random_connected_graph(rng, n, extra_p=0.2):
    """Random spanning tree plus independent extra edges."""
    edges = [(int(rng.integers(0, v)), v) for v in range(1, n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < extra_p:
                edges.append((u, v))
    perm = rng.permutation(n)
    edges = {(min(perm[a], perm[b]), max(perm[a], perm[b])) for a, b in edges}
    return build_graph(n, sorted((int(a), int(b)) for a, b in edges))


def pinv_resistance(g):
    """Oracle: all-pairs resistance from numpy's SVD pseudoinverse."""
    L = np.zeros((g.n, g.n))
    for u, v in g.edges:
        L[u, v] = L[v, u] = -1
    L[np.diag_indices(g.n)] = g.degrees
    P = np.linalg.pinv(L)
    d = np.diag(P)
    return d[:, None] + d[None, :] - 2 * P


def brute_parallel(sk, e):
    """Oracle: compare e with every other edge using the two clauses literally."""
    a = set(sk.graph.edges[e])
    fa = set(sk.edge_faces[e])
    out = set()
    for e2, pair in enumerate(sk.graph.edges):
        if e2 == e:
            continue
        shares_vertex = bool(a & set(pair))
        shares_face = bool(fa & set(sk.edge_faces[e2]))
        if (shares_vertex and not shares_face) or (shares_face and not shares_vertex):
            out.add(e2)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
