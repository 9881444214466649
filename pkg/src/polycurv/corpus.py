"""planar_code ingestion, corpus scanning, and report/DOT output."""
from __future__ import annotations

import csv
import gzip
import io
import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from itertools import islice
from multiprocessing import Pool
from typing import BinaryIO, Iterable, Iterator, Sequence

from .errors import PlanarCodeError, PolyCurvError
from .forman import forman_profile, screen_low_dimension
from .resistance import resistance_profile
from .skeleton import RotationSystem, TwoSkeleton, faces_from_rotation, find_isomorphism, graph_diameter

HEADER = b">>planar_code<<"
PREDICATES = ("forman-positive", "resistance-positive", "both")
CSV_COLUMNS = ("index", "n", "m", "f", "forman_min", "forman_positive", "resist_min",
               "resist_positive", "diameter", "violations")
_CHUNK = 1 << 20


# -- planar_code --------------------------------------------------------------

def open_binary(path) -> BinaryIO:
    """Open a file (or '-' for stdin), transparently decompressing gzip."""
    import sys

    raw = sys.stdin.buffer if str(path) == "-" else open(path, "rb")
    buffered = io.BufferedReader(raw) if not hasattr(raw, "peek") else raw
    if buffered.peek(2)[:2] == b"\x1f\x8b":
        return gzip.GzipFile(fileobj=buffered)
    return buffered


def parse_planar_code(stream) -> Iterator[RotationSystem]:
    """Lazily decode rotation systems from planar_code bytes (1-byte variant only)."""
    if isinstance(stream, (bytes, bytearray, memoryview)):
        stream = io.BytesIO(bytes(stream))
    buf = b""
    pos = 0
    eof = False
    ordinal = 0

    def fill():
        nonlocal buf, pos, eof
        more = stream.read(_CHUNK)
        if not more:
            eof = True
        buf = buf[pos:] + more
        pos = 0

    while len(buf) < len(HEADER) and not eof:
        fill()
    if buf.startswith(b">>planar_code"):
        end = buf.find(b"<<")
        if end < 0:
            raise PlanarCodeError("unterminated planar_code header")
        if buf[:end + 2] != HEADER:
            raise PlanarCodeError(f"unsupported header {buf[:end + 2]!r} (only the 1-byte variant is handled)")
        pos = end + 2
    while True:
        if pos >= len(buf):
            if eof:
                return
            fill()
            continue
        start = pos
        n = buf[pos]
        if n == 0:
            raise PlanarCodeError(f"graph {ordinal}: vertex count byte is 0 "
                                  "(2-byte planar_code for n >= 256 is not supported)", witness=ordinal)
        pos += 1
        order = []
        while len(order) < n:
            end = buf.find(b"\x00", pos)
            if end < 0:
                if eof:
                    raise PlanarCodeError(f"graph {ordinal}: truncated after {len(order)} of {n} vertices",
                                          witness=ordinal)
                pos = start
                fill()
                start, pos, order = 0, 1, []
                continue
            row = buf[pos:end]
            if row and max(row) > n:
                raise PlanarCodeError(f"graph {ordinal}: neighbour {max(row)} exceeds n={n}", witness=ordinal)
            order.append(tuple(b - 1 for b in row))
            pos = end + 1
        yield RotationSystem(n, tuple(order))
        ordinal += 1


def write_planar_code(rotations: Iterable[RotationSystem], header: bool = True) -> bytes:
    out = bytearray(HEADER if header else b"")
    for rot in rotations:
        if rot.n > 255:
            raise PlanarCodeError(f"n={rot.n} needs the 2-byte variant", operation="write_planar_code")
        out.append(rot.n)
        for row in rot.order:
            out.extend(u + 1 for u in row)
            out.append(0)
    return bytes(out)


# -- scanning ---------------------------------------------------------------------

@dataclass
class ScanRecord:
    index: int
    n: int
    m: int | None = None
    f: int | None = None
    forman_min: int | None = None
    forman_positive: bool | None = None
    resist_min: float | None = None
    resist_positive: bool | None = None
    diameter: int | None = None
    violations: list = field(default_factory=list)


def _round12(x: float) -> float:
    return float(f"{x:.12g}")


def _quick_forman_positive(order) -> bool | None:
    """Forman positivity straight from a rotation system.

    Uses the per-edge closed form for polyhedral skeletons.  Returns None when
    the embedding is not one where that closed form applies (the caller then
    falls back to the full evaluation).
    """
    n = len(order)
    deg = [len(r) for r in order]
    pos = [{u: i for i, u in enumerate(r)} for r in order]
    flen: dict[tuple[int, int], int] = {}
    fid: dict[tuple[int, int], int] = {}
    faces = 0
    for u in range(n):
        for v in order[u]:
            if (u, v) in flen:
                continue
            darts = [(u, v)]
            seen = {u}
            a, b = u, v
            while True:
                r = order[b]
                w = r[(pos[b][a] + 1) % len(r)]
                a, b = b, w
                if (a, b) == (u, v):
                    break
                if a in seen:
                    return None  # face revisits a vertex
                seen.add(a)
                darts.append((a, b))
            for d in darts:
                flen[d] = len(darts)
                fid[d] = faces
            faces += 1
    m = sum(deg) // 2
    if n - m + faces != 2:
        return None
    for u in range(n):
        for v in order[u]:
            if u < v:
                if fid[(u, v)] == fid[(v, u)]:
                    return None
                if 16 - deg[u] - deg[v] - flen[(u, v)] - flen[(v, u)] < 1:
                    return False
    return True


def evaluate(index: int, rot: RotationSystem, predicate: str = "forman-positive") -> ScanRecord:
    """Full single-graph path; every flag is computed from the definitions."""
    rec = ScanRecord(index=index, n=rot.n)
    try:
        sk = faces_from_rotation(rot)
    except PolyCurvError as exc:
        rec.violations = [f"error={exc}"]
        return rec
    rec.m, rec.f = sk.m, sk.f
    prof = forman_profile(sk)
    rec.forman_min, rec.forman_positive = prof.min, prof.positive
    rec.diameter = graph_diameter(sk.graph)
    if sk.polyhedral:
        rec.violations = [str(v) for v in screen_low_dimension(sk, 3)]
    if predicate in ("resistance-positive", "both"):
        rp = resistance_profile(sk)
        rec.resist_min, rec.resist_positive = _round12(rp.min), rp.positive
    return rec


def matches(rec: ScanRecord, predicate: str) -> bool:
    if predicate == "forman-positive":
        return bool(rec.forman_positive)
    if predicate == "resistance-positive":
        return bool(rec.resist_positive)
    return bool(rec.forman_positive and rec.resist_positive)


def simple_type(sk: TwoSkeleton) -> str | None:
    """Name of the known simple Forman-positive polytope isomorphic to ``sk``, if any."""
    for name, ref in _simple_references().items():
        if find_isomorphism(sk, ref) is not None:
            return name
    return None


def _scan_batch(args):
    start, batch, predicate, keep_all, keep_rot = args
    out = []
    kept = {}
    simple = []
    totals, hits = Counter(), Counter()
    for offset, rot in enumerate(batch):
        idx = start + offset
        totals[rot.n] += 1
        if predicate in ("forman-positive", "both") and not keep_all:
            quick = _quick_forman_positive(rot.order)
            if quick is False:
                continue
        rec = evaluate(idx, rot, predicate)
        if matches(rec, predicate):
            hits[rot.n] += 1
            out.append(rec)
            if keep_rot:
                kept[idx] = rot
            if predicate == "forman-positive" and all(len(r) == 3 for r in rot.order):
                simple.append((idx, simple_type(faces_from_rotation(rot))))
        elif keep_all or any(v.startswith("error=") for v in rec.violations):
            out.append(rec)
    return out, totals, hits, simple, kept


@dataclass
class ScanSummary:
    predicate: str
    total: int
    positive: int
    per_n: dict  # n -> (graphs, positives)
    errors: int
    simple_positive: list  # indices of 3-regular positives
    simple_types: dict  # family name -> count
    simple_unmatched: list
    rotations: dict = field(default_factory=dict, repr=False)

    def lines(self) -> list[str]:
        out = [f"predicate: {self.predicate}", f"graphs: {self.total}"]
        for n, (t, p) in sorted(self.per_n.items()):
            out.append(f"n={n}: {p} / {t}")
        out.append(f"errors: {self.errors}")
        if self.predicate == "forman-positive":
            count = len(self.simple_positive)
            types = ", ".join(f"{k}={v}" for k, v in self.simple_types.items())
            out.append(f"simple positive: {count} ({types})")
            if self.simple_unmatched:
                out.append(f"simple positive, unrecognised: {self.simple_unmatched}")
            if count != 5:
                out.append(f"note: {count} simple positive types found; the classification theorem "
                           "text states five")
        out.append(f"positive: {self.positive}")
        return out


def _batches(rotations: Iterable[RotationSystem], size: int, predicate: str, keep_all: bool,
             keep_rot: bool):
    it = iter(rotations)
    start = 0
    while True:
        chunk = list(islice(it, size))
        if not chunk:
            return
        yield start, chunk, predicate, keep_all, keep_rot
        start += len(chunk)


def scan_corpus(rotations: Iterable[RotationSystem], predicate: str = "forman-positive", jobs: int = 1,
                keep_all: bool = False, batch_size: int = 2000,
                keep_rotations: bool = False) -> tuple[list[ScanRecord], ScanSummary]:
    """Evaluate every graph; return records (matches only unless ``keep_all``) and a summary.

    Results are merged in corpus order, so output does not depend on ``jobs``.
    With ``keep_rotations`` the summary's ``rotations`` maps each matching
    index to its rotation system.
    """
    if predicate not in PREDICATES:
        raise PolyCurvError(f"unknown predicate {predicate!r}", operation="scan_corpus")
    work = _batches(rotations, batch_size, predicate, keep_all, keep_rotations)
    records: list[ScanRecord] = []
    simple: list = []
    kept: dict = {}
    totals, hits = Counter(), Counter()
    pool = Pool(jobs) if jobs > 1 else None
    try:
        results = pool.imap(_scan_batch, work) if pool else map(_scan_batch, work)
        for recs, t, h, sim, rots in results:
            records += recs
            kept.update(rots)
            simple += sim
            totals += t
            hits += h
    finally:
        if pool:
            pool.close()
            pool.join()
    summary = _summarise(records, predicate, totals, hits, simple)
    summary.rotations = kept
    return records, summary


def _simple_references() -> dict[str, TwoSkeleton]:
    from .families import hypercube_skeleton, prism_skeleton, simplex_skeleton

    return {"tetrahedron": simplex_skeleton(3), "prism3": prism_skeleton(3),
            "cube": hypercube_skeleton(3), "prism5": prism_skeleton(5)}


def _summarise(records, predicate, totals, hits, simple) -> ScanSummary:
    positives = [r for r in records if matches(r, predicate)]
    return ScanSummary(
        predicate=predicate,
        total=sum(totals.values()),
        positive=len(positives),
        per_n={n: (totals[n], hits[n]) for n in sorted(totals)},
        errors=sum(1 for r in records if any(v.startswith("error=") for v in r.violations)),
        simple_positive=[i for i, _ in simple],
        simple_types=dict(sorted(Counter(t for _, t in simple if t).items())),
        simple_unmatched=[i for i, t in simple if t is None],
    )


# -- reports ----------------------------------------------------------------------

def _row(rec: ScanRecord) -> dict:
    d = asdict(rec)
    if d["resist_min"] is not None:
        d["resist_min"] = _round12(d["resist_min"])
    return d


def _cell(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, list):
        return ";".join(x)
    return repr(x) if isinstance(x, float) else str(x)


def write_report(records: Sequence[ScanRecord], fmt: str, path) -> None:
    text = render_report(records, fmt)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise PolyCurvError(f"cannot write {path}: {exc}", operation="write_report") from None


def render_report(records: Sequence[ScanRecord], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([_row(r) for r in records], indent=1) + "\n"
    if fmt != "csv":
        raise PolyCurvError(f"unknown report format {fmt!r}", operation="write_report")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        d = _row(r)
        w.writerow([_cell(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def read_report(path) -> list[ScanRecord]:
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        return [ScanRecord(**d) for d in json.loads(text)]
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        def num(key, typ):
            return typ(row[key]) if row[key] != "" else None

        def flag(key):
            return None if row[key] == "" else row[key] == "true"

        out.append(ScanRecord(
            index=int(row["index"]), n=int(row["n"]), m=num("m", int), f=num("f", int),
            forman_min=num("forman_min", int), forman_positive=flag("forman_positive"),
            resist_min=num("resist_min", float), resist_positive=flag("resist_positive"),
            diameter=num("diameter", int),
            violations=row["violations"].split(";") if row["violations"] else [],
        ))
    return out


# -- DOT ----------------------------------------------------------------------------

def export_dot(sk, labels: str = "none") -> str:
    from .forman import forman_curvature
    from .skeleton import TwoSkeleton as _TS

    g = sk.graph if isinstance(sk, _TS) else sk
    lines = ["graph G {"]
    if labels == "resistance":
        kappa = resistance_profile(g).curvature
        lines += [f'  {v} [label="{kappa[v]:.4f}"];' for v in range(g.n)]
    elif labels in ("forman", "none"):
        lines += [f"  {v};" for v in range(g.n)]
    else:
        raise PolyCurvError(f"unknown label kind {labels!r}", operation="export_dot")
    for e, (u, v) in enumerate(g.edges):
        if labels == "forman":
            if not isinstance(sk, _TS):
                raise PolyCurvError("forman labels need faces", operation="export_dot")
            lines.append(f'  {u} -- {v} [label="{forman_curvature(sk, e)}"];')
        else:
            lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
