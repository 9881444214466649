"""Command line entry point: ``polycurv <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import corpus, families, forman, resistance, skeleton, tube
from .errors import PolyCurvError


def _read_inputs(path: str):
    """Skeletons from a JSON document or a planar_code file (possibly gzipped)."""
    stream = corpus.open_binary(path)
    head = stream.peek(1)[:1] if hasattr(stream, "peek") else b""
    if head in (b"{", b" ", b"\n", b"\t"):
        return [skeleton.loads(stream.read().decode())], False
    return [skeleton.faces_from_rotation(r) for r in corpus.parse_planar_code(stream)], True


def _write(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _profile_doc(sk, want_forman: bool, want_resist: bool) -> dict:
    g = sk.graph if isinstance(sk, skeleton.TwoSkeleton) else sk
    doc = {"n": g.n, "m": g.m}
    if isinstance(sk, skeleton.TwoSkeleton):
        doc["f"] = sk.f
    if want_forman:
        if not isinstance(sk, skeleton.TwoSkeleton):
            raise PolyCurvError("Forman curvature needs faces in the input", operation="curv")
        p = forman.forman_profile(sk)
        doc["forman"] = {"per_edge": list(p.per_edge), "min": p.min,
                         "average": str(p.average), "positive": p.positive}
    if want_resist:
        r = resistance.resistance_profile(g)
        doc["resistance"] = {"curvature": [float(f"{x:.12g}") for x in r.curvature],
                             "min": float(f"{r.min:.12g}"), "positive": r.positive,
                             "boundary": list(r.boundary)}
    return doc


def cmd_curv(args) -> int:
    items, many = _read_inputs(args.input)
    want_f, want_r = args.forman, args.resistance
    if not (want_f or want_r):
        want_f = all(isinstance(x, skeleton.TwoSkeleton) for x in items)
        want_r = True
    docs = [_profile_doc(sk, want_f, want_r) for sk in items]
    if args.format == "json":
        _write(json.dumps(docs if many else docs[0], indent=1) + "\n", args.out)
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["graph", "kind", "id", "u", "v", "value"])
    for gi, (sk, doc) in enumerate(zip(items, docs)):
        g = sk.graph if isinstance(sk, skeleton.TwoSkeleton) else sk
        if "forman" in doc:
            for e, val in enumerate(doc["forman"]["per_edge"]):
                w.writerow([gi, "forman", e, *g.edges[e], val])
        if "resistance" in doc:
            for v, val in enumerate(doc["resistance"]["curvature"]):
                w.writerow([gi, "resistance", v, v, "", repr(val)])
    _write(buf.getvalue(), args.out)
    return 0


def cmd_scan(args) -> int:
    t0 = time.time()
    records, summary = corpus.scan_corpus(
        _iter_corpus(args.input), predicate=args.predicate, jobs=args.jobs, keep_all=args.all)
    if args.out:
        fmt = args.format or ("json" if args.out.endswith(".json") else "csv")
        corpus.write_report(records, fmt, args.out)
    for line in summary.lines():
        print(line)
    print(f"elapsed: {time.time() - t0:.1f}s", file=sys.stderr)
    return 0


def _iter_corpus(paths):
    for p in paths:
        yield from corpus.parse_planar_code(corpus.open_binary(p))


def cmd_gen(args) -> int:
    fam = args.family
    if fam == "delta-expand":
        (base,), _ = _read_inputs(args.input)
        sk = families.delta_expansion(base, args.vertex)
    elif fam == "cupola":
        sk = families.square_cupola_skeleton()
    elif fam == "tube":
        sk = families.tube_skeleton(args.k)
    elif fam in ("simplex", "hypercube"):
        sk = getattr(families, f"{fam}_skeleton")(args.dim)
    else:
        sk = getattr(families, f"{fam}_skeleton")(args.n)
    _write(skeleton.dumps(sk) + "\n", args.out)
    return 0


def cmd_dual(args) -> int:
    (sk,), _ = _read_inputs(args.input)
    if not isinstance(sk, skeleton.TwoSkeleton):
        raise PolyCurvError("dual needs faces in the input", operation="planar_dual")
    dual, sigma = skeleton.planar_dual(sk)
    doc = skeleton.to_document(dual)
    doc["edge_map"] = list(sigma)
    _write(json.dumps(doc) + "\n", args.out)
    return 0


def cmd_dot(args) -> int:
    (sk,), _ = _read_inputs(args.input)
    _write(corpus.export_dot(sk, args.label), args.out)
    return 0


def tube_check(k: int, tol: float) -> dict:
    """Closed forms versus the numeric solver on tube_skeleton(k)."""
    sk = families.tube_skeleton(k)
    t = tube.TubeClosedForm(k)
    sys_ = resistance.laplacian_system(sk)
    prof = resistance.resistance_profile(sk, sys_)
    v = families.tube_vertex
    err = abs(t.r_cap() - resistance.effective_resistance(sys_, 0, v(0, 0)))
    err = max(err, abs(t.r_cap() - resistance.effective_resistance(sys_, 1, v(0, k - 1))))
    for j in range(k):
        err = max(err, abs(t.r_cycle(j) - resistance.effective_resistance(sys_, v(0, j), v(1, j))))
    for j in range(k - 1):
        err = max(err, abs(t.r_path(j) - resistance.effective_resistance(sys_, v(0, j), v(0, j + 1))))
    closed = t.vertex_curvatures()
    curv_err = float(np.max(np.abs(closed - prof.curvature)))
    recon = float(np.max(np.abs(tube.reconstruct_laplacian(k) - resistance.laplacian_matrix(sk))))
    cap = t.cap_curvature()
    ok = (err <= tol and curv_err <= tol and recon < 1e-10 and closed.min() > 0
          and 0.25 <= cap < 0.5)
    return {"k": k, "resistance_err": err, "curvature_err": curv_err, "reconstruction_err": recon,
            "min_curvature": float(closed.min()), "cap_curvature": cap, "ok": ok}


def cmd_tube_verify(args) -> int:
    print(f"{'k':>4} {'res_err':>10} {'curv_err':>10} {'recon_err':>10} {'min_curv':>12}  status")
    bad = 0
    for k in range(1, args.k_max + 1):
        r = tube_check(k, args.tol)
        bad += not r["ok"]
        print(f"{k:>4} {r['resistance_err']:10.2e} {r['curvature_err']:10.2e} "
              f"{r['reconstruction_err']:10.2e} {r['min_curvature']:12.5e}  {'pass' if r['ok'] else 'FAIL'}")
    print(f"{args.k_max - bad} / {args.k_max} passed")
    return 1 if bad else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polycurv", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("curv", help="curvature profiles of one skeleton file")
    p.add_argument("--input", default="-", help="JSON skeleton or planar_code file ('-' = stdin)")
    p.add_argument("--forman", action="store_true")
    p.add_argument("--resistance", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_curv)

    p = sub.add_parser("scan", help="scan planar_code corpora")
    p.add_argument("--input", nargs="+", required=True)
    p.add_argument("--predicate", choices=corpus.PREDICATES, default="forman-positive")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--all", action="store_true", help="write a record for every graph, not only matches")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("gen", help="emit a family member as skeleton JSON")
    gsub = p.add_subparsers(dest="family", required=True)
    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out")
    for name in ("simplex", "hypercube"):
        q = gsub.add_parser(name, parents=[out])
        q.add_argument("--dim", type=int, required=True)
    for name in ("prism", "pyramid", "polygon"):
        q = gsub.add_parser(name, parents=[out])
        q.add_argument("--n", type=int, required=True)
    gsub.add_parser("cupola", parents=[out])
    q = gsub.add_parser("tube", parents=[out])
    q.add_argument("--k", type=int, required=True)
    q = gsub.add_parser("delta-expand", parents=[out])
    q.add_argument("--input", default="-")
    q.add_argument("--vertex", type=int, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("dual", help="planar dual of a polyhedral skeleton")
    p.add_argument("--input", default="-")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("tube-verify", help="closed-form tube values against the numeric solver")
    p.add_argument("--k-max", type=int, default=50)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_tube_verify)

    p = sub.add_parser("dot", help="Graphviz export")
    p.add_argument("--input", default="-")
    p.add_argument("--label", choices=("forman", "resistance", "none"), default="none")
    p.add_argument("--out")
    p.set_defaults(func=cmd_dot)
    return ap


def run_cli(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PolyCurvError as exc:
        msg = f"polycurv: {exc.operation}: {exc}"
        if exc.witness is not None:
            msg += f" (witness: {exc.witness})"
        print(msg, file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"polycurv: io: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
