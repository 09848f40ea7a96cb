"""Command-line front end.

Verbs: expand, matchings, mpath, verify, skein.  Exit codes: 0 success or
all identities verified, 1 identity or cross-check failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from . import curvespec, mpath, skein, snakeband
from .errors import QuasiClusterError
from .laurent import canonical_string
from .mat2 import identity


def _load(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise QuasiClusterError(f"cannot read {path}: {exc}")
    return curvespec.parse_spec(text)


def _pick_curves(parsed, name):
    if name is None:
        return list(parsed.curves.values())
    if name not in parsed.curves:
        raise QuasiClusterError(f"no curve named {name!r}")
    return [parsed.curves[name]]


def _mode_value(spec, signs, mode):
    return skein._chi_in_mode(spec, signs, mode)


def _map_ordered(fn, items, threads):
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def cmd_expand(args):
    parsed = _load(args.input)
    specs = _pick_curves(parsed, args.curve)
    values = _map_ordered(
        lambda s: canonical_string(_mode_value(s, parsed.signs, args.mode)),
        specs,
        args.threads,
    )
    if args.json:
        payload = {"curves": [{"name": s.label, "chi": v} for s, v in zip(specs, values)]}
        print(json.dumps(payload, sort_keys=True))
    elif args.curve is not None:
        print(values[0])
    else:
        for s, v in zip(specs, values):
            print(f"{s.label} = {v}")
    return 0


def cmd_matchings(args):
    parsed = _load(args.input)
    specs = _pick_curves(parsed, args.curve)

    def work(spec):
        g = snakeband.build_graph(spec)
        ms = snakeband.enumerate_matchings(g, parsed.signs)
        return g, ms

    results = _map_ordered(work, specs, args.threads)
    if args.dot:
        for spec, (g, _) in zip(specs, results):
            sys.stdout.write(snakeband.to_dot(g, parsed.signs, name=spec.label))
        return 0
    if args.json:
        payload = []
        for spec, (g, ms) in zip(specs, results):
            payload.append(
                {
                    "curve": spec.label,
                    "cross": canonical_string(g.cross_monomial()),
                    "matchings": [
                        {
                            "edges": [_edge_name(g, e) for e in m.edges],
                            "weight": canonical_string(m.weight),
                            "coeff": canonical_string(m.coeff),
                            "orientations": list(m.orientations),
                        }
                        for m in ms
                    ],
                    "enumerator": canonical_string(
                        snakeband.matching_enumerator(g, parsed.signs)
                    ),
                }
            )
        print(json.dumps({"curves": payload}, sort_keys=True))
        return 0
    for spec, (g, ms) in zip(specs, results):
        print(f"curve {spec.label}: {len(ms)} matchings, cross = "
              f"{canonical_string(g.cross_monomial())}")
        for i, m in enumerate(ms, 1):
            edges = ",".join(_edge_name(g, e) for e in m.edges)
            print(
                f"  #{i} x(P) = {canonical_string(m.weight)}; "
                f"y(P) = {canonical_string(m.coeff)}; edges = {edges}"
            )
    return 0


def _edge_name(g, edge):
    tile, direction = g.edge_owner(edge)
    return f"t{tile}.{direction}"


def cmd_mpath(args):
    parsed = _load(args.input)
    specs = _pick_curves(parsed, args.curve)
    sqrt = args.mode == "sqrt"
    payload = []
    for spec in specs:
        steps = mpath.standard_mpath(spec, sqrt=sqrt)
        running = identity()
        rows = []
        for i, step in enumerate(steps, 1):
            m = mpath.step_matrix(step, parsed.signs)
            running = m @ running
            rows.append((i, step, m, running))
        payload.append((spec, rows, running))
    if args.json:
        out = []
        for spec, rows, running in payload:
            out.append(
                {
                    "curve": spec.label,
                    "steps": [
                        {"kind": step.kind, "arcs": list(step.arcs), "matrix": str(m)}
                        for _, step, m, _ in rows
                    ],
                    "product": str(running),
                }
            )
        print(json.dumps({"curves": out}, sort_keys=True))
        return 0
    for spec, rows, running in payload:
        print(f"curve {spec.label}: {len(rows)} steps")
        for i, step, m, acc in rows:
            arcs = ",".join(step.arcs)
            print(f"  step {i:2d} {step.kind:3s} ({arcs})  M = {m}")
            print(f"          product = {acc}")
    return 0


def cmd_verify(args):
    parsed = _load(args.input)
    specs = _pick_curves(parsed, args.curve)

    def work(spec):
        g = snakeband.build_graph(spec)
        en = snakeband.matching_enumerator(g, parsed.signs)
        mf = snakeband.graph_matrix_formula(g, parsed.signs)
        ch = mpath.chi(spec, parsed.signs)
        return en, mf, ch

    results = _map_ordered(work, specs, args.threads)
    failures = 0
    rows = []
    for spec, (en, mf, ch) in zip(specs, results):
        ok = en == mf == ch
        failures += 0 if ok else 1
        rows.append((spec.label, ok, en, mf, ch))
    if args.json:
        print(
            json.dumps(
                {
                    "curves": [
                        {
                            "name": label,
                            "agree": ok,
                            "enumerator": canonical_string(en),
                            "matrix_formula": canonical_string(mf),
                            "chi": canonical_string(ch),
                        }
                        for label, ok, en, mf, ch in rows
                    ]
                },
                sort_keys=True,
            )
        )
    else:
        single = args.curve is not None
        for label, ok, en, mf, ch in rows:
            if ok:
                print("OK: methods agree" if single else f"OK: methods agree ({label})")
            else:
                print(f"MISMATCH for {label}:")
                print(f"  enumerator     = {canonical_string(en)}")
                print(f"  matrix formula = {canonical_string(mf)}")
                print(f"  step product   = {canonical_string(ch)}")
    return 1 if failures else 0


def cmd_skein(args):
    parsed = _load(args.input)
    reports = skein.run_identity_file(parsed)
    if not reports:
        raise QuasiClusterError("no identity blocks in file")
    if args.json:
        print(
            json.dumps(
                {
                    "identities": [
                        {
                            "name": r.name,
                            "holds": r.holds,
                            "lhs": canonical_string(r.lhs),
                            "rhs": canonical_string(r.rhs),
                            "signs": list(r.resolved_signs),
                        }
                        for r in reports
                    ]
                },
                sort_keys=True,
            )
        )
    else:
        for r in reports:
            print(skein.describe(r))
    return 0 if all(r.holds for r in reports) else 1


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quasicluster",
        description="Laurent expansions of quasi-cluster variables by matching "
        "enumeration and by step-matrix products, plus identity checks.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, fn in (
        ("expand", cmd_expand),
        ("matchings", cmd_matchings),
        ("mpath", cmd_mpath),
        ("verify", cmd_verify),
        ("skein", cmd_skein),
    ):
        p = sub.add_parser(verb)
        p.add_argument("input", help="spec file (.qcs)")
        p.add_argument("--curve", default=None, help="restrict to one curve")
        p.add_argument(
            "--mode",
            default="standard",
            choices=["standard", "sqrt", "y1"],
            help="coefficient handling for expand/mpath",
        )
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--threads", type=int, default=1, help="worker threads")
        if verb == "matchings":
            p.add_argument(
                "--dot", action="store_true", help="emit the flip graph as Graphviz DOT"
            )
        p.set_defaults(fn=fn)
    return parser


def run(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except QuasiClusterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
