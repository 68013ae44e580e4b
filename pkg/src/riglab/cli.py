"""Command line front end.

Subcommands: gen (sample one graph), probe (print one closed-form value),
sweep / degree-dist / degree-scaling (run a JSON experiment spec and write
CSV + JSON reports, optionally with a small static SVG chart).

Exit codes: 0 success, 2 usage or domain error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from ._version import __version__
from .analytics import (
    TailBoundQuery,
    q_approx,
    q_exact,
    rate_H,
    solve_a,
    tail_bound,
    threshold_p,
    zeta_bound,
)
from .model import ModelParams, format_assignment, format_edgelist, project, sample_assignment
from .montecarlo import ExperimentSpec, run_experiment, write_outputs

ENV_SEED = "RIG_LAB_SEED"

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _default_seed() -> int:
    raw = os.environ.get(ENV_SEED)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{ENV_SEED} must be an integer, got {raw!r}") from None


def _resolve_seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_gen(args) -> int:
    params = ModelParams(n=args.n, m=args.m, p=args.p)
    seed = _resolve_seed(args)
    assignment = sample_assignment(params, seed)
    graph = project(assignment)
    if args.format == "edgelist":
        text = format_edgelist(graph, params, seed, extra_comments=(f"riglab {__version__}",))
    else:
        payload = {
            "format": "rig-graph",
            "version": __version__,
            "n": params.n,
            "m": params.m,
            "p": params.p,
            "seed": seed,
            "sets": [list(objects) for objects in assignment.sets],
            "edges": [list(edge) for edge in sorted(graph.edges)],
        }
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    _write_text(args.out, text)
    if args.assignment_out is not None:
        _write_text(args.assignment_out, format_assignment(assignment, seed))
    return 0


def _print_value(value: float) -> None:
    # shortest round-trip decimal form
    sys.stdout.write(repr(float(value)) + "\n")


def cmd_probe(args) -> int:
    quantity = args.quantity
    if quantity == "q-exact":
        _print_value(q_exact(args.m, args.p))
    elif quantity == "q-approx":
        _print_value(q_approx(args.m, args.p))
    elif quantity == "zeta":
        _print_value(zeta_bound(args.m, args.p))
    elif quantity == "H":
        _print_value(rate_H(args.t))
    elif quantity == "tail-bound":
        query = TailBoundQuery(
            trials=args.trials,
            success_prob=args.p,
            cutoff=args.cutoff,
            direction=args.direction,
        )
        _print_value(tail_bound(query))
    elif quantity == "a-root":
        _print_value(solve_a(args.c, args.branch).a)
    else:
        _print_value(threshold_p(args.alpha, args.m, args.n))
    return 0


def _chart_series(result):
    kind = result.spec.kind
    if kind == "edge-prob":
        points = [
            (dict(rec.grid_point)["p"], rec.estimate, rec.ci95[0], rec.ci95[1])
            for rec in result.records
        ]
        return "p", "adjacency probability", [("estimate", points)]
    if kind == "connectivity-sweep":
        series = []
        for n in result.spec.n_values:
            points = [
                (dict(rec.grid_point)["alpha"], rec.estimate, rec.ci95[0], rec.ci95[1])
                for rec in result.records
                if dict(rec.grid_point)["n"] == n
            ]
            series.append((f"n={n}", points))
        return "alpha", "connected fraction", series
    if kind == "degree-scaling":
        series = []
        for alpha in result.spec.alphas:
            points = [
                (rec.n, rec.ratio_mean, rec.ratio_q25, rec.ratio_q75)
                for rec in result.records
                if rec.alpha == alpha
            ]
            series.append((f"alpha={alpha}", points))
        return "n", "mean normalized degree", series
    first = result.records[0]
    points = [(k, v, v, v) for k, v in enumerate(first.empirical_pmf)]
    return "degree", "relative frequency", [(f"n={first.n} m={first.m} p={first.p}", points)]


def render_chart(result) -> str:
    """Minimal static SVG line chart: axes, one polyline per series, CI bands."""
    xlabel, ylabel, series = _chart_series(result)
    width, height = 640.0, 400.0
    left, right, top, bottom = 62.0, 18.0, 24.0, 46.0
    xs = [x for _, pts in series for x, _, _, _ in pts]
    ys = [v for _, pts in series for _, y, lo, hi in pts for v in (y, lo, hi)]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad

    def sx(x: float) -> float:
        return left + (x - x0) / (x1 - x0) * (width - left - right)

    def sy(y: float) -> float:
        return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:g} {height:g}" '
        f'font-family="monospace" font-size="11">',
        f'<rect width="{width:g}" height="{height:g}" fill="white"/>',
        f'<line x1="{left:.2f}" y1="{height - bottom:.2f}" x2="{width - right:.2f}" '
        f'y2="{height - bottom:.2f}" stroke="black"/>',
        f'<line x1="{left:.2f}" y1="{top:.2f}" x2="{left:.2f}" y2="{height - bottom:.2f}" '
        f'stroke="black"/>',
    ]
    for i in range(5):
        fx = x0 + (x1 - x0) * i / 4
        fy = y0 + (y1 - y0) * i / 4
        parts.append(
            f'<line x1="{sx(fx):.2f}" y1="{height - bottom:.2f}" x2="{sx(fx):.2f}" '
            f'y2="{height - bottom + 4:.2f}" stroke="black"/>'
            f'<text x="{sx(fx):.2f}" y="{height - bottom + 16:.2f}" '
            f'text-anchor="middle">{fx:.4g}</text>'
        )
        parts.append(
            f'<line x1="{left - 4:.2f}" y1="{sy(fy):.2f}" x2="{left:.2f}" y2="{sy(fy):.2f}" '
            f'stroke="black"/>'
            f'<text x="{left - 7:.2f}" y="{sy(fy) + 4:.2f}" text-anchor="end">{fy:.4g}</text>'
        )
    parts.append(
        f'<text x="{(left + width - right) / 2:.2f}" y="{height - 8:.2f}" '
        f'text-anchor="middle">{xlabel}</text>'
    )
    parts.append(
        f'<text x="14" y="{(top + height - bottom) / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {(top + height - bottom) / 2:.2f})">{ylabel}</text>'
    )
    for idx, (label, pts) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        band = [(sx(x), sy(hi)) for x, _, _, hi in pts]
        band += [(sx(x), sy(lo)) for x, _, lo, _ in reversed(pts)]
        if len(pts) > 1:
            band_str = " ".join(f"{bx:.2f},{by:.2f}" for bx, by in band)
            parts.append(f'<polygon points="{band_str}" fill="{color}" fill-opacity="0.15"/>')
        line = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y, _, _ in pts)
        parts.append(
            f'<polyline points="{line}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        for x, y, _, _ in pts:
            parts.append(f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="2.5" fill="{color}"/>')
        parts.append(
            f'<text x="{width - right - 6:.2f}" y="{top + 14 * (idx + 1):.2f}" '
            f'text-anchor="end" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _cmd_experiment(args, allowed_kinds: tuple[str, ...]) -> int:
    with open(args.spec) as fh:
        payload = json.load(fh)
    spec = ExperimentSpec.from_dict(payload, default_seed=_resolve_seed(args))
    if spec.kind not in allowed_kinds:
        raise ValueError(
            f"spec kind {spec.kind!r} does not belong to this subcommand "
            f"(expected one of {allowed_kinds})"
        )
    result = run_experiment(spec)
    csv_path = args.out + ".csv"
    json_path = args.out + ".json"
    write_outputs(result, csv_path, json_path)
    written = [csv_path, json_path]
    if args.svg:
        svg_path = args.out + ".svg"
        _write_text(svg_path, render_chart(result))
        written.append(svg_path)
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_sweep(args) -> int:
    return _cmd_experiment(args, ("edge-prob", "connectivity-sweep"))


def cmd_degree_dist(args) -> int:
    return _cmd_experiment(args, ("degree-dist",))


def cmd_degree_scaling(args) -> int:
    return _cmd_experiment(args, ("degree-scaling",))


def _add_seed_option(parser) -> None:
    parser.add_argument(
        "--seed",
        type=int,
        default=None,
        help=f"sampling seed (default: ${ENV_SEED} if set, else 0)",
    )


def _add_experiment_options(parser) -> None:
    parser.add_argument("--spec", required=True, help="path to JSON experiment spec")
    parser.add_argument("--out", required=True, help="output path prefix (.csv/.json appended)")
    parser.add_argument("--svg", action="store_true", help="also write an SVG chart")
    _add_seed_option(parser)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riglab",
        description="random intersection graph laboratory",
    )
    parser.add_argument("--version", action="version", version=f"riglab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="sample one graph and print or save it")
    gen.add_argument("--n", type=int, required=True, help="number of vertices")
    gen.add_argument("--m", type=int, required=True, help="number of objects")
    gen.add_argument("--p", type=float, required=True, help="attachment probability")
    gen.add_argument("--format", choices=("edgelist", "json"), default="edgelist")
    gen.add_argument("--out", default=None, help="output file (default stdout)")
    gen.add_argument("--assignment-out", default=None, help="also write per-vertex object sets")
    _add_seed_option(gen)
    gen.set_defaults(func=cmd_gen)

    probe = sub.add_parser("probe", help="print one closed-form quantity")
    quantity = probe.add_subparsers(dest="quantity", required=True)
    for name in ("q-exact", "q-approx", "zeta"):
        q = quantity.add_parser(name)
        q.add_argument("--m", type=int, required=True)
        q.add_argument("--p", type=float, required=True)
        q.set_defaults(func=cmd_probe)
    h = quantity.add_parser("H")
    h.add_argument("--t", type=float, required=True, help="argument; 'inf' is accepted")
    h.set_defaults(func=cmd_probe)
    tb = quantity.add_parser("tail-bound")
    tb.add_argument("--trials", type=int, required=True)
    tb.add_argument("--p", type=float, required=True)
    tb.add_argument("--cutoff", type=float, required=True)
    tb.add_argument("--direction", choices=("upper", "lower"), required=True)
    tb.set_defaults(func=cmd_probe)
    ar = quantity.add_parser("a-root")
    ar.add_argument("--c", type=float, required=True)
    ar.add_argument("--branch", choices=("upper", "lower"), required=True)
    ar.set_defaults(func=cmd_probe)
    tp = quantity.add_parser("threshold-p")
    tp.add_argument("--alpha", type=float, required=True)
    tp.add_argument("--m", type=int, required=True)
    tp.add_argument("--n", type=int, required=True)
    tp.set_defaults(func=cmd_probe)

    sweep = sub.add_parser("sweep", help="run an edge-prob or connectivity-sweep spec")
    _add_experiment_options(sweep)
    sweep.set_defaults(func=cmd_sweep)

    dd = sub.add_parser("degree-dist", help="run a degree-dist spec")
    _add_experiment_options(dd)
    dd.set_defaults(func=cmd_degree_dist)

    ds = sub.add_parser("degree-scaling", help="run a degree-scaling spec")
    _add_experiment_options(ds)
    ds.set_defaults(func=cmd_degree_scaling)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 0 if code is None else 2
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())
