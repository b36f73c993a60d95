"""Command-line surface: generate, fit, dominate, compare, visualize.

Every command is deterministic given its inputs, seed, and flags; reruns
write byte-identical files.  Exit codes: 0 success, 1 I/O or parse error,
2 model or fit rejection, 3 invalid arguments.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import datasets as ds
from . import domination as dom
from . import fitting, logistic, svgplot
from .graph import (DisconnectedGraphError, GraphError, MalformedInputError,
                    from_edge_list, gcc, giant_component, diameter,
                    read_edge_list)
from .models import (HeightAssignment, Igam2Params, IgamParams, ModelError,
                     sample_continuous_igam, sample_directed_igam,
                     sample_igam, sample_igam2)

DEFAULT_SEED = 42
_STRATEGY_ALIASES = {
    "greedy": "greedy",
    "prestige": "prestige",
    "cp": "logistic-cp",
    "jb": "logistic-jb",
    "th": "logistic-th",
    "logistic-cp": "logistic-cp",
    "logistic-jb": "logistic-jb",
    "logistic-th": "logistic-th",
}


class CliArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliArgumentError(message)


def _default_out():
    return os.environ.get("IGAM_OUTPUT_DIR", "igam-out")


def _build_parser():
    parser = _Parser(prog="igam", description=__doc__)
    parser.add_argument("--config", help="JSON config; its keys override flags")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample a network and write it out")
    gen.add_argument("--variant", choices=["igam", "igam2", "directed", "continuous"],
                     default="igam")
    gen.add_argument("--b", type=int, default=3)
    gen.add_argument("--c", type=float, default=2.0)
    gen.add_argument("--c1", type=float)
    gen.add_argument("--c2", type=float)
    gen.add_argument("--H", type=int, default=5)
    gen.add_argument("--H0", type=int)
    gen.add_argument("--n", type=int, help="node count (continuous variant)")
    gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    gen.add_argument("--out", default=None)
    gen.add_argument("--plot", action="store_true")

    fit_p = sub.add_parser("fit", help="fit the hierarchy model to an edge list")
    fit_p.add_argument("edge_list")
    fit_p.add_argument("--scorer", choices=["exact", "approx"], default="exact")
    fit_p.add_argument("--swaps", action="store_true")
    fit_p.add_argument("--b-min", type=int, default=None)
    fit_p.add_argument("--b-max", type=int, default=None)
    fit_p.add_argument("--no-fanout-cap", action="store_true")
    fit_p.add_argument("--out", default=None)
    fit_p.add_argument("--plot", action="store_true")

    dom_p = sub.add_parser("dominate", help="domination curves and exponents")
    dom_p.add_argument("edge_list")
    dom_p.add_argument("--strategy", action="append", default=None,
                       choices=sorted(_STRATEGY_ALIASES),
                       help="repeatable; defaults to greedy")
    dom_p.add_argument("--kappa", type=float, default=0.8)
    dom_p.add_argument("--heights", help="heights sidecar for the prestige strategy")
    dom_p.add_argument("--coords", help="coordinates CSV for the jb strategy")
    dom_p.add_argument("--out", default=None)
    dom_p.add_argument("--plot", action="store_true")

    cmp_p = sub.add_parser("compare", help="exponent table over datasets")
    cmp_p.add_argument("--data-dir", required=True)
    cmp_p.add_argument("--datasets", default=None,
                       help="comma-separated registry names; default: all present")
    cmp_p.add_argument("--strategies", default="greedy,prestige,cp,th")
    cmp_p.add_argument("--kappa", type=float, default=0.8)
    cmp_p.add_argument("--iterate-filter", action="store_true")
    cmp_p.add_argument("--out", default=None)

    vis = sub.add_parser("visualize", help="layered layout of a fitted hierarchy")
    vis.add_argument("edge_list")
    vis.add_argument("--heights")
    vis.add_argument("--out", default=None)
    return parser


def _apply_config(args, parser):
    if not args.config:
        return args
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            overrides = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInputError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(overrides, dict):
        raise CliArgumentError("config file must hold a JSON object")
    for key, value in overrides.items():
        dest = key.replace("-", "_")
        if not hasattr(args, dest):
            raise CliArgumentError(f"config key {key!r} is not a known option")
        setattr(args, dest, value)
    return args


def _out_dir(args):
    out = Path(args.out if args.out else _default_out())
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path, payload):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_heights(path, heights):
    values = heights.heights if hasattr(heights, "heights") else heights
    with open(path, "w", encoding="utf-8") as fh:
        for node, h in enumerate(values):
            if float(h).is_integer():
                fh.write(f"{node} {int(h)}\n")
            else:
                fh.write(f"{node} {float(h):.10f}\n")


def _read_heights(path):
    heights = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line[0] in "#%":
                continue
            node, value = line.split()
            heights[int(node)] = float(value)
    arr = np.zeros(max(heights) + 1)
    for node, value in heights.items():
        arr[node] = value
    return arr


def _level_bins(height_values, bins=10):
    h = np.asarray(height_values, dtype=float)
    if np.allclose(h, np.round(h)):
        return h.astype(np.int64)
    edges = np.quantile(h, np.linspace(0, 1, bins + 1)[1:-1])
    return np.searchsorted(edges, h)


def _block_density(g, level_of):
    levels = int(level_of.max()) + 1
    counts = np.zeros((levels, levels))
    e = g.edges()
    for u, v in zip(level_of[e[:, 0]], level_of[e[:, 1]]):
        counts[u, v] += 1
        if u != v:
            counts[v, u] += 1
    sizes = np.bincount(level_of, minlength=levels).astype(float)
    pairs = np.outer(sizes, sizes)
    np.fill_diagonal(pairs, sizes * (sizes - 1) / (1 if g.directed else 2))
    with np.errstate(invalid="ignore", divide="ignore"):
        density = np.where(pairs > 0, counts / pairs, 0.0)
    return density


def _cmd_generate(args):
    out = _out_dir(args)
    seed = args.seed
    if args.variant == "igam":
        params = IgamParams(args.b, args.c, args.H)
        g, heights = sample_igam(params, seed)
        height_values = heights.heights
    elif args.variant == "igam2":
        if args.c1 is None or args.c2 is None or args.H0 is None:
            raise CliArgumentError("igam2 needs --c1, --c2 and --H0")
        params = Igam2Params(args.b, args.c1, args.c2, args.H0, args.H)
        g, heights = sample_igam2(params, seed)
        height_values = heights.heights
    elif args.variant == "directed":
        params = IgamParams(args.b, args.c, args.H)
        g, heights = sample_directed_igam(params, seed)
        height_values = heights.heights
    else:
        if args.n is None:
            raise CliArgumentError("continuous variant needs --n")
        params = IgamParams(args.b, args.c, args.H)
        g, height_values = sample_continuous_igam(params, args.n, seed)
    with open(out / "edges.txt", "w", encoding="utf-8") as fh:
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")
    _write_heights(out / "heights.txt", height_values)

    level_of = _level_bins(height_values)
    deg = g.degrees().astype(float)
    level_sizes = np.bincount(level_of)
    level_mean_degree = [
        float(deg[level_of == h].mean()) if level_sizes[h] else None
        for h in range(level_of.max() + 1)
    ]
    stats = {
        "variant": args.variant,
        "params": params.to_dict(),
        "seed": seed,
        "n": g.n,
        "m": g.m,
        "directed": g.directed,
        "level_mean_degree": level_mean_degree,
    }
    if not g.directed:
        stats["gcc"] = gcc(g)
        giant, _ = giant_component(g)
        stats["giant_n"] = giant.n
        stats["giant_diameter"] = diameter(giant)
    _write_json(out / "stats.json", stats)
    if args.plot:
        density = _block_density(g, level_of)
        svg = svgplot.heatmap_svg(density, title=f"{args.variant} block density",
                                  x_label="level", y_label="level")
        (out / "adjacency.svg").write_text(svg, encoding="utf-8")
    print(f"wrote {out}/edges.txt ({g.n} nodes, {g.m} edges)")
    return 0


def _load_graph(path):
    edges, labels = read_edge_list(path)
    return from_edge_list(edges, labels=labels)


def _cmd_fit(args):
    out = _out_dir(args)
    g = _load_graph(args.edge_list)
    b_range = None
    if args.b_min is not None or args.b_max is not None:
        lo = args.b_min if args.b_min is not None else 2
        hi = args.b_max if args.b_max is not None else g.n - 1
        b_range = range(lo, hi + 1)
    result = fitting.fit(
        g.edges(), g.n, scorer=args.scorer, b_range=b_range, swaps=args.swaps,
        fanout_cap=None if args.no_fanout_cap else fitting.DEFAULT_FANOUT_CAP)
    _write_json(out / "fit.json", result.to_dict())
    _write_heights(out / "heights.txt", result.heights)
    if args.plot:
        z = result.level_log_degrees
        levels = np.nonzero(~np.isnan(z))[0]
        svg = svgplot.scatter_svg(
            levels, z[levels],
            title="total level degree vs level",
            x_label="level", y_label="log total degree",
            fit=(result.slope, result.intercept),
            annotations=[
                f"b={result.b} c={result.c:.3f}",
                f"R2={result.r_squared:.3f} LL={result.loglik_exact:.1f}",
            ])
        (out / "level_degrees.svg").write_text(svg, encoding="utf-8")
    print(f"fit: b={result.b} c={result.c:.4f} slope={result.slope:.4f} "
          f"R2={result.r_squared:.4f}")
    return 0


def _strategy_rankings(g, names, heights_path=None, coords_path=None):
    rankings = {}
    curves = {}
    for name in names:
        tag = _STRATEGY_ALIASES[name]
        if tag in rankings:
            continue
        if tag == "greedy":
            ranking, curve = dom.greedy_max_coverage(g)
            rankings[tag] = ranking
            curves[tag] = curve
            continue
        if tag == "prestige":
            if heights_path:
                h = _read_heights(heights_path).astype(np.int64)
                if h.size != g.n:
                    raise MalformedInputError(
                        f"heights file covers {h.size} nodes, graph has {g.n}")
                heights = HeightAssignment(h, b=2)
            else:
                heights = fitting.fit(g.edges(), g.n, scorer="exact").heights
            ranking = dom.prestige_ranking(heights, g.degrees())
        elif tag == "logistic-cp":
            ranking = dom.ranking_from_scores(
                logistic.fit_logistic_cp(g).theta, tag)
        elif tag == "logistic-jb":
            coords = g.coordinates
            if coords_path:
                coord_map = ds.read_coordinates_csv(coords_path)
                dim = next(iter(coord_map.values())).size
                coords = np.full((g.n, dim), np.nan)
                for tok, vec in coord_map.items():
                    coords[int(tok)] = vec
            if coords is None:
                raise MalformedInputError("jb strategy needs --coords")
            ranking = dom.ranking_from_scores(
                logistic.fit_logistic_jb(g, coordinates=coords).theta, tag)
        else:
            ranking = dom.ranking_from_scores(
                logistic.th_rank_scores(g).pi, tag)
        rankings[tag] = ranking
        curves[tag] = dom.domination_curve(g, ranking)
    return rankings, curves


def _cmd_dominate(args):
    out = _out_dir(args)
    g = _load_graph(args.edge_list)
    names = args.strategy if args.strategy else ["greedy"]
    _, curves = _strategy_rankings(g, names, args.heights, args.coords)
    exponents = {}
    for tag, curve in curves.items():
        with open(out / f"curve_{tag}.csv", "w", encoding="utf-8") as fh:
            fh.write("prefix_size,covered_fraction\n")
            for s, f in zip(curve.prefix_sizes, curve.covered_fraction):
                fh.write(f"{s},{f:.10f}\n")
        try:
            exponents[tag] = {"p": dom.ads_exponent(curve, kappa=args.kappa),
                              "kappa": args.kappa}
        except dom.CoverageNotReached as exc:
            exponents[tag] = {"p": None, "kappa": args.kappa,
                              "max_coverage": exc.max_coverage}
    _write_json(out / "exponents.json", {"n": g.n, "m": g.m,
                                         "strategies": exponents})
    if args.plot:
        series = [(tag, curve.prefix_sizes, 100.0 * curve.covered_fraction)
                  for tag, curve in curves.items()]
        svg = svgplot.curves_svg(series, title="domination curves",
                                 x_label="prefix size",
                                 y_label="percent dominated")
        (out / "domination.svg").write_text(svg, encoding="utf-8")
    tags = list(curves)
    if len(tags) >= 2:
        base = tags[0]
        parity = {}
        for other in tags[1:]:
            slope, intercept, r2 = dom.parity_regression(curves[base],
                                                         curves[other])
            parity[f"{base}->{other}"] = {"gamma": slope,
                                          "intercept": intercept, "r2": r2}
        _write_json(out / "parity.json", parity)
        if args.plot:
            steps = min(len(curves[base].prefix_sizes),
                        *(len(curves[t].prefix_sizes) for t in tags[1:]))
            series = [(f"{base} vs {t}",
                       100.0 * curves[base].covered_fraction[:steps],
                       100.0 * curves[t].covered_fraction[:steps])
                      for t in tags[1:]]
            svg = svgplot.curves_svg(series, title="coverage parity",
                                     x_label=f"percent dominated ({base})",
                                     y_label="percent dominated")
            (out / "parity.svg").write_text(svg, encoding="utf-8")
    for tag, info in sorted(exponents.items()):
        p = info["p"]
        print(f"{tag}: p={'unreached' if p is None else f'{p:.4f}'}")
    return 0


def _cmd_compare(args):
    out = _out_dir(args)
    names = (args.datasets.split(",") if args.datasets
             else [n for n in ds.REGISTRY
                   if (Path(args.data_dir) / ds.REGISTRY[n].filename).exists()])
    if not names:
        raise MalformedInputError(f"no registry datasets found in {args.data_dir}")
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    table = {}
    for name in names:
        spec = ds.REGISTRY[name.strip()]
        loaded = ds.load_dataset(spec, data_dir=args.data_dir,
                                 iterate_filter=args.iterate_filter)
        g = loaded.graph
        _, curves = _strategy_rankings(g, strategies)
        row = {}
        for tag, curve in curves.items():
            try:
                row[tag] = dom.ads_exponent(curve, kappa=args.kappa)
            except dom.CoverageNotReached:
                row[tag] = None
        table[spec.name] = {"n": g.n, "m": g.m, "exponents": row}
        print(f"{spec.name}: " + " ".join(
            f"{t}={'NA' if p is None else f'{p:.3f}'}"
            for t, p in sorted(row.items())))
    _write_json(out / "exponents.json", {"kappa": args.kappa, "datasets": table})
    with open(out / "exponents.csv", "w", encoding="utf-8") as fh:
        tags = sorted({t for row in table.values() for t in row["exponents"]})
        fh.write("dataset," + ",".join(tags) + "\n")
        for name, row in sorted(table.items()):
            cells = ["" if row["exponents"].get(t) is None
                     else f"{row['exponents'][t]:.6f}" for t in tags]
            fh.write(name + "," + ",".join(cells) + "\n")
    return 0


def _cmd_visualize(args):
    out = _out_dir(args)
    g = _load_graph(args.edge_list)
    if args.heights:
        h = _read_heights(args.heights).astype(np.int64)
        heights = HeightAssignment(h, b=2)
    else:
        heights = fitting.fit(g.edges(), g.n, scorer="approx").heights
    svg = svgplot.layered_layout_svg(g, heights, title="hierarchy layout")
    (out / "layout.svg").write_text(svg, encoding="utf-8")
    print(f"wrote {out}/layout.svg")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "fit": _cmd_fit,
    "dominate": _cmd_dominate,
    "compare": _cmd_compare,
    "visualize": _cmd_visualize,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args, parser)
        return _COMMANDS[args.command](args)
    except CliArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (MalformedInputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (fitting.FitFailedError, fitting.FanoutRejected, ModelError,
            logistic.ConvergenceError, logistic.SingularKernelError,
            DisconnectedGraphError, dom.CoverageNotReached, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
