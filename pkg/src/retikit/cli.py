"""Unified command line: subcommand routing, config, seeds, reports.

Layout: ``retikit [global flags] <module> <operation> [flags] [input]``.
Inputs default to stdin (or ``-``); ``-o`` writes atomically via a temp
file.  Every run logs its effective root seed, and rerunning with that seed
and one thread reproduces outputs byte for byte (suppress the timestamp
header with --no-timestamp for byte comparisons).

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import secrets
import sys

import numpy as np

from . import debias, fileio, ingest, netmetrics, synthgen, urnsim
from .counts import CountHistogram
from .distfit import binning as dbin
from .distfit import fitting as dfit
from .distfit import stats as dstats
from .distfit.families import DegenerateDataError
from .graphs import WeightedDigraph
from .seeds import derive_int_seed, derive_rng
from .spamlab import evaluate as spam_eval
from .spamlab import maxflow as spam_flow

logger = logging.getLogger("retikit")

USAGE_ERROR, DATA_ERROR = 1, 2
OUTPUT_DIR_ENV = "RETIKIT_OUTPUT_DIR"


class DataError(Exception):
    """Bad or missing input data; maps to exit code 2."""


# ---------------------------------------------------------------------------
# Parser construction
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retikit",
        description="Microblog activity statistics and retweet-graph analytics.",
    )
    parser.add_argument("--seed", type=int, default=None,
                        help="root seed (default: random, printed for replay)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for sweep-style commands")
    parser.add_argument("--output-dir", default=None,
                        help=f"directory for auxiliary outputs (env {OUTPUT_DIR_ENV})")
    parser.add_argument("--log-level", default="info",
                        choices=["debug", "info", "warning", "error"])
    parser.add_argument("--config", default=None,
                        help="flat key=value defaults file (flags win)")
    parser.add_argument("--figures", action="store_true",
                        help="render a PNG figure beside each delimited output")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp header for byte-stable outputs")

    sub = parser.add_subparsers(dest="module", required=True)

    # -- ingest ---------------------------------------------------------
    p_ing = sub.add_parser("ingest", help="tweet records to histograms/graphs/intervals")
    ing_sub = p_ing.add_subparsers(dest="op", required=True)
    q = ing_sub.add_parser("histogram")
    q.add_argument("--kind", choices=["tweets", "retweets", "retweeted"], required=True)
    _io_args(q)
    q = ing_sub.add_parser("graph")
    _io_args(q)
    q = ing_sub.add_parser("intervals")
    q.add_argument("--bounds", required=True, help="inclusive count ranges a:b,c:d,...")
    _io_args(q)

    # -- debias ----------------------------------------------------------
    p_deb = sub.add_parser("debias", help="population recovery from a thinned sample")
    deb_sub = p_deb.add_subparsers(dest="op", required=True)
    q = deb_sub.add_parser("em")
    q.add_argument("--p", type=float, required=True, help="sampling probability")
    q.add_argument("--tol", type=float, default=debias.DEFAULT_TOL)
    q.add_argument("--max-iter", type=int, default=debias.DEFAULT_MAX_ITER)
    q.add_argument("--support-cap", type=int, default=None,
                   help="override the support cap (default 10x max observed)")
    q.add_argument("--sidecar", default=None, help="JSON diagnostics path")
    _io_args(q)

    # -- distfit -----------------------------------------------------------
    p_fit = sub.add_parser("distfit", help="heavy-tailed fitting and model checks")
    fit_sub = p_fit.add_subparsers(dest="op", required=True)
    q = fit_sub.add_parser("fit")
    q.add_argument("--family", choices=sorted(dfit.FAMILIES), required=True)
    q.add_argument("--x-min", type=float, default=None)
    q.add_argument("--ks-boot", type=int, default=100,
                   help="bootstrap resamples for the KS p-value (0 disables)")
    q.add_argument("--input-kind", choices=["hist", "values"], default=None,
                   help="histogram CSV or one raw value per line (default by family)")
    _io_args(q)
    q = fit_sub.add_parser("bin")
    q.add_argument("--mode", choices=["log", "eqcount"], required=True)
    q.add_argument("--bins-per-decade", type=int, default=10)
    q.add_argument("--bins", type=int, default=20, help="bin count for eqcount mode")
    _io_args(q)
    q = fit_sub.add_parser("hazard")
    q.add_argument("--floor", type=int, default=50, help="minimum survivors per point")
    _io_args(q)
    q = fit_sub.add_parser("collapse")
    q.add_argument("--bins-per-decade", type=int, default=8)
    _io_args(q)

    # -- urnsim ----------------------------------------------------------
    p_urn = sub.add_parser("urnsim", help="preferential-attachment count growth")
    urn_sub = p_urn.add_subparsers(dest="op", required=True)
    q = urn_sub.add_parser("run")
    _urn_args(q)
    q.add_argument("--T", type=int, required=True)
    _io_args(q, input_arg=False)
    q = urn_sub.add_parser("sweep")
    _urn_args(q)
    q.add_argument("--T", required=True, help="comma-separated step counts")
    q.add_argument("--prefix", default="urn", help="output file prefix")
    _io_args(q, input_arg=False, output_arg=False)

    # -- net ---------------------------------------------------------------
    p_net = sub.add_parser("net", help="directed-graph structural metrics")
    net_sub = p_net.add_subparsers(dest="op", required=True)
    for name in ("degrees", "reciprocity", "assort", "cluster"):
        q = net_sub.add_parser(name)
        if name == "cluster":
            q.add_argument("--sampled-alpha", type=float, default=None,
                           help="edge-sampling rate to correct for")
        _io_args(q)
    q = net_sub.add_parser("paths")
    q.add_argument("--sources", type=int, default=1000)
    q.add_argument("--correction-factor", type=float, default=None,
                   help="divide APL by this edge-sampling inflation factor")
    _io_args(q)

    # -- synth ---------------------------------------------------------------
    p_syn = sub.add_parser("synth", help="synthetic scale-free digraphs")
    syn_sub = p_syn.add_subparsers(dest="op", required=True)
    q = syn_sub.add_parser("rmat")
    q.add_argument("--a", type=float, default=synthgen.RETWEET_RMAT[0])
    q.add_argument("--b", type=float, default=synthgen.RETWEET_RMAT[1])
    q.add_argument("--c", type=float, default=synthgen.RETWEET_RMAT[2])
    q.add_argument("--d", type=float, default=synthgen.RETWEET_RMAT[3])
    q.add_argument("--n", type=int, required=True, help="log2 node count")
    q.add_argument("--edges", type=int, required=True)
    _io_args(q, input_arg=False)
    q = syn_sub.add_parser("spam")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--spam-frac", type=float, default=0.10)
    q.add_argument("--benign-density", type=float, required=True)
    q.add_argument("--bs-rate", type=float, required=True)
    q.add_argument("--labels-output", default=None, help="labels TSV path")
    _io_args(q, input_arg=False)

    # -- spam ---------------------------------------------------------------
    p_spam = sub.add_parser("spam", help="connectivity features and classification")
    spam_sub = p_spam.add_subparsers(dest="op", required=True)
    q = spam_sub.add_parser("features")
    q.add_argument("--graph", required=True)
    q.add_argument("--labels", default=None)
    q.add_argument("--root", default="auto",
                   help="'auto' for a random active benign node, or a node id")
    _io_args(q, input_arg=False)
    q = spam_sub.add_parser("sweep")
    q.add_argument("--densities", required=True, help="comma-separated")
    q.add_argument("--bs-rates", required=True, help="comma-separated")
    q.add_argument("--n", type=int, default=13)
    q.add_argument("--folds", type=int, default=10)
    q.add_argument("--roc-dir", default=None, help="write per-cell ROC JSON here")
    _io_args(q, input_arg=False)

    return parser


def _io_args(q: argparse.ArgumentParser, input_arg: bool = True, output_arg: bool = True):
    if input_arg:
        q.add_argument("input", nargs="?", default="-", help="input file or - for stdin")
    if output_arg:
        q.add_argument("-o", "--output", default=None, help="output file (default stdout)")


def _urn_args(q: argparse.ArgumentParser):
    q.add_argument("--A", type=float, default=1.0)
    q.add_argument("--alpha", type=float, default=0.88)
    q.add_argument("--c", type=float, required=True)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = _parse_with_config(parser, argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else USAGE_ERROR

    logging.basicConfig(
        level=getattr(logging, args.log_level.upper()),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.seed is None:
        args.seed = secrets.randbelow(2**31)
    logger.info("seed: %d", args.seed)
    if args.output_dir is None:
        args.output_dir = os.environ.get(OUTPUT_DIR_ENV)

    try:
        handler = _HANDLERS[(args.module, getattr(args, "op", None))]
        handler(args)
        return 0
    except DataError as exc:
        logger.error("%s", exc)
        return DATA_ERROR
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        logger.error("cannot read %s", getattr(exc, "filename", exc))
        return DATA_ERROR
    except (ValueError, DegenerateDataError) as exc:
        logger.error("%s", exc)
        return DATA_ERROR


def main() -> None:
    sys.exit(run())


def _parse_with_config(parser: argparse.ArgumentParser, argv):
    args = parser.parse_args(argv)
    if args.config:
        defaults = {}
        with open(args.config, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, _, value = line.partition("=")
                defaults[key.strip().replace("-", "_")] = value.strip()
        # config supplies defaults; explicit flags win on the re-parse
        parser.set_defaults(**{k: _coerce(v) for k, v in defaults.items()})
        args = parser.parse_args(argv)
    return args


def _coerce(value: str):
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    if value.lower() in ("true", "false"):
        return value.lower() == "true"
    return value


def _read_input(args) -> str:
    path = getattr(args, "input", "-")
    try:
        return fileio.read_text(path)
    except FileNotFoundError:
        raise DataError(f"input file not found: {path}")


def _read_histogram(args) -> CountHistogram:
    hist = CountHistogram.from_csv(_read_input(args))
    if not hist:
        raise DataError(f"no histogram rows in input {getattr(args, 'input', '-')!r}")
    return hist


def _emit_table(args, header, rows, note=None) -> None:
    text = fileio.render_table(header, rows, columns_note=note,
                               timestamp=not args.no_timestamp)
    fileio.emit_text(text, args.output)


def _figure_path(args, stem: str) -> str:
    if getattr(args, "output", None):
        return os.path.splitext(args.output)[0] + ".png"
    base = args.output_dir or "."
    return os.path.join(base, f"{stem}.png")


# -- ingest handlers ---------------------------------------------------------

KIND_MAP = {"tweets": "tweets", "retweets": "retweets_sent", "retweeted": "times_retweeted"}


def _cmd_ingest_histogram(args):
    records = _parse_records(args)
    hist = ingest.build_count_histogram(records, KIND_MAP[args.kind])
    _emit_table(args, ["count", "frequency"], list(hist),
                note="count = items per user; frequency = users with that count")
    if args.figures and hist:
        from . import figures
        figures.plot_histogram(hist, _figure_path(args, f"histogram-{args.kind}"))


def _parse_records(args):
    try:
        return ingest.parse_records(_read_input(args))
    except ValueError as exc:
        raise DataError(str(exc))


def _cmd_ingest_graph(args):
    records = _parse_records(args)
    g = ingest.build_retweet_graph(records)
    fileio.emit_text(g.to_tsv(), args.output)


def _cmd_ingest_intervals(args):
    records = _parse_records(args)
    bounds = ingest.parse_bounds_spec(args.bounds)
    series = ingest.extract_intervals(records, bounds)
    if series.skipped_negative:
        logger.warning("dropped %d negative gaps (clock skew)", series.skipped_negative)
    rows = []
    for gi, (lo, hi, gaps) in enumerate(series.groups):
        for gap in gaps:
            rows.append((gi, lo, hi, int(gap)))
    _emit_table(args, ["group", "lower", "upper", "interval_seconds"], rows,
                note="one row per consecutive-tweet gap; groups by total tweet count")
    if args.figures and any(len(g_) for _, _, g_ in series.groups):
        from . import figures
        from .distfit.stats import scale_collapse
        try:
            collapse = scale_collapse(series, min_intervals=1)
            figures.plot_collapse(collapse.group_densities, _figure_path(args, "intervals"))
        except ValueError:
            pass


# -- debias handlers -----------------------------------------------------------


def _cmd_debias_em(args):
    g = _read_histogram(args)
    cap = args.support_cap or debias.default_support_cap(g, args.p)
    model = debias.ThinningModel(p=args.p, max_count=cap)
    est = debias.em_estimate(g, model, tol=args.tol, max_iter=args.max_iter)
    rows = [(i + 1, float(f)) for i, f in enumerate(est.f_hat) if f > 1e-9]
    _emit_table(args, ["count", "f_hat"], rows,
                note="recovered population frequency per count")
    sidecar = {
        "gamma": est.gamma,
        "iterations": est.iterations,
        "final_delta": est.final_delta,
        "converged": est.converged,
        "loglik": est.loglik,
    }
    if args.sidecar:
        fileio.emit_json(sidecar, args.sidecar)
    else:
        logger.info("em: %s", json.dumps(sidecar, sort_keys=True))
    if args.figures:
        from . import figures
        figures.plot_histogram(est.f_hat_histogram(), _figure_path(args, "debias-em"),
                               title="recovered population")


# -- distfit handlers -----------------------------------------------------------


def _fit_data(args):
    discrete = args.family in ("pl", "dw2")
    kind = args.input_kind or ("hist" if discrete else "values")
    text = _read_input(args)
    if kind == "hist":
        hist = CountHistogram.from_csv(text)
        if not hist:
            raise DataError("no histogram rows in input")
        return hist if discrete else hist.expand().astype(float)
    values = np.array([float(line) for line in text.split() if line.strip()])
    if values.size == 0:
        raise DataError("no values in input")
    if discrete:
        return CountHistogram.from_values(values.astype(int))
    return values


def _cmd_distfit_fit(args):
    data = _fit_data(args)
    try:
        result = dfit.fit_mle(args.family, data, x_min=args.x_min,
                              seed=derive_int_seed(args.seed, "fit"))
    except DegenerateDataError as exc:
        raise DataError(f"degenerate input: {exc}")
    model = result.model
    params = {k: v for k, v in vars(model).items() if not k.startswith("_")} \
        if not hasattr(model, "__dataclass_fields__") else \
        {k: getattr(model, k) for k in model.__dataclass_fields__}
    report = {"family": args.family, "params": params, "loglik": result.loglik}
    if args.ks_boot > 0:
        ks = dstats.ks_test(data, model, n_boot=args.ks_boot,
                            seed=derive_rng(args.seed, "ks-boot"))
        report["ks_D"] = ks.statistic
        report["ks_p"] = ks.p_value
    fileio.emit_json(report, args.output)


def _cmd_distfit_bin(args):
    hist = _read_histogram(args)
    if args.mode == "log":
        binned = dbin.log_bin(hist, args.bins_per_decade)
    else:
        binned = dbin.equal_count_bin(hist, args.bins)
    rows = list(zip(binned.edges[:-1], binned.edges[1:], binned.heights, binned.counts))
    _emit_table(args, ["lo", "hi", "density", "count"], rows,
                note="bin [lo, hi); density integrates to 1")
    if args.figures:
        from . import figures
        figures.plot_binned(binned, _figure_path(args, f"bin-{args.mode}"))


def _cmd_distfit_hazard(args):
    hist = _read_histogram(args)
    x, h = dstats.hazard_empirical(hist, min_survivors=args.floor)
    _emit_table(args, ["count", "hazard"], list(zip(x.astype(int), h)),
                note="probability of stopping at count given survival to it")
    if args.figures and len(x):
        from . import figures
        figures.plot_hazard(x, h, _figure_path(args, "hazard"))


def _cmd_distfit_collapse(args):
    text = _read_input(args)
    groups: dict[int, list[float]] = {}
    bounds: dict[int, tuple[int, int]] = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("group"):
            continue
        gi, lo, hi, gap = line.split(",")
        groups.setdefault(int(gi), []).append(float(gap))
        bounds[int(gi)] = (int(lo), int(hi))
    if not groups:
        raise DataError("no interval rows in input")
    series = ingest.IntervalSeries()
    for gi in sorted(groups):
        arr = np.asarray(groups[gi])
        series.groups.append((*bounds[gi], arr))
        series.group_means.append(float(arr.mean()))
    result = dstats.scale_collapse(series, bins_per_decade=args.bins_per_decade)
    rows = []
    for gi, dens in enumerate(result.group_densities):
        for lo, hi, height, cnt in zip(dens.edges[:-1], dens.edges[1:],
                                       dens.heights, dens.counts):
            rows.append((gi, lo, hi, height, int(cnt)))
    _emit_table(args, ["group", "lo", "hi", "density", "count"], rows,
                note=f"scaled-gap densities; collapse metric {result.metric!r}")
    logger.info("collapse metric: %r", result.metric)
    if args.figures:
        from . import figures
        figures.plot_collapse(result.group_densities, _figure_path(args, "collapse"))


# -- urnsim handlers -----------------------------------------------------------


def _cmd_urnsim_run(args):
    params = urnsim.UrnParams(A=args.A, alpha=args.alpha, c=args.c, T=args.T,
                              seed=derive_int_seed(args.seed, "urnsim"))
    hist = urnsim.simulate(params)
    _emit_table(args, ["count", "frequency"], list(hist),
                note=f"urn counts after T={args.T} steps")
    if args.figures:
        from . import figures
        figures.plot_histogram(hist, _figure_path(args, f"urn-T{args.T}"))


def _cmd_urnsim_sweep(args):
    Ts = [int(t) for t in str(args.T).split(",")]
    base = args.output_dir or "."
    os.makedirs(base, exist_ok=True)
    for i, T in enumerate(Ts):
        params = urnsim.UrnParams(A=args.A, alpha=args.alpha, c=args.c, T=T,
                                  seed=derive_int_seed(args.seed, "urnsim", i))
        hist = urnsim.simulate(params)
        path = os.path.join(base, f"{args.prefix}-T{T}.csv")
        text = fileio.render_table(["count", "frequency"], list(hist),
                                   columns_note=f"urn counts after T={T} steps",
                                   timestamp=not args.no_timestamp)
        fileio.atomic_write_text(path, text)
        logger.info("wrote %s", path)
        if args.figures:
            from . import figures
            figures.plot_histogram(hist, os.path.join(base, f"{args.prefix}-T{T}.png"))


# -- net handlers -----------------------------------------------------------


def _read_graph(args) -> WeightedDigraph:
    g = WeightedDigraph.from_tsv(_read_input(args))
    if g.node_count == 0:
        raise DataError("graph input has no edges")
    return g


def _cmd_net_degrees(args):
    g = _read_graph(args)
    ds = netmetrics.degree_stats(g)
    report = {
        "nodes": g.node_count, "edges": g.edge_count,
        "mean_in": ds.mean_in, "mean_out": ds.mean_out,
        "sd_in": ds.sd_in, "sd_out": ds.sd_out,
        "in_histogram": dict(ds.in_histogram.entries),
        "out_histogram": dict(ds.out_histogram.entries),
    }
    fileio.emit_json(report, args.output)
    if args.figures:
        from . import figures
        figures.plot_degree_histograms(ds.in_histogram, ds.out_histogram,
                                       _figure_path(args, "degrees"))


def _cmd_net_reciprocity(args):
    g = _read_graph(args)
    fileio.emit_json({"reciprocity": netmetrics.reciprocity(g),
                      "edges": g.edge_count}, args.output)


def _cmd_net_assort(args):
    g = _read_graph(args)
    fileio.emit_json(netmetrics.assortativity(g).as_dict(), args.output)


def _cmd_net_cluster(args):
    g = _read_graph(args)
    report = netmetrics.clustering(g)
    if args.sampled_alpha:
        report = netmetrics.clustering_estimator(report, args.sampled_alpha)
    out = report.as_dict()
    out["triplets"] = {k: list(v) for k, v in report.triplets.items()}
    fileio.emit_json(out, args.output)


def _cmd_net_paths(args):
    g = _read_graph(args)
    sources = min(args.sources, g.node_count)
    dist = netmetrics.path_length_distribution(
        g, sources, seed=derive_rng(args.seed, "paths"))
    report = {
        "apl": dist.apl,
        "effective_diameter": dist.effective_diameter,
        "sources": dist.sources,
        "unreachable": dist.unreachable,
        "histogram": {str(k): v for k, v in sorted(dist.histogram.items())},
    }
    if args.correction_factor:
        report["apl_corrected"] = netmetrics.apl_correction(dist.apl, args.correction_factor)
    fileio.emit_json(report, args.output)


# -- synth handlers -----------------------------------------------------------


def _cmd_synth_rmat(args):
    params = synthgen.RmatParams(a=args.a, b=args.b, c=args.c, d=args.d,
                                 n=args.n, edges=args.edges)
    g = synthgen.rmat_generate(params, derive_rng(args.seed, "rmat"))
    fileio.emit_text(g.to_tsv(), args.output)


def _cmd_synth_spam(args):
    spec = synthgen.SpamGraphSpec(
        n=args.n, spam_fraction=args.spam_frac,
        benign_density=args.benign_density, bs_rate=args.bs_rate,
        seed=derive_int_seed(args.seed, "spam-graph"),
    )
    sg = synthgen.spam_graph_generate(spec)
    fileio.emit_text(sg.graph.to_tsv(), args.output)
    labels_path = args.labels_output
    if labels_path is None and args.output:
        labels_path = os.path.splitext(args.output)[0] + "-labels.tsv"
    if labels_path:
        lines = [f"{node}\t{label}" for node, label in sorted(sg.labels.items())]
        fileio.atomic_write_text(labels_path, "\n".join(lines) + "\n")
        logger.info("wrote labels to %s", labels_path)


# -- spam handlers -----------------------------------------------------------


def _cmd_spam_features(args):
    try:
        g = WeightedDigraph.from_tsv(fileio.read_text(args.graph), int_labels=True)
    except FileNotFoundError:
        raise DataError(f"graph file not found: {args.graph}")
    labels = None
    if args.labels:
        labels = {}
        try:
            text = fileio.read_text(args.labels)
        except FileNotFoundError:
            raise DataError(f"labels file not found: {args.labels}")
        for line in text.splitlines():
            if line.strip():
                node, label = line.split("\t")
                if int(node) in g:  # isolated nodes never enter an edge list
                    labels[g.index_of(int(node))] = label
    if args.root == "auto":
        rng = derive_rng(args.seed, "root-choice")
        candidates = [
            v for v in range(g.node_count)
            if g.out_degree(v) > 0 and (labels is None or labels.get(v) == "benign")
        ]
        if not candidates:
            raise DataError("no eligible root (need an active benign node)")
        root = int(rng.choice(candidates))
    else:
        root = g.index_of(int(args.root))
    feats = spam_flow.features_from_root(g, root, labels=labels)
    rows = [
        (g.label_of(f.node),
         "" if f.distance is None else f.distance,
         f.maxflow,
         f.label or "")
        for f in feats
    ]
    _emit_table(args, ["node", "distance", "maxflow", "label"], rows,
                note=f"features from root {g.label_of(root)}; blank distance = unreachable")


def _cmd_spam_sweep(args):
    densities = [float(x) for x in args.densities.split(",")]
    bs_rates = [float(x) for x in args.bs_rates.split(",")]
    results = spam_eval.sweep(densities, bs_rates, n=args.n,
                              seed=derive_int_seed(args.seed, "sweep"),
                              folds=args.folds, threads=max(args.threads, 1))
    rows = [
        (r.benign_density, r.bs_rate, r.tpr, r.fpr, r.threshold, r.n_nodes, r.seed)
        for r in results
    ]
    _emit_table(
        args,
        ["benign_density", "bs_rate", "tpr", "fpr", "threshold", "n_nodes", "seed"],
        rows,
        note="ROC knee per sweep cell (spam = positive class)",
    )
    if args.roc_dir:
        os.makedirs(args.roc_dir, exist_ok=True)
        for r in results:
            path = os.path.join(
                args.roc_dir, f"roc-d{r.benign_density:g}-b{r.bs_rate:g}.json"
            )
            fileio.emit_json([list(p) for p in r.roc], path)
    if args.figures and results:
        from . import figures
        figures.plot_sweep(results, _figure_path(args, "sweep"))


_HANDLERS = {
    ("ingest", "histogram"): _cmd_ingest_histogram,
    ("ingest", "graph"): _cmd_ingest_graph,
    ("ingest", "intervals"): _cmd_ingest_intervals,
    ("debias", "em"): _cmd_debias_em,
    ("distfit", "fit"): _cmd_distfit_fit,
    ("distfit", "bin"): _cmd_distfit_bin,
    ("distfit", "hazard"): _cmd_distfit_hazard,
    ("distfit", "collapse"): _cmd_distfit_collapse,
    ("urnsim", "run"): _cmd_urnsim_run,
    ("urnsim", "sweep"): _cmd_urnsim_sweep,
    ("net", "degrees"): _cmd_net_degrees,
    ("net", "reciprocity"): _cmd_net_reciprocity,
    ("net", "assort"): _cmd_net_assort,
    ("net", "cluster"): _cmd_net_cluster,
    ("net", "paths"): _cmd_net_paths,
    ("synth", "rmat"): _cmd_synth_rmat,
    ("synth", "spam"): _cmd_synth_spam,
    ("spam", "features"): _cmd_spam_features,
    ("spam", "sweep"): _cmd_spam_sweep,
}


if __name__ == "__main__":
    main()
