"""Command line entry point: ``rainbowtree <subcommand>``."""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from .experiments import (
    ExperimentConfig,
    run_experiment,
    run_lemma_experiment,
    write_rows,
)
from .graph_model import Graph, HostSpec, build_host, edge_connectivity, read_graph, write_graph
from .rainbow_engine import (
    connect_forest_components,
    has_rainbow_spanning_tree,
    max_rainbow_forest_exact,
    schrijver_suzuki_decide,
)
from .random_model import (
    ModelParams,
    RandomStream,
    build_exposure_stack,
    flatten,
    read_colored,
    write_colored,
)

log = logging.getLogger(__name__)


@contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def parse_host(text: str, seed: int = 0) -> Graph:
    """Host from a file path or a host string.

    Host strings: ``complete:N``, ``circulant:N:o1,o2,...``,
    ``circulant:N:d=D`` (consecutive offsets), ``random-regular:N:D``.
    """
    path = Path(text)
    if path.exists():
        with path.open() as fh:
            return read_graph(fh)
    family, _, rest = text.partition(":")
    parts = rest.split(":")
    n = int(parts[0])
    if family == "complete":
        return build_host(HostSpec("complete", n))
    if family == "circulant":
        arg = parts[1]
        if arg.startswith("d="):
            return build_host(HostSpec.circulant_with_degree(n, int(arg[2:])))
        return build_host(HostSpec("circulant", n, offsets=tuple(int(x) for x in arg.split(","))))
    if family == "random-regular":
        return build_host(HostSpec("random-regular", n, int(parts[1])), RandomStream(seed, 0))
    raise SystemExit(f"cannot parse host {text!r}")


def cmd_gen(args) -> int:
    g = parse_host(args.host, args.seed)
    with _output(args.out) as fh:
        write_graph(g, fh)
    if args.report:
        print(f"n={g.n} m={g.m} d={g.degree(0) if g.n else 0} lambda={edge_connectivity(g)}", file=sys.stderr)
    return 0


def _params(g: Graph, args) -> ModelParams:
    params = ModelParams(
        n=g.n, d=g.degree(0), epsilon=args.epsilon, coeff=args.coeff, palette_size=args.palette
    )
    log.info(
        "p=%.6g, %d sparse layers, p + sum s_t = %.6g vs (2+eps) ln n / d = %.6g",
        params.p, len(params.sparse_indices()), params.inclusion_mass(), params.inclusion_bound(),
    )
    return params


def cmd_sample(args) -> int:
    g = parse_host(args.host, args.seed)
    stack = build_exposure_stack(g, _params(g, args), args.seed)
    with _output(args.out) as fh:
        write_colored(flatten(stack), fh)
    return 0


def cmd_decide(args) -> int:
    with open(args.input) as fh:
        cg = read_colored(fh)
    size = len(max_rainbow_forest_exact(cg))
    exact = size == cg.n - 1
    if args.oracle in ("schrijver", "both"):
        ss = schrijver_suzuki_decide(cg)
        if args.oracle == "both" and ss != exact:
            print(f"oracles disagree: exact={exact} schrijver={ss}", file=sys.stderr)
            return 2
        verdict = ss
    else:
        verdict = exact
    with _output(args.out) as fh:
        fh.write(f"RAINBOW_ST: {'yes' if verdict else 'no'}, max_forest: {size}\n")
    return 0


def cmd_pipeline(args) -> int:
    g = parse_host(args.host, args.seed)
    stack = build_exposure_stack(g, _params(g, args), args.seed)
    result = connect_forest_components(stack)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write("t, action, sigma, J, chosen_j\n")
            for step in result.trace:
                fh.write(step.line() + "\n")
    exact = has_rainbow_spanning_tree(flatten(stack))
    with _output(args.out) as fh:
        fh.write(
            f"status={result.status} reason={result.reason or '-'} "
            f"initial_forest={result.initial_forest_size} final_forest={len(result.forest)} "
            f"iterations={result.iterations} max_J={result.max_J} exact_rst={int(exact)}\n"
        )
    return 0


def _load_config(args) -> ExperimentConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = ExperimentConfig.from_text(fh.read())
    else:
        cfg = ExperimentConfig()
    if args.mode:
        cfg.mode = args.mode
    if args.host_family:
        cfg.host_family = args.host_family
    if args.degree_ratio is not None:
        cfg.degree_ratio = args.degree_ratio
    if args.n:
        cfg.n_list = args.n
    if args.coeff:
        cfg.coeff_list = args.coeff
    if args.trials is not None:
        cfg.trials = args.trials
    if args.seed is not None:
        cfg.master_seed = args.seed
    if args.threads is not None:
        cfg.threads = args.threads
    if args.palette is not None:
        cfg.palette = str(args.palette)
    cfg.validate()
    return cfg


def cmd_experiment(args) -> int:
    cfg = _load_config(args)
    rows = run_experiment(cfg)
    with _output(args.out or cfg.output_path) as fh:
        write_rows(rows, fh)
    return 0


def cmd_check_lemmas(args) -> int:
    cfg = _load_config(args)
    cfg.mode = "lemma"
    rows, _ = run_lemma_experiment(cfg, args.lemma)
    with _output(args.out or cfg.output_path) as fh:
        write_rows(rows, fh)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--out", default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="rainbowtree", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="write a host graph")
    p.add_argument("--host", required=True)
    p.add_argument("--report", action="store_true", help="print n, m, d and lambda to stderr")
    p.set_defaults(func=cmd_gen)

    for name, func, text in (
        ("sample", cmd_sample, "sample and write the flattened colored union G'"),
        ("pipeline", cmd_pipeline, "run the component-connecting driver on one instance"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--host", required=True)
        p.add_argument("--epsilon", type=float, default=0.5)
        p.add_argument("--coeff", type=float, default=None, help="total coefficient, overrides 2+epsilon")
        p.add_argument("--palette", type=int, default=None)
        if name == "pipeline":
            p.add_argument("--trace", default=None)
        p.set_defaults(func=func)

    p = sub.add_parser("decide", parents=[common], help="decide rainbow spanning tree existence")
    p.add_argument("input")
    p.add_argument("--oracle", choices=("exact", "schrijver", "both"), default="exact")
    p.set_defaults(func=cmd_decide)

    for name, func in (("experiment", cmd_experiment), ("check-lemmas", cmd_check_lemmas)):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--config", default=None)
        p.add_argument("--mode", choices=("exact_threshold", "pipeline", "lemma"), default=None)
        p.add_argument("--host-family", choices=("complete", "circulant", "random-regular"), default=None)
        p.add_argument("--degree-ratio", type=float, default=None)
        p.add_argument("--n", type=int, action="append")
        p.add_argument("--coeff", type=float, action="append", help="c (threshold) or epsilon (pipeline)")
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--palette", default=None)
        if name == "check-lemmas":
            p.add_argument("--lemma", choices=("cuts", "straddle", "colorhit", "all"), default="all")
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "seed", None) is None and args.command in ("gen", "sample", "pipeline"):
        args.seed = 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
