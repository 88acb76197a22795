"""Command-line interface.

Subcommands:
  solve    run one algorithm on one instance and print the result
  bound    print the three upper bounds for an instance and budget
  gen      write generated instance files
  bench    config-driven sweep writing CSV/JSON/markdown (and figures)
  profile  echo-chamber / degree / PageRank profile of selected nodes

Exit codes: 0 success, 2 parse/usage error, 3 infeasible or unsupported
instance, 4 timeout with a usable incumbent.
"""

import argparse
import json
import os
import sys

from .bench import (
    ALGORITHMS,
    RunConfig,
    resolve_k,
    run_benchmark,
    write_csv,
    write_json,
    write_markdown,
)
from .bounds import compute_bounds
from .datafiles import load_instance, write_instance
from .errors import (
    DimensionTooLargeError,
    DivmaxError,
    InvalidProbabilityError,
    NonPositiveInputError,
    ParseError,
    SearchSpaceTooLargeError,
    UnknownNodeError,
    UnsupportedCostsError,
)
from .generators import gen_random_exposure, gen_subsetsum, gen_two_community
from .graph import Instance, build_objective
from .karate import karate_instance

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_UNSUPPORTED = 3
EXIT_TIMEOUT = 4


def _instance_options(parser):
    parser.add_argument("--karate", action="store_true",
                        help="use the embedded karate-club fixture")
    parser.add_argument("--edges", help="edge-list file (src dst [weight])")
    parser.add_argument("--exposure", help="exposure file (node +/-1)")
    parser.add_argument("--costs", help="optional cost file (node cost)")
    parser.add_argument("--two-community", metavar="N,P_IN,P_OUT[,SEED]",
                        help="generate a two-community instance")
    parser.add_argument("--subset-sum", metavar="M1,M2,...:TARGET",
                        help="generate a subset-sum reduction instance")
    parser.add_argument("--random-exposure", type=int, metavar="SEED",
                        default=None,
                        help="resample exposure uniformly at random")


def _parse_instance_spec(spec: str) -> Instance:
    """Instance spec strings used by bench configs.

    karate | karate-d:SEED | two-community:N:P_IN:P_OUT[:SEED]
    | subset-sum:M1,M2,...:TARGET | files:EDGES:EXPOSURE[:COSTS]
    """
    parts = spec.split(":")
    kind = parts[0]
    if kind == "karate":
        return karate_instance(0.0)
    if kind == "karate-d":
        seed = int(parts[1]) if len(parts) > 1 else 0
        return gen_random_exposure(karate_instance(0.0), seed=seed)
    if kind == "two-community":
        n, p_in, p_out = int(parts[1]), float(parts[2]), float(parts[3])
        seed = int(parts[4]) if len(parts) > 4 else 0
        return gen_two_community(n, p_in, p_out, seed=seed)
    if kind == "subset-sum":
        items = [int(tok) for tok in parts[1].split(",")]
        return gen_subsetsum(items, int(parts[2]))
    if kind == "files":
        cost = parts[3] if len(parts) > 3 else None
        return load_instance(parts[1], parts[2], cost)
    raise ParseError(f"unknown instance spec {spec!r}")


def _build_instance(args) -> Instance:
    sources = [bool(args.karate), bool(args.edges), bool(args.two_community),
               bool(args.subset_sum)]
    if sum(sources) != 1:
        raise ParseError("choose exactly one instance source "
                         "(--karate, --edges, --two-community, --subset-sum)")
    if args.karate:
        inst = karate_instance(0.0)
    elif args.edges:
        if not args.exposure:
            raise ParseError("--edges requires --exposure")
        inst = load_instance(args.edges, args.exposure, args.costs)
    elif args.two_community:
        fields = args.two_community.split(",")
        n, p_in, p_out = int(fields[0]), float(fields[1]), float(fields[2])
        seed = int(fields[3]) if len(fields) > 3 else 0
        inst = gen_two_community(n, p_in, p_out, seed=seed)
    else:
        items_text, target_text = args.subset_sum.split(":")
        inst = gen_subsetsum([int(t) for t in items_text.split(",")], int(target_text))
    if args.random_exposure is not None:
        inst = gen_random_exposure(inst, seed=args.random_exposure)
    return inst


def _with_budget(inst: Instance, k_spec: str) -> Instance:
    k = resolve_k(k_spec, inst.n)
    return Instance(inst.graph, inst.exposure, inst.costs, k, node_ids=inst.node_ids)


def _report_payload(report, inst):
    return {
        "algorithm": report.algorithm,
        "selection": list(report.selection.indices),
        "selection_labels": (
            [inst.node_ids[i] for i in report.selection.indices]
            if inst.node_ids else None
        ),
        "gain": report.gain,
        "value_normalized": report.value_normalized,
        "value_raw": report.value_raw,
        "cost": report.selection.cost,
        "budget": inst.budget,
        "bound": report.bound,
        "bound_normalized": report.bound_normalized,
        "residuals": report.residuals,
        "proven": report.proven,
        "seed": report.seed,
        "runtime_s": report.runtime_s,
    }


def _cmd_solve(args) -> int:
    inst = _with_budget(_build_instance(args), args.k)
    objective = build_objective(inst.graph, inst.exposure)
    from .bench import _run_algorithm

    cfg = RunConfig(instances=[], iterations=args.iterations,
                    samples=args.samples, polish=args.polish,
                    time_limit=args.time_limit, bound_kind=args.bound_kind)
    report = _run_algorithm(args.algorithm, inst, objective, cfg, args.seed)
    payload = _report_payload(report, inst)
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"algorithm : {report.algorithm}")
        print(f"k         : {inst.budget:g}   (resolved from {args.k!r})")
        print(f"selection : {list(report.selection.indices)}")
        print(f"gain      : {report.gain:g}")
        print(f"value     : {report.value_normalized:g} normalized "
              f"({report.value_raw:g} raw)")
        if report.bound is not None:
            print(f"bound     : {report.bound:g} gain-units "
                  f"({report.bound_normalized:g} normalized)")
        if report.residuals:
            print(f"residuals : {report.residuals}")
        if report.proven is not None:
            print(f"proven    : {report.proven}")
    if report.proven is False and args.time_limit is not None:
        return EXIT_TIMEOUT
    return EXIT_OK


def _cmd_bound(args) -> int:
    inst = _with_budget(_build_instance(args), args.k)
    objective = build_objective(inst.graph, inst.exposure)
    br = compute_bounds(objective, inst.budget, costs=inst.costs)
    eta_norm = inst.eta() / 4.0
    payload = {
        "k": inst.budget,
        "eigen": br.eigen_bound,
        "gersh": br.gersh_bound,
        "rowsum": br.rowsum_bound,
        "eigen_normalized": eta_norm + br.eigen_bound,
        "gersh_normalized": eta_norm + br.gersh_bound,
        "rowsum_normalized": eta_norm + br.rowsum_bound,
        "lambda_max_estimate": br.lambda_max_estimate,
        "power_iterations": br.power_iters_used,
        "eigen_converged": br.eigen_converged,
    }
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for key, val in payload.items():
            print(f"{key:20s}: {val}")
    return EXIT_OK


def _cmd_gen(args) -> int:
    inst = _build_instance(args)
    os.makedirs(os.path.dirname(os.path.abspath(args.out)), exist_ok=True)
    edge_path = args.out + ".edges"
    exposure_path = args.out + ".exposure"
    cost_path = args.out + ".costs" if not inst.unit_costs() else None
    write_instance(inst, edge_path, exposure_path, cost_path)
    written = [edge_path, exposure_path] + ([cost_path] if cost_path else [])
    print("\n".join(written))
    return EXIT_OK


def _read_config(path) -> dict:
    """Flat key = value config; '#' comments; later keys override earlier."""
    config = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"expected 'key = value', got {line!r}", line=lineno)
            key, value = line.split("=", 1)
            config[key.strip()] = value.strip()
    return config


def _split_list(text: str):
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def _cmd_bench(args) -> int:
    config = _read_config(args.config) if args.config else {}

    def pick(flag, key, default=None):
        return flag if flag is not None else config.get(key, default)

    instance_specs = pick(args.instances, "instances")
    if instance_specs is None:
        raise ParseError("bench needs instances (flag --instances or config key)")
    if isinstance(instance_specs, str):
        instance_specs = _split_list(instance_specs)
    algorithms = pick(args.algorithms, "algorithms", "s-greedy,i-greedy")
    if isinstance(algorithms, str):
        algorithms = _split_list(algorithms)
    k_specs = pick(args.k, "k", "0.1n")
    if isinstance(k_specs, str):
        k_specs = _split_list(k_specs)
    seeds = pick(args.seeds, "seeds", "1")
    if isinstance(seeds, str):
        seeds = [int(s) for s in _split_list(seeds)]
    formats = pick(args.format, "format", "csv")
    if isinstance(formats, str):
        formats = _split_list(formats)
    out_dir = pick(args.out, "out", "results")
    iterations = int(pick(args.iterations, "iterations", 100))
    samples = int(pick(args.samples, "samples", 100))
    polish = _as_bool(pick(None if args.polish is None else str(args.polish),
                           "polish", "true"))
    include_runtime = _as_bool(pick(
        None if args.runtime is None else str(args.runtime), "runtime", "true"))
    figures = _as_bool(pick(None if args.figures is None else str(args.figures),
                            "figures", "false"))
    time_limit = pick(args.time_limit, "time_limit")
    time_limit = float(time_limit) if time_limit is not None else None
    bound_kind = pick(args.bound_kind, "bound_kind", "rowsum")
    if bound_kind == "none":
        bound_kind = None

    instances = [(spec, _parse_instance_spec(spec)) for spec in instance_specs]
    cfg = RunConfig(
        instances=instances,
        algorithms=algorithms,
        k_specs=k_specs,
        seeds=seeds,
        iterations=iterations,
        samples=samples,
        polish=polish,
        time_limit=time_limit,
        bound_kind=bound_kind,
        include_runtime=include_runtime,
    )
    rows, meta = run_benchmark(cfg)
    os.makedirs(out_dir, exist_ok=True)
    written = []
    if "csv" in formats:
        path = os.path.join(out_dir, "report.csv")
        write_csv(rows, meta, path)
        written.append(path)
    if "json" in formats:
        path = os.path.join(out_dir, "report.json")
        write_json(rows, meta, path)
        written.append(path)
    if "md" in formats or "markdown" in formats:
        path = os.path.join(out_dir, "report.md")
        write_markdown(rows, meta, path)
        written.append(path)
    if figures:
        from .figures import render_all
        written.extend(render_all(rows, out_dir))
    print("\n".join(written))
    failures = [row for row in rows if row.get("error")]
    if failures:
        print(f"{len(failures)} row(s) failed; see the error column", file=sys.stderr)
        return EXIT_UNSUPPORTED
    return EXIT_OK


def _as_bool(text) -> bool:
    if isinstance(text, bool):
        return text
    return str(text).strip().lower() in ("1", "true", "yes", "on")


def _cmd_profile(args) -> int:
    inst = _with_budget(_build_instance(args), args.k)
    objective = build_objective(inst.graph, inst.exposure)
    if args.nodes:
        selection = [int(t) for t in _split_list(args.nodes)]
    else:
        from .bench import _run_algorithm
        cfg = RunConfig(instances=[], iterations=args.iterations,
                        samples=args.samples, polish=args.polish)
        report = _run_algorithm(args.algorithm, inst, objective, cfg, args.seed)
        selection = list(report.selection.indices)
    from .profiling import node_profile
    profiles = node_profile(inst, selection)
    if args.json:
        print(json.dumps([vars(p) for p in profiles], indent=2, sort_keys=True))
    else:
        print(f"{'node':>6} {'echo':>5} {'deg':>5} {'pagerank':>10} "
              f"{'r_echo':>6} {'r_deg':>6} {'r_pr':>6}")
        for p in profiles:
            label = inst.node_ids[p.node] if inst.node_ids else p.node
            print(f"{label!s:>6} {p.echo_chamber:>5} {p.degree:>5} "
                  f"{p.pagerank:>10.6f} {p.echo_rank:>6} {p.degree_rank:>6} "
                  f"{p.pagerank_rank:>6}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divmax",
        description="Diversity maximization on social graphs: solvers, bounds, and benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run one algorithm on one instance")
    _instance_options(solve)
    solve.add_argument("--algorithm", choices=ALGORITHMS, default="i-greedy")
    solve.add_argument("--k", default="0.1n", help="budget: number, 'n', or fraction like 0.1n")
    solve.add_argument("--seed", type=int, default=1)
    solve.add_argument("--iterations", type=int, default=100)
    solve.add_argument("--samples", type=int, default=100)
    solve.add_argument("--polish", dest="polish", action="store_true", default=True)
    solve.add_argument("--no-polish", dest="polish", action="store_false")
    solve.add_argument("--time-limit", type=float, default=None)
    solve.add_argument("--bound-kind", choices=["eigen", "gersh", "rowsum", "none"],
                       default="gersh")
    solve.add_argument("--json", action="store_true")
    solve.set_defaults(func=_cmd_solve)

    bound = sub.add_parser("bound", help="instance-specific upper bounds")
    _instance_options(bound)
    bound.add_argument("--k", default="0.1n")
    bound.add_argument("--json", action="store_true")
    bound.set_defaults(func=_cmd_bound)

    gen = sub.add_parser("gen", help="write generated instance files")
    _instance_options(gen)
    gen.add_argument("--out", required=True, help="output path prefix")
    gen.set_defaults(func=_cmd_gen)

    bench = sub.add_parser("bench", help="config-driven benchmark sweep")
    bench.add_argument("--config", help="flat key = value config file")
    bench.add_argument("--instances", help="comma-separated instance specs")
    bench.add_argument("--algorithms", help="comma-separated algorithm names")
    bench.add_argument("--k", help="comma-separated budget specs")
    bench.add_argument("--seeds", help="comma-separated seeds")
    bench.add_argument("--format", help="comma-separated: csv,json,md")
    bench.add_argument("--out", help="output directory")
    bench.add_argument("--iterations", type=int, default=None)
    bench.add_argument("--samples", type=int, default=None)
    bench.add_argument("--polish", type=str, default=None)
    bench.add_argument("--runtime", type=str, default=None,
                       help="false zeroes the runtime column for byte-stable reruns")
    bench.add_argument("--figures", type=str, default=None)
    bench.add_argument("--time-limit", type=float, default=None)
    bench.add_argument("--bound-kind", choices=["eigen", "gersh", "rowsum", "none"],
                       default=None)
    bench.set_defaults(func=_cmd_bench)

    profile = sub.add_parser("profile", help="echo chamber / degree / PageRank profile")
    _instance_options(profile)
    profile.add_argument("--k", default="0.1n")
    profile.add_argument("--nodes", help="comma-separated node indices to profile")
    profile.add_argument("--algorithm", choices=ALGORITHMS, default="i-greedy")
    profile.add_argument("--seed", type=int, default=1)
    profile.add_argument("--iterations", type=int, default=100)
    profile.add_argument("--samples", type=int, default=100)
    profile.add_argument("--polish", dest="polish", action="store_true", default=True)
    profile.add_argument("--json", action="store_true")
    profile.set_defaults(func=_cmd_profile)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "bound_kind", None) == "none":
        args.bound_kind = None
    try:
        return args.func(args)
    except (ParseError, UnknownNodeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UnsupportedCostsError, DimensionTooLargeError, SearchSpaceTooLargeError,
            InvalidProbabilityError, NonPositiveInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except DivmaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED


if __name__ == "__main__":
    sys.exit(main())
