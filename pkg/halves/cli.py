"""
Command-line surface. Every subcommand prints one JSON report on stdout (except
`gen` without -o, which prints the edge list) and returns the exit code of the
error class it ended with.
"""

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from common.config import load_config, select
from common.logger import get_logger, set_log_level

from .approximation import check_eps_approximation
from .construction import run_min_degree_pipeline
from .errors import (
    FatalFindingError,
    HalvesError,
    InconsistentInputError,
    LemmaViolationError,
    PipelineFailureError,
    ResourceLimitError,
    UsageError,
)
from .experiments import SUITES, run_suites, write_csv
from .fd_family import fd_fact_check, is_entwined, star_extension
from .formats import format_edge_list, generate, load_graph, read_partition, write_edge_list
from .graph import Partition, degree_profile, find_triangle, maximality_class, maximum_independent_sets
from .homomorphism import build_disturbed_pair, find_homomorphism, verify_disturbed
from .lemmas import VerifierSettings, reference_values, search_worst
from .oracle import conjecture_check, min_half_edges
from .rational import format_fraction, parse_fraction
from .reports import (
    ApproxReport,
    CheckReport,
    ClassifyReport,
    DegreeSummary,
    DisturbedSummary,
    ErrorReport,
    FdFactSummary,
    GeneratedGraph,
    HalfReport,
    IndependenceSummary,
    KeevashSudakovSummary,
    LemmaReport,
    MaximalitySummary,
    OracleReport,
    OracleSummary,
    PipelineSummary,
    PipelineTestReport,
    StarSummary,
    SuiteSummary,
    dump,
)
from .trichotomy import DELTA_DIVISOR, classify_trichotomy, keevash_sudakov_conditions
from .types import HalfMethod, LemmaTarget

logger = get_logger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _rational(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except HalvesError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def build_parser() -> ArgumentParser:
    shared = ArgumentParser(add_help=False)
    shared.add_argument("--config", default=None, help="YAML config (default configs/default.yaml)")
    shared.add_argument("--threads", type=int, default=None, help="Worker threads; results do not depend on it")
    shared.add_argument(
        "--any-solution", action="store_true", help="Accept any homomorphism instead of the lexicographically first"
    )

    parser = ArgumentParser(prog="halves", description="Sparse halves of triangle-free graphs")
    commands = parser.add_subparsers(dest="command", parser_class=ArgumentParser)
    commands.required = True

    gen = commands.add_parser("gen", parents=[shared], help="Emit a named graph as an edge list")
    gen.add_argument("name")
    gen.add_argument("-o", "--output", default=None)

    check = commands.add_parser("check", parents=[shared], help="Structural predicates of a graph")
    check.add_argument("graph")
    check.add_argument("--triangle-free", action="store_true")
    check.add_argument("--maximality", action="store_true")
    check.add_argument("--degrees", action="store_true")
    check.add_argument("--mis", action="store_true")
    check.add_argument("--entwined", action="store_true")
    check.add_argument("--star", action="store_true")
    check.add_argument("--conjecture", action="store_true")
    check.add_argument("--keevash-sudakov", action="store_true")
    check.add_argument("--fd-facts", type=int, default=None, metavar="D")

    find_half = commands.add_parser("find-half", parents=[shared], help="A sparse half by pipeline, oracle or both")
    find_half.add_argument("graph")
    find_half.add_argument("--method", choices=[m.value for m in HalfMethod], default=HalfMethod.pipeline.value)

    oracle = commands.add_parser("oracle", parents=[shared], help="Exact minimum edges over ⌊n/2⌋-sets")
    oracle.add_argument("graph")

    approx = commands.add_parser("approx", parents=[shared], help="Distance to a template blowup")
    approx.add_argument("graph")
    approx.add_argument("--template", required=True)
    approx.add_argument("--partition", default=None)
    approx.add_argument("--delta", type=_rational, default=None)
    approx.add_argument("--eps", type=_rational, default=None)

    classify = commands.add_parser("classify", parents=[shared], help="C5 trichotomy outcome")
    classify.add_argument("graph")
    classify.add_argument("--eps", type=_rational, required=True)
    classify.add_argument("--delta", type=_rational, default=None)

    verify = commands.add_parser("verify-lemma", parents=[shared], help="Falsification search")
    verify.add_argument("target", choices=[t.value for t in LemmaTarget])
    verify.add_argument("--budget", type=int, required=True)
    verify.add_argument("--seed", type=int, required=True)

    suites = commands.add_parser("pipeline-test", parents=[shared], help="Acceptance property suites")
    suites.add_argument("--suite", choices=SUITES + ["all"], default="all")
    suites.add_argument("--seed", type=int, required=True)
    suites.add_argument("--csv", default=None)
    return parser


def _conjecture(g, config, threads):
    return conjecture_check(
        g,
        threads=threads,
        max_exhaustive=select(config, "guards.oracle_exhaustive_max_vertices", 30),
        max_vertices=select(config, "guards.oracle_max_vertices", 40),
    )


def cmd_gen(args, config, threads):
    g = generate(args.name)
    if args.output is None:
        sys.stdout.write(format_edge_list(g))
        return None
    write_edge_list(g, args.output)
    return GeneratedGraph(command="gen", name=args.name, n=g.n, m=g.m, path=args.output)


def cmd_check(args, config, threads):
    g = load_graph(args.graph)
    mis_limit = select(config, "guards.mis_max_vertices", 64)
    selected = [
        args.triangle_free,
        args.maximality,
        args.degrees,
        args.mis,
        args.entwined,
        args.star,
        args.conjecture,
        args.keevash_sudakov,
    ]
    if not any(selected) and args.fd_facts is None:
        args.triangle_free = args.degrees = True
    report = CheckReport(command="check", n=g.n, m=g.m)
    if args.triangle_free:
        triangle = find_triangle(g)
        report.triangle_free = triangle is None
        report.triangle = list(triangle) if triangle else None
    if args.maximality:
        result = maximality_class(g)
        report.maximality = MaximalitySummary(is_maximal=result.is_maximal, c_star=format_fraction(result.c_star))
    if args.degrees:
        report.degrees = DegreeSummary(**degree_profile(g)._asdict())
    if args.mis:
        sets = maximum_independent_sets(g, mis_limit)
        report.mis = IndependenceSummary(
            alpha=len(sets[0]) if sets else 0, count=len(sets), sets=[list(s) for s in sets]
        )
    if args.entwined:
        report.entwined = is_entwined(g, mis_limit)
    if args.star:
        star = star_extension(g, mis_limit)
        report.star = StarSummary(
            base_vertices=g.n, added=[list(s) for s in star.added_sets], entwined=is_entwined(g, mis_limit)
        )
    if args.conjecture:
        conjecture = _conjecture(g, config, threads)
        report.conjecture = OracleSummary(
            min_edges=conjecture.min_edges,
            bound=format_fraction(conjecture.bound),
            tight=conjecture.tight,
            holds=conjecture.holds,
            witness=list(conjecture.witness),
            mode="branch",
        )
    if args.keevash_sudakov:
        ks = keevash_sudakov_conditions(g)
        report.keevash_sudakov = KeevashSudakovSummary(**ks._asdict(), applies=ks.applies)
    if args.fd_facts is not None:
        facts = fd_fact_check(args.fd_facts, select(config, "guards.fd_fact_max_d", 9))
        report.fd_facts = FdFactSummary(
            d=facts.d,
            triangle_free=facts.triangle_free,
            three_colorable=facts.three_colorable,
            alpha=facts.alpha,
            maximum_set_count=facts.maximum_set_count,
            maximum_sets_are_neighborhoods=facts.maximum_sets_are_neighborhoods,
            passed=facts.passed,
        )
    return report


def _oracle_result(g, config, threads) -> OracleSummary:
    result = min_half_edges(
        g,
        threads=threads,
        max_exhaustive=select(config, "guards.oracle_exhaustive_max_vertices", 30),
        max_vertices=select(config, "guards.oracle_max_vertices", 40),
    )
    n2 = g.n * g.n
    return OracleSummary(
        min_edges=result.count,
        bound=format_fraction(Fraction(n2, 50)),
        tight=50 * result.count == n2,
        holds=50 * result.count <= n2,
        witness=list(result.best_set),
        mode=result.mode.value,
    )


def cmd_find_half(args, config, threads):
    g = load_graph(args.graph)
    method = HalfMethod(args.method)
    n2 = g.n * g.n
    report = HalfReport(
        command="find-half", method=method.value, n=g.n, size=g.n // 2, bound=format_fraction(Fraction(n2, 50))
    )
    if method in (HalfMethod.pipeline, HalfMethod.both):
        result = run_min_degree_pipeline(g, args.any_solution, select(config, "guards.hom_max_source", 200))
        report.pipeline = PipelineSummary(
            vertices=list(result.vertices),
            edges=result.edges,
            d=result.d,
            fd_half_mass=format_fraction(result.fd_half_mass),
            lifted_mass=format_fraction(result.lifted_mass),
            meets_bound=50 * result.edges <= n2,
        )
    if method in (HalfMethod.oracle, HalfMethod.both):
        report.oracle = _oracle_result(g, config, threads)
    if method == HalfMethod.both:
        pipeline, oracle = report.pipeline, report.oracle
        report.agree = pipeline.meets_bound and oracle.holds and oracle.min_edges <= pipeline.edges
    return report


def cmd_oracle(args, config, threads):
    g = load_graph(args.graph)
    return OracleReport(command="oracle", n=g.n, result=_oracle_result(g, config, threads))


def cmd_approx(args, config, threads):
    g = load_graph(args.graph)
    template = generate(args.template)
    if args.partition:
        partition = read_partition(args.partition)
    else:
        phi = find_homomorphism(g, template, args.any_solution, select(config, "guards.hom_max_source", 200))
        if phi is None:
            raise PipelineFailureError(
                "Graph has no homomorphism into the template; pass --partition", stage="partition"
            )
        partition = Partition.from_assignment(phi.map, template.n)
    witness = check_eps_approximation(g, template, partition)
    report = ApproxReport(
        command="approx",
        template=args.template,
        n=g.n,
        partition_sizes=list(partition.sizes),
        eps_achieved=format_fraction(witness.eps_achieved),
        size_deviation=format_fraction(witness.size_deviation),
        edge_fraction=format_fraction(witness.edge_fraction),
        diff_edges=len(witness.diff_edges),
    )
    if (args.delta is None) != (args.eps is None):
        raise UsageError("--delta and --eps go together")
    if args.delta is not None:
        pair = build_disturbed_pair(g, template, partition, args.delta)
        checked = verify_disturbed(pair, args.eps)
        report.disturbed = DisturbedSummary(
            delta=format_fraction(args.delta),
            eps=format_fraction(args.eps),
            passed=checked.passed,
            disturbed=checked.disturbed.disturbed,
            violated=checked.disturbed.violated,
            covering_size=checked.covering.size if checked.covering else None,
            max_extra_neighbors=checked.disturbed.max_extra_neighbors,
            balanced=checked.balanced,
            max_deviation=format_fraction(checked.max_deviation),
            strong=checked.strong,
            j_set=list(pair.j_set),
            broken_bound=checked.broken_bound,
        )
    return report


def cmd_classify(args, config, threads):
    g = load_graph(args.graph)
    result = classify_trichotomy(
        g,
        args.eps,
        args.delta,
        select(config, "trichotomy.delta_divisor", DELTA_DIVISOR),
        args.any_solution,
        select(config, "guards.hom_max_source", 200),
    )
    return ClassifyReport(
        command="classify",
        outcome=result.outcome.value,
        applicable=[o.value for o in result.applicable],
        eps=format_fraction(result.eps),
        delta=format_fraction(result.delta),
        high=list(result.high),
        low=list(result.low),
        removed_edges=len(result.removed_edges),
        eps_achieved=format_fraction(result.witness.eps_achieved) if result.witness else None,
        surjective=result.phi.is_surjective() if result.phi else None,
        bipartite_sides=result.bipartite_sides,
    )


def cmd_verify_lemma(args, config, threads):
    target = LemmaTarget(args.target)
    result = search_worst(target, args.budget, args.seed, threads, VerifierSettings.from_config(config))
    if result.counterexample is not None:
        counterexample = result.counterexample
        raise LemmaViolationError(
            f"Counterexample to {target.value} with excess {format_fraction(counterexample.excess)}",
            {"point": [format_fraction(v) for v in counterexample.point], "path": counterexample.path},
        )
    reference = reference_values().get(target)
    return LemmaReport(
        command="verify-lemma",
        target=target.value,
        budget=result.budget,
        seed=result.seed,
        passed=result.passed,
        worst_excess=result.worst_excess,
        worst_point=list(result.worst_point),
        projection_residual=result.projection_residual,
        reference_value=format_fraction(reference) if reference is not None else None,
    )


def cmd_pipeline_test(args, config, threads):
    results = run_suites([args.suite], config, args.seed, threads)
    if args.csv:
        write_csv(results, args.csv)
    return PipelineTestReport(
        command="pipeline-test",
        seed=args.seed,
        passed=all(r.passed for r in results),
        suites=[
            SuiteSummary(suite=r.name, instances=len(r.rows), failures=r.failures, passed=r.passed, notes=r.notes)
            for r in results
        ],
        csv=args.csv,
    )


COMMANDS = {
    "gen": cmd_gen,
    "check": cmd_check,
    "find-half": cmd_find_half,
    "oracle": cmd_oracle,
    "approx": cmd_approx,
    "classify": cmd_classify,
    "verify-lemma": cmd_verify_lemma,
    "pipeline-test": cmd_pipeline_test,
}


def _error_details(e: HalvesError) -> Optional[dict]:
    if isinstance(e, PipelineFailureError):
        details = {"stage": e.stage, "report": e.report}
    elif isinstance(e, ResourceLimitError):
        details = {"guard": e.guard, "limit": e.limit, "actual": e.actual}
    elif isinstance(e, (FatalFindingError, InconsistentInputError)):
        details = {"witness": e.witness}
    else:
        return None
    return json.loads(json.dumps(details, default=str))


def run(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args, extra = build_parser().parse_known_args(argv)
        overrides = [item for item in extra if "=" in item and not item.startswith("-")]
        if len(overrides) != len(extra):
            raise UsageError(f"Unrecognized arguments: {[item for item in extra if item not in overrides]}")
        try:
            config = load_config(args.config, overrides)
        except (OSError, ValueError) as e:
            raise UsageError(f"Cannot load config: {e}") from e
        set_log_level(select(config, "logging.level", "INFO"))
        threads = args.threads if args.threads is not None else select(config, "threads", 1)
        if threads < 1:
            raise UsageError(f"--threads must be positive, got {threads}")
        report = COMMANDS[args.command](args, config, threads)
        if report is not None:
            print(dump(report))
        if isinstance(report, PipelineTestReport) and not report.passed:
            return 1
        return 0
    except HalvesError as e:
        log = logger.critical if isinstance(e, FatalFindingError) else logger.error
        log(f"{type(e).__name__}: {e}")
        report = ErrorReport(
            error=str(e), error_type=type(e).__name__, exit_code=e.exit_code, details=_error_details(e)
        )
        print(dump(report))
        return e.exit_code


def main():
    sys.exit(run())
