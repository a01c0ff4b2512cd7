"""Command-line front end.

Exit codes: 0 success (optimal), 1 usage or input error, 2 infeasible,
3 budget-stopped, 4 I/O or parse error.  Reports go to stdout,
diagnostics and wall times to stderr.
"""
from __future__ import annotations

import argparse
import random
import sys
import time

from .cones import GeneratorSet, intersect_many, intersection_witnesses, lemma4_bounds
from .core import TwoStageInstance
from .errors import BudgetExceeded, IncompleteBasis, InvalidInstance
from .formats import (ParseError, format_matrix, format_vectors, parse_instance, parse_matrix,
                      parse_vectors, serialize_instance)
from .generate import random_tree, random_two_stage
from .graver import graver_basis, graver_norm_bound
from .lowerbound import FAMILIES, gen_encoded, gen_harmonic, min_first_coordinate, witness
from .multistage import lift_two_stage, solve_multistage
from .steinitz import prefix_radius, steinitz_reorder
from .subrep import VectorMultiset, common_sum, find_common_submultisets, within_size_bound
from .twostage import BUDGET_STOPPED, INFEASIBLE, MULTIPLIER_POLICIES, SolverConfig, solve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_BUDGET = 3
EXIT_IO = 4


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; 2 means infeasible here."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _join(v) -> str:
    return " ".join(map(str, v))


def _cmd_solve(args, out) -> int:
    inst = parse_instance(_read(args.instance))
    config = SolverConfig(
        head_norm_cap=args.head_cap, exact=args.exact_L, step_multipliers=args.multipliers,
        max_iterations=args.max_iter, parallel_width=args.parallel_width,
    )
    start = time.perf_counter()
    if args.tree or not isinstance(inst, TwoStageInstance):
        tree = lift_two_stage(inst) if isinstance(inst, TwoStageInstance) else inst
        report = solve_multistage(tree, config)
    else:
        report = solve(inst, config)
    print(f"wall_time: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    if args.report:
        out.write(report.to_text())
    else:
        out.write(f"status: {report.status}\n")
        if report.solution is not None:
            out.write(f"objective: {report.objective_value}\nsolution: {_join(report.solution)}\n")
    if report.status == INFEASIBLE:
        return EXIT_INFEASIBLE
    if report.status == BUDGET_STOPPED:
        return EXIT_BUDGET
    return EXIT_OK


def _cmd_graver(args, out) -> int:
    m = parse_matrix(_read(args.matrix))
    basis = graver_basis(m, args.norm_cap, args.budget)
    bound = graver_norm_bound(max(m.nrows, 1), max(m.delta, 1))
    out.write(f"# norm_bound: {bound}\n# max_norm: {basis.max_norm}\n")
    out.write(f"# elements: {len(basis.elements)}\n# complete: {'no' if basis.truncated else 'yes'}\n")
    out.write(format_vectors(m.ncols, basis.sorted_elements()))
    return EXIT_OK


def _cmd_cone_intersect(args, out) -> int:
    sets = []
    for path in args.sets:
        dim, vecs = parse_vectors(_read(path))
        sets.append(GeneratorSet.of(vecs, dim))
    delta = args.delta if args.delta is not None else max(max(s.delta for s in sets), 1)
    result = intersect_many(sets, delta, args.budget)
    h, w = lemma4_bounds(result.dim, delta)
    out.write(f"# generators: {len(result)}\n# size_bound: {h}\n# norm_bound: {w}\n")
    out.write(format_vectors(result.dim, result.generators))
    for g in result.generators:
        wit = intersection_witnesses(sets, g)
        out.write(f"# witness {_join(g)}: " + " ".join(f"[{_join(x)}]" for x in wit) + "\n")
    return EXIT_OK


def _cmd_steinitz(args, out) -> int:
    dim, vecs = parse_vectors(_read(args.vectors))
    delta = args.delta if args.delta is not None else max((max(map(abs, v), default=0) for v in vecs), default=0)
    perm = steinitz_reorder(vecs, delta)
    radius = prefix_radius(vecs, perm)
    out.write(f"permutation: {_join(perm)}\nradius: {radius}\nbound: {dim * delta}\n")
    return EXIT_OK


def _cmd_verify_lemma1(args, out) -> int:
    sets = []
    for path in args.multisets:
        dim, vecs = parse_vectors(_read(path))
        sets.append(VectorMultiset.from_list(vecs, dim))
    delta = args.delta
    if delta is None:
        delta = max(max((max(v, default=0) for v in ms.counts), default=0) for ms in sets)
    delta = max(delta, 1)
    parts = find_common_submultisets(sets, delta, args.budget)
    ok = all(within_size_bound(p.size(), sets[0].dim, delta) for p in parts)
    for i, p in enumerate(parts):
        out.write(f"S_{i + 1}: " + " ".join(f"[{_join(v)}]" for v in p.elements()) + "\n")
    out.write(f"common_sum: {_join(common_sum(parts))}\n")
    out.write(f"sizes: {_join(p.size() for p in parts)}\n")
    out.write(f"size_bound: {'pass' if ok else 'fail'}\n")
    return EXIT_OK if ok else EXIT_USAGE


def _cmd_lb_gen(args, out) -> int:
    if args.family == "encoded" and args.s is None:
        raise _UsageError("lb-gen: error: --s is required for the encoded family")
    m = gen_harmonic(args.delta) if args.family == "harmonic" else gen_encoded(args.delta, args.s)
    value = min_first_coordinate(m, args.family, args.delta, args.s)
    out.write(format_matrix(m))
    out.write("# certificate\n")
    out.write(f"# minimal_coordinate: {value}\n# bit_length: {value.bit_length()}\n")
    out.write(f"# witness: {_join(witness(args.family, args.delta, args.s))}\n")
    return EXIT_OK


def _cmd_gen_instance(args, out) -> int:
    rng = random.Random(args.seed)
    if args.tree:
        inst = random_tree(rng, max_delta=args.delta, max_width=args.max_width, max_children=args.max_children,
                           box=args.width)
    else:
        inst = random_two_stage(rng, args.n, args.r, args.s, args.t, args.delta, width=args.width)
    text = serialize_instance(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="graverip", description="Block-structured integer programming by Graver augmentation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("solve", help="solve a two-stage or tree instance")
    sp.add_argument("instance", help="instance file, or - for stdin")
    sp.add_argument("--tree", action="store_true", help="use the multi-stage solver (two-stage files are lifted)")
    sp.add_argument("--exact-L", dest="exact_L", action="store_true",
                    help="use the theoretical head norm bound, clipped to the head span")
    sp.add_argument("--head-cap", type=int, default=None, help="fixed head norm cap L")
    sp.add_argument("--multipliers", choices=MULTIPLIER_POLICIES, default="doubling")
    sp.add_argument("--max-iter", type=int, default=10_000)
    sp.add_argument("--seed", type=int, default=None, help="accepted for scripting symmetry; the solver is deterministic")
    sp.add_argument("--report", action="store_true", help="emit the full structured report")
    sp.add_argument("--parallel-width", type=int, default=1)
    sp.set_defaults(func=_cmd_solve)

    sp = sub.add_parser("graver", help="Graver basis of a matrix file")
    sp.add_argument("matrix")
    sp.add_argument("--norm-cap", type=int, default=None)
    sp.add_argument("--budget", type=int, default=5 * 10**6)
    sp.set_defaults(func=_cmd_graver)

    sp = sub.add_parser("cone-intersect", help="generating set of an intersection of integer cones")
    sp.add_argument("sets", nargs="+", help="generator-set files")
    sp.add_argument("--delta", type=int, default=None)
    sp.add_argument("--budget", type=int, default=10**7)
    sp.set_defaults(func=_cmd_cone_intersect)

    sp = sub.add_parser("steinitz", help="reorder a zero-sum vector list")
    sp.add_argument("vectors")
    sp.add_argument("--delta", type=int, default=None)
    sp.set_defaults(func=_cmd_steinitz)

    sp = sub.add_parser("verify-lemma1", help="equal-sum submultisets of multisets with a common total")
    sp.add_argument("multisets", nargs="+")
    sp.add_argument("--delta", type=int, default=None)
    sp.add_argument("--budget", type=int, default=10**7)
    sp.set_defaults(func=_cmd_verify_lemma1)

    sp = sub.add_parser("lb-gen", help="lower-bound matrix with its certificate")
    sp.add_argument("--family", choices=FAMILIES, required=True)
    sp.add_argument("--delta", type=int, required=True)
    sp.add_argument("--s", type=int, default=None)
    sp.set_defaults(func=_cmd_lb_gen)

    sp = sub.add_parser("gen-instance", help="seeded random feasible instance (random.Random)")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--t", type=int, default=2)
    sp.add_argument("--delta", type=int, default=2)
    sp.add_argument("--width", type=int, default=4, help="largest upper minus lower bound")
    sp.add_argument("--tree", action="store_true", help="three-level tree instead of two-stage")
    sp.add_argument("--max-width", type=int, default=2, help="tree: largest block width")
    sp.add_argument("--max-children", type=int, default=2, help="tree: largest number of children")
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=_cmd_gen_instance)
    return p


def dispatch(argv: list[str] | None = None, out=None) -> int:
    """Run one command and return its exit code."""
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return EXIT_OK if not e.code else EXIT_USAGE
    try:
        return args.func(args, out)
    except _UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ParseError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInstance, IncompleteBasis, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(dispatch())
