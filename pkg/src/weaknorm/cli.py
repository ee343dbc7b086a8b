"""``weaknorm`` command line: per-group computations, the theorem suite and the
counterexample search.

Group arguments accept a group file path, a fixture name (``S4``, ``G96_70``, ...)
or a product recipe such as ``S3xC4``.  Exit codes: 0 clean, 1 when a FAIL or
COUNTEREXAMPLE verdict is present, 2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import catalog, harness, lattice, metrics
from .errors import GroupError, NotPSolvable, NotSolvable
from .formations import chief_series, is_p_solvable, is_solvable, parse_formation, residual
from .norms import norm, norm_series, weak_norm
from .perm import PermGroup, SubgroupHandle, check_permutation

log = logging.getLogger("weaknorm")


class UsageError(Exception):
    pass


def load_group_arg(text: str) -> PermGroup:
    path = Path(text)
    if path.is_file():
        return catalog.load_group(path)
    if text in catalog.FIXTURE_NAMES:
        return catalog.builtin_fixture(text)
    try:
        return catalog.build_recipe(text)
    except GroupError as exc:
        raise UsageError(f"{text!r} is neither a group file, a fixture nor a recipe") from exc


def parse_sub(G: PermGroup, text: str) -> SubgroupHandle:
    """Comma-separated generators: a label from the group file, ``gN`` for the N-th
    generator line (from 0), or a space-separated image list."""
    gens = []
    for token in (t.strip() for t in text.split(",")):
        if not token:
            continue
        if token in G.labels:
            gens.append(G.labels[token])
        elif token[0] == "g" and token[1:].isdigit():
            i = int(token[1:])
            if i >= len(G.generators):
                raise UsageError(f"no generator {token}")
            gens.append(G.generators[i])
        else:
            try:
                perm = check_permutation([int(v) for v in token.split()], G.degree)
                gens.append(G.index(perm))
            except (ValueError, KeyError, GroupError) as exc:
                raise UsageError(f"bad generator {token!r}: {exc}") from exc
    return G.subgroup(gens)


def describe(S: SubgroupHandle) -> list[str]:
    G = S.parent
    lines = [f"order: {S.order}"]
    for g in S.generators:
        lines.append("generator: " + " ".join(map(str, G.perm(g))))
    return lines


def cmd_info(args) -> int:
    G = load_group_arg(args.group)
    primes = lattice.prime_divisors(G.order)
    print(f"name: {G.name or '-'}")
    print(f"order: {G.order}")
    print(f"primes: {' '.join(map(str, primes)) or '-'}")
    print(f"solvable: {str(is_solvable(G)).lower()}")
    for p in primes:
        print(f"{p}-solvable: {str(is_p_solvable(G, p)).lower()}")
    print(f"center: {lattice.center(G).order}")
    print(f"frattini: {lattice.frattini(G).order}")
    print(f"fitting: {lattice.fitting(G).order}")
    print(f"chief factors: {' '.join(map(str, chief_series(G).factor_orders)) or '-'}")
    return 0


def cmd_residual(args) -> int:
    G = load_group_arg(args.group)
    print("\n".join(describe(residual(G, parse_formation(args.formation)))))
    return 0


def cmd_norm(args) -> int:
    G = load_group_arg(args.group)
    tag = parse_formation(args.formation)
    S = norm(G, tag) if args.sub is None else weak_norm(G, parse_sub(G, args.sub), tag)
    print("\n".join(describe(S)))
    return 0


def cmd_series(args) -> int:
    G = load_group_arg(args.group)
    if args.upper_p is not None:
        s = metrics.upper_p_series(G, args.upper_p)
        print("upper p-series: " + " ".join(str(S.order) for S in s.chain))
        print(f"l_{args.upper_p}: {s.p_factor_count}")
        return 0
    if args.formation is None:
        raise UsageError("series needs --formation or --upper-p")
    s = norm_series(G, parse_formation(args.formation))
    print("norm series: " + " ".join(map(str, s.orders)))
    print(f"terminal: {s.terminal.order}")
    return 0


def cmd_metrics(args) -> int:
    G = load_group_arg(args.group)
    primes = [args.p] if args.p is not None else lattice.prime_divisors(G.order)
    for p in primes:
        try:
            print(f"l_{p}: {metrics.p_length(G, p)}")
            print(f"h_{p}: {metrics.p_fitting_length(G, p)}")
        except NotPSolvable:
            print(f"l_{p}: undefined (not {p}-solvable)")
            print(f"h_{p}: undefined (not {p}-solvable)")
    try:
        print(f"h: {metrics.fitting_length(G)}")
    except NotSolvable:
        print("h: undefined (not solvable)")
    return 0


def _write_report(report: harness.Report, path: str | None) -> None:
    if path:
        Path(path).write_text(report.to_json())


def _summary(report: harness.Report) -> None:
    t = report.totals
    print(" ".join(f"{k}={v}" for k, v in t.items()))
    for v in report.verdicts:
        if v.status in ("FAIL", "ERROR", "COUNTEREXAMPLE"):
            flag = " (unproven)" if v.unproven else ""
            print(f"{v.status} {v.group} {v.check}{flag}")


def cmd_verify(args) -> int:
    if args.cache_dir:
        lattice.set_cache_dir(Path(args.cache_dir))
    sources = harness.resolve_corpus(args.corpus, args.max_order)
    checks = harness.select_checks(args.suite)
    meta = {"corpus": args.corpus, "suite": args.suite, "max_order": args.max_order}
    report = harness.run_suite(sources, checks, jobs=args.jobs, cache_dir=args.cache_dir, metadata=meta)
    _write_report(report, args.report)
    _summary(report)
    return report.exit_code


def cmd_search(args) -> int:
    if args.cache_dir:
        lattice.set_cache_dir(Path(args.cache_dir))
    sources = harness.resolve_corpus(args.corpus, args.max_order)
    meta = {"corpus": args.corpus, "max_order": args.max_order}
    report = harness.search_counterexamples(sources, args.p, args.question, jobs=args.jobs,
                                            cache_dir=args.cache_dir, metadata=meta)
    _write_report(report, args.report)
    _summary(report)
    return report.exit_code


def _prime(text: str) -> int:
    p = int(text)
    if p < 2 or lattice.prime_divisors(p) != [p]:
        raise argparse.ArgumentTypeError(f"{text} is not a prime")
    return p


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"{text} must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weaknorm", description=__doc__.split("\n\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="order, prime divisors, solvability and characteristic subgroups")
    p.add_argument("group")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("residual", help="the F-residual G^F")
    p.add_argument("group")
    p.add_argument("--formation", required=True, help="A, N, Np:p, U, Up:p or a *-product")
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("norm", help="N_F(G), or the weak norm N_F(G,H) with --sub")
    p.add_argument("group")
    p.add_argument("--formation", required=True)
    p.add_argument("--sub", help="generators of H: labels, gN, or image lists, comma separated")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("series", help="ascending norm series or upper p-series")
    p.add_argument("group")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--formation")
    g.add_argument("--upper-p", type=_prime)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("metrics", help="l_p, h_p and h where defined")
    p.add_argument("group")
    p.add_argument("-p", type=_prime)
    p.set_defaults(func=cmd_metrics)

    for name, func, helptext in (("verify", cmd_verify, "run the theorem suite over a corpus"),
                                 ("search", cmd_search, "search a corpus for counterexamples")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--corpus", required=True,
                       help="default, fixtures, generated, none, a directory, a file, names, or a comma list")
        p.add_argument("--max-order", type=_positive, default=harness.DEFAULT_MAX_ORDER,
                       help="order bound for generated groups")
        p.add_argument("--jobs", type=_positive, default=1)
        p.add_argument("--report", help="write the JSON report here")
        p.add_argument("--cache-dir", help="persist subgroup lattices here")
        p.set_defaults(func=func)
        if name == "verify":
            p.add_argument("--suite", default="all", help="all, or comma-separated check ids")
        else:
            p.add_argument("--question", required=True, type=str.upper, choices=["Q5.7"])
            p.add_argument("-p", type=_prime, required=True)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, harness.ConfigError, GroupError, OSError) as exc:
        print(f"weaknorm: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
