"""Command-line entry point: ``zassenhaus {classes,divgraph,verify,sweep}``.

Exit status is 0 on success, 1 when a verification fails and 2 for usage
errors (bad arguments, invalid q, unsupported brute-force size).
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence

from . import brute_force as bf
from .closed_form import (
    PSL2,
    PSL2_MAX_Q,
    SZ,
    SZ_MAX_Q,
    InvalidGroupError,
    check_class_equation,
    class_table,
    normalize_family,
)
from .divgraph import build_divgraph, classify_shape, export_graph
from .finite_field import prime_power

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CHECKS = ("class-equation", "brute-force", "ti-lemma", "centralizers")


class UsageError(Exception):
    pass


@dataclass
class RunReport:
    command: str
    lines: List[str] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)
    status: int = EXIT_OK

    def emit(self, line: str = "") -> None:
        self.lines.append(line)

    def timed(self, phase: str, fn: Callable):
        start = time.perf_counter()
        try:
            return fn()
        finally:
            self.timings[phase] = time.perf_counter() - start


def parse_q(text: str) -> int:
    """Accept ``49`` or ``7^2``."""
    text = text.strip()
    try:
        if "^" in text:
            base, exp = text.split("^")
            return int(base) ** int(exp)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse q from {text!r}") from None


def parse_sizes(text: str) -> List[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return vals


def cmd_classes(args, report: RunReport) -> None:
    table = class_table(args.family, args.q)
    if args.format == "json":
        report.emit(table.to_json())
        return
    width = max(len(str(t.size)) for t in table.entries)
    report.emit(f"# {table.spec.name}, |G| = {table.order}")
    report.emit(f"{'size':>{width}} | multiplicity | origin")
    for t in table.entries:
        report.emit(f"{t.size:>{width}} | {t.mult:>12} | {t.origin}")
    report.emit(f"total: {sum(t.size * t.mult for t in table.entries)}")


def cmd_divgraph(args, report: RunReport) -> None:
    if args.sizes is not None:
        if args.family or args.q:
            raise UsageError("give either --sizes or --family/--q, not both")
        sizes = args.sizes
    else:
        if not (args.family and args.q):
            raise UsageError("divgraph needs --sizes or both --family and --q")
        sizes = class_table(args.family, args.q).sizes()
    g = build_divgraph(sizes)
    if args.format == "shape":
        report.emit(str(classify_shape(g)))
    else:
        report.emit(export_graph(g, args.format).rstrip("\n"))


def _check_line(report: RunReport, name: str, ok: bool, detail: str) -> None:
    report.emit(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    if not ok:
        report.status = EXIT_FAIL


def _verify_centralizers(G: bf.BruteForceGroup, report: RunReport) -> None:
    # Every element for PSL; class representatives plus all of K for Sz(8).
    if G.spec.family == PSL2:
        sample = range(len(G))
    else:
        sample = sorted({c[0] for c in G.classes}
                        | set(bf.sz_subgroups(G)["K"].tolist()))
    bad = [x for x in sample
           if bf.centralizer_order(G, x) * len(G.classes[G.class_index[x]]) != len(G)]
    _check_line(report, "centralizers", not bad,
                f"|C(x)|*|x^G| = {len(G)} for {len(sample)} elements"
                + (f"; {len(bad)} failures" if bad else ""))
    if G.spec.family != SZ:
        return
    ctx = G.ctx
    q = G.spec.q
    failures = 0
    for a, b in product(ctx.elements(), ctx.elements()):
        if not a:
            continue
        x = G.lookup(bf.suzuki_unipotent(a, b))
        expected = bf.subgroup_from_matrices(
            G, [bf.suzuki_unipotent(u, v) for u in (ctx.zero(), a) for v in ctx.elements()])
        cent = bf.centralizer(G, x)
        if len(cent) != 2 * q or not (cent == expected).all():
            failures += 1
    _check_line(report, "centralizers (alpha != 0)", failures == 0,
                f"C((a,b)) = <(a,0), Z(K)> of order {2 * q} for all {q * (q - 1)} elements"
                + (f"; {failures} failures" if failures else ""))


def cmd_verify(args, report: RunReport) -> None:
    checks = args.checks
    table = class_table(args.family, args.q)
    spec = table.spec
    needs_group = any(c != "class-equation" for c in checks)
    if needs_group and not bf.brute_force_supported(spec.family, spec.q):
        raise UsageError(f"brute force unsupported for q={spec.q}")
    if "class-equation" in checks:
        total = sum(t.size * t.mult for t in table.entries)
        ok = report.timed("class-equation", lambda: check_class_equation(table))
        _check_line(report, "class-equation", ok, f"sum = {total}, |G| = {spec.group_order}")
    if not needs_group:
        return
    G = report.timed("build-group", lambda: bf.brute_force_group(spec.family, spec.q))
    if "brute-force" in checks:
        observed = report.timed("brute-force", G.class_sizes)
        expected = table.sizes()
        _check_line(report, "brute-force", observed == expected,
                    f"closed form {expected}; brute force {observed}")
    if "ti-lemma" in checks:
        def run_ti():
            for name, H in bf.named_subgroups(G).items():
                try:
                    r = bf.ti_lemma_report(G, H)
                except bf.BruteForceError as exc:
                    _check_line(report, f"ti-lemma {name}", False, str(exc))
                    continue
                pairs = sorted({(m, c) for _, m, c in r.rows})
                _check_line(report, f"ti-lemma {name}", r.passed,
                            f"|H| = {r.subgroup_order}, |N| = {r.normalizer_order} "
                            f"(index {r.normalizer_index}), (|h^G cap H|, |C(h)|) in {pairs}")
        report.timed("ti-lemma", run_ti)
    if "centralizers" in checks:
        report.timed("centralizers", lambda: _verify_centralizers(G, report))


def _sweep_values(family: str, lo: int, hi: int) -> List[int]:
    if family == PSL2:
        return [q for q in range(max(lo, 4), min(hi, PSL2_MAX_Q - 1) + 1)
                if prime_power(q)]
    out = []
    m = 3
    while (1 << m) <= hi and (1 << m) < SZ_MAX_Q:
        if (1 << m) >= lo:
            out.append(1 << m)
        m += 2
    return out


def cmd_sweep(args, report: RunReport) -> None:
    family = normalize_family(args.family)
    qs = _sweep_values(family, args.q_min, args.q_max)
    report.emit("q | e | |G| | distinct sizes | shape")
    seen: Dict[str, List[int]] = {}
    for q in qs:
        table = class_table(family, q)
        sizes = table.distinct_sizes()
        shape = str(classify_shape(build_divgraph(sizes)))
        seen.setdefault(shape, []).append(q)
        report.emit(f"{q} | {table.spec.e} | {table.order} | "
                    f"{','.join(map(str, sizes))} | {shape}")
    if not seen:
        report.emit("no valid q")
    else:
        report.emit("shapes: " + "; ".join(
            f"{shape} (q={','.join(map(str, qv))})" for shape, qv in seen.items()))


def _checks(text: str) -> List[str]:
    vals = [c.strip() for c in text.split(",") if c.strip()]
    unknown = [c for c in vals if c not in CHECKS]
    if unknown or not vals:
        raise argparse.ArgumentTypeError(
            f"unknown check(s) {unknown}; choose from {', '.join(CHECKS)}")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zassenhaus",
        description="Class sizes and divisibility graphs of PSL(2,q) and Sz(q).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classes", help="print the conjugacy class size table")
    p.add_argument("family", choices=["psl2", "sz"])
    p.add_argument("--q", type=parse_q, required=True)
    p.add_argument("--format", choices=["table", "json"], default="table")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("divgraph", help="build the divisibility graph")
    p.add_argument("--family", choices=["psl2", "sz"])
    p.add_argument("--q", type=parse_q)
    p.add_argument("--sizes", type=parse_sizes)
    p.add_argument("--format", choices=["dot", "json", "shape"], default="shape")
    p.set_defaults(func=cmd_divgraph)

    p = sub.add_parser("verify", help="check closed forms against brute force")
    p.add_argument("--family", choices=["psl2", "sz"], required=True)
    p.add_argument("--q", type=parse_q, required=True)
    p.add_argument("--checks", type=_checks, default=list(CHECKS),
                   help="comma-separated subset of " + ",".join(CHECKS))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="tabulate shapes over a range of q")
    p.add_argument("family", choices=["psl2", "sz"])
    p.add_argument("q_min", type=parse_q)
    p.add_argument("q_max", type=parse_q)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    report = RunReport(" ".join(argv if argv is not None else sys.argv[1:]))
    try:
        args.func(args, report)
    except (UsageError, InvalidGroupError, bf.BruteForceError) as exc:
        for line in report.lines:
            print(line)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for line in report.lines:
        print(line)
    if args.command == "verify":
        for phase, secs in report.timings.items():
            print(f"time {phase}: {secs:.3f}s", file=sys.stderr)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
