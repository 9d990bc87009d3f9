"""Command-line interface: expression evaluation, order queries, and the
verification runner.

Report output follows one grammar everywhere: one line per check,
``<STATUS> <check-id> <detail>`` with STATUS either OK or FAIL, emitted
sorted by check id.  Default output carries no timings or timestamps, so
identical invocations produce identical bytes; ``--timing`` appends an
explicit elapsed-time comment.  Exit codes: 0 all checks passed or the
query succeeded, 1 check failure or domain error, 2 usage/parse error.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import expr, fermat, oracle, orders, tower
from .errors import NimtowerError, ParseError
from .report import CheckRecord, VerificationReport

_IDENTITY_CAP = 8  # default ceiling for identity/membership sweeps
_HEAVY_CAP = 11  # default ceiling for quotient-check/corollary sweeps


def _load_table(path: str | None):
    table = fermat.builtin_factor_table()
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            table = fermat.merge_tables(table, fermat.load_factor_table(fh.read()))
    return table


# ---------------------------------------------------------------------------
# Verification task fan-out.  Tasks are plain tuples so a process pool can
# ship them to workers; results are merged and sorted regardless of which
# worker finished first.


def _run_verify_task(task) -> list[CheckRecord]:
    kind = task[0]
    try:
        if kind == "identities":
            _, i, k_max, base, iterated = task
            return orders.verify_identities(i, k_max, base=base, iterated=iterated).records
        if kind == "membership":
            _, theorem, i = task
            return orders.verify_membership(theorem, i).records
        if kind == "thm5":
            _, j, table = task
            return orders.verify_thm5(j, table).records
        if kind == "cor":
            _, i, table = task
            return orders.verify_corollaries(i, table).records
        if kind == "example":
            (_, table) = task
            return orders.verify_closing_example(table).records
        raise ValueError(f"unknown task kind {kind!r}")
    except NimtowerError as exc:
        if kind == "identities":
            ident = f"lemma5.i{task[1]:02d}"
        elif kind == "membership":
            ident = f"thm{task[1]}.i{task[2]:02d}"
        elif kind == "thm5":
            ident = f"thm5.j{task[1]:02d}.factorization"
        elif kind == "cor":
            ident = f"cor.i{task[1]:02d}.factorization"
        else:
            ident = "l2ex.error"
        return [CheckRecord(ident, False, f"{type(exc).__name__}: {exc}")]


def _plan_tasks(target: str, level: int | None, max_level: int | None, table):
    """Expand a verify target into independent per-level tasks.

    A single family honors --level (one level) or --max-level (sweep up to
    it); defaults are level 8 for the identity/membership families and 11
    for the quotient-check/corollary families.  For `all`, --level acts as
    --max-level, the default ceiling is 8, and the identity/membership
    sweeps stay capped at 8 regardless (their high levels dominate runtime
    without adding coverage the dedicated families cannot reach).
    """

    def span(lo: int, cap: int) -> range:
        if target != "all" and level is not None:
            return range(level, level + 1)
        top = max_level if max_level is not None else cap
        if target == "all":
            top = max_level if max_level is not None else (level or _IDENTITY_CAP)
        return range(lo, top + 1)

    def capped_span(lo: int, cap: int) -> range:
        r = span(lo, cap)
        if target == "all":
            return range(r.start, min(r.stop, _IDENTITY_CAP + 1))
        return r

    tasks: list[tuple] = []
    if target in ("lemma5", "all"):
        for i in span(1, _IDENTITY_CAP):
            tasks.append(("identities", i, 0, True, False))
    if target in ("lemma6", "all"):
        for i in capped_span(2, _IDENTITY_CAP):
            tasks.append(("identities", i, i - 1, False, True))
    if target in ("thm1", "thm2", "all"):
        theorems = (1, 2) if target == "all" else (int(target[3]),)
        for theorem in theorems:
            for i in capped_span(2, _IDENTITY_CAP):
                tasks.append(("membership", theorem, i))
    if target in ("thm5", "all"):
        for j in span(5, _HEAVY_CAP):
            tasks.append(("thm5", j, table))
    if target in ("cor", "all"):
        for i in span(2, _HEAVY_CAP):
            tasks.append(("cor", i, table))
    if target in ("example-l2", "all"):
        tasks.append(("example", table))
    return tasks


def _run_tasks(tasks, jobs: int) -> VerificationReport:
    report = VerificationReport()
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for records in pool.map(_run_verify_task, tasks):
                report.records.extend(records)
    else:
        for task in tasks:
            report.records.extend(_run_verify_task(task))
    return report


def _emit_report(report: VerificationReport, timing: float | None = None) -> int:
    for line in report.lines():
        print(line)
    if timing is not None:
        print(f"# elapsed {timing:.2f}s")
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# Subcommand handlers.


def _cmd_eval(args) -> int:
    element = expr.evaluate(args.expression)
    if args.format == "poly":
        print(tower.format_element(element, "poly"))
    else:
        print(f"{tower.format_element(element, 'hex')}@L{element.level}")
    return 0


def _cmd_order(args) -> int:
    element = expr.evaluate(args.expression)
    table = _load_table(args.factor_file)
    if element.level < 0:
        print("1")
        return 0
    n = fermat.group_order(element.level, table)
    order = orders.multiplicative_order(element, n)
    if order.factors:
        print(f"{order.value} = {order.format()}")
    else:
        print("1")
    return 0


def _cmd_primitive(args) -> int:
    element = expr.evaluate(args.expression)
    table = _load_table(args.factor_file)
    primitive, index = orders.is_primitive(element, table)
    print(f"primitive {'true' if primitive else 'false'} index {index}")
    return 0


def _cmd_alpha_chain(args) -> int:
    table = _load_table(args.factor_file)
    chain = orders.alpha_chain(args.level, args.base, table)
    for m, alpha in zip(range(args.level, 0, -1), chain.alphas):
        print(f"alpha_{m} = {alpha}")
    print(f"product = {chain.product}")
    return 0


def _cmd_min_exponent(args) -> int:
    table = _load_table(args.factor_file)
    print(orders.minimal_subfield_exponent(args.level, table))
    return 0


def _cmd_factors(args) -> int:
    table = _load_table(args.factor_file)
    for entry in table:
        print(f"N{entry.j}: " + " ".join(str(p) for p in entry.factors))
    report = fermat.validate(
        table, check_primality=args.check_primality, mr_rounds=args.mr_rounds, seed=args.seed
    )
    return _emit_report(report)


def _cmd_nim_mul(args) -> int:
    from .bignat import parse_nat

    a = parse_nat(args.a)
    b = parse_nat(args.b)
    result = oracle.nim_mul_rec(a, b)
    if args.a[:2].lower() == "0x" or args.b[:2].lower() == "0x":
        print(f"{result:#x}")
    else:
        print(result)
    return 0


def _cmd_oracle_check(args) -> int:
    report = VerificationReport()
    levels = [args.level] if args.level is not None else list(range(0, oracle.CROSS_CHECK_MAX_LEVEL + 1))
    for level in levels:
        report.extend(oracle.cross_check(level, samples=args.samples, seed=args.seed))
    return _emit_report(report)


def _cmd_verify(args) -> int:
    table = _load_table(args.factor_file)
    tasks = _plan_tasks(args.target, args.level, args.max_level, table)
    started = time.perf_counter()
    report = _run_tasks(tasks, args.jobs)
    elapsed = time.perf_counter() - started if args.timing else None
    return _emit_report(report, elapsed)


def _cmd_bench(args) -> int:
    import random

    rng = random.Random(args.seed)
    for level in range(0, args.max_level + 1):
        width = tower.width_of(level)
        xs = [rng.getrandbits(width) | 1 for _ in range(args.samples)]
        ys = [rng.getrandbits(width) | 1 for _ in range(args.samples)]
        t0 = time.perf_counter()
        for x, y in zip(xs, ys):
            tower.mul_values(x, y, width)
        t_mul = (time.perf_counter() - t0) / args.samples
        t0 = time.perf_counter()
        for x in xs:
            tower.square_value(x, width)
        t_sq = (time.perf_counter() - t0) / args.samples
        exponent = rng.getrandbits(64) | (1 << 63)
        t0 = time.perf_counter()
        reps = max(1, args.samples // 10)
        for x in xs[:reps]:
            tower.pow_values(x, exponent, width)
        t_pow = (time.perf_counter() - t0) / reps
        print(
            f"level {level:2d}: mul {t_mul * 1e6:9.2f} us  square {t_sq * 1e6:9.2f} us"
            f"  pow64 {t_pow * 1e3:9.3f} ms"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nimtower",
        description="Arithmetic and order verification in the recursive tower of binary fields.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_factor_file(p):
        p.add_argument("--factor-file", metavar="PATH", default=None,
                       help="factor-table file overriding/extending the builtin table")

    p = sub.add_parser("eval", help="evaluate an element expression")
    p.add_argument("expression")
    p.add_argument("--format", choices=("hex", "poly"), default="hex")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("order", help="multiplicative order of an element expression")
    p.add_argument("expression")
    add_factor_file(p)
    p.set_defaults(func=_cmd_order)

    p = sub.add_parser("primitive", help="primitivity test for an element expression")
    p.add_argument("expression")
    add_factor_file(p)
    p.set_defaults(func=_cmd_primitive)

    p = sub.add_parser("alpha-chain", help="minimal-exponent chain for c_i or a_i")
    p.add_argument("level", type=int)
    p.add_argument("--base", choices=("c", "a"), default="c")
    add_factor_file(p)
    p.set_defaults(func=_cmd_alpha_chain)

    p = sub.add_parser("min-exponent", help="smallest d with c_j^d one level down")
    p.add_argument("level", type=int)
    add_factor_file(p)
    p.set_defaults(func=_cmd_min_exponent)

    p = sub.add_parser("factors", help="print and validate the Fermat factor table")
    add_factor_file(p)
    p.add_argument("--check-primality", action="store_true")
    p.add_argument("--mr-rounds", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_factors)

    p = sub.add_parser("nim-mul", help="nim product via the recursive oracle")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=_cmd_nim_mul)

    p = sub.add_parser("oracle-check", help="cross-check tower multiplication against the oracles")
    p.add_argument("--level", type=int, default=None)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_oracle_check)

    p = sub.add_parser("verify", help="re-verify lemma/theorem/corollary claims")
    p.add_argument(
        "target",
        choices=("lemma5", "lemma6", "thm1", "thm2", "thm5", "cor", "example-l2", "all"),
    )
    p.add_argument("--level", type=int, default=None, help="run a single level")
    p.add_argument("--max-level", type=int, default=None, help="sweep up to this level")
    add_factor_file(p)
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--timing", action="store_true", help="append an elapsed-time comment")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="informational throughput figures per level")
    p.add_argument("--max-level", type=int, default=8)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NimtowerError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
