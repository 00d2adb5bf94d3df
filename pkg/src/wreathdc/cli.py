"""Command-line front end: ``wreath-dc <command> --group C2wrZ --radius 8 ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .bounds import check_bounds_against_balls, theorem1_chain_rows, theorem2_chain_rows
from .centralizer import DEFAULT_EXPONENTS, structure_suite, translation_estimate
from .combinatorics import (
    count_compositions,
    count_weak_compositions,
    enumerate_compositions,
    enumerate_weak_compositions,
    verify_shift_bijection,
)
from .dc import DEFAULT_PAIR_BUDGET, _decimal, conjugacy_dc_sequence, dc_sequence
from .element import canonical_key, support_extrema
from .geometry import (
    DEFAULT_ELEMENT_BUDGET,
    PREDICATES,
    BudgetExceeded,
    build_ball,
    density_sequence,
    growth_from_counts,
    growth_report,
    standard_genset,
)
from .lamps import BUNDLED_TABLES, CyclicLamps, IntegerLamps, LampGroupSpec, TableError, TableLamps, bundled_table, load_table

EXIT_OK, EXIT_TRUNCATED, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3

COMMANDS = ("ball", "growth", "dc", "conj-dc", "centralizer", "tau", "bounds", "comb", "density")


class GroupSpecError(ValueError):
    def __init__(self, text: str, position: int, reason: str):
        super().__init__(f"{reason} at position {position}\n  {text}\n  {' ' * position}^")
        self.position = position


_CYCLIC = re.compile(r"C(\d+)wrZ")


def parse_group_spec(text: str) -> LampGroupSpec:
    """``C<q>wrZ`` | ``ZwrZ`` | ``table:<path>wrZ``.

    For ``table:`` the path is read if it exists, otherwise it may name a
    bundled table (C2, C2xC2, S3, D4, Q8).
    """
    if text == "ZwrZ":
        return IntegerLamps()
    m = _CYCLIC.fullmatch(text)
    if m:
        q = int(m.group(1))
        if q < 2:
            raise GroupSpecError(text, 1, f"cyclic lamp group needs q >= 2, got {q}")
        return CyclicLamps(q)
    if text.startswith("table:"):
        if not text.endswith("wrZ") or len(text) <= len("table:wrZ"):
            raise GroupSpecError(text, len(text), "expected 'table:<path>wrZ'")
        ref = text[len("table:"):-len("wrZ")]
        if Path(ref).is_file():
            try:
                return TableLamps(load_table(ref))
            except TableError as exc:
                raise GroupSpecError(text, len("table:"), f"invalid table: {exc}") from None
        if ref in BUNDLED_TABLES:
            return TableLamps(bundled_table(ref))
        raise GroupSpecError(text, len("table:"), f"no table file or bundled table named {ref!r}")
    if text.startswith("C"):
        digits = re.match(r"C(\d*)", text)
        pos = digits.end()
        if pos == 1:
            raise GroupSpecError(text, 1, "expected the order q after 'C'")
        raise GroupSpecError(text, pos, "expected 'wrZ'")
    if text.startswith("Z"):
        raise GroupSpecError(text, 1, "expected 'wrZ'")
    raise GroupSpecError(text, 0, "expected 'C<q>wrZ', 'ZwrZ' or 'table:<path>wrZ'")


def default_radius(spec: LampGroupSpec) -> int:
    if isinstance(spec, CyclicLamps) and spec.q == 2:
        return 14
    if isinstance(spec, (CyclicLamps, IntegerLamps)):
        return 10
    return 6 if spec.order >= 6 else 8


@dataclass
class RunConfig:
    group: str
    spec: LampGroupSpec
    radius: int
    method: str | None = None
    fmt: str = "csv"
    out: str | None = None
    workers: int = 1
    element_budget: int = DEFAULT_ELEMENT_BUDGET
    pair_budget: int = DEFAULT_PAIR_BUDGET
    lamp_index: int = 0
    conjugator_radius: int | None = None
    predicate: str = "base"
    kernel: str | None = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.radius < 0:
            raise ValueError("radius must be >= 0")
        if self.element_budget <= 0 or self.pair_budget <= 0:
            raise ValueError("budgets must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


def _frac_cols(prefix: str, x: Fraction | None) -> dict:
    if x is None:
        return {f"{prefix}_num": "", f"{prefix}_den": "", f"{prefix}_decimal": ""}
    return {f"{prefix}_num": x.numerator, f"{prefix}_den": x.denominator, f"{prefix}_decimal": _decimal(x)}


def _lamps_text(g) -> str:
    return ";".join(f"{p}:{v}" for p, v in g.lamps)


def render(rows: list[dict], fmt: str, metadata: dict) -> str:
    if fmt == "json":
        return json.dumps({"metadata": metadata, "rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    return buf.getvalue()


def _ball_or_partial(cfg: RunConfig, genset):
    try:
        return build_ball(cfg.spec, genset, cfg.radius, cfg.element_budget), None
    except BudgetExceeded as exc:
        return exc.partial, str(exc)


def _cmd_ball(cfg, genset):
    ball, note = _ball_or_partial(cfg, genset)
    rows = []
    for r, shell in enumerate(ball.shells):
        for g in shell:
            lo, hi = support_extrema(g)
            rows.append({"word_length": r, "shift": g.shift, "g_min": "" if lo is None else lo,
                         "g_max": "" if hi is None else hi, "lamps": _lamps_text(g),
                         "key": canonical_key(g).decode()})
    return rows, note, EXIT_OK


def _cmd_growth(cfg, genset):
    method = cfg.method or ("count" if genset.standard else "bfs")
    note = None
    if method == "count":
        rep = growth_from_counts(cfg.spec, cfg.radius)
    elif method == "bfs":
        ball, note = _ball_or_partial(cfg, genset)
        rep = growth_report(ball)
    else:
        raise ValueError(f"growth --method must be 'count' or 'bfs', got {method!r}")
    rows = []
    for r, (size, shell) in enumerate(zip(rep.sizes, rep.shells)):
        row = {"radius": r, "shell_size": shell, "ball_size": size}
        row.update(_frac_cols("ratio", Fraction(size, rep.sizes[r - 1]) if r else None))
        row["root_decimal"] = f"{size ** (1 / r):.10g}" if r else ""
        row["method"] = method
        rows.append(row)
    return rows, note, EXIT_OK


def _cmd_dc(cfg, genset):
    method = cfg.method or "structured"
    try:
        rep = dc_sequence(cfg.spec, genset, cfg.radius, method, element_budget=cfg.element_budget,
                          pair_budget=cfg.pair_budget, backend=cfg.kernel)
        note = None
    except BudgetExceeded as exc:
        rep, note = exc.partial, str(exc)
    return rep.table(), note, EXIT_OK


def _cmd_conj_dc(cfg, genset):
    try:
        rep = conjugacy_dc_sequence(cfg.spec, genset, cfg.radius, cfg.method or "auto",
                                    cfg.conjugator_radius, element_budget=cfg.element_budget,
                                    backend=cfg.kernel)
        note = None
    except BudgetExceeded as exc:
        rep, note = exc.partial, str(exc)
    status = EXIT_OK if all(rep.agreement.values()) else EXIT_INVARIANT
    rows = rep.table()
    if rep.agreement:
        for row in rows:
            row["methods_agree"] = rep.agreement.get(row["radius"], "")
    return rows, note, status


def _cmd_centralizer(cfg, genset):
    ball, note = _ball_or_partial(cfg, genset)
    rows, status = [], EXIT_OK
    for r in structure_suite(ball):
        ok = (r.cyclic_ok is not False and r.bound_ok is not False and r.all_base_members is not False
              and (not r.in_base or r.target.is_identity or r.contained_in_base))
        if not ok:
            status = EXIT_INVARIANT
        rows.append({"target": canonical_key(r.target).decode(), "shift": r.target.shift,
                     "in_base": r.in_base, "centralizer_size": r.size,
                     "cyclic_ok": "" if r.cyclic_ok is None else r.cyclic_ok,
                     "linear_bound_ok": "" if r.bound_ok is None else r.bound_ok,
                     "contained_in_base": r.contained_in_base,
                     "all_base_members": "" if r.all_base_members is None else r.all_base_members,
                     "witness": "" if r.witness is None else repr(r.witness)})
    return rows, note, status


def _cmd_tau(cfg, genset):
    ball, note = _ball_or_partial(cfg, genset)
    exps = cfg.extra.get("exponents") or DEFAULT_EXPONENTS
    rows, status = [], EXIT_OK
    for g in ball.elements:
        est = translation_estimate(g, exps, genset)
        if any(v < est.lower_bound for v in est.values):
            status = EXIT_INVARIANT
        row = {"target": canonical_key(g).decode(), "shift": g.shift,
               "order": "" if est.order is None else est.order}
        for n, length in zip(est.exponents, est.lengths):
            row[f"len_pow_{n}"] = length
        row.update(_frac_cols("tau", est.tau))
        row.update(_frac_cols("slope", est.slope))
        row["lower_bound"] = est.lower_bound
        rows.append(row)
    return rows, note, status


def _cmd_bounds(cfg, genset):
    ball, note = _ball_or_partial(cfg, genset)
    rows = check_bounds_against_balls(cfg.spec, cfg.radius, ball, strict=False)
    status = EXIT_OK if all(r.passed for r in rows) else EXIT_INVARIANT
    return [r.as_dict() for r in rows], note, status


def _cmd_comb(cfg, genset):
    rows, status = [], EXIT_OK

    def add(kind, n, k, formula, observed, informational=False):
        nonlocal status
        ok = formula == observed if not isinstance(observed, bool) else observed
        if not ok and not informational:
            status = EXIT_INVARIANT
        rows.append({"kind": kind, "n": n, "k": k, "formula": formula, "observed": observed, "pass": ok})

    top = max(cfg.radius, 1)
    for n in range(1, min(top, 20) + 1):
        add("compositions", n, "", count_compositions(n), len(enumerate_compositions(n)))
    for n in range(0, min(top, 12) + 1):
        for k in range(1, 7):
            add("weak_compositions", n, k, count_weak_compositions(n, k), len(enumerate_weak_compositions(n, k)))
    for n in range(0, min(top, 10) + 1):
        for k in range(1, 6):
            add("shift_bijection", n, k, True, verify_shift_bijection(n, k))
    for r in theorem1_chain_rows(top):
        add(r.name, r.n, "", r.bound, r.passed)
    for r in theorem2_chain_rows(top):
        add(r.name, r.n, "", r.bound, r.passed, informational=True)
    return rows, None, status


def _cmd_density(cfg, genset):
    if cfg.predicate not in PREDICATES:
        raise ValueError(f"unknown predicate {cfg.predicate!r}; have {', '.join(PREDICATES)}")
    try:
        rep = density_sequence(cfg.spec, genset, cfg.radius, cfg.predicate, budget=cfg.element_budget)
        note = None
    except BudgetExceeded as exc:
        rep, note = exc.partial, str(exc)
    rows = []
    for r, hits, size in rep.rows:
        row = {"radius": r, "hits": hits, "ball_size": size}
        row.update(_frac_cols("density", Fraction(hits, size)))
        row["predicate"] = rep.predicate
        row["genset"] = rep.genset
        rows.append(row)
    return rows, note, EXIT_OK


HANDLERS = {
    "ball": _cmd_ball,
    "growth": _cmd_growth,
    "dc": _cmd_dc,
    "conj-dc": _cmd_conj_dc,
    "centralizer": _cmd_centralizer,
    "tau": _cmd_tau,
    "bounds": _cmd_bounds,
    "comb": _cmd_comb,
    "density": _cmd_density,
}


def run(command: str, cfg: RunConfig) -> int:
    if command not in HANDLERS:
        raise ValueError(f"unknown command {command!r}")
    from .kernels import set_threads

    saved = os.environ.get("WREATH_DC_KERNEL")
    if cfg.kernel:
        os.environ["WREATH_DC_KERNEL"] = cfg.kernel
    try:
        set_threads(cfg.workers)
        genset = standard_genset(cfg.spec, cfg.lamp_index)
        rows, note, status = HANDLERS[command](cfg, genset)
    finally:
        if saved is None:
            os.environ.pop("WREATH_DC_KERNEL", None)
        else:
            os.environ["WREATH_DC_KERNEL"] = saved
    metadata = {
        "tool": "wreathdc",
        "version": __version__,
        "command": command,
        "group": cfg.group,
        "genset": genset.labels,
        "radius": cfg.radius,
        "method": cfg.method,
        "lamp_index": cfg.lamp_index,
        "element_budget": cfg.element_budget,
        "pair_budget": cfg.pair_budget,
        "truncated": note is not None,
    }
    if note is not None:
        metadata["truncation"] = note
    text = render(rows, cfg.fmt, metadata)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    if note is not None:
        print(f"wreath-dc: truncated: {note}", file=sys.stderr)
        return EXIT_TRUNCATED if status == EXIT_OK else status
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wreath-dc", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--group", default="C2wrZ", help="C<q>wrZ, ZwrZ or table:<path>wrZ")
    p.add_argument("--radius", type=int, help="ball radius (default depends on the group)")
    p.add_argument("--method", help="dc: naive|structured; conj-dc: invariant|saturation|both; growth: count|bfs")
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--element-budget", type=int)
    p.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET)
    p.add_argument("--lamp-index", type=int, default=0, help="lamp generator sits at position i")
    p.add_argument("--conjugator-radius", type=int)
    p.add_argument("--predicate", default="base", help=f"density: one of {', '.join(PREDICATES)}")
    p.add_argument("--exponents", help="tau: comma-separated exponents (default 8,16,32,64)")
    p.add_argument("--kernel", choices=("numba", "numpy"), help="override WREATH_DC_KERNEL")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = parse_group_spec(args.group)
        budget = args.element_budget
        if budget is None:
            env = os.environ.get("WREATH_DC_BUDGET")
            budget = int(env) if env else DEFAULT_ELEMENT_BUDGET
        extra = {}
        if args.exponents:
            extra["exponents"] = tuple(int(x) for x in args.exponents.split(","))
        cfg = RunConfig(
            group=args.group, spec=spec,
            radius=default_radius(spec) if args.radius is None else args.radius,
            method=args.method, fmt=args.fmt, out=args.out, workers=args.workers,
            element_budget=budget, pair_budget=args.pair_budget, lamp_index=args.lamp_index,
            conjugator_radius=args.conjugator_radius, predicate=args.predicate,
            kernel=args.kernel, extra=extra,
        )
        return run(args.command, cfg)
    except (ValueError, NotImplementedError) as exc:
        print(f"wreath-dc: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
