"""Command line front end: ``invforge verify | invariants | hilbert``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .constructions import CaseSpec, build_suite
from .gf import Q_CAP, FieldError, field_of_order, prime_power
from .groups import ENUMERATION_CAP, PAIRINGS, Group, Space
from .lab import (default_max_degree, hilbert_function, invariant_basis, parallel_map,
                  verify_case)
from .mpoly import to_text

CASE_GROUPS = (Group.GL2, Group.SL2, Group.O2)
FORMATS = ("json", "csv", "text")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    cases: list[tuple[Group, Space]] = field(default_factory=list)
    q_list: list[int] = field(default_factory=lambda: [2, 3])
    max_degree: Optional[int] = None
    output: Optional[str] = None
    format: str = "text"


def _pairs(group: Optional[str], space: Optional[str]) -> list[tuple[Group, Space]]:
    out = []
    for g in CASE_GROUPS:
        if group and g.value != group:
            continue
        for s in Space:
            if space and s.value != space:
                continue
            if s in PAIRINGS[g]:
                out.append((g, s))
    if not out:
        raise UsageError(f"no case for group={group} space={space}")
    return out


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}")
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    return data


def resolve(args: argparse.Namespace) -> RunConfig:
    """Merge the optional config file with the flags (flags win)."""
    cfg = load_config(args.config) if args.config else {}
    if args.group or args.space:
        cases = _pairs(args.group, args.space)
    elif "cases" in cfg:
        cases = []
        for c in cfg["cases"]:
            cases += _pairs(c.get("group"), c.get("space"))
    else:
        cases = _pairs(None, None)
    q_list = args.q or cfg.get("q_list") or [2, 3]
    max_degree = args.max_degree if args.max_degree is not None else cfg.get("max_degree")
    fmt = args.format or cfg.get("format") or ("json" if (args.out or cfg.get("output", "")).endswith(".json") else "text")
    if fmt not in FORMATS:
        raise UsageError(f"unknown format {fmt}")
    for q in q_list:
        if not isinstance(q, int) or prime_power(q) is None or q > Q_CAP:
            raise UsageError(f"q = {q} is not a supported prime power")
    if max_degree is not None and (not isinstance(max_degree, int) or max_degree < 0):
        raise UsageError("max degree must be a non-negative integer")
    return RunConfig(cases, list(q_list), max_degree, args.out or cfg.get("output"), fmt)


def selections(cfg: RunConfig) -> list[CaseSpec]:
    out = []
    for q in cfg.q_list:
        F = field_of_order(q)
        for g, s in cfg.cases:
            if g is not Group.O2 and q > ENUMERATION_CAP:
                raise UsageError(f"{g.value} is enumerated only for q <= {ENUMERATION_CAP}")
            out.append(CaseSpec(g, s, F))
    return out


def emit(text: str, path: Optional[str]):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands -------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    cfg = resolve(args)
    cases = selections(cfg)
    reports = parallel_map(lambda c: verify_case(c, cfg.max_degree), cases, args.threads)
    if cfg.format == "json":
        text = json.dumps([r.to_dict(args.timings) for r in reports], indent=2) + "\n"
    elif cfg.format == "csv":
        parts = [r.dims_csv() for r in reports]
        text = parts[0] + "".join(p.split("\n", 1)[1] for p in parts[1:])
    else:
        lines = []
        for r in reports:
            lines.append(f"{r.case}: {'PASS' if r.passed else 'FAIL'}")
            for c in r.checks:
                extra = f" ({c.seconds:.2f}s)" if args.timings else ""
                lines.append(f"  [{'ok' if c.passed else 'FAIL'}] {c.name}: expected {c.expected}, "
                             f"observed {c.observed}{extra}")
        text = "\n".join(lines) + "\n"
    emit(text, cfg.output)
    return 0 if all(r.passed for r in reports) else 1


def cmd_invariants(args: argparse.Namespace) -> int:
    cfg = resolve(args)
    if args.degree is not None and args.degree < 0:
        raise UsageError("degree must be non-negative")
    blocks = []
    for case in selections(cfg):
        suite = build_suite(case)
        entry = {"case": case.describe(), "note": suite.note,
                 "invariants": {k: to_text(v) for k, v in suite.named().items()}}
        if args.degree is not None:
            entry["basis"] = [to_text(f) for f in invariant_basis(case.action(), args.degree, verify=False)]
        blocks.append(entry)
    if cfg.format == "json":
        text = json.dumps(blocks, indent=2) + "\n"
    else:
        lines = []
        for b in blocks:
            c = b["case"]
            lines.append(f"# {c['group']} on {c['space']}, q = {c['q']}" + (f" ({b['note']})" if b["note"] else ""))
            lines += [f"{k} = {v}" for k, v in b["invariants"].items()]
            if "basis" in b:
                lines.append(f"basis in degree {args.degree}: {len(b['basis'])}")
                lines += [f"  {f}" for f in b["basis"]]
        text = "\n".join(lines) + "\n"
    emit(text, cfg.output)
    return 0


def cmd_hilbert(args: argparse.Namespace) -> int:
    cfg = resolve(args)
    rows = []
    for case in selections(cfg):
        D = cfg.max_degree if cfg.max_degree is not None else default_max_degree(case)
        data = hilbert_function(case.action(), D, args.threads)
        rows.append((case, data))
    if cfg.format == "json":
        text = json.dumps([{"case": c.describe(), "dims": d.dims, "expected_dims": d.expected}
                           for c, d in rows], indent=2) + "\n"
    elif cfg.format == "csv":
        lines = ["group,space,q,degree,computed,expected"]
        for c, d in rows:
            lines += [f"{c.group.value},{c.space.value},{c.q},{i},{x},{y}"
                      for i, (x, y) in enumerate(zip(d.dims, d.expected))]
        text = "\n".join(lines) + "\n"
    else:
        lines = []
        for c, d in rows:
            lines.append(f"# {c.group.value} on {c.space.value}, q = {c.q}")
            lines.append("degree   " + " ".join(f"{i:>5}" for i in range(len(d.dims))))
            lines.append("computed " + " ".join(f"{x:>5}" for x in d.dims))
            lines.append("expected " + " ".join(f"{x:>5}" for x in d.expected))
        text = "\n".join(lines) + "\n"
    emit(text, cfg.output)
    return 0 if all(d.matches for _, d in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="invforge", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", choices=[g.value for g in CASE_GROUPS])
    common.add_argument("--space", choices=[s.value for s in Space])
    common.add_argument("--q", type=int, action="append", help="field order (repeatable)")
    common.add_argument("--max-degree", type=int)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--config", help="JSON run configuration; flags take precedence")
    common.add_argument("--threads", type=int, help="worker threads (default: INVFORGE_THREADS or 1)")

    p = sub.add_parser("verify", parents=[common], help="run the case checks")
    p.add_argument("--timings", action="store_true", help="include per-check timings")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("invariants", parents=[common], help="print the constructed invariants")
    p.add_argument("--degree", type=int, help="also print an invariant basis in this degree")
    p.set_defaults(func=cmd_invariants)
    p = sub.add_parser("hilbert", parents=[common], help="computed vs expected dimensions")
    p.set_defaults(func=cmd_hilbert)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, FieldError) as exc:
        print(f"invforge: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
