"""Command line entry point: ``charp <command> ...``.

Exit codes: 0 positive verdict, 10 negative verdict (with witness), 2 usage or
input error, 3 input outside the supported range of a criterion.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

from . import __version__
from .cohom import HypersurfaceDatum, b1_table, hasse_witt
from .criteria import (
    PreconditionError,
    UnsupportedRange,
    Verdict,
    acm_check_b1,
    default_window,
    fedder_is_split,
    fsplit_equivalence_check,
    is_ordinary_curve,
    kunneth_cells,
    kunneth_ulrich_check,
    pushforward_acm_check,
    ulrich_check_curve,
    ulrich_twist_obstruction,
)
from .families import (
    FamilySpec,
    RetryBudgetExceeded,
    SingularFamilyError,
    cartier_manin_hyperelliptic,
    deuring_hasse,
    dwork_is_singular,
    legendre_h,
)
from .matfp import mat_rank
from .polyfp import ParseError

SCHEMA_VERSION = 1
EXIT_POSITIVE, EXIT_NEGATIVE, EXIT_USAGE, EXIT_RANGE = 0, 10, 2, 3

_FAMILY_ALIASES = {"legendre": "legendre-cubic"}


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=False, separators=(",", ":"))


def digest(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()[:16]


def _timestamp() -> str:
    # SOURCE_DATE_EPOCH pins the clock for byte-reproducible scan files
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = int(epoch) if epoch else int(time.time())
    return time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime(t))


# -- instance resolution ------------------------------------------------------

def spec_from_args(args: argparse.Namespace) -> FamilySpec:
    if getattr(args, "poly", None):
        if args.n is None:
            raise UsageError("--poly needs --n")
        text = args.poly
        path = Path(text)
        if len(text) < 256 and path.is_file():
            text = path.read_text().strip()
        return FamilySpec("custom", args.p, n=args.n, poly=text)
    if not args.family:
        raise UsageError("give --family or --poly")
    kind = _FAMILY_ALIASES.get(args.family, args.family)
    if kind == "fermat":
        return FamilySpec(kind, args.p, n=args.n, d=args.d if args.d is not None else args.n + 1)
    if kind == "dwork":
        return FamilySpec(kind, args.p, n=args.n, lam=args.lam or 0)
    if kind == "legendre-cubic":
        return FamilySpec(kind, args.p, n=2, d=3, lam=args.lam)
    if kind == "random-plane-curve":
        return FamilySpec(kind, args.p, n=2, d=args.d, seed=args.seed or 0)
    if kind == "random-hypersurface":
        return FamilySpec(kind, args.p, n=args.n, d=args.d, seed=args.seed or 0)
    raise UsageError(f"family {args.family!r} is not a single instance")


def parse_factor(text: str) -> FamilySpec:
    """``kind:key=val,...`` (e.g. ``fermat:p=7,n=2,d=3``) or a JSON object."""
    text = text.strip()
    if text.startswith("{"):
        return FamilySpec.from_json(text)
    kind, _, rest = text.partition(":")
    kind = _FAMILY_ALIASES.get(kind, kind)
    fields: dict[str, Any] = {}
    for item in filter(None, rest.split(",")):
        key, _, val = item.partition("=")
        key = {"lambda": "lam"}.get(key, key)
        fields[key] = int(val)
    if kind == "legendre-cubic":
        fields.setdefault("n", 2)
        fields.setdefault("d", 3)
    if kind == "fermat" and "d" not in fields and "n" in fields:
        fields["d"] = fields["n"] + 1
    return FamilySpec(kind, **fields)


class UsageError(ValueError):
    pass


# -- reports ---------------------------------------------------------------------

@dataclass
class Report:
    command: str
    family: FamilySpec | None
    X: HypersurfaceDatum | None
    verdicts: list[Verdict]
    window: Any = None
    notes: list[str] | None = None
    extra: dict[str, Any] | None = None

    def as_dict(self) -> dict[str, Any]:
        out = {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "family": self.family.as_dict() if self.family else None,
            "p": self.X.p if self.X else (self.family.p if self.family else None),
            "n": self.X.n if self.X else (self.family.n if self.family else None),
            "d": self.X.d if self.X else (self.family.d if self.family else None),
            "verdicts": [v.as_dict() for v in self.verdicts],
            "window": self.window,
            "tool_version": __version__,
        }
        if self.extra:
            out.update(self.extra)
        if self.notes:
            out["notes"] = self.notes
        return out

    @property
    def positive(self) -> bool:
        return all(v.positive for v in self.verdicts)


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return canonical_json(report.as_dict())
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["command", "family", "kind", "value", "summary", "evidence_digest"])
        for v in report.verdicts:
            fam = report.family.to_json() if report.family else ""
            w.writerow([report.command, fam, v.kind, v.value, v.summary(),
                        digest(v.evidence)])
        return buf.getvalue().rstrip("\n")
    lines = [f"## {report.command}: {report.X!r}" if report.X else f"## {report.command}", ""]
    if report.window is not None:
        lines += [f"window: {report.window}", ""]
    lines += ["| kind | value | summary |", "|---|---|---|"]
    for v in report.verdicts:
        lines.append(f"| {v.kind} | {v.value} | {v.summary()} |")
    for v in report.verdicts:
        cells = v.evidence.get("cells")
        if cells and "kernel_dim" in cells[0]:
            lines += ["", "| m | dim H^top(O_X(m)) | dim ker F |", "|---|---|---|"]
            lines += [f"| {c['m']} | {c['source_dim']} | {c['kernel_dim']} |" for c in cells]
        if "witness" in v.evidence:
            lines += ["", f"witness: {json.dumps(v.evidence['witness'])}"]
    for note in report.notes or []:
        lines += ["", f"note: {note}"]
    return "\n".join(lines)


# -- single-instance commands ---------------------------------------------------------

def _single(command: str, check: Callable[[HypersurfaceDatum, argparse.Namespace], list[Verdict]],
            windowed: bool = False):
    def run(args: argparse.Namespace) -> Report:
        spec = spec_from_args(args)
        X = spec.build()
        verdicts = check(X, args)
        window = None
        if windowed:
            window = args.window if args.window is not None else default_window(X)
        return Report(command, spec, X, verdicts, window)
    return run


cmd_fedder = _single("fedder", lambda X, a: [fedder_is_split(X)])
cmd_ordinary = _single("ordinary", lambda X, a: [is_ordinary_curve(X)])
cmd_ulrich_curve = _single("ulrich-curve", lambda X, a: [ulrich_check_curve(X)])
cmd_acm_b1 = _single("acm-b1", lambda X, a: [acm_check_b1(X, a.window)], windowed=True)
cmd_fsplit_equiv = _single("fsplit-equiv", lambda X, a: [fsplit_equivalence_check(X)])
cmd_pushforward_acm = _single("pushforward-acm", lambda X, a: [pushforward_acm_check(X, a.window)],
                              windowed=True)


def _obstruction(X: HypersurfaceDatum, args: argparse.Namespace) -> list[Verdict]:
    lo, hi = args.t_range
    return [ulrich_twist_obstruction(X, range(lo, hi + 1))]


cmd_obstruction = _single("obstruction", _obstruction)


def cmd_b1_table(args: argparse.Namespace) -> Report:
    spec = spec_from_args(args)
    X = spec.build()
    lo, hi = args.twists
    table = b1_table(X, range(lo, hi + 1))
    v = Verdict("b1-table", True, {"rows": table.as_dict()})
    return Report("b1-table", spec, X, [v], window=[lo, hi])


def cmd_kunneth(args: argparse.Namespace) -> Report:
    specs = [parse_factor(t) for t in args.factors]
    m = len(specs)
    factors = [s.build() for s in specs]
    notes = []
    if len({X.p for X in factors}) > 1:
        notes.append("factors live in different characteristics; the product check is numerical only")
    tables = [b1_table(X, range(1 - m, m)) for X in factors]
    verdict = kunneth_ulrich_check(tables)
    verdict.evidence["factor_tables"] = [t.as_dict() for t in tables]
    verdict.evidence["cells"] = kunneth_cells(tables)
    return Report("kunneth", None, None, [verdict], window=[1 - m, m - 1], notes=notes,
                  extra={"factors": [s.as_dict() for s in specs]})


# -- scans ---------------------------------------------------------------------------------

def _scan_cell(spec_json: str) -> list[dict[str, Any]]:
    spec = FamilySpec.from_json(spec_json)
    out: list[Verdict] = []
    if spec.kind == "dwork":
        smooth = not dwork_is_singular(spec.p, spec.n, spec.lam)
        X = spec.build()
        out.append(Verdict("smooth", smooth, {"closed_form": True}))
        out.append(fedder_is_split(X))
        if spec.n == 2 and smooth:
            out.append(is_ordinary_curve(X))
    elif spec.kind == "legendre-cubic":
        X = spec.build()
        hw = hasse_witt(X)
        deu = deuring_hasse(spec.p, spec.lam)
        cm = cartier_manin_hyperelliptic(spec.p, legendre_h(spec.lam), 1)
        triple = [mat_rank(hw) == 1, deu != 0, mat_rank(cm) == 1]
        ev = {"hasse_witt": hw.tolist(), "deuring": deu, "cartier_manin": cm.tolist(),
              "invertible": triple}
        if len(set(triple)) > 1:
            ev["witness"] = {"lambda": spec.lam, "disagreement": triple}
        out.append(Verdict("oracle-agreement", len(set(triple)) == 1, ev))
        out.append(Verdict("ordinary", triple[0], {"hasse_witt": hw.tolist()}))
    elif spec.kind in ("random-plane-curve", "random-hypersurface"):
        X = spec.build()
        if X.n == 2:
            out.append(is_ordinary_curve(X))
            out.append(ulrich_check_curve(X))
        if X.canonical_level == 0 and X.dim >= 2:
            out.append(fsplit_equivalence_check(X))
        elif X.canonical_level <= 0:
            out.append(fedder_is_split(X))
    else:
        raise UsageError(f"cannot scan family {spec.kind!r}")
    return [v.as_dict() for v in out]


def _parse_range(text: str, p: int | None = None) -> list[int]:
    if text == "all":
        if p is None:
            raise UsageError("'all' needs --p")
        return list(range(p))
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x]


def scan_specs(args: argparse.Namespace) -> list[FamilySpec]:
    kind = _FAMILY_ALIASES.get(args.family, args.family)
    if kind == "dwork":
        return [FamilySpec("dwork", args.p, n=args.n, lam=lam) for lam in _parse_range(args.lam_range, args.p)]
    if kind == "legendre-cubic":
        lams = [lam for lam in _parse_range(args.lam_range, args.p) if lam % args.p not in (0, 1)]
        return [FamilySpec("legendre-cubic", args.p, n=2, d=3, lam=lam) for lam in lams]
    if kind in ("random-plane-curve", "random-hypersurface"):
        n = 2 if kind == "random-plane-curve" else args.n
        return [FamilySpec(kind, args.p, n=n, d=args.d, seed=s) for s in _parse_range(args.seeds)]
    raise UsageError(f"cannot scan family {args.family!r}")


def read_scan(path: Path) -> list[dict[str, Any]]:
    if not path.exists():
        return []
    return [json.loads(line) for line in path.read_text().splitlines() if line.strip()]


def run_scan(specs: Sequence[FamilySpec], out: Path | None, jobs: int = 1) -> tuple[list[dict], list[dict]]:
    """Evaluate missing cells and append them in parameter order.

    Returns ``(all_records, new_records)`` for the cells in ``specs``.
    """
    existing = {}
    if out is not None:
        for rec in read_scan(out):
            existing[FamilySpec.from_dict(rec["family"]).to_json()] = rec
    todo = [s for s in specs if s.to_json() not in existing]
    keys = [s.to_json() for s in todo]
    if jobs > 1 and len(keys) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_cell, keys))
    else:
        results = [_scan_cell(k) for k in keys]
    new = []
    for spec, verdicts in zip(todo, results):
        rec = {
            "schema_version": SCHEMA_VERSION,
            "timestamp": _timestamp(),
            "family": spec.as_dict(),
            "command": "scan",
            "verdicts": verdicts,
            "evidence_digest": digest(verdicts),
            "tool_version": __version__,
        }
        new.append(rec)
    if out is not None and new:
        with out.open("a") as fh:
            for rec in new:
                fh.write(canonical_json(rec) + "\n")
    by_key = {**existing, **{FamilySpec.from_dict(r["family"]).to_json(): r for r in new}}
    return [by_key[s.to_json()] for s in specs], new


def summarize(records: Sequence[dict]) -> dict[str, Any]:
    counts: dict[str, dict[str, int]] = {}
    for rec in records:
        for v in rec["verdicts"]:
            c = counts.setdefault(v["kind"], {"true": 0, "false": 0})
            c["true" if v["value"] is True else "false"] += 1
    out: dict[str, Any] = {"cells": len(records), "counts": counts}
    negatives = {}
    for rec in records:
        for v in rec["verdicts"]:
            if v["value"] is False:
                fam = rec["family"]
                negatives.setdefault(v["kind"], []).append(fam.get("lam", fam.get("seed")))
    out["negative_parameters"] = negatives
    return out


def cmd_scan(args: argparse.Namespace) -> tuple[dict, int]:
    specs = scan_specs(args)
    out = Path(args.out) if args.out else None
    records, new = run_scan(specs, out, args.jobs)
    summary = summarize(records)
    summary["new_rows"] = len(new)
    summary["family"] = args.family
    return summary, EXIT_POSITIVE


# -- argument parsing ------------------------------------------------------------------------

def _int_pair(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def _instance_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--family", choices=["fermat", "dwork", "legendre", "legendre-cubic",
                                         "random-plane-curve", "random-hypersurface"])
    sp.add_argument("--poly", help="polynomial text or a file containing it")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--lambda", dest="lam", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--format", choices=["json", "csv", "md"], default="md")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charp", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn, windowed in [
        ("fedder", cmd_fedder, False),
        ("ordinary", cmd_ordinary, False),
        ("ulrich-curve", cmd_ulrich_curve, False),
        ("acm-b1", cmd_acm_b1, True),
        ("fsplit-equiv", cmd_fsplit_equiv, False),
        ("pushforward-acm", cmd_pushforward_acm, True),
    ]:
        sp = sub.add_parser(name)
        _instance_args(sp)
        if windowed:
            sp.add_argument("--window", type=int, help="twist window M (default max(2d, p))")
        sp.set_defaults(func=fn)
    sp = sub.add_parser("obstruction")
    _instance_args(sp)
    sp.add_argument("--t-range", type=_int_pair, default=(-10, 10), help="lo:hi")
    sp.set_defaults(func=cmd_obstruction)
    sp = sub.add_parser("b1-table")
    _instance_args(sp)
    sp.add_argument("--twists", type=_int_pair, default=(-2, 2), help="lo:hi")
    sp.set_defaults(func=cmd_b1_table)
    sp = sub.add_parser("kunneth")
    sp.add_argument("--factors", nargs="+", required=True,
                    help="curve specs such as fermat:p=7,n=2,d=3 or JSON objects")
    sp.add_argument("--format", choices=["json", "csv", "md"], default="md")
    sp.set_defaults(func=cmd_kunneth)
    sp = sub.add_parser("scan")
    sp.add_argument("--family", required=True,
                    choices=["dwork", "legendre", "legendre-cubic", "random-plane-curve", "random-hypersurface"])
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--d", type=int)
    sp.add_argument("--lambda", dest="lam_range", default="all", help="all | lo:hi | a,b,c")
    sp.add_argument("--seeds", default="0:9", help="lo:hi | a,b,c")
    sp.add_argument("--jobs", type=int, default=int(os.environ.get("CHARP_JOBS", "1")))
    sp.add_argument("--out", help="JSONL file; existing cells are skipped")
    sp.add_argument("--format", choices=["json", "md"], default="json")
    sp.set_defaults(func=cmd_scan)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        result = args.func(args)
    except UnsupportedRange as exc:
        print(f"unsupported range: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except (UsageError, PreconditionError, SingularFamilyError, ParseError, ValueError,
            RetryBudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if isinstance(result, tuple):
        summary, code = result
        if args.format == "json":
            print(canonical_json(summary))
        else:
            print("\n".join(f"- {k}: {json.dumps(v)}" for k, v in summary.items()))
        return code
    print(render(result, args.format))
    return EXIT_POSITIVE if result.positive else EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
