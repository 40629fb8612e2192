"""Command line front-end: read an operation table, extend it along a monad,
run the requested law checks and print a report.

Exit codes: 0 all checks pass, 1 a law failed, 2 bad input or config,
3 resource guard.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from .core import DEFAULT_GUARD, LawReport, check_monad_laws, get_monad
from .errors import CapabilityError, MonadExtError, ParseError, PreconditionError, ResourceGuardError
from .extend import (check_extension_associativity, check_extension_axioms, check_homomorphism,
                     check_oracle, check_uniqueness, extended_cayley_table, idempotents,
                     semigroup_endomorphisms)
from .finset import BinOpTable, FinSet, associativity_witness
from .tensor import check_tensor_associativity, check_tensor_oracle, check_tensor_unit
from .zoo import MONADS

SCHEMA = "monadext.report/1"
CHECKS = ("laws", "axioms", "uniqueness", "associativity", "tensor", "homomorphism", "oracles",
          "idempotents")
ENUMERABLE_ONLY = {"idempotents"}
FORBIDDEN = set("(),{}[]:")


class ConfigError(MonadExtError):
    pass


def parse_table(text):
    """Parse ``{"elements": [...], "table": [[...], ...]}`` into a square table."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(doc, dict) or "elements" not in doc or "table" not in doc:
        raise ParseError('expected an object with "elements" and "table"')
    elements = doc["elements"]
    if not isinstance(elements, list) or not elements:
        raise ParseError('"elements" must be a nonempty list')
    seen = set()
    for k, e in enumerate(elements):
        if not isinstance(e, str) or not e or e != e.strip():
            raise ParseError(f"elements[{k}]: labels must be nonempty strings without outer spaces")
        bad = FORBIDDEN & set(e)
        if bad:
            raise ParseError(f"elements[{k}]: label {e!r} uses reserved characters {''.join(sorted(bad))}")
        if e in seen:
            raise ParseError(f"elements[{k}]: duplicate label {e!r}")
        seen.add(e)
    x = FinSet(elements)
    rows = doc["table"]
    n = len(elements)
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f'"table" must have {n} rows')
    cells = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"row {i}: expected {n} entries")
        out = []
        for j, v in enumerate(row):
            if v not in seen:
                raise ParseError(f"row {i}, column {j}: unknown label {v!r}")
            out.append(x.index(v))
        cells.append(out)
    return BinOpTable.square(x, cells)


def table_to_json(op):
    return json.dumps({"elements": list(op.left.labels),
                       "table": [[op.out[v] for v in row] for row in op.table]})


@dataclass
class JobConfig:
    monad: str
    input: str | None = None
    checks: tuple = CHECKS
    mode: str = "exhaustive"
    seed: int = 42
    samples: int = 10_000
    max_carrier: int = 1000
    allow_nonassociative: bool = False
    timing: bool = False

    def validate(self):
        if self.monad not in MONADS:
            raise ConfigError(f"unknown monad {self.monad!r}")
        unknown = [c for c in self.checks if c not in CHECKS]
        if unknown:
            raise ConfigError(f"unknown checks: {', '.join(unknown)}")
        if self.mode not in ("exhaustive", "sampled"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if not get_monad(self.monad).enumerable:
            blocked = [c for c in self.checks if c in ENUMERABLE_ONLY]
            if blocked:
                raise ConfigError(f"{self.monad} is not enumerable; cannot run {', '.join(blocked)}")
        if self.samples < 1:
            raise ConfigError("samples must be positive")

    def echo(self):
        return {"monad": self.monad, "input": self.input, "checks": list(self.checks),
                "mode": self.mode, "seed": self.seed, "samples": self.samples,
                "max_carrier": self.max_carrier, "allow_nonassociative": self.allow_nonassociative}


@dataclass
class Report:
    job: dict
    checks: list = field(default_factory=list)
    table: dict | None = None
    timing: dict | None = None

    @property
    def exit_code(self):
        return 1 if any(c.status == "fail" for c in self.checks) else 0

    def to_dict(self):
        d = {"schema": SCHEMA, "job": self.job, "checks": [c.to_dict() for c in self.checks],
             "timing": self.timing}
        if self.table is not None:
            d["table"] = self.table
        return d


def run_job(cfg, op):
    """Run the configured checks on ``op``; raises on config and guard errors."""
    cfg.validate()
    monad = get_monad(cfg.monad)
    start = time.perf_counter()
    witness = associativity_witness(op)
    associative = witness is None
    if "associativity" in cfg.checks and not associative and not cfg.allow_nonassociative:
        raise PreconditionError(
            "refusing the associativity check: the input table is not associative at "
            "(%s,%s,%s); pass --allow-nonassociative to run it anyway" % tuple(op.left[i] for i in witness))
    kw = dict(mode=cfg.mode, seed=cfg.seed, samples=cfg.samples, guard=DEFAULT_GUARD)
    job = cfg.echo()
    job["elements"] = list(op.left.labels)
    job["associative"] = associative
    report = Report(job)

    ext = None
    if monad.enumerable:
        size = monad.count(len(op.left))
        if size is None or size > cfg.max_carrier:
            raise ResourceGuardError(
                f"|TX| for {cfg.monad} over {len(op.left)} points exceeds --max-carrier {cfg.max_carrier}")
        if associative or cfg.allow_nonassociative:
            ext = extended_cayley_table(monad, op, allow_nonassociative=True)
            report.table = {"carrier": list(ext.left.labels), "rows": ext.rows()}

    x = op.left
    for name in cfg.checks:
        if name == "laws":
            r = check_monad_laws(monad, x, **kw)
        elif name == "axioms":
            r = check_extension_axioms(monad, op, **kw)
        elif name == "uniqueness":
            r = check_uniqueness(monad, op, **kw)
        elif name == "associativity":
            r = check_extension_associativity(monad, op, **kw)
        elif name == "tensor":
            r = LawReport.combine("tensor", [
                check_tensor_unit(monad, x, x),
                check_tensor_associativity(monad, x, x, x, **kw),
                check_tensor_oracle(monad, x, x, **kw),
            ])
        elif name == "homomorphism":
            endos = semigroup_endomorphisms(op)
            subs = []
            for h in endos:
                sub = check_homomorphism(monad, op, op, h, h, h, **kw)
                sub.name = "h=[" + ",".join(x[v] for v in h.table) + "]"
                subs.append(sub)
            r = LawReport.combine("homomorphism", subs,
                                  details={"endomorphisms": len(endos)})
        elif name == "oracles":
            r = check_oracle(monad, op, **kw)
        elif name == "idempotents":
            found = idempotents(ext) if ext is not None else []
            r = LawReport("idempotents", "pass", len(ext.left) if ext else 0,
                          details={"idempotents": [str(e) for e in found]},
                          note=None if ext else "no table (non-associative input)")
        report.checks.append(r)
    if cfg.timing:
        report.timing = {"seconds": round(time.perf_counter() - start, 3)}
    return report


def emit_report(report, fmt="json"):
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    job = report.job
    out = [f"monad: {job['monad']}   elements: {{{','.join(job['elements'])}}}   "
           f"associative: {'yes' if job['associative'] else 'no'}"]
    if report.table is not None:
        carrier = report.table["carrier"]
        width = max(len(s) for s in carrier)
        out.append("")
        out.append("extended table:")
        out.append(" " * (width + 3) + "  ".join(s.ljust(width) for s in carrier))
        for label, row in zip(carrier, report.table["rows"]):
            out.append(label.ljust(width) + " | " + "  ".join(s.ljust(width) for s in row))
    out.append("")
    for c in report.checks:
        out.extend(c.lines())
        if c.name == "idempotents":
            out.append("  " + ", ".join(c.details["idempotents"]))
    if report.timing:
        out.append(f"time: {report.timing['seconds']}s")
    return "\n".join(out) + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="monadext",
                                description="Extend a binary operation along a monad and check the laws.")
    p.add_argument("--monad", required=True, choices=sorted(MONADS))
    p.add_argument("--input", required=True, help="JSON table file, or - for stdin")
    p.add_argument("--check", default=",".join(CHECKS),
                   help="comma separated subset of: " + ",".join(CHECKS))
    p.add_argument("--mode", default="exhaustive", choices=["exhaustive", "sampled"])
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--max-carrier", type=int, default=1000, help="largest |TX| to materialize")
    p.add_argument("--format", default="json", choices=["json", "text"])
    p.add_argument("--allow-nonassociative", action="store_true")
    p.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte stability)")
    p.add_argument("--output", help="write the report here instead of stdout")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    checks = tuple(c.strip() for c in args.check.split(",") if c.strip())
    cfg = JobConfig(args.monad, args.input, checks, args.mode, args.seed, args.samples,
                    args.max_carrier, args.allow_nonassociative, args.timing)
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        op = parse_table(text)
        report = run_job(cfg, op)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ResourceGuardError as e:
        print(f"resource guard: {e}", file=sys.stderr)
        return 3
    except (ParseError, ConfigError, PreconditionError, CapabilityError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    doc = emit_report(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(doc)
    else:
        sys.stdout.write(doc)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
