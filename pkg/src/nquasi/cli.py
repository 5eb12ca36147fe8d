"""Command-line entry point: ``nquasi <subcommand> ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

from . import bounds, census4, constructions, io, trades, verify
from .config import DEFAULT_SEED, FORMATS, WORKERS_ENV, RunConfig
from .core import DEFAULT_MATERIALIZE_CAP, materialize
from .enumerator import DEFAULT_CELL_CAP, count_quasigroups
from .errors import ResourceError, UsageError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a,b got {text!r}") from None
    return a, b


def _range(text: str) -> range:
    try:
        if ":" in text:
            lo, hi = (int(x) for x in text.split(":"))
            return range(lo, hi + 1)
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A:B, got {text!r}") from None
    return range(v, v + 1)


def _mask(text: str) -> list[bool]:
    if not text or set(text) - {"0", "1"}:
        raise argparse.ArgumentTypeError(f"mask must be a 0/1 string, got {text!r}")
    return [c == "1" for c in text]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--workers", type=int, default=None,
                        help=f"worker processes (default: ${WORKERS_ENV} or 1)")
    common.add_argument("--cell-cap", type=int, default=DEFAULT_CELL_CAP,
                        help="largest k^n enumerated in full")
    common.add_argument("--materialize-cap", type=int, default=DEFAULT_MATERIALIZE_CAP,
                        help="largest table built in memory")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--format", dest="fmt", choices=FORMATS, default=None)

    p = _Parser(prog="nquasi", description="n-ary quasigroup counts, constructions and bounds")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("count", parents=[common], help="count n-ary quasigroups of order k")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--loops", action="store_true", help="count loops only")

    s = sub.add_parser("recur4", parents=[common], help="order-4 recurrence table")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--intermediates", action="store_true", help="include every intermediate column")

    s = sub.add_parser("census", parents=[common], help="classify all n-ary loops of order 4")
    s.add_argument("--n", type=int, required=True)

    s = sub.add_parser("construct", parents=[common], help="build a quasigroup table")
    kinds = s.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    c = kinds.add_parser("idempotent", parents=[common])
    c.add_argument("--m", type=int, required=True)
    c = kinds.add_parser("psi", parents=[common])
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--phi", type=Path, help="idempotent binary table of order m (JSON)")
    c = kinds.add_parser("big-psi", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c = kinds.add_parser("interleaved", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    for name in ("idempotent", "psi", "big-psi", "interleaved"):
        kinds.choices[name].add_argument("-o", "--output", type=Path)

    s = sub.add_parser("components", parents=[common], help="minimal {a,b}-components of a table")
    s.add_argument("--input", type=Path, required=True)
    s.add_argument("--pair", type=_pair, required=True)

    s = sub.add_parser("switch", parents=[common], help="switch a family of components")
    s.add_argument("--input", type=Path, required=True)
    s.add_argument("--family", type=Path, required=True)
    s.add_argument("--mask", type=_mask, required=True, help="0/1 string, one digit per member")
    s.add_argument("-o", "--output", type=Path)

    s = sub.add_parser("family", parents=[common], help="pairwise disjoint component family")
    s.add_argument("--input", type=Path, required=True)
    s.add_argument("--strategy", choices=trades.STRATEGIES, default="pair_partition")

    s = sub.add_parser("bounds", parents=[common], help="evaluate the closed-form bounds")
    s.add_argument("--n", type=_range, required=True, help="N, or A:B with --grid")
    s.add_argument("--k", type=_range, required=True, help="K, or A:B with --grid")
    s.add_argument("--grid", action="store_true", help="sweep the ranges into CSV")

    s = sub.add_parser("verify-paper", parents=[common], help="run every reproduction check")
    s.add_argument("--skip", action="append", default=[], help="check group or 'slow'")
    s.add_argument("--fixtures-dir", type=Path)
    return p


def _config(args) -> RunConfig:
    kw = dict(cell_cap=args.cell_cap, materialize_cap=args.materialize_cap, seed=args.seed)
    if args.workers is not None:
        kw["workers"] = args.workers
    if args.fmt is not None:
        kw["fmt"] = args.fmt
    return RunConfig(**kw)


def _write(text: str, out: TextIO, path: Optional[Path] = None) -> None:
    if path is None:
        out.write(text)
        return
    try:
        path.write_text(text)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e}") from None


def _load_phi(path: Path):
    if path.exists():
        return io.load_table(path)
    # a bare "fixtures/<name>.json" resolves to the packaged copy
    packaged = constructions.fixture_path(path.stem)
    if path.parent.name == "fixtures" and packaged.exists():
        return io.load_table(packaged)
    raise UsageError(f"cannot read {path}")


def _cmd_count(args, cfg, out) -> int:
    mode = "loops" if args.loops else "all"
    n = count_quasigroups(args.n, args.k, mode, cell_cap=cfg.cell_cap, workers=cfg.workers)
    if cfg.fmt == "json":
        out.write(json.dumps({"n": args.n, "k": args.k, "mode": mode, "count": str(n)}) + "\n")
    else:
        out.write(f"{n}\n")
    return EXIT_OK


def _cmd_recur4(args, cfg, out) -> int:
    if args.max_n < 1:
        raise UsageError("--max-n must be >= 1")
    rows = census4.q4_recurrence(args.max_n)
    fields = census4.RecurrenceRow.FIELDS if args.intermediates else ("n", "v", "Q")
    data = [{f: r.as_strings()[f] for f in fields} for r in rows]
    if cfg.fmt == "json":
        out.write(json.dumps(data) + "\n")
    else:
        w = csv.DictWriter(out, fieldnames=list(fields), lineterminator="\n")
        w.writeheader()
        w.writerows(data)
    return EXIT_OK


def _cmd_census(args, cfg, out) -> int:
    rec = census4.census(args.n)
    obj = rec.to_obj()
    obj["recurrence_mismatches"] = census4.census_mismatches(rec, census4.q4_recurrence(args.n)[-1])
    out.write(json.dumps(obj) + "\n")
    return EXIT_OK


def _cmd_construct(args, cfg, out) -> int:
    if args.kind == "idempotent":
        h = constructions.idempotent_quasigroup(args.m)
    elif args.kind == "psi":
        h = constructions.psi(args.m, _load_phi(args.phi) if args.phi else None)
    elif args.kind == "big-psi":
        h = materialize(constructions.big_psi(args.n, args.m), cfg.materialize_cap)
    else:
        if args.k ** args.n > cfg.materialize_cap:
            raise ResourceError(f"{args.k ** args.n} cells exceeds the materialization cap")
        h = constructions.interleaved_group(args.n, args.k)
    _write(io.dumps(h), out, args.output)
    return EXIT_OK


def _cmd_components(args, cfg, out) -> int:
    h = io.load_table(args.input)
    comps = trades.find_components(h, *args.pair, cap=cfg.materialize_cap)
    out.write(io.dumps({"components": comps}))
    return EXIT_OK


def _load_family(path: Path) -> list[trades.Component]:
    obj = io.load(path)
    if isinstance(obj, trades.Component):
        return [obj]
    if isinstance(obj, list) and all(isinstance(c, trades.Component) for c in obj):
        return obj
    raise UsageError(f"{path} does not hold a component family")


def _cmd_switch(args, cfg, out) -> int:
    h = io.load_table(args.input)
    fam = _load_family(args.family)
    _write(io.dumps(trades.switch_family(h, fam, args.mask, cap=cfg.materialize_cap)), out, args.output)
    return EXIT_OK


def _cmd_family(args, cfg, out) -> int:
    h = io.load_table(args.input)
    fam = trades.disjoint_family(h, args.strategy, cap=cfg.materialize_cap)
    obj = {
        "strategy": args.strategy, "count": len(fam), "sizes": [len(c) for c in fam],
        "bound": str(h.k ** h.n // 2 ** h.n), "components": [c.to_obj() for c in fam],
    }
    out.write(json.dumps(obj) + "\n")
    return EXIT_OK


GRID_FIELDS = ("n", "k", "precision_bits", "c_k", "upper_log2", "lower_log2_exponent",
               "trd_lower", "trd_upper", "trd_method")


def _cmd_bounds(args, cfg, out) -> int:
    if not args.grid:
        if len(args.n) != 1 or len(args.k) != 1:
            raise UsageError("ranges need --grid")
        rep = bounds.bounds_report(args.n[0], args.k[0], cap=cfg.materialize_cap)
        out.write(json.dumps(rep.to_obj()) + "\n")
        return EXIT_OK
    w = csv.DictWriter(out, fieldnames=list(GRID_FIELDS), lineterminator="\n")
    w.writeheader()
    for n in args.n:
        for k in args.k:
            row = bounds.bounds_report(n, k, cap=cfg.materialize_cap).to_obj()
            w.writerow({f: "" if row[f] is None else row[f] for f in GRID_FIELDS})
    return EXIT_OK


def _cmd_verify(args, cfg, out) -> int:
    def emit(r: verify.CheckResult) -> None:
        out.write(r.line() + "\n")
        out.flush()

    results = verify.run(cfg, set(args.skip), args.fixtures_dir, emit)
    failed = sum(not r.passed for r in results)
    out.write(f"{len(results) - failed} passed, {failed} failed\n")
    return EXIT_OK if failed == 0 else EXIT_FAIL


COMMANDS = {
    "count": _cmd_count, "recur4": _cmd_recur4, "census": _cmd_census, "construct": _cmd_construct,
    "components": _cmd_components, "switch": _cmd_switch, "family": _cmd_family,
    "bounds": _cmd_bounds, "verify-paper": _cmd_verify,
}


def dispatch(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None,
             err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg, out)
    except UsageError as e:
        err.write(f"nquasi: error: {e}\n")
        return EXIT_USAGE
    except ResourceError as e:
        err.write(f"nquasi: resource limit: {e}\n")
        return EXIT_RESOURCE
    except MemoryError:
        err.write("nquasi: resource limit: out of memory\n")
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
