"""Command-line interface.

Exit codes: 0 ok, 1 usage error, 2 verification mismatch, 3 invalid input
or budget refusal.

Verify rows use the columns
``n,l,t,formula,brute_force,verdict,witness,tuples_examined,tuples_pruned``
with the witness written as semicolon-joined bit strings.  JSON output is a
list with one flat object per CSV row.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import sys
from dataclasses import dataclass

from .bitseq import as_word, deletion_ball
from .combinatorics import (
    CountMemo,
    ball_size_D,
    intersection_bound_N,
    intersection_bound_N_recursive,
)
from .errors import DomainError
from .extremal import brute_force_max, extremal_family, intersection_size, max_n_for
from .reconstruct import (
    check_guarantee,
    candidates,
    parse_reads,
    sample_reads,
    worst_case_reads,
)

log = logging.getLogger("seqrecon")

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_INVALID = 0, 1, 2, 3

TABLE_FIELDS = ["n", "l", "t", "D", "N_formula", "N_recursive", "equal"]
VERIFY_FIELDS = ["n", "l", "t", "formula", "brute_force", "verdict", "witness", "tuples_examined", "tuples_pruned"]
RECONSTRUCT_FIELDS = [
    "n", "l", "t", "read_count", "threshold", "guarantee_met",
    "list_within_bound", "candidate_count", "candidates",
]
WITNESS_FIELDS = ["n", "l", "t", "centers", "read_count", "reads", "candidate_count", "candidates"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which is reserved for mismatches here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    n: list[int]
    ell: list[int]
    t: list[int]
    single_point: bool
    threads: int
    seed: int
    fmt: str
    out: str | None
    x: str | None
    reads: str | None
    assert_roundtrip: bool


def _parse_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(text)]
    except ValueError:
        raise UsageError(f"malformed range {text!r}; expected A..B or an integer") from None


def _axis(single: int | None, rng: str | None, name: str, required: bool) -> tuple[list[int], bool]:
    if single is not None and rng is not None:
        raise UsageError(f"give either --{name} or --{name}-range, not both")
    if single is not None:
        return [single], True
    if rng is not None:
        return _parse_range(rng), False
    if required:
        raise UsageError(f"--{name} or --{name}-range is required")
    return [], True


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--ell", type=int, help="number of balls / list size bound plus one")
    common.add_argument("--t", type=int, help="number of deletions")
    common.add_argument("--n-range", help="inclusive range A..B")
    common.add_argument("--ell-range", help="inclusive range A..B")
    common.add_argument("--t-range", help="inclusive range A..B")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", dest="fmt", choices=["csv", "json"], default="csv")
    common.add_argument("--out", help="output path (default: standard output)")
    common.add_argument("--x", help="a binary word, e.g. 1010")
    common.add_argument("--reads", help="read file, one read per line")
    common.add_argument("--assert-roundtrip", action="store_true",
                        help="re-evaluate every emitted witness and fail on disagreement")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="seqrecon", description="Deletion-ball combinatorics and list reconstruction.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)
    sub.add_parser("table", parents=[common], help="tabulate D(n,t) and N_l(n,t)")
    sub.add_parser("verify", parents=[common], help="exhaustively check the intersection formula")
    sub.add_parser("ball", parents=[common], help="list the deletion ball of --x")
    sub.add_parser("reconstruct", parents=[common], help="decode a read file (or reads sampled from --x)")
    sub.add_parser("witness", parents=[common], help="print the worst-case read set and its candidates")
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    grid_cmds = {"table", "verify"}
    needs = args.subcommand in grid_cmds
    n, n1 = _axis(args.n, args.n_range, "n", needs)
    ell, l1 = _axis(args.ell, args.ell_range, "ell", args.subcommand in {"table", "verify"})
    t, t1 = _axis(args.t, args.t_range, "t", args.subcommand in {"table", "verify", "ball", "witness"})
    if args.threads < 1:
        raise DomainError(f"--threads must be positive, got {args.threads}")
    return RunConfig(
        subcommand=args.subcommand,
        n=n, ell=ell, t=t,
        single_point=n1 and l1 and t1,
        threads=args.threads,
        seed=args.seed,
        fmt=args.fmt,
        out=args.out,
        x=args.x,
        reads=args.reads,
        assert_roundtrip=args.assert_roundtrip,
    )


def _fmt_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def render(rows: list[dict], fields: list[str], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt_value(v) for k, v in row.items()})
    return buf.getvalue()


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _single(values: list[int], name: str) -> int:
    if len(values) != 1:
        raise UsageError(f"--{name} must be a single value for this subcommand")
    return values[0]


def run_table(cfg: RunConfig) -> int:
    if any(ell < 2 for ell in cfg.ell):
        raise DomainError("l must be at least 2 throughout the grid")
    memo = CountMemo()
    rows = []
    ok = True
    for n, ell, t in itertools.product(cfg.n, cfg.ell, cfg.t):
        closed = intersection_bound_N(n, ell, t)
        rec = intersection_bound_N_recursive(n, ell, t, memo)
        ok &= closed == rec
        rows.append({"n": n, "l": ell, "t": t, "D": ball_size_D(n, t),
                     "N_formula": closed, "N_recursive": rec, "equal": closed == rec})
    _emit(cfg, render(rows, TABLE_FIELDS, cfg.fmt))
    return EXIT_OK if ok else EXIT_MISMATCH


def _verify_grid(cfg: RunConfig) -> list[tuple[int, int, int]]:
    if any(ell < 2 for ell in cfg.ell):
        raise DomainError("l must be at least 2 throughout the grid")
    points = []
    for n, ell, t in itertools.product(cfg.n, cfg.ell, cfg.t):
        valid = ell >= 2 and t >= 1 and n >= t + ell - 1
        if not valid:
            if cfg.single_point:
                raise DomainError(f"point n={n}, l={ell}, t={t} needs l >= 2, t >= 1 and n >= t + l - 1")
            continue
        points.append((n, ell, t))
    for n, ell, t in points:
        if n > max_n_for(ell):
            raise DomainError(
                f"point n={n}, l={ell}, t={t} exceeds the exhaustive-search budget n <= {max_n_for(ell)}"
            )
    return points


def run_verify(cfg: RunConfig) -> int:
    points = _verify_grid(cfg)
    rows = []
    status = EXIT_OK
    for n, ell, t in points:
        report = brute_force_max(n, ell, t, thread_count=cfg.threads)
        if cfg.assert_roundtrip and intersection_size(report.witness, t) != report.max_value:
            log.error("witness round-trip failed at n=%d l=%d t=%d", n, ell, t)
            status = EXIT_MISMATCH
        if report.verdict.value != "match":
            if report.asserted:
                log.error("MISMATCH at n=%d l=%d t=%d: search %d, formula %d",
                          n, ell, t, report.max_value, report.formula_value)
                status = EXIT_MISMATCH
            else:
                log.warning("finding (not asserted, t < l-1) at n=%d l=%d t=%d: search %d, formula %d",
                            n, ell, t, report.max_value, report.formula_value)
        rows.append(report.to_row())
    _emit(cfg, render(rows, VERIFY_FIELDS, cfg.fmt))
    return status


def run_ball(cfg: RunConfig) -> int:
    if cfg.x is None:
        raise UsageError("--x is required")
    ball = deletion_ball(as_word(cfg.x), _single(cfg.t, "t"))
    if cfg.fmt == "json":
        _emit(cfg, json.dumps([{"word": w} for w in ball.words()], indent=1) + "\n")
    else:
        _emit(cfg, ball.to_text())
    return EXIT_OK


def run_reconstruct(cfg: RunConfig) -> int:
    ell = _single(cfg.ell, "ell") if cfg.ell else 3
    if cfg.reads is not None:
        n = _single(cfg.n, "n") if cfg.n else None
        if n is None:
            raise UsageError("--n is required with --reads")
        try:
            with open(cfg.reads, encoding="utf-8") as fh:
                reads = parse_reads(fh.read(), n)
        except OSError as exc:
            raise DomainError(f"cannot read {cfg.reads}: {exc}") from None
    elif cfg.x is not None:
        x = as_word(cfg.x)
        t = _single(cfg.t, "t")
        n = x.length
        # simulate exactly the threshold number of reads, or the whole ball if smaller
        wanted = intersection_bound_N(n, ell, t) + 1
        m = min(wanted, len(deletion_ball(x, t)))
        reads = sample_reads(x, t, m, cfg.seed)
    else:
        raise UsageError("give --reads PATH (with --n) or --x to simulate reads")
    report = check_guarantee(n, ell, reads.t, reads)
    row = {
        "n": n, "l": ell, "t": reads.t,
        "read_count": report.read_count,
        "threshold": report.threshold,
        "guarantee_met": report.guarantee_met,
        "list_within_bound": report.list_within_bound,
        "candidate_count": len(report.candidates),
        "candidates": ";".join(report.candidates.words()),
    }
    _emit(cfg, render([row], RECONSTRUCT_FIELDS, cfg.fmt))
    return EXIT_OK


def run_witness(cfg: RunConfig) -> int:
    n, ell, t = _single(cfg.n, "n"), _single(cfg.ell, "ell"), _single(cfg.t, "t")
    reads = worst_case_reads(n, ell, t)
    centers = extremal_family(n, ell).centers
    found = candidates(reads) if len(reads) else None
    if cfg.assert_roundtrip and intersection_size(centers, t) != len(reads):
        log.error("witness round-trip failed")
        return EXIT_MISMATCH
    row = {
        "n": n, "l": ell, "t": t,
        "centers": ";".join(str(c) for c in centers),
        "read_count": len(reads),
        "reads": ";".join(reads.reads.words()),
        "candidate_count": len(found) if found is not None else 1 << n,
        "candidates": ";".join(found.words()) if found is not None else "",
    }
    _emit(cfg, render([row], WITNESS_FIELDS, cfg.fmt))
    return EXIT_OK


COMMANDS = {
    "table": run_table,
    "verify": run_verify,
    "ball": run_ball,
    "reconstruct": run_reconstruct,
    "witness": run_witness,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        print(f"seqrecon: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"seqrecon: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
