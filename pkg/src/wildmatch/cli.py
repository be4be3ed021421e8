"""Command-line front end: ``search``, ``oracle``, ``inspect`` and ``bench``."""
from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import TextIO

from .bench import TrialConfig, load_config, run_trials, write_csv
from .core import Alphabet, OracleMismatch, Pattern, SearchReport, Text, WildmatchError, naive_search
from .inspection import build_block_model, default_cover_rounds, dense_cover_schedule, greedy_scheme, lower_bound_k, recurrence_bounds
from .search import Problem, choose_params, search_greedy, search_wp, search_wt

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INTERNAL = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for invariant violations here
    def error(self, message: str):
        raise _UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wildmatch", description="Pattern matching with wildcards ('?').")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_search_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--pattern", required=True)
        p.add_argument("--text-file", required=True, type=Path)
        p.add_argument("--sigma", type=int, help="alphabet size (default: distinct letters seen)")

    p = sub.add_parser("search", help="find occurrences with a filtering engine")
    add_search_flags(p)
    p.add_argument("--engine", choices=("wt", "wp", "greedy", "auto"), default="auto")
    p.add_argument("--q", type=int, help="override the gram length")
    p.add_argument("--check", action="store_true", help="cross-check against the naive oracle")

    p = sub.add_parser("oracle", help="find occurrences with the naive matcher")
    add_search_flags(p)

    p = sub.add_parser("inspect", help="print the greedy inspection scheme as CSV")
    p.add_argument("--pattern", required=True)
    p.add_argument("--sigma", type=int)
    p.add_argument("--bounds", action="store_true")

    p = sub.add_parser("bench", help="run oracle-checked random trials, print CSV")
    p.add_argument("--config", type=Path, help="key=value file; inline flags override it")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--sigma", type=int)
    p.add_argument("--g", type=int)
    p.add_argument("--wildcard-rate", type=float)
    p.add_argument("--engine", choices=("wt", "wp", "greedy", "naive"))
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--placement", choices=("uniform", "clustered"))
    p.add_argument("--plant", type=int)
    return parser


def _read_text(path: Path) -> str:
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise WildmatchError(f"cannot read {path}: {e.strerror}") from None
    # one symbol per byte; a single trailing newline is not part of the text
    s = raw.decode("latin-1")
    if s.endswith("\r\n"):
        s = s[:-2]
    elif s.endswith("\n"):
        s = s[:-1]
    return s


def _load(args: argparse.Namespace) -> tuple[Text, Pattern]:
    text = _read_text(args.text_file)
    alphabet = Alphabet.from_symbols(args.pattern + text, args.sigma)
    return Text.parse(text, alphabet), Pattern.parse(args.pattern, alphabet)


def _print_report(report: SearchReport, out: TextIO) -> None:
    for p in report.occurrences:
        out.write(f"{p}\n")
    out.write(
        f"# stats: engine={report.engine} inspected_chars={report.inspected_chars} "
        f"windows={report.windows} verifications={report.verifications} "
        f"used_fallback={int(report.used_fallback)} effective_q={report.effective_q}\n"
    )


def _cmd_search(args: argparse.Namespace, out: TextIO) -> int:
    t, x = _load(args)
    if t.has_wildcards and x.has_wildcards:
        raise WildmatchError(
            "wildcards in both pattern and text: no filtering engine applies, use the 'oracle' subcommand"
        )
    engine = args.engine
    if engine == "auto":
        engine = "wp" if x.has_wildcards else "wt"
    if engine == "wt":
        params = choose_params(x.m, 0, x.sigma, Problem.WT, q=args.q)
        report = search_wt(t, x, params)
    elif engine == "wp":
        params = choose_params(x.m, x.g, x.sigma, Problem.WP, q=args.q)
        report = search_wp(t, x, params)
    else:
        report = search_greedy(t, x)
    if args.check and report.occurrences != naive_search(t, x).occurrences:
        raise OracleMismatch(f"engine {engine} disagrees with the oracle")
    _print_report(report, out)
    return EXIT_OK


def _cmd_oracle(args: argparse.Namespace, out: TextIO) -> int:
    t, x = _load(args)
    _print_report(naive_search(t, x), out)
    return EXIT_OK


def _cmd_inspect(args: argparse.Namespace, out: TextIO) -> int:
    x = Pattern.parse(args.pattern, Alphabet.from_symbols(args.pattern, args.sigma))
    scheme = greedy_scheme(x)
    out.write("step,probe_position,expected_remaining\n")
    out.write(f"0,-,{scheme.trajectory[0]!r}\n")
    for step, (z, e) in enumerate(zip(scheme.probes, scheme.trajectory[1:]), 1):
        out.write(f"{step},{z},{e!r}\n")
    if args.bounds:
        m, g, sigma = x.m, x.g, x.sigma
        if g < m:
            out.write(f"# lower_bound_k={lower_bound_k(m, g, sigma)!r}\n")
        else:
            out.write("# lower_bound_k=undefined (g >= m)\n")
        cover = dense_cover_schedule(build_block_model(x))
        out.write(f"# dense_cover_total={cover.total} rounds={len(cover.rounds)} partial={int(cover.partial)}\n")
        if m >= 2:
            gs = []
            for i in range(default_cover_rounds(m, sigma) + 1):
                r = recurrence_bounds(m, g, i)
                if r is None:
                    gs.append("diverged")
                    break
                gs.append(repr(r.G))
            out.write(f"# G={','.join(gs)}\n")
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace, out: TextIO) -> int:
    values: dict[str, object] = {}
    if args.config is not None:
        try:
            values.update(vars(load_config(args.config)))
        except OSError as e:
            raise WildmatchError(f"cannot read {args.config}: {e.strerror}") from None
    for key in ("n", "m", "sigma", "g", "wildcard_rate", "engine", "trials", "seed", "placement", "plant"):
        v = getattr(args, key)
        if v is not None:
            values[key] = v
    if "n" not in values or "m" not in values:
        raise WildmatchError("bench needs --n and --m (inline or in --config)")
    _, rows = run_trials(TrialConfig(**values))  # type: ignore[arg-type]
    write_csv(rows, out)
    return EXIT_OK


_COMMANDS = {"search": _cmd_search, "oracle": _cmd_oracle, "inspect": _cmd_inspect, "bench": _cmd_bench}


def run(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = _build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except _UsageError as e:
        err.write(f"wildmatch: {e}\n")
        return EXIT_INPUT
    except OracleMismatch as e:
        err.write(f"wildmatch: internal error: {e}\n")
        return EXIT_INTERNAL
    except WildmatchError as e:
        err.write(f"wildmatch: {e}\n")
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
