"""Command-line front end.

Subcommands
-----------
partitions        list the orthogonal partitions of a K-user network
solve             optimal partition for one (K, SNR, T) point
solve-constrained optimal partition under a total-overhead cap
sweep-cct         effective NSR vs frame length (normalized at 9x9, 25 dB)
sweep-aps         ideal/effective NSR vs network size (normalized at 9x9, 30 dB)
sweep-mao         constrained/unconstrained ratio vs the overhead cap
rate-table        dump the Monte Carlo mean-rate table

Tabular commands share one CSV header; columns that do not apply to a
given command stay empty.  For solve/solve-constrained the *_nsr columns
carry absolute rates (no normalization reference is involved).  A flat
``key = value`` config file (lists comma-separated, keys matching the
simulation config fields) can seed any command; explicit flags win.

Exit codes: 0 success, 1 usage or config error, 2 no feasible partition
under the requested cap, 3 numeric or size-limit failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from pathlib import Path

from .errors import (
    ConfigError,
    IllConditionedChannelError,
    IncompleteRatesError,
    InvalidInputError,
    SizeLimitError,
)
from .knapsack import enumerate_candidates, solve_constrained, transform_bkp
from .overhead import OverheadParams
from .partition import MAX_NETWORK_SIZE, enumerate_partitions, optimal_partition
from .simulation import (
    SimConfig,
    build_rate_table,
    full_network_effective,
    partitioned_effective,
    sweep_aps,
    sweep_cct,
    sweep_mao,
)

CSV_COLUMNS = (
    "k",
    "t",
    "snr_db",
    "alpha_th",
    "ideal_nsr",
    "effective_nsr",
    "ratio_pct",
    "best_partition",
    "stderr",
)

RATE_TABLE_COLUMNS = ("k", "snr_db", "mean_rate", "stderr", "trials", "redraws")

# config-file schema: scalar type, or (element type,) for comma lists
_CONFIG_KEYS = {
    "k_max": int,
    "trials": int,
    "base_seed": int,
    "max_redraws": int,
    "r": float,
    "cond_limit": float,
    "snr_db": (float,),
    "alpha_th_values": (float,),
    "t_values": (int,),
}


class _Parser(argparse.ArgumentParser):
    """Route argparse usage errors through the exit-code-1 path."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def parse_config_file(path: str) -> dict:
    """Read a flat ``key = value`` file; '#' starts a comment."""
    out = {}
    text = Path(path).read_text()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        kind = _CONFIG_KEYS[key]
        try:
            if isinstance(kind, tuple):
                items = [item.strip() for item in val.split(",") if item.strip()]
                out[key] = tuple(kind[0](item) for item in items)
            else:
                out[key] = kind(val)
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: bad value for '{key}': {val!r}") from None
    return out


def _comma_list(kind):
    def convert(text: str):
        try:
            return tuple(kind(item.strip()) for item in text.split(",") if item.strip())
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated {kind.__name__}s, got {text!r}") from None

    return convert


def _merge_sim_config(args, overrides: dict | None = None) -> SimConfig:
    """Defaults <- config file <- command-line flags, then validate."""
    merged = {}
    if getattr(args, "config", None):
        merged.update(parse_config_file(args.config))
    if overrides:
        merged.update(overrides)
    flag_map = {
        "k": "k_max",
        "snr_db": "snr_db",
        "t": "t_values",
        "r": "r",
        "alpha_th_values": "alpha_th_values",
        "trials": "trials",
        "seed": "base_seed",
    }
    for flag, key in flag_map.items():
        value = getattr(args, flag, None)
        if value is not None:
            merged[key] = value
    return SimConfig(**merged)


@contextmanager
def _open_output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as handle:
            yield handle


def _cell_text(value) -> str:
    if value is None:
        return ""
    return str(value)


def _emit_rows(args, rows: list[dict], columns: tuple[str, ...]) -> None:
    if args.format == "json":
        with _open_output(args.output) as sink:
            json.dump(rows, sink, indent=2)
            sink.write("\n")
        return
    with _open_output(args.output) as sink:
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell_text(row[c]) for c in columns])


def _sweep_rows_as_dicts(rows) -> list[dict]:
    return [{c: getattr(row, c) for c in CSV_COLUMNS} for row in rows]


def cmd_partitions(args) -> int:
    parts = enumerate_partitions(args.k)
    print(f"{len(parts)} partitions of {args.k}")
    for part in parts:
        print("+".join(str(size) for size in part.sizes()))
    return 0


def _point_config(args) -> tuple[SimConfig, OverheadParams, float]:
    cfg = _merge_sim_config(
        args,
        overrides={"snr_db": (25.0,), "t_values": (100,)},
    )
    if len(cfg.snr_db) != 1 or len(cfg.t_values) != 1:
        raise ConfigError(
            "this command evaluates a single point; give one snr-db and one t "
            f"(got snr_db={cfg.snr_db}, t_values={cfg.t_values})"
        )
    return cfg, OverheadParams(t=cfg.t_values[0], r=cfg.r), cfg.snr_db[0]


def cmd_solve(args) -> int:
    cfg, oh, snr = _point_config(args)
    table = build_rate_table(cfg)
    best, err = partitioned_effective(table, cfg.k_max, snr, oh)
    full, _full_err = full_network_effective(table, cfg.k_max, snr, oh)

    if args.format == "json":
        payload = {
            "k": cfg.k_max,
            "t": oh.t,
            "snr_db": snr,
            "r": cfg.r,
            "trials": cfg.trials,
            "best_partition": best.partition.label(),
            "effective_rate": best.effective_rate,
            "stderr": err,
            "total_overhead": best.total_overhead,
            "unpartitioned_rate": full,
        }
        with _open_output(args.output) as sink:
            json.dump(payload, sink, indent=2)
            sink.write("\n")
        return 0
    if args.format == "csv":
        row = {
            "k": cfg.k_max,
            "t": oh.t,
            "snr_db": snr,
            "alpha_th": None,
            "ideal_nsr": full,
            "effective_nsr": best.effective_rate,
            "ratio_pct": None,
            "best_partition": best.partition.label(),
            "stderr": err,
        }
        _emit_rows(args, [row], CSV_COLUMNS)
        return 0

    with _open_output(args.output) as sink:
        print(
            f"k = {cfg.k_max}, snr = {snr} dB, t = {oh.t}, r = {cfg.r}, "
            f"trials = {cfg.trials}, seed = {cfg.base_seed}",
            file=sink,
        )
        print(f"best partition: {best.partition.label()}", file=sink)
        print(f"effective rate: {best.effective_rate:.6f} +/- {err:.6f} bit/s/Hz", file=sink)
        print(f"total overhead: {best.total_overhead:.6f}", file=sink)
        print(f"unpartitioned:  {full:.6f} bit/s/Hz", file=sink)
    return 0


def cmd_solve_constrained(args) -> int:
    cfg, oh, snr = _point_config(args)
    table = build_rate_table(cfg)
    rates = table.mean_rates(snr)
    unconstrained, _ = optimal_partition(cfg.k_max, rates, oh)
    candidates = enumerate_candidates(transform_bkp(cfg.k_max, rates), cfg.k_max, oh, rates)
    sol = solve_constrained(candidates, args.alpha_th)

    if sol.chosen is None:
        print("no feasible partition under alpha_th", file=sys.stderr)
        return 2

    ratio = 100.0
    if unconstrained.effective_rate > 0:
        ratio = 100.0 * (sol.chosen.profit / unconstrained.effective_rate)

    if args.format == "json":
        payload = {
            "k": cfg.k_max,
            "t": oh.t,
            "snr_db": snr,
            "alpha_th": args.alpha_th,
            "best_partition": sol.chosen.composition.label(),
            "effective_rate": sol.chosen.profit,
            "total_overhead": sol.chosen.weight,
            "ratio_pct": ratio,
            "feasible_count": sol.feasible_count,
            "unconstrained_rate": unconstrained.effective_rate,
            "unconstrained_partition": unconstrained.partition.label(),
        }
        with _open_output(args.output) as sink:
            json.dump(payload, sink, indent=2)
            sink.write("\n")
        return 0
    if args.format == "csv":
        row = {
            "k": cfg.k_max,
            "t": oh.t,
            "snr_db": snr,
            "alpha_th": args.alpha_th,
            "ideal_nsr": unconstrained.effective_rate,
            "effective_nsr": sol.chosen.profit,
            "ratio_pct": ratio,
            "best_partition": sol.chosen.composition.label(),
            "stderr": None,
        }
        _emit_rows(args, [row], CSV_COLUMNS)
        return 0

    with _open_output(args.output) as sink:
        print(
            f"k = {cfg.k_max}, snr = {snr} dB, t = {oh.t}, r = {cfg.r}, "
            f"alpha_th = {args.alpha_th}",
            file=sink,
        )
        print(f"best partition: {sol.chosen.composition.label()}", file=sink)
        print(f"effective rate: {sol.chosen.profit:.6f} bit/s/Hz", file=sink)
        print(f"total overhead: {sol.chosen.weight:.6f}", file=sink)
        print(f"feasible candidates: {sol.feasible_count}", file=sink)
        print(f"vs unconstrained: {ratio:.2f}% of {unconstrained.partition.label()}", file=sink)
    return 0


def _run_sweep(args, sweep_fn) -> int:
    cfg = _merge_sim_config(args)
    rows = sweep_fn(cfg)
    if not rows:
        raise ConfigError("sweep grid is empty; need k_max >= 2")
    _emit_rows(args, _sweep_rows_as_dicts(rows), CSV_COLUMNS)
    return 0


def cmd_sweep_cct(args) -> int:
    return _run_sweep(args, sweep_cct)


def cmd_sweep_aps(args) -> int:
    return _run_sweep(args, sweep_aps)


def cmd_sweep_mao(args) -> int:
    return _run_sweep(args, sweep_mao)


def cmd_rate_table(args) -> int:
    cfg = _merge_sim_config(args)
    table = build_rate_table(cfg)
    rows = []
    for size in range(1, cfg.k_max + 1):
        for snr in cfg.snr_db:
            cell = table.cell(size, snr)
            rows.append(
                {
                    "k": size,
                    "snr_db": snr,
                    "mean_rate": cell.mean,
                    "stderr": cell.stderr,
                    "trials": cell.trials,
                    "redraws": cell.redraws,
                }
            )
    _emit_rows(args, rows, RATE_TABLE_COLUMNS)
    return 0


def _add_output_flags(sub) -> None:
    sub.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub.add_argument(
        "--format",
        choices=("csv", "json", "text"),
        default=None,
        help="output format (default: text for solve commands, csv for tables)",
    )


def _add_sim_flags(sub, list_mode: bool) -> None:
    sub.add_argument("--config", help="flat 'key = value' config file; flags override it")
    sub.add_argument("--k", type=int, help="network size (sets k_max)")
    if list_mode:
        sub.add_argument("--snr-db", dest="snr_db", type=_comma_list(float), help="SNR grid in dB, comma-separated")
        sub.add_argument("--t", type=_comma_list(int), help="frame lengths, comma-separated")
        sub.add_argument(
            "--alpha-th",
            dest="alpha_th_values",
            type=_comma_list(float),
            help="overhead caps, comma-separated",
        )
    else:
        sub.add_argument(
            "--snr-db",
            dest="snr_db",
            type=lambda s: (float(s),),
            help="SNR in dB (default 25)",
        )
        sub.add_argument("--t", type=lambda s: (int(s),), help="frame length in symbols (default 100)")
    sub.add_argument("--r", type=float, help="overhead exponent (default 2)")
    sub.add_argument("--trials", type=int, help="Monte Carlo trials per (size, SNR) cell")
    sub.add_argument("--seed", type=int, help="base RNG seed")
    _add_output_flags(sub)


def build_parser() -> _Parser:
    parser = _Parser(
        prog="dmimopart",
        description="effective sum-rate of partitioned distributed-MIMO networks under ZFBF",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("partitions", help="list orthogonal partitions of a K-user network")
    p.add_argument("--k", type=int, required=True, help=f"network size (max {MAX_NETWORK_SIZE})")
    p.set_defaults(func=cmd_partitions)

    p = subs.add_parser("solve", help="optimal partition at one (K, SNR, T) point")
    _add_sim_flags(p, list_mode=False)
    p.set_defaults(func=cmd_solve)

    p = subs.add_parser("solve-constrained", help="optimal partition under an overhead cap")
    _add_sim_flags(p, list_mode=False)
    p.add_argument("--alpha-th", dest="alpha_th", type=float, required=True, help="overhead cap in [0, 1]")
    p.set_defaults(func=cmd_solve_constrained)

    p = subs.add_parser("sweep-cct", help="effective NSR vs frame length")
    _add_sim_flags(p, list_mode=True)
    p.set_defaults(func=cmd_sweep_cct)

    p = subs.add_parser("sweep-aps", help="ideal and effective NSR vs network size")
    _add_sim_flags(p, list_mode=True)
    p.set_defaults(func=cmd_sweep_aps)

    p = subs.add_parser("sweep-mao", help="constrained/unconstrained ratio vs overhead cap")
    _add_sim_flags(p, list_mode=True)
    p.set_defaults(func=cmd_sweep_mao)

    p = subs.add_parser("rate-table", help="dump the Monte Carlo mean-rate table")
    _add_sim_flags(p, list_mode=True)
    p.set_defaults(func=cmd_rate_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "format", None) is None and hasattr(args, "format"):
            args.format = "text" if args.func in (cmd_solve, cmd_solve_constrained) else "csv"
        return args.func(args)
    except (SizeLimitError, IllConditionedChannelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ConfigError, InvalidInputError, IncompleteRatesError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
