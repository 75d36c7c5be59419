"""Command-line surface: experiment grids, power sweeps, path-loss tables.

Exit codes: 0 ok, 2 config error, 3 runtime error. The output root comes
from --out, else $MANETSIM_OUT, else ./results; each grid writes into
<root>/<config-name>-<hash12>/ so the file set is a pure function of the
config document. Files are written to a temp name and renamed, so a
failed run never leaves partial outputs behind.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import ConfigError, RunConfig, ScenarioConfig, load_scenario, resolve_config_path
from .metrics import (
    PerSecondRecord,
    RunSummary,
    write_per_second_csv,
    write_summary_json,
)
from .propagation import ChannelModel, D_MIN_M
from .simulation import ManetSimulation

DEFAULT_SWEEP_POWERS_DBM = [7.5, 10.0, 20.0, 40.0]

SWEEP_HEADER = ["protocol", "channel", "tx_power_dbm", "avg_delivery_ratio"]
GRID_HEADER = [
    "protocol", "channel", "tx_power_dbm", "pkt_bytes", "seed",
    "avg_delivery_ratio", "total_sent", "total_received", "total_tx_energy_mj",
]
PATHLOSS_HEADER = ["model", "freq_hz", "d_m", "pl_db"]

DEFAULT_PATHLOSS_MODELS = ["friis", "friis_dir", "rma", "ci", "uma"]


def _atomic_write(path: Path, write_fn) -> None:
    tmp = path.with_name(path.name + f".tmp{os.getpid()}")
    try:
        write_fn(tmp)
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise


def output_root(explicit: str | None) -> Path:
    if explicit:
        return Path(explicit)
    env = os.environ.get("MANETSIM_OUT")
    return Path(env) if env else Path("results")


# -- path-loss table ---------------------------------------------------------


def pathloss_table(
    freqs_hz: list[float],
    dists_m: list[float],
    models: list[str],
    gt_dbi: float = 17.0,
    gr_dbi: float = 17.0,
    h_m: float = 5.0,
    ple_n: float = 2.0,
) -> list[tuple[str, float, float, float]]:
    """Long-form (model, freq_hz, d_m, pl_db) rows for the plotting component."""
    for d in dists_m:
        if d < D_MIN_M:
            raise ConfigError(f"pathloss distance {d} m is below the {D_MIN_M} m model minimum")
    rows = []
    for name in models:
        model = ChannelModel(kind=name, gt_dbi=gt_dbi, gr_dbi=gr_dbi, h_m=h_m, ple_n=ple_n)
        for f in freqs_hz:
            for d in dists_m:
                rows.append((name, f, d, model.loss_db(f, d)))
    return rows


def _write_pathloss_csv(path: Path, rows) -> None:
    def write(tmp: Path) -> None:
        with open(tmp, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(PATHLOSS_HEADER)
            for name, f, d, pl in rows:
                w.writerow([name, f"{f:g}", f"{d:.6f}", f"{pl:.6f}"])

    _atomic_write(path, write)


def log_grid(lo: float, hi: float, n: int) -> list[float]:
    if n < 2:
        return [lo]
    step = (math.log10(hi) - math.log10(lo)) / (n - 1)
    return [10 ** (math.log10(lo) + i * step) for i in range(n)]


# -- grid execution -----------------------------------------------------------


def _run_cell(cfg: RunConfig) -> tuple[list[PerSecondRecord], RunSummary]:
    return ManetSimulation(cfg).run()


def sweep_summary_rows(summaries: list[RunSummary]) -> list[tuple[str, str, float, float | None]]:
    """Seed-averaged delivery ratio per (protocol, channel, power), sorted."""
    groups: dict[tuple[str, str, float], list[float]] = {}
    for s in summaries:
        if s.avg_delivery_ratio is not None:
            groups.setdefault((s.protocol, s.channel, s.tx_power_dbm), []).append(
                s.avg_delivery_ratio
            )
    rows = []
    for key in sorted(groups):
        vals = groups[key]
        rows.append((*key, sum(vals) / len(vals)))
    return rows


def run_grid(scenario: ScenarioConfig, out_dir: Path, jobs: int = 1) -> list[RunSummary]:
    cells = sorted(scenario.cells(), key=lambda c: c.cell_key)
    out_dir.mkdir(parents=True, exist_ok=True)
    results: list[tuple[RunConfig, list[PerSecondRecord], RunSummary]] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for cfg, (records, summary) in zip(cells, pool.map(_run_cell, cells)):
                results.append((cfg, records, summary))
    else:
        for cfg in cells:
            records, summary = _run_cell(cfg)
            results.append((cfg, records, summary))

    summaries = []
    for cfg, records, summary in results:
        base = cfg.cell_name
        _atomic_write(
            out_dir / f"persecond_{base}.csv",
            lambda tmp, r=records, s=summary: write_per_second_csv(tmp, r, s),
        )
        _atomic_write(
            out_dir / f"summary_{base}.json",
            lambda tmp, s=summary: write_summary_json(tmp, s),
        )
        summaries.append(summary)

    def write_grid_csv(tmp: Path) -> None:
        with open(tmp, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(GRID_HEADER)
            for s in sorted(summaries, key=lambda s: (s.protocol, s.channel, s.tx_power_dbm, s.pkt_bytes, s.seed)):
                w.writerow(
                    [
                        s.protocol,
                        s.channel,
                        f"{s.tx_power_dbm:.6f}",
                        s.pkt_bytes,
                        s.seed,
                        "" if s.avg_delivery_ratio is None else f"{s.avg_delivery_ratio:.6f}",
                        s.total_sent,
                        s.total_received,
                        f"{s.total_tx_energy_mj:.6f}",
                    ]
                )

    _atomic_write(out_dir / "summary.csv", write_grid_csv)

    def write_sweep_csv(tmp: Path) -> None:
        with open(tmp, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(SWEEP_HEADER)
            for proto, channel, power, avg in sweep_summary_rows(summaries):
                w.writerow(
                    [proto, channel, f"{power:.6f}", "" if avg is None else f"{avg:.6f}"]
                )

    _atomic_write(out_dir / "sweep_summary.csv", write_sweep_csv)

    freqs = sorted({ch.freq_hz for ch in scenario.channels} | {2.4e9, 28e9})
    rows = pathloss_table(freqs, log_grid(10.0, 1000.0, 25), DEFAULT_PATHLOSS_MODELS)
    _write_pathloss_csv(out_dir / "pathloss.csv", rows)
    return summaries


def grid_output_dir(scenario: ScenarioConfig, root: Path) -> Path:
    return root / f"{scenario.name}-{scenario.config_hash}"


# -- subcommands ------------------------------------------------------------------


def _cmd_run(args) -> int:
    scenario = load_scenario(resolve_config_path(args.config))
    out_dir = grid_output_dir(scenario, output_root(args.out))
    summaries = run_grid(scenario, out_dir, jobs=args.jobs)
    print(f"{len(summaries)} runs -> {out_dir}")
    return 0


def _cmd_sweep(args) -> int:
    powers = [float(tok) for tok in args.powers.split(",") if tok.strip()]
    scenario = load_scenario(resolve_config_path(args.config), tx_powers_override=powers)
    out_dir = grid_output_dir(scenario, output_root(args.out))
    summaries = run_grid(scenario, out_dir, jobs=args.jobs)
    print(f"{len(summaries)} runs -> {out_dir}")
    for proto, channel, power, avg in sweep_summary_rows(summaries):
        avg_s = "n/a" if avg is None else f"{avg:.4f}"
        print(f"  {proto:5s} {channel:12s} {power:5.1f} dBm  delivery {avg_s}")
    return 0


def _cmd_pathloss(args) -> int:
    freqs = [float(t) for t in args.freqs.split(",") if t.strip()]
    if ":" in args.dists:
        lo, hi, n = args.dists.split(":")
        dists = log_grid(float(lo), float(hi), int(n))
    else:
        dists = [float(t) for t in args.dists.split(",") if t.strip()]
    models = [t.strip() for t in args.models.split(",") if t.strip()]
    rows = pathloss_table(freqs, dists, models, gt_dbi=args.gt_dbi, gr_dbi=args.gr_dbi,
                          h_m=args.h_m, ple_n=args.ple_n)
    if args.out:
        _write_pathloss_csv(Path(args.out), rows)
        print(f"{len(rows)} rows -> {args.out}")
    else:
        w = csv.writer(sys.stdout)
        w.writerow(PATHLOSS_HEADER)
        for name, f, d, pl in rows:
            w.writerow([name, f"{f:g}", f"{d:.6f}", f"{pl:.6f}"])
    return 0


def _cmd_validate(args) -> int:
    scenario = load_scenario(resolve_config_path(args.config))
    n = len(scenario.cells())
    print(
        f"ok: {len(scenario.protocols)} protocols x {len(scenario.channels)} channels "
        f"x {len(scenario.tx_powers_dbm)} powers x {len(scenario.pkt_bytes_list)} sizes "
        f"x {scenario.replications} seeds = {n} runs"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manetsim",
        description="Deterministic MANET simulator comparing sub-6 GHz and mmWave operation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute the experiment grid of a config")
    p_run.add_argument("config", help="config file path or preset name (e.g. table1-fast)")
    p_run.add_argument("--out", help="output root (default $MANETSIM_OUT or ./results)")
    p_run.add_argument("--jobs", type=int, default=1, help="parallel grid cells")
    p_run.set_defaults(fn=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run the grid across a Tx power sweep")
    p_sweep.add_argument("config")
    p_sweep.add_argument(
        "--powers", default=",".join(f"{p:g}" for p in DEFAULT_SWEEP_POWERS_DBM),
        help="comma-separated Tx powers in dBm",
    )
    p_sweep.add_argument("--out")
    p_sweep.add_argument("--jobs", type=int, default=1)
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_pl = sub.add_parser("pathloss", help="emit the path-loss comparison table")
    p_pl.add_argument("--freqs", default="2.4e9,28e9", help="comma-separated Hz")
    p_pl.add_argument("--dists", default="10:1000:25", help="'lo:hi:n' log grid or comma list (m)")
    p_pl.add_argument("--models", default=",".join(DEFAULT_PATHLOSS_MODELS))
    p_pl.add_argument("--gt-dbi", type=float, default=17.0)
    p_pl.add_argument("--gr-dbi", type=float, default=17.0)
    p_pl.add_argument("--h-m", type=float, default=5.0)
    p_pl.add_argument("--ple-n", type=float, default=2.0)
    p_pl.add_argument("--out", help="write CSV here instead of stdout")
    p_pl.set_defaults(fn=_cmd_pathloss)

    p_val = sub.add_parser("validate", help="check a config and report the grid size")
    p_val.add_argument("config")
    p_val.set_defaults(fn=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures map to a distinct exit code
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
