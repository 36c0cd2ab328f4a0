"""CSV persistence and SVG charts for benchmark and sweep results.

Records round-trip through CSV losslessly (floats via repr), so every summary
statistic is recomputable from records.csv alone.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .pipeline import (
    METHOD_PCE,
    METHOD_WARM,
    BenchmarkSummary,
    RunRecord,
    SweepRecord,
    summarize_benchmark,
)

plt.rcParams["svg.hashsalt"] = "warmpce"

RECORD_COLUMNS = [
    "method",
    "instance_id",
    "depth",
    "init_index",
    "seed",
    "post_processed",
    "final_spin_bits",
    "cut",
    "tour",
    "infeasible_rows",
    "infeasible_cols",
    "tour_length",
    "ratio",
    "hit_optimum",
]

SUMMARY_COLUMNS = [
    "depth",
    "mean_ratio_pce",
    "mean_ratio_warm",
    "success_pce",
    "success_warm",
    "warm_wins",
    "ties",
    "warm_losses",
]

SWEEP_COLUMNS = ["graph_id", "epsilon", "init_index", "seed", "energy", "max_cut", "ratio"]

_METHOD_STYLE = {METHOD_PCE: "tab:blue", METHOD_WARM: "tab:orange"}


def _spins_to_str(bits) -> str:
    return "".join("+" if b > 0 else "-" for b in bits)


def _str_to_spins(text: str) -> tuple[int, ...]:
    return tuple(1 if ch == "+" else -1 for ch in text)


def _ints_to_str(values) -> str:
    return ",".join(str(v) for v in values)


def _str_to_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",")) if text else ()


def record_to_row(record: RunRecord) -> list[str]:
    return [
        record.method,
        record.instance_id,
        str(record.depth),
        str(record.init_index),
        str(record.seed),
        "true" if record.post_processed else "false",
        _spins_to_str(record.final_spin_bits),
        repr(record.cut),
        "-".join(str(c) for c in record.tour) if record.tour is not None else "",
        _ints_to_str(record.infeasible_rows),
        _ints_to_str(record.infeasible_cols),
        repr(record.tour_length) if record.tour_length is not None else "",
        repr(record.ratio),
        "true" if record.hit_optimum else "false",
    ]


def row_to_record(row: dict[str, str]) -> RunRecord:
    return RunRecord(
        method=row["method"],
        instance_id=row["instance_id"],
        depth=int(row["depth"]),
        init_index=int(row["init_index"]),
        seed=int(row["seed"]),
        post_processed=row["post_processed"] == "true",
        final_spin_bits=_str_to_spins(row["final_spin_bits"]),
        cut=float(row["cut"]),
        tour=tuple(int(c) for c in row["tour"].split("-")) if row["tour"] else None,
        infeasible_rows=_str_to_ints(row["infeasible_rows"]),
        infeasible_cols=_str_to_ints(row["infeasible_cols"]),
        tour_length=float(row["tour_length"]) if row["tour_length"] else None,
        ratio=float(row["ratio"]),
        hit_optimum=row["hit_optimum"] == "true",
    )


def write_records_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORD_COLUMNS)
        for record in records:
            writer.writerow(record_to_row(record))


def read_records_csv(path) -> list[RunRecord]:
    with open(path, newline="") as fh:
        return [row_to_record(row) for row in csv.DictReader(fh)]


def write_summary_csv(summary: BenchmarkSummary, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for row in summary.rows:
            writer.writerow(
                [
                    str(row.depth),
                    repr(row.mean_ratio_pce),
                    repr(row.mean_ratio_warm),
                    repr(row.success_pce),
                    repr(row.success_warm),
                    str(row.warm_wins),
                    str(row.ties),
                    str(row.warm_losses),
                ]
            )


def write_sweep_csv(records, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_COLUMNS)
        for r in records:
            writer.writerow(
                [
                    r.graph_id,
                    repr(r.epsilon),
                    str(r.init_index),
                    str(r.seed),
                    repr(r.energy),
                    repr(r.max_cut),
                    repr(r.ratio),
                ]
            )


def read_sweep_csv(path) -> list[SweepRecord]:
    with open(path, newline="") as fh:
        return [
            SweepRecord(
                graph_id=row["graph_id"],
                epsilon=float(row["epsilon"]),
                init_index=int(row["init_index"]),
                seed=int(row["seed"]),
                energy=float(row["energy"]),
                max_cut=float(row["max_cut"]),
                ratio=float(row["ratio"]),
            )
            for row in csv.DictReader(fh)
        ]


def plot_ratio_vs_depth(summary: BenchmarkSummary, path) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    depths = [row.depth for row in summary.rows]
    ax.plot(depths, [r.mean_ratio_pce for r in summary.rows], "o-",
            color=_METHOD_STYLE[METHOD_PCE], label="PCE")
    ax.plot(depths, [r.mean_ratio_warm for r in summary.rows], "s-",
            color=_METHOD_STYLE[METHOD_WARM], label="Warm-PCE")
    ax.set_xlabel("circuit depth p")
    ax.set_ylabel("mean approximation ratio")
    ax.set_xticks(depths)
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_success_vs_depth(summary: BenchmarkSummary, path) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    depths = [row.depth for row in summary.rows]
    ax.plot(depths, [r.success_pce for r in summary.rows], "o-",
            color=_METHOD_STYLE[METHOD_PCE], label="PCE")
    ax.plot(depths, [r.success_warm for r in summary.rows], "s-",
            color=_METHOD_STYLE[METHOD_WARM], label="Warm-PCE")
    ax.set_xlabel("circuit depth p")
    ax.set_ylabel("success rate (optimum hit at least once)")
    ax.set_xticks(depths)
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_wins_ties_losses(summary: BenchmarkSummary, path) -> None:
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    depths = [row.depth for row in summary.rows]
    wins = np.array([r.warm_wins for r in summary.rows])
    ties = np.array([r.ties for r in summary.rows])
    losses = np.array([r.warm_losses for r in summary.rows])
    ax.bar(depths, wins, color="tab:green", label="Warm-PCE wins")
    ax.bar(depths, ties, bottom=wins, color="tab:gray", label="ties")
    ax.bar(depths, losses, bottom=wins + ties, color="tab:red", label="Warm-PCE losses")
    ax.set_xlabel("circuit depth p")
    ax.set_ylabel("instances (best-of-inits)")
    ax.set_xticks(depths)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def plot_epsilon_sweep(records, path) -> None:
    records = list(records)
    epsilons = sorted({r.epsilon for r in records})
    medians, lower, upper = [], [], []
    for epsilon in epsilons:
        ratios = [r.ratio for r in records if r.epsilon == epsilon]
        medians.append(float(np.median(ratios)))
        lower.append(float(np.percentile(ratios, 25)))
        upper.append(float(np.percentile(ratios, 75)))
    fig, ax = plt.subplots(figsize=(5.0, 3.5))
    ax.fill_between(epsilons, lower, upper, alpha=0.25, color="tab:orange", label="IQR")
    ax.plot(epsilons, medians, "s-", color="tab:orange", label="median")
    ax.scatter(
        [r.epsilon for r in records],
        [r.ratio for r in records],
        s=10,
        alpha=0.4,
        color="tab:gray",
        label="runs",
    )
    ax.set_xlabel("bias strength epsilon")
    ax.set_ylabel("energy / max-cut energy")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def emit_report(records, summary: BenchmarkSummary | None, out_dir) -> dict[str, Path]:
    """Write records.csv, summary.csv and the three benchmark charts."""
    records = list(records)
    if not records:
        raise ValueError("no records to report")
    if summary is None:
        summary = summarize_benchmark(records)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "records": out / "records.csv",
        "summary": out / "summary.csv",
        "ratio_chart": out / "ratio_vs_depth.svg",
        "success_chart": out / "success_vs_depth.svg",
        "wins_chart": out / "wins_ties_losses.svg",
    }
    write_records_csv(records, paths["records"])
    write_summary_csv(summary, paths["summary"])
    plot_ratio_vs_depth(summary, paths["ratio_chart"])
    plot_success_vs_depth(summary, paths["success_chart"])
    plot_wins_ties_losses(summary, paths["wins_chart"])
    return paths


def emit_sweep_report(records, out_dir) -> dict[str, Path]:
    """Write sweep_records.csv and the median/IQR chart."""
    records = list(records)
    if not records:
        raise ValueError("no sweep records to report")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "records": out / "sweep_records.csv",
        "chart": out / "epsilon_sweep.svg",
    }
    write_sweep_csv(records, paths["records"])
    plot_epsilon_sweep(records, paths["chart"])
    return paths
