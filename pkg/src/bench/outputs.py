"""CSV tables, per-ratio summaries and plot scripts for benchmark results."""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import pandas as pd

from src.bench.models import (
    CSV_COLUMNS,
    CSV_HEADER,
    ExperimentResult,
    OutputError,
    ResultRow,
    SINGULARITY,
)


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _optional(value: Any) -> Optional[float]:
    if value is None:
        return None
    value = float(value)
    return None if math.isnan(value) else value


def write_results(result: ExperimentResult, path: PathLike) -> Path:
    """Write the rows as CSV under the fixed header. Failed cells are empty."""
    path = Path(path)
    frame = result.to_frame()
    frame["seed"] = frame["seed"].map(str)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, na_rep="", lineterminator="\n")
    except OSError as e:
        raise OutputError(f"Failed to write results to {path}: {e}") from e
    return path


def read_results(path: PathLike) -> List[ResultRow]:
    """Parse a results CSV back into rows; empty error means a failed cell."""
    path = Path(path)
    try:
        with open(path, "r") as f:
            header = f.readline().rstrip("\r\n")
    except OSError as e:
        raise OutputError(f"Failed to read results from {path}: {e}") from e

    if header != CSV_HEADER:
        raise OutputError(f"{path}: unexpected header {header!r}, expected {CSV_HEADER!r}")

    frame = pd.read_csv(
        path,
        dtype={"experiment": str, "sampler": str, "seed": str},
        float_precision="round_trip",
        keep_default_na=False,
        na_values=[""],
    )

    rows = []
    for record in frame.to_dict("records"):
        rows.append(ResultRow(
            experiment=record["experiment"],
            sampler=record["sampler"],
            ratio=float(record["ratio"]),
            trial=int(record["trial"]),
            error=_optional(record["error"]),
            sigma_s_am=_optional(record["sigma_s_am"]),
            bound=_optional(record["bound"]),
            ms=float(record["ms"]),
            seed=int(record["seed"]),
        ))
    return rows


def summarize_rows(rows: List[ResultRow]) -> pd.DataFrame:
    """Mean/std error and failure rate per (experiment, sampler, ratio)."""
    frame = pd.DataFrame([r.as_dict() for r in rows], columns=CSV_COLUMNS)
    frame["error"] = pd.to_numeric(frame["error"], errors="coerce")
    frame["failed"] = frame["error"].isna()

    grouped = frame.groupby(["experiment", "sampler", "ratio"], sort=False)
    summary = grouped.agg(
        mean_error=("error", "mean"),
        std_error=("error", "std"),
        failure_rate=("failed", "mean"),
        runs=("trial", "count"),
    ).reset_index()
    summary["std_error"] = summary["std_error"].fillna(0.0)
    return summary


_CURVE_TEMPLATE = '''"""Error vs sample ratio, one line per sampler. Writes {png} next to this file."""

import json
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

DATA = json.loads(r"""{data}""")
YLABEL = {ylabel!r}

experiments = sorted({{d["experiment"] for d in DATA}})
fig, axes = plt.subplots(1, len(experiments), figsize=(6 * len(experiments), 4.5), squeeze=False)
for ax, experiment in zip(axes[0], experiments):
    points = [d for d in DATA if d["experiment"] == experiment and d["mean_error"] is not None]
    for sampler in sorted({{d["sampler"] for d in points}}):
        series = sorted((d["ratio"], d["mean_error"]) for d in points if d["sampler"] == sampler)
        ax.plot([100 * r for r, _ in series], [e for _, e in series], marker="o", label=sampler)
    ax.set_title(experiment)
    ax.set_xlabel("sample size (% of n)")
    ax.set_ylabel(YLABEL)
    ax.set_yscale("log")
    ax.legend()

fig.tight_layout()
fig.savefig(Path(__file__).with_name({png!r}), dpi=150)
'''

_SCATTER_TEMPLATE = '''"""log-log scatter of error against sigma_s(A_M). Writes {png} next to this file."""

import json
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

DATA = json.loads(r"""{data}""")
YLABEL = {ylabel!r}

fig, ax = plt.subplots(figsize=(6, 4.5))
for sampler in sorted({{d["sampler"] for d in DATA}}):
    mine = [d for d in DATA if d["sampler"] == sampler]
    ax.scatter([d["sigma_s_am"] for d in mine], [d["error"] for d in mine], s=12, label=sampler)
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel("sigma_s(A_M)")
ax.set_ylabel(YLABEL)
ax.legend()

fig.tight_layout()
fig.savefig(Path(__file__).with_name({png!r}), dpi=150)
'''


def _ylabel(norm: str) -> str:
    return "approximation error (L2)" if norm == "l2" else "approximation error (Frobenius)"


def plot_script(result: ExperimentResult, png_name: str, norm: str = "l2") -> str:
    """Self-contained matplotlib script with the data inlined as JSON."""
    if result.experiment == SINGULARITY:
        data = [
            {"sampler": r.sampler, "sigma_s_am": r.sigma_s_am, "error": r.error}
            for r in result.rows
            if not r.failed and r.sigma_s_am and r.error
        ]
        template = _SCATTER_TEMPLATE
    else:
        data = [
            {
                "experiment": rec["experiment"],
                "sampler": rec["sampler"],
                "ratio": float(rec["ratio"]),
                "mean_error": _optional(rec["mean_error"]),
            }
            for rec in summarize_rows(result.rows).to_dict("records")
        ]
        template = _CURVE_TEMPLATE

    return template.format(
        data=json.dumps(data, sort_keys=True),
        ylabel=_ylabel(norm),
        png=png_name,
    )


def emit_outputs(
    result: ExperimentResult,
    out_dir: PathLike,
    plot: bool = False,
    norm: str = "l2",
) -> Dict[str, Path]:
    """Write `{experiment}-{slug}.csv` and, with plot set, `{experiment}-{slug}.plot.py`."""
    if not result.rows:
        raise OutputError("Refusing to write an empty result table")

    out_dir = Path(out_dir)
    stem = f"{result.experiment}-{result.slug}"
    written = {"csv": write_results(result, out_dir / f"{stem}.csv")}
    logger.info(f"Wrote {len(result.rows)} rows to {written['csv']}")

    if plot:
        script_path = out_dir / f"{stem}.plot.py"
        try:
            script_path.write_text(plot_script(result, f"{stem}.png", norm=norm))
        except OSError as e:
            raise OutputError(f"Failed to write plot script {script_path}: {e}") from e
        written["plot"] = script_path
        logger.info(f"Wrote plot script to {script_path}")

    return written
