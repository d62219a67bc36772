"""Writes a run record as CSV rows, a JSON summary and an SVG figure."""

import json
from pathlib import Path
from typing import List, Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402
from scipy import stats  # noqa: E402

from utils.logger import get_logger  # noqa: E402

logger = get_logger(__name__)

MAX_PANELS = 6


def artifact_stem(record) -> str:
    """<experiment>_N<n>_seed<seed>, shared by all files of one run."""
    cfg = record.config
    return f"{cfg.experiment}_N{cfg.n}_seed{cfg.seed}"


def write_rows_csv(record, path: Path) -> Path:
    record.frame.to_csv(path, index=False)
    return path


def write_summary_json(record, path: Path) -> Path:
    path.write_text(json.dumps(record.to_summary_json(), indent=2, sort_keys=True))
    return path


def write_figure_svg(record, path: Path) -> Path:
    """Histograms of the numeric row columns; the CLT statistic gets the N(0,1) density overlaid."""
    frame = record.frame.drop(columns=["sample_index", "seed"], errors="ignore")
    numeric = [c for c in frame.columns if pd.api.types.is_numeric_dtype(frame[c]) and not pd.api.types.is_bool_dtype(frame[c])]
    columns = numeric[:MAX_PANELS]
    fig, axes = plt.subplots(1, max(len(columns), 1), figsize=(4 * max(len(columns), 1), 3.5), squeeze=False)
    for ax, column in zip(axes[0], columns):
        values = frame[column].dropna().to_numpy(dtype=float)
        if values.size:
            ax.hist(values, bins=min(50, max(5, values.size // 10)), density=True, alpha=0.7)
        if column == "statistic":
            grid = np.linspace(-4.0, 4.0, 200)
            ax.plot(grid, stats.norm.pdf(grid), "k--", linewidth=1)
        ax.set_title(column, fontsize=9)
    fig.suptitle(artifact_stem(record), fontsize=10)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
    return path


WRITERS = {
    "csv": ("rows.csv", write_rows_csv),
    "json": ("summary.json", write_summary_json),
    "svg": ("figure.svg", write_figure_svg),
}


def write_artifacts(record, out: Union[str, Path], formats: Sequence[str]) -> List[Path]:
    """Write the requested formats under `out` and return the created paths."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    stem = artifact_stem(record)
    written = []
    for fmt in formats:
        suffix, writer = WRITERS[fmt]
        path = writer(record, out / f"{stem}_{suffix}")
        logger.debug(f"wrote {path}")
        written.append(path)
    return written
