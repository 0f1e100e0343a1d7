# Sweep artifacts: grid CSVs, per-run CSV, manifest and sweep-config files
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Union

import pandas as pd
from pydantic import ValidationError

from app.core.exceptions import ConfigFileError
from app.modules.bench.schemas import SweepConfig, SweepGrid, SweepResult

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def grid_frame(grid: SweepGrid, stddev: bool = False) -> pd.DataFrame:
    """Rows = object counts, columns = rates."""
    matrix = grid.per_cell_stddev if stddev else grid.values
    frame = pd.DataFrame(matrix, index=grid.rows, columns=[f"{rate:g}" for rate in grid.cols])
    frame.index.name = "n_objects"
    return frame


def write_grid(grid: SweepGrid, outdir: PathLike) -> tuple[Path, Path]:
    """
    Write <label>.csv (means) and <label>.stddev.csv.

    The first row holds the rates, the first column the object counts.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    values_path = outdir / f"{grid.label}.csv"
    stddev_path = outdir / f"{grid.label}.stddev.csv"
    grid_frame(grid).to_csv(values_path, float_format="%.10g", lineterminator="\n")
    grid_frame(grid, stddev=True).to_csv(stddev_path, float_format="%.10g", lineterminator="\n")
    return values_path, stddev_path


def read_grid(path: PathLike) -> pd.DataFrame:
    return pd.read_csv(path, index_col="n_objects")


def write_runs(result: SweepResult, path: PathLike) -> Path:
    """One row per (case, sample, policy) timed run."""
    rows = [
        {
            "n_objects": case.n_objects,
            "rate": case.rate,
            "capacity": case.capacity,
            "sample": s.sample,
            "seed": s.seed,
            "policy": s.policy.value,
            **s.run.report.model_dump(),
            "cpu_seconds": s.run.cpu_seconds,
            "clock": s.run.clock,
            "resolution_ok": s.run.resolution_ok,
        }
        for case in result.cases
        for s in case.samples
    ]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows).to_csv(path, index=False, float_format="%.10g", lineterminator="\n")
    return path


def write_manifest(
    result: SweepResult,
    path: PathLike,
    seed_rule: str,
    host: dict[str, Any],
    revision: dict[str, Any],
    artifacts: list[str],
) -> Path:
    """Record what was run, how seeds were derived and where timings came from."""
    manifest = {
        "created_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": result.config.model_dump(mode="json"),
        "seed_rule": seed_rule,
        "capacity_rule": "max(1, floor(rate * n_objects))",
        "engine": result.engine.value,
        "workers": result.workers,
        "clock": result.clock,
        "flagged_runs": result.flagged_runs,
        "host": host,
        "revision": revision,
        "artifacts": sorted(artifacts),
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    logger.info(f"Manifest written to {path}")
    return path


def read_sweep_config(path: PathLike) -> SweepConfig:
    """
    Load a SweepConfig from JSON.

    Raises:
        ConfigFileError: If the file is missing, not JSON or not a valid config
    """
    try:
        return SweepConfig.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise ConfigFileError(f"cannot read sweep config {path}: {e}")
    except ValidationError as e:
        raise ConfigFileError(f"invalid sweep config {path}: {e}")
