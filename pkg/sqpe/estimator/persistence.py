from __future__ import annotations

import logging
import re
from pathlib import Path
from typing import Iterable

import numpy as np

from schema import AcdfSweepRow

from .acdf_estimator import AcdfSampleSet

logger = logging.getLogger(__name__)

_HEADER_PATTERN = re.compile(r"^# (\w+)=(.*)$")


def write_sample_set(samples: AcdfSampleSet, path: Path, config_hash: str) -> None:
    """CSV with columns n, j, z_re, z_im, rotations; A, seed, shot mode and config hash go into comment lines."""
    path.parent.mkdir(parents=True, exist_ok=True)
    header = "\n".join(
        [
            f"# a_value={samples.a_value:.17g}",
            f"# seed={samples.seed}",
            f"# shot_mode={samples.shot_mode}",
            f"# config_hash={config_hash}",
            "n,j,z_re,z_im,rotations",
        ]
    )
    table = np.column_stack(
        [np.arange(samples.count), samples.j, samples.z_re, samples.z_im, samples.rotation_counts]
    )
    np.savetxt(path, table, delimiter=",", header=header, comments="", fmt=["%d", "%d", "%.17g", "%.17g", "%d"])
    logger.debug("Wrote %d samples to %s", samples.count, path)


def read_sample_set(path: Path) -> AcdfSampleSet:
    if not path.exists():
        raise FileNotFoundError(f"Sample set file not found: {path}")
    meta = {}
    with path.open("r", encoding="utf-8") as handle:
        for line in handle:
            match = _HEADER_PATTERN.match(line.strip())
            if not match:
                break
            meta[match.group(1)] = match.group(2)
    missing = {"a_value", "seed"} - meta.keys()
    if missing:
        raise ValueError(f"Sample set {path} is missing header fields: {', '.join(sorted(missing))}")
    table = np.loadtxt(path, delimiter=",", comments="#", skiprows=len(meta) + 1, ndmin=2)
    return AcdfSampleSet(
        j=table[:, 1].astype(int),
        z_re=table[:, 2],
        z_im=table[:, 3],
        rotation_counts=table[:, 4].astype(int),
        a_value=float(meta["a_value"]),
        seed=int(meta["seed"]),
        shot_mode=meta.get("shot_mode", "single_shot"),
    )


def write_acdf_sweep(rows: Iterable[AcdfSweepRow], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    columns = list(AcdfSweepRow.model_fields)
    table = np.array([[getattr(row, name) for name in columns] for row in rows], dtype=float).reshape(-1, len(columns))
    np.savetxt(path, table, delimiter=",", header=",".join(columns), comments="", fmt="%.17g")
