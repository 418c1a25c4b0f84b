"""
CSV curves and their YAML metadata sidecars.
"""

from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np
import yaml
from loguru import logger

from ..ensemble.ensemble_sim import FidelityCurve
from ..errors import DDSimError

CSV_HEADER = "t,F_x,F_y,F_z"
CSV_FORMAT = "%.17g"


def sidecar_path(csv_path: Path) -> Path:
    """`curve.csv` -> `curve.meta.yml`."""
    csv_path = Path(csv_path)
    return csv_path.with_name(csv_path.stem + ".meta.yml")


def write_curve(
    curve: FidelityCurve,
    path: Path,
    config: Optional[Dict] = None,
) -> Tuple[Path, Path]:
    """Write the curve as CSV plus a sidecar holding metadata and the resolved config.

    The sidecar is itself a valid config file: its `metadata` section is
    ignored on load.

    Returns:
        Paths of the CSV file and the sidecar
    """
    path = Path(path)
    meta_path = sidecar_path(path)

    data = np.array([[r.t, r.f_x, r.f_y, r.f_z] for r in curve.rows], dtype=float).reshape(-1, 4)
    sidecar = dict(config or {})
    sidecar["metadata"] = dict(curve.metadata, protocol=curve.protocol.value, level=curve.level,
                               config_digest=curve.config_digest, rows=len(curve.rows))

    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(path, data, fmt=CSV_FORMAT, delimiter=",", header=CSV_HEADER, comments="")
        with open(meta_path, "w") as f:
            yaml.safe_dump(sidecar, f, default_flow_style=False, sort_keys=True)
    except OSError as e:
        raise DDSimError(f"cannot write curve to {path}: {e}") from e

    logger.info(f"Wrote {len(curve.rows)} rows to {path} (metadata: {meta_path})")
    return path, meta_path
