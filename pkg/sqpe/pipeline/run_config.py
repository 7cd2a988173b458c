from __future__ import annotations

import hashlib
import os
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from schema import RunConfig

DATABASE_URL_ENV = "SQPE_DATABASE_URL"
_NON_RESULT_FIELDS = {"threads", "output_dir", "database_url"}


def read_config_file(file_path: Path) -> Dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment and blank lines are skipped."""
    if not file_path.exists():
        raise FileNotFoundError(f"Config file not found: {file_path}")

    values: Dict[str, str] = {}
    with open(file_path, "r", encoding="utf-8") as f:
        for line_num, line in enumerate(f, 1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ValueError(f"{file_path}:{line_num}: expected 'key = value', got {text!r}")
            key, value = (part.strip() for part in text.split("=", 1))
            if not key:
                raise ValueError(f"{file_path}:{line_num}: missing key")
            values[key] = value
    return values


def _normalize(value: Any) -> Any:
    if isinstance(value, str) and value.lower() in {"none", "null", ""}:
        return None
    return value


def build_run_config(file_path: Optional[Path] = None, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """File values first, then every non-None override; relative Hamiltonian paths resolve against the config file."""
    values: Dict[str, Any] = {}
    if file_path is not None:
        values.update({key: _normalize(value) for key, value in read_config_file(file_path).items()})
        raw_path = values.get("hamiltonian_path")
        if raw_path and not Path(raw_path).is_absolute():
            values["hamiltonian_path"] = str((file_path.parent / raw_path).resolve())
    values.update({key: value for key, value in (overrides or {}).items() if value is not None})
    if not values.get("database_url") and os.environ.get(DATABASE_URL_ENV):
        values["database_url"] = os.environ[DATABASE_URL_ENV]
    values = {key: value for key, value in values.items() if value is not None}
    return RunConfig(**values)


def config_hash(config: RunConfig) -> str:
    """sha256 over every field that can change a result."""
    payload = config.model_dump_json(exclude=_NON_RESULT_FIELDS)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()
