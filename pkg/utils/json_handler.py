"""
JSON IO for configs, corpus caches, checkpoints, reports and exports,
plus the JSON-lines stream used for per-epoch diagnostics.

Every persisted document except configs carries a "format" tag and an
integer "version"; `check_versioned` is the single place that reads them.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, List, TextIO

import numpy as np

from utils.errors import CheckpointError

logger = logging.getLogger(__name__)


def _to_builtin(value: Any) -> Any:
    """json.dump hook for numpy scalars and arrays."""
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def load_json(path: Path) -> Dict[str, Any]:
    """
    Raises:
        FileNotFoundError: if the file does not exist
        json.JSONDecodeError: if the file is not valid JSON
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"JSON file not found: {path}")

    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        logger.error(f"Invalid JSON in {path}: {e}")
        raise
    logger.debug(f"Loaded {path}")
    return data


def save_json(data: Dict[str, Any], path: Path, indent: int = 2) -> None:
    """
    Write `data` as UTF-8 JSON, creating parent directories.

    Equal inputs give byte-identical files: insertion key order, repr
    floats and a trailing newline.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=indent, ensure_ascii=False, default=_to_builtin)
            f.write("\n")
    except OSError as e:
        logger.error(f"Failed to save JSON to {path}: {e}")
        raise
    logger.debug(f"Saved {path}")


def versioned(fmt: str, version: int, **body: Any) -> Dict[str, Any]:
    """A document dict starting with its format tag and version."""
    return {"format": fmt, "version": version, **body}


def check_versioned(data: Dict[str, Any], fmt: str, version: int, source: Any = "document") -> None:
    """
    Raises:
        CheckpointError: on a different format tag or a version newer than `version`
    """
    if data.get("format") != fmt:
        raise CheckpointError(f"{source} is not a {fmt} file (format={data.get('format')!r})")
    found = int(data.get("version", 0))
    if found > version:
        raise CheckpointError(f"{source} has {fmt} version {found}; this build reads <= {version}")


def write_json_line(record: Dict[str, Any], stream: TextIO) -> None:
    """One compact record per line, flushed so a crashed run keeps its history."""
    stream.write(json.dumps(record, ensure_ascii=False, separators=(",", ":"), default=_to_builtin))
    stream.write("\n")
    stream.flush()


def load_json_lines(path: Path) -> List[Dict[str, Any]]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"JSONL file not found: {path}")

    records = []
    with open(path, 'r', encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as e:
                logger.error(f"Invalid JSON on line {line_number} of {path}: {e}")
                raise
    return records

