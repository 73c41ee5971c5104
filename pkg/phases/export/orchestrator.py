"""
Export Orchestrator Module.
Writes the trained topics as a DOT graph or a JSON document.
"""

import logging
from pathlib import Path
from typing import Optional

from config import RunConfig
from models.state import ModelState
from phases.train.orchestrator import load_trained_state
from utils.errors import ConfigurationError

from .dot_export import export_dot
from .json_export import export_json

logger = logging.getLogger(__name__)

EXPORT_FORMATS = ("dot", "json")


def default_export_path(config: RunConfig, fmt: str) -> Path:
    return Path(config.output_dir) / f"{config.model}_topics.{fmt}"


def run_export(config: RunConfig, fmt: str, output: Optional[Path] = None,
               state: Optional[ModelState] = None) -> Path:
    """
    Raises:
        ConfigurationError: for an unknown format
    """
    if fmt not in EXPORT_FORMATS:
        raise ConfigurationError(f"Unknown export format {fmt!r}; expected one of {EXPORT_FORMATS}")

    logger.info("=" * 60)
    logger.info(f"Starting Export: {fmt}")
    logger.info("=" * 60)

    if state is None:
        state = load_trained_state(config)
    path = Path(output) if output is not None else default_export_path(config, fmt)
    if fmt == "dot":
        export_dot(state, path)
    else:
        export_json(state, path, config.top_n)

    logger.info(f"Export Summary: {state.model}, {state.num_topics} topics -> {path}")
    return path
