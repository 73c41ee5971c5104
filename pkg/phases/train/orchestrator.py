"""
Train Orchestrator Module.
Builds or resumes a model state, runs the epoch loop, streams diagnostics
and writes checkpoints.
"""

import logging
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional, TextIO, Tuple

from config import RunConfig
from models.state import ModelState
from phases.ingest.cache import load_corpus_cache
from utils.file_operations import ensure_directory

from .checkpoint import load_checkpoint, save_checkpoint
from .initialization import build_state
from .loop import DiagnosticsWriter, train
from .stats import EpochRecord, TrainStats

logger = logging.getLogger(__name__)


def default_checkpoint_path(config: RunConfig) -> Path:
    return config.checkpoint_path or Path(config.output_dir) / f"{config.model}_checkpoint.json"


def default_diagnostics_path(config: RunConfig) -> Path:
    return config.diagnostics_path or Path(config.output_dir) / f"{config.model}_diagnostics.jsonl"


@contextmanager
def open_diagnostics(path: Path, append: bool) -> Iterator[TextIO]:
    """`-` means stdout."""
    if str(path) == "-":
        yield sys.stdout
        return
    ensure_directory(Path(path).parent)
    with open(path, "a" if append else "w", encoding="utf-8") as stream:
        yield stream


def run_training(config: RunConfig) -> Tuple[TrainStats, ModelState]:
    """
    Run the training phase.

    Steps:
    1. Load the corpus cache (and embeddings for Gaussian models)
    2. Initialize a fresh state, or resume from `resume_from`
    3. Run the configured number of epochs, one diagnostics line per epoch
    4. Checkpoint every `save_every` epochs and at the end

    Returns:
        Tuple of (TrainStats, ModelState)
    """
    logger.info("=" * 60)
    logger.info(f"Starting Training: {config.model}")
    logger.info("=" * 60)

    corpus, embeddings = load_corpus_cache(config.cache_path)
    resuming = config.resume_from is not None
    if resuming:
        state = load_checkpoint(config.resume_from, corpus, embeddings)
        if state.model != config.model:
            logger.warning(f"Checkpoint holds a {state.model} model; continuing with it instead of {config.model}")
    else:
        state = build_state(config.model, corpus, config.hyperparams, config.seed, embeddings)

    checkpoint_path = default_checkpoint_path(config)
    diagnostics_path = default_diagnostics_path(config)
    epochs = config.num_epochs
    logger.info(f"Running {epochs} epochs from epoch {state.epoch} (seed={state.seed})")
    logger.info(f"Diagnostics: {diagnostics_path}, checkpoint: {checkpoint_path}")

    written = []

    def save_periodically(current: ModelState, record: EpochRecord) -> None:
        if config.save_every and current.epoch % config.save_every == 0:
            save_checkpoint(current, checkpoint_path)
            written.append(f"epoch {current.epoch}")

    with open_diagnostics(diagnostics_path, append=resuming) as stream:
        stats = train(
            state,
            epochs,
            shuffle=config.shuffle_documents,
            max_workers=config.threads,
            diagnostics=DiagnosticsWriter(stream),
            record_wall_time=config.record_wall_time,
            on_epoch_end=save_periodically,
        )

    ensure_directory(checkpoint_path.parent)
    save_checkpoint(state, checkpoint_path)
    written.append(f"epoch {state.epoch} (final)")
    stats.checkpoints_written = written

    logger.info("=" * 60)
    logger.info("Training Summary:")
    logger.info(f"  Model: {state.model}, epochs run: {stats.epochs_run}, now at epoch {state.epoch}")
    logger.info(f"  Documents: {stats.documents}, tokens: {stats.tokens}")
    if stats.final_log_likelihood is not None:
        logger.info(f"  Final joint log-likelihood: {stats.final_log_likelihood:.4f}")
    logger.info(f"  Topics: {state.tree_summary()}")
    logger.info(f"  Density evaluations: {state.density_evaluations}")
    logger.info(f"  Checkpoint: {checkpoint_path}")
    logger.info("=" * 60)
    return stats, state


def load_trained_state(config: RunConfig, checkpoint: Optional[Path] = None) -> ModelState:
    """Corpus cache plus checkpoint, for the evaluation and export commands."""
    corpus, embeddings = load_corpus_cache(config.cache_path)
    return load_checkpoint(checkpoint or default_checkpoint_path(config), corpus, embeddings)
