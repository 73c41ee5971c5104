"""
Epoch loop shared by all four models.
"""

import logging
import threading
import time
from typing import Callable, Optional, TextIO, Union

import numpy as np

from models.state import ModelState
from utils.errors import ConfigurationError
from utils.json_handler import write_json_line

from .flat import FlatGibbsSampler
from .hierarchical import HierarchicalGibbsSampler
from .likelihood import joint_log_likelihood
from .stats import EpochRecord, TrainStats

logger = logging.getLogger(__name__)

Sampler = Union[FlatGibbsSampler, HierarchicalGibbsSampler]


class DiagnosticsWriter:
    """Thread-safe JSON-lines sink for epoch records."""

    def __init__(self, stream: TextIO):
        self.stream = stream
        self._lock = threading.Lock()

    def write(self, record: EpochRecord) -> None:
        with self._lock:
            write_json_line(record.to_dict(), self.stream)


def make_sampler(state: ModelState, max_workers: int = 1) -> Sampler:
    if state.is_hierarchical:
        return HierarchicalGibbsSampler(state, max_workers=max_workers)
    return FlatGibbsSampler(state)


def document_order(state: ModelState, shuffle: bool) -> np.ndarray:
    num_docs = len(state.documents)
    if shuffle:
        return state.rng.permutation(num_docs)
    return np.arange(num_docs)


def run_epoch(state: ModelState, sampler: Sampler, allow_new: bool = True, shuffle: bool = False) -> None:
    """One sweep: every document in corpus order (or a fresh permutation)."""
    for d in document_order(state, shuffle):
        if state.is_hierarchical:
            sampler.document_step(int(d), allow_new=allow_new)
        else:
            sampler.document_step(int(d))
    state.epoch += 1


def epoch_record(state: ModelState, evaluations_before: int, allow_new: Optional[bool],
                 wall_time: Optional[float]) -> EpochRecord:
    summary = state.tree_summary()
    return EpochRecord(
        epoch=state.epoch,
        log_likelihood=joint_log_likelihood(state),
        num_topics=summary["num_topics"],
        density_evaluations=state.density_evaluations,
        epoch_density_evaluations=state.density_evaluations - evaluations_before,
        num_paths=summary.get("num_paths"),
        topics_per_level=summary.get("topics_per_level"),
        new_branches_allowed=allow_new,
        wall_time=wall_time,
    )


def train(
    state: ModelState,
    epochs: int,
    freeze_new_leaves_for: Optional[int] = None,
    shuffle: bool = False,
    max_workers: int = 1,
    diagnostics: Optional[DiagnosticsWriter] = None,
    record_wall_time: bool = False,
    on_epoch_end: Optional[Callable[[ModelState, EpochRecord], None]] = None,
) -> TrainStats:
    """
    Run `epochs` further epochs on an initialized (or resumed) state.

    Hierarchical models do not offer new-branch candidates while fewer than
    `freeze_new_leaves_for` epochs have been completed; the count is the
    state's absolute epoch, so a resumed run keeps the same schedule.
    """
    if epochs < 0:
        raise ConfigurationError(f"epochs must be >= 0, got {epochs}")
    if freeze_new_leaves_for is None:
        freeze_new_leaves_for = state.hyperparams.freeze_new_leaves_for

    stats = TrainStats()
    stats.model = state.model
    stats.start_epoch = state.epoch
    stats.documents = len(state.documents)
    stats.tokens = state.corpus.num_tokens
    sampler = make_sampler(state, max_workers)
    start = time.time()

    for _ in range(epochs):
        epoch_start = time.time()
        evaluations_before = state.density_evaluations
        allow_new: Optional[bool] = None
        if state.is_hierarchical:
            allow_new = state.epoch >= freeze_new_leaves_for
            run_epoch(state, sampler, allow_new=allow_new, shuffle=shuffle)
        else:
            run_epoch(state, sampler, shuffle=shuffle)

        wall_time = time.time() - epoch_start if record_wall_time else None
        record = epoch_record(state, evaluations_before, allow_new, wall_time)
        stats.records.append(record)
        stats.epochs_run += 1
        if diagnostics is not None:
            diagnostics.write(record)

        shape = f", paths={record.num_paths}" if record.num_paths is not None else ""
        logger.info(
            f"Epoch {record.epoch}: log-likelihood={record.log_likelihood:.4f}, "
            f"topics={record.num_topics}{shape}, density evaluations={record.epoch_density_evaluations}"
        )
        if on_epoch_end is not None:
            on_epoch_end(state, record)

    stats.duration = time.time() - start
    return stats
