"""
Training statistics tracking.
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional


@dataclass
class EpochRecord:
    """One line of the diagnostics stream."""
    epoch: int
    log_likelihood: float
    num_topics: int
    density_evaluations: int
    epoch_density_evaluations: int
    num_paths: Optional[int] = None
    topics_per_level: Optional[List[int]] = None
    new_branches_allowed: Optional[bool] = None
    wall_time: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        """Omits fields that do not apply, so flat and hierarchical streams stay compact."""
        record: Dict[str, Any] = {
            "epoch": self.epoch,
            "log_likelihood": self.log_likelihood,
            "num_topics": self.num_topics,
            "density_evaluations": self.density_evaluations,
            "epoch_density_evaluations": self.epoch_density_evaluations,
        }
        if self.num_paths is not None:
            record["num_paths"] = self.num_paths
            record["topics_per_level"] = self.topics_per_level
            record["new_branches_allowed"] = self.new_branches_allowed
        if self.wall_time is not None:
            record["wall_time"] = self.wall_time
        return record


class TrainStats:
    """Statistics tracker for a training run."""

    def __init__(self):
        self.model = ""
        self.start_epoch = 0
        self.epochs_run = 0
        self.documents = 0
        self.tokens = 0
        self.records: List[EpochRecord] = []
        self.checkpoints_written: List[str] = []
        self.duration = 0.0

    @property
    def final_log_likelihood(self) -> Optional[float]:
        return self.records[-1].log_likelihood if self.records else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "start_epoch": self.start_epoch,
            "epochs_run": self.epochs_run,
            "documents": self.documents,
            "tokens": self.tokens,
            "final_log_likelihood": self.final_log_likelihood,
            "epochs": [r.to_dict() for r in self.records],
            "checkpoints_written": self.checkpoints_written,
            "duration": self.duration,
        }
