"""
Evaluation statistics tracking.
"""

from typing import Any, Dict, List, Optional


class EvalStats:
    """What an evaluation run measured."""

    def __init__(self):
        self.model = ""
        self.epoch = 0
        self.num_topics = 0

        # Held-out likelihood
        self.test_documents = 0
        self.test_tokens = 0
        self.particles = 0
        self.heldout_mean: Optional[float] = None

        # Coherence
        self.reference_windows = 0
        self.pmi_mean: Optional[float] = None
        self.topics_scored = 0

        # Polysemy
        self.polysemy_words = 0
        self.polysemous_words = 0

        self.sections: List[str] = []
        self.duration = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "epoch": self.epoch,
            "num_topics": self.num_topics,
            "test_documents": self.test_documents,
            "test_tokens": self.test_tokens,
            "particles": self.particles,
            "heldout_mean": self.heldout_mean,
            "reference_windows": self.reference_windows,
            "pmi_mean": self.pmi_mean,
            "topics_scored": self.topics_scored,
            "polysemy_words": self.polysemy_words,
            "polysemous_words": self.polysemous_words,
            "sections": self.sections,
            "duration": self.duration,
        }
