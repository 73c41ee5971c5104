"""
Evaluate: held-out likelihood, PMI coherence, polysemy and top words.
"""

# Main entry points
from .orchestrator import run_evaluation, run_polysemy, run_topics

# Statistics
from .stats import EvalStats

# Topics
from .topics import TopicReport, top_words, topic_reports, topic_word_counts

# Held-out likelihood
from .heldout import (
    FlatPredictor,
    HeldoutResult,
    PathPredictor,
    left_to_right,
    relative_standard_error,
    snapshot_predictor,
)

# Coherence
from .coherence import (
    CoherenceResult,
    CooccurrenceStats,
    build_cooccurrence,
    load_or_build_cooccurrence,
    pmi,
    pmi_coherence,
)

# Polysemy
from .polysemy import PolysemyEntry, assignment_groups, polysemy_report

__all__ = [
    'run_evaluation',
    'run_topics',
    'run_polysemy',
    'EvalStats',

    'TopicReport',
    'top_words',
    'topic_reports',
    'topic_word_counts',

    'FlatPredictor',
    'PathPredictor',
    'HeldoutResult',
    'left_to_right',
    'relative_standard_error',
    'snapshot_predictor',

    'CoherenceResult',
    'CooccurrenceStats',
    'build_cooccurrence',
    'load_or_build_cooccurrence',
    'pmi',
    'pmi_coherence',

    'PolysemyEntry',
    'assignment_groups',
    'polysemy_report',
]
