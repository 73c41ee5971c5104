"""
Evaluate Orchestrator Module.
Loads a trained checkpoint and runs the selected evaluations: held-out
likelihood, PMI coherence and the polysemy audit. Writes a JSON report.
"""

import logging
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from config import RunConfig
from models.state import ModelState
from phases.ingest.tokenizer import read_corpus_file
from phases.train.orchestrator import load_trained_state
from utils.json_handler import save_json, versioned

from .coherence import DOCUMENT_WINDOW, load_or_build_cooccurrence, pmi_coherence
from .heldout import left_to_right, snapshot_predictor
from .polysemy import PolysemyEntry, polysemy_report
from .stats import EvalStats
from .topics import TopicReport, topic_reports

logger = logging.getLogger(__name__)

REPORT_FORMAT = "ghlda-report"
REPORT_VERSION = 1


def default_report_path(config: RunConfig) -> Path:
    return config.report_path or Path(config.output_dir) / f"{config.model}_report.json"


def reference_documents(config: RunConfig, state: ModelState) -> List[Sequence[str]]:
    """Reference corpus for co-occurrence; the training corpus when none is configured."""
    if config.reference_corpus_path is not None:
        return [doc.tokens for doc in read_corpus_file(config.reference_corpus_path)]
    vocab = state.corpus.vocab
    return [vocab.decode(doc.tokens) for doc in state.documents]


def run_evaluation(
    config: RunConfig,
    heldout: bool = True,
    pmi: bool = False,
    polysemy: bool = False,
    state: Optional[ModelState] = None,
) -> Tuple[EvalStats, Dict[str, Any]]:
    """
    Run the evaluation phase.

    Steps:
    1. Load the corpus cache and checkpoint (unless a state is given)
    2. Held-out left-to-right likelihood on the test split
    3. PMI coherence of the top words against the reference corpus
    4. Polysemy table
    5. Write the JSON report

    Returns:
        Tuple of (EvalStats, report dict)
    """
    stats = EvalStats()
    start = time.time()
    logger.info("=" * 60)
    logger.info("Starting Evaluation")
    logger.info("=" * 60)

    if state is None:
        state = load_trained_state(config)
    stats.model = state.model
    stats.epoch = state.epoch
    stats.num_topics = state.num_topics

    report = versioned(REPORT_FORMAT, REPORT_VERSION, model=state.model, epoch=state.epoch,
                       tree=state.tree_summary())

    if heldout:
        test_docs = state.corpus.test
        stats.test_documents = len(test_docs)
        stats.test_tokens = sum(len(doc) for doc in test_docs)
        stats.particles = config.particles
        if test_docs:
            result = left_to_right(snapshot_predictor(state), test_docs, particles=config.particles,
                                   seed=config.seed, max_workers=config.threads)
            stats.heldout_mean = result.mean
            report["heldout"] = result.to_dict()
        else:
            logger.warning("Corpus cache has no test documents; skipping held-out likelihood")
        stats.sections.append("heldout")

    reports: Optional[List[TopicReport]] = None
    if pmi:
        reports = topic_reports(state, config.top_n)
        window = config.cooccurrence_window or DOCUMENT_WINDOW
        cooc = load_or_build_cooccurrence(
            reference_documents(config, state),
            window,
            Path(config.output_dir) / "cache",
            vocabulary=state.corpus.vocab.words,
        )
        coherence = pmi_coherence(reports, cooc, config.top_n)
        stats.reference_windows = cooc.total_windows
        stats.pmi_mean = coherence.mean
        stats.topics_scored = sum(1 for v in coherence.per_topic.values() if v is not None)
        report["pmi"] = coherence.to_dict()
        report["topics"] = [r.to_dict() for r in reports]
        stats.sections.append("pmi")

    if polysemy:
        entries = polysemy_report(state, config.polysemy_min_count)
        stats.polysemy_words = len(entries)
        stats.polysemous_words = sum(1 for e in entries if e.polysemous)
        report["polysemy"] = [e.to_dict() for e in entries]
        stats.sections.append("polysemy")

    report_path = default_report_path(config)
    save_json(report, report_path)
    stats.duration = time.time() - start

    logger.info("=" * 60)
    logger.info("Evaluation Summary:")
    logger.info(f"  Model: {stats.model} at epoch {stats.epoch}, {stats.num_topics} topics")
    if stats.heldout_mean is not None:
        logger.info(f"  Held-out: {stats.test_documents} docs, R={stats.particles}, mean={stats.heldout_mean:.4f}")
    if "pmi" in stats.sections:
        logger.info(f"  PMI: mean={stats.pmi_mean} over {stats.topics_scored} topics")
    if "polysemy" in stats.sections:
        logger.info(f"  Polysemy: {stats.polysemous_words}/{stats.polysemy_words} words flagged")
    logger.info(f"  Report: {report_path}")
    logger.info("=" * 60)
    return stats, report


def run_topics(config: RunConfig) -> Tuple[ModelState, List[TopicReport]]:
    """Top words of every topic in a checkpoint."""
    state = load_trained_state(config)
    return state, topic_reports(state, config.top_n)


def run_polysemy(config: RunConfig) -> Tuple[ModelState, List[PolysemyEntry]]:
    state = load_trained_state(config)
    return state, polysemy_report(state, config.polysemy_min_count)
