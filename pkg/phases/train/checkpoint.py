"""
Checkpoint save/load.

A checkpoint is a versioned JSON document holding everything needed to
resume bit-exactly: hyperparameters, seed and RNG state, epoch, the
assignments, the tree structure and every topic payload (including the
incrementally maintained Cholesky factors).
"""

import logging
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np

from config import Hyperparams
from core.tree import TopicTree
from models.corpus import Corpus, EmbeddingTable
from models.state import Assignments, ModelState
from utils.errors import CheckpointError
from utils.json_handler import check_versioned, load_json, save_json, versioned

from .initialization import build_emission

logger = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "ghlda-checkpoint"
CHECKPOINT_VERSION = 1


def state_to_dict(state: ModelState) -> Dict[str, Any]:
    emission = state.emission
    data = versioned(
        CHECKPOINT_FORMAT,
        CHECKPOINT_VERSION,
        model=state.model,
        seed=state.seed,
        epoch=state.epoch,
        hyperparams=state.hyperparams.to_dict(),
        vocabulary=list(state.corpus.vocab.words),
        rng_state=state.rng.bit_generator.state,
        density_evaluations=emission.density_evaluations,
        assignments=state.assignments.to_dict(),
    )
    if state.is_hierarchical:
        data["tree"] = state.tree.structure_dict()
        data["payloads"] = {
            str(node.id): emission.payload_to_dict(node.payload) for node in state.tree.iter_nodes()
        }
    else:
        data["payloads"] = [emission.payload_to_dict(p) for p in state.topics]
    return data


def save_checkpoint(state: ModelState, path: Path) -> None:
    save_json(state_to_dict(state), Path(path))
    logger.info(f"Saved {state.model} checkpoint at epoch {state.epoch} to {path}")


def state_from_dict(data: Dict[str, Any], corpus: Corpus,
                    embeddings: Optional[EmbeddingTable] = None) -> ModelState:
    """
    Raises:
        CheckpointError: on an unknown format, a newer version or a vocabulary mismatch
    """
    check_versioned(data, CHECKPOINT_FORMAT, CHECKPOINT_VERSION, "checkpoint")
    if data["vocabulary"] != list(corpus.vocab.words):
        raise CheckpointError(
            f"Checkpoint vocabulary ({len(data['vocabulary'])} words) does not match the corpus "
            f"vocabulary ({len(corpus.vocab)} words)"
        )

    model = data["model"]
    hyperparams = Hyperparams.from_dict(data["hyperparams"])
    emission = build_emission(model, hyperparams, len(corpus.vocab), embeddings)
    state = ModelState(model, corpus, hyperparams, emission, int(data["seed"]), embeddings)
    state.epoch = int(data["epoch"])
    state.rng.bit_generator.state = data["rng_state"]
    emission.density_evaluations = int(data["density_evaluations"])
    state.assignments = Assignments.from_dict(data["assignments"])

    num_docs = len(corpus.train)
    if state.is_hierarchical:
        if len(state.assignments.paths) != num_docs:
            raise CheckpointError(f"Checkpoint has {len(state.assignments.paths)} documents, corpus has {num_docs}")
        tree = TopicTree.from_structure(data["tree"], emission.new_payload)
        for node_id, payload in data["payloads"].items():
            node = tree.nodes[int(node_id)]
            node.payload = emission.payload_from_dict(node.level, payload)
        state.tree = tree
        state.doc_level_counts = np.vstack([
            np.bincount(levels, minlength=tree.depth) for levels in state.assignments.levels
        ]).astype(np.int64)
    else:
        if len(state.assignments.topics) != num_docs:
            raise CheckpointError(f"Checkpoint has {len(state.assignments.topics)} documents, corpus has {num_docs}")
        state.topics = [emission.payload_from_dict(0, p) for p in data["payloads"]]
        state.doc_topic_counts = np.vstack([
            np.bincount(topics, minlength=len(state.topics)) for topics in state.assignments.topics
        ]).astype(np.int64)
    return state


def load_checkpoint(path: Path, corpus: Corpus, embeddings: Optional[EmbeddingTable] = None) -> ModelState:
    state = state_from_dict(load_json(Path(path)), corpus, embeddings)
    logger.info(f"Loaded {state.model} checkpoint from {path} at epoch {state.epoch}")
    return state
