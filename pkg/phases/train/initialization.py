"""
Model state construction and initial assignments.
"""

import logging
from typing import List, Optional, Sequence

import numpy as np

from config import Hyperparams
from core.emission import Emission, GaussianEmission, MultinomialEmission
from core.gaussian import embedding_prior
from core.tree import CandidatePath, PayloadFactory, TopicTree, build_complete_tree
from models.corpus import Corpus, Document, EmbeddingTable
from models.state import ModelState
from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)


def build_emission(model: str, hyperparams: Hyperparams, vocab_size: int,
                   embeddings: Optional[EmbeddingTable] = None) -> Emission:
    """Gaussian emission for glda/ghlda, Dirichlet-multinomial for lda/hlda."""
    if model in ("glda", "ghlda"):
        if embeddings is None:
            raise ConfigurationError(f"Model {model} requires embeddings; ingest with an embedding file")
        if len(embeddings) != vocab_size:
            raise ConfigurationError(
                f"Embedding table has {len(embeddings)} rows but the vocabulary has {vocab_size} words"
            )
        prior = embedding_prior(embeddings.matrix, hyperparams.psi_scale, hyperparams.kappa, hyperparams.nu)
        ratios = hyperparams.level_psi_ratios if model == "ghlda" else None
        logger.info(
            f"NIW prior: M={prior.dim}, kappa={prior.kappa}, v={prior.nu}, Psi={hyperparams.psi_scale}*I"
            + (f", level ratios {list(ratios)}" if ratios else "")
        )
        return GaussianEmission(embeddings.matrix, prior, ratios)
    if model == "lda":
        return MultinomialEmission(vocab_size, [hyperparams.beta])
    if model == "hlda":
        return MultinomialEmission(vocab_size, hyperparams.eta_levels)
    raise ConfigurationError(f"Unknown model {model!r}")


def init_tree(branch_spec: Sequence[int], gamma: float, payload_factory: PayloadFactory) -> TopicTree:
    """Complete initial tree, e.g. [1, 1, 4, 4] gives 22 nodes and 16 paths."""
    tree = build_complete_tree(branch_spec, gamma, payload_factory)
    logger.info(f"Initial tree {list(branch_spec)}: {tree.node_count} nodes, {tree.path_count} paths")
    return tree


def frequency_levels(word_frequencies: np.ndarray, depth: int) -> np.ndarray:
    """
    Level of every word from the corpus-frequency CDF split into `depth`
    equal-mass segments; the most frequent words land on level 0.
    """
    word_frequencies = np.asarray(word_frequencies, dtype=float)
    levels = np.zeros(word_frequencies.shape[0], dtype=np.int64)
    total = word_frequencies.sum()
    if depth <= 1 or total <= 0:
        return levels
    order = np.argsort(-word_frequencies, kind="stable")
    mass_before = (np.cumsum(word_frequencies[order]) - word_frequencies[order]) / total
    levels[order] = np.minimum(np.floor(mass_before * depth).astype(np.int64), depth - 1)
    return levels


def init_levels(documents: Sequence[Document], word_frequencies: np.ndarray, depth: int,
                rng: np.random.Generator) -> List[np.ndarray]:
    """
    Half the tokens (independently, probability 0.5) take their word's
    frequency-CDF level; the rest get a uniform random level.
    """
    by_word = frequency_levels(word_frequencies, depth)
    levels = []
    for doc in documents:
        tokens = np.asarray(doc.tokens, dtype=np.int64)
        use_frequency = rng.random(tokens.shape[0]) < 0.5
        uniform = rng.integers(depth, size=tokens.shape[0])
        levels.append(np.where(use_frequency, by_word[tokens], uniform).astype(np.int64))
    return levels


def _init_flat(state: ModelState) -> None:
    num_topics = state.hyperparams.num_topics
    state.topics = [state.emission.new_payload(0) for _ in range(num_topics)]
    for d, doc in enumerate(state.documents):
        topics = state.rng.integers(num_topics, size=len(doc)).astype(np.int64)
        state.assignments.topics.append(topics)
        for word, k in zip(doc.tokens, topics):
            state.emission.add(state.topics[int(k)], word)
        state.doc_topic_counts[d] = np.bincount(topics, minlength=num_topics)


def _init_hierarchical(state: ModelState) -> None:
    params = state.hyperparams
    tree = init_tree(params.branch_spec, params.gamma, state.emission.new_payload)
    state.tree = tree

    initial_paths = tree.leaf_paths()
    choices = state.rng.integers(len(initial_paths), size=len(state.documents))
    state.assignments.levels = init_levels(
        state.documents, state.corpus.word_frequencies(), tree.depth, state.rng
    )
    for d, doc in enumerate(state.documents):
        path = tree.attach(d, CandidatePath(initial_paths[int(choices[d])]))
        state.assignments.paths.append(path)
        levels = state.assignments.levels[d]
        for word, level in zip(doc.tokens, levels):
            state.emission.add(tree.nodes[path[int(level)]].payload, word)
        state.doc_level_counts[d] = np.bincount(levels, minlength=tree.depth)

    removed = tree.collect_empty()
    if removed:
        logger.info(f"Removed {removed} initial nodes that received no documents")


def build_state(model: str, corpus: Corpus, hyperparams: Hyperparams, seed: int,
                embeddings: Optional[EmbeddingTable] = None) -> ModelState:
    """Fresh state with random initial assignments, ready for epoch 1."""
    hyperparams.validate(model)
    emission = build_emission(model, hyperparams, len(corpus.vocab), embeddings)
    state = ModelState(model, corpus, hyperparams, emission, seed, embeddings)
    if state.is_hierarchical:
        _init_hierarchical(state)
    else:
        _init_flat(state)
    logger.info(f"Initialized {model} state: {corpus.num_tokens} tokens, {state.tree_summary()}")
    return state
