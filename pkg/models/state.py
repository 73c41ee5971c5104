"""
Sampler state shared by the four topic models.
"""

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Tuple

import numpy as np

from core.emission import Emission
from core.gaussian import GaussianTopicStats
from core.tree import TopicTree
from models.corpus import Corpus, Document, EmbeddingTable
from utils.errors import ConfigurationError, TreeStateError

if TYPE_CHECKING:
    from config import Hyperparams

logger = logging.getLogger(__name__)

FLAT_MODELS = ("lda", "glda")
HIERARCHICAL_MODELS = ("hlda", "ghlda")
GAUSSIAN_MODELS = ("glda", "ghlda")
MODELS = FLAT_MODELS + HIERARCHICAL_MODELS


@dataclass
class Assignments:
    """
    Per-token latent variables.

    Flat models fill `topics`; hierarchical models fill `paths` and `levels`.
    """
    topics: List[np.ndarray] = field(default_factory=list)
    paths: List[Tuple[int, ...]] = field(default_factory=list)
    levels: List[np.ndarray] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "topics": [t.tolist() for t in self.topics],
            "paths": [list(p) for p in self.paths],
            "levels": [lv.tolist() for lv in self.levels],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Assignments":
        return cls(
            topics=[np.asarray(t, dtype=np.int64) for t in data.get("topics", [])],
            paths=[tuple(int(n) for n in p) for p in data.get("paths", [])],
            levels=[np.asarray(lv, dtype=np.int64) for lv in data.get("levels", [])],
        )


class ModelState:
    """
    Everything a sampler mutates: topic payloads (flat array or tree),
    assignments, cached document counts, the RNG and the epoch counter.
    """

    def __init__(self, model: str, corpus: Corpus, hyperparams: "Hyperparams", emission: Emission,
                 seed: int, embeddings: Optional[EmbeddingTable] = None):
        if model not in MODELS:
            raise ConfigurationError(f"Unknown model {model!r}; expected one of {MODELS}")
        if model in GAUSSIAN_MODELS and embeddings is None:
            raise ConfigurationError(f"Model {model} requires an embedding table")
        self.model = model
        self.corpus = corpus
        self.hyperparams = hyperparams
        self.emission = emission
        self.embeddings = embeddings
        self.seed = int(seed)
        self.rng = np.random.default_rng(self.seed)
        self.assignments = Assignments()
        self.epoch = 0

        num_docs = len(corpus.train)
        self.tree: Optional[TopicTree] = None
        self.topics: List[Any] = []
        self.doc_topic_counts = np.zeros((0, 0), dtype=np.int64)
        self.doc_level_counts = np.zeros((0, 0), dtype=np.int64)
        if self.is_hierarchical:
            self.doc_level_counts = np.zeros((num_docs, hyperparams.depth), dtype=np.int64)
        else:
            self.doc_topic_counts = np.zeros((num_docs, hyperparams.num_topics), dtype=np.int64)

    @property
    def is_hierarchical(self) -> bool:
        return self.model in HIERARCHICAL_MODELS

    @property
    def is_gaussian(self) -> bool:
        return self.model in GAUSSIAN_MODELS

    @property
    def documents(self) -> List[Document]:
        return self.corpus.train

    @property
    def density_evaluations(self) -> int:
        return self.emission.density_evaluations

    @property
    def num_topics(self) -> int:
        if self.is_hierarchical:
            return self.tree.node_count
        return len(self.topics)

    def node_payload(self, doc_id: int, level: int) -> Any:
        return self.tree.nodes[self.assignments.paths[doc_id][level]].payload

    def topic_ids(self) -> List[int]:
        """Node ids (hierarchical, depth-first) or topic indices (flat)."""
        if self.is_hierarchical:
            return [node.id for node in self.tree.iter_nodes()]
        return list(range(len(self.topics)))

    def topic_payload(self, topic_id: int) -> Any:
        if self.is_hierarchical:
            return self.tree.nodes[topic_id].payload
        return self.topics[topic_id]

    def token_topics(self, doc_id: int) -> np.ndarray:
        """Topic (flat) or node id (hierarchical) of every token in a document."""
        if self.is_hierarchical:
            path = np.asarray(self.assignments.paths[doc_id], dtype=np.int64)
            return path[self.assignments.levels[doc_id]]
        return self.assignments.topics[doc_id]

    def tree_summary(self) -> Dict[str, Any]:
        if not self.is_hierarchical:
            return {"num_topics": len(self.topics)}
        return {
            "num_topics": self.tree.node_count,
            "num_paths": self.tree.path_count,
            "topics_per_level": self.tree.nodes_per_level(),
        }

    # ------------------------------------------------------------------
    # Consistency
    # ------------------------------------------------------------------

    def verify_counts(self, atol: float = 1e-6) -> None:
        """
        Recount every assignment and compare with the cached counts.

        Raises:
            TreeStateError: on the first mismatch found
        """
        docs = self.documents
        if self.is_hierarchical:
            self._verify_tree(docs, atol)
        else:
            self._verify_flat(docs, atol)
        logger.debug(f"Count verification passed for {len(docs)} documents")

    def _verify_flat(self, docs: List[Document], atol: float) -> None:
        num_topics = len(self.topics)
        words_per_topic: List[List[int]] = [[] for _ in range(num_topics)]
        for d, doc in enumerate(docs):
            topics = self.assignments.topics[d]
            counts = np.bincount(topics, minlength=num_topics)
            if not np.array_equal(counts, self.doc_topic_counts[d]):
                raise TreeStateError(f"Document {d}: topic counts {self.doc_topic_counts[d]} != recount {counts}")
            for word, topic in zip(doc.tokens, topics):
                words_per_topic[int(topic)].append(word)
        for k, payload in enumerate(self.topics):
            self._compare_payload(f"topic {k}", payload, self.emission.batch_payload(0, words_per_topic[k]), atol)

    def _verify_tree(self, docs: List[Document], atol: float) -> None:
        tree = self.tree
        depth = tree.depth
        words_per_node: Dict[int, List[int]] = {node_id: [] for node_id in tree.nodes}
        docs_per_node: Dict[int, int] = {node_id: 0 for node_id in tree.nodes}

        for d, doc in enumerate(docs):
            path = self.assignments.paths[d]
            if tree.path_of(d) != path:
                raise TreeStateError(f"Document {d}: assignment path {path} != tree path {tree.path_of(d)}")
            levels = self.assignments.levels[d]
            counts = np.bincount(levels, minlength=depth)
            if not np.array_equal(counts, self.doc_level_counts[d]):
                raise TreeStateError(f"Document {d}: level counts {self.doc_level_counts[d]} != recount {counts}")
            for node_id in path:
                docs_per_node[node_id] += 1
            for word, level in zip(doc.tokens, levels):
                words_per_node[path[int(level)]].append(word)

        for node_id, node in tree.nodes.items():
            if node.doc_count != docs_per_node[node_id]:
                raise TreeStateError(f"Node {node_id}: doc_count {node.doc_count} != recount {docs_per_node[node_id]}")
            if node_id != tree.root and node.doc_count == 0:
                raise TreeStateError(f"Node {node_id} survived with no documents")
            expected = self.emission.batch_payload(node.level, words_per_node[node_id])
            self._compare_payload(f"node {node_id}", node.payload, expected, atol)

    @staticmethod
    def _compare_payload(name: str, payload: Any, expected: Any, atol: float) -> None:
        if payload.n != expected.n:
            raise TreeStateError(f"{name}: token count {payload.n} != recount {expected.n}")
        if isinstance(payload, GaussianTopicStats):
            if not np.allclose(payload.sum, expected.sum, atol=atol, rtol=0):
                raise TreeStateError(f"{name}: embedding sum drifted from recount")
            if not np.allclose(payload.psi_matrix(), expected.psi_matrix(), atol=atol, rtol=1e-9):
                raise TreeStateError(f"{name}: Cholesky factor drifted from batch recomputation")
        elif not np.array_equal(payload.counts, expected.counts):
            raise TreeStateError(f"{name}: word counts differ from recount")
