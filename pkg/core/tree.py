"""
Nested Chinese restaurant process topic tree.

The tree owns node storage, document-path bookkeeping and garbage
collection. Node payloads (topic statistics) are created through a
factory so the same tree serves the Gaussian and multinomial models;
the tree itself never looks inside a payload except to check that a
node is empty before collecting it.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from scipy.special import gammaln

from utils.errors import ConfigurationError, TreeStateError

logger = logging.getLogger(__name__)

PayloadFactory = Callable[[int], Any]


@dataclass
class TopicNode:
    """One topic in the hierarchy."""
    id: int
    parent: Optional[int]
    level: int
    payload: Any
    children: List[int] = field(default_factory=list)
    doc_count: int = 0

    @property
    def token_count(self) -> int:
        return getattr(self.payload, "n", 0)


@dataclass(frozen=True)
class CandidatePath:
    """
    A root-to-leaf path of length L.

    Hypothetical nodes (a new branch the nCRP might open) are None.
    """
    nodes: Tuple[Optional[int], ...]

    @property
    def is_new(self) -> Tuple[bool, ...]:
        return tuple(node is None for node in self.nodes)

    @property
    def is_existing(self) -> bool:
        return all(node is not None for node in self.nodes)

    @property
    def branch_level(self) -> Optional[int]:
        """Level of the first hypothetical node, or None for an existing path."""
        for level, node in enumerate(self.nodes):
            if node is None:
                return level
        return None

    def label(self) -> str:
        return "-".join("new" if node is None else str(node) for node in self.nodes)


class TopicTree:
    """nCRP tree truncated at `depth` levels."""

    def __init__(self, depth: int, gamma: float, payload_factory: PayloadFactory):
        if depth < 1:
            raise ConfigurationError(f"Tree depth must be >= 1, got {depth}")
        if not gamma > 0:
            raise ConfigurationError(f"nCRP gamma must be positive, got {gamma}")
        self.depth = depth
        self.gamma = float(gamma)
        self.payload_factory = payload_factory
        self.nodes: Dict[int, TopicNode] = {}
        self._next_id = 0
        self._doc_paths: Dict[int, Tuple[int, ...]] = {}
        self.root = self._create_node(parent=None, level=0)

    # ------------------------------------------------------------------
    # Structure
    # ------------------------------------------------------------------

    def _create_node(self, parent: Optional[int], level: int) -> int:
        node_id = self._next_id
        self._next_id += 1
        self.nodes[node_id] = TopicNode(
            id=node_id, parent=parent, level=level, payload=self.payload_factory(level)
        )
        if parent is not None:
            self.nodes[parent].children.append(node_id)
        return node_id

    def add_child(self, parent_id: int) -> int:
        parent = self.nodes[parent_id]
        if parent.level >= self.depth - 1:
            raise TreeStateError(f"Node {parent_id} is at the leaf level and cannot branch")
        return self._create_node(parent=parent_id, level=parent.level + 1)

    @property
    def next_id(self) -> int:
        return self._next_id

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def leaves(self) -> List[int]:
        return [node.id for node in self.iter_nodes() if node.level == self.depth - 1]

    @property
    def path_count(self) -> int:
        return len(self.leaves())

    def iter_nodes(self) -> Iterator[TopicNode]:
        """Depth-first pre-order from the root, children in insertion order."""
        stack = [self.root]
        while stack:
            node = self.nodes[stack.pop()]
            yield node
            stack.extend(reversed(node.children))

    def nodes_per_level(self) -> List[int]:
        counts = [0] * self.depth
        for node in self.nodes.values():
            counts[node.level] += 1
        return counts

    def path_to(self, node_id: int) -> Tuple[int, ...]:
        path = []
        current: Optional[int] = node_id
        while current is not None:
            path.append(current)
            current = self.nodes[current].parent
        return tuple(reversed(path))

    def leaf_paths(self) -> List[Tuple[int, ...]]:
        return [self.path_to(leaf) for leaf in self.leaves()]

    # ------------------------------------------------------------------
    # Paths and the nCRP prior
    # ------------------------------------------------------------------

    def enumerate_paths(self, allow_new: bool = True) -> List[CandidatePath]:
        """
        Every existing root-to-leaf path, plus (when allow_new) one new-branch
        candidate per internal node.
        """
        paths: List[CandidatePath] = []

        def walk(node_id: int, prefix: Tuple[int, ...]) -> None:
            node = self.nodes[node_id]
            prefix = prefix + (node_id,)
            if node.level == self.depth - 1:
                paths.append(CandidatePath(prefix))
                return
            for child in node.children:
                walk(child, prefix)
            if allow_new:
                paths.append(CandidatePath(prefix + (None,) * (self.depth - 1 - node.level)))

        walk(self.root, ())
        return paths

    def validate_path(self, path: CandidatePath) -> None:
        nodes = path.nodes
        if len(nodes) != self.depth:
            raise TreeStateError(f"Path {path.label()} has length {len(nodes)}, tree depth is {self.depth}")
        if nodes[0] != self.root:
            raise TreeStateError(f"Path {path.label()} does not start at the root {self.root}")
        for level in range(1, self.depth):
            parent, child = nodes[level - 1], nodes[level]
            if child is None:
                continue
            if parent is None:
                raise TreeStateError(f"Path {path.label()} returns to existing nodes after a new branch")
            if child not in self.nodes or self.nodes[child].parent != parent:
                raise TreeStateError(f"Path {path.label()}: {child} is not a child of {parent}")

    def path_log_prior(self, path: CandidatePath, excluding_doc: Optional[int] = None) -> float:
        """
        nCRP log probability of choosing `path`, with counts that already
        exclude the held-out document.
        """
        if excluding_doc is not None and excluding_doc in self._doc_paths:
            raise TreeStateError(f"Document {excluding_doc} is still attached; detach it before scoring paths")
        self.validate_path(path)

        total = 0.0
        for level in range(self.depth - 1):
            parent_id = path.nodes[level]
            if parent_id is None:
                # below a new node every choice is forced: gamma / gamma
                break
            parent_docs = self.nodes[parent_id].doc_count
            child_id = path.nodes[level + 1]
            if child_id is None:
                total += math.log(self.gamma) - math.log(self.gamma + parent_docs)
            else:
                child_docs = self.nodes[child_id].doc_count
                if child_docs == 0:
                    return float("-inf")
                total += math.log(child_docs) - math.log(self.gamma + parent_docs)
        return total

    def log_partition_prior(self) -> float:
        """
        Log nCRP probability of the current document-to-path configuration:
        a Chinese restaurant partition at every internal node.
        """
        total = 0.0
        log_gamma = math.log(self.gamma)
        for node in self.nodes.values():
            if node.level == self.depth - 1 or node.doc_count == 0:
                continue
            child_counts = [self.nodes[c].doc_count for c in node.children if self.nodes[c].doc_count > 0]
            total += len(child_counts) * log_gamma
            total += float(sum(gammaln(count) for count in child_counts))
            total += float(gammaln(self.gamma) - gammaln(self.gamma + node.doc_count))
        return total

    # ------------------------------------------------------------------
    # Document bookkeeping
    # ------------------------------------------------------------------

    @property
    def attached_documents(self) -> int:
        return len(self._doc_paths)

    def is_attached(self, doc_id: int) -> bool:
        return doc_id in self._doc_paths

    def path_of(self, doc_id: int) -> Tuple[int, ...]:
        try:
            return self._doc_paths[doc_id]
        except KeyError:
            raise TreeStateError(f"Document {doc_id} is not attached") from None

    def attach(self, doc_id: int, path: CandidatePath) -> Tuple[int, ...]:
        """
        Put a document on a path, materialising hypothetical nodes.

        Returns:
            The concrete node-id path.
        """
        if doc_id in self._doc_paths:
            raise TreeStateError(f"Document {doc_id} is already attached")
        self.validate_path(path)

        concrete: List[int] = []
        for level, node_id in enumerate(path.nodes):
            if node_id is None:
                node_id = self.add_child(concrete[level - 1])
                logger.debug(f"Created node {node_id} at level {level}")
            concrete.append(node_id)

        for node_id in concrete:
            self.nodes[node_id].doc_count += 1
        result = tuple(concrete)
        self._doc_paths[doc_id] = result
        return result

    def detach(self, doc_id: int, path: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
        """
        Remove a document from its path and garbage-collect emptied nodes.

        Token payloads along the path must already be emptied of the
        document's tokens; collecting a node whose payload still holds
        tokens raises TreeStateError.
        """
        current = self.path_of(doc_id)
        if path is not None and tuple(path) != current:
            raise TreeStateError(f"Document {doc_id} is on {current}, not {tuple(path)}")
        del self._doc_paths[doc_id]

        for node_id in current:
            self.nodes[node_id].doc_count -= 1
        for node_id in reversed(current[1:]):
            if self.nodes[node_id].doc_count == 0:
                self._remove_node(node_id)
        return current

    def _remove_node(self, node_id: int) -> None:
        node = self.nodes[node_id]
        if node.token_count != 0:
            raise TreeStateError(
                f"Node {node_id} has no documents but still holds {node.token_count} tokens"
            )
        if node.children:
            raise TreeStateError(f"Node {node_id} has no documents but still has children {node.children}")
        self.nodes[node.parent].children.remove(node_id)
        del self.nodes[node_id]
        logger.debug(f"Collected empty node {node_id} at level {node.level}")

    def collect_empty(self) -> int:
        """Remove every non-root node without documents. Returns the number removed."""
        removed = 0
        for node in sorted(self.nodes.values(), key=lambda n: -n.level):
            if node.id != self.root and node.doc_count == 0:
                self._remove_node(node.id)
                removed += 1
        return removed

    # ------------------------------------------------------------------
    # Snapshots
    # ------------------------------------------------------------------

    def structure_dict(self) -> Dict[str, Any]:
        """Immutable description of the structure (no payloads)."""
        return {
            "depth": self.depth,
            "gamma": self.gamma,
            "root": self.root,
            "next_id": self._next_id,
            "nodes": [
                {
                    "id": node.id,
                    "parent": node.parent,
                    "level": node.level,
                    "children": list(node.children),
                    "doc_count": node.doc_count,
                }
                for node in self.iter_nodes()
            ],
            "documents": {str(doc_id): list(path) for doc_id, path in sorted(self._doc_paths.items())},
        }

    @classmethod
    def from_structure(cls, data: Dict[str, Any], payload_factory: PayloadFactory) -> "TopicTree":
        tree = cls.__new__(cls)
        tree.depth = int(data["depth"])
        tree.gamma = float(data["gamma"])
        tree.payload_factory = payload_factory
        tree.root = int(data["root"])
        tree._next_id = int(data["next_id"])
        tree.nodes = {}
        for entry in data["nodes"]:
            level = int(entry["level"])
            tree.nodes[int(entry["id"])] = TopicNode(
                id=int(entry["id"]),
                parent=entry["parent"],
                level=level,
                payload=payload_factory(level),
                children=[int(c) for c in entry["children"]],
                doc_count=int(entry["doc_count"]),
            )
        tree._doc_paths = {int(d): tuple(int(n) for n in p) for d, p in data["documents"].items()}
        return tree


def build_complete_tree(branch_spec: Sequence[int], gamma: float,
                        payload_factory: PayloadFactory) -> TopicTree:
    """
    Complete tree where every node at level l-1 has branch_spec[l] children.

    branch_spec[0] is the single root.
    """
    branch_spec = list(branch_spec)
    if not branch_spec or branch_spec[0] != 1:
        raise ConfigurationError(f"branch_spec must start with a single root, got {branch_spec}")
    if any(int(b) < 1 for b in branch_spec):
        raise ConfigurationError(f"branch_spec entries must be >= 1, got {branch_spec}")

    tree = TopicTree(depth=len(branch_spec), gamma=gamma, payload_factory=payload_factory)
    frontier = [tree.root]
    for branches in branch_spec[1:]:
        next_frontier = []
        for parent in frontier:
            for _ in range(int(branches)):
                next_frontier.append(tree.add_child(parent))
        frontier = next_frontier
    return tree
