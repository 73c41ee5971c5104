"""
JSON export of topics and tree edges, with a schema check for consumers.

Schema (version 1):
    {"format": "ghlda-topics", "version": 1, "model": str,
     "nodes": [{"id", "parent", "level", "doc_count", "token_count",
                "top_words": [{"word", "score"}]}],
     "edges": [[parent_id, child_id], ...]}

Flat models have no edges and null parent/level/doc_count.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List

from models.state import ModelState
from phases.evaluate.topics import topic_reports
from utils.errors import CheckpointError
from utils.json_handler import check_versioned, load_json, save_json, versioned

logger = logging.getLogger(__name__)

EXPORT_FORMAT = "ghlda-topics"
EXPORT_VERSION = 1
NODE_KEYS = ("id", "parent", "level", "doc_count", "token_count", "top_words")


def topics_to_dict(state: ModelState, top_n: int = 10) -> Dict[str, Any]:
    nodes: List[Dict[str, Any]] = []
    edges: List[List[int]] = []
    for report in topic_reports(state, top_n):
        parent = None
        if state.is_hierarchical:
            parent = state.tree.nodes[report.topic_id].parent
            if parent is not None:
                edges.append([parent, report.topic_id])
        nodes.append({
            "id": report.topic_id,
            "parent": parent,
            "level": report.level,
            "doc_count": report.doc_count,
            "token_count": report.assignment_count,
            "top_words": [{"word": w, "score": s} for w, s in report.top_words],
        })
    return versioned(EXPORT_FORMAT, EXPORT_VERSION, model=state.model, nodes=nodes, edges=edges)


def validate_topic_export(data: Dict[str, Any]) -> None:
    """
    Raises:
        CheckpointError: if the document does not follow the export schema
    """
    check_versioned(data, EXPORT_FORMAT, EXPORT_VERSION, "topic export")

    ids = set()
    for node in data.get("nodes", []):
        missing = [key for key in NODE_KEYS if key not in node]
        if missing:
            raise CheckpointError(f"Node {node.get('id')} is missing {missing}")
        for entry in node["top_words"]:
            if set(entry) != {"word", "score"}:
                raise CheckpointError(f"Node {node['id']} has a malformed top word {entry}")
        ids.add(node["id"])

    for parent, child in data.get("edges", []):
        if parent not in ids or child not in ids:
            raise CheckpointError(f"Edge {parent}->{child} references an unknown node")


def export_json(state: ModelState, path: Path, top_n: int = 10) -> Path:
    data = topics_to_dict(state, top_n)
    validate_topic_export(data)
    save_json(data, Path(path))
    logger.info(f"Wrote {len(data['nodes'])} topics and {len(data['edges'])} edges to {path}")
    return Path(path)


def load_topic_export(path: Path) -> Dict[str, Any]:
    data = load_json(Path(path))
    validate_topic_export(data)
    return data
