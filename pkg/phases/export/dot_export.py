"""
Graphviz DOT export of the topic tree.

Hierarchical models export the nCRP tree itself; flat models hang every
topic off a virtual root so both families give one connected graph.
"""

import logging
from pathlib import Path
from typing import List

from graphviz import Digraph

from models.state import ModelState
from phases.evaluate.topics import TopicReport, topic_reports
from utils.file_operations import ensure_directory

logger = logging.getLogger(__name__)

LABEL_WORDS = 5
VIRTUAL_ROOT = "root"
LEVEL_COLORS = ("#cfe2f3", "#d9ead3", "#fff2cc", "#f4cccc", "#ead1dc")


def node_label(report: TopicReport, num_words: int = LABEL_WORDS) -> str:
    header = f"topic {report.topic_id}"
    if report.level is not None:
        header += f" (L{report.level}, docs={report.doc_count})"
    words = report.words[:num_words]
    return header + ("\n" + "\n".join(words) if words else "")


def build_dot(state: ModelState, reports: List[TopicReport]) -> Digraph:
    graph = Digraph(comment=f"{state.model} topics")
    graph.attr(rankdir="TB")
    graph.attr("node", shape="box", style="rounded,filled")

    if state.is_hierarchical:
        for report in reports:
            node = state.tree.nodes[report.topic_id]
            color = LEVEL_COLORS[node.level % len(LEVEL_COLORS)]
            graph.node(str(node.id), node_label(report), fillcolor=color)
            if node.parent is not None:
                graph.edge(str(node.parent), str(node.id))
    else:
        graph.node(VIRTUAL_ROOT, state.model, shape="ellipse", fillcolor="white")
        for report in reports:
            graph.node(str(report.topic_id), node_label(report), fillcolor=LEVEL_COLORS[0])
            graph.edge(VIRTUAL_ROOT, str(report.topic_id))
    return graph


def export_dot(state: ModelState, path: Path) -> Path:
    """Write DOT source; rendering is left to the graphviz tools."""
    graph = build_dot(state, topic_reports(state, LABEL_WORDS))
    ensure_directory(Path(path).parent)
    Path(path).write_text(graph.source, encoding="utf-8")
    logger.info(f"Wrote DOT graph with {state.num_topics} topics to {path}")
    return Path(path)
