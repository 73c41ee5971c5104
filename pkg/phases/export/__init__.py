"""
Export: topic tree as Graphviz DOT or versioned JSON.
"""

# Main entry point
from .orchestrator import EXPORT_FORMATS, run_export

# Writers
from .dot_export import build_dot, export_dot, node_label
from .json_export import export_json, load_topic_export, topics_to_dict, validate_topic_export

__all__ = [
    'run_export',
    'EXPORT_FORMATS',

    'build_dot',
    'export_dot',
    'node_label',
    'export_json',
    'load_topic_export',
    'topics_to_dict',
    'validate_topic_export',
]
