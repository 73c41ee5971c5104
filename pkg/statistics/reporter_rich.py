"""
Statistics Reporter using Rich library for console output.
Renders corpus statistics, the per-epoch training table, topic trees,
evaluation results and the polysemy table.
"""

from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.tree import Tree

from models.state import ModelState
from phases.evaluate.polysemy import PolysemyEntry, group_label
from phases.evaluate.topics import TopicReport

MAX_EPOCH_ROWS = 20


class StatisticsReporter:
    """Collects per-phase statistics and prints them with Rich."""

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console()
        self.phase_stats: Dict[str, Dict[str, Any]] = {}

    def add_phase_stats(self, phase: str, stats: Any) -> None:
        data = stats.to_dict() if hasattr(stats, "to_dict") else dict(stats)
        self.phase_stats[phase] = data

    @staticmethod
    def format_duration(seconds: float) -> str:
        if seconds < 60:
            return f"{seconds:.1f}s"
        minutes = int(seconds / 60)
        return f"{minutes}m {seconds % 60:.1f}s"

    def print_header(self, title: str) -> None:
        self.console.print()
        self.console.print(Panel.fit(
            f"[bold cyan]{title}[/]\n"
            f"[dim]Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}[/]",
            box=box.DOUBLE,
            padding=(1, 2),
        ))

    # ------------------------------------------------------------------
    # Phases
    # ------------------------------------------------------------------

    def print_ingest(self) -> None:
        data = self.phase_stats.get("ingest")
        if not data:
            return
        table = Table(title="📚 CORPUS", box=box.ROUNDED, show_header=False, expand=True)
        table.add_column("Category", style="cyan")
        table.add_column("Details", style="white")

        raw = Tree("Raw input:")
        raw.add(f"Documents: [bold]{data['raw_documents']}[/]")
        raw.add(f"Tokens: [bold]{data['raw_tokens']}[/], word types: [bold]{data['raw_word_types']}[/]")
        table.add_row("", raw)

        cache = Tree("Corpus cache:")
        cache.add(f"Vocabulary: [bold green]{data['vocab_size']}[/]")
        cache.add(f"Train / test documents: [bold]{data['train_documents']}[/] / [bold]{data['test_documents']}[/]")
        cache.add(f"Train tokens: [bold]{data['train_tokens']}[/]")
        if data.get("embedding_dim"):
            cache.add(f"Embedding dimension: [bold]{data['embedding_dim']}[/], "
                      f"dropped without embedding: [bold red]{data['words_without_embedding']}[/]")
        table.add_row("", cache)
        table.add_row("", f"⏱️  Duration: [bold]{self.format_duration(data['duration'])}[/]")
        self.console.print(table)

    def print_training(self) -> None:
        data = self.phase_stats.get("train")
        if not data:
            return
        epochs = data["epochs"]
        hierarchical = any("num_paths" in e for e in epochs)

        table = Table(title=f"🔁 TRAINING: {data['model']}", box=box.ROUNDED, expand=True)
        table.add_column("Epoch", justify="right", style="cyan")
        table.add_column("Log-likelihood", justify="right")
        table.add_column("Topics", justify="right")
        if hierarchical:
            table.add_column("Paths", justify="right")
            table.add_column("Per level")
        table.add_column("Density evals", justify="right")

        shown = epochs if len(epochs) <= MAX_EPOCH_ROWS else epochs[:5] + epochs[-(MAX_EPOCH_ROWS - 5):]
        for record in shown:
            row = [str(record["epoch"]), f"{record['log_likelihood']:.2f}", str(record["num_topics"])]
            if hierarchical:
                row += [str(record.get("num_paths", "")), str(record.get("topics_per_level", ""))]
            row.append(str(record["epoch_density_evaluations"]))
            table.add_row(*row)
        if len(shown) < len(epochs):
            table.caption = f"{len(epochs) - len(shown)} epochs not shown"
        self.console.print(table)

        self.console.print(Panel(
            f"[bold]Epochs run:[/] {data['epochs_run']} (from epoch {data['start_epoch']})\n"
            f"[bold]Documents / tokens:[/] {data['documents']} / {data['tokens']}\n"
            f"[bold]Checkpoints:[/] {', '.join(data['checkpoints_written']) or 'none'}\n"
            f"[bold]Duration:[/] {self.format_duration(data['duration'])}",
            title="🎯 TRAINING SUMMARY",
            box=box.ROUNDED,
            expand=True,
        ))

    def print_evaluation(self, report: Dict[str, Any]) -> None:
        data = self.phase_stats.get("evaluate", {})
        table = Table(title="📊 EVALUATION", box=box.ROUNDED, show_header=False, expand=True)
        table.add_column("Category", style="cyan")
        table.add_column("Details", style="white")
        table.add_row("Model", f"{report['model']} at epoch {report['epoch']}")

        if "heldout" in report:
            heldout = report["heldout"]
            table.add_row("Held-out", f"mean log-likelihood [bold green]{heldout['mean']:.4f}[/] "
                                      f"over {len(heldout['per_document'])} documents (R={heldout['particles']})")
        if "pmi" in report:
            pmi = report["pmi"]
            mean = "n/a" if pmi["mean"] is None else f"{pmi['mean']:.4f}"
            table.add_row("PMI", f"mean [bold green]{mean}[/] over top {pmi['top_n']} words, "
                                 f"{pmi['skipped_pairs']} pairs skipped")
        if "polysemy" in report:
            flagged = sum(1 for e in report["polysemy"] if e["polysemous"])
            table.add_row("Polysemy", f"{flagged} of {len(report['polysemy'])} words flagged")
        if data:
            table.add_row("Duration", self.format_duration(data["duration"]))
        self.console.print(table)

    # ------------------------------------------------------------------
    # Topics
    # ------------------------------------------------------------------

    def print_topics(self, state: ModelState, reports: Sequence[TopicReport], num_words: int = 10) -> None:
        if state.is_hierarchical:
            self.print_topic_tree(state, reports, num_words)
            return
        table = Table(title=f"🧩 TOPICS: {state.model}", box=box.ROUNDED, expand=True)
        table.add_column("Topic", justify="right", style="cyan")
        table.add_column("Tokens", justify="right")
        table.add_column("Top words")
        for report in reports:
            table.add_row(str(report.topic_id), str(report.assignment_count), " ".join(report.words[:num_words]))
        self.console.print(table)

    def print_topic_tree(self, state: ModelState, reports: Sequence[TopicReport], num_words: int = 10) -> None:
        by_id = {r.topic_id: r for r in reports}
        summary = state.tree_summary()

        def label(topic_id: int) -> str:
            r = by_id[topic_id]
            return (f"[cyan]{topic_id}[/] [dim]L{r.level} docs={r.doc_count} tokens={r.assignment_count}[/] "
                    f"{' '.join(r.words[:num_words])}")

        root = state.tree.nodes[state.tree.root]
        tree = Tree(label(root.id))
        stack = [(root, tree)]
        while stack:
            node, branch = stack.pop()
            for child_id in sorted(node.children):
                child = state.tree.nodes[child_id]
                stack.append((child, branch.add(label(child_id))))

        self.console.print(Panel(
            tree,
            title=f"🌳 TOPIC TREE: {summary['num_topics']} topics, {summary['num_paths']} paths, "
                  f"per level {summary['topics_per_level']}",
            box=box.ROUNDED,
            expand=True,
        ))

    def print_polysemy(self, entries: List[PolysemyEntry], limit: int = 30, max_groups: int = 4) -> None:
        table = Table(title="🔀 POLYSEMY", box=box.ROUNDED, expand=True)
        table.add_column("Word", style="cyan")
        table.add_column("Tokens", justify="right")
        table.add_column("Polysemous")
        table.add_column("Groups (share)")
        for entry in entries[:limit]:
            groups = ", ".join(f"{group_label(key)} ({count / entry.total:.0%})"
                               for key, count in entry.groups[:max_groups])
            if len(entry.groups) > max_groups:
                groups += f", +{len(entry.groups) - max_groups}"
            table.add_row(entry.word, str(entry.total), "✅" if entry.polysemous else "", groups)
        if len(entries) > limit:
            table.caption = f"{len(entries) - limit} more words in the report"
        self.console.print(table)
