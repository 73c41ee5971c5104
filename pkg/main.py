#!/usr/bin/env python3
"""
Gaussian hierarchical topic models - Main Entry Point
Commands: ingest, train, eval, export, topics, polysemy
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from config import EMBEDDING_FORMATS, RunConfig
from models.state import MODELS
from utils.errors import CheckpointError, ConfigurationError, IngestionError

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_INPUT = 2
INPUT_ERRORS = (ConfigurationError, IngestionError, FileNotFoundError, CheckpointError)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="JSON config file; flags override its values")
    parser.add_argument("--model", choices=MODELS, help="Model family (default: ghlda)")
    parser.add_argument("--cache", dest="cache_path", type=Path, help="Corpus cache file")
    parser.add_argument("--output-dir", dest="output_dir", type=Path, help="Output directory (default: ./output)")
    parser.add_argument("--seed", type=int, help="Random seed (default: 0)")
    parser.add_argument("--threads", type=int, help="Worker threads inside one conditional (env GHLDA_THREADS)")
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")


def _add_checkpoint(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--checkpoint", dest="checkpoint_path", type=Path, help="Trained checkpoint")
    parser.add_argument("--top-n", dest="top_n", type=int, help="Top words per topic (default: 10)")


def create_argument_parser() -> argparse.ArgumentParser:
    """Create and configure the command-line argument parser."""
    parser = argparse.ArgumentParser(
        description="Gaussian hierarchical topic models: LDA, GLDA, hLDA and GhLDA",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="Exit codes: 0 success, 1 runtime failure, 2 configuration or input error",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="Tokenize, build vocabulary, align embeddings, write cache")
    _add_common(ingest)
    ingest.add_argument("--corpus", dest="corpus_path", type=Path, help="Corpus text, one document per line")
    ingest.add_argument("--test-corpus", dest="test_corpus_path", type=Path, help="Separate test corpus")
    ingest.add_argument("--embeddings", dest="embedding_path", type=Path, help="Embedding text file")
    ingest.add_argument("--embedding-format", dest="embedding_format", choices=EMBEDDING_FORMATS)
    ingest.add_argument("--min-count", dest="min_count", type=int, help="Minimum word frequency (default: 50)")
    ingest.add_argument("--n-test", dest="n_test", type=int, help="Held-out documents (default: 1000)")

    train = commands.add_parser("train", help="Run the Gibbs sampler and write checkpoints")
    _add_common(train)
    train.add_argument("--epochs", type=int, help="Epochs (default: 50 flat, 100 hierarchical)")
    train.add_argument("--resume", dest="resume_from", type=Path, help="Continue from a checkpoint")
    train.add_argument("--checkpoint", dest="checkpoint_path", type=Path, help="Where to write the checkpoint")
    train.add_argument("--diagnostics", dest="diagnostics_path", type=Path, help="JSONL diagnostics ('-' for stdout)")
    train.add_argument("--save-every", dest="save_every", type=int, help="Checkpoint interval in epochs")
    train.add_argument("--shuffle", dest="shuffle_documents", action="store_true", help="Shuffle documents per epoch")
    train.add_argument("--wall-time", dest="record_wall_time", action="store_true", help="Record wall time per epoch")
    train.add_argument("--num-topics", dest="num_topics", type=int, help="K for flat models (default: 40)")
    train.add_argument("--alpha", type=float)
    train.add_argument("--beta", type=float)
    train.add_argument("--gamma", type=float)
    train.add_argument("--m", type=float)
    train.add_argument("--b", type=float)
    train.add_argument("--kappa", type=float)
    train.add_argument("--nu", type=float)
    train.add_argument("--branch-spec", dest="branch_spec", type=int, nargs="+", help="Initial tree, e.g. 1 1 4 4")
    train.add_argument("--freeze-new-leaves-for", dest="freeze_new_leaves_for", type=int)

    evaluate = commands.add_parser("eval", help="Held-out likelihood, PMI coherence, polysemy")
    _add_common(evaluate)
    _add_checkpoint(evaluate)
    evaluate.add_argument("--heldout", action="store_true", help="Left-to-right held-out likelihood")
    evaluate.add_argument("--pmi", action="store_true", help="PMI coherence of top words")
    evaluate.add_argument("--polysemy", action="store_true", help="Polysemy table")
    evaluate.add_argument("--particles", type=int, help="Left-to-right particles (default: 20)")
    evaluate.add_argument("--reference-corpus", dest="reference_corpus_path", type=Path,
                          help="Co-occurrence corpus (default: training corpus)")
    evaluate.add_argument("--window", dest="cooccurrence_window", type=int,
                          help="Sliding co-occurrence window (default: whole document)")
    evaluate.add_argument("--min-count", dest="polysemy_min_count", type=int, help="Polysemy word threshold")
    evaluate.add_argument("--report", dest="report_path", type=Path, help="Report JSON path")

    export = commands.add_parser("export", help="Write the topic tree as DOT or JSON")
    _add_common(export)
    _add_checkpoint(export)
    export.add_argument("--format", dest="export_format", default="dot", help="dot or json (default: dot)")
    export.add_argument("--out", type=Path, help="Output file")

    topics = commands.add_parser("topics", help="Print top words of every topic")
    _add_common(topics)
    _add_checkpoint(topics)

    polysemy = commands.add_parser("polysemy", help="Print the polysemy table")
    _add_common(polysemy)
    _add_checkpoint(polysemy)
    polysemy.add_argument("--min-count", dest="polysemy_min_count", type=int, help="Word threshold (default: 10)")

    return parser


def cmd_ingest(config: RunConfig, reporter) -> None:
    from phases.ingest import run_ingest

    stats, _, _ = run_ingest(config)
    reporter.add_phase_stats("ingest", stats)
    reporter.print_ingest()
    print(stats.summary_line())


def cmd_train(config: RunConfig, reporter) -> None:
    from phases.train import run_training

    stats, _ = run_training(config)
    reporter.add_phase_stats("train", stats)
    reporter.print_training()


def cmd_eval(config: RunConfig, reporter, args: argparse.Namespace) -> None:
    from phases.evaluate import run_evaluation

    heldout = args.heldout or not (args.pmi or args.polysemy)
    stats, report = run_evaluation(config, heldout=heldout, pmi=args.pmi, polysemy=args.polysemy)
    reporter.add_phase_stats("evaluate", stats)
    reporter.print_evaluation(report)


def cmd_export(config: RunConfig, args: argparse.Namespace) -> None:
    from phases.export import run_export

    path = run_export(config, args.export_format, args.out)
    print(path)


def cmd_topics(config: RunConfig, reporter) -> None:
    from phases.evaluate import run_topics

    state, reports = run_topics(config)
    reporter.print_topics(state, reports, config.top_n)


def cmd_polysemy(config: RunConfig, reporter) -> None:
    from phases.evaluate import run_polysemy

    _, entries = run_polysemy(config)
    reporter.print_polysemy(entries)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    parser = create_argument_parser()
    args = parser.parse_args(argv)

    # Set debug logging if requested
    if args.debug:
        logging.getLogger().setLevel(logging.DEBUG)
        logger.debug("Debug logging enabled")

    try:
        from statistics.reporter_rich import StatisticsReporter

        config = RunConfig.from_args(args)
        config.validate(args.command)
        reporter = StatisticsReporter()
        reporter.print_header(f"{config.model.upper()} - {args.command.upper()}")

        if args.command == "ingest":
            cmd_ingest(config, reporter)
        elif args.command == "train":
            cmd_train(config, reporter)
        elif args.command == "eval":
            cmd_eval(config, reporter, args)
        elif args.command == "export":
            cmd_export(config, args)
        elif args.command == "topics":
            cmd_topics(config, reporter)
        elif args.command == "polysemy":
            cmd_polysemy(config, reporter)
        return EXIT_OK

    except INPUT_ERRORS as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INPUT
    except Exception as e:
        logger.error(f"{args.command} failed: {e}", exc_info=True)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
