"""
Configuration management for the topic modeling engine
"""

import logging
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

from utils.errors import ConfigurationError
from utils.json_handler import load_json

logger = logging.getLogger(__name__)

EMBEDDING_FORMATS = ("glove_text", "word2vec_text", "fasttext_text")

# Base Psi = scale * I per embedding family
PSI_SCALE_BY_FORMAT = {
    "glove_text": 50.0,
    "word2vec_text": 40.0,
    "fasttext_text": 20.0,
}

DEFAULT_EPOCHS = {"lda": 50, "glda": 50, "hlda": 100, "ghlda": 100}

THREADS_ENV = "GHLDA_THREADS"


def threads_from_env() -> int:
    """
    Worker count from GHLDA_THREADS (default 1).

    Raises:
        ConfigurationError: if the variable is not an integer
    """
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return int(raw)
    except ValueError as e:
        raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {raw!r}") from e


@dataclass
class Hyperparams:
    """Model hyperparameters; fixed for the whole run."""

    # Flat models
    alpha: float = 0.1
    beta: float = 0.1
    num_topics: int = 40

    # GEM level distribution
    m: float = 0.5
    b: float = 100.0

    # nCRP
    gamma: float = 0.1
    depth: int = 4
    branch_spec: List[int] = field(default_factory=lambda: [1, 1, 4, 4])
    freeze_new_leaves_for: int = 5

    # hLDA per-level Dirichlet weights
    eta_levels: List[float] = field(default_factory=lambda: [2.0, 1.0, 0.5, 0.25])

    # NIW prior (mean is the embedding grand mean)
    kappa: float = 0.1
    nu: Optional[float] = None
    psi_scale: float = 50.0
    level_psi_ratios: List[float] = field(default_factory=lambda: [1.0, 0.8, 0.6, 0.4])

    @classmethod
    def for_model(cls, model: str, embedding_format: Optional[str] = None, **overrides) -> "Hyperparams":
        """Defaults for a model family, then explicit overrides."""
        params = cls()
        if embedding_format in PSI_SCALE_BY_FORMAT:
            params.psi_scale = PSI_SCALE_BY_FORMAT[embedding_format]
        if model == "hlda":
            params.freeze_new_leaves_for = 0
        for key, value in overrides.items():
            if value is None:
                continue
            if not hasattr(params, key):
                raise ConfigurationError(f"Unknown hyperparameter: {key}")
            setattr(params, key, value)
        if "branch_spec" in overrides and overrides["branch_spec"] is not None and "depth" not in overrides:
            params.depth = len(params.branch_spec)
        # per-level defaults follow the depth unless given explicitly
        for name in ("eta_levels", "level_psi_ratios"):
            if overrides.get(name) is None:
                values = list(getattr(params, name))
                values = values[:params.depth] + [values[-1]] * max(0, params.depth - len(values))
                setattr(params, name, values)
        return params

    def validate(self, model: str) -> None:
        positive = ["alpha", "beta", "b", "gamma", "kappa", "psi_scale"]
        for name in positive:
            if not getattr(self, name) > 0:
                raise ConfigurationError(f"{name} must be positive, got {getattr(self, name)}")
        if not 0 < self.m < 1:
            raise ConfigurationError(f"GEM mean m must lie in (0, 1), got {self.m}")
        if self.num_topics < 1:
            raise ConfigurationError(f"num_topics must be >= 1, got {self.num_topics}")
        if self.freeze_new_leaves_for < 0:
            raise ConfigurationError("freeze_new_leaves_for must be >= 0")
        if self.nu is not None and not self.nu > 0:
            raise ConfigurationError(f"v must be positive, got {self.nu}")

        if model in ("hlda", "ghlda"):
            if self.depth < 1 or len(self.branch_spec) != self.depth:
                raise ConfigurationError(
                    f"branch_spec {self.branch_spec} must have depth={self.depth} entries"
                )
            if self.branch_spec[0] != 1 or any(b < 1 for b in self.branch_spec):
                raise ConfigurationError(f"branch_spec must start with 1 and be >= 1 everywhere: {self.branch_spec}")
            if model == "hlda" and len(self.eta_levels) != self.depth:
                raise ConfigurationError(f"eta_levels needs {self.depth} entries, got {len(self.eta_levels)}")
            if model == "ghlda" and len(self.level_psi_ratios) != self.depth:
                raise ConfigurationError(
                    f"level_psi_ratios needs {self.depth} entries, got {len(self.level_psi_ratios)}"
                )
            if any(not v > 0 for v in self.eta_levels + self.level_psi_ratios):
                raise ConfigurationError("eta_levels and level_psi_ratios must be positive")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Hyperparams":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


@dataclass
class RunConfig:
    """One run of one command."""

    model: str = "ghlda"

    # Inputs
    corpus_path: Optional[Path] = None
    test_corpus_path: Optional[Path] = None
    embedding_path: Optional[Path] = None
    embedding_format: str = "glove_text"
    cache_path: Optional[Path] = None
    checkpoint_path: Optional[Path] = None
    resume_from: Optional[Path] = None
    reference_corpus_path: Optional[Path] = None

    # Outputs
    output_dir: Path = Path("output")
    diagnostics_path: Optional[Path] = None
    report_path: Optional[Path] = None

    # Corpus
    min_count: int = 50
    n_test: int = 1000

    # Training
    epochs: Optional[int] = None
    seed: int = 0
    shuffle_documents: bool = False
    save_every: int = 10
    record_wall_time: bool = False
    threads: int = field(default_factory=threads_from_env)

    # Evaluation
    particles: int = 20
    top_n: int = 10
    polysemy_min_count: int = 10
    cooccurrence_window: Optional[int] = None

    hyperparams: Hyperparams = field(default_factory=Hyperparams)

    PATH_FIELDS = (
        "corpus_path", "test_corpus_path", "embedding_path", "cache_path", "checkpoint_path", "resume_from",
        "reference_corpus_path", "output_dir", "diagnostics_path", "report_path",
    )

    @property
    def is_gaussian(self) -> bool:
        return self.model in ("glda", "ghlda")

    @property
    def is_hierarchical(self) -> bool:
        return self.model in ("hlda", "ghlda")

    @property
    def num_epochs(self) -> int:
        return DEFAULT_EPOCHS[self.model] if self.epochs is None else self.epochs

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Flat key-value mapping; hyperparameter keys sit beside run keys."""
        hyper_names = {f.name for f in fields(Hyperparams)}
        run_names = {f.name for f in fields(cls)} - {"hyperparams"}

        unknown = set(data) - hyper_names - run_names
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys: {sorted(unknown)}")

        run_values = {k: v for k, v in data.items() if k in run_names}
        for key in cls.PATH_FIELDS:
            if run_values.get(key) is not None:
                run_values[key] = Path(run_values[key])
        config = cls(**run_values)
        config.hyperparams = Hyperparams.for_model(
            config.model, config.embedding_format,
            **{k: v for k, v in data.items() if k in hyper_names},
        )
        return config

    @classmethod
    def from_file(cls, path: Path) -> "RunConfig":
        logger.info(f"Loading configuration from {path}")
        return cls.from_dict(load_json(Path(path)))

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        """
        Create config from command-line arguments.

        Values come from --config when given; any flag that was set wins.
        """
        data: Dict[str, Any] = {}
        config_file = getattr(args, "config", None)
        if config_file is not None:
            data.update(load_json(Path(config_file)))

        hyper_names = {f.name for f in fields(Hyperparams)}
        run_names = {f.name for f in fields(cls)} - {"hyperparams"}
        for name in sorted(hyper_names | run_names):
            value = getattr(args, name, None)
            if value is not None and value is not False:
                data[name] = value
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {}
        for f in fields(self):
            if f.name == "hyperparams":
                continue
            value = getattr(self, f.name)
            data[f.name] = str(value) if isinstance(value, Path) else value
        data.update(self.hyperparams.to_dict())
        return data

    def validate(self, command: str = "train") -> None:
        """Reject every invariant violation before any compute starts."""
        if self.model not in DEFAULT_EPOCHS:
            raise ConfigurationError(f"Unknown model {self.model!r}; expected lda, glda, hlda or ghlda")
        if self.embedding_format not in EMBEDDING_FORMATS:
            raise ConfigurationError(f"Unknown embedding format {self.embedding_format!r}")
        if self.epochs is not None and self.epochs < 0:
            raise ConfigurationError(f"epochs must be >= 0, got {self.epochs}")
        if self.save_every < 0:
            raise ConfigurationError(f"save_every must be >= 0, got {self.save_every}")
        if self.particles < 1:
            raise ConfigurationError(f"particles must be >= 1, got {self.particles}")
        if self.top_n < 2:
            raise ConfigurationError(f"top_n must be >= 2, got {self.top_n}")
        if self.min_count < 1 or self.n_test < 0:
            raise ConfigurationError("min_count must be >= 1 and n_test >= 0")
        if self.threads < 1:
            raise ConfigurationError(f"threads must be >= 1, got {self.threads}")
        if self.cooccurrence_window is not None and self.cooccurrence_window < 2:
            raise ConfigurationError("cooccurrence_window must be >= 2 (or unset for whole documents)")

        if command == "ingest":
            self._require_file("corpus_path")
            if self.test_corpus_path is not None:
                self._require_file("test_corpus_path")
            if self.is_gaussian or self.embedding_path is not None:
                self._require_file("embedding_path")
            if self.cache_path is None:
                raise ConfigurationError("ingest needs cache_path")
        elif command == "train":
            self.hyperparams.validate(self.model)
            self._require_file("cache_path")
            if self.resume_from is not None:
                self._require_file("resume_from")
        else:
            if self.checkpoint_path is None:
                self.checkpoint_path = Path(self.output_dir) / f"{self.model}_checkpoint.json"
            self._require_file("checkpoint_path")
            self._require_file("cache_path")
            if self.reference_corpus_path is not None:
                self._require_file("reference_corpus_path")

    def _require_file(self, name: str) -> None:
        value = getattr(self, name)
        if value is None:
            raise ConfigurationError(f"{name} is required")
        if not Path(value).exists():
            raise FileNotFoundError(f"{name} not found: {value}")
