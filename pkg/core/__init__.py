"""Numerical core: NIW and Dirichlet statistics, emissions, the nCRP tree"""

from .dirichlet import WordCountStats
from .emission import Emission, GaussianEmission, MultinomialEmission
from .gem import gem_level_log_weights, gem_log_joint, gem_stick_log_weights
from .gaussian import (
    GaussianTopicStats,
    NIWPrior,
    cholesky_downdate,
    cholesky_update,
    embedding_prior,
    log_multigamma,
    new_stats,
)
from .sampling import log_normalize, sample_log_categorical, sample_rows
from .tree import CandidatePath, TopicNode, TopicTree, build_complete_tree

__all__ = [
    'WordCountStats',
    'Emission',
    'GaussianEmission',
    'MultinomialEmission',
    'gem_level_log_weights',
    'gem_log_joint',
    'gem_stick_log_weights',
    'GaussianTopicStats',
    'NIWPrior',
    'cholesky_update',
    'cholesky_downdate',
    'embedding_prior',
    'log_multigamma',
    'new_stats',
    'log_normalize',
    'sample_log_categorical',
    'sample_rows',
    'CandidatePath',
    'TopicNode',
    'TopicTree',
    'build_complete_tree',
]
