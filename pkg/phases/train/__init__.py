"""
Train: the four collapsed Gibbs samplers, initialization, likelihood,
checkpoints and the epoch loop.
"""

# Main entry point
from .orchestrator import load_trained_state, run_training

# Statistics
from .stats import EpochRecord, TrainStats

# Samplers
from .flat import FlatGibbsSampler, glda_token_step, lda_token_step
from .hierarchical import (
    HierarchicalGibbsSampler,
    ghlda_level_step,
    ghlda_path_step,
    hlda_level_step,
    hlda_path_step,
)

# Initialization
from .initialization import build_emission, build_state, frequency_levels, init_levels, init_tree

# Likelihood
from .likelihood import joint_log_likelihood, recompute_joint_log_likelihood

# Checkpoints
from .checkpoint import load_checkpoint, save_checkpoint, state_from_dict, state_to_dict

# Epoch loop
from .loop import DiagnosticsWriter, make_sampler, run_epoch, train

__all__ = [
    'run_training',
    'load_trained_state',
    'EpochRecord',
    'TrainStats',

    'FlatGibbsSampler',
    'lda_token_step',
    'glda_token_step',
    'HierarchicalGibbsSampler',
    'ghlda_path_step',
    'ghlda_level_step',
    'hlda_path_step',
    'hlda_level_step',

    'build_emission',
    'build_state',
    'frequency_levels',
    'init_levels',
    'init_tree',

    'joint_log_likelihood',
    'recompute_joint_log_likelihood',

    'load_checkpoint',
    'save_checkpoint',
    'state_from_dict',
    'state_to_dict',

    'DiagnosticsWriter',
    'make_sampler',
    'run_epoch',
    'train',
]
