"""Deep Optimisation toolkit: an autoencoder-guided hill climber with its
benchmark problems, baselines and experiment harness."""

from .autoencoder import Autoencoder
from .engine import (
    END_TO_END,
    LAYERWISE,
    RunConfig,
    RunLog,
    SearchState,
    accept_rule,
    propose_variation,
    reset_state,
    run,
    solution_cycle,
    transition,
)
from .problems import (
    BinaryProblem,
    HtopProblem,
    McParityProblem,
    Problem,
    binary_encode,
    binary_interpret,
    brute_force_oracle,
    htop_block_fitness,
    htop_transform,
)

__all__ = [
    "Autoencoder",
    "END_TO_END",
    "LAYERWISE",
    "RunConfig",
    "RunLog",
    "SearchState",
    "accept_rule",
    "propose_variation",
    "reset_state",
    "run",
    "solution_cycle",
    "transition",
    "BinaryProblem",
    "HtopProblem",
    "McParityProblem",
    "Problem",
    "binary_encode",
    "binary_interpret",
    "brute_force_oracle",
    "htop_block_fitness",
    "htop_transform",
]

__version__ = "0.1.0"
