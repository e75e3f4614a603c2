from .base import BinaryProblem, Problem, binary_encode, binary_interpret
from .htop import HtopProblem, htop_block_fitness, htop_transform, NULL
from .mcparity import McParityProblem
from .oracle import brute_force_oracle

__all__ = [
    "BinaryProblem",
    "Problem",
    "binary_encode",
    "binary_interpret",
    "HtopProblem",
    "htop_block_fitness",
    "htop_transform",
    "NULL",
    "McParityProblem",
    "brute_force_oracle",
]
