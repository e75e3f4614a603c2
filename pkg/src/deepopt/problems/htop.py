"""Hierarchical transformation problem over one-hot blocks.

A solution of length N (a power of two, N >= 8) is scored in levels.  Each
level splits the current string into width-4 blocks; a block earns a point
iff it is exactly one of the four one-hot patterns, and is then rewritten to
a 2-symbol code for the next level.  Any other block (including anything
containing the null symbol) propagates ``(null, null)`` upward, blocking all
fitness above it.  Scoring stops once the string is shorter than one block.

Symbols are 0, 1 and null; null is represented as the integer 2 so level
strings stay flat uint8 arrays.
"""

import numpy as np

from .base import BinaryProblem

NULL = 2

BLOCK_WIDTH = 4  # k: variables per block
REDUCTION = 2    # R: block width shrinks to k/R symbols

_POW3 = np.array([27, 9, 3, 1], dtype=np.intp)

# Transformation and per-block fitness, indexed by the base-3 value of the
# block. Only the four null-free one-hot patterns are satisfied.
_ONE_HOT_CODES = {27: (0, 0), 9: (0, 1), 3: (1, 0), 1: (1, 1)}

_TRANS = np.full((81, 2), NULL, dtype=np.uint8)
_FIT = np.zeros(81, dtype=np.uint8)
for _idx, _code in _ONE_HOT_CODES.items():
    _TRANS[_idx] = _code
    _FIT[_idx] = 1

# Inverse of the transformation restricted to satisfied blocks, used to
# expand the four top-level codes down to full-length optima.
_INVERSE = {
    (0, 0): (1, 0, 0, 0),
    (0, 1): (0, 1, 0, 0),
    (1, 0): (0, 0, 1, 0),
    (1, 1): (0, 0, 0, 1),
}


def htop_transform(block):
    """Rewrite one width-4 block to its 2-symbol code (Table-style rules)."""
    block = np.asarray(block, dtype=np.uint8)
    if block.shape != (BLOCK_WIDTH,):
        raise ValueError(f"block must have {BLOCK_WIDTH} symbols")
    return _TRANS[int(block @ _POW3)].copy()


def htop_block_fitness(block):
    """1 iff the block is a null-free one-hot pattern, else 0."""
    block = np.asarray(block, dtype=np.uint8)
    if block.shape != (BLOCK_WIDTH,):
        raise ValueError(f"block must have {BLOCK_WIDTH} symbols")
    return int(_FIT[int(block @ _POW3)])


def _validate_size(n):
    if n < 8 or n & (n - 1):
        raise ValueError(f"size must be a power of two >= 8, got {n}")


class HtopProblem(BinaryProblem):
    """Problem instance of size N with ``log2(N) - 1`` scored levels.

    ``level_weighted=False`` gives every satisfied block one point at every
    level (the literal reading of the block fitness); ``True`` weights a
    level-p block by 2**(p-1), mirroring span-proportional scoring.
    """

    def __init__(self, size, level_weighted=False):
        _validate_size(size)
        super().__init__(size)
        self.levels = int(np.log2(size)) - 1
        self.level_weighted = bool(level_weighted)

    def __repr__(self):
        return f"HtopProblem(size={self.visible_size})"

    def _fitness(self, solution):
        if len(solution) != self.visible_size:
            raise ValueError(
                f"expected string of length {self.visible_size}, got {len(solution)}"
            )
        s = np.asarray(solution, dtype=np.uint8)
        total = 0
        weight = 1
        while s.size >= BLOCK_WIDTH:
            idx = s.reshape(-1, BLOCK_WIDTH) @ _POW3
            total += weight * int(_FIT[idx].sum())
            s = _TRANS[idx].ravel()
            if self.level_weighted:
                weight *= 2
        return float(total)

    @property
    def max_fitness(self):
        """Fitness attained by the global optima."""
        total = 0
        blocks = self.visible_size // BLOCK_WIDTH
        weight = 1
        while blocks >= 1:
            total += weight * blocks
            blocks //= 2
            if self.level_weighted:
                weight *= 2
        return float(total)

    def global_optima(self):
        """The four optimal strings, by top-down expansion of the code table."""
        optima = []
        for top in np.eye(BLOCK_WIDTH, dtype=np.uint8):
            s = top
            while s.size < self.visible_size:
                expanded = [_INVERSE[(int(a), int(b))] for a, b in s.reshape(-1, 2)]
                s = np.array(expanded, dtype=np.uint8).ravel()
            optima.append(s)
        return optima
