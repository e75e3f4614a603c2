"""Problem interface consumed by the search engine.

A problem owns the solution representation.  The engine only needs the
visible encoding size, a fitness function (maximised), a naive single-move
operator, and the mapping between solutions and the continuous [-1, 1]
vectors the network works on.
"""

import numpy as np


class Problem:
    """Base class; concrete problems override everything that raises."""

    #: length of the continuous encoding seen by the autoencoder
    visible_size = 0

    #: True when interpret() ignores its rng (binary problems).  The engine
    #: may then skip re-decoding proposals whose latent is unchanged.
    deterministic_interpretation = True

    def fitness(self, solution):
        raise NotImplementedError

    def random_solution(self, rng):
        """Uniform random feasible solution (used at depth-0 resets)."""
        raise NotImplementedError

    def naive_variation(self, solution, rng):
        """Single naive move; returns a new solution, input untouched."""
        raise NotImplementedError

    def encode_solution(self, solution):
        """Map a solution to a float vector in [-1, 1]^visible_size."""
        raise NotImplementedError

    def interpret(self, x_cont, rng):
        """Map any real vector of visible size to a feasible solution."""
        raise NotImplementedError

    def solution_key(self, solution):
        """Hashable identity used for fitness memoisation."""
        return solution.tobytes()


def binary_interpret(x_cont):
    """Threshold a real vector to bits: strictly positive -> 1, else 0."""
    return (np.asarray(x_cont) > 0).astype(np.uint8)


def binary_encode(bits):
    """Map bits {0,1} to the network's {-1,+1} encoding."""
    return np.asarray(bits, dtype=float) * 2.0 - 1.0


class BinaryProblem(Problem):
    """Common machinery for fixed-length bit-string problems.

    Solutions are numpy uint8 arrays of 0/1.  The naive move flips one
    uniformly chosen position, so a naive candidate always differs from its
    parent in exactly one variable.  Fitness values are memoised by solution
    bytes; concrete classes implement ``_fitness``.
    """

    def __init__(self, size):
        self.visible_size = int(size)
        self._cache = {}

    def fitness(self, solution):
        key = solution.tobytes()
        cached = self._cache.get(key)
        if cached is None:
            if len(self._cache) > 4_000_000:
                self._cache.clear()
            cached = self._fitness(solution)
            self._cache[key] = cached
        return cached

    def _fitness(self, solution):
        raise NotImplementedError

    def random_solution(self, rng):
        return rng.integers(0, 2, size=self.visible_size, dtype=np.uint8)

    def naive_variation(self, solution, rng):
        candidate = solution.copy()
        i = rng.integers(self.visible_size)
        candidate[i] ^= 1
        return candidate

    def encode_solution(self, solution):
        return binary_encode(solution)

    def interpret(self, x_cont, rng=None):
        if len(x_cont) != self.visible_size:
            raise ValueError(
                f"expected vector of length {self.visible_size}, got {len(x_cont)}"
            )
        return binary_interpret(x_cont)
