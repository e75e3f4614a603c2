"""Connection-matrix encoding of tours and the search-engine adapter.

A tour over N locations becomes an N*N vector: entry (i, j) is +1 when j
immediately follows i in the closed tour and -1 otherwise.  Decoded network
output is turned back into a tour by walking greedily from a random start:
at each step take the strongest unvisited successor if its value is
positive, otherwise fall back to a uniform choice among the unvisited.
The finished tour is rotated so the instance's defined start comes first.
"""

import numpy as np

from ..problems.base import Problem
from .tours import insert_move, swap_move, two_opt_move, tour_cost

_MOVES = {"swap": swap_move, "insert": insert_move, "two_opt": two_opt_move}


def encode_tour(instance, order):
    """Flatten a tour to the +-1 successor matrix, row-major."""
    n = instance.n
    matrix = np.full((n, n), -1.0)
    order = np.asarray(order)
    matrix[order, np.roll(order, -1)] = 1.0
    return matrix.ravel()


def interpret_connections(decoded, n, rng, defined_start=0):
    """Greedy successor walk over a decoded connection matrix.

    Ties in the row maximum break to the lowest location index; a random
    start removes positional bias and random fallbacks keep every output a
    feasible permutation.
    """
    conn = np.asarray(decoded, dtype=float).reshape(n, n)
    order = np.empty(n, dtype=np.intp)
    order[0] = rng.integers(n)
    unvisited = np.ones(n, dtype=bool)
    unvisited[order[0]] = False
    candidates = np.arange(n)
    for i in range(1, n):
        row = conn[order[i - 1]]
        remaining = candidates[unvisited]
        best = remaining[np.argmax(row[remaining])]
        if row[best] > 0:
            nxt = best
        else:
            nxt = remaining[rng.integers(len(remaining))]
        order[i] = nxt
        unvisited[nxt] = False
    shift = int(np.argmax(order == defined_start))
    return np.roll(order, -shift)


class TspProblem(Problem):
    """Tour optimisation seen through the engine's interface.

    Fitness is the negated closed-tour cost (the engine maximises).  The
    naive move defaults to location insertion; interpretation is the
    stochastic successor walk, so this problem consumes the run's search
    stream during decoding.
    """

    deterministic_interpretation = False

    def __init__(self, instance, naive_move="insert"):
        if naive_move not in _MOVES:
            raise ValueError(f"unknown move kind: {naive_move!r}")
        self.instance = instance
        self.visible_size = instance.n * instance.n
        self._move = _MOVES[naive_move]
        self.naive_move = naive_move

    def __repr__(self):
        return f"TspProblem({self.instance.name}, naive_move={self.naive_move!r})"

    def cost(self, order):
        order = np.asarray(order)
        return float(self.instance.distance[order, np.roll(order, -1)].sum())

    def fitness(self, solution):
        return -self.cost(solution)

    def random_solution(self, rng):
        order = rng.permutation(self.instance.n)
        shift = int(np.argmax(order == self.instance.defined_start))
        return np.roll(order, -shift)

    def naive_variation(self, solution, rng):
        return self._move(solution, rng)

    def encode_solution(self, solution):
        return encode_tour(self.instance, solution)

    def interpret(self, x_cont, rng):
        return interpret_connections(
            x_cont, self.instance.n, rng, self.instance.defined_start
        )

    def solution_key(self, solution):
        return solution.tobytes()
