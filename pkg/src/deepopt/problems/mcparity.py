"""Modular parity-constraint problem.

The string is split into ``m`` modules of ``n`` bits.  A module scores one
point when its bit-sum is odd.  A much smaller coupling term rewards modules
agreeing on the *same* odd-parity pattern: for every distinct odd pattern,
the squared count of modules exactly equal to it is added, scaled by ``p``.
Global optima are the strings whose modules all carry one identical odd
pattern, giving fitness ``m + p * m**2``.
"""

import itertools

import numpy as np

from .base import BinaryProblem


class McParityProblem(BinaryProblem):
    def __init__(self, modules, module_size=4, coupling=1e-4):
        if modules < 1 or module_size < 1:
            raise ValueError("modules and module_size must be >= 1")
        super().__init__(modules * module_size)
        self.modules = int(modules)
        self.module_size = int(module_size)
        self.coupling = float(coupling)
        self._pow2 = (1 << np.arange(module_size - 1, -1, -1)).astype(np.intp)

    def __repr__(self):
        return (
            f"McParityProblem(modules={self.modules}, "
            f"module_size={self.module_size}, coupling={self.coupling})"
        )

    def _fitness(self, solution):
        if len(solution) != self.visible_size:
            raise ValueError(
                f"expected string of length {self.visible_size}, got {len(solution)}"
            )
        mods = np.asarray(solution, dtype=np.uint8).reshape(
            self.modules, self.module_size
        )
        odd = (mods.sum(axis=1) & 1).astype(bool)
        within = int(odd.sum())
        # Even-parity modules match no pattern type and add nothing here.
        ids = mods[odd] @ self._pow2
        counts = np.bincount(ids, minlength=1 << self.module_size)
        between = int(counts @ counts)
        return within + self.coupling * between

    @property
    def max_fitness(self):
        return self.modules + self.coupling * self.modules**2

    def global_optima(self):
        """All strings whose modules repeat one odd-parity pattern."""
        optima = []
        for bits in itertools.product((0, 1), repeat=self.module_size):
            if sum(bits) % 2 == 1:
                optima.append(np.tile(np.array(bits, dtype=np.uint8), self.modules))
        return optima
