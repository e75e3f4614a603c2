"""Exhaustive enumeration oracle for small binary problems."""

import numpy as np

MAX_ORACLE_BITS = 24


def brute_force_oracle(fitness, size):
    """Enumerate all 2**size bit strings; return (max fitness, argmax strings).

    ``fitness`` takes a uint8 array of 0/1.  Ties within 1e-12 of the running
    maximum count as argmax, so exact-integer and float-valued objectives are
    both handled.
    """
    if size > MAX_ORACLE_BITS:
        raise ValueError(f"enumeration capped at {MAX_ORACLE_BITS} bits, got {size}")
    shifts = np.arange(size - 1, -1, -1)
    best = None
    argmax = []
    for value in range(1 << size):
        x = ((value >> shifts) & 1).astype(np.uint8)
        f = fitness(x)
        if best is None or f > best + 1e-12:
            best = f
            argmax = [x]
        elif abs(f - best) <= 1e-12:
            argmax.append(x)
    return best, argmax
