"""Tour cost, neighbourhood moves and the restart hill-climb baseline.

Moves draw their positions from the supplied generator and return fresh
arrays.  The hill climber applies the same distributions with O(1) cost
deltas (O(segment) for the asymmetric 2-opt reversal), so long baseline
runs stay affordable; every accepted move keeps the running cost exact
because instance weights are integral.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np


@dataclass
class Tour:
    order: np.ndarray
    cost: float


MOVE_KINDS = ("swap", "insert", "two_opt")


def is_permutation(order, n):
    order = np.asarray(order)
    return order.shape == (n,) and np.array_equal(np.sort(order), np.arange(n))


def tour_cost(instance, order):
    """Closed-tour cost; rejects anything that is not a permutation."""
    if not is_permutation(order, instance.n):
        raise ValueError("order is not a permutation of the instance locations")
    order = np.asarray(order)
    return float(instance.distance[order, np.roll(order, -1)].sum())


def random_tour(n, rng):
    return rng.permutation(n)


# ----------------------------------------------------------------------
# position draws, shared by the move functions and the hill climber

def _draw_distinct_pair(rng, n):
    i = int(rng.integers(n))
    j = int(rng.integers(n - 1))
    if j >= i:
        j += 1
    return i, j


def _draw_two_opt(rng, n):
    # Two non-adjacent edges (o[i], o[i+1]) and (o[j], o[j+1 mod n]).
    while True:
        a = int(rng.integers(n))
        b = int(rng.integers(n))
        i, j = (a, b) if a < b else (b, a)
        if j - i >= 2 and not (i == 0 and j == n - 1):
            return i, j


def swap_move(order, rng):
    """Exchange the locations at two distinct random positions."""
    n = len(order)
    if n < 3:
        raise ValueError("swap needs at least 3 locations")
    i, j = _draw_distinct_pair(rng, n)
    out = np.array(order)
    out[i], out[j] = out[j], out[i]
    return out


def insert_move(order, rng):
    """Remove one random location and reinsert it at another position."""
    n = len(order)
    if n < 3:
        raise ValueError("insert needs at least 3 locations")
    src, dst = _draw_distinct_pair(rng, n)
    out = list(order)
    value = out.pop(src)
    out.insert(dst, value)
    return np.array(out)


def two_opt_move(order, rng):
    """Cut two non-adjacent edges and reverse the segment between them."""
    n = len(order)
    if n < 4:
        raise ValueError("2-opt needs at least 4 locations")
    i, j = _draw_two_opt(rng, n)
    out = np.array(order)
    out[i + 1 : j + 1] = out[i + 1 : j + 1][::-1]
    return out


# ----------------------------------------------------------------------
# restart hill climbing

def _swap_delta(D, order, n, i, j):
    if i > j:
        i, j = j, i
    oi, oj = order[i], order[j]
    ip, isucc = order[i - 1], order[(i + 1) % n]
    jp, jsucc = order[j - 1], order[(j + 1) % n]
    if j - i == 1:
        return (
            D[ip][oj] + D[oj][oi] + D[oi][jsucc]
            - D[ip][oi] - D[oi][oj] - D[oj][jsucc]
        )
    if i == 0 and j == n - 1:  # adjacent through the closing edge
        return (
            D[jp][oi] + D[oi][oj] + D[oj][isucc]
            - D[jp][oj] - D[oj][oi] - D[oi][isucc]
        )
    return (
        D[ip][oj] + D[oj][isucc] + D[jp][oi] + D[oi][jsucc]
        - D[ip][oi] - D[oi][isucc] - D[jp][oj] - D[oj][jsucc]
    )


def _insert_delta(D, order, n, src, dst):
    x = order[src]
    before = order[src - 1]
    after = order[(src + 1) % n]
    removed = D[before][x] + D[x][after] - D[before][after]
    # Neighbours of the insertion point in the list with src removed.
    a = dst - 1 if dst >= 1 else n - 2
    b = dst if dst <= n - 2 else 0
    left = order[a] if a < src else order[a + 1]
    right = order[b] if b < src else order[b + 1]
    added = D[left][x] + D[x][right] - D[left][right]
    return added - removed


def _two_opt_delta(D, order, n, i, j, symmetric):
    a, b = order[i], order[i + 1]
    c, d = order[j], order[(j + 1) % n]
    delta = D[a][c] + D[b][d] - D[a][b] - D[c][d]
    if not symmetric:
        for k in range(i + 1, j):
            delta += D[order[k + 1]][order[k]] - D[order[k]][order[k + 1]]
    return delta


def _apply_swap(order, i, j):
    order[i], order[j] = order[j], order[i]


def _apply_insert(order, src, dst):
    order.insert(dst, order.pop(src))


def _apply_two_opt(order, i, j):
    order[i + 1 : j + 1] = order[i + 1 : j + 1][::-1]


def hill_climb_trial(instance, move, steps, rng, order=None):
    """One greedy trajectory: accept a move iff cost does not increase.

    Positions are drawn from ``rng`` in bulk (same distributions as the
    move functions, cheaper per proposal).  Returns ``(cost, order list)``
    after ``steps`` proposals.
    """
    if move not in MOVE_KINDS:
        raise ValueError(f"unknown move kind: {move!r}")
    n = instance.n
    D = instance.distance.tolist()
    symmetric = instance.symmetric
    if order is None:
        order = rng.permutation(n).tolist()
    else:
        order = list(order)
    cost = 0.0
    for k in range(n):
        cost += D[order[k]][order[(k + 1) % n]]

    if move in ("swap", "insert"):
        first = rng.integers(0, n, size=steps).tolist()
        second = rng.integers(0, n - 1, size=steps).tolist()
        swapping = move == "swap"
        for k in range(steps):
            i = first[k]
            j = second[k]
            if j >= i:
                j += 1
            if swapping:
                delta = _swap_delta(D, order, n, i, j)
                if delta <= 0.0:
                    order[i], order[j] = order[j], order[i]
                    cost += delta
            else:
                delta = _insert_delta(D, order, n, i, j)
                if delta <= 0.0:
                    order.insert(j, order.pop(i))
                    cost += delta
        return cost, order

    # two_opt: valid non-adjacent edge pairs come from a replenished pool
    done = 0
    last = n - 1
    while done < steps:
        chunk = max(2 * (steps - done), 64)
        aa = rng.integers(0, n, size=chunk).tolist()
        bb = rng.integers(0, n, size=chunk).tolist()
        for a, b in zip(aa, bb):
            if a < b:
                i, j = a, b
            else:
                i, j = b, a
            if j - i < 2 or (i == 0 and j == last):
                continue
            delta = _two_opt_delta(D, order, n, i, j, symmetric)
            if delta <= 0.0:
                order[i + 1 : j + 1] = order[i + 1 : j + 1][::-1]
                cost += delta
            done += 1
            if done == steps:
                break
    return cost, order


def _trial_block(instance, move, steps, seeds):
    results = []
    for seq in seeds:
        rng = np.random.default_rng(seq)
        results.append(hill_climb_trial(instance, move, steps, rng))
    return results


def restart_hill_climb(instance, move, trials, steps, seed, workers=1):
    """Best tour over ``trials`` independent greedy descents.

    Each trial starts from a uniform random permutation drawn from a
    per-trial stream spawned off ``seed``, so results do not depend on
    ``workers``.  Returns ``(best Tour, per-trial best costs)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if move not in MOVE_KINDS:
        raise ValueError(f"unknown move kind: {move!r}")
    seeds = np.random.SeedSequence(seed).spawn(trials)
    if workers > 1:
        blocks = np.array_split(np.arange(trials), workers)
        results = []
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(
                    _trial_block, instance, move, steps, [seeds[t] for t in block]
                )
                for block in blocks
                if len(block)
            ]
            for future in futures:
                results.extend(future.result())
    else:
        results = _trial_block(instance, move, steps, seeds)
    costs = [cost for cost, _ in results]
    best_idx = int(np.argmin(costs))
    best_cost, best_order = results[best_idx]
    return Tour(np.array(best_order), float(best_cost)), costs
