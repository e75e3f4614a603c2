"""Generate the synthetic stand-in tour instances shipped under data/tsplib.

The real benchmark files cannot be redistributed here, so each named
instance is replaced by a synthetic one of the same size, symmetry type and
file format, with an optimum that is known by construction:

* symmetric instances place the locations on a circle (points in convex
  position), where the unique shortest closed tour is the hull cycle;
* asymmetric instances hide a secret Hamiltonian cycle whose arcs are far
  cheaper than every other arc, so any tour using two or more non-cycle
  arcs is provably worse.

The script writes the instance files plus the ``optima.txt`` registry and
sanity-checks each optimum with a long restart 2-opt/insert search.
Deterministic: re-running reproduces identical files.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from deepopt.tsp import load_tsplib, restart_hill_climb, tour_cost  # noqa: E402

OUT = Path(__file__).resolve().parent.parent / "data" / "tsplib"

COMMENT = (
    "synthetic stand-in instance (not the benchmark original); "
    "optimum known by construction, see scripts/generate_tsp_standins.py"
)


def circle_points(n, rng, radius=2000.0):
    """Random angles with a guaranteed minimum gap, all on one circle.

    Gaps are a fixed floor plus normalised exponential jitter, so the points
    are in convex position with well-separated neighbours.
    """
    floor = 0.35 * 2 * np.pi / n
    jitter = rng.exponential(1.0, n)
    gaps = floor + jitter / jitter.sum() * (2 * np.pi - n * floor)
    angles = rng.uniform(0.0, 2 * np.pi) + np.cumsum(gaps)
    return np.stack([radius * np.cos(angles), radius * np.sin(angles)], axis=1)


def euc2d_rounded(coords):
    diff = coords[:, None, :] - coords[None, :, :]
    return np.floor(np.sqrt((diff * diff).sum(axis=2)) + 0.5)


def hidden_cycle_matrix(n, rng):
    """Asymmetric matrix whose unique optimum is a secret Hamiltonian cycle.

    Arcs along the cycle (forward position gap 1) cost 100..120; all other
    arcs cost 300 + 50*gap plus the same small noise, so there is both a
    cliff rewarding true cycle arcs and a smooth gradient over detour
    length that node-insertion search can follow.  Any non-cycle tour
    keeps at most n-2 unit-gap arcs while its remaining gaps sum to 38 or
    more, which bounds it below by 100(n-2) + 600 + 50*(n+2); the cycle
    costs at most 120n, leaving a provable margin for every n >= 30.
    """
    cycle = rng.permutation(n)
    position = np.empty(n, dtype=int)
    position[cycle] = np.arange(n)
    gap = (position[None, :] - position[:, None]) % n
    noise = rng.integers(0, 21, size=(n, n))
    dist = np.where(gap == 1, 100.0, 300.0 + 50.0 * gap) + noise
    np.fill_diagonal(dist, 0.0)
    cost = float(dist[cycle, np.roll(cycle, -1)].sum())
    return dist, np.roll(cycle, -int(np.argmax(cycle == 0))), cost


def _wrap(values, per_line=12):
    lines = []
    for i in range(0, len(values), per_line):
        lines.append(" ".join(str(v) for v in values[i : i + per_line]))
    return "\n".join(lines)


def write_euc2d(name, coords):
    body = "\n".join(
        f"{i + 1} {c[0]:.4f} {c[1]:.4f}" for i, c in enumerate(coords)
    )
    text = (
        f"NAME : {name}\n"
        f"COMMENT : {COMMENT}\n"
        "TYPE : TSP\n"
        f"DIMENSION : {len(coords)}\n"
        "EDGE_WEIGHT_TYPE : EUC_2D\n"
        "NODE_COORD_SECTION\n"
        f"{body}\n"
        "EOF\n"
    )
    (OUT / f"{name}.tsp").write_text(text)


def write_explicit(name, dist, fmt, kind="TSP"):
    n = dist.shape[0]
    if fmt == "FULL_MATRIX":
        values = [int(v) for v in dist.ravel()]
    elif fmt == "UPPER_ROW":
        values = [int(dist[r, c]) for r in range(n) for c in range(r + 1, n)]
    else:  # LOWER_DIAG_ROW
        values = [int(dist[r, c]) for r in range(n) for c in range(r + 1)]
    suffix = "tsp" if kind == "TSP" else "atsp"
    text = (
        f"NAME : {name}\n"
        f"COMMENT : {COMMENT}\n"
        f"TYPE : {kind}\n"
        f"DIMENSION : {n}\n"
        "EDGE_WEIGHT_TYPE : EXPLICIT\n"
        f"EDGE_WEIGHT_FORMAT : {fmt}\n"
        "EDGE_WEIGHT_SECTION\n"
        f"{_wrap(values)}\n"
        "EOF\n"
    )
    (OUT / f"{name}.{suffix}").write_text(text)


def check_optimum(name, optimum, move, trials=800, steps=3000, seed=9):
    instance = load_tsplib(str(next(OUT.glob(f"{name}.*"))))
    best, _ = restart_hill_climb(instance, move, trials, steps, seed, workers=2)
    gap = best.cost - optimum
    status = "confirmed" if gap >= 0 else "VIOLATED"
    found = "reached" if gap == 0 else f"best found {best.cost}"
    print(f"{name}: optimum {optimum} {status} ({found})")
    if gap < 0:
        raise SystemExit(f"{name}: search found a tour below the claimed optimum")
    return instance


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    registry = {}

    symmetric = [
        ("fr26", 26, "LOWER_DIAG_ROW", 101),
        ("brazil58", 58, "UPPER_ROW", 102),
        ("st70", 70, None, 103),  # EUC_2D with coordinates
    ]
    for name, n, fmt, seed in symmetric:
        rng = np.random.default_rng(seed)
        coords = circle_points(n, rng)
        dist = euc2d_rounded(coords)
        hull_cost = float(dist[np.arange(n), np.roll(np.arange(n), -1)].sum())
        if fmt is None:
            write_euc2d(name, coords)
        else:
            write_explicit(name, dist, fmt)
        registry[name] = hull_cost

    asymmetric = [("ftv35", 36, 104), ("p43", 43, 105), ("ft70", 70, 106)]
    for name, n, seed in asymmetric:
        rng = np.random.default_rng(seed)
        dist, cycle, cost = hidden_cycle_matrix(n, rng)
        write_explicit(name, dist, "FULL_MATRIX", kind="ATSP")
        registry[name] = cost

    lines = ["# instance optimum (synthetic stand-ins, optimum by construction)"]
    for name in ("fr26", "brazil58", "st70", "ftv35", "p43", "ft70"):
        lines.append(f"{name} {registry[name]:.0f}")
    (OUT / "optima.txt").write_text("\n".join(lines) + "\n")

    for name, _, _, _ in symmetric:
        check_optimum(name, registry[name], "two_opt")
    for name, _, _ in asymmetric:
        check_optimum(name, registry[name], "insert")
    print("all instances written to", OUT)


if __name__ == "__main__":
    main()
