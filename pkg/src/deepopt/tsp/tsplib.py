"""Parser for the TSPLIB subset used by the tour experiments.

Supported kinds: TYPE TSP/ATSP with EDGE_WEIGHT_TYPE EUC_2D, or EXPLICIT
matrices in FULL_MATRIX, UPPER_ROW or LOWER_DIAG_ROW layout.  EUC_2D uses
the TSPLIB rounding rule (nearest-integer Euclidean distance).  Anything
else is rejected with the offending keyword in the message.
"""

from dataclasses import dataclass

import numpy as np


class TsplibError(ValueError):
    pass


@dataclass
class TspInstance:
    name: str
    n: int
    distance: np.ndarray  # (n, n) fully populated, diagonal unused
    symmetric: bool
    defined_start: int = 0
    known_optimum: float = None


def _nint(x):
    # TSPLIB rounding: int(x + 0.5)
    return np.floor(x + 0.5)


_IGNORED_KEYS = {"NAME", "COMMENT", "DISPLAY_DATA_TYPE", "NODE_COORD_TYPE"}
_SUPPORTED_TYPES = {"TSP", "ATSP"}
_SUPPORTED_WEIGHT_TYPES = {"EUC_2D", "EXPLICIT"}
_SUPPORTED_FORMATS = {"FULL_MATRIX", "UPPER_ROW", "LOWER_DIAG_ROW"}


def parse_tsplib(text):
    """Parse TSPLIB file content into a fully populated ``TspInstance``."""
    lines = [ln.strip() for ln in text.splitlines()]
    header = {}
    coords = None
    weights = None
    i = 0
    while i < len(lines):
        line = lines[i]
        i += 1
        if not line or line == "EOF":
            continue
        if ":" in line:
            key, _, value = line.partition(":")
            key = key.strip().upper()
            value = value.strip()
            if key in _IGNORED_KEYS:
                if key == "NAME":
                    header["NAME"] = value
                continue
            if key in ("TYPE", "DIMENSION", "EDGE_WEIGHT_TYPE", "EDGE_WEIGHT_FORMAT"):
                header[key] = value.upper() if key != "DIMENSION" else value
                continue
            raise TsplibError(f"unsupported keyword: {key}")
        keyword = line.split()[0].upper()
        if keyword == "NODE_COORD_SECTION":
            n = _dimension(header)
            coords = np.zeros((n, 2))
            for k in range(n):
                parts = lines[i].split()
                i += 1
                idx = int(parts[0]) - 1
                coords[idx] = (float(parts[1]), float(parts[2]))
            continue
        if keyword == "EDGE_WEIGHT_SECTION":
            n = _dimension(header)
            fmt = header.get("EDGE_WEIGHT_FORMAT")
            if fmt not in _SUPPORTED_FORMATS:
                raise TsplibError(f"unsupported EDGE_WEIGHT_FORMAT: {fmt}")
            count = {
                "FULL_MATRIX": n * n,
                "UPPER_ROW": n * (n - 1) // 2,
                "LOWER_DIAG_ROW": n * (n + 1) // 2,
            }[fmt]
            values = []
            while len(values) < count:
                if i >= len(lines) or lines[i] == "EOF":
                    raise TsplibError(
                        f"EDGE_WEIGHT_SECTION holds fewer than {count} values"
                    )
                try:
                    values.extend(float(t) for t in lines[i].split())
                except ValueError as exc:
                    raise TsplibError(
                        f"non-numeric token in EDGE_WEIGHT_SECTION: {lines[i]!r}"
                    ) from exc
                i += 1
            if len(values) != count:
                raise TsplibError(
                    f"EDGE_WEIGHT_SECTION holds {len(values)} values, expected {count}"
                )
            weights = (fmt, np.array(values))
            continue
        if keyword == "DISPLAY_DATA_SECTION":
            i += _dimension(header)
            continue
        raise TsplibError(f"unsupported keyword: {keyword}")

    kind = header.get("TYPE", "TSP")
    if kind not in _SUPPORTED_TYPES:
        raise TsplibError(f"unsupported TYPE: {kind}")
    n = _dimension(header)
    wtype = header.get("EDGE_WEIGHT_TYPE")
    if wtype not in _SUPPORTED_WEIGHT_TYPES:
        raise TsplibError(f"unsupported EDGE_WEIGHT_TYPE: {wtype}")

    if wtype == "EUC_2D":
        if coords is None:
            raise TsplibError("EUC_2D file without NODE_COORD_SECTION")
        diff = coords[:, None, :] - coords[None, :, :]
        dist = _nint(np.sqrt((diff * diff).sum(axis=2)))
    else:
        if weights is None:
            raise TsplibError("EXPLICIT file without EDGE_WEIGHT_SECTION")
        fmt, values = weights
        dist = np.zeros((n, n))
        if fmt == "FULL_MATRIX":
            dist = values.reshape(n, n)
        elif fmt == "UPPER_ROW":
            pos = 0
            for r in range(n):
                for c in range(r + 1, n):
                    dist[r, c] = dist[c, r] = values[pos]
                    pos += 1
        else:  # LOWER_DIAG_ROW
            pos = 0
            for r in range(n):
                for c in range(r + 1):
                    dist[r, c] = dist[c, r] = values[pos]
                    pos += 1

    return TspInstance(
        name=header.get("NAME", "unnamed"),
        n=n,
        distance=np.ascontiguousarray(dist, dtype=float),
        symmetric=bool(np.array_equal(dist, dist.T)),
    )


def _dimension(header):
    if "DIMENSION" not in header:
        raise TsplibError("DIMENSION missing")
    return int(header["DIMENSION"])


def load_tsplib(path):
    with open(path, encoding="ascii") as fh:
        return parse_tsplib(fh.read())


def load_optima(path):
    """Read a ``name value`` per line optimum registry."""
    registry = {}
    with open(path, encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            name, value = line.split()
            registry[name] = float(value)
    return registry
