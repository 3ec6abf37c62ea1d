"""TSPLIB95 instance parsing and integer edge weights.

Only the two coordinate metrics needed here are supported: ``ATT``
(pseudo-Euclidean, used by att48) and ``EUC_2D``. Distances follow the
TSPLIB reference rules bit-exactly, so published optimal tour lengths are
reproduced.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

__all__ = [
    "Instance",
    "ParseError",
    "parse_instance",
    "load_instance",
    "format_instance",
    "distance",
    "tour_length",
    "path_length",
    "validate_tour",
    "parse_tour",
    "nint",
]

METRICS = ("ATT", "EUC_2D")

_KEY_RE = re.compile(r"^\s*([A-Za-z_]+)\s*:\s*(.*?)\s*$")


class ParseError(ValueError):
    """Malformed TSPLIB or tour document; ``lineno`` is 1-based (0 if unknown)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        where = f"line {lineno}: " if lineno else ""
        super().__init__(where + message)


def nint(x: float) -> int:
    # round half away from zero, like TSPLIB's nint()
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))


def _att(dx: float, dy: float) -> int:
    r = math.sqrt((dx * dx + dy * dy) / 10.0)
    t = nint(r)
    return t + 1 if t < r else t


def _euc2d(dx: float, dy: float) -> int:
    return nint(math.sqrt(dx * dx + dy * dy))


_RULES = {"ATT": _att, "EUC_2D": _euc2d}


@dataclass(frozen=True)
class Instance:
    """A symmetric TSP instance with 1-based vertex ids.

    ``coords[i - 1]`` holds the coordinates of vertex ``i``.
    """

    name: str
    metric: str
    coords: tuple[tuple[float, float], ...]
    comment: str = field(default="", compare=False)

    def __post_init__(self):
        if self.metric not in _RULES:
            raise ValueError(f"unsupported metric {self.metric!r}")
        if not self.coords:
            raise ValueError("instance has no vertices")

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @property
    def vertices(self) -> range:
        return range(1, len(self.coords) + 1)

    @cached_property
    def matrix(self) -> list[list[int]]:
        """Full distance table indexed ``matrix[i][j]`` with 1-based ids (row/col 0 unused)."""
        rule = _RULES[self.metric]
        n = self.dimension
        pts = [(0.0, 0.0), *self.coords]
        m = [[0] * (n + 1) for _ in range(n + 1)]
        for i in range(1, n + 1):
            xi, yi = pts[i]
            row = m[i]
            for j in range(i + 1, n + 1):
                d = rule(xi - pts[j][0], yi - pts[j][1])
                row[j] = d
                m[j][i] = d
        return m

    def xy(self, v: int) -> tuple[float, float]:
        return self.coords[v - 1]

    def check_vertex(self, v: int) -> None:
        if not 1 <= v <= self.dimension:
            raise ValueError(f"vertex id {v} out of range 1..{self.dimension}")

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence[float]], metric: str = "EUC_2D",
                    name: str = "anonymous") -> "Instance":
        return cls(name=name, metric=metric.upper(),
                   coords=tuple((float(x), float(y)) for x, y in coords))


def distance(inst: Instance, i: int, j: int) -> int:
    inst.check_vertex(i)
    inst.check_vertex(j)
    return inst.matrix[i][j]


def path_length(inst: Instance, seq: Sequence[int]) -> int:
    """Length of an open path (no closing edge)."""
    m = inst.matrix
    return sum(m[a][b] for a, b in zip(seq, seq[1:]))


def validate_tour(inst: Instance, tour: Sequence[int]) -> None:
    n = inst.dimension
    if len(tour) != n or set(tour) != set(range(1, n + 1)):
        bad = [v for v in tour if not 1 <= v <= n]
        if bad:
            raise ValueError(f"vertex id {bad[0]} out of range 1..{n}")
        raise ValueError(f"tour is not a permutation of 1..{n}")


def tour_length(inst: Instance, tour: Sequence[int]) -> int:
    validate_tour(inst, tour)
    if len(tour) == 1:
        return 0
    return path_length(inst, tour) + inst.matrix[tour[-1]][tour[0]]


def parse_instance(text: str) -> Instance:
    header: dict[str, str] = {}
    rows: dict[int, tuple[float, float]] = {}
    in_coords = False
    coord_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        upper = line.upper()
        if upper == "EOF":
            break
        if in_coords:
            m = _KEY_RE.match(line)
            if m or upper.endswith("_SECTION"):
                in_coords = False
            else:
                parts = line.split()
                if len(parts) < 3:
                    raise ParseError(f"coordinate row needs 'id x y', got {line!r}", lineno)
                try:
                    vid = int(parts[0])
                except ValueError:
                    raise ParseError(f"non-integer vertex id {parts[0]!r}", lineno) from None
                try:
                    x, y = float(parts[1]), float(parts[2])
                except ValueError:
                    raise ParseError(f"non-numeric coordinate in {line!r}", lineno) from None
                if not math.isfinite(x) or not math.isfinite(y):
                    raise ParseError(f"non-numeric coordinate in {line!r}", lineno)
                if vid in rows:
                    raise ParseError(f"duplicate vertex id {vid}", lineno)
                rows[vid] = (x, y)
                coord_line = lineno
                continue
        if upper.startswith("NODE_COORD_SECTION"):
            in_coords = True
            continue
        if upper.endswith("_SECTION"):
            raise ParseError(f"unsupported section {line.split()[0]}", lineno)
        m = _KEY_RE.match(line)
        if m is None:
            raise ParseError(f"unrecognised line {line!r}", lineno)
        header[m.group(1).upper()] = m.group(2)
        if m.group(1).upper() == "EDGE_WEIGHT_TYPE" and m.group(2).upper() not in _RULES:
            raise ParseError(f"unsupported EDGE_WEIGHT_TYPE {m.group(2)!r}", lineno)

    if "DIMENSION" not in header:
        raise ParseError("missing DIMENSION")
    try:
        dim = int(header["DIMENSION"])
    except ValueError:
        raise ParseError(f"bad DIMENSION {header['DIMENSION']!r}") from None
    if dim < 1:
        raise ParseError(f"DIMENSION must be positive, got {dim}")
    metric = header.get("EDGE_WEIGHT_TYPE", "").upper()
    if not metric:
        raise ParseError("missing EDGE_WEIGHT_TYPE")
    if len(rows) != dim:
        raise ParseError(f"dimension mismatch: DIMENSION {dim} but {len(rows)} coordinate rows",
                         coord_line)
    bad = sorted(v for v in rows if not 1 <= v <= dim)
    if bad:
        raise ParseError(f"vertex id {bad[0]} out of range 1..{dim}", coord_line)
    return Instance(
        name=header.get("NAME", "unnamed"),
        metric=metric,
        coords=tuple(rows[v] for v in range(1, dim + 1)),
        comment=header.get("COMMENT", ""),
    )


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _num(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def format_instance(inst: Instance) -> str:
    lines = [f"NAME : {inst.name}"]
    if inst.comment:
        lines.append(f"COMMENT : {inst.comment}")
    lines += [
        "TYPE : TSP",
        f"DIMENSION : {inst.dimension}",
        f"EDGE_WEIGHT_TYPE : {inst.metric}",
        "NODE_COORD_SECTION",
    ]
    lines += [f"{i} {_num(x)} {_num(y)}" for i, (x, y) in enumerate(inst.coords, start=1)]
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def parse_tour(text: str) -> list[int]:
    """Read a tour: one id per line, optionally wrapped in a TSPLIB TOUR_SECTION.

    A terminating ``-1`` ends the sequence.
    """
    ids: list[int] = []
    has_section = "TOUR_SECTION" in text.upper()
    in_section = not has_section
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        upper = line.upper()
        if upper == "EOF":
            break
        if not in_section:
            if upper.startswith("TOUR_SECTION"):
                in_section = True
            continue
        for tok in line.split():
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"non-integer tour entry {tok!r}", lineno) from None
            if v == -1:
                return ids
            ids.append(v)
    return ids
