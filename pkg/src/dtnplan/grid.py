"""Discretized 2-D operation space: positions, movement, and adjacency.

Every utility model sits on top of these primitives.  Positions live on
integer grid intersections; distances are measured in grid steps.  The
grid metric governs movement reach only; sensing and communication
footprints are always Euclidean (circular), matching the range models.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Position:
    """Integer grid coordinate."""

    x: int
    y: int

    def as_list(self) -> list[int]:
        return [self.x, self.y]


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid of navigable intersections.

    step_meters is metadata only: all ranges are expressed in grid steps.
    An obstacle mask is supported but empty in the shipped scenarios.
    """

    width: int
    height: int
    step_meters: float = 500.0
    metric: str = "euclidean"
    obstacles: frozenset[Position] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.width < 2 or self.height < 2:
            raise ValueError("grid must be at least 2x2")
        if self.step_meters <= 0:
            raise ValueError("step_meters must be positive")
        if self.metric not in ("euclidean", "chebyshev", "manhattan"):
            raise ValueError(f"unknown metric {self.metric!r}")

    def in_bounds(self, p: Position) -> bool:
        return 0 <= p.x < self.width and 0 <= p.y < self.height

    def navigable(self, p: Position) -> bool:
        return self.in_bounds(p) and p not in self.obstacles


@dataclass(frozen=True)
class CapabilityParams:
    """Per-node capability envelope, in grid steps.

    s_max: max sensing range; s_suf: range of full sensing value
    (must satisfy 0 < s_suf < s_max); c_max: max communication range;
    m_max: max per-cycle movement; tau: link-resistance decay constant;
    clearing_radius: range within which a target point counts as
    searched at the end of a cycle (defaults to s_suf when unset,
    s_max is the permissive alternative).
    """

    s_max: float
    s_suf: float
    c_max: float
    m_max: float
    tau: float = 3.0
    clearing_radius: float | None = None

    def __post_init__(self) -> None:
        if not 0 < self.s_suf < self.s_max:
            raise ValueError("need 0 < s_suf < s_max")
        if self.c_max <= 0 or self.m_max <= 0 or self.tau <= 0:
            raise ValueError("c_max, m_max and tau must be positive")
        if self.clearing_radius is not None and self.clearing_radius <= 0:
            raise ValueError("clearing_radius must be positive when set")


def distance(a: Position, b: Position, metric: str = "euclidean") -> float:
    """Distance between two grid positions in grid steps."""
    dx = a.x - b.x
    dy = a.y - b.y
    if metric == "euclidean":
        return math.hypot(dx, dy)
    if metric == "chebyshev":
        return float(max(abs(dx), abs(dy)))
    if metric == "manhattan":
        return float(abs(dx) + abs(dy))
    raise ValueError(f"unknown metric {metric!r}")


def feasible_moves(p: Position, params: CapabilityParams, grid: GridSpec) -> list[Position]:
    """All navigable positions reachable in one control cycle, p included.

    Staying put is always feasible.  Returned in lexicographic (x, y)
    order so downstream tie-breaking is deterministic.
    """
    reach = int(math.floor(params.m_max))
    moves = []
    for x in range(max(0, p.x - reach), min(grid.width, p.x + reach + 1)):
        for y in range(max(0, p.y - reach), min(grid.height, p.y + reach + 1)):
            q = Position(x, y)
            if distance(p, q, grid.metric) <= params.m_max and grid.navigable(q):
                moves.append(q)
    return moves


@dataclass(frozen=True)
class Topology:
    """Node placement for one control cycle.

    Node identity order is fixed by the scenario and reused for every
    matrix-shaped result.
    """

    node_ids: tuple[str, ...]
    positions: dict[str, Position]

    def __post_init__(self) -> None:
        missing = [n for n in self.node_ids if n not in self.positions]
        if missing:
            raise ValueError(f"positions missing for {missing}")

    def moved(self, node_id: str, p: Position) -> "Topology":
        new_positions = dict(self.positions)
        new_positions[node_id] = p
        return Topology(self.node_ids, new_positions)

    def pairs(self) -> list[tuple[str, str]]:
        ids = self.node_ids
        return [(ids[i], ids[j]) for i in range(len(ids)) for j in range(i + 1, len(ids))]


def adjacency(topology: Topology, params: CapabilityParams, metric: str = "euclidean") -> list[list[bool]]:
    """Symmetric link matrix: true iff distinct nodes are within c_max.

    Co-located distinct nodes (d = 0) count as linked: the link model
    treats that as the d -> 0+ limit.
    """
    ids = topology.node_ids
    n = len(ids)
    adj = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = distance(topology.positions[ids[i]], topology.positions[ids[j]], metric)
            linked = d <= params.c_max
            adj[i][j] = linked
            adj[j][i] = linked
    return adj
