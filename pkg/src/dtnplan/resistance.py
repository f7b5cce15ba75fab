"""Graph-resistance communications utility (the always-connected baseline).

Each feasible link gets a distance-dependent resistance; the whole
topology is scored by the resistance-distance sum computed from the
eigenvalues of the conductance-weighted Laplacian.  Candidate placements
are compared through min-max normalization of their scores, and any
disconnected placement scores zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import CapabilityParams, Topology, distance

INFINITE_RESISTANCE = math.inf

# Relative lambda_2 threshold below which a graph counts as disconnected.
_CONNECTIVITY_RTOL = 1e-9


def link_resistance(
    d: float,
    c_max: float,
    tau: float,
    colocated: bool = False,
) -> float:
    """Resistance of a link between nodes at distance d.

    Rises from 0.1 (contact limit) toward 1.0 as d approaches c_max and
    is infinite beyond it.  d = 0 is only meaningful for co-located
    distinct nodes and must be flagged explicitly; it evaluates the
    d -> 0+ limit.
    """
    if d <= 0 and not colocated:
        raise ValueError("link distance must be positive (set colocated for d = 0)")
    if d < 0:
        raise ValueError("link distance must be non-negative")
    if d > c_max:
        return INFINITE_RESISTANCE
    return 1.0 - 0.9 * math.exp(-tau * (d / c_max))


@dataclass(frozen=True)
class WeightedCommGraph:
    """Symmetric conductance matrix over the topology's node order.

    Entry (i, j) is 1 / link_resistance for linked pairs and 0 otherwise.
    """

    n: int
    conductances: tuple[tuple[float, ...], ...]

    @classmethod
    def from_topology(
        cls,
        topology: Topology,
        params: CapabilityParams,
        weighting: str = "conductance",
    ) -> "WeightedCommGraph":
        # "conductance" weights edges by 1/resistance (closer nodes conduct
        # better); "resistance" uses the raw link resistance as the edge
        # weight, kept only for fidelity experiments.
        if weighting not in ("conductance", "resistance"):
            raise ValueError(f"unknown weighting {weighting!r}")
        ids = topology.node_ids
        n = len(ids)
        rows = [[0.0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                d = distance(topology.positions[ids[i]], topology.positions[ids[j]])
                if d <= params.c_max:
                    r = link_resistance(d, params.c_max, params.tau, colocated=d == 0)
                    w = 1.0 / r if weighting == "conductance" else r
                    rows[i][j] = rows[j][i] = w
        return cls(n, tuple(tuple(row) for row in rows))

    def laplacian(self) -> np.ndarray:
        c = np.asarray(self.conductances, dtype=float)
        return np.diag(c.sum(axis=1)) - c


def graph_resistance(graph: WeightedCommGraph) -> float:
    """Total resistance score: n * sum of reciprocal nonzero Laplacian eigenvalues.

    Infinite for disconnected graphs (second eigenvalue at numerical zero).
    """
    if graph.n < 2:
        raise ValueError("graph resistance needs at least 2 nodes")
    eigenvalues = np.linalg.eigvalsh(graph.laplacian())
    lam_max = float(eigenvalues[-1])
    if lam_max <= 0.0 or float(eigenvalues[1]) < _CONNECTIVITY_RTOL * lam_max:
        return INFINITE_RESISTANCE
    return float(graph.n * np.sum(1.0 / eigenvalues[1:]))


def normalized_comm_utilities(resistances: Sequence[float]) -> list[float]:
    """Min-max normalized utilities, one per candidate placement.

    Disconnected candidates (infinite resistance) get 0.  Finite
    candidates get 1 - (R - Rmin) / (Rmax - Rmin) over the finite subset;
    a degenerate finite subset (all equal) gets 1.
    """
    if not resistances:
        raise ValueError("candidate batch must be non-empty")
    finite = [r for r in resistances if math.isfinite(r)]
    if not finite:
        return [0.0] * len(resistances)
    lo, hi = min(finite), max(finite)
    span = hi - lo
    out = []
    for r in resistances:
        if not math.isfinite(r):
            out.append(0.0)
        elif span == 0.0:
            out.append(1.0)
        else:
            out.append(1.0 - (r - lo) / span)
    return out
