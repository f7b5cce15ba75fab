"""Sensing utility: per-target value, per-node aggregation, target clearing.

A target contributes its full weight inside the sufficient range, decays
along a half-cosine out to the maximum range, and contributes nothing
beyond it.  Team tasking rescales contributions so each team is pulled
toward its own area of responsibility.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence

from .grid import CapabilityParams, Position, Topology, distance


@dataclass(frozen=True)
class TargetPoint:
    """One grid point of sensing interest.

    weight is the point's maximum sensing value; team_tag names the team
    tasked with it (None when untasked).  Cleared points contribute
    nothing and stay cleared.
    """

    id: str
    position: Position
    weight: float = 1.0
    team_tag: Optional[str] = None
    cleared: bool = False

    def __post_init__(self) -> None:
        if self.weight < 0:
            raise ValueError(f"target {self.id}: weight must be >= 0")


@dataclass(frozen=True)
class TeamSensingPolicy:
    """Scaling applied to target weights under team tasking."""

    assigned_weight: float = 0.8
    other_weight: float = 0.2

    def __post_init__(self) -> None:
        if not 0 < self.assigned_weight <= 1:
            raise ValueError("assigned_weight must be in (0, 1]")
        if not 0 <= self.other_weight < 1:
            raise ValueError("other_weight must be in [0, 1)")
        if self.assigned_weight <= self.other_weight:
            raise ValueError("assigned_weight must exceed other_weight")


def sensing_value(r: float, weight: float, s_suf: float, s_max: float) -> float:
    """Sensing value of a target at distance r.

    Full weight for r <= s_suf, half-cosine falloff on (s_suf, s_max],
    zero beyond s_max.  Continuous and non-increasing in r.
    """
    if r < 0:
        raise ValueError("distance must be non-negative")
    if s_suf >= s_max:
        raise ValueError("need s_suf < s_max")
    if r <= s_suf:
        return weight
    if r <= s_max:
        return (weight / 2.0) * (1.0 + math.cos(math.pi * (r - s_suf) / (s_max - s_suf)))
    return 0.0


def effective_weight(
    target: TargetPoint,
    node_team: Optional[str],
    policy: Optional[TeamSensingPolicy],
) -> float:
    """Target weight as seen by a node, after team-priority scaling."""
    if policy is None:
        return target.weight
    if target.team_tag is not None and target.team_tag == node_team:
        return target.weight * policy.assigned_weight
    return target.weight * policy.other_weight


def node_sensing_utility(
    pos: Position,
    targets: Sequence[TargetPoint],
    params: CapabilityParams,
    node_team: Optional[str] = None,
    policy: Optional[TeamSensingPolicy] = None,
) -> float:
    """Sum of sensing values over non-cleared targets from one position."""
    total = 0.0
    for t in targets:
        if t.cleared:
            continue
        w = effective_weight(t, node_team, policy)
        if w == 0.0:
            continue
        total += sensing_value(distance(pos, t.position), w, params.s_suf, params.s_max)
    return total


def update_cleared(
    targets: Sequence[TargetPoint],
    topology: Topology,
    params: CapabilityParams,
    clearing_radius: Optional[float] = None,
    sensing_nodes: Optional[Mapping[str, bool]] = None,
) -> list[TargetPoint]:
    """Mark targets searched by the committed end-of-cycle placement.

    A point clears when any node sits within the clearing radius
    (explicit argument, else params.clearing_radius, else s_suf, the
    full-value sensing range).  Clearing is monotone: already-cleared
    points stay cleared.
    """
    if clearing_radius is not None:
        radius = clearing_radius
    elif params.clearing_radius is not None:
        radius = params.clearing_radius
    else:
        radius = params.s_suf
    positions = [
        topology.positions[n]
        for n in topology.node_ids
        if sensing_nodes is None or sensing_nodes.get(n, True)
    ]
    out = []
    for t in targets:
        if not t.cleared and any(distance(p, t.position) <= radius for p in positions):
            out.append(replace(t, cleared=True))
        else:
            out.append(t)
    return out
