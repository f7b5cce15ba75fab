"""Joint mission utility and greedy sequential repositioning.

The joint utility blends a sensing score and a communications score with
complementary weights.  Repositioning is greedy and sequential: every
cycle, each reactive node is placed exactly once, in order of the largest
achievable utility gain, re-evaluating the remaining nodes after each
commitment.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .grid import CapabilityParams, GridSpec, Position, Topology, feasible_moves
from .netmodel import ConnectivityLedger, NetConfig, net_utility
from .resistance import WeightedCommGraph, graph_resistance, normalized_comm_utilities
from .sensing import TargetPoint, TeamSensingPolicy, node_sensing_utility

LEGACY = "legacy"
DTN = "dtn"
COMM_MODELS = (LEGACY, DTN)


@dataclass(frozen=True)
class UtilityWeights:
    """Relative importance of sensing versus communications."""

    alpha_s: float
    alpha_c: float

    def __post_init__(self) -> None:
        for name, value in (("alpha_s", self.alpha_s), ("alpha_c", self.alpha_c)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {value}")
        if abs(self.alpha_s + self.alpha_c - 1.0) > 1e-12:
            raise ValueError(f"weights must sum to 1, got {self.alpha_s + self.alpha_c}")


@dataclass(frozen=True)
class CandidateScore:
    """Utility breakdown for one candidate position of one node."""

    position: Position
    sensing: float
    comm: float
    joint: float
    resistance: Optional[float] = None


@dataclass(frozen=True)
class GreedyStep:
    """One committed placement within a cycle."""

    node_id: str
    position: Position
    gain: float
    sensing: float
    comm: float
    joint: float
    candidate_count: int
    resistance: Optional[float] = None


@dataclass(frozen=True)
class GreedyTrace:
    """Committed placements in the order the greedy chose them."""

    steps: tuple[GreedyStep, ...]

    @property
    def order(self) -> tuple[str, ...]:
        return tuple(step.node_id for step in self.steps)


class UtilityEvaluator:
    """Scores candidate topologies for one control cycle.

    Bundles the per-cycle context: grid and capability parameters, utility
    weights, the remaining targets, and the configured communications
    model.  In the disruption-tolerant model the ledger snapshot is the
    one committed before this cycle; in the legacy model the comm score of
    a candidate is min-max normalized against the rest of its batch.
    """

    def __init__(
        self,
        grid: GridSpec,
        params: CapabilityParams,
        weights: UtilityWeights,
        targets: Sequence[TargetPoint],
        comm_model: str = DTN,
        net: Optional[NetConfig] = None,
        ledger: Optional[ConnectivityLedger] = None,
        node_teams: Optional[Mapping[str, Optional[str]]] = None,
        team_policy: Optional[TeamSensingPolicy] = None,
        sensing_ids: Optional[Iterable[str]] = None,
        normalize_sensing: bool = True,
    ):
        if comm_model not in COMM_MODELS:
            raise ValueError(f"unknown comm_model {comm_model!r}")
        if comm_model == DTN and (net is None or ledger is None):
            raise ValueError("dtn comm model requires a net config and a ledger")
        self.grid = grid
        self.params = params
        self.weights = weights
        self.targets = tuple(targets)
        self.comm_model = comm_model
        self.net = net
        self.ledger = ledger
        self.node_teams = dict(node_teams or {})
        self.team_policy = team_policy
        self.sensing_ids = None if sensing_ids is None else frozenset(sensing_ids)
        self.normalize_sensing = normalize_sensing
        self.remaining_weight = sum(t.weight for t in self.targets if not t.cleared)

    def is_sensing_node(self, node_id: str) -> bool:
        return self.sensing_ids is None or node_id in self.sensing_ids

    def node_sensing(self, node_id: str, position: Position) -> float:
        if not self.is_sensing_node(node_id):
            return 0.0
        return node_sensing_utility(
            position,
            self.targets,
            self.params,
            node_team=self.node_teams.get(node_id),
            policy=self.team_policy,
        )

    def _sensing_scale(self, topology: Topology) -> float:
        if not self.normalize_sensing:
            return 1.0
        count = sum(1 for node_id in topology.node_ids if self.is_sensing_node(node_id))
        # Each sensing node contributes at most the full remaining weight,
        # so the aggregate is bounded by count * remaining_weight.
        scale = self.remaining_weight * count
        return scale if scale > 0.0 else 0.0

    def sensing_aggregate(self, topology: Topology) -> float:
        raw = sum(self.node_sensing(n, topology.positions[n]) for n in topology.node_ids)
        scale = self._sensing_scale(topology)
        if self.normalize_sensing:
            return raw / scale if scale > 0.0 else 0.0
        return raw

    def comm_utility(self, topology: Topology) -> float:
        """Position-pure comm score of one topology.

        Legacy resistance is only comparable within a candidate batch, so
        a standalone topology degenerates to connected-or-not.
        """
        if self.comm_model == DTN:
            return net_utility(topology, self.params, self.ledger, self.net)
        resistance = graph_resistance(WeightedCommGraph.from_topology(topology, self.params))
        return normalized_comm_utilities([resistance])[0]

    def joint_utility(self, topology: Topology) -> float:
        return (
            self.weights.alpha_s * self.sensing_aggregate(topology)
            + self.weights.alpha_c * self.comm_utility(topology)
        )

    def score_candidates(
        self, node_id: str, candidates: Sequence[Position], topology: Topology
    ) -> list[CandidateScore]:
        """Score every candidate position of one node, others held fixed."""
        base = sum(
            self.node_sensing(n, topology.positions[n])
            for n in topology.node_ids
            if n != node_id
        )
        scale = self._sensing_scale(topology)
        sensing_values = []
        for position in candidates:
            raw = base + self.node_sensing(node_id, position)
            if self.normalize_sensing:
                sensing_values.append(raw / scale if scale > 0.0 else 0.0)
            else:
                sensing_values.append(raw)

        resistances: Optional[list[float]] = None
        if self.comm_model == DTN:
            comm_values = [
                net_utility(topology.moved(node_id, p), self.params, self.ledger, self.net)
                for p in candidates
            ]
        else:
            resistances = [
                graph_resistance(WeightedCommGraph.from_topology(topology.moved(node_id, p), self.params))
                for p in candidates
            ]
            comm_values = normalized_comm_utilities(resistances)

        scores = []
        for i, position in enumerate(candidates):
            joint = self.weights.alpha_s * sensing_values[i] + self.weights.alpha_c * comm_values[i]
            scores.append(
                CandidateScore(
                    position=position,
                    sensing=sensing_values[i],
                    comm=comm_values[i],
                    joint=joint,
                    resistance=None if resistances is None else resistances[i],
                )
            )
        return scores


def ordered_candidates(node_id: str, topology: Topology, evaluator: UtilityEvaluator) -> list[Position]:
    """Feasible moves with the current position first, the rest in (x, y) order."""
    current = topology.positions[node_id]
    moves = feasible_moves(current, evaluator.params, evaluator.grid)
    return [current] + [p for p in moves if p != current]


def argmax_topology(
    node_id: str, topology: Topology, evaluator: UtilityEvaluator
) -> tuple[CandidateScore, CandidateScore, int]:
    """Best candidate for one node, all others fixed.

    Returns (best score, stay-put score, candidate count).  Ties prefer
    the current position, then the smallest (x, y); both fall out of the
    strictly-greater scan over the ordered candidate list.
    """
    candidates = ordered_candidates(node_id, topology, evaluator)
    scores = evaluator.score_candidates(node_id, candidates, topology)
    stay = scores[0]
    best = stay
    for score in scores[1:]:
        if score.joint > best.joint:
            best = score
    return best, stay, len(scores)


def greedy_reposition(
    reactive: Iterable[str], topology: Topology, evaluator: UtilityEvaluator
) -> tuple[Topology, GreedyTrace]:
    """Place every reactive node once, best utility gain first.

    Each round evaluates every unplaced node's best move (placed nodes at
    their new positions, unplaced ones where they stand) and commits the
    node with the largest gain; equal gains go to the lowest node id.
    Staying put is always a candidate, so gains are never negative.
    """
    remaining = sorted(set(reactive))
    for node_id in remaining:
        if node_id not in topology.positions:
            raise ValueError(f"reactive node {node_id!r} is not in the topology")
    steps: list[GreedyStep] = []
    current = topology
    while remaining:
        chosen_id = None
        chosen: Optional[CandidateScore] = None
        chosen_gain = -1.0
        chosen_count = 0
        for node_id in remaining:
            best, stay, count = argmax_topology(node_id, current, evaluator)
            gain = best.joint - stay.joint
            if gain > chosen_gain:
                chosen_id = node_id
                chosen = best
                chosen_gain = gain
                chosen_count = count
        assert chosen_id is not None and chosen is not None
        current = current.moved(chosen_id, chosen.position)
        steps.append(
            GreedyStep(
                node_id=chosen_id,
                position=chosen.position,
                gain=chosen_gain,
                sensing=chosen.sensing,
                comm=chosen.comm,
                joint=chosen.joint,
                candidate_count=chosen_count,
                resistance=chosen.resistance,
            )
        )
        remaining.remove(chosen_id)
    return current, GreedyTrace(steps=tuple(steps))
