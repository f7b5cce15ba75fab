"""Disruption-tolerant communications model.

Each unordered node pair carries a requirement: how many consecutive
control cycles it may go without communicating, and how many hops a
message may take when it does.  A candidate topology conforms for a pair
when the pair communicates now or its hypothetical silence streak stays
within the allowance.  The topology utility is the conformance indicator
summed with per-pair priority weights (inverse of the cycle allowance)
and normalized to [0, 1].
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .grid import CapabilityParams, Topology, adjacency

UNREACHABLE = -1

PairKey = tuple[str, str]


def pair_key(a: str, b: str) -> PairKey:
    """Canonical unordered pair key."""
    if a == b:
        raise ValueError(f"self pair {a!r} is not a communication pair")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class NetRequirement:
    """Per-pair communication requirement.

    max_silent_cycles: longest run of consecutive control cycles the pair
    may fail to communicate (inclusive: a streak of exactly this length
    still conforms).  max_hops: longest acceptable delivery path, in
    edges, when the pair does communicate.
    """

    max_silent_cycles: int
    max_hops: int

    def __post_init__(self) -> None:
        if self.max_silent_cycles < 1 or self.max_hops < 1:
            raise ValueError("max_silent_cycles and max_hops must be >= 1")


class NetConfig:
    """Symmetric map of pair requirements covering every node pair."""

    def __init__(self, node_ids: Iterable[str], requirements: Mapping[PairKey, NetRequirement]):
        self.node_ids = tuple(node_ids)
        self.requirements = dict(requirements)
        expected = {
            pair_key(self.node_ids[i], self.node_ids[j])
            for i in range(len(self.node_ids))
            for j in range(i + 1, len(self.node_ids))
        }
        extra = set(self.requirements) - expected
        missing = expected - set(self.requirements)
        if extra:
            raise ValueError(f"requirements for unknown pairs: {sorted(extra)}")
        if missing:
            raise ValueError(f"requirements missing for pairs: {sorted(missing)}")
        self.total_weight = sum(1.0 / r.max_silent_cycles for r in self.requirements.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NetConfig):
            return NotImplemented
        return self.node_ids == other.node_ids and self.requirements == other.requirements

    def requirement(self, a: str, b: str) -> NetRequirement:
        return self.requirements[pair_key(a, b)]

    def pairs(self) -> list[PairKey]:
        return sorted(self.requirements)


@dataclass(frozen=True)
class ConnectivityLedger:
    """Consecutive non-communication streak per pair, over committed cycles.

    A streak of 0 means the pair communicated in the most recent committed
    cycle.  At mission start every streak is 0.
    """

    streaks: Mapping[PairKey, int]

    @classmethod
    def initial(cls, node_ids: Iterable[str]) -> "ConnectivityLedger":
        ids = tuple(node_ids)
        return cls({pair_key(ids[i], ids[j]): 0 for i in range(len(ids)) for j in range(i + 1, len(ids))})

    def streak(self, a: str, b: str) -> int:
        return self.streaks[pair_key(a, b)]


def hop_distances(topology: Topology, params: CapabilityParams) -> dict[PairKey, int]:
    """Shortest path length in edges for every pair; UNREACHABLE when none."""
    ids = topology.node_ids
    n = len(ids)
    adj = adjacency(topology, params)
    out: dict[PairKey, int] = {}
    for i in range(n):
        # BFS from i over the link graph.
        dist = [UNREACHABLE] * n
        dist[i] = 0
        queue = deque([i])
        while queue:
            u = queue.popleft()
            for v in range(n):
                if adj[u][v] and dist[v] == UNREACHABLE:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        for j in range(i + 1, n):
            out[pair_key(ids[i], ids[j])] = dist[j]
    return out


def hop_distance(a: str, b: str, topology: Topology, params: CapabilityParams) -> int:
    """Shortest path between two nodes, in edges; UNREACHABLE when none."""
    return hop_distances(topology, params)[pair_key(a, b)]


def communicates(
    a: str,
    b: str,
    topology: Topology,
    params: CapabilityParams,
    req: NetRequirement,
    hops: Optional[Mapping[PairKey, int]] = None,
) -> bool:
    """True iff a path of at most max_hops edges exists between the pair."""
    h = (hops or hop_distances(topology, params))[pair_key(a, b)]
    return h != UNREACHABLE and h <= req.max_hops


def pair_conforms(
    a: str,
    b: str,
    candidate: Topology,
    params: CapabilityParams,
    ledger: ConnectivityLedger,
    req: NetRequirement,
    hops: Optional[Mapping[PairKey, int]] = None,
) -> bool:
    """Conformance indicator for one pair against a candidate topology.

    Communicating pairs conform outright.  A non-communicating pair
    conforms while its streak, counting the candidate cycle, stays within
    the allowance.
    """
    if communicates(a, b, candidate, params, req, hops):
        return True
    return ledger.streak(a, b) + 1 <= req.max_silent_cycles


def conformance_map(
    candidate: Topology,
    params: CapabilityParams,
    ledger: ConnectivityLedger,
    net: NetConfig,
) -> dict[PairKey, bool]:
    """Conformance of every pair for one candidate topology."""
    hops = hop_distances(candidate, params)
    return {
        key: pair_conforms(key[0], key[1], candidate, params, ledger, net.requirements[key], hops)
        for key in net.requirements
    }


def net_utility(
    candidate: Topology,
    params: CapabilityParams,
    ledger: ConnectivityLedger,
    net: NetConfig,
) -> float:
    """Priority-weighted conformance utility in [0, 1].

    Pairs with tighter cycle allowances weigh more (weight is the inverse
    allowance); the weighted conformance sum is normalized by the total
    weight.
    """
    conforms = conformance_map(candidate, params, ledger, net)
    score = sum(
        (1.0 / net.requirements[key].max_silent_cycles)
        for key, ok in conforms.items()
        if ok
    )
    return score / net.total_weight


def commit_cycle(
    topology: Topology,
    params: CapabilityParams,
    ledger: ConnectivityLedger,
    net: NetConfig,
) -> ConnectivityLedger:
    """Ledger after committing a cycle: reset communicating pairs, bump the rest."""
    hops = hop_distances(topology, params)
    new_streaks = {}
    for key, req in net.requirements.items():
        if communicates(key[0], key[1], topology, params, req, hops):
            new_streaks[key] = 0
        else:
            new_streaks[key] = ledger.streaks[key] + 1
    return ConnectivityLedger(new_streaks)
