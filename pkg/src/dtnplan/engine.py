"""Control-cycle loop: preset movement, repositioning, clearing, detection.

Each cycle applies scripted preset movements, repositions the reactive
nodes greedily, commits the connectivity ledger (disruption-tolerant
model), clears searched target points, checks for red-target detection,
and emits an immutable record.  A run ends on detection, on the cycle
budget, or once nothing has moved or cleared for three consecutive
cycles.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from typing import IO, Mapping, Optional

from . import FORMAT_VERSION
from .grid import Position, Topology, distance
from .netmodel import ConnectivityLedger, PairKey, commit_cycle, conformance_map
from .optimizer import DTN, GreedyTrace, UtilityEvaluator, greedy_reposition
from .resistance import WeightedCommGraph, graph_resistance
from .scenario import NodeSpec, RedTargetSpec, Scenario
from .sensing import TargetPoint, update_cleared

OUTCOME_DETECTED = "detected"
OUTCOME_EXHAUSTED = "exhausted"
OUTCOME_CONVERGED = "converged"

CONVERGENCE_WINDOW = 3


@dataclass(frozen=True)
class DetectionEvent:
    node_id: str
    cycle: int


@dataclass(frozen=True)
class CycleRecord:
    """Committed state of one control cycle; append-only once emitted."""

    cycle: int
    positions: Mapping[str, Position]
    f_s: float
    f_c: float
    joint: float
    newly_cleared: tuple[str, ...]
    detection: Optional[DetectionEvent]
    trace: GreedyTrace
    resistance: Optional[float] = None
    conformance: Optional[Mapping[PairKey, bool]] = None
    streaks: Optional[Mapping[PairKey, int]] = None


@dataclass(frozen=True)
class RunResult:
    records: tuple[CycleRecord, ...]
    outcome: str
    detection: Optional[DetectionEvent]
    wall_time_s: float

    @property
    def cycles(self) -> int:
        return len(self.records)


def scripted_position(node: NodeSpec, cycle: int) -> Position:
    """Preset node position at a 1-based cycle; the last waypoint holds."""
    if not node.waypoints:
        return node.position
    index = min(cycle, len(node.waypoints)) - 1
    return node.waypoints[index]


def detect(topology: Topology, red_target: RedTargetSpec, detection_radius: float) -> Optional[str]:
    """Lowest-id node within the detection radius of the red target."""
    for node_id in sorted(topology.node_ids):
        if distance(topology.positions[node_id], red_target.position) <= detection_radius:
            return node_id
    return None


def build_evaluator(
    scenario: Scenario,
    targets: tuple[TargetPoint, ...],
    ledger: Optional[ConnectivityLedger],
) -> UtilityEvaluator:
    """Evaluator for one cycle of a scenario run.

    Preset nodes relay communications but contribute no sensing.
    """
    return UtilityEvaluator(
        grid=scenario.grid,
        params=scenario.params,
        weights=scenario.weights,
        targets=targets,
        comm_model=scenario.comm_model,
        net=scenario.net,
        ledger=ledger,
        node_teams=scenario.node_teams(),
        team_policy=scenario.team_policy,
        sensing_ids=scenario.reactive_ids(),
        normalize_sensing=scenario.normalize_sensing,
    )


def run(scenario: Scenario) -> RunResult:
    """Execute a scenario to completion."""
    start = time.perf_counter()
    topology = scenario.initial_topology()
    targets = scenario.targets
    reactive = scenario.reactive_ids()
    detection_radius = (
        scenario.red_target.detection_radius
        if scenario.red_target.detection_radius is not None
        else scenario.params.s_max
    )
    ledger = ConnectivityLedger.initial(scenario.node_ids()) if scenario.comm_model == DTN else None

    records: list[CycleRecord] = []
    detection: Optional[DetectionEvent] = None
    outcome = OUTCOME_EXHAUSTED
    stationary_cycles = 0

    for cycle in range(1, scenario.max_cycles + 1):
        before = topology
        for node in scenario.nodes:
            if node.role == "preset":
                topology = topology.moved(node.id, scripted_position(node, cycle))

        evaluator = build_evaluator(scenario, targets, ledger)
        topology, trace = greedy_reposition(reactive, topology, evaluator)
        # Recorded utilities describe the committed topology itself, so a
        # replay through the utility functions reproduces them exactly.
        # (The greedy's own comm scores are batch-normalized in the legacy
        # model and not reconstructible from positions alone.)
        f_s = evaluator.sensing_aggregate(topology)
        f_c = evaluator.comm_utility(topology)
        joint = scenario.weights.alpha_s * f_s + scenario.weights.alpha_c * f_c
        resistance = None
        if scenario.comm_model != DTN:
            resistance = graph_resistance(WeightedCommGraph.from_topology(topology, scenario.params))

        conformance: Optional[dict[PairKey, bool]] = None
        streaks: Optional[dict[PairKey, int]] = None
        if scenario.comm_model == DTN:
            conformance = conformance_map(topology, scenario.params, ledger, scenario.net)
            ledger = commit_cycle(topology, scenario.params, ledger, scenario.net)
            streaks = dict(ledger.streaks)

        updated = tuple(update_cleared(targets, topology, scenario.params))
        newly_cleared = tuple(
            new.id for new, old in zip(updated, targets) if new.cleared and not old.cleared
        )
        targets = updated

        detected_by = detect(topology, scenario.red_target, detection_radius)
        if detected_by is not None:
            detection = DetectionEvent(node_id=detected_by, cycle=cycle)

        records.append(
            CycleRecord(
                cycle=cycle,
                positions=dict(topology.positions),
                f_s=f_s,
                f_c=f_c,
                joint=joint,
                newly_cleared=newly_cleared,
                detection=detection,
                trace=trace,
                resistance=resistance,
                conformance=conformance,
                streaks=streaks,
            )
        )

        if detection is not None:
            outcome = OUTCOME_DETECTED
            break
        moved = any(before.positions[n] != topology.positions[n] for n in topology.node_ids)
        if moved or newly_cleared:
            stationary_cycles = 0
        else:
            stationary_cycles += 1
            if stationary_cycles >= CONVERGENCE_WINDOW:
                outcome = OUTCOME_CONVERGED
                break

    return RunResult(
        records=tuple(records),
        outcome=outcome,
        detection=detection,
        wall_time_s=time.perf_counter() - start,
    )


def _pair_label(key: PairKey) -> str:
    return f"{key[0]}|{key[1]}"


def _json_resistance(value: Optional[float]) -> Optional[float | str]:
    # Strict JSON has no Infinity literal; disconnected scores get a tag.
    if value is None:
        return None
    return value if math.isfinite(value) else "infinite"


def record_to_dict(record: CycleRecord) -> dict:
    return {
        "type": "cycle",
        "format_version": FORMAT_VERSION,
        "cycle": record.cycle,
        "positions": {n: p.as_list() for n, p in record.positions.items()},
        "f_s": record.f_s,
        "f_c": record.f_c,
        "joint": record.joint,
        "resistance": _json_resistance(record.resistance),
        "conformance": (
            None
            if record.conformance is None
            else {_pair_label(k): v for k, v in record.conformance.items()}
        ),
        "streaks": (
            None
            if record.streaks is None
            else {_pair_label(k): v for k, v in record.streaks.items()}
        ),
        "newly_cleared": list(record.newly_cleared),
        "detection": (
            None
            if record.detection is None
            else {"node_id": record.detection.node_id, "cycle": record.detection.cycle}
        ),
        "trace": [
            {
                "node_id": step.node_id,
                "position": step.position.as_list(),
                "gain": step.gain,
                "sensing": step.sensing,
                "comm": step.comm,
                "joint": step.joint,
                "candidate_count": step.candidate_count,
                "resistance": _json_resistance(step.resistance),
            }
            for step in record.trace.steps
        ],
    }


def summary_to_dict(result: RunResult) -> dict:
    # Wall time deliberately excluded: record streams must be byte-stable.
    final_positions = result.records[-1].positions if result.records else {}
    return {
        "type": "summary",
        "format_version": FORMAT_VERSION,
        "outcome": result.outcome,
        "detection": (
            None
            if result.detection is None
            else {"node_id": result.detection.node_id, "cycle": result.detection.cycle}
        ),
        "cycles": result.cycles,
        "final_positions": {n: p.as_list() for n, p in final_positions.items()},
    }


def canonical_json(obj: object) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def result_to_lines(result: RunResult) -> list[str]:
    """NDJSON lines: one per cycle record, then the run summary."""
    lines = [canonical_json(record_to_dict(r)) for r in result.records]
    lines.append(canonical_json(summary_to_dict(result)))
    return lines


def write_ndjson(result: RunResult, handle: IO[str]) -> None:
    for line in result_to_lines(result):
        handle.write(line + "\n")
