"""Scenario documents: parsing, validation, serialization, what-if overrides.

A scenario is a JSON object with top-level keys grid, nodes, params,
weights, comm_model, net, targets, red_target, max_cycles, team_policy.
Unknown keys are rejected at every level, and every diagnostic names the
offending field path.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Any, Mapping, Optional, Sequence

from .grid import CapabilityParams, GridSpec, Position, Topology, distance
from .netmodel import NetConfig, NetRequirement, pair_key
from .optimizer import COMM_MODELS, DTN, UtilityWeights
from .sensing import TargetPoint, TeamSensingPolicy

ROLES = ("preset", "reactive")


class ScenarioError(ValueError):
    """Validation failure tied to one field path."""

    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class ScenarioParseError(ScenarioError):
    """The document is not readable JSON at all (no schema to validate)."""


@dataclass(frozen=True)
class NodeSpec:
    id: str
    role: str
    position: Position
    team: Optional[str] = None
    waypoints: tuple[Position, ...] = ()


@dataclass(frozen=True)
class RedTargetSpec:
    position: Position
    detection_radius: Optional[float] = None


@dataclass(frozen=True)
class Scenario:
    grid: GridSpec
    nodes: tuple[NodeSpec, ...]
    params: CapabilityParams
    weights: UtilityWeights
    comm_model: str
    targets: tuple[TargetPoint, ...]
    red_target: RedTargetSpec
    max_cycles: int
    net: Optional[NetConfig] = None
    team_policy: Optional[TeamSensingPolicy] = None
    normalize_sensing: bool = True

    def node_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes)

    def reactive_ids(self) -> tuple[str, ...]:
        return tuple(n.id for n in self.nodes if n.role == "reactive")

    def node_teams(self) -> dict[str, Optional[str]]:
        return {n.id: n.team for n in self.nodes}

    def initial_topology(self) -> Topology:
        return Topology(
            node_ids=self.node_ids(),
            positions={n.id: n.position for n in self.nodes},
        )


def _check_keys(obj: Mapping[str, Any], path: str, required: Sequence[str], optional: Sequence[str] = ()) -> None:
    if not isinstance(obj, dict):
        raise ScenarioError(path, f"expected an object, got {type(obj).__name__}")
    allowed = set(required) | set(optional)
    for key in obj:
        if key not in allowed:
            raise ScenarioError(path, f"unknown key {key!r}")
    for key in required:
        if key not in obj:
            raise ScenarioError(path, f"missing required key {key!r}")


def _as_int(value: Any, path: str, minimum: Optional[int] = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ScenarioError(path, f"must be >= {minimum}, got {value}")
    return value


def _as_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(path, f"expected a number, got {value!r}")
    return float(value)


def _as_str(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise ScenarioError(path, f"expected a non-empty string, got {value!r}")
    return value


def _as_bool(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ScenarioError(path, f"expected a boolean, got {value!r}")
    return value


def _as_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ScenarioError(path, f"expected a list, got {type(value).__name__}")
    return value


def _as_position(value: Any, path: str) -> Position:
    items = _as_list(value, path)
    if len(items) != 2:
        raise ScenarioError(path, f"expected [x, y], got {value!r}")
    return Position(x=_as_int(items[0], f"{path}[0]"), y=_as_int(items[1], f"{path}[1]"))


def _wrap(path: str, fn, *args, **kwargs):
    # Re-raise constructor errors with the field path attached.
    try:
        return fn(*args, **kwargs)
    except ScenarioError:
        raise
    except ValueError as exc:
        raise ScenarioError(path, str(exc)) from exc


def _parse_grid(obj: Any) -> GridSpec:
    _check_keys(obj, "grid", ["width", "height"], ["step_meters", "metric", "obstacles"])
    obstacles = []
    for i, entry in enumerate(_as_list(obj.get("obstacles", []), "grid.obstacles")):
        obstacles.append(_as_position(entry, f"grid.obstacles[{i}]"))
    return _wrap(
        "grid",
        GridSpec,
        width=_as_int(obj["width"], "grid.width"),
        height=_as_int(obj["height"], "grid.height"),
        step_meters=_as_number(obj.get("step_meters", 500.0), "grid.step_meters"),
        metric=_as_str(obj.get("metric", "euclidean"), "grid.metric"),
        obstacles=frozenset(obstacles),
    )


def _parse_params(obj: Any) -> CapabilityParams:
    _check_keys(obj, "params", ["s_max", "c_max", "m_max"], ["s_suf", "tau", "clearing_radius"])
    clearing = obj.get("clearing_radius")
    return _wrap(
        "params",
        CapabilityParams,
        s_max=_as_number(obj["s_max"], "params.s_max"),
        s_suf=_as_number(obj.get("s_suf", 2), "params.s_suf"),
        c_max=_as_number(obj["c_max"], "params.c_max"),
        m_max=_as_number(obj["m_max"], "params.m_max"),
        tau=_as_number(obj.get("tau", 3.0), "params.tau"),
        clearing_radius=None if clearing is None else _as_number(clearing, "params.clearing_radius"),
    )


def _parse_weights(obj: Any) -> tuple[UtilityWeights, bool]:
    _check_keys(obj, "weights", ["alpha_s", "alpha_c"], ["normalize_sensing"])
    weights = _wrap(
        "weights",
        UtilityWeights,
        alpha_s=_as_number(obj["alpha_s"], "weights.alpha_s"),
        alpha_c=_as_number(obj["alpha_c"], "weights.alpha_c"),
    )
    normalize = _as_bool(obj.get("normalize_sensing", True), "weights.normalize_sensing")
    return weights, normalize


def _parse_node(obj: Any, index: int, grid: GridSpec, params: CapabilityParams) -> NodeSpec:
    path = f"nodes[{index}]"
    _check_keys(obj, path, ["id", "role", "position"], ["team", "waypoints"])
    node_id = _as_str(obj["id"], f"{path}.id")
    if "|" in node_id:
        # '|' is the pair-key separator in emitted records.
        raise ScenarioError(f"{path}.id", "node ids must not contain '|'")
    role = _as_str(obj["role"], f"{path}.role")
    if role not in ROLES:
        raise ScenarioError(f"{path}.role", f"expected one of {ROLES}, got {role!r}")
    position = _as_position(obj["position"], f"{path}.position")
    if not grid.navigable(position):
        raise ScenarioError(f"{path}.position", f"{position.as_list()} is not a navigable grid point")
    team = None
    if "team" in obj and obj["team"] is not None:
        team = _as_str(obj["team"], f"{path}.team")
    waypoints: list[Position] = []
    if "waypoints" in obj:
        if role != "preset":
            raise ScenarioError(f"{path}.waypoints", "waypoints only apply to preset nodes")
        previous = position
        for i, entry in enumerate(_as_list(obj["waypoints"], f"{path}.waypoints")):
            wp = _as_position(entry, f"{path}.waypoints[{i}]")
            if not grid.navigable(wp):
                raise ScenarioError(f"{path}.waypoints[{i}]", f"{wp.as_list()} is not a navigable grid point")
            step = distance(previous, wp, grid.metric)
            if step > params.m_max:
                raise ScenarioError(
                    f"{path}.waypoints[{i}]",
                    f"step of {step:.3f} from {previous.as_list()} exceeds m_max={params.m_max}",
                )
            waypoints.append(wp)
            previous = wp
    return NodeSpec(id=node_id, role=role, position=position, team=team, waypoints=tuple(waypoints))


def _parse_target(obj: Any, index: int, grid: GridSpec) -> TargetPoint:
    path = f"targets[{index}]"
    _check_keys(obj, path, ["id", "position"], ["weight", "team", "cleared"])
    position = _as_position(obj["position"], f"{path}.position")
    if not grid.in_bounds(position):
        raise ScenarioError(f"{path}.position", f"{position.as_list()} is out of bounds")
    team = None
    if "team" in obj and obj["team"] is not None:
        team = _as_str(obj["team"], f"{path}.team")
    return _wrap(
        path,
        TargetPoint,
        id=_as_str(obj["id"], f"{path}.id"),
        position=position,
        weight=_as_number(obj.get("weight", 1.0), f"{path}.weight"),
        team_tag=team,
        cleared=_as_bool(obj.get("cleared", False), f"{path}.cleared"),
    )


def _parse_net(obj: Any, node_ids: Sequence[str]) -> NetConfig:
    _check_keys(obj, "net", ["order", "matrix"])
    order = [_as_str(v, f"net.order[{i}]") for i, v in enumerate(_as_list(obj["order"], "net.order"))]
    if sorted(order) != sorted(node_ids) or len(set(order)) != len(order):
        raise ScenarioError("net.order", f"must be a permutation of the node ids {sorted(node_ids)}")
    matrix = _as_list(obj["matrix"], "net.matrix")
    n = len(order)
    if len(matrix) != n:
        raise ScenarioError("net.matrix", f"expected {n} rows, got {len(matrix)}")
    cells: dict[tuple[int, int], Optional[tuple[int, int]]] = {}
    for i, row in enumerate(matrix):
        row = _as_list(row, f"net.matrix[{i}]")
        if len(row) != n:
            raise ScenarioError(f"net.matrix[{i}]", f"expected {n} entries, got {len(row)}")
        for j, cell in enumerate(row):
            path = f"net.matrix[{i}][{j}]"
            if i == j:
                if cell is not None:
                    raise ScenarioError(path, "diagonal entries must be null")
                continue
            if cell is None:
                raise ScenarioError(path, f"missing requirement for pair ({order[i]}, {order[j]})")
            pair = _as_list(cell, path)
            if len(pair) != 2:
                raise ScenarioError(path, f"expected [c, h], got {cell!r}")
            cells[(i, j)] = (_as_int(pair[0], f"{path}[0]", 1), _as_int(pair[1], f"{path}[1]", 1))
    requirements = {}
    for i in range(n):
        for j in range(i + 1, n):
            if cells[(i, j)] != cells[(j, i)]:
                raise ScenarioError(
                    f"net.matrix[{i}][{j}]",
                    f"asymmetric requirement for pair ({order[i]}, {order[j]}): "
                    f"{list(cells[(i, j)])} vs {list(cells[(j, i)])}",
                )
            c, h = cells[(i, j)]
            requirements[pair_key(order[i], order[j])] = NetRequirement(max_silent_cycles=c, max_hops=h)
    return _wrap("net", NetConfig, node_ids, requirements)


def _parse_red_target(obj: Any, grid: GridSpec) -> RedTargetSpec:
    _check_keys(obj, "red_target", ["position"], ["detection_radius"])
    position = _as_position(obj["position"], "red_target.position")
    if not grid.in_bounds(position):
        raise ScenarioError("red_target.position", f"{position.as_list()} is out of bounds")
    radius = None
    if "detection_radius" in obj and obj["detection_radius"] is not None:
        radius = _as_number(obj["detection_radius"], "red_target.detection_radius")
        if radius <= 0:
            raise ScenarioError("red_target.detection_radius", f"must be positive, got {radius}")
    return RedTargetSpec(position=position, detection_radius=radius)


def _parse_team_policy(obj: Any) -> TeamSensingPolicy:
    _check_keys(obj, "team_policy", ["assigned_weight", "other_weight"])
    return _wrap(
        "team_policy",
        TeamSensingPolicy,
        assigned_weight=_as_number(obj["assigned_weight"], "team_policy.assigned_weight"),
        other_weight=_as_number(obj["other_weight"], "team_policy.other_weight"),
    )


def parse_scenario(document: Any) -> Scenario:
    """Build a validated Scenario from a parsed JSON document."""
    _check_keys(
        document,
        "scenario",
        ["grid", "nodes", "params", "weights", "comm_model", "targets", "red_target", "max_cycles"],
        ["net", "team_policy"],
    )
    grid = _parse_grid(document["grid"])
    params = _parse_params(document["params"])
    weights, normalize_sensing = _parse_weights(document["weights"])

    comm_model = _as_str(document["comm_model"], "comm_model")
    if comm_model not in COMM_MODELS:
        raise ScenarioError("comm_model", f"expected one of {COMM_MODELS}, got {comm_model!r}")

    node_objs = _as_list(document["nodes"], "nodes")
    if len(node_objs) < 2:
        raise ScenarioError("nodes", "at least two nodes are required")
    nodes = [_parse_node(obj, i, grid, params) for i, obj in enumerate(node_objs)]
    ids = [n.id for n in nodes]
    if len(set(ids)) != len(ids):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        raise ScenarioError("nodes", f"duplicate node ids: {dupes}")
    if not any(n.role == "reactive" for n in nodes):
        raise ScenarioError("nodes", "at least one reactive node is required")

    targets = [_parse_target(obj, i, grid) for i, obj in enumerate(_as_list(document["targets"], "targets"))]
    target_ids = [t.id for t in targets]
    if len(set(target_ids)) != len(target_ids):
        dupes = sorted({t for t in target_ids if target_ids.count(t) > 1})
        raise ScenarioError("targets", f"duplicate target ids: {dupes}")

    net = None
    if document.get("net") is not None:
        net = _parse_net(document["net"], ids)
    if comm_model == DTN and net is None:
        raise ScenarioError("net", "required when comm_model is 'dtn'")

    team_policy = None
    if document.get("team_policy") is not None:
        team_policy = _parse_team_policy(document["team_policy"])

    return Scenario(
        grid=grid,
        nodes=tuple(nodes),
        params=params,
        weights=weights,
        comm_model=comm_model,
        targets=tuple(targets),
        red_target=_parse_red_target(document["red_target"], grid),
        max_cycles=_as_int(document["max_cycles"], "max_cycles", 1),
        net=net,
        team_policy=team_policy,
        normalize_sensing=normalize_sensing,
    )


def load_scenario(path: str) -> Scenario:
    """Parse and validate a scenario file."""
    with open(path, "r", encoding="utf-8") as handle:
        try:
            document = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ScenarioParseError("scenario", f"invalid JSON: {exc}") from exc
    return parse_scenario(document)


def scenario_to_dict(scenario: Scenario) -> dict:
    """Serialize back to the document form; parse(serialize(s)) equals s."""
    doc: dict[str, Any] = {
        "grid": {
            "width": scenario.grid.width,
            "height": scenario.grid.height,
            "step_meters": scenario.grid.step_meters,
            "metric": scenario.grid.metric,
            "obstacles": sorted(p.as_list() for p in scenario.grid.obstacles),
        },
        "nodes": [
            {
                "id": n.id,
                "role": n.role,
                "position": n.position.as_list(),
                **({"team": n.team} if n.team is not None else {}),
                **({"waypoints": [w.as_list() for w in n.waypoints]} if n.waypoints else {}),
            }
            for n in scenario.nodes
        ],
        "params": {
            "s_max": scenario.params.s_max,
            "s_suf": scenario.params.s_suf,
            "c_max": scenario.params.c_max,
            "m_max": scenario.params.m_max,
            "tau": scenario.params.tau,
            **(
                {"clearing_radius": scenario.params.clearing_radius}
                if scenario.params.clearing_radius is not None
                else {}
            ),
        },
        "weights": {
            "alpha_s": scenario.weights.alpha_s,
            "alpha_c": scenario.weights.alpha_c,
            "normalize_sensing": scenario.normalize_sensing,
        },
        "comm_model": scenario.comm_model,
        "targets": [
            {
                "id": t.id,
                "position": t.position.as_list(),
                "weight": t.weight,
                **({"team": t.team_tag} if t.team_tag is not None else {}),
                **({"cleared": True} if t.cleared else {}),
            }
            for t in scenario.targets
        ],
        "red_target": {
            "position": scenario.red_target.position.as_list(),
            **(
                {"detection_radius": scenario.red_target.detection_radius}
                if scenario.red_target.detection_radius is not None
                else {}
            ),
        },
        "max_cycles": scenario.max_cycles,
    }
    if scenario.net is not None:
        order = list(scenario.node_ids())
        matrix: list[list[Optional[list[int]]]] = []
        for i, a in enumerate(order):
            row: list[Optional[list[int]]] = []
            for j, b in enumerate(order):
                if i == j:
                    row.append(None)
                else:
                    req = scenario.net.requirement(a, b)
                    row.append([req.max_silent_cycles, req.max_hops])
            matrix.append(row)
        doc["net"] = {"order": order, "matrix": matrix}
    if scenario.team_policy is not None:
        doc["team_policy"] = {
            "assigned_weight": scenario.team_policy.assigned_weight,
            "other_weight": scenario.team_policy.other_weight,
        }
    return doc


def document_schema() -> dict:
    """Shape of the scenario document, for interface listings."""
    return {
        "grid": {
            "required": True,
            "fields": {
                "width": "integer >= 2",
                "height": "integer >= 2",
                "step_meters": "positive number, metadata only",
                "metric": "euclidean | chebyshev | manhattan",
                "obstacles": "list of [x, y] blocked grid points",
            },
        },
        "nodes": {
            "required": True,
            "item": {
                "id": "unique string without '|'",
                "role": "preset | reactive",
                "position": "[x, y]",
                "team": "optional team name",
                "waypoints": "preset only, list of [x, y] steps within m_max",
            },
        },
        "params": {
            "required": True,
            "fields": {
                "s_max": "max sensing range",
                "s_suf": "full-value sensing range, < s_max",
                "c_max": "max communication range",
                "m_max": "max per-cycle movement",
                "tau": "link resistance decay constant",
                "clearing_radius": "optional search-clear range, defaults to s_suf",
            },
        },
        "weights": {
            "required": True,
            "fields": {
                "alpha_s": "sensing weight in [0, 1]",
                "alpha_c": "communications weight; alpha_s + alpha_c = 1",
                "normalize_sensing": "optional boolean, default true",
            },
        },
        "comm_model": {"required": True, "values": ["legacy", "dtn"]},
        "net": {
            "required": "when comm_model is dtn",
            "fields": {
                "order": "node id permutation",
                "matrix": "symmetric [c, h] entries, null diagonal",
            },
        },
        "targets": {
            "required": True,
            "item": {
                "id": "unique string",
                "position": "[x, y]",
                "weight": "sensing value, >= 0",
                "team": "optional tasked team",
                "cleared": "optional boolean",
            },
        },
        "red_target": {
            "required": True,
            "fields": {
                "position": "[x, y]",
                "detection_radius": "optional, defaults to s_max",
            },
        },
        "max_cycles": {"required": True, "value": "positive integer"},
        "team_policy": {
            "required": False,
            "fields": {
                "assigned_weight": "(0, 1]",
                "other_weight": "[0, 1), below assigned_weight",
            },
        },
    }


@dataclass(frozen=True)
class WhatIfRequest:
    """Labelled variation of a base scenario."""

    label: str
    net_overrides: tuple[tuple[str, str, int, int], ...] = ()
    weight_overrides: Optional[UtilityWeights] = None
    team_overrides: Optional[Mapping[str, Optional[str]]] = None


def parse_what_if(obj: Any, path: str = "variant") -> WhatIfRequest:
    _check_keys(obj, path, ["label"], ["net_overrides", "weight_overrides", "team_overrides"])
    label = _as_str(obj["label"], f"{path}.label")
    net_overrides = []
    for i, entry in enumerate(_as_list(obj.get("net_overrides", []), f"{path}.net_overrides")):
        epath = f"{path}.net_overrides[{i}]"
        _check_keys(entry, epath, ["a", "b", "c", "h"])
        net_overrides.append(
            (
                _as_str(entry["a"], f"{epath}.a"),
                _as_str(entry["b"], f"{epath}.b"),
                _as_int(entry["c"], f"{epath}.c", 1),
                _as_int(entry["h"], f"{epath}.h", 1),
            )
        )
    weight_overrides = None
    if obj.get("weight_overrides") is not None:
        weight_overrides, _ = _parse_weights({**obj["weight_overrides"]})
    team_overrides = None
    if obj.get("team_overrides") is not None:
        raw = obj["team_overrides"]
        if not isinstance(raw, dict):
            raise ScenarioError(f"{path}.team_overrides", "expected an object mapping node id to team")
        team_overrides = {}
        for node_id, team in raw.items():
            team_overrides[node_id] = None if team is None else _as_str(team, f"{path}.team_overrides.{node_id}")
    return WhatIfRequest(
        label=label,
        net_overrides=tuple(net_overrides),
        weight_overrides=weight_overrides,
        team_overrides=team_overrides,
    )


def apply_what_if(scenario: Scenario, request: WhatIfRequest) -> Scenario:
    """Merge a what-if request into a copy of the base scenario."""
    result = scenario
    if request.net_overrides:
        if scenario.net is None:
            raise ScenarioError("variant.net_overrides", "base scenario has no net config to override")
        requirements = dict(scenario.net.requirements)
        known = set(requirements)
        for a, b, c, h in request.net_overrides:
            try:
                key = pair_key(a, b)
            except ValueError as exc:
                raise ScenarioError("variant.net_overrides", str(exc)) from exc
            if key not in known:
                raise ScenarioError("variant.net_overrides", f"unknown node pair ({a}, {b})")
            requirements[key] = NetRequirement(max_silent_cycles=c, max_hops=h)
        net = _wrap("variant.net_overrides", NetConfig, scenario.node_ids(), requirements)
        result = replace(result, net=net)
    if request.weight_overrides is not None:
        result = replace(result, weights=request.weight_overrides)
    if request.team_overrides is not None:
        known_ids = set(scenario.node_ids())
        for node_id in request.team_overrides:
            if node_id not in known_ids:
                raise ScenarioError("variant.team_overrides", f"unknown node id {node_id!r}")
        nodes = tuple(
            replace(n, team=request.team_overrides.get(n.id, n.team)) for n in result.nodes
        )
        result = replace(result, nodes=nodes)
    return result
