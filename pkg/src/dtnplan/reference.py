"""Shipped reference scenarios: one maritime search layout, four configs.

The layout: a stationary high-value unit on the west edge, five UAVs
clustered nearby, a near search area to the south, a far search area in
the northeast with the red target in its deep corner, and sparse
low-weight scout points marking the sweep routes toward both areas.
The four shipped requirement matrices (strict, relaxed, loose,
team-split) produce the regression outcomes pinned by the acceptance
suite.
"""

from __future__ import annotations

import json
import os
from importlib import resources
from typing import Optional

from .scenario import Scenario, parse_scenario

REFERENCE_NAMES = ("net1", "net2", "net3", "netteam")

NODE_ORDER = ("HVU", "U1", "U2", "U3", "U4", "U5")

_HVU = [0, 10]
_UAV_START = {
    "U1": [2, 9],
    "U2": [2, 11],
    "U3": [4, 10],
    "U4": [5, 9],
    "U5": [5, 11],
}

# Restricted block: a no-entry zone in the north-west corner.  The
# reserve targets inside it stay on the tasking ledger but can never
# be approached or observed, which keeps the sensing normalization
# from collapsing once the open-water targets are swept.
_OBSTACLES = [(x, y) for x in range(0, 6) for y in range(14, 20)]
_RESERVE = [(x, y) for x in range(0, 2) for y in range(18, 20)]
_RESERVE_WEIGHT = 3.0

# Sweep routes: sparse low-weight points that give the searchers a
# sensing gradient along the intended paths.  Cleared in passing.
# The far route runs east along the top lane and then steps down the
# eastern column toward the far search area.
_FAR_ROUTE_WEIGHT = 0.35
_FAR_ROUTE = [
    (6, 13), (10, 13), (14, 13), (17, 12),
    (17, 9), (17, 6), (16, 3),
]
_NEAR_ROUTE_WEIGHT = 0.2
_NEAR_ROUTE = [(8, 14), (11, 15)]
# Faint station-keeping cue inside the restricted block: observable from
# the escort ring near the command ship, never clearable, too weak to
# divert anything already rolling toward real tasking.
_BEACON = (3, 16)
_BEACON_WEIGHT = 0.05

# Near search area: north-east block beside the top lane, the
# near-team tasking.
_NEAR_BELT = [(x, y) for x in range(15, 19) for y in range(15, 19)]
_NEAR_AREA = [(x, y) for x in range(17, 20) for y in range(17, 20)]
_NEAR_WEIGHT = 0.3
# Far search area: south-east block at the foot of the eastern
# column; the red target sits inside it.
_FAR_AREA = [(x, y) for x in range(13, 17) for y in range(0, 4)]
_FAR_WEIGHT = 0.15
_RED_POSITION = [15, 1]
_DETECTION_RADIUS = 3
_MAX_CYCLES = 12

_TEAM_OF_NODE = {"U1": "A", "U2": "A", "U3": "A", "U4": "B", "U5": "B"}
_FAR_TEAM = "A"
_NEAR_TEAM = "B"

# Pair requirements (c, h), keyed by unordered pair.  h=10 disables the
# hop limit at this scale; h=1 demands a direct link.
_NET_1 = {
    ("HVU", "U1"): (1, 1),
    ("HVU", "U2"): (2, 10),
    ("HVU", "U3"): (2, 10),
    ("HVU", "U4"): (3, 10),
    ("HVU", "U5"): (3, 10),
    ("U1", "U2"): (1, 1),
    ("U1", "U3"): (2, 10),
    ("U1", "U4"): (3, 10),
    ("U1", "U5"): (3, 10),
    ("U2", "U3"): (1, 1),
    ("U2", "U4"): (2, 10),
    ("U2", "U5"): (3, 10),
    ("U3", "U4"): (3, 10),
    ("U3", "U5"): (3, 10),
    ("U4", "U5"): (1, 1),
}

_NET_2 = {
    **_NET_1,
    ("U2", "U4"): (3, 10),
    ("HVU", "U5"): (4, 10),
    ("U1", "U5"): (4, 10),
    ("U2", "U5"): (4, 10),
    ("U3", "U5"): (4, 10),
}

_NET_3 = {
    ("HVU", "U1"): (1, 1),
    ("HVU", "U2"): (2, 10),
    ("U1", "U2"): (1, 1),
    ("HVU", "U3"): (3, 10),
    ("U1", "U3"): (3, 10),
    ("U2", "U3"): (3, 10),
    ("HVU", "U4"): (4, 10),
    ("U1", "U4"): (4, 10),
    ("U2", "U4"): (4, 10),
    ("U3", "U4"): (4, 10),
    ("HVU", "U5"): (5, 10),
    ("U1", "U5"): (5, 10),
    ("U2", "U5"): (5, 10),
    ("U3", "U5"): (5, 10),
    ("U4", "U5"): (5, 10),
}

_NET_TEAM = {
    ("HVU", "U1"): (2, 10),
    ("HVU", "U2"): (4, 10),
    ("HVU", "U3"): (6, 10),
    ("HVU", "U4"): (1, 1),
    ("HVU", "U5"): (6, 10),
    ("U1", "U2"): (2, 10),
    ("U1", "U3"): (6, 10),
    ("U2", "U3"): (4, 10),
    ("U4", "U5"): (4, 10),
    ("U1", "U4"): (10, 10),
    ("U1", "U5"): (10, 10),
    ("U2", "U4"): (10, 10),
    ("U2", "U5"): (10, 10),
    ("U3", "U4"): (10, 10),
    ("U3", "U5"): (10, 10),
}

_NETS = {"net1": _NET_1, "net2": _NET_2, "net3": _NET_3, "netteam": _NET_TEAM}


def _net_document(pairs: dict) -> dict:
    matrix: list[list[Optional[list[int]]]] = []
    for i, a in enumerate(NODE_ORDER):
        row: list[Optional[list[int]]] = []
        for j, b in enumerate(NODE_ORDER):
            if i == j:
                row.append(None)
            else:
                c, h = pairs[(a, b) if (a, b) in pairs else (b, a)]
                row.append([c, h])
        matrix.append(row)
    return {"order": list(NODE_ORDER), "matrix": matrix}


def _targets(teamed: bool) -> list[dict]:
    out = []

    def add(prefix: str, x: int, y: int, weight: float, team: str) -> None:
        entry = {"id": f"{prefix}-{x}-{y}", "position": [x, y], "weight": weight}
        if teamed:
            entry["team"] = team
        out.append(entry)

    for x, y in _NEAR_AREA:
        add("near", x, y, _NEAR_WEIGHT, _NEAR_TEAM)
    for x, y in _NEAR_BELT:
        add("belt", x, y, _NEAR_WEIGHT, _NEAR_TEAM)
    for x, y in _NEAR_ROUTE:
        add("nroute", x, y, _NEAR_ROUTE_WEIGHT, _NEAR_TEAM)
    for x, y in _FAR_AREA:
        add("far", x, y, _FAR_WEIGHT, _FAR_TEAM)
    for x, y in _FAR_ROUTE:
        add("froute", x, y, _FAR_ROUTE_WEIGHT, _FAR_TEAM)
    for x, y in _RESERVE:
        add("reserve", x, y, _RESERVE_WEIGHT, None)
    add("beacon", _BEACON[0], _BEACON[1], _BEACON_WEIGHT, _NEAR_TEAM)
    return out


def reference_document(name: str) -> dict:
    """Scenario document for one of the shipped reference configs."""
    if name not in REFERENCE_NAMES:
        raise ValueError(f"unknown reference scenario {name!r}; expected one of {REFERENCE_NAMES}")
    teamed = name == "netteam"
    nodes: list[dict] = [{"id": "HVU", "role": "preset", "position": list(_HVU)}]
    for uav, position in _UAV_START.items():
        entry = {"id": uav, "role": "reactive", "position": list(position)}
        if teamed:
            entry["team"] = _TEAM_OF_NODE[uav]
        nodes.append(entry)
    document = {
        "grid": {"width": 20, "height": 20, "step_meters": 500.0, "metric": "euclidean",
                 "obstacles": [list(p) for p in _OBSTACLES]},
        "nodes": nodes,
        "params": {"s_max": 4, "s_suf": 2, "c_max": 5, "m_max": 4, "tau": 3.0, "clearing_radius": 2.5},
        "weights": {"alpha_s": 0.6, "alpha_c": 0.4},
        # The strict profile keeps a permanent relay formation, which is
        # exactly what the resistance utility enforces; the relaxed
        # profiles trade connectivity for reach and need the ledger model.
        "comm_model": "legacy" if name == "net1" else "dtn",
        "net": _net_document(_NETS[name]),
        "targets": _targets(teamed),
        "red_target": {"position": list(_RED_POSITION), "detection_radius": _DETECTION_RADIUS},
        "max_cycles": _MAX_CYCLES,
    }
    if teamed:
        document["team_policy"] = {"assigned_weight": 0.9, "other_weight": 0.1}
    return document


def reference_scenario(name: str) -> Scenario:
    return parse_scenario(reference_document(name))


def packaged_scenario_dir() -> str:
    """Directory holding the scenario files shipped with the package."""
    return str(resources.files(__package__) / "scenarios")


def write_packaged_scenarios(directory: str) -> None:
    """Regenerate the packaged scenario files from the builders here."""
    for name in REFERENCE_NAMES:
        path = os.path.join(directory, f"{name}.json")
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(reference_document(name), handle, indent=2, sort_keys=True)
            handle.write("\n")
