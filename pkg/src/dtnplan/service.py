"""Local HTTP service exposing scenarios and asynchronous runs.

Scenario files are read once at startup and never mutated; runs execute
on worker threads with isolated state and live in an in-memory registry
with least-recently-used eviction.  All payloads are JSON and carry a
format_version field.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from typing import Any, Optional

from fastapi import FastAPI, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse

from . import FORMAT_VERSION
from .engine import RunResult, record_to_dict, result_to_lines, summary_to_dict
from .engine import run as run_scenario
from .reference import packaged_scenario_dir
from .scenario import (
    Scenario,
    ScenarioError,
    apply_what_if,
    document_schema,
    parse_scenario,
    parse_what_if,
)

STATUS_PENDING = "pending"
STATUS_RUNNING = "running"
STATUS_DONE = "done"
STATUS_FAILED = "failed"

DEFAULT_MAX_RUNS = 32


@dataclass
class RunEntry:
    run_id: str
    label: Optional[str]
    scenario: Scenario
    status: str = STATUS_PENDING
    result: Optional[RunResult] = None
    error: Optional[str] = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class RunRegistry:
    """In-memory run store; all access goes through one lock."""

    def __init__(self, capacity: int = DEFAULT_MAX_RUNS):
        if capacity < 1:
            raise ValueError("registry capacity must be >= 1")
        self._capacity = capacity
        self._entries: OrderedDict[str, RunEntry] = OrderedDict()
        self._lock = threading.Lock()

    def insert(self, entry: RunEntry) -> None:
        with self._lock:
            if entry.run_id in self._entries:
                raise KeyError(entry.run_id)
            self._entries[entry.run_id] = entry
            while len(self._entries) > self._capacity:
                self._entries.popitem(last=False)

    def get(self, run_id: str) -> Optional[RunEntry]:
        with self._lock:
            entry = self._entries.get(run_id)
            if entry is not None:
                self._entries.move_to_end(run_id)
            return entry

    def delete(self, run_id: str) -> bool:
        with self._lock:
            return self._entries.pop(run_id, None) is not None


def _error_response(status_code: int, fieldname: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status_code,
        content={
            "format_version": FORMAT_VERSION,
            "error": {"field": fieldname, "message": message},
        },
    )


def _load_scenario_documents(scenario_dir: str) -> dict[str, dict]:
    documents: dict[str, dict] = {}
    for name in sorted(os.listdir(scenario_dir)):
        if not name.endswith(".json"):
            continue
        path = os.path.join(scenario_dir, name)
        with open(path, "r", encoding="utf-8") as handle:
            document = json.load(handle)
        parse_scenario(document)
        documents[name[: -len(".json")]] = document
    return documents


def _scenario_from_body(body: Any, documents: dict[str, dict]) -> tuple[Scenario, Optional[str]]:
    """Scenario plus label from a POST /runs body (inline or what-if)."""
    if not isinstance(body, dict):
        raise ScenarioError("body", "expected a JSON object")
    if "scenario" in body:
        extra = set(body) - {"scenario", "run_id", "label"}
        if extra:
            raise ScenarioError("body", f"unknown keys {sorted(extra)} beside an inline scenario")
        label = body.get("label")
        if label is not None and not isinstance(label, str):
            raise ScenarioError("body.label", "expected a string")
        return parse_scenario(body["scenario"]), label
    if "base" in body:
        extra = set(body) - {"base", "run_id", "label", "net_overrides", "weight_overrides", "team_overrides"}
        if extra:
            raise ScenarioError("body", f"unknown keys {sorted(extra)} beside a base reference")
        base_id = body["base"]
        if not isinstance(base_id, str) or base_id not in documents:
            raise ScenarioError("body.base", f"unknown base scenario {base_id!r}")
        request = parse_what_if(
            {key: body[key] for key in ("label", "net_overrides", "weight_overrides", "team_overrides") if key in body},
            path="body",
        )
        return apply_what_if(parse_scenario(documents[base_id]), request), request.label
    raise ScenarioError("body", "expected an inline 'scenario' or a 'base' reference")


def create_app(
    scenario_dir: Optional[str] = None,
    max_runs: int = DEFAULT_MAX_RUNS,
    max_workers: int = 4,
) -> FastAPI:
    """Application over one scenario directory (default: packaged set)."""
    directory = scenario_dir if scenario_dir is not None else packaged_scenario_dir()
    documents = _load_scenario_documents(directory)
    registry = RunRegistry(capacity=max_runs)
    executor = ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="dtnplan-run")

    @asynccontextmanager
    async def _lifespan(_: FastAPI):
        yield
        executor.shutdown(wait=False, cancel_futures=True)

    app = FastAPI(title="dtnplan service", version="0.1.0", lifespan=_lifespan)

    @app.exception_handler(RequestValidationError)
    async def _on_validation_error(request: Request, exc: RequestValidationError) -> JSONResponse:
        first = exc.errors()[0] if exc.errors() else {}
        location = ".".join(str(part) for part in first.get("loc", ())) or "request"
        return _error_response(400, location, str(first.get("msg", "invalid request")))

    def _execute(entry: RunEntry) -> None:
        with entry.lock:
            if entry.status != STATUS_PENDING:
                return
            entry.status = STATUS_RUNNING
        try:
            result = run_scenario(entry.scenario)
        except Exception as exc:  # noqa: BLE001 - reported via run status
            with entry.lock:
                entry.status = STATUS_FAILED
                entry.error = str(exc)
            return
        with entry.lock:
            entry.status = STATUS_DONE
            entry.result = result

    @app.get("/scenarios")
    def list_scenarios() -> dict:
        listing = []
        for scenario_id, document in sorted(documents.items()):
            listing.append(
                {
                    "id": scenario_id,
                    "comm_model": document["comm_model"],
                    "node_count": len(document["nodes"]),
                    "target_count": len(document["targets"]),
                    "max_cycles": document["max_cycles"],
                    "teamed": "team_policy" in document,
                }
            )
        return {"format_version": FORMAT_VERSION, "scenarios": listing, "schema": document_schema()}

    @app.get("/scenarios/{scenario_id}")
    def get_scenario(scenario_id: str) -> JSONResponse:
        document = documents.get(scenario_id)
        if document is None:
            return _error_response(404, "scenario_id", f"unknown scenario {scenario_id!r}")
        return JSONResponse(
            {"format_version": FORMAT_VERSION, "id": scenario_id, "document": document}
        )

    @app.post("/runs", status_code=202)
    async def post_run(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except json.JSONDecodeError as exc:
            return _error_response(400, "body", f"invalid JSON: {exc}")
        try:
            scenario, label = _scenario_from_body(body, documents)
        except ScenarioError as exc:
            return _error_response(400, exc.field, exc.message)
        run_id = body.get("run_id")
        if run_id is None:
            run_id = uuid.uuid4().hex
        elif not isinstance(run_id, str) or not run_id:
            return _error_response(400, "body.run_id", "expected a non-empty string")
        entry = RunEntry(run_id=run_id, label=label, scenario=scenario)
        try:
            registry.insert(entry)
        except KeyError:
            return _error_response(409, "body.run_id", f"run {run_id!r} already exists")
        # Snapshot before submitting: the worker may flip the status at
        # any moment once the task is queued.
        content = {"format_version": FORMAT_VERSION, "run_id": run_id, "status": entry.status}
        executor.submit(_execute, entry)
        return JSONResponse(status_code=202, content=content)

    @app.get("/runs/{run_id}")
    def get_run(run_id: str) -> JSONResponse:
        entry = registry.get(run_id)
        if entry is None:
            return _error_response(404, "run_id", f"unknown run {run_id!r}")
        with entry.lock:
            payload = {
                "format_version": FORMAT_VERSION,
                "run_id": entry.run_id,
                "label": entry.label,
                "status": entry.status,
                "summary": None if entry.result is None else summary_to_dict(entry.result),
                "error": entry.error,
            }
        return JSONResponse(payload)

    @app.get("/runs/{run_id}/cycles")
    def get_cycles(
        run_id: str,
        from_cycle: int = Query(default=1, alias="from", ge=1),
        to_cycle: Optional[int] = Query(default=None, alias="to", ge=1),
    ) -> JSONResponse:
        entry = registry.get(run_id)
        if entry is None:
            return _error_response(404, "run_id", f"unknown run {run_id!r}")
        with entry.lock:
            status, result = entry.status, entry.result
        if status != STATUS_DONE or result is None:
            return _error_response(409, "run_id", f"run {run_id!r} is {status}, records unavailable")
        total = len(result.records)
        last = total if to_cycle is None else min(to_cycle, total)
        records = [record_to_dict(r) for r in result.records if from_cycle <= r.cycle <= last]
        return JSONResponse(
            {
                "format_version": FORMAT_VERSION,
                "run_id": run_id,
                "from": from_cycle,
                "to": last,
                "total": total,
                "records": records,
            }
        )

    @app.get("/runs/{run_id}/export")
    def export_run(run_id: str) -> PlainTextResponse:
        entry = registry.get(run_id)
        if entry is None:
            return _error_response(404, "run_id", f"unknown run {run_id!r}")
        with entry.lock:
            status, result = entry.status, entry.result
        if status != STATUS_DONE or result is None:
            return _error_response(409, "run_id", f"run {run_id!r} is {status}, records unavailable")
        body = "\n".join(result_to_lines(result)) + "\n"
        return PlainTextResponse(body, media_type="application/x-ndjson")

    @app.delete("/runs/{run_id}")
    def delete_run(run_id: str) -> JSONResponse:
        if not registry.delete(run_id):
            return _error_response(404, "run_id", f"unknown run {run_id!r}")
        return JSONResponse({"format_version": FORMAT_VERSION, "run_id": run_id, "deleted": True})

    return app
