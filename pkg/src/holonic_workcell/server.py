"""Service API over a live workcell: REST directives, snapshots, trace export
and a server-sent event stream at /events.

Two runner flavours share the endpoints.  The live runner paces a scaled
wall clock on a background thread and accepts directives at arrival time;
the deterministic runner executes each directive at an explicit (or current)
virtual time and runs the platform to idle in-request, so a directive
sequence posted over HTTP reproduces the CLI trace byte for byte.

Handlers never touch holon state: they enqueue directives and read published
snapshots.  Event payloads are self-describing JSON objects mirroring the
trace records; every stream starts with a full snapshot for resync.
"""

from __future__ import annotations

import json
import queue
import threading
from typing import Any

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse, StreamingResponse
from pydantic import BaseModel, Field

from .acl import AclMessage
from .gateway import (
    CUSTOMERS,
    Directive,
    ReorderQueue,
    StartProduction,
    StopProduction,
    SubmitOrder,
    TaskDone,
    WORKER_STATIONS,
    Workcell,
    use_scaled_clock,
)
from .holons import InvalidAmount, TaskDoneRejected
from .trace import MessageRecord, Record, TransitionRecord


class BindFailure(Exception):
    pass


def record_payload(record: Record) -> dict[str, Any]:
    if isinstance(record, MessageRecord):
        m: AclMessage = record.message
        return {
            "type": "message",
            "ts": record.ts,
            "performative": m.performative.value,
            "sender": m.sender.name,
            "receivers": [r.name for r in m.receivers],
            "conversation_id": m.conversation_id,
            "reply_with": m.reply_with,
            "in_reply_to": m.in_reply_to,
            "content": m.content,
        }
    assert isinstance(record, TransitionRecord)
    return {
        "type": "transition",
        "ts": record.ts,
        "agent": record.agent,
        "old": record.old,
        "new": record.new,
    }


class _Broadcast:
    """Fan-out of event payloads to any number of stream subscribers."""

    def __init__(self) -> None:
        self._subscribers: list[queue.Queue] = []
        self._lock = threading.Lock()

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        with self._lock:
            self._subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue) -> None:
        with self._lock:
            if q in self._subscribers:
                self._subscribers.remove(q)

    def publish(self, payload: dict[str, Any]) -> None:
        with self._lock:
            targets = list(self._subscribers)
        for q in targets:
            q.put(payload)


class DeterministicRunner:
    """Runs each directive at an explicit virtual time.

    A directive executes eagerly at its instant (so the HTTP response is
    synchronous and rejections surface as status codes), while message
    processing for that instant is deferred until the next later directive
    or read.  That reproduces the platform rule "all directives at an
    instant before any processing": posting a timed directive sequence
    yields the same trace bytes as running it as a scenario file.  Reads
    (snapshot, trace, orders) first run the platform to idle.
    """

    def __init__(self, workcell: Workcell | None = None) -> None:
        self.workcell = workcell or Workcell()
        self.broadcast = _Broadcast()
        self._lock = threading.Lock()
        self._published = 0

    def submit(self, directive: Directive, at: int | None = None) -> Any:
        with self._lock:
            platform = self.workcell.platform
            when = platform.clock.now if at is None else max(at, platform.clock.now)
            try:
                if when > platform.clock.now:
                    # catch up on everything strictly before the directive's
                    # instant; times are integral milliseconds
                    platform.run_until_idle(horizon_ms=when - 1)
                    platform.clock.advance_to(when)
                return self.workcell.apply(directive)
            finally:
                self._publish_new()

    def _flush(self) -> None:
        self.workcell.platform.run_until_idle()
        self._publish_new()

    def snapshot(self) -> dict[str, Any]:
        with self._lock:
            self._flush()
            return self.workcell.snapshot().to_dict()

    def trace_text(self) -> str:
        with self._lock:
            self._flush()
            return self.workcell.platform.trace.render()

    def _publish_new(self) -> None:
        records = self.workcell.platform.trace.records
        for record in records[self._published :]:
            self.broadcast.publish(record_payload(record))
        self._published = len(records)

    def start(self) -> None:
        pass

    def stop(self) -> None:
        pass


class LiveRunner:
    """Background-thread loop pacing a scaled wall clock."""

    def __init__(self, workcell: Workcell | None = None, scale: float = 1.0) -> None:
        self.workcell = workcell or Workcell()
        use_scaled_clock(self.workcell, scale)
        self.broadcast = _Broadcast()
        self._published = 0
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self._snapshot: dict[str, Any] = self.workcell.snapshot().to_dict()
        self._snapshot_lock = threading.Lock()

    def start(self) -> None:
        self._thread = threading.Thread(target=self._loop, name="workcell-loop", daemon=True)
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)

    def _loop(self) -> None:
        platform = self.workcell.platform
        while not self._stop.is_set():
            platform.step_live(max_wait_s=0.1)
            records = platform.trace.records
            if len(records) > self._published:
                for record in records[self._published :]:
                    self.broadcast.publish(record_payload(record))
                self._published = len(records)
            with self._snapshot_lock:
                self._snapshot = self.workcell.snapshot().to_dict()

    def submit(self, directive: Directive, at: int | None = None) -> Any:
        done = threading.Event()
        box: dict[str, Any] = {}

        def run() -> None:
            try:
                box["result"] = self.workcell.apply(directive)
            except Exception as error:  # delivered to the waiting handler
                box["error"] = error
            done.set()

        self.workcell.platform.post(run)
        if not done.wait(timeout=5.0):
            raise TimeoutError("the platform loop did not pick up the directive")
        if "error" in box:
            raise box["error"]
        return box["result"]

    def snapshot(self) -> dict[str, Any]:
        with self._snapshot_lock:
            return dict(self._snapshot)

    def trace_text(self) -> str:
        return self.workcell.platform.trace.render()


Runner = DeterministicRunner | LiveRunner


class OrderForm(BaseModel):
    customer: str
    kind: str
    color: str = "blue"
    power: int = 5
    amount: int = Field(ge=1)
    at: int | None = None  # deterministic mode only


class ReorderForm(BaseModel):
    permutation: list[int]
    at: int | None = None


class WhenForm(BaseModel):
    at: int | None = None


def create_app(runner: Runner) -> FastAPI:
    app = FastAPI(title="holonic workcell", version="0.1.0")
    app.state.runner = runner

    def submit(directive: Directive, at: int | None) -> Any:
        try:
            return runner.submit(directive, at=at)
        except TaskDoneRejected as error:
            raise HTTPException(status_code=409, detail=str(error)) from error
        except (InvalidAmount, ValueError) as error:
            raise HTTPException(status_code=400, detail=str(error)) from error

    @app.post("/orders", status_code=202)
    def post_order(form: OrderForm) -> dict[str, Any]:
        if form.customer not in CUSTOMERS:
            raise HTTPException(status_code=400, detail=f"unknown customer {form.customer}")
        directive = SubmitOrder(form.customer, form.kind, form.color, form.power, form.amount)
        try:
            conversation = submit(directive, form.at)
        except KeyError as error:
            raise HTTPException(status_code=400, detail=f"unknown product kind {form.kind}") from error
        return {"conversation_id": conversation}

    @app.get("/orders")
    def get_orders() -> list[dict[str, Any]]:
        return runner.snapshot()["orders"]

    @app.post("/production/start")
    def start_production(form: WhenForm | None = None) -> dict[str, str]:
        submit(StartProduction(), form.at if form else None)
        return {"status": "running"}

    @app.post("/production/stop")
    def stop_production(form: WhenForm | None = None) -> dict[str, str]:
        submit(StopProduction(), form.at if form else None)
        return {"status": "paused"}

    @app.post("/workers/{name}/task-done")
    def task_done(name: str, form: WhenForm | None = None) -> dict[str, str]:
        if name not in WORKER_STATIONS:
            raise HTTPException(status_code=404, detail=f"unknown worker {name}")
        submit(TaskDone(name), form.at if form else None)
        return {"status": "ok"}

    @app.post("/products/{name}/reorder")
    def reorder(name: str, form: ReorderForm) -> dict[str, str]:
        if name not in runner.workcell.products:
            raise HTTPException(status_code=404, detail=f"unknown product {name}")
        submit(ReorderQueue(name, tuple(form.permutation)), form.at)
        return {"status": "ok"}

    @app.get("/snapshot")
    def snapshot() -> dict[str, Any]:
        return runner.snapshot()

    @app.get("/trace")
    def trace() -> PlainTextResponse:
        return PlainTextResponse(runner.trace_text())

    @app.get("/events")
    def events() -> StreamingResponse:
        def stream():
            subscription = runner.broadcast.subscribe()
            try:
                resync = {"type": "snapshot", "snapshot": runner.snapshot()}
                yield f"data: {json.dumps(resync)}\n\n"
                while True:
                    try:
                        payload = subscription.get(timeout=15.0)
                        yield f"data: {json.dumps(payload)}\n\n"
                    except queue.Empty:
                        yield ": keep-alive\n\n"
            finally:
                runner.broadcast.unsubscribe(subscription)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app


def serve(
    bind: str = "127.0.0.1:8000",
    scale: float = 1.0,
    deterministic: bool = False,
    ui_dir: str | None = None,
) -> None:
    """Run the service until interrupted; raises :class:`BindFailure` when the
    address cannot be bound."""
    import uvicorn

    runner: Runner = DeterministicRunner() if deterministic else LiveRunner(scale=scale)
    app = create_app(runner)
    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    host, _, port_text = bind.partition(":")
    try:
        port = int(port_text) if port_text else 8000
    except ValueError:
        raise BindFailure(f"bad bind address {bind!r}") from None
    runner.start()
    try:
        uvicorn.run(app, host=host or "127.0.0.1", port=port, log_level="warning")
    except OSError as error:
        raise BindFailure(str(error)) from error
    finally:
        runner.stop()
