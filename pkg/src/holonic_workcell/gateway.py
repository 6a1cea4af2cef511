"""The boundary humans and scripts drive the workcell through.

A scenario file is line-oriented: ``AT <ms> <directive> <args...>`` with
non-decreasing times.  Directives mirror the human actions of the panels:
placing an order, starting/stopping production, pressing a worker's
task-done button, reordering a product holon's pending queue.  Running a
scenario bootstraps the fixed eight-agent roster, injects each directive at
its virtual time and runs the platform to idle; the exported trace is byte
stable for identical scenarios.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .conformance import check_all
from .holons import (
    PRODUCT_CONFIGS,
    CustomerHolon,
    InvalidAmount,
    OrderHolon,
    ProductHolon,
    RobotHolon,
    TaskDoneRejected,
    WorkerHolon,
)
from .ontology import build_case_study_ontology
from .runtime import ClockMode, Platform
from .trace import EventTrace


class ScriptError(Exception):
    def __init__(self, line_no: int, reason: str) -> None:
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class IoFailure(Exception):
    pass


# the fixed case-study roster
CUSTOMERS = ("customer-1", "customer-2")
WORKER_STATIONS = {"worker-1": "ws-1", "worker-2": "ws-2"}
ORDERS_AGENT = "orders"
ROBOT = "robot"


@dataclass(frozen=True)
class SubmitOrder:
    customer: str
    kind: str
    color: str
    power: int
    amount: int


@dataclass(frozen=True)
class StartProduction:
    pass


@dataclass(frozen=True)
class StopProduction:
    pass


@dataclass(frozen=True)
class TaskDone:
    worker: str


@dataclass(frozen=True)
class ReorderQueue:
    product: str
    permutation: tuple[int, ...]


Directive = SubmitOrder | StartProduction | StopProduction | TaskDone | ReorderQueue


@dataclass(frozen=True)
class TimedDirective:
    at_ms: int
    directive: Directive


@dataclass
class ScenarioScript:
    directives: list[TimedDirective] = field(default_factory=list)


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ScriptError(line_no, f"{what} must be an integer, got {token!r}") from None


def parse_scenario(text: str) -> ScenarioScript:
    """Parse and validate a scenario; any defect raises :class:`ScriptError`."""
    script = ScenarioScript()
    last_at = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] != "AT" or len(fields) < 3:
            raise ScriptError(line_no, "expected 'AT <ms> <directive> ...'")
        at_ms = _parse_int(fields[1], line_no, "time")
        if at_ms < 0:
            raise ScriptError(line_no, "time must be non-negative")
        if at_ms < last_at:
            raise ScriptError(line_no, f"times must be non-decreasing ({at_ms} < {last_at})")
        last_at = at_ms
        name, args = fields[2], fields[3:]
        directive = _parse_directive(name, args, line_no)
        script.directives.append(TimedDirective(at_ms, directive))
    return script


def _parse_directive(name: str, args: list[str], line_no: int) -> Directive:
    if name == "submit_order":
        if len(args) != 5:
            raise ScriptError(line_no, "submit_order takes customer kind color power amount")
        customer, kind, color = args[0], args[1], args[2]
        if customer not in CUSTOMERS:
            raise ScriptError(line_no, f"unknown customer {customer!r}")
        if kind not in PRODUCT_CONFIGS:
            raise ScriptError(line_no, f"unknown product kind {kind!r}")
        power = _parse_int(args[3], line_no, "power")
        amount = _parse_int(args[4], line_no, "amount")
        if amount < 1:
            raise ScriptError(line_no, "amount must be at least 1")
        return SubmitOrder(customer, kind, color, power, amount)
    if name == "start_production":
        if args:
            raise ScriptError(line_no, "start_production takes no arguments")
        return StartProduction()
    if name == "stop_production":
        if args:
            raise ScriptError(line_no, "stop_production takes no arguments")
        return StopProduction()
    if name == "task_done":
        if len(args) != 1:
            raise ScriptError(line_no, "task_done takes a worker name")
        if args[0] not in WORKER_STATIONS:
            raise ScriptError(line_no, f"unknown worker {args[0]!r}")
        return TaskDone(args[0])
    if name == "reorder_product_queue":
        if len(args) < 2:
            raise ScriptError(line_no, "reorder_product_queue takes product and a permutation")
        if args[0] not in PRODUCT_CONFIGS:
            raise ScriptError(line_no, f"unknown product {args[0]!r}")
        permutation = tuple(_parse_int(a, line_no, "permutation entry") for a in args[1:])
        return ReorderQueue(args[0], permutation)
    raise ScriptError(line_no, f"unknown directive {name!r}")


def load_scenario(path: str) -> ScenarioScript:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def reference_scenario() -> ScenarioScript:
    """The canonical two-order assembly run the golden trace freezes."""
    data = resources.files("holonic_workcell.data").joinpath("reference.scenario")
    return parse_scenario(data.read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# the bootstrapped cell


@dataclass
class WorkcellSnapshot:
    """One consistent view of the whole cell, for panels and tests."""

    now: int
    production_running: bool
    workers: dict[str, dict[str, Any]]
    robot: dict[str, Any]
    order_queue: list[dict[str, Any]]
    in_flight: dict[str, dict[str, Any]]
    completed: list[str]
    product_pending: dict[str, list[str]]
    orders: list[dict[str, Any]]

    def to_dict(self) -> dict[str, Any]:
        return {
            "now": self.now,
            "production_running": self.production_running,
            "workers": self.workers,
            "robot": self.robot,
            "order_queue": self.order_queue,
            "in_flight": self.in_flight,
            "completed": self.completed,
            "product_pending": self.product_pending,
            "orders": self.orders,
        }


class Workcell:
    """The eight-agent roster wired to one platform, plus directive plumbing."""

    def __init__(
        self,
        rediscover_every_ms: int | None = None,
        propagate_delay_ms: int = 0,
    ) -> None:
        self.platform = Platform()
        self.registry = build_case_study_ontology()
        self.customers = {
            name: CustomerHolon(self.platform, name, self.registry) for name in CUSTOMERS
        }
        self.products = {
            kind: ProductHolon(
                self.platform, self.registry, config, propagate_delay_ms=propagate_delay_ms
            )
            for kind, config in PRODUCT_CONFIGS.items()
        }
        for product in self.products.values():
            product.df_announce()
        self.orders = OrderHolon(
            self.platform,
            self.registry,
            WORKER_STATIONS,
            name=ORDERS_AGENT,
            rediscover_every_ms=rediscover_every_ms,
        )
        self.workers = {
            name: WorkerHolon(self.platform, name, self.registry, station)
            for name, station in WORKER_STATIONS.items()
        }
        self.robot = RobotHolon(self.platform, ROBOT, self.registry)
        self.rejections: list[dict[str, Any]] = []

    # -- directives -----------------------------------------------------------

    def apply(self, directive: Directive) -> Any:
        """Execute one human action now; raises the holon's rejection errors."""
        if isinstance(directive, SubmitOrder):
            return self.customers[directive.customer].submit_order(
                directive.kind, directive.color, directive.power, directive.amount
            )
        if isinstance(directive, StartProduction):
            return self.orders.start_production()
        if isinstance(directive, StopProduction):
            return self.orders.stop_production()
        if isinstance(directive, TaskDone):
            return self.workers[directive.worker].task_done()
        if isinstance(directive, ReorderQueue):
            return self.products[directive.product].reorder_pending(list(directive.permutation))
        raise TypeError(f"not a directive: {directive!r}")

    def _apply_logging_rejections(self, timed: TimedDirective) -> None:
        try:
            self.apply(timed.directive)
        except (TaskDoneRejected, InvalidAmount, ValueError) as error:
            self.rejections.append(
                {"at": self.platform.clock.now, "directive": timed.directive, "error": str(error)}
            )

    def inject_script(self, script: ScenarioScript) -> None:
        for timed in script.directives:
            self.platform.inject_at(
                timed.at_ms, lambda timed=timed: self._apply_logging_rejections(timed)
            )

    def run_script(self, script: ScenarioScript, horizon_ms: int | None = None) -> EventTrace:
        self.inject_script(script)
        return self.platform.run_until_idle(horizon_ms=horizon_ms)

    # -- views ----------------------------------------------------------------

    def snapshot(self) -> WorkcellSnapshot:
        now = self.platform.clock.now
        workers = {
            name: {
                "status": worker.status.value,
                "workstation": worker.workstation,
                "task": worker.task.order_id if worker.task else None,
                "all_units_delivered": worker.all_units_delivered,
            }
            for name, worker in self.workers.items()
        }
        current = self.robot.current
        robot = {
            "status": self.robot.status.value,
            "current_job": None
            if current is None
            else {
                "order_id": current.order_id,
                "worker": current.worker,
                "amount": current.amount,
                "remaining_ms": max(0, (current.deadline or now) - now),
            },
            "queued_jobs": [job.order_id for job in self.robot.jobs],
        }
        state = self.orders.state
        order_queue = [
            {"order_id": q.order_id, "kind": q.kind, "amount": q.amount}
            for q in state.queue
        ]
        in_flight = {
            order_id: {
                "worker": flight.worker,
                "robot_done": flight.robot_done,
                "worker_done": flight.worker_done,
            }
            for order_id, flight in state.in_flight.items()
        }
        product_pending = {
            name: [order.order_id for order in product.pending]
            for name, product in self.products.items()
        }
        return WorkcellSnapshot(
            now=now,
            production_running=state.production_running,
            workers=workers,
            robot=robot,
            order_queue=order_queue,
            in_flight=in_flight,
            completed=list(state.completed),
            product_pending=product_pending,
            orders=self._order_listing(),
        )

    def _order_listing(self) -> list[dict[str, Any]]:
        state = self.orders.state
        queued = {q.order_id for q in state.queue}
        listing = []
        for product in self.products.values():
            for order_id, record in product.records.items():
                if order_id in state.completed:
                    status = "completed"
                elif order_id in state.in_flight:
                    status = "dispatched"
                elif order_id in queued:
                    status = "queued"
                else:
                    status = str(record["status"])
                flight = state.in_flight.get(order_id)
                order = record["order"]
                listing.append(
                    {
                        "order_id": order_id,
                        "product": order.product_kind,
                        "customer": record["customer"],
                        "amount": order.amount,
                        "status": status,
                        "worker": flight.worker if flight else None,
                    }
                )
        return listing

    def conformance_problems(self) -> list[str]:
        return check_all(
            self.platform.trace, list(self.workers), ROBOT, ORDERS_AGENT
        )

    def holon_incidents(self) -> dict[str, list[str]]:
        holons = [*self.customers.values(), *self.products.values(), self.orders,
                  *self.workers.values(), self.robot]
        return {h.name: list(h.log) for h in holons if h.log}


def run_scenario(script: ScenarioScript) -> EventTrace:
    """Bootstrap a fresh cell, run the script to idle, return the trace."""
    return Workcell().run_script(script)


def export_trace(trace: EventTrace, path: str) -> None:
    """Write the line-oriented trace file (stable bytes for equal runs)."""
    try:
        Path(path).write_text(trace.render(), encoding="utf-8")
    except OSError as error:
        raise IoFailure(str(error)) from error


def use_scaled_clock(workcell: Workcell, scale: float) -> None:
    workcell.platform.clock.mode = ClockMode.SCALED_WALL_CLOCK
    workcell.platform.clock.scale = scale
