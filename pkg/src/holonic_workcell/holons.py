"""The five holon kinds and the cooperative-assembly protocol between them.

Customer holons turn human order forms into AGREE messages; product holons
confirm, build manufacturing orders from their part catalogs and PROPAGATE
them; the orders holon queues, dispatches paired pick-and-place/assembly
REQUESTs, and tracks completion; the robot holon executes delivery jobs on
a strict two-seconds-per-unit timer; worker holons walk the
free -> reserve -> busy -> free ladder and raise done-signals.

Every action-bearing message (AGREE, PROPAGATE, REQUEST) is validated
against the cooperative-workcell ontology on receipt; a defective one gets
a NOT-UNDERSTOOD reply and changes no state.  Notification contents
(CONFIRM, INFORM family) are plain frames read positionally, since the
case-study registry contains exactly the domain schemas and no ack
vocabulary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

from . import sl
from .acl import Aid, AclMessage, CommunicativeAct
from .ontology import (
    CASE_STUDY_ONTOLOGY,
    OntologyRegistry,
    TypedAction,
    TypedFrame,
    Violation,
)
from .runtime import AgentContext, Behaviour, MessageFilter, Platform, TimerFired

_ACT = CommunicativeAct

PICK_AND_PLACE_MS_PER_UNIT = 2000

SERVICE_ORDER_MANAGEMENT = "order-management"
SERVICE_ASSEMBLY = "assembly"
SERVICE_PICK_AND_PLACE = "pick-and-place"


class InvalidAmount(Exception):
    pass


class TaskDoneRejected(Exception):
    pass


class WorkerStatus(Enum):
    FREE = "free"
    RESERVE = "reserve"
    BUSY = "busy"


class RobotStatus(Enum):
    FREE = "free"
    BUSY = "busy"


# legal status moves, used by holons and (independently) by trace checkers
WORKER_TRANSITIONS = {("free", "reserve"), ("reserve", "busy"), ("busy", "free")}
ROBOT_TRANSITIONS = {("free", "busy"), ("busy", "free")}


def pick_and_place_duration(amount: int) -> int:
    """Total delivery time in ms: units times two seconds."""
    if amount < 1:
        raise InvalidAmount(f"amount must be positive, got {amount}")
    return PICK_AND_PLACE_MS_PER_UNIT * amount


# ---------------------------------------------------------------------------
# product configuration and part catalogs


@dataclass(frozen=True)
class ProductConfig:
    kind: str
    concept: str
    order_concept: str
    customer_order_concept: str
    manufacturing_order_concept: str
    building_action: str
    manufacturing_action: str
    pick_and_place_action: str
    assembly_action: str
    color_part: str  # part whose color the customer customizes
    power_part: str  # part whose power the customer customizes


PUMP = ProductConfig(
    kind="pump",
    concept="Pump",
    order_concept="Pump-Order",
    customer_order_concept="Pump-Customer-Order",
    manufacturing_order_concept="Pump-Manufacturing-Order",
    building_action="Pump-Building-Operation",
    manufacturing_action="Pump-Manufacturing-Operation",
    pick_and_place_action="Pump-Pick-And-Place-Operation",
    assembly_action="Pump-Assembly-Operation",
    color_part="Casing",
    power_part="Electrical-Motor",
)

COMPRESSOR = ProductConfig(
    kind="compressor",
    concept="Compressor",
    order_concept="Compressor-Order",
    customer_order_concept="Compressor-Customer-Order",
    manufacturing_order_concept="Compressor-Manufacturing-Order",
    building_action="Compressor-Building-Operation",
    manufacturing_action="Compressor-Manufacturing-Operation",
    pick_and_place_action="Compressor-Pick-And-Place-Operation",
    assembly_action="Compressor-Assembly-Operation",
    color_part="Casing",
    power_part="Electrical-Motor",
)

PRODUCT_CONFIGS = {"pump": PUMP, "compressor": COMPRESSOR}

DEFAULT_OPERATIONS = {
    "pump": ["mount-casing", "mount-motor", "assemble-drive"],
    "compressor": ["mount-casing", "mount-motor", "align-rotors"],
}


@dataclass
class PartSpec:
    """One storage-workstation entry: part schema, fixed attributes, position."""

    schema: str
    attrs: dict[str, object]


def parse_catalog(text: str) -> list[PartSpec]:
    """Parse the part-catalog format: one part per line,
    ``Schema-Name attr=value ... position=cell``; ``#`` starts a comment.
    """
    parts: list[PartSpec] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        schema, pairs = fields[0], fields[1:]
        attrs: dict[str, object] = {}
        for pair in pairs:
            if "=" not in pair:
                raise ValueError(f"catalog line {line_no}: expected attr=value, got {pair!r}")
            key, value = pair.split("=", 1)
            attrs[key] = int(value) if value.lstrip("-").isdigit() else value
        if "position" not in attrs:
            raise ValueError(f"catalog line {line_no}: {schema} has no position cell")
        parts.append(PartSpec(schema, attrs))
    return parts


def load_catalog(path: str) -> list[PartSpec]:
    with open(path, encoding="utf-8") as handle:
        return parse_catalog(handle.read())


def default_catalog(kind: str) -> list[PartSpec]:
    data = resources.files("holonic_workcell.data").joinpath(f"{kind}_catalog.txt")
    return parse_catalog(data.read_text(encoding="utf-8"))


@dataclass
class ManufacturingOrder:
    """A product order joined with its operations list and identity."""

    order_id: str
    product_kind: str
    parts: TypedFrame  # the product concept frame, fully populated
    amount: int
    operations: TypedFrame  # Operations-List frame
    source_customer: Aid

    def __post_init__(self) -> None:
        if self.amount < 1:
            raise InvalidAmount(f"amount must be positive, got {self.amount}")

    def order_frame(self, config: ProductConfig) -> TypedFrame:
        """The product-order frame: the parts frame extended with the amount."""
        return TypedFrame(config.order_concept, dict(self.parts.values) | {"amount": self.amount})


# ---------------------------------------------------------------------------
# notification frames (positional, not part of the domain registry)


def note(frame_name: str, **slots: object) -> str:
    pairs = []
    for name, value in slots.items():
        node: sl.Node = sl.Int(value) if isinstance(value, int) else sl.Atom(str(value))
        pairs.append((name, node))
    return sl.print_content(sl.Frame(frame_name, tuple(pairs)))


def note_slot(content: str, slot: str) -> str | None:
    """Read one atom/int slot from a notification frame; None when absent."""
    try:
        tree = sl.parse_content(content)
    except sl.SlSyntaxError:
        return None
    if not isinstance(tree, sl.Frame):
        return None
    value = tree.slot(slot)
    if isinstance(value, sl.Atom):
        return value.symbol
    if isinstance(value, sl.Int):
        return str(value.value)
    return None


def _violation_reason(violations: list[Violation]) -> str:
    return violations[0].kind if violations else "invalid-content"


class _HolonBase:
    """Common wiring: registration, ontology handles, a local incident log."""

    def __init__(self, platform: Platform, name: str, registry: OntologyRegistry) -> None:
        self.platform = platform
        self.registry = registry
        self.aid = platform.register_agent(name, self._behaviours())
        self.ctx: AgentContext = platform.context(name)
        self.log: list[str] = []

    @property
    def name(self) -> str:
        return self.aid.name

    def _behaviours(self) -> list[Behaviour]:
        return []

    def _note_incident(self, text: str) -> None:
        self.log.append(f"t={self.platform.clock.now} {text}")

    def _reject(self, ctx: AgentContext, msg: AclMessage, reason: str) -> None:
        ctx.reply(msg, _ACT.NOT_UNDERSTOOD, note("Rejection", reason=reason))

    def _decode(self, ctx: AgentContext, msg: AclMessage) -> TypedAction | None:
        """Parse and ontology-check an action message; reject and return None
        when anything is wrong."""
        try:
            tree = sl.parse_content(msg.content)
        except sl.SlSyntaxError:
            self._reject(ctx, msg, "syntax-error")
            return None
        decoded = self.registry.decode_action(tree)
        if isinstance(decoded, list):
            self._reject(ctx, msg, _violation_reason(decoded))
            return None
        return decoded


# ---------------------------------------------------------------------------
# customer holon


class CustomerHolon(_HolonBase):
    """Places customized product orders on behalf of one human customer."""

    def __init__(self, platform: Platform, name: str, registry: OntologyRegistry) -> None:
        super().__init__(platform, name, registry)
        self.orders: dict[str, dict[str, object]] = {}  # conversation -> record
        self._order_seq = 0

    def _behaviours(self) -> list[Behaviour]:
        return [
            Behaviour(self._on_confirm, on_message=MessageFilter(performative=_ACT.CONFIRM)),
            Behaviour(self._on_rejected, on_message=MessageFilter(performative=_ACT.NOT_UNDERSTOOD)),
            Behaviour(self._on_rejected, on_message=MessageFilter(performative=_ACT.FAILURE)),
        ]

    def submit_order(self, kind: str, color: str, power: int, amount: int) -> str:
        """Send the AGREE with the matching building operation; returns the
        conversation id the CONFIRM will arrive on."""
        if amount < 1:
            raise InvalidAmount(f"amount must be positive, got {amount}")
        config = PRODUCT_CONFIGS[kind]
        targets = self.platform.df_search(f"build-{kind}")
        if not targets:
            raise LookupError(f"no product holon offers build-{kind}")
        self._order_seq += 1
        order_aid = f"{self.name}-order-{self._order_seq}"
        customer_order = TypedFrame(
            config.customer_order_concept,
            {"color": color, "power": power, "amount": amount, "aid": order_aid},
        )
        action = TypedAction(config.building_action, self.name, {"order": customer_order})
        conversation = self.ctx.new_conversation_id()
        self.ctx.send(
            _ACT.AGREE,
            [targets[0]],
            sl.print_content(self.registry.encode_frame(action)),
            conversation_id=conversation,
            ontology=self.registry.name,
        )
        self.orders[conversation] = {
            "kind": kind,
            "order_aid": order_aid,
            "amount": amount,
            "status": "sent",
        }
        return conversation

    def _on_confirm(self, ctx: AgentContext, msg: AclMessage) -> None:
        record = self.orders.get(msg.conversation_id)
        if record is None:
            self._note_incident(f"confirm on unknown conversation {msg.conversation_id}")
            return
        record["status"] = "confirmed"

    def _on_rejected(self, ctx: AgentContext, msg: AclMessage) -> None:
        record = self.orders.get(msg.conversation_id)
        if record is not None:
            record["status"] = "rejected"
        self._note_incident(f"{msg.performative.value} in {msg.conversation_id}: {msg.content}")


# ---------------------------------------------------------------------------
# product holon


class ProductHolon(_HolonBase):
    """Owns one product's production plan: builds manufacturing orders from
    customer orders and propagates them to the orders holon."""

    def __init__(
        self,
        platform: Platform,
        registry: OntologyRegistry,
        config: ProductConfig,
        catalog: list[PartSpec] | None = None,
        operations: list[str] | None = None,
        name: str | None = None,
        propagate_delay_ms: int = 0,
    ) -> None:
        self.config = config
        self.catalog = catalog if catalog is not None else default_catalog(config.kind)
        self.operations = list(
            operations if operations is not None else DEFAULT_OPERATIONS[config.kind]
        )
        if len(self.operations) > 3:
            raise ValueError("a product needs three operations or less")
        # the human rearrangement window between building and propagation
        self.propagate_delay_ms = propagate_delay_ms
        super().__init__(platform, name or config.kind, registry)
        self._catalog_by_schema = {p.schema: p for p in self.catalog}
        self._check_catalog_covers_parts()
        self.pending: list[ManufacturingOrder] = []  # built, not yet propagated
        self.records: dict[str, dict[str, object]] = {}  # order_id -> record
        self._order_seq = 0

    def _behaviours(self) -> list[Behaviour]:
        return [
            Behaviour(self._on_building, on_message=MessageFilter(performative=_ACT.AGREE)),
            Behaviour(self._on_confirm, on_message=MessageFilter(performative=_ACT.CONFIRM)),
            Behaviour(self._on_rejected, on_message=MessageFilter(performative=_ACT.NOT_UNDERSTOOD)),
            Behaviour(self._drain_pending, on_timer="propagate"),
        ]

    def _check_catalog_covers_parts(self) -> None:
        for spec in self.registry.effective_slots(self.config.concept):
            ref = getattr(spec.kind, "schema", None)
            if ref is not None and ref not in self._catalog_by_schema:
                raise ValueError(f"{self.name} catalog has no entry for part {ref}")

    def df_announce(self) -> None:
        self.platform.df_register(self.aid, f"build-{self.config.kind}")

    # -- building -------------------------------------------------------------

    def _on_building(self, ctx: AgentContext, msg: AclMessage) -> None:
        action = self._decode(ctx, msg)
        if action is None:
            return
        if action.name != self.config.building_action:
            self._reject(ctx, msg, "wrong-action")
            return
        customer_order = action.inputs["order"]
        amount = customer_order.values["amount"]
        if not isinstance(amount, int) or amount < 1:
            self._reject(ctx, msg, "invalid-amount")
            return
        ctx.reply(
            msg, _ACT.CONFIRM, note("Order-Received", order=customer_order.values["aid"])
        )
        order = self._build_order(customer_order, msg.sender)
        self.pending.append(order)
        self.records[order.order_id] = {
            "order": order,
            "customer": msg.sender.name,
            "status": "pending",
        }
        ctx.schedule_after(self.propagate_delay_ms, "propagate")

    def _build_order(self, customer_order: TypedFrame, customer: Aid) -> ManufacturingOrder:
        """Instantiate the product from the plan: catalog parts with storage
        positions, customized color and power, the customer's amount."""
        self._order_seq += 1
        order_id = f"{self.name}-order-{self._order_seq}"
        values: dict[str, object] = {}
        for spec in self.registry.effective_slots(self.config.concept):
            ref = getattr(spec.kind, "schema", None)
            if ref is None:
                continue
            attrs = dict(self._catalog_by_schema[ref].attrs)
            if ref == self.config.color_part:
                attrs["color"] = customer_order.values["color"]
            if ref == self.config.power_part:
                attrs["power"] = customer_order.values["power"]
            values[spec.name] = TypedFrame(ref, attrs)
        values["aid"] = order_id
        parts = TypedFrame(self.config.concept, values)
        operations = TypedFrame("Operations-List", {"operations": list(self.operations)})
        amount = customer_order.values["amount"]
        assert isinstance(amount, int)
        return ManufacturingOrder(
            order_id=order_id,
            product_kind=self.config.kind,
            parts=parts,
            amount=amount,
            operations=operations,
            source_customer=customer,
        )

    # -- propagation ------------------------------------------------------------

    def reorder_pending(self, permutation: list[int]) -> None:
        """Rearrange not-yet-propagated orders; permutation is 1-indexed."""
        if sorted(permutation) != list(range(1, len(self.pending) + 1)):
            raise ValueError(
                f"expected a permutation of 1..{len(self.pending)}, got {permutation}"
            )
        self.pending = [self.pending[i - 1] for i in permutation]

    def _drain_pending(self, ctx: AgentContext, event: TimerFired) -> None:
        while self.pending:
            self._propagate(ctx, self.pending.pop(0))

    def _propagate(self, ctx: AgentContext, order: ManufacturingOrder) -> None:
        targets = self.platform.df_search(SERVICE_ORDER_MANAGEMENT)
        if not targets:
            self._note_incident(f"no orders holon registered; {order.order_id} not propagated")
            self.records[order.order_id]["status"] = "stranded"
            return
        action = TypedAction(
            self.config.manufacturing_action,
            self.name,
            {"order": order.order_frame(self.config), "operations": order.operations},
        )
        conversation = f"{self.name}-cv-{order.order_id}"
        self.ctx.send(
            _ACT.PROPAGATE,
            [targets[0]],
            sl.print_content(self.registry.encode_frame(action)),
            conversation_id=conversation,
            ontology=self.registry.name,
        )
        self.records[order.order_id]["status"] = "propagated"
        self.records[order.order_id]["conversation"] = conversation

    def _on_confirm(self, ctx: AgentContext, msg: AclMessage) -> None:
        for record in self.records.values():
            if record.get("conversation") == msg.conversation_id:
                record["status"] = "accepted"
                return
        self._note_incident(f"confirm on unknown conversation {msg.conversation_id}")

    def _on_rejected(self, ctx: AgentContext, msg: AclMessage) -> None:
        for record in self.records.values():
            if record.get("conversation") == msg.conversation_id:
                record["status"] = "rejected"
        self._note_incident(f"not-understood in {msg.conversation_id}: {msg.content}")


# ---------------------------------------------------------------------------
# orders holon


@dataclass
class QueuedOrder:
    order_id: str
    kind: str
    order_frame: TypedFrame  # Pump-Order / Compressor-Order
    operations: TypedFrame
    amount: int
    product_holon: Aid
    conversation: str  # the propagate conversation it arrived on


@dataclass
class InFlightOrder:
    order: QueuedOrder
    worker: str
    robot_conversation: str
    worker_conversation: str
    robot_done: bool = False
    worker_done: bool = False
    robot_failed: bool = False


@dataclass
class DispatchState:
    queue: list[QueuedOrder] = field(default_factory=list)
    in_flight: dict[str, InFlightOrder] = field(default_factory=dict)
    completed: list[str] = field(default_factory=list)
    production_running: bool = False


class OrderHolon(_HolonBase):
    """Collects manufacturing orders from all product holons, discovers the
    operation resources, and dispatches work while production runs."""

    def __init__(
        self,
        platform: Platform,
        registry: OntologyRegistry,
        worker_stations: dict[str, str],
        name: str = "orders",
        rediscover_every_ms: int | None = None,
    ) -> None:
        super().__init__(platform, name, registry)
        platform.df_register(self.aid, SERVICE_ORDER_MANAGEMENT)
        self.worker_stations = dict(worker_stations)
        self.state = DispatchState()
        self.workers: list[str] = []
        self.assigned: dict[str, str | None] = {}
        self.robot: Aid | None = None
        self.rediscover_every_ms = rediscover_every_ms

    def _behaviours(self) -> list[Behaviour]:
        return [
            Behaviour(self._on_propagate, on_message=MessageFilter(performative=_ACT.PROPAGATE)),
            Behaviour(self._on_robot_done, on_message=MessageFilter(performative=_ACT.INFORM_IF)),
            Behaviour(self._on_worker_done, on_message=MessageFilter(performative=_ACT.INFORM)),
            Behaviour(self._on_failure, on_message=MessageFilter(performative=_ACT.FAILURE)),
            Behaviour(self._on_confirm, on_message=MessageFilter(performative=_ACT.CONFIRM)),
            Behaviour(self._on_rejected, on_message=MessageFilter(performative=_ACT.NOT_UNDERSTOOD)),
            Behaviour(self._on_rediscover, on_timer="rediscover"),
        ]

    # -- discovery and production switch ---------------------------------------

    def discover_resources(self) -> None:
        """One-shot yellow-pages lookup of workers and the robot."""
        names = sorted(aid.name for aid in self.platform.df_search(SERVICE_ASSEMBLY))
        for worker in names:
            if worker not in self.worker_stations:
                self._note_incident(f"worker {worker} has no workstation configured; skipped")
        self.workers = [w for w in names if w in self.worker_stations]
        for worker in self.workers:
            self.assigned.setdefault(worker, None)
        robots = self.platform.df_search(SERVICE_PICK_AND_PLACE)
        self.robot = robots[0] if robots else None

    def start_production(self) -> None:
        if self.state.production_running:
            return
        self.state.production_running = True
        self.discover_resources()
        if self.rediscover_every_ms:
            self.ctx.schedule_after(self.rediscover_every_ms, "rediscover")
        self._dispatch(self.ctx)

    def stop_production(self) -> None:
        # pauses dispatching; in-flight orders run to completion
        self.state.production_running = False

    def _on_rediscover(self, ctx: AgentContext, event: TimerFired) -> None:
        if not self.state.production_running:
            return
        self.discover_resources()
        self._dispatch(ctx)
        if self.rediscover_every_ms:
            ctx.schedule_after(self.rediscover_every_ms, "rediscover")

    # -- intake -----------------------------------------------------------------

    def _on_propagate(self, ctx: AgentContext, msg: AclMessage) -> None:
        action = self._decode(ctx, msg)
        if action is None:
            return
        config = next(
            (c for c in PRODUCT_CONFIGS.values() if c.manufacturing_action == action.name),
            None,
        )
        if config is None:
            self._reject(ctx, msg, "wrong-action")
            return
        order_frame = action.inputs["order"]
        order_id = str(order_frame.values["aid"])
        amount = order_frame.values["amount"]
        if not isinstance(amount, int) or amount < 1:
            self._reject(ctx, msg, "invalid-amount")
            return
        if self._known_order(order_id):
            self._reject(ctx, msg, "duplicate-order")
            return
        ctx.reply(msg, _ACT.CONFIRM, note("Order-Received", order=order_id))
        self.state.queue.append(
            QueuedOrder(
                order_id=order_id,
                kind=config.kind,
                order_frame=order_frame,
                operations=action.inputs["operations"],
                amount=amount,
                product_holon=msg.sender,
                conversation=msg.conversation_id,
            )
        )
        if self.state.production_running:
            self._dispatch(ctx)

    def _known_order(self, order_id: str) -> bool:
        return (
            order_id in self.state.in_flight
            or order_id in self.state.completed
            or any(q.order_id == order_id for q in self.state.queue)
        )

    # -- dispatching --------------------------------------------------------------

    def _free_workers(self) -> list[str]:
        return [w for w in self.workers if self.assigned.get(w) is None]

    def _dispatch(self, ctx: AgentContext) -> None:
        """Assign queued orders head-first to the lexicographically smallest
        free worker, pairing a robot pick-and-place REQUEST with a worker
        assembly REQUEST per order."""
        while self.state.production_running and self.state.queue:
            free = self._free_workers()
            if not free or self.robot is None:
                if self.robot is None and self.state.queue:
                    self._note_incident("no robot discovered; dispatch waits")
                return
            order = self.state.queue.pop(0)
            worker = free[0]
            config = PRODUCT_CONFIGS[order.kind]
            robot_conversation = f"{self.name}-cv-{order.order_id}-robot"
            worker_conversation = f"{self.name}-cv-{order.order_id}-{worker}"
            pick = TypedAction(
                config.pick_and_place_action,
                self.name,
                {
                    "order": order.order_frame,
                    "worker": TypedFrame(
                        "Worker",
                        {"aid": worker, "workstation": self.worker_stations[worker]},
                    ),
                },
            )
            ctx.send(
                _ACT.REQUEST,
                [self.robot],
                sl.print_content(self.registry.encode_frame(pick)),
                conversation_id=robot_conversation,
                ontology=self.registry.name,
            )
            assembly = TypedAction(
                config.assembly_action, self.name, {"order": order.order_frame}
            )
            ctx.send(
                _ACT.REQUEST,
                [self.platform.aid_of(worker)],
                sl.print_content(self.registry.encode_frame(assembly)),
                conversation_id=worker_conversation,
                ontology=self.registry.name,
            )
            self.assigned[worker] = order.order_id
            self.state.in_flight[order.order_id] = InFlightOrder(
                order=order,
                worker=worker,
                robot_conversation=robot_conversation,
                worker_conversation=worker_conversation,
            )

    # -- progress tracking ----------------------------------------------------------

    def _on_robot_done(self, ctx: AgentContext, msg: AclMessage) -> None:
        for flight in self.state.in_flight.values():
            if flight.robot_conversation == msg.conversation_id:
                flight.robot_done = True
                return
        self._note_incident(f"inform-if on unknown conversation {msg.conversation_id}")

    def _on_worker_done(self, ctx: AgentContext, msg: AclMessage) -> None:
        for order_id, flight in list(self.state.in_flight.items()):
            if flight.worker_conversation == msg.conversation_id:
                flight.worker_done = True
                self._complete(ctx, order_id)
                return
        self._note_incident(f"inform on unknown conversation {msg.conversation_id}")

    def _complete(self, ctx: AgentContext, order_id: str) -> None:
        flight = self.state.in_flight.pop(order_id)
        self.assigned[flight.worker] = None
        self.state.completed.append(order_id)
        self._dispatch(ctx)

    def _on_failure(self, ctx: AgentContext, msg: AclMessage) -> None:
        for flight in self.state.in_flight.values():
            if flight.robot_conversation == msg.conversation_id:
                flight.robot_failed = True
        self._note_incident(f"failure in {msg.conversation_id}: {msg.content}")

    def _on_confirm(self, ctx: AgentContext, msg: AclMessage) -> None:
        # REQUEST confirmations; the dispatch bookkeeping already holds
        pass

    def _on_rejected(self, ctx: AgentContext, msg: AclMessage) -> None:
        self._note_incident(f"not-understood in {msg.conversation_id}: {msg.content}")


# ---------------------------------------------------------------------------
# worker holon


@dataclass
class WorkerTask:
    order_id: str
    conversation: str
    amount: int
    operations: list[str]
    requester: Aid


class WorkerHolon(_HolonBase):
    """One human worker's communication side: status ladder and done button."""

    def __init__(
        self, platform: Platform, name: str, registry: OntologyRegistry, workstation: str
    ) -> None:
        super().__init__(platform, name, registry)
        platform.df_register(self.aid, SERVICE_ASSEMBLY)
        self.workstation = workstation
        self.status = WorkerStatus.FREE
        self.task: WorkerTask | None = None
        self.all_units_delivered = False

    def _behaviours(self) -> list[Behaviour]:
        return [
            Behaviour(self._on_request, on_message=MessageFilter(performative=_ACT.REQUEST)),
            Behaviour(self._on_first_unit, on_message=MessageFilter(performative=_ACT.INFORM_REF)),
            Behaviour(self._on_all_units, on_message=MessageFilter(performative=_ACT.INFORM_IF)),
            Behaviour(self._on_noise, on_message=MessageFilter(performative=_ACT.NOT_UNDERSTOOD)),
        ]

    def _on_noise(self, ctx: AgentContext, msg: AclMessage) -> None:
        self._note_incident(f"not-understood in {msg.conversation_id}: {msg.content}")

    def _set_status(self, new: WorkerStatus) -> None:
        assert (self.status.value, new.value) in WORKER_TRANSITIONS
        self.ctx.transition(self.status.value, new.value)
        self.status = new

    def _on_request(self, ctx: AgentContext, msg: AclMessage) -> None:
        action = self._decode(ctx, msg)
        if action is None:
            return
        config = next(
            (c for c in PRODUCT_CONFIGS.values() if c.assembly_action == action.name), None
        )
        if config is None:
            self._reject(ctx, msg, "wrong-action")
            return
        if self.status is not WorkerStatus.FREE:
            self._reject(ctx, msg, "invalid-status")
            return
        order_frame = action.inputs["order"]
        order_id = str(order_frame.values["aid"])
        amount = order_frame.values["amount"]
        if not isinstance(amount, int) or amount < 1:
            self._reject(ctx, msg, "invalid-amount")
            return
        ctx.reply(msg, _ACT.CONFIRM, note("Task-Accepted", order=order_id))
        self.task = WorkerTask(
            order_id=order_id,
            conversation=msg.conversation_id,
            amount=amount,
            operations=[],
            requester=msg.sender,
        )
        self._set_status(WorkerStatus.RESERVE)

    def _on_first_unit(self, ctx: AgentContext, msg: AclMessage) -> None:
        order_id = note_slot(msg.content, "order")
        if (
            self.status is not WorkerStatus.RESERVE
            or self.task is None
            or order_id != self.task.order_id
        ):
            self._reject(ctx, msg, "invalid-status")
            return
        self._set_status(WorkerStatus.BUSY)

    def _on_all_units(self, ctx: AgentContext, msg: AclMessage) -> None:
        order_id = note_slot(msg.content, "order")
        if (
            self.status is not WorkerStatus.BUSY
            or self.task is None
            or order_id != self.task.order_id
        ):
            self._reject(ctx, msg, "invalid-status")
            return
        self.all_units_delivered = True

    def task_done(self) -> None:
        """The human pressed the task-done button."""
        if self.status is not WorkerStatus.BUSY:
            raise TaskDoneRejected(f"{self.name} is {self.status.value}, not busy")
        if not self.all_units_delivered:
            raise TaskDoneRejected(f"{self.name} still waits for deliveries")
        assert self.task is not None
        self.ctx.send(
            _ACT.INFORM,
            [self.task.requester],
            note("Assembly-Done", order=self.task.order_id),
            conversation_id=self.task.conversation,
            ontology=self.registry.name,
        )
        self.task = None
        self.all_units_delivered = False
        self._set_status(WorkerStatus.FREE)


# ---------------------------------------------------------------------------
# robot holon


@dataclass
class RobotJob:
    order_id: str
    kind: str
    worker: str
    amount: int
    conversation: str
    requester: Aid
    started_at: int | None = None
    deadline: int | None = None


class RobotHolon(_HolonBase):
    """The cobot's communication side: FIFO pick-and-place jobs on a strict
    two-seconds-per-unit clock."""

    def __init__(self, platform: Platform, name: str, registry: OntologyRegistry) -> None:
        super().__init__(platform, name, registry)
        platform.df_register(self.aid, SERVICE_PICK_AND_PLACE)
        self.status = RobotStatus.FREE
        self.jobs: list[RobotJob] = []
        self.current: RobotJob | None = None

    def _behaviours(self) -> list[Behaviour]:
        return [
            Behaviour(self._on_request, on_message=MessageFilter(performative=_ACT.REQUEST)),
            Behaviour(self._on_noise, on_message=MessageFilter(performative=_ACT.NOT_UNDERSTOOD)),
            Behaviour(self._on_first_unit_due, on_timer="first-unit"),
            Behaviour(self._on_job_done_due, on_timer="job-done"),
        ]

    def _on_noise(self, ctx: AgentContext, msg: AclMessage) -> None:
        self._note_incident(f"not-understood in {msg.conversation_id}: {msg.content}")

    def _set_status(self, new: RobotStatus) -> None:
        assert (self.status.value, new.value) in ROBOT_TRANSITIONS
        self.ctx.transition(self.status.value, new.value)
        self.status = new

    def _on_request(self, ctx: AgentContext, msg: AclMessage) -> None:
        action = self._decode(ctx, msg)
        if action is None:
            return
        config = next(
            (c for c in PRODUCT_CONFIGS.values() if c.pick_and_place_action == action.name),
            None,
        )
        if config is None:
            self._reject(ctx, msg, "wrong-action")
            return
        order_frame = action.inputs["order"]
        worker_frame = action.inputs["worker"]
        amount = order_frame.values["amount"]
        if not isinstance(amount, int) or amount < 1:
            self._reject(ctx, msg, "invalid-amount")
            return
        ctx.reply(msg, _ACT.CONFIRM, note("Task-Accepted", order=order_frame.values["aid"]))
        self.jobs.append(
            RobotJob(
                order_id=str(order_frame.values["aid"]),
                kind=config.kind,
                worker=str(worker_frame.values["aid"]),
                amount=amount,
                conversation=msg.conversation_id,
                requester=msg.sender,
            )
        )
        if self.current is None:
            self._start_next(ctx)

    def _start_next(self, ctx: AgentContext) -> None:
        """Jobs run strictly FIFO; the first-unit notice is scheduled before
        the job-done notice so an amount-1 job resolves the tie that way."""
        while self.jobs:
            job = self.jobs.pop(0)
            if not self.platform.is_registered(job.worker):
                ctx.send(
                    _ACT.FAILURE,
                    [job.requester],
                    note("Unknown-Worker", name=job.worker),
                    conversation_id=job.conversation,
                    ontology=self.registry.name,
                )
                continue
            job.started_at = ctx.now
            job.deadline = ctx.now + pick_and_place_duration(job.amount)
            self.current = job
            if self.status is RobotStatus.FREE:
                self._set_status(RobotStatus.BUSY)
            ctx.schedule_after(PICK_AND_PLACE_MS_PER_UNIT, "first-unit", job)
            ctx.schedule_after(pick_and_place_duration(job.amount), "job-done", job)
            return
        self.current = None
        if self.status is RobotStatus.BUSY:
            self._set_status(RobotStatus.FREE)

    def _on_first_unit_due(self, ctx: AgentContext, event: TimerFired) -> None:
        job: RobotJob = event.payload
        ctx.send(
            _ACT.INFORM_REF,
            [self.platform.aid_of(job.worker)],
            note("First-Unit-Placed", order=job.order_id),
            conversation_id=job.conversation,
            ontology=self.registry.name,
        )

    def _on_job_done_due(self, ctx: AgentContext, event: TimerFired) -> None:
        job: RobotJob = event.payload
        content = note("All-Units-Placed", order=job.order_id, amount=job.amount)
        # the orders agent first, then the worker
        ctx.send(
            _ACT.INFORM_IF,
            [job.requester],
            content,
            conversation_id=job.conversation,
            ontology=self.registry.name,
        )
        ctx.send(
            _ACT.INFORM_IF,
            [self.platform.aid_of(job.worker)],
            content,
            conversation_id=job.conversation,
            ontology=self.registry.name,
        )
        self._start_next(ctx)
