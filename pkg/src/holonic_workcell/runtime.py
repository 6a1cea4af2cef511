"""In-process agent platform: naming, service directory, mailboxes, behaviours,
virtual clock and the deterministic event loop.

The loop is single-threaded.  At a given virtual instant it processes, in
this fixed order: externally injected directives, then message-triggered
behaviours to quiescence, then due timers one at a time (re-reaching message
quiescence between timers).  Timer ties fire in scheduling order.  These
tie-breaks are part of the contract: a scenario's full event trace is a pure
function of its inputs.

External inputs (service API, UI events) go through a lock-protected inbound
queue drained at step boundaries; everything else runs on the loop thread.
"""

from __future__ import annotations

import heapq
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable

from . import sl
from .acl import (
    Aid,
    AclMessage,
    CommunicativeAct,
    TokenSource,
    build_message,
    make_reply,
)
from .trace import EventTrace, MessageRecord, TransitionRecord


class PlatformError(Exception):
    """Base class for platform errors."""


class DuplicateAgentName(PlatformError):
    pass


class UnknownAgent(PlatformError):
    pass


class LivelockGuard(PlatformError):
    """Raised when one run exceeds the configured behaviour-invocation bound."""


class BadBehaviour(PlatformError):
    pass


AMS_NAME = "ams"
PLATFORM_ONTOLOGY = "platform"


class ClockMode(Enum):
    DETERMINISTIC_STEP = "deterministic-step"
    SCALED_WALL_CLOCK = "scaled-wall-clock"


@dataclass
class VirtualClock:
    """Monotonic virtual milliseconds.

    In deterministic-step mode time moves only when the loop advances it;
    in scaled mode the loop paces advancement against the wall clock, with
    ``scale`` virtual milliseconds passing per real millisecond.
    """

    now: int = 0
    mode: ClockMode = ClockMode.DETERMINISTIC_STEP
    scale: float = 1.0

    def advance_to(self, target: int) -> None:
        if target < self.now:
            raise ValueError(f"clock cannot move back ({self.now} -> {target})")
        self.now = target


@dataclass(frozen=True)
class MessageFilter:
    """Mailbox selector; unset fields match anything.

    ``action`` matches the ontology action name inside the content, when the
    content parses to an action node at all.
    """

    performative: CommunicativeAct | None = None
    conversation_id: str | None = None
    action: str | None = None

    def matches(self, m: AclMessage) -> bool:
        if self.performative is not None and m.performative is not self.performative:
            return False
        if self.conversation_id is not None and m.conversation_id != self.conversation_id:
            return False
        if self.action is not None:
            try:
                tree = sl.parse_content(m.content)
            except sl.SlSyntaxError:
                return False
            if not isinstance(tree, sl.Action) or tree.act.name != self.action:
                return False
        return True


@dataclass(frozen=True)
class TimerFired:
    timer_id: int
    tag: str
    payload: Any = None


class BehaviourKind(Enum):
    ONE_SHOT = "one-shot"
    CYCLIC = "cyclic"


Handler = Callable[["AgentContext", Any], None]


@dataclass
class Behaviour:
    """A unit of agent activity.

    Triggered by a message filter, by a timer tag, or by nothing (an
    immediate one-shot, which runs at the next loop step).  One-shot
    behaviours run at most once; cyclic ones run on every matching trigger
    for the life of the agent.
    """

    handler: Handler
    kind: BehaviourKind = BehaviourKind.CYCLIC
    on_message: MessageFilter | None = None
    on_timer: str | None = None
    done: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if self.on_message is not None and self.on_timer is not None:
            raise BadBehaviour("a behaviour takes one trigger, not both")
        if self.kind is BehaviourKind.CYCLIC and self.on_message is None and self.on_timer is None:
            raise BadBehaviour("a cyclic behaviour needs a trigger")


def one_shot(handler: Handler) -> Behaviour:
    return Behaviour(handler, kind=BehaviourKind.ONE_SHOT)


def on_message(handler: Handler, **filter_fields: Any) -> Behaviour:
    return Behaviour(handler, on_message=MessageFilter(**filter_fields))


def on_timer(tag: str, handler: Handler) -> Behaviour:
    return Behaviour(handler, on_timer=tag)


@dataclass
class _AgentRecord:
    aid: Aid
    behaviours: list[Behaviour]
    context: "AgentContext"


class AgentContext:
    """The handle a behaviour uses to act on the platform as one agent."""

    def __init__(self, platform: "Platform", aid: Aid) -> None:
        self.platform = platform
        self.aid = aid

    @property
    def now(self) -> int:
        return self.platform.clock.now

    def new_conversation_id(self) -> str:
        return self.platform.tokens.next_conversation_id(self.aid.name)

    def send(
        self,
        performative: CommunicativeAct,
        receivers: list[Aid] | tuple[Aid, ...],
        content: str,
        *,
        conversation_id: str,
        ontology: str,
        in_reply_to: str | None = None,
        protocol: str | None = None,
    ) -> AclMessage:
        m = build_message(
            performative,
            self.aid,
            receivers,
            content,
            ontology,
            conversation_id,
            in_reply_to=in_reply_to,
            protocol=protocol,
            tokens=self.platform.tokens,
        )
        self.platform.send(m)
        return m

    def reply(
        self, original: AclMessage, performative: CommunicativeAct, content: str
    ) -> AclMessage:
        m = make_reply(
            original, performative, content, sender=self.aid, tokens=self.platform.tokens
        )
        self.platform.send(m)
        return m

    def schedule_after(self, delay_ms: int, tag: str, payload: Any = None) -> int:
        return self.platform.schedule_after(delay_ms, self.aid, tag, payload)

    def transition(self, old: str, new: str) -> None:
        self.platform.trace.append(TransitionRecord(self.now, self.aid.name, old, new))


class Platform:
    """Single-container agent platform with a deterministic event loop."""

    def __init__(self, name: str = "workcell", livelock_limit: int = 200_000) -> None:
        self.name = name
        self.clock = VirtualClock()
        self.tokens = TokenSource()
        self.trace = EventTrace()
        self.livelock_limit = livelock_limit
        self._agents: dict[str, _AgentRecord] = {}
        self._mailboxes: dict[str, deque[AclMessage]] = {}
        self._df: dict[str, list[Aid]] = {}
        self._timers: list[tuple[int, int, str, str, Any]] = []  # (deadline, seq, owner, tag, payload)
        self._timer_seq = 0
        self._work_count = 0
        # directives: (at, seq, fn) kept sorted lazily; inbox is the
        # thread-safe hand-off for live callers.
        self._pending: list[tuple[int, int, Callable[[], None]]] = []
        self._pending_seq = 0
        self._inbox: list[Callable[[], None]] = []
        self._inbox_lock = threading.Lock()
        self.inbox_event = threading.Event()
        self._ams_aid = Aid(AMS_NAME)
        self._agents[AMS_NAME] = _AgentRecord(self._ams_aid, [], AgentContext(self, self._ams_aid))
        self._mailboxes[AMS_NAME] = deque()

    # -- AMS ----------------------------------------------------------------

    def register_agent(self, name: str, behaviours: list[Behaviour] | None = None) -> Aid:
        if name in self._agents:
            raise DuplicateAgentName(name)
        aid = Aid(name)
        self._agents[name] = _AgentRecord(aid, list(behaviours or []), AgentContext(self, aid))
        self._mailboxes[name] = deque()
        return aid

    def is_registered(self, name: str) -> bool:
        return name in self._agents

    def aid_of(self, name: str) -> Aid:
        try:
            return self._agents[name].aid
        except KeyError:
            raise UnknownAgent(name) from None

    def agent_names(self) -> list[str]:
        return [n for n in self._agents if n != AMS_NAME]

    def context(self, name: str) -> AgentContext:
        return self._agents[name].context

    def add_behaviour(self, name: str, behaviour: Behaviour) -> None:
        self._agents[name].behaviours.append(behaviour)

    # -- DF -----------------------------------------------------------------

    def df_register(self, aid: Aid, service_type: str) -> None:
        if aid.name not in self._agents:
            raise UnknownAgent(aid.name)
        entry = self._df.setdefault(service_type, [])
        if aid not in entry:
            entry.append(aid)

    def df_deregister(self, aid: Aid, service_type: str) -> None:
        entry = self._df.get(service_type, [])
        if aid in entry:
            entry.remove(aid)

    def df_search(self, service_type: str) -> list[Aid]:
        return list(self._df.get(service_type, []))

    # -- transport ----------------------------------------------------------

    def send(self, m: AclMessage) -> None:
        """Enqueue one copy per receiver, in receivers order.

        An unregistered receiver drops its copy and triggers an automatic
        FAILURE back to the sender on the same conversation.
        """
        self.trace.append(MessageRecord(self.clock.now, m))
        for receiver in m.receivers:
            if receiver.name in self._mailboxes:
                self._mailboxes[receiver.name].append(m)
            else:
                self._send_failure(m, receiver)

    def _send_failure(self, original: AclMessage, missing: Aid) -> None:
        if original.sender.name not in self._mailboxes or original.sender == self._ams_aid:
            return
        failure = build_message(
            CommunicativeAct.FAILURE,
            self._ams_aid,
            (original.sender,),
            sl.print_content(sl.Frame.of("Unknown-Receiver", ("name", sl.Atom(missing.name)))),
            PLATFORM_ONTOLOGY,
            original.conversation_id,
            in_reply_to=original.reply_with,
            tokens=self.tokens,
        )
        self.send(failure)

    def next_matching(self, agent: Aid | str, message_filter: MessageFilter) -> AclMessage | None:
        """Remove and return the oldest matching mailbox message, if any.

        Non-matching messages stay put in their original order.
        """
        name = agent.name if isinstance(agent, Aid) else agent
        try:
            mailbox = self._mailboxes[name]
        except KeyError:
            raise UnknownAgent(name) from None
        for i, m in enumerate(mailbox):
            if message_filter.matches(m):
                del mailbox[i]
                return m
        return None

    def mailbox_size(self, name: str) -> int:
        return len(self._mailboxes[name])

    # -- timers and directives ------------------------------------------------

    def schedule_after(self, delay_ms: int, owner: Aid, tag: str, payload: Any = None) -> int:
        if delay_ms < 0:
            raise ValueError("delay must be non-negative")
        self._timer_seq += 1
        heapq.heappush(
            self._timers, (self.clock.now + delay_ms, self._timer_seq, owner.name, tag, payload)
        )
        return self._timer_seq

    def inject_at(self, at_ms: int, fn: Callable[[], None]) -> None:
        """Queue a directive for a fixed virtual time (scenario preload)."""
        self._pending_seq += 1
        self._pending.append((at_ms, self._pending_seq, fn))
        self._pending.sort(key=lambda entry: entry[:2])

    def post(self, fn: Callable[[], None]) -> None:
        """Thread-safe live injection; runs at the next step boundary."""
        with self._inbox_lock:
            self._inbox.append(fn)
        self.inbox_event.set()

    # -- the loop -------------------------------------------------------------

    def _drain_inbox(self) -> None:
        with self._inbox_lock:
            incoming, self._inbox = self._inbox, []
        for fn in incoming:
            self.inject_at(self.clock.now, fn)

    def _inject_due(self) -> None:
        while self._pending and self._pending[0][0] <= self.clock.now:
            _, _, fn = self._pending.pop(0)
            fn()

    def _count_work(self) -> None:
        self._work_count += 1
        if self._work_count > self.livelock_limit:
            raise LivelockGuard(
                f"more than {self.livelock_limit} behaviour invocations in one run"
            )

    def _run_message_behaviours(self) -> None:
        progressed = True
        while progressed:
            progressed = False
            for record in list(self._agents.values()):
                for behaviour in record.behaviours:
                    if behaviour.done:
                        continue
                    if behaviour.on_message is None and behaviour.on_timer is None:
                        behaviour.done = True  # immediate behaviours are one-shot
                        self._count_work()
                        behaviour.handler(record.context, None)
                        progressed = True
                    elif behaviour.on_message is not None:
                        while not behaviour.done:
                            m = self.next_matching(record.aid, behaviour.on_message)
                            if m is None:
                                break
                            if behaviour.kind is BehaviourKind.ONE_SHOT:
                                behaviour.done = True
                            self._count_work()
                            behaviour.handler(record.context, m)
                            progressed = True

    def _fire_timer(self, entry: tuple[int, int, str, str, Any]) -> None:
        deadline, seq, owner, tag, payload = entry
        record = self._agents.get(owner)
        if record is None:
            return
        event = TimerFired(seq, tag, payload)
        for behaviour in record.behaviours:
            if behaviour.done or behaviour.on_timer != tag:
                continue
            if behaviour.kind is BehaviourKind.ONE_SHOT:
                behaviour.done = True
            self._count_work()
            behaviour.handler(record.context, event)

    def _next_event_time(self) -> int | None:
        candidates = []
        if self._timers:
            candidates.append(self._timers[0][0])
        if self._pending:
            candidates.append(self._pending[0][0])
        return min(candidates) if candidates else None

    def run_until_idle(self, horizon_ms: int | None = None) -> EventTrace:
        """Run to quiescence: no deliverable messages, no runnable behaviours,
        no timers, no queued directives (or the horizon, when given).
        """
        self._work_count = 0
        while True:
            self._drain_inbox()
            self._inject_due()
            self._run_message_behaviours()
            next_time = self._next_event_time()
            if next_time is None:
                break
            if horizon_ms is not None and next_time > horizon_ms:
                self.clock.advance_to(max(horizon_ms, self.clock.now))
                break
            if next_time > self.clock.now:
                if self.clock.mode is ClockMode.SCALED_WALL_CLOCK:
                    time.sleep((next_time - self.clock.now) / 1000.0 / self.clock.scale)
                self.clock.advance_to(next_time)
                continue
            # a timer due right now: deliveries above already quiesced, so
            # exactly one timer fires before we re-reach quiescence
            if self._timers and self._timers[0][0] <= self.clock.now:
                self._fire_timer(heapq.heappop(self._timers))
        return self.trace

    def step_live(self, max_wait_s: float = 0.1) -> None:
        """One live-mode iteration for a scaled wall clock.

        Processes everything due now; otherwise waits a bounded wall slice
        for the next event or for live input, then advances the clock by the
        scaled elapsed time.  The caller loops and publishes state between
        iterations.
        """
        self.inbox_event.clear()
        self._drain_inbox()
        self._inject_due()
        self._run_message_behaviours()
        next_time = self._next_event_time()
        if next_time is not None and next_time <= self.clock.now:
            if self._timers and self._timers[0][0] <= self.clock.now:
                self._fire_timer(heapq.heappop(self._timers))
            return
        if next_time is None:
            self.inbox_event.wait(timeout=max_wait_s)
            return
        remaining_s = (next_time - self.clock.now) / 1000.0 / self.clock.scale
        started = time.monotonic()
        self.inbox_event.wait(timeout=min(remaining_s, max_wait_s))
        elapsed_ms = int((time.monotonic() - started) * 1000.0 * self.clock.scale)
        self.clock.now = min(next_time, self.clock.now + max(elapsed_ms, 0))
