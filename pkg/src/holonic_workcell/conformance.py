"""Trace-level conformance checks, independent of the holon implementations.

Every checker reads only the event trace (messages, status transitions and
their contents) and derives its expectations from the protocol rules: the
status transition tables, the one-reply pairing rule for AGREE / PROPAGATE /
REQUEST, the per-order causal order, robot busy-interval exclusivity and the
two-seconds-per-unit law.  The gateway runs them after every scenario and
maps violations to its invariant-violation exit code.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import sl
from .acl import CommunicativeAct
from .holons import (
    PICK_AND_PLACE_MS_PER_UNIT,
    ROBOT_TRANSITIONS,
    WORKER_TRANSITIONS,
)
from .trace import EventTrace, MessageRecord, validate_trace

_ACT = CommunicativeAct

_PAIRED = {_ACT.AGREE, _ACT.PROPAGATE, _ACT.REQUEST}
_TERMINALS = {_ACT.CONFIRM, _ACT.NOT_UNDERSTOOD, _ACT.FAILURE}


def check_transitions(
    trace: EventTrace, workers: list[str], robots: list[str]
) -> list[str]:
    """Every observed status move must be in the explicit transition tables."""
    problems = []
    for r in trace.transitions():
        move = (r.old, r.new)
        if r.agent in workers and move not in WORKER_TRANSITIONS:
            problems.append(f"worker {r.agent} made illegal transition {r.old}->{r.new}")
        elif r.agent in robots and move not in ROBOT_TRANSITIONS:
            problems.append(f"robot {r.agent} made illegal transition {r.old}->{r.new}")
    return problems


def check_protocol_pairing(trace: EventTrace) -> list[str]:
    """Each AGREE, PROPAGATE and REQUEST gets exactly one terminal reply
    (CONFIRM, NOT-UNDERSTOOD or FAILURE) threaded on the same conversation."""
    problems = []
    messages = trace.messages()
    for i, record in enumerate(messages):
        m = record.message
        if m.performative not in _PAIRED:
            continue
        replies = [
            other.message
            for other in messages[i + 1 :]
            if other.message.in_reply_to == m.reply_with
            and other.message.conversation_id == m.conversation_id
        ]
        label = f"{m.performative.value} {m.reply_with} in {m.conversation_id}"
        if len(replies) != 1:
            problems.append(f"{label}: expected exactly one reply, got {len(replies)}")
            continue
        if replies[0].performative not in _TERMINALS:
            problems.append(f"{label}: replied with {replies[0].performative.value}")
    return problems


def _order_of(content: str) -> str | None:
    """The :order token of a notification frame, or the order aid inside an
    action's order-frame input; None when neither applies."""
    try:
        tree = sl.parse_content(content)
    except sl.SlSyntaxError:
        return None
    if isinstance(tree, sl.Action):
        order = tree.act.slot("order")
        if isinstance(order, sl.Frame):
            aid = order.slot("aid")
            if isinstance(aid, sl.Atom):
                return aid.symbol
        return None
    if isinstance(tree, sl.Frame):
        value = tree.slot("order")
        if isinstance(value, sl.Atom):
            return value.symbol
    return None


def _amount_of(content: str) -> int | None:
    try:
        tree = sl.parse_content(content)
    except sl.SlSyntaxError:
        return None
    if isinstance(tree, sl.Frame):
        value = tree.slot("amount")
        if isinstance(value, sl.Int):
            return value.value
    return None


@dataclass
class OrderTimeline:
    """Per-order message indexes and timestamps extracted from a trace."""

    order_id: str
    request_robot: int | None = None
    request_worker: int | None = None
    confirm_robot: int | None = None
    confirm_worker: int | None = None
    inform_ref: int | None = None
    inform_if_orders: int | None = None
    inform_if_worker: int | None = None
    worker_done: int | None = None
    worker: str | None = None
    ref_ts: int | None = None
    if_ts: int | None = None
    dispatch_ts: int | None = None
    amount: int | None = None


def order_timelines(trace: EventTrace, orders_agent: str, robot: str) -> dict[str, OrderTimeline]:
    """Reconstruct each dispatched order's protocol steps from the trace."""
    timelines: dict[str, OrderTimeline] = {}
    messages = trace.messages()
    confirm_targets: dict[str, tuple[str, str]] = {}  # reply_with -> (order, leg)

    def timeline(order_id: str) -> OrderTimeline:
        return timelines.setdefault(order_id, OrderTimeline(order_id))

    for i, record in enumerate(messages):
        m = record.message
        order_id = _order_of(m.content)
        receiver = m.receivers[0].name if m.receivers else ""
        if m.performative is _ACT.REQUEST and m.sender.name == orders_agent and order_id:
            line = timeline(order_id)
            if receiver == robot:
                line.request_robot = i
                line.dispatch_ts = record.ts
                confirm_targets[m.reply_with or ""] = (order_id, "robot")
            else:
                line.request_worker = i
                line.worker = receiver
                confirm_targets[m.reply_with or ""] = (order_id, "worker")
        elif m.performative is _ACT.CONFIRM and m.in_reply_to in confirm_targets:
            target_order, leg = confirm_targets[m.in_reply_to]
            line = timeline(target_order)
            if leg == "robot":
                line.confirm_robot = i
            else:
                line.confirm_worker = i
        elif m.performative is _ACT.INFORM_REF and m.sender.name == robot and order_id:
            line = timeline(order_id)
            line.inform_ref = i
            line.ref_ts = record.ts
        elif m.performative is _ACT.INFORM_IF and m.sender.name == robot and order_id:
            line = timeline(order_id)
            line.if_ts = record.ts
            line.amount = _amount_of(m.content)
            if receiver == orders_agent:
                line.inform_if_orders = i
            else:
                line.inform_if_worker = i
        elif m.performative is _ACT.INFORM and receiver == orders_agent and order_id:
            timeline(order_id).worker_done = i
    return timelines


def check_order_causality(trace: EventTrace, orders_agent: str, robot: str) -> list[str]:
    """The per-order partial order: paired REQUESTs before their CONFIRMs,
    CONFIRMs before the first-unit notice, first-unit before (or tied with)
    all-units, all-units to both recipients, worker done-signal last."""
    problems = []
    for order_id, line in order_timelines(trace, orders_agent, robot).items():
        steps = {
            "request to robot": line.request_robot,
            "request to worker": line.request_worker,
            "confirm from robot": line.confirm_robot,
            "confirm from worker": line.confirm_worker,
        }
        missing = [name for name, index in steps.items() if index is None]
        if missing:
            problems.append(f"{order_id}: missing {', '.join(missing)}")
            continue
        if not (line.request_robot < line.confirm_robot):  # type: ignore[operator]
            problems.append(f"{order_id}: robot confirm precedes its request")
        if not (line.request_worker < line.confirm_worker):  # type: ignore[operator]
            problems.append(f"{order_id}: worker confirm precedes its request")
        if line.inform_ref is None:
            problems.append(f"{order_id}: no first-unit inform-ref")
            continue
        if line.inform_ref < max(line.confirm_robot, line.confirm_worker):  # type: ignore[arg-type]
            problems.append(f"{order_id}: inform-ref before the confirms")
        if line.inform_if_orders is None or line.inform_if_worker is None:
            problems.append(f"{order_id}: inform-if must reach the orders agent and the worker")
            continue
        first_inform_if = min(line.inform_if_orders, line.inform_if_worker)
        if line.inform_ref > first_inform_if:
            problems.append(f"{order_id}: inform-ref after inform-if")
        if line.worker_done is not None and line.worker_done < line.inform_if_worker:
            problems.append(f"{order_id}: worker done-signal before its deliveries finished")
    return problems


def check_timing_law(trace: EventTrace, orders_agent: str, robot: str) -> list[str]:
    """First unit exactly 2000 ms after job start; completion exactly
    2000 * amount ms after job start (zero tolerance)."""
    problems = []
    timelines = order_timelines(trace, orders_agent, robot)
    # job starts back to back: first job starts at its dispatch, each next at
    # the previous completion
    runs = sorted(
        (line for line in timelines.values() if line.if_ts is not None),
        key=lambda line: line.if_ts,  # type: ignore[arg-type, return-value]
    )
    previous_end: int | None = None
    for line in runs:
        if line.dispatch_ts is None or line.amount is None:
            problems.append(f"{line.order_id}: incomplete timing data")
            continue
        start = (
            line.dispatch_ts
            if previous_end is None or previous_end <= line.dispatch_ts
            else previous_end
        )
        expected_ref = start + PICK_AND_PLACE_MS_PER_UNIT
        expected_if = start + PICK_AND_PLACE_MS_PER_UNIT * line.amount
        if line.ref_ts != expected_ref:
            problems.append(
                f"{line.order_id}: first unit at {line.ref_ts}, expected {expected_ref}"
            )
        if line.if_ts != expected_if:
            problems.append(
                f"{line.order_id}: completion at {line.if_ts}, expected {expected_if}"
            )
        previous_end = line.if_ts
    return problems


def robot_busy_intervals(trace: EventTrace, robot: str) -> list[tuple[int, int]]:
    intervals = []
    start: int | None = None
    for r in trace.transitions():
        if r.agent != robot:
            continue
        if r.old == "free" and r.new == "busy":
            start = r.ts
        elif r.old == "busy" and r.new == "free" and start is not None:
            intervals.append((start, r.ts))
            start = None
    return intervals


def check_robot_exclusivity(trace: EventTrace, orders_agent: str, robot: str) -> list[str]:
    """Busy intervals never overlap and their total equals the sum of
    2000 * amount over executed jobs."""
    problems = []
    intervals = robot_busy_intervals(trace, robot)
    for (s1, e1), (s2, e2) in zip(intervals, intervals[1:]):
        if s2 < e1:
            problems.append(f"robot busy intervals overlap: ({s1},{e1}) and ({s2},{e2})")
    moves = [r for r in trace.transitions() if r.agent == robot]
    still_busy = bool(moves) and moves[-1].new == "busy"
    if still_busy:
        return problems  # horizon-limited run; totals only make sense when closed
    total_busy = sum(end - start for start, end in intervals)
    executed = [
        line.amount
        for line in order_timelines(trace, orders_agent, robot).values()
        if line.if_ts is not None and line.amount is not None
    ]
    expected = sum(PICK_AND_PLACE_MS_PER_UNIT * amount for amount in executed)
    if total_busy != expected:
        problems.append(f"robot busy total {total_busy} != {expected} (= sum of 2000*amount)")
    return problems


def check_all(trace: EventTrace, workers: list[str], robot: str, orders_agent: str) -> list[str]:
    """The full post-run gate: trace well-formedness plus every protocol rule."""
    problems = validate_trace(trace)
    problems += check_transitions(trace, workers, [robot])
    problems += check_protocol_pairing(trace)
    problems += check_order_causality(trace, orders_agent, robot)
    problems += check_robot_exclusivity(trace, orders_agent, robot)
    return problems
