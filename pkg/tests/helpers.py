"""Shared strategies and generators for the test suite."""

from __future__ import annotations

import random
from decimal import Decimal

from hypothesis import strategies as st

from holonic_workcell import sl
from holonic_workcell.acl import Aid, CommunicativeAct, TokenSource, build_message
from holonic_workcell.gateway import (
    CUSTOMERS,
    ScenarioScript,
    StartProduction,
    StopProduction,
    SubmitOrder,
    TaskDone,
    TimedDirective,
    WORKER_STATIONS,
)

# --- content-tree strategies -------------------------------------------------

symbols = st.from_regex(r"[A-Za-z][A-Za-z0-9-]{0,8}", fullmatch=True)
frame_names = symbols.filter(lambda s: s not in ("sequence", "action", "agent-identifier"))

_text = st.text(
    alphabet=st.characters(min_codepoint=0x20, max_codepoint=0x2FF),
    max_size=12,
)

atoms = st.builds(sl.Atom, symbols)
strs = st.builds(sl.Str, _text)
ints = st.builds(sl.Int, st.integers(-(10**9), 10**9))
floats = st.builds(
    lambda negative, whole, frac: sl.Float(Decimal(f"{'-' if negative else ''}{whole}.{frac}")),
    st.booleans(),
    st.integers(0, 10**6),
    st.integers(0, 10**6),
)

leaves = st.one_of(atoms, strs, ints, floats)


def _frames(node_strategy: st.SearchStrategy) -> st.SearchStrategy:
    slot_lists = st.lists(
        st.tuples(symbols, node_strategy), max_size=4, unique_by=lambda kv: kv[0]
    )
    return st.builds(lambda name, slots: sl.Frame(name, tuple(slots)), frame_names, slot_lists)


def _extend(node_strategy: st.SearchStrategy) -> st.SearchStrategy:
    frames = _frames(node_strategy)
    seqs = st.builds(lambda items: sl.Seq(tuple(items)), st.lists(node_strategy, max_size=4))
    actions = st.builds(sl.Action.by, symbols, frames)
    return st.one_of(frames, seqs, actions)


content_trees = st.recursive(leaves, _extend, max_leaves=24)


# --- message strategies --------------------------------------------------------

agent_names = st.from_regex(r"[a-z][a-z0-9-]{0,8}", fullmatch=True)


@st.composite
def acl_messages(draw) -> object:
    """Well-formed messages built through build_message."""
    sender = Aid(draw(agent_names))
    receivers = draw(
        st.lists(
            st.builds(Aid, agent_names.filter(lambda n: n != sender.name)),
            min_size=1,
            max_size=3,
        )
    )
    performative = draw(st.sampled_from(list(CommunicativeAct)))
    conversation = draw(st.from_regex(r"[a-z][a-z0-9-]{0,12}", fullmatch=True))
    return build_message(
        performative,
        sender,
        receivers,
        draw(_text),
        "cooperative-workcell",
        conversation,
        tokens=TokenSource(),
    )


# --- fuzz scenario generation ----------------------------------------------------

COLORS = ("red", "blue", "green", "black")


def random_scenario(rng: random.Random) -> ScenarioScript:
    """A randomized human-action sequence: orders, production toggles and
    task-done presses at legal and illegal moments."""
    timed: list[tuple[int, TimedDirective]] = []

    def add(at: int, directive) -> None:
        timed.append((at, TimedDirective(at, directive)))

    order_count = rng.randint(1, 4)
    for _ in range(order_count):
        add(
            rng.randrange(0, 5000),
            SubmitOrder(
                customer=rng.choice(CUSTOMERS),
                kind=rng.choice(("pump", "compressor")),
                color=rng.choice(COLORS),
                power=rng.randint(1, 9),
                amount=rng.randint(1, 5),
            ),
        )
    if rng.random() < 0.9:
        add(rng.randrange(0, 4000), StartProduction())
    for _ in range(rng.randint(0, 2)):
        add(rng.randrange(0, 30000), StopProduction())
        add(rng.randrange(0, 60000), StartProduction())
    # some presses land while the worker cannot accept them
    for _ in range(rng.randint(0, 3)):
        add(rng.randrange(0, 30000), TaskDone(rng.choice(list(WORKER_STATIONS))))
    # late rounds so most delivered tasks can actually finish
    late = 100_000
    for round_no in range(order_count):
        for worker in WORKER_STATIONS:
            add(late + round_no * 10_000, TaskDone(worker))
    timed.sort(key=lambda pair: pair[0])
    return ScenarioScript([entry for _, entry in timed])
