import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holonic_workcell.acl import Aid, CommunicativeAct, build_message
from holonic_workcell.runtime import (
    BadBehaviour,
    Behaviour,
    BehaviourKind,
    DuplicateAgentName,
    LivelockGuard,
    MessageFilter,
    Platform,
    UnknownAgent,
)

A = CommunicativeAct


def new_platform() -> Platform:
    return Platform()


def tell(platform, sender, receiver, performative=A.INFORM, content="x", conversation="cv-1"):
    m = build_message(
        performative,
        platform.aid_of(sender),
        [platform.aid_of(receiver)],
        content,
        "t",
        conversation,
        tokens=platform.tokens,
    )
    platform.send(m)
    return m


class TestAms:
    def test_distinct_registrations(self):
        p = new_platform()
        w1 = p.register_agent("worker-1")
        w2 = p.register_agent("worker-2")
        assert w1 != w2

    def test_duplicate_name(self):
        p = new_platform()
        p.register_agent("robot")
        with pytest.raises(DuplicateAgentName):
            p.register_agent("robot")

    def test_ams_name_is_reserved(self):
        with pytest.raises(DuplicateAgentName):
            new_platform().register_agent("ams")

    def test_full_roster_lookup(self):
        p = new_platform()
        roster = [
            "customer-1", "customer-2", "pump", "compressor",
            "orders", "worker-1", "worker-2", "robot",
        ]
        for name in roster:
            p.register_agent(name)
        for name in roster:
            assert p.aid_of(name).name == name
        assert p.agent_names() == roster


class TestDf:
    def test_register_and_search(self):
        p = new_platform()
        w = p.register_agent("worker-1")
        p.df_register(w, "assembly")
        assert p.df_search("assembly") == [w]

    def test_unknown_service_is_empty(self):
        assert new_platform().df_search("unknown-service") == []

    def test_requires_registered_agent(self):
        with pytest.raises(UnknownAgent):
            new_platform().df_register(Aid("ghost"), "assembly")

    def test_deregister(self):
        p = new_platform()
        r = p.register_agent("robot")
        p.df_register(r, "pick-and-place")
        p.df_deregister(r, "pick-and-place")
        assert p.df_search("pick-and-place") == []


class TestSend:
    def test_delivery_increments_mailbox(self):
        p = new_platform()
        p.register_agent("a")
        p.register_agent("orders")
        tell(p, "a", "orders")
        assert p.mailbox_size("orders") == 1

    def test_unknown_receiver_failure_reply(self):
        p = new_platform()
        p.register_agent("orders")
        m = build_message(
            A.REQUEST, p.aid_of("orders"), [Aid("worker-9")], "x", "t", "cv-1",
            tokens=p.tokens,
        )
        p.send(m)
        failure = p.next_matching("orders", MessageFilter(performative=A.FAILURE))
        assert failure is not None
        assert failure.sender.name == "ams"
        assert failure.conversation_id == "cv-1"
        assert failure.in_reply_to == m.reply_with
        assert "worker-9" in failure.content

    @settings(deadline=None)
    @given(st.lists(st.sampled_from(["a", "c"]), min_size=1, max_size=20))
    def test_per_pair_order_preserved(self, senders):
        p = new_platform()
        for name in ("a", "b", "c"):
            p.register_agent(name)
        sent = []
        for i, sender in enumerate(senders):
            tell(p, sender, "b", content=f"n{i}")
            if sender == "a":
                sent.append(f"n{i}")
        received = []
        while (m := p.next_matching("b", MessageFilter())) is not None:
            if m.sender.name == "a":
                received.append(m.content)
        assert received == sent


class TestNextMatching:
    def test_filter_by_performative(self):
        p = new_platform()
        p.register_agent("a")
        p.register_agent("b")
        tell(p, "a", "b", A.INFORM, content="first")
        tell(p, "a", "b", A.CONFIRM, content="second")
        got = p.next_matching("b", MessageFilter(performative=A.CONFIRM))
        assert got.content == "second"
        assert p.mailbox_size("b") == 1
        rest = p.next_matching("b", MessageFilter())
        assert rest.performative is A.INFORM

    def test_no_match_returns_none(self):
        p = new_platform()
        p.register_agent("a")
        p.register_agent("b")
        tell(p, "a", "b", conversation="cv-1")
        assert p.next_matching("b", MessageFilter(conversation_id="cv-7")) is None
        assert p.mailbox_size("b") == 1

    def test_action_filter(self):
        p = new_platform()
        p.register_agent("a")
        p.register_agent("b")
        tell(p, "a", "b", content="(action (agent-identifier :name a) (Fit :o (X)))")
        assert p.next_matching("b", MessageFilter(action="Weld")) is None
        assert p.next_matching("b", MessageFilter(action="Fit")) is not None

    @settings(deadline=None)
    @given(st.lists(st.sampled_from([A.INFORM, A.CONFIRM, A.AGREE]), max_size=12))
    def test_selective_receive_keeps_relative_order(self, acts):
        p = new_platform()
        p.register_agent("a")
        p.register_agent("b")
        for i, act in enumerate(acts):
            tell(p, "a", "b", act, content=f"n{i}")
        p.next_matching("b", MessageFilter(performative=A.CONFIRM))
        remaining = []
        while (m := p.next_matching("b", MessageFilter())) is not None:
            remaining.append(m.content)
        expected = [f"n{i}" for i, act in enumerate(acts)]
        confirms = [f"n{i}" for i, act in enumerate(acts) if act is A.CONFIRM]
        if confirms:
            expected.remove(confirms[0])
        assert remaining == expected


class TestTimers:
    def test_fires_at_deadline(self):
        p = new_platform()
        p.register_agent("robot")
        fired = []
        p.add_behaviour(
            "robot", Behaviour(lambda ctx, ev: fired.append(ctx.now), on_timer="tick")
        )
        p.schedule_after(2000, p.aid_of("robot"), "tick")
        p.run_until_idle()
        assert fired == [2000]
        assert p.clock.now == 2000

    def test_equal_deadlines_fire_in_schedule_order(self):
        p = new_platform()
        p.register_agent("a")
        order = []
        p.add_behaviour("a", Behaviour(lambda ctx, ev: order.append(ev.tag), on_timer="x"))
        p.add_behaviour("a", Behaviour(lambda ctx, ev: order.append(ev.tag), on_timer="y"))
        aid = p.aid_of("a")
        p.schedule_after(1000, aid, "x")
        p.schedule_after(1000, aid, "y")
        p.run_until_idle()
        assert order == ["x", "y"]

    def test_zero_delay_fires_before_later_schedules(self):
        p = new_platform()
        p.register_agent("a")
        order = []
        p.add_behaviour("a", Behaviour(lambda ctx, ev: order.append(ev.tag), on_timer="now"))
        p.add_behaviour("a", Behaviour(lambda ctx, ev: order.append(ev.tag), on_timer="later"))
        aid = p.aid_of("a")
        p.schedule_after(0, aid, "now")
        p.schedule_after(5, aid, "later")
        p.run_until_idle()
        assert order == ["now", "later"]

    def test_negative_delay_rejected(self):
        p = new_platform()
        a = p.register_agent("a")
        with pytest.raises(ValueError):
            p.schedule_after(-1, a, "x")


class TestBehaviours:
    def test_one_shot_runs_exactly_once(self):
        p = new_platform()
        runs = []
        p.register_agent(
            "a", [Behaviour(lambda ctx, ev: runs.append(1), kind=BehaviourKind.ONE_SHOT)]
        )
        p.run_until_idle()
        p.run_until_idle()
        assert runs == [1]

    def test_cyclic_runs_per_matching_message(self):
        p = new_platform()
        p.register_agent("a")
        got = []
        p.register_agent(
            "b",
            [
                Behaviour(
                    lambda ctx, m: got.append(m.content),
                    on_message=MessageFilter(performative=A.INFORM),
                )
            ],
        )
        tell(p, "a", "b", content="one")
        p.run_until_idle()
        tell(p, "a", "b", content="two")
        p.run_until_idle()
        assert got == ["one", "two"]

    def test_one_shot_message_behaviour_consumes_one(self):
        p = new_platform()
        p.register_agent("a")
        got = []
        p.register_agent(
            "b",
            [
                Behaviour(
                    lambda ctx, m: got.append(m.content),
                    kind=BehaviourKind.ONE_SHOT,
                    on_message=MessageFilter(performative=A.INFORM),
                )
            ],
        )
        tell(p, "a", "b", content="one")
        tell(p, "a", "b", content="two")
        p.run_until_idle()
        assert got == ["one"]
        assert p.mailbox_size("b") == 1

    def test_cyclic_without_trigger_is_rejected(self):
        with pytest.raises(BadBehaviour):
            Behaviour(lambda ctx, ev: None)

    def test_livelock_guard(self):
        p = Platform(livelock_limit=50)

        def ping(ctx, m):
            other = "b" if ctx.aid.name == "a" else "a"
            ctx.send(
                A.INFORM, [p.aid_of(other)], "x",
                conversation_id="cv-1", ontology="t",
            )

        p.register_agent("a", [Behaviour(ping, on_message=MessageFilter(performative=A.INFORM))])
        p.register_agent("b", [Behaviour(ping, on_message=MessageFilter(performative=A.INFORM))])
        tell(p, "a", "b")
        with pytest.raises(LivelockGuard):
            p.run_until_idle()


class TestRunUntilIdle:
    def test_empty_platform_empty_trace(self):
        p = new_platform()
        assert len(p.run_until_idle()) == 0

    def test_directives_injected_at_their_times(self):
        p = new_platform()
        times = []
        p.inject_at(500, lambda: times.append(p.clock.now))
        p.inject_at(1500, lambda: times.append(p.clock.now))
        p.run_until_idle()
        assert times == [500, 1500]
        assert p.clock.now == 1500

    def test_horizon_stops_early(self):
        p = new_platform()
        p.register_agent("a")
        fired = []
        p.add_behaviour("a", Behaviour(lambda ctx, ev: fired.append(ctx.now), on_timer="t"))
        p.schedule_after(1000, p.aid_of("a"), "t")
        p.schedule_after(9000, p.aid_of("a"), "t")
        p.run_until_idle(horizon_ms=5000)
        assert fired == [1000]
        assert p.clock.now == 5000
        p.run_until_idle()
        assert fired == [1000, 9000]

    def test_deliveries_before_timers_at_same_instant(self):
        p = new_platform()
        p.register_agent("a")
        p.register_agent("b")
        order = []
        p.add_behaviour(
            "b",
            Behaviour(lambda ctx, m: order.append("message"), on_message=MessageFilter()),
        )
        p.add_behaviour("a", Behaviour(lambda ctx, ev: order.append("timer"), on_timer="t"))

        def kick(ctx, ev):
            p.schedule_after(0, p.aid_of("a"), "t")
            ctx.send(A.INFORM, [p.aid_of("b")], "x", conversation_id="cv", ontology="t")

        p.register_agent("c", [Behaviour(kick, kind=BehaviourKind.ONE_SHOT)])
        p.run_until_idle()
        assert order == ["message", "timer"]
