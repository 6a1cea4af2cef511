import pytest

from holonic_workcell.acl import Aid, CommunicativeAct, TokenSource, build_message, make_reply
from holonic_workcell.acl import UnknownAct
from holonic_workcell.trace import (
    EventTrace,
    MessageRecord,
    TransitionRecord,
    parse_trace_text,
    render_record,
    validate_trace,
)

A = CommunicativeAct


def _message(**overrides):
    tokens = overrides.pop("tokens", TokenSource())
    defaults = dict(
        performative=A.REQUEST,
        sender=Aid("orders"),
        receivers=[Aid("robot")],
        content="(X :a 1)",
        ontology="cooperative-workcell",
        conversation_id="cv-1",
    )
    defaults.update(overrides)
    return build_message(
        defaults.pop("performative"),
        defaults.pop("sender"),
        defaults.pop("receivers"),
        defaults.pop("content"),
        defaults.pop("ontology"),
        defaults.pop("conversation_id"),
        tokens=tokens,
        **defaults,
    )


class TestRendering:
    def test_message_line_format(self):
        m = _message()
        line = render_record(MessageRecord(1500, m))
        assert line == "1500\trequest\torders\trobot\tcv-1\t-\t(X :a 1)"

    def test_reply_line_shows_in_reply_to(self):
        tokens = TokenSource()
        original = _message(tokens=tokens)
        reply = make_reply(original, A.CONFIRM, "ok", tokens=tokens)
        line = render_record(MessageRecord(1500, reply))
        assert "\torders-1\t" in line

    def test_transition_line_format(self):
        assert render_record(TransitionRecord(2000, "worker-1", "reserve", "busy")) == (
            "2000\tworker-1\treserve\tbusy"
        )

    def test_content_tabs_and_newlines_escaped(self):
        m = _message(content='(X :a "weird")')
        record = MessageRecord(0, m)
        assert "\n" not in render_record(record)[1:]


class TestParsing:
    def test_round_trip_of_field_structure(self):
        trace = EventTrace()
        trace.append(MessageRecord(0, _message()))
        trace.append(TransitionRecord(10, "robot", "free", "busy"))
        lines = parse_trace_text(trace.render())
        assert [line.kind for line in lines] == ["message", "transition"]
        assert lines[0].fields[1] == "request"
        assert lines[1].fields[1] == "robot"

    def test_unknown_act_flagged_on_deserialization(self):
        with pytest.raises(UnknownAct):
            parse_trace_text("0\tsummon\ta\tb\tcv\t-\tx\n")

    def test_wrong_field_count(self):
        with pytest.raises(ValueError):
            parse_trace_text("0\tonly\tthree\n")


class TestValidateTrace:
    def test_clean_thread(self):
        tokens = TokenSource()
        trace = EventTrace()
        original = _message(tokens=tokens)
        trace.append(MessageRecord(0, original))
        trace.append(MessageRecord(0, make_reply(original, A.CONFIRM, "ok", tokens=tokens)))
        assert validate_trace(trace) == []

    def test_dangling_in_reply_to(self):
        trace = EventTrace()
        trace.append(MessageRecord(0, _message(in_reply_to="ghost-7")))
        problems = validate_trace(trace)
        assert any("ghost-7" in p for p in problems)

    def test_reply_token_scoped_to_conversation(self):
        tokens = TokenSource()
        trace = EventTrace()
        original = _message(tokens=tokens, conversation_id="cv-1")
        trace.append(MessageRecord(0, original))
        stray = _message(
            tokens=tokens, conversation_id="cv-2", in_reply_to=original.reply_with
        )
        trace.append(MessageRecord(0, stray))
        assert validate_trace(trace) != []

    def test_decreasing_timestamps(self):
        trace = EventTrace()
        trace.append(TransitionRecord(10, "robot", "free", "busy"))
        trace.append(TransitionRecord(5, "robot", "busy", "free"))
        assert any("decreases" in p for p in validate_trace(trace))
