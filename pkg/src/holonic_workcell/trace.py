"""Event trace records and their line-oriented text format.

Two record kinds share one tab-separated file, distinguished by field count:

* message lines (7 fields):
  ``timestamp  performative  sender  receivers(comma-joined)  conversation-id
  in-reply-to-or-"-"  content``
* state-transition lines (4 fields):
  ``timestamp  agent  old-status  new-status``

Timestamps are virtual milliseconds.  Tabs and newlines inside content are
escaped as ``\\t`` / ``\\n`` so a record is always exactly one line; the
protocol never produces either.  The format is fixed so golden traces can
be compared byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .acl import AclMessage, act_from_name, validate_message


@dataclass(frozen=True)
class MessageRecord:
    ts: int
    message: AclMessage


@dataclass(frozen=True)
class TransitionRecord:
    ts: int
    agent: str
    old: str
    new: str


Record = MessageRecord | TransitionRecord


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def render_record(record: Record) -> str:
    if isinstance(record, MessageRecord):
        m = record.message
        return "\t".join(
            (
                str(record.ts),
                m.performative.value,
                m.sender.name,
                ",".join(r.name for r in m.receivers),
                m.conversation_id,
                m.in_reply_to or "-",
                _escape(m.content),
            )
        )
    return "\t".join((str(record.ts), record.agent, record.old, record.new))


@dataclass
class EventTrace:
    """Ordered run history: every message sent plus every status transition."""

    records: list[Record] = field(default_factory=list)

    def append(self, record: Record) -> None:
        self.records.append(record)

    def messages(self) -> list[MessageRecord]:
        return [r for r in self.records if isinstance(r, MessageRecord)]

    def transitions(self) -> list[TransitionRecord]:
        return [r for r in self.records if isinstance(r, TransitionRecord)]

    def render(self) -> str:
        return "".join(render_record(r) + "\n" for r in self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)


@dataclass(frozen=True)
class ParsedLine:
    """One trace line split back into fields (content stays escaped text)."""

    ts: int
    kind: str  # "message" | "transition"
    fields: tuple[str, ...]


def parse_trace_text(text: str) -> list[ParsedLine]:
    """Re-read an exported trace; flags structurally broken lines.

    Unknown act names raise :class:`~holonic_workcell.acl.UnknownAct`, which
    is the only place act names re-enter the system from text.
    """
    lines: list[ParsedLine] = []
    for i, raw in enumerate(text.splitlines(), start=1):
        parts = tuple(raw.split("\t"))
        if len(parts) == 7:
            act_from_name(parts[1])
            lines.append(ParsedLine(int(parts[0]), "message", parts))
        elif len(parts) == 4:
            lines.append(ParsedLine(int(parts[0]), "transition", parts))
        else:
            raise ValueError(f"trace line {i}: expected 4 or 7 fields, got {len(parts)}")
    return lines


def validate_trace(trace: EventTrace) -> list[str]:
    """Message-level trace checks: envelopes, timestamp order, reply threading.

    A set in-reply-to must equal the reply-with of an earlier message in the
    same conversation (the threading rule that cannot be checked at
    construction time).
    """
    problems: list[str] = []
    last_ts = 0
    seen_tokens: dict[str, set[str]] = {}
    for i, record in enumerate(trace.records):
        if record.ts < last_ts:
            problems.append(f"record {i}: timestamp {record.ts} decreases")
        last_ts = record.ts
        if not isinstance(record, MessageRecord):
            continue
        m = record.message
        report = validate_message(m)
        for violation in report.violations:
            problems.append(f"record {i}: {violation}")
        conversation = seen_tokens.setdefault(m.conversation_id, set())
        if m.in_reply_to is not None and m.in_reply_to not in conversation:
            problems.append(
                f"record {i}: in-reply-to {m.in_reply_to} matches no earlier "
                f"reply-with in conversation {m.conversation_id}"
            )
        if m.reply_with is not None:
            conversation.add(m.reply_with)
    return problems
