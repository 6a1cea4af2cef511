"""Agent communication language core: identifiers, communicative acts, message envelope.

Messages are immutable value objects.  Construction helpers enforce the
envelope rules (non-empty receivers, mandatory conversation id, threaded
replies); :func:`validate_message` re-checks the same rules on arbitrary
message values and reports violations as data instead of raising.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class AclError(Exception):
    """Base class for message construction errors."""


class BadAgentName(AclError):
    pass


class EmptyReceivers(AclError):
    pass


class EmptyConversationId(AclError):
    pass


class SenderInReceivers(AclError):
    pass


class UnknownAct(AclError):
    """Raised when deserializing an act name outside the 21-act vocabulary."""


@dataclass(frozen=True, eq=False)
class Aid:
    """Platform-unique agent identifier.

    Equality and hashing use the name only; transport addresses are
    informational and may be empty for in-process agents.
    """

    name: str
    addresses: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.name or any(c.isspace() for c in self.name):
            raise BadAgentName(
                f"agent name must be non-empty and whitespace-free: {self.name!r}"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Aid):
            return NotImplemented
        return self.name == other.name

    def __hash__(self) -> int:
        return hash(self.name)

    def __str__(self) -> str:
        return self.name


class CommunicativeAct(Enum):
    """The closed 21-act vocabulary."""

    PROPOSE = "propose"
    ACCEPT_PROPOSAL = "accept-proposal"
    REJECT_PROPOSAL = "reject-proposal"
    CFP = "cfp"
    REQUEST = "request"
    REQUEST_WHEN = "request-when"
    QUERY_IF = "query-if"
    QUERY_REF = "query-ref"
    CONFIRM = "confirm"
    DISCONFIRM = "disconfirm"
    INFORM = "inform"
    INFORM_IF = "inform-if"
    INFORM_REF = "inform-ref"
    AGREE = "agree"
    REFUSE = "refuse"
    CANCEL = "cancel"
    SUBSCRIBE = "subscribe"
    NOT_UNDERSTOOD = "not-understood"
    FAILURE = "failure"
    PROPAGATE = "propagate"
    PROXY = "proxy"

    def __str__(self) -> str:
        return self.value


class ActPurpose(Enum):
    NEGOTIATION = "negotiation"
    REQUESTING_INFORMATION = "requesting information"
    PASSING_INFORMATION = "passing information"
    PERFORMING_ACTIONS = "performing actions"
    ERROR_HANDLING = "error handling"
    MESSAGE_REFERENCING = "message referencing"


_A = CommunicativeAct
_P = ActPurpose

ACT_PURPOSE: dict[CommunicativeAct, ActPurpose] = {
    _A.PROPOSE: _P.NEGOTIATION,
    _A.ACCEPT_PROPOSAL: _P.NEGOTIATION,
    _A.REJECT_PROPOSAL: _P.NEGOTIATION,
    _A.CFP: _P.NEGOTIATION,
    _A.REQUEST: _P.REQUESTING_INFORMATION,
    _A.REQUEST_WHEN: _P.REQUESTING_INFORMATION,
    _A.QUERY_IF: _P.REQUESTING_INFORMATION,
    _A.QUERY_REF: _P.REQUESTING_INFORMATION,
    _A.CONFIRM: _P.PASSING_INFORMATION,
    _A.DISCONFIRM: _P.PASSING_INFORMATION,
    _A.INFORM: _P.PASSING_INFORMATION,
    _A.INFORM_IF: _P.PASSING_INFORMATION,
    _A.INFORM_REF: _P.PASSING_INFORMATION,
    _A.AGREE: _P.PERFORMING_ACTIONS,
    _A.REFUSE: _P.PERFORMING_ACTIONS,
    _A.CANCEL: _P.PERFORMING_ACTIONS,
    _A.SUBSCRIBE: _P.PERFORMING_ACTIONS,
    _A.NOT_UNDERSTOOD: _P.ERROR_HANDLING,
    _A.FAILURE: _P.ERROR_HANDLING,
    _A.PROPAGATE: _P.MESSAGE_REFERENCING,
    _A.PROXY: _P.MESSAGE_REFERENCING,
}


def act_purpose(act: CommunicativeAct) -> ActPurpose:
    """Map an act to its single purpose category (total over the vocabulary)."""
    return ACT_PURPOSE[act]


def act_from_name(name: str) -> CommunicativeAct:
    """Look up an act by its wire name; unknown names raise :class:`UnknownAct`."""
    for act in CommunicativeAct:
        if act.value == name:
            return act
    raise UnknownAct(f"unknown communicative act {name!r}")


CONTENT_LANGUAGE = "sl-like"


@dataclass(frozen=True)
class AclMessage:
    """Performative-tagged envelope with conversation threading fields.

    The dataclass itself is structurally permissive (so that defective
    messages can be represented and inspected); :func:`build_message` and
    :func:`validate_message` carry the actual envelope rules.
    """

    performative: CommunicativeAct
    sender: Aid
    receivers: tuple[Aid, ...]
    content: str
    ontology: str
    conversation_id: str
    language: str = CONTENT_LANGUAGE
    protocol: str | None = None
    reply_to: tuple[Aid, ...] | None = None
    reply_with: str | None = None
    in_reply_to: str | None = None


class TokenSource:
    """Per-agent monotonic counters for reply-with tokens and conversation ids.

    One instance per platform run keeps traces deterministic across runs.
    """

    def __init__(self) -> None:
        self._reply: dict[str, int] = {}
        self._conversation: dict[str, int] = {}

    def next_reply_with(self, sender: str) -> str:
        n = self._reply.get(sender, 0) + 1
        self._reply[sender] = n
        return f"{sender}-{n}"

    def next_conversation_id(self, initiator: str) -> str:
        n = self._conversation.get(initiator, 0) + 1
        self._conversation[initiator] = n
        return f"{initiator}-cv-{n}"


_DEFAULT_TOKENS = TokenSource()


def build_message(
    performative: CommunicativeAct,
    sender: Aid,
    receivers: list[Aid] | tuple[Aid, ...],
    content: str,
    ontology: str,
    conversation_id: str,
    *,
    reply_to: list[Aid] | tuple[Aid, ...] | None = None,
    protocol: str | None = None,
    in_reply_to: str | None = None,
    tokens: TokenSource | None = None,
) -> AclMessage:
    """Construct a well-formed message with a fresh reply-with token.

    Raises :class:`EmptyReceivers`, :class:`EmptyConversationId` or
    :class:`SenderInReceivers` when the envelope rules are broken.
    """
    receivers = tuple(receivers)
    if not receivers:
        raise EmptyReceivers("a message needs at least one receiver")
    if not conversation_id:
        raise EmptyConversationId("conversation id is mandatory")
    if any(r == sender for r in receivers):
        raise SenderInReceivers(f"{sender.name} cannot be among its own receivers")
    source = tokens if tokens is not None else _DEFAULT_TOKENS
    return AclMessage(
        performative=performative,
        sender=sender,
        receivers=receivers,
        content=content,
        ontology=ontology,
        conversation_id=conversation_id,
        protocol=protocol,
        reply_to=tuple(reply_to) if reply_to is not None else None,
        reply_with=source.next_reply_with(sender.name),
        in_reply_to=in_reply_to,
    )


def make_reply(
    original: AclMessage,
    performative: CommunicativeAct,
    content: str,
    *,
    sender: Aid | None = None,
    tokens: TokenSource | None = None,
) -> AclMessage:
    """Thread a reply: same conversation, in-reply-to the original's token.

    The replier defaults to the original's first receiver; receivers follow
    the original's reply-to override when present, else go back to its sender.
    """
    replier = sender if sender is not None else original.receivers[0]
    receivers = original.reply_to if original.reply_to else (original.sender,)
    return build_message(
        performative,
        replier,
        receivers,
        content,
        original.ontology,
        original.conversation_id,
        protocol=original.protocol,
        in_reply_to=original.reply_with,
        tokens=tokens,
    )


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_message(m: AclMessage) -> ValidationReport:
    """Check the envelope invariants; violations are reported, never raised."""
    report = ValidationReport()
    if not isinstance(m.performative, CommunicativeAct):
        report.violations.append(f"unknown communicative act {m.performative!r}")
    if not m.conversation_id:
        report.violations.append("mandatory conversation-id missing")
    if not m.receivers:
        report.violations.append("receivers list is empty")
    if any(r == m.sender for r in m.receivers):
        report.violations.append("sender appears in its own receivers")
    return report
