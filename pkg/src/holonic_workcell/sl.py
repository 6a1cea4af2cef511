"""Parser and canonical printer for the s-expression content language.

Grammar (closed, whitespace between tokens is insignificant)::

    content  := node
    node     := atom | string | number | seq | action | frame
    frame    := "(" SYMBOL slot* ")"
    slot     := ":" SYMBOL node
    seq      := "(" "sequence" node* ")"
    action   := "(" "action" agentid frame ")"
    agentid  := "(" "agent-identifier" ":name" SYMBOL ")"
    SYMBOL   := [A-Za-z][A-Za-z0-9-]*
    string   := double-quoted, backslash escapes for quote and backslash only
    number   := "-"? digits ("." digits)?

``sequence``, ``action`` and ``agent-identifier`` are reserved frame names.
Symbols are case-sensitive.  Numbers keep the integer/decimal distinction:
``3`` and ``3.0`` parse to different nodes.  The canonical printer emits a
single line with one space between tokens, and ``parse(print(tree)) == tree``
holds for every valid tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal


class SlSyntaxError(Exception):
    """Parse failure with the offending position and what was expected there."""

    def __init__(self, position: int, expected: str) -> None:
        super().__init__(f"at position {position}: expected {expected}")
        self.position = position
        self.expected = expected


_SYMBOL_RE = re.compile(r"[A-Za-z][A-Za-z0-9-]*")
_NUMBER_RE = re.compile(r"-?[0-9]+(\.[0-9]+)?")


@dataclass(frozen=True)
class Atom:
    symbol: str


@dataclass(frozen=True)
class Str:
    text: str

    def __post_init__(self) -> None:
        if any(ord(c) < 0x20 for c in self.text):
            raise ValueError("control characters are not representable in strings")


@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Float:
    # Decimal rather than binary float: the grammar has no exponent form and
    # printing must round-trip exactly.
    value: Decimal


@dataclass(frozen=True)
class Frame:
    name: str
    slots: tuple[tuple[str, "Node"], ...] = ()

    def __post_init__(self) -> None:
        names = [n for n, _ in self.slots]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate slot names in frame {self.name}")

    @classmethod
    def of(cls, name: str, *slots: tuple[str, "Node"]) -> "Frame":
        return cls(name, tuple(slots))

    def slot(self, name: str) -> "Node | None":
        for n, v in self.slots:
            if n == name:
                return v
        return None


@dataclass(frozen=True)
class Seq:
    items: tuple["Node", ...] = ()


@dataclass(frozen=True)
class Action:
    actor: Frame
    act: Frame

    def __post_init__(self) -> None:
        ok = (
            self.actor.name == "agent-identifier"
            and len(self.actor.slots) == 1
            and self.actor.slots[0][0] == "name"
            and isinstance(self.actor.slots[0][1], Atom)
        )
        if not ok:
            raise ValueError("action actor must be (agent-identifier :name <symbol>)")

    @classmethod
    def by(cls, actor_name: str, act: Frame) -> "Action":
        return cls(Frame.of("agent-identifier", ("name", Atom(actor_name))), act)

    @property
    def actor_name(self) -> str:
        value = self.actor.slots[0][1]
        assert isinstance(value, Atom)
        return value.symbol


Node = Atom | Str | Int | Float | Frame | Seq | Action

_RESERVED = ("sequence", "action", "agent-identifier")


class _Parser:
    """Single-pass recursive descent over the raw text, no backtracking."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def fail(self, expected: str) -> SlSyntaxError:
        return SlSyntaxError(self.pos, expected)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str, what: str) -> None:
        if self.peek() != char:
            raise self.fail(what)
        self.pos += 1

    def symbol(self, what: str = "a symbol") -> str:
        self.skip_ws()
        m = _SYMBOL_RE.match(self.text, self.pos)
        if not m:
            raise self.fail(what)
        self.pos = m.end()
        self._boundary()
        return m.group()

    def _boundary(self) -> None:
        # bare tokens must be followed by whitespace, a paren, or the end
        if self.pos < len(self.text) and self.text[self.pos] not in " \t\r\n()":
            raise self.fail("a token boundary")

    def number(self) -> Int | Float:
        self.skip_ws()
        m = _NUMBER_RE.match(self.text, self.pos)
        if not m:
            raise self.fail("a number")
        self.pos = m.end()
        self._boundary()
        if m.group(1) is None:
            return Int(int(m.group()))
        return Float(Decimal(m.group()))

    def string(self) -> Str:
        self.expect('"', "a string")
        chars: list[str] = []
        while True:
            if self.pos >= len(self.text):
                raise self.fail("a closing quote")
            c = self.text[self.pos]
            if c == '"':
                self.pos += 1
                self._boundary()
                return Str("".join(chars))
            if c == "\\":
                if self.pos + 1 >= len(self.text):
                    raise self.fail("an escape character")
                nxt = self.text[self.pos + 1]
                if nxt not in ('"', "\\"):
                    self.pos += 1
                    raise self.fail("escape to be \\\" or \\\\")
                chars.append(nxt)
                self.pos += 2
                continue
            if ord(c) < 0x20:
                raise self.fail("a printable string character")
            chars.append(c)
            self.pos += 1

    def node(self) -> Node:
        c = self.peek()
        if c == "":
            raise self.fail("a node")
        if c == "(":
            return self.parenthesized()
        if c == '"':
            return self.string()
        if c == "-" or c.isdigit():
            return self.number()
        return Atom(self.symbol("an atom or a frame"))

    def parenthesized(self) -> Node:
        self.expect("(", "an opening parenthesis")
        name = self.symbol("a frame name")
        if name == "sequence":
            items: list[Node] = []
            while self.peek() != ")":
                items.append(self.node())
            self.expect(")", "a closing parenthesis")
            return Seq(tuple(items))
        if name == "action":
            actor = self.agent_identifier()
            act = self.plain_frame()
            self.expect(")", "a closing parenthesis")
            return Action(actor, act)
        if name == "agent-identifier":
            return self.agent_identifier_body()
        return self.frame_body(name)

    def agent_identifier(self) -> Frame:
        self.expect("(", "an agent-identifier")
        got = self.symbol("agent-identifier")
        if got != "agent-identifier":
            raise self.fail("the symbol agent-identifier")
        return self.agent_identifier_body()

    def agent_identifier_body(self) -> Frame:
        slot = self.slot_name()
        if slot != "name":
            raise self.fail("the slot :name")
        value = Atom(self.symbol("an agent name"))
        self.expect(")", "a closing parenthesis")
        return Frame.of("agent-identifier", ("name", value))

    def plain_frame(self) -> Frame:
        self.expect("(", "a frame")
        name = self.symbol("a frame name")
        if name in _RESERVED:
            raise self.fail("a non-reserved frame name")
        return self.frame_body(name)

    def frame_body(self, name: str) -> Frame:
        slots: list[tuple[str, Node]] = []
        seen: set[str] = set()
        while self.peek() != ")":
            slot = self.slot_name()
            if slot in seen:
                raise self.fail(f"a slot name other than duplicated :{slot}")
            seen.add(slot)
            slots.append((slot, self.node()))
        self.expect(")", "a closing parenthesis")
        return Frame(name, tuple(slots))

    def slot_name(self) -> str:
        self.skip_ws()
        if self.pos >= len(self.text) or self.text[self.pos] != ":":
            raise self.fail("a slot marker ':'")
        self.pos += 1
        m = _SYMBOL_RE.match(self.text, self.pos)
        if not m:
            raise self.fail("a slot name directly after ':'")
        self.pos = m.end()
        self._boundary()
        return m.group()


def parse_content(text: str) -> Node:
    """Parse one node; trailing input raises :class:`SlSyntaxError`."""
    parser = _Parser(text)
    tree = parser.node()
    if not parser.at_end():
        raise parser.fail("end of input")
    return tree


def print_content(tree: Node) -> str:
    """Canonical single-line rendering; inverse of :func:`parse_content`."""
    if isinstance(tree, Atom):
        return tree.symbol
    if isinstance(tree, Str):
        escaped = tree.text.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{escaped}"'
    if isinstance(tree, Int):
        return str(tree.value)
    if isinstance(tree, Float):
        rendered = format(tree.value, "f")
        return rendered if "." in rendered else rendered + ".0"
    if isinstance(tree, Frame):
        parts = [tree.name]
        for name, value in tree.slots:
            parts.append(f":{name}")
            parts.append(print_content(value))
        return "(" + " ".join(parts) + ")"
    if isinstance(tree, Seq):
        return "(" + " ".join(["sequence", *map(print_content, tree.items)]) + ")"
    if isinstance(tree, Action):
        return f"(action {print_content(tree.actor)} {print_content(tree.act)})"
    raise TypeError(f"not a content node: {tree!r}")
