import random
from decimal import Decimal

import pytest
from hypothesis import given, settings

from holonic_workcell import sl
from holonic_workcell.sl import (
    Action,
    Atom,
    Float,
    Frame,
    Int,
    Seq,
    SlSyntaxError,
    Str,
    parse_content,
    print_content,
)
from helpers import content_trees


class TestParse:
    def test_simple_frame(self):
        tree = parse_content("(Casing :color red :position A3)")
        assert tree == Frame.of("Casing", ("color", Atom("red")), ("position", Atom("A3")))

    def test_nested_action(self):
        text = (
            "(action (agent-identifier :name pump) "
            "(Pump-Building-Operation :order "
            "(Pump-Customer-Order :color blue :power 5 :amount 3)))"
        )
        tree = parse_content(text)
        assert isinstance(tree, Action)
        assert tree.actor_name == "pump"
        assert tree.act.name == "Pump-Building-Operation"
        order = tree.act.slot("order")
        assert isinstance(order, Frame)
        assert order.slot("power") == Int(5)
        # the round-trip oracle pins the whole literal structure
        assert print_content(tree) == text

    def test_truncated_input(self):
        with pytest.raises(SlSyntaxError):
            parse_content("(Casing :color")

    @pytest.mark.parametrize(
        "bad",
        [
            "",
            "(",
            ")",
            "(Casing :color red))",
            "(Casing : color red)",
            "(Casing :color red :color blue)",  # duplicate slot
            "(Casing color red)",  # missing slot marker
            '"unterminated',
            '"bad \\n escape"',
            "(1Casing)",
            "3.",
        ],
    )
    def test_rejects(self, bad):
        with pytest.raises(SlSyntaxError):
            parse_content(bad)

    def test_whitespace_insignificant(self):
        a = parse_content("(Casing :color red)")
        b = parse_content("  ( Casing\n\t:color    red )  ")
        assert a == b

    def test_sequence(self):
        assert parse_content("(sequence a 1 (X))") == Seq(
            (Atom("a"), Int(1), Frame("X"))
        )

    def test_no_numeric_coercion(self):
        assert parse_content("3") == Int(3)
        assert parse_content("3.0") == Float(Decimal("3.0"))
        assert parse_content("3") != parse_content("3.0")

    def test_strings_with_escapes(self):
        assert parse_content('"a \\"b\\" c\\\\"') == Str('a "b" c\\')

    def test_symbols_case_sensitive(self):
        assert parse_content("Pump-Customer-Order") == Atom("Pump-Customer-Order")
        assert parse_content("pump") != parse_content("Pump")


class TestPrint:
    def test_canonical_frame(self):
        assert print_content(Frame.of("Casing", ("color", Atom("red")))) == "(Casing :color red)"

    def test_negative_and_decimal_numbers(self):
        assert print_content(Int(-5)) == "-5"
        assert print_content(Int(7)) == "7"
        assert print_content(Float(Decimal("2.50"))) == "2.50"

    def test_empty_sequence(self):
        assert print_content(Seq()) == "(sequence)"

    def test_duplicate_slots_unrepresentable(self):
        with pytest.raises(ValueError):
            Frame.of("X", ("a", Atom("1x")), ("a", Atom("2x")))

    def test_actor_shape_enforced(self):
        with pytest.raises(ValueError):
            Action(Frame.of("X", ("name", Atom("y"))), Frame("Z"))


class TestRoundTrip:
    @settings(max_examples=1000, deadline=None)
    @given(content_trees)
    def test_parse_print_identity(self, tree):
        assert parse_content(print_content(tree)) == tree

    @settings(max_examples=300, deadline=None)
    @given(content_trees)
    def test_print_is_idempotent_through_reparse(self, tree):
        text = print_content(tree)
        assert print_content(parse_content(text)) == text


class TestFuzz:
    def test_parser_never_crashes(self):
        """10^4 noisy inputs: one tree or one SlSyntaxError, nothing else."""
        rng = random.Random(20260810)
        alphabet = '()":- \tabcXY019.\\\n'
        seeds = [
            "(Casing :color red :position A3)",
            '(action (agent-identifier :name pump) (X :a 1))',
            "(sequence 1 2.0 three)",
        ]
        for i in range(10_000):
            if i % 2 == 0:
                text = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 40)))
            else:
                chars = list(rng.choice(seeds))
                for _ in range(rng.randrange(1, 4)):
                    pos = rng.randrange(len(chars))
                    chars[pos] = rng.choice(alphabet)
                text = "".join(chars)
            try:
                tree = parse_content(text)
            except SlSyntaxError:
                continue
            assert print_content(tree)  # whatever parsed must also print
