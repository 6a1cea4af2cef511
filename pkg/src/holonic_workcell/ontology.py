"""Schema registry and semantic validation for message contents.

Three schema kinds share one namespace: concepts (entities with typed
slots and single inheritance), predicates (relations between schemas),
and actions (operations an agent can be asked to perform).  A registry is
mutable while being populated, then :meth:`OntologyRegistry.finalize`
checks referential integrity and freezes it.

Validation converts raw content trees into typed values and reports
defects as :class:`Violation` data rather than exceptions, so that one
pass over a tree can surface every independent problem it contains.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import sl


class OntologyError(Exception):
    pass


class DuplicateName(OntologyError):
    pass


class DanglingReference(OntologyError):
    pass


class CyclicParentChain(OntologyError):
    pass


class UnknownSchema(OntologyError):
    pass


class RegistryFinalized(OntologyError):
    pass


# ---------------------------------------------------------------------------
# slot kinds


@dataclass(frozen=True)
class StringKind:
    pass


@dataclass(frozen=True)
class IntegerKind:
    pass


@dataclass(frozen=True)
class SymbolKind:
    pass


@dataclass(frozen=True)
class ConceptRef:
    schema: str


@dataclass(frozen=True)
class ListOf:
    element: "StringKind | IntegerKind | SymbolKind | ConceptRef"
    max_len: int | None = None


SlotKind = StringKind | IntegerKind | SymbolKind | ConceptRef | ListOf

STRING = StringKind()
INTEGER = IntegerKind()
SYMBOL = SymbolKind()


@dataclass(frozen=True)
class SlotSpec:
    name: str
    kind: SlotKind
    mandatory: bool = True


@dataclass(frozen=True)
class ConceptSchema:
    name: str
    slots: tuple[SlotSpec, ...]
    parent: str | None = None


@dataclass(frozen=True)
class PredicateSchema:
    name: str
    subject_kind: str
    object_kind: str


@dataclass(frozen=True)
class ActionSchema:
    name: str
    inputs: tuple[tuple[str, str], ...]  # (slot name, concept schema name)
    performer: str  # holon role: customer | product | order


Schema = ConceptSchema | PredicateSchema | ActionSchema


# ---------------------------------------------------------------------------
# typed values produced by validation


@dataclass
class TypedFrame:
    """A frame checked against its concept schema; values are plain Python."""

    schema: str
    values: dict[str, object] = field(default_factory=dict)

    def get(self, slot: str) -> object:
        return self.values[slot]


@dataclass
class TypedAction:
    name: str
    actor: str
    inputs: dict[str, TypedFrame] = field(default_factory=dict)


@dataclass(frozen=True)
class Violation:
    kind: str  # unknown-schema | missing-mandatory-slot | unknown-slot |
    #            kind-mismatch | expected-mismatch | not-an-action
    path: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at {self.path or '<root>'}: {self.detail}"


def _kind_label(kind: SlotKind) -> str:
    if isinstance(kind, StringKind):
        return "string"
    if isinstance(kind, IntegerKind):
        return "integer"
    if isinstance(kind, SymbolKind):
        return "symbol"
    if isinstance(kind, ConceptRef):
        return kind.schema
    if isinstance(kind, ListOf):
        suffix = "" if kind.max_len is None else f", max {kind.max_len}"
        return f"list-of({_kind_label(kind.element)}{suffix})"
    raise TypeError(kind)


class OntologyRegistry:
    """Named collection of concept, predicate and action schemas."""

    def __init__(self, name: str) -> None:
        self.name = name
        self._concepts: dict[str, ConceptSchema] = {}
        self._predicates: dict[str, PredicateSchema] = {}
        self._actions: dict[str, ActionSchema] = {}
        self._finalized = False

    # -- population --------------------------------------------------------

    def register(self, schema: Schema) -> "OntologyRegistry":
        if self._finalized:
            raise RegistryFinalized(f"registry {self.name} is finalized")
        if schema.name in self._all_names():
            raise DuplicateName(schema.name)
        if isinstance(schema, ConceptSchema):
            self._concepts[schema.name] = schema
        elif isinstance(schema, PredicateSchema):
            self._predicates[schema.name] = schema
        elif isinstance(schema, ActionSchema):
            self._actions[schema.name] = schema
        else:
            raise TypeError(f"not a schema: {schema!r}")
        return self

    def finalize(self) -> "OntologyRegistry":
        """Check referential integrity, acyclic inheritance and slot shadowing."""
        for concept in self._concepts.values():
            if concept.parent is not None and concept.parent not in self._concepts:
                raise DanglingReference(
                    f"{concept.name}: parent {concept.parent} is not registered"
                )
            for spec in concept.slots:
                self._check_slot_kind(concept.name, spec.kind)
        self._check_acyclic()
        for concept in self._concepts.values():
            inherited = {s.name for s in self._inherited_slots(concept)}
            for spec in concept.slots:
                if spec.name in inherited:
                    raise DuplicateName(
                        f"{concept.name}: slot {spec.name} shadows an inherited slot"
                    )
        for action in self._actions.values():
            for slot, ref in action.inputs:
                if ref not in self._concepts:
                    raise DanglingReference(
                        f"{action.name}: input {slot} references unknown {ref}"
                    )
        self._finalized = True
        return self

    def _check_slot_kind(self, owner: str, kind: SlotKind) -> None:
        if isinstance(kind, ConceptRef) and kind.schema not in self._concepts:
            raise DanglingReference(f"{owner}: reference to unknown {kind.schema}")
        if isinstance(kind, ListOf):
            self._check_slot_kind(owner, kind.element)

    def _check_acyclic(self) -> None:
        for name in self._concepts:
            seen = set()
            cursor: str | None = name
            while cursor is not None:
                if cursor in seen:
                    raise CyclicParentChain(f"parent cycle through {cursor}")
                seen.add(cursor)
                cursor = self._concepts[cursor].parent

    def _all_names(self) -> set[str]:
        return set(self._concepts) | set(self._predicates) | set(self._actions)

    # -- lookups ------------------------------------------------------------

    @property
    def finalized(self) -> bool:
        return self._finalized

    def concept(self, name: str) -> ConceptSchema:
        try:
            return self._concepts[name]
        except KeyError:
            raise UnknownSchema(name) from None

    def predicate(self, name: str) -> PredicateSchema:
        try:
            return self._predicates[name]
        except KeyError:
            raise UnknownSchema(name) from None

    def action(self, name: str) -> ActionSchema:
        try:
            return self._actions[name]
        except KeyError:
            raise UnknownSchema(name) from None

    def concept_names(self) -> list[str]:
        return sorted(self._concepts)

    def predicate_names(self) -> list[str]:
        return sorted(self._predicates)

    def action_names(self) -> list[str]:
        return sorted(self._actions)

    def _inherited_slots(self, concept: ConceptSchema) -> list[SlotSpec]:
        if concept.parent is None:
            return []
        parent = self._concepts[concept.parent]
        return self._inherited_slots(parent) + list(parent.slots)

    def effective_slots(self, name: str) -> list[SlotSpec]:
        """All slots of a concept, inherited first, in declaration order."""
        concept = self.concept(name)
        return self._inherited_slots(concept) + list(concept.slots)

    def is_a(self, child: str, ancestor: str) -> bool:
        """Reflexive reachability along the parent chain."""
        self.concept(ancestor)
        cursor: str | None = child
        if cursor not in self._concepts:
            raise UnknownSchema(child)
        while cursor is not None:
            if cursor == ancestor:
                return True
            cursor = self._concepts[cursor].parent
        return False

    def holds(self, predicate: str, subject: str, obj: str) -> bool:
        """Evaluate one of the registered relations structurally.

        Is-a follows parent links; Has-a checks slot containment (by slot
        name or referenced concept); Applies-a links a performer role to
        an action schema.
        """
        self.predicate(predicate)
        if predicate == "Is-a":
            return self.is_a(subject, obj)
        if predicate == "Has-a":
            for spec in self.effective_slots(subject):
                if spec.name == obj:
                    return True
                if isinstance(spec.kind, ConceptRef) and spec.kind.schema == obj:
                    return True
            return False
        if predicate == "Applies-a":
            return self.action(obj).performer == subject
        raise UnknownSchema(predicate)

    # -- validation / encoding ----------------------------------------------

    def validate_frame(
        self, tree: sl.Node, expected: str | None = None
    ) -> TypedFrame | list[Violation]:
        """Check a frame tree against its concept schema.

        Returns a :class:`TypedFrame` when clean, otherwise every violation
        found (the walk does not stop at the first defect).
        """
        violations: list[Violation] = []
        typed = self._frame(tree, expected, "", violations)
        if violations:
            return violations
        assert typed is not None
        return typed

    def _frame(
        self,
        tree: sl.Node,
        expected: str | None,
        path: str,
        out: list[Violation],
    ) -> TypedFrame | None:
        if not isinstance(tree, sl.Frame):
            out.append(
                Violation("kind-mismatch", path, f"expected a concept frame, got {type(tree).__name__}")
            )
            return None
        if tree.name not in self._concepts:
            out.append(Violation("unknown-schema", path, tree.name))
            return None
        if expected is not None and not self.is_a(tree.name, expected):
            out.append(
                Violation("expected-mismatch", path, f"{tree.name} is not a {expected}")
            )
        specs = {s.name: s for s in self.effective_slots(tree.name)}
        typed = TypedFrame(tree.name)
        present: set[str] = set()
        for slot_name, value in tree.slots:
            sub = f"{path}.{slot_name}" if path else slot_name
            spec = specs.get(slot_name)
            if spec is None:
                out.append(Violation("unknown-slot", sub, f"{tree.name} has no slot {slot_name}"))
                continue
            present.add(slot_name)
            converted = self._value(value, spec.kind, sub, out)
            if converted is not None:
                typed.values[slot_name] = converted
        for spec in specs.values():
            if spec.mandatory and spec.name not in present:
                sub = f"{path}.{spec.name}" if path else spec.name
                out.append(
                    Violation("missing-mandatory-slot", sub, f"{tree.name} requires {spec.name}")
                )
        return typed

    def _value(
        self, value: sl.Node, kind: SlotKind, path: str, out: list[Violation]
    ) -> object | None:
        if isinstance(kind, SymbolKind):
            if isinstance(value, sl.Atom):
                return value.symbol
        elif isinstance(kind, StringKind):
            if isinstance(value, sl.Str):
                return value.text
        elif isinstance(kind, IntegerKind):
            if isinstance(value, sl.Int):
                return value.value
        elif isinstance(kind, ConceptRef):
            return self._frame(value, kind.schema, path, out)
        elif isinstance(kind, ListOf):
            if isinstance(value, sl.Seq):
                if kind.max_len is not None and len(value.items) > kind.max_len:
                    out.append(
                        Violation(
                            "kind-mismatch",
                            path,
                            f"{len(value.items)} entries exceed the maximum of {kind.max_len}",
                        )
                    )
                    return None
                items = []
                for i, item in enumerate(value.items):
                    converted = self._value(item, kind.element, f"{path}[{i}]", out)
                    if converted is not None:
                        items.append(converted)
                return items
            out.append(
                Violation("kind-mismatch", path, f"expected a sequence, got {type(value).__name__}")
            )
            return None
        out.append(
            Violation(
                "kind-mismatch",
                path,
                f"expected {_kind_label(kind)}, got {sl.print_content(value)}",
            )
        )
        return None

    def decode_action(self, tree: sl.Node) -> TypedAction | list[Violation]:
        """Interpret an action node: resolve the schema, validate every input."""
        if not isinstance(tree, sl.Action):
            return [Violation("not-an-action", "", f"got {type(tree).__name__}")]
        if tree.act.name not in self._actions:
            return [Violation("unknown-schema", "", tree.act.name)]
        schema = self._actions[tree.act.name]
        violations: list[Violation] = []
        typed = TypedAction(schema.name, tree.actor_name)
        expected_slots = dict(schema.inputs)
        for slot_name, value in tree.act.slots:
            if slot_name not in expected_slots:
                violations.append(
                    Violation("unknown-slot", slot_name, f"{schema.name} has no input {slot_name}")
                )
                continue
            frame = self._frame(value, expected_slots[slot_name], slot_name, violations)
            if frame is not None:
                typed.inputs[slot_name] = frame
        present = {name for name, _ in tree.act.slots}
        for slot_name, _ in schema.inputs:
            if slot_name not in present:
                violations.append(
                    Violation("missing-mandatory-slot", slot_name, f"{schema.name} requires {slot_name}")
                )
        if violations:
            return violations
        return typed

    def encode_frame(self, value: TypedFrame | TypedAction) -> sl.Node:
        """Render a typed value back to a content tree.

        Slot emission order equals schema declaration order regardless of
        how the values dict was built, so encode is the exact inverse of
        validate/decode.  Validity of ``value`` is a precondition.
        """
        if isinstance(value, TypedAction):
            schema = self.action(value.name)
            slots = tuple(
                (name, self.encode_frame(value.inputs[name]))
                for name, _ in schema.inputs
                if name in value.inputs
            )
            return sl.Action.by(value.actor, sl.Frame(value.name, slots))
        schema = self.concept(value.schema)
        slots = []
        for spec in self.effective_slots(value.schema):
            if spec.name not in value.values:
                continue
            slots.append((spec.name, self._encode_value(value.values[spec.name], spec.kind)))
        return sl.Frame(value.schema, tuple(slots))

    def _encode_value(self, value: object, kind: SlotKind) -> sl.Node:
        if isinstance(kind, SymbolKind):
            return sl.Atom(str(value))
        if isinstance(kind, StringKind):
            return sl.Str(str(value))
        if isinstance(kind, IntegerKind):
            assert isinstance(value, int)
            return sl.Int(value)
        if isinstance(kind, ConceptRef):
            assert isinstance(value, TypedFrame)
            node = self.encode_frame(value)
            assert isinstance(node, sl.Frame)
            return node
        if isinstance(kind, ListOf):
            assert isinstance(value, list)
            return sl.Seq(tuple(self._encode_value(v, kind.element) for v in value))
        raise TypeError(kind)

    # -- documentation dump --------------------------------------------------

    def dump(self) -> str:
        """Deterministic text listing: one schema per line, slots in order."""
        lines = [f"ontology {self.name}"]
        for name in self.concept_names():
            concept = self._concepts[name]
            head = f"concept {name}"
            if concept.parent is not None:
                head += f" extends {concept.parent}"
            slots = ", ".join(
                f"{s.name} {_kind_label(s.kind)}" + ("" if s.mandatory else " ?")
                for s in concept.slots
            )
            lines.append(f"{head}: {slots}" if slots else head)
        for name in self.predicate_names():
            predicate = self._predicates[name]
            lines.append(
                f"predicate {name}: {predicate.subject_kind} -> {predicate.object_kind}"
            )
        for name in self.action_names():
            action = self._actions[name]
            inputs = ", ".join(f"{slot} {ref}" for slot, ref in action.inputs)
            lines.append(f"action {name} by {action.performer}: {inputs}")
        return "\n".join(lines) + "\n"


def register_schema(registry: OntologyRegistry, schema: Schema) -> OntologyRegistry:
    return registry.register(schema)


# ---------------------------------------------------------------------------
# the cooperative-workcell ontology

CASE_STUDY_ONTOLOGY = "cooperative-workcell"


def build_case_study_ontology() -> OntologyRegistry:
    """The full cooperative-workcell registry: 17 concepts, 3 predicates, 8 actions."""
    reg = OntologyRegistry(CASE_STUDY_ONTOLOGY)

    def concept(name: str, *slots: SlotSpec, parent: str | None = None) -> None:
        reg.register(ConceptSchema(name, slots, parent=parent))

    concept(
        "Pump-Customer-Order",
        SlotSpec("color", SYMBOL),
        SlotSpec("power", INTEGER),
        SlotSpec("amount", INTEGER),
        SlotSpec("aid", SYMBOL),
    )
    concept(
        "Compressor-Customer-Order",
        SlotSpec("color", SYMBOL),
        SlotSpec("power", INTEGER),
        SlotSpec("amount", INTEGER),
        SlotSpec("aid", SYMBOL),
    )
    concept("Casing", SlotSpec("color", SYMBOL), SlotSpec("position", SYMBOL))
    concept("Electrical-Motor", SlotSpec("power", INTEGER), SlotSpec("position", SYMBOL))
    concept("Shaft", SlotSpec("material", SYMBOL), SlotSpec("position", SYMBOL))
    concept("Impeller", SlotSpec("type", SYMBOL), SlotSpec("position", SYMBOL))
    concept("Female-Rotor", SlotSpec("size", SYMBOL), SlotSpec("position", SYMBOL))
    concept("Male-Rotor", SlotSpec("size", SYMBOL), SlotSpec("position", SYMBOL))
    concept(
        "Pump",
        SlotSpec("casing", ConceptRef("Casing")),
        SlotSpec("motor", ConceptRef("Electrical-Motor")),
        SlotSpec("shaft", ConceptRef("Shaft")),
        SlotSpec("impeller", ConceptRef("Impeller")),
        SlotSpec("aid", SYMBOL),
    )
    concept(
        "Compressor",
        SlotSpec("casing", ConceptRef("Casing")),
        SlotSpec("motor", ConceptRef("Electrical-Motor")),
        SlotSpec("female-rotor", ConceptRef("Female-Rotor")),
        SlotSpec("male-rotor", ConceptRef("Male-Rotor")),
        SlotSpec("aid", SYMBOL),
    )
    concept("Pump-Order", SlotSpec("amount", INTEGER), parent="Pump")
    concept("Compressor-Order", SlotSpec("amount", INTEGER), parent="Compressor")
    concept("Operations-List", SlotSpec("operations", ListOf(SYMBOL, max_len=3)))
    concept(
        "Pump-Manufacturing-Order",
        SlotSpec("order", ConceptRef("Pump-Order")),
        SlotSpec("operations", ConceptRef("Operations-List")),
        SlotSpec("aid", SYMBOL),
    )
    concept(
        "Compressor-Manufacturing-Order",
        SlotSpec("order", ConceptRef("Compressor-Order")),
        SlotSpec("operations", ConceptRef("Operations-List")),
        SlotSpec("aid", SYMBOL),
    )
    concept("Worker", SlotSpec("aid", SYMBOL), SlotSpec("workstation", SYMBOL))
    concept("Robot", SlotSpec("aid", SYMBOL))

    reg.register(PredicateSchema("Is-a", "concept", "concept"))
    reg.register(PredicateSchema("Has-a", "concept", "attribute"))
    reg.register(PredicateSchema("Applies-a", "agent", "action"))

    reg.register(
        ActionSchema("Pump-Building-Operation", (("order", "Pump-Customer-Order"),), "customer")
    )
    reg.register(
        ActionSchema(
            "Compressor-Building-Operation", (("order", "Compressor-Customer-Order"),), "customer"
        )
    )
    reg.register(
        ActionSchema(
            "Pump-Manufacturing-Operation",
            (("order", "Pump-Order"), ("operations", "Operations-List")),
            "product",
        )
    )
    reg.register(
        ActionSchema(
            "Compressor-Manufacturing-Operation",
            (("order", "Compressor-Order"), ("operations", "Operations-List")),
            "product",
        )
    )
    reg.register(
        ActionSchema(
            "Pump-Pick-And-Place-Operation",
            (("order", "Pump-Order"), ("worker", "Worker")),
            "order",
        )
    )
    reg.register(
        ActionSchema(
            "Compressor-Pick-And-Place-Operation",
            (("order", "Compressor-Order"), ("worker", "Worker")),
            "order",
        )
    )
    reg.register(
        ActionSchema("Pump-Assembly-Operation", (("order", "Pump-Order"),), "order")
    )
    reg.register(
        ActionSchema("Compressor-Assembly-Operation", (("order", "Compressor-Order"),), "order")
    )
    return reg.finalize()
