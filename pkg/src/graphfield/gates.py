"""Logic gates stored as 4x4 adjacency fields over Z_2, and circuits built from them.

A :class:`GateField` reads its truth table from a 2x2 block of the matrix:
``gate(a, b)`` is the entry at block position ``(a, b)`` (0-indexed), i.e.
matrix position ``(a+1, b+1)`` for the default top-left block.

The published 4x4 gate matrix (:func:`paper_nor_field`) reads out as
NAND under this convention; :func:`nor_field` is the genuine NOR.
Either one is functionally complete.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Callable, Mapping

from .automorph import mirror, swap_labels
from .field import AdjacencyField, FieldError, make_field

__all__ = [
    "GateError",
    "GateField",
    "PAPER_NOR_MATRIX",
    "paper_nor_field",
    "nor_field",
    "gate_eval",
    "truth_table",
    "paper_transformation",
    "Circuit",
    "compose",
    "circuit_table",
    "parse_circuit",
    "detect_primitive",
    "functional_completeness_suite",
    "reachable_functions",
    "expression_circuit",
    "CompletenessReport",
    "STANDARD_TABLES",
]

PAPER_NOR_MATRIX = (
    (1, 1, 0, 0),
    (1, 0, 0, 0),
    (0, 0, 0, 0),
    (0, 0, 0, 0),
)

INPUT_ROWS = ((0, 0), (0, 1), (1, 0), (1, 1))

STANDARD_TABLES = {
    "NOT": (1, 0),
    "OR": (0, 1, 1, 1),
    "AND": (0, 0, 0, 1),
    "XOR": (0, 1, 1, 0),
    "NOR": (1, 0, 0, 0),
    "NAND": (1, 1, 1, 0),
}


class GateError(FieldError):
    pass


@dataclass(frozen=True)
class GateField:
    field: AdjacencyField
    block: tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.field.modulus != 2:
            raise GateError("gate fields live over Z_2")
        r, c = self.block
        if not (0 <= r <= self.field.n - 2 and 0 <= c <= self.field.n - 2):
            raise GateError(f"block {self.block} does not fit in a {self.field.n}x{self.field.n} field")


def paper_nor_field() -> GateField:
    """The published gate matrix, labels (1, 2, 3, 4)."""
    return GateField(make_field(4, 2, PAPER_NOR_MATRIX))


def nor_field() -> GateField:
    """A 4x4 field whose top-left block is the NOR truth table."""
    rows = [[1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    return GateField(make_field(4, 2, rows))


def gate_eval(g: GateField, a: int, b: int) -> int:
    if a not in (0, 1) or b not in (0, 1):
        raise GateError(f"gate inputs must be bits, got ({a}, {b})")
    r, c = g.block
    return g.field.entries[r + a][c + b]


def truth_table(g: GateField) -> tuple[int, ...]:
    """Outputs for inputs 00, 01, 10, 11."""
    return tuple(gate_eval(g, a, b) for a, b in INPUT_ROWS)


def paper_transformation(g: GateField) -> GateField:
    """Exchange rows 2 and 4, then reverse the column order.

    Both steps carry the label vector along: (1,2,3,4) becomes (1,4,3,2)
    and then (2,3,4,1). Applying it twice restores the entries.
    """
    f = g.field
    rows = list(f.entries)
    rows[1], rows[3] = rows[3], rows[1]
    swapped = AdjacencyField(tuple(rows), swap_labels(f.labels, 2, 4), f.ring, f.attributes)
    return GateField(mirror(swapped, "columns"), g.block)


# -- circuits --------------------------------------------------------------


@dataclass(frozen=True)
class Circuit:
    """Acyclic wiring of two-input gates.

    ``gates`` maps a gate name to the two signal names feeding it; signal
    names are circuit inputs or other gates. ``output`` names the signal
    whose value the circuit returns.
    """

    inputs: tuple[str, ...]
    gates: Mapping[str, tuple[str, str]]
    output: str

    def order(self) -> list[str]:
        """Gate names in evaluation order; raises on cycles or dangling wires."""
        known = set(self.inputs) | set(self.gates)
        for name, srcs in self.gates.items():
            if name in self.inputs:
                raise GateError(f"gate {name!r} shadows a circuit input")
            if len(srcs) != 2:
                raise GateError(f"gate {name!r} needs exactly two inputs, got {len(srcs)}")
            for s in srcs:
                if s not in known:
                    raise GateError(f"gate {name!r} input {s!r} is not wired to anything")
        if self.output not in known:
            raise GateError(f"output {self.output!r} is not a signal")
        try:
            order = list(TopologicalSorter({k: set(v) for k, v in self.gates.items()}).static_order())
        except CycleError as exc:
            raise GateError(f"circuit has a cycle: {exc.args[1]}") from None
        return [x for x in order if x in self.gates]


def compose(c: Circuit, inputs: Mapping[str, int], primitive: GateField | None = None) -> int:
    """Evaluate ``c`` on one input assignment, every gate being ``primitive``."""
    g = primitive or paper_nor_field()
    values = {}
    for name in c.inputs:
        if name not in inputs:
            raise GateError(f"no value for input {name!r}")
        values[name] = inputs[name]
    for name in c.order():
        a, b = c.gates[name]
        values[name] = gate_eval(g, values[a], values[b])
    return values[c.output]


def circuit_table(c: Circuit, primitive: GateField | None = None) -> tuple[int, ...]:
    """Output for every assignment of the inputs, in binary counting order."""
    return tuple(
        compose(c, dict(zip(c.inputs, bits)), primitive)
        for bits in itertools.product((0, 1), repeat=len(c.inputs))
    )


def parse_circuit(text: str) -> Circuit:
    """Read a circuit edge list.

    ``inputs a b`` declares inputs, ``SRC -> GATE`` wires a signal into the
    next free input of a gate, and ``output GATE`` names the result::

        inputs a b
        a -> g1
        b -> g1
        g1 -> g2
        g1 -> g2
        output g2
    """
    inputs: list[str] = []
    wires: dict[str, list[str]] = {}
    output = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("inputs"):
            inputs += line.split()[1:]
        elif line.startswith("output"):
            parts = line.split()
            if len(parts) != 2:
                raise GateError(f"line {lineno}: expected 'output NAME'")
            output = parts[1]
        elif "->" in line:
            src, dst = (p.strip() for p in line.split("->", 1))
            wires.setdefault(dst, []).append(src)
            if len(wires[dst]) > 2:
                raise GateError(f"line {lineno}: gate {dst!r} wired more than twice")
        else:
            raise GateError(f"line {lineno}: cannot parse {line!r}")
    if output is None:
        raise GateError("circuit has no output")
    for name, srcs in wires.items():
        if len(srcs) != 2:
            raise GateError(f"gate {name!r} has {len(srcs)} wired input(s), needs 2")
    return Circuit(tuple(inputs), {k: tuple(v) for k, v in wires.items()}, output)


# -- functional completeness ----------------------------------------------


def detect_primitive(g: GateField) -> str:
    table = truth_table(g)
    for name in ("NOR", "NAND"):
        if table == STANDARD_TABLES[name]:
            return name
    raise GateError(f"gate with truth table {table} is neither NOR nor NAND")


def _constructions(kind: str) -> dict[str, Circuit]:
    ab = ("a", "b")
    common = {"NOT": Circuit(("a",), {"n": ("a", "a")}, "n")}
    if kind == "NOR":
        common["OR"] = Circuit(ab, {"t": ("a", "b"), "o": ("t", "t")}, "o")
        common["AND"] = Circuit(ab, {"na": ("a", "a"), "nb": ("b", "b"), "o": ("na", "nb")}, "o")
        common["XOR"] = Circuit(
            ab,
            {
                "t": ("a", "b"),
                "u": ("a", "t"),
                "v": ("b", "t"),
                "xnor": ("u", "v"),
                "o": ("xnor", "xnor"),
            },
            "o",
        )
    else:
        common["AND"] = Circuit(ab, {"t": ("a", "b"), "o": ("t", "t")}, "o")
        common["OR"] = Circuit(ab, {"na": ("a", "a"), "nb": ("b", "b"), "o": ("na", "nb")}, "o")
        common["XOR"] = Circuit(ab, {"t": ("a", "b"), "u": ("a", "t"), "v": ("b", "t"), "o": ("u", "v")}, "o")
    return common


@dataclass(frozen=True)
class CompletenessReport:
    primitive: str
    tables: dict[str, tuple[int, ...]]
    gate_counts: dict[str, int]
    ok: dict[str, bool]
    reachable: int

    @property
    def passed(self) -> bool:
        return all(self.ok.values()) and self.reachable == 16


def functional_completeness_suite(primitive: GateField, depth: int = 5) -> CompletenessReport:
    """Build NOT, OR, AND and XOR from ``primitive`` alone and check their tables.

    Also counts how many of the 16 two-input functions a circuit of depth
    at most ``depth`` can reach.
    """
    kind = detect_primitive(primitive)
    built = _constructions(kind)
    circuits = {k: built[k] for k in ("NOT", "OR", "AND", "XOR")}
    tables = {k: circuit_table(c, primitive) for k, c in circuits.items()}
    ok = {k: tables[k] == STANDARD_TABLES[k] for k in tables}
    counts = {k: len(c.gates) for k, c in circuits.items()}
    reach = reachable_functions(lambda a, b: gate_eval(primitive, a, b), depth)
    return CompletenessReport(kind, tables, counts, ok, len(reach))


def reachable_functions(gate: Callable[[int, int], int], depth: int) -> dict[tuple[int, ...], tuple[int, object]]:
    """Two-input functions computable by circuits of ``gate`` up to ``depth`` levels.

    Keys are truth tables over inputs 00, 01, 10, 11. Each value is
    ``(depth, expr)`` with the smallest depth reaching the function and a
    witness expression: ``"a"``, ``"b"`` or a ``(left, right)`` pair fed to
    one gate. Inputs have depth 0.
    """
    a = tuple(x for x, _ in INPUT_ROWS)
    b = tuple(y for _, y in INPUT_ROWS)
    found = {a: (0, "a"), b: (0, "b")}
    for d in range(1, depth + 1):
        pool = list(found.items())
        for (f, (_, ef)), (g, (_, eg)) in itertools.product(pool, repeat=2):
            h = tuple(gate(x, y) for x, y in zip(f, g))
            if h not in found:
                found[h] = (d, (ef, eg))
    return found


def expression_circuit(expr) -> Circuit:
    """Circuit over inputs ``a``, ``b`` computing a witness expression."""
    gates: dict[str, tuple[str, str]] = {}
    names: dict[object, str] = {}

    def build(e):
        if e in ("a", "b"):
            return e
        if e not in names:
            left, right = build(e[0]), build(e[1])
            names[e] = f"g{len(gates) + 1}"
            gates[names[e]] = (left, right)
        return names[e]

    return Circuit(("a", "b"), gates, build(expr))
