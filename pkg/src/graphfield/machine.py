"""Machine states ``(D, L, T, O)`` and the graph automaton.

A :class:`MachineState` holds data fields ``D`` that share one label vector
``L``, a queue of pending operations ``T`` and the log ``O`` of operations
already applied. :func:`step` moves one operation from ``T`` to ``O``.

:class:`GraphAutomaton` is a deterministic acceptor whose input symbols are
graphs. Symbols are matched up to relabeling, and anything unrecognised
falls into an absorbing nihilation state.
"""

from __future__ import annotations

import copy
import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .automorph import cyclic_shift, canonical_form, generate_group, reverse_labels, swap_labels
from .field import AdjacencyField, FieldError, LabelVector, apply_relabeling, entrywise_op
from .grammar import format_field, parse

__all__ = [
    "MachineError",
    "Op",
    "MachineState",
    "make_state",
    "relabel_state",
    "step",
    "run",
    "branch",
    "GraphAutomaton",
    "AutomatonRun",
    "automaton_run",
    "parse_program",
    "format_program",
    "parse_state",
    "format_state",
    "parse_automaton",
    "format_automaton",
]

RING_OPS = ("+", "-", "/")
LABEL_OPS = ("GCP", "MIRROR")


class MachineError(FieldError):
    """A machine operation failed; ``state`` is the state it failed on."""

    def __init__(self, message: str, state: "MachineState | None" = None):
        super().__init__(message)
        self.state = state


class Op(NamedTuple):
    """One program instruction.

    ``tag`` is ``+``, ``-``, ``/``, ``GCP`` (cyclic relabeling), ``MIRROR``
    (label reversal) or ``SWAP``. ``operands`` are 0-based indices into ``D``
    for ring ops, and 1-based positions for ``SWAP``.
    """

    tag: str
    operands: tuple[int, ...] = ()

    def __str__(self):
        if self.tag in RING_OPS:
            if self.operands == (0, 1):
                return self.tag
            return f"{self.tag}:{','.join(str(i + 1) for i in self.operands)}"
        if self.tag == "SWAP":
            return f"SWAP:{self.operands[0]},{self.operands[1]}"
        return self.tag


def _op(token: str) -> Op:
    tag, _, rest = token.partition(":")
    tag = tag.upper() if tag.isalpha() else tag
    args = tuple(int(x) for x in rest.split(",")) if rest else ()
    if tag in RING_OPS:
        if not args:
            return Op(tag, (0, 1))
        if len(args) != 2 or min(args) < 1:
            raise MachineError(f"ring op {token!r} needs two 1-based operand indices")
        return Op(tag, (args[0] - 1, args[1] - 1))
    if tag in LABEL_OPS and not args:
        return Op(tag)
    if tag == "SWAP" and len(args) == 2:
        return Op(tag, args)
    raise MachineError(f"unknown operation {token!r}")


def parse_program(text: str | Iterable[str]) -> tuple[Op, ...]:
    """Parse ``"+ - / GCP"``-style programs; ``+:2,1`` names operands explicitly."""
    tokens = text.split() if isinstance(text, str) else list(text)
    return tuple(t if isinstance(t, Op) else _op(t) for t in tokens)


def format_program(ops: Iterable[Op]) -> str:
    return " ".join(str(o) for o in ops)


@dataclass(frozen=True)
class MachineState:
    D: tuple[AdjacencyField, ...]
    L: LabelVector
    T: tuple[Op, ...] = ()
    O: tuple[Op, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "L", LabelVector(self.L))
        object.__setattr__(self, "D", tuple(self.D))
        object.__setattr__(self, "T", parse_program(self.T))
        object.__setattr__(self, "O", parse_program(self.O))
        for k, f in enumerate(self.D):
            if f.n != len(self.L):
                raise MachineError(f"field {k + 1} has n={f.n}, label vector has {len(self.L)}")
            if f.ring != self.D[0].ring:
                raise MachineError(f"field {k + 1} is over Z_{f.modulus}, expected Z_{self.D[0].modulus}")
            if f.labels != self.L:
                raise MachineError(f"field {k + 1} labels {tuple(f.labels)} differ from L {tuple(self.L)}")

    @property
    def program(self) -> tuple[Op, ...]:
        """The whole program: applied ops followed by pending ones."""
        return self.O + self.T


def make_state(fields: Sequence[AdjacencyField], program="", labels: Sequence[int] | None = None) -> MachineState:
    """Build a state, taking ``L`` from the first field unless given."""
    if labels is None:
        if not fields:
            raise MachineError("a state without fields needs an explicit label vector")
        labels = fields[0].labels
    return MachineState(tuple(fields), LabelVector(labels), parse_program(program), ())


def relabel_state(s: MachineState, new_labels: Sequence[int]) -> MachineState:
    """Give the state a new label vector and reorder every field to match."""
    new = LabelVector(new_labels)
    return MachineState(tuple(apply_relabeling(f, new) for f in s.D), new, s.T, s.O)


def _execute(s: MachineState, op: Op) -> tuple[tuple[AdjacencyField, ...], LabelVector]:
    if op.tag in RING_OPS:
        i, j = op.operands
        if not (0 <= i < len(s.D) and 0 <= j < len(s.D)):
            raise MachineError(f"operand index out of range in {op} (have {len(s.D)} fields)", s)
        try:
            result = entrywise_op(s.D[i], s.D[j], op.tag)
        except FieldError as exc:
            raise MachineError(f"{op} failed: {exc}", s) from exc
        D = list(s.D)
        D[i] = result
        return tuple(D), s.L
    if op.tag == "GCP":
        new = cyclic_shift(s.L)
    elif op.tag == "MIRROR":
        new = reverse_labels(s.L)
    else:
        try:
            new = swap_labels(s.L, *op.operands)
        except FieldError as exc:
            raise MachineError(str(exc), s) from exc
    return tuple(apply_relabeling(f, new) for f in s.D), new


def step(s: MachineState) -> MachineState:
    """Apply the head of ``T`` and log it in ``O``.

    Ring ops write their result into the first operand's slot. ``GCP``
    rotates ``L`` one place left and reorders every field to the new labels.
    The input state is not modified.
    """
    if not s.T:
        raise MachineError("no pending operations", s)
    op = s.T[0]
    D, L = _execute(s, op)
    return MachineState(D, L, s.T[1:], s.O + (op,))


def run(s: MachineState) -> MachineState:
    """Step until ``T`` is empty. A failing step raises with the failing state attached."""
    while s.T:
        s = step(s)
    return s


def branch(s: MachineState, k: int) -> list[MachineState]:
    """``k`` independent copies of ``s``."""
    if k < 1:
        raise MachineError(f"branch count must be >= 1, got {k}")
    return [copy.deepcopy(s) for _ in range(k)]


@lru_cache(maxsize=32)
def _group(n: int, generators: tuple[str, ...]):
    return generate_group(n, generators)


def symbol_key(f: AdjacencyField, generators: tuple[str, ...] = ("swaps",)):
    """Hashable key of ``f``'s canonical form under the given relabeling moves."""
    if f.n == 0:
        return (0, f.modulus, ())
    c = canonical_form(f, _group(f.n, generators))
    return (c.n, c.modulus, c.entries)


@dataclass(frozen=True)
class GraphAutomaton:
    """Deterministic acceptor over an alphabet of graphs.

    ``alphabet`` maps symbol names to representative fields.
    ``transitions`` maps ``(state, symbol)`` to the next state; missing
    entries go to ``nihilation``, which is absorbing. ``group`` names the
    relabeling moves under which input graphs are identified with symbols
    (``swaps`` = all relabelings).
    """

    states: tuple[str, ...]
    alphabet: dict[str, AdjacencyField]
    transitions: dict[tuple[str, str], str]
    start: str
    accepting: frozenset[str]
    nihilation: str = "nihil"
    group: tuple[str, ...] = ("swaps",)
    state_fields: dict[str, AdjacencyField] = dc_field(default_factory=dict)

    def __post_init__(self):
        states = tuple(dict.fromkeys(self.states))
        if self.nihilation not in states:
            states = states + (self.nihilation,)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        object.__setattr__(self, "group", tuple(self.group))
        if not self.alphabet:
            raise MachineError("alphabet must be nonempty")
        if self.start not in states:
            raise MachineError(f"start state {self.start!r} is not a state")
        if not self.accepting <= set(states):
            raise MachineError(f"accepting states {sorted(self.accepting - set(states))} are not states")
        if self.nihilation in self.accepting:
            raise MachineError("the nihilation state cannot be accepting")
        for s in self.state_fields:
            if s not in states:
                raise MachineError(f"field given for unknown state {s!r}")
        keys = {}
        for name, f in self.alphabet.items():
            k = symbol_key(f, self.group)
            if k in keys:
                raise MachineError(f"symbols {keys[k]!r} and {name!r} are the same graph")
            keys[k] = name
        total = {}
        for (src, sym), dst in self.transitions.items():
            if src not in states or dst not in states:
                raise MachineError(f"transition {src} --{sym}--> {dst} uses an unknown state")
            if sym not in self.alphabet:
                raise MachineError(f"transition on unknown symbol {sym!r}")
            if src == self.nihilation and dst != self.nihilation:
                raise MachineError("transitions out of the nihilation state must stay there")
        for s in states:
            for sym in self.alphabet:
                total[(s, sym)] = self.transitions.get((s, sym), self.nihilation)
        object.__setattr__(self, "transitions", total)
        object.__setattr__(self, "_keys", keys)

    def match(self, f: AdjacencyField) -> str | None:
        """Name of the symbol ``f`` is a relabeling of, or None."""
        return self._keys.get(symbol_key(f, self.group))

    def delta(self, state: str, symbol: str | None) -> str:
        if symbol is None:
            return self.nihilation
        return self.transitions[(state, symbol)]


class AutomatonRun(NamedTuple):
    final: str
    accepted: bool
    trace: tuple[tuple[str, str | None, str], ...]


def automaton_run(a: GraphAutomaton, inputs: Iterable[AdjacencyField]) -> AutomatonRun:
    """Feed graphs to the automaton from its start state.

    The trace holds one ``(state, symbol, next_state)`` triple per input;
    ``symbol`` is None for graphs outside the alphabet.
    """
    state = a.start
    trace = []
    for f in inputs:
        sym = a.match(f)
        nxt = a.delta(state, sym)
        trace.append((state, sym, nxt))
        state = nxt
    return AutomatonRun(state, state in a.accepting, tuple(trace))


# -- text formats ---------------------------------------------------------


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_state(text: str) -> MachineState:
    """Read a machine state file.

    ``labels`` (optional), one ``field <inline graph string>`` line per data
    field, and a ``program`` line of pending ops. An optional ``applied``
    line restores ``O``.
    """
    fields, program, applied, labels = [], "", "", None
    for lineno, line in _lines(text):
        key, _, rest = line.partition(" ")
        if key == "field":
            fields.append(parse(rest))
        elif key == "program":
            program = rest
        elif key == "applied":
            applied = rest
        elif key == "labels":
            labels = LabelVector(int(x) for x in rest.split())
        else:
            raise MachineError(f"line {lineno}: unknown directive {key!r}")
    if labels is None:
        if not fields:
            raise MachineError("state file has neither fields nor labels")
        labels = fields[0].labels
    return MachineState(tuple(fields), labels, parse_program(program), parse_program(applied))


def format_state(s: MachineState) -> str:
    lines = [f"labels {' '.join(map(str, s.L))}"]
    lines += [f"field {format_field(f, inline=True)}" for f in s.D]
    lines.append(f"program {format_program(s.T)}".rstrip())
    if s.O:
        lines.append(f"applied {format_program(s.O)}")
    return "\n".join(lines) + "\n"


_WORD = re.compile(r"^[A-Za-z_][\w\-]*$")


def parse_automaton(text: str) -> GraphAutomaton:
    """Read an automaton description.

    Directives: ``states``, ``start``, ``accept``, ``nihilation``,
    ``group``, ``symbol NAME = <inline graph string>``,
    ``state-field NAME = <inline graph string>`` and
    ``transition SRC SYMBOL DST``.
    """
    states, accept, alphabet, trans, fields = [], [], {}, {}, {}
    start, nihil, group = None, "nihil", ("swaps",)
    for lineno, line in _lines(text):
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "states":
            states += rest.split()
        elif key == "start":
            start = rest
        elif key == "accept":
            accept += rest.split()
        elif key == "nihilation":
            nihil = rest
        elif key == "group":
            group = tuple(g for g in rest.replace(",", " ").split())
        elif key in ("symbol", "state-field"):
            name, eq, graph = rest.partition("=")
            name = name.strip()
            if not eq or not _WORD.match(name):
                raise MachineError(f"line {lineno}: expected '{key} NAME = <graph string>'")
            (alphabet if key == "symbol" else fields)[name] = parse(graph)
        elif key == "transition":
            parts = rest.split()
            if len(parts) != 3:
                raise MachineError(f"line {lineno}: expected 'transition SRC SYMBOL DST'")
            trans[(parts[0], parts[1])] = parts[2]
        else:
            raise MachineError(f"line {lineno}: unknown directive {key!r}")
    if start is None:
        raise MachineError("automaton file has no start state")
    return GraphAutomaton(tuple(states), alphabet, trans, start, frozenset(accept), nihil, group, fields)


def format_automaton(a: GraphAutomaton) -> str:
    lines = [
        f"states {' '.join(a.states)}",
        f"start {a.start}",
        f"accept {' '.join(sorted(a.accepting))}".rstrip(),
        f"nihilation {a.nihilation}",
        f"group {','.join(a.group)}",
    ]
    lines += [f"symbol {k} = {format_field(f, inline=True)}" for k, f in a.alphabet.items()]
    lines += [f"state-field {k} = {format_field(f, inline=True)}" for k, f in a.state_fields.items()]
    lines += [
        f"transition {src} {sym} {dst}"
        for (src, sym), dst in a.transitions.items()
        if dst != a.nihilation
    ]
    return "\n".join(lines) + "\n"
