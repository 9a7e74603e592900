"""Relabeling automorphisms: cyclic shift, transposition and mirror.

The three moves act on label vectors. :func:`generate_group` closes any
choice of them under composition, and :func:`canonical_form` picks the
smallest field in an orbit.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .field import AdjacencyField, FieldError, LabelVector, apply_relabeling

__all__ = [
    "GroupError",
    "GroupElement",
    "cyclic_shift",
    "swap_labels",
    "reverse_labels",
    "mirror",
    "generator_moves",
    "apply_word",
    "generate_group",
    "act",
    "canonical_form",
]


class GroupError(FieldError):
    pass


def cyclic_shift(c: Sequence[int]) -> LabelVector:
    """Rotate the label vector one place left.

    The first value is held aside, every position takes its successor's
    value, and the last position receives the held value.
    """
    c = list(c)
    if not c:
        return LabelVector(())
    first = c[0]
    for i in range(len(c) - 1):
        c[i] = c[i + 1]
    c[-1] = first
    return LabelVector(c)


def swap_labels(c: Sequence[int], i: int, j: int) -> LabelVector:
    """Exchange the values at 1-based positions ``i`` and ``j``."""
    n = len(c)
    if not (1 <= i <= n and 1 <= j <= n):
        raise GroupError(f"swap positions ({i}, {j}) out of range 1..{n}")
    c = list(c)
    c[i - 1], c[j - 1] = c[j - 1], c[i - 1]
    return LabelVector(c)


def reverse_labels(c: Sequence[int]) -> LabelVector:
    return LabelVector(reversed(tuple(c)))


def mirror(f: AdjacencyField, axis: str = "rows") -> AdjacencyField:
    """Reverse the row order, the column order, or both.

    The label vector is reversed along with the chosen axis. ``"both"`` is a
    pure relabeling and leaves the graph unchanged; a single axis is an
    elementary row (column) operation and generally yields a different graph
    whose labels follow the mirrored axis.
    """
    rev = reverse_labels(f.labels)
    if axis == "rows":
        rows = f.entries[::-1]
    elif axis == "columns":
        rows = tuple(row[::-1] for row in f.entries)
    elif axis == "both":
        return apply_relabeling(f, rev)
    else:
        raise GroupError(f"unknown mirror axis {axis!r}")
    return AdjacencyField(tuple(rows), rev, f.ring, f.attributes)


_SWAP = re.compile(r"swap\((\d+),\s*(\d+)\)$")


def generator_moves(n: int, names: Iterable[str]) -> list[tuple[str, Callable]]:
    """Expand generator names into ``(name, move)`` pairs, in a fixed order.

    Accepted names: ``cyclic``, ``mirror``, ``adjacent`` (all transpositions
    of neighbouring positions), ``swaps`` (all transpositions) and
    ``swap(i,j)``.
    """
    moves: dict[str, Callable] = {}
    for name in names:
        name = name.strip()
        if name == "cyclic":
            moves["cyclic"] = cyclic_shift
        elif name == "mirror":
            moves["mirror"] = reverse_labels
        elif name in ("adjacent", "swaps"):
            pairs = (
                [(i, i + 1) for i in range(1, n)]
                if name == "adjacent"
                else [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
            )
            for i, j in pairs:
                moves[f"swap({i},{j})"] = _swapper(i, j)
        elif m := _SWAP.match(name):
            i, j = int(m[1]), int(m[2])
            if not (1 <= i <= n and 1 <= j <= n):
                raise GroupError(f"{name} out of range for n={n}")
            moves[f"swap({i},{j})"] = _swapper(i, j)
        else:
            raise GroupError(f"unknown generator {name!r}")
    return sorted(moves.items(), key=lambda kv: _move_key(kv[0]))


def _move_key(name: str):
    m = _SWAP.match(name)
    if m:
        return (2, int(m[1]), int(m[2]))
    return (0 if name == "cyclic" else 1, 0, 0)


def _swapper(i, j):
    def move(c):
        return swap_labels(c, i, j)

    return move


def apply_word(labels: Sequence[int], word: Iterable[str]) -> LabelVector:
    """Apply named moves left to right to ``labels``."""
    labels = LabelVector(labels)
    table = dict(generator_moves(len(labels), set(word)))
    for name in word:
        labels = table[name](labels)
    return labels


@dataclass(frozen=True)
class GroupElement:
    """A relabeling permutation and the generator word that produced it."""

    mapping: LabelVector
    word: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return len(self.mapping)

    def cycles(self) -> str:
        """Cycle notation of ``position -> mapping[position]``, e.g. ``(1 2 3 4)``."""
        seen = set()
        parts = []
        for start in range(1, self.n + 1):
            if start in seen or self.mapping[start - 1] == start:
                continue
            cyc = [start]
            seen.add(start)
            k = self.mapping[start - 1]
            while k != start:
                cyc.append(k)
                seen.add(k)
                k = self.mapping[k - 1]
            parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) or "()"

    def __str__(self):
        return self.cycles()


def generate_group(n: int, generators: Iterable[str], cap: int = 50_000) -> tuple[GroupElement, ...]:
    """Breadth-first closure of the chosen moves, starting from the identity.

    Elements come out ordered by word length, then by generator order, and
    each carries a shortest witness word. Raises :class:`GroupError` if the
    closure grows past ``cap`` elements.
    """
    if n < 1:
        raise GroupError("group size must be >= 1")
    moves = generator_moves(n, generators)
    start = LabelVector.identity(n)
    seen = {start: ()}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        word = seen[cur]
        for name, move in moves:
            nxt = move(cur)
            if nxt not in seen:
                if len(seen) >= cap:
                    raise GroupError(f"group closure exceeded cap of {cap} elements")
                seen[nxt] = word + (name,)
                queue.append(nxt)
    return tuple(GroupElement(m, w) for m, w in seen.items())


def act(f: AdjacencyField, g: GroupElement) -> AdjacencyField:
    """Relabel ``f`` by ``g`` relative to its current order.

    Position ``i`` of the result holds the vertex that sat at position
    ``g.mapping[i]`` of ``f``.
    """
    if g.n != f.n:
        raise GroupError(f"group element of size {g.n} applied to field of size {f.n}")
    return apply_relabeling(f, [f.labels[k - 1] for k in g.mapping])


def canonical_form(f: AdjacencyField, group: Sequence[GroupElement]) -> AdjacencyField:
    """The orbit member with the smallest row-major entry sequence.

    Ties go to the smallest label vector, so the answer depends only on the
    orbit, not on which member was passed in.
    """
    if not group:
        raise GroupError("canonical form needs a nonempty group")
    n = f.n
    if n == 0:
        return f
    perms = np.array([g.mapping for g in group], dtype=np.intp) - 1
    if perms.shape[1] != n:
        raise GroupError(f"group of size {perms.shape[1]} applied to field of size {n}")
    A = f.to_array()
    keys = A[perms[:, :, None], perms[:, None, :]].reshape(len(perms), n * n)
    labels = np.asarray(f.labels)[perms]
    table = np.concatenate([keys, labels], axis=1)
    best = np.lexsort(table.T[::-1])[0]
    return apply_relabeling(f, labels[best].tolist())
