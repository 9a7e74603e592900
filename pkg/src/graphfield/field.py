"""Labeled adjacency fields over the finite ring Z_m.

An :class:`AdjacencyField` is an ``n x n`` matrix with entries in
``{0, ..., m-1}`` together with a label vector, a permutation of
``1..n`` naming the vertex that sits at each row/column position.
Entry ``[i][j]`` is nonzero iff the vertex at position ``i`` is connected
to the vertex at position ``j``.

All values are immutable; every operation returns a new field.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FieldError",
    "RingSpec",
    "LabelVector",
    "AdjacencyField",
    "VertexClass",
    "make_field",
    "identity_labels",
    "zero_field",
    "entrywise_op",
    "apply_relabeling",
    "classify_vertices",
    "is_isomorphic",
    "MAX_EXHAUSTIVE_N",
]

MAX_EXHAUSTIVE_N = 8


class FieldError(ValueError):
    """Raised when a field, ring or label vector violates its invariants."""


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    return all(m % p for p in range(2, int(m**0.5) + 1))


@dataclass(frozen=True)
class RingSpec:
    """The ring Z_m that field entries live in."""

    modulus: int = 2

    def __post_init__(self):
        if not isinstance(self.modulus, int) or self.modulus < 2:
            raise FieldError(f"ring modulus must be an integer >= 2, got {self.modulus!r}")

    @property
    def is_field(self) -> bool:
        """True when the modulus is prime, i.e. division is defined."""
        return _is_prime(self.modulus)

    def inverse(self, x: int) -> int:
        if not self.is_field:
            raise FieldError(f"division requires a prime modulus, Z_{self.modulus} is not a field")
        if x % self.modulus == 0:
            raise FieldError("division by zero entry")
        return pow(x, -1, self.modulus)


class LabelVector(tuple):
    """A permutation of ``1..n`` stored as a tuple of ints (1-based)."""

    def __new__(cls, labels: Iterable[int] = ()):
        labels = tuple(int(x) for x in labels)
        if sorted(labels) != list(range(1, len(labels) + 1)):
            raise FieldError(f"labels {labels} are not a permutation of 1..{len(labels)}")
        return super().__new__(cls, labels)

    @classmethod
    def identity(cls, n: int) -> "LabelVector":
        return cls(range(1, n + 1))

    def inverse(self) -> "LabelVector":
        inv = [0] * len(self)
        for pos, lab in enumerate(self, start=1):
            inv[lab - 1] = pos
        return LabelVector(inv)

    def __repr__(self):
        return f"LabelVector({tuple(self)})"


def identity_labels(n: int) -> LabelVector:
    return LabelVector.identity(n)


Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class AdjacencyField:
    """An ``n x n`` matrix over Z_m paired with a label vector.

    Build instances through :func:`make_field`, which validates; the
    constructor itself also validates so that no invalid field can exist.
    ``attributes`` carries free-form ``(key, value)`` annotations (direction,
    colour, combinator kinds, ...) that ride along verbatim.
    """

    entries: Matrix
    labels: LabelVector
    ring: RingSpec = RingSpec(2)
    attributes: tuple[tuple[str, str], ...] = dc_field(default=(), compare=True)

    def __post_init__(self):
        n = len(self.entries)
        for i, row in enumerate(self.entries):
            if len(row) != n:
                raise FieldError(f"dimension mismatch: row {i + 1} has {len(row)} entries, expected {n}")
            for j, x in enumerate(row):
                if not 0 <= x < self.ring.modulus:
                    raise FieldError(
                        f"entry ({i + 1},{j + 1}) = {x} outside Z_{self.ring.modulus}"
                    )
        if len(self.labels) != n:
            raise FieldError(f"label vector has length {len(self.labels)}, expected {n}")
        if not isinstance(self.labels, LabelVector):
            object.__setattr__(self, "labels", LabelVector(self.labels))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def modulus(self) -> int:
        return self.ring.modulus

    def to_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64).reshape(self.n, self.n)

    def flat(self) -> tuple[int, ...]:
        """Row-major entry sequence."""
        return tuple(x for row in self.entries for x in row)

    def is_symmetric(self) -> bool:
        return all(
            self.entries[i][j] == self.entries[j][i]
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def position_of(self, label: int) -> int:
        """0-based position of the vertex carrying ``label``."""
        return self.labels.index(label)

    def attribute(self, key: str, default: str | None = None) -> str | None:
        for k, v in self.attributes:
            if k == key:
                return v
        return default

    def with_entries(self, entries: Sequence[Sequence[int]]) -> "AdjacencyField":
        return make_field(len(entries), self.ring, entries, self.labels, self.attributes)

    def __str__(self):
        rows = "\n".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"{self.n} {self.modulus}\n{' '.join(map(str, self.labels))}\n{rows}"


def make_field(
    n: int,
    ring: RingSpec | int,
    entries: Sequence[Sequence[int]],
    labels: Sequence[int] | None = None,
    attributes: Iterable[tuple[str, str]] = (),
) -> AdjacencyField:
    """Validate and build an :class:`AdjacencyField`.

    ``labels`` defaults to the identity labeling ``(1, ..., n)``.
    Raises :class:`FieldError` on a dimension mismatch, an entry outside
    Z_m, or a label vector that is not a permutation.
    """
    if isinstance(ring, int):
        ring = RingSpec(ring)
    if n < 0:
        raise FieldError(f"vertex count must be non-negative, got {n}")
    rows = tuple(tuple(int(x) for x in row) for row in entries)
    if len(rows) != n:
        raise FieldError(f"dimension mismatch: {len(rows)} rows, expected {n}")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise FieldError(f"dimension mismatch: row {i + 1} has {len(row)} entries, expected {n}")
    lv = LabelVector.identity(n) if labels is None else LabelVector(labels)
    return AdjacencyField(rows, lv, ring, tuple((str(k), str(v)) for k, v in attributes))


def zero_field(n: int, ring: RingSpec | int = 2, labels: Sequence[int] | None = None) -> AdjacencyField:
    return make_field(n, ring, [[0] * n for _ in range(n)], labels)


def _ring_add(m, x, y):
    return (x + y) % m


def _ring_sub(m, x, y):
    return (x - y) % m


_OPS = {"add": _ring_add, "+": _ring_add, "sub": _ring_sub, "-": _ring_sub}


def entrywise_op(a: AdjacencyField, b: AdjacencyField, op: str) -> AdjacencyField:
    """Combine two fields entry by entry in Z_m.

    ``op`` is one of ``add``/``+``, ``sub``/``-``, ``div``/``/``. Division is
    entrywise multiplication by the inverse and needs a prime modulus and a
    divisor with no zero entries. The result keeps ``a``'s labels.
    """
    if a.n != b.n:
        raise FieldError(f"shape mismatch: {a.n}x{a.n} vs {b.n}x{b.n}")
    if a.ring != b.ring:
        raise FieldError(f"ring mismatch: Z_{a.modulus} vs Z_{b.modulus}")
    m = a.modulus
    if op in ("div", "/"):
        inv = {}
        for row in b.entries:
            for y in row:
                if y not in inv:
                    inv[y] = a.ring.inverse(y)
        out = [[(x * inv[y]) % m for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)]
    elif op in _OPS:
        f = _OPS[op]
        out = [[f(m, x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)]
    else:
        raise FieldError(f"unknown ring operation {op!r}")
    return AdjacencyField(tuple(map(tuple, out)), a.labels, a.ring, a.attributes)


def apply_relabeling(f: AdjacencyField, new_labels: Sequence[int]) -> AdjacencyField:
    """Reorder rows and columns so the vertex labeled ``new_labels[i]`` sits at position ``i``.

    Rows and columns move together, so the result is the same graph with
    its vertices listed in a different order.
    """
    new = LabelVector(new_labels)
    if len(new) != f.n:
        raise FieldError(f"label vector has length {len(new)}, expected {f.n}")
    pos = [f.position_of(lab) for lab in new]
    rows = tuple(tuple(f.entries[pi][pj] for pj in pos) for pi in pos)
    return AdjacencyField(rows, new, f.ring, f.attributes)


@dataclass(frozen=True)
class VertexClass:
    vertex: int
    degree: int
    is_endpoint: bool
    is_polar: bool


def degrees(f: AdjacencyField) -> list[int]:
    """Degree of each position, counted on the symmetrized matrix.

    A position's degree is the number of nonzero entries in its row of
    ``A | A^T``; a self-loop counts once.
    """
    e = f.entries
    return [sum(1 for j in range(f.n) if e[i][j] or e[j][i]) for i in range(f.n)]


def classify_vertices(f: AdjacencyField) -> list[VertexClass]:
    """Endpoint and polar flags for every vertex, in position order.

    ``vertex`` is the vertex's label. A vertex is an endpoint when its degree
    is 1, and polar when the graph is not degree-regular and some other
    vertex has a different degree.
    """
    deg = degrees(f)
    regular = len(set(deg)) <= 1
    out = []
    for i, d in enumerate(deg):
        polar = not regular and any(d != d2 for k, d2 in enumerate(deg) if k != i)
        out.append(VertexClass(f.labels[i], d, d == 1, polar))
    return out


@lru_cache(maxsize=None)
def all_permutations(n: int) -> np.ndarray:
    """Every permutation of ``range(n)`` as rows of an int array."""
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp).reshape(-1, n)


def is_isomorphic(a: AdjacencyField, b: AdjacencyField) -> bool:
    """Exhaustive isomorphism test: does some permutation P give P a P^T == b?

    Labels are ignored; only the entry matrices are compared. Limited to
    ``n <= 8``.
    """
    if a.n != b.n:
        return False
    if a.ring != b.ring:
        raise FieldError(f"ring mismatch: Z_{a.modulus} vs Z_{b.modulus}")
    n = a.n
    if n > MAX_EXHAUSTIVE_N:
        raise FieldError(f"exhaustive isomorphism search limited to n <= {MAX_EXHAUSTIVE_N}, got {n}")
    if n == 0:
        return True
    A, B = a.to_array(), b.to_array()
    if sorted(A.ravel()) != sorted(B.ravel()) or sorted(np.diag(A)) != sorted(np.diag(B)):
        return False
    perms = all_permutations(n)
    permuted = A[perms[:, :, None], perms[:, None, :]]
    return bool((permuted == B).all(axis=(1, 2)).any())
