"""Graph strings: a text form of adjacency fields and its canonical serializer.

Format (one item per line; in the inline form ``/`` separates lines)::

    n m                 vertex count and ring modulus
    l1 l2 ... ln        label vector
    a11 a12 ... a1n     n rows of n entries in Z_m
    ...
    @key=value          optional annotations, kept verbatim

The empty graph is written ``ø``. Annotation values may contain spaces
but not ``/``.

:func:`serialize` first relabels the field canonically, so two fields
describing the same graph produce the same text.
"""

from __future__ import annotations

import numpy as np

from .field import (
    MAX_EXHAUSTIVE_N,
    AdjacencyField,
    FieldError,
    LabelVector,
    RingSpec,
    all_permutations,
    apply_relabeling,
    classify_vertices,
    make_field,
)

__all__ = [
    "EMPTY",
    "GraphSyntaxError",
    "canonical_start_vertices",
    "canonical_order",
    "canonical_label",
    "canonicalize",
    "serialize",
    "format_field",
    "parse",
]

EMPTY = "ø"


class GraphSyntaxError(FieldError):
    """Malformed graph string.

    ``position`` is the 1-based index of the offending token; ``/``
    separators are not counted.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"token {position}: {message}")
        self.position = position


def _start_positions(f: AdjacencyField) -> list[int]:
    classes = classify_vertices(f)
    ends = [i for i, c in enumerate(classes) if c.is_endpoint]
    if ends:
        return ends
    polar = [i for i, c in enumerate(classes) if c.is_polar]
    if polar:
        return polar
    return list(range(f.n))


def canonical_start_vertices(f: AdjacencyField) -> list[int]:
    """Labels of the vertices allowed to start a canonical labeling.

    Endpoints if there are any, otherwise polar vertices, otherwise every
    vertex.
    """
    return [f.labels[i] for i in _start_positions(f)]


def _neighbours(f: AdjacencyField) -> list[frozenset[int]]:
    e = f.entries
    return [
        frozenset(j for j in range(f.n) if j != i and (e[i][j] or e[j][i]))
        for i in range(f.n)
    ]


def _bfs_orders(n: int, nbrs: list[frozenset[int]], starts: list[int]) -> np.ndarray:
    """Every breadth-first vertex order beginning at one of ``starts``, one per row.

    Ties among newly discovered neighbours are taken in all orders, and
    when a component is exhausted the search may restart at any unvisited
    vertex, so the set of orders does not depend on how vertices are numbered.

    Works by filtering all n! permutations: an order is breadth-first exactly
    when the position of each vertex's earliest placed neighbour (its own
    position for a restart) never decreases along the order.
    """
    perms = all_permutations(n)
    perms = perms[np.isin(perms[:, 0], starts)]
    adj = np.zeros((n, n), dtype=bool)
    for i, row in enumerate(nbrs):
        adj[i, list(row)] = True
    reordered = adj[perms[:, :, None], perms[:, None, :]] & np.tri(n, k=-1, dtype=bool)
    parent = np.where(reordered.any(axis=2), reordered.argmax(axis=2), np.arange(n))
    return perms[(np.diff(parent, axis=1) >= 0).all(axis=1)]


def canonical_order(f: AdjacencyField) -> tuple[int, ...]:
    """0-based positions of ``f`` listed in canonical order."""
    n = f.n
    if n == 0:
        return ()
    if n > MAX_EXHAUSTIVE_N:
        raise FieldError(f"canonical labeling limited to n <= {MAX_EXHAUSTIVE_N}, got {n}")
    orders = _bfs_orders(n, _neighbours(f), _start_positions(f))
    A = f.to_array()
    # narrow to the orders with the smallest row-major entry sequence, one
    # entry at a time; remaining ties go to the smallest order
    cand = orders
    for c in range(n * n):
        col = A[cand[:, c // n], cand[:, c % n]]
        cand = cand[col == col.min()]
        if len(cand) == 1:
            break
    for c in range(n):
        cand = cand[cand[:, c] == cand[:, c].min()]
    return tuple(int(i) for i in cand[0])


def canonical_label(f: AdjacencyField) -> LabelVector:
    """The label vector that puts ``f`` into canonical order via :func:`apply_relabeling`."""
    return LabelVector(f.labels[i] for i in canonical_order(f))


def canonicalize(f: AdjacencyField) -> AdjacencyField:
    """``f`` in canonical order, relabeled ``1..n``."""
    g = apply_relabeling(f, canonical_label(f))
    return AdjacencyField(g.entries, LabelVector.identity(f.n), f.ring, f.attributes)


def format_field(f: AdjacencyField, inline: bool = False) -> str:
    """Write ``f`` as-is (no canonicalization) in the graph string format."""
    if f.n == 0:
        return EMPTY
    lines = [f"{f.n} {f.modulus}", " ".join(map(str, f.labels))]
    lines += [" ".join(map(str, row)) for row in f.entries]
    lines += [f"@{k}={v}" for k, v in f.attributes]
    return " / ".join(lines) if inline else "\n".join(lines) + "\n"


def serialize(f: AdjacencyField, inline: bool = False) -> str:
    """Canonical graph string of ``f``."""
    return format_field(canonicalize(f), inline=inline)


def _segments(text: str):
    """Split into lines (``/`` or newline separated) of (position, token) pairs."""
    pos = 0
    for raw in text.replace("\n", "/").split("/"):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("@"):
            pos += 1
            yield pos, [(pos, line)]
            continue
        toks = []
        for t in line.split():
            pos += 1
            toks.append((pos, t))
        yield toks[0][0], toks


def _int(tok, what):
    pos, t = tok
    try:
        return int(t)
    except ValueError:
        raise GraphSyntaxError(f"expected integer {what}, got {t!r}", pos) from None


def parse(text: str) -> AdjacencyField:
    """Read a graph string (multi-line or inline) into an :class:`AdjacencyField`."""
    stripped = text.strip()
    if stripped in ("", EMPTY):
        return make_field(0, 2, [])
    segs = list(_segments(stripped))
    header = segs[0][1]
    if len(header) != 2:
        raise GraphSyntaxError(f"header needs 'n m', got {len(header)} tokens", header[0][0])
    n = _int(header[0], "vertex count")
    m = _int(header[1], "modulus")
    if n < 0:
        raise GraphSyntaxError("vertex count must be non-negative", header[0][0])
    if m < 2:
        raise GraphSyntaxError("modulus must be >= 2", header[1][0])
    body = [s for s in segs[1:] if not s[1][0][1].startswith("@")]
    attrs = []
    for _, toks in segs[1:]:
        pos, t = toks[0]
        if t.startswith("@"):
            key, sep, value = t[1:].partition("=")
            if not sep or not key:
                raise GraphSyntaxError(f"annotation must be '@key=value', got {t!r}", pos)
            attrs.append((key.strip(), value.strip()))
    if n == 0:
        if body:
            raise GraphSyntaxError("unexpected data after empty header", body[0][0])
        return make_field(0, m, [], attributes=attrs)
    end = segs[-1][1][-1][0]
    if len(body) < n + 1:
        raise GraphSyntaxError(f"expected label line and {n} rows, got {len(body)} lines", end + 1)
    if len(body) > n + 1:
        raise GraphSyntaxError("unexpected extra line", body[n + 1][0])
    label_toks = body[0][1]
    if len(label_toks) != n:
        raise GraphSyntaxError(f"expected {n} labels, got {len(label_toks)}", label_toks[0][0])
    labels = [_int(t, "label") for t in label_toks]
    if sorted(labels) != list(range(1, n + 1)):
        raise GraphSyntaxError(f"labels {labels} are not a permutation of 1..{n}", label_toks[0][0])
    rows = []
    for r, (start, toks) in enumerate(body[1:], start=1):
        if len(toks) != n:
            raise GraphSyntaxError(f"row {r} has {len(toks)} entries, expected {n}", start)
        row = []
        for tok in toks:
            x = _int(tok, "entry")
            if not 0 <= x < m:
                raise GraphSyntaxError(f"entry {x} outside Z_{m}", tok[0])
            row.append(x)
        rows.append(row)
    return make_field(n, RingSpec(m), rows, labels, attrs)
