"""SKI combinator terms, their reduction, and their encoding as graphs.

Rules: ``I x -> x``, ``K x y -> x``, ``S x y z -> x z (y z)``.
:func:`reduce_step` contracts the leftmost-outermost redex (normal order),
which finds a normal form whenever one exists. Free variables such as
``x`` may appear as inert leaves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import NamedTuple, Union

from .field import AdjacencyField, FieldError, RingSpec, make_field

__all__ = [
    "SkiError",
    "Comb",
    "Var",
    "App",
    "S",
    "K",
    "I",
    "app",
    "size",
    "parse_term",
    "reduce_step",
    "reduce_step_rightmost",
    "normalize",
    "Normalized",
    "encode_term_as_field",
    "decode_field",
    "DEFAULT_FUEL",
    "DEFAULT_MAX_SIZE",
]

DEFAULT_FUEL = 10_000
DEFAULT_MAX_SIZE = 10_000
ARITY = {"I": 1, "K": 2, "S": 3}


class SkiError(FieldError):
    pass


@dataclass(frozen=True)
class Comb:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    left: "Term"
    right: "Term"

    def __str__(self):
        return f"({self.left} {self.right})"


Term = Union[Comb, Var, App]

S, K, I = Comb("S"), Comb("K"), Comb("I")


def app(*terms: Term) -> Term:
    """Left-associated application: ``app(a, b, c) == ((a b) c)``."""
    if not terms:
        raise SkiError("app needs at least one term")
    t = terms[0]
    for u in terms[1:]:
        t = App(t, u)
    return t


def size(t: Term) -> int:
    """Number of leaves, counting shared subterms once per occurrence."""
    memo: dict[int, int] = {}
    stack = [t]
    while stack:
        u = stack[-1]
        if not isinstance(u, App):
            memo[id(u)] = 1
            stack.pop()
        elif id(u) in memo:
            stack.pop()
        elif id(u.left) in memo and id(u.right) in memo:
            memo[id(u)] = memo[id(u.left)] + memo[id(u.right)]
            stack.pop()
        else:
            stack += (u.left, u.right)
    return memo[id(t)]


_TOKEN = re.compile(r"\s*(\(|\)|[A-Za-z_][A-Za-z0-9_']*)")


def parse_term(text: str) -> Term:
    """Parse parenthesized prefix text such as ``((S K) K)`` or ``S K K x``.

    Juxtaposition is left-associative. ``S``, ``K`` and ``I`` are
    combinators; any other identifier is a free variable.
    """
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise SkiError(f"unexpected character {text[pos:].strip()[:1]!r} at offset {pos}")
        tokens.append(m[1])
        pos = m.end()

    def seq(i):
        items = []
        while i < len(tokens) and tokens[i] != ")":
            if tokens[i] == "(":
                t, i = seq(i + 1)
                if i >= len(tokens):
                    raise SkiError("unbalanced '('")
                i += 1
            else:
                tok = tokens[i]
                t = Comb(tok) if tok in ARITY else Var(tok)
                i += 1
            items.append(t)
        if not items:
            raise SkiError("empty application")
        return app(*items), i

    if not tokens:
        raise SkiError("empty term")
    t, i = seq(0)
    if i != len(tokens):
        raise SkiError("unbalanced ')'")
    return t


def _is(t: Term, name: str) -> bool:
    return isinstance(t, Comb) and t.name == name


def _contract(u: Term) -> Term | None:
    """Contract ``u`` if it is itself a redex (I x, K x y or S x y z), else None."""
    if not isinstance(u, App):
        return None
    f = u.left
    if _is(f, "I"):
        return u.right
    if isinstance(f, App):
        if _is(f.left, "K"):
            return f.right
        if isinstance(f.left, App) and _is(f.left.left, "S"):
            x, y, z = f.left.right, f.right, u.right
            return App(App(x, z), App(y, z))
    return None


def _rebuild(path, new: Term) -> Term:
    # path is a linked list (parent, side, rest) from the redex up to the root
    while path is not None:
        parent, side, path = path
        new = App(new, parent.right) if side == 0 else App(parent.left, new)
    return new


def reduce_step(t: Term) -> tuple[Term, bool]:
    """Contract the leftmost-outermost redex. Returns ``(term, reduced)``.

    That is the first redex in a left-to-right preorder walk of the tree.
    """
    stack = [(t, None)]
    while stack:
        u, path = stack.pop()
        r = _contract(u)
        if r is not None:
            return _rebuild(path, r), True
        if isinstance(u, App):
            stack.append((u.right, (u, 1, path)))
            stack.append((u.left, (u, 0, path)))
    return t, False


def reduce_step_rightmost(t: Term) -> tuple[Term, bool]:
    """Contract the rightmost-innermost redex: first redex in a right-to-left postorder walk."""
    stack = [(t, None, False)]
    while stack:
        u, path, done = stack.pop()
        if isinstance(u, App) and not done:
            stack.append((u, path, True))
            stack.append((u.left, (u, 0, path), False))
            stack.append((u.right, (u, 1, path), False))
            continue
        r = _contract(u)
        if r is not None:
            return _rebuild(path, r), True
    return t, False


class Normalized(NamedTuple):
    term: Term
    steps: int
    normal: bool


def normalize(
    t: Term, fuel: int = DEFAULT_FUEL, strategy=reduce_step, max_size: int | None = DEFAULT_MAX_SIZE
) -> Normalized:
    """Reduce until normal form or until ``fuel`` steps are spent.

    ``normal`` is False when the fuel ran out first, or when the term grew
    past ``max_size`` leaves (S duplicates its third argument, so a short
    reduction can still blow up exponentially).
    """
    if fuel < 0:
        raise SkiError("fuel must be non-negative")
    steps = 0
    while True:
        if max_size is not None and size(t) > max_size:
            return Normalized(t, steps, False)
        new, reduced = strategy(t)
        if not reduced:
            return Normalized(t, steps, True)
        if steps == fuel:
            return Normalized(t, steps, False)
        t, steps = new, steps + 1


# -- graph encoding --------------------------------------------------------

LEFT, RIGHT = 1, 2
APP_KIND = "@"


def encode_term_as_field(t: Term, max_vertices: int = 64) -> AdjacencyField:
    """Encode the application tree as a directed field over Z_3.

    Vertices are tree nodes in preorder (label = preorder number). Entry
    ``[p][c]`` is 1 for a left child and 2 for a right child. Node kinds
    (``@`` for applications, leaf names otherwise) are recorded in the
    ``kind`` annotation keyed by label, so any relabeling still decodes.
    """
    kinds: list[str] = []
    edges: list[tuple[int, int, int]] = []
    stack = [(t, None, 0)]
    while stack:
        u, parent, side = stack.pop()
        idx = len(kinds)
        if len(kinds) >= max_vertices:
            raise SkiError(f"term needs more than {max_vertices} vertices")
        if parent is not None:
            edges.append((parent, idx, side))
        if isinstance(u, App):
            kinds.append(APP_KIND)
            stack.append((u.right, idx, RIGHT))
            stack.append((u.left, idx, LEFT))
        else:
            kinds.append(u.name)
    n = len(kinds)
    rows = [[0] * n for _ in range(n)]
    for p, c, side in edges:
        rows[p][c] = side
    kind = " ".join(f"{i + 1}:{k}" for i, k in enumerate(kinds))
    return make_field(n, RingSpec(3), rows, None, [("kind", kind)])


def decode_field(f: AdjacencyField) -> Term:
    """Inverse of :func:`encode_term_as_field`, for any relabeling of its output."""
    spec = f.attribute("kind")
    if spec is None:
        raise SkiError("field has no 'kind' annotation")
    by_label = {}
    for item in spec.split():
        lab, _, k = item.partition(":")
        by_label[int(lab)] = k
    n = f.n
    if set(by_label) != set(range(1, n + 1)):
        raise SkiError("kind annotation does not cover every vertex")
    e = f.entries
    roots = [i for i in range(n) if not any(e[j][i] for j in range(n))]
    if len(roots) != 1:
        raise SkiError(f"expected exactly one root, found {len(roots)}")

    def build(i):
        k = by_label[f.labels[i]]
        kids = {e[i][j]: j for j in range(n) if e[i][j]}
        if k == APP_KIND:
            if set(kids) != {LEFT, RIGHT}:
                raise SkiError(f"application vertex {f.labels[i]} needs a left and a right child")
            return App(build(kids[LEFT]), build(kids[RIGHT]))
        if kids:
            raise SkiError(f"leaf vertex {f.labels[i]} has children")
        return Comb(k) if k in ARITY else Var(k)

    return build(roots[0])
