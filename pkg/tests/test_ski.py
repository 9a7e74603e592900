import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphfield.field import apply_relabeling, classify_vertices
from graphfield.ski import (
    App,
    I,
    K,
    S,
    SkiError,
    Var,
    app,
    decode_field,
    encode_term_as_field,
    normalize,
    parse_term,
    reduce_step,
    reduce_step_rightmost,
    size,
)

x, y = Var("x"), Var("y")


def random_term(rng, leaves, atoms=(S, K, I)):
    if leaves == 1:
        return rng.choice(atoms)
    k = rng.randint(1, leaves - 1)
    return App(random_term(rng, k, atoms), random_term(rng, leaves - k, atoms))


terms = st.builds(
    lambda seed, n: random_term(random.Random(seed), n),
    st.integers(0, 2**32),
    st.integers(1, 15),
)


ARITY = {"I": 1, "K": 2, "S": 3}


def spine_step(t, rightmost=False):
    """Reference reducer written on the application spine, recursive."""
    args = []
    head = t
    while isinstance(head, App):
        args.append(head.right)
        head = head.left
    args.reverse()

    def head_redex():
        k = ARITY.get(getattr(head, "name", None)) if not isinstance(head, Var) else None
        if k is None or len(args) < k:
            return None
        a = args[:k]
        r = a[0] if k < 3 else app(a[0], a[2], App(a[1], a[2]))
        return app(r, *args[k:])

    order = range(len(args) - 1, -1, -1) if rightmost else range(len(args))
    if not rightmost and (r := head_redex()) is not None:
        return r, True
    for i in order:
        new, ok = spine_step(args[i], rightmost)
        if ok:
            args[i] = new
            return app(head, *args), True
    if rightmost and (r := head_redex()) is not None:
        return r, True
    return t, False


class TestReduceStep:
    @settings(max_examples=300, deadline=None)
    @given(terms)
    def test_matches_spine_reference(self, t):
        assert reduce_step(t) == spine_step(t)
        assert reduce_step_rightmost(t) == spine_step(t, rightmost=True)

    def test_deep_term(self):
        t = x
        for _ in range(5000):
            t = App(y, t)
        t = App(t, App(I, x))
        assert reduce_step(t)[1] and reduce_step_rightmost(t)[1]


    def test_i(self):
        assert reduce_step(App(I, K)) == (K, True)

    def test_k(self):
        assert reduce_step(app(K, S, K)) == (S, True)

    def test_skk_is_identity(self):
        t = app(S, K, K, x)
        t1, _ = reduce_step(t)
        assert t1 == app(K, x, App(K, x))
        t2, _ = reduce_step(t1)
        assert t2 == x
        assert reduce_step(t2) == (x, False)

    def test_s_rule(self):
        assert reduce_step(app(S, x, y, I)) == (app(x, I, App(y, I)), True)

    def test_normal_forms(self):
        for t in (S, K, I, App(K, S), app(S, K), x, app(x, I)):
            assert reduce_step(t) == (t, False)

    def test_leftmost_outermost(self):
        # outer K-redex discards the inner I-redex before touching it
        t = app(K, x, App(I, y))
        assert reduce_step(t) == (x, True)
        assert reduce_step_rightmost(t) == (app(K, x, y), True)

    def test_reduces_inside_stuck_head(self):
        assert reduce_step(app(x, App(I, y))) == (app(x, y), True)


class TestNormalize:
    def test_steps(self):
        assert normalize(app(S, K, K, x)) == (x, 2, True)

    def test_divergence(self):
        omega_half = app(S, I, I)
        omega = App(omega_half, omega_half)
        res = normalize(omega, fuel=50)
        assert not res.normal and res.steps == 50

    def test_fuel_zero(self):
        assert normalize(App(I, K), fuel=0) == (App(I, K), 0, False)
        assert normalize(K, fuel=0) == (K, 0, True)

    def test_normal_order_finds_normal_form(self):
        omega = App(app(S, I, I), app(S, I, I))
        assert normalize(app(K, I, omega)).term == I

    def test_bad_fuel(self):
        with pytest.raises(SkiError):
            normalize(K, fuel=-1)

    @settings(max_examples=100, deadline=None)
    @given(terms)
    def test_skk_and_k_on_random_arguments(self, t):
        t1, _ = reduce_step(app(S, K, K, t))
        assert reduce_step(t1) == (t, True)
        assert reduce_step(app(K, t, S)) == (t, True)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32), st.integers(1, 10))
    def test_confluence_against_rightmost(self, seed, n):
        t = random_term(random.Random(seed), n)
        left = normalize(t, 200)
        if not left.normal:
            return
        right = normalize(t, 2000, reduce_step_rightmost)
        if right.normal:
            assert right.term == left.term


class TestParse:
    @pytest.mark.parametrize(
        "text, term",
        [
            ("((S K) K)", app(S, K, K)),
            ("S K K x", app(S, K, K, x)),
            ("S (K I) I", app(S, App(K, I), I)),
            ("(I)", I),
        ],
    )
    def test_parse(self, text, term):
        assert parse_term(text) == term

    @given(terms)
    def test_str_round_trip(self, t):
        assert parse_term(str(t)) == t

    @pytest.mark.parametrize("text", ["", "(S K", "S K)", "()", "S + K"])
    def test_errors(self, text):
        with pytest.raises(SkiError):
            parse_term(text)


class TestEncoding:
    def test_leaf(self):
        f = encode_term_as_field(S)
        assert f.n == 1 and f.attribute("kind") == "1:S"

    def test_k_i(self):
        f = encode_term_as_field(App(K, I))
        assert f.n == 3
        assert sum(1 for v in f.entries[0] if v) == 2
        assert decode_field(f) == App(K, I)

    @settings(max_examples=100, deadline=None)
    @given(terms, st.randoms(use_true_random=False))
    def test_round_trip(self, t, rnd):
        f = encode_term_as_field(t)
        assert decode_field(f) == t
        p = list(range(1, f.n + 1))
        rnd.shuffle(p)
        assert decode_field(apply_relabeling(f, p)) == t

    @settings(max_examples=100, deadline=None)
    @given(terms)
    def test_tree_shape(self, t):
        f = encode_term_as_field(t)
        edges = sum(1 for row in f.entries for v in row if v)
        assert f.n == edges + 1
        indeg = [sum(1 for i in range(f.n) if f.entries[i][j]) for j in range(f.n)]
        assert indeg.count(0) == 1
        leaves = [i for i in range(f.n) if not any(f.entries[i])]
        assert len(leaves) == size(t)
        if f.n > 1:
            classes = classify_vertices(f)
            assert all(classes[i].is_endpoint for i in leaves)

    def test_too_large(self):
        with pytest.raises(SkiError):
            encode_term_as_field(app(S, K, I, S), max_vertices=3)
