import random

import pytest
from hypothesis import strategies as st

from graphfield.field import make_field

_ACCEPTANCE = []


def random_field(rng: random.Random, n: int, m: int = 2, density: float = 0.5, symmetric=False, labels=None):
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i if symmetric else 0, n):
            if rng.random() < density:
                rows[i][j] = rng.randrange(1, m)
                if symmetric:
                    rows[j][i] = rows[i][j]
    if labels is None:
        labels = list(range(1, n + 1))
        rng.shuffle(labels)
    return make_field(n, m, rows, labels)


@st.composite
def fields(draw, min_n=1, max_n=6, moduli=(2, 3, 5)):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.sampled_from(moduli))
    entries = draw(st.lists(st.lists(st.integers(0, m - 1), min_size=n, max_size=n), min_size=n, max_size=n))
    labels = draw(st.permutations(list(range(1, n + 1))))
    return make_field(n, m, entries, labels)


@st.composite
def field_pairs(draw, min_n=1, max_n=6, moduli=(2, 3, 5)):
    """Two fields with the same n and ring, sharing a's labels."""
    a = draw(fields(min_n, max_n, moduli))
    entries = draw(
        st.lists(st.lists(st.integers(0, a.modulus - 1), min_size=a.n, max_size=a.n), min_size=a.n, max_size=a.n)
    )
    return a, make_field(a.n, a.ring, entries, a.labels)


def path_field(n, labels=None):
    rows = [[1 if abs(i - j) == 1 else 0 for j in range(n)] for i in range(n)]
    return make_field(n, 2, rows, labels)


def triangle_field(labels=None):
    return make_field(3, 2, [[0, 1, 1], [1, 0, 1], [1, 1, 0]], labels)


def star_field(n=4):
    rows = [[0] * n for _ in range(n)]
    for k in range(1, n):
        rows[0][k] = rows[k][0] = 1
    return make_field(n, 2, rows)


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; the terminal summary prints a line per criterion."""
    entry = {"name": request.node.name, "title": None, "passed": False, "seconds": None}

    def declare(title):
        entry["title"] = title
        return entry

    _ACCEPTANCE.append(entry)
    yield declare


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        for entry in _ACCEPTANCE:
            if entry["name"] == item.name:
                entry["passed"] = rep.passed


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for e in _ACCEPTANCE:
        mark = "PASS" if e["passed"] else "FAIL"
        secs = f" ({e['seconds']:.2f}s)" if e["seconds"] is not None else ""
        terminalreporter.write_line(f"[{mark}] {e['title'] or e['name']}{secs}")
