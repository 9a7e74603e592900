"""Randomized operation: Las Vegas and Monte Carlo search over relabelings.

Randomness comes from numpy's PCG64 generator seeded with a 64-bit
integer, so a given seed always yields the same trace. Per-trial streams
for parallel use are derived with :func:`trial_seed`, which spawns child
seeds from a ``SeedSequence``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Callable, Iterable, Mapping, NamedTuple

import numpy as np

from .automorph import canonical_form, generate_group, generator_moves
from .field import FieldError
from .machine import AutomatonRun, GraphAutomaton, MachineState, automaton_run, relabel_state

__all__ = [
    "SearchError",
    "VerifierSpec",
    "SearchConfig",
    "SearchResult",
    "TraceStep",
    "VERIFIERS",
    "make_rng",
    "trial_seed",
    "random_search",
    "replay",
    "DensitySampler",
    "transition_density",
    "random_automaton_run",
]

SEED_MASK = (1 << 64) - 1


class SearchError(FieldError):
    pass


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit seed."""
    return np.random.Generator(np.random.PCG64(seed & SEED_MASK))


def trial_seed(seed: int, trial: int) -> int:
    """Independent 64-bit seed for trial number ``trial`` of run ``seed``."""
    child = np.random.SeedSequence(seed & SEED_MASK, spawn_key=(trial,))
    return int(child.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class VerifierSpec:
    predicate: Callable[[MachineState], bool]
    description: str = ""
    score: Callable[[MachineState], float] | None = None


def _sorted_labels(s: MachineState) -> bool:
    return list(s.L) == sorted(s.L)


def _is_canonical(s: MachineState) -> bool:
    if not s.D:
        return True
    f = s.D[0]
    return f.entries == canonical_form(f, generate_group(f.n, ["swaps"])).entries


def _ascending_prefix(s: MachineState) -> float:
    return sum(1 for i, x in enumerate(s.L, start=1) if x == i)


VERIFIERS = {
    "sorted": VerifierSpec(_sorted_labels, "label vector is ascending", _ascending_prefix),
    "canonical": VerifierSpec(_is_canonical, "first data field is in canonical form"),
    "always": VerifierSpec(lambda s: True, "accepts every state"),
    "never": VerifierSpec(lambda s: False, "rejects every state"),
}


@dataclass(frozen=True)
class SearchConfig:
    seed: int = 0
    max_trials: int | None = 1_000_000
    mode: str = "las_vegas"

    def __post_init__(self):
        if self.mode not in ("las_vegas", "monte_carlo"):
            raise SearchError(f"unknown mode {self.mode!r}")
        if self.mode == "monte_carlo" and self.max_trials is None:
            raise SearchError("monte_carlo mode needs a finite max_trials")
        if self.max_trials is not None and self.max_trials < 0:
            raise SearchError("max_trials must be non-negative")


class TraceStep(NamedTuple):
    trial: int
    move: str
    labels: tuple[int, ...]


@dataclass(frozen=True)
class SearchResult:
    state: MachineState
    verified: bool
    trials: int
    trace: tuple[TraceStep, ...]
    mode: str

    @property
    def found(self) -> bool:
        return self.verified

    @property
    def exhausted(self) -> bool:
        return not self.verified


def random_search(
    start: MachineState,
    moves: Iterable[str],
    verifier: VerifierSpec | str,
    cfg: SearchConfig = SearchConfig(),
) -> SearchResult:
    """Random walk over relabelings of ``start`` until ``verifier`` accepts.

    Each trial applies one move chosen uniformly from ``moves`` (names as
    in :func:`~graphfield.automorph.generator_moves`) and tests the result.
    The start state is tested first, at trial 0.

    Las Vegas mode only reports a state the verifier accepted; hitting
    ``max_trials`` gives an unverified, exhausted result. Monte Carlo mode
    returns the best state seen (by the verifier's ``score``, else the last)
    flagged as unverified.
    """
    if isinstance(verifier, str):
        verifier = VERIFIERS[verifier]
    table = generator_moves(len(start.L), moves)
    if not table:
        raise SearchError("move set is empty")
    rng = make_rng(cfg.seed)
    state = start
    trace: list[TraceStep] = []
    if verifier.predicate(state):
        return SearchResult(state, True, 0, (), cfg.mode)
    best, best_score = state, verifier.score(state) if verifier.score else None
    trial = 0
    while cfg.max_trials is None or trial < cfg.max_trials:
        trial += 1
        name, move = table[int(rng.integers(len(table)))]
        state = relabel_state(state, move(state.L))
        trace.append(TraceStep(trial, name, tuple(state.L)))
        if verifier.predicate(state):
            return SearchResult(state, True, trial, tuple(trace), cfg.mode)
        if verifier.score is not None:
            sc = verifier.score(state)
            if sc > best_score:
                best, best_score = state, sc
        else:
            best = state
    return SearchResult(best, False, trial, tuple(trace), cfg.mode)


def replay(start: MachineState, trace: Iterable[TraceStep]) -> list[MachineState]:
    """Re-apply the logged moves to ``start``; checks every logged label vector."""
    table = dict(generator_moves(len(start.L), ["swaps", "cyclic", "mirror"]))
    out = []
    state = start
    for st in trace:
        state = relabel_state(state, table[st.move](state.L))
        if tuple(state.L) != tuple(st.labels):
            raise SearchError(f"trial {st.trial}: replay gives {tuple(state.L)}, trace says {st.labels}")
        out.append(state)
    return out


def _rational(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


class DensitySampler:
    """Seeded sampler drawing symbols with exact rational probabilities.

    Weights are scaled to integers over their common denominator and a
    uniform integer picks the symbol, so the stated density is exact.
    """

    def __init__(self, weights: Mapping[str, Fraction], seed: int = 0):
        self.weights = dict(weights)
        self.symbols = list(self.weights)
        self.denominator = lcm(*(w.denominator for w in self.weights.values()))
        cum, acc = [], 0
        for s in self.symbols:
            acc += int(self.weights[s] * self.denominator)
            cum.append(acc)
        self._cum = cum
        self.rng = make_rng(seed)

    def draw(self) -> str:
        r = int(self.rng.integers(self.denominator))
        for s, c in zip(self.symbols, self._cum):
            if r < c:
                return s
        raise AssertionError("unreachable: cumulative weights reach the denominator")

    def draws(self, k: int) -> list[str]:
        return [self.draw() for _ in range(k)]


def transition_density(weights: Mapping[str, object], seed: int = 0) -> DensitySampler:
    """Validate a symbol density and return a seeded sampler for it.

    Weights may be ints, ``Fraction``s or strings such as ``"1/3"``; they
    must be non-negative and sum to exactly 1.
    """
    if not weights:
        raise SearchError("density needs at least one symbol")
    fr = {k: _rational(v) for k, v in weights.items()}
    for k, v in fr.items():
        if v < 0:
            raise SearchError(f"negative weight {v} for {k!r}")
    total = sum(fr.values(), Fraction(0))
    if total != 1:
        raise SearchError(f"weights sum to {total}, not 1")
    return DensitySampler(fr, seed)


def random_automaton_run(a: GraphAutomaton, sampler: DensitySampler, length: int) -> AutomatonRun:
    """Run ``a`` on ``length`` symbols drawn from ``sampler``."""
    unknown = set(sampler.symbols) - set(a.alphabet)
    if unknown:
        raise SearchError(f"density names symbols outside the alphabet: {sorted(unknown)}")
    return automaton_run(a, [a.alphabet[s] for s in sampler.draws(length)])
