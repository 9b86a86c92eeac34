"""Non-monotone maximization: randomized double greedy plus a wrapper
that runs the hybrid solver on shrinking grounds and keeps the best of
all produced sets and their double-greedy refinements.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .solver import SolverConfig, run_efficient

EXPECTATION_CAP = 14


@dataclass(frozen=True)
class RepetitionsConfig:
    """Wrapper parameters; ``ell`` defaults to ceil(4 * k^(2/3)) when left
    unset. ``epsilon`` feeds the inner solver runs."""

    ell: int = 0  # 0 means derive from k at call time
    epsilon: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.ell < 0:
            raise ValueError("ell must be positive (or 0 for the default)")
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")

    def rounds_for(self, k):
        return self.ell if self.ell else math.ceil(4.0 * k ** (2.0 / 3.0))


def double_greedy(f, edge_set, rng):
    """Randomized double greedy over ``edge_set`` in ascending id order.

    Keeps a growing set X and a shrinking set Y = S; for each element the
    inclusion probability is a'/(a' + b') with a' = max(f(e | X), 0) and
    b' = max(f(Y - e) - f(Y), 0), and 1 when both clip to zero. For
    non-negative f the returned subset T satisfies
    E[f(T)] >= max over subsets of S of f / 2. One uniform draw is
    consumed per element regardless of degenerate probabilities.
    """
    chosen = frozenset()
    remaining = frozenset(edge_set)
    for e in sorted(edge_set):
        p = _inclusion_probability(f, e, chosen, remaining)
        if rng.random() < p:
            chosen = chosen | {e}
        else:
            remaining = remaining - {e}
    return chosen


def _clipped_gains(f, e, chosen, remaining):
    add_gain = f.value(chosen | {e}) - f.value(chosen)
    drop_gain = f.value(remaining - {e}) - f.value(remaining)
    return max(add_gain, 0.0), max(drop_gain, 0.0)


def _inclusion_probability(f, e, chosen, remaining):
    a, b = _clipped_gains(f, e, chosen, remaining)
    if a + b == 0:
        return 1.0
    return a / (a + b)


def double_greedy_exact_expectation(f, edge_set, as_fraction=False):
    """Exact E[f(T)] of double greedy by branching over every coin flip.

    Probabilities and the expectation are carried as exact rationals
    (clipped gains converted exactly, then divided in Fraction space);
    zero-probability branches are skipped. Capped at 14 elements.
    """
    elems = sorted(edge_set)
    if len(elems) > EXPECTATION_CAP:
        raise ValueError(f"exact expectation capped at {EXPECTATION_CAP} elements")

    def walk(pos, chosen, remaining):
        if pos == len(elems):
            return Fraction(f.value(chosen))
        e = elems[pos]
        a, b = _clipped_gains(f, e, chosen, remaining)
        a, b = Fraction(a), Fraction(b)
        p = Fraction(1) if a + b == 0 else a / (a + b)
        total = Fraction(0)
        if p > 0:
            total += p * walk(pos + 1, chosen | {e}, remaining)
        if p < 1:
            total += (1 - p) * walk(pos + 1, chosen, remaining - {e})
        return total

    result = walk(0, frozenset(), frozenset(elems))
    return result if as_fraction else float(result)


@dataclass
class RoundRecord:
    index: int
    alpha: float
    selected: frozenset
    refined: frozenset
    ground: tuple


@dataclass
class RepetitionsTrace:
    rounds: list = field(default_factory=list)
    best: frozenset = frozenset()
    best_value: float = 0.0


def repetitions_with_trace(f, cons, config: RepetitionsConfig):
    """Run ``ell`` solver rounds on shrinking grounds, refine each round's
    set with double greedy, and return the best candidate plus history.

    Round i removes its solver output from the ground before round i+1,
    so the per-round outputs are disjoint. Each round consumes its own
    pair of child RNG streams (solver shift draw, double-greedy coins),
    making rounds individually reproducible.
    """
    ell = config.rounds_for(cons.k)
    streams = np.random.SeedSequence(config.seed).spawn(2 * ell)
    trace = RepetitionsTrace()
    best = None
    best_value = float("-inf")

    remaining = set(cons.edge_ids)
    for i in range(ell):
        solver_rng = np.random.Generator(np.random.PCG64(streams[2 * i]))
        coin_rng = np.random.Generator(np.random.PCG64(streams[2 * i + 1]))
        ground = tuple(sorted(remaining))
        restricted = cons.restrict_ground(ground)
        selected, run_trace = run_efficient(
            f, restricted, SolverConfig(epsilon=config.epsilon), rng=solver_rng
        )
        refined = double_greedy(f, selected, coin_rng)
        trace.rounds.append(
            RoundRecord(i, run_trace.alpha, selected, refined, ground)
        )
        for candidate in (selected, refined):
            value = f.value(candidate)
            if value > best_value:
                best, best_value = candidate, value
        remaining -= selected

    trace.best = frozenset() if best is None else best
    trace.best_value = f.value(trace.best) if best is None else best_value
    return trace.best, trace


def repetitions(f, cons, config: RepetitionsConfig):
    """Best of all round outputs and refinements; see repetitions_with_trace."""
    best, _ = repetitions_with_trace(f, cons, config)
    return best
