"""Hybrid greedy/local-search solver for matroid k-parity constraints.

A run draws one random shift exponent alpha in (0, 1], defines
geometrically decreasing thresholds m_i = W * 2^(alpha - i) from the
largest singleton marginal W, and builds its solution in threshold
levels: within level i it applies constant-size improving moves whose
added elements gain at least m_i, removing only elements added at the
current level. Two equivalent drivers are provided: a stepwise one that
walks every level index literally, and a fast one that jumps straight to
the next level that can accept an element. With the same seed both
return identical solutions and apply identical move sequences.
"""

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

FIRST_SCAN = "first-scan"


@dataclass(frozen=True)
class Thresholds:
    """Geometric threshold family m_i = scale * 2^(alpha - i), i >= 0."""

    scale: float
    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")

    @property
    def shift(self):
        return 2.0 ** self.alpha

    def level(self, i):
        # same arithmetic as fast_forward, so brackets are bit-exact;
        # scaling by 2^-i is exact, hence level(i-1) == 2 * level(i)
        if i < 0:
            raise ValueError("threshold index must be non-negative")
        return self.scale * self.shift * 2.0 ** (-i)


@dataclass(frozen=True)
class Improvement:
    """One applied move: kind 1 adds one edge, kind 2 swaps one edge for
    a value gain, kind 3 adds two edges (in ``added`` order) and removes
    one. ``removed`` elements always come from the current level."""

    kind: int
    added: tuple
    removed: tuple

    @property
    def add_set(self):
        return frozenset(self.added)

    @property
    def remove_set(self):
        return frozenset(self.removed)


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float
    seed: int = 0
    policy: str = FIRST_SCAN

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.policy != FIRST_SCAN:
            raise ValueError(f"unknown improvement policy {self.policy!r}")


@dataclass
class IterationRecord:
    index: int
    threshold: float
    improvements: list
    selected: tuple  # final level content, ascending ids


@dataclass
class RunTrace:
    """Full history of one run, sufficient to replay the analysis."""

    scale: float
    alpha: float
    shift: float
    epsilon: float
    iterations: list = field(default_factory=list)
    insertion_order: list = field(default_factory=list)
    final: frozenset = frozenset()
    value_calls: int = 0
    feasibility_calls: int = 0

    @property
    def improvement_count(self):
        return sum(len(rec.improvements) for rec in self.iterations)

    def applied_sequence(self):
        """Flat (level index, improvement) list; empty levels contribute
        nothing, so the two drivers agree on it exactly."""
        return [
            (rec.index, imp) for rec in self.iterations for imp in rec.improvements
        ]


def max_singleton_marginal(f, edge_ids):
    """Largest f(e | empty) over the ground set; feasibility is not
    consulted. Empty grounds give -inf, which shuts the run down."""
    ids = list(edge_ids)
    if not ids:
        return float("-inf")
    return max(f.marginal(e, frozenset()) for e in sorted(ids))


def sample_alpha(seed_or_rng):
    """Draw the shift exponent: alpha = 1 - U with U uniform on [0, 1),
    so alpha lands in (0, 1]. Returns (alpha, 2^alpha)."""
    rng = _as_generator(seed_or_rng)
    alpha = 1.0 - rng.random()
    return alpha, 2.0 ** alpha


def fast_forward(scale, shift, best_gain):
    """Smallest level index whose threshold is at most ``best_gain``.

    Computed as ceil(log2(scale * shift) - log2(best_gain)) and then
    nudged by one step if floating error left best_gain outside the
    bracket m_i <= best_gain < m_{i-1}.
    """
    if best_gain <= 0:
        raise ValueError("fast forward requires a positive gain")
    i = math.ceil(math.log2(scale * shift) - math.log2(best_gain))
    i = max(i, 0)

    def level(j):
        return scale * shift * 2.0 ** (-j)

    if level(i) > best_gain:
        i += 1
    elif i >= 1 and level(i - 1) <= best_gain:
        i -= 1
    return i


def find_improvement(f, cons, settled, current, theta, epsilon):
    """First improving move for ``settled | current`` at level theta.

    Deterministic first-improvement scan: single additions over x
    ascending; then swaps over (x, y) lexicographic with y drawn from
    ``current``; then two-for-one moves over unordered pairs {x1, x2}
    lexicographic with y from ``current``, trying the smaller id as the
    first-inserted element before the other labeling. All feasibility
    checks are on (A | S) \\ N. Returns None at a local optimum.
    """
    base = frozenset(settled) | frozenset(current)
    outside = [e for e in cons.edge_ids if e not in base]
    removable = sorted(current)
    f_base = f.value(base)
    marg = {}

    def gain(x):
        if x not in marg:
            marg[x] = f.value(base | {x}) - f_base
        return marg[x]

    for x in outside:
        if gain(x) >= theta and cons.feasible(base | {x}):
            return Improvement(1, (x,), ())

    for x in outside:
        if gain(x) < theta:
            continue
        with_x = base | {x}
        for y in removable:
            swapped = with_x - {y}
            if cons.feasible(swapped) and f.value(swapped) >= f_base + epsilon * theta:
                return Improvement(2, (x,), (y,))

    for p, q in combinations(outside, 2):
        if gain(p) < theta and gain(q) < theta:
            continue
        with_pair = base | {p, q}
        for y in removable:
            if not cons.feasible(with_pair - {y}):
                continue
            f_pair = f.value(with_pair)
            if gain(p) >= theta and f_pair - (f_base + gain(p)) >= theta:
                return Improvement(3, (p, q), (y,))
            if gain(q) >= theta and f_pair - (f_base + gain(q)) >= theta:
                return Improvement(3, (q, p), (y,))
            break  # labelings do not depend on y; this pair is dead
    return None


class _RunState:
    """Shared bookkeeping for both drivers: current solution, insertion
    order (by last addition), move budget, and the trace."""

    def __init__(self, f, cons, epsilon, thresholds):
        self.f = f
        self.cons = cons
        self.epsilon = epsilon
        self.trace = RunTrace(
            scale=thresholds.scale,
            alpha=thresholds.alpha,
            shift=thresholds.shift,
            epsilon=epsilon,
        )
        self.thresholds = thresholds
        self.settled = frozenset()
        self.budget = (1.0 + 2.0 / epsilon) * len(cons.edge_ids)
        self.applied = 0
        self._value_calls_0 = f.calls
        self._feas_calls_0 = cons.feasibility_calls

    def run_level(self, index):
        """Local search at one level; returns the finalized level content."""
        theta = self.thresholds.level(index)
        current = set()
        moves = []
        while True:
            imp = find_improvement(
                self.f, self.cons, self.settled, current, theta, self.epsilon
            )
            if imp is None:
                break
            for y in imp.removed:
                current.remove(y)
                self.trace.insertion_order.remove(y)
            for x in imp.added:
                current.add(x)
                self.trace.insertion_order.append(x)
            moves.append(imp)
            self.applied += 1
            if self.applied > self.budget:
                raise RuntimeError(
                    "improvement budget (1 + 2/eps)|E| exceeded; "
                    "value oracle is inconsistent"
                )
        self.trace.iterations.append(
            IterationRecord(index, theta, moves, tuple(sorted(current)))
        )
        self.settled = self.settled | current
        return current

    def finish(self):
        self.trace.final = self.settled
        self.trace.value_calls = self.f.calls - self._value_calls_0
        self.trace.feasibility_calls = (
            self.cons.feasibility_calls - self._feas_calls_0
        )
        return self.settled, self.trace


def _as_generator(seed_or_rng):
    if callable(getattr(seed_or_rng, "random", None)):
        return seed_or_rng
    return np.random.Generator(np.random.PCG64(seed_or_rng))


def run_reference(f, cons, config, rng=None):
    """Stepwise driver: walks level indices one by one, including levels
    that accept nothing, exactly as the hybrid scheme is defined.

    A provable cap on the level index (never binding for a consistent
    value oracle) turns an endless walk into a loud failure. Returns the
    final edge set and the full trace.
    """
    rng = _as_generator(config.seed if rng is None else rng)
    scale = max_singleton_marginal(f, cons.edge_ids)
    alpha, _ = sample_alpha(rng)
    if not math.isfinite(scale) or scale <= 0:
        return _empty_run(f, cons, config.epsilon, scale, alpha)
    thresholds = Thresholds(scale, alpha)
    state = _RunState(f, cons, config.epsilon, thresholds)

    index = 0
    min_positive = scale
    while True:
        found = _positive_feasible_gain(f, cons, state.settled)
        if found is None:
            break
        min_positive = min(min_positive, found)
        cap = math.ceil(math.log2(scale) - math.log2(min_positive)) + 2
        if index + 1 > cap:
            raise RuntimeError(
                "level index exceeded its provable cap; value oracle is inconsistent"
            )
        index += 1
        state.run_level(index)
    return state.finish()


def run_efficient(f, cons, config, rng=None):
    """Fast driver: computes the best feasible singleton gain, jumps
    straight to the first level whose threshold admits it, and runs the
    same local search there. Produces the same output and the same move
    sequence as the stepwise driver for the same seed.
    """
    rng = _as_generator(config.seed if rng is None else rng)
    scale = max_singleton_marginal(f, cons.edge_ids)
    alpha, _ = sample_alpha(rng)
    if not math.isfinite(scale) or scale <= 0:
        return _empty_run(f, cons, config.epsilon, scale, alpha)
    thresholds = Thresholds(scale, alpha)
    state = _RunState(f, cons, config.epsilon, thresholds)

    index = 0
    while True:
        best = None
        f_settled = f.value(state.settled)
        for e in cons.edge_ids:
            if e in state.settled:
                continue
            if not cons.feasible(state.settled | {e}):
                continue
            gain = f.value(state.settled | {e}) - f_settled
            if best is None or gain > best:
                best = gain
        if best is None or best <= 0:
            break
        nxt = fast_forward(scale, thresholds.shift, best)
        if nxt <= index:
            raise RuntimeError(
                "fast forward failed to advance; value oracle is inconsistent"
            )
        index = nxt
        state.run_level(index)
    return state.finish()


def _positive_feasible_gain(f, cons, settled):
    """First positive marginal among feasible additions (ascending ids);
    None when the run is done."""
    f_settled = f.value(settled)
    for e in cons.edge_ids:
        if e in settled:
            continue
        gain = f.value(settled | {e}) - f_settled
        if gain > 0 and cons.feasible(settled | {e}):
            return gain
    return None


def _empty_run(f, cons, epsilon, scale, alpha):
    trace = RunTrace(
        scale=scale, alpha=alpha, shift=2.0 ** alpha, epsilon=epsilon
    )
    return frozenset(), trace
