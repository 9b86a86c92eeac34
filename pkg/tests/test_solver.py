"""Solver: thresholds, improvement scan, both drivers, and run invariants.

The heavy differential oracles live here: an exhaustive enumerator of
valid improving moves (checked against the production scan) and a
branching explorer of every possible improvement sequence (checked
against the drivers' outputs).
"""

import math
from itertools import combinations

import numpy as np
import pytest

from parityls.kparity import KParityConstraint
from parityls.matroid import UniformMatroid
from parityls.objective import ModularObjective
from parityls.solver import (
    Improvement,
    SolverConfig,
    Thresholds,
    fast_forward,
    find_improvement,
    max_singleton_marginal,
    run_efficient,
    run_reference,
    sample_alpha,
)
from util import rng_for, solver_instance


def singleton_parity(matroid):
    return KParityConstraint(matroid, [[v] for v in sorted(matroid.ground)], 1)


def weights_531():
    f = ModularObjective({0: 5, 1: 3, 2: 1})
    cons = singleton_parity(UniformMatroid(3, 2))
    return f, cons


class FixedDraw:
    """Stand-in rng whose single uniform draw pins alpha = 1 - u."""

    def __init__(self, u):
        self.u = u

    def random(self):
        return self.u


# ---------------------------------------------------------------- oracles


def enumerate_improvements(f, cons, settled, current, theta, eps):
    """Every valid improving move, independent of the production scan,
    in the documented scan order."""
    base = frozenset(settled) | frozenset(current)
    outside = [e for e in cons.edge_ids if e not in base]
    removable = sorted(current)
    found = []
    for x in outside:
        if cons.feasible(base | {x}) and f.value(base | {x}) - f.value(base) >= theta:
            found.append(Improvement(1, (x,), ()))
    for x in outside:
        for y in removable:
            cand = (base | {x}) - {y}
            if (
                cons.feasible(cand)
                and f.value(base | {x}) - f.value(base) >= theta
                and f.value(cand) >= f.value(base) + eps * theta
            ):
                found.append(Improvement(2, (x,), (y,)))
    for p, q in combinations(outside, 2):
        for y in removable:
            if not cons.feasible((base | {p, q}) - {y}):
                continue
            for x1, x2 in ((p, q), (q, p)):
                first = f.value(base | {x1}) - f.value(base)
                second = f.value(base | {p, q}) - f.value(base | {x1})
                if first >= theta and second >= theta:
                    found.append(Improvement(3, (x1, x2), (y,)))
                    break
    return found


def explore_terminal_sets(f, cons, eps, alpha, limit=200000):
    """Every output reachable by some improvement-selection policy.

    Branches over all valid moves at every step; level indices advance by
    the same bracket jump the fast driver uses (levels above the best
    feasible gain admit no move: additions need gain >= threshold, and
    removals need a non-empty current level).
    """
    scale = max_singleton_marginal(f, cons.edge_ids)
    if not math.isfinite(scale) or scale <= 0:
        return {frozenset()}
    thresholds = Thresholds(scale, alpha)
    terminals = set()
    seen = set()
    steps = 0

    def best_gain(settled):
        best = None
        for e in cons.edge_ids:
            if e in settled or not cons.feasible(settled | {e}):
                continue
            gain = f.value(settled | {e}) - f.value(settled)
            if best is None or gain > best:
                best = gain
        return best

    def outer(settled, index):
        nonlocal steps
        steps += 1
        assert steps < limit, "state space too large for the explorer"
        gain = best_gain(settled)
        if gain is None or gain <= 0:
            terminals.add(settled)
            return
        nxt = fast_forward(scale, thresholds.shift, gain)
        assert nxt > index
        inner(settled, frozenset(), nxt)

    def inner(settled, current, index):
        key = (settled, current, index)
        if key in seen:
            return
        seen.add(key)
        moves = enumerate_improvements(
            f, cons, settled, current, thresholds.level(index), eps
        )
        if not moves:
            outer(settled | current, index)
            return
        for imp in moves:
            inner(settled, (current - imp.remove_set) | imp.add_set, index)

    outer(frozenset(), 0)
    return terminals


# ----------------------------------------------------------- scale & shift


def test_max_singleton_marginal():
    f, cons = weights_531()
    assert max_singleton_marginal(f, cons.edge_ids) == 5
    assert max_singleton_marginal(f, []) == float("-inf")


def test_max_singleton_marginal_coverage():
    from parityls.objective import CoverageObjective

    f = CoverageObjective([2, 3, 5], {0: {0, 1}, 1: {2}, 2: {0, 2}})
    # direct scan: edge 2 covers items worth 2 + 5
    assert max_singleton_marginal(f, [0, 1, 2]) == 7


def test_all_negative_weights_solve_to_empty():
    f = ModularObjective({0: -2, 1: -5})
    cons = singleton_parity(UniformMatroid(2, 2))
    for runner in (run_reference, run_efficient):
        out, trace = runner(f, cons, SolverConfig(epsilon=0.5, seed=3))
        assert out == frozenset()
        assert trace.iterations == []


def test_sample_alpha_boundaries():
    alpha, shift = sample_alpha(np.random.Generator(np.random.PCG64(0)))
    assert 0 < alpha <= 1 and shift == 2.0 ** alpha
    assert sample_alpha(FixedDraw(0.0)) == (1.0, 2.0)
    a, s = sample_alpha(FixedDraw(0.5))
    assert a == 0.5 and abs(s - math.sqrt(2)) < 1e-15


def test_sample_alpha_uniformity():
    rng = rng_for(20240817)
    alphas = np.sort(1.0 - rng.random(100_000))
    n = len(alphas)
    grid = np.arange(1, n + 1) / n
    ks = max(np.max(grid - alphas), np.max(alphas - (grid - 1.0 / n)))
    assert ks < 0.01


def test_threshold_examples():
    t = Thresholds(1.0, 1.0)
    assert (t.level(0), t.level(1), t.level(2)) == (2.0, 1.0, 0.5)
    for i in range(1, 61):
        assert t.level(i - 1) == 2.0 * t.level(i)
    t2 = Thresholds(5.0, 0.5)
    assert abs(t2.level(1) - 5.0 * 2.0 ** (-0.5)) < 1e-12
    with pytest.raises(ValueError):
        t.level(-1)
    with pytest.raises(ValueError):
        Thresholds(1.0, 0.0)


# ------------------------------------------------------------ fast forward


def bracket_by_scan(scale, shift, gain):
    """Oracle: smallest index whose threshold drops to at most the gain."""
    i = 0
    while scale * shift * 2.0 ** (-i) > gain:
        i += 1
    return i


def test_fast_forward_examples():
    assert fast_forward(1.0, 2.0, 1.0) == 1
    assert fast_forward(1.0, 2.0, 0.3) == bracket_by_scan(1.0, 2.0, 0.3) == 3
    assert fast_forward(1.0, 2.0, 0.5) == bracket_by_scan(1.0, 2.0, 0.5) == 2
    with pytest.raises(ValueError):
        fast_forward(1.0, 2.0, 0.0)


def test_fast_forward_brackets_random_inputs():
    rng = rng_for(11)
    for _ in range(500):
        scale = float(rng.uniform(0.1, 50.0))
        shift = 2.0 ** (1.0 - rng.random())
        gain = float(rng.uniform(1e-6, 1.0)) * scale
        i = fast_forward(scale, shift, gain)
        assert i == bracket_by_scan(scale, shift, gain)
        assert scale * shift * 2.0 ** (-i) <= gain
        if i >= 1:
            assert gain < scale * shift * 2.0 ** (-(i - 1))


# ------------------------------------------------------- improvement scan


def test_kind1_found_on_empty_solution():
    f, cons = weights_531()
    imp = find_improvement(f, cons, frozenset(), frozenset(), 1.0, 0.5)
    assert imp == Improvement(1, (0,), ())


def test_kind2_swap_example():
    f = ModularObjective({0: 1.0, 1: 1.2})
    cons = singleton_parity(UniformMatroid(2, 1))
    imp = find_improvement(f, cons, frozenset(), {0}, 1.0, 0.1)
    assert imp == Improvement(2, (1,), (0,))
    oracle = enumerate_improvements(f, cons, frozenset(), {0}, 1.0, 0.1)
    assert oracle == [Improvement(2, (1,), (0,))]


def test_no_improvement_at_local_optimum():
    f, cons = weights_531()
    assert find_improvement(f, cons, frozenset(), {0, 1}, 3.0, 0.5) is None


def test_kind3_labeling_tiebreak():
    # edge 0 blocks edges 1 and 2 through different partition blocks, so
    # neither single addition is feasible and the equal-weight swap gains
    # nothing; removing edge 0 frees both. Both labelings qualify, so the
    # smaller id must be inserted first.
    from parityls.matroid import PartitionMatroid
    from parityls.kparity import Edge

    matroid = PartitionMatroid([[0, 2], [1, 3]], [1, 1])
    cons = KParityConstraint(
        matroid, [Edge(0, {0, 1}), Edge(1, {2}), Edge(2, {3})], 2
    )
    f = ModularObjective({0: 2.0, 1: 2.0, 2: 2.0})
    imp = find_improvement(f, cons, frozenset(), {0}, 2.0, 0.5)
    assert imp == Improvement(3, (1, 2), (0,))
    oracle = enumerate_improvements(f, cons, frozenset(), {0}, 2.0, 0.5)
    assert oracle[0] == Improvement(3, (1, 2), (0,))


def test_scan_matches_enumeration_on_random_states():
    for seed in range(120):
        cons, f = solver_instance(seed, max_edges=6)
        rng = rng_for(9000 + seed)
        chosen = frozenset()
        for e in rng.permutation(list(cons.edge_ids)).tolist():
            if rng.random() < 0.6 and cons.feasible(chosen | {e}):
                chosen = chosen | {e}
        split = frozenset(
            e for e in chosen if rng.random() < 0.5
        )
        theta = float(rng.uniform(0.5, 8.0))
        eps = float(rng.choice([0.1, 0.5]))
        got = find_improvement(f, cons, chosen - split, split, theta, eps)
        oracle = enumerate_improvements(f, cons, chosen - split, split, theta, eps)
        assert got == (oracle[0] if oracle else None)


# ------------------------------------------------------------------ runs


def test_531_unique_terminal_for_every_alpha():
    f, cons = weights_531()
    for alpha in np.linspace(0.05, 1.0, 20):
        assert explore_terminal_sets(f, cons, 0.5, float(alpha)) == {
            frozenset({0, 1})
        }
    for seed in range(25):
        out, _ = run_reference(f, cons, SolverConfig(epsilon=0.5, seed=seed))
        assert out == frozenset({0, 1})
        assert f.value(out) == 8


def test_driver_output_is_a_reachable_terminal():
    for seed in range(30):
        cons, f = solver_instance(seed, max_edges=5)
        out, trace = run_efficient(f, cons, SolverConfig(epsilon=0.5, seed=seed))
        terminals = explore_terminal_sets(f, cons, 0.5, trace.alpha)
        assert out in terminals


def test_drivers_agree_small_battery():
    for seed in range(40):
        cons, f = solver_instance(seed)
        for eps in (0.1, 0.5):
            config = SolverConfig(epsilon=eps, seed=seed)
            ref_out, ref_trace = run_reference(f, cons, config)
            eff_out, eff_trace = run_efficient(f, cons, config)
            assert ref_out == eff_out
            assert ref_trace.applied_sequence() == eff_trace.applied_sequence()


def test_drivers_agree_on_exact_threshold_ties():
    # power-of-two weights with alpha = 1 make marginals hit thresholds
    # exactly; the drivers must still agree at the tie boundaries
    f = ModularObjective({0: 4.0, 1: 2.0, 2: 1.0})
    cons = singleton_parity(UniformMatroid(3, 3))
    config = SolverConfig(epsilon=0.5, seed=0)
    ref_out, ref_trace = run_reference(f, cons, config, rng=FixedDraw(0.0))
    eff_out, eff_trace = run_efficient(f, cons, config, rng=FixedDraw(0.0))
    assert ref_trace.alpha == 1.0 and eff_trace.alpha == 1.0
    assert ref_out == eff_out == frozenset({0, 1, 2})
    assert ref_trace.applied_sequence() == eff_trace.applied_sequence()
    assert [rec.index for rec in eff_trace.iterations] == [1, 2, 3]


def test_drivers_agree_across_alpha_grid():
    instances = [solver_instance(seed, max_edges=7) for seed in (3, 11, 27)]
    for cons, f in instances:
        for u in np.linspace(0.0, 0.999, 60):
            config = SolverConfig(epsilon=0.5, seed=0)
            ref_out, ref_trace = run_reference(f, cons, config, rng=FixedDraw(u))
            eff_out, eff_trace = run_efficient(f, cons, config, rng=FixedDraw(u))
            assert ref_out == eff_out
            assert ref_trace.applied_sequence() == eff_trace.applied_sequence()


def test_efficient_indices_strictly_increase():
    for seed in range(20):
        cons, f = solver_instance(seed)
        _, trace = run_efficient(f, cons, SolverConfig(epsilon=0.5, seed=seed))
        indices = [rec.index for rec in trace.iterations]
        assert indices == sorted(indices)
        assert len(set(indices)) == len(indices)
        assert all(rec.selected for rec in trace.iterations)


def replay_trace(trace, f, cons):
    """Rebuild the run from its improvement log, checking feasibility and
    the two potentials after every applied move."""
    settled = frozenset()
    order = []
    for rec in trace.iterations:
        current = frozenset()
        for imp in rec.improvements:
            before_size = len(current)
            before_value = f.value(settled | current)
            current = (current - imp.remove_set) | imp.add_set
            for y in imp.removed:
                order.remove(y)
            for x in imp.added:
                order.append(x)
            assert cons.feasible(settled | current)
            after_value = f.value(settled | current)
            if imp.kind == 2:
                assert len(current) == before_size
                assert after_value >= before_value + trace.epsilon * rec.threshold - 1e-9
            else:
                assert len(current) == before_size + 1
                assert after_value >= before_value - 1e-9
        assert current == frozenset(rec.selected)
        assert not (settled & current)
        settled = settled | current
    assert settled == trace.final
    assert order == trace.insertion_order


def test_run_invariants_and_certificates():
    for seed in range(30):
        cons, f = solver_instance(seed)
        for eps in (0.1, 0.5):
            out, trace = run_efficient(f, cons, SolverConfig(epsilon=eps, seed=seed))
            assert cons.feasible(out)
            replay_trace(trace, f, cons)
            assert trace.improvement_count <= (1 + 2.0 / eps) * len(cons.edge_ids)

            # termination certificate: no feasible positive addition remains
            for e in cons.edge_ids:
                if e in out or not cons.feasible(out | {e}):
                    continue
                assert f.value(out | {e}) - f.value(out) <= 0

            # per-level local optimality for single additions
            settled = frozenset()
            for rec in trace.iterations:
                settled = settled | frozenset(rec.selected)
                for e in cons.edge_ids:
                    if e in settled or not cons.feasible(settled | {e}):
                        continue
                    assert f.value(settled | {e}) - f.value(settled) < rec.threshold


def test_reference_records_empty_levels():
    f = ModularObjective({0: 8, 1: 1})
    cons = singleton_parity(UniformMatroid(2, 2))
    _, trace = run_reference(f, cons, SolverConfig(epsilon=0.5, seed=1))
    indices = [rec.index for rec in trace.iterations]
    assert indices == list(range(1, len(indices) + 1))
    assert any(not rec.selected for rec in trace.iterations)
    _, eff = run_efficient(f, cons, SolverConfig(epsilon=0.5, seed=1))
    assert all(rec.selected for rec in eff.iterations)
    assert trace.applied_sequence() == eff.applied_sequence()


def test_trace_insertion_order_tracks_last_addition():
    for seed in range(20):
        cons, f = solver_instance(seed)
        out, trace = run_efficient(f, cons, SolverConfig(epsilon=0.1, seed=seed))
        assert frozenset(trace.insertion_order) == out
        assert len(trace.insertion_order) == len(out)


def test_budget_guard_trips_on_inconsistent_oracle():
    # every later evaluation looks bigger, so swaps "gain" forever; the
    # move budget must convert that into a loud failure
    from parityls.objective import ValueOracle

    class Clock(ValueOracle):
        def _value(self, s):
            return float(self.calls) if s else 0.0

    cons = singleton_parity(UniformMatroid(2, 1))
    with pytest.raises(RuntimeError):
        run_efficient(Clock(), cons, SolverConfig(epsilon=0.5, seed=0))
