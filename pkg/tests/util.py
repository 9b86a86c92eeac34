"""Shared helpers for the test suite: subset enumeration, random feasible
sets, and the seeded desk-scale instance batteries."""

from itertools import combinations

import numpy as np

from parityls.bench import generate_instance


def subsets(elems):
    elems = sorted(elems)
    for r in range(len(elems) + 1):
        for combo in combinations(elems, r):
            yield frozenset(combo)


def rng_for(seed):
    return np.random.Generator(np.random.PCG64(seed))


def random_feasible_set(cons, rng, keep_prob=0.7):
    """Greedy random feasible edge set: walk a shuffled order, keep each
    feasible extension with probability keep_prob."""
    chosen = frozenset()
    for e in rng.permutation(list(cons.edge_ids)).tolist():
        if rng.random() < keep_prob and cons.feasible(chosen | {e}):
            chosen = chosen | {e}
    return chosen


def exchange_scale_instance(seed):
    """Small constraint whose feasible pairs stay within the exchange
    module's vertex-support cap (rank <= 5, so |v(A | B)| <= 10)."""
    rng = rng_for(seed)
    kind = ["random-parity", "k-uniform-set-packing-via-parity"][int(rng.integers(2))]
    if kind == "random-parity":
        params = {
            "k": int(rng.integers(1, 4)),
            "n_vertices": int(rng.integers(4, 9)),
            "n_edges": int(rng.integers(2, 7)),
            "matroid": ["uniform", "partition", "graphic"][int(rng.integers(3))],
            "rank": int(rng.integers(1, 5)),
            "n_nodes": int(rng.integers(3, 6)),
        }
    else:
        params = {
            "k": int(rng.integers(2, 4)),
            "n_universe": int(rng.integers(3, 6)),
            "n_edges": int(rng.integers(2, 5)),
        }
    cons, f = generate_instance(kind, params, int(rng.integers(2**31)))
    return cons, f


def analysis_instance(seed, families=("modular", "coverage", "cut")):
    """Instance suitable for full trace verification: k in 1..3, few
    edges, and a matroid rank small enough that feasible unions stay
    within the exchange support cap."""
    rng = rng_for(seed)
    family = families[int(rng.integers(len(families)))]
    k = int(rng.integers(1, 4))
    if bool(rng.integers(2)):
        params = {
            "k": k,
            "n_vertices": int(rng.integers(4, 9)),
            "n_edges": int(rng.integers(2, 9)),
            "matroid": ["uniform", "partition", "graphic"][int(rng.integers(3))],
            "rank": int(rng.integers(1, 5)),
            "n_nodes": int(rng.integers(3, 6)),
            "objective": family,
        }
        return generate_instance("random-parity", params, int(rng.integers(2**31)))
    params = {
        "k": max(2, k),
        "n_universe": int(rng.integers(3, 6)),
        "n_edges": int(rng.integers(2, 6)),
        "objective": family,
    }
    return generate_instance(
        "k-uniform-set-packing-via-parity", params, int(rng.integers(2**31))
    )


def solver_instance(seed, families=("modular", "coverage", "cut"), max_edges=10):
    """Instance battery for solver equivalence runs: k in 1..3, up to
    ``max_edges`` edges, any of the three objective families."""
    rng = rng_for(seed)
    family = families[int(rng.integers(len(families)))]
    k = int(rng.integers(1, 4))
    kind = ["random-parity", "k-partition-intersection", "k-uniform-set-packing-via-parity"][
        int(rng.integers(3))
    ]
    if kind == "random-parity":
        params = {
            "k": k,
            "n_vertices": int(rng.integers(4, 16)),
            "n_edges": int(rng.integers(2, max_edges + 1)),
            "matroid": ["uniform", "partition", "graphic"][int(rng.integers(3))],
            "objective": family,
        }
    elif kind == "k-partition-intersection":
        params = {
            "k": k,
            "n_elements": int(rng.integers(3, min(10, max_edges) + 1)),
            "objective": family,
        }
    else:
        params = {
            "k": max(2, k),
            "n_universe": int(rng.integers(4, 8)),
            "n_edges": int(rng.integers(2, min(7, max_edges) + 1)),
            "objective": family,
        }
    return generate_instance(kind, params, int(rng.integers(2**31)))
