"""Baselines, brute-force optimum, seeded instance generators, and the
experiment runner backing the CLI.
"""

import csv
import io
import json
import time
from dataclasses import dataclass, field

import numpy as np

from .kparity import Edge, KParityConstraint, from_intersection
from .matroid import GraphicMatroid, PartitionMatroid, UniformMatroid
from .nonmonotone import RepetitionsConfig, repetitions_with_trace
from .objective import CoverageObjective, CutObjective, ModularObjective
from .solver import SolverConfig, run_efficient, run_reference

BRUTE_FORCE_CAP = 20
OPT_COLUMN_CAP = 12

GENERATOR_KINDS = (
    "k-partition-intersection",
    "k-uniform-set-packing-via-parity",
    "random-parity",
)

CSV_COLUMNS = (
    "instance_id",
    "seed",
    "alpha",
    "solver",
    "k",
    "n_edges",
    "value",
    "opt_value",
    "ratio",
    "improvements",
    "oracle_calls",
    "millis",
)


def greedy_baseline(f, cons):
    """Repeatedly add the feasible edge with the largest positive marginal
    (ties to the smaller id); stop when none remains."""
    chosen = frozenset()
    while True:
        f_cur = f.value(chosen)
        best_gain, best_edge = 0.0, None
        for e in cons.edge_ids:
            if e in chosen or not cons.feasible(chosen | {e}):
                continue
            gain = f.value(chosen | {e}) - f_cur
            if gain > best_gain:
                best_gain, best_edge = gain, e
        if best_edge is None:
            return chosen
        chosen = chosen | {best_edge}


def brute_force_opt(f, cons):
    """Exhaustive maximum of f over feasible sets, ties resolved to the
    lexicographically first set of sorted ids. Depth-first over prefixes
    with down-closedness pruning; capped at 20 edges."""
    ids = list(cons.edge_ids)
    if len(ids) > BRUTE_FORCE_CAP:
        raise ValueError(f"brute force capped at {BRUTE_FORCE_CAP} edges")

    best_set = frozenset()
    best_value = f.value(frozenset())

    def walk(prefix, start):
        nonlocal best_set, best_value
        for pos in range(start, len(ids)):
            grown = prefix | {ids[pos]}
            if not cons.feasible(grown):
                continue
            value = f.value(grown)
            if value > best_value:
                best_set, best_value = frozenset(grown), value
            walk(grown, pos + 1)

    walk(frozenset(), 0)
    return best_set, best_value


def generate_instance(kind, params, seed):
    """Deterministic seeded instance: returns (constraint, objective).

    Kinds:
      k-partition-intersection       - k random partition matroids over a
                                       common element set, reduced to parity;
      k-uniform-set-packing-via-parity - vertex-disjoint selection of random
                                       k-element subsets of a universe;
      random-parity                  - random disjoint edges of size <= k
                                       over a uniform or partition matroid.
    Objectives come from the modular/coverage/cut families with integer
    weights, so all solver comparisons are exact.
    """
    if kind not in GENERATOR_KINDS:
        raise ValueError(f"unknown generator kind {kind!r}")
    params = dict(params or {})
    rng = np.random.Generator(np.random.PCG64(seed))

    if kind == "k-partition-intersection":
        cons = _gen_partition_intersection(params, rng)
    elif kind == "k-uniform-set-packing-via-parity":
        cons = _gen_set_packing(params, rng)
    else:
        cons = _gen_random_parity(params, rng)

    f = _gen_objective(params, cons, rng)
    return cons, f


def _gen_partition_intersection(params, rng):
    k = int(params.get("k", 2))
    n = int(params.get("n_elements", 6))
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n_elements >= 1")
    matroids = []
    for _ in range(k):
        n_blocks = int(rng.integers(2, max(3, n // 2 + 1)))
        labels = rng.integers(0, n_blocks, size=n)
        blocks = [
            [x for x in range(n) if labels[x] == b]
            for b in range(n_blocks)
        ]
        blocks = [b for b in blocks if b]
        # re-densify: blocks must cover 0..n-1, which they do by construction
        caps = [int(rng.integers(1, 3)) for _ in blocks]
        matroids.append(PartitionMatroid(blocks, caps))
    return from_intersection(matroids)


def _gen_set_packing(params, rng):
    k = int(params.get("k", 3))
    n_universe = int(params.get("n_universe", 8))
    n_edges = int(params.get("n_edges", 5))
    if k < 1 or n_universe < k or n_edges < 1:
        raise ValueError("need k >= 1, n_universe >= k, n_edges >= 1")
    hyperedges = [
        sorted(rng.choice(n_universe, size=k, replace=False).tolist())
        for _ in range(n_edges)
    ]
    # one matroid vertex per (hyperedge, universe point) incidence; one
    # block per universe point with capacity 1 enforces disjointness
    incidences = []
    for e, members in enumerate(hyperedges):
        for u in members:
            incidences.append((e, u))
    blocks = {}
    for vid, (_, u) in enumerate(incidences):
        blocks.setdefault(u, []).append(vid)
    matroid = PartitionMatroid(list(blocks.values()), [1] * len(blocks))
    edges = []
    for e in range(n_edges):
        edges.append(
            Edge(e, frozenset(vid for vid, (e2, _) in enumerate(incidences) if e2 == e))
        )
    return KParityConstraint(matroid, edges, k)


def _gen_random_parity(params, rng):
    k = int(params.get("k", 2))
    n_vertices = int(params.get("n_vertices", 8))
    n_edges = int(params.get("n_edges", 4))
    matroid_kind = params.get("matroid", "uniform")
    order = rng.permutation(n_vertices).tolist()
    edges = []
    pos = 0
    while len(edges) < n_edges and pos < n_vertices:
        size = int(rng.integers(1, k + 1))
        size = min(size, n_vertices - pos)
        edges.append(Edge(len(edges), frozenset(order[pos : pos + size])))
        pos += size
    if matroid_kind == "uniform":
        rank = int(params.get("rank", rng.integers(1, max(2, n_vertices // 2 + 1))))
        matroid = UniformMatroid(n_vertices, min(rank, n_vertices))
    elif matroid_kind == "partition":
        n_blocks = int(rng.integers(2, max(3, n_vertices // 2 + 1)))
        labels = rng.integers(0, n_blocks, size=n_vertices)
        blocks = [
            [x for x in range(n_vertices) if labels[x] == b] for b in range(n_blocks)
        ]
        blocks = [b for b in blocks if b]
        caps = [int(rng.integers(1, 3)) for _ in blocks]
        matroid = PartitionMatroid(blocks, caps)
    elif matroid_kind == "graphic":
        # one graph link per matroid vertex; rank is bounded by nodes - 1
        n_nodes = int(params.get("n_nodes", max(3, n_vertices // 2)))
        links = [
            tuple(sorted(rng.choice(n_nodes, size=2, replace=False).tolist()))
            for _ in range(n_vertices)
        ]
        matroid = GraphicMatroid(n_nodes, links)
    else:
        raise ValueError(f"unknown matroid kind {matroid_kind!r}")
    return KParityConstraint(matroid, edges, k)


def _gen_objective(params, cons, rng):
    family = params.get("objective", "modular")
    ids = cons.edge_ids
    lo = int(params.get("weight_lo", 1))
    hi = int(params.get("weight_hi", 10))
    if family == "modular":
        weights = {e: int(rng.integers(lo, hi + 1)) for e in ids}
        return ModularObjective(weights, w0=float(params.get("w0", 0.0)))
    if family == "coverage":
        n_items = int(params.get("n_items", max(4, 2 * len(ids))))
        item_weights = [int(rng.integers(1, hi + 1)) for _ in range(n_items)]
        edge_items = {}
        for e in ids:
            count = int(rng.integers(1, max(2, n_items // 2 + 1)))
            edge_items[e] = frozenset(
                rng.choice(n_items, size=count, replace=False).tolist()
            )
        return CoverageObjective(item_weights, edge_items)
    if family == "cut":
        links = []
        for i, u in enumerate(ids):
            for v in ids[i + 1 :]:
                if rng.random() < float(params.get("link_prob", 0.5)):
                    links.append((u, v, int(rng.integers(1, hi + 1))))
        return CutObjective(links)
    raise ValueError(f"unknown objective family {family!r}")


@dataclass
class ExperimentSpec:
    """One batch: an instance source, a solver mode, and trial counts.

    ``source`` is either ("file", path) or ("gen", kind); generated
    batches honor params["count"] instances derived from ``seed``.
    """

    source: tuple
    mode: str
    seed: int = 0
    trials: int = 1
    epsilon: float = 0.5
    ell: int = 0
    params: dict = field(default_factory=dict)
    out: str = ""

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.mode not in ("greedy", "hybrid", "hybrid-reference", "nonmonotone"):
            raise ValueError(f"unknown solver mode {self.mode!r}")


def _trial_seed(base, instance_idx, trial):
    return int(
        np.random.SeedSequence([int(base), int(instance_idx), int(trial)])
        .generate_state(1)[0]
    )


def _instances_for(spec):
    from .instances import load_instance

    if spec.source[0] == "file":
        cons, f = load_instance(spec.source[1])
        yield spec.source[1], cons, f
        return
    kind = spec.source[1]
    count = int(spec.params.get("count", 1))
    for idx in range(count):
        cons, f = generate_instance(kind, spec.params, _trial_seed(spec.seed, idx, 0))
        yield f"{kind}-{spec.seed}-{idx}", cons, f


def run_experiment(spec: ExperimentSpec):
    """Run every (instance, trial) pair and aggregate the results.

    Returns a dict with ``rows`` (one per trial, CSV_COLUMNS order) and
    ``summary`` (per-instance mean/stddev of values and ratios). Rows are
    deterministic except for the wall-time column. When ``spec.out`` is
    set, writes <out>.csv and <out>.json.
    """
    rows = []
    summaries = []
    for idx, (instance_id, cons, f) in enumerate(_instances_for(spec)):
        opt_value = None
        if len(cons.edge_ids) <= OPT_COLUMN_CAP:
            _, opt_value = brute_force_opt(f, cons)
        values = []
        for trial in range(spec.trials):
            seed = _trial_seed(spec.seed, idx, trial + 1)
            started = time.perf_counter()
            value, alpha, improvements, calls, chosen = _run_mode(spec, cons, f, seed)
            millis = (time.perf_counter() - started) * 1000.0
            if not cons.feasible(chosen):
                raise RuntimeError(f"solver {spec.mode} returned an infeasible set")
            ratio = None
            if opt_value is not None and value > 0:
                ratio = opt_value / value
            rows.append(
                {
                    "instance_id": instance_id,
                    "seed": seed,
                    "alpha": "" if alpha is None else f"{alpha:.12g}",
                    "solver": spec.mode,
                    "k": cons.k,
                    "n_edges": len(cons.edge_ids),
                    "value": f"{value:.12g}",
                    "opt_value": "" if opt_value is None else f"{opt_value:.12g}",
                    "ratio": "" if ratio is None else f"{ratio:.12g}",
                    "improvements": improvements,
                    "oracle_calls": calls,
                    "millis": f"{millis:.3f}",
                }
            )
            values.append(value)
        arr = np.asarray(values, dtype=float)
        summaries.append(
            {
                "instance_id": instance_id,
                "solver": spec.mode,
                "trials": spec.trials,
                "mean_value": float(arr.mean()),
                "stddev_value": float(arr.std(ddof=1)) if len(arr) > 1 else 0.0,
                "opt_value": opt_value,
            }
        )
    result = {"rows": rows, "summary": summaries}
    if spec.out:
        with open(spec.out + ".csv", "w", encoding="utf-8", newline="") as fh:
            fh.write(rows_to_csv(rows))
        with open(spec.out + ".json", "w", encoding="utf-8") as fh:
            json.dump(result, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return result


def _run_mode(spec, cons, f, seed):
    calls_before = f.calls + cons.feasibility_calls
    if spec.mode == "greedy":
        chosen = greedy_baseline(f, cons)
        alpha, improvements = None, 0
    elif spec.mode == "nonmonotone":
        config = RepetitionsConfig(ell=spec.ell, epsilon=spec.epsilon, seed=seed)
        chosen, trace = repetitions_with_trace(f, cons, config)
        alpha = trace.rounds[0].alpha if trace.rounds else None
        improvements = 0
    else:
        runner = run_efficient if spec.mode == "hybrid" else run_reference
        chosen, trace = runner(f, cons, SolverConfig(epsilon=spec.epsilon, seed=seed))
        alpha, improvements = trace.alpha, trace.improvement_count
    calls = f.calls + cons.feasibility_calls - calls_before
    return f.value(chosen), alpha, improvements, calls, chosen


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()
