"""JSON encoding of matroids, constraints, objectives, and run traces.

Instance files look like::

    {"constraint": {"k": 2, "matroid": {...}, "edges": [[vertex ids], ...]},
     "objective": {"modular": {"w0": 0.0, "weights": [[edge id, w], ...]}}}

or, for an intersection-of-matroids constraint::

    {"constraint": {"intersection": [{...matroid...}, ...]},
     "objective": {...}}

Edges listed positionally get ids 0, 1, ...; a parallel "edge_ids" list
overrides that (needed after ground restrictions).
"""

import json

from .kparity import Edge, KParityConstraint, from_intersection
from .matroid import (
    ExplicitMatroid,
    GraphicMatroid,
    PartitionMatroid,
    UniformMatroid,
)
from .objective import CoverageObjective, CutObjective, ModularObjective
from .solver import Improvement, IterationRecord, RunTrace


def matroid_to_json(m):
    if isinstance(m, UniformMatroid):
        return {"type": "uniform", "ground": m.ground_size, "rank": m.rank_cap}
    if isinstance(m, PartitionMatroid):
        return {
            "type": "partition",
            "blocks": [sorted(b) for b in m.blocks],
            "capacities": list(m.capacities),
        }
    if isinstance(m, GraphicMatroid):
        return {"type": "graphic", "nodes": m.n_nodes, "links": [list(l) for l in m.links]}
    if isinstance(m, ExplicitMatroid):
        return {
            "type": "explicit",
            "ground": m.ground_size,
            "independent": sorted(sorted(s) for s in m.independent_sets),
        }
    raise ValueError(f"cannot serialize matroid of type {type(m).__name__}")


def matroid_from_json(obj):
    kind = obj["type"]
    if kind == "uniform":
        return UniformMatroid(obj["ground"], obj["rank"])
    if kind == "partition":
        return PartitionMatroid(obj["blocks"], obj["capacities"])
    if kind == "graphic":
        return GraphicMatroid(obj["nodes"], obj["links"])
    if kind == "explicit":
        return ExplicitMatroid(obj["ground"], obj["independent"])
    raise ValueError(f"unknown matroid type {kind!r}")


def constraint_to_json(cons):
    if cons.intersection_matroids is not None and set(cons.edge_ids) == set(
        range(len(cons.edge_ids))
    ):
        return {
            "intersection": [matroid_to_json(m) for m in cons.intersection_matroids]
        }
    ids = list(cons.edge_ids)
    out = {
        "k": cons.k,
        "matroid": matroid_to_json(cons.matroid),
        "edges": [sorted(cons.edges[i].vertices) for i in ids],
    }
    if ids != list(range(len(ids))):
        out["edge_ids"] = ids
    return out


def constraint_from_json(obj):
    if "intersection" in obj:
        return from_intersection([matroid_from_json(m) for m in obj["intersection"]])
    matroid = matroid_from_json(obj["matroid"])
    vertex_lists = obj["edges"]
    ids = obj.get("edge_ids", list(range(len(vertex_lists))))
    edges = [Edge(i, vs) for i, vs in zip(ids, vertex_lists)]
    return KParityConstraint(matroid, edges, obj["k"])


def objective_to_json(f):
    if isinstance(f, ModularObjective):
        return {
            "modular": {
                "w0": f.w0,
                "weights": [[e, w] for e, w in sorted(f.weights.items())],
            }
        }
    if isinstance(f, CoverageObjective):
        return {
            "coverage": {
                "item_weights": list(f.item_weights),
                "covers": [[e, sorted(items)] for e, items in sorted(f.edge_items.items())],
            }
        }
    if isinstance(f, CutObjective):
        return {"cut": {"weights": [[u, v, w] for u, v, w in f.links]}}
    raise ValueError(f"cannot serialize objective of type {type(f).__name__}")


def objective_from_json(obj):
    if "modular" in obj:
        spec = obj["modular"]
        return ModularObjective({e: w for e, w in spec["weights"]}, spec.get("w0", 0.0))
    if "coverage" in obj:
        spec = obj["coverage"]
        return CoverageObjective(
            spec["item_weights"], {e: items for e, items in spec["covers"]}
        )
    if "cut" in obj:
        return CutObjective(obj["cut"]["weights"])
    raise ValueError("unknown objective family")


def instance_to_json(cons, f):
    return {"constraint": constraint_to_json(cons), "objective": objective_to_json(f)}


def instance_from_json(obj):
    return constraint_from_json(obj["constraint"]), objective_from_json(obj["objective"])


def save_instance(path, cons, f):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_json(cons, f), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_instance(path):
    with open(path, encoding="utf-8") as fh:
        return instance_from_json(json.load(fh))


def trace_to_json(trace):
    return {
        "scale": trace.scale,
        "alpha": trace.alpha,
        "shift": trace.shift,
        "epsilon": trace.epsilon,
        "iterations": [
            {
                "index": rec.index,
                "threshold": rec.threshold,
                "improvements": [
                    {"kind": imp.kind, "added": list(imp.added), "removed": list(imp.removed)}
                    for imp in rec.improvements
                ],
                "selected": list(rec.selected),
            }
            for rec in trace.iterations
        ],
        "insertion_order": list(trace.insertion_order),
        "final": sorted(trace.final),
        "value_calls": trace.value_calls,
        "feasibility_calls": trace.feasibility_calls,
    }


def trace_from_json(obj):
    trace = RunTrace(
        scale=obj["scale"],
        alpha=obj["alpha"],
        shift=obj["shift"],
        epsilon=obj["epsilon"],
    )
    for rec in obj["iterations"]:
        trace.iterations.append(
            IterationRecord(
                rec["index"],
                rec["threshold"],
                [
                    Improvement(i["kind"], tuple(i["added"]), tuple(i["removed"]))
                    for i in rec["improvements"]
                ],
                tuple(rec["selected"]),
            )
        )
    trace.insertion_order = list(obj["insertion_order"])
    trace.final = frozenset(obj["final"])
    trace.value_calls = obj["value_calls"]
    trace.feasibility_calls = obj["feasibility_calls"]
    return trace


def save_trace(path, trace):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(trace_to_json(trace), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_trace(path):
    with open(path, encoding="utf-8") as fh:
        return trace_from_json(json.load(fh))
