"""Per-run verification of the solver's charging structure.

Given a run trace, the constraint, and a strictly down-monotone
reference solution, this module rebuilds the analysis artifacts (the
reference partition across levels, witness sets, and the three weight
families) and asserts every deterministic inequality the approximation
argument rests on. A failed check means either an implementation bug or
a broken oracle, so the report carries explicit witnesses.

Weight families, all telescoping marginals:
  insertion weights  - value added by each output element, in the order
                       elements were last inserted;
  residual weights   - value a reference element still adds on top of
                       the full output (clamped at zero);
  reference weights  - value added along the reference alone, which is
                       independent of the run's randomness.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .exchange import exchange_structure
from .objective import LINEAR
from .solver import Thresholds

REL_TOL = 1e-9


def prune_down_monotone(f, reference):
    """Drop elements contributing nothing: repeatedly remove the smallest
    id x with f(x | O - x) <= 0. The result is strictly down-monotone and
    worth at least as much as the input."""
    current = set(reference)
    while True:
        for x in sorted(current):
            if f.value(current) - f.value(current - {x}) <= 0:
                current.remove(x)
                break
        else:
            return frozenset(current)


def insertion_weights(trace, f):
    """Marginal value of each output element along the insertion order."""
    weights = {}
    prefix = frozenset()
    for a in trace.insertion_order:
        weights[a] = f.value(prefix | {a}) - f.value(prefix)
        prefix = prefix | {a}
    return weights


def reference_weights(f, reference):
    """Marginal value of each reference element along ascending ids."""
    weights = {}
    prefix = frozenset()
    for o in sorted(reference):
        weights[o] = f.value(prefix | {o}) - f.value(prefix)
        prefix = prefix | {o}
    return weights


def residual_weights(f, solution, reference):
    """Clamped marginal of each reference element on top of the solution
    (minus the element itself) plus the preceding reference elements."""
    solution = frozenset(solution)
    weights = {}
    prefix = frozenset()
    for o in sorted(reference):
        context = (solution - {o}) | prefix
        weights[o] = max(0.0, f.value(context | {o}) - f.value(context))
        prefix = prefix | {o}
    return weights


def partition_reference(trace, cons, reference):
    """Split the reference across the run's levels via exchange witnesses.

    Level i receives the still-unassigned reference elements whose
    witness set against the solution-so-far is non-empty. Returns
    (parts by level index, witness set per assigned element, leftover
    elements never assigned). Verifies along the way that the settled
    solution plus the unassigned reference stays feasible and disjoint.
    """
    reference = frozenset(reference)
    settled = frozenset()
    remaining = set(reference)
    parts = {}
    witness = {}

    if not cons.feasible(reference):
        raise ValueError("reference set is not feasible")

    for rec in trace.iterations:
        if not rec.selected:
            continue
        grown = settled | set(rec.selected)
        other = settled | remaining
        sets = exchange_structure(cons, grown, other)
        assigned = {o for o in remaining if sets[o]}
        for o in assigned:
            witness[o] = sets[o]
        parts[rec.index] = frozenset(assigned)
        remaining -= assigned
        settled = grown
        if settled & remaining:
            raise RuntimeError("settled solution overlaps unassigned reference")
        if not cons.feasible(settled | remaining):
            raise RuntimeError("settled solution plus unassigned reference infeasible")
    return parts, witness, frozenset(remaining)


def charge_ratios(u_value, thresholds: Thresholds, d, linear=False):
    """Bracket a reference weight by the threshold family.

    Returns (m, r, rho): the smallest threshold m >= u, the ratio
    r = m / u in [1, 2), and the charge ratio rho, which is r for linear
    objectives and min(r, (1 - (1 - 1/d)/2) / (1 - (1 - 1/d)/r))
    otherwise. The submodular branch requires d >= 2.
    """
    if u_value <= 0:
        raise ValueError("reference weight must be positive")
    if thresholds.level(0) < u_value:
        raise ValueError("reference weight exceeds the top threshold")
    i = 0
    bracket = thresholds.level(0)
    while thresholds.level(i + 1) >= u_value:
        i += 1
        bracket = thresholds.level(i)
    ratio = bracket / u_value
    if linear:
        return bracket, ratio, ratio
    if d < 2:
        raise ValueError("the submodular charge ratio requires d >= 2")
    keep = 1.0 - 1.0 / d
    capped = min(ratio, (1.0 - keep / 2.0) / (1.0 - keep / ratio))
    return bracket, ratio, capped


def shift_log_ratio(scale, u_value, alpha):
    """log2 of the threshold/weight ratio as a function of the shift.

    Piecewise linear in alpha: with a* the unique shift making some
    threshold hit u exactly, the ratio is 2^(alpha - a* + 1) below a*
    and 2^(alpha - a*) from a* on; the result is uniform on [0, 1) when
    alpha is uniform on (0, 1].
    """
    if not 0 < u_value <= scale:
        raise ValueError("need 0 < u <= scale")
    gap = math.log2(scale) - math.log2(u_value)
    i_star = math.floor(gap) + 1
    alpha_star = i_star - gap
    if alpha < alpha_star:
        return alpha - alpha_star + 1.0
    return alpha - alpha_star


def simulate_ratios(scale, u_value, alphas, d):
    """Vectorized charge ratios over an array of shift draws; returns
    (r, rho) arrays. Matches charge_ratios pointwise."""
    alphas = np.asarray(alphas, dtype=float)
    gap = math.log2(scale) - math.log2(u_value)
    i_star = math.floor(gap) + 1
    alpha_star = i_star - gap
    beta = np.where(alphas < alpha_star, alphas - alpha_star + 1.0, alphas - alpha_star)
    r = 2.0 ** beta
    keep = 1.0 - 1.0 / d
    rho = np.minimum(r, (1.0 - keep / 2.0) / (1.0 - keep / r))
    return r, rho


@dataclass
class CheckResult:
    name: str
    ok: bool
    witnesses: list = field(default_factory=list)


@dataclass
class ChargingReport:
    """All rebuilt artifacts plus one pass/fail entry per inequality."""

    parts: dict
    witness: dict
    leftover: frozenset
    singly_charged: frozenset
    insertion: dict
    residual: dict
    reference: dict
    checks: list = field(default_factory=list)

    @property
    def ok(self):
        return all(c.ok for c in self.checks)

    def failed(self):
        return [c for c in self.checks if not c.ok]

    def to_json(self):
        return {
            "ok": self.ok,
            "parts": {str(i): sorted(p) for i, p in self.parts.items()},
            "witness": {str(o): sorted(n) for o, n in self.witness.items()},
            "leftover": sorted(self.leftover),
            "singly_charged": sorted(self.singly_charged),
            "insertion_weights": {str(a): v for a, v in self.insertion.items()},
            "residual_weights": {str(o): v for o, v in self.residual.items()},
            "reference_weights": {str(o): v for o, v in self.reference.items()},
            "checks": [
                {"name": c.name, "ok": c.ok, "witnesses": [str(w) for w in c.witnesses[:10]]}
                for c in self.checks
            ],
        }


def _leq(lhs, rhs):
    return lhs <= rhs + REL_TOL * (1.0 + abs(lhs) + abs(rhs))


def verify_run(trace, f, cons, reference, d=None):
    """Rebuild the charging artifacts for one run and assert every
    deterministic inequality of the analysis.

    ``reference`` must be feasible and strictly down-monotone; ``d`` is
    the discrepancy weight (>= 2, default 2 * sqrt(k)). Returns a
    ChargingReport whose ``ok`` is True iff every check passed.
    """
    if d is None:
        d = 2.0 * math.sqrt(cons.k)
    if d < 2:
        raise ValueError("discrepancy weight d must be at least 2")
    reference = frozenset(reference)
    solution = trace.final
    eps = trace.epsilon
    k = cons.k
    linear = f.declared_class == LINEAR

    w = insertion_weights(trace, f)
    u = reference_weights(f, reference)
    ow = residual_weights(f, solution, reference)
    try:
        parts, witness, leftover = partition_reference(trace, cons, reference)
    except RuntimeError as err:
        # the settled-plus-unassigned feasibility invariant broke; report
        # it as a failed check instead of escaping
        return ChargingReport(
            parts={},
            witness={},
            leftover=reference,
            singly_charged=frozenset(),
            insertion=w,
            residual=ow,
            reference=u,
            checks=[CheckResult("partition-feasible", False, [str(err)])],
        )
    level_of = {}
    threshold_of = {rec.index: rec.threshold for rec in trace.iterations}
    for i, members in parts.items():
        for o in members:
            level_of[o] = i

    singly = frozenset(
        o
        for o, i in level_of.items()
        if ow[o] > threshold_of[i] and len(witness[o]) == 1
    )

    checks = []

    def record(name, witnesses):
        checks.append(CheckResult(name, not witnesses, witnesses))

    record("partition-feasible", [])

    bad = []
    for rec in trace.iterations:
        for a in rec.selected:
            if not (w[a] > 0 and _leq(rec.threshold, w[a]) and _leq(w[a], 2 * rec.threshold)):
                bad.append((rec.index, a, w[a], rec.threshold))
    record("level-weight-bracket", bad)

    bad = []
    for o, i in level_of.items():
        if not _leq(ow[o], 2 * threshold_of[i]):
            bad.append((o, ow[o], 2 * threshold_of[i]))
    record("reference-weight-cap", bad)

    record(
        "leftover-weight-zero",
        [(o, ow[o]) for o in leftover if ow[o] > REL_TOL * (1.0 + abs(ow[o]))],
    )

    bad = [
        (o, ow[o], w[o])
        for o in reference & solution
        if not _leq(ow[o], w[o])
    ]
    record("shared-weight-order", bad)

    bad = []
    for o in sorted(reference):
        if not u[o] > 0 or not _leq(ow[o], u[o]):
            bad.append((o, u[o], ow[o]))
        if linear and abs(u[o] - ow[o]) > REL_TOL * (1.0 + abs(u[o])):
            bad.append((o, "linear equality", u[o], ow[o]))
    record("reference-weight-positive", bad)

    bad = []
    for o, i in level_of.items():
        if not witness[o] <= set(
            next(rec.selected for rec in trace.iterations if rec.index == i)
        ):
            bad.append((o, sorted(witness[o]), i))
    record("witness-in-level", bad)

    gap_sum = sum(u[o] - ow[o] for o in reference)
    f_sol = f.value(solution)
    f_join = f.value(solution | reference)
    f_ref = f.value(reference)
    alt_bound = f_sol - (f_join - f_ref)
    record(
        "discrepancy-bound",
        [] if _leq(gap_sum, alt_bound) else [(gap_sum, alt_bound)],
    )

    bad = []
    for o in singly:
        wn = sum(w[a] for a in witness[o])
        if not _leq(ow[o], (1.0 + eps) * wn):
            bad.append((o, ow[o], (1.0 + eps) * wn))
    record("single-witness-value", bad)

    bad = []
    singly_sorted = sorted(singly)
    for idx, o in enumerate(singly_sorted):
        for o2 in singly_sorted[idx + 1 :]:
            if witness[o] & witness[o2]:
                bad.append((o, o2, sorted(witness[o] & witness[o2])))
    record("single-witness-disjoint", bad)

    hits = {}
    for o in level_of:
        for a in witness[o]:
            hits[a] = hits.get(a, 0) + 1
    record(
        "witness-multiplicity",
        [(a, n, k) for a, n in hits.items() if n > k],
    )

    singly_total = sum(sum(w[a] for a in witness[o]) for o in singly)
    f_empty = f.value(frozenset())
    record(
        "single-witness-total",
        [] if _leq(singly_total, f_sol - f_empty) else [(singly_total, f_sol - f_empty)],
    )

    thresholds = Thresholds(trace.scale, trace.alpha) if trace.scale > 0 else None
    rho = {}
    if reference and thresholds is None:
        raise RuntimeError("non-empty reference requires a positive scale")
    for o in sorted(reference):
        _, _, rho[o] = charge_ratios(u[o], thresholds, d, linear=linear)

    bad = []
    for o, i in level_of.items():
        if o in singly:
            continue
        wn = sum(w[a] for a in witness[o])
        if not _leq(rho[o] * u[o], wn + d * (u[o] - ow[o])):
            bad.append((o, rho[o] * u[o], wn + d * (u[o] - ow[o])))
    record("capped-ratio-element", bad)

    chain_lhs = sum(rho[o] * u[o] for o in reference)
    chain_rhs = (k + 1 + 2 * eps) * (f_sol - f_empty) + d * gap_sum
    record(
        "charging-chain",
        [] if _leq(chain_lhs, chain_rhs) else [(chain_lhs, chain_rhs)],
    )

    return ChargingReport(
        parts=parts,
        witness=witness,
        leftover=leftover,
        singly_charged=singly,
        insertion=w,
        residual=ow,
        reference=u,
        checks=checks,
    )
