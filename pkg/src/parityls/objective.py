"""Set-function value oracles with marginal helpers, plus desk-scale
submodularity/monotonicity checkers and the concrete test families
(modular, coverage, cut).
"""

from dataclasses import dataclass, field

CHECK_CAP = 14

LINEAR = "linear"
MONOTONE_SUBMODULAR = "monotone-submodular"
SUBMODULAR = "submodular"


class ValueOracle:
    """Evaluate f over edge sets; ``calls`` counts value queries.

    ``declared_class`` is one of "linear", "monotone-submodular" or
    "submodular" and selects branches in the run verifier.
    """

    declared_class = SUBMODULAR

    def __init__(self):
        self.calls = 0

    def value(self, edge_set) -> float:
        self.calls += 1
        return self._value(frozenset(edge_set))

    def _value(self, s: frozenset) -> float:
        raise NotImplementedError

    def marginal(self, e, edge_set) -> float:
        s = frozenset(edge_set)
        return self.value(s | {e}) - self.value(s)

    def marginal_set(self, added, edge_set) -> float:
        s = frozenset(edge_set)
        return self.value(s | frozenset(added)) - self.value(s)


class ModularObjective(ValueOracle):
    """f(S) = w0 + sum of per-edge weights; marginals are constant, so the
    analysis treats this family as linear (w0 only shifts values)."""

    declared_class = LINEAR

    def __init__(self, weights, w0=0.0):
        super().__init__()
        if w0 < 0:
            raise ValueError("w0 must be non-negative")
        self.w0 = float(w0)
        self.weights = dict(weights)

    def _value(self, s):
        return self.w0 + sum(self.weights[e] for e in s)


class CoverageObjective(ValueOracle):
    """Weighted coverage: f(S) = total weight of items covered by S.
    Monotone submodular for non-negative item weights."""

    declared_class = MONOTONE_SUBMODULAR

    def __init__(self, item_weights, edge_items):
        super().__init__()
        self.item_weights = [float(w) for w in item_weights]
        if any(w < 0 for w in self.item_weights):
            raise ValueError("item weights must be non-negative")
        self.edge_items = {e: frozenset(items) for e, items in edge_items.items()}
        for e, items in self.edge_items.items():
            if any(not 0 <= i < len(self.item_weights) for i in items):
                raise ValueError(f"edge {e} covers an unknown item")

    def _value(self, s):
        covered = set()
        for e in s:
            covered |= self.edge_items[e]
        return sum(self.item_weights[i] for i in covered)


class CutObjective(ValueOracle):
    """Weighted cut of an undirected graph whose nodes are edge ids:
    f(S) = total weight of graph edges with exactly one endpoint in S.
    Non-negative, non-monotone submodular, f(empty) = 0."""

    declared_class = SUBMODULAR

    def __init__(self, weighted_links):
        super().__init__()
        self.links = [(u, v, float(w)) for u, v, w in weighted_links]
        if any(w < 0 for _, _, w in self.links):
            raise ValueError("cut weights must be non-negative")

    def _value(self, s):
        total = 0.0
        for u, v, w in self.links:
            if (u in s) != (v in s):
                total += w
        return total


@dataclass
class CheckReport:
    """Result of an exhaustive property check over a desk-scale ground."""

    property: str
    ground: tuple
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations


def _value_fn(f):
    return f.value if hasattr(f, "value") else f


def _subset(elems, mask):
    return frozenset(elems[i] for i in range(len(elems)) if mask >> i & 1)


def check_submodular(f, ground) -> CheckReport:
    """Exhaustively verify f(e | S) >= f(e | T) for all S <= T and e outside T.

    Uses the equivalent single-step form (T = S + e') over a value table;
    any violation of the general definition yields a single-step one.
    Refuses grounds larger than 14 elements.
    """
    elems = sorted(ground)
    n = len(elems)
    if n > CHECK_CAP:
        raise ValueError(f"submodularity check capped at {CHECK_CAP} elements")
    fn = _value_fn(f)
    table = [fn(_subset(elems, mask)) for mask in range(1 << n)]

    report = CheckReport(property="submodular", ground=tuple(elems))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            bi, bj = 1 << i, 1 << j
            for mask in range(1 << n):
                if mask & bi or mask & bj:
                    continue
                lhs = table[mask | bi] - table[mask]
                rhs = table[mask | bi | bj] - table[mask | bj]
                if lhs < rhs - 1e-12:
                    report.violations.append(
                        (tuple(sorted(_subset(elems, mask))),
                         tuple(sorted(_subset(elems, mask | bj))),
                         elems[i])
                    )
    return report


def check_monotone(f, ground) -> CheckReport:
    """Exhaustively verify f(e | S) >= 0 for every S and e outside S."""
    elems = sorted(ground)
    n = len(elems)
    if n > CHECK_CAP:
        raise ValueError(f"monotonicity check capped at {CHECK_CAP} elements")
    fn = _value_fn(f)
    table = [fn(_subset(elems, mask)) for mask in range(1 << n)]

    report = CheckReport(property="monotone", ground=tuple(elems))
    for i in range(n):
        bi = 1 << i
        for mask in range(1 << n):
            if mask & bi:
                continue
            if table[mask | bi] < table[mask] - 1e-12:
                report.violations.append(
                    (tuple(sorted(_subset(elems, mask))), elems[i])
                )
    return report
