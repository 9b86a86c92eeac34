"""Matroid independence oracles, concrete families, and derived views.

Vertices are integer ids (dense 0..n-1 for the concrete families). A
matroid is exposed purely through its independence predicate; rank and
the restriction/contraction/truncation views are built on top of that
predicate, so they work for any oracle, including other views.
"""

from dataclasses import dataclass, field
from itertools import combinations

AXIOM_CHECK_CAP = 16
EXPLICIT_CAP = 20


class MatroidOracle:
    """Independence oracle over a fixed ground set of integer vertex ids.

    Subclasses implement ``_independent`` for validated inputs. Oracles
    are immutable after construction and safe for concurrent queries.
    """

    def __init__(self, ground):
        self.ground = frozenset(ground)

    @property
    def ground_size(self):
        return len(self.ground)

    def is_independent(self, vertices) -> bool:
        s = frozenset(vertices)
        if not s <= self.ground:
            raise ValueError(
                f"vertices {sorted(s - self.ground)} outside ground set"
            )
        return self._independent(s)

    def _independent(self, s: frozenset) -> bool:
        raise NotImplementedError

    def rank(self, vertices=None) -> int:
        """Largest independent subset size, by greedy augmentation in id order."""
        s = self.ground if vertices is None else frozenset(vertices)
        if not s <= self.ground:
            raise ValueError(f"vertices {sorted(s - self.ground)} outside ground set")
        picked = frozenset()
        for v in sorted(s):
            grown = picked | {v}
            if self._independent(grown):
                picked = grown
        return len(picked)

    def restrict(self, keep) -> "RestrictedMatroid":
        return RestrictedMatroid(self, keep)

    def contract(self, removed, basis=None) -> "ContractedMatroid":
        return ContractedMatroid(self, removed, basis)

    def truncate(self, new_rank) -> "TruncatedMatroid":
        return TruncatedMatroid(self, new_rank)

    def max_independent_subset(self, vertices) -> frozenset:
        """Greedy (ascending id) maximal independent subset of ``vertices``."""
        s = frozenset(vertices)
        if not s <= self.ground:
            raise ValueError(f"vertices {sorted(s - self.ground)} outside ground set")
        picked = frozenset()
        for v in sorted(s):
            grown = picked | {v}
            if self._independent(grown):
                picked = grown
        return picked


class UniformMatroid(MatroidOracle):
    """All sets of size at most ``rank_cap`` over ground 0..n-1."""

    def __init__(self, n, rank_cap):
        if not 0 <= rank_cap <= n:
            raise ValueError("rank cap must lie in [0, n]")
        super().__init__(range(n))
        self.rank_cap = rank_cap

    def _independent(self, s):
        return len(s) <= self.rank_cap


class PartitionMatroid(MatroidOracle):
    """At most ``capacities[i]`` vertices from each block; blocks cover 0..n-1."""

    def __init__(self, blocks, capacities):
        blocks = [frozenset(b) for b in blocks]
        if len(blocks) != len(capacities):
            raise ValueError("one capacity per block required")
        ground = frozenset().union(*blocks) if blocks else frozenset()
        total = sum(len(b) for b in blocks)
        if total != len(ground):
            raise ValueError("blocks must be disjoint")
        if ground and ground != frozenset(range(max(ground) + 1)):
            raise ValueError("blocks must cover a dense id range 0..n-1")
        if any(c < 0 for c in capacities):
            raise ValueError("capacities must be non-negative")
        super().__init__(ground)
        self.blocks = blocks
        self.capacities = list(capacities)
        self._block_of = {}
        for idx, b in enumerate(blocks):
            for v in b:
                self._block_of[v] = idx

    def _independent(self, s):
        counts = {}
        for v in s:
            idx = self._block_of[v]
            counts[idx] = counts.get(idx, 0) + 1
            if counts[idx] > self.capacities[idx]:
                return False
        return True


class GraphicMatroid(MatroidOracle):
    """Forests of an undirected multigraph; matroid vertices are graph edges.

    ``links`` is a list of (u, v) node pairs; matroid vertex i refers to
    links[i]. Self-loops are dependent singletons.
    """

    def __init__(self, n_nodes, links):
        links = [tuple(l) for l in links]
        for u, v in links:
            if not (0 <= u < n_nodes and 0 <= v < n_nodes):
                raise ValueError("link endpoint outside node range")
        super().__init__(range(len(links)))
        self.n_nodes = n_nodes
        self.links = links

    def _independent(self, s):
        parent = list(range(self.n_nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in sorted(s):
            u, v = self.links[i]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


class ExplicitMatroid(MatroidOracle):
    """Matroid given by the full list of independent sets (ground <= 20).

    Construction validates the matroid axioms unless ``validate=False``,
    which exists so axiom_check can be exercised on broken set systems.
    """

    def __init__(self, n, independent_sets, validate=True):
        if n > EXPLICIT_CAP:
            raise ValueError(f"explicit matroid capped at ground size {EXPLICIT_CAP}")
        super().__init__(range(n))
        self.independent_sets = frozenset(frozenset(s) for s in independent_sets)
        for s in self.independent_sets:
            if not s <= self.ground:
                raise ValueError("independent set contains out-of-range vertex")
        if validate:
            report = axiom_check(self)
            if not report.ok:
                raise ValueError(f"not a matroid: {report.summary()}")

    def _independent(self, s):
        return s in self.independent_sets


class RestrictedMatroid(MatroidOracle):
    """View of ``base`` with ground set cut down to ``keep``."""

    def __init__(self, base, keep):
        keep = frozenset(keep)
        if not keep <= base.ground:
            raise ValueError("restriction set outside base ground")
        super().__init__(keep)
        self.base = base

    def _independent(self, s):
        return self.base._independent(s)


class ContractedMatroid(MatroidOracle):
    """View of ``base`` after contracting ``removed``.

    A set T is independent iff T together with a fixed maximal
    independent subset of ``removed`` is independent in the base. The
    resulting matroid does not depend on which maximal subset is chosen;
    the default is picked greedily in ascending id order.
    """

    def __init__(self, base, removed, basis=None):
        removed = frozenset(removed)
        if not removed <= base.ground:
            raise ValueError("contraction set outside base ground")
        super().__init__(base.ground - removed)
        self.base = base
        self.removed = removed
        if basis is None:
            basis = base.max_independent_subset(removed)
        else:
            basis = frozenset(basis)
            if not basis <= removed:
                raise ValueError("basis must be a subset of the contracted set")
            if not base.is_independent(basis):
                raise ValueError("basis must be independent in the base matroid")
            for v in removed - basis:
                if base._independent(basis | {v}):
                    raise ValueError("basis must be maximal within the contracted set")
        self.basis = basis

    def _independent(self, s):
        return self.base._independent(s | self.basis)


class TruncatedMatroid(MatroidOracle):
    """View of ``base`` with rank capped at ``new_rank``."""

    def __init__(self, base, new_rank):
        full = base.rank()
        if not 0 <= new_rank <= full:
            raise ValueError(f"truncation rank {new_rank} outside [0, {full}]")
        super().__init__(base.ground)
        self.base = base
        self.new_rank = new_rank

    def _independent(self, s):
        return len(s) <= self.new_rank and self.base._independent(s)


@dataclass
class AxiomReport:
    """Outcome of an exhaustive matroid-axiom check."""

    ground_size: int
    empty_independent: bool
    down_closed_violations: list = field(default_factory=list)
    augmentation_violations: list = field(default_factory=list)

    @property
    def ok(self):
        return (
            self.empty_independent
            and not self.down_closed_violations
            and not self.augmentation_violations
        )

    def summary(self):
        if self.ok:
            return "pass"
        parts = []
        if not self.empty_independent:
            parts.append("empty set dependent")
        if self.down_closed_violations:
            parts.append(f"{len(self.down_closed_violations)} down-closedness violations")
        if self.augmentation_violations:
            parts.append(f"{len(self.augmentation_violations)} augmentation violations")
        return "; ".join(parts)


def axiom_check(matroid) -> AxiomReport:
    """Exhaustively verify non-emptiness, down-closedness and augmentation.

    Augmentation is checked for every pair of independent sets whose
    sizes differ by one; given down-closedness this is equivalent to the
    general property (any larger set can be shrunk to size |S|+1 first).
    Refuses grounds larger than 16 vertices.
    """
    elems = sorted(matroid.ground)
    n = len(elems)
    if n > AXIOM_CHECK_CAP:
        raise ValueError(f"axiom check capped at ground size {AXIOM_CHECK_CAP}")

    independent = set()
    for mask in range(1 << n):
        s = frozenset(elems[i] for i in range(n) if mask >> i & 1)
        if matroid.is_independent(s):
            independent.add(s)

    report = AxiomReport(ground_size=n, empty_independent=frozenset() in independent)

    for s in independent:
        for v in s:
            if s - {v} not in independent:
                report.down_closed_violations.append((tuple(sorted(s)), v))

    by_size = {}
    for s in independent:
        by_size.setdefault(len(s), []).append(s)
    for size, smaller in sorted(by_size.items()):
        larger = by_size.get(size + 1, [])
        for s in smaller:
            for t in larger:
                if not any(s | {e} in independent for e in t - s):
                    report.augmentation_violations.append(
                        (tuple(sorted(s)), tuple(sorted(t)))
                    )
    return report


def all_independent_sets(matroid):
    """Every independent set of a desk-scale matroid, as frozensets."""
    elems = sorted(matroid.ground)
    if len(elems) > AXIOM_CHECK_CAP:
        raise ValueError(f"enumeration capped at ground size {AXIOM_CHECK_CAP}")
    out = []
    for r in range(len(elems) + 1):
        for combo in combinations(elems, r):
            s = frozenset(combo)
            if matroid.is_independent(s):
                out.append(s)
    return out
