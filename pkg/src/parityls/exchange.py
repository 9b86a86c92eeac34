"""Constructive, desk-scale exchange machinery for matroid k-parity.

Two pieces: the Greene-Magnanti base partition (given bases S, T and a
partition of S, find a matching partition of T so every one-part swap
stays a base), and, built on it, the per-edge exchange-witness sets N_b
used by the run verifier. Neither is called by the solver itself.
"""

from .kparity import KParityConstraint

PART_CAP = 10
TARGET_CAP = 10
SUPPORT_CAP = 10


def greene_magnanti(matroid, base_s, base_t, s_parts):
    """Partition base T so that (S \\ S_i) | T_i is a base for every part.

    Backtracking search over assignments of T's elements (ascending id)
    to part indices, returning the lexicographically first valid
    assignment. Parts may be empty; they then receive nothing. Caps:
    |T| <= 10 and at most 10 parts.

    A valid partition always exists for genuine matroids, so search
    exhaustion signals a broken independence oracle and raises.
    """
    base_s = frozenset(base_s)
    base_t = frozenset(base_t)
    s_parts = [frozenset(p) for p in s_parts]
    rank = matroid.rank()
    for name, b in (("S", base_s), ("T", base_t)):
        if not matroid.is_independent(b) or len(b) != rank:
            raise ValueError(f"{name} is not a base")
    covered = frozenset().union(*s_parts) if s_parts else frozenset()
    if covered != base_s or sum(len(p) for p in s_parts) != len(base_s):
        raise ValueError("parts must partition S")
    if len(base_t) > TARGET_CAP:
        raise ValueError(f"search capped at |T| <= {TARGET_CAP}")
    if len(s_parts) > PART_CAP:
        raise ValueError(f"search capped at {PART_CAP} parts")

    t_elems = sorted(base_t)
    n_parts = len(s_parts)
    complements = [base_s - p for p in s_parts]
    assigned = [set() for _ in range(n_parts)]

    def valid_partial(i):
        # supersets of dependent sets stay dependent, so prune early
        return matroid.is_independent(complements[i] | assigned[i])

    def search(pos):
        if pos == len(t_elems):
            for i in range(n_parts):
                full = complements[i] | assigned[i]
                if len(full) != rank or not matroid.is_independent(full):
                    return False
            return True
        t = t_elems[pos]
        for i in range(n_parts):
            if len(assigned[i]) >= len(s_parts[i]):
                continue
            assigned[i].add(t)
            if valid_partial(i) and search(pos + 1):
                return True
            assigned[i].remove(t)
        return False

    if not search(0):
        raise RuntimeError(
            "no valid base partition exists; independence oracle violates the matroid axioms"
        )
    return [frozenset(a) for a in assigned]


def exchange_structure(cons: KParityConstraint, set_a, set_b):
    """Witness sets {N_b <= A | b in B} for two feasible edge sets.

    Construction: common edges get N_b = {b} and are contracted away;
    for the disjoint remainder, pad the smaller vertex support, build the
    restricted/contracted/truncated matroid in which both supports are
    bases, split B's support along A's per-edge partition, and let N_b
    collect the edges of A whose part touches b's support.

    The output satisfies, for every genuine matroid:
      1. N_b = {b} on A & B, and N_b <= A \\ B off it;
      2. A plus every b with empty N_b stays feasible;
      3. swapping any single a for {b : N_b = {a}} stays feasible;
      4. each a appears in at most k witness sets.
    """
    a_ids = frozenset(set_a)
    b_ids = frozenset(set_b)
    for name, s in (("A", a_ids), ("B", b_ids)):
        if not cons.feasible(s):
            raise ValueError(f"{name} is not feasible")
    support = cons.vertices_of(a_ids | b_ids)
    if len(support) > SUPPORT_CAP:
        raise ValueError(f"combined vertex support capped at {SUPPORT_CAP}")

    common = a_ids & b_ids
    if common:
        inner = KParityConstraint(
            cons.matroid.contract(cons.vertices_of(common)),
            [cons.edges[i] for i in sorted((a_ids | b_ids) - common)],
            cons.k,
        )
        out = _exchange_disjoint(inner, a_ids - b_ids, b_ids - a_ids)
        for b in common:
            out[b] = frozenset({b})
        return out
    return _exchange_disjoint(
        KParityConstraint(
            cons.matroid, [cons.edges[i] for i in sorted(a_ids | b_ids)], cons.k
        ),
        a_ids,
        b_ids,
    )


def _exchange_disjoint(cons, a_ids, b_ids):
    matroid = cons.matroid
    va = cons.vertices_of(a_ids)
    vb = cons.vertices_of(b_ids)

    if len(va) <= len(vb):
        padding = _augment(matroid, va, vb - va, len(vb) - len(va))
    else:
        padding = _augment(matroid, vb, va - vb, len(va) - len(vb))

    bar_rank = len(va - padding)
    reduced = matroid.restrict(va | vb).contract(padding).truncate(bar_rank)
    bar_a = va - padding
    bar_b = vb - padding

    a_order = sorted(a_ids)
    parts = [cons.edges[a].vertices - padding for a in a_order]
    assigned = greene_magnanti(reduced, bar_a, bar_b, parts)

    out = {}
    for b in b_ids:
        bv = cons.edges[b].vertices - padding
        out[b] = frozenset(
            a for a, piece in zip(a_order, assigned) if piece & bv
        )
    return out


def _augment(matroid, start, pool, count):
    """Grow ``start`` by ``count`` vertices from ``pool`` (ascending id),
    keeping independence; existence is guaranteed by augmentation."""
    grown = set(start)
    picked = set()
    for v in sorted(pool):
        if len(picked) == count:
            break
        if matroid.is_independent(grown | {v}):
            grown.add(v)
            picked.add(v)
    if len(picked) != count:
        raise RuntimeError(
            "augmentation failed; independence oracle violates the matroid axioms"
        )
    return frozenset(picked)


def exchange_claim_violations(cons, set_a, set_b, witness):
    """Check the four witness-set properties; returns human-readable
    violation strings (empty when all hold)."""
    a_ids = frozenset(set_a)
    b_ids = frozenset(set_b)
    problems = []

    if set(witness) != set(b_ids):
        problems.append("witness map keys differ from B")
        return problems

    for b in sorted(b_ids):
        nb = witness[b]
        if b in a_ids:
            if nb != frozenset({b}):
                problems.append(f"claim 1: N_{b} != {{{b}}} for shared edge")
        elif not nb <= a_ids - b_ids:
            problems.append(f"claim 1: N_{b} not inside A \\ B")

    free = {b for b in b_ids if not witness[b]}
    if not cons.feasible(a_ids | free):
        problems.append("claim 2: A plus unwitnessed edges infeasible")

    for a in sorted(a_ids):
        swapped = (a_ids - {a}) | {b for b in b_ids if witness[b] == frozenset({a})}
        if not cons.feasible(swapped):
            problems.append(f"claim 3: swap through {a} infeasible")

    for a in sorted(a_ids):
        hits = sum(1 for b in b_ids if a in witness[b])
        if hits > cons.k:
            problems.append(f"claim 4: edge {a} witnesses {hits} > k edges")

    return problems
