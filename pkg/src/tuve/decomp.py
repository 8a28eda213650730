"""Discovery and validation of decomposition cases for a canonical hypergraph.

``validate`` checks every structural condition of a case verbatim and is
exact.  ``detect`` is a prioritized dispatcher whose sum-rule searches are
bounded and heuristic: candidate separator sets are read off edge traces,
then completed to a vertex partition component by component.  A returned
case always passes ``validate``; the search may return NotFound even when a
decomposition exists beyond its budget, and the caller is expected to fall
back to an oracle in that event.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .hypergraph import Hypergraph, VertexSet, trace_class
from .oracle import BudgetExceeded
from .tumatrix import TreeRepresentation, is_network_hypergraph

#: Edges of the exceptional 5-vertex block, 0-based.
H0_EDGE_MASKS = (0b11001, 0b10011, 0b10110, 0b11100)


def h0_hypergraph() -> Hypergraph:
    return Hypergraph(5, tuple(VertexSet(m) for m in H0_EDGE_MASKS))


class CaseTag(enum.Enum):
    NETWORK_BASE = "NetworkBase"
    H0_BASE = "H0Base"
    SINGLETON_EDGE = "SingletonEdge"
    DEGREE_ONE_VERTEX = "DegreeOneVertex"
    IDENTICAL_VERTICES = "IdenticalVertices"
    ONE_SUM = "OneSum"
    TWO_SUM = "TwoSum"
    THREE_SUM_CASE1 = "ThreeSumCase1"
    THREE_SUM_CASE2 = "ThreeSumCase2"
    THREE_SUM_CASE3 = "ThreeSumCase3"
    NOT_FOUND = "NotFound"


@dataclass(frozen=True)
class DecompositionCase:
    tag: CaseTag
    v1: VertexSet | None = None
    v2: VertexSet | None = None
    s: VertexSet | None = None
    s0: VertexSet | None = None
    s1: VertexSet | None = None
    s2: VertexSet | None = None
    vertex: int | None = None
    partner: int | None = None
    edge: VertexSet | None = None
    iso: tuple[int, ...] | None = None
    tree: TreeRepresentation | None = None
    transposed: bool = False

    def describe(self) -> str:
        def fmt(setval):
            return "{" + ",".join(str(v + 1) for v in setval) + "}"

        bits = [self.tag.value]
        for name in ("v1", "v2", "s", "s0", "s1", "s2"):
            val = getattr(self, name)
            if val is not None:
                bits.append(f"{name.upper()}={fmt(val)}")
        if self.vertex is not None:
            bits.append(f"vertex={self.vertex + 1}")
        if self.partner is not None:
            bits.append(f"partner={self.partner + 1}")
        if self.edge is not None:
            bits.append(f"edge={fmt(self.edge)}")
        if self.iso is not None:
            bits.append(f"iso={tuple(v + 1 for v in self.iso)}")
        if self.tree is not None:
            bits.append(f"arcs={self.tree.arcs}" + (" (transposed)" if self.transposed else ""))
        return " ".join(bits)


@dataclass
class DetectBudget:
    max_candidate_sets: int = 512
    max_structures: int = 1 << 14
    network_row_cap: int = 12
    network_node_budget: int = 50_000


# -- validation ---------------------------------------------------------------

def _nontrivial_partition(h: Hypergraph, v1: VertexSet, v2: VertexSet) -> bool:
    full = (1 << h.n) - 1
    return bool(v1) and bool(v2) and v1.isdisjoint(v2) and (v1.mask | v2.mask) == full


def _crossing(h: Hypergraph, v1: VertexSet, v2: VertexSet):
    return [e for e in h.edges if e.mask & v1.mask and e.mask & v2.mask]


def _class_all_cross(h: Hypergraph, window: VertexSet, s: VertexSet,
                     other: VertexSet) -> bool:
    """The trace class H(window, s) is nonempty and projects onto ``other``
    without producing the empty set."""
    cls = trace_class(h, window, s)
    return bool(cls) and all(e.mask & other.mask for e in cls)


def validate(h: Hypergraph, case: DecompositionCase) -> bool:
    """Exact check of every condition of the given case against ``h``."""
    tag = case.tag
    if tag is CaseTag.NOT_FOUND:
        return False

    if tag is CaseTag.IDENTICAL_VERTICES:
        if case.vertex is None or case.partner is None or case.vertex == case.partner:
            return False
        sig = h.vertex_signatures()
        if not (0 <= case.vertex < h.n and 0 <= case.partner < h.n):
            return False
        return sig[case.vertex] == sig[case.partner] != 0

    if tag is CaseTag.SINGLETON_EDGE:
        return case.edge is not None and len(case.edge) == 1 and case.edge in h.edges

    if tag is CaseTag.DEGREE_ONE_VERTEX:
        if case.vertex is None or case.edge is None or case.edge not in h.edges:
            return False
        if case.vertex not in case.edge:
            return False
        return h.degrees()[case.vertex] == 1

    if tag is CaseTag.H0_BASE:
        if case.iso is None or h.n != 5 or sorted(case.iso) != [0, 1, 2, 3, 4]:
            return False
        mapped = {VertexSet.from_indices(case.iso[v] for v in VertexSet(m)).mask
                  for m in H0_EDGE_MASKS}
        return mapped == {e.mask for e in h.edges}

    if tag is CaseTag.NETWORK_BASE:
        if case.tree is None:
            return False
        from .tumatrix import TUMatrix
        entries = [[1 if v in e else 0 for v in range(h.n)] for e in h.edges]
        A = TUMatrix(entries)
        return case.tree.reproduces(A.transpose() if case.transposed else A)

    v1, v2 = case.v1, case.v2
    if v1 is None or v2 is None or not _nontrivial_partition(h, v1, v2):
        return False

    if tag is CaseTag.ONE_SUM:
        if not any(e.issubset(v1) for e in h.edges):
            return False
        if not any(e.issubset(v2) for e in h.edges):
            return False
        return all(e.issubset(v1) or e.issubset(v2) for e in h.edges)

    if tag is CaseTag.TWO_SUM:
        s = case.s
        if s is None or not s or not s.issubset(v1):
            return False
        if not any(e.issubset(v1) for e in h.edges):
            return False
        if not _class_all_cross(h, v1, s, v2):
            return False
        return all((e & v1) == s for e in _crossing(h, v1, v2))

    if tag is CaseTag.THREE_SUM_CASE1:
        s1, s2 = case.s1, case.s2
        if s1 is None or s2 is None or not s1 or not s2:
            return False
        if not (s1.issubset(v1) and s2.issubset(v2)):
            return False
        if not _class_all_cross(h, v1, s1, v2):
            return False
        if not _class_all_cross(h, v2, s2, v1):
            return False
        side1 = {e.mask for e in h.edges if e.issubset(v1)} \
            | {e.mask for e in trace_class(h, v2, s2)}
        side2 = {e.mask for e in h.edges if e.issubset(v2)} \
            | {e.mask for e in trace_class(h, v1, s1)}
        if len(v1) + len(side1) < 4 or len(v2) + len(side2) < 4:
            return False
        return all((e & v1) == s1 or (e & v2) == s2 for e in _crossing(h, v1, v2))

    if tag is CaseTag.THREE_SUM_CASE2:
        s0, s1, s2 = case.s0, case.s1, case.s2
        if any(x is None or not x for x in (s0, s1, s2)):
            return False
        if not (s0.issubset(v1) and s1.issubset(v1) and s2.issubset(v1)):
            return False
        if not (s0.isdisjoint(s1) and s0.isdisjoint(s2) and s1.isdisjoint(s2)):
            return False
        if not any(e.issubset(v1) for e in h.edges):
            return False
        if not _class_all_cross(h, v1, s0 | s1, v2):
            return False
        if not _class_all_cross(h, v1, s0 | s2, v2):
            return False
        a, b = (s0 | s1).mask, (s0 | s2).mask
        return all((e & v1).mask in (a, b) for e in _crossing(h, v1, v2))

    if tag is CaseTag.THREE_SUM_CASE3:
        s1, s2 = case.s1, case.s2
        if s1 is None or s2 is None or not s1 or not s2:
            return False
        if not (s1.issubset(v1) and s2.issubset(v1) and s1.isdisjoint(s2)):
            return False
        hv1 = [e for e in h.edges if e.issubset(v1)]
        if not hv1:
            return False
        hits = sum(1 for s in (s1, s2, s1 | s2) if _class_all_cross(h, v1, s, v2))
        if hits < 2:
            return False
        if len(v1) + len(hv1) < 4:
            return False
        pool = {e.mask for e in h.edges if e.issubset(v2)}
        for s in (s1, s2, s1 | s2):
            pool |= {e.mask for e in trace_class(h, v1, s)}
        if len(v2) + len(pool) < 4:
            return False
        allowed = (s1.mask, s2.mask, (s1 | s2).mask)
        return all((e & v1).mask in allowed for e in _crossing(h, v1, v2))

    raise ValueError(f"unknown case tag {tag!r}")


# -- base-case and reduction discovery ------------------------------------------

def find_identical_vertices(h: Hypergraph) -> DecompositionCase | None:
    sig = h.vertex_signatures()
    seen: dict[int, int] = {}
    for v in range(h.n):
        if sig[v] == 0:
            continue
        if sig[v] in seen:
            return DecompositionCase(CaseTag.IDENTICAL_VERTICES,
                                     vertex=seen[sig[v]], partner=v)
        seen[sig[v]] = v
    return None


def find_singleton_edge(h: Hypergraph) -> DecompositionCase | None:
    for e in h.edges:
        if len(e) == 1:
            return DecompositionCase(CaseTag.SINGLETON_EDGE, edge=e)
    return None


def find_degree_one_vertex(h: Hypergraph) -> DecompositionCase | None:
    deg = h.degrees()
    for v in range(h.n):
        if deg[v] == 1:
            owner = next(e for e in h.edges if v in e)
            return DecompositionCase(CaseTag.DEGREE_ONE_VERTEX, vertex=v, edge=owner)
    return None


def find_h0_isomorphism(h: Hypergraph) -> DecompositionCase | None:
    if h.n != 5 or h.m != 4 or any(len(e) != 3 for e in h.edges):
        return None
    if sorted(h.degrees()) != [2, 2, 2, 2, 4]:
        return None
    targets = {e.mask for e in h.edges}
    for perm in itertools.permutations(range(5)):
        mapped = {VertexSet.from_indices(perm[v] for v in VertexSet(m)).mask
                  for m in H0_EDGE_MASKS}
        if mapped == targets:
            return DecompositionCase(CaseTag.H0_BASE, iso=perm)
    return None


def find_network_base(h: Hypergraph, budget: DetectBudget) -> DecompositionCase | None:
    try:
        found = is_network_hypergraph(h, row_cap=budget.network_row_cap,
                                      node_budget=budget.network_node_budget)
    except BudgetExceeded:
        return None
    if found is None:
        return None
    tree, transposed = found
    return DecompositionCase(CaseTag.NETWORK_BASE, tree=tree, transposed=transposed)


# -- structural sum discovery ----------------------------------------------------

def _vertex_components(h: Hypergraph, excluded_mask: int = 0) -> list[int]:
    """Connected components (as masks) of vertex co-occurrence, ignoring the
    excluded vertices.  Vertices lying in no surviving edge become singleton
    components."""
    remaining = ((1 << h.n) - 1) & ~excluded_mask
    comp_masks: list[int] = []
    unseen = remaining
    cliques = [e.mask & ~excluded_mask for e in h.edges]
    while unseen:
        low = unseen & -unseen
        comp = low
        while True:
            grown = comp
            for c in cliques:
                if c & comp:
                    grown |= c
            grown &= remaining
            if grown == comp:
                break
            comp = grown
        comp_masks.append(comp)
        unseen &= ~comp
    return comp_masks


def find_one_sum(h: Hypergraph) -> DecompositionCase | None:
    comps = _vertex_components(h)
    edged = [c for c in comps if any(e.mask and e.mask & c == e.mask for e in h.edges)]
    if len(edged) < 2:
        return None
    v1 = VertexSet(edged[0])
    v2 = VertexSet(((1 << h.n) - 1) & ~edged[0])
    case = DecompositionCase(CaseTag.ONE_SUM, v1=v1, v2=v2)
    return case if validate(h, case) else None


def _candidate_sets(h: Hypergraph, cap: int) -> list[int]:
    masks = [e.mask for e in h.edges]
    pool: set[int] = set(masks)
    for a, b in itertools.combinations(masks, 2):
        pool.add(a & b)
        pool.add(a & ~b)
        pool.add(b & ~a)
    refined = set(pool)
    for s in pool:
        for e in masks:
            refined.add(s & e)
            refined.add(s & ~e)
        if len(refined) > 8 * cap:
            break
    refined.discard(0)
    return sorted(refined, key=lambda m: (m.bit_count(), m))[:cap]


def _subsets_desc(k: int):
    """All nonzero masks over k items, widest unions first, deterministic."""
    return sorted(range(1, 1 << k), key=lambda m: (-bin(m).count("1"), m))


class _StructureBudget:
    def __init__(self, limit: int):
        self.left = limit

    def tick(self) -> bool:
        self.left -= 1
        return self.left >= 0


def find_two_sum(h: Hypergraph, budget: DetectBudget | None = None,
                 ) -> DecompositionCase | None:
    budget = budget or DetectBudget()
    counter = _StructureBudget(budget.max_structures)
    full = (1 << h.n) - 1
    for s_mask in _candidate_sets(h, budget.max_candidate_sets):
        if s_mask == full:
            continue
        s = VertexSet(s_mask)
        comps = _vertex_components(h, s_mask)
        free: list[int] = []
        forced_v1 = 0
        dead = False
        for c in comps:
            patterns = {e.mask & s_mask for e in h.edges if e.mask & c}
            patterns.discard(0)
            if not patterns:
                free.append(c)
            elif patterns == {s_mask}:
                free.append(c)
            else:
                forced_v1 |= c
        if dead or not free:
            continue
        if len(free) > 16:
            continue
        for pick in _subsets_desc(len(free)):
            if not counter.tick():
                return None
            v2_mask = 0
            for i in range(len(free)):
                if pick >> i & 1:
                    v2_mask |= free[i]
            v1 = VertexSet(full & ~v2_mask)
            case = DecompositionCase(CaseTag.TWO_SUM, v1=v1, v2=VertexSet(v2_mask), s=s)
            if validate(h, case):
                return case
    return None


def _complete_partition(h: Hypergraph, inner_mask: int, v2_legal, counter,
                        make_case) -> DecompositionCase | None:
    """Split components of the co-occurrence graph minus the separator sets
    into the two sides and validate.

    ``v2_legal(component)`` says whether the component may sit on the far
    side; components may always sit with the separator.  ``make_case``
    builds the candidate from (v1, v2).
    """
    full = (1 << h.n) - 1
    comps = _vertex_components(h, inner_mask)
    eligible = [c for c in comps if v2_legal(c)]
    if not eligible or len(eligible) > 16:
        return None
    for pick in _subsets_desc(len(eligible)):
        if not counter.tick():
            return None
        v2_mask = 0
        for i in range(len(eligible)):
            if pick >> i & 1:
                v2_mask |= eligible[i]
        v1 = VertexSet(full & ~v2_mask)
        case = make_case(v1, VertexSet(v2_mask))
        if validate(h, case):
            return case
    return None


def find_three_sum_case1(h: Hypergraph, budget: DetectBudget | None = None,
                         ) -> DecompositionCase | None:
    budget = budget or DetectBudget()
    counter = _StructureBudget(budget.max_structures)
    cands = _candidate_sets(h, budget.max_candidate_sets)
    masks = [e.mask for e in h.edges]
    for s1_mask, s2_mask in itertools.permutations(cands, 2):
        if s1_mask & s2_mask:
            continue
        if not any(m & (s1_mask | s2_mask) == s1_mask and m != s1_mask for m in masks):
            continue
        if not any(m & (s1_mask | s2_mask) == s2_mask and m != s2_mask for m in masks):
            continue
        inner = s1_mask | s2_mask
        bad = False
        for m in masks:
            if m & ~inner == 0 and m & s1_mask and m & s2_mask:
                if s1_mask & m != s1_mask and s2_mask & m != s2_mask:
                    bad = True
                    break
        if bad:
            continue

        def v2_legal(c, _s1=s1_mask):
            for m in masks:
                if m & c and m & _s1 not in (0, _s1):
                    return False
            return True

        def v1_legal(c, _s2=s2_mask):
            for m in masks:
                if m & c and m & _s2 not in (0, _s2):
                    return False
            return True

        comps = _vertex_components(h, inner)
        assign_free: list[int] = []
        forced_v1 = 0
        forced_v2 = 0
        dead = False
        for c in comps:
            ok1, ok2 = v1_legal(c), v2_legal(c)
            if ok1 and ok2:
                assign_free.append(c)
            elif ok1:
                forced_v1 |= c
            elif ok2:
                forced_v2 |= c
            else:
                dead = True
                break
        if dead or len(assign_free) > 14:
            continue
        full = (1 << h.n) - 1
        for pick in range(1 << len(assign_free)):
            if not counter.tick():
                return None
            v2_mask = forced_v2 | s2_mask
            for i in range(len(assign_free)):
                if pick >> i & 1:
                    v2_mask |= assign_free[i]
            v1 = VertexSet(full & ~v2_mask)
            case = DecompositionCase(CaseTag.THREE_SUM_CASE1, v1=v1,
                                     v2=VertexSet(v2_mask),
                                     s1=VertexSet(s1_mask), s2=VertexSet(s2_mask))
            if validate(h, case):
                return case
    return None


def find_three_sum_case2(h: Hypergraph, budget: DetectBudget | None = None,
                         ) -> DecompositionCase | None:
    budget = budget or DetectBudget()
    counter = _StructureBudget(budget.max_structures)
    cands = _candidate_sets(h, budget.max_candidate_sets)
    masks = [e.mask for e in h.edges]
    for x, y in itertools.combinations(cands, 2):
        s0 = x & y
        s1 = x & ~y
        s2 = y & ~x
        if not (s0 and s1 and s2):
            continue
        if not any(m & ~x and m & (x | s2) == x for m in masks):
            continue
        if not any(m & ~y and m & (y | s1) == y for m in masks):
            continue
        inner = x | y

        def v2_legal(c, _x=x, _y=y, _inner=inner):
            for m in masks:
                if m & c and (m & _inner) not in (0, _x, _y):
                    return False
            return True

        found = _complete_partition(
            h, inner, v2_legal, counter,
            lambda v1, v2: DecompositionCase(CaseTag.THREE_SUM_CASE2, v1=v1, v2=v2,
                                             s0=VertexSet(s0), s1=VertexSet(s1),
                                             s2=VertexSet(s2)))
        if found is not None:
            return found
        if counter.left < 0:
            return None
    return None


def find_three_sum_case3(h: Hypergraph, budget: DetectBudget | None = None,
                         ) -> DecompositionCase | None:
    budget = budget or DetectBudget()
    counter = _StructureBudget(budget.max_structures)
    cands = _candidate_sets(h, budget.max_candidate_sets)
    masks = [e.mask for e in h.edges]
    for x, y in itertools.combinations(cands, 2):
        if x & y:
            continue
        inner = x | y
        patterns = [m & inner for m in masks if m & inner and m & ~inner]
        if sum(1 for p in (x, y, inner) if p in patterns) < 2:
            continue

        def v2_legal(c, _x=x, _y=y, _inner=inner):
            for m in masks:
                if m & c and (m & _inner) not in (0, _x, _y, _inner):
                    return False
            return True

        found = _complete_partition(
            h, inner, v2_legal, counter,
            lambda v1, v2: DecompositionCase(CaseTag.THREE_SUM_CASE3, v1=v1, v2=v2,
                                             s1=VertexSet(x), s2=VertexSet(y)))
        if found is not None:
            return found
        if counter.left < 0:
            return None
    return None


def detect(h: Hypergraph, budget: DetectBudget | None = None) -> DecompositionCase:
    """Pick the applicable case in fixed priority order.

    Expects a canonical (Sperner, irredundant) hypergraph.  NotFound is a
    value, not an error; it signals that the bounded searches gave up.
    """
    budget = budget or DetectBudget()
    for finder in (find_identical_vertices, find_singleton_edge,
                   find_degree_one_vertex, find_h0_isomorphism):
        case = finder(h)
        if case is not None:
            return case
    case = find_network_base(h, budget)
    if case is not None:
        return case
    case = find_one_sum(h)
    if case is not None:
        return case
    for finder in (find_two_sum, find_three_sum_case1,
                   find_three_sum_case2, find_three_sum_case3):
        case = finder(h, budget)
        if case is not None:
            return case
    return DecompositionCase(CaseTag.NOT_FOUND)
