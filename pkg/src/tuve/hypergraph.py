"""Immutable set-system values and the antichain algebra used by the dualizer.

Vertices are 0-based integers internally; the text format uses 1-based ids.
Edge families are always kept in a deterministic order, sorted by
(size, sorted member tuple), so every operation is reproducible.

The two trivial hypergraphs are distinct first-class values: the empty
family (no edges at all, whose dual is the family containing the empty set)
and the family consisting of the single empty edge (whose dual is empty).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

#: Hard cap on universe size so masks stay one or two machine words.
MAX_UNIVERSE = 128


class StructuralViolation(ValueError):
    """An operation was applied to data violating its structural preconditions."""


class ParseError(ValueError):
    """Malformed text input."""


class VertexSet:
    """An immutable subset of ``{0, ..., n-1}`` stored as a bit mask."""

    __slots__ = ("mask",)

    def __init__(self, mask: int = 0):
        if mask < 0:
            raise ValueError("negative bit mask")
        self.mask = mask

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> "VertexSet":
        mask = 0
        for i in indices:
            if i < 0:
                raise ValueError(f"negative vertex id {i}")
            mask |= 1 << i
        return cls(mask)

    @classmethod
    def singleton(cls, v: int) -> "VertexSet":
        return cls(1 << v)

    @classmethod
    def full(cls, n: int) -> "VertexSet":
        return cls((1 << n) - 1)

    def indices(self) -> tuple[int, ...]:
        return tuple(self)

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask | other.mask)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & other.mask)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.mask & ~other.mask)

    def add(self, v: int) -> "VertexSet":
        return VertexSet(self.mask | (1 << v))

    def remove(self, v: int) -> "VertexSet":
        return VertexSet(self.mask & ~(1 << v))

    def issubset(self, other: "VertexSet") -> bool:
        return self.mask & ~other.mask == 0

    __le__ = issubset

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self.mask & other.mask == 0

    def __contains__(self, v: int) -> bool:
        return (self.mask >> v) & 1 == 1

    def __iter__(self) -> Iterator[int]:
        m = self.mask
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VertexSet) and self.mask == other.mask

    def __hash__(self) -> int:
        return hash(self.mask)

    def __repr__(self) -> str:
        return "{" + ",".join(str(i) for i in self) + "}"


def edge_sort_key(e: VertexSet) -> tuple[int, tuple[int, ...]]:
    """Deterministic family order: by size, then by sorted member tuple."""
    return (len(e), e.indices())


def sort_family(edges: Iterable[VertexSet]) -> tuple[VertexSet, ...]:
    """Deduplicate and sort a family of vertex sets into canonical order."""
    masks = {e.mask for e in edges}
    return tuple(sorted((VertexSet(m) for m in masks), key=edge_sort_key))


class Hypergraph:
    """A finite family of subsets of ``{0, ..., n-1}``.

    The edge list is deduplicated and kept in canonical sorted order.  The
    instance itself makes no Sperner or irredundancy promise; use
    :func:`canonicalize` to obtain the reduced form.
    """

    __slots__ = ("n", "edges", "labels")

    def __init__(self, n: int, edges: Iterable[VertexSet] = (),
                 labels: Sequence[str] | None = None):
        if n < 0:
            raise ValueError("universe size must be nonnegative")
        if n > MAX_UNIVERSE:
            raise ValueError(f"universe size {n} exceeds cap {MAX_UNIVERSE}")
        full = (1 << n) - 1
        seen: set[int] = set()
        for e in edges:
            if e.mask & ~full:
                raise ValueError(f"edge {e!r} not inside universe of size {n}")
            seen.add(e.mask)
        self.n = n
        self.edges = tuple(sorted((VertexSet(m) for m in seen), key=edge_sort_key))
        if labels is not None and len(labels) != n:
            raise ValueError("need one label per vertex")
        self.labels = tuple(labels) if labels is not None else None

    @property
    def m(self) -> int:
        return len(self.edges)

    def support(self) -> VertexSet:
        mask = 0
        for e in self.edges:
            mask |= e.mask
        return VertexSet(mask)

    def degrees(self) -> list[int]:
        """Number of edges containing each vertex."""
        deg = [0] * self.n
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def vertex_signatures(self) -> list[int]:
        """For each vertex, the bit mask of edge indices containing it."""
        sig = [0] * self.n
        for i, e in enumerate(self.edges):
            for v in e:
                sig[v] |= 1 << i
        return sig

    def is_trivial(self) -> bool:
        return self.m == 0 or (self.m == 1 and not self.edges[0])

    def has_empty_edge(self) -> bool:
        return any(not e for e in self.edges)

    def is_sperner(self) -> bool:
        es = self.edges
        for i, a in enumerate(es):
            for b in es[i + 1:]:
                if a.issubset(b) or b.issubset(a):
                    return False
        return True

    def is_irredundant(self) -> bool:
        return self.support().mask == (1 << self.n) - 1

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Hypergraph)
                and self.n == other.n and self.edges == other.edges)

    def __hash__(self) -> int:
        return hash((self.n, tuple(e.mask for e in self.edges)))

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.n}, edges=[{', '.join(map(repr, self.edges))}])"


# -- antichain algebra -------------------------------------------------------

def minimize(n: int, edges: Iterable[VertexSet]) -> Hypergraph:
    """Inclusion-minimal antichain of a family, in canonical order."""
    pool = sorted({e.mask for e in edges})
    pool.sort(key=lambda m: m.bit_count())
    kept: list[int] = []
    for m in pool:
        if not any(k & ~m == 0 for k in kept):
            kept.append(m)
    return Hypergraph(n, (VertexSet(m) for m in kept))


def minimal_sets(edges: Iterable[VertexSet]) -> list[VertexSet]:
    """Like :func:`minimize` but returns a plain sorted list of sets."""
    pool = sorted({e.mask for e in edges})
    pool.sort(key=lambda m: m.bit_count())
    kept: list[int] = []
    for m in pool:
        if not any(k & ~m == 0 for k in kept):
            kept.append(m)
    return sorted((VertexSet(m) for m in kept), key=edge_sort_key)


def induced(h: Hypergraph, s: VertexSet) -> Hypergraph:
    """Subfamily of edges entirely contained in ``s``; universe unchanged."""
    return Hypergraph(h.n, (e for e in h.edges if e.issubset(s)))


def project(h: Hypergraph, s: VertexSet) -> Hypergraph:
    """Minimized family of intersections with ``s``.

    May yield the trivial family containing just the empty edge, when some
    edge misses ``s`` entirely.
    """
    return minimize(h.n, (e & s for e in h.edges))


def trace_class(h: Hypergraph, w: VertexSet, s: VertexSet) -> list[VertexSet]:
    """Edges whose intersection with ``w`` equals ``s`` exactly."""
    if not s.issubset(w):
        raise ValueError("trace must be a subset of the window")
    return [e for e in h.edges if (e & w) == s]


def conjunction(h1: Hypergraph, h2: Hypergraph) -> Hypergraph:
    """Minimized family of pairwise unions."""
    if h1.n != h2.n:
        raise ValueError("conjunction requires a common universe")
    return minimize(h1.n, (a | b for a in h1.edges for b in h2.edges))


def disjunction(h1: Hypergraph, h2: Hypergraph) -> Hypergraph:
    """Minimized union of the two edge lists."""
    if h1.n != h2.n:
        raise ValueError("disjunction requires a common universe")
    return minimize(h1.n, (*h1.edges, *h2.edges))


def is_transversal(h: Hypergraph, t: VertexSet) -> bool:
    return all(e.mask & t.mask for e in h.edges)


def is_minimal_transversal(h: Hypergraph, t: VertexSet) -> bool:
    """True iff ``t`` meets every edge and every member has a private edge.

    A vertex's private edge is one meeting ``t`` in that vertex alone; its
    existence for all members is equivalent to no proper subset of ``t``
    being a transversal.
    """
    tm = t.mask
    for e in h.edges:
        if not e.mask & tm:
            return False
    for v in t:
        bit = 1 << v
        if not any(e.mask & tm == bit for e in h.edges):
            return False
    return True


def contract(h: Hypergraph, s: VertexSet,
             which_edges: Callable[[VertexSet], bool] | Iterable[int],
             ) -> tuple[Hypergraph, int]:
    """Replace ``s`` by one fresh vertex inside the selected edges.

    Every selected edge must contain all of ``s``; every unselected edge
    must avoid ``s``.  The fresh vertex gets id ``h.n`` and the result lives
    over a universe one larger.
    """
    if not s:
        raise ValueError("cannot contract the empty set")
    if callable(which_edges):
        selected = {i for i, e in enumerate(h.edges) if which_edges(e)}
    else:
        selected = set(which_edges)
    v_new = h.n
    bit = VertexSet.singleton(v_new)
    out: list[VertexSet] = []
    for i, e in enumerate(h.edges):
        if i in selected:
            if not s.issubset(e):
                raise StructuralViolation(
                    f"selected edge {e!r} does not contain the contracted set {s!r}")
            out.append((e - s) | bit)
        else:
            if not e.isdisjoint(s):
                raise StructuralViolation(
                    f"unselected edge {e!r} meets the contracted set {s!r}")
            out.append(e)
    return Hypergraph(h.n + 1, out), v_new


# -- canonical form ----------------------------------------------------------

@dataclass(frozen=True)
class TraceStep:
    kind: str
    dropped: tuple[int, ...] = ()
    old_of_new: tuple[int, ...] = ()


@dataclass
class ReductionTrace:
    """Record of what canonicalization removed, with enough data to undo it.

    Minimal transversals never use a dropped (edge-free) vertex, so lifting a
    dual family back is pure relabeling.
    """

    steps: list[TraceStep] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.steps

    def lift_set(self, t: VertexSet) -> VertexSet:
        out = t
        for step in reversed(self.steps):
            if step.kind == "redundant-vertex-drop":
                mask = 0
                for j in out:
                    mask |= 1 << step.old_of_new[j]
                out = VertexSet(mask)
        return out

    def lift_family(self, family: Iterable[VertexSet]) -> list[VertexSet]:
        return sorted((self.lift_set(t) for t in family), key=edge_sort_key)


def canonicalize(h: Hypergraph) -> tuple[Hypergraph, ReductionTrace]:
    """Minimize the edge family and drop vertices lying in no edge.

    Remaining vertices are relabeled to a compact 0-based range, in
    increasing original order; the trace records the relabeling.
    """
    reduced = minimize(h.n, h.edges)
    used = reduced.support()
    trace = ReductionTrace()
    if used.mask == (1 << h.n) - 1 and reduced.edges == h.edges:
        return h, trace
    old_of_new = used.indices()
    new_of_old = {v: j for j, v in enumerate(old_of_new)}
    dropped = tuple(v for v in range(h.n) if v not in new_of_old)
    relabeled = [VertexSet.from_indices(new_of_old[v] for v in e) for e in reduced.edges]
    trace.steps.append(TraceStep(kind="redundant-vertex-drop",
                                 dropped=dropped, old_of_new=old_of_new))
    return Hypergraph(len(old_of_new), relabeled), trace


# -- text format --------------------------------------------------------------

def parse_hypergraph(text: str) -> Hypergraph:
    """Parse the ``p hg <n> <m>`` text format.

    One edge per line as space-separated 1-based vertex ids; a line holding
    only ``e`` is the empty edge; blank lines and ``#`` comments are skipped.
    """
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty hypergraph file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "p" or head[1] != "hg":
        raise ParseError(f"bad header {lines[0]!r}, expected 'p hg <n> <m>'")
    try:
        n, m = int(head[2]), int(head[3])
    except ValueError as exc:
        raise ParseError(f"bad header numbers in {lines[0]!r}") from exc
    if n < 0 or m < 0:
        raise ParseError("negative dimensions")
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"expected {m} edge lines, found {len(body)}")
    edges = []
    for ln in body:
        if ln == "e":
            edges.append(VertexSet())
            continue
        try:
            ids = [int(tok) for tok in ln.split()]
        except ValueError as exc:
            raise ParseError(f"bad edge line {ln!r}") from exc
        if any(i < 1 or i > n for i in ids):
            raise ParseError(f"vertex id out of range 1..{n} in {ln!r}")
        edges.append(VertexSet.from_indices(i - 1 for i in ids))
    return Hypergraph(n, edges)


def format_hypergraph(h: Hypergraph) -> str:
    out = [f"p hg {h.n} {h.m}"]
    for e in h.edges:
        out.append("e" if not e else " ".join(str(v + 1) for v in e))
    return "\n".join(out) + "\n"
