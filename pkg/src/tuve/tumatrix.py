"""0/1 matrix layer: total unimodularity, network recognition, instance generation.

Determinant work is exact over the integers (fraction-free elimination);
nothing here touches floating point.  Network recognition is a bounded
backtracking search that returns an independently checkable tree witness,
not a polynomial-time recognition algorithm.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np

from .hypergraph import Hypergraph, ParseError, VertexSet
from .oracle import BudgetExceeded

EXHAUSTIVE_DET_CAP = 8
GHOUILA_HOURI_CAP = 14
NETWORK_ROW_CAP = 12
NETWORK_NODE_BUDGET = 500_000


class TUMatrix:
    """Dense 0/1 matrix with 1-based external row/column ids."""

    __slots__ = ("a",)

    def __init__(self, entries):
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("matrix must be 2-dimensional and nonempty")
        if not np.isin(a, (0, 1)).all():
            raise ValueError("entries must be 0 or 1")
        self.a = a

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def row_set(self, i: int) -> VertexSet:
        return VertexSet.from_indices(np.flatnonzero(self.a[i]).tolist())

    def transpose(self) -> "TUMatrix":
        return TUMatrix(self.a.T)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TUMatrix) and self.a.shape == other.a.shape \
            and bool((self.a == other.a).all())

    def __repr__(self) -> str:
        body = ",".join("".join(str(x) for x in row) for row in self.a.tolist())
        return f"TUMatrix({self.rows}x{self.cols}:{body})"


#: The exceptional 5x5 building block that is totally unimodular but neither
#: a network matrix nor the transpose of one.
A0 = TUMatrix([
    [1, 0, 0, 1, 1],
    [1, 1, 0, 0, 1],
    [0, 1, 1, 0, 1],
    [0, 0, 1, 1, 1],
    [1, 1, 1, 1, 1],
])


def det_int(rows) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    return sign * a[n - 1][n - 1]


def _all_subdets_ok(a: np.ndarray) -> bool:
    m, n = a.shape
    rows_list = a.tolist()
    for s in range(2, min(m, n) + 1):
        for ri in itertools.combinations(range(m), s):
            sub_rows = [rows_list[i] for i in ri]
            for ci in itertools.combinations(range(n), s):
                sub = [[row[j] for j in ci] for row in sub_rows]
                if abs(det_int(sub)) > 1:
                    return False
    return True


def _ghouila_houri_rows(a: np.ndarray) -> bool:
    """Every row subset admits a +/-1 signing with column sums in {-1,0,1}."""
    m, n = a.shape
    rows = [tuple(int(x) for x in a[i]) for i in range(m)]
    for picked in itertools.chain.from_iterable(
            itertools.combinations(range(m), s) for s in range(1, m + 1)):
        chosen = [rows[i] for i in picked]
        suffix = [None] * (len(chosen) + 1)
        suffix[len(chosen)] = (0,) * n
        for i in range(len(chosen) - 1, -1, -1):
            suffix[i] = tuple(suffix[i + 1][j] + chosen[i][j] for j in range(n))

        def feasible(idx, sums):
            if idx == len(chosen):
                return all(abs(x) <= 1 for x in sums)
            rest = suffix[idx + 1]
            row = chosen[idx]
            for sgn in (1, -1):
                nxt = tuple(sums[j] + sgn * row[j] for j in range(n))
                if all(abs(nxt[j]) <= 1 + rest[j] for j in range(n)):
                    if feasible(idx + 1, nxt):
                        return True
            return False

        if not feasible(0, (0,) * n):
            return False
    return True


def is_totally_unimodular(A: TUMatrix, *, exhaustive_cap: int = EXHAUSTIVE_DET_CAP,
                          gh_cap: int = GHOUILA_HOURI_CAP) -> bool:
    """True iff every square subdeterminant lies in {-1, 0, 1}.

    Small matrices go through the exhaustive subdeterminant check; above
    that, the row-signing criterion is used on whichever side fits under
    ``gh_cap``.  Inputs too large for both raise :class:`BudgetExceeded`.
    """
    a = A.a
    if min(a.shape) <= exhaustive_cap:
        return _all_subdets_ok(a)
    if a.shape[0] <= gh_cap:
        return _ghouila_houri_rows(a)
    if a.shape[1] <= gh_cap:
        return _ghouila_houri_rows(a.T)
    raise BudgetExceeded(
        f"{a.shape[0]}x{a.shape[1]} exceeds both unimodularity check caps")


def has_small_bad_subdet(A: TUMatrix, max_size: int = 4) -> bool:
    """Cheap disqualifier: some subdeterminant of size <= max_size is outside
    {-1,0,1}.  False says nothing about larger submatrices."""
    a = A.a.tolist()
    m, n = A.rows, A.cols
    for s in range(2, min(m, n, max_size) + 1):
        for ri in itertools.combinations(range(m), s):
            sub_rows = [a[i] for i in ri]
            for ci in itertools.combinations(range(n), s):
                sub = [[row[j] for j in ci] for row in sub_rows]
                if abs(det_int(sub)) > 1:
                    return True
    return False


def hypergraph_of(A: TUMatrix) -> Hypergraph:
    """The set system whose edges are the rows of ``A`` (columns = vertices)."""
    return Hypergraph(A.cols, (A.row_set(i) for i in range(A.rows)))


# -- network recognition -------------------------------------------------------

@dataclass(frozen=True)
class TreeRepresentation:
    """A directed tree realizing a matrix: rows are arcs, columns are paths.

    ``arcs[k]`` is the (tail, head) node pair of arc ``k``; ``row_to_arc``
    maps each row to its arc; ``col_to_path`` lists, per column, the arc ids
    in walk order.
    """

    arcs: tuple[tuple[int, int], ...]
    row_to_arc: tuple[int, ...]
    col_to_path: tuple[tuple[int, ...], ...]

    def reproduces(self, A: TUMatrix) -> bool:
        if len(self.row_to_arc) != A.rows or len(self.col_to_path) != A.cols:
            return False
        if sorted(self.row_to_arc) != list(range(A.rows)):
            return False
        heads = {}
        tails = {}
        for k, (t, h) in enumerate(self.arcs):
            tails[k], heads[k] = t, h
        nodes = {x for arc in self.arcs for x in arc}
        if len(nodes) != len(self.arcs) + 1:
            return False
        if not _is_forest(self.arcs):
            return False
        arc_of_row = {r: self.row_to_arc[r] for r in range(A.rows)}
        for j, path in enumerate(self.col_to_path):
            support = {r for r in range(A.rows) if A.a[r][j] == 1}
            if {arc_of_row[r] for r in support} != set(path) or len(path) != len(support):
                return False
            if not path:
                return False
            for a, b in zip(path, path[1:]):
                if heads[a] != tails[b]:
                    return False
        return True


def _is_forest(arcs) -> bool:
    parent = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    for t, h in arcs:
        rt, rh = find(t), find(h)
        if rt == rh:
            return False
        parent[rt] = rh
    return True


class _NetSearch:
    def __init__(self, A: TUMatrix, node_budget: int):
        self.m, self.n = A.rows, A.cols
        self.supports = [tuple(int(r) for r in np.flatnonzero(A.a[:, j]))
                         for j in range(self.n)]
        self.cols_of_row = [tuple(int(j) for j in np.flatnonzero(A.a[i]))
                            for i in range(self.m)]
        self.budget = node_budget
        self.states = 0
        self.tail = [-1] * self.m
        self.head = [-1] * self.m
        self.placed: list[int] = []
        self.placed_set: set[int] = set()
        self.node_count = 0
        self.piece: dict[int, int] = {}

    def _find(self, x: int) -> int:
        # no path compression: unplacement must restore state exactly
        p = self.piece
        while p[x] != x:
            x = p[x]
        return x

    def _order_rows(self) -> list[int]:
        adj = [set() for _ in range(self.m)]
        for sup in self.supports:
            for a in sup:
                for b in sup:
                    if a != b:
                        adj[a].add(b)
        order: list[int] = []
        seen: set[int] = set()
        for start in range(self.m):
            if start in seen:
                continue
            seen.add(start)
            order.append(start)
            frontier = [r for r in range(self.m) if r not in seen]
            while True:
                best, best_score = -1, -1
                for r in frontier:
                    if r in seen:
                        continue
                    score = sum(1 for c in self.cols_of_row[r]
                                if any(x in seen for x in self.supports[c]))
                    if score > best_score:
                        best, best_score = r, score
                if best < 0 or best_score == 0:
                    break
                seen.add(best)
                order.append(best)
                frontier.remove(best)
        return order

    def _column_ok(self, c: int, complete_required: bool) -> bool:
        arcs = [(self.tail[r], self.head[r]) for r in self.supports[c]
                if r in self.placed_set]
        if not arcs:
            return True
        indeg: dict[int, int] = {}
        outdeg: dict[int, int] = {}
        for t, h in arcs:
            outdeg[t] = outdeg.get(t, 0) + 1
            indeg[h] = indeg.get(h, 0) + 1
            if outdeg[t] > 1 or indeg[h] > 1:
                return False
        if complete_required and len(arcs) == len(self.supports[c]):
            starts = [t for t, _ in arcs if indeg.get(t, 0) == 0]
            if len(starts) != 1:
                return False
            nxt = {t: h for t, h in arcs}
            cur, steps = starts[0], 0
            while cur in nxt:
                cur = nxt[cur]
                steps += 1
            if steps != len(arcs):
                return False
        return True

    def _candidates(self, r: int):
        p = self.node_count
        if not self.placed:
            yield (0, 1)
            return
        existing = range(p)
        for t in existing:
            for h in existing:
                if t != h and self._find(t) != self._find(h):
                    yield (t, h)
            yield (t, p)
            yield (p, t)
        yield (p, p + 1)

    def _place(self, r: int, t: int, h: int):
        added = []
        for x in (t, h):
            if x not in self.piece:
                self.piece[x] = x
                added.append(x)
        self.node_count += len(added)
        rt, rh = self._find(t), self._find(h)
        old_parent = (rt, self.piece[rt])
        self.piece[rt] = rh
        self.tail[r], self.head[r] = t, h
        self.placed.append(r)
        self.placed_set.add(r)
        return added, old_parent

    def _unplace(self, r: int, added, old_parent):
        self.placed.pop()
        self.placed_set.remove(r)
        self.tail[r] = self.head[r] = -1
        rt, _ = old_parent
        self.piece[rt] = old_parent[1]
        for x in added:
            del self.piece[x]
        self.node_count -= len(added)

    def run(self) -> tuple[tuple[int, int], ...] | None:
        order = self._order_rows()

        def rec(idx: int):
            if idx == len(order):
                return True
            r = order[idx]
            for t, h in self._candidates(r):
                self.states += 1
                if self.states > self.budget:
                    raise BudgetExceeded("network recognition search budget exhausted")
                saved = self._place(r, t, h)
                if all(self._column_ok(c, True) for c in self.cols_of_row[r]):
                    if rec(idx + 1):
                        return True
                self._unplace(r, *saved)
            return False

        if rec(0):
            return tuple((self.tail[r], self.head[r]) for r in range(self.m))
        return None


def recognize_network(A: TUMatrix, *, row_cap: int = NETWORK_ROW_CAP,
                      node_budget: int = NETWORK_NODE_BUDGET,
                      ) -> TreeRepresentation | None:
    """Search for a directed tree whose arcs are the rows of ``A`` and whose
    directed paths are the columns.

    Returns a validated witness or None.  Raises :class:`BudgetExceeded`
    above ``row_cap`` rows or when the backtracking budget runs out.
    """
    if A.rows > row_cap:
        raise BudgetExceeded(f"{A.rows} rows above network recognition cap {row_cap}")
    if any(not A.a[:, j].any() for j in range(A.cols)):
        return None  # a zero column is no directed path
    arcs = _NetSearch(A, node_budget).run()
    if arcs is None:
        return None
    rep = _representation_from_arcs(A, arcs)
    if rep is None or not rep.reproduces(A):
        raise RuntimeError("internal error: search produced an invalid tree witness")
    return rep


def _representation_from_arcs(A: TUMatrix, arcs) -> TreeRepresentation | None:
    col_paths = []
    for j in range(A.cols):
        rows = [int(r) for r in np.flatnonzero(A.a[:, j])]
        nxt = {}
        heads = set()
        for r in rows:
            t, h = arcs[r]
            if t in nxt:
                return None
            nxt[t] = (h, r)
            heads.add(h)
        starts = [arcs[r][0] for r in rows if arcs[r][0] not in heads]
        if len(starts) != 1:
            return None
        path = []
        cur = starts[0]
        while cur in nxt:
            cur, r = nxt[cur][0], nxt[cur][1]
            path.append(r)
        if len(path) != len(rows):
            return None
        col_paths.append(tuple(path))
    return TreeRepresentation(arcs=tuple(arcs),
                              row_to_arc=tuple(range(A.rows)),
                              col_to_path=tuple(col_paths))


def is_network_hypergraph(h: Hypergraph, *, row_cap: int = NETWORK_ROW_CAP,
                          node_budget: int = NETWORK_NODE_BUDGET,
                          ) -> tuple[TreeRepresentation, bool] | None:
    """Try the incidence matrix of ``h`` and its transpose.

    Returns (witness, transposed) or None; budget errors propagate.
    """
    if h.m == 0 or h.n == 0 or h.has_empty_edge():
        return None
    entries = [[1 if v in e else 0 for v in range(h.n)] for e in h.edges]
    A = TUMatrix(entries)
    if min(A.rows, A.cols) <= EXHAUSTIVE_DET_CAP and has_small_bad_subdet(A):
        return None  # not totally unimodular, so certainly not a network matrix
    if A.rows <= row_cap:
        rep = recognize_network(A, row_cap=row_cap, node_budget=node_budget)
        if rep is not None:
            return rep, False
    if A.cols <= row_cap:
        rep = recognize_network(A.transpose(), row_cap=row_cap, node_budget=node_budget)
        if rep is not None:
            return rep, True
    if A.rows > row_cap and A.cols > row_cap:
        raise BudgetExceeded("hypergraph too large for network recognition")
    return None


# -- random instances ----------------------------------------------------------

def generate_network_instance(seed: int, tree_size: int, path_count: int) -> TUMatrix:
    """A network matrix from a random directed tree plus random directed paths.

    Totally unimodular by construction and deterministic for a fixed seed.
    Columns are sampled with replacement, so duplicate columns (identical
    vertices downstream) do occur.
    """
    if tree_size < 2:
        raise ValueError("tree_size must be at least 2")
    if path_count < 1:
        raise ValueError("path_count must be at least 1")
    rng = random.Random(seed)
    parent = [0] * tree_size
    arcs: list[tuple[int, int]] = []
    for i in range(1, tree_size):
        parent[i] = rng.randrange(i)
        if rng.random() < 0.5:
            arcs.append((parent[i], i))
        else:
            arcs.append((i, parent[i]))

    adjacency: dict[int, list[tuple[int, int, bool]]] = {v: [] for v in range(tree_size)}
    for k, (t, h) in enumerate(arcs):
        adjacency[t].append((h, k, True))
        adjacency[h].append((t, k, False))

    paths: list[tuple[int, ...]] = []
    for u in range(tree_size):
        # depth-first walk away from u, keeping only forward-oriented arcs
        stack = [(u, [])]
        while stack:
            node, trail = stack.pop()
            if trail:
                paths.append(tuple(r for r, _ in trail))
            seen = {x for _, x in trail} | {node, u}
            for (w, k, forward) in adjacency[node]:
                if w in seen or not forward:
                    continue
                stack.append((w, trail + [(k, w)]))
    paths = sorted(set(paths), key=lambda p: (len(p), p))

    m = tree_size - 1
    # cover as many arcs as the column budget allows, then fill uniformly;
    # an uncovered arc would be an all-zero row (an empty hyperedge)
    cols: list[tuple[int, ...]] = []
    uncovered = set(range(m))
    by_arc: dict[int, list[tuple[int, ...]]] = {r: [] for r in range(m)}
    for p in paths:
        for r in p:
            by_arc[r].append(p)
    while uncovered and len(cols) < path_count:
        arc = rng.choice(sorted(uncovered))
        pick = by_arc[arc][rng.randrange(len(by_arc[arc]))]
        cols.append(pick)
        uncovered -= set(pick)
    cols.extend(paths[rng.randrange(len(paths))]
                for _ in range(path_count - len(cols)))
    a = np.zeros((m, path_count), dtype=np.int64)
    for j, path in enumerate(cols):
        for r in path:
            a[r][j] = 1
    return TUMatrix(a)


# -- text format ----------------------------------------------------------------

def parse_matrix(text: str) -> TUMatrix:
    """Parse the ``p tm <m> <n>`` text format: m lines of n characters 0/1."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty matrix file")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "p" or head[1] != "tm":
        raise ParseError(f"bad header {lines[0]!r}, expected 'p tm <m> <n>'")
    try:
        m, n = int(head[2]), int(head[3])
    except ValueError as exc:
        raise ParseError(f"bad header numbers in {lines[0]!r}") from exc
    if m < 1 or n < 1:
        raise ParseError("matrix dimensions must be positive")
    body = lines[1:]
    if len(body) != m:
        raise ParseError(f"expected {m} matrix rows, found {len(body)}")
    rows = []
    for ln in body:
        compact = ln.replace(" ", "")
        if len(compact) != n or any(ch not in "01" for ch in compact):
            raise ParseError(f"bad matrix row {ln!r}")
        rows.append([int(ch) for ch in compact])
    return TUMatrix(rows)


def format_matrix(A: TUMatrix) -> str:
    out = [f"p tm {A.rows} {A.cols}"]
    for row in A.a.tolist():
        out.append("".join(str(x) for x in row))
    return "\n".join(out) + "\n"
