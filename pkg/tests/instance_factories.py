"""Randomized factories for decomposition-rule instances.

Each factory draws a hypergraph whose structure matches one sum rule and
returns it with the intended witness.  Construction is by shape plus
rejection: the drawn instance is minimized, screened for irredundancy, and
the witness re-checked with the exact validator; failures are redrawn.

Buckets for the 3-sum rules are classified after the fact from the solver
context (inner-edge pattern and near-side dual classes), since minimization
can move an instance between subcases.
"""

from __future__ import annotations

import random

from tuve import DecompositionCase, Hypergraph, VertexSet, validate
from tuve.decomp import CaseTag
from tuve.hypergraph import minimize


def _subset(rng: random.Random, pool: list[int], lo: int = 1,
            hi: int | None = None) -> VertexSet:
    hi = hi if hi is not None else len(pool)
    k = rng.randint(lo, max(lo, min(hi, len(pool))))
    return VertexSet.from_indices(rng.sample(pool, k))


def _finish(n: int, edges, case: DecompositionCase,
            ) -> tuple[Hypergraph, DecompositionCase] | None:
    h = minimize(n, edges)
    if not h.is_irredundant() or h.m < 2:
        return None
    if not validate(h, case):
        return None
    return h, case


def make_one_sum(rng: random.Random) -> tuple[Hypergraph, DecompositionCase] | None:
    n1, n2 = rng.randint(2, 4), rng.randint(2, 4)
    n = n1 + n2
    left = list(range(n1))
    right = list(range(n1, n))
    edges = [_subset(rng, left) for _ in range(rng.randint(1, 3))]
    edges += [_subset(rng, right) for _ in range(rng.randint(1, 3))]
    case = DecompositionCase(CaseTag.ONE_SUM,
                             v1=VertexSet.from_indices(left),
                             v2=VertexSet.from_indices(right))
    return _finish(n, edges, case)


def make_two_sum(rng: random.Random) -> tuple[Hypergraph, DecompositionCase] | None:
    n1, n2 = rng.randint(2, 4), rng.randint(2, 4)
    n = n1 + n2
    left = list(range(n1))
    right = list(range(n1, n))
    s = _subset(rng, left, 1, n1 - 1 if n1 > 1 else 1)
    edges = [_subset(rng, left) for _ in range(rng.randint(1, 3))]
    for _ in range(rng.randint(1, 3)):
        edges.append(s | _subset(rng, right))
    edges += [_subset(rng, right) for _ in range(rng.randint(0, 2))]
    case = DecompositionCase(CaseTag.TWO_SUM,
                             v1=VertexSet.from_indices(left),
                             v2=VertexSet.from_indices(right), s=s)
    return _finish(n, edges, case)


def make_case1(rng: random.Random, want_inner: bool,
               ) -> tuple[Hypergraph, DecompositionCase] | None:
    n1, n2 = rng.randint(2, 4), rng.randint(2, 4)
    n = n1 + n2
    left = list(range(n1))
    right = list(range(n1, n))
    s1 = _subset(rng, left, 1, 2)
    s2 = _subset(rng, right, 1, 2)
    edges = []
    for _ in range(rng.randint(1, 2)):          # crossing, near trace
        y = _subset(rng, right)
        if not want_inner and y.issubset(s2):
            y = y | _subset(rng, [v for v in right if v not in s2] or right)
        edges.append(s1 | y)
    for _ in range(rng.randint(1, 2)):          # crossing, far trace
        x = _subset(rng, left)
        if not want_inner and x.issubset(s1):
            x = x | _subset(rng, [v for v in left if v not in s1] or left)
        edges.append(x | s2)
    if want_inner:
        edges.append(s1 | _subset(rng, list(s2.indices())))
    edges += [_subset(rng, left) for _ in range(rng.randint(0, 2))]
    edges += [_subset(rng, right) for _ in range(rng.randint(0, 2))]
    case = DecompositionCase(CaseTag.THREE_SUM_CASE1,
                             v1=VertexSet.from_indices(left),
                             v2=VertexSet.from_indices(right), s1=s1, s2=s2)
    return _finish(n, edges, case)


def make_case2(rng: random.Random, shape: str,
               ) -> tuple[Hypergraph, DecompositionCase] | None:
    """shape in {'open', 'union-edge', 'single', 'inner'}.

    open: no edge inside the group union.  union-edge: the union itself is
    an edge (plus company).  single: the union is the only near-side edge.
    inner: proper inner edges, steering toward the candidate-filter routes.
    """
    sizes = [rng.randint(1, 2) for _ in range(3)]
    extra1 = rng.randint(0, 2) if shape in ("open", "union-edge") else 0
    n1 = sum(sizes) + extra1
    n2 = rng.randint(2, 4)
    n = n1 + n2
    vs = list(range(n))
    s0 = VertexSet.from_indices(vs[:sizes[0]])
    s1 = VertexSet.from_indices(vs[sizes[0]:sizes[0] + sizes[1]])
    s2 = VertexSet.from_indices(vs[sizes[0] + sizes[1]:sum(sizes)])
    left = vs[:n1]
    right = vs[n1:]
    union = s0 | s1 | s2
    edges = []
    for _ in range(rng.randint(1, 2)):
        edges.append((s0 | s1) | _subset(rng, right))
    for _ in range(rng.randint(1, 2)):
        edges.append((s0 | s2) | _subset(rng, right))
    if shape == "open":
        spare = [v for v in left if v not in union]
        if not spare:
            return None
        for _ in range(rng.randint(1, 2)):
            edges.append(_subset(rng, list(union.indices()))
                         | _subset(rng, spare))
    elif shape == "union-edge":
        edges.append(union)
        spare = [v for v in left if v not in union]
        extra = (_subset(rng, spare) | _subset(rng, left)) if spare \
            else _subset(rng, left)
        edges.append(extra)
    elif shape == "single":
        edges.append(union)
    elif shape == "inner":
        pool = list(union.indices())
        for _ in range(rng.randint(1, 2)):
            inner = _subset(rng, pool, 1, len(pool) - 1)
            edges.append(inner)
    edges += [_subset(rng, right) for _ in range(rng.randint(0, 2))]
    case = DecompositionCase(CaseTag.THREE_SUM_CASE2,
                             v1=VertexSet.from_indices(left),
                             v2=VertexSet.from_indices(right),
                             s0=s0, s1=s1, s2=s2)
    return _finish(n, edges, case)


def make_case3(rng: random.Random, shape: str,
               ) -> tuple[Hypergraph, DecompositionCase] | None:
    """shape in {'open', 'union-edge', 'inner'}; the near side has two groups."""
    sizes = [rng.randint(1, 2) for _ in range(2)]
    extra1 = rng.randint(0, 2)
    n1 = sum(sizes) + extra1
    n2 = rng.randint(2, 4)
    n = n1 + n2
    vs = list(range(n))
    s1 = VertexSet.from_indices(vs[:sizes[0]])
    s2 = VertexSet.from_indices(vs[sizes[0]:sum(sizes)])
    left = vs[:n1]
    right = vs[n1:]
    union = s1 | s2
    edges = []
    for _ in range(rng.randint(1, 2)):
        edges.append(s1 | _subset(rng, right))
    for _ in range(rng.randint(1, 2)):
        edges.append(s2 | _subset(rng, right))
    if rng.random() < 0.4:
        edges.append(union | _subset(rng, right))
    if shape == "open":
        spare = [v for v in left if v not in union]
        if not spare:
            return None
        for _ in range(rng.randint(1, 2)):
            edges.append(_subset(rng, list(union.indices()))
                         | _subset(rng, spare))
    elif shape == "union-edge":
        edges.append(union)
        spare = [v for v in left if v not in union]
        if spare:
            edges.append(_subset(rng, spare) | _subset(rng, left))
        elif len(left) >= 2:
            edges.append(_subset(rng, left, 1, len(left) - 1))
    elif shape == "inner":
        pool = list(union.indices())
        if len(pool) < 3:
            return None
        for _ in range(rng.randint(1, 2)):
            inner = _subset(rng, pool, 2, len(pool) - 1)
            if inner.isdisjoint(s1) or inner.isdisjoint(s2):
                continue
            edges.append(inner)
    edges += [_subset(rng, right) for _ in range(rng.randint(0, 2))]
    case = DecompositionCase(CaseTag.THREE_SUM_CASE3,
                             v1=VertexSet.from_indices(left),
                             v2=VertexSet.from_indices(right),
                             s1=s1, s2=s2)
    return _finish(n, edges, case)


def draw(factory, rng: random.Random, *args, tries: int = 400):
    for _ in range(tries):
        got = factory(rng, *args)
        if got is not None:
            return got
    raise RuntimeError(f"factory {factory.__name__}{args} failed to produce "
                       f"a valid instance in {tries} tries")
