"""Shared test helpers: independent oracles and random instance generators.

The brute-force routines here are deliberately primitive (full subset
enumeration, cofactor determinants) so they stay independent of the
package's own algorithms.
"""

from __future__ import annotations

import itertools
import random

from tuve import Hypergraph, VertexSet
from tuve.hypergraph import minimize


def brute_force_transversals(h: Hypergraph) -> set[int]:
    """All minimal transversals by scanning every subset of the universe."""
    edges = [e.mask for e in h.edges]
    if any(m == 0 for m in edges):
        return set()
    if not edges:
        return {0}
    hitters = [t for t in range(1 << h.n) if all(t & e for e in edges)]
    hitset = set(hitters)
    out = set()
    for t in hitters:
        minimal = True
        sub = t
        while sub:
            low = sub & -sub
            if (t ^ low) in hitset:
                minimal = False
                break
            sub ^= low
    # a transversal is minimal iff removing any single element breaks it
        if minimal:
            out.add(t)
    return out


def brute_force_det(rows) -> int:
    """Cofactor-expansion determinant, exact over the integers."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
        total += (-1) ** j * rows[0][j] * brute_force_det(minor)
    return total


def brute_force_is_tu(a) -> bool:
    m, n = len(a), len(a[0])
    for s in range(1, min(m, n) + 1):
        for ri in itertools.combinations(range(m), s):
            for ci in itertools.combinations(range(n), s):
                sub = [[a[i][j] for j in ci] for i in ri]
                if abs(brute_force_det(sub)) > 1:
                    return False
    return True


def random_sperner(rng: random.Random, n: int, m: int) -> Hypergraph:
    """A random Sperner family; not necessarily irredundant or unimodular."""
    edges = []
    for _ in range(m):
        size = rng.randint(1, n)
        edges.append(VertexSet.from_indices(rng.sample(range(n), size)))
    return minimize(n, edges)


def random_sperner_irredundant(rng: random.Random, n: int, m: int,
                               tries: int = 200) -> Hypergraph:
    for _ in range(tries):
        h = random_sperner(rng, n, m)
        if h.m and h.is_irredundant():
            return h
    raise RuntimeError("could not draw an irredundant Sperner family")


def masks(family) -> set[int]:
    return {t.mask for t in family}
