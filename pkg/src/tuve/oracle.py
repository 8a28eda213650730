"""Ground-truth dualization by Berge multiplication, plus dual-pair checking.

This is the referee for the decomposition machinery: exact, budgeted, and
slow.  The conventions for trivial inputs are fixed here once: the dual of
the empty family is the family containing the empty set, and the dual of the
family containing the empty edge is empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Literal

from .hypergraph import (
    Hypergraph,
    VertexSet,
    edge_sort_key,
    is_minimal_transversal,
)

DEFAULT_MAX_N = 24
DEFAULT_MAX_FAMILY = 2_000_000


class BudgetExceeded(RuntimeError):
    """The operation would exceed its configured resource budget."""


@dataclass(frozen=True)
class TransversalSet:
    """The family of all minimal transversals of a source hypergraph."""

    family: Hypergraph
    source_universe: int

    @property
    def edges(self) -> tuple[VertexSet, ...]:
        return self.family.edges

    def masks(self) -> frozenset[int]:
        return frozenset(e.mask for e in self.family.edges)

    def __iter__(self) -> Iterator[VertexSet]:
        return iter(self.family.edges)

    def __len__(self) -> int:
        return len(self.family.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransversalSet):
            return NotImplemented
        return (self.source_universe == other.source_universe
                and self.masks() == other.masks())

    def __hash__(self) -> int:
        return hash((self.source_universe, self.masks()))


@dataclass(frozen=True)
class VerificationResult:
    status: Literal["valid", "not-a-minimal-transversal", "incomplete"]
    witness: VertexSet | None = None

    @property
    def is_valid(self) -> bool:
        return self.status == "valid"


def _antichain(masks, max_family: int) -> list[int]:
    pool = sorted(set(masks))
    pool.sort(key=lambda m: m.bit_count())
    kept: list[int] = []
    for m in pool:
        if not any(k & ~m == 0 for k in kept):
            kept.append(m)
            if len(kept) > max_family:
                raise BudgetExceeded(f"intermediate antichain above {max_family} sets")
    return kept


def berge_dualize(h: Hypergraph, *, max_n: int = DEFAULT_MAX_N,
                  max_family: int = DEFAULT_MAX_FAMILY) -> TransversalSet:
    """Exact dual of ``h`` by edge-by-edge multiplication.

    Edges are folded in ascending-size order with re-minimization after each
    one, which keeps the intermediate antichains small in practice.  Raises
    :class:`BudgetExceeded` when the universe or an intermediate family is
    too large for desk-scale use.
    """
    if h.has_empty_edge():
        return TransversalSet(Hypergraph(h.n, ()), h.n)
    if h.m == 0:
        return TransversalSet(Hypergraph(h.n, (VertexSet(),)), h.n)
    if h.n > max_n:
        raise BudgetExceeded(f"universe size {h.n} above oracle cap {max_n}")

    family: list[int] = [0]
    for e in sorted(h.edges, key=edge_sort_key):
        em = e.mask
        new: set[int] = set()
        for t in family:
            if t & em:
                new.add(t)
            else:
                v = em
                while v:
                    low = v & -v
                    new.add(t | low)
                    v ^= low
        if len(new) > max_family:
            raise BudgetExceeded(f"intermediate family above {max_family} sets")
        family = _antichain(new, max_family)
    sets = sorted((VertexSet(m) for m in family), key=edge_sort_key)
    return TransversalSet(Hypergraph(h.n, sets), h.n)


def verify_dual_pair(h: Hypergraph, x: TransversalSet | Hypergraph,
                     *, max_n: int = DEFAULT_MAX_N,
                     max_family: int = DEFAULT_MAX_FAMILY) -> VerificationResult:
    """Decide whether ``x`` is exactly the dual of ``h``.

    On failure the result carries a concrete witness: either a member of
    ``x`` that is not a minimal transversal, or a minimal transversal that
    ``x`` misses.
    """
    fam = x.family if isinstance(x, TransversalSet) else x
    if fam.n != h.n:
        raise ValueError("dual pair must share one universe")
    truth = berge_dualize(h, max_n=max_n, max_family=max_family)
    truth_masks = truth.masks()
    for t in fam.edges:
        if t.mask not in truth_masks:
            return VerificationResult("not-a-minimal-transversal", t)
    have = {t.mask for t in fam.edges}
    for t in truth.edges:
        if t.mask not in have:
            return VerificationResult("incomplete", t)
    return VerificationResult("valid")


def transversal_set_of(h: Hypergraph, family) -> TransversalSet:
    """Package a computed dual family (checked lightly) as a TransversalSet."""
    return TransversalSet(Hypergraph(h.n, family), h.n)
