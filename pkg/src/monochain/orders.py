"""Linear orders on {0..n-1} and order/equality patterns of tuples.

A LinearOrder is stored as its ascending enumeration, so the natural
order on n elements is (0, 1, ..., n-1).  The pattern of a tuple records,
per entry, how many distinct tuple values lie strictly below it; two
tuples share a pattern exactly when some order-preserving partial
injection maps one onto the other entrywise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .errors import ValidationError
from .structures import Signature, Structure

#: Signature of the order structures produced by :func:`order_structure`.
ORDER_SIGNATURE = Signature.of(("<", 2))


@dataclass(frozen=True, order=True)
class LinearOrder:
    """A linear order given as the ascending enumeration of {0..n-1}."""

    ascending: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.ascending) != list(range(len(self.ascending))):
            raise ValidationError(f"{self.ascending} is not a permutation of the domain")

    @classmethod
    def natural(cls, n: int) -> "LinearOrder":
        return cls(tuple(range(n)))

    @property
    def size(self) -> int:
        return len(self.ascending)

    def reverse(self) -> "LinearOrder":
        return LinearOrder(tuple(reversed(self.ascending)))

    def positions(self) -> tuple[int, ...]:
        """positions[element] = rank of the element in this order."""
        pos = [0] * len(self.ascending)
        for rank, element in enumerate(self.ascending):
            pos[element] = rank
        return tuple(pos)


@dataclass(frozen=True, order=True)
class Pattern:
    """Order/equality type of a tuple: ranks[j] counts the distinct tuple
    values strictly below entry j."""

    ranks: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.ranks and set(self.ranks) != set(range(max(self.ranks) + 1)):
            raise ValidationError(f"bad rank vector {self.ranks}")

    @property
    def arity(self) -> int:
        return len(self.ranks)

    def equality_kernel(self) -> tuple[int, ...]:
        """First-occurrence index of each entry's rank: the pure equality
        type of the tuple, forgetting order."""
        first: dict[int, int] = {}
        out = []
        for j, r in enumerate(self.ranks):
            first.setdefault(r, j)
            out.append(first[r])
        return tuple(out)


def tuple_pattern(t: tuple[int, ...], order: LinearOrder) -> Pattern:
    """Pattern of a tuple of domain elements relative to a linear order."""
    pos = order.positions()
    for e in t:
        if not (0 <= e < order.size):
            raise ValidationError(f"element {e} outside domain 0..{order.size - 1}")
    return Pattern(rank_vector(t, pos))


def rank_vector(t: tuple[int, ...], positions: tuple[int, ...]) -> tuple[int, ...]:
    """Rank vector of a tuple given a precomputed element->rank table.

    Internal fast path shared with the chaining scans, which call this in
    tight loops over n^arity tuples.
    """
    pts = [positions[e] for e in t]
    rank = {p: i for i, p in enumerate(sorted(set(pts)))}
    return tuple(rank[p] for p in pts)


def all_orders(n: int) -> Iterator[LinearOrder]:
    """All n! linear orders, in lexicographic order of ascending tuples."""
    for perm in itertools.permutations(range(n)):
        yield LinearOrder(perm)


def order_structure(order: LinearOrder) -> Structure:
    """The order as a relational structure over the '<' signature."""
    pos = order.positions()
    tuples = {
        "<": {
            (a, b)
            for a in range(order.size)
            for b in range(order.size)
            if pos[a] < pos[b]
        }
    }
    return Structure.of(ORDER_SIGNATURE, order.size, tuples)


def patterns_of_arity(arity: int, max_distinct: int) -> tuple[Pattern, ...]:
    """All patterns of the given arity with at most max_distinct distinct
    values, sorted lexicographically."""
    out = set()
    for pts in itertools.product(range(min(arity, max_distinct)), repeat=arity):
        rank = {p: i for i, p in enumerate(sorted(set(pts)))}
        out.add(Pattern(tuple(rank[p] for p in pts)))
    return tuple(sorted(out))
