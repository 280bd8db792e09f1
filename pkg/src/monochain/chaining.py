"""Chaining: which linear orders make a structure order-definable.

An order chains a structure when membership of every tuple in every
relation depends only on the tuple's order/equality pattern.  For
relational structures this is equivalent to the partial-automorphism
containment (every order-preserving partial injection preserves all
relations): an order-preserving partial injection maps a tuple onto
another exactly when the two tuples share a pattern, so per-pattern
constancy of membership is the same thing as every such injection being
a partial automorphism.  The scan below is therefore O(sum n^arity)
instead of quantifying over all partial injections.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import CapExceededError, ValidationError
from .orders import LinearOrder, rank_vector
from .structures import Bijection, Structure

#: Default size cap for exhaustive chaining-order enumeration.
ENUMERATION_CAP = 9

ChainsWitness = tuple[str, tuple[int, ...], tuple[int, ...]]


def chains(
    structure: Structure, order: LinearOrder
) -> tuple[bool, ChainsWitness | None]:
    """Whether the order chains the structure.

    On failure returns (False, (symbol, t1, t2)) for the first two
    same-pattern tuples (in symbol then lexicographic tuple order) on
    which the relation disagrees; t1 is the earlier tuple.
    """
    if order.size != structure.size:
        raise ValidationError("order and structure sizes differ")
    pos = order.positions()
    for (name, arity), ext in zip(structure.signature.symbols, structure.extensions):
        seen: dict[tuple[int, ...], tuple[tuple[int, ...], bool]] = {}
        for t in itertools.product(range(structure.size), repeat=arity):
            key = rank_vector(t, pos)
            member = t in ext
            if key in seen:
                t0, member0 = seen[key]
                if member0 != member:
                    return False, (name, t0, t)
            else:
                seen[key] = (t, member)
    return True, None


@dataclass(frozen=True)
class ChainSet:
    """The set of linear orders that chain a structure (closed under
    reversal), stored sorted for determinism."""

    structure_size: int
    orders: tuple[LinearOrder, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "orders", tuple(sorted(set(self.orders))))
        for order in self.orders:
            if order.size != self.structure_size:
                raise ValidationError("order size differs from structure size")

    def __len__(self) -> int:
        return len(self.orders)

    def __contains__(self, order: object) -> bool:
        return order in self.orders

    def to_report(self) -> dict:
        return {
            "structure_size": self.structure_size,
            "count": len(self.orders),
            "orders": [list(o.ascending) for o in self.orders],
        }


def enumerate_chaining_orders(structure: Structure, cap: int = ENUMERATION_CAP) -> ChainSet:
    """All linear orders that chain the structure.

    Prefix-extension search: a partial ascending enumeration is pruned as
    soon as two tuples inside it share a pattern but disagree on
    membership.  A tuple's pattern only depends on the relative order of
    its own entries, so pattern mixing is monotone under extension and
    pruning preserves completeness.
    """
    n = structure.size
    if n > cap:
        raise CapExceededError(f"enumerate_chaining_orders: size {n} exceeds cap {cap}")
    arities = [arity for _, arity in structure.signature.symbols]
    exts = structure.extensions
    results: list[LinearOrder] = []
    prefix: list[int] = []
    pos: dict[int, int] = {}
    table: dict[tuple[int, tuple[int, ...]], bool] = {}

    def new_checks(e: int) -> list[tuple[int, tuple[int, ...]]] | None:
        """Register all tuples inside the prefix that involve e; None on conflict."""
        added: list[tuple[int, tuple[int, ...]]] = []
        elements = prefix  # includes e, appended by caller
        for s, arity in enumerate(arities):
            ext = exts[s]
            for t in itertools.product(elements, repeat=arity):
                if e not in t:
                    continue
                pts = [pos[x] for x in t]
                rank = {p: i for i, p in enumerate(sorted(set(pts)))}
                key = (s, tuple(rank[p] for p in pts))
                member = t in ext
                if key in table:
                    if table[key] != member:
                        for k in added:
                            del table[k]
                        return None
                else:
                    table[key] = member
                    added.append(key)
        return added

    def extend(remaining: list[int]) -> None:
        if not remaining:
            results.append(LinearOrder(tuple(prefix)))
            return
        for i, e in enumerate(remaining):
            prefix.append(e)
            pos[e] = len(prefix) - 1
            added = new_checks(e)
            if added is not None:
                extend(remaining[:i] + remaining[i + 1 :])
                for k in added:
                    del table[k]
            prefix.pop()
            del pos[e]

    extend(list(range(n)))
    return ChainSet(n, tuple(results))


@dataclass(frozen=True)
class TrichotomyReport:
    """Shape of a chain set: all orders, the cut-and-reverse closure of a
    witness, a kernel form with freely permutable end blocks, or none of
    these (the classification is only guaranteed for infinite structures,
    so none_of_these is a legal verdict)."""

    case: str  # "constant" | "cut_reversal" | "kernel" | "none_of_these"
    witness: LinearOrder | None = None
    kernel_prefix: tuple[int, ...] | None = None
    kernel_middle: tuple[int, ...] | None = None
    kernel_suffix: tuple[int, ...] | None = None
    degenerate: bool = False

    def to_report(self) -> dict:
        return {
            "case": self.case,
            "witness": list(self.witness.ascending) if self.witness else None,
            "kernel_prefix": list(self.kernel_prefix) if self.kernel_prefix is not None else None,
            "kernel_middle": list(self.kernel_middle) if self.kernel_middle is not None else None,
            "kernel_suffix": list(self.kernel_suffix) if self.kernel_suffix is not None else None,
            "degenerate": self.degenerate,
        }


def _rotations_and_reversals(ascending: tuple[int, ...]) -> set[tuple[int, ...]]:
    """Union over all cuts X = I+F of {F+I, reverse(F+I)}."""
    out = set()
    n = len(ascending)
    for i in range(n):
        rot = ascending[i:] + ascending[:i]
        out.add(rot)
        out.add(tuple(reversed(rot)))
    return out


def _kernel_generated(
    ascending: tuple[int, ...], a: int, b: int
) -> set[tuple[int, ...]]:
    """Orders of the form (any order of the first a elements) + middle +
    (any order of the last b elements), plus their reversals."""
    n = len(ascending)
    prefix, middle, suffix = ascending[:a], ascending[a : n - b], ascending[n - b :]
    out = set()
    for p in itertools.permutations(prefix):
        for s in itertools.permutations(suffix):
            forward = p + middle + s
            out.add(forward)
            out.add(tuple(reversed(forward)))
    return out


def classify_chain_set(structure: Structure, chain_set: ChainSet) -> TrichotomyReport:
    """Classify a nonempty chain set; the witness is the lexicographically
    least member.  Checked in order: constant, cut_reversal, kernel."""
    if len(chain_set) == 0:
        raise ValidationError("cannot classify an empty chain set")
    if chain_set.structure_size != structure.size:
        raise ValidationError("chain set does not belong to this structure")
    n = chain_set.structure_size
    members = {o.ascending for o in chain_set.orders}
    if len(members) == math.factorial(n):
        return TrichotomyReport("constant")

    for order in chain_set.orders:
        if _rotations_and_reversals(order.ascending) == members:
            return TrichotomyReport("cut_reversal", witness=order)

    witness = chain_set.orders[0]
    asc = witness.ascending

    def block_free(a: int, b: int) -> bool:
        return _kernel_generated(asc, a, b) <= members

    a = 0
    while a < n and block_free(a + 1, 0):
        a += 1
    b = 0
    while a + b < n and block_free(a, b + 1):
        b += 1
    if a <= 1:
        a = 0
    if b <= 1:
        b = 0
    if _kernel_generated(asc, a, b) == members:
        return TrichotomyReport(
            "kernel",
            witness=witness,
            kernel_prefix=asc[:a],
            kernel_middle=asc[a : n - b],
            kernel_suffix=asc[n - b :],
            degenerate=(a + b == n),
        )
    return TrichotomyReport("none_of_these")


def transport_order(bijection: Bijection, order: LinearOrder) -> LinearOrder:
    """Pull a linear order back along an isomorphism.

    With ``bijection`` mapping the domain of Z onto the domain of Y and
    ``order`` on Y, the result orders Z so that the bijection is
    order-preserving; it chains Z exactly when ``order`` chains Y.
    """
    n = order.size
    if not bijection.is_total_permutation(n):
        raise ValidationError("bijection is not a total bijection on the order's domain")
    inverse = bijection.inverse().to_mapping()
    return LinearOrder(tuple(inverse[y] for y in order.ascending))
