"""Generators for example structures and seeded random corpora.

The betweenness and cyclic families are built by deriving from the
natural order with their defining formulas; random structures draw each
tuple independently at the requested density from Python's MT19937
generator (random.Random), whose output for a fixed seed is stable across
platforms and versions.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .definability import derive_structure
from .errors import ValidationError
from .formulas import (
    And,
    Eq,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    Rel,
    parse_formula,
)
from .orders import ORDER_SIGNATURE, LinearOrder
from .structures import Signature, Structure

KINDS = (
    "linear",
    "betweenness",
    "cyclic",
    "triangle",
    "transitive_tournament",
    "constant",
    "random",
)

BETWEENNESS_FORMULA_TEXT = "(v0 < v1 < v2 | v2 < v1 < v0)"
CYCLIC_FORMULA_TEXT = "(v0 < v1 < v2 | v1 < v2 < v0 | v2 < v0 < v1)"


def betweenness_formula() -> Formula:
    return parse_formula(BETWEENNESS_FORMULA_TEXT, ORDER_SIGNATURE)


def cyclic_formula() -> Formula:
    return parse_formula(CYCLIC_FORMULA_TEXT, ORDER_SIGNATURE)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    size: int = 3
    seed: int = 0
    density: float = 0.5
    arity: int = 2  # random kind only

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"unknown generator kind {self.kind!r}")
        if self.size < 1:
            raise ValidationError("size must be >= 1")
        if not (0.0 <= self.density <= 1.0):
            raise ValidationError("density must be in [0, 1]")
        if self.arity < 1:
            raise ValidationError("arity must be >= 1")
        if self.kind == "triangle" and self.size != 3:
            raise ValidationError("the oriented triangle has size 3")


def generate(spec: GeneratorSpec) -> Structure:
    """Deterministic structure generation; random kinds are seeded."""
    n = spec.size
    if spec.kind == "linear":
        return Structure.of(
            ORDER_SIGNATURE, n, {"<": {(a, b) for a in range(n) for b in range(n) if a < b}}
        )
    if spec.kind == "betweenness":
        return derive_structure(
            LinearOrder.natural(n), Signature.of(("B", 3)), {"B": betweenness_formula()}
        )
    if spec.kind == "cyclic":
        return derive_structure(
            LinearOrder.natural(n), Signature.of(("C", 3)), {"C": cyclic_formula()}
        )
    if spec.kind == "triangle":
        return Structure.of(Signature.of(("R", 2)), 3, {"R": {(0, 1), (1, 2), (2, 0)}})
    if spec.kind == "transitive_tournament":
        return Structure.of(
            Signature.of(("R", 2)), n, {"R": {(a, b) for a in range(n) for b in range(n) if a < b}}
        )
    if spec.kind == "constant":
        # Membership depends only on the equality pattern: all distinct pairs.
        return Structure.of(
            Signature.of(("R", 2)), n, {"R": {(a, b) for a in range(n) for b in range(n) if a != b}}
        )
    rng = random.Random(spec.seed)
    tuples = {
        t
        for t in itertools.product(range(n), repeat=spec.arity)
        if rng.random() < spec.density
    }
    return Structure.of(Signature.of(("R", spec.arity)), n, {"R": tuples})


def reversal_automorphism_check(structure: Structure, order: LinearOrder) -> bool:
    """Whether the permutation that reverses the order is an automorphism.

    True for betweenness structures (where it has order 2 once size >= 2),
    false for the order relation itself once size >= 2.
    """
    if order.size != structure.size:
        raise ValidationError("order and structure sizes differ")
    asc = order.ascending
    flip = {asc[i]: asc[len(asc) - 1 - i] for i in range(len(asc))}
    for ext in structure.extensions:
        if {tuple(flip[e] for e in t) for t in ext} != ext:
            return False
    return True


def random_structure(
    signature: Signature, size: int, seed: int, density: float = 0.5
) -> Structure:
    """Seeded random structure over an arbitrary signature."""
    rng = random.Random(seed)
    tuples = {}
    for name, arity in signature.symbols:
        tuples[name] = {
            t
            for t in itertools.product(range(size), repeat=arity)
            if rng.random() < density
        }
    return Structure.of(signature, size, tuples)


def random_formula(
    signature: Signature,
    rng: random.Random,
    free_limit: int = 2,
    depth: int = 3,
    quantifier_budget: int = 3,
) -> Formula:
    """Seeded random formula with free variables among v0..v(free_limit-1)
    and at most quantifier_budget nested quantifiers."""
    if free_limit < 1:
        raise ValidationError("free_limit must be >= 1")

    def go(d: int, q: int, scope: tuple[int, ...], next_var: int) -> Formula:
        choices = ["atom"]
        if d > 0:
            choices += ["not", "and", "or"]
            if q > 0:
                choices.append("quantifier")
        pick = rng.choice(choices)
        if pick == "atom":
            if signature.symbols and rng.random() < 0.75:
                name, arity = rng.choice(signature.symbols)
                args = tuple(rng.choice(scope) for _ in range(arity))
                return Rel(name, args)
            return Eq(rng.choice(scope), rng.choice(scope))
        if pick == "not":
            return Not(go(d - 1, q, scope, next_var))
        if pick in ("and", "or"):
            node = And if pick == "and" else Or
            width = rng.choice((2, 2, 3))
            return node(tuple(go(d - 1, q, scope, next_var) for _ in range(width)))
        var = next_var
        body = go(d - 1, q - 1, scope + (var,), next_var + 1)
        return Forall(var, body) if rng.random() < 0.5 else Exists(var, body)

    return go(depth, quantifier_budget, tuple(range(free_limit)), free_limit)


def corpus() -> tuple[Structure, ...]:
    """Fixed deterministic test corpus.

    Contains the named example structures plus seeded random structures;
    more than 50 members have the plain binary signature R/2 and size at
    most 5, and every member has size at most 6.
    """
    out: list[Structure] = []
    out.append(generate(GeneratorSpec("triangle")))
    for n in (3, 4, 5):
        out.append(generate(GeneratorSpec("transitive_tournament", n)))
        out.append(generate(GeneratorSpec("constant", n)))
    for n in (1, 2, 3, 4, 5):
        out.append(Structure.of(Signature.of(("R", 2)), n))  # empty relation
    seed = 0
    for n in (1, 2, 3, 4, 5):
        for density in (0.2, 0.5, 0.8):
            for _ in range(3):
                out.append(random_structure(Signature.of(("R", 2)), n, seed, density))
                seed += 1
    # non-binary and multi-symbol members
    for n in (3, 4, 5, 6):
        out.append(generate(GeneratorSpec("betweenness", n)))
        out.append(generate(GeneratorSpec("cyclic", n)))
        out.append(generate(GeneratorSpec("linear", n)))
    for n in (3, 4, 5):
        out.append(random_structure(Signature.of(("R", 2), ("S", 1)), n, seed))
        seed += 1
        out.append(random_structure(Signature.of(("R", 3)), n, seed, 0.3))
        seed += 1
    for density in (0.3, 0.6):
        out.append(random_structure(Signature.of(("R", 2)), 6, seed, density))
        seed += 1
    return tuple(out)
