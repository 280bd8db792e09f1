"""Sentence constructions tied to monomorphy, and duplicate-relation merging.

build_alpha(K) conjoins all relation literals realized by the identity
enumeration (0,...,n-1) of K; build_phi(K) disjoins its variable
permutations, so it holds of a tuple exactly when the induced
substructure on that tuple's range is isomorphic to K; build_psi(K)
universally closes it under an all-distinct guard, yielding a sentence
that says "every n-element substructure looks like K".  build_psi_n
disjoins psi over one representative per isomorphism class, saying "the
structure is n-monomorphic".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapExceededError, ValidationError
from .formulas import (
    Eq,
    Forall,
    Formula,
    Not,
    Rel,
    and_,
    implies,
    or_,
    permute_formula,
    rename_symbols,
    true_formula,
)
from .structures import (
    ENUM_MAX_LABELED,
    Signature,
    Structure,
    enumerate_structures,
)

#: Default cap on |K| for build_phi / build_psi (n! disjuncts).
PHI_SIZE_CAP = 6


def build_alpha(k_structure: Structure) -> Formula:
    """Conjunction of all relation literals true of the enumeration
    (0,...,n-1), with variables v0..v(n-1).

    Literals are ordered by (symbol position in the signature, argument
    tuple); equality literals are omitted, so the all-distinct guard in
    build_psi carries the injectivity requirement.
    """
    n = k_structure.size
    if n < 1:
        raise ValidationError("structure must be nonempty")
    literals: list[Formula] = []
    for (name, arity), ext in zip(k_structure.signature.symbols, k_structure.extensions):
        for args in itertools.product(range(n), repeat=arity):
            atom = Rel(name, args)
            literals.append(atom if args in ext else Not(atom))
    if not literals:
        return true_formula()
    return and_(literals)


def build_phi(k_structure: Structure, cap: int = PHI_SIZE_CAP) -> Formula:
    """Disjunction of the n! variable permutations of build_alpha.

    For injective tuples, holds exactly when the induced substructure on
    the tuple's range is isomorphic to K.
    """
    n = k_structure.size
    if n > cap:
        raise CapExceededError(f"build_phi: size {n} exceeds cap {cap} (n! disjuncts)")
    alpha = build_alpha(k_structure)
    return or_(
        permute_formula(alpha, perm) for perm in itertools.permutations(range(n))
    )


def build_psi(k_structure: Structure, cap: int = PHI_SIZE_CAP) -> Formula:
    """Sentence: every |K|-element substructure is isomorphic to K."""
    n = k_structure.size
    phi = build_phi(k_structure, cap)
    distinct = [
        Not(Eq(k, l)) for k, l in itertools.combinations(range(n), 2)
    ]
    body = phi if not distinct else implies(and_(distinct), phi)
    for var in reversed(range(n)):
        body = Forall(var, body)
    return body


def build_psi_n(
    signature: Signature,
    n: int,
    max_classes: int = 512,
    max_labeled: int = ENUM_MAX_LABELED,
    phi_cap: int = PHI_SIZE_CAP,
) -> Formula:
    """Sentence: the structure is n-monomorphic.

    Disjunction of build_psi(K) over one representative K per isomorphism
    class of n-element structures (representatives ordered by canonical
    code).
    """
    if n < 1:
        raise ValidationError("n must be >= 1")
    reps = enumerate_structures(signature, n, max_labeled=max_labeled, max_classes=max_classes)
    return or_(build_psi(k, phi_cap) for k in reps)


@dataclass(frozen=True)
class SignatureReduction:
    """Result of merging duplicate relations.

    symbol_map sends every original symbol to its representative (the
    first symbol, in signature order, with the same arity and extension).
    translate() rewrites any formula over the original signature into one
    over the reduced signature; evaluation is preserved.
    """

    structure: Structure
    symbol_map: tuple[tuple[str, str], ...]

    def translate(self, formula: Formula) -> Formula:
        return rename_symbols(formula, dict(self.symbol_map))

    def to_report(self) -> dict:
        return {
            "structure": self.structure.to_report(),
            "symbol_map": {old: new for old, new in self.symbol_map},
        }


def reduce_duplicate_relations(structure: Structure) -> SignatureReduction:
    """Merge symbols with identical arity and identical extension onto the
    least-indexed representative."""
    representative: dict[tuple[int, frozenset], str] = {}
    symbol_map: list[tuple[str, str]] = []
    kept: list[tuple[str, int]] = []
    kept_tuples: dict[str, frozenset] = {}
    for (name, arity), ext in zip(structure.signature.symbols, structure.extensions):
        key = (arity, ext)
        if key not in representative:
            representative[key] = name
            kept.append((name, arity))
            kept_tuples[name] = ext
        symbol_map.append((name, representative[key]))
    reduced = Structure.of(Signature(tuple(kept)), structure.size, kept_tuples)
    return SignatureReduction(reduced, tuple(symbol_map))
