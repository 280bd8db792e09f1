"""Quantifier-free order definitions: synthesis and the derive direction.

synthesize_definition reads off, for each relation, the set of
order/equality patterns realized by its member tuples, and renders the
disjunction of complete pairwise pattern descriptions; derive_structure
goes the other way, carving relations out of a linear order by evaluating
quantifier-free order formulas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from .errors import MixedPatternError, StructureParseError, ValidationError
from .formulas import (
    Eq,
    Formula,
    Rel,
    and_,
    check_against_signature,
    evaluate,
    false_formula,
    format_formula,
    free_variables,
    is_quantifier_free,
    or_,
    parse_formula,
    true_formula,
)
from .orders import ORDER_SIGNATURE, LinearOrder, Pattern, order_structure, rank_vector
from .structures import Signature, Structure, parse_signature_text


def pattern_formula(pattern: Pattern) -> Formula:
    """Complete pairwise description of a pattern: for every index pair
    exactly one of <, =, > as an atom over the '<' signature."""
    parts: list[Formula] = []
    for k, l in itertools.combinations(range(pattern.arity), 2):
        rk, rl = pattern.ranks[k], pattern.ranks[l]
        if rk < rl:
            parts.append(Rel("<", (k, l)))
        elif rk == rl:
            parts.append(Eq(k, l))
        else:
            parts.append(Rel("<", (l, k)))
    if not parts:
        return true_formula()
    return and_(parts)


def patterns_to_formula(patterns: tuple[Pattern, ...]) -> Formula:
    """Disjunction of pattern descriptions; empty set renders as constant false."""
    if not patterns:
        return false_formula()
    return or_(pattern_formula(p) for p in sorted(patterns))


@dataclass(frozen=True)
class QFDefinition:
    """Accepted pattern sets plus rendered quantifier-free formulas, per
    relation symbol.  constant_symbols lists relations whose membership
    depends only on equality patterns, i.e. relations chained by every
    linear order."""

    signature: Signature
    accepted: tuple[tuple[str, tuple[Pattern, ...]], ...]
    formulas: tuple[tuple[str, Formula], ...]
    constant_symbols: frozenset[str]

    def patterns_for(self, name: str) -> tuple[Pattern, ...]:
        for sym, pats in self.accepted:
            if sym == name:
                return pats
        raise KeyError(name)

    def formula_for(self, name: str) -> Formula:
        for sym, f in self.formulas:
            if sym == name:
                return f
        raise KeyError(name)

    def defs_mapping(self) -> dict[str, Formula]:
        return dict(self.formulas)

    def to_report(self) -> dict:
        return {
            "signature": [[n, a] for n, a in self.signature.symbols],
            "definitions": {name: format_formula(f) for name, f in self.formulas},
            "patterns": {
                name: [list(p.ranks) for p in pats] for name, pats in self.accepted
            },
            "constant_symbols": sorted(self.constant_symbols),
        }


def _is_equality_only(accepted: set[Pattern], arity: int) -> bool:
    """True when the accepted set is a union of full equality-kernel
    classes, so membership ignores the order entirely."""
    kernels = {p.equality_kernel() for p in accepted}
    by_kernel: dict[tuple[int, ...], set[Pattern]] = {}
    for pts in itertools.product(range(arity), repeat=arity):
        rank = {x: i for i, x in enumerate(sorted(set(pts)))}
        p = Pattern(tuple(rank[x] for x in pts))
        by_kernel.setdefault(p.equality_kernel(), set()).add(p)
    return all(by_kernel[k] <= accepted for k in kernels)


def synthesize_definition(structure: Structure, order: LinearOrder) -> QFDefinition:
    """Quantifier-free order definitions for a structure chained by the order.

    Raises MixedPatternError (with witness tuples) when some pattern has
    both member and non-member tuples, i.e. when the order does not chain
    the structure.
    """
    if order.size != structure.size:
        raise ValidationError("order and structure sizes differ")
    pos = order.positions()
    accepted: list[tuple[str, tuple[Pattern, ...]]] = []
    formulas: list[tuple[str, Formula]] = []
    constant: set[str] = set()
    for (name, arity), ext in zip(structure.signature.symbols, structure.extensions):
        seen: dict[tuple[int, ...], tuple[tuple[int, ...], bool]] = {}
        pats: set[Pattern] = set()
        for t in itertools.product(range(structure.size), repeat=arity):
            key = rank_vector(t, pos)
            member = t in ext
            if key in seen:
                t0, member0 = seen[key]
                if member0 != member:
                    member_t, other = (t0, t) if member0 else (t, t0)
                    raise MixedPatternError(name, member_t, other)
            else:
                seen[key] = (t, member)
            if member:
                pats.add(Pattern(key))
        ordered = tuple(sorted(pats))
        accepted.append((name, ordered))
        formulas.append((name, patterns_to_formula(ordered)))
        if _is_equality_only(pats, arity):
            constant.add(name)
    return QFDefinition(structure.signature, tuple(accepted), tuple(formulas), frozenset(constant))


def derive_structure(
    order: LinearOrder,
    signature: Signature,
    defs: Mapping[str, Formula],
) -> Structure:
    """Build the structure whose relations are carved out of the order by
    quantifier-free formulas: a tuple is in R exactly when the order
    structure satisfies R's definition at it."""
    for name, arity in signature.symbols:
        if name not in defs:
            raise ValidationError(f"no definition for symbol {name!r}")
        d = defs[name]
        if not is_quantifier_free(d):
            raise ValidationError(f"definition for {name} is not quantifier-free")
        check_against_signature(d, ORDER_SIGNATURE)
        bad = [v for v in free_variables(d) if v >= arity]
        if bad:
            raise ValidationError(
                f"definition for {name} uses v{min(bad)} but the arity is {arity}"
            )
    base = order_structure(order)
    tuples = {}
    for name, arity in signature.symbols:
        d = defs[name]
        tuples[name] = {
            t
            for t in itertools.product(range(order.size), repeat=arity)
            if evaluate(base, d, dict(enumerate(t)))
        }
    return Structure.of(signature, order.size, tuples)


def derive_from_definition(order: LinearOrder, definition: QFDefinition) -> Structure:
    return derive_structure(order, definition.signature, definition.defs_mapping())


# ---------------------------------------------------------------------------
# definition file format


def render_definition(definition: QFDefinition) -> str:
    """Definition file: signature line, one formula line per symbol, and an
    informational pattern line per symbol."""
    lines = ["signature " + " ".join(f"{n}/{a}" for n, a in definition.signature.symbols)]
    for name, f in definition.formulas:
        lines.append(f"{name}: {format_formula(f)}")
    for name, pats in definition.accepted:
        rendered = " ".join("(" + ",".join(map(str, p.ranks)) + ")" for p in pats)
        lines.append(f"patterns {name}: {rendered}".rstrip())
    return "\n".join(lines) + "\n"


def parse_definition(text: str) -> tuple[Signature, dict[str, Formula]]:
    """Parse a definition file (pattern lines are informational and skipped)."""
    signature: Signature | None = None
    defs: dict[str, Formula] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("patterns "):
            continue
        if signature is None:
            if not line.startswith("signature"):
                raise StructureParseError("expected 'signature' line", lineno)
            try:
                signature = parse_signature_text(line[len("signature"):])
            except ValidationError as exc:
                raise StructureParseError(str(exc), lineno) from exc
            continue
        if ":" not in line:
            raise StructureParseError("expected '<symbol>: <formula>' line", lineno)
        sym, _, rest = line.partition(":")
        sym = sym.strip()
        if sym not in signature:
            raise StructureParseError(f"unknown symbol {sym!r}", lineno)
        defs[sym] = parse_formula(rest.strip(), ORDER_SIGNATURE)
    if signature is None:
        raise StructureParseError("missing 'signature' line")
    missing = [name for name in signature.names() if name not in defs]
    if missing:
        raise StructureParseError(f"no definition for symbol {missing[0]!r}")
    return signature, defs
