"""First-order formulas over a relational signature.

AST, concrete syntax (parser and printer), a direct recursive evaluator,
variable substitution and permutation, symbol renaming, and the
star-translation that rewrites relation atoms into quantifier-free order
formulas.

Concrete syntax::

    atom        v0 = v1   |   R(v0,v1,...)   |   v0 < v1 [< v2 ...]
    formula     ~f   |   (f & f & ...)   |   (f | f | ...)   |   (f -> f)
                |   A v0 f   |   E v0 f   |   atom

Connective groups are fully parenthesized; a group mixes only one
connective.  ``->`` is binary sugar for ``(~a | b)`` and is desugared at
parse time.  The infix ``<`` forms (and chains, which desugar to
conjunctions of adjacent comparisons) require the signature to contain
the distinguished binary symbol ``<``.  Names of the form v<digits> are
reserved for variables.

Everything here is pure and the AST nodes are immutable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .errors import FormulaParseError, SignatureMismatchError, ValidationError
from .structures import Signature, Structure


@dataclass(frozen=True)
class Eq:
    left: int
    right: int


@dataclass(frozen=True)
class Rel:
    symbol: str
    args: tuple[int, ...]


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    items: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2:
            raise ValidationError("conjunction needs at least two items")


@dataclass(frozen=True)
class Or:
    items: tuple["Formula", ...]

    def __post_init__(self) -> None:
        if len(self.items) < 2:
            raise ValidationError("disjunction needs at least two items")


@dataclass(frozen=True)
class Forall:
    var: int
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: int
    body: "Formula"


Formula = Union[Eq, Rel, Not, And, Or, Forall, Exists]


def and_(items: Iterable[Formula]) -> Formula:
    """N-ary conjunction; a singleton collapses to the item itself."""
    items = tuple(items)
    if not items:
        raise ValidationError("empty conjunction; use true_formula()")
    return items[0] if len(items) == 1 else And(items)


def or_(items: Iterable[Formula]) -> Formula:
    """N-ary disjunction; a singleton collapses to the item itself."""
    items = tuple(items)
    if not items:
        raise ValidationError("empty disjunction; use false_formula()")
    return items[0] if len(items) == 1 else Or(items)


def true_formula() -> Formula:
    return Eq(0, 0)


def false_formula() -> Formula:
    return Not(Eq(0, 0))


def implies(antecedent: Formula, consequent: Formula) -> Formula:
    return Or((Not(antecedent), consequent))


# ---------------------------------------------------------------------------
# traversals


def free_variables(formula: Formula) -> frozenset[int]:
    if isinstance(formula, Eq):
        return frozenset((formula.left, formula.right))
    if isinstance(formula, Rel):
        return frozenset(formula.args)
    if isinstance(formula, Not):
        return free_variables(formula.body)
    if isinstance(formula, (And, Or)):
        out: frozenset[int] = frozenset()
        for item in formula.items:
            out |= free_variables(item)
        return out
    return free_variables(formula.body) - {formula.var}


def all_variable_indices(formula: Formula) -> frozenset[int]:
    if isinstance(formula, Eq):
        return frozenset((formula.left, formula.right))
    if isinstance(formula, Rel):
        return frozenset(formula.args)
    if isinstance(formula, Not):
        return all_variable_indices(formula.body)
    if isinstance(formula, (And, Or)):
        out: frozenset[int] = frozenset()
        for item in formula.items:
            out |= all_variable_indices(item)
        return out
    return all_variable_indices(formula.body) | {formula.var}


def is_quantifier_free(formula: Formula) -> bool:
    if isinstance(formula, (Eq, Rel)):
        return True
    if isinstance(formula, Not):
        return is_quantifier_free(formula.body)
    if isinstance(formula, (And, Or)):
        return all(is_quantifier_free(item) for item in formula.items)
    return False


def has_quantifier(formula: Formula) -> bool:
    return not is_quantifier_free(formula)


def check_against_signature(formula: Formula, signature: Signature) -> None:
    """Raise SignatureMismatchError on unknown symbols or arity mismatches."""
    if isinstance(formula, Eq):
        return
    if isinstance(formula, Rel):
        if formula.symbol not in signature:
            raise SignatureMismatchError(f"unknown symbol {formula.symbol!r}")
        arity = signature.arity(formula.symbol)
        if len(formula.args) != arity:
            raise SignatureMismatchError(
                f"symbol {formula.symbol}: {len(formula.args)} arguments, arity is {arity}"
            )
        return
    if isinstance(formula, Not):
        check_against_signature(formula.body, signature)
    elif isinstance(formula, (And, Or)):
        for item in formula.items:
            check_against_signature(item, signature)
    else:
        check_against_signature(formula.body, signature)


# ---------------------------------------------------------------------------
# substitution


def substitute(formula: Formula, mapping: Mapping[int, int]) -> Formula:
    """Replace free occurrences of variables, capture-avoidingly.

    Bound variables that would capture a substituted image are renamed to
    a fresh index (deterministically: one past the largest index in
    sight).
    """
    mapping = {k: v for k, v in mapping.items() if k != v}
    if not mapping:
        return formula
    if isinstance(formula, Eq):
        return Eq(mapping.get(formula.left, formula.left), mapping.get(formula.right, formula.right))
    if isinstance(formula, Rel):
        return Rel(formula.symbol, tuple(mapping.get(a, a) for a in formula.args))
    if isinstance(formula, Not):
        return Not(substitute(formula.body, mapping))
    if isinstance(formula, (And, Or)):
        return type(formula)(tuple(substitute(item, mapping) for item in formula.items))
    var, body = formula.var, formula.body
    inner = {k: v for k, v in mapping.items() if k != var and k in free_variables(body)}
    if not inner:
        return formula
    if var in inner.values():
        fresh = 1 + max(
            max(all_variable_indices(body), default=-1),
            max(inner.keys()),
            max(inner.values()),
            var,
        )
        body = substitute(body, {var: fresh})
        var = fresh
    return type(formula)(var, substitute(body, inner))


def permute_formula(formula: Formula, perm: Sequence[int]) -> Formula:
    """Replace each free variable v_k by v_perm[k].

    Satisfies: Y |= permute_formula(f, p)[y0..y(n-1)] iff
    Y |= f[y_p(0), ..., y_p(n-1)].
    """
    perm = tuple(perm)
    if sorted(perm) != list(range(len(perm))):
        raise ValidationError(f"{perm} is not a permutation")
    out_of_range = [v for v in free_variables(formula) if v >= len(perm)]
    if out_of_range:
        raise ValidationError(f"free variable v{min(out_of_range)} out of permutation range")
    return substitute(formula, {k: perm[k] for k in range(len(perm))})


def rename_symbols(formula: Formula, name_map: Mapping[str, str]) -> Formula:
    """Replace relation symbols according to name_map (missing names kept)."""
    if isinstance(formula, Eq):
        return formula
    if isinstance(formula, Rel):
        return Rel(name_map.get(formula.symbol, formula.symbol), formula.args)
    if isinstance(formula, Not):
        return Not(rename_symbols(formula.body, name_map))
    if isinstance(formula, (And, Or)):
        return type(formula)(tuple(rename_symbols(item, name_map) for item in formula.items))
    return type(formula)(formula.var, rename_symbols(formula.body, name_map))


def star_translate(formula: Formula, defs: Mapping[str, Formula]) -> Formula:
    """Rewrite every relation atom R(vk0,...) into its order definition,
    substituting vj |-> vkj inside the definition.

    Each definition must be quantifier-free with free variables among the
    first arity-many; equality atoms and the logical skeleton are kept.
    """
    for name, d in defs.items():
        if not is_quantifier_free(d):
            raise ValidationError(f"definition for {name} is not quantifier-free")

    def go(f: Formula) -> Formula:
        if isinstance(f, Eq):
            return f
        if isinstance(f, Rel):
            if f.symbol not in defs:
                raise ValidationError(f"no definition for symbol {f.symbol!r}")
            d = defs[f.symbol]
            bad = [v for v in free_variables(d) if v >= len(f.args)]
            if bad:
                raise ValidationError(
                    f"definition for {f.symbol} uses v{min(bad)} beyond arity {len(f.args)}"
                )
            return substitute(d, {j: f.args[j] for j in range(len(f.args))})
        if isinstance(f, Not):
            return Not(go(f.body))
        if isinstance(f, (And, Or)):
            return type(f)(tuple(go(item) for item in f.items))
        return type(f)(f.var, go(f.body))

    return go(formula)


# ---------------------------------------------------------------------------
# evaluation


_MISSING = object()


def evaluate(
    structure: Structure,
    formula: Formula,
    assignment: Mapping[int, int] | None = None,
) -> bool:
    """Tarskian truth value of the formula in the structure.

    The assignment must cover all free variables; quantifiers iterate the
    domain in ascending order and require a nonempty domain.
    """
    check_against_signature(formula, structure.signature)
    env: dict[int, int] = dict(assignment or {})
    missing = sorted(free_variables(formula) - env.keys())
    if missing:
        raise ValidationError(f"assignment does not cover free variable v{missing[0]}")
    for v, x in env.items():
        if not (0 <= x < structure.size):
            raise ValidationError(f"assignment maps v{v} to {x}, outside the domain")
    if structure.size == 0 and has_quantifier(formula):
        raise ValidationError("cannot evaluate quantifiers over an empty domain")
    ext = {name: structure.extension(name) for name in structure.signature.names()}
    domain = range(structure.size)

    def go(f: Formula) -> bool:
        if isinstance(f, Eq):
            return env[f.left] == env[f.right]
        if isinstance(f, Rel):
            return tuple(env[a] for a in f.args) in ext[f.symbol]
        if isinstance(f, Not):
            return not go(f.body)
        if isinstance(f, And):
            return all(go(item) for item in f.items)
        if isinstance(f, Or):
            return any(go(item) for item in f.items)
        var = f.var
        saved = env.get(var, _MISSING)
        want_all = isinstance(f, Forall)
        result = want_all
        for x in domain:
            env[var] = x
            if go(f.body) is not want_all:
                result = not want_all
                break
        if saved is _MISSING:
            env.pop(var, None)
        else:
            env[var] = saved  # type: ignore[assignment]
        return result

    return go(formula)


# ---------------------------------------------------------------------------
# concrete syntax

_TOKEN_RE = re.compile(
    r"(?P<ws>\s+)|(?P<var>v\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<arrow>->)|(?P<sym>[()=~&|<,])"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise FormulaParseError(f"unexpected character {text[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), pos))  # type: ignore[arg-type]
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, signature: Signature):
        self.tokens = _tokenize(text)
        self.signature = signature
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str) -> None:
        kind, text, pos = self.take()
        if text != value:
            raise FormulaParseError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def parse(self) -> Formula:
        f = self.formula()
        kind, text, pos = self.peek()
        if kind != "end":
            raise FormulaParseError(f"trailing input starting at {text!r}", pos)
        return f

    def formula(self) -> Formula:
        kind, text, pos = self.peek()
        if text == "~":
            self.take()
            return Not(self.formula())
        if text == "(":
            return self.group()
        if kind == "name" and text in ("A", "E") and self.tokens[self.i + 1][0] == "var":
            self.take()
            var = int(self.take()[1][1:])
            body = self.formula()
            return Forall(var, body) if text == "A" else Exists(var, body)
        if kind == "name":
            return self.relation_atom()
        if kind == "var":
            return self.variable_atom()
        raise FormulaParseError(f"expected a formula, found {text or 'end of input'!r}", pos)

    def group(self) -> Formula:
        self.expect("(")
        first = self.formula()
        kind, text, pos = self.peek()
        if text == ")":
            self.take()
            return first
        if text not in ("&", "|", "->"):
            raise FormulaParseError(f"expected a connective, found {text or 'end of input'!r}", pos)
        op = text
        items = [first]
        while True:
            kind, text, pos = self.peek()
            if text == ")":
                self.take()
                break
            if text != op:
                raise FormulaParseError(
                    f"cannot mix connectives in one group: expected {op!r}, found {text!r}", pos
                )
            self.take()
            items.append(self.formula())
        if op == "->":
            if len(items) != 2:
                raise FormulaParseError("'->' takes exactly two operands", pos)
            return implies(items[0], items[1])
        return And(tuple(items)) if op == "&" else Or(tuple(items))

    def relation_atom(self) -> Formula:
        kind, name, pos = self.take()
        if name not in self.signature:
            raise FormulaParseError(f"unknown symbol {name!r}", pos)
        self.expect("(")
        args = [self.variable()]
        while self.peek()[1] == ",":
            self.take()
            args.append(self.variable())
        self.expect(")")
        arity = self.signature.arity(name)
        if len(args) != arity:
            raise FormulaParseError(
                f"symbol {name}: {len(args)} arguments, arity is {arity}", pos
            )
        return Rel(name, tuple(args))

    def variable(self) -> int:
        kind, text, pos = self.take()
        if kind != "var":
            raise FormulaParseError(f"expected a variable, found {text or 'end of input'!r}", pos)
        return int(text[1:])

    def variable_atom(self) -> Formula:
        first = self.variable()
        kind, text, pos = self.peek()
        if text == "=":
            self.take()
            return Eq(first, self.variable())
        if text == "<":
            if "<" not in self.signature:
                raise FormulaParseError("signature has no '<' symbol", pos)
            chain = [first]
            while self.peek()[1] == "<":
                self.take()
                chain.append(self.variable())
            atoms = [Rel("<", (a, b)) for a, b in zip(chain, chain[1:])]
            return and_(atoms)
        raise FormulaParseError(f"expected '=' or '<', found {text or 'end of input'!r}", pos)


def parse_formula(text: str, signature: Signature) -> Formula:
    """Parse formula source text against a signature."""
    return _Parser(text, signature).parse()


def format_formula(formula: Formula) -> str:
    """Canonical text form; parse_formula(format_formula(f)) == f."""
    if isinstance(formula, Eq):
        return f"v{formula.left} = v{formula.right}"
    if isinstance(formula, Rel):
        if formula.symbol == "<":
            return f"v{formula.args[0]} < v{formula.args[1]}"
        return f"{formula.symbol}({','.join(f'v{a}' for a in formula.args)})"
    if isinstance(formula, Not):
        return "~" + format_formula(formula.body)
    if isinstance(formula, And):
        return "(" + " & ".join(format_formula(i) for i in formula.items) + ")"
    if isinstance(formula, Or):
        return "(" + " | ".join(format_formula(i) for i in formula.items) + ")"
    if isinstance(formula, Forall):
        return f"A v{formula.var} " + format_formula(formula.body)
    return f"E v{formula.var} " + format_formula(formula.body)
