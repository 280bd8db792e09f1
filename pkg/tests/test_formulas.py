import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from monochain import (
    And,
    Eq,
    Exists,
    Forall,
    FormulaParseError,
    Not,
    Or,
    ORDER_SIGNATURE,
    Rel,
    Signature,
    SignatureMismatchError,
    Structure,
    ValidationError,
    evaluate,
    format_formula,
    free_variables,
    parse_formula,
    permute_formula,
    star_translate,
    substitute,
)
from monochain.formulas import is_quantifier_free
from monochain.generators import GeneratorSpec, generate, random_formula, random_structure
from monochain.orders import LinearOrder, order_structure

SIG = Signature.of(("R", 2))
SIG_P = Signature.of(("P", 1))


def triangle():
    return generate(GeneratorSpec("triangle"))


# --- parsing / printing -------------------------------------------------------


def test_parse_equality_atom():
    assert parse_formula("v0 = v1", SIG) == Eq(0, 1)


def test_parse_relation_atom():
    assert parse_formula("R(v0,v1)", SIG) == Rel("R", (0, 1))


def test_parse_betweenness_sugar():
    f = parse_formula("(v0<v1<v2 | v2<v1<v0)", ORDER_SIGNATURE)
    assert f == Or(
        (
            And((Rel("<", (0, 1)), Rel("<", (1, 2)))),
            And((Rel("<", (2, 1)), Rel("<", (1, 0)))),
        )
    )


def test_parse_arity_error():
    with pytest.raises(FormulaParseError):
        parse_formula("R(v0)", SIG)


def test_parse_unknown_symbol():
    with pytest.raises(FormulaParseError):
        parse_formula("S(v0,v1)", SIG)


def test_parse_lt_requires_order_symbol():
    with pytest.raises(FormulaParseError):
        parse_formula("v0 < v1", SIG)


def test_parse_implication_desugars():
    f = parse_formula("(R(v0,v1) -> v0 = v1)", SIG)
    assert f == Or((Not(Rel("R", (0, 1))), Eq(0, 1)))


def test_parse_quantifiers_and_lookahead():
    f = parse_formula("A v0 E v1 R(v0,v1)", SIG)
    assert f == Forall(0, Exists(1, Rel("R", (0, 1))))
    # a relation symbol named like a quantifier letter still parses
    sig = Signature.of(("A", 1))
    assert parse_formula("A(v0)", sig) == Rel("A", (0,))


def test_parse_rejects_mixed_connectives():
    with pytest.raises(FormulaParseError):
        parse_formula("(v0 = v1 & v1 = v2 | v0 = v2)", SIG)


def test_parse_rejects_trailing_input():
    with pytest.raises(FormulaParseError):
        parse_formula("v0 = v1 v2", SIG)


@st.composite
def formulas(draw, max_depth=4):
    n_vars = 4
    variables = st.integers(0, n_vars - 1)

    def node(depth):
        leaves = [
            st.builds(Eq, variables, variables),
            st.builds(
                Rel,
                st.just("R"),
                st.tuples(variables, variables),
            ),
            st.builds(Rel, st.just("P"), st.tuples(variables)),
        ]
        if depth == 0:
            return st.one_of(leaves)
        inner = node(depth - 1)
        return st.one_of(
            leaves
            + [
                st.builds(Not, inner),
                st.builds(lambda a, b: And((a, b)), inner, inner),
                st.builds(lambda a, b, c: Or((a, b, c)), inner, inner, inner),
                st.builds(Forall, variables, inner),
                st.builds(Exists, variables, inner),
            ]
        )

    return draw(node(max_depth))


FORMULA_SIG = Signature.of(("R", 2), ("P", 1))


@given(formulas())
def test_parse_print_identity(f):
    assert parse_formula(format_formula(f), FORMULA_SIG) == f


# --- evaluation ---------------------------------------------------------------


def test_eval_triangle_every_vertex_has_out_edge():
    # hand-check: the 3-cycle 0->1->2->0 gives every vertex an out-edge
    f = parse_formula("A v0 E v1 R(v0,v1)", SIG)
    assert evaluate(triangle(), f) is True


def test_eval_one_edge_has_stuck_vertex():
    one_edge = Structure.of(SIG, 3, {"R": {(0, 1)}})
    f = parse_formula("A v0 E v1 R(v0,v1)", SIG)
    assert evaluate(one_edge, f) is False


def test_eval_reflexive_equality():
    assert evaluate(triangle(), Eq(0, 0), {0: 2}) is True


def test_eval_requires_covering_assignment():
    with pytest.raises(ValidationError):
        evaluate(triangle(), Eq(0, 1), {0: 1})


def test_eval_signature_mismatch():
    with pytest.raises(SignatureMismatchError):
        evaluate(triangle(), Rel("S", (0,)), {0: 0})


def test_eval_rejects_quantifier_on_empty_domain():
    empty = Structure.of(SIG, 0)
    with pytest.raises(ValidationError):
        evaluate(empty, Forall(0, Eq(0, 0)))


# --- substitution / permutation ------------------------------------------------


def test_permute_swap_relation_args():
    assert permute_formula(Rel("R", (0, 1)), (1, 0)) == Rel("R", (1, 0))


def test_permute_identity_is_noop():
    f = parse_formula("(v0 = v2 & R(v1,v0))", SIG)
    assert permute_formula(f, (0, 1, 2)) == f


def test_permute_three_cycle_by_hand():
    # v0 -> v1, v1 -> v2, v2 -> v0 applied to (v0=v2 & R(v1,v0))
    f = parse_formula("(v0 = v2 & R(v1,v0))", SIG)
    assert permute_formula(f, (1, 2, 0)) == parse_formula("(v1 = v0 & R(v2,v1))", SIG)


def test_permute_rejects_out_of_range_free_variable():
    with pytest.raises(ValidationError):
        permute_formula(Rel("R", (0, 3)), (1, 0))


def test_substitute_avoids_capture():
    # renaming the free v0 to v1 under a binder for v1 must not capture
    f = Exists(1, Rel("R", (0, 1)))
    g = substitute(f, {0: 1})
    assert free_variables(g) == {1}
    one_edge = Structure.of(SIG, 3, {"R": {(0, 1)}})
    # semantics: "something is R-above v0", evaluated at v0 := 0 vs renamed at v1 := 0
    assert evaluate(one_edge, f, {0: 0}) is True
    assert evaluate(one_edge, g, {1: 0}) is True
    assert evaluate(one_edge, g, {1: 1}) is False


@given(st.integers(0, 5000), st.permutations(range(3)), st.data())
def test_permutation_identity_random(seed, perm, data):
    # Y |= f_perm[y] iff Y |= f[y o perm]
    rng = random.Random(seed)
    structure = random_structure(FORMULA_SIG, 4, seed)
    f = random_formula(FORMULA_SIG, rng, free_limit=3, depth=2, quantifier_budget=2)
    ys = tuple(data.draw(st.integers(0, 3)) for _ in range(3))
    permuted = permute_formula(f, perm)
    lhs = evaluate(structure, permuted, dict(enumerate(ys)))
    rhs = evaluate(structure, f, {k: ys[perm[k]] for k in range(3)})
    assert lhs == rhs


# --- star translation -----------------------------------------------------------


def test_star_direct_substitution():
    f = Rel("R", (0, 1))
    out = star_translate(f, {"R": Rel("<", (0, 1))})
    assert out == Rel("<", (0, 1))


def test_star_substitution_reindexes():
    f = Rel("R", (2, 0))
    out = star_translate(f, {"R": Rel("<", (0, 1))})
    assert out == Rel("<", (2, 0))


def test_star_under_quantifier():
    betw = parse_formula("(v0<v1<v2 | v2<v1<v0)", ORDER_SIGNATURE)
    f = Exists(1, Rel("S", (0, 1, 2)))
    out = star_translate(f, {"S": betw})
    assert out == Exists(1, betw)
    f2 = Exists(1, Rel("S", (1, 0, 2)))
    out2 = star_translate(f2, {"S": betw})
    assert out2 == Exists(
        1, parse_formula("(v1<v0<v2 | v2<v0<v1)", ORDER_SIGNATURE)
    )


def test_star_requires_definitions():
    with pytest.raises(ValidationError):
        star_translate(Rel("R", (0, 1)), {})


def test_star_rejects_quantified_definitions():
    with pytest.raises(ValidationError):
        star_translate(Rel("R", (0, 1)), {"R": Exists(1, Rel("<", (0, 1)))})


def test_random_formulas_are_well_formed():
    rng = random.Random(7)
    for _ in range(50):
        f = random_formula(FORMULA_SIG, rng, free_limit=2)
        assert free_variables(f) <= {0, 1}
        text = format_formula(f)
        assert parse_formula(text, FORMULA_SIG) == f


def test_random_qf_formulas_are_quantifier_free():
    rng = random.Random(11)
    for _ in range(30):
        f = random_formula(ORDER_SIGNATURE, rng, free_limit=2, quantifier_budget=0)
        assert is_quantifier_free(f)
