import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from monochain import (
    CapExceededError,
    Signature,
    SignatureMismatchError,
    Structure,
    StructureParseError,
    ValidationError,
    age,
    canonical_code,
    enumerate_structures,
    find_isomorphism,
    induced_substructure,
    parse_structure,
    parse_structure_with_names,
    relabel_structure,
    render_structure,
)
from monochain.generators import GeneratorSpec, generate, random_structure

TRIANGLE_TEXT = """\
signature R/2
domain 3
R: (0,1) (1,2) (2,0)  # oriented 3-cycle
"""

SIG_R2 = Signature.of(("R", 2))


def triangle():
    return parse_structure(TRIANGLE_TEXT)


def transitive_3():
    return Structure.of(SIG_R2, 3, {"R": {(0, 1), (0, 2), (1, 2)}})


# --- parsing -----------------------------------------------------------------


def test_parse_triangle():
    t = triangle()
    assert t.size == 3
    assert t.extension("R") == {(0, 1), (1, 2), (2, 0)}


def test_parse_empty_relation():
    s = parse_structure("signature R/2\ndomain 3\n")
    assert s.size == 3
    assert s.extension("R") == frozenset()


def test_parse_arity_mismatch_has_line_number():
    with pytest.raises(StructureParseError) as err:
        parse_structure("signature R/2\ndomain 3\nR: (0,1,2)\n")
    assert err.value.line == 3


def test_parse_out_of_range_element():
    with pytest.raises(StructureParseError):
        parse_structure("signature R/2\ndomain 3\nR: (0,3)\n")


def test_parse_duplicate_symbol():
    with pytest.raises(StructureParseError) as err:
        parse_structure("signature R/2 R/3\ndomain 2\n")
    assert err.value.line == 1


def test_parse_unknown_symbol_line():
    with pytest.raises(StructureParseError):
        parse_structure("signature R/2\ndomain 2\nS: (0,1)\n")


def test_parse_named_domain_reports_mapping():
    s, names = parse_structure_with_names(
        "signature E/2\ndomain a b c\nE: (a,b) (b,c)\n"
    )
    assert names == ("a", "b", "c")
    assert s.extension("E") == {(0, 1), (1, 2)}


def test_render_parse_round_trip():
    for s in (triangle(), transitive_3(), generate(GeneratorSpec("betweenness", 4))):
        assert parse_structure(render_structure(s)) == s


def test_signature_rejects_bad_names():
    with pytest.raises(ValidationError):
        Signature.of(("not a name", 2))
    with pytest.raises(ValidationError):
        Signature.of(("R", 0))
    # '<' is the one permitted non-identifier name
    Signature.of(("<", 2))


def test_structure_validates_tuples():
    with pytest.raises(ValidationError):
        Structure.of(SIG_R2, 2, {"R": {(0, 1, 1)}})
    with pytest.raises(ValidationError):
        Structure.of(SIG_R2, 2, {"R": {(0, 2)}})


# --- induced substructures ---------------------------------------------------


def test_induced_whole_domain_is_identity():
    t = triangle()
    assert induced_substructure(t, range(3)) == t


def test_induced_pair_of_triangle_is_single_edge():
    # Restricting the three listed tuples to {0,1} leaves only (0,1).
    sub = induced_substructure(triangle(), {0, 1})
    assert sub.size == 2
    assert sub.extension("R") == {(0, 1)}


def test_induced_empty_relation():
    s = Structure.of(SIG_R2, 4)
    sub = induced_substructure(s, {1, 3})
    assert sub == Structure.of(SIG_R2, 2)


def test_induced_rejects_empty_and_foreign_subsets():
    with pytest.raises(ValidationError):
        induced_substructure(triangle(), ())
    with pytest.raises(ValidationError):
        induced_substructure(triangle(), {0, 5})


@given(st.integers(0, 10_000), st.data())
def test_induced_composition(seed, data):
    s = random_structure(SIG_R2, 5, seed)
    outer = data.draw(st.sets(st.integers(0, 4), min_size=2), label="outer")
    elements = sorted(outer)
    inner_positions = data.draw(
        st.sets(st.integers(0, len(elements) - 1), min_size=1), label="inner"
    )
    composed = {elements[i] for i in inner_positions}
    via_two_steps = induced_substructure(
        induced_substructure(s, outer), inner_positions
    )
    direct = induced_substructure(s, composed)
    assert via_two_steps == direct


# --- isomorphism -------------------------------------------------------------


def test_relabelled_triangle_is_isomorphic():
    t = triangle()
    relabelled = relabel_structure(t, (1, 2, 0))
    assert find_isomorphism(t, relabelled) is not None


def test_triangle_vs_transitive_none_oracle():
    # Independent oracle: exhaust all 6 bijections by hand.
    t, tt = triangle(), transitive_3()
    for perm in itertools.permutations(range(3)):
        mapped = {tuple(perm[e] for e in tup) for tup in t.extension("R")}
        assert mapped != tt.extension("R")
    assert find_isomorphism(t, tt) is None


def test_identity_isomorphism_is_least_witness():
    t = triangle()
    iso = find_isomorphism(t, t)
    assert iso is not None
    assert iso.pairs == ((0, 0), (1, 1), (2, 2))


def test_isomorphism_requires_same_signature():
    with pytest.raises(SignatureMismatchError):
        find_isomorphism(triangle(), Structure.of(Signature.of(("S", 2)), 3))


@given(st.integers(0, 10_000), st.permutations(range(4)))
def test_isomorphism_detects_relabelling(seed, perm):
    s = random_structure(SIG_R2, 4, seed)
    assert find_isomorphism(s, relabel_structure(s, perm)) is not None


@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_isomorphism_outcome_is_symmetric(seed_a, seed_b):
    a = random_structure(SIG_R2, 4, seed_a)
    b = random_structure(SIG_R2, 4, seed_b)
    assert (find_isomorphism(a, b) is None) == (find_isomorphism(b, a) is None)


def test_found_isomorphisms_preserve_extensions(fixed_corpus):
    small = [s for s in fixed_corpus if s.size <= 5]
    for a in small[:25]:
        b = relabel_structure(a, tuple(reversed(range(a.size)))) if a.size else a
        iso = find_isomorphism(a, b)
        assert iso is not None
        mapping = iso.to_mapping()
        for (name, _), ext in zip(a.signature.symbols, a.extensions):
            assert {tuple(mapping[e] for e in t) for t in ext} == b.extension(name)


# --- canonical codes ----------------------------------------------------------


def test_code_invariant_under_relabelling():
    t = triangle()
    assert canonical_code(t) == canonical_code(relabel_structure(t, (2, 0, 1)))


def test_code_separates_non_isomorphic():
    assert canonical_code(triangle()) != canonical_code(transitive_3())


def test_code_on_singletons():
    loop = Structure.of(SIG_R2, 1, {"R": {(0, 0)}})
    loop2 = Structure.of(SIG_R2, 1, {"R": {(0, 0)}})
    free = Structure.of(SIG_R2, 1)
    assert canonical_code(loop) == canonical_code(loop2)
    assert canonical_code(loop) != canonical_code(free)


def test_code_size_cap():
    with pytest.raises(CapExceededError):
        canonical_code(Structure.of(SIG_R2, 11), cap=10)


def test_code_agrees_with_isomorphism_on_corpus(fixed_corpus):
    # Oracle equivalence on all same-signature pairs of size <= 6.
    small = [s for s in fixed_corpus if s.size <= 6]
    for a, b in itertools.combinations(small, 2):
        if a.signature != b.signature or a.size != b.size:
            continue
        same_code = canonical_code(a) == canonical_code(b)
        iso = find_isomorphism(a, b) is not None
        assert same_code == iso


# --- ages ---------------------------------------------------------------------


def test_age_of_triangle_single_class_per_size():
    profile = age(triangle(), 3)
    assert {m: len(codes) for m, codes in profile.items()} == {1: 1, 2: 1, 3: 1}


def test_age_one_edge_two_pair_classes():
    one_edge = Structure.of(SIG_R2, 3, {"R": {(0, 1)}})
    profile = age(one_edge, 2)
    assert len(profile[2]) == 2  # edge pair vs non-edge pair


def test_age_empty_relation_one_class_per_size():
    s = Structure.of(SIG_R2, 5)
    profile = age(s, 5)
    assert all(len(codes) == 1 for codes in profile.values())


def test_age_rejects_bad_k():
    with pytest.raises(ValidationError):
        age(triangle(), 4)


# --- enumeration ----------------------------------------------------------------


def test_enumerate_binary_size_counts():
    # Known counts of binary relations up to isomorphism.
    assert len(enumerate_structures(SIG_R2, 1)) == 2
    assert len(enumerate_structures(SIG_R2, 2)) == 10
    assert len(enumerate_structures(SIG_R2, 3)) == 104


def test_enumerate_respects_caps():
    with pytest.raises(CapExceededError):
        enumerate_structures(SIG_R2, 5)  # 2^25 labeled structures
    with pytest.raises(CapExceededError):
        enumerate_structures(SIG_R2, 3, max_classes=50)
