import pytest

from monochain import (
    CapExceededError,
    Signature,
    Structure,
    ValidationError,
    age,
    check_reducts,
    frasnay_sweep,
    is_k_monomorphic,
    is_monomorphic,
    parse_structure,
)
from monochain.generators import GeneratorSpec, generate, random_structure

SIG = Signature.of(("R", 2))


def triangle():
    return generate(GeneratorSpec("triangle"))


def one_edge_on_3():
    return Structure.of(SIG, 3, {"R": {(0, 1)}})


def test_triangle_is_2_monomorphic():
    ok, witness = is_k_monomorphic(triangle(), 2)
    assert ok and witness is None


def test_k_equals_size_is_trivially_true():
    for s in (triangle(), one_edge_on_3()):
        assert is_k_monomorphic(s, s.size)[0] is True


def test_one_edge_witness_is_least_pair():
    ok, witness = is_k_monomorphic(one_edge_on_3(), 2)
    assert not ok
    assert witness == ((0, 1), (0, 2))


def test_k_out_of_range():
    with pytest.raises(ValidationError):
        is_k_monomorphic(triangle(), 4)
    with pytest.raises(ValidationError):
        is_k_monomorphic(triangle(), 0)


def test_triangle_report_fully_monomorphic():
    report = is_monomorphic(triangle())
    assert report.monomorphic
    assert [e.k for e in report.entries] == [1, 2, 3]
    assert all(e.class_count == 1 for e in report.entries)


def test_linear_order_structure_is_monomorphic():
    # order-preserving maps between k-subsets are isomorphisms
    for n in (2, 4, 5):
        assert is_monomorphic(generate(GeneratorSpec("linear", n))).monomorphic


def test_one_edge_report():
    report = is_monomorphic(one_edge_on_3())
    assert not report.monomorphic
    assert report.entry(2).class_count == 2
    assert report.entry(2).witness == ((0, 1), (0, 2))
    assert report.first_failure() == 2


def test_verdict_matches_age_class_count(fixed_corpus):
    for y in [s for s in fixed_corpus if 1 <= s.size <= 4][:25]:
        profile = age(y, y.size)
        for k in range(1, y.size + 1):
            assert is_k_monomorphic(y, k)[0] == (len(profile[k]) == 1)


# --- reducts ---------------------------------------------------------------------


def test_reducts_single_symbol():
    report = check_reducts(triangle())
    assert report.agreement
    assert report.monomorphic
    assert report.reduct_verdicts == ((("R",), True),)


def test_reducts_two_symbol_monomorphic():
    sig = Signature.of(("R", 2), ("S", 2))
    full = {(a, b) for a in range(3) for b in range(3) if a != b}
    y = Structure.of(sig, 3, {"R": full, "S": full})
    report = check_reducts(y)
    assert report.monomorphic
    assert report.agreement
    assert all(v for _, v in report.reduct_verdicts)


def test_reducts_monomorphic_parts_non_monomorphic_join():
    # each reduct is a linear-order relation (monomorphic), but jointly the
    # two opposite orders distinguish pairs from triples... use orders on
    # different axes so the join fails while parts succeed.
    sig = Signature.of(("R", 2), ("S", 2))
    r = {(0, 1), (0, 2), (1, 2)}
    s = {(1, 0), (2, 0), (1, 2)}  # not the reverse: mixes orientations
    y = Structure.of(sig, 3, {"R": r, "S": s})
    report = check_reducts(y)
    per_symbol = {names: verdict for names, verdict in report.reduct_verdicts}
    assert per_symbol[("R",)] is True
    assert per_symbol[("S",)] is True
    assert not report.monomorphic
    assert report.agreement  # one-directional: no contradiction


def test_reducts_symbol_cap():
    sig = Signature.of(("A", 1), ("B", 1), ("C", 1), ("D", 1), ("E", 1))
    with pytest.raises(CapExceededError):
        check_reducts(Structure.of(sig, 2))


# --- threshold sweep ----------------------------------------------------------------


def test_sweep_arity_1_threshold_is_1():
    report = frasnay_sweep(1, 6)
    assert report.mode == "exhaustive"
    for variant in report.variants:
        assert variant.threshold == 1
        assert variant.eliminated == ()


def test_sweep_arity_2_max_4():
    report = frasnay_sweep(2, 4)
    exact = report.variant("exact")
    cumulative = report.variant("cumulative")
    # every m is eliminated for the exact variant: a size-m structure is
    # trivially m-monomorphic, so any non-monomorphic size-m structure kills m
    assert exact.threshold is None
    assert [c.m for c in exact.eliminated] == [1, 2, 3, 4]
    assert cumulative.threshold == 3
    assert [c.m for c in cumulative.eliminated] == [1, 2]


def test_sweep_counterexamples_actually_eliminate():
    report = frasnay_sweep(2, 4)
    for variant in report.variants:
        for ce in variant.eliminated:
            y = parse_structure(ce.structure_text)
            assert y.size >= ce.m
            if variant.variant == "exact":
                assert is_k_monomorphic(y, ce.m)[0]
            else:
                assert all(
                    is_k_monomorphic(y, k)[0] for k in range(1, min(ce.m, y.size) + 1)
                )
            assert not is_k_monomorphic(y, ce.failing_k)[0]


def test_sweep_is_deterministic():
    assert frasnay_sweep(2, 4) == frasnay_sweep(2, 4)


def test_sweep_sampled_mode_reports_seed():
    report = frasnay_sweep(2, 6, seed=5, samples=5)
    assert report.mode == "sampled"
    assert report.seed == 5
    assert report.samples == 5


def test_sweep_rejects_bad_parameters():
    with pytest.raises(ValidationError):
        frasnay_sweep(0, 3)
    with pytest.raises(ValidationError):
        frasnay_sweep(2, 0)
