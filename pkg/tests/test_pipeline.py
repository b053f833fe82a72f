import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import ft_value
from xsec.instances import SHIPPED, bad_candidates, prop35_language, shipped_candidate_path
from xsec.lang import Nfa, same_language, union
from xsec.lang.io import nfa_from_dict
from xsec.monoid import A7
from xsec.pipeline import (
    Budget,
    Refutation,
    check_refutation,
    check_semantic_preservation,
    lift,
    normalize_pipeline,
    pipeline_apply,
    random_candidate,
    refute_regular_cross_section,
    replace_omega_words,
    shape_nfa,
    shape_violations,
)

SYMBOLS = tuple(A7)


def W(s):
    return tuple(s.split())


def test_normalize_small_examples():
    cand = Nfa.from_words([W("Omega"), W("p00 x y z")], SYMBOLS)
    L4 = normalize_pipeline(cand)[-1]
    assert L4.enumerate(6) == [W("p00 x y z")]

    # z before x is dropped; the x survives
    L4 = normalize_pipeline(Nfa.from_words([W("p00 z x")], SYMBOLS))[-1]
    assert L4.enumerate(6) == [W("p00 x")]

    stages = normalize_pipeline(Nfa.empty(SYMBOLS))
    assert all(s.is_empty() for s in stages)


def test_free_words_vanish_and_prefixes_are_cut():
    # alpha = 1 is a power of two, so the z's act and are kept
    cand = Nfa.from_words([W("x y"), W("y x p00 x z z")], SYMBOLS)
    assert normalize_pipeline(cand)[-1].enumerate(8) == [W("p00 x z z")]


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_l4_has_normal_shape(seed):
    cand = random_candidate(random.Random(seed))
    L4 = normalize_pipeline(cand)[-1]
    assert shape_violations(L4).is_empty()


@given(st.integers(0, 10**6))
@settings(max_examples=25, deadline=None)
def test_pipeline_words_lift_back(seed):
    cand = random_candidate(random.Random(seed))
    stages = [cand.with_alphabet(SYMBOLS), *normalize_pipeline(cand)]
    for w in stages[-1].enumerate(5)[:6]:
        src = lift(w, stages)
        assert src is not None and cand.accepts(src)
        assert w in pipeline_apply(src)


def test_pipeline_apply_preserves_value():
    rng = random.Random(3)
    for _ in range(300):
        v = tuple(rng.choice(["x", "y", "y'", "z", "z'"]) for _ in range(rng.randint(0, 8)))
        w = ("p00",) + v
        if ft_value(w) == ("O",):
            continue
        (out,) = pipeline_apply(w)
        assert ft_value(out) == ft_value(w) and shape_nfa().accepts(out)


def test_semantic_preservation_small_bound():
    n, failures = check_semantic_preservation(6)
    assert n > 1000 and failures == []


def test_replace_omega_words():
    cand = Nfa.from_words([W("p00 x y z"), W("p00 y x"), W("x")], SYMBOLS)
    out = replace_omega_words(cand, 6)
    assert out.enumerate(6) == [W("Omega"), W("x"), W("p00 x y z")]


def test_prop35_language_survives_pipeline():
    # a context-free candidate cannot go through the passes; check words instead
    for w in prop35_language(with_omega=False).enumerate(7):
        if w[:1] == ("p00",):
            assert pipeline_apply(w) == {w}


# --- refuter --------------------------------------------------------------------------

@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_candidates_are_refuted(name):
    cand = bad_candidates()[name]
    res = refute_regular_cross_section(cand)
    assert res.found
    assert check_refutation(res.refutation, cand)
    back = Refutation.from_dict(json.loads(json.dumps(res.refutation.to_dict())))
    assert back == res.refutation


@pytest.mark.parametrize("name", SHIPPED)
def test_shipped_json_matches_builtin(name):
    loaded = nfa_from_dict(json.loads(shipped_candidate_path(name).read_text()))
    assert same_language(loaded.with_alphabet(SYMBOLS), bad_candidates()[name].with_alphabet(SYMBOLS))


def test_pumping_alone_refutes_regular_attempts():
    for name in ("ys-then-zs", "y-star-z-star"):
        cand = bad_candidates()[name]
        res = refute_regular_cross_section(cand, strategies=("pumping",))
        assert res.found and res.refutation.strategy == "pumping"
        assert check_refutation(res.refutation, cand)


def test_empty_language_is_missing_identity():
    res = refute_regular_cross_section(Nfa.empty(SYMBOLS))
    assert res.refutation.kind == "missing"
    assert res.refutation.element.startswith("F:")


def test_free_part_only_candidate_misses_points():
    free = Nfa.star_of(["x", "y", "y'", "z", "z'"], SYMBOLS)
    res = refute_regular_cross_section(free)
    assert res.found and check_refutation(res.refutation, free)
    assert res.refutation.element == "P:0,0"
    # a single point word blocks the point certificate
    with_p = union(free, Nfa.from_words([W("p00 x")], SYMBOLS))
    assert not check_refutation(res.refutation, with_p)


def test_tiny_budget_gives_not_found():
    res = refute_regular_cross_section(bad_candidates()["y-star-z-star"], Budget(evaluations=1))
    assert not res.found
    assert res.to_dict()["status"] == "not-found"


def test_check_refutation_rejects_tampering():
    cand = bad_candidates()["all-words"]
    ref = refute_regular_cross_section(cand).refutation
    assert check_refutation(ref, cand)
    bad = Refutation(ref.kind, ref.words, "P:9,9", ref.strategy)
    assert not check_refutation(bad, cand)
    same = Refutation("collision", (W("p00"), W("p00")), "P:0,0", "enumerate")
    assert not check_refutation(same, cand)
    unknown = Refutation("other", (), "", "enumerate")
    assert not check_refutation(unknown, cand)
    # a "missing" element that the candidate does represent
    cover = Refutation("missing", (W("x"),), "F:x", "missing")
    assert not check_refutation(cover, cand)
    assert check_refutation(cover, union(Nfa.empty(SYMBOLS), Nfa.from_words([W("y")], SYMBOLS)))
