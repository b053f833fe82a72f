import json

import pytest
from hypothesis import given, settings, strategies as st

from oracles import anbncn_words, words, www
from xsec.lang import Nfa, Regular
from xsec.lang.io import SchemaError, nfa_to_dict
from xsec.monoid import IDENTITY, OMEGA, Free, Point, render
from xsec.separation import (
    BUILTIN_K,
    P_EPS,
    Pu,
    Qu,
    SepLanguage,
    anbncn_oracle,
    build_sep_instance,
    builtin_K,
    copy_reverse_oracle,
    dyck_word,
    extract_K,
    load_sep_descriptor,
    sep_action,
    verify_sep_cross_section,
)


def W(s):
    return tuple(s.split())


def ref_value(word, in_K):
    """Direct evaluation from the definition: ('F', w) | ('P', u) | ('Q', u) | ('O',)."""
    last = max((i for i, g in enumerate(word) if g in (P_EPS, "Omega")), default=None)
    if last is None:
        return ("F", tuple(word))
    if word[last] == "Omega":
        return ("O",)
    state = ("P", ())
    for g in word[last + 1 :]:
        if state[0] != "P":
            return ("O",)
        if g == "z":
            state = ("Q", state[1]) if in_K(state[1]) else ("O",)
        else:
            state = ("P", state[1] + (g,))
    return state


def as_ref(el):
    if isinstance(el, Free):
        return ("F", el.word)
    t = el.t
    if t == OMEGA:
        return ("O",)
    return ("P" if isinstance(t, Pu) else "Q", t.u)


@pytest.fixture(scope="module")
def abc():
    return build_sep_instance(("a", "b", "c"), anbncn_oracle(1))


def test_eval_examples(abc):
    assert abc.eval("p_eps a b c z") == Point(Qu(W("a b c")))
    assert abc.eval("p_eps a b z") == Point(OMEGA)
    assert abc.eval("p_eps a b c z a") == Point(OMEGA)
    assert abc.eval("a z b") == Free(W("a z b"))
    assert abc.eval("a p_eps a") == Point(Pu(("a",)))
    assert abc.eval("") == IDENTITY
    assert render(abc.eval("p_eps a b c z")) == "QU:abc"
    # empty word is not in K when n >= 1
    assert abc.eval("p_eps z") == Point(OMEGA)


@given(st.lists(st.sampled_from(["a", "b", "c", "z", "p_eps", "Omega"]), max_size=9))
@settings(max_examples=300)
def test_eval_matches_reference(w):
    inst = build_sep_instance(("a", "b", "c"), anbncn_oracle(1))
    in_K = anbncn_oracle(1).contains
    assert as_ref(inst.eval(tuple(w))) == ref_value(w, in_K)


def test_action_rules():
    K = anbncn_oracle()
    act = sep_action(K, ("a", "b", "c"))
    for u in words(("a", "b", "c"), 6):
        assert act(Pu(u), "a") == Pu(u + ("a",))
        assert act(Pu(u), "z") == (Qu(u) if K.contains(u) else OMEGA)
        if K.contains(u):
            assert act(Qu(u), "b") == OMEGA and act(Qu(u), "z") == OMEGA
    assert act(OMEGA, "z") == OMEGA
    with pytest.raises(KeyError):
        act(Pu(()), "q")


def test_language_families_are_disjoint_by_value(abc):
    seen = {}
    for w in abc.L_K.walk(7):
        el = abc.eval(w)
        assert el not in seen, (w, seen.get(el))
        seen[el] = w
    kinds = {type(el.t).__name__ if isinstance(el, Point) else "Free" for el in seen}
    assert {"Free", "Pu", "Qu"} <= kinds


@pytest.mark.parametrize("name", BUILTIN_K)
def test_builtin_passes_small_bounds(name):
    B, K = builtin_K(name)
    inst = build_sep_instance(B, K)
    rep = verify_sep_cross_section(inst, radius=3, search_len=6, max_len=6)
    assert rep.passed, rep.to_dict()
    assert "not checked" in rep.stats["note"]


@pytest.mark.parametrize("name", BUILTIN_K)
def test_recovery(name):
    B, K = builtin_K(name)
    inst = build_sep_instance(B, K)
    n = 7 if name == "copy-reverse" else 9
    assert extract_K(inst.L_K, n) == K.enumerate(n)


def test_recovery_against_independent_oracles():
    B, K = builtin_K("www")
    got = extract_K(build_sep_instance(B, K).L_K, 9)
    assert got == sorted((w for w in words(B, 9) if www(w)), key=lambda w: (len(w), w))
    B, K = builtin_K("anbncn")
    assert set(extract_K(build_sep_instance(B, K).L_K, 9)) == anbncn_words(9)
    B, K = builtin_K("dyck")
    assert extract_K(build_sep_instance(B, K).L_K, 6) == sorted(
        (w for w in words(B, 6) if dyck_word(w)), key=lambda w: (len(w), w))


def test_without_q_family_misses_qu():
    B, K = builtin_K("anbncn")
    inst = build_sep_instance(B, K, include_q=False)
    rep = verify_sep_cross_section(inst, radius=3, search_len=6, max_len=6)
    assert rep.status == "missing"
    # the empty word is in K, so QU: is the first point-kind miss
    assert "QU:" in {m.element for m in rep.missing}


def test_without_omega_misses_omega():
    B, K = builtin_K("dyck")
    inst = build_sep_instance(B, K, include_omega=False)
    rep = verify_sep_cross_section(inst, radius=2, search_len=4, max_len=4)
    assert [m.element for m in rep.missing] == ["OMEGA"]


def test_bounds_must_be_positive(abc):
    with pytest.raises(ValueError):
        verify_sep_cross_section(abc, radius=0)


def test_build_errors_and_warning():
    with pytest.raises(ValueError, match="clash"):
        build_sep_instance(("a", "z"), anbncn_oracle())
    with pytest.raises(ValueError, match="repeated"):
        build_sep_instance(("a", "a", "b", "c"), anbncn_oracle())
    with pytest.raises(ValueError, match="outside"):
        build_sep_instance(("a", "b"), anbncn_oracle())
    with pytest.warns(UserWarning, match="no words"):
        build_sep_instance(("a",), Regular(Nfa.empty(["a"])))


def test_extract_from_language_without_frame():
    lang = Regular(Nfa.star_of(["a", "b", "z"]))
    assert extract_K(lang, 5) == []
    lang = Regular(Nfa.from_words([W("p_eps a z"), W("p_eps z"), W("a z")], ["a", "z", "p_eps"]))
    assert extract_K(lang, 3, B=("a",)) == [(), ("a",)]


def test_builtin_examples():
    B, K = builtin_K("copy-reverse")
    assert B == ("a", "a'", "b", "b'")
    assert K.contains(W("a b b a a' b' b' a'"))
    assert not K.contains(W("a b b' a'"))
    B, K = builtin_K("copy-reverse", base=lambda w: True)
    assert K.contains(W("a b b' a'"))
    assert not K.contains(W("a b a' b'"))
    B, K = builtin_K("www")
    assert K.contains(W("a b a b a b")) and not K.contains(W("a b a"))
    with pytest.raises(ValueError, match="unknown"):
        builtin_K("nope")


@given(st.lists(st.sampled_from(["a", "b", "a'", "b'"]), max_size=8))
@settings(max_examples=200)
def test_copy_reverse_viability_is_sound(w):
    K = copy_reverse_oracle(lambda u: True)
    w = tuple(w)
    # a pruned prefix has no member extending it
    members = [u for u in K.enumerate(8) if u[: len(w)] == w]
    config = K.start()
    for a in w:
        config = None if config is None else K.step(config, a)
    if members:
        assert config is not None


def test_regular_K_uses_automaton():
    K = Regular(Nfa.star_of(["a"]))
    inst = build_sep_instance(("a",), K)
    assert isinstance(inst.L_K, Regular)
    assert verify_sep_cross_section(inst, 3, 6, 6).passed
    assert extract_K(inst.L_K, 4) == K.enumerate(4)
    # the general stepper accepts the same words
    step = SepLanguage(("a",), K)
    assert step.enumerate(6) == inst.L_K.enumerate(6)


def test_descriptor_loading(tmp_path):
    B, K = load_sep_descriptor({"K": {"kind": "builtin", "name_or_file": "www"}})
    assert B == ("a", "b") and K.contains(W("a a a"))
    nfa = Nfa.star_of(["a", "b"])
    (tmp_path / "k.json").write_text(json.dumps(nfa_to_dict(nfa)))
    B, K = load_sep_descriptor({"B": ["a", "b", "c"], "K": {"kind": "nfa", "name_or_file": "k.json"}},
                               base_dir=tmp_path)
    assert B == ("a", "b", "c") and K.contains(W("a b"))
    with pytest.raises(SchemaError):
        load_sep_descriptor({"K": {"kind": "et0l", "name_or_file": "k.json"}}, base_dir=tmp_path)
    with pytest.raises(SchemaError):
        load_sep_descriptor({"B": ["a"]})
    with pytest.raises(SchemaError):
        load_sep_descriptor({"K": {"kind": "nfa"}})
