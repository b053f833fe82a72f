"""Separating full trios by cross-sections.

Given a language K over B, the free monoid F on B + {z} acts on the points
p_u (u in B*), q_u (u in K) and an absorbing point:

    p_u . b = p_ub,   p_u . z = q_u if u in K else Omega,   q_u . x = Omega.

The monoid F[T] generated by A = B + {z, p_eps, Omega} has the cross-section
L_K = (B+z)* + p_eps B* + p_eps K z + {Omega}, and K can be read back off any
cross-section through the words p_eps u z.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

from .lang.et0l import Et0lSystem
from .lang.io import SchemaError, load_machine, machine_from_dict
from .lang.nfa import Nfa, concat, union
from .lang.ocm import OneCounterMachine
from .lang.rep import Et0l, LanguageRep, OneCounter, Oracle, Regular, shortlex
from .monoid import IDENTITY, OMEGA, ActionSpec, Free, Point, _render_word, generic_mt
from .verify import EvalMap, VerificationReport, verify_cross_section

Z, P_EPS, OMEGA_SYM = "z", "p_eps", "Omega"
RESERVED = (Z, P_EPS, OMEGA_SYM)
OMEGA_S = OMEGA


@dataclass(frozen=True)
class Pu:
    u: tuple

    def render(self):
        return "PU:" + _render_word(self.u)


@dataclass(frozen=True)
class Qu:
    u: tuple

    def render(self):
        return "QU:" + _render_word(self.u)


def sep_action(K: LanguageRep, B):
    """The right action of (B + z)* on the points, as a one-letter step."""
    bset = frozenset(B)

    def act(t, g):
        if t == OMEGA or isinstance(t, Qu):
            return OMEGA
        if g in bset:
            return Pu(t.u + (g,))
        if g == Z:
            return Qu(t.u) if K.contains(t.u) else OMEGA
        raise KeyError(g)

    return act


class SepLanguage(LanguageRep):
    """Stepper for L_K; membership of the p_eps K z family defers to K."""

    kind = "separation"

    def __init__(self, B, K: LanguageRep, include_q: bool = True, include_omega: bool = True):
        self.B = tuple(B)
        self._bset = frozenset(B)
        self.K = K
        self.include_q = include_q
        self.include_omega = include_omega
        self.alphabet = frozenset(self.B + RESERVED)

    def start(self):
        return ("S",)

    def step(self, config, a):
        tag = config[0]
        if tag in ("S", "F") and (a in self._bset or a == Z):
            return ("F",)
        if tag == "S" and a == P_EPS:
            return ("P", self.K.start())
        if tag == "S" and a == OMEGA_SYM:
            return ("W",) if self.include_omega else None
        if tag == "P":
            kc = config[1]
            if a in self._bset:
                ok = kc is not None and a in self.K.alphabet
                return ("P", self.K.step(kc, a) if ok else None)
            if a == Z and self.include_q and kc is not None and self.K.is_final(kc):
                return ("Q",)
        return None

    def is_final(self, config):
        return True

    def __repr__(self):
        return f"SepLanguage(B={self.B}, K={self.K!r})"


def sep_nfa(B, K: Nfa, include_q: bool = True, include_omega: bool = True) -> Nfa:
    """L_K as an automaton when K is regular."""
    alpha = tuple(B) + RESERVED

    def sym(a):
        return Nfa.symbol(a, alpha)

    parts = [Nfa.star_of(tuple(B) + (Z,), alpha), concat(sym(P_EPS), Nfa.star_of(B, alpha))]
    if include_q:
        parts.append(concat(sym(P_EPS), K.with_alphabet(alpha), sym(Z)))
    if include_omega:
        parts.append(sym(OMEGA_SYM))
    return union(*parts).with_alphabet(alpha)


def sep_language(B, K: LanguageRep, include_q: bool = True, include_omega: bool = True) -> LanguageRep:
    if isinstance(K, Regular):
        return Regular(sep_nfa(B, K.nfa, include_q, include_omega))
    return SepLanguage(B, K, include_q, include_omega)


@dataclass
class SepInstance:
    B: tuple
    K: LanguageRep
    monoid: object
    generators: tuple
    ev: EvalMap
    L_K: LanguageRep

    def eval(self, word):
        """Value of a generator word; a string is split on whitespace."""
        return self.ev(tuple(word.split()) if isinstance(word, str) else tuple(word))


def build_sep_instance(B, K: LanguageRep, nonempty_bound: int = 6, include_q: bool = True,
                       include_omega: bool = True) -> SepInstance:
    B = tuple(B)
    clash = set(B) & set(RESERVED)
    if clash:
        raise ValueError(f"alphabet clash with reserved generators: {sorted(clash)}")
    if len(set(B)) != len(B):
        raise ValueError("repeated letters in B")
    if not set(K.alphabet) <= set(B):
        raise ValueError(f"K uses letters outside B: {sorted(set(K.alphabet) - set(B))}")
    if next(iter(K.walk(nonempty_bound)), None) is None:
        warnings.warn(f"K has no words of length <= {nonempty_bound}", stacklevel=2)
    spec = ActionSpec(B + (Z,), sep_action(K, B), OMEGA, (Pu(()),))
    monoid = generic_mt(spec)
    values = {b: Free((b,)) for b in B + (Z,)}
    values[P_EPS] = Point(Pu(()))
    values[OMEGA_SYM] = Point(OMEGA)
    ev = EvalMap(values, monoid.multiply, IDENTITY, "F[T]_K")
    lang = sep_language(B, K, include_q, include_omega)
    return SepInstance(B, K, monoid, B + RESERVED, ev, lang)


def verify_sep_cross_section(inst: SepInstance, radius: int = 4, search_len: int = 8,
                             max_len: int = 8, lang: LanguageRep | None = None) -> VerificationReport:
    """Bounded check that L_K (or ``lang``) is a cross-section of the instance's monoid.

    The hypotheses on the language class of K are not checked.
    """
    if min(radius, search_len, max_len) <= 0:
        raise ValueError("bounds must be positive")
    report = verify_cross_section(lang if lang is not None else inst.L_K, inst.ev, radius,
                                  search_len, max_len)
    report.stats["note"] = "class membership of K is not checked"
    return report


def extract_K(lang: LanguageRep, max_len: int, B=None) -> list:
    """Words u over B with |u| <= max_len and p_eps u z in lang, in shortlex order."""
    if B is None:
        B = sorted(set(lang.alphabet) - set(RESERVED))
    alpha = tuple(sorted(set(lang.alphabet) | set(B) | set(RESERVED)))
    frame = concat(Nfa.symbol(P_EPS, alpha), Nfa.star_of(tuple(B), alpha), Nfa.symbol(Z, alpha))
    if not set(lang.alphabet) >= {P_EPS, Z}:
        return []
    return shortlex(w[1:-1] for w in lang.restrict(frame).walk(max_len + 2))


# built-in K ----------------------------------------------------------------

def et0l_L2_system() -> Et0lSystem:
    """{www : w in {a,b}*}: four tables, one non-trivial production each."""
    return Et0lSystem.build(
        ("S", "T", "a", "b"), ("S",),
        [[("S", "TTT")], [("T", "aT")], [("T", "bT")], [("T", "")]],
    )


def et0l_L3_system(literal: bool = False) -> Et0lSystem:
    """{a^n b^n c^n : n >= 0} with three tables.

    ``literal=True`` gives the variant whose middle table is A -> a, B -> b,
    C -> c; that system only reaches abc and the empty word.
    """
    grow = [("A", "a"), ("B", "b"), ("C", "c")] if literal else [("A", "aA"), ("B", "bB"), ("C", "cC")]
    return Et0lSystem.build(
        ("S", "A", "B", "C", "a", "b", "c"), ("S",),
        [[("S", "ABC")], grow, [("A", ""), ("B", ""), ("C", "")]],
        terminals=("a", "b", "c"),
    )


def anbncn_oracle(min_n: int = 0) -> Oracle:
    def member(w):
        n, r = divmod(len(w), 3)
        return r == 0 and n >= min_n and w == ("a",) * n + ("b",) * n + ("c",) * n

    def viable(w):
        na, nb = _run(w, "a", 0), _run(w, "b", _run(w, "a", 0))
        nc = _run(w, "c", na + nb)
        return na + nb + nc == len(w) and nb <= na and nc <= nb and (nc == 0 or nb == na)

    return Oracle(member, ("a", "b", "c"), f"a^n b^n c^n, n >= {min_n}", viable)


def _run(w, letter, start):
    k = start
    while k < len(w) and w[k] == letter:
        k += 1
    return k - start


def www_oracle() -> Oracle:
    def member(w):
        n, r = divmod(len(w), 3)
        return r == 0 and w[:n] == w[n : 2 * n] == w[2 * n :]

    return Oracle(member, ("a", "b"), "www")


def even_palindrome(w) -> bool:
    return len(w) % 2 == 0 and tuple(w) == tuple(reversed(w))


def dyck_word(w, pair=("(", ")")) -> bool:
    depth = 0
    for s in w:
        depth += 1 if s == pair[0] else -1
        if depth < 0:
            return False
    return depth == 0


def copy_reverse_oracle(base=even_palindrome, letters=("a", "b")) -> Oracle:
    """{w phi(w)^rev : w in base}, phi priming each letter."""
    primed = tuple(x + "'" for x in letters)
    phi = dict(zip(letters, primed))
    xs = frozenset(letters)

    def member(word):
        n = len(word) // 2
        if len(word) % 2:
            return False
        w, rest = word[:n], word[n:]
        if not set(w) <= xs:
            return False
        return rest == tuple(phi[x] for x in reversed(w)) and bool(base(w))

    def viable(prefix):
        k = 0
        while k < len(prefix) and prefix[k] in xs:
            k += 1
        tail = prefix[k:]
        if len(tail) > k:
            return False
        return tail == tuple(phi[x] for x in reversed(prefix[:k]))[: len(tail)]

    return Oracle(member, tuple(letters) + primed, "copy-reverse", viable)


def dyck_oracle() -> Oracle:
    return Oracle(dyck_word, ("(", ")"), "dyck")


BUILTIN_K = ("anbncn", "copy-reverse", "dyck", "www")


def builtin_K(name: str, base=None):
    """(B, K) for a named built-in language."""
    if name == "www":
        return ("a", "b"), Et0l(et0l_L2_system())
    if name == "anbncn":
        return ("a", "b", "c"), Et0l(et0l_L3_system())
    if name == "copy-reverse":
        K = copy_reverse_oracle(base or even_palindrome)
        return tuple(sorted(K.alphabet)), K
    if name == "dyck":
        return ("(", ")"), dyck_oracle()
    raise ValueError(f"unknown built-in K {name!r}; expected one of {', '.join(BUILTIN_K)}")


def load_sep_descriptor(d, base_dir=".") -> tuple:
    """(B, K) from {"B": [...], "K": {"kind": ..., "name_or_file": ...}}."""
    if not isinstance(d, dict) or "K" not in d:
        raise SchemaError("separation descriptor needs a K field")
    k = d["K"]
    if not isinstance(k, dict) or "kind" not in k or "name_or_file" not in k:
        raise SchemaError("K needs kind and name_or_file")
    kind, ref = k["kind"], k["name_or_file"]
    if kind == "builtin":
        B, K = builtin_K(ref)
    else:
        src = ref if isinstance(ref, dict) else load_machine(Path(base_dir) / ref)
        m = machine_from_dict(src) if isinstance(src, dict) else src
        wrap = {"nfa": (Nfa, Regular), "et0l": (Et0lSystem, Et0l), "ocm": (OneCounterMachine, OneCounter)}
        if kind not in wrap or not isinstance(m, wrap[kind][0]):
            raise SchemaError(f"K kind {kind!r} does not match the machine file")
        K = wrap[kind][1](m)
        B = tuple(sorted(K.alphabet))
    if "B" in d:
        B = tuple(d["B"])
    return B, K
