"""A uniform handle over languages given by automata, machines, ET0L systems or
membership predicates.

Every representation exposes a *stepper*: ``start()``, ``step(config, a)``
and ``is_final(config)``.  ``step`` returns ``None`` once no accepted word
can extend the prefix read so far (exactly for automata, approximately for
machines, never for bare predicates).  Membership and bounded enumeration
are derived from the stepper.
"""
from __future__ import annotations

from typing import Callable, Iterable

from .et0l import Et0lSystem, et0l_generate
from .nfa import Nfa, determinize, hom_image, intersect, union
from .ocm import OneCounterMachine


def shortlex(words: Iterable) -> list:
    return sorted(words, key=lambda w: (len(w), w))


class LanguageRep:
    alphabet: frozenset = frozenset()
    kind = "abstract"

    def start(self):
        raise NotImplementedError

    def step(self, config, a):
        raise NotImplementedError

    def is_final(self, config) -> bool:
        raise NotImplementedError

    def contains(self, word) -> bool:
        c = self.start()
        for a in word:
            if c is None:
                return False
            if a not in self.alphabet:
                raise ValueError(f"unknown symbol {a!r}")
            c = self.step(c, a)
        return c is not None and self.is_final(c)

    def __contains__(self, word):
        return self.contains(tuple(word))

    def walk(self, max_len: int, keep: Callable[[tuple], bool] | None = None):
        """Yield accepted words of length <= max_len in shortlex order.

        ``keep`` prunes a prefix (and all its extensions) when it returns False.
        """
        if max_len < 0:
            raise ValueError("max_len must be non-negative")
        symbols = sorted(self.alphabet)
        c0 = self.start()
        layer = [((), c0)] if c0 is not None else []
        for n in range(max_len + 1):
            nxt = []
            for w, c in layer:
                if self.is_final(c):
                    yield w
                if n == max_len:
                    continue
                for a in symbols:
                    c2 = self.step(c, a)
                    if c2 is None:
                        continue
                    w2 = w + (a,)
                    if keep is None or keep(w2):
                        nxt.append((w2, c2))
            layer = nxt

    def enumerate(self, max_len: int) -> list:
        return list(self.walk(max_len))

    def restrict(self, nfa: Nfa) -> "LanguageRep":
        """This language intersected with L(nfa)."""
        return Restricted(self, nfa)


class Regular(LanguageRep):
    kind = "regular"

    def __init__(self, nfa: Nfa):
        self.nfa = nfa.trim()
        self.alphabet = nfa.alphabet

    def start(self):
        return self.nfa.initial or None

    def step(self, config, a):
        return self.nfa.step(config, a) or None

    def is_final(self, config):
        return bool(config & self.nfa.accepting)

    def restrict(self, nfa: Nfa) -> "Regular":
        return Regular(intersect(self.nfa, nfa).with_alphabet(self.alphabet))

    def __repr__(self):
        return f"Regular({self.nfa!r})"


class OneCounter(LanguageRep):
    kind = "one-counter"

    def __init__(self, machine: OneCounterMachine):
        self.machine = machine
        self.alphabet = machine.alphabet
        self._live = machine.live_states()

    def _prune(self, configs):
        configs = frozenset(c for c in configs if c[0] in self._live)
        return configs or None

    def start(self):
        return self._prune(self.machine.start())

    def step(self, config, a):
        return self._prune(self.machine.step(config, a))

    def is_final(self, config):
        return self.machine.is_final(config)

    def restrict(self, nfa: Nfa) -> "OneCounter":
        m = self.machine
        d = determinize(nfa).trim()
        if not d.initial:
            d = Nfa.empty(nfa.alphabet)
        (q0,) = d.initial
        states = {(p, q) for p in m.states for q in d.states}
        trans = [
            ((p, q), a, guard, delta, (p2, q2))
            for p, a, guard, delta, p2 in m.transitions
            for q in d.states
            for q2 in d.successors(q, a)
        ]
        acc = {(p, q) for p in m.accepting for q in d.accepting}
        prod = OneCounterMachine.build(states, m.alphabet | d.alphabet, trans, (m.initial, q0), acc,
                                       m.zero_acceptance)
        return OneCounter(prod)

    def __repr__(self):
        return f"OneCounter({len(self.machine.states)} states)"


class _PrefixStepper(LanguageRep):
    """Stepper whose configuration is the prefix itself; no pruning."""

    def start(self):
        return ()

    def step(self, config, a):
        return config + (a,)

    def is_final(self, config):
        return self.contains(config)


class Oracle(_PrefixStepper):
    kind = "oracle"

    def __init__(self, predicate: Callable[[tuple], bool], alphabet, name: str = "oracle",
                 viable: Callable[[tuple], bool] | None = None):
        self.predicate = predicate
        self.alphabet = frozenset(alphabet)
        self.name = name
        self.viable = viable  # optional prefix test used to prune walks

    def step(self, config, a):
        w = config + (a,)
        return None if self.viable is not None and not self.viable(w) else w

    def contains(self, word):
        word = tuple(word)
        if not set(word) <= self.alphabet:
            raise ValueError(f"word {word!r} not over {sorted(self.alphabet)}")
        return bool(self.predicate(word))

    def __repr__(self):
        return f"Oracle({self.name})"


class Et0l(_PrefixStepper):
    """ET0L-backed language; membership is decided by bounded generation."""

    kind = "et0l"

    def __init__(self, system: Et0lSystem, margin: int = 3):
        self.system = system
        self.alphabet = frozenset(system.terminals)
        self.margin = margin
        self._bound = -1
        self._words: set = set()

    def _ensure(self, n):
        if n > self._bound:
            n = max(n, 2 * self._bound, 6)
            self._words = et0l_generate(self.system, n, n + self.margin)
            self._bound = n

    def contains(self, word):
        word = tuple(word)
        self._ensure(len(word))
        return word in self._words

    def enumerate(self, max_len):
        self._ensure(max_len)
        return shortlex(w for w in self._words if len(w) <= max_len)

    def __repr__(self):
        return f"Et0l({len(self.system.tables)} tables)"


class Union(LanguageRep):
    kind = "union"

    def __init__(self, *parts: LanguageRep):
        self.parts = parts
        self.alphabet = frozenset().union(*(p.alphabet for p in parts))

    def start(self):
        cs = tuple(p.start() for p in self.parts)
        return None if all(c is None for c in cs) else cs

    def step(self, config, a):
        cs = tuple(
            None if c is None or a not in p.alphabet else p.step(c, a)
            for p, c in zip(self.parts, config)
        )
        return None if all(c is None for c in cs) else cs

    def is_final(self, config):
        return any(c is not None and p.is_final(c) for p, c in zip(self.parts, config))


class Restricted(LanguageRep):
    kind = "restricted"

    def __init__(self, lang: LanguageRep, nfa: Nfa):
        self.lang = lang
        self.nfa = nfa.trim()
        self.alphabet = lang.alphabet

    def start(self):
        c = self.lang.start()
        return None if c is None or not self.nfa.initial else (c, self.nfa.initial)

    def step(self, config, a):
        c, s = config
        s2 = self.nfa.step(s, a)
        if not s2:
            return None
        c2 = self.lang.step(c, a)
        return None if c2 is None else (c2, s2)

    def is_final(self, config):
        c, s = config
        return bool(s & self.nfa.accepting) and self.lang.is_final(c)


class HomImage(LanguageRep):
    """Image of a language under a non-erasing homomorphism."""

    kind = "hom-image"

    def __init__(self, lang: LanguageRep, hom: dict):
        if any(len(tuple(v)) == 0 for v in hom.values()):
            raise ValueError("erasing homomorphisms need a regular source language")
        self.lang = lang
        self.hom = {b: tuple(v) for b, v in hom.items()}
        self.alphabet = frozenset(s for v in self.hom.values() for s in v)

    def start(self):
        return ()

    def step(self, config, a):
        return config + (a,)

    def is_final(self, config):
        return self.contains(config)

    def contains(self, word):
        word = tuple(word)
        todo = [(self.lang.start(), 0)]
        seen = set()
        while todo:
            c, k = todo.pop()
            if c is None or (c, k) in seen:
                continue
            seen.add((c, k))
            if k == len(word) and self.lang.is_final(c):
                return True
            for b, img in self.hom.items():
                if word[k : k + len(img)] == img:
                    todo.append((self.lang.step(c, b), k + len(img)))
        return False

    def enumerate(self, max_len):
        out = set()
        for u in self.lang.walk(max_len):
            w = tuple(s for b in u for s in self.hom[b])
            if len(w) <= max_len:
                out.add(w)
        return shortlex(out)


def union_with_regular(lang: LanguageRep, r: Nfa) -> LanguageRep:
    if isinstance(lang, Regular):
        return Regular(union(lang.nfa, r))
    return Union(lang, Regular(r))


def image_under(lang: LanguageRep, hom: dict) -> LanguageRep:
    if isinstance(lang, Regular):
        return Regular(hom_image(lang.nfa, hom))
    return HomImage(lang, hom)
