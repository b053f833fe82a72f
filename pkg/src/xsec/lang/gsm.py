"""Generalized sequential machines: one input symbol per step, a finite output word
per transition, acceptance by final state."""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

from .nfa import Nfa, eliminate_epsilon


@dataclass(frozen=True)
class Gsm:
    states: frozenset
    input_alphabet: frozenset
    output_alphabet: frozenset
    transitions: tuple  # (from, input symbol, output word, to)
    initial: object
    accepting: frozenset
    name: str = ""
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        idx = defaultdict(list)
        for p, a, out, q in self.transitions:
            if p not in self.states or q not in self.states:
                raise ValueError(f"GSM transition ({p!r}, {a!r}) references an undeclared state")
            if a not in self.input_alphabet:
                raise ValueError(f"GSM input symbol {a!r} not in input alphabet")
            if not set(out) <= self.output_alphabet:
                raise ValueError(f"GSM output {out!r} not over the output alphabet")
            idx[p, a].append((tuple(out), q))
        object.__setattr__(self, "_index", dict(idx))

    @classmethod
    def build(cls, states, input_alphabet, output_alphabet, transitions, initial, accepting, name=""):
        trans = tuple((p, a, tuple(out), q) for p, a, out, q in transitions)
        return cls(frozenset(states), frozenset(input_alphabet), frozenset(output_alphabet),
                   trans, initial, frozenset(accepting), name)

    @classmethod
    def identity(cls, alphabet) -> "Gsm":
        return cls.build({0}, alphabet, alphabet, [(0, a, (a,), 0) for a in alphabet], 0, {0}, "identity")

    def moves(self, p, a):
        return self._index.get((p, a), ())

    def apply_word(self, w) -> set:
        """All outputs along accepting runs on w."""
        configs = {(self.initial, ())}
        for a in w:
            if a not in self.input_alphabet:
                raise ValueError(f"unknown input symbol {a!r}")
            configs = {(q, out + o) for p, out in configs for o, q in self.moves(p, a)}
            if not configs:
                return set()
        return {out for p, out in configs if p in self.accepting}

    def image(self, nfa: Nfa) -> Nfa:
        """Automaton for the union of apply_word over L(nfa)."""
        start = [(p, self.initial) for p in nfa.initial]
        seen = set(start)
        todo = list(start)
        trans = []
        states = set(start)
        fresh = 0
        while todo:
            p, s = todo.pop()
            for a, ps in nfa.out(p).items():
                for out, s2 in self.moves(s, a):
                    for p2 in ps:
                        tgt = (p2, s2)
                        if tgt not in seen:
                            seen.add(tgt)
                            todo.append(tgt)
                            states.add(tgt)
                        if not out:
                            trans.append(((p, s), None, tgt))
                            continue
                        prev = (p, s)
                        for i, b in enumerate(out):
                            nxt = tgt if i == len(out) - 1 else ("g", fresh := fresh + 1)
                            states.add(nxt)
                            trans.append((prev, b, nxt))
                            prev = nxt
        acc = {(p, s) for p, s in seen if p in nfa.accepting and s in self.accepting}
        if not states:
            return Nfa.empty(self.output_alphabet)
        return eliminate_epsilon(states, self.output_alphabet, trans, start, acc)

    def preimage(self, nfa: Nfa, target) -> tuple | None:
        """Shortest word u in L(nfa) with ``target`` in apply_word(u), or None."""
        target = tuple(target)
        starts = [(p, self.initial, 0) for p in nfa.initial]
        parent = {c: None for c in starts}
        queue = deque(starts)
        while queue:
            c = queue.popleft()
            p, s, k = c
            if k == len(target) and p in nfa.accepting and s in self.accepting:
                word = []
                while parent[c] is not None:
                    c, a = parent[c]
                    word.append(a)
                return tuple(reversed(word))
            for a, ps in nfa.out(p).items():
                for out, s2 in self.moves(s, a):
                    if target[k : k + len(out)] != out:
                        continue
                    for p2 in ps:
                        nc = (p2, s2, k + len(out))
                        if nc not in parent:
                            parent[nc] = (c, a)
                            queue.append(nc)
        return None


def gsm_apply_word(g: Gsm, w) -> set:
    return g.apply_word(tuple(w))


def gsm_image(g: Gsm, nfa: Nfa) -> Nfa:
    return g.image(nfa)
