"""One-counter machines: a finite control plus a non-negative counter with zero tests."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

GUARDS = ("zero", "positive", "any")


@dataclass(frozen=True)
class OneCounterMachine:
    states: frozenset
    alphabet: frozenset
    transitions: tuple  # (from, symbol, guard, delta, to)
    initial: object
    accepting: frozenset
    zero_acceptance: bool = False
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        idx = defaultdict(list)
        for p, a, guard, delta, q in self.transitions:
            if guard not in GUARDS:
                raise ValueError(f"bad guard {guard!r}")
            if delta not in (-1, 0, 1):
                raise ValueError(f"bad counter delta {delta!r}")
            if p not in self.states or q not in self.states:
                raise ValueError(f"transition ({p!r}, {a!r}) references an undeclared state")
            if a not in self.alphabet:
                raise ValueError(f"symbol {a!r} not in alphabet")
            idx[p, a].append((guard, delta, q))
        object.__setattr__(self, "_index", dict(idx))

    @classmethod
    def build(cls, states, alphabet, transitions, initial, accepting, zero_acceptance=False):
        return cls(frozenset(states), frozenset(alphabet), tuple(map(tuple, transitions)),
                   initial, frozenset(accepting), zero_acceptance)

    def start(self) -> frozenset:
        return frozenset({(self.initial, 0)})

    def step(self, configs: frozenset, a) -> frozenset:
        out = set()
        for p, c in configs:
            for guard, delta, q in self._index.get((p, a), ()):
                if guard == "zero" and c != 0 or guard == "positive" and c == 0:
                    continue
                if c + delta < 0:
                    continue
                out.add((q, c + delta))
        return frozenset(out)

    def is_final(self, configs) -> bool:
        return any(p in self.accepting and (c == 0 or not self.zero_acceptance) for p, c in configs)

    def accepts(self, w) -> bool:
        configs = self.start()
        for a in w:
            if a not in self.alphabet:
                raise ValueError(f"unknown symbol {a!r}")
            configs = self.step(configs, a)
            if not configs:
                return False
        return self.is_final(configs)

    def live_states(self) -> set:
        """States from which an accepting state is reachable in the control graph."""
        back = defaultdict(set)
        for p, _, _, _, q in self.transitions:
            back[q].add(p)
        seen = set(self.accepting)
        todo = list(seen)
        while todo:
            q = todo.pop()
            for p in back[q] - seen:
                seen.add(p)
                todo.append(p)
        return seen


def ocm_accepts(m: OneCounterMachine, w) -> bool:
    return m.accepts(tuple(w))
