"""Nondeterministic finite automata over atomic symbols.

Words are tuples of symbols.  Automata are immutable; every construction
returns a fresh ``Nfa`` with integer or tuple state names.
"""
from __future__ import annotations

from collections import defaultdict, deque
from functools import reduce
from itertools import count
from typing import Hashable, Iterable, Mapping


class PumpingError(ValueError):
    pass


class Nfa:
    def __init__(self, states, alphabet, transitions, initial, accepting):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.initial = frozenset(initial)
        self.accepting = frozenset(accepting)
        delta = defaultdict(lambda: defaultdict(set))
        for p, a, q in transitions:
            if p not in self.states or q not in self.states:
                raise ValueError(f"transition ({p!r}, {a!r}, {q!r}) references an undeclared state")
            if a not in self.alphabet:
                raise ValueError(f"transition symbol {a!r} not in alphabet")
            delta[p][a].add(q)
        self._delta = {p: {a: frozenset(qs) for a, qs in d.items()} for p, d in delta.items()}
        self._step_cache: dict = {}
        if not self.initial <= self.states or not self.accepting <= self.states:
            raise ValueError("initial/accepting states must be declared")

    # basic queries -----------------------------------------------------
    @property
    def transitions(self):
        return sorted(
            ((p, a, q) for p, d in self._delta.items() for a, qs in d.items() for q in qs),
            key=repr,
        )

    def successors(self, p, a) -> frozenset:
        return self._delta.get(p, {}).get(a, frozenset())

    def out(self, p) -> Mapping:
        return self._delta.get(p, {})

    def step(self, current: frozenset, a) -> frozenset:
        key = (current, a)
        hit = self._step_cache.get(key)
        if hit is None:
            hit = frozenset(q for p in current for q in self.successors(p, a))
            if len(self._step_cache) < 1 << 16:
                self._step_cache[key] = hit
        return hit

    def run(self, word) -> frozenset:
        cur = self.initial
        for a in word:
            if a not in self.alphabet:
                raise ValueError(f"unknown symbol {a!r}")
            cur = self.step(cur, a)
            if not cur:
                break
        return cur

    def accepts(self, word) -> bool:
        return bool(self.run(word) & self.accepting)

    def is_deterministic(self) -> bool:
        return len(self.initial) <= 1 and all(
            len(qs) <= 1 for d in self._delta.values() for qs in d.values()
        )

    def __len__(self):
        return len(self.states)

    def __repr__(self):
        return f"Nfa({len(self.states)} states, {len(self.alphabet)} symbols)"

    # reachability ------------------------------------------------------
    def reachable(self) -> set:
        seen = set(self.initial)
        todo = list(seen)
        while todo:
            p = todo.pop()
            for qs in self.out(p).values():
                for q in qs:
                    if q not in seen:
                        seen.add(q)
                        todo.append(q)
        return seen

    def coreachable(self) -> set:
        back = defaultdict(set)
        for p, d in self._delta.items():
            for qs in d.values():
                for q in qs:
                    back[q].add(p)
        seen = set(self.accepting)
        todo = list(seen)
        while todo:
            q = todo.pop()
            for p in back[q]:
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
        return seen

    def trim(self) -> "Nfa":
        keep = self.reachable() & self.coreachable()
        return Nfa(
            keep,
            self.alphabet,
            [(p, a, q) for p, a, q in self._triples() if p in keep and q in keep],
            self.initial & keep,
            self.accepting & keep,
        )

    def is_empty(self) -> bool:
        return not (self.reachable() & self.accepting)

    def _triples(self):
        for p, d in self._delta.items():
            for a, qs in d.items():
                for q in qs:
                    yield p, a, q

    def relabel(self) -> "Nfa":
        """Rename states to 0..n-1 in breadth-first order from the initial states."""
        order = {}
        todo = deque(sorted(self.initial, key=repr))
        for s in todo:
            order.setdefault(s, len(order))
        while todo:
            p = todo.popleft()
            for a in sorted(self.out(p), key=repr):
                for q in sorted(self.successors(p, a), key=repr):
                    if q not in order:
                        order[q] = len(order)
                        todo.append(q)
        for s in sorted(self.states - set(order), key=repr):
            order[s] = len(order)
        return Nfa(
            order.values(),
            self.alphabet,
            [(order[p], a, order[q]) for p, a, q in self._triples()],
            {order[s] for s in self.initial},
            {order[s] for s in self.accepting},
        )

    def with_alphabet(self, alphabet) -> "Nfa":
        alphabet = frozenset(alphabet) | self.alphabet
        return Nfa(self.states, alphabet, self._triples(), self.initial, self.accepting)

    # enumeration -------------------------------------------------------
    def enumerate(self, max_len: int) -> list:
        """All accepted words of length <= max_len, in shortlex order."""
        if max_len < 0:
            raise ValueError("max_len must be non-negative")
        t = self.trim()
        symbols = sorted(t.alphabet)
        out = []
        layer = [((), t.initial)] if t.initial else []
        for n in range(max_len + 1):
            nxt = []
            for w, cur in layer:
                if cur & t.accepting:
                    out.append(w)
                if n < max_len:
                    for a in symbols:
                        s = t.step(cur, a)
                        if s:
                            nxt.append((w + (a,), s))
            layer = nxt
        return out

    # construction helpers ---------------------------------------------
    @classmethod
    def from_words(cls, words: Iterable, alphabet=()) -> "Nfa":
        """Trie automaton for a finite set of words."""
        words = [tuple(w) for w in words]
        alphabet = set(alphabet) | {a for w in words for a in w}
        ids = {(): 0}
        trans, acc = [], set()
        for w in words:
            for i in range(len(w)):
                if w[: i + 1] not in ids:
                    ids[w[: i + 1]] = len(ids)
                    trans.append((ids[w[:i]], w[i], ids[w[: i + 1]]))
            acc.add(ids[w])
        return cls(ids.values(), alphabet, trans, {0}, acc)

    @classmethod
    def empty(cls, alphabet=()) -> "Nfa":
        return cls({0}, alphabet, [], {0}, set())

    @classmethod
    def epsilon(cls, alphabet=()) -> "Nfa":
        return cls({0}, alphabet, [], {0}, {0})

    @classmethod
    def symbol(cls, a, alphabet=()) -> "Nfa":
        return cls({0, 1}, set(alphabet) | {a}, [(0, a, 1)], {0}, {1})

    @classmethod
    def star_of(cls, symbols, alphabet=()) -> "Nfa":
        """The language S* for a set of symbols S."""
        symbols = set(symbols)
        return cls({0}, set(alphabet) | symbols, [(0, a, 0) for a in symbols], {0}, {0})

    @classmethod
    def universal(cls, alphabet) -> "Nfa":
        return cls.star_of(alphabet, alphabet)

    @classmethod
    def containing_any(cls, symbols, alphabet) -> "Nfa":
        """Words over ``alphabet`` with at least one occurrence from ``symbols``."""
        symbols = set(symbols)
        trans = [(0, a, 0) for a in alphabet] + [(1, a, 1) for a in alphabet]
        trans += [(0, a, 1) for a in symbols]
        return cls({0, 1}, set(alphabet) | symbols, trans, {0}, {1})


def eliminate_epsilon(states, alphabet, transitions, initial, accepting) -> Nfa:
    """Build an Nfa from transitions where ``None`` marks an epsilon move."""
    eps = defaultdict(set)
    real = []
    for p, a, q in transitions:
        if a is None:
            eps[p].add(q)
        else:
            real.append((p, a, q))

    closure = {}

    def close(p):
        if p not in closure:
            seen = {p}
            todo = [p]
            while todo:
                r = todo.pop()
                for q in eps[r]:
                    if q not in seen:
                        seen.add(q)
                        todo.append(q)
            closure[p] = frozenset(seen)
        return closure[p]

    by_src = defaultdict(list)
    for p, a, q in real:
        by_src[p].append((a, q))
    trans = set()
    for p in states:
        for r in close(p):
            for a, q in by_src[r]:
                trans.add((p, a, q))
    accepting = set(accepting)
    acc = {p for p in states if close(p) & accepting}
    return Nfa(states, alphabet, trans, initial, acc).trim().relabel()


# standard constructions ---------------------------------------------------

def determinize(nfa: Nfa, complete: bool = False, alphabet=None) -> Nfa:
    alphabet = frozenset(alphabet or ()) | nfa.alphabet
    symbols = sorted(alphabet)
    start = frozenset(nfa.initial)
    ids = {start: 0}
    todo = [start]
    trans, acc = [], set()
    while todo:
        s = todo.pop()
        if s & nfa.accepting:
            acc.add(ids[s])
        for a in symbols:
            t = nfa.step(s, a)
            if not t and not complete:
                continue
            if t not in ids:
                ids[t] = len(ids)
                todo.append(t)
            trans.append((ids[s], a, ids[t]))
    return Nfa(ids.values(), alphabet, trans, {0}, acc)


def complement(nfa: Nfa, alphabet=None) -> Nfa:
    d = determinize(nfa, complete=True, alphabet=alphabet)
    return Nfa(d.states, d.alphabet, d.transitions, d.initial, d.states - d.accepting)


def intersect(n1: Nfa, n2: Nfa) -> Nfa:
    alphabet = n1.alphabet | n2.alphabet
    start = [(p, q) for p in n1.initial for q in n2.initial]
    seen = set(start)
    todo = list(start)
    trans = []
    while todo:
        p, q = todo.pop()
        for a, ps in n1.out(p).items():
            for q2 in n2.successors(q, a):
                for p2 in ps:
                    trans.append(((p, q), a, (p2, q2)))
                    if (p2, q2) not in seen:
                        seen.add((p2, q2))
                        todo.append((p2, q2))
    acc = {(p, q) for p, q in seen if p in n1.accepting and q in n2.accepting}
    if not seen:
        return Nfa.empty(alphabet)
    return Nfa(seen, alphabet, trans, start, acc).trim().relabel()


def _disjoint(n: Nfa, tag):
    return [((tag, p), a, (tag, q)) for p, a, q in n._triples()], {(tag, s) for s in n.states}


def union(*nfas: Nfa) -> Nfa:
    states, trans, init, acc, alphabet = set(), [], set(), set(), set()
    for i, n in enumerate(nfas):
        t, s = _disjoint(n, i)
        states |= s
        trans += t
        init |= {(i, q) for q in n.initial}
        acc |= {(i, q) for q in n.accepting}
        alphabet |= n.alphabet
    if not states:
        return Nfa.empty()
    return Nfa(states, alphabet, trans, init, acc).relabel()


def _concat2(n1: Nfa, n2: Nfa) -> Nfa:
    t1, s1 = _disjoint(n1, 1)
    t2, s2 = _disjoint(n2, 2)
    trans = t1 + t2
    init2 = {(2, q) for q in n2.initial}
    for p, a, q in n1._triples():
        if q in n1.accepting:
            trans += [((1, p), a, i) for i in init2]
    init = {(1, q) for q in n1.initial}
    if n1.initial & n1.accepting:
        init |= init2
    acc = {(2, q) for q in n2.accepting}
    if n2.initial & n2.accepting:
        acc |= {(1, q) for q in n1.accepting}
    return Nfa(s1 | s2, n1.alphabet | n2.alphabet, trans, init, acc).relabel()


def concat(*nfas: Nfa) -> Nfa:
    if not nfas:
        return Nfa.epsilon()
    return reduce(_concat2, nfas)


def same_language(n1: Nfa, n2: Nfa) -> bool:
    """Exact language equality via emptiness of both differences."""
    alphabet = n1.alphabet | n2.alphabet
    return intersect(n1, complement(n2, alphabet)).is_empty() and intersect(
        n2, complement(n1, alphabet)
    ).is_empty()


# homomorphisms and substitutions -------------------------------------------

def hom_image(nfa: Nfa, hom: Mapping[Hashable, Iterable]) -> Nfa:
    """Image of L(nfa) under the homomorphism a -> hom[a]."""
    fresh = count()
    states = set(nfa.states)
    trans = []
    out_alpha = set()
    for p, a, q in nfa._triples():
        img = tuple(hom[a])
        out_alpha |= set(img)
        if not img:
            trans.append((p, None, q))
            continue
        prev = p
        for i, b in enumerate(img):
            nxt = q if i == len(img) - 1 else ("h", next(fresh))
            states.add(nxt)
            trans.append((prev, b, nxt))
            prev = nxt
    for a in nfa.alphabet:
        out_alpha |= set(hom.get(a, ()))
    return eliminate_epsilon(states, out_alpha, trans, nfa.initial, nfa.accepting)


def inverse_hom(nfa: Nfa, hom: Mapping[Hashable, Iterable]) -> Nfa:
    """{ w over dom(hom) : hom(w) in L(nfa) }."""
    trans = []
    for p in nfa.states:
        for b, img in hom.items():
            cur = frozenset({p})
            for c in img:
                cur = nfa.step(cur, c) if c in nfa.alphabet else frozenset()
            trans += [(p, b, q) for q in cur]
    return Nfa(nfa.states, hom.keys(), trans, nfa.initial, nfa.accepting)


def regular_substitution(nfa: Nfa, sub: Mapping[Hashable, Nfa]) -> Nfa:
    """Replace every symbol a by the regular language sub[a]."""
    states = set(nfa.states)
    trans = []
    alphabet = set()
    for i, (p, a, q) in enumerate(nfa._triples()):
        r = sub[a]
        alphabet |= r.alphabet
        for s in r.states:
            states.add(("s", i, s))
        trans += [(("s", i, s), c, ("s", i, t)) for s, c, t in r._triples()]
        trans += [(p, None, ("s", i, s)) for s in r.initial]
        trans += [(("s", i, s), None, q) for s in r.accepting]
    return eliminate_epsilon(states, alphabet, trans, nfa.initial, nfa.accepting)


# structural checks -------------------------------------------------------

def prefix_closed(nfa: Nfa) -> bool:
    """True iff every prefix of every accepted word is accepted."""
    d = determinize(nfa).trim()
    return d.states == d.accepting


def pump_decompose(dfa: Nfa, w, start: int = 0):
    """Split w = p q r with q non-empty inside w[start:start+#states] and p q^i r accepted.

    The repeated state is the first one seen twice while reading from
    position ``start``; memberships for i = 0, 1, 2 are checked before
    returning.
    """
    w = tuple(w)
    if not dfa.is_deterministic():
        dfa = determinize(dfa)
    n = len(dfa.states)
    if not dfa.accepts(w):
        raise PumpingError("word is not accepted")
    if len(w) - start < n:
        raise PumpingError(f"pumped factor has length {len(w) - start} < {n} states")
    cur = dfa.run(w[:start])
    seen = {cur: start}
    for i in range(start, start + n):
        cur = dfa.step(cur, w[i])
        if cur in seen:
            j = seen[cur]
            p, q, r = w[:j], w[j : i + 1], w[i + 1 :]
            for k in (0, 1, 2):
                if not dfa.accepts(p + q * k + r):
                    raise PumpingError("pumped word rejected; automaton is not deterministic")
            return p, q, r
        seen[cur] = i + 1
    raise PumpingError("no repeated state found")  # unreachable by pigeonhole
