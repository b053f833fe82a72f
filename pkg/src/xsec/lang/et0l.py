"""Tabled parallel rewriting (ET0L) systems and bounded generation."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product


@dataclass(frozen=True)
class Et0lSystem:
    alphabet: tuple
    axiom: tuple
    tables: tuple  # each table: tuple of (lhs, rhs-tuple)
    terminals: tuple = None

    def __post_init__(self):
        if not self.tables:
            raise ValueError("an ET0L system needs at least one table")
        alpha = set(self.alphabet)
        for t in self.tables:
            if not t:
                raise ValueError("ET0L tables must be non-empty")
            for lhs, rhs in t:
                if lhs not in alpha or not set(rhs) <= alpha:
                    raise ValueError(f"production {lhs!r} -> {rhs!r} uses undeclared symbols")
        if not set(self.axiom) <= alpha:
            raise ValueError("axiom uses undeclared symbols")
        if self.terminals is None:
            lhs = {l for t in self.tables for l, r in t if r != (l,)}
            object.__setattr__(self, "terminals", tuple(a for a in self.alphabet if a not in lhs))

    @classmethod
    def build(cls, alphabet, axiom, tables, terminals=None):
        tabs = tuple(tuple((lhs, tuple(rhs)) for lhs, rhs in t) for t in tables)
        return cls(tuple(alphabet), tuple(axiom), tabs,
                   None if terminals is None else tuple(terminals))

    def _rules(self):
        rules = []
        for t in self.tables:
            r = {}
            for lhs, rhs in t:
                r.setdefault(lhs, []).append(rhs)
            rules.append(r)
        return rules

    def apply_table(self, form: tuple, table: int, prune_bound: int | None = None) -> set:
        """All results of rewriting every symbol of ``form`` in parallel with one table."""
        rules = self._rules()[table]
        return _rewrite(form, rules, prune_bound)


def _rewrite(form, rules, prune_bound):
    choices = [rules.get(s, [(s,)]) for s in form]
    out = set()
    for pick in product(*choices):
        w = tuple(c for part in pick for c in part)
        if prune_bound is None or len(w) <= prune_bound:
            out.add(w)
    return out


def et0l_generate(sys: Et0lSystem, max_len: int, prune_bound: int) -> set:
    """Terminal words of length <= max_len reachable through forms no longer than prune_bound."""
    if prune_bound < max_len:
        raise ValueError("prune_bound must be at least max_len")
    terminals = set(sys.terminals)
    rules = sys._rules()
    start = tuple(sys.axiom)
    seen = {start}
    frontier = [start] if len(start) <= prune_bound else []
    result = set()
    while frontier:
        nxt = []
        for form in frontier:
            if len(form) <= max_len and set(form) <= terminals:
                result.add(form)
            for r in rules:
                for f2 in _rewrite(form, r, prune_bound):
                    if f2 not in seen:
                        seen.add(f2)
                        nxt.append(f2)
        frontier = nxt
    return result
