"""Bounded cross-section verification.

A language L over a generating alphabet is a cross-section when every
monoid element has exactly one representative in L.  The checks here are
bounded: injectivity over words of length <= max_len, coverage of the
Cayley ball of a given radius by words of length <= search_len.

Words are split by the kind of element they evaluate to.  Words containing
a point-valued generator are enumerated and evaluated.  Words over
free-valued generators evaluate to (free word, integer weight) pairs, and
collisions among them are searched symbolically on pairs of automaton
runs, so the (often exponential) free part is never listed.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from .lang.nfa import Nfa, determinize, intersect
from .lang.rep import LanguageRep, Regular, image_under
from .monoid import ball_witnesses, free_part, render


class EvalMap:
    """Evaluation of generator words in a monoid."""

    def __init__(self, values: Mapping[str, Any], multiply: Callable, identity, name: str = ""):
        self.values = dict(values)
        self.multiply = multiply
        self.identity = identity
        self.name = name
        self._balls: dict = {}
        self.calls = 0

    @property
    def alphabet(self) -> frozenset:
        return frozenset(self.values)

    def __call__(self, word):
        self.calls += 1
        el = self.identity
        for g in word:
            el = self.multiply(el, self.values[g])
        return el

    def ball(self, radius: int) -> dict:
        if radius not in self._balls:
            self._balls[radius] = ball_witnesses(self.values, radius, self.multiply, self.identity)
        return self._balls[radius]

    @property
    def point_letters(self) -> frozenset:
        return frozenset(g for g, v in self.values.items() if free_part(v) is None)

    @property
    def free_image(self) -> dict:
        return {g: free_part(v) for g, v in self.values.items() if free_part(v) is not None}

    def __repr__(self):
        return f"EvalMap({self.name or sorted(self.values)})"


@dataclass(frozen=True)
class Collision:
    w1: tuple
    w2: tuple
    element: str

    def to_dict(self):
        return {"w1": list(self.w1), "w2": list(self.w2), "element": self.element}


@dataclass(frozen=True)
class Missing:
    element: str
    witness: tuple

    def to_dict(self):
        return {"element": self.element, "witness": list(self.witness)}


@dataclass
class VerificationReport:
    collisions: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.collisions and self.missing:
            return "both"
        if self.collisions:
            return "collision"
        if self.missing:
            return "missing"
        return "pass"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "collisions": [c.to_dict() for c in self.collisions],
            "missing": [m.to_dict() for m in self.missing],
            "stats": dict(self.stats),
        }

    @classmethod
    def from_dict(cls, d) -> "VerificationReport":
        rep = cls(
            [Collision(tuple(c["w1"]), tuple(c["w2"]), c["element"]) for c in d["collisions"]],
            [Missing(m["element"], tuple(m["witness"])) for m in d["missing"]],
            dict(d.get("stats", {})),
        )
        if rep.status != d.get("status", rep.status):
            raise ValueError("report status does not match its certificates")
        return rep


def _check_alphabet(lang: LanguageRep, ev: EvalMap):
    extra = set(lang.alphabet) - set(ev.alphabet)
    if extra:
        raise ValueError(f"language uses symbols with no value: {sorted(extra)}")


def _point_filter(ev: EvalMap, alphabet) -> Nfa:
    return Nfa.containing_any(ev.point_letters & alphabet, alphabet)


def _free_filter(ev: EvalMap, alphabet) -> Nfa:
    return Nfa.star_of(set(ev.free_image) & alphabet, alphabet)


# symbolic search on pairs of runs -------------------------------------------

def _unit_steps(dfa: Nfa, image: Mapping) -> dict:
    """Split every transition into steps emitting at most one free letter."""
    steps = defaultdict(list)
    for p, a, q in dfa.transitions:
        word, weight = image[a]
        if len(word) <= 1:
            steps[p].append((a, word[0] if word else None, weight, q))
            continue
        prev = p
        for i, c in enumerate(word):
            nxt = q if i == len(word) - 1 else ("mid", p, a, i)
            steps[prev].append((a if i == 0 else None, c, weight if i == 0 else 0, nxt))
            prev = nxt
    return steps


def free_pair_search(dfa: Nfa, image: Mapping, max_len: int):
    """Two distinct accepted words of length <= max_len with equal (free word, weight) image.

    ``dfa`` must be deterministic.  Returns the pair found by breadth-first
    search, or None if the image map is injective on L(dfa) up to max_len.

    Runs are advanced in lockstep on emitted letters.  Until the words first
    differ both runs take identical steps; at the first difference each run
    takes its own step, leaving at most one emitted letter pending, and the
    trailing run must then emit that letter before either run emits more.
    """
    dfa = dfa.trim()
    if not dfa.initial:
        return None
    steps = _unit_steps(dfa, image)
    acc = dfa.accepting
    maxw = max((abs(w) for _, w in image.values()), default=0)
    (q0,) = dfa.initial
    start = ("same", q0, q0, 0, 0, 0, None, False, False)
    parent = {start: None}
    queue = deque([start])

    def push(state, prev, a1, a2):
        mode, s1, s2, l1, l2, diff, buf, st1, st2 = state
        if l1 > max_len or l2 > max_len:
            return
        if abs(diff) > maxw * ((max_len - l1) + (max_len - l2)):
            return
        if state not in parent:
            parent[state] = (prev, a1, a2)
            queue.append(state)

    while queue:
        cur = queue.popleft()
        mode, s1, s2, l1, l2, diff, buf, st1, st2 = cur
        if mode == "div" and buf is None and diff == 0 and s1 in acc and s2 in acc:
            return _rebuild(parent, cur)
        if mode == "same":
            for a, o, w, t in steps[s1]:
                nl = l1 + (a is not None)
                push(("same", t, t, nl, nl, 0, None, False, False), cur, a, a)
            if s1 not in dfa.states:
                continue
            out = steps[s1]
            for i, (a1, o1, w1, t1) in enumerate(out):
                for a2, o2, w2, t2 in out[i + 1:]:
                    if o1 is not None and o2 is not None:
                        if o1 != o2:
                            continue
                        nb = None
                    elif o1 is not None:
                        nb = (1, o1)
                    elif o2 is not None:
                        nb = (2, o2)
                    else:
                        nb = None
                    push(("div", t1, t2, l1 + 1, l2 + 1, w1 - w2, nb, False, False), cur, a1, a2)
            if s1 in acc:
                for a2, o2, w2, t2 in out:
                    if o2 is None:
                        push(("div", s1, t2, l1, l2 + 1, -w2, None, True, False), cur, None, a2)
            continue
        if not st1:
            for a, o, w, t in steps[s1]:
                if o is None:
                    push(("div", t, s2, l1 + (a is not None), l2, diff + w, buf, st1, st2), cur, a, None)
        if not st2:
            for a, o, w, t in steps[s2]:
                if o is None:
                    push(("div", s1, t, l1, l2 + (a is not None), diff - w, buf, st1, st2), cur, None, a)
        if buf is None:
            if st1 or st2:
                continue
            by_letter = defaultdict(list)
            for step in steps[s2]:
                if step[1] is not None:
                    by_letter[step[1]].append(step)
            for a1, o1, w1, t1 in steps[s1]:
                if o1 is None:
                    continue
                for a2, o2, w2, t2 in by_letter[o1]:
                    push(("div", t1, t2, l1 + (a1 is not None), l2 + (a2 is not None),
                          diff + w1 - w2, None, st1, st2), cur, a1, a2)
        else:
            side, c = buf
            if side == 1 and not st2:
                for a, o, w, t in steps[s2]:
                    if o == c:
                        push(("div", s1, t, l1, l2 + (a is not None), diff - w, None, st1, st2),
                             cur, None, a)
            elif side == 2 and not st1:
                for a, o, w, t in steps[s1]:
                    if o == c:
                        push(("div", t, s2, l1 + (a is not None), l2, diff + w, None, st1, st2),
                             cur, a, None)
    return None


def _rebuild(parent, state):
    w1, w2 = [], []
    while parent[state] is not None:
        state, a1, a2 = parent[state]
        if a1 is not None:
            w1.append(a1)
        if a2 is not None:
            w2.append(a2)
    return tuple(reversed(w1)), tuple(reversed(w2))


def _free_collisions(lang: LanguageRep, ev: EvalMap, max_len: int, limit):
    """Collisions among words over free-valued generators; returns (collisions, method, count)."""
    image = ev.free_image
    letters = set(image) & set(lang.alphabet)
    if not letters:
        return [], "none", 0
    universal = Nfa.star_of(letters)
    if free_pair_search(universal, image, max_len) is None:
        return [], "symbolic-universal", 0
    if isinstance(lang, Regular):
        dfa = determinize(intersect(lang.nfa, universal)).trim()
        pair = free_pair_search(dfa, image, max_len)
        if pair is None:
            return [], "symbolic-regular", 0
        el = ev(pair[0])
        return [Collision(*sorted(pair, key=lambda w: (len(w), w)), render(el))], "symbolic-regular", 0
    words = list(lang.restrict(_free_filter(ev, lang.alphabet)).walk(max_len))
    return _group(words, ev, limit), "enumerated", len(words)


def _group(words, ev: EvalMap, limit=None) -> list:
    first = {}
    out = []
    for w in words:
        el = ev(w)
        if el in first:
            out.append(Collision(first[el], w, render(el)))
            if limit is not None and len(out) >= limit:
                break
        else:
            first[el] = w
    return out


def verify_injectivity(lang: LanguageRep, ev: EvalMap, max_len: int, limit: int | None = None,
                       _stats: dict | None = None) -> list:
    """Pairs of distinct words of ``lang`` up to max_len with equal value.

    Point-valued words are reported exhaustively (each extra representative
    paired with the shortlex-first one).  For the free-valued part a single
    shortest witness pair is reported when one exists.
    """
    _check_alphabet(lang, ev)
    words = list(lang.restrict(_point_filter(ev, lang.alphabet)).walk(max_len))
    collisions = _group(words, ev, limit)
    free, method, n_free = _free_collisions(lang, ev, max_len, limit)
    collisions += free
    if _stats is not None:
        _stats.update(point_words=len(words), free_check=method, free_words_enumerated=n_free)
    collisions.sort(key=lambda c: (len(c.w1), c.w1, len(c.w2), c.w2))
    return collisions[:limit] if limit is not None else collisions


def represented_elements(lang: LanguageRep, ev: EvalMap, radius: int, search_len: int,
                         _stats: dict | None = None) -> set:
    """Values of lang's words up to search_len that could lie in the radius ball."""
    pts = list(lang.restrict(_point_filter(ev, lang.alphabet)).walk(search_len))
    image = ev.free_image
    cap = radius * max((len(w) for w, _ in image.values()), default=0)

    def keep(w):
        return sum(len(image[g][0]) for g in w) <= cap

    free = list(lang.restrict(_free_filter(ev, lang.alphabet)).walk(search_len, keep)) if image else []
    if _stats is not None:
        _stats.update(coverage_point_words=len(pts), coverage_free_words=len(free))
    return {ev(w) for w in pts} | {ev(w) for w in free}


def verify_coverage(lang: LanguageRep, ev: EvalMap, radius: int, search_len: int,
                    _stats: dict | None = None) -> list:
    """Ball elements with no representative among lang's words up to search_len."""
    if search_len < radius:
        raise ValueError("search_len must be at least radius")
    _check_alphabet(lang, ev)
    ball = ev.ball(radius)
    have = represented_elements(lang, ev, radius, search_len, _stats)
    missing = [Missing(render(el), w) for el, w in ball.items() if el not in have]
    if _stats is not None:
        _stats.update(ball_size=len(ball), elements_covered=len(ball) - len(missing))
    return sorted(missing, key=lambda m: (len(m.witness), m.witness))


def verify_cross_section(lang: LanguageRep, ev: EvalMap, radius: int, search_len: int,
                         max_len: int, limit: int | None = 50) -> VerificationReport:
    stats = {"radius": radius, "search_len": search_len, "max_len": max_len, "language": lang.kind}
    calls = ev.calls
    collisions = verify_injectivity(lang, ev, max_len, limit, stats)
    missing = verify_coverage(lang, ev, radius, search_len, stats)
    stats["evaluations"] = ev.calls - calls
    report = VerificationReport(collisions, missing, stats)
    problems = recheck(report, lang, ev)
    if problems:
        raise AssertionError("unsound certificate: " + "; ".join(problems))
    return report


def recheck(report: VerificationReport, lang: LanguageRep, ev: EvalMap) -> list:
    """Re-validate every certificate by direct evaluation; returns a list of problems."""
    problems = []
    for c in report.collisions:
        e1, e2 = ev(c.w1), ev(c.w2)
        if c.w1 == c.w2:
            problems.append(f"collision pair is not distinct: {c.w1}")
        if e1 != e2 or render(e1) != c.element:
            problems.append(f"collision {c.w1} / {c.w2} does not evaluate to {c.element}")
        if not (lang.contains(c.w1) and lang.contains(c.w2)):
            problems.append(f"collision words not both in the language: {c.w1}, {c.w2}")
    for m in report.missing:
        if render(ev(m.witness)) != m.element:
            problems.append(f"witness {m.witness} does not evaluate to {m.element}")
    return problems


def retarget(lang: LanguageRep, hom: Mapping) -> LanguageRep:
    """Rewrite a language over B into one over A via b -> hom[b]."""
    return image_under(lang, {b: tuple(v) for b, v in hom.items()})


def check_retarget_hom(ev_b: EvalMap, ev_a: EvalMap, hom: Mapping) -> list:
    """Generators b whose replacement word does not evaluate to the value of b."""
    return [b for b in ev_b.values if ev_a(tuple(hom[b])) != ev_b.values[b]]
