"""Normalization of candidate cross-sections of F[T] by four GSM passes, and a
budgeted search for certificates that a regular candidate is not a cross-section.

The passes, applied in order:

1. keep the suffix starting at the last ``p00`` when no ``p00``/``Omega`` follows;
2. delete {y,y',z,z'}-blocks that sit between ``p00`` or ``x`` and a later ``x``;
3. delete {z,z'}-blocks between two letters from {y,y'};
4. delete {z,z'}-blocks between ``p00``/``x`` and a following y or y'.

On a word ``p00 v`` whose value is not Omega none of the deletions changes
the value, and the final image lies in p00 x* {y,y'}* {z,z'}*.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

from .lang.gsm import Gsm
from .lang.nfa import Nfa, PumpingError, complement, concat, determinize, intersect, pump_decompose, union
from .lang.rep import Regular
from .monoid import A7, FREE_LETTERS, OMEGA, P, Point, render
from .instances import ft_eval

SYMBOLS = tuple(A7)
YS = ("y", "y'")
ZS = ("z", "z'")
YZ = YS + ZS


def _gsm(name, trans, initial, accepting):
    states = {p for p, *_ in trans} | {q for *_, q in trans} | {initial}
    return Gsm.build(states, SYMBOLS, SYMBOLS, trans, initial, accepting, name)


def gsm_suffix() -> Gsm:
    t = [("skip", a, (), "skip") for a in SYMBOLS]
    t.append(("skip", "p00", ("p00",), "copy"))
    t += [("copy", a, (a,), "copy") for a in FREE_LETTERS]
    return _gsm("suffix", t, "skip", {"copy"})


def gsm_del_before_x() -> Gsm:
    t = [("s", "p00", ("p00",), "B"), ("B", "x", ("x",), "B"), ("D", "x", ("x",), "B")]
    for g in YZ:
        t += [("B", g, (), "D"), ("D", g, (), "D"), ("B", g, (g,), "K"), ("K", g, (g,), "K")]
    return _gsm("del_before_x", t, "s", {"B", "K"})


def gsm_del_z_between_y() -> Gsm:
    # C: last letter was not in {y,y'}; Y: it was; D: deleting a z-block that must end
    # at a y; K: keeping a z-block that follows a y and must not end at one.
    t = [("s", "p00", ("p00",), "C")]
    for st in ("C", "Y", "K"):
        t.append((st, "x", ("x",), "C"))
    for y in YS:
        t += [("C", y, (y,), "Y"), ("Y", y, (y,), "Y"), ("D", y, (y,), "Y")]
    for z in ZS:
        t += [("C", z, (z,), "C"), ("Y", z, (), "D"), ("D", z, (), "D"),
              ("Y", z, (z,), "K"), ("K", z, (z,), "K")]
    return _gsm("del_z_between_y", t, "s", {"C", "Y", "K"})


def gsm_del_z_before_y() -> Gsm:
    # B: last letter was p00 or x; O: anything else.
    t = [("s", "p00", ("p00",), "B")]
    for st in ("B", "O", "K"):
        t.append((st, "x", ("x",), "B"))
    for y in YS:
        t += [("B", y, (y,), "O"), ("O", y, (y,), "O"), ("D", y, (y,), "O")]
    for z in ZS:
        t += [("B", z, (), "D"), ("D", z, (), "D"), ("B", z, (z,), "K"), ("K", z, (z,), "K"),
              ("O", z, (z,), "O")]
    return _gsm("del_z_before_y", t, "s", {"B", "O", "K"})


@lru_cache(maxsize=None)
def build_proof_gsms() -> tuple:
    return gsm_suffix(), gsm_del_before_x(), gsm_del_z_between_y(), gsm_del_z_before_y()


def shape_nfa() -> Nfa:
    """p00 x* {y,y'}* {z,z'}* over the full A7 alphabet."""
    return concat(
        Nfa.symbol("p00", SYMBOLS), Nfa.star_of(["x"], SYMBOLS),
        Nfa.star_of(YS, SYMBOLS), Nfa.star_of(ZS, SYMBOLS),
    )


def normalize_pipeline(candidate: Nfa) -> tuple:
    """The four successive images (L1, L2, L3, L4) of a candidate over A7."""
    out = []
    cur = candidate.with_alphabet(SYMBOLS)
    for g in build_proof_gsms():
        cur = g.image(cur).with_alphabet(SYMBOLS)
        out.append(cur)
    return tuple(out)


def shape_violations(nfa: Nfa) -> Nfa:
    """Words of L(nfa) outside p00 x* {y,y'}* {z,z'}*; empty for every L4."""
    return intersect(nfa.with_alphabet(SYMBOLS), complement(shape_nfa(), SYMBOLS))


def lift(word, stages: list) -> tuple | None:
    """Pull a word of the last stage back to the candidate through the GSM chain.

    ``stages`` is [candidate, L1, L2, L3, L4]; returns a candidate word whose
    image chain produces ``word``, or None.
    """
    gsms = build_proof_gsms()
    for k in range(len(gsms) - 1, -1, -1):
        word = gsms[k].preimage(stages[k], word)
        if word is None:
            return None
    return word


def replace_omega_words(nfa: Nfa, bound: int, ev=None) -> Nfa:
    """Drop every accepted word of length <= bound that evaluates to Omega, then add ``Omega``."""
    ev = ev or ft_eval()
    omega = Point(OMEGA)
    bad = [w for w in nfa.enumerate(bound) if ev(w) == omega]
    keep = intersect(nfa, complement(Nfa.from_words(bad, SYMBOLS), SYMBOLS))
    return union(keep, Nfa.from_words([("Omega",)], SYMBOLS)).with_alphabet(SYMBOLS)


# refutation ---------------------------------------------------------------

@dataclass
class Budget:
    evaluations: int = 200_000
    max_len: int = 12
    radius: int = 4
    pump_cap: int = 1 << 16


@dataclass
class Refutation:
    kind: str  # collision | missing | omega-duplicate
    words: tuple
    element: str
    strategy: str
    trace: list = field(default_factory=list)

    def to_dict(self):
        return {"kind": self.kind, "words": [list(w) for w in self.words], "element": self.element,
                "strategy": self.strategy, "trace": list(self.trace)}

    @classmethod
    def from_dict(cls, d):
        return cls(d["kind"], tuple(tuple(w) for w in d["words"]), d["element"], d["strategy"],
                   list(d.get("trace", [])))


@dataclass
class RefuteResult:
    refutation: Refutation | None
    strategies: list
    evaluations: int

    @property
    def found(self) -> bool:
        return self.refutation is not None

    def to_dict(self):
        return {"status": "refuted" if self.found else "not-found",
                "refutation": self.refutation.to_dict() if self.found else None,
                "stats": {"strategies": list(self.strategies), "evaluations": self.evaluations}}


def check_refutation(ref: Refutation, candidate: Nfa, ev=None) -> bool:
    """Independent re-check of a certificate against the candidate and the evaluator."""
    ev = ev or ft_eval()
    if ref.kind in ("collision", "omega-duplicate"):
        w1, w2 = ref.words
        e1, e2 = ev(w1), ev(w2)
        ok = w1 != w2 and candidate.accepts(w1) and candidate.accepts(w2) and e1 == e2
        ok = ok and render(e1) == ref.element
        return ok and (ref.kind != "omega-duplicate" or e1 == Point(OMEGA))
    if ref.kind == "missing":
        (w,) = ref.words
        el = ev(w)
        if render(el) != ref.element:
            return False
        if isinstance(el, Point):
            # only certified when no accepted word carries a point letter at all
            return _point_free(candidate)
        return not any(candidate.accepts(u) for u in free_representatives(el, ev))
    return False


def free_representatives(el, ev) -> list:
    """Every word over non-erasing free generators evaluating to the free element ``el``."""
    target, weight = el.word, 0
    image = ev.free_image
    if any(not w for w, _ in image.values()):
        raise ValueError("erasing generators give infinitely many representatives")
    out = []
    todo = [((), 0, 0)]
    while todo:
        w, k, s = todo.pop()
        if k == len(target):
            if s == weight:
                out.append(w)
            continue
        for g, (img, wt) in image.items():
            if target[k : k + len(img)] == img:
                todo.append((w + (g,), k + len(img), s + wt))
    return out


class _Counter:
    def __init__(self, ev, limit):
        self.ev, self.limit, self.used = ev, limit, 0

    def __call__(self, w):
        self.used += 1
        return self.ev(w)

    @property
    def exhausted(self):
        return self.used >= self.limit


def refute_regular_cross_section(candidate: Nfa, budget: Budget | None = None,
                                 strategies=("enumerate", "missing", "pumping")) -> RefuteResult:
    """Search for a certificate that ``candidate`` is not a cross-section of F[T] over A7.

    Never claims the candidate is a cross-section: without a certificate the
    result is simply "not found".
    """
    budget = budget or Budget()
    ev = ft_eval()
    count = _Counter(ev, budget.evaluations)
    candidate = candidate.with_alphabet(SYMBOLS)
    ran = []
    for name in strategies:
        if count.exhausted:
            break
        ran.append(name)
        ref = {"enumerate": _by_enumeration, "missing": _by_missing,
               "pumping": _by_pumping}[name](candidate, count, budget)
        if ref is not None:
            if not check_refutation(ref, candidate, ev):
                raise AssertionError(f"refuter produced an invalid certificate: {ref}")
            return RefuteResult(ref, ran, count.used)
    return RefuteResult(None, ran, count.used)


def _by_enumeration(candidate, count, budget):
    """Shortlex search over point-valued words for two with the same value."""
    lang = Regular(candidate).restrict(Nfa.containing_any({"p00", "Omega"}, SYMBOLS))
    first = {}
    for w in lang.walk(budget.max_len):
        if count.exhausted:
            return None
        el = count(w)
        if el in first:
            kind = "omega-duplicate" if el == Point(OMEGA) else "collision"
            return Refutation(kind, (first[el], w), render(el), "enumerate",
                              [f"words enumerated: {len(first) + 1}"])
        first[el] = w
    return None


def _point_free(candidate) -> bool:
    return intersect(candidate.with_alphabet(SYMBOLS), Nfa.containing_any({"p00", "Omega"}, SYMBOLS)).is_empty()


def _by_missing(candidate, count, budget):
    """A free element of the ball whose only possible representatives are all rejected.

    A candidate with no point-valued words at all misses p(0,0) outright.
    """
    ev = count.ev
    for el, w in sorted(ev.ball(budget.radius).items(), key=lambda kv: (len(kv[1]), kv[1])):
        if isinstance(el, Point):
            continue
        count.used += 1
        if not any(candidate.accepts(u) for u in free_representatives(el, ev)):
            return Refutation("missing", (w,), render(el), "missing",
                              [f"radius {budget.radius}: free element has no accepted representative"])
        if count.exhausted:
            return None
    if _point_free(candidate):
        return Refutation("missing", (("p00",),), render(ev(("p00",))), "missing",
                          ["no accepted word contains a point letter"])
    return None


def _by_pumping(candidate, count, budget):
    """Follow the pumping argument on the normalized language L4.

    Take n above the state count of L4's automaton, find the L4 word for
    p_{2^n, n}, pump its x-block down to leave the powers of two, then pump
    the z-block: the pumped words share a value.  Both are pulled back to the
    candidate through the GSM chain.
    """
    trace = []
    stages = [candidate, *normalize_pipeline(candidate)]
    dfa = determinize(stages[-1]).trim().relabel()
    s = len(dfa.states)
    n = s + 1
    trace.append(f"L4 automaton has {s} states; target p({2 ** n},{n})")
    if 2 ** n > budget.pump_cap:
        trace.append(f"2^{n} exceeds pump cap {budget.pump_cap}")
        return None
    alpha = 2 ** n
    word = _find_l4_rep(dfa, alpha, n, count)
    if word is None:
        trace.append("no L4 word represents the target")
        return None
    trace.append(f"L4 representative has length {len(word)}")
    try:
        p, q, r = pump_decompose(dfa, word, start=1)
    except PumpingError as exc:
        trace.append(f"x-block pumping failed: {exc}")
        return None
    if set(q) != {"x"}:
        trace.append("pumped factor left the x-block")
        return None
    down = p + r
    k = len(q)
    trace.append(f"x-block pumped down by {k}; alpha = {alpha - k} is not a power of two")
    zstart = 1 + (alpha - k) + sum(1 for a in down if a in YS)
    try:
        p2, q2, r2 = pump_decompose(dfa, down, start=zstart)
    except PumpingError as exc:
        trace.append(f"z-block pumping failed: {exc}")
        return None
    pumped = [p2 + q2 * i + r2 for i in (1, 0, 2)]
    lifted = []
    for w in pumped:
        if count.exhausted:
            return None
        c = lift(w, stages)
        count.used += 1
        if c is not None and c not in lifted:
            lifted.append(c)
    if len(lifted) < 2:
        trace.append("pumped L4 words lift to a single candidate word")
        return None
    w1, w2 = lifted[:2]
    e1, e2 = count(w1), count(w2)
    if e1 != e2:
        trace.append("lifted words differ in value")
        return None
    trace.append(f"z-block factor {' '.join(q2)} pumped; lifted to candidate words")
    return Refutation("collision", (w1, w2), render(e1), "pumping", trace)


def _find_l4_rep(dfa: Nfa, alpha: int, n: int, count):
    """Shortest word p00 x^alpha v w accepted by dfa with value p_{alpha, n}."""
    prefix = ("p00",) + ("x",) * alpha
    cur = dfa.run(prefix)
    if not cur:
        return None
    (q,) = cur
    # alpha is a power of two: y/y' fix p_{alpha,0}, z/z' move beta by +-1
    start = (q, 0, "y")
    parent = {start: None}
    queue = deque([start])
    while queue:
        node = queue.popleft()
        st, beta, phase = node
        if beta == n and st in dfa.accepting:
            tail = []
            while parent[node] is not None:
                node, a = parent[node]
                tail.append(a)
            word = prefix + tuple(reversed(tail))
            count.used += 1
            return word if count.ev(word) == Point(P(alpha, n)) else None
        letters = (YS + ZS) if phase == "y" else ZS
        for a in letters:
            nxt = dfa.successors(st, a)
            if not nxt:
                continue
            (t,) = nxt
            nb = beta + (1 if a == "z" else -1 if a == "z'" else 0)
            if abs(nb) > 2 * n + len(dfa.states):
                continue
            node2 = (t, nb, "z" if a in ZS else "y")
            if node2 not in parent:
                parent[node2] = (node, a)
                queue.append(node2)
    return None


def random_candidate(rng, n_states: int = 4, density: float = 0.3) -> Nfa:
    """A random automaton over A7; ``rng`` is a random.Random."""
    states = range(n_states)
    trans = [(p, a, q) for p in states for a in SYMBOLS for q in states if rng.random() < density / n_states * 2]
    accepting = [q for q in states if rng.random() < 0.5] or [n_states - 1]
    return Nfa(states, SYMBOLS, trans, [0], accepting)


def pipeline_apply(word) -> set:
    """Outputs of the four passes applied in sequence to one word."""
    outs = {tuple(word)}
    for g in build_proof_gsms():
        outs = set().union(*(g.apply_word(u) for u in outs))
    return outs


def _feed(gsms, states, letters, k=0):
    """Push letters through gsms[k:] from ``states``; yields (new states, output)."""
    if k == len(gsms):
        yield states, tuple(letters)
        return
    runs = [(states[k], ())]
    for a in letters:
        runs = [(q, out + o) for p, out in runs for o, q in gsms[k].moves(p, a)]
    for q, out in runs:
        for st, final in _feed(gsms, states[:k] + (q,) + states[k + 1 :], out, k + 1):
            yield st, final


def chain_step(configs: set, a) -> set:
    """Advance a set of (states, output) configurations of the composed passes by one letter."""
    gsms = build_proof_gsms()
    return {(st, out + o) for states, out in configs for st, o in _feed(gsms, states, (a,))}


def chain_start() -> set:
    return {(tuple(g.initial for g in build_proof_gsms()), ())}


def chain_outputs(configs: set) -> set:
    gsms = build_proof_gsms()
    return {out for states, out in configs if all(s in g.accepting for s, g in zip(states, gsms))}


def non_omega_words(max_len: int):
    """Words p00 v with |v| <= max_len whose value is not Omega, with their point."""
    from .monoid import act_letter

    frontier = [(P(0, 0), ("p00",))]
    while frontier:
        nxt = []
        for p, w in frontier:
            yield w, p
            if len(w) <= max_len:
                for g in FREE_LETTERS:
                    q = act_letter(p, g)
                    if q != OMEGA:
                        nxt.append((q, w + (g,)))
        frontier = nxt


def check_semantic_preservation(max_len: int) -> tuple:
    """(words checked, failures) over the words p00 v, |v| <= max_len, not evaluating to Omega.

    A failure is (word, outputs) where the passes do not produce exactly one
    word, or produce one of a different value or outside the normal shape.
    Prefixes are shared, so the passes run once per trie node.
    """
    from .monoid import act_letter

    ev = ft_eval()
    shape = shape_nfa()
    failures, n = [], 0
    stack = [(P(0, 0), ("p00",), chain_step(chain_start(), "p00"))]
    while stack:
        p, w, configs = stack.pop()
        n += 1
        outs = chain_outputs(configs)
        if len(outs) != 1 or any(ev(u) != Point(p) or not shape.accepts(u) for u in outs):
            failures.append((w, sorted(outs)))
        if len(w) <= max_len:
            for g in FREE_LETTERS:
                q = act_letter(p, g)
                if q != OMEGA:
                    stack.append((q, w + (g,), chain_step(configs, g)))
    return n, failures
