"""Monoids built from right actions, and the concrete monoids F[T] and F[T] x Z.

Elements of M[T] are either ``Free`` words of the acting free monoid or
``Point`` values of the acted-on set.  Multiplication follows the rules

    t.m = t . m      m.t = t      t.s = s

so a product is determined by the last point in it and the free word
that follows.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

FREE_LETTERS = ("x", "y", "y'", "z", "z'")

Word = tuple  # tuple of atomic symbols


@dataclass(frozen=True, order=True, slots=True)
class P:
    """The point p_{alpha,beta}."""

    alpha: int
    beta: int

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError(f"alpha must be non-negative, got {self.alpha}")

    def __repr__(self):
        return f"p({self.alpha},{self.beta})"


@dataclass(frozen=True)
class Omega:
    """The absorbing point."""

    def __repr__(self):
        return "Ω"


OMEGA = Omega()


@dataclass(frozen=True, slots=True)
class Free:
    word: Word = ()

    def __repr__(self):
        return f"Free({' '.join(self.word) or 'ε'})"


@dataclass(frozen=True, slots=True)
class Point:
    t: Any

    def __repr__(self):
        return f"Point({self.t!r})"


@dataclass(frozen=True, slots=True)
class ProductElement:
    """An element of M[T] x Z."""

    ft: Free | Point
    shift: int = 0

    def __repr__(self):
        return f"({self.ft!r}, {self.shift})"


IDENTITY = Free(())


def in_bset(alpha: int) -> bool:
    """True iff alpha is a power of two (1, 2, 4, ...)."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    return alpha > 0 and alpha & (alpha - 1) == 0


def act_letter(t, g: str):
    if isinstance(t, Omega):
        return OMEGA
    a, b = t.alpha, t.beta
    if g == "x":
        return P(a + 1, 0) if b == 0 else OMEGA
    if g in ("y", "y'"):
        if not in_bset(a):
            return P(a, b + 1 if g == "y" else b - 1)
        return t if b == 0 else OMEGA
    if g in ("z", "z'"):
        if in_bset(a):
            return P(a, b + 1 if g == "z" else b - 1)
        return t
    raise ValueError(f"unknown free letter {g!r}")


def act_word(t, w: Iterable[str]):
    for g in w:
        t = act_letter(t, g)
        if t == OMEGA:
            break
    return t


@dataclass(frozen=True)
class ActionSpec:
    """A right action of the free monoid on ``letters`` with an absorbing point.

    ``act`` must be total on the caller's point universe.  ``sample_points``
    are extra points checked for closure on registration.
    """

    letters: tuple
    act: Callable[[Any, str], Any]
    absorbing: Hashable
    sample_points: tuple = ()


class ActionMonoid:
    """M[T] for M the free monoid on ``letters`` acting via ``act``."""

    def __init__(self, letters: Sequence[str], act: Callable[[Any, str], Any], absorbing):
        self.letters = tuple(letters)
        self._act = act
        self.absorbing = absorbing
        self.identity = IDENTITY

    def act(self, t, word):
        for g in word:
            if t == self.absorbing:
                return t
            t = self._act(t, g)
        return t

    def multiply(self, u, v):
        if isinstance(v, Point):
            return v
        if isinstance(u, Point):
            return Point(self.act(u.t, v.word))
        return Free(u.word + v.word)

    def generators(self) -> list:
        return [Free((g,)) for g in self.letters]

    def __repr__(self):
        return f"ActionMonoid(letters={self.letters})"


def generic_mt(spec: ActionSpec) -> ActionMonoid:
    for g in spec.letters:
        if spec.act(spec.absorbing, g) != spec.absorbing:
            raise ValueError(f"letter {g!r} moves the absorbing point")
    for t in spec.sample_points:
        for g in spec.letters:
            spec.act(t, g)
    return ActionMonoid(spec.letters, spec.act, spec.absorbing)


FT = ActionMonoid(FREE_LETTERS, act_letter, OMEGA)


def mt_multiply(u, v):
    return FT.multiply(u, v)


def product_multiply(u: ProductElement, v: ProductElement) -> ProductElement:
    return ProductElement(FT.multiply(u.ft, v.ft), u.shift + v.shift)


PRODUCT_IDENTITY = ProductElement(IDENTITY, 0)

A7: dict[str, Free | Point] = {g: Free((g,)) for g in FREE_LETTERS}
A7.update({"p00": Point(P(0, 0)), "Omega": Point(OMEGA)})


def _pe(ft, shift):
    return ProductElement(ft, shift)


A13: dict[str, ProductElement] = {
    "a": _pe(Free(("x",)), 0),
    "b0": _pe(Free(("y",)), 0),
    "b1": _pe(Free(("y",)), 1),
    "b'0": _pe(Free(("y'",)), 0),
    "b'-1": _pe(Free(("y'",)), -1),
    "c0": _pe(Free(("z",)), 0),
    "c1": _pe(Free(("z",)), 1),
    "c'0": _pe(Free(("z'",)), 0),
    "c'-1": _pe(Free(("z'",)), -1),
    "d1": _pe(IDENTITY, 1),
    "d-1": _pe(IDENTITY, -1),
    "e": _pe(Point(P(0, 0)), 0),
    "f": _pe(Point(OMEGA), 0),
}


def _symbols(w) -> tuple:
    return tuple(w.split()) if isinstance(w, str) else tuple(w)


def eval_word_ft(w) -> Free | Point:
    """Evaluate a word over A7 in F[T]; a string is split on whitespace."""
    result = IDENTITY
    for g in _symbols(w):
        result = FT.multiply(result, A7[g])
    return result


def eval_word_product(w) -> ProductElement:
    """Evaluate a word over A13 in F[T] x Z."""
    ft, shift = IDENTITY, 0
    for g in _symbols(w):
        v = A13[g]
        ft = FT.multiply(ft, v.ft)
        shift += v.shift
    return ProductElement(ft, shift)


def closed_form_eval(alpha: int, beta: int, gamma: int, bsign: int, csign: int) -> ProductElement:
    """Value of e a^alpha B^beta C^gamma, with B = b1 or b'-1 and C = c1 or c'-1 by sign."""
    if bsign not in (1, -1) or csign not in (1, -1):
        raise ValueError("signs must be +1 or -1")
    shift = bsign * beta + csign * gamma
    if in_bset(alpha):
        return ProductElement(Point(P(alpha, csign * gamma)), shift)
    return ProductElement(Point(P(alpha, bsign * beta)), shift)


def closed_form_word(alpha: int, beta: int, gamma: int, bsign: int, csign: int) -> tuple:
    b = "b1" if bsign > 0 else "b'-1"
    c = "c1" if csign > 0 else "c'-1"
    return ("e",) + ("a",) * alpha + (b,) * beta + (c,) * gamma


def free_part(element):
    """Split a free-kind element into (free word, integer weight); None for points."""
    if isinstance(element, ProductElement):
        return None if isinstance(element.ft, Point) else (element.ft.word, element.shift)
    if isinstance(element, Free):
        return (element.word, 0)
    return None


def ball_witnesses(values: Mapping[str, Any], radius: int, multiply, identity) -> dict:
    """Map each element of the radius ball to its shortlex-least generator word."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    gens = sorted(values)
    seen = {identity: ()}
    frontier = [(identity, ())]
    for _ in range(radius):
        nxt = []
        for el, w in frontier:
            for g in gens:
                e2 = multiply(el, values[g])
                if e2 not in seen:
                    seen[e2] = w + (g,)
                    nxt.append((e2, w + (g,)))
        frontier = nxt
    return seen


def enumerate_ball(values: Mapping[str, Any], radius: int, multiply, identity) -> set:
    return set(ball_witnesses(values, radius, multiply, identity))


# canonical text form -------------------------------------------------------

def _render_word(word) -> str:
    import re

    if all(re.fullmatch(r"[a-z]'*", s) for s in word):
        return "".join(word)
    return " ".join(word)


def render_point(t) -> str:
    if t == OMEGA:
        return "OMEGA"
    if isinstance(t, P):
        return f"P:{t.alpha},{t.beta}"
    return t.render() if hasattr(t, "render") else repr(t)


def render(element) -> str:
    """Canonical string: "F:xyz'", "P:3,-2", "OMEGA", "(P:3,-2 | 5)"."""
    if isinstance(element, ProductElement):
        return f"({render(element.ft)} | {element.shift})"
    if isinstance(element, Free):
        return "F:" + _render_word(element.word)
    if isinstance(element, Point):
        return render_point(element.t)
    return repr(element)
