"""Built-in languages and evaluators for F[T] and F[T] x Z."""
from __future__ import annotations

from .lang.nfa import Nfa, concat, union
from .lang.ocm import OneCounterMachine
from .lang.rep import OneCounter, Regular
from .monoid import A7, A13, FREE_LETTERS, FT, IDENTITY, PRODUCT_IDENTITY, product_multiply
from .verify import EvalMap

A7_SYMBOLS = tuple(A7)
A13_SYMBOLS = tuple(A13)


def ft_eval() -> EvalMap:
    return EvalMap(A7, FT.multiply, IDENTITY, "F[T] over A7")


def product_eval() -> EvalMap:
    return EvalMap(A13, product_multiply, PRODUCT_IDENTITY, "F[T]xZ over A13")


def _s(a):
    return Nfa.symbol(a, A13_SYMBOLS)


def _st(*symbols):
    return Nfa.star_of(symbols, A13_SYMBOLS)


def prop31_parts() -> dict:
    """The eight star-families whose union is the prefix-closed cross-section of F[T] x Z."""
    free = ("a", "b0", "b'0", "c0", "c'0")
    parts = {}
    for b in ("b1", "b'-1"):
        for c in ("c1", "c'-1"):
            parts[f"e a* {b}* {c}*"] = concat(_s("e"), _st("a"), _st(b), _st(c))
    parts["f d1*"] = concat(_s("f"), _st("d1"))
    parts["f d-1*"] = concat(_s("f"), _st("d-1"))
    parts["F d1*"] = concat(_st(*free), _st("d1"))
    parts["F d-1*"] = concat(_st(*free), _st("d-1"))
    return parts


def prop31_nfa(drop: tuple = ()) -> Nfa:
    parts = prop31_parts()
    return union(*(n for name, n in parts.items() if name not in drop)).with_alphabet(A13_SYMBOLS)


def prop31_language(drop: tuple = ()) -> Regular:
    return Regular(prop31_nfa(drop))


def prop35_machine(with_omega: bool = True) -> OneCounterMachine:
    """{x,y,y',z,z'}* u p00 x* {y^n z^n, y'^n z'^n : n >= 0}, plus the word Omega.

    The counter holds n - 1 while reading the y-block; the last z of the
    block is the one read with a zero counter.
    """
    t = []
    for g in FREE_LETTERS:
        t += [("q0", g, "any", 0, "F"), ("F", g, "any", 0, "F")]
    t.append(("q0", "p00", "any", 0, "X"))
    if with_omega:
        t.append(("q0", "Omega", "any", 0, "W"))
    t.append(("X", "x", "any", 0, "X"))
    for y, z, tag in (("y", "z", ""), ("y'", "z'", "'")):
        Y, Z = "Y" + tag, "Z" + tag
        t += [
            ("X", y, "any", 0, Y),
            (Y, y, "any", 1, Y),
            (Y, z, "positive", -1, Z),
            (Y, z, "zero", 0, "E"),
            (Z, z, "positive", -1, Z),
            (Z, z, "zero", 0, "E"),
        ]
    states = {"q0", "F", "X", "W", "Y", "Z", "Y'", "Z'", "E"}
    return OneCounterMachine.build(states, A7_SYMBOLS, t, "q0", {"q0", "F", "X", "W", "E"})


def prop35_language(with_omega: bool = True) -> OneCounter:
    return OneCounter(prop35_machine(with_omega))


# candidates that are not cross-sections of F[T] --------------------------------

def _a7(*parts):
    return concat(*parts).with_alphabet(A7_SYMBOLS)


def _free_star():
    return Nfa.star_of(FREE_LETTERS, A7_SYMBOLS)


def _one(a):
    return Nfa.symbol(a, A7_SYMBOLS)


def _star(*s):
    return Nfa.star_of(s, A7_SYMBOLS)


def bad_candidates() -> dict:
    """Regular languages over A7 shipped as refutation targets."""
    head = [_free_star(), _one("Omega")]
    cands = {}
    cands["ys-then-zs"] = union(
        *head,
        _a7(_one("p00"), _star("x"), union(_star("y"), _star("y'")), union(_star("z"), _star("z'"))),
    )
    cands["y-star-z-star"] = union(*head, _a7(_one("p00"), _star("x"), _star("y"), _star("z")))
    cands["all-words"] = Nfa.universal(A7_SYMBOLS)
    return cands


SHIPPED = ("ys-then-zs", "y-star-z-star", "all-words")


def shipped_candidate_path(name: str):
    """Path of a bad candidate shipped as JSON package data."""
    from importlib.resources import files

    if name not in SHIPPED:
        raise ValueError(f"unknown candidate {name!r}")
    return files("xsec") / "data" / f"{name}.json"
