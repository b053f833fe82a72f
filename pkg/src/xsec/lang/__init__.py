from .et0l import Et0lSystem, et0l_generate
from .gsm import Gsm, gsm_apply_word, gsm_image
from .io import SchemaError, dump_machine, load_machine, machine_from_dict, machine_to_dict
from .nfa import (
    Nfa,
    PumpingError,
    complement,
    concat,
    determinize,
    hom_image,
    intersect,
    inverse_hom,
    prefix_closed,
    pump_decompose,
    regular_substitution,
    same_language,
    union,
)
from .ocm import OneCounterMachine, ocm_accepts
from .rep import (
    Et0l,
    HomImage,
    LanguageRep,
    OneCounter,
    Oracle,
    Regular,
    Union,
    image_under,
    shortlex,
    union_with_regular,
)


def nfa_accepts(nfa: Nfa, w) -> bool:
    return nfa.accepts(tuple(w))


def nfa_enumerate(nfa: Nfa, max_len: int) -> list:
    return nfa.enumerate(max_len)
