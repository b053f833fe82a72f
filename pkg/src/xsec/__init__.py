"""Cross-sections of monoids built from free-monoid actions, with bounded verification."""

from .instances import (
    A7_SYMBOLS,
    A13_SYMBOLS,
    bad_candidates,
    ft_eval,
    product_eval,
    prop31_language,
    prop31_nfa,
    prop35_language,
    prop35_machine,
)
from .monoid import (
    A7,
    A13,
    FT,
    IDENTITY,
    OMEGA,
    ActionSpec,
    Free,
    P,
    Point,
    ProductElement,
    closed_form_eval,
    enumerate_ball,
    eval_word_ft,
    eval_word_product,
    generic_mt,
    in_bset,
    mt_multiply,
    render,
)
from .pipeline import (
    Budget,
    Refutation,
    build_proof_gsms,
    normalize_pipeline,
    refute_regular_cross_section,
)
from .separation import Pu, Qu, build_sep_instance, builtin_K, extract_K, verify_sep_cross_section
from .verify import EvalMap, VerificationReport, verify_coverage, verify_cross_section, verify_injectivity

__version__ = "0.1.0"
