"""Command-line driver.

Exit status: 0 when the check passes (or a requested refutation is found),
1 when it fails, 2 on unusable input.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from .instances import (
    SHIPPED,
    ft_eval,
    product_eval,
    prop31_language,
    prop35_language,
    shipped_candidate_path,
)
from .lang.et0l import Et0lSystem
from .lang.io import SchemaError, load_machine
from .lang.nfa import Nfa, prefix_closed
from .lang.rep import Et0l
from .pipeline import Budget, normalize_pipeline, random_candidate, refute_regular_cross_section, shape_violations
from .separation import (
    anbncn_oracle,
    build_sep_instance,
    builtin_K,
    et0l_L2_system,
    et0l_L3_system,
    extract_K,
    load_sep_descriptor,
    verify_sep_cross_section,
    www_oracle,
)
from .verify import verify_cross_section

DEFAULTS = {"radius": 4, "search_len": 12, "max_len": 12}
# the separation monoids have far more point words per length
SEPARATE_DEFAULTS = {"radius": 4, "search_len": 8, "max_len": 8}


class InputError(Exception):
    pass


def _positive(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def word_text(w) -> str:
    return " ".join(w) if w else "ε"


def _load(path, expect=None):
    try:
        m = load_machine(path)
    except FileNotFoundError as exc:
        raise InputError(f"{path}: no such file") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    except SchemaError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if expect is not None and not isinstance(m, expect):
        raise InputError(f"{path}: expected a {expect.__name__} description")
    return m


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise InputError(f"{path}: no such file") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _candidate(ref) -> Nfa:
    if ref in SHIPPED:
        ref = shipped_candidate_path(ref)
    nfa = _load(ref, Nfa)
    extra = set(nfa.alphabet) - set(ft_eval().alphabet)
    if extra:
        raise InputError(f"{ref}: symbols outside A7: {sorted(extra)}")
    return nfa


def _bounds(args, defaults):
    return {k: getattr(args, k) if getattr(args, k) is not None else v for k, v in defaults.items()}


# commands ------------------------------------------------------------------

def cmd_verify_builtin(args):
    b = _bounds(args, DEFAULTS)
    if args.name == "prop31":
        lang, ev = prop31_language(), product_eval()
    else:
        lang, ev = prop35_language(), ft_eval()
    t = time.perf_counter()
    report = verify_cross_section(lang, ev, b["radius"], b["search_len"], b["max_len"])
    out = {"command": "verify-builtin", "instance": args.name, **report.to_dict()}
    if args.name == "prop31":
        out["prefix_closed"] = prefix_closed(lang.nfa)
        if not out["prefix_closed"]:
            out["status"] = "fail"
    out["seconds"] = round(time.perf_counter() - t, 3)
    return out, out["status"] == "pass"


def cmd_refute(args):
    cand = _candidate(args.nfa)
    budget = Budget(evaluations=args.budget, max_len=args.max_len or DEFAULTS["max_len"],
                    radius=args.radius or DEFAULTS["radius"])
    res = refute_regular_cross_section(cand, budget)
    return {"command": "refute", "candidate": str(args.nfa), **res.to_dict()}, res.found


def cmd_pipeline(args):
    cands = []
    if args.nfa:
        cands.append((str(args.nfa), _candidate(args.nfa)))
    else:
        rng = random.Random(args.seed)
        cands += [(f"random-{i}", random_candidate(rng, rng.randint(2, 6))) for i in range(args.count)]
    rows = []
    for name, c in cands:
        stages = normalize_pipeline(c)
        bad = shape_violations(stages[-1])
        row = {"candidate": name, "stage_states": [len(c)] + [len(s.trim()) for s in stages],
               "shape_ok": bad.is_empty()}
        if not row["shape_ok"]:
            row["violation"] = list(bad.enumerate(args.max_len or DEFAULTS["max_len"])[:1][0])
        if args.nfa:
            row["L4_sample"] = [list(w) for w in stages[-1].enumerate(args.max_len or 8)[:20]]
        rows.append(row)
    ok = all(r["shape_ok"] for r in rows)
    out = {"command": "pipeline", "status": "pass" if ok else "fail", "seed": args.seed, "results": rows}
    return out, ok


def cmd_et0l(args):
    n = args.max_len or DEFAULTS["max_len"]
    ref = args.system
    oracle = None
    if ref == "builtin:l2":
        sys_, oracle = et0l_L2_system(), www_oracle()
    elif ref == "builtin:l3":
        sys_, oracle = et0l_L3_system(), anbncn_oracle(0)
    elif ref.startswith("builtin:"):
        raise InputError(f"unknown built-in system {ref!r}; use builtin:l2 or builtin:l3")
    else:
        sys_ = _load(ref, Et0lSystem)
    words = Et0l(sys_).enumerate(n)
    out = {"command": "et0l", "system": ref, "max_len": n, "words": [list(w) for w in words]}
    ok = True
    if oracle is not None:
        expected = oracle.enumerate(n)
        ok = words == expected
        out["matches_definition"] = ok
    out["status"] = "pass" if ok else "fail"
    return out, ok


def _sep_source(ref):
    try:
        return builtin_K(ref)
    except ValueError:
        pass
    if not Path(ref).exists():
        raise InputError(f"{ref}: neither a built-in K nor a file")
    d = _read_json(ref)
    try:
        if isinstance(d, dict) and "K" in d:
            return load_sep_descriptor(d, Path(ref).parent)
        return load_sep_descriptor({"K": {"kind": d.get("type"), "name_or_file": d}})
    except (SchemaError, ValueError, AttributeError) as exc:
        raise InputError(f"{ref}: {exc}") from exc


def cmd_separate(args):
    b = _bounds(args, SEPARATE_DEFAULTS)
    B, K = _sep_source(args.k)
    try:
        inst = build_sep_instance(B, K)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    report = verify_sep_cross_section(inst, b["radius"], b["search_len"], b["max_len"])
    n = args.extract_len
    got, want = extract_K(inst.L_K, n), K.enumerate(n)
    out = {"command": "separate", "K": args.k, "B": list(B), **report.to_dict()}
    out["recovery"] = {"max_len": n, "equal": got == want, "words": [list(w) for w in got]}
    ok = report.passed and got == want
    out["status"] = "pass" if ok else report.status if not report.passed else "fail"
    return out, ok


def cmd_extract_k(args):
    B, K = _sep_source(args.instance)
    inst = build_sep_instance(B, K)
    lang = inst.L_K
    if args.lang:
        from .lang.rep import Regular

        lang = Regular(_load(args.lang, Nfa))
    n = args.max_len or 9
    words = extract_K(lang, n, B)
    out = {"command": "extract-k", "instance": args.instance, "max_len": n,
           "words": [list(w) for w in words], "matches_K": words == K.enumerate(n)}
    out["status"] = "pass"
    return out, True


# entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--radius", type=_positive)
    common.add_argument("--search-len", type=_positive)
    common.add_argument("--max-len", type=_positive)
    common.add_argument("--budget", type=_positive, default=200_000, help="evaluation budget for refute")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="xsec", description="Bounded cross-section verification.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-builtin", parents=[common], help="check a built-in cross-section")
    s.add_argument("name", choices=("prop31", "prop35"))
    s.set_defaults(func=cmd_verify_builtin)

    s = sub.add_parser("refute", parents=[common], help="refute a regular candidate for F[T]")
    s.add_argument("--nfa", required=True, help=f"NFA JSON file, or one of {', '.join(SHIPPED)}")
    s.set_defaults(func=cmd_refute)

    s = sub.add_parser("pipeline", parents=[common], help="run the four normalizing passes")
    s.add_argument("--nfa", help="NFA JSON file; omitted: random candidates")
    s.add_argument("--count", type=_positive, default=100)
    s.set_defaults(func=cmd_pipeline)

    s = sub.add_parser("et0l", parents=[common], help="enumerate an ET0L system")
    s.add_argument("--system", required=True, help="ET0L JSON file, builtin:l2 or builtin:l3")
    s.set_defaults(func=cmd_et0l)

    s = sub.add_parser("separate", parents=[common], help="check the separating cross-section for K")
    s.add_argument("--k", required=True, help="built-in name, K machine file or instance descriptor")
    s.add_argument("--extract-len", type=_positive, default=9)
    s.set_defaults(func=cmd_separate)

    s = sub.add_parser("extract-k", parents=[common], help="read K back off a language over A")
    s.add_argument("--instance", required=True, help="built-in name or instance descriptor")
    s.add_argument("--lang", help="NFA over A to extract from (default: L_K)")
    s.set_defaults(func=cmd_extract_k)
    return p


def _text(out) -> str:
    lines = [f"{out['command']}: {out['status']}"]
    for key in ("instance", "candidate", "system", "K", "prefix_closed", "matches_definition",
                "matches_K", "seed"):
        if key in out:
            lines.append(f"  {key}: {out[key]}")
    if "collisions" in out:
        lines.append(f"  collisions: {len(out['collisions'])}  missing: {len(out['missing'])}")
        for c in out["collisions"][:10]:
            lines.append(f"    {word_text(c['w1'])} = {word_text(c['w2'])} -> {c['element']}")
        for m in out["missing"][:10]:
            lines.append(f"    missing {m['element']} (e.g. {word_text(m['witness'])})")
        lines.append("  stats: " + ", ".join(f"{k}={v}" for k, v in out["stats"].items()))
    if out.get("refutation"):
        r = out["refutation"]
        lines.append(f"  {r['kind']} via {r['strategy']}: {r['element']}")
        for w in r["words"]:
            lines.append(f"    {word_text(w) if len(w) <= 40 else word_text(w[:40]) + f' ... ({len(w)} letters)'}")
        lines += [f"    {t}" for t in r["trace"]]
    if "results" in out:
        bad = [r for r in out["results"] if not r["shape_ok"]]
        lines.append(f"  candidates: {len(out['results'])}, shape violations: {len(bad)}")
        for r in out["results"][:5]:
            lines.append(f"    {r['candidate']}: states {r['stage_states']}")
    if "recovery" in out:
        out = {**out, "words": out["recovery"]["words"]}
        lines.append(f"  recovery equal: {out['recovery']['equal']}")
    if "words" in out:
        lines.append(f"  words ({len(out['words'])}):")
        lines += [f"    {word_text(w)}" for w in out["words"]]
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out, ok = args.func(args)
    except InputError as exc:
        if args.format == "json":
            print(json.dumps({"command": args.command, "status": "input-error", "error": str(exc)}))
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(out) if args.format == "json" else _text(out))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
