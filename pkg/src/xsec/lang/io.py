"""JSON (de)serialization for automata and machines.

Multi-character symbols such as ``p00`` or ``b'-1`` are atomic; words are
always JSON arrays of symbols.
"""
from __future__ import annotations

import json
from pathlib import Path

from .et0l import Et0lSystem
from .gsm import Gsm
from .nfa import Nfa, eliminate_epsilon
from .ocm import OneCounterMachine


class SchemaError(ValueError):
    pass


def _need(d, *keys):
    missing = [k for k in keys if k not in d]
    if missing:
        raise SchemaError(f"{d.get('type', 'machine')}: missing field(s) {', '.join(missing)}")


def nfa_from_dict(d) -> Nfa:
    _need(d, "alphabet", "states", "initial", "accepting", "transitions")
    trans = []
    for t in d["transitions"]:
        _need(t, "from", "symbol", "to")
        sym = t["symbol"]
        trans.append((t["from"], None if sym in (None, "") else sym, t["to"]))
    try:
        if any(s is None for _, s, _ in trans):
            return eliminate_epsilon(d["states"], d["alphabet"], trans, d["initial"], d["accepting"])
        return Nfa(d["states"], d["alphabet"], trans, d["initial"], d["accepting"])
    except (ValueError, TypeError) as exc:
        raise SchemaError(f"nfa: {exc}") from exc


def nfa_to_dict(n: Nfa) -> dict:
    n = n.relabel()
    return {
        "type": "nfa",
        "alphabet": sorted(n.alphabet),
        "states": sorted(n.states),
        "initial": sorted(n.initial),
        "accepting": sorted(n.accepting),
        "transitions": [{"from": p, "symbol": a, "to": q} for p, a, q in
                        sorted(n.transitions, key=lambda t: (t[0], t[1], t[2]))],
    }


def gsm_from_dict(d) -> Gsm:
    _need(d, "input_alphabet", "output_alphabet", "states", "initial", "accepting", "transitions")
    try:
        trans = [(t["from"], t["input"], tuple(t["output"]), t["to"]) for t in d["transitions"]]
        return Gsm.build(d["states"], d["input_alphabet"], d["output_alphabet"], trans,
                         d["initial"], d["accepting"], d.get("name", ""))
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"gsm: {exc}") from exc


def gsm_to_dict(g: Gsm) -> dict:
    return {
        "type": "gsm",
        "input_alphabet": sorted(g.input_alphabet),
        "output_alphabet": sorted(g.output_alphabet),
        "states": sorted(g.states, key=str),
        "initial": g.initial,
        "accepting": sorted(g.accepting, key=str),
        "transitions": [{"from": p, "input": a, "output": list(o), "to": q}
                        for p, a, o, q in g.transitions],
    }


def et0l_from_dict(d) -> Et0lSystem:
    _need(d, "alphabet", "axiom", "tables")
    try:
        tables = [[(p["lhs"], p["rhs"]) for p in t] for t in d["tables"]]
        return Et0lSystem.build(d["alphabet"], d["axiom"], tables, d.get("terminals"))
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"et0l: {exc}") from exc


def et0l_to_dict(s: Et0lSystem) -> dict:
    return {
        "type": "et0l",
        "alphabet": list(s.alphabet),
        "axiom": list(s.axiom),
        "tables": [[{"lhs": l, "rhs": list(r)} for l, r in t] for t in s.tables],
        "terminals": list(s.terminals),
    }


def ocm_from_dict(d) -> OneCounterMachine:
    _need(d, "alphabet", "states", "initial", "accepting", "transitions")
    try:
        trans = [(t["from"], t["symbol"], t["guard"], t["delta"], t["to"]) for t in d["transitions"]]
        return OneCounterMachine.build(d["states"], d["alphabet"], trans, d["initial"],
                                       d["accepting"], bool(d.get("zero_acceptance", False)))
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"ocm: {exc}") from exc


def ocm_to_dict(m: OneCounterMachine) -> dict:
    return {
        "type": "ocm",
        "alphabet": sorted(m.alphabet),
        "states": sorted(m.states, key=str),
        "initial": m.initial,
        "accepting": sorted(m.accepting, key=str),
        "zero_acceptance": m.zero_acceptance,
        "transitions": [{"from": p, "symbol": a, "guard": g, "delta": dl, "to": q}
                        for p, a, g, dl, q in m.transitions],
    }


_LOADERS = {"nfa": nfa_from_dict, "gsm": gsm_from_dict, "et0l": et0l_from_dict, "ocm": ocm_from_dict}
_DUMPERS = {Nfa: nfa_to_dict, Gsm: gsm_to_dict, Et0lSystem: et0l_to_dict, OneCounterMachine: ocm_to_dict}


def machine_from_dict(d):
    if not isinstance(d, dict) or d.get("type") not in _LOADERS:
        raise SchemaError(f"expected an object with type in {sorted(_LOADERS)}")
    return _LOADERS[d["type"]](d)


def machine_to_dict(m) -> dict:
    return _DUMPERS[type(m)](m)


def load_machine(path):
    """Load a machine from a JSON file; raises json.JSONDecodeError or SchemaError."""
    text = Path(path).read_text()
    return machine_from_dict(json.loads(text))


def dump_machine(m, path=None) -> str:
    text = json.dumps(machine_to_dict(m), indent=1)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text
