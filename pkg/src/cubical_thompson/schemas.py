"""JSON schemas for the ``--json`` output of each command."""

from __future__ import annotations

NUM = {"type": "number"}
STR = {"type": "string"}
BOOL = {"type": "boolean"}
INT = {"type": "integer"}
NULLABLE_NUM = {"type": ["number", "null"]}


def _obj(props: dict, required: list | None = None) -> dict:
    return {
        "type": "object",
        "properties": props,
        "required": list(props) if required is None else required,
    }


BRACKET = _obj({"lower": NUM, "upper": NUM, "level": INT, "converged": BOOL})

RESULTS = {
    "reduce": _obj({"diagram": STR}),
    "compose": _obj({"diagram": STR}),
    "invert": _obj({"diagram": STR}),
    "cut": _obj({"diagram": STR}),
    "pl": _obj({"map": STR, "end_slopes": {"type": "array", "items": INT}, "irreducible": BOOL}),
    "distance": _obj({"bracket": BRACKET, "exact": BOOL}),
    "median": _obj({"distance": INT}, []),
    "project": _obj({"point": STR, "distance": NUM}),
    "translen": _obj({"formula": NUM, "formula_exact": BOOL}, ["formula", "formula_exact"]),
    "displace": _obj({"bracket": BRACKET}),
    "minvertex": _obj({"vertex": STR, "bracket": BRACKET, "searched": INT}),
    "classify": _obj({"classification": STR, "formula_length": NUM}, ["classification", "formula_length"]),
    "flat": _obj({"ok": BOOL, "displacements": {"type": "array", "items": NUM},
                  "pair_distances": {"type": "object"}, "commute": BOOL}),
    "ray": _obj({"corner_times": {"type": "array", "items": NUM}, "corners": {"type": "array", "items": STR}},
                ["corner_times", "corners"]),
    "angle": _obj({"angle": NUM, "cosine": NUM}),
    "act-flow": _obj({"flow": {"type": "object"}, "fixed": BOOL}),
    "profile": _obj({"ok": BOOL, "depth": INT, "family_size": INT, "violations": {"type": "array"}},
                    ["ok", "depth", "violations"]),
    "appendix": {"type": "object"},
    "eval": _obj({"value": STR}),
    "fixed": _obj({"fixed": BOOL}),
}

ENVELOPE = {
    "type": "object",
    "properties": {
        "status": {"enum": ["ok", "error", "budget_exceeded"]},
        "command": STR,
        "result": {"type": "object"},
        "error": STR,
        "position": {"type": ["integer", "null"]},
    },
    "required": ["status", "command"],
}


def schema_for(command: str) -> dict:
    env = {**ENVELOPE, "properties": dict(ENVELOPE["properties"])}
    if command in RESULTS:
        env["properties"]["result"] = RESULTS[command]
    return env
