"""JSON schemas for every report the command line prints.

Rationals are strings (``"3"``, ``"-7/2"``) so no precision is lost.
"""

from __future__ import annotations

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/[1-9]\d*)?$"}
PERMUTATION = {"type": "array", "items": {"type": "integer", "minimum": 1}}

WITNESS = {
    "type": "object",
    "required": ["indices", "inequality", "lhs", "relation", "rhs", "constant"],
    "properties": {
        "indices": {"type": "array", "items": {"type": "integer"}},
        "inequality": {"type": "string"},
        "lhs": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "relation": {"enum": ["<=", ">=", "=="]},
        "rhs": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
        "constant": RATIONAL,
    },
}

ERROR = {
    "type": "object",
    "required": ["error"],
    "properties": {
        "error": {
            "type": "object",
            "required": ["type", "message"],
            "properties": {
                "type": {"type": "string"},
                "message": {"type": "string"},
                "path": {"type": "string"},
                "line": {"type": "integer", "minimum": 1},
                "column": {"type": "integer", "minimum": 1},
                "cell": {"type": "array", "items": {"type": "integer"}},
            },
        }
    },
}

CLASSIFY = {
    "type": "object",
    "required": ["n", "classes"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "classes": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["verdict"],
                "properties": {
                    "verdict": {"enum": ["yes", "no", "not-applicable"]},
                    "witness": WITNESS,
                    "reason": {"type": "string"},
                    "profile": {"type": "object"},
                    "blocks": {"type": "array"},
                    "cdw": {"type": "boolean"},
                    "certificate": {"type": "object"},
                },
            },
        },
    },
}

_TERM = {
    "type": "object",
    "required": ["weight", "blocks", "cdw"],
    "properties": {
        "weight": RATIONAL,
        "blocks": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
        "cdw": {"type": "boolean"},
        "label": {"type": "string"},
    },
}

DECOMPOSE = {
    "type": "object",
    "required": ["mode", "n", "verdict"],
    "properties": {
        "mode": {"enum": ["kalmanson", "robinson-kalmanson", "cdw", "benevolent"]},
        "n": {"type": "integer", "minimum": 1},
        "verdict": {"enum": ["yes", "no"]},
        "reason": {"type": "string"},
        "witness": WITNESS,
        "violated_pair": {"type": "array", "items": {"type": "integer"}},
        "decomposition": {
            "type": "object",
            "properties": {
                "offset": RATIONAL,
                "terms": {"type": "array", "items": _TERM},
                "residual_gammas": {"type": "array", "items": RATIONAL},
                "paths": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
                "gamma": {"type": "array", "items": RATIONAL},
            },
        },
        "reconstruction": {
            "type": "object",
            "required": ["sha256", "matches_input"],
            "properties": {
                "sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
                "matches_input": {"type": "boolean"},
                "compared": {"enum": ["all entries", "off-diagonal entries"]},
            },
        },
    },
}

_ORACLE = {
    "type": "object",
    "required": ["permutation", "value", "agree", "permutations_checked"],
    "properties": {
        "permutation": PERMUTATION,
        "value": RATIONAL,
        "agree": {"type": "boolean"},
        "permutations_checked": {"type": "integer"},
    },
}

SOLVE = {
    "type": "object",
    "required": ["n", "case", "permutation", "value"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "case": {"type": ["string", "null"]},
        "hypotheses": {"type": "string"},
        "permutation": {"anyOf": [PERMUTATION, {"type": "null"}]},
        "value": {"anyOf": [RATIONAL, {"type": "null"}]},
        "evidence": {"type": "object"},
        "oracle": _ORACLE,
    },
}

VERIFY = {**SOLVE, "required": SOLVE["required"] + ["oracle"]}

GENERATE = {
    "type": "object",
    "required": ["class", "n", "seed", "spec"],
    "properties": {
        "class": {"type": "string"},
        "n": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "spec": {"type": "object"},
        "output": {"type": "string"},
        "matrix": {"type": "string"},
    },
}

SCHEMAS = {
    "classify": CLASSIFY,
    "decompose": DECOMPOSE,
    "solve": SOLVE,
    "verify": VERIFY,
    "generate": GENERATE,
    "error": ERROR,
}
