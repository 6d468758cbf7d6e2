"""JSON Schemas for the documents printed by each CLI command."""

from __future__ import annotations

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
VALUATION = {"anyOf": [{"type": "integer"}, {"const": "inf"}]}
MATRIX = {"type": "array", "items": {"type": "array", "items": RATIONAL, "minItems": 1}, "minItems": 1}
VECTOR = {"type": "array", "items": RATIONAL}
TRI = {"anyOf": [{"type": "boolean"}, {"const": "indeterminate"}]}

SUBLATTICE = {
    "type": "object",
    "required": ["generators"],
    "properties": {"generators": MATRIX},
    "additionalProperties": False,
}

AUTOMAP = {
    "type": "object",
    "required": ["matrix", "verified", "det_valuation"],
    "properties": {"matrix": MATRIX, "verified": {"type": "boolean"}, "det_valuation": VALUATION},
}

LATTICE_FILE = {
    "type": "object",
    "required": ["name", "p", "dim", "brackets"],
    "properties": {
        "name": {"type": "string"},
        "p": {"type": "integer", "minimum": 2},
        "dim": {"type": "integer", "minimum": 1},
        "basis": {"type": "array", "items": {"type": "string"}},
        "brackets": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["i", "j", "coeffs"],
                "properties": {
                    "i": {"type": "integer", "minimum": 0},
                    "j": {"type": "integer", "minimum": 1},
                    "coeffs": VECTOR,
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

GROUP_ELEMENT = {
    "type": "object",
    "required": ["coords", "precision"],
    "properties": {"coords": VECTOR, "precision": {"type": "integer", "minimum": 1}},
}

VERDICT = {
    "type": "object",
    "required": ["status", "certificate", "notes"],
    "properties": {
        "status": {"enum": ["Stable", "Unstable", "Unknown"]},
        "certificate": {"type": "object"},
        "witness": AUTOMAP,
        "notes": {"type": "string"},
    },
}

ERROR = {
    "type": "object",
    "required": ["error"],
    "properties": {
        "error": {
            "type": "object",
            "required": ["code", "message"],
            "properties": {"code": {"type": "string"}, "message": {"type": "string"}},
        }
    },
}


def _doc(props: dict, required: list[str]) -> dict:
    base = {"command": {"type": "string"}, "source": {"type": "string"}}
    return {"type": "object", "required": ["command", "source", *required], "properties": {**base, **props}}


_SERIES = {
    "lower_central_ranks": {"type": "array", "items": {"type": "integer"}},
    "derived_ranks": {"type": "array", "items": {"type": "integer"}},
    "nilpotency_class": {"type": ["integer", "null"]},
    "solvable": {"type": "boolean"},
}
_KILLING = {"killing": MATRIX, "det_killing": RATIONAL, "vp_det_killing": VALUATION}
_SEMISIMPLE = {"semisimple": {"type": "boolean"}, "det_killing": RATIONAL, "vp_det_killing": VALUATION}
_DERIVATIONS = {
    "dim": {"type": "integer"},
    "nilpotent": {"type": "boolean"},
    "chain_length": {"type": "integer"},
    "lie_nilpotent": {"type": "boolean"},
    "basis": {"type": "array", "items": MATRIX},
}
_SIMPLICITY = {
    "semisimple": {"type": "boolean"},
    "centroid_dim": {"type": "integer"},
    "simple": TRI,
    "just_infinite": TRI,
}
_HNF_ITEM = {
    "type": "object",
    "required": ["hnf", "index_exponent"],
    "properties": {"hnf": MATRIX, "index_exponent": {"type": "integer"}, "subalgebra": {"type": "boolean"}},
}

COMMAND_SCHEMAS = {
    "validate": _doc({"valid": {"const": True}, "lattice": LATTICE_FILE}, ["valid"]),
    "killing": _doc(_KILLING, list(_KILLING)),
    "semisimple": _doc(_SEMISIMPLE, list(_SEMISIMPLE)),
    "powerful": _doc({"powerful": {"type": "boolean"}}, ["powerful"]),
    "series": _doc(_SERIES, list(_SERIES)),
    "derivations": _doc(_DERIVATIONS, list(_DERIVATIONS)),
    "simplicity": _doc(_SIMPLICITY, list(_SIMPLICITY)),
    "index": _doc(
        {"index_exponent": {"type": "integer", "minimum": 0},
         "smith_exponents": {"type": "array", "items": {"type": "integer"}}, "hnf": MATRIX},
        ["index_exponent", "smith_exponents", "hnf"],
    ),
    "gram": _doc({"gram": MATRIX}, ["gram"]),
    "iso-check": _doc(
        {"index_m": {"type": "integer"}, "index_n": {"type": "integer"}, "equal": {"type": "boolean"},
         "ratio_valuation": {"type": "integer"}, "semisimple": {"type": "boolean"},
         "gram_identity": {"type": ["boolean", "null"]}, "image_basis": MATRIX},
        ["index_m", "index_n", "equal", "ratio_valuation", "gram_identity"],
    ),
    "serre": _doc(
        {"det_valuation": {"type": "integer"}, "norm_det": RATIONAL, "passes": {"type": "boolean"},
         "eigen_valuations": VECTOR},
        ["det_valuation", "norm_det", "passes", "eigen_valuations"],
    ),
    "stable": {**_doc(VERDICT["properties"], VERDICT["required"])},
    "witness-search": _doc(
        {"found": {"type": "boolean"}, "strategy": {"type": ["string", "null"]},
         "examined": {"type": "integer"}, "witness": AUTOMAP},
        ["found", "examined"],
    ),
    "enum": _doc(
        {"p": {"type": "integer"}, "k": {"type": "integer"}, "count": {"type": "integer"},
         "counts": {"type": "object", "additionalProperties": {"type": "integer"}},
         "subalgebra_count": {"type": "integer"}, "sublattices": {"type": "array", "items": _HNF_ITEM}},
        ["count", "counts", "sublattices"],
    ),
    "classify": _doc(
        {"precision": {"type": "integer"}, "method": {"type": "string"},
         "subalgebras": {"type": "array", "items": _HNF_ITEM},
         "classes": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
         "inconclusive": {"type": "array", "items": {"type": "integer"}}},
        ["precision", "method", "classes"],
    ),
    "oracle-check": _doc(
        {"violation_count": {"type": "integer"}, "method": {"type": "string"},
         "violations": {"type": "array", "items": {
             "type": "object",
             "required": ["M", "N", "phi", "index_m", "index_n"],
             "properties": {"M": SUBLATTICE, "N": SUBLATTICE, "phi": MATRIX,
                            "index_m": {"type": "integer"}, "index_n": {"type": "integer"}},
         }}},
        ["violation_count", "violations", "method"],
    ),
    "bch": _doc({"product": GROUP_ELEMENT}, ["product"]),
    "group-index": _doc(
        {"group_count": {"type": "integer"}, "lattice_exponent": {"type": "integer"},
         "lattice_index": {"type": "integer"}, "subgroup_order": {"type": "integer"},
         "agree": {"type": "boolean"}},
        ["group_count", "lattice_exponent", "agree"],
    ),
    "report": _doc(
        {"lattice": LATTICE_FILE, "stability": VERDICT, "series": {"type": "object"},
         "killing": {"type": "object"}, "simplicity": {"type": "object"}},
        ["lattice", "killing", "semisimple", "powerful", "series", "derivations", "simplicity", "stability"],
    ),
}
