"""JSON Schemas for CLI result documents.

``SCHEMA_VERSION`` is bumped whenever any payload changes shape.
"""

SCHEMA_VERSION = 1

_RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
_NUMBER_OR_RATIONAL = {"oneOf": [{"type": "number"}, _RATIONAL]}
_BIGINT = {"type": "string", "pattern": r"^\d+$"}
_WEIGHTS = {"type": "array", "items": _NUMBER_OR_RATIONAL, "minItems": 1}

MANIFEST = {
    "type": "object",
    "required": ["command", "parameters", "seed", "version", "timestamp"],
    "properties": {
        "command": {"type": "string"},
        "parameters": {"type": "object"},
        "seed": {"type": ["integer", "null"], "minimum": 0},
        "version": {"type": "string"},
        "timestamp": {"type": "string"},
    },
    "additionalProperties": False,
}

PAYLOADS = {
    "weights": {
        "type": "object",
        "required": ["rule", "weights", "exact", "ancilla", "checks"],
        "properties": {
            "rule": {"enum": ["neutrality", "branch-count"]},
            "weights": _WEIGHTS,
            "exact": {"type": "boolean"},
            "ancilla": {"oneOf": [{"type": "null"},
                                  {"type": "array", "items": {"type": "integer"},
                                   "minItems": 2, "maxItems": 2}]},
            "checks": {"type": "array", "items": {
                "type": "object", "required": ["name", "passed"],
                "properties": {"name": {"type": "string"}, "passed": {"type": "boolean"}}}},
        },
    },
    "simulate": {
        "type": "object",
        "required": ["nTrials", "countPlus", "countMinus", "meanReward",
                     "fractionPlus", "oracle"],
        "properties": {
            "nTrials": {"type": "integer", "minimum": 1},
            "countPlus": {"type": "integer", "minimum": 0},
            "countMinus": {"type": "integer", "minimum": 0},
            "meanReward": {"type": "number"},
            "fractionPlus": {"type": "number", "minimum": 0, "maximum": 1},
            "oracle": {
                "type": "object",
                "required": ["distribution", "expectedMeanReward", "standardError",
                             "zScore", "within5Sigma"],
                "properties": {
                    "distribution": _WEIGHTS,
                    "expectedMeanReward": {"type": "number"},
                    "standardError": {"type": "number", "minimum": 0},
                    "zScore": {"type": ["number", "null"]},
                    "within5Sigma": {"type": "boolean"},
                },
            },
        },
    },
    "ledger": {
        "type": "object",
        "required": ["classes", "summary", "totals"],
        "properties": {
            "classes": {"type": "array", "items": {
                "type": "object",
                "required": ["m", "count", "perBranchWeight", "classWeight"],
                "properties": {
                    "m": {"type": "integer", "minimum": 0},
                    "count": _BIGINT,
                    "perBranchWeight": {"type": "string"},
                    "classWeight": _NUMBER_OR_RATIONAL,
                }}},
            "summary": {
                "type": "object",
                "required": ["nTrials", "cSquared", "bornMean", "bornMode", "bornModeTie",
                             "bornStd", "countMode", "countModeTie", "k",
                             "typicalityWindow", "bornMassInWindow",
                             "countFractionInWindow"],
            },
            "totals": {
                "type": "object",
                "required": ["countSum", "weightSum"],
                "properties": {"countSum": _BIGINT, "weightSum": _NUMBER_OR_RATIONAL},
            },
        },
    },
    "channel": {
        "type": "object",
        "required": ["symbolErrorRate", "alphabet", "symbols", "confusion"],
        "properties": {
            "symbolErrorRate": {"type": "number", "minimum": 0, "maximum": 1},
            "alphabet": {"type": "array", "items": {"type": "string"}},
            "symbols": {"type": "array", "items": {
                "type": "object",
                "required": ["position", "sent", "decoded", "m", "n", "thetaHat"],
            }},
            "confusion": {"type": "array", "items": {
                "type": "array", "items": {"type": "integer", "minimum": 0}}},
        },
    },
    "classical": {
        "type": "object",
        "required": ["game", "labels", "distribution"],
        "properties": {
            "game": {"type": "string"},
            "labels": {"type": "array", "items": {"type": "string"}},
            "distribution": _WEIGHTS,
            "value": {"oneOf": [{"type": "null"}, _NUMBER_OR_RATIONAL]},
            "monteCarlo": {"type": ["object", "null"]},
        },
    },
    "neutrality": {
        "type": "object",
        "required": ["process", "holds", "gap"],
        "properties": {
            "process": {"type": "string"},
            "holds": {"type": "boolean"},
            "gap": _NUMBER_OR_RATIONAL,
        },
    },
}


def document_schema(command: str) -> dict:
    return {
        "type": "object",
        "required": ["schemaVersion", "manifest", "payload"],
        "properties": {
            "schemaVersion": {"const": SCHEMA_VERSION},
            "manifest": MANIFEST,
            "payload": PAYLOADS[command],
        },
        "additionalProperties": False,
    }
