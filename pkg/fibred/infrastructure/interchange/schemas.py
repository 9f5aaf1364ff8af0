"""
JSON Schemas of the interchange documents.

Every document is a mapping with a `kind` tag. Tables keyed by identifiers are
mappings; tables keyed by pairs or triples are lists of rows whose last entry is
the value.
"""

from typing import Any, Dict

from jsonschema import Draft202012Validator

NAME = {"type": "string"}
IDENT = {"type": "string"}


def rows(width: int) -> Dict[str, Any]:
    return {
        "type": "array",
        "items": {
            "type": "array",
            "items": IDENT,
            "minItems": width,
            "maxItems": width,
        },
    }


def record(required, **properties) -> Dict[str, Any]:
    return {
        "type": "object",
        "required": list(required),
        "properties": properties,
        "additionalProperties": False,
    }


def keyed(schema: Dict[str, Any]) -> Dict[str, Any]:
    return {"type": "object", "additionalProperties": schema}


def nullable(schema: Dict[str, Any]) -> Dict[str, Any]:
    return {"anyOf": [{"type": "null"}, schema]}


FINCAT = record(
    ["objects", "morphisms", "identity", "compose"],
    name=NAME,
    objects={"type": "array", "items": IDENT, "uniqueItems": True},
    morphisms=rows(3),
    identity=rows(2),
    compose=rows(3),
)

TABLE = record(["objects", "morphisms"], name=NAME, objects=rows(2), morphisms=rows(2))

FUNCTOR = record(
    ["source", "target", "objects", "morphisms"],
    name=NAME,
    source={"$ref": "#/$defs/fincat"},
    target={"$ref": "#/$defs/fincat"},
    objects=rows(2),
    morphisms=rows(2),
)

NATTRANS = record(
    ["source", "target", "components"],
    name=NAME,
    source={"$ref": "#/$defs/functor"},
    target={"$ref": "#/$defs/functor"},
    components=rows(2),
)

TENSOR = record(["objects", "morphisms"], name=NAME, objects=rows(3), morphisms=rows(3))

MONOIDAL = record(
    ["base", "tensor", "unit", "associator", "left_unitor", "right_unitor"],
    name=NAME,
    base={"$ref": "#/$defs/fincat"},
    tensor={"$ref": "#/$defs/tensor"},
    unit=IDENT,
    associator=rows(4),
    left_unitor=rows(2),
    right_unitor=rows(2),
    braiding=nullable(rows(3)),
    symmetric={"type": "boolean"},
)

INDEXED = record(
    ["base", "variance", "fibres", "reindex", "compositor", "unitor"],
    name=NAME,
    base={"$ref": "#/$defs/fincat"},
    variance={"enum": ["contravariant", "covariant"]},
    strict={"type": "boolean"},
    fibres=keyed({"$ref": "#/$defs/fincat"}),
    reindex=keyed({"$ref": "#/$defs/table"}),
    compositor={
        "type": "array",
        "items": record(
            ["g", "f", "components"], g=IDENT, f=IDENT, components=rows(2)
        ),
    },
    unitor=keyed(rows(2)),
)


def cells(keys, width: int) -> Dict[str, Any]:
    fields = {key: IDENT for key in keys}
    return {
        "type": "array",
        "items": record([*keys, "cells"], cells=rows(width), **fields),
    }


LAX_MONOIDAL = record(
    [
        "carrier",
        "base_monoidal",
        "laxator",
        "laxator_cells",
        "unit_obj",
        "omega",
        "xi",
        "zeta",
    ],
    name=NAME,
    carrier={"$ref": "#/$defs/indexed"},
    base_monoidal={"$ref": "#/$defs/monoidal"},
    laxator={
        "type": "array",
        "items": record(
            ["x", "y", "objects", "morphisms"],
            name=NAME,
            x=IDENT,
            y=IDENT,
            objects=rows(3),
            morphisms=rows(3),
        ),
    },
    laxator_cells=cells(["f", "g"], 3),
    unit_obj=IDENT,
    omega=cells(["x", "y", "z"], 4),
    xi=keyed(rows(2)),
    zeta=keyed(rows(2)),
    braid_cell=nullable(cells(["x", "y"], 3)),
)

FIBRATION = record(
    ["total", "base", "projection", "cleavage"],
    name=NAME,
    direction={"enum": ["fibration", "opfibration"]},
    split={"type": "boolean"},
    total={"$ref": "#/$defs/fincat"},
    base={"$ref": "#/$defs/fincat"},
    projection={"$ref": "#/$defs/table"},
    cleavage=rows(3),
)

MONOIDAL_FIBRATION = record(
    ["carrier", "total_monoidal", "base_monoidal"],
    name=NAME,
    carrier={"$ref": "#/$defs/fibration"},
    total_monoidal={"$ref": "#/$defs/monoidal"},
    base_monoidal={"$ref": "#/$defs/monoidal"},
)

STRUCTURE = record(
    ["laxator", "unit_mor"],
    laxator=rows(3),
    unit_mor=IDENT,
    strength={"enum": ["lax", "strong", "strict"]},
)

FIBREWISE = record(
    ["carrier", "per_fibre", "reindex_monoidal"],
    name=NAME,
    carrier={"$ref": "#/$defs/indexed"},
    per_fibre=keyed({"$ref": "#/$defs/fibre_monoidal"}),
    reindex_monoidal=keyed(STRUCTURE),
    skipped={"type": "array", "items": IDENT},
    base_monoidal=nullable({"$ref": "#/$defs/monoidal"}),
)

# A monoidal structure on a fibre takes its category from the carrier.
FIBRE_MONOIDAL = {
    **MONOIDAL,
    "required": [key for key in MONOIDAL["required"] if key != "base"],
    "properties": {k: v for k, v in MONOIDAL["properties"].items() if k != "base"},
}

REPORT = record(
    ["subject", "passed", "checked", "violations"],
    subject={"type": "string"},
    passed={"type": "boolean"},
    checked={"type": "array", "items": {"type": "string"}},
    violations={
        "type": "array",
        "items": record(
            ["law", "witness", "message"],
            law={"type": "string"},
            witness={"type": "array", "items": {"type": "string"}},
            message={"type": "string"},
        ),
    },
    notes={"type": "array", "items": {"type": "string"}},
    instances={"type": "integer", "minimum": 0},
    skipped=keyed({"type": "integer", "minimum": 0}),
)

DEFINITIONS = {
    "fincat": FINCAT,
    "table": TABLE,
    "functor": FUNCTOR,
    "nattrans": NATTRANS,
    "tensor": TENSOR,
    "monoidal": MONOIDAL,
    "fibre_monoidal": FIBRE_MONOIDAL,
    "indexed": INDEXED,
    "lax_monoidal": LAX_MONOIDAL,
    "fibration": FIBRATION,
    "monoidal_fibration": MONOIDAL_FIBRATION,
    "fibrewise": FIBREWISE,
    "report": REPORT,
}

KINDS = (
    "fincat",
    "functor",
    "nattrans",
    "monoidal",
    "indexed",
    "lax_monoidal",
    "fibration",
    "monoidal_fibration",
    "fibrewise",
    "report",
)


def document_schema(kind: str) -> Dict[str, Any]:
    """The schema of a whole document: the body of `kind` plus the kind tag."""
    body = DEFINITIONS[kind]
    return {
        **body,
        "$defs": DEFINITIONS,
        "required": ["kind", *body["required"]],
        "properties": {**body["properties"], "kind": {"const": kind}},
    }


VALIDATORS = {kind: Draft202012Validator(document_schema(kind)) for kind in KINDS}
