"""Schema-versioned JSON for lattices, codes, Majorana layouts and demo reports."""

from __future__ import annotations

import json
from typing import Any

from .code import MatchingCode, build
from .lattice import Edge, Lattice, Matching
from .pauli import PauliOperator

LATTICE_SCHEMA = "matchcodes.lattice/1"
CODE_SCHEMA = "matchcodes.code/1"
LAYOUT_SCHEMA = "matchcodes.layout/1"
REPORT_SCHEMA = "matchcodes.demo_report/1"


class SchemaError(ValueError):
    pass


def _expect(doc: Any, schema: str, keys) -> dict:
    if not isinstance(doc, dict):
        raise SchemaError("document is not a JSON object")
    if doc.get("schema") != schema:
        raise SchemaError(f"expected schema {schema!r}, found {doc.get('schema')!r}")
    missing = [k for k in keys if k not in doc]
    if missing:
        raise SchemaError(f"{schema}: missing keys {missing}")
    return doc


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from None


# -- lattice ------------------------------------------------------------------

def lattice_to_dict(lat: Lattice) -> dict:
    return {
        "schema": LATTICE_SCHEMA,
        "name": lat.name,
        "dims": list(lat.dims),
        "boundary_kind": lat.boundary_kind,
        "coords": [list(p) for p in lat.coords],
        "edges": [[e.u, e.v, e.label] for e in lat.edges],
        "faces": [list(f) for f in lat.faces],
        "roles": list(lat.roles),
        "cells": [list(c) for c in lat.cells],
        "face_types": None if lat.face_types is None else list(lat.face_types),
        "periods": None if lat.periods is None else [list(p) for p in lat.periods],
    }


def lattice_from_dict(doc: dict) -> Lattice:
    _expect(doc, LATTICE_SCHEMA, ["name", "dims", "boundary_kind", "coords", "edges", "faces"])
    try:
        return Lattice(
            coords=[tuple(map(float, p)) for p in doc["coords"]],
            edges=[Edge(int(u), int(v), str(lab)) for u, v, lab in doc["edges"]],
            faces=[tuple(int(e) for e in f) for f in doc["faces"]],
            boundary_kind=doc["boundary_kind"],
            name=doc["name"],
            dims=tuple(doc["dims"]),
            roles=list(doc.get("roles") or []),
            cells=[tuple(c) for c in doc.get("cells") or []],
            face_types=doc.get("face_types"),
            periods=None if doc.get("periods") is None else tuple(tuple(p) for p in doc["periods"]),
        )
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad lattice document: {exc}") from None


# -- matching / code ------------------------------------------------------------

def matching_to_list(m: Matching) -> list:
    return [[a, b, list(path)] for (a, b), path in sorted(m.pairs.items())]


def matching_from_list(items) -> Matching:
    try:
        return Matching({(int(a), int(b)): tuple(int(e) for e in path) for a, b, path in items})
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad matching: {exc}") from None


def code_to_dict(code: MatchingCode) -> dict:
    return {
        "schema": CODE_SCHEMA,
        "lattice": lattice_to_dict(code.lattice),
        "matching": matching_to_list(code.matching),
        "plaquette_ops": [p.to_compact() for p in code.plaquette_ops],
        "string_ops": [[a, b, code.string_ops[(a, b)].to_compact()] for a, b in code.pair_order],
        "sign_fixes": list(code.sign_fixes),
    }


def code_from_dict(doc: dict) -> MatchingCode:
    _expect(doc, CODE_SCHEMA, ["lattice", "matching", "plaquette_ops", "string_ops"])
    lat = lattice_from_dict(doc["lattice"])
    code = build(lat, matching_from_list(doc["matching"]))
    plaq = [PauliOperator.from_compact(s) for s in doc["plaquette_ops"]]
    strings = {(int(a), int(b)): PauliOperator.from_compact(s) for a, b, s in doc["string_ops"]}
    if len(plaq) != len(code.plaquette_ops) or set(strings) != set(code.string_ops):
        raise SchemaError("stored operators do not match the lattice and matching")
    for a, b in zip(plaq, code.plaquette_ops):
        if not a.same_word(b):
            raise SchemaError("stored plaquette operator has the wrong support")
    for p, s in strings.items():
        if not s.same_word(code.string_ops[p]):
            raise SchemaError("stored string operator has the wrong support")
    code.plaquette_ops = plaq
    code.string_ops = strings
    code.sign_fixes = list(doc.get("sign_fixes", []))
    return code


# -- layout -----------------------------------------------------------------------

def layout_to_dict(layout) -> dict:
    return {
        "schema": LAYOUT_SCHEMA,
        "code": code_to_dict(layout.code),
        "d": layout.d,
        "line_row": layout.line_row,
        "flagged_links": list(layout.flagged_links),
        "creation_paths": {str(k): list(v) for k, v in sorted(layout.creation_paths.items())},
        "parity_paths": {str(k): list(v) for k, v in sorted(layout.parity_paths.items())},
        "current_matching": matching_to_list(layout.current_matching),
        "majorana_positions": list(layout.majorana_positions),
        "above": sorted(layout.above),
        "fused": {str(k): v for k, v in sorted(layout.fused.items())},
    }


def layout_from_dict(doc: dict):
    from .majorana import MajoranaLayout

    _expect(doc, LAYOUT_SCHEMA, ["code", "d", "line_row", "flagged_links", "creation_paths",
                                 "parity_paths", "current_matching", "majorana_positions"])
    return MajoranaLayout(
        code=code_from_dict(doc["code"]),
        d=int(doc["d"]),
        line_row=int(doc["line_row"]),
        flagged_links=[int(e) for e in doc["flagged_links"]],
        creation_paths={int(k): tuple(v) for k, v in doc["creation_paths"].items()},
        parity_paths={int(k): tuple(v) for k, v in doc["parity_paths"].items()},
        current_matching=matching_from_list(doc["current_matching"]),
        majorana_positions=[int(v) for v in doc["majorana_positions"]],
        above=frozenset(int(v) for v in doc.get("above", [])),
        fused={int(k): int(v) for k, v in doc.get("fused", {}).items()},
    )


# -- reports ------------------------------------------------------------------------

_REPORT_KEYS = ["state_in", "mode", "shots", "accepted", "freq_piA", "freq_piB", "deterministic_flags"]


def report_from_dict(doc: dict) -> dict:
    _expect(doc, REPORT_SCHEMA, ["seed", "mode", "shots", "reports"])
    for rep in doc["reports"]:
        if not isinstance(rep, dict) or any(k not in rep for k in _REPORT_KEYS):
            raise SchemaError("demo report entry is missing fields")
    return doc


# -- text helpers ---------------------------------------------------------------------

def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def load_code(text: str) -> MatchingCode:
    return code_from_dict(_loads(text))


def load_lattice(text: str) -> Lattice:
    return lattice_from_dict(_loads(text))


def load_layout(text: str):
    return layout_from_dict(_loads(text))


def load_report(text: str) -> dict:
    return report_from_dict(_loads(text))


def load_any(text: str):
    doc = _loads(text)
    schema = doc.get("schema") if isinstance(doc, dict) else None
    loaders = {LATTICE_SCHEMA: lattice_from_dict, CODE_SCHEMA: code_from_dict,
               LAYOUT_SCHEMA: layout_from_dict, REPORT_SCHEMA: report_from_dict}
    if schema not in loaders:
        raise SchemaError(f"unknown schema {schema!r}")
    return loaders[schema](doc)
