"""JSON file formats: lattices, sublattices, maps, group elements, reports."""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from urllib.parse import parse_qsl

from . import catalog
from .errors import InvalidInput
from .lattice import LieLattice, require_valid
from .padic import INF, QMatrix, to_fraction
from .stability import AutoMap, StabilityVerdict
from .sublattice import Sublattice
from .uniform import GroupElement


def rat(x) -> str:
    return str(Fraction(x))


def val(v):
    """Valuations serialise as integers, or the string "inf"."""
    return "inf" if v is INF else v


def matrix_json(m: QMatrix) -> list[list[str]]:
    return m.tolist()


def lattice_to_json(L: LieLattice) -> dict:
    out = {
        "name": L.name,
        "p": L.p,
        "dim": L.dim,
        "brackets": [
            {"i": i, "j": j, "coeffs": [rat(c) for c in coeffs]}
            for (i, j), coeffs in L.brackets.items()
        ],
    }
    if L.labels is not None:
        out["basis"] = list(L.labels)
    return out


def lattice_from_json(data: dict, p: int | None = None) -> LieLattice:
    try:
        brackets = {}
        for entry in data.get("brackets", []):
            key = (int(entry["i"]), int(entry["j"]))
            if key in brackets:
                raise InvalidInput(f"bracket {key} listed twice")
            brackets[key] = tuple(to_fraction(c) for c in entry["coeffs"])
        L = LieLattice(
            str(data.get("name", "lattice")),
            int(p if p is not None else data["p"]),
            int(data["dim"]),
            brackets,
            tuple(data["basis"]) if data.get("basis") is not None else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed lattice file: {exc}") from exc
    return require_valid(L)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False)


def _read_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc


def parse_lattice(source: str, p: int | None = None) -> LieLattice:
    """Read ``builtin:<name>[?k=v&...]`` or a lattice JSON file, then validate."""
    if source.startswith("builtin:"):
        ref = source[len("builtin:"):]
        name, _, query = ref.partition("?")
        params = dict(parse_qsl(query))
        if p is None:
            raise InvalidInput("built-in lattices need --p")
        return require_valid(catalog.builtin(name, p, **params))
    return lattice_from_json(_read_json(source), p)


_DIAG = re.compile(r"^\s*diag\((.*)\)\s*$")


def parse_matrix(text: str, dim: int | None = None) -> QMatrix:
    """A square matrix from ``diag(a,b,..)``, ``identity``, inline JSON rows, or a file.

    Files hold {"matrix": rows} or {"generators": columns}.
    """
    text = text.strip()
    m = _DIAG.match(text)
    if m:
        return QMatrix.diag(*[to_fraction(x) for x in m.group(1).split(",")])
    if text == "identity":
        if dim is None:
            raise InvalidInput("identity needs a known dimension")
        return QMatrix.identity(dim)
    if text.startswith("["):
        try:
            rows = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"bad inline matrix: {exc}") from exc
        return _matrix_from_rows(rows)
    data = _read_json(text)
    if isinstance(data, dict) and "generators" in data:
        return QMatrix.from_columns([[to_fraction(x) for x in col] for col in data["generators"]])
    if isinstance(data, dict) and "matrix" in data:
        return _matrix_from_rows(data["matrix"])
    raise InvalidInput(f"{text}: expected a 'matrix' or 'generators' key")


def _matrix_from_rows(rows) -> QMatrix:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise InvalidInput("matrix must be a list of rows")
    return QMatrix(rows)


def parse_vector(text: str) -> list[Fraction]:
    text = text.strip()
    if text.startswith("["):
        try:
            return [to_fraction(x) for x in json.loads(text)]
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"bad vector: {exc}") from exc
    return [to_fraction(x) for x in text.split(",")]


def sublattice_to_json(M: Sublattice) -> dict:
    return {"generators": [[rat(x) for x in col] for col in M.B.columns()]}


def automap_to_json(a: AutoMap) -> dict:
    return {"matrix": matrix_json(a.S), "verified": a.verified, "det_valuation": val(a.det_valuation)}


def element_to_json(g: GroupElement) -> dict:
    return {"coords": [str(c) for c in g.coords], "precision": g.precision}


def element_from_json(data: dict, p: int) -> GroupElement:
    return GroupElement.make(data["coords"], int(data["precision"]), p)


def _plain(v):
    if isinstance(v, Fraction):
        return rat(v)
    if v is INF:
        return "inf"
    return v


def verdict_to_json(v: StabilityVerdict) -> dict:
    out = {
        "status": v.status,
        "certificate": {k: _plain(x) for k, x in v.certificate.items()},
        "notes": v.notes,
    }
    if v.witness is not None:
        out["witness"] = automap_to_json(v.witness)
    return out
