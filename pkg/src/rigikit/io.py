"""Strict JSON file formats for motifs and finite frameworks.

Motif files::

    {
      "dimension": 2,
      "lattice": [[1.0, 0.0], [0.0, 1.0]],        # one generator per row
      "vertices": [[0.0, 0.0], [0.5, 0.0]],        # fractional coordinates
      "edges": [{"i": 0, "j": 1, "offset": [0, 0]}, ...]
    }

Finite graph files::

    {"vertices": [[x, y], ...], "edges": [[i, j], ...]}

Unknown keys are rejected so a typo cannot silently change a model.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .frameworks import FiniteFramework, Graph, Motif


class FileFormatError(ValueError):
    """Input file violates the documented schema."""


def _require_keys(obj: dict, required: set[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise FileFormatError(f"{what} must be a JSON object")
    missing = required - obj.keys()
    if missing:
        raise FileFormatError(f"{what} is missing keys: {sorted(missing)}")
    unknown = obj.keys() - required
    if unknown:
        raise FileFormatError(f"{what} has unknown keys: {sorted(unknown)}")


def motif_from_dict(data: dict) -> Motif:
    _require_keys(data, {"dimension", "lattice", "vertices", "edges"}, "motif")
    d = data["dimension"]
    if not isinstance(d, int) or d not in (2, 3):
        raise FileFormatError("dimension must be the integer 2 or 3")
    lattice = np.asarray(data["lattice"], dtype=float)
    if lattice.shape != (d, d):
        raise FileFormatError(f"lattice must be {d} generators of length {d}")
    edges = []
    for k, e in enumerate(data["edges"]):
        _require_keys(e, {"i", "j", "offset"}, f"edge #{k}")
        if not (isinstance(e["i"], int) and isinstance(e["j"], int)):
            raise FileFormatError(f"edge #{k}: i and j must be integers")
        off = e["offset"]
        if len(off) != d or not all(isinstance(o, int) for o in off):
            raise FileFormatError(f"edge #{k}: offset must be {d} integers")
        edges.append((e["i"], e["j"], tuple(off)))
    try:
        # Generators are stored one per row; internally columns multiply
        # fractional coordinates.
        return Motif(d, lattice.T, np.asarray(data["vertices"], dtype=float), tuple(edges))
    except ValueError as exc:
        raise FileFormatError(str(exc)) from exc


def motif_to_dict(motif: Motif) -> dict:
    return {
        "dimension": motif.dimension,
        "lattice": motif.lattice.T.tolist(),
        "vertices": motif.vertices.tolist(),
        "edges": [
            {"i": i, "j": j, "offset": list(off)} for i, j, off in motif.edges
        ],
    }


def framework_from_dict(data: dict) -> FiniteFramework:
    _require_keys(data, {"vertices", "edges"}, "framework")
    pts = np.asarray(data["vertices"], dtype=float)
    if pts.ndim != 2 or pts.shape[1] not in (2, 3):
        raise FileFormatError("vertices must be a list of 2D or 3D points")
    edges = []
    for k, e in enumerate(data["edges"]):
        if len(e) != 2 or not all(isinstance(v, int) for v in e):
            raise FileFormatError(f"edge #{k} must be a pair of vertex indices")
        edges.append((e[0], e[1]))
    try:
        return FiniteFramework(Graph(len(pts), tuple(edges)), pts, pts.shape[1])
    except ValueError as exc:
        raise FileFormatError(str(exc)) from exc


def framework_to_dict(fw: FiniteFramework) -> dict:
    return {
        "vertices": fw.placement.tolist(),
        "edges": [list(e) for e in fw.graph.edges],
    }


def load_motif(path: str | Path) -> Motif:
    with open(path, "r", encoding="utf-8") as fh:
        return motif_from_dict(json.load(fh))


def save_motif(motif: Motif, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(motif_to_dict(motif), fh, indent=2)
        fh.write("\n")


def load_framework(path: str | Path) -> FiniteFramework:
    with open(path, "r", encoding="utf-8") as fh:
        return framework_from_dict(json.load(fh))


def save_framework(fw: FiniteFramework, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(framework_to_dict(fw), fh, indent=2)
        fh.write("\n")
