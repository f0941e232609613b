"""Built-in frameworks and crystal motifs.

Every motif is stored as a plain dict in the same schema as the motif file
format and validated through the same loader, so the entries double as
format documentation and as test fixtures.  Geometry notes:

* ``grid2-min``: the square grid generated from a single vertex and two
  reflexive edges reaching into the neighbouring cells.
* ``grid2``: the same grid on the 2x2 supercell, four vertices spaced 1/2
  apart and eight edges (four internal, four reentrant).
* ``grid2-reduced``: ``grid2`` with one horizontal and one vertical
  reentrant edge removed (six edges), the torus framework used for
  periodic counting checks.
* ``quadgrid``: seeded generic perturbation of the ``grid2`` rest
  positions; perturbations are rationals bounded well inside one third of
  the grid spacing.
* ``kagome``: corner-joined triangles, three vertices and six edges on the
  hexagonal lattice.
* ``kagome-net``: corner-joined regular tetrahedra on the fcc lattice,
  four vertices and twelve edges.
* ``honeycomb3`` / ``honeycomb4``: hexagon motif with three reentrant
  edges; the 4-regular variant adds the three main diagonals that
  rigidify the hexagon.
* ``squares``: checkerboard of rigid unit squares (one bracing diagonal
  per square) joined at corners.
"""

from __future__ import annotations

import math

import numpy as np

from .frameworks import FiniteFramework, Graph, Motif, generic_placement
from .io import motif_from_dict

SQRT3 = math.sqrt(3.0)

_HEX_LATTICE = [[1.0, 0.0], [0.5, SQRT3 / 2.0]]

_MOTIF_DATA: dict[str, dict] = {
    "grid2-min": {
        "dimension": 2,
        "lattice": [[1.0, 0.0], [0.0, 1.0]],
        "vertices": [[0.0, 0.0]],
        "edges": [
            {"i": 0, "j": 0, "offset": [1, 0]},
            {"i": 0, "j": 0, "offset": [0, 1]},
        ],
    },
    "grid2": {
        "dimension": 2,
        "lattice": [[1.0, 0.0], [0.0, 1.0]],
        "vertices": [[0.0, 0.0], [0.5, 0.0], [0.5, 0.5], [0.0, 0.5]],
        "edges": [
            {"i": 0, "j": 1, "offset": [0, 0]},
            {"i": 1, "j": 2, "offset": [0, 0]},
            {"i": 2, "j": 3, "offset": [0, 0]},
            {"i": 3, "j": 0, "offset": [0, 0]},
            {"i": 0, "j": 1, "offset": [-1, 0]},
            {"i": 1, "j": 2, "offset": [0, -1]},
            {"i": 2, "j": 3, "offset": [1, 0]},
            {"i": 3, "j": 0, "offset": [0, 1]},
        ],
    },
    "kagome": {
        "dimension": 2,
        "lattice": _HEX_LATTICE,
        "vertices": [[0.0, 0.0], [0.5, 0.0], [0.0, 0.5]],
        "edges": [
            {"i": 0, "j": 1, "offset": [0, 0]},
            {"i": 1, "j": 2, "offset": [0, 0]},
            {"i": 0, "j": 2, "offset": [0, 0]},
            {"i": 0, "j": 1, "offset": [-1, 0]},
            {"i": 1, "j": 2, "offset": [1, -1]},
            {"i": 2, "j": 0, "offset": [0, 1]},
        ],
    },
    "kagome-net": {
        "dimension": 3,
        "lattice": [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]],
        "vertices": [
            [0.0, 0.0, 0.0],
            [0.5, 0.0, 0.0],
            [0.0, 0.5, 0.0],
            [0.0, 0.0, 0.5],
        ],
        "edges": [
            {"i": 0, "j": 1, "offset": [0, 0, 0]},
            {"i": 0, "j": 2, "offset": [0, 0, 0]},
            {"i": 0, "j": 3, "offset": [0, 0, 0]},
            {"i": 1, "j": 2, "offset": [0, 0, 0]},
            {"i": 1, "j": 3, "offset": [0, 0, 0]},
            {"i": 2, "j": 3, "offset": [0, 0, 0]},
            {"i": 0, "j": 1, "offset": [-1, 0, 0]},
            {"i": 0, "j": 2, "offset": [0, -1, 0]},
            {"i": 0, "j": 3, "offset": [0, 0, -1]},
            {"i": 1, "j": 2, "offset": [1, -1, 0]},
            {"i": 1, "j": 3, "offset": [1, 0, -1]},
            {"i": 2, "j": 3, "offset": [0, 1, -1]},
        ],
    },
    "honeycomb3": {
        "dimension": 2,
        "lattice": _HEX_LATTICE,
        "vertices": [
            [1 / 2, 1 / 6],
            [5 / 6, 1 / 6],
            [5 / 6, 1 / 2],
            [1 / 2, 5 / 6],
            [1 / 6, 5 / 6],
            [1 / 6, 1 / 2],
        ],
        "edges": [
            {"i": 0, "j": 1, "offset": [0, 0]},
            {"i": 1, "j": 2, "offset": [0, 0]},
            {"i": 2, "j": 3, "offset": [0, 0]},
            {"i": 3, "j": 4, "offset": [0, 0]},
            {"i": 4, "j": 5, "offset": [0, 0]},
            {"i": 0, "j": 5, "offset": [0, 0]},
            {"i": 2, "j": 5, "offset": [1, 0]},
            {"i": 3, "j": 0, "offset": [0, 1]},
            {"i": 1, "j": 4, "offset": [1, -1]},
        ],
    },
    "squares": {
        "dimension": 2,
        "lattice": [[1.0, 1.0], [1.0, -1.0]],
        "vertices": [[0.0, 0.0], [0.5, 0.5]],
        "edges": [
            {"i": 0, "j": 1, "offset": [0, 0]},
            {"i": 1, "j": 0, "offset": [1, 0]},
            {"i": 0, "j": 1, "offset": [-1, -1]},
            {"i": 1, "j": 0, "offset": [0, 1]},
            {"i": 0, "j": 0, "offset": [1, 0]},
        ],
    },
}

_MOTIF_DATA["grid2-reduced"] = {
    "dimension": 2,
    "lattice": [[1.0, 0.0], [0.0, 1.0]],
    "vertices": _MOTIF_DATA["grid2"]["vertices"],
    "edges": [e for e in _MOTIF_DATA["grid2"]["edges"]
              if e["offset"] not in ([-1, 0], [0, -1])],
}

_MOTIF_DATA["honeycomb4"] = {
    "dimension": 2,
    "lattice": _HEX_LATTICE,
    "vertices": _MOTIF_DATA["honeycomb3"]["vertices"],
    "edges": _MOTIF_DATA["honeycomb3"]["edges"]
    + [
        {"i": 0, "j": 3, "offset": [0, 0]},
        {"i": 1, "j": 4, "offset": [0, 0]},
        {"i": 2, "j": 5, "offset": [0, 0]},
    ],
}

#: rest positions of the quadgrid vertices, centred in the unit cell so
#: perturbed fractional coordinates stay inside [0, 1)
_QUADGRID_REST = np.array([[0.25, 0.25], [0.75, 0.25], [0.75, 0.75], [0.25, 0.75]])
#: per-coordinate perturbation half-width; |delta p| <= 0.1*sqrt(2) < 1/6,
#: one third of the 1/2 grid spacing
_QUADGRID_WIDTH = 0.2

MOTIF_NAMES = tuple(sorted(_MOTIF_DATA)) + ("quadgrid",)
FINITE_NAMES = ("triangle", "k4", "trapezium-strip")
CATALOG_NAMES = MOTIF_NAMES + FINITE_NAMES


class UnknownCatalogNameError(KeyError):
    """Requested name is not in the built-in catalog."""


def catalog(name: str, seed: int | None = None) -> Motif | FiniteFramework:
    """Return a built-in motif or finite framework by name.

    ``quadgrid`` requires a seed (its placement is a seeded generic
    perturbation); other names ignore the seed except ``k4`` which
    defaults to seed 0.
    """
    if name in _MOTIF_DATA:
        return motif_from_dict(_MOTIF_DATA[name])
    if name == "quadgrid":
        if seed is None:
            raise ValueError("catalog 'quadgrid' requires a seed")
        pert = (generic_placement(4, 2, seed) - 0.5) * _QUADGRID_WIDTH
        data = {
            "dimension": 2,
            "lattice": [[1.0, 0.0], [0.0, 1.0]],
            "vertices": (_QUADGRID_REST + pert).tolist(),
            "edges": _MOTIF_DATA["grid2"]["edges"],
        }
        return motif_from_dict(data)
    if name == "triangle":
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        return FiniteFramework(Graph(3, ((0, 1), (1, 2), (0, 2))), pts, 2)
    if name == "k4":
        pts = generic_placement(4, 2, 0 if seed is None else seed)
        edges = tuple((i, j) for i in range(4) for j in range(i + 1, 4))
        return FiniteFramework(Graph(4, edges), pts, 2)
    if name == "trapezium-strip":
        from .deform import TrapeziumStrip, strip_framework

        return strip_framework(TrapeziumStrip(a=2.0, b=1.0))
    raise UnknownCatalogNameError(name)


def catalog_motif(name: str, seed: int | None = None) -> Motif:
    obj = catalog(name, seed)
    if not isinstance(obj, Motif):
        raise ValueError(f"catalog entry '{name}' is a finite framework, not a motif")
    return obj


def motif_dict(name: str) -> dict:
    """Raw file-format dict for a fixed (seedless) catalog motif."""
    if name not in _MOTIF_DATA:
        raise UnknownCatalogNameError(name)
    return _MOTIF_DATA[name]
