"""Isometric symmetries of crystal frameworks and commutation checks.

An isometry x -> Q x + c that maps the framework onto itself induces a
permutation of motif vertices and edges, each with an integer cell
correction.  The rigidity matrix then intertwines the induced edge and
vertex operators (the fundamental commutation identity); the check here
verifies that identity on a finite patch, restricted to rows and columns
whose images stay inside the patch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .frameworks import Motif, build_patch, rigidity_matrix


class NotASymmetryError(ValueError):
    """The isometry does not map the framework onto itself."""


@dataclass(frozen=True)
class SymmetryElement:
    """Isometry x -> Q x + c together with its action on the motif.

    ``vertex_map[k] = (k', n')`` means vertex k in the home cell is sent to
    vertex k' in cell n'; ``edge_map[e] = (e', base)`` identifies the image
    of motif edge e as the translate of motif edge e' by cell ``base``.
    """

    orthogonal: np.ndarray
    translation: np.ndarray
    vertex_map: tuple[tuple[int, tuple[int, ...]], ...]
    edge_map: tuple[tuple[int, tuple[int, ...]], ...]

    def apply(self, x: np.ndarray) -> np.ndarray:
        return self.orthogonal @ x + self.translation


def symmetry_from_isometry(motif: Motif, orthogonal, translation=None,
                           tol: float = 1e-9) -> SymmetryElement:
    """Resolve an isometry into a SymmetryElement of the framework.

    Raises NotASymmetryError when some vertex or edge image is not a
    framework vertex or edge.
    """
    d = motif.dimension
    Q = np.asarray(orthogonal, dtype=float)
    if Q.shape != (d, d) or np.max(np.abs(Q.T @ Q - np.eye(d))) > 1e-9:
        raise ValueError("orthogonal part must be a d x d orthogonal matrix")
    c = np.zeros(d) if translation is None else np.asarray(translation, dtype=float)

    pts = motif.cartesian_vertices()
    lat_inv = np.linalg.inv(motif.lattice)

    def locate(point: np.ndarray) -> tuple[int, np.ndarray]:
        frac = lat_inv @ point
        for kappa in range(motif.vertex_count):
            rel = frac - motif.vertices[kappa]
            cell = np.rint(rel)
            if np.max(np.abs(rel - cell)) < tol:
                return kappa, cell.astype(int)
        raise NotASymmetryError(
            f"image point {point} is not a framework vertex"
        )

    cell_action = lat_inv @ Q @ motif.lattice
    if np.max(np.abs(cell_action - np.rint(cell_action))) > tol:
        raise NotASymmetryError("isometry does not normalise the translation lattice")
    cell_action = np.rint(cell_action).astype(int)

    vertex_map = []
    for kappa in range(motif.vertex_count):
        image = Q @ pts[kappa] + c
        vertex_map.append(locate(image))

    # normalised edge key: both endpoints with the smaller one in cell 0
    def edge_key(i: int, ni: np.ndarray, j: int, nj: np.ndarray):
        a = (i, tuple(int(x) for x in ni))
        b = (j, tuple(int(x) for x in nj))
        if a > b:
            a, b = b, a
        base = a[1]
        return (a[0], b[0], tuple(x - y for x, y in zip(b[1], base))), base

    motif_keys = {}
    for e_idx, (i, j, off) in enumerate(motif.edges):
        key, _ = edge_key(i, np.zeros(d, int), j, np.asarray(off, int))
        motif_keys[key] = e_idx

    edge_map = []
    for (i, j, off) in motif.edges:
        ki, ni = vertex_map[i]
        kj, nj0 = vertex_map[j]
        # vertex j sits in cell off; its image picks up the lattice rotation
        nj = np.asarray(nj0, int) + cell_action @ np.asarray(off, int)
        key, base = edge_key(ki, np.asarray(ni, int), kj, nj)
        if key not in motif_keys:
            raise NotASymmetryError(
                f"image of edge ({i}, {j}, {off}) is not a framework edge"
            )
        edge_map.append((motif_keys[key], base))

    return SymmetryElement(
        Q, c,
        tuple((k, tuple(int(x) for x in n)) for k, n in vertex_map),
        tuple((e, tuple(int(x) for x in b)) for e, b in edge_map),
    )


def identity_symmetry(motif: Motif) -> SymmetryElement:
    d = motif.dimension
    return symmetry_from_isometry(motif, np.eye(d))


def inversion_symmetry(motif: Motif, centre=None) -> SymmetryElement:
    """Point inversion through ``centre`` (default: the origin)."""
    d = motif.dimension
    c = np.zeros(d) if centre is None else 2.0 * np.asarray(centre, dtype=float)
    return symmetry_from_isometry(motif, -np.eye(d), c)


def verify_symmetry_commutation(motif: Motif, element: SymmetryElement,
                                radius: int) -> float:
    """Max residual of the commutation identity on a radius-K patch.

    For every patch bar whose image bar also lies in the patch, the image
    row of the rigidity matrix must equal the orthogonally transformed
    original row under the induced vertex permutation.  The residual is
    relative to the largest bar length.
    """
    patch = build_patch(motif, radius)
    d = motif.dimension
    R = rigidity_matrix(patch.framework)
    Q = element.orthogonal
    lat_inv = np.linalg.inv(motif.lattice)
    cell_action = np.rint(lat_inv @ Q @ motif.lattice).astype(int)

    def image_vertex(kappa: int, cell) -> tuple[int, tuple[int, ...]] | None:
        k2, n2 = element.vertex_map[kappa]
        rot_cell = cell_action @ np.asarray(cell, int)
        target = tuple(int(a + b) for a, b in zip(n2, rot_cell))
        if not patch.contains_cell(target):
            return None
        return (k2, target)

    edge_lookup = {}
    for row, (e_idx, cell) in enumerate(patch.edge_keys):
        i, j, off = motif.edges[e_idx]
        a = (i, cell)
        b = (j, tuple(x + o for x, o in zip(cell, off)))
        edge_lookup[frozenset((a, b))] = row

    scale = max(np.linalg.norm(motif.edge_vector(e)) for e in motif.edges)
    worst = 0.0
    compared = 0
    for row, (e_idx, cell) in enumerate(patch.edge_keys):
        i, j, off = motif.edges[e_idx]
        a = (i, tuple(cell))
        b = (j, tuple(x + o for x, o in zip(cell, off)))
        ia = image_vertex(*a)
        ib = image_vertex(*b)
        if ia is None or ib is None:
            continue
        key = frozenset((ia, ib))
        if key not in edge_lookup:
            raise NotASymmetryError(
                f"patch edge {a}-{b} maps outside the framework edge set"
            )
        row2 = edge_lookup[key]
        for (src, dst) in ((a, ia), (b, ib)):
            col_src = patch.index_of(*src)
            col_dst = patch.index_of(*dst)
            orig = R[row, d * col_src : d * col_src + d]
            image = R[row2, d * col_dst : d * col_dst + d]
            worst = max(worst, float(np.max(np.abs(image - Q @ orig))))
        compared += 1
    if compared == 0:
        raise NotASymmetryError("no patch edge has its image inside the patch")
    return worst / scale
