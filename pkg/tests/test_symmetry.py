"""Symmetry elements and the rigidity-operator commutation identity."""

import numpy as np
import pytest

from rigikit import (
    NotASymmetryError,
    catalog_motif,
    identity_symmetry,
    inversion_symmetry,
    symmetry_from_isometry,
    verify_symmetry_commutation,
)


def rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


def test_identity_commutes_exactly():
    for name in ("grid2", "kagome", "honeycomb4"):
        motif = catalog_motif(name)
        residual = verify_symmetry_commutation(motif, identity_symmetry(motif), 2)
        assert residual == 0.0


def test_kagome_inversion_is_a_symmetry():
    motif = catalog_motif("kagome")
    element = inversion_symmetry(motif)  # through the vertex at the origin
    assert element.vertex_map[0] == (0, (0, 0))
    residual = verify_symmetry_commutation(motif, element, 3)
    assert residual < 1e-10


def test_kagome_sixfold_rotation_of_lattice_is_symmetry_of_triangle_centres():
    # 120-degree rotation about the up-triangle centre maps the framework
    # onto itself
    motif = catalog_motif("kagome")
    centre = motif.cartesian_vertices().mean(axis=0)
    Q = rotation(2 * np.pi / 3)
    element = symmetry_from_isometry(motif, Q, centre - Q @ centre)
    residual = verify_symmetry_commutation(motif, element, 3)
    assert residual < 1e-10


def test_quarter_turn_is_not_a_kagome_symmetry():
    motif = catalog_motif("kagome")
    with pytest.raises(NotASymmetryError):
        symmetry_from_isometry(motif, rotation(np.pi / 2))


def test_grid2_quarter_turn_is_a_symmetry():
    motif = catalog_motif("grid2")
    # quarter turn about the centre of the 2x2 supercell
    centre = np.array([0.25, 0.25])
    Q = rotation(np.pi / 2)
    element = symmetry_from_isometry(motif, Q, centre - Q @ centre)
    assert verify_symmetry_commutation(motif, element, 3) < 1e-10


def test_translation_mismatch_rejected():
    motif = catalog_motif("kagome")
    with pytest.raises(NotASymmetryError):
        symmetry_from_isometry(motif, np.eye(2), np.array([0.13, 0.41]))
