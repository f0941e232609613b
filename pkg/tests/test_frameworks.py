"""Graphs, placements, motifs, patches and the finite rigidity matrix."""

import json

import numpy as np
import pytest

from rigikit import (
    DisconnectedMotifError,
    FiniteFramework,
    Graph,
    Motif,
    ZeroLengthEdgeError,
    build_patch,
    catalog,
    catalog_motif,
    flex_space,
    generic_placement,
    motif_from_dict,
    motif_to_dict,
    rigidity_matrix,
    stress_space,
)
from rigikit.io import FileFormatError
from rigikit.linalg import numerical_rank


def framework(points, edges):
    pts = np.asarray(points, dtype=float)
    return FiniteFramework(Graph(len(pts), tuple(edges)), pts, pts.shape[1])


def cross_braced_hexagon():
    """The rigid unit internal to the honeycomb4 cell: hexagon plus diagonals."""
    motif = catalog_motif("honeycomb4")
    pts = motif.cartesian_vertices()
    edges = [(i, j) for i, j, off in motif.edges if off == (0, 0)]
    return framework(pts, edges)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def test_graph_rejects_loops_and_duplicates():
    with pytest.raises(ValueError):
        Graph(3, ((0, 0),))
    with pytest.raises(ValueError):
        Graph(3, ((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        Graph(2, ((0, 5),))


def test_framework_rejects_zero_length_edge():
    with pytest.raises(ZeroLengthEdgeError):
        framework([[0, 0], [0, 0]], [(0, 1)])


def test_motif_rejects_reflexive_zero_offset():
    with pytest.raises(ValueError):
        Motif(2, np.eye(2), np.array([[0.0, 0.0]]), ((0, 0, (0, 0)),))


def test_motif_connectivity_needs_full_gain_span():
    # two loops in the same direction never reach neighbouring rows
    with pytest.raises(DisconnectedMotifError):
        Motif(2, np.eye(2), np.array([[0.0, 0.0]]),
              ((0, 0, (1, 0)), (0, 0, (2, 0))))


def test_motif_quotient_must_be_connected():
    verts = np.array([[0.0, 0.0], [0.5, 0.5]])
    edges = ((0, 0, (1, 0)), (0, 0, (0, 1)), (1, 1, (1, 0)), (1, 1, (0, 1)))
    with pytest.raises(DisconnectedMotifError):
        Motif(2, np.eye(2), verts, edges)


# ---------------------------------------------------------------------------
# rigidity matrix
# ---------------------------------------------------------------------------

def test_single_edge_rigidity_row():
    fw = framework([[0, 0], [1, 0]], [(0, 1)])
    R = rigidity_matrix(fw)
    assert R.shape == (1, 4)
    assert np.allclose(R, [[-1.0, 0.0, 1.0, 0.0]])


def test_triangle_rank_three():
    R = rigidity_matrix(catalog("triangle"))
    assert R.shape == (3, 6)
    assert numerical_rank(R) == 3


def test_square_cycle_rank_and_kernel():
    fw = framework([[0, 0], [1, 0], [1, 1], [0, 1]],
                   [(0, 1), (1, 2), (2, 3), (3, 0)])
    R = rigidity_matrix(fw)
    assert R.shape == (4, 8)
    assert numerical_rank(R) == 4
    assert flex_space(fw).shape[1] == 4


# ---------------------------------------------------------------------------
# flex and stress spaces
# ---------------------------------------------------------------------------

def test_triangle_flexes_are_rigid_motions():
    assert flex_space(catalog("triangle")).shape[1] == 3


def test_cross_braced_hexagon_has_inout_flex():
    fw = cross_braced_hexagon()
    assert fw.edge_count == 9
    # two translations, one rotation, one internal in-out flex
    assert flex_space(fw).shape[1] == 4


def test_generic_quadrilateral_kernel():
    pts = generic_placement(4, 2, seed=11)
    fw = framework(pts, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert flex_space(fw).shape[1] == 4


def test_flex_vectors_annihilate_edge_constraints():
    fw = cross_braced_hexagon()
    basis = flex_space(fw)
    scale = float(np.max(fw.edge_lengths()))
    for k in range(basis.shape[1]):
        u = basis[:, k].reshape(-1, 2)
        worst = max(
            abs(np.dot(fw.placement[i] - fw.placement[j], u[i] - u[j]))
            for i, j in fw.graph.edges
        )
        assert worst < 1e-9 * scale


def test_triangle_has_no_stress():
    assert stress_space(catalog("triangle")).shape[1] == 0


def test_collinear_two_edge_chain_has_no_stress():
    fw = framework([[0, 0], [1, 0], [2, 0]], [(0, 1), (1, 2)])
    assert stress_space(fw).shape[1] == 0


def test_k4_generic_stress_dimension_one():
    for seed in (0, 1, 2):
        fw = catalog("k4", seed=seed)
        R = rigidity_matrix(fw)
        assert numerical_rank(R) == 5
        assert stress_space(fw).shape[1] == 1
        residual = np.max(np.abs(R.T @ stress_space(fw)))
        assert residual < 1e-9


def test_rank_nullity_accounting():
    for fw in (catalog("triangle"), catalog("k4", seed=0), cross_braced_hexagon()):
        R = rigidity_matrix(fw)
        rank = numerical_rank(R)
        assert flex_space(fw).shape[1] + rank == 2 * fw.vertex_count
        assert stress_space(fw).shape[1] + rank == fw.edge_count


# ---------------------------------------------------------------------------
# patches
# ---------------------------------------------------------------------------

def test_grid2_min_patch_counts():
    patch = build_patch(catalog_motif("grid2-min"), 1)
    assert patch.framework.vertex_count == 9
    assert patch.framework.edge_count == 12


def test_kagome_patch_radius_zero_keeps_internal_edges():
    patch = build_patch(catalog_motif("kagome"), 0)
    assert patch.framework.vertex_count == 3
    assert patch.framework.edge_count == 3


def test_patch_maxwell_ratio_approaches_motif_ratio():
    motif = catalog_motif("kagome")
    target = motif.edge_count / motif.vertex_count
    def ratio(K):
        p = build_patch(motif, K)
        return p.framework.edge_count / p.framework.vertex_count
    assert abs(ratio(6) - target) < abs(ratio(2) - target)
    assert abs(ratio(6) - target) < 0.15


def test_patch_contains_smaller_patch_as_induced_subframework():
    motif = catalog_motif("kagome")
    small, big = build_patch(motif, 1), build_patch(motif, 2)
    index_map = {key: big.index_of(*key) for key in small.vertex_keys}
    for key in small.vertex_keys:
        assert np.allclose(
            small.framework.placement[small.index_of(*key)],
            big.framework.placement[index_map[key]],
        )
    big_edges = {
        frozenset((big.vertex_keys[i], big.vertex_keys[j]))
        for i, j in big.framework.graph.edges
    }
    for i, j in small.framework.graph.edges:
        assert frozenset((small.vertex_keys[i], small.vertex_keys[j])) in big_edges


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def test_catalog_counts_match_documented_motifs():
    expected = {
        "grid2-min": (1, 2),
        "grid2": (4, 8),
        "grid2-reduced": (4, 6),
        "kagome": (3, 6),
        "kagome-net": (4, 12),
        "honeycomb3": (6, 9),
        "honeycomb4": (6, 12),
        "squares": (2, 5),
    }
    for name, (nv, ne) in expected.items():
        motif = catalog_motif(name)
        assert (motif.vertex_count, motif.edge_count) == (nv, ne), name


def test_grid2_min_offsets():
    motif = catalog_motif("grid2-min")
    offsets = sorted(off for _, _, off in motif.edges)
    assert offsets == [(0, 1), (1, 0)]
    assert all(i == j for i, j, _ in motif.edges)


def test_kagome_split_internal_external():
    motif = catalog_motif("kagome")
    internal = [e for e in motif.edges if e[2] == (0, 0)]
    assert len(internal) == 3
    lengths = [np.linalg.norm(motif.edge_vector(e)) for e in motif.edges]
    assert np.allclose(lengths, 0.5)


def test_quadgrid_needs_seed_and_stays_near_rest():
    with pytest.raises(ValueError):
        catalog("quadgrid")
    for seed in (0, 1, 2):
        motif = catalog_motif("quadgrid", seed=seed)
        rest = np.array([[0.25, 0.25], [0.75, 0.25], [0.75, 0.75], [0.25, 0.75]])
        # within one third of the 1/2 grid spacing
        assert np.max(np.linalg.norm(motif.cartesian_vertices() - rest, axis=1)) < 1 / 6


def test_unknown_catalog_name():
    with pytest.raises(KeyError):
        catalog("nonesuch")


def test_generic_placement_rank_stable_across_seeds():
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]
    ranks = set()
    for seed in (0, 1, 2):
        fw = framework(generic_placement(4, 2, seed), edges)
        ranks.add(numerical_rank(rigidity_matrix(fw)))
    assert ranks == {5}


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def test_motif_json_round_trip(tmp_path):
    motif = catalog_motif("kagome")
    data = motif_to_dict(motif)
    again = motif_from_dict(json.loads(json.dumps(data)))
    assert again.edges == motif.edges
    assert np.allclose(again.lattice, motif.lattice)
    assert np.allclose(again.vertices, motif.vertices)


def test_motif_format_rejects_unknown_keys():
    data = motif_to_dict(catalog_motif("grid2-min"))
    data["colour"] = "blue"
    with pytest.raises(FileFormatError):
        motif_from_dict(data)


def test_motif_format_rejects_bad_offset():
    data = motif_to_dict(catalog_motif("grid2-min"))
    data["edges"][0]["offset"] = [1]
    with pytest.raises(FileFormatError):
        motif_from_dict(data)


def test_framework_format_rejects_extra_keys():
    from rigikit.io import framework_from_dict

    with pytest.raises(FileFormatError):
        framework_from_dict({"vertices": [[0, 0], [1, 0]], "edges": [[0, 1]], "x": 1})
