"""Laurent polynomial arithmetic, determinants and canonical forms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigikit import (
    LaurentPoly,
    build_symbol,
    catalog_motif,
    det_interpolate,
    det_is_zero,
    equal_up_to_scalar_monomial,
    normalize,
    poly_close,
    poly_parse,
    poly_text,
)
from rigikit.laurent import NonSquareMatrixError, SymbolMatrix


def lp(dimension, terms):
    return LaurentPoly(dimension, terms)


def zbar_minus_one():
    return lp(1, {(-1,): 1.0, (0,): -1.0})


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def test_eval_zbar_minus_one_at_origin():
    assert zbar_minus_one().eval((0.0,)) == pytest.approx(0.0)


def test_eval_zbar_minus_one_at_half():
    assert zbar_minus_one().eval((0.5,)) == pytest.approx(-2.0)


def test_eval_zw_quarter_quarter():
    p = lp(2, {(1, 1): 1.0})
    assert p.eval((0.25, 0.25)) == pytest.approx(-1.0)


def test_eval_dimension_mismatch():
    with pytest.raises(ValueError):
        zbar_minus_one().eval((0.1, 0.2))


# ---------------------------------------------------------------------------
# arithmetic (ring identities at random torus points)
# ---------------------------------------------------------------------------

coeffs = st.complex_numbers(min_magnitude=0.0, max_magnitude=4.0,
                            allow_nan=False, allow_infinity=False)
exponents = st.tuples(st.integers(-3, 3), st.integers(-3, 3))
polys = st.dictionaries(exponents, coeffs, min_size=0, max_size=5).map(
    lambda t: lp(2, t)
)


@settings(max_examples=60, deadline=None)
@given(polys, polys, st.integers(0, 2**31 - 1))
def test_eval_is_a_ring_homomorphism(p, q, seed):
    s = np.random.default_rng(seed).random(2)
    assert (p * q).eval(s) == pytest.approx(p.eval(s) * q.eval(s), abs=1e-9)
    assert (p + q).eval(s) == pytest.approx(p.eval(s) + q.eval(s), abs=1e-10)


def test_eval_products_at_many_points():
    rng = np.random.default_rng(5)
    p = lp(2, {(-1, 0): 2.0, (0, 1): -1.0 + 0.5j, (2, -1): 0.25})
    q = lp(2, {(0, 0): 1.0, (1, 1): -3.0})
    for _ in range(100):
        s = rng.random(2)
        assert abs((p * q).eval(s) - p.eval(s) * q.eval(s)) < 1e-10
        assert abs((p + q).eval(s) - (p.eval(s) + q.eval(s))) < 1e-10


def test_conjugate_matches_pointwise_conjugation():
    p = lp(2, {(-1, 2): 1.5 - 0.25j, (0, 0): 2.0})
    rng = np.random.default_rng(7)
    for _ in range(20):
        s = rng.random(2)
        assert p.conjugate().eval(s) == pytest.approx(np.conj(p.eval(s)))


# ---------------------------------------------------------------------------
# normalize
# ---------------------------------------------------------------------------

def test_normalize_shifts_and_scales():
    got = normalize(zbar_minus_one())
    assert poly_close(got, lp(1, {(0,): 1.0, (1,): -1.0}))


def test_normalize_idempotent():
    p = lp(2, {(-2, 1): 3.0, (0, 0): -1.5, (1, 1): 2.0})
    assert poly_close(normalize(p), normalize(normalize(p)))


@settings(max_examples=40, deadline=None)
@given(
    st.dictionaries(exponents, coeffs, min_size=1, max_size=5),
    st.complex_numbers(min_magnitude=0.1, max_magnitude=3.0,
                       allow_nan=False, allow_infinity=False),
    exponents,
)
def test_normalize_kills_scalar_and_monomial_factors(terms, c, shift):
    p = lp(2, terms)
    if p.is_zero():
        return
    shifted = p * lp(2, {shift: c})
    assert poly_close(normalize(p), normalize(shifted), tol=1e-6)


def test_normalize_rejects_zero():
    with pytest.raises(ValueError):
        normalize(LaurentPoly.zero(2))


def test_grid_determinant_normal_form_equals_plain_square():
    # c * zw * (1 - zbar)^2 (1 - wbar)^2 and (1-z)^2 (1-w)^2 canonicalize equally
    one_minus_zbar = lp(2, {(0, 0): 1.0, (-1, 0): -1.0})
    one_minus_wbar = lp(2, {(0, 0): 1.0, (0, -1): -1.0})
    lhs = lp(2, {(1, 1): -1.0 / 256.0}) * one_minus_zbar * one_minus_zbar \
        * one_minus_wbar * one_minus_wbar
    one_minus_z = lp(2, {(0, 0): 1.0, (1, 0): -1.0})
    one_minus_w = lp(2, {(0, 0): 1.0, (0, 1): -1.0})
    rhs = one_minus_z * one_minus_z * one_minus_w * one_minus_w
    assert poly_close(normalize(lhs), normalize(rhs))
    assert equal_up_to_scalar_monomial(lhs, rhs)


# ---------------------------------------------------------------------------
# determinant interpolation
# ---------------------------------------------------------------------------

def test_det_of_diagonal_product():
    zb1 = lp(2, {(-1, 0): 1.0, (0, 0): -1.0})
    wb1 = lp(2, {(0, -1): 1.0, (0, 0): -1.0})
    zero = LaurentPoly.zero(2)
    M = SymbolMatrix(2, 2, 2, ((zb1, zero), (zero, wb1)))
    det = det_interpolate(M)
    expected = lp(2, {(-1, -1): 1.0, (-1, 0): -1.0, (0, -1): -1.0, (0, 0): 1.0})
    assert poly_close(det, expected)


def test_grid2_determinant_matches_closed_form_exactly():
    det = det_interpolate(build_symbol(catalog_motif("grid2")).matrix)
    one_minus_zbar = lp(2, {(0, 0): 1.0, (-1, 0): -1.0})
    one_minus_wbar = lp(2, {(0, 0): 1.0, (0, -1): -1.0})
    expected = lp(2, {(1, 1): -1.0 / 256.0}) * one_minus_zbar * one_minus_zbar \
        * one_minus_wbar * one_minus_wbar
    assert poly_close(det, expected, tol=1e-12)


def test_kagome_determinant_is_scalar_monomial_multiple():
    det = det_interpolate(build_symbol(catalog_motif("kagome")).matrix)
    zw = lp(2, {(1, 1): 1.0})
    zb1 = lp(2, {(-1, 0): 1.0, (0, 0): -1.0})
    wb1 = lp(2, {(0, -1): 1.0, (0, 0): -1.0})
    zb_wb = lp(2, {(-1, 0): 1.0, (0, -1): -1.0})
    assert equal_up_to_scalar_monomial(det, zw * zb1 * wb1 * zb_wb)


def test_kagome_recovered_scalar():
    # regression: the recovered scale factor of the kagome determinant
    det = det_interpolate(build_symbol(catalog_motif("kagome")).matrix)
    scale = -3.0 * np.sqrt(3.0) / 512.0
    zw = lp(2, {(1, 1): scale})
    zb1 = lp(2, {(-1, 0): 1.0, (0, 0): -1.0})
    wb1 = lp(2, {(0, -1): 1.0, (0, 0): -1.0})
    zb_wb = lp(2, {(-1, 0): 1.0, (0, -1): -1.0})
    assert poly_close(det, zw * zb1 * wb1 * zb_wb, tol=1e-12)


def test_det_interpolation_agrees_with_direct_determinant():
    sf = build_symbol(catalog_motif("kagome"))
    det = det_interpolate(sf.matrix)
    rng = np.random.default_rng(3)
    for _ in range(50):
        s = rng.random(2)
        direct = np.linalg.det(sf.eval(s))
        assert abs(det.eval(s) - direct) <= 1e-8 * max(abs(direct), 1e-12)


def test_det_requires_square():
    sf = build_symbol(catalog_motif("honeycomb3"))
    with pytest.raises(NonSquareMatrixError):
        det_interpolate(sf.matrix)


# ---------------------------------------------------------------------------
# identically-zero detection
# ---------------------------------------------------------------------------

def test_grid2_determinant_not_zero():
    assert not det_is_zero(build_symbol(catalog_motif("grid2")).matrix)


def test_kagome_net_determinant_not_zero():
    assert not det_is_zero(build_symbol(catalog_motif("kagome-net")).matrix)


def test_duplicated_edge_row_gives_zero_determinant():
    base = catalog_motif("grid2")
    from rigikit import Motif

    # replace the last edge by a duplicate of the first: square symbol,
    # still connected, with a repeated row
    edges = base.edges[:-1] + (base.edges[0],)
    motif = Motif(2, base.lattice, base.vertices, edges)
    assert det_is_zero(build_symbol(motif).matrix)


# ---------------------------------------------------------------------------
# text round trip
# ---------------------------------------------------------------------------

def test_poly_text_round_trip():
    p = lp(2, {(-2, 1): 0.125 - 3.5j, (0, 0): -1.0, (3, -3): 1e-3 + 1e-7j})
    assert poly_close(poly_parse(poly_text(p), 2), p, tol=0.0)


def test_zero_poly_text():
    assert poly_text(LaurentPoly.zero(2)) == "0"
    assert poly_parse("0", 2).is_zero()


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(exponents, coeffs, min_size=0, max_size=6))
def test_poly_text_round_trip_hypothesis(terms):
    p = lp(2, terms)
    assert poly_close(poly_parse(poly_text(p), 2), p, tol=0.0)
