"""Matricial symbol of a crystal framework and its mode structure.

``build_symbol`` turns a motif into the |F_e| x d|F_v| matrix function on
the d-torus that represents the rigidity operator in Fourier coordinates:
the row of edge (i, j, offset) with bar vector v_e = p_i - (p_j + L offset)
carries +v_e in the column block of vertex i and -v_e * zbar^offset in the
block of vertex j; a reflexive edge (i = i) contributes (1 - zbar^offset)
v_e to its single block.

Mode multiplicity mu(s) is the kernel dimension of the evaluated symbol,
the number of independent wave flexes at that phase; the RUM set is the
support of mu.  Wave flexes extend a kernel vector u of the symbol at
z = exp(2*pi*i*s) over the framework by u_{kappa,n} = exp(-2*pi*i*<n,s>)
u_kappa; the conjugate factor is what makes the extension annihilate every
bar constraint (the wave vector of the extended flex is -s, and the set of
wave-flex phases is symmetric under s -> -s).
"""

from __future__ import annotations

import concurrent.futures
import itertools
from dataclasses import dataclass

import numpy as np

from .frameworks import Motif, build_patch, rigidity_matrix
from .laurent import (
    LaurentPoly,
    SymbolMatrix,
    det_interpolate,
    det_is_zero,
    torus_point,
)
from .linalg import rank_and_smin, rank_tolerance, singular_values

SAMPLE_SEED = 20130  # fixed seed for the "almost every z" sample points


@dataclass(frozen=True)
class SymbolFunction:
    """Symbol matrix of a motif plus row/column labels."""

    motif: Motif
    matrix: SymbolMatrix
    column_labels: tuple[tuple[int, int], ...]  # (vertex, axis)
    row_labels: tuple[tuple[int, int, tuple[int, ...]], ...]  # motif edges

    @property
    def rows(self) -> int:
        return self.matrix.rows

    @property
    def cols(self) -> int:
        return self.matrix.cols

    def eval(self, s) -> np.ndarray:
        """Symbol evaluated at the torus point z = exp(2*pi*i*s)."""
        d = self.motif.dimension
        z = torus_point(s)
        out = np.zeros((self.rows, self.cols), dtype=complex)
        for r, (i, j, off) in enumerate(self.motif.edges):
            v = self._edge_vectors[r]
            mono = np.prod(z ** (-np.asarray(off)))
            if i == j:
                out[r, d * i : d * i + d] += (1.0 - mono) * v
            else:
                out[r, d * i : d * i + d] += v
                out[r, d * j : d * j + d] += -mono * v
        return out

    def __post_init__(self):
        vecs = tuple(self.motif.edge_vector(e) for e in self.motif.edges)
        object.__setattr__(self, "_edge_vectors", vecs)


def build_symbol(motif: Motif) -> SymbolFunction:
    """Symbol matrix function of a motif.

    All coefficients produced by the construction are real coordinate
    differences; this is asserted at build time.
    """
    d = motif.dimension
    m, n = motif.edge_count, motif.vertex_count
    zero = LaurentPoly.zero(d)
    entries = [[zero] * (d * n) for _ in range(m)]
    for r, (i, j, off) in enumerate(motif.edges):
        v = motif.edge_vector((i, j, off))
        neg_off = tuple(-o for o in off)
        for ax in range(d):
            if i == j:
                term = LaurentPoly(d, {(0,) * d: v[ax], neg_off: -v[ax]})
                entries[r][d * i + ax] = entries[r][d * i + ax] + term
            else:
                entries[r][d * i + ax] = entries[r][d * i + ax] + LaurentPoly(
                    d, {(0,) * d: v[ax]}
                )
                entries[r][d * j + ax] = entries[r][d * j + ax] + LaurentPoly(
                    d, {neg_off: -v[ax]}
                )
    for row in entries:
        for p in row:
            for coeff in p.terms.values():
                assert abs(coeff.imag) == 0.0, "symbol coefficients must be real"
    matrix = SymbolMatrix(m, d * n, d, tuple(tuple(row) for row in entries))
    cols = tuple((kappa, ax) for kappa in range(n) for ax in range(d))
    return SymbolFunction(motif, matrix, cols, tuple(motif.edges))


def evaluate(sf: SymbolFunction, s) -> np.ndarray:
    return sf.eval(s)


def mode_multiplicity(sf: SymbolFunction, s) -> tuple[int, float, np.ndarray]:
    """(mu, sigma_min, kernel basis) of the symbol at phase s.

    mu = d|F_v| - rank, with rank decided by the package singular-value
    tolerance; the kernel basis is orthonormal, one column per wave flex.
    """
    A = sf.eval(s)
    _, sigma, vh = np.linalg.svd(A)
    tol = rank_tolerance(sigma)
    rank = int(np.sum(sigma > tol))
    smin = float(sigma[-1]) if sigma.size else 0.0
    kernel = vh[rank:].conj().T
    return A.shape[1] - rank, smin, kernel


@dataclass(frozen=True)
class WaveFlex:
    """Kernel vector of the symbol at a torus phase.

    The flex it generates on the framework is u_{kappa,n} =
    exp(-2*pi*i*<n, phase>) * motif_vector[kappa]; every translate has the
    same amplitude, so the extension is bounded.
    """

    phase: tuple[float, ...]
    motif_vector: np.ndarray

    def extend(self, kappa: int, cell, dimension: int) -> np.ndarray:
        factor = np.exp(-2j * np.pi * np.dot(np.asarray(cell, float), np.asarray(self.phase)))
        d = dimension
        return factor * self.motif_vector[d * kappa : d * kappa + d]


def wave_flex(sf: SymbolFunction, s) -> list[WaveFlex]:
    """One wave flex per kernel basis vector at phase s (empty if mu = 0)."""
    mu, _, kernel = mode_multiplicity(sf, s)
    phase = tuple(float(x) for x in np.atleast_1d(np.asarray(s, dtype=float)))
    return [WaveFlex(phase, kernel[:, k].copy()) for k in range(mu)]


def verify_wave_flex(wf: WaveFlex, motif: Motif, radius: int) -> float:
    """Max relative bar-constraint residual of the extended flex on a patch.

    The flex is spread over the radius-K patch and every patch bar row is
    applied to it; the residual is normalised by bar length times flex
    amplitude.  Requires radius >= the largest edge offset.
    """
    if radius < motif.max_offset():
        raise ValueError("patch radius must be at least the largest edge offset")
    patch = build_patch(motif, radius)
    d = motif.dimension
    u = np.zeros(d * patch.framework.vertex_count, dtype=complex)
    for idx, (kappa, cell) in enumerate(patch.vertex_keys):
        u[d * idx : d * idx + d] = wf.extend(kappa, cell, d)
    R = rigidity_matrix(patch.framework)
    residuals = np.abs(R @ u)
    row_scale = np.max(np.linalg.norm(R, axis=1))
    amp = np.max(np.abs(u))
    scale = max(row_scale * amp, 1e-30)
    return float(np.max(residuals) / scale)


@dataclass(frozen=True)
class ModeScan:
    """Mode multiplicity and singular-value diagnostics on a torus grid.

    Samples live at s = k/N per axis; ``abs_det`` is None for rectangular
    symbols.
    """

    resolution: int
    dimension: int
    mu: np.ndarray
    sigma_min: np.ndarray
    abs_det: np.ndarray | None

    def support(self) -> list[tuple[int, ...]]:
        """Grid indices where mu > 0 (the sampled RUM set)."""
        return [tuple(int(q) for q in idx) for idx in np.argwhere(self.mu > 0)]

    def to_csv(self, stream) -> None:
        d = self.dimension
        header = ",".join(f"s{q+1}" for q in range(d)) + ",mu,sigma_min,abs_det"
        stream.write(header + "\n")
        N = self.resolution
        for idx in itertools.product(range(N), repeat=d):
            svals = ",".join("%.17g" % (k / N) for k in idx)
            det_part = "" if self.abs_det is None else "%.17g" % self.abs_det[idx]
            stream.write(
                f"{svals},{int(self.mu[idx])},{'%.17g' % self.sigma_min[idx]},{det_part}\n"
            )


def rum_scan(sf: SymbolFunction, resolution: int, threads: int = 1) -> ModeScan:
    """Tabulate mu, sigma_min (and |det| when square) on an N-per-axis grid."""
    if resolution < 2:
        raise ValueError("grid resolution must be >= 2")
    d = sf.motif.dimension
    N = resolution
    shape = (N,) * d
    mu = np.zeros(shape, dtype=int)
    smin = np.zeros(shape, dtype=float)
    square = sf.rows == sf.cols
    adet = np.zeros(shape, dtype=float) if square else None

    points = list(itertools.product(range(N), repeat=d))

    def work(chunk):
        for idx in chunk:
            s = np.asarray(idx, dtype=float) / N
            A = sf.eval(s)
            sigma = singular_values(A)
            tol = rank_tolerance(sigma)
            rank = int(np.sum(sigma > tol))
            mu[idx] = A.shape[1] - rank
            smin[idx] = float(sigma[-1]) if sigma.size else 0.0
            if square:
                adet[idx] = abs(np.linalg.det(A))

    if threads <= 1:
        work(points)
    else:
        chunks = [points[k::threads] for k in range(threads)]
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, chunks))
    return ModeScan(N, d, mu, smin, adet)


def square_summable_verdict(sf: SymbolFunction) -> str:
    """Classify the framework by almost-everywhere ranks of its symbol.

    Returns one of ``isostatic`` (full column and row rank a.e.),
    ``has_flex`` (column-rank deficient a.e.), ``has_stress`` (row-rank
    deficient a.e.) or ``both``.  Rank a.e. is decided on 20 seeded torus
    samples -- a bounded-degree polynomial vanishing on all of them is
    identically zero -- and cross-checked by the exact determinant grid
    when the symbol is square.
    """
    rng = np.random.default_rng(SAMPLE_SEED)
    best_rank = 0
    for _ in range(20):
        s = rng.random(sf.motif.dimension)
        rank, _ = rank_and_smin(sf.eval(s))
        best_rank = max(best_rank, rank)
    if sf.rows == sf.cols:
        # exact route: rank is a.e. full iff det is not the zero polynomial
        col_full = row_full = not det_is_zero(sf.matrix)
    else:
        col_full = best_rank == sf.cols
        row_full = best_rank == sf.rows
    if col_full and row_full:
        return "isostatic"
    if col_full:
        return "has_stress"
    if row_full:
        return "has_flex"
    return "both"


@dataclass(frozen=True)
class InversionReport:
    """Best-fitting phase structure det(z) = (-1)^tau z^p conj(det(z))."""

    tau: int
    monomial: tuple[int, ...]
    residual: float
    certified: bool


def inversion_phase_analysis(sf: SymbolFunction, tol: float = 1e-8) -> InversionReport:
    """Search for the inversion-symmetry phase structure of the determinant.

    Scans parity tau and monomial multi-indices p within the determinant
    degree bounds, measuring the relative deviation of det(z) from
    (-1)^tau z^p conj(det(z)) over 20 seeded torus samples.  A residual
    below ``tol`` certifies that the RUM set is cut out by a single
    real-valued polynomial on the torus.
    """
    if sf.rows != sf.cols:
        raise ValueError("inversion phase analysis needs a square symbol")
    det = det_interpolate(sf.matrix)
    if det.is_zero():
        return InversionReport(0, (0,) * sf.motif.dimension, 0.0, True)
    d = sf.motif.dimension
    lo, hi = det.exponent_bounds()
    rng = np.random.default_rng(SAMPLE_SEED)
    samples = rng.random((20, d))
    vals = np.array([det.eval(s) for s in samples])
    scale = max(float(np.max(np.abs(vals))), 1e-30)
    ranges = [range(2 * lo[q], 2 * hi[q] + 1) for q in range(d)]
    best = None
    for p in itertools.product(*ranges):
        phase = np.exp(2j * np.pi * samples @ np.asarray(p, dtype=float))
        for tau in (0, 1):
            dev = np.max(np.abs(vals - ((-1) ** tau) * phase * np.conj(vals))) / scale
            if best is None or dev < best[2]:
                best = (tau, p, float(dev))
    tau, p, residual = best
    return InversionReport(tau, tuple(p), residual, residual < tol)
