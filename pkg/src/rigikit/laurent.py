"""Multivariate Laurent polynomials and determinants of symbol matrices.

Coefficients are complex, exponents are integer tuples (negative powers
allowed).  Evaluation points live on the unit torus and are specified by
angles s in [0,1)^d through z_q = exp(2*pi*i*s_q).

Determinants of Laurent-matrix functions are computed by evaluation on a
roots-of-unity grid followed by discrete Fourier inversion: per-variable
exponent bounds are cheap to obtain from the matrix entries, and on a grid
of (2B+1) points per axis the inversion is exact up to rounding.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

PRUNE_ABS = 1e-14
DET_PRUNE_REL = 1e-10


class NonSquareMatrixError(ValueError):
    """Determinant requested for a non-square symbol matrix."""


def torus_point(s) -> np.ndarray:
    """z on the torus from angles s in [0,1)^d."""
    return np.exp(2j * np.pi * np.asarray(s, dtype=float))


@dataclass(frozen=True)
class LaurentPoly:
    """Laurent polynomial sum_a c_a z^a with integer multi-exponents a."""

    dimension: int
    terms: dict

    def __post_init__(self):
        clean = {}
        for exp, coeff in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.dimension:
                raise ValueError(f"exponent {exp} has wrong arity")
            coeff = complex(coeff)
            if abs(coeff) >= PRUNE_ABS:
                clean[exp] = clean.get(exp, 0.0) + coeff
        object.__setattr__(self, "terms", {e: c for e, c in clean.items() if abs(c) >= PRUNE_ABS})

    # ---- constructors -------------------------------------------------
    @staticmethod
    def zero(dimension: int) -> "LaurentPoly":
        return LaurentPoly(dimension, {})

    @staticmethod
    def constant(dimension: int, value: complex) -> "LaurentPoly":
        return LaurentPoly(dimension, {(0,) * dimension: value})

    @staticmethod
    def monomial(dimension: int, exponent, coeff: complex = 1.0) -> "LaurentPoly":
        return LaurentPoly(dimension, {tuple(exponent): coeff})

    # ---- structure -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def exponent_bounds(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(min, max) exponent per variable; zero polynomial gives (0, 0)."""
        if not self.terms:
            z = (0,) * self.dimension
            return z, z
        exps = list(self.terms)
        lo = tuple(min(e[q] for e in exps) for q in range(self.dimension))
        hi = tuple(max(e[q] for e in exps) for q in range(self.dimension))
        return lo, hi

    def max_abs_exponent(self, axis: int) -> int:
        if not self.terms:
            return 0
        return max(abs(e[axis]) for e in self.terms)

    # ---- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.dimension != self.dimension:
                raise ValueError("dimension mismatch")
            return other
        return LaurentPoly.constant(self.dimension, other)

    def __add__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0.0) + c
        return LaurentPoly(self.dimension, out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.dimension, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return LaurentPoly(self.dimension, out)

    __rmul__ = __mul__

    def conjugate(self) -> "LaurentPoly":
        """Conjugate as a function on the torus: coefficients conjugated, exponents negated."""
        return LaurentPoly(
            self.dimension,
            {tuple(-x for x in e): np.conj(c) for e, c in self.terms.items()},
        )

    # ---- evaluation ----------------------------------------------------
    def eval(self, s) -> complex:
        """Evaluate at the torus point z = exp(2*pi*i*s)."""
        z = torus_point(s)
        if z.shape != (self.dimension,):
            raise ValueError("evaluation point has wrong dimension")
        total = 0.0 + 0.0j
        for e, c in self.terms.items():
            total += c * np.prod(z ** np.asarray(e))
        return complex(total)

    def eval_z(self, z: np.ndarray) -> complex:
        total = 0.0 + 0.0j
        for e, c in self.terms.items():
            total += c * np.prod(z ** np.asarray(e))
        return complex(total)

    # ---- text form -------------------------------------------------------
    def text(self) -> str:
        return poly_text(self)

    def __str__(self) -> str:  # pragma: no cover - convenience
        return poly_text(self)


def poly_text(p: LaurentPoly) -> str:
    """Render terms sorted lexicographically by exponent.

    Format per term: ``(re+imj) * z1^a1 z2^a2 ...`` with full-precision
    coefficients; constants drop the variable part.  Parsed back losslessly
    by :func:`poly_parse`.
    """
    if p.is_zero():
        return "0"
    chunks = []
    for exp in sorted(p.terms):
        c = p.terms[exp]
        coeff = f"({c.real!r}{c.imag:+}j)"
        vars_part = " ".join(f"z{q + 1}^{exp[q]}" for q in range(p.dimension) if exp[q] != 0)
        chunks.append(f"{coeff} * {vars_part}" if vars_part else coeff)
    return " + ".join(chunks)


_TERM_RE = re.compile(r"\(([^)]+)\)(?:\s*\*\s*([^+]*))?")


def poly_parse(text: str, dimension: int) -> LaurentPoly:
    """Inverse of :func:`poly_text`."""
    text = text.strip()
    if text == "0":
        return LaurentPoly.zero(dimension)
    terms: dict = {}
    for piece in text.split(" + "):
        m = _TERM_RE.fullmatch(piece.strip())
        if m is None:
            raise ValueError(f"cannot parse term: {piece!r}")
        coeff = complex(m.group(1).replace(" ", ""))
        exp = [0] * dimension
        if m.group(2):
            for var in m.group(2).split():
                name, power = var.split("^")
                exp[int(name[1:]) - 1] = int(power)
        terms[tuple(exp)] = terms.get(tuple(exp), 0.0) + coeff
    return LaurentPoly(dimension, terms)


@dataclass(frozen=True)
class SymbolMatrix:
    """Matrix of Laurent polynomials sharing one variable dimension."""

    rows: int
    cols: int
    dimension: int
    entries: tuple

    def __post_init__(self):
        ent = tuple(tuple(row) for row in self.entries)
        if len(ent) != self.rows or any(len(r) != self.cols for r in ent):
            raise ValueError("entries shape mismatch")
        for row in ent:
            for p in row:
                if p.dimension != self.dimension:
                    raise ValueError("entry dimension mismatch")
        object.__setattr__(self, "entries", ent)

    def eval(self, s) -> np.ndarray:
        z = torus_point(s)
        out = np.zeros((self.rows, self.cols), dtype=complex)
        for r in range(self.rows):
            for c in range(self.cols):
                out[r, c] = self.entries[r][c].eval_z(z)
        return out

    def eval_z(self, z: np.ndarray) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=complex)
        for r in range(self.rows):
            for c in range(self.cols):
                out[r, c] = self.entries[r][c].eval_z(z)
        return out

    def det_bounds(self) -> tuple[int, ...]:
        """Per-variable exponent bound for det: row-wise worst case summed."""
        bounds = []
        for q in range(self.dimension):
            total = 0
            for r in range(self.rows):
                total += max(self.entries[r][c].max_abs_exponent(q) for c in range(self.cols))
            bounds.append(total)
        return tuple(bounds)

    def hadamard_scale(self, z: np.ndarray) -> float:
        """Product of row 2-norms at z, a determinant magnitude bound."""
        A = self.eval_z(z)
        norms = np.linalg.norm(A, axis=1)
        return float(np.prod(np.maximum(norms, 1e-30)))


def _has_real_coefficients(M: SymbolMatrix) -> bool:
    return all(
        c.imag == 0.0 for row in M.entries for p in row for c in p.terms.values()
    )


def det_interpolate(M: SymbolMatrix) -> LaurentPoly:
    """Determinant of a square symbol matrix by grid evaluation + DFT inversion.

    Exact (up to rounding) because det M has per-variable exponents within
    the bounds reported by ``det_bounds``; coefficients below the relative
    pruning threshold are dropped.
    """
    if M.rows != M.cols:
        raise NonSquareMatrixError(f"matrix is {M.rows}x{M.cols}")
    d = M.dimension
    B = M.det_bounds()
    N = tuple(2 * b + 1 for b in B)
    vals = np.zeros(N, dtype=complex)
    for idx in np.ndindex(*N):
        z = np.array([np.exp(2j * np.pi * idx[q] / N[q]) for q in range(d)])
        vals[idx] = np.linalg.det(M.eval_z(z))
    # forward DFT recovers c_m from samples of sum_m c_m z^m
    coeffs = np.fft.fftn(vals) / vals.size
    if _has_real_coefficients(M):
        # determinant of a real-coefficient matrix is real; drop rounding noise
        coeffs = coeffs.real.astype(complex)
    peak = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
    terms: dict = {}
    if peak > 0.0:
        keep = np.argwhere(np.abs(coeffs) > DET_PRUNE_REL * peak)
        for idx in keep:
            exp = tuple(int(idx[q]) if idx[q] <= B[q] else int(idx[q]) - N[q] for q in range(d))
            terms[exp] = complex(coeffs[tuple(idx)])
    return LaurentPoly(d, terms)


def det_is_zero(M: SymbolMatrix) -> bool:
    """Whether det M vanishes identically.

    Checked on the full interpolation grid (exact by the degree bound) with
    a per-point tolerance that scales with the Hadamard bound of the matrix.
    """
    if M.rows != M.cols:
        raise NonSquareMatrixError(f"matrix is {M.rows}x{M.cols}")
    d = M.dimension
    B = M.det_bounds()
    N = tuple(2 * b + 1 for b in B)
    for idx in np.ndindex(*N):
        z = np.array([np.exp(2j * np.pi * idx[q] / N[q]) for q in range(d)])
        if abs(np.linalg.det(M.eval_z(z))) > 1e-9 * max(M.hadamard_scale(z), 1e-30):
            return False
    return True


def normalize(p: LaurentPoly) -> LaurentPoly:
    """Canonical form under scalar and monomial multiples.

    Exponents are shifted so each variable's minimum exponent is zero, then
    the whole polynomial is divided by the coefficient of the
    lexicographically smallest exponent tuple.
    """
    if p.is_zero():
        raise ValueError("cannot normalize the zero polynomial")
    lo, _ = p.exponent_bounds()
    shifted = {tuple(e[q] - lo[q] for q in range(p.dimension)): c for e, c in p.terms.items()}
    lead = shifted[min(shifted)]
    return LaurentPoly(p.dimension, {e: c / lead for e, c in shifted.items()})


def poly_close(p: LaurentPoly, q: LaurentPoly, tol: float = 1e-8) -> bool:
    """Coefficient-map equality within per-coefficient tolerance."""
    if p.dimension != q.dimension:
        return False
    for e in set(p.terms) | set(q.terms):
        if abs(p.terms.get(e, 0.0) - q.terms.get(e, 0.0)) > tol:
            return False
    return True


def equal_up_to_scalar_monomial(p: LaurentPoly, q: LaurentPoly, tol: float = 1e-8) -> bool:
    """Whether p = c * z^a * q for some scalar c != 0 and multi-index a."""
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    return poly_close(normalize(p), normalize(q), tol)
