"""Nonlinear deformations: strip linkages, flow-periodic paths, alternation flexes.

Three pieces of machinery live here.

* The trapezium strip: vertical bars of alternating heights a > b on a
  fixed base line, tops joined by equal cross bars.  Tilting the first
  tall bar by alpha forces the next bars through circle-intersection
  solves; the tilt gamma(alpha) returned after two trapezia is the strip's
  angle transmission function.  It is increasing and contractive up to a
  dead point alpha_1 where gamma' = 0, and lambda = gamma(alpha_1) is the
  locking angle: no joint of the two-way-infinite strip can tilt past it,
  which is the strip's rigidity mechanism.

* Flow-periodic deformation: a planar motif rides a composed affine flow
  V_beta H_alpha S_t (vertical/horizontal contractions and a skew) while
  Newton continuation solves for motif positions and the two contraction
  parameters that keep every bar length constant.  Vertex 0 is pinned;
  optional fractional-coordinate pins remove gauge freedom for
  non-generic motifs whose deformation is not unique.

* Alternation flexes: closed-form finite motions of the corner-joined
  squares and kagome frameworks in which rigid units rotate alternately
  by +/-theta about their centres while the lattice contracts by cos
  theta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .frameworks import (
    FiniteFramework,
    Graph,
    Motif,
    PatchFramework,
    build_patch,
)


class LockingError(ValueError):
    """Linkage solve left the feasible range."""

    def __init__(self, message: str, last_feasible: float):
        super().__init__(message)
        self.last_feasible = last_feasible


class ContinuationError(RuntimeError):
    """Newton continuation stopped before the end of the time grid."""

    def __init__(self, message: str, last_good_t: float):
        super().__init__(message)
        self.last_good_t = last_good_t


# ---------------------------------------------------------------------------
# trapezium strips
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrapeziumStrip:
    """Alternating-height strip geometry (a >= b > 0)."""

    a: float
    b: float
    spacing: float = 1.0
    cells: int = 2

    def __post_init__(self):
        if not (self.a >= self.b > 0.0):
            raise ValueError("strip needs a >= b > 0")
        if self.spacing <= 0.0:
            raise ValueError("base spacing must be positive")
        if self.cells < 1:
            raise ValueError("strip needs at least one cell")

    @property
    def cross_length(self) -> float:
        return math.hypot(self.spacing, self.a - self.b)


def _circle_intersections(c1, r1, c2, r2):
    (x1, y1), (x2, y2) = c1, c2
    dx, dy = x2 - x1, y2 - y1
    d = math.hypot(dx, dy)
    if d < 1e-15:
        return []
    aa = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    h2 = r1 * r1 - aa * aa
    if h2 < -1e-13:
        return []
    h = math.sqrt(max(h2, 0.0))
    mx, my = x1 + aa * dx / d, y1 + aa * dy / d
    px, py = -dy / d, dx / d
    return [(mx + h * px, my + h * py), (mx - h * px, my - h * py)]


class TransmissionSolver:
    """Continuation solver for the double trapezium.

    Keeps the last solved configuration so the branch of the circle
    intersections is chosen by continuity from the rest state (nearest
    intersection to the previous solution, never a fixed sign).
    """

    _MAX_STEP = 0.01

    def __init__(self, strip: TrapeziumStrip):
        self.strip = strip
        s, b, a = strip.spacing, strip.b, strip.a
        self.alpha = 0.0
        self.top1 = (s, b)
        self.top2 = (2.0 * s, a)

    def _solve_at(self, alpha: float):
        strip = self.strip
        s = strip.spacing
        ell = strip.cross_length
        top0 = (strip.a * math.sin(alpha), strip.a * math.cos(alpha))
        cands = _circle_intersections((s, 0.0), strip.b, top0, ell)
        if not cands:
            return None
        t1 = min(cands, key=lambda q: (q[0] - self.top1[0]) ** 2 + (q[1] - self.top1[1]) ** 2)
        cands = _circle_intersections((2.0 * s, 0.0), strip.a, t1, ell)
        if not cands:
            return None
        t2 = min(cands, key=lambda q: (q[0] - self.top2[0]) ** 2 + (q[1] - self.top2[1]) ** 2)
        return t1, t2

    def goto(self, alpha: float) -> float:
        """Walk the configuration to tilt ``alpha`` and return gamma."""
        if alpha < 0.0:
            raise ValueError("tilt must be nonnegative")
        while abs(alpha - self.alpha) > 1e-15:
            step = max(-self._MAX_STEP, min(self._MAX_STEP, alpha - self.alpha))
            target = self.alpha + step
            sol = self._solve_at(target)
            if sol is None:
                raise LockingError(
                    f"strip locks before tilt {alpha:.6g} "
                    f"(last feasible tilt {self.alpha:.6g})",
                    self.alpha,
                )
            self.top1, self.top2 = sol
            self.alpha = target
        return self.gamma

    @property
    def gamma(self) -> float:
        x, y = self.top2
        return math.atan2(x - 2.0 * self.strip.spacing, y)


def transmission(strip: TrapeziumStrip, alpha: float) -> float:
    """Tilt transmitted through two trapezia, gamma(alpha)."""
    return TransmissionSolver(strip).goto(alpha)


def transmission_sweep(strip: TrapeziumStrip, alphas) -> np.ndarray:
    """gamma over an increasing sequence of tilts, sharing one branch walk."""
    solver = TransmissionSolver(strip)
    return np.array([solver.goto(float(a)) for a in alphas])


def _gamma_slope(solver: TransmissionSolver, alpha: float, h: float = 1e-6) -> float:
    """gamma'(alpha) by central differences with one Richardson refinement."""
    def central(hh: float) -> float:
        lo = max(alpha - hh, 0.0)
        g_hi = solver.goto(alpha + hh)
        g_lo = solver.goto(lo)
        return (g_hi - g_lo) / (alpha + hh - lo)

    d1 = central(h)
    d2 = central(h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def locking_angle(strip: TrapeziumStrip) -> tuple[float, float]:
    """(alpha_1, lambda): first dead point of gamma and the locking angle.

    alpha_1 is located by bisection on a sign change of the finite
    difference gamma'; raises LockingError with the feasibility bound when
    gamma' stays positive over the whole feasible range.
    """
    if strip.a <= strip.b:
        raise ValueError("locking needs strictly alternating heights a > b")
    solver = TransmissionSolver(strip)
    step = 0.02
    lo = 0.0
    alpha = step
    hi = None
    feasible_end = None
    while hi is None:
        try:
            slope = _gamma_slope(solver, alpha)
        except LockingError as exc:
            feasible_end = exc.last_feasible
            break
        if slope <= 0.0:
            hi = alpha
            break
        lo = alpha
        alpha += step
    if hi is None:
        raise LockingError(
            f"gamma' has no sign change on the feasible range (0, {feasible_end:.6g})",
            feasible_end if feasible_end is not None else lo,
        )
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if _gamma_slope(solver, mid) > 0.0:
            lo = mid
        else:
            hi = mid
    alpha1 = 0.5 * (lo + hi)
    return alpha1, solver.goto(alpha1)


def backward_iteration(strip: TrapeziumStrip, start: float,
                       max_steps: int = 10_000) -> tuple[list[float], bool]:
    """Iterate the inverse transmission from a small output tilt.

    Returns the sequence start = A_0 < A_{-1} < ... of tilts obtained by
    solving gamma(x) = previous, and whether the sequence escaped past the
    dead point (True is the rigidity witness: a two-way-infinite strip
    cannot tilt at all since finitely many cells to the left would have to
    exceed alpha_1).
    """
    alpha1, lam = locking_angle(strip)
    if not 0.0 < start < lam:
        raise ValueError(f"start tilt must lie in (0, {lam:.6g})")
    solver = TransmissionSolver(strip)
    angles = [start]
    for _ in range(max_steps):
        target = angles[-1]
        if target > lam:
            return angles, True
        lo, hi = target, alpha1
        if solver.goto(hi) < target:
            return angles, True
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if solver.goto(mid) < target:
                lo = mid
            else:
                hi = mid
        angles.append(0.5 * (lo + hi))
    return angles, False


def strip_framework(strip: TrapeziumStrip) -> FiniteFramework:
    """The strip as a finite framework: base chain, uprights and top chain."""
    n = strip.cells + 1
    heights = [strip.a if k % 2 == 0 else strip.b for k in range(n)]
    base = [(k * strip.spacing, 0.0) for k in range(n)]
    tops = [(k * strip.spacing, heights[k]) for k in range(n)]
    pts = np.array(base + tops)
    edges = []
    for k in range(n - 1):
        edges.append((k, k + 1))          # base chain
        edges.append((n + k, n + k + 1))  # top chain
    for k in range(n):
        edges.append((k, n + k))          # uprights
    return FiniteFramework(Graph(2 * n, tuple(edges)), pts, 2)


# ---------------------------------------------------------------------------
# flow-periodic deformation
# ---------------------------------------------------------------------------

def skew_flow(t: float) -> np.ndarray:
    """Skew transformation preserving cyclic width and height."""
    return np.array([[1.0, math.sin(t)], [1.0 - math.cos(t), 1.0]])


def composed_flow(alpha: float, beta: float, t: float) -> np.ndarray:
    """V_beta H_alpha S_t: contractions composed with the skew."""
    H = np.array([[1.0 - alpha, 0.0], [0.0, 1.0]])
    V = np.array([[1.0, 0.0], [0.0, 1.0 - beta]])
    return V @ H @ skew_flow(t)


def _composed_flow_derivatives(alpha: float, beta: float, t: float):
    S = skew_flow(t)
    H = np.array([[1.0 - alpha, 0.0], [0.0, 1.0]])
    V = np.array([[1.0, 0.0], [0.0, 1.0 - beta]])
    dH = np.array([[-1.0, 0.0], [0.0, 0.0]])
    dV = np.array([[0.0, 0.0], [0.0, -1.0]])
    return V @ H @ S, V @ dH @ S, dV @ H @ S


@dataclass(frozen=True)
class DeformationPath:
    """Time-indexed flow-periodic deformation of a planar motif."""

    motif: Motif
    times: tuple[float, ...]
    placements: np.ndarray   # (steps, |F_v|, 2) Cartesian positions
    lattices: np.ndarray     # (steps, 2, 2)
    alphas: np.ndarray
    betas: np.ndarray
    max_drift: np.ndarray    # per-step max bar-length drift

    def to_csv(self, stream) -> None:
        n = self.motif.vertex_count
        cols = ["t", "alpha", "beta"]
        for v in range(n):
            cols += [f"v{v}x", f"v{v}y"]
        cols.append("max_drift")
        stream.write(",".join(cols) + "\n")
        for k, t in enumerate(self.times):
            row = [t, self.alphas[k], self.betas[k]]
            row += list(self.placements[k].reshape(-1))
            row.append(self.max_drift[k])
            stream.write(",".join("%.17g" % x for x in row) + "\n")


def _drift(motif: Motif, pts: np.ndarray, lattice: np.ndarray, lengths: np.ndarray) -> float:
    worst = 0.0
    for r, (i, j, off) in enumerate(motif.edges):
        d = pts[i] - pts[j] - lattice @ np.asarray(off, float)
        worst = max(worst, abs(math.hypot(*d) - lengths[r]))
    return worst


def flow_periodic_deform(motif: Motif, times, pins=(),
                         tol: float = 1e-12, max_iter: int = 25,
                         max_halvings: int = 8) -> DeformationPath:
    """Deform a planar motif along the composed flow, keeping bars rigid.

    Unknowns at each time are the Cartesian positions of all motif
    vertices except vertex 0 (pinned at its start position) plus the two
    contraction parameters; constraints are all bar lengths, reentrant
    bars reaching through the flowing lattice.  ``pins`` lists extra
    (vertex, axis) pairs whose fractional coordinate is held at its start
    value; use them to select a branch when the motif is non-generic and
    the deformation is not unique.

    Newton steps are damped least-squares solves; a failed time step is
    subdivided (halved up to ``max_halvings`` times) and a step that still
    fails raises ContinuationError carrying the last good time.
    """
    if motif.dimension != 2:
        raise ValueError("flow-periodic deformation is implemented for dimension 2")
    times = [float(t) for t in times]
    if not times or abs(times[0]) > 1e-15:
        raise ValueError("time grid must start at 0")
    L0 = motif.lattice
    p_start = motif.cartesian_vertices()
    n = motif.vertex_count
    lengths = np.array([np.linalg.norm(motif.edge_vector(e)) for e in motif.edges])
    lengths2 = lengths**2
    frac0 = motif.vertices
    pins = tuple((int(v), int(ax)) for v, ax in pins)
    for v, ax in pins:
        if not (0 <= v < n and ax in (0, 1)):
            raise ValueError(f"invalid pin ({v}, {ax})")

    def unpack(x):
        pts = np.vstack([p_start[0], x[: 2 * (n - 1)].reshape(n - 1, 2)])
        return pts, x[-2], x[-1]

    def residual(x, t):
        pts, alpha, beta = unpack(x)
        L = composed_flow(alpha, beta, t) @ L0
        F = np.empty(len(motif.edges) + len(pins))
        for r, (i, j, off) in enumerate(motif.edges):
            d = pts[i] - pts[j] - L @ np.asarray(off, float)
            F[r] = d @ d - lengths2[r]
        if pins:
            Linv = np.linalg.inv(L)
            for k, (v, ax) in enumerate(pins):
                F[len(motif.edges) + k] = (Linv @ pts[v])[ax] - frac0[v, ax]
        return F

    def jacobian(x, t):
        pts, alpha, beta = unpack(x)
        A, dAa, dAb = _composed_flow_derivatives(alpha, beta, t)
        L = A @ L0
        dLa, dLb = dAa @ L0, dAb @ L0
        m = len(motif.edges)
        J = np.zeros((m + len(pins), 2 * (n - 1) + 2))
        for r, (i, j, off) in enumerate(motif.edges):
            offv = np.asarray(off, float)
            d = pts[i] - pts[j] - L @ offv
            for v, sgn in ((i, 1.0), (j, -1.0)):
                if v >= 1:
                    J[r, 2 * (v - 1) : 2 * (v - 1) + 2] += 2.0 * sgn * d
            J[r, -2] = -2.0 * d @ (dLa @ offv)
            J[r, -1] = -2.0 * d @ (dLb @ offv)
        if pins:
            Linv = np.linalg.inv(L)
            for k, (v, ax) in enumerate(pins):
                row = m + k
                if v >= 1:
                    J[row, 2 * (v - 1) : 2 * (v - 1) + 2] = Linv[ax]
                J[row, -2] = (-Linv @ dLa @ Linv @ pts[v])[ax]
                J[row, -1] = (-Linv @ dLb @ Linv @ pts[v])[ax]
        return J

    def newton(x, t):
        for _ in range(max_iter):
            F = residual(x, t)
            err = np.max(np.abs(F))
            if err < tol:
                return x, True
            J = jacobian(x, t)
            dx, *_ = np.linalg.lstsq(J, -F, rcond=None)
            lam = 1.0
            while lam > 1e-8:
                Fn = residual(x + lam * dx, t)
                if np.max(np.abs(Fn)) < err:
                    break
                lam *= 0.5
            x = x + lam * dx
        return x, np.max(np.abs(residual(x, t))) < tol

    def predict(x, t_from, t_to):
        pts, alpha, beta = unpack(x)
        M = (composed_flow(alpha, beta, t_to) @ L0) @ np.linalg.inv(
            composed_flow(alpha, beta, t_from) @ L0
        )
        guess = x.copy()
        moved = (pts[1:] @ M.T).reshape(-1)
        guess[: 2 * (n - 1)] = moved
        return guess

    x = np.concatenate([p_start[1:].reshape(-1), [0.0, 0.0]])
    states = [(times[0], x.copy())]
    for t_next in times[1:]:
        t_prev, x_prev = states[-1]
        n_sub = 1
        success = False
        while n_sub <= 2**max_halvings:
            x_try = x_prev.copy()
            t_cur = t_prev
            ok = True
            for step in range(1, n_sub + 1):
                t_sub = t_prev + (t_next - t_prev) * step / n_sub
                x_try, converged = newton(predict(x_try, t_cur, t_sub), t_sub)
                if not converged:
                    ok = False
                    break
                t_cur = t_sub
            if ok:
                success = True
                break
            n_sub *= 2
        if not success:
            raise ContinuationError(
                f"Newton continuation stalled between t={t_prev:.6g} and t={t_next:.6g}",
                t_prev,
            )
        states.append((t_next, x_try.copy()))

    placements = np.empty((len(states), n, 2))
    lattices = np.empty((len(states), 2, 2))
    alphas = np.empty(len(states))
    betas = np.empty(len(states))
    drifts = np.empty(len(states))
    for k, (t, xk) in enumerate(states):
        pts, alpha, beta = unpack(xk)
        L = composed_flow(alpha, beta, t) @ L0
        placements[k] = pts
        lattices[k] = L
        alphas[k] = alpha
        betas[k] = beta
        drifts[k] = _drift(motif, pts, L, lengths)
    return DeformationPath(
        motif, tuple(t for t, _ in states), placements, lattices, alphas, betas, drifts
    )


# ---------------------------------------------------------------------------
# alternation flexes
# ---------------------------------------------------------------------------

def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def _alternation_units(motif: Motif, name: str):
    """Owning rigid units of each motif vertex: (centre, sign, cell shift).

    A unit is described relative to the home cell; vertex (kappa, n)
    belongs to the unit anchored at cell n + shift with the given rotation
    sign.  Signs are per-unit constants for kagome (all up triangles turn
    one way, all down triangles the other) and alternate with the cell
    parity for the squares framework.
    """
    pts = motif.cartesian_vertices()
    L = motif.lattice
    if name == "kagome":
        up_centre = pts.mean(axis=0)
        down_centre = (pts[0] + (pts[1] - L[:, 0]) + (pts[2] - L[:, 1])) / 3.0
        owners = {
            0: [(up_centre, +1.0, (0, 0), None), (down_centre, -1.0, (0, 0), None)],
            1: [(up_centre, +1.0, (0, 0), None), (down_centre, -1.0, (1, 0), None)],
            2: [(up_centre, +1.0, (0, 0), None), (down_centre, -1.0, (0, 1), None)],
        }
        return owners
    if name == "squares":
        centre = np.array([0.5, 0.5])
        owners = {
            0: [(centre, None, (0, 0), "parity"), (centre, None, (-1, 0), "parity")],
            1: [(centre, None, (0, 0), "parity"), (centre, None, (0, 1), "parity")],
        }
        return owners
    raise ValueError(f"no alternation flex for '{name}'")


def alternation_flex(name: str, theta: float, radius: int = 2) -> PatchFramework:
    """Patch of the alternation flex at turn angle theta.

    Rigid units rotate alternately by +/- theta about their centres while
    unit centres contract towards the origin by cos(theta); corner
    contacts are preserved exactly.  Each shared vertex is computed from
    every unit that owns it and the copies are required to coincide.
    """
    from .catalog import catalog_motif

    if abs(theta) >= math.pi / 2:
        raise ValueError("turn angle must satisfy |theta| < pi/2")
    motif = catalog_motif(name)
    owners = _alternation_units(motif, name)
    patch = build_patch(motif, radius)
    L = motif.lattice
    pts = motif.cartesian_vertices()
    scale = math.cos(theta)

    new_placement = np.empty_like(patch.framework.placement)
    for idx, (kappa, cell) in enumerate(patch.vertex_keys):
        p = pts[kappa] + L @ np.asarray(cell, float)
        candidates = []
        for centre0, sign, shift, mode in owners[kappa]:
            unit_cell = tuple(c + s for c, s in zip(cell, shift))
            centre = centre0 + L @ np.asarray(unit_cell, float)
            if mode == "parity":
                sgn = 1.0 if sum(unit_cell) % 2 == 0 else -1.0
            else:
                sgn = sign
            candidates.append(scale * centre + _rotation(sgn * theta) @ (p - centre))
        for other in candidates[1:]:
            if np.max(np.abs(other - candidates[0])) > 1e-12:
                raise AssertionError("alternation flex lost a corner contact")
        new_placement[idx] = candidates[0]

    fw = FiniteFramework(patch.framework.graph, new_placement, 2)
    return PatchFramework(motif, radius, fw, patch.vertex_keys, patch.edge_keys)
