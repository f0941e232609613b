"""Finite frameworks, crystal motifs and the rigidity matrix.

A finite bar-joint framework is a graph together with a placement of its
vertices in R^d; bars are the edges, joints the vertices.  A crystal
framework is generated from a *motif*: a finite list of vertices placed in
a unit cell plus edges that may reach into neighbouring cells through
integer offsets.  ``build_patch`` truncates the infinite framework to a box
of cells, which is how infinite-framework identities are verified at desk
scale.

Rigidity matrix sign convention: the row of edge (i, j) carries p_i - p_j
in the column block of vertex i and p_j - p_i in the block of vertex j.
Kernels and ranks are invariant under the opposite choice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .linalg import nullspace, numerical_rank


class ZeroLengthEdgeError(ValueError):
    """An edge of geometric length zero violates properness."""


class DegenerateLatticeError(ValueError):
    """Lattice generators are linearly dependent."""


class DisconnectedMotifError(ValueError):
    """The motif does not generate a connected infinite framework."""


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertices 0 .. vertex_count-1."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.vertex_count <= 0:
            raise ValueError("vertex_count must be positive")
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"loop edge ({i}, {j}) not allowed in a simple graph")
            if not (0 <= i < self.vertex_count and 0 <= j < self.vertex_count):
                raise ValueError(f"edge ({i}, {j}) references a missing vertex")
            key = frozenset((i, j))
            if key in seen:
                raise ValueError(f"repeated edge ({i}, {j})")
            seen.add(key)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def is_connected(self) -> bool:
        if self.vertex_count == 1:
            return True
        adj = [[] for _ in range(self.vertex_count)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.vertex_count


@dataclass(frozen=True)
class FiniteFramework:
    """A graph placed in R^d (d = 2 or 3)."""

    graph: Graph
    placement: np.ndarray
    dimension: int

    def __post_init__(self):
        pts = np.asarray(self.placement, dtype=float)
        if pts.ndim != 2 or pts.shape != (self.graph.vertex_count, self.dimension):
            raise ValueError(
                f"placement must have shape ({self.graph.vertex_count}, {self.dimension})"
            )
        if self.dimension not in (2, 3):
            raise ValueError("dimension must be 2 or 3")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "placement", pts)
        for i, j in self.graph.edges:
            if np.linalg.norm(pts[i] - pts[j]) == 0.0:
                raise ZeroLengthEdgeError(f"edge ({i}, {j}) has zero length")

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    @property
    def edge_count(self) -> int:
        return self.graph.edge_count

    def edge_lengths(self) -> np.ndarray:
        return np.array(
            [np.linalg.norm(self.placement[i] - self.placement[j]) for i, j in self.graph.edges]
        )

    def spans_ambient_space(self) -> bool:
        """Whether the points affinely span R^d (not contained in a hyperplane)."""
        rel = self.placement - self.placement[0]
        return numerical_rank(rel) == self.dimension


@dataclass(frozen=True)
class Motif:
    """Generating data of a crystal framework.

    ``lattice`` holds the d translation generators as columns, so Cartesian
    coordinates are ``lattice @ fractional``.  ``vertices`` are fractional
    coordinates in [0, 1)^d and each edge is (i, j, offset): a bar from
    vertex i in the home cell to the translate of vertex j by the integer
    cell offset.
    """

    dimension: int
    lattice: np.ndarray
    vertices: np.ndarray
    edges: tuple[tuple[int, int, tuple[int, ...]], ...]

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError("dimension must be 2 or 3")
        d = self.dimension
        lat = np.asarray(self.lattice, dtype=float)
        if lat.shape != (d, d):
            raise ValueError(f"lattice must be a {d}x{d} matrix")
        if abs(np.linalg.det(lat)) < 1e-12:
            raise DegenerateLatticeError("lattice generators are linearly dependent")
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != d:
            raise ValueError("vertices must be an n x d array of fractional coordinates")
        if np.any(verts < -1e-12) or np.any(verts >= 1.0 + 1e-12):
            raise ValueError("fractional coordinates must lie in [0, 1)")
        lat = lat.copy()
        lat.setflags(write=False)
        verts = verts.copy()
        verts.setflags(write=False)
        object.__setattr__(self, "lattice", lat)
        object.__setattr__(self, "vertices", verts)

        n = len(verts)
        edges = []
        for i, j, off in self.edges:
            off = tuple(int(o) for o in off)
            if len(off) != d:
                raise ValueError(f"edge ({i}, {j}, {off}) offset has wrong length")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}, {off}) references a missing vertex")
            if i == j and all(o == 0 for o in off):
                raise ValueError(f"reflexive edge at vertex {i} needs a nonzero offset")
            edges.append((int(i), int(j), off))
        object.__setattr__(self, "edges", tuple(edges))

        for e in self.edges:
            if np.linalg.norm(self.edge_vector(e)) < 1e-12:
                raise ZeroLengthEdgeError(f"edge {e} has zero geometric length")
        if not self._generates_connected_framework():
            raise DisconnectedMotifError(
                "motif does not generate a connected framework "
                "(quotient graph disconnected or cycle gains do not span Z^d)"
            )

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def cartesian_vertices(self) -> np.ndarray:
        return self.vertices @ self.lattice.T

    def edge_vector(self, edge: tuple[int, int, tuple[int, ...]]) -> np.ndarray:
        """p_i - (p_j + L @ offset), the bar vector seen from vertex i."""
        i, j, off = edge
        pts = self.cartesian_vertices()
        return pts[i] - (pts[j] + self.lattice @ np.asarray(off, dtype=float))

    def max_offset(self) -> int:
        if not self.edges:
            return 0
        return max(max(abs(o) for o in off) for _, _, off in self.edges)

    def _generates_connected_framework(self) -> bool:
        # Quotient connectivity plus the requirement that the cycle gains
        # generate all of Z^d (gain-span test).
        n = self.vertex_count
        d = self.dimension
        adj: list[list[tuple[int, np.ndarray]]] = [[] for _ in range(n)]
        for i, j, off in self.edges:
            gain = np.asarray(off, dtype=int)
            adj[i].append((j, gain))
            adj[j].append((i, -gain))
        potential = {0: np.zeros(d, dtype=int)}
        order = [0]
        stack = [0]
        while stack:
            v = stack.pop()
            for w, gain in adj[v]:
                if w not in potential:
                    potential[w] = potential[v] + gain
                    order.append(w)
                    stack.append(w)
        if len(potential) != n:
            return False
        gains = []
        for i, j, off in self.edges:
            g = np.asarray(off, dtype=int) - (potential[j] - potential[i])
            if np.any(g != 0):
                gains.append(g)
        return _integer_span_is_full(gains, d)


def _integer_span_is_full(vectors: list[np.ndarray], d: int) -> bool:
    """Whether the integer vectors generate Z^d as a subgroup."""
    if not vectors:
        return d == 0
    rows = [list(map(int, v)) for v in vectors]
    # Hermite-style elimination with exact integers.
    col = 0
    for pivot_col in range(d):
        pivots = [r for r in range(col, len(rows)) if rows[r][pivot_col] != 0]
        if not pivots:
            return False
        while True:
            pivots = [r for r in range(col, len(rows)) if rows[r][pivot_col] != 0]
            if len(pivots) == 1:
                break
            pivots.sort(key=lambda r: abs(rows[r][pivot_col]))
            r0 = pivots[0]
            for r in pivots[1:]:
                q = rows[r][pivot_col] // rows[r0][pivot_col]
                rows[r] = [a - q * b for a, b in zip(rows[r], rows[r0])]
        r0 = [r for r in range(col, len(rows)) if rows[r][pivot_col] != 0][0]
        rows[col], rows[r0] = rows[r0], rows[col]
        col += 1
    det = 1
    for q in range(d):
        det *= rows[q][q]
    return abs(det) == 1


@dataclass(frozen=True)
class PatchFramework:
    """Finite truncation of a crystal framework to the cell box |n_q| <= K.

    Vertices are indexed lexicographically by (motif vertex, cell) and the
    patch keeps exactly the edges whose both endpoint cells lie in the box.
    """

    motif: Motif
    radius: int
    framework: FiniteFramework
    vertex_keys: tuple[tuple[int, tuple[int, ...]], ...]
    edge_keys: tuple[tuple[int, tuple[int, ...]], ...] = field(default=())

    def index_of(self, kappa: int, cell: tuple[int, ...]) -> int:
        return self._lookup[(kappa, tuple(cell))]

    def __post_init__(self):
        object.__setattr__(
            self, "_lookup", {key: idx for idx, key in enumerate(self.vertex_keys)}
        )

    def contains_cell(self, cell: tuple[int, ...]) -> bool:
        return all(abs(c) <= self.radius for c in cell)


def build_patch(motif: Motif, radius: int) -> PatchFramework:
    """Truncate the crystal framework of ``motif`` to cells with |n_q| <= radius."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    d = motif.dimension
    cells = [tuple(c) for c in itertools.product(range(-radius, radius + 1), repeat=d)]
    vertex_keys = sorted((kappa, cell) for kappa in range(motif.vertex_count) for cell in cells)
    lookup = {key: idx for idx, key in enumerate(vertex_keys)}
    pts = motif.cartesian_vertices()
    placement = np.array(
        [pts[kappa] + motif.lattice @ np.asarray(cell, dtype=float) for kappa, cell in vertex_keys]
    )
    edges = []
    edge_keys = []
    for e_idx, (i, j, off) in enumerate(motif.edges):
        for cell in cells:
            target = tuple(c + o for c, o in zip(cell, off))
            if all(abs(c) <= radius for c in target):
                edges.append((lookup[(i, cell)], lookup[(j, target)]))
                edge_keys.append((e_idx, cell))
    graph = Graph(len(vertex_keys), tuple(edges))
    fw = FiniteFramework(graph, placement, d)
    return PatchFramework(motif, radius, fw, tuple(vertex_keys), tuple(edge_keys))


def rigidity_matrix(fw: FiniteFramework) -> np.ndarray:
    """|E| x d|V| rigidity matrix of a finite framework."""
    d = fw.dimension
    R = np.zeros((fw.edge_count, d * fw.vertex_count))
    for row, (i, j) in enumerate(fw.graph.edges):
        v = fw.placement[i] - fw.placement[j]
        R[row, d * i : d * i + d] = v
        R[row, d * j : d * j + d] = -v
    return R


def flex_space(fw: FiniteFramework) -> np.ndarray:
    """Orthonormal basis (columns) of the infinitesimal flex space ker R."""
    return nullspace(rigidity_matrix(fw))


def stress_space(fw: FiniteFramework) -> np.ndarray:
    """Orthonormal basis (columns) of the self-stress space ker R^t."""
    return nullspace(rigidity_matrix(fw).T)


def motif_rigidity_matrix(motif: Motif) -> np.ndarray:
    """Periodic completion of the rigidity matrix onto 1-cell-periodic vectors.

    Row for edge (i, j, offset) carries the edge vector v_e in block i and
    -v_e in block j; for a reflexive edge the contributions cancel.
    """
    d = motif.dimension
    R = np.zeros((motif.edge_count, d * motif.vertex_count))
    for row, (i, j, off) in enumerate(motif.edges):
        v = motif.edge_vector((i, j, off))
        R[row, d * i : d * i + d] += v
        R[row, d * j : d * j + d] += -v
    return R


def generic_placement(n_points: int, dimension: int, seed: int,
                      base: np.ndarray | None = None, scale: float = 1.0,
                      max_denominator: int = 10**6) -> np.ndarray:
    """Seeded pseudo-random rational placement.

    Coordinates are rationals with denominator <= max_denominator, which is
    reproducible and generic in practice; genuine algebraic independence is
    not certifiable, so callers should test rank stability across seeds.
    """
    import random

    rng = random.Random(seed)
    pts = np.empty((n_points, dimension))
    for r in range(n_points):
        for c in range(dimension):
            den = rng.randint(2, max_denominator)
            num = rng.randint(0, den - 1)
            pts[r, c] = num / den
    pts *= scale
    if base is not None:
        pts += np.asarray(base, dtype=float)
    return pts
