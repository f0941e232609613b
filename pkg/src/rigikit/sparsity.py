"""Counting certificates: Maxwell balances and (k, l) pebble games.

The pebble game decides (k, l)-sparsity incrementally: every vertex starts
with k pebbles, inserting an edge needs l+1 pebbles gathered on its two
endpoints, and pebbles are recovered by reversing directed paths in the
already-accepted edge set.  With (k, l) = (2, 3) on a simple graph this is
the classical planar combinatorial-rigidity count; with (2, 2) on the
quotient multigraph of a motif (offsets stripped) it is the periodic
fixed-torus count.

Edges are processed in input order and pebble searches are depth-first
with lowest-index tie-breaking, so runs are deterministic.  Which edges
end up accepted can depend on that order; the tight/dependent verdict
cannot.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .frameworks import FiniteFramework, Motif


@dataclass
class PebbleState:
    """Pebble counts and the orientation of accepted edges."""

    k: int
    l: int
    vertex_count: int
    pebbles: list[int] = field(init=False)
    out_edges: list[list[int]] = field(init=False)

    def __post_init__(self):
        self.pebbles = [self.k] * self.vertex_count
        self.out_edges = [[] for _ in range(self.vertex_count)]

    def _find_pebble(self, root: int, blocked: set[int]) -> list[int] | None:
        """Depth-first path from root to a vertex holding a free pebble."""
        stack = [(root, [root])]
        seen = {root} | blocked
        while stack:
            v, path = stack.pop()
            # lowest-index first; stack reversal keeps DFS order deterministic
            for w in sorted(self.out_edges[v], reverse=True):
                if w in seen:
                    continue
                if self.pebbles[w] > 0:
                    return path + [w]
                seen.add(w)
                stack.append((w, path + [w]))
        return None

    def _pull_pebble(self, v: int, other: int) -> bool:
        path = self._find_pebble(v, {other})
        if path is None:
            return False
        for a, b in zip(path, path[1:]):
            self.out_edges[a].remove(b)
            self.out_edges[b].append(a)
        self.pebbles[path[-1]] -= 1
        self.pebbles[v] += 1
        return True

    def try_insert(self, i: int, j: int) -> bool:
        """Accept edge (i, j) iff it keeps the edge set (k, l)-sparse."""
        if i == j:
            # a loop needs l+1 pebbles on one vertex; impossible for l >= k
            if self.l + 1 > self.k:
                return False
            while self.pebbles[i] < self.l + 1:
                if not self._pull_pebble(i, i):
                    return False
            self.pebbles[i] -= 1
            self.out_edges[i].append(i)
            return True
        while self.pebbles[i] + self.pebbles[j] < self.l + 1:
            moved = False
            if self.pebbles[i] < self.k and self._pull_pebble(i, j):
                moved = True
            elif self.pebbles[j] < self.k and self._pull_pebble(j, i):
                moved = True
            if not moved:
                return False
        # orient away from the endpoint that pays the pebble
        if self.pebbles[i] > 0:
            self.pebbles[i] -= 1
            self.out_edges[i].append(j)
        else:
            self.pebbles[j] -= 1
            self.out_edges[j].append(i)
        return True


@dataclass(frozen=True)
class PebbleResult:
    verdict: str  # "tight" | "sparse" | "dependent"
    independent: tuple[int, ...]
    rejected: tuple[int, ...]
    k: int
    l: int
    vertex_count: int
    edge_count: int

    @property
    def is_independent(self) -> bool:
        return not self.rejected


def pebble_game(vertex_count: int, edges, k: int = 2, l: int = 3) -> PebbleResult:
    """Run the (k, l) pebble game over ``edges`` in input order.

    ``edges`` is a sequence of (i, j) pairs; loops and parallel edges are
    permitted (parallel edges matter for l <= 2k-1, loops for l < k).
    """
    if k < 1 or l < 0 or l >= 2 * k:
        raise ValueError("pebble game needs k >= 1 and 0 <= l < 2k")
    state = PebbleState(k, l, vertex_count)
    accepted, rejected = [], []
    for idx, (i, j) in enumerate(edges):
        if not (0 <= i < vertex_count and 0 <= j < vertex_count):
            raise ValueError(f"edge ({i}, {j}) references a missing vertex")
        (accepted if state.try_insert(i, j) else rejected).append(idx)
    if rejected:
        verdict = "dependent"
    elif len(accepted) == k * vertex_count - l:
        verdict = "tight"
    else:
        verdict = "sparse"
    return PebbleResult(
        verdict, tuple(accepted), tuple(rejected), k, l, vertex_count, len(edges)
    )


@dataclass(frozen=True)
class CountReport:
    vertices: int
    edges: int
    dimension: int
    maxwell_balance: int
    verdict: str  # "under-braced" | "maxwell" | "over-braced"
    periodic: bool


def maxwell_report(obj: Motif | FiniteFramework) -> CountReport:
    """Degree-of-freedom balance.

    Motifs balance d|F_v| - |F_e| (per-cell count); finite frameworks
    balance d|V| - |E| - d(d+1)/2 (rigid motions removed).
    """
    if isinstance(obj, Motif):
        balance = obj.dimension * obj.vertex_count - obj.edge_count
        v, e, d, periodic = obj.vertex_count, obj.edge_count, obj.dimension, True
    else:
        d = obj.dimension
        balance = d * obj.vertex_count - obj.edge_count - d * (d + 1) // 2
        v, e, periodic = obj.vertex_count, obj.edge_count, False
    verdict = "maxwell" if balance == 0 else ("under-braced" if balance > 0 else "over-braced")
    return CountReport(v, e, d, balance, verdict, periodic)


@dataclass(frozen=True)
class RossComponent:
    vertices: tuple[int, ...]
    edge_indices: tuple[int, ...]
    wraps: bool  # some cycle in the component has a nonzero offset gain


@dataclass(frozen=True)
class RossReport:
    balance_ok: bool      # 2|F_v| - |F_e| = 2
    sparse_ok: bool       # every submotif satisfies 2|F_v'| - |F_e'| >= 2
    passes: bool
    components: tuple[RossComponent, ...]
    partial_wrap_check: bool = True


def ross_check(motif: Motif) -> RossReport:
    """Periodic fixed-torus counting conditions for a planar motif.

    The count is decided exactly by the (2, 2) pebble game on the quotient
    multigraph plus the global equality.  For each connected component of
    the accepted edge set the report notes whether its cycle gains wrap
    the torus; this is a partial proxy for the homotopy condition, which
    quantifies over all tight submotifs and is not checked exhaustively.
    """
    if motif.dimension != 2:
        raise ValueError("periodic counting check is for dimension 2")
    quotient = [(i, j) for i, j, _ in motif.edges]
    result = pebble_game(motif.vertex_count, quotient, k=2, l=2)
    balance_ok = 2 * motif.vertex_count - motif.edge_count == 2
    sparse_ok = not result.rejected

    # connected components of the accepted edge subgraph, with gain spans
    parent = list(range(motif.vertex_count))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for idx in result.independent:
        i, j, _ = motif.edges[idx]
        parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for idx in result.independent:
        groups.setdefault(find(motif.edges[idx][0]), []).append(idx)

    components = []
    for root, edge_idxs in sorted(groups.items()):
        verts = sorted({v for idx in edge_idxs for v in motif.edges[idx][:2]})
        potential: dict[int, np.ndarray] = {verts[0]: np.zeros(2, dtype=int)}
        adj: dict[int, list[tuple[int, np.ndarray]]] = {v: [] for v in verts}
        for idx in edge_idxs:
            i, j, off = motif.edges[idx]
            g = np.asarray(off, dtype=int)
            adj[i].append((j, g))
            adj[j].append((i, -g))
        stack = [verts[0]]
        while stack:
            v = stack.pop()
            for w, g in adj[v]:
                if w not in potential:
                    potential[w] = potential[v] + g
                    stack.append(w)
        wraps = False
        for idx in edge_idxs:
            i, j, off = motif.edges[idx]
            gain = np.asarray(off, dtype=int) - (potential[j] - potential[i])
            if np.any(gain != 0):
                wraps = True
                break
        components.append(RossComponent(tuple(verts), tuple(edge_idxs), wraps))

    return RossReport(balance_ok, sparse_ok, balance_ok and sparse_ok, tuple(components))
