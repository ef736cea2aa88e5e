"""Exact and floating Dirichlet solves on tree networks.

The solver is a two-pass tree elimination: a backward sweep expresses
every free vertex as an affine function of its parent, a forward sweep
substitutes values.  With Fraction conductances the exact mode returns
the energy minimiser exactly; float mode runs the same direct algorithm
in double precision for large levels.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .addressing import Vertex, canonicalize, vertex_str
from .network import BallRegion, LevelGraph


@dataclass
class VertexFunction:
    """Values on every vertex of a level graph."""

    graph: LevelGraph
    values: dict[Vertex, object]
    mode: str = "exact"

    def __getitem__(self, v: Vertex):
        return self.values[canonicalize(*v)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["vertex", "value_exact", "value_float"])
        for v in self.graph.vertices:
            val = self.values[v]
            exact = str(val) if isinstance(val, Fraction) else ""
            writer.writerow([vertex_str(v), exact, repr(float(val))])
        return buf.getvalue()


def _as_mode(x, mode: str):
    return Fraction(x) if mode == "exact" else float(x)


def solve_dirichlet(
    graph: LevelGraph,
    pinned: Mapping[Vertex, object],
    masses: Optional[Mapping[Vertex, object]] = None,
    mode: str = "exact",
) -> VertexFunction:
    """Energy minimiser among functions with the pinned values.

    At every free vertex the solution satisfies the weighted-mean
    property, shifted by the vertex mass when `masses` is given (discrete
    Green problems).  Pinning every vertex returns the pinned data.
    """
    if mode not in ("exact", "float"):
        raise ValueError("mode must be 'exact' or 'float'")
    if not pinned:
        raise ValueError("constraints must pin at least one vertex")
    pin = {}
    for v, val in pinned.items():
        pin[graph.vertex_id(v)] = _as_mode(val, mode)
    load = [_as_mode(0, mode)] * len(graph.vertices)
    if masses:
        for v, m in masses.items():
            load[graph.vertex_id(v)] += _as_mode(m, mode)

    # sweep the free subgraph only; cycles through pinned vertices are fine
    # (pinned values are Dirichlet data, their mutual topology is irrelevant)
    n = len(graph.vertices)
    zero = _as_mode(0, mode)
    one = _as_mode(1, mode)
    parent = [-1] * n
    parent_cond = [zero] * n
    seen = [False] * n
    order = []
    for start in range(n):
        if seen[start] or start in pin:
            continue
        seen[start] = True
        queue = deque([start])
        while queue:
            i = queue.popleft()
            order.append(i)
            for j, c in graph.adj[i]:
                if j in pin:
                    continue
                if not seen[j]:
                    seen[j] = True
                    parent[j] = i
                    parent_cond[j] = c if mode == "exact" else float(c)
                    queue.append(j)
                elif j != parent[i]:
                    raise RuntimeError("free subgraph contains a cycle")

    alpha = [zero] * n
    beta = [zero] * n
    agg_c = [zero] * n  # sum of k_i (1 - alpha_i) over processed children
    agg_b = [zero] * n  # sum of k_i beta_i, plus pinned-neighbour terms
    for i in reversed(order):
        pinned_c = zero
        pinned_b = zero
        for j, c in graph.adj[i]:
            if j in pin:
                cc = c if mode == "exact" else float(c)
                pinned_c += cc
                pinned_b += cc * pin[j]
        pc = parent_cond[i] if parent[i] >= 0 else zero
        denom = agg_c[i] + pinned_c + pc
        if denom == 0:
            raise RuntimeError("floating component without pinned vertex")
        alpha[i] = pc / denom if parent[i] >= 0 else zero
        beta[i] = (agg_b[i] + pinned_b + load[i]) / denom
        p = parent[i]
        if p >= 0:
            agg_c[p] += parent_cond[i] * (one - alpha[i])
            agg_b[p] += parent_cond[i] * beta[i]

    values = [zero] * n
    for i, val in pin.items():
        values[i] = val
    for i in order:
        p = parent[i]
        values[i] = beta[i] if p < 0 else alpha[i] * values[p] + beta[i]
    return VertexFunction(graph, {graph.vertices[i]: values[i] for i in range(n)}, mode)


def dirichlet_energy(graph: LevelGraph, f: VertexFunction):
    """Sum over edges of conductance times squared increment."""
    total = Fraction(0) if f.mode == "exact" else 0.0
    for i, j, c in graph.edges:
        du = f.values[graph.vertices[i]] - f.values[graph.vertices[j]]
        cc = c if f.mode == "exact" else float(c)
        total += cc * du * du
    return total


def effective_resistance(graph: LevelGraph, a, b, mode: str = "exact"):
    """1 / inf{ E(u) : u = 0 on A, u = 1 on B }."""
    a = {canonicalize(*v) for v in a}
    b = {canonicalize(*v) for v in b}
    if not a or not b:
        raise ValueError("both vertex sets must be nonempty")
    if a & b:
        raise ValueError("vertex sets must be disjoint")
    pinned = {v: 0 for v in a}
    pinned.update({v: 1 for v in b})
    u = solve_dirichlet(graph, pinned, mode=mode)
    e = dirichlet_energy(graph, u)
    return 1 / e if mode == "exact" else 1.0 / e


def equilibrium_potential(graph: LevelGraph, x: Vertex, grounded, mode: str = "exact"):
    """Unit potential at x, zero on the grounded set; returns (psi, R)."""
    x = canonicalize(*x)
    grounded = {canonicalize(*v) for v in grounded}
    if x in grounded:
        raise ValueError("source vertex is grounded")
    pinned = {v: 0 for v in grounded}
    pinned[x] = 1
    psi = solve_dirichlet(graph, pinned, mode=mode)
    e = dirichlet_energy(graph, psi)
    return psi, (1 / e if mode == "exact" else 1.0 / e)


def green_g1(
    graph: LevelGraph,
    region: BallRegion,
    masses: Mapping[Vertex, object],
    mode: str = "exact",
) -> VertexFunction:
    """Discrete Green problem on a ball: zero on the frontier, Laplacian = mass inside."""
    interior = region.interior
    for v in masses:
        if canonicalize(*v) not in interior:
            raise ValueError(f"mass on non-interior vertex {vertex_str(v)}")
    pinned = {v: 0 for v in region.frontier}
    if not pinned:
        raise ValueError("ball has empty frontier; enlarge the level or shrink the radius")
    # vertices outside the closed ball (beyond the frontier) stay at zero
    outside = {
        v: 0
        for v in graph.vertices
        if v not in interior and v not in region.frontier
    }
    pinned.update(outside)
    return solve_dirichlet(graph, pinned, masses=masses, mode=mode)
