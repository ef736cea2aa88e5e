"""Exact self-similar network reductions (s0 = 1/2).

The tree structure lets whole grounded subtrees collapse to single
conductances by series/parallel algebra, so discrete solves at any level
L reduce to small ladder networks.  Everything here is an exact Schur
complement of the level-L lattice problem, which makes deep-level checks
(L = 12 and beyond) cheap while staying bit-identical to the full solve.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .addressing import Vertex, canonicalize

GROUND = "GND"


class SimpleNetwork:
    """Small conductance network with parallel-edge merging."""

    def __init__(self):
        self.vertices: list = []
        self.index: dict = {}
        self._cond: dict[frozenset, Fraction] = {}
        self.edges: list = []
        self.adj: list = []
        self._final = False

    def add_vertex(self, name):
        if name not in self.index:
            self.index[name] = len(self.vertices)
            self.vertices.append(name)
        return name

    def add_edge(self, u, v, cond: Fraction):
        if self._final:
            raise RuntimeError("network already finalised")
        if cond <= 0:
            raise ValueError("conductance must be positive")
        self.add_vertex(u)
        self.add_vertex(v)
        key = frozenset((u, v))
        if len(key) != 2:
            raise ValueError("self-loops not allowed")
        self._cond[key] = self._cond.get(key, Fraction(0)) + Fraction(cond)

    def finalise(self):
        if self._final:
            return self
        self.adj = [[] for _ in self.vertices]
        for key, c in sorted(self._cond.items(), key=lambda kv: sorted(map(str, kv[0]))):
            u, v = key
            i, j = self.index[u], self.index[v]
            self.edges.append((min(i, j), max(i, j), c))
            self.adj[i].append((j, c))
            self.adj[j].append((i, c))
        self._final = True
        return self

    def vertex_id(self, v):
        try:
            return self.index[v]
        except KeyError:
            raise KeyError(f"vertex {v!r} not in network") from None


def _series(a: Fraction, b: Fraction) -> Fraction:
    return a * b / (a + b)


@lru_cache(maxsize=None)
def bottom_grounded_conductance(level: int, s0: Fraction = Fraction(1, 2)) -> Fraction:
    """Effective conductance q1 -> bottom Cantor lattice at the given level.

    This is the discrete energy of the top-to-bottom harmonic function; it
    increases to 1/s0 + 1 (= 3 at s0 = 1/2) as the level grows.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    if level == 0:
        return Fraction(2)
    prev = bottom_grounded_conductance(level - 1, s0)
    return 2 * _series(1 / Fraction(s0), prev / (1 - Fraction(s0)))


@lru_cache(maxsize=None)
def upward_grounded_conductance(level: int) -> Fraction:
    """Effective conductance q2 -> ({q1} + hanging Cantor pieces), s0 = 1/2.

    Discrete energy of the upward ladder harmonic function; increases to 3/2.
    """
    if level < 0:
        raise ValueError("level must be non-negative")
    if level == 0:
        return Fraction(1)
    c = bottom_grounded_conductance(level - 1)
    e = upward_grounded_conductance(level - 1)
    return _series(Fraction(2), c + 2 * e)


def udown_value_q0(level: int, s0: Fraction = Fraction(1, 2)) -> Fraction:
    """Discrete value at q0 of the top-to-bottom solve (decreases to s2/2)."""
    if level < 1:
        raise ValueError("need level >= 1 to see q0")
    s0 = Fraction(s0)
    c = bottom_grounded_conductance(level - 1, s0)
    up = 1 / s0
    down = c / (1 - s0)
    return up / (up + down)


def uup_chain_network(level: int) -> tuple[SimpleNetwork, list]:
    """Ladder network of the upward harmonic solve at the given level.

    Nodes are q2 and the spine junctions B_m = F_{0^m 2}(q1); every
    hanging grounded subtree is collapsed to its exact conductance.
    Returns (network, [B_0, ..., B_{level-1}]).
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    net = SimpleNetwork()
    q2: Vertex = ("", 2)
    nodes = [canonicalize("0" * m + "2", 1) for m in range(level)]
    prev = q2
    for m, node in enumerate(nodes):
        sigma = Fraction(2 ** (m + 1))
        net.add_edge(prev, node, sigma)
        hang = sigma * bottom_grounded_conductance(level - m - 1) / 2
        net.add_edge(node, GROUND, hang)
        prev = node
    net.add_edge(nodes[-1], GROUND, Fraction(2**level))  # edge to the grounded limit q1
    return net.finalise(), nodes


def uup_values(level: int) -> dict[int, Fraction]:
    """Discrete ladder values a_m(level) at F_{0^m 2}(q1) (converge to 4^-(m+1))."""
    from .dirichlet import solve_dirichlet

    net, nodes = uup_chain_network(level)
    sol = solve_dirichlet(net, {("", 2): 1, GROUND: 0})
    return {m: sol.values[node] for m, node in enumerate(nodes)}


def uup_energy(level: int) -> Fraction:
    """Discrete energy of the upward solve (equals the chain reduction)."""
    return upward_grounded_conductance(level)


def udown_energy(level: int, s0: Fraction = Fraction(1, 2)) -> Fraction:
    return bottom_grounded_conductance(level, s0)


def x_point_word(n: int, m: int, k: int) -> str:
    return "0" + "2" * (n - 1) + "0" * m + "2" + "3" * k


def y_point_word(n: int, k: int) -> str:
    return "2" + "0" * (n - 1) + "2" * k


def ball_skeleton(
    n: int,
    level: int,
    kind: str = "x",
    m0: int = 0,
    k0: int = 0,
) -> tuple[SimpleNetwork, dict]:
    """Exact reduced network of the ball B(q0, 2^-n) at a given level.

    kind "x": keeps the upper-spine junctions x_{m,0} (all m up to the
    apex) and, when k0 >= 1, the turned-branch chain x_{m0,k}; every lower
    branch and every hanging grounded subtree collapses to its exact
    conductance.  kind "y": keeps q0 and the chain y_1..y_k0 inside the
    branch K_{2 0^(n-1)}.  Labels map symbolic names to network nodes.
    """
    if n < 1:
        raise ValueError("ball index n must be >= 1")
    c = bottom_grounded_conductance
    net = SimpleNetwork()
    q0: Vertex = ("2", 1)
    labels: dict = {"q0": q0, "ground": GROUND}

    if kind == "x":
        if not 0 <= m0 <= level - n - 1:
            raise ValueError("m0 out of range for this level")
        if k0 and level < n + m0 + k0 + 1:
            raise ValueError("level too small for the requested chain")
        branches = Fraction(2 ** (2 * n - 1)) * c(level - n)
        net.add_edge(q0, GROUND, branches)
        spine = [q0]
        top = level - n - 1
        for m in range(top + 1):
            node = canonicalize(x_point_word(n, m, 0), 1)
            sigma = Fraction(2 ** (n + m + 1))
            net.add_edge(spine[-1], node, sigma)
            if not (k0 >= 1 and m == m0):
                j = level - n - m - 1
                net.add_edge(node, GROUND, sigma * c(j) / 2)
            spine.append(node)
        net.add_edge(spine[-1], GROUND, Fraction(2**level))  # grounded apex
        labels["spine"] = spine  # [q0, x_{0,0}, x_{1,0}, ...]
        chain = []
        if k0 >= 1:
            prev = spine[m0 + 1]
            for k in range(1, k0 + 1):
                node = canonicalize(x_point_word(n, m0, k), 1)
                sigma = Fraction(2 ** (n + m0 + k + 1))
                net.add_edge(prev, node, sigma)
                if k < k0:
                    j = level - (n + m0 + k + 1)
                    net.add_edge(node, GROUND, sigma * c(j) / 2)
                chain.append(node)
                prev = node
            terminal = Fraction(2 ** (n + m0 + k0 + 1)) * c(level - (n + m0 + k0 + 1))
            net.add_edge(chain[-1], GROUND, terminal)
        labels["chain"] = chain
        labels["source"] = chain[-1] if k0 >= 1 else spine[m0 + 1]
        return net.finalise(), labels

    if kind != "y":
        raise ValueError("kind must be 'x' or 'y'")
    if k0 < 1:
        raise ValueError("y chains need k0 >= 1")
    if level < n + k0:
        raise ValueError("level too small for the requested chain")
    e = upward_grounded_conductance(level - n)
    others = Fraction(2 ** (n - 1) - 1) * Fraction(2**n) * c(level - n)
    entry_hang = Fraction(2**n) * c(level - n) / 2
    net.add_edge(q0, GROUND, Fraction(2**n) * e + others + entry_hang)
    chain = [q0]
    for k in range(1, k0 + 1):
        node = canonicalize(y_point_word(n, k), 1)
        net.add_edge(chain[-1], node, Fraction(2 ** (n + k)))
        if k < k0:
            net.add_edge(node, GROUND, Fraction(2 ** (n + k)) * c(level - n - k) / 2)
        chain.append(node)
    net.add_edge(chain[-1], GROUND, Fraction(2 ** (n + k0)) * c(level - n - k0))
    labels["chain"] = chain[1:]
    labels["source"] = chain[-1]
    return net.finalise(), labels


def q0_boundary_resistance(n: int, level: int) -> Fraction:
    """Exact discrete R(q0, ball frontier) at the given level (s0 = 1/2).

    Decreases to 1 / (3 (2^(n-1) + 2^(2n-1))) as the level grows.
    """
    if level < n + 1:
        raise ValueError("level too small for this ball")
    lower = Fraction(2 ** (2 * n - 1)) * bottom_grounded_conductance(level - n)
    upper = Fraction(2**n) * upward_grounded_conductance(level - n)
    return 1 / (lower + upper)


def psi_skeleton_values(
    n: int, level: int, kind: str, m0: int = 0, k0: int = 0
) -> tuple[dict, Fraction]:
    """Exact discrete equilibrium potential at the kept skeleton nodes.

    Returns (values by node, resistance to the ball frontier).
    """
    from .dirichlet import dirichlet_energy, solve_dirichlet

    net, labels = ball_skeleton(n, level, kind, m0=m0, k0=k0)
    sol = solve_dirichlet(net, {labels["source"]: 1, GROUND: 0})
    energy = dirichlet_energy(net, sol)
    return dict(sol.values), 1 / energy
