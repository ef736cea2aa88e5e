"""Boundary-indicator harmonics and elliptic Harnack experiments.

Harmonic functions on the ball B(q0, 2^-n) with indicator data on one
Cantor piece of the frontier; their sup/inf collapse exhibits the strong
Harnack failure, while delta-power means against the self-similar
measure probe the weak inequality's weight threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .addressing import Vertex, canonicalize
from .dirichlet import VertexFunction, solve_dirichlet
from .exit_time import fit_log2_slope
from .measure import WeightVector, cell_measure
from .network import BallRegion, LevelGraph, ball, ball_graph
from .reduction import x_point_word

Q0: Vertex = ("2", 1)


@dataclass(frozen=True)
class BoundaryProfile:
    """Indicator (or mixture) boundary data on the ball frontier.

    kind "upper": the Cantor piece under the spine address
    0 2^(n-1) 0^m 2 3^k; kind "lower": the piece 2 w 2^k inside the
    branch labelled by w in {0,1}^(n-1) (default w = 0^(n-1)); kind
    "mixture": non-negative coefficients on several pieces.
    """

    kind: str
    m: int = 0
    k: int = 1
    branch: Optional[str] = None
    parts: tuple = ()  # mixture: ((profile, coefficient), ...)

    def piece_prefix(self, n: int) -> str:
        if self.kind == "upper":
            return x_point_word(n, self.m, self.k)
        if self.kind == "lower":
            branch = self.branch if self.branch is not None else "0" * (n - 1)
            if len(branch) != n - 1 or any(c not in "01" for c in branch):
                raise ValueError("branch label must lie in {0,1}^(n-1)")
            return "2" + branch + "2" * self.k
        raise ValueError("mixtures have no single piece")


def _address_on_piece(word: str, tail: str, prefix: str) -> bool:
    # does the address word + tail^infinity lie in prefix + {2,3}^infinity?
    if len(word) >= len(prefix):
        return word.startswith(prefix) and all(c in "23" for c in word[len(prefix):])
    return (
        prefix.startswith(word)
        and all(c == tail for c in prefix[len(word):])
        and tail in "23"
    )


def on_cantor_piece(v: Vertex, prefix: str) -> bool:
    """Whether a lattice point lies on F_prefix(Cantor set).

    Corner-2/3 points carry the address word + corner^inf; junction points
    F_{k2}(q1) = F_{k0}(q2) and F_{k3}(q1) = F_{k1}(q3) additionally carry
    the alternate address through their bottom-corner form, which is how
    the left endpoints of branch pieces show up.
    """
    word, corner = canonicalize(*v)
    if corner in (2, 3):
        return _address_on_piece(word, str(corner), prefix)
    if word.endswith("2"):
        return _address_on_piece(word[:-1] + "0", "2", prefix)
    if word.endswith("3"):
        return _address_on_piece(word[:-1] + "1", "3", prefix)
    return False  # q1 itself: addresses end in {0,1} digits only


def piece_boundary_values(region: BallRegion, profile: BoundaryProfile, n: int):
    if profile.kind == "mixture":
        values = {v: Fraction(0) for v in region.frontier}
        for part, coeff in profile.parts:
            sub = piece_boundary_values(region, part, n)
            for v, val in sub.items():
                values[v] += Fraction(coeff) * val
        return values
    prefix = profile.piece_prefix(n)
    hits = {v for v in region.frontier if on_cantor_piece(v, prefix)}
    if not hits:
        raise ValueError(f"piece {prefix!r} has no lattice points on this frontier")
    return {v: (Fraction(1) if v in hits else Fraction(0)) for v in region.frontier}


def boundary_harmonic(
    n: int,
    profile: BoundaryProfile,
    level: int,
    graph: Optional[LevelGraph] = None,
    mode: str = "float",
) -> tuple[BallRegion, VertexFunction]:
    """Harmonic function on B(q0, 2^-n) with the profile's frontier data."""
    if profile.kind != "mixture" and level < n + profile.k + 3:
        raise ValueError("level too small to resolve the boundary piece")
    graph = graph or ball_graph(n, level)
    region = ball(graph, Q0, Fraction(1, 2**n))
    pinned = dict(piece_boundary_values(region, profile, n))
    # vertices beyond the frontier do not influence the ball solve
    for v in graph.vertices:
        if v not in region.interior and v not in pinned:
            pinned[v] = Fraction(0)
    sol = solve_dirichlet(graph, pinned, mode=mode)
    return region, sol


def extrema_over_subball(
    region: BallRegion, values: VertexFunction, radius: Fraction
) -> tuple[float, float]:
    """Extrema of a vertex function over B(q0, radius), cut edges interpolated."""
    dist = region.distances
    graph = region.graph
    vals = values.values
    lo = hi = None
    for v, d in dist.items():
        if d < radius:
            x = float(vals[v])
            lo = x if lo is None or x < lo else lo
            hi = x if hi is None or x > hi else hi
    if lo is None:
        raise ValueError("sub-ball contains no vertices at this level")
    for i, j, c in graph.edges:
        u, v = graph.vertices[i], graph.vertices[j]
        du, dv = dist[u], dist[v]
        if (du < radius) == (dv < radius):
            continue
        if du > dv:
            u, v, du, dv = v, u, dv, du
        t = float((radius - du) * c)  # crossing fraction along the edge
        x = float(vals[u]) + t * (float(vals[v]) - float(vals[u]))
        lo, hi = min(lo, x), max(hi, x)
    return lo, hi


def ehi_ratio(
    n: int,
    k: int,
    epsilon: Fraction,
    level: int,
    graph: Optional[LevelGraph] = None,
) -> dict:
    """inf/sup collapse of the branch-piece harmonic over epsilon-shrunken balls.

    Returns inf, sup, their ratio and the model value 1/(2^n epsilon + 1).
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= Fraction(1, 2):
        raise ValueError("epsilon must lie in (0, 1/2]")
    profile = BoundaryProfile("lower", k=k)
    region, sol = boundary_harmonic(n, profile, level, graph=graph)
    lo, hi = extrema_over_subball(region, sol, epsilon * Fraction(1, 2**n))
    model = 1.0 / (float(2**n * epsilon) + 1.0)
    return {
        "n": n,
        "k": k,
        "epsilon": epsilon,
        "level": region.graph.level,
        "inf": lo,
        "sup": hi,
        "ratio": lo / hi if hi > 0 else float("nan"),
        "model": model,
    }


def ehi_slope(n_values, k: int, epsilon: Fraction, level_offset: int = 4):
    rows = [ehi_ratio(n, k, epsilon, n + level_offset) for n in n_values]
    slope, stderr = fit_log2_slope([r["n"] for r in rows], [r["ratio"] for r in rows])
    return rows, slope, stderr


@dataclass
class HarnackReport:
    n: int
    delta: float
    level: int
    mean_lower: float
    mean_upper: float
    inf_power: float
    ratio_lower: float
    ratio_upper: float


def weh_ratio(
    n: int,
    delta: Fraction,
    w: WeightVector,
    profile: BoundaryProfile,
    level: int,
    graph: Optional[LevelGraph] = None,
) -> HarnackReport:
    """Certified mean of u^delta over the half ball against its infimum there.

    The mean uses per-cell corner bounds of the harmonic function (u^delta
    is monotone in u); straddling cells widen the certified interval.
    """
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise ValueError("delta must lie in (0, 1]")
    graph = graph or ball_graph(n, level)
    region, sol = boundary_harmonic(n, profile, level, graph=graph)
    half = Fraction(1, 2**(n + 1))
    dist = region.distances
    scale = Fraction(1, 2**graph.level)
    d = float(delta)
    num_lo = num_hi = 0.0
    mass_in = mass_all = 0.0
    for word in graph.words:
        corners = [canonicalize(word, j) for j in (1, 2, 3)]
        ds = [dist[c] for c in corners]
        dmax = min(ds[0] + scale, ds[1] + 2 * scale, ds[2] + 2 * scale)
        if min(ds) >= half:
            continue
        mu = float(cell_measure(w, word))
        vals = [float(sol.values[c]) for c in corners]
        if dmax < half:
            mass_in += mu
            mass_all += mu
            num_lo += mu * min(vals) ** d
            num_hi += mu * max(vals) ** d
        else:
            mass_all += mu
            num_hi += mu * max(vals) ** d
    if mass_in <= 0:
        raise ValueError("half ball resolves no full cells; raise the level")
    inf_u, _ = extrema_over_subball(region, sol, half)
    inf_power = inf_u**d
    mean_lo = num_lo / mass_all
    mean_hi = num_hi / mass_in
    return HarnackReport(
        n=n,
        delta=d,
        level=graph.level,
        mean_lower=mean_lo,
        mean_upper=mean_hi,
        inf_power=inf_power,
        ratio_lower=mean_lo / inf_power,
        ratio_upper=mean_hi / inf_power,
    )


def weights_for_rho(delta: Fraction, rho: Fraction) -> WeightVector:
    """Weights with w2/w0 = 2^(1-delta) rho, normalised to total mass one."""
    delta = Fraction(delta)
    rho = Fraction(rho)
    if rho <= 0:
        raise ValueError("rho must be positive")
    if delta == 1:
        factor = rho
    elif delta == Fraction(1, 2):
        # 2^(1/2) is irrational; a rational proxy keeps the measure exact
        factor = rho * Fraction(1_414_213_562_373_095, 10**15)
    else:
        factor = rho * Fraction.from_float(2.0 ** float(1 - delta)).limit_denominator(10**12)
    w0 = 1 / (2 * (1 + factor))
    w2 = factor * w0
    return WeightVector(w0, w2)


def weh_growth(
    n_values,
    delta: Fraction,
    w: WeightVector,
    profile: BoundaryProfile,
    level_offset: int = 4,
) -> tuple[list[HarnackReport], float, float]:
    """Growth of the mean-to-infimum ratio across the ball family.

    Returns (reports, fitted per-ball factor, total growth over the range).
    The fitted factor carries a long transient from the branch mass; the
    range total is the robust threshold witness.
    """
    reports = [weh_ratio(n, delta, w, profile, n + level_offset) for n in n_values]
    mids = [math.sqrt(r.ratio_lower * r.ratio_upper) for r in reports]
    slope, _ = fit_log2_slope([r.n for r in reports], mids)
    return reports, 2.0**slope, mids[-1] / mids[0]


def weh_threshold_scan(
    delta: Fraction,
    rho_values,
    n_values,
    level_offset: int = 4,
) -> list[dict]:
    """Growth factors across the weight threshold w2 = 2^(1-delta) w0."""
    out = []
    for rho in rho_values:
        w = weights_for_rho(delta, rho)
        reports, per_n, total = weh_growth(
            n_values, delta, w, BoundaryProfile("upper", m=0, k=1), level_offset
        )
        out.append(
            {
                "delta": float(delta),
                "rho": float(rho),
                "weights": str(w),
                "growth_per_n": per_n,
                "growth_range": total,
                "reports": reports,
            }
        )
    return out
