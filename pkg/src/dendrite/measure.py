"""Self-similar measures, exact harmonic quadrature and doubling experiments.

A weight vector (w0, w1, w2, w3) with w0 = w1, w2 = w3 defines the unique
self-similar probability measure multiplying digit weights along words.
Integrals of piecewise-harmonic functions are computed two ways: exactly,
through the self-similar fixed-point identities, and as certified
interval bounds by adaptive cell refinement.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .addressing import Vertex, canonicalize, check_word, in_cell
from .closed_forms import HarmonicSpec
from .metric import Metric
from .network import BallRegion


@dataclass(frozen=True)
class WeightVector:
    """Symmetric self-similar weights: w1 = w0, w3 = w2, total mass 1."""

    w0: Fraction
    w2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w0", Fraction(self.w0))
        object.__setattr__(self, "w2", Fraction(self.w2))
        if self.w0 <= 0 or self.w2 <= 0:
            raise ValueError("weights must be positive")
        if 2 * self.w0 + 2 * self.w2 != 1:
            raise ValueError("weights must satisfy 2 w0 + 2 w2 = 1")

    @property
    def w1(self) -> Fraction:
        return self.w0

    @property
    def w3(self) -> Fraction:
        return self.w2

    def digit(self, d: str) -> Fraction:
        return self.w0 if d in "01" else self.w2

    def as_tuple(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.w0, self.w0, self.w2, self.w2)

    @classmethod
    def equal(cls) -> "WeightVector":
        return cls(Fraction(1, 4), Fraction(1, 4))

    @classmethod
    def parse(cls, text: str) -> "WeightVector":
        try:
            a, b = text.split(",")
            return cls(Fraction(a), Fraction(b))
        except ValueError as exc:
            raise ValueError(f"weights must look like 'w0,w2', got {text!r}") from exc

    def __str__(self) -> str:
        return f"{self.w0},{self.w2}"


def cell_measure(w: WeightVector, word: str) -> Fraction:
    check_word(word)
    mu = Fraction(1)
    for d in word:
        mu *= w.digit(d)
    return mu


@dataclass(frozen=True)
class IntegralBounds:
    lower: Fraction
    upper: Fraction
    exact: Optional[Fraction] = None

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def rel_gap(self) -> Fraction:
        mid = abs(self.midpoint())
        if mid == 0:
            return self.upper - self.lower
        return (self.upper - self.lower) / mid


def extension_matrices(s0: Fraction):
    """V0 -> V1 harmonic extension maps: values at F_i(V0) from values on V0."""
    s0 = Fraction(s0)
    s2 = 1 - s0
    one, zero = Fraction(1), Fraction(0)
    a0 = ((one, zero, zero), (s2, s0, zero), (one, zero, zero))
    a1 = ((one, zero, zero), (one, zero, zero), (s2, zero, s0))
    a2 = ((s2, s0, zero), (zero, one, zero), (s2, s0, zero))
    a3 = ((s2, zero, s0), (s2, zero, s0), (zero, zero, one))
    return (a0, a1, a2, a3)


def _row_times_matrix(row, matrix):
    return tuple(sum(row[k] * matrix[k][j] for k in range(3)) for j in range(3))


def _matrix_times_col(matrix, col):
    return tuple(sum(matrix[j][k] * col[k] for k in range(3)) for j in range(3))


def harmonic_weights(w: WeightVector, s0: Fraction = Fraction(1, 2)):
    """Probability vector p with integral(h) = sum p_j h(q_j) for global harmonics.

    p is the unique fixed point of the transpose extension dynamics
    p = sum_i w_i A_i^T p; p2 = p3 by reflection symmetry.
    """
    mats = extension_matrices(s0)
    wt = w.as_tuple()
    m = [[sum(wt[i] * mats[i][k][j] for i in range(4)) for k in range(3)] for j in range(3)]
    # solve (M - I) p = 0 with sum p = 1 by Cramer's rule on two rows + normalisation
    rows = [
        [m[0][0] - 1, m[0][1], m[0][2], Fraction(0)],
        [m[1][0], m[1][1] - 1, m[1][2], Fraction(0)],
        [Fraction(1), Fraction(1), Fraction(1), Fraction(1)],
    ]
    det3 = lambda a: (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )
    base = [r[:3] for r in rows]
    d = det3(base)
    if d == 0:
        raise ArithmeticError("degenerate extension dynamics")
    p = []
    for j in range(3):
        col = [r[:] for r in base]
        for i in range(3):
            col[i][j] = rows[i][3]
        p.append(det3(col) / d)
    return tuple(p)


def subdivision_quadrature_row(w: WeightVector, depth: int, s0: Fraction = Fraction(1, 2)):
    """Corner-average subdivision quadrature of global harmonics at a given depth.

    Independent oracle for harmonic_weights: integrates a harmonic h by
    averaging its three corner values over every depth-`depth` cell.
    """
    mats = extension_matrices(s0)
    wt = w.as_tuple()
    row = (Fraction(1, 3),) * 3
    for _ in range(depth):
        acc = (Fraction(0),) * 3
        new = [Fraction(0)] * 3
        for i in range(4):
            contrib = _row_times_matrix(row, mats[i])
            for j in range(3):
                new[j] += wt[i] * contrib[j]
        row = tuple(new)
    return row


# ---------------------------------------------------------------------------
# piecewise-harmonic cell states


def _state_children(state, s0: Fraction):
    kind = state[0]
    s2 = 1 - s0
    lam = s2 / 2
    if kind == "h":
        _, a1, a2, a3 = state
        mid = s0 * a2 + s2 * a1  # value at the junction q0 on the arc q2 -> q1
        jval = s2 * a1 + s0 * a3
        return (
            ("h", a1, mid, a1),
            ("h", a1, a1, jval),
            ("h", mid, a2, mid),
            ("h", jval, jval, a3),
        )
    if kind == "down":
        s = state[1]
        return (
            ("h", s, s * lam, s),
            ("h", s, s, s * lam),
            ("down", s * lam),
            ("down", s * lam),
        )
    if kind == "plus":
        _, a, b, c = state
        mid = s0 * a + s2 * b
        return (
            ("h", b, mid, b),
            ("h", b, b, c),
            ("h", mid, a, mid),
            ("down", c),
        )
    if kind == "up":
        s = state[1]
        return (
            ("up", s / 4),
            ("h", Fraction(0), Fraction(0), Fraction(0)),
            ("plus", s, s / 4, s / 16),
            ("h", Fraction(0), Fraction(0), Fraction(0)),
        )
    raise ValueError(f"unknown cell state {kind!r}")


def _state_range(state):
    kind = state[0]
    if kind == "h":
        vals = state[1:]
        return min(vals), max(vals)
    if kind in ("down", "up"):
        s = state[1]
        return (min(s, Fraction(0)), max(s, Fraction(0)))
    _, a, b, c = state
    vals = (a, b, c, Fraction(0))
    return min(vals), max(vals)


class HarmonicIntegrator:
    """Exact and certified integration of the closed-form harmonics."""

    def __init__(self, w: WeightVector, s0: Fraction = Fraction(1, 2)):
        self.w = w
        self.s0 = Fraction(s0)
        self.p = harmonic_weights(w, self.s0)
        s2 = 1 - self.s0
        lam = s2 / 2
        p1, p2, p3 = self.p
        wt = w.as_tuple()
        self._i_down = (
            wt[0] * (p1 + lam * p2 + p3) + wt[1] * (p1 + p2 + lam * p3)
        ) / (1 - (wt[2] + wt[3]) * lam)

    def exact(self, state) -> Fraction:
        kind = state[0]
        p1, p2, p3 = self.p
        w0, w1, w2, w3 = self.w.as_tuple()
        if kind == "h":
            _, a1, a2, a3 = state
            return p1 * a1 + p2 * a2 + p3 * a3
        if kind == "down":
            return state[1] * self._i_down
        if kind == "plus":
            _, a, b, c = state
            s0, s2 = self.s0, 1 - self.s0
            mid = s0 * a + s2 * b
            return (
                w0 * (p1 * b + p2 * mid + p3 * b)
                + w1 * (p1 * b + p2 * b + p3 * c)
                + w2 * (p1 * mid + p2 * a + p3 * mid)
                + w3 * c * self._i_down
            )
        if kind == "up":
            if self.s0 != Fraction(1, 2):
                raise ValueError("the upward ladder needs s0 = 1/2")
            qa = self.exact(("plus", Fraction(1), Fraction(0), Fraction(0)))
            qb = self.exact(("plus", Fraction(0), Fraction(1), Fraction(0)))
            qc = self.exact(("plus", Fraction(0), Fraction(0), Fraction(1)))
            per = qa + qb / 4 + qc / 16
            return state[1] * w2 * per / (1 - w0 / 4)
        raise ValueError(f"unknown cell state {kind!r}")

    def bounds(self, state, max_depth: int = 12, rel_gap: Fraction = Fraction(1, 10_000),
               max_cells: int = 60_000) -> IntegralBounds:
        """Adaptive certified bounds: refine the cells with the worst gap first."""
        lo = Fraction(0)
        hi = Fraction(0)
        heap = []
        counter = 0

        def push(state, mu, depth):
            nonlocal lo, hi, counter
            a, b = _state_range(state)
            lo += mu * a
            hi += mu * b
            if a != b:
                heapq.heappush(heap, (-(mu * (b - a)), counter, state, mu, depth))
                counter += 1

        push(state, Fraction(1), 0)
        wt = self.w.as_tuple()
        while heap and counter < max_cells:
            mid = abs(lo + hi) / 2
            gap = hi - lo
            if gap <= rel_gap * mid or (mid == 0 and gap <= rel_gap):
                break
            neg_gap, _, st, mu, depth = heapq.heappop(heap)
            if depth >= max_depth:
                heapq.heappush(heap, (neg_gap, counter, st, mu, depth))
                counter += 1
                break
            a, b = _state_range(st)
            lo -= mu * a
            hi -= mu * b
            for i, child in enumerate(_state_children(st, self.s0)):
                push(child, mu * wt[i], depth + 1)
        return IntegralBounds(lo, hi, exact=self.exact(state))


def _spec_state(spec: HarmonicSpec):
    if spec.kind == "uminus":
        a2, a1, a3 = spec.params
        return ("h", a1, a2, a3)
    if spec.kind == "udown":
        return ("down", Fraction(1))
    if spec.kind == "uup":
        return ("up", Fraction(1))
    a, b, c = spec.params
    return ("plus", a, b, c)


def integrate_closed(spec: HarmonicSpec, w: WeightVector) -> Fraction:
    """Exact integral of a closed-form harmonic against the self-similar measure."""
    return HarmonicIntegrator(w, spec.s0).exact(_spec_state(spec))


def integrate_pw_harmonic(
    spec: HarmonicSpec,
    w: WeightVector,
    max_depth: int = 12,
    rel_gap: Fraction = Fraction(1, 10_000),
) -> IntegralBounds:
    """Certified interval for the integral, refined cell-by-cell."""
    return HarmonicIntegrator(w, spec.s0).bounds(
        _spec_state(spec), max_depth=max_depth, rel_gap=rel_gap
    )


# ---------------------------------------------------------------------------
# measures of metric balls


def classify_region_cells(region: BallRegion):
    """Split the region's level cells into inside / straddling the open ball."""
    graph = region.graph
    scale = Fraction(1, 2**graph.level)  # metric scale of a level cell at s0 = 1/2
    if graph.s0 != Fraction(1, 2):
        raise ValueError("cell classification assumes s0 = 1/2")
    r = region.radius
    dist = region.distances
    inside, straddle = [], []
    for word in graph.words:
        ds = [dist[canonicalize(word, j)] for j in (1, 2, 3)]
        dmax = min(ds[0] + scale, ds[1] + 2 * scale, ds[2] + 2 * scale)
        if dmax < r:
            inside.append(word)
        elif min(ds) < r:
            straddle.append(word)
    return inside, straddle


def ball_measure(w: WeightVector, region: BallRegion) -> IntegralBounds:
    """Certified measure bounds of the open ball from its level-L cell cover."""
    if region.radius >= 2:
        return IntegralBounds(Fraction(1), Fraction(1))
    inside, straddle = classify_region_cells(region)
    lo = sum((cell_measure(w, word) for word in inside), Fraction(0))
    hi = lo + sum((cell_measure(w, word) for word in straddle), Fraction(0))
    return IntegralBounds(lo, min(hi, Fraction(1)))


def measure_ball_bounds(
    center: Vertex,
    radius: Fraction,
    w: WeightVector,
    max_depth: int = 12,
    metric: Optional[Metric] = None,
) -> IntegralBounds:
    """Certified mu-bounds of the open ball B(center, radius), any lattice center.

    Descends the cell hierarchy; corner distances propagate through entry
    corners for cells away from the center and are computed exactly along
    the center's own cell chain.
    """
    radius = Fraction(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    metric = metric or Metric(Fraction(1, 2))
    center = canonicalize(*center)
    if radius >= 2:
        return IntegralBounds(Fraction(1), Fraction(1))
    # local positions of child corners relative to parent corners
    table = {
        (i, j): tuple(metric.dist(("", k), (str(i), j)) for k in (1, 2, 3))
        for i in range(4)
        for j in (1, 2, 3)
    }
    ecc = (Fraction(1), Fraction(2), Fraction(2))

    lo = Fraction(0)
    hi = Fraction(0)
    root = tuple(metric.dist(center, ("", j)) for j in (1, 2, 3))
    stack = [("", root, True, Fraction(1))]
    while stack:
        word, ds, has_center, mu = stack.pop()
        scale = metric.word_scale(word)
        dmax = min(ds[j] + scale * ecc[j] for j in range(3))
        if dmax < radius:
            lo += mu
            hi += mu
            continue
        if min(ds) >= radius and not has_center:
            continue
        if len(word) >= max_depth:
            hi += mu
            continue
        for i in range(4):
            child = word + str(i)
            child_mu = mu * w.digit(str(i))
            if has_center:
                child_ds = tuple(
                    metric.dist(center, canonicalize(child, j)) for j in (1, 2, 3)
                )
                child_has = in_cell(center, child)
            else:
                child_ds = tuple(
                    min(ds[k] + scale * table[(i, j)][k] for k in range(3))
                    for j in (1, 2, 3)
                )
                child_has = False
            stack.append((child, child_ds, child_has, child_mu))
    return IntegralBounds(lo, min(hi, Fraction(1)))


def doubling_ratio(
    w: WeightVector,
    x: Vertex,
    r: Fraction,
    max_depth: int = 12,
    metric: Optional[Metric] = None,
) -> tuple[IntegralBounds, IntegralBounds, IntegralBounds]:
    """Bounds for mu(B(x,2r)) / mu(B(x,r)): returns (ratio, big-ball, small-ball)."""
    metric = metric or Metric(Fraction(1, 2))
    big = measure_ball_bounds(x, 2 * Fraction(r), w, max_depth=max_depth, metric=metric)
    small = measure_ball_bounds(x, Fraction(r), w, max_depth=max_depth, metric=metric)
    if small.lower == 0:
        raise ArithmeticError("small-ball lower bound vanished; raise max_depth")
    ratio = IntegralBounds(big.lower / small.upper, big.upper / small.lower)
    return ratio, big, small
