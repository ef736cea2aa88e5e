"""Closed-form harmonic functions and explicit potential coefficients.

The three basic harmonic extensions (the V0 extension, the top-to-bottom
decay function and the upward ladder) have piecewise self-similar
descriptions; they and the explicit spine/branch coefficient tables act
as exact oracles against the discrete solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .addressing import Vertex, canonicalize
from .metric import Metric

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class HarmonicSpec:
    """One of the closed-form harmonic functions.

    kind: "uminus" (a2, a1, a3 boundary data on V0), "udown" (1 at q1,
    0 on the bottom Cantor set), "uup" (1 at q2, 0 at q1 and on the
    hanging Cantor pieces; needs s0 = 1/2), "uplus" (a at q2, b at q1,
    c at F_3(q1), 0 on F_3(Cantor)).
    """

    kind: str
    params: tuple[Fraction, ...] = ()
    s0: Fraction = HALF

    def __post_init__(self):
        if self.kind not in ("uminus", "udown", "uup", "uplus"):
            raise ValueError(f"unknown harmonic kind {self.kind!r}")
        if not 0 < self.s0 < 1:
            raise ValueError("s0 must lie strictly between 0 and 1")
        if self.kind == "uup" and self.s0 != HALF:
            raise ValueError("the upward ladder is only available at s0 = 1/2")
        want = {"uminus": 3, "udown": 0, "uup": 0, "uplus": 3}[self.kind]
        if len(self.params) != want:
            raise ValueError(f"{self.kind} takes {want} parameters")


def u_minus(s0: Fraction, a2, a1, a3) -> HarmonicSpec:
    return HarmonicSpec("uminus", (Fraction(a2), Fraction(a1), Fraction(a3)), Fraction(s0))


def u_down(s0: Fraction = HALF) -> HarmonicSpec:
    return HarmonicSpec("udown", (), Fraction(s0))


def u_up() -> HarmonicSpec:
    return HarmonicSpec("uup", (), HALF)


def u_plus(s0: Fraction, a, b, c) -> HarmonicSpec:
    return HarmonicSpec("uplus", (Fraction(a), Fraction(b), Fraction(c)), Fraction(s0))


_METRICS: dict[Fraction, Metric] = {}


def _metric(s0: Fraction) -> Metric:
    m = _METRICS.get(s0)
    if m is None:
        m = _METRICS[s0] = Metric(s0)
    return m


def eval_closed(spec: HarmonicSpec, v: Vertex) -> Fraction:
    """Exact value of the closed-form harmonic at a lattice point."""
    v = canonicalize(*v)
    if spec.kind == "uminus":
        a2, a1, a3 = spec.params
        return _eval_uminus(_metric(spec.s0), a2, a1, a3, v)
    if spec.kind == "udown":
        return _eval_udown(spec.s0, v)
    if spec.kind == "uup":
        return _eval_uup(v)
    a, b, c = spec.params
    return _eval_uplus(spec.s0, a, b, c, v)


def energy_closed(spec: HarmonicSpec) -> Fraction:
    """Exact Dirichlet energy of the closed-form harmonic."""
    s0 = spec.s0
    s2 = 1 - s0
    if spec.kind == "uminus":
        a2, a1, a3 = spec.params
        return (a1 - a2) ** 2 + (a1 - a3) ** 2
    if spec.kind == "udown":
        return 1 / s0 + 1
    if spec.kind == "uup":
        return Fraction(3, 2)
    a, b, c = spec.params
    return (a - b) ** 2 + (b - c) ** 2 / s0 + (1 / s0 + 1) * c * c / s2


def _eval_uminus(metric: Metric, a2, a1, a3, v: Vertex) -> Fraction:
    # project v onto the spine q2 -> q1 -> q3 and interpolate linearly in
    # resistance length; off-spine branches are constant
    s = metric.dist(v, ("", 2))
    t = metric.dist(v, ("", 3))
    hang = (s + t - 2) / 2
    tau = s - hang  # position of the projection along q2 -> q3, in [0, 2]
    if tau <= 1:
        return a2 + (a1 - a2) * tau
    return a1 + (a3 - a1) * (tau - 1)


def _on_bottom(v: Vertex) -> bool:
    word, corner = v
    return corner in (2, 3) and all(d in "23" for d in word)


def _eval_udown(s0: Fraction, v: Vertex) -> Fraction:
    lam = (1 - s0) / 2
    value = Fraction(1)
    word, corner = v
    while True:
        if (word, corner) == ("", 1):
            return value
        if _on_bottom((word, corner)):
            return Fraction(0)
        if word and word[0] in "23":
            value *= lam
            word, corner = canonicalize(word[1:], corner)
            continue
        metric = _metric(s0)
        if word and word[0] == "0":
            local = canonicalize(word[1:], corner)
            return value * _eval_uminus(metric, lam, Fraction(1), Fraction(1), local)
        if word and word[0] == "1":
            local = canonicalize(word[1:], corner)
            return value * _eval_uminus(metric, Fraction(1), Fraction(1), lam, local)
        # q2 / q3 handled by _on_bottom; q1 by the first branch
        raise AssertionError(f"unreachable vertex {v}")


def _eval_uplus(s0: Fraction, a, b, c, v: Vertex) -> Fraction:
    word, corner = v
    mid = s0 * a + (1 - s0) * b
    metric = _metric(s0)
    if (word, corner) == ("", 1):
        return b
    if (word, corner) == ("", 2):
        return a
    if (word, corner) == ("", 3):
        return Fraction(0)
    d, local = word[0], canonicalize(word[1:], corner)
    if d == "0":
        return _eval_uminus(metric, mid, b, b, local)
    if d == "1":
        return _eval_uminus(metric, b, b, c, local)
    if d == "2":
        return _eval_uminus(metric, a, mid, mid, local)
    return c * _eval_udown(s0, local)


def _eval_uup(v: Vertex) -> Fraction:
    word, corner = v
    if (word, corner) == ("", 2):
        return Fraction(1)
    m = 0
    while m < len(word) and word[m] == "0":
        m += 1
    if m == len(word) or word[m] in "13":
        return Fraction(0)  # q1 and everything hanging right of the spine
    a_m = Fraction(1, 4 ** (m + 1))
    local = canonicalize(word[m + 1:], corner)
    return _eval_uplus(HALF, 4 * a_m, a_m, a_m / 4, local)


@dataclass(frozen=True)
class CoefficientCase:
    """Which explicit potential table is requested.

    kind "xmk": equilibrium potential of the spine point x_{m0,k0} in the
    ball B(q0, 2^-n), giving spine values a_{m,0} (m = -1..m0) and branch
    values a_{m0,k} (k = 0..k0).  kind "yk": potential of the branch point
    y_{k0}, giving b_k (k = 0..k0).
    """

    kind: str
    n: int
    m0: int = 0
    k0: int = 0

    def __post_init__(self):
        if self.kind not in ("xmk", "yk"):
            raise ValueError("case kind must be 'xmk' or 'yk'")
        if self.n < 1:
            raise ValueError("ball index n must be >= 1")
        if self.kind == "xmk" and (self.m0 < 0 or self.k0 < 0):
            raise ValueError("m0 and k0 must be non-negative")
        if self.kind == "yk" and self.k0 < 1:
            raise ValueError("yk needs k0 >= 1")


@dataclass
class PsiCoefficients:
    case: CoefficientCase
    spine: dict[int, Fraction] = field(default_factory=dict)  # a_{m,0} or b_k
    branch: dict[int, Fraction] = field(default_factory=dict)  # a_{m0,k}
    spine_quarter: dict[int, Fraction] = field(default_factory=dict)  # a_{m,1} = a_{m,0}/4
    branch_quarter: dict[int, Fraction] = field(default_factory=dict)  # a'_{m0,k} = a_{m0,k}/4


def _ladder(alpha: Fraction, beta: Fraction, j: int) -> Fraction:
    # growing/decaying mode mix alpha 2^j + beta 4^-j of the spine recurrence
    # 4 a_{j+1} - 9 a_j + 2 a_{j-1} = 0
    if j >= 0:
        return alpha * 2**j + beta * Fraction(1, 4**j)
    return alpha * Fraction(1, 2**-j) + beta * 4**-j


def psi_coefficients(case: CoefficientCase) -> PsiCoefficients:
    """Exact coefficient tables for the typical-point equilibrium potentials.

    The potential values along the spine and down the turned branch obey
    one three-term recurrence, 4a_{j+1} - 9a_j + 2a_{j-1} = 0, whose mode
    mix is fixed by flux balance at the ball centre q0; values at the
    source normalise to 1.  The x_{m,k} table is the single family
    A_j = 24(1+2^-n) 2^j - (3-4 2^-n) 4^-j evaluated at j = m and
    j = m0+k, divided by A_{m0+k0}; the y_k table uses
    B_j = 3(1+2^-n) 2^j - (3-4 2^-n) 4^-j similarly.
    """
    n = case.n
    en = Fraction(1, 2**n)
    decay = 3 - 4 * en
    out = PsiCoefficients(case)
    if case.kind == "yk":
        k0 = case.k0
        grow = 3 * (1 + en)
        den = _ladder(grow, -decay, k0)
        for k in range(0, k0 + 1):
            bk = _ladder(grow, -decay, k) / den
            out.spine[k] = bk
            out.branch_quarter[k] = bk / 4
        return out

    m0, k0 = case.m0, case.k0
    grow = 24 * (1 + en)
    den = _ladder(grow, -decay, m0 + k0)
    for m in range(-1, m0 + 1):
        out.spine[m] = _ladder(grow, -decay, m) / den
    for k in range(0, k0 + 1):
        out.branch[k] = _ladder(grow, -decay, m0 + k) / den
        out.branch_quarter[k] = out.branch[k] / 4
    for m in range(-1, m0):
        out.spine_quarter[m] = out.spine[m] / 4
    return out
