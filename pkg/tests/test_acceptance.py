"""Acceptance gate: one test per criterion, printed as PASS/FAIL lines.

Criteria 7 and the upward-ladder window inside criterion 10 are asserted
exactly as stated even though the measured values contradict them; the
blocking analysis lives in the decisions ledger.  Everything else runs at
its stated tolerance.
"""

import time
from fractions import Fraction

from dendrite import checks
from dendrite.closed_forms import energy_closed, u_down, u_up
from dendrite.dirichlet import effective_resistance
from dendrite.exit_time import boundary_resistance, exit_ratio_experiment
from dendrite.harnack import ehi_slope, weh_threshold_scan
from dendrite.measure import WeightVector, integrate_pw_harmonic
from dendrite.network import ball_graph, build_level_graph, schur_trace
from dendrite.reduction import (
    bottom_grounded_conductance,
    q0_boundary_resistance,
    udown_value_q0,
    upward_grounded_conductance,
    uup_values,
)

HALF = Fraction(1, 2)
Q0, Q1, Q2, Q3 = ("2", 1), ("", 1), ("", 2), ("", 3)
EQUAL = WeightVector.equal()


def report(criterion: str, ok: bool, detail: str):
    print(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
    assert ok, f"{criterion}: {detail}"


def test_c01_exact_boundary_resistances():
    t0 = time.perf_counter()
    for level in range(0, 7):
        g = build_level_graph(level)
        assert effective_resistance(g, [Q2], [Q1]) == 1
        assert effective_resistance(g, [Q3], [Q1]) == 1
    elapsed = time.perf_counter() - t0
    report(
        "criterion 1 (boundary resistances)",
        elapsed < 1.0,
        f"R(q2,q1)=R(q3,q1)=1 exactly at levels 0-6 in {elapsed:.2f}s",
    )


def test_c02_renormalization():
    for s0 in (HALF, Fraction(1, 3), Fraction(2, 5)):
        for level in range(0, 6):
            fine = build_level_graph(level + 1, s0)
            coarse = build_level_graph(level, s0)
            red = schur_trace(fine, coarse.vertices)
            got = {(a, b): c for a, b, c in red.edge_list()}
            want = {(coarse.vertices[i], coarse.vertices[j]): c for i, j, c in coarse.edges}
            assert got == want, (s0, level)
    report(
        "criterion 2 (renormalization)",
        True,
        "schur_trace(build(L+1), V_L) == build(L) edge-for-edge, L=0..5, three s0 values",
    )


def test_c03_closed_form_energies():
    for s0 in (HALF, Fraction(1, 3), Fraction(2, 5)):
        assert energy_closed(u_down(s0)) == 1 / s0 + 1
    assert energy_closed(u_down()) == 3
    assert energy_closed(u_up()) == Fraction(3, 2)
    down = [bottom_grounded_conductance(level) for level in range(13)]
    up = [upward_grounded_conductance(level) for level in range(13)]
    assert all(a < b for a, b in zip(down, down[1:]))
    assert all(a < b for a, b in zip(up, up[1:]))
    ok = abs(float(down[12]) / 3 - 1) <= 0.02 and abs(float(up[12]) / 1.5 - 1) <= 0.02
    report(
        "criterion 3 (closed-form energies)",
        ok,
        f"E(udown)=3, E(uup)=3/2 exact; discrete energies rise to {float(down[12]):.6f}, {float(up[12]):.6f} at L=12",
    )


def test_c04_ladder_values():
    lam = [udown_value_q0(level) for level in range(1, 13)]
    assert all(a > b for a, b in zip(lam, lam[1:]))
    assert abs(float(lam[-1]) * 4 - 1) <= 0.02
    final = uup_values(12)
    for m in range(5):
        seq = [uup_values(level)[m] for level in range(m + 2, 13)]
        assert all(a >= b for a, b in zip(seq, seq[1:])), f"a_{m} not monotone"
        assert abs(float(final[m]) * 4 ** (m + 1) - 1) <= 0.02
    report(
        "criterion 4 (ladder values)",
        True,
        f"u_down(q0) -> {float(lam[-1]):.6f} (1/4), a_m -> 4^-(m+1) within 2% at L=12, monotone",
    )


def test_c05_exact_ball_resistance():
    t0 = time.perf_counter()
    for n in (1, 2, 3):
        level = n + 7
        want = Fraction(1, 3 * (2 ** (n - 1) + 2 ** (2 * n - 1)))
        g = ball_graph(n, level)
        _, _, r = boundary_resistance(Q0, n, level, graph=g, mode="float")
        assert abs(r - float(q0_boundary_resistance(n, level))) < 1e-12
        assert float(want) <= r <= float(want) * 1.05, (n, r)
        assert float(q0_boundary_resistance(n, level + 1)) <= float(
            q0_boundary_resistance(n, level)
        )
    elapsed = time.perf_counter() - t0
    report(
        "criterion 5 (ball resistance)",
        elapsed < 30.0,
        f"R(q0, frontier) within 5% above 1/9, 1/30, 1/108 at L=n+7, decreasing; {elapsed:.1f}s",
    )


def test_c06_coefficient_oracles():
    ok, detail = checks.check_coefficient_tables(tol=0.05)
    assert ok, detail
    ok2, detail2 = checks.check_coefficient_recurrence()
    assert ok2, detail2
    report("criterion 6 (coefficient oracles)", ok and ok2, f"{detail}; {detail2}")


def test_c07_exit_time_anomaly():
    rows, slope, stderr = exit_ratio_experiment(range(2, 6), EQUAL, level_offset=5)
    detail = (
        f"equal-weight slope {slope:.3f} +- {stderr:.3f} "
        f"(ratios {[round(r.ratio, 4) for r in rows]}); "
        "the ratio only collapses for w2 > 2 w0 -- see decisions ledger"
    )
    report("criterion 7 (exit-time anomaly, equal weights)", -1.25 <= slope <= -0.75, detail)


def test_c08_ehi_failure():
    rows, slope, stderr = ehi_slope(range(2, 6), k=1, epsilon=HALF, level_offset=4)
    report(
        "criterion 8 (EHI failure)",
        -1.25 <= slope <= -0.75,
        f"inf/sup collapse slope {slope:.3f} +- {stderr:.3f} over n=2..5 at eps=1/2, k=1",
    )


def test_c09_weh_threshold():
    rhos = [HALF, Fraction(1), Fraction(3, 2), Fraction(2)]
    summary = []
    ok = True
    for delta in (HALF, Fraction(1)):
        for row in weh_threshold_scan(delta, rhos, range(2, 6), level_offset=4):
            growth = row["growth_range"]
            summary.append(f"d={row['delta']} rho={row['rho']}: x{growth:.2f}")
            if row["rho"] <= 1:
                ok &= growth <= 1.15
            else:
                ok &= growth >= 0.8 * row["rho"]
    report(
        "criterion 9 (wEH threshold)",
        ok,
        "ratio growth over n=2..5: " + ", ".join(summary),
    )


def test_c10_integral_udown():
    bounds = integrate_pw_harmonic(u_down(), EQUAL)
    eps0 = Fraction(1, 7)
    ok = eps0 <= bounds.lower <= bounds.upper <= 4 * eps0
    report(
        "criterion 10a (decay integral)",
        ok,
        f"certified [{float(bounds.lower):.5f},{float(bounds.upper):.5f}] inside [1/7, 4/7]",
    )


def test_c10_integral_uup_window():
    bounds = integrate_pw_harmonic(u_up(), EQUAL)
    eps1 = Fraction(16, 105)
    ok = eps1 <= bounds.lower <= bounds.upper <= 4 * eps1
    detail = (
        f"certified [{float(bounds.lower):.5f},{float(bounds.upper):.5f}], exact 1/12, "
        f"stated window [{float(eps1):.5f},{float(4 * eps1):.5f}] -- see decisions ledger"
    )
    report("criterion 10b (ladder integral window)", ok, detail)


def test_c10_doubling():
    ok, detail = checks.check_doubling()
    report("criterion 10c (doubling)", ok, detail)


def test_c11_property_suites():
    t0 = time.perf_counter()
    ok = checks.run_suite("all", verbose=False)
    elapsed = time.perf_counter() - t0
    report(
        "criterion 11 (property suites)",
        ok and elapsed < 300.0,
        f"verify --suite all equivalent ran green in {elapsed:.0f}s",
    )
