"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Every tolerance is pinned here; the expected constants were frozen
from the independent quadrature oracle in oracles.py.
"""

import math
import time

import numpy as np
import pytest

from hypmet.hyperideal import (
    COV_AT_ORIGIN,
    cov_hyper,
    hyper_angles_from_lengths,
    mu_segment_integral,
    phi,
    vol_hyper,
)
from hypmet.ideal import cov_ideal, ideal_volume
from hypmet.lobachevsky import lobachevsky
from hypmet.metrics import angles_of_metric, cov_complex
from hypmet.solver import duality_gap, rigidity_check, solve_metric

from oracles import (
    central_difference,
    lengths_of_angles,
    lobachevsky_quadrature,
    random_positive_hyper_k,
    random_positive_ideal_k,
)

# frozen from the quadrature oracle
LOB_PI_6 = 0.5074708032048268
LOB_PI_4 = 0.4579827970886095  # half of Catalan's constant
REGULAR_IDEAL_VOL = 1.0149416064096539  # 3 Lambda(pi/3)
FIG8_VOL = 2.0298832128193078  # 6 Lambda(pi/3)
OCTA_COV = 7.3277247534177521  # 16 Lambda(pi/4)
OCTA_VOL = 3.6638623767088760  # 8 Lambda(pi/4)

ACOSH2 = math.acosh(2.0)
EQUI_ANGLE = math.acos(2.0 / 3.0)
TWO_PI = 2 * math.pi


def _announce(number, text):
    print(f"\nACCEPTANCE {number}: PASS - {text}")


def test_criterion_1_lobachevsky_accuracy():
    start = time.perf_counter()
    assert abs(lobachevsky(math.pi / 6) - LOB_PI_6) <= 1e-9
    assert abs(lobachevsky(math.pi / 6) - lobachevsky_quadrature(math.pi / 6)) <= 1e-9
    assert abs(lobachevsky(math.pi / 4) - LOB_PI_4) <= 1e-9
    assert abs(lobachevsky(math.pi / 4) - lobachevsky_quadrature(math.pi / 4)) <= 1e-9
    rng = np.random.default_rng(100)
    for x in rng.uniform(-10, 10, 1000):
        assert abs(lobachevsky(x + math.pi) - lobachevsky(x)) <= 1e-14
        assert abs(lobachevsky(-x) + lobachevsky(x)) <= 1e-14
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    _announce(1, f"Lambda values to 1e-9, symmetries to 1e-14 ({elapsed:.2f}s < 1s)")


def test_criterion_2_regular_ideal_tetrahedron():
    vol = ideal_volume([math.pi / 3] * 6)
    assert abs(vol - REGULAR_IDEAL_VOL) <= 1e-10
    assert abs(vol - 2 * lobachevsky(math.pi / 6)) <= 1e-10  # duplication identity
    value, _ = cov_ideal([0.0] * 6)
    assert abs(value - 2 * REGULAR_IDEAL_VOL) <= 1e-10
    _announce(2, "3*Lambda(pi/3) = 2*Lambda(pi/6) and cov(0) = 6*Lambda(pi/3) to 1e-10")


def test_criterion_3_hyper_ideal_base_point():
    start = time.perf_counter()
    assert abs(cov_hyper([0.0] * 6) - OCTA_COV) <= 1e-8
    assert abs(COV_AT_ORIGIN - 16 * lobachevsky(math.pi / 4)) <= 1e-12
    assert abs(vol_hyper([1e-4] * 6) - OCTA_VOL) <= 1e-4
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    _announce(3, f"cov(0) = 16*Lambda(pi/4) to 1e-8, octahedron volume limit to 1e-4 ({elapsed:.2f}s < 5s)")


def test_criterion_4_symmetric_hyper_solve(double_tet):
    start = time.perf_counter()
    k = np.full(6, 2 * EQUI_ANGLE)
    report = rigidity_check(double_tet, k, "hyper", starts=10, seed=104)
    assert report.ok
    result = solve_metric(double_tet, k, "hyper")
    assert np.max(np.abs(result.lengths - ACOSH2)) <= 1e-8
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    _announce(4, f"10-start doubled-tet solve hits arccosh(2) to 1e-8 ({elapsed:.2f}s < 10s)")


def test_criterion_5_figure_eight_complement(fig8):
    start = time.perf_counter()
    k = np.array([TWO_PI, TWO_PI])
    result = solve_metric(fig8, k, "ideal")
    assert np.max(np.abs(result.assignment - math.pi / 3)) <= 1e-7
    assert abs(result.volume - FIG8_VOL) <= 1e-7
    gap = duality_gap(fig8, k, result, samples=1000, seed=105)
    assert gap <= 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 10.0
    _announce(
        5,
        f"fig8 solve: angles pi/3 to 1e-7, volume {result.volume:.7f} to 1e-7, "
        f"duality gap {gap:.2e} <= 1e-9 ({elapsed:.2f}s < 10s)",
    )


def _fd_matches(fd, grad, rtol=1e-5, atol=2e-6):
    return np.allclose(fd, grad, rtol=rtol, atol=atol)


def test_criterion_6_schlafli_gradient_suite(fig8, double_tet):
    rng = np.random.default_rng(106)

    # ideal kernel: 100 points, including degenerate (flat-pattern) samples
    checked = 0
    while checked < 100:
        l = rng.uniform(-2.0, 2.0, 6)
        y = np.array([0.5 * (l[p] + l[p + 3]) for p in range(3)])
        x = np.exp(y - y.max())
        slacks = [abs(x[j] + x[k] - x[i]) for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1))]
        if min(slacks) < 1e-2:
            continue  # cusp standoff; both sides of the frontier remain sampled
        _, grad = cov_ideal(l)
        fd = central_difference(lambda v: cov_ideal(v)[0], l, h=1e-6)
        assert _fd_matches(fd, grad)
        checked += 1

    # hyper kernel: 100 points in L, in the flat regions, and with negative
    # (clamped) coordinates
    def hyper_point(index):
        if index % 4 == 3:  # flat interior
            s = rng.uniform(0.3, 1.2)
            l = np.array([0.0, s, s, 0.0, s, s])
            l[0] = l[3] = math.acosh(2 * math.cosh(s) + 1) + rng.uniform(0.3, 1.0)
            return l
        if index % 4 == 2:  # clamped coordinate
            l = rng.uniform(0.4, 2.0, 6)
            l[rng.integers(0, 6)] = rng.uniform(-2.0, -0.5)
            return l
        return rng.uniform(0.3, 2.5, 6)

    checked = 0
    index = 0
    while checked < 100:
        l = hyper_point(index)
        index += 1
        ph = phi(np.maximum(l, 1e-9))
        standoff = min(
            (min(abs(ph[s] - 1.0), abs(ph[s] + 1.0)) for s in range(6) if l[s] > 0.01),
            default=1.0,
        )
        if standoff < 5e-3:
            continue
        a = np.asarray(hyper_angles_from_lengths(l))
        fd = central_difference(lambda v: cov_hyper(v, tol=1e-12), l, h=1e-5)
        assert _fd_matches(fd, a)
        checked += 1

    # complex level, both flavors
    for c, flavor, box in ((fig8, "ideal", (-1.5, 1.5)), (double_tet, "hyper", (0.3, 2.2))):
        checked = 0
        while checked < 20:
            l = rng.uniform(*box, c.num_edges)
            a = angles_of_metric(c, np.abs(l) if flavor == "hyper" else l, flavor)
            if flavor == "hyper":
                l = np.abs(l)
            if np.min(a) < 5e-2 or np.min(math.pi - a) < 5e-2:
                continue
            _, grad = cov_complex(c, l, flavor, tol=1e-12)
            fd = central_difference(lambda v: cov_complex(c, v, flavor, tol=1e-12)[0], l, h=1e-5)
            assert _fd_matches(fd, grad)
            checked += 1
    _announce(6, "analytic gradients match finite differences to 1e-5 (100+ points per flavor)")


def test_criterion_7_round_trip_suite():
    rng = np.random.default_rng(107)

    # 500 interior round trips at 1e-10
    worst = 0.0
    count = 0
    while count < 500:
        a = rng.uniform(0.05, math.pi / 2, 6)
        sums = [a[0] + a[1] + a[2], a[0] + a[4] + a[5], a[1] + a[3] + a[5], a[2] + a[3] + a[4]]
        if max(sums) >= math.pi - 0.05:
            continue
        back = np.asarray(hyper_angles_from_lengths(lengths_of_angles(a)))
        worst = max(worst, float(np.max(np.abs(back - a))))
        count += 1
    assert worst <= 1e-10

    # vertex-route symmetry of the cosine-law values at 1e-12
    from hypmet.hyperideal import EDGE_VERTICES, vertex_edge_length

    def phi_from_vertex(l, slot, which):
        lv = {frozenset(EDGE_VERTICES[s]): l[s] for s in range(6)}
        i, j = EDGE_VERTICES[slot]
        if which == 1:
            i, j = j, i
        k, h = sorted(set(range(4)) - {i, j})

        def x(a, b, c):
            return vertex_edge_length(
                lv[frozenset((a, b))], lv[frozenset((a, c))], lv[frozenset((b, c))]
            )

        xjk, xjh, xkh = x(i, j, k), x(i, j, h), x(i, k, h)
        return (math.cosh(xjk) * math.cosh(xjh) - math.cosh(xkh)) / (
            math.sinh(xjk) * math.sinh(xjh)
        )

    for _ in range(200):
        l = rng.uniform(0.3, 2.5, 6)
        for slot in range(6):
            a = phi_from_vertex(l, slot, 0)
            b = phi_from_vertex(l, slot, 1)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(a))

    # flat-pair exclusivity over 10^4 samples
    violations = 0
    for _ in range(10_000):
        values = phi(rng.uniform(0.05, 3.0, 6))
        flat = {p for p in range(3) if values[p] <= -1.0 or values[p + 3] <= -1.0}
        if len(flat) > 1:
            violations += 1
    assert violations == 0
    _announce(
        7,
        f"500 round trips (worst {worst:.2e} <= 1e-10), vertex symmetry to 1e-12, "
        "0/10000 exclusivity violations",
    )


def test_criterion_8_rigidity_suite(fig8, double_tet):
    rng = np.random.default_rng(108)
    runs = 0
    for c, name in ((fig8, "fig8"), (double_tet, "double_tet")):
        for flavor in ("ideal", "hyper"):
            for _ in range(5):
                if flavor == "ideal":
                    k = random_positive_ideal_k(c, rng)
                else:
                    k = random_positive_hyper_k(c, rng)
                report = rigidity_check(c, k, flavor, starts=10, seed=int(rng.integers(1 << 31)))
                assert report.ok, (name, flavor, k, report)
                runs += 1
    _announce(8, f"{runs} targets x 10 starts agree within 1e-7 (both fixtures, both flavors)")


def test_criterion_9_convexity_duality_suite(fig8, double_tet):
    rng = np.random.default_rng(109)

    # midpoint convexity of cov, ideal flavor (complex level)
    for _ in range(50):
        l1 = rng.uniform(-2, 2, 2)
        l2 = rng.uniform(-2, 2, 2)
        vm, _ = cov_complex(fig8, 0.5 * (l1 + l2), "ideal")
        v1, _ = cov_complex(fig8, l1, "ideal")
        v2, _ = cov_complex(fig8, l2, "ideal")
        assert vm <= 0.5 * (v1 + v2) + 1e-8

    # midpoint convexity of cov, hyper flavor, segments crossing the walls
    tol = 1e-10
    for _ in range(30):
        inside = rng.uniform(0.4, 1.2, 6)
        s = rng.uniform(0.3, 1.0)
        outside = np.array([0.0, s, s, 0.0, s, s])
        outside[0] = outside[3] = math.acosh(2 * math.cosh(s) + 1) + rng.uniform(0.2, 1.0)
        vm = cov_hyper(0.5 * (inside + outside), tol=tol)
        v1 = cov_hyper(inside, tol=tol)
        v2 = cov_hyper(outside, tol=tol)
        assert vm <= 0.5 * (v1 + v2) + 1e-8

    # midpoint convexity of W on feasible cone angles, both flavors
    for c, flavor, sampler in (
        (fig8, "ideal", random_positive_ideal_k),
        (double_tet, "hyper", random_positive_hyper_k),
    ):
        for _ in range(2):
            k1 = sampler(c, rng)
            k2 = sampler(c, rng)
            w1 = solve_metric(c, k1, flavor).w_value
            w2 = solve_metric(c, k2, flavor).w_value
            wm = solve_metric(c, 0.5 * (k1 + k2), flavor).w_value
            assert wm <= 0.5 * (w1 + w2) + 1e-8

    # path independence of the covolume extension at 2x quadrature tolerance
    for _ in range(10):
        l = rng.uniform(-0.5, 2.5, 6)
        straight = mu_segment_integral([0.0] * 6, l, tol=tol)
        p = np.zeros(6)
        axis = 0.0
        for e in range(6):
            q = p.copy()
            q[e] = l[e]
            axis += mu_segment_integral(p, q, tol=tol)
            p = q
        assert abs(straight - axis) <= 2 * tol
    _announce(9, "cov and W midpoint convexity (slack >= -1e-8); path independence within 2*tol")
