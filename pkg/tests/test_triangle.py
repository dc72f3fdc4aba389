import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from shapely.geometry import Point, Polygon

from packdense import triangle as tr
from packdense.errors import DomainError

HEX = math.pi / math.sqrt(12)
FLORIAN_Q = math.sqrt(2) - 1

# Largest radius normalised to 1.  Much smaller ratios push an angle against
# pi/2, where tan amplifies rounding and the angle form loses digits.
radius = st.floats(min_value=1e-3, max_value=1.0, allow_nan=False)


def kite(theta):
    """Vertex, foot, incentre, foot of the two right triangles at one vertex."""
    v = (1 / math.cos(theta), 0.0)
    f1 = (math.cos(theta), math.sin(theta))
    f2 = (math.cos(theta), -math.sin(theta))
    return v, Polygon([v, f1, (0, 0), f2])


def shapely_density(angles):
    # Triangle with inradius 1 about the origin; feet and vertices alternate around it.
    pts, discs = [], []
    phi = 0.0
    for t in angles:
        phi += t
        v = (math.cos(phi) / math.cos(t), math.sin(phi) / math.cos(t))
        pts.append(v)
        discs.append(Point(v).buffer(math.tan(t), quad_segs=4096))
        phi += t
    tri = Polygon(pts)
    covered = discs[0].union(discs[1]).union(discs[2]).intersection(tri)
    return covered.area / tri.area


def test_sector_area_examples():
    assert tr.sector_area(math.pi / 3) == pytest.approx(math.pi / 2, rel=1e-14)
    assert tr.sector_area(math.pi / 4) == pytest.approx(math.pi / 4, rel=1e-14)


def test_sector_area_against_polygon_clipping():
    v, k = kite(0.5)
    disc = Point(v).buffer(math.tan(0.5), quad_segs=4096)
    assert tr.sector_area(0.5) == pytest.approx(disc.intersection(k).area, rel=1e-6)


@pytest.mark.parametrize("theta", [0.0, -0.1, math.pi / 2, math.pi / 2 - 1e-10, 2.0])
def test_angle_domain(theta):
    with pytest.raises(DomainError):
        tr.sector_area(theta)
    with pytest.raises(DomainError):
        tr.triangle_halfarea(theta)


def test_triangle_halfarea_examples():
    assert tr.triangle_halfarea(math.pi / 4) == pytest.approx(1.0, rel=1e-15)
    assert tr.triangle_halfarea(math.pi / 3) == pytest.approx(math.sqrt(3), rel=1e-15)
    assert tr.triangle_halfarea(0.2) == math.tan(0.2)


def test_angle_triple_invariants():
    with pytest.raises(DomainError):
        tr.AngleTriple(1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        tr.AngleTriple(math.pi / 2, math.pi / 4, math.pi / 4)
    tr.AngleTriple(math.pi / 3, math.pi / 3, math.pi / 3)


def test_density_angles_equilateral():
    assert tr.density_angles((math.pi / 3,) * 3) == pytest.approx(HEX, abs=1e-15)


def test_density_angles_florian_configuration():
    q = FLORIAN_Q
    t1 = math.atan(math.sqrt(1 + 2 * q) / q)
    t2 = math.atan(math.sqrt(1 + 2 * q))
    assert abs(t1 + 2 * t2 - math.pi) < 1e-15
    t1 = math.pi - 2 * t2
    assert tr.density_angles((t1, t2, t2)) == pytest.approx(0.9208355993, abs=1e-9)


@pytest.mark.parametrize("angles", [(0.9, 1.0, math.pi - 1.9), (0.5, 1.2, math.pi - 1.7),
                                    (1.3, 1.3, math.pi - 2.6)])
def test_density_angles_against_polygon_clipping(angles):
    assert tr.density_angles(angles) == pytest.approx(shapely_density(angles), abs=1e-6)


def test_incircle_radius():
    assert tr.incircle_radius((1, 1, 1)) == pytest.approx(1 / math.sqrt(3), rel=1e-15)
    assert tr.incircle_radius((1, 0.5, 0.5)) == pytest.approx(0.3535533906, abs=1e-10)
    # classical r = Area / s for the triangle with sides 5, 6, 7
    a, b, c = 5, 6, 7
    s = (a + b + c) / 2
    area = math.sqrt(s * (s - a) * (s - b) * (s - c))
    assert tr.incircle_radius((2, 3, 4)) == pytest.approx(area / s, rel=1e-14)


def test_heron_area():
    assert tr.triangle_area_heron((1, 1, 1)) == pytest.approx(math.sqrt(3), rel=1e-15)
    assert tr.triangle_area_heron((1, 2, 3)) == pytest.approx(6.0, rel=1e-15)
    assert tr.triangle_area_heron((1, 1, 1e-12)) < 1e-5
    r = (2.0, 3.0, 4.0)
    assert tr.triangle_area_heron(r) == pytest.approx(tr.incircle_radius(r) * sum(r), rel=1e-14)


@pytest.mark.parametrize("bad", [(0, 1, 1), (-1, 1, 1), (1, float("nan"), 1), (1, 1, float("inf"))])
def test_radius_domain(bad):
    with pytest.raises(DomainError):
        tr.density_radii(bad)
    with pytest.raises(DomainError):
        tr.incircle_radius(bad)


def test_density_radii_examples():
    assert tr.density_radii((1, 1, 1)) == pytest.approx(HEX, abs=1e-15)
    assert tr.density_radii((1, FLORIAN_Q, FLORIAN_Q)) == pytest.approx(0.9208355993, abs=1e-9)
    r = (1, 0.4, 0.7)
    assert tr.density_radii(r) == pytest.approx(tr.density_angles(tr.angles_from_radii(r)), abs=1e-12)


def test_angles_from_radii():
    a = tr.angles_from_radii((1, 1, 1))
    for t in a:
        assert t == pytest.approx(math.pi / 3, abs=1e-15)
    q = 0.5
    a = tr.angles_from_radii((1, q, q))
    assert math.tan(a.theta1) == pytest.approx(math.sqrt(1 + 2 * q) / q, rel=1e-13)
    assert math.tan(a.theta2) == pytest.approx(math.sqrt(1 + 2 * q), rel=1e-13)
    # half the vertex angle at the large disc
    assert math.pi / 2 - a.theta1 == pytest.approx(math.asin(q / (1 + q)), abs=1e-14)
    a = tr.angles_from_radii((2, 3, 4))
    assert abs(sum(a) - math.pi) <= 1e-12


def test_florian_bound_examples():
    assert tr.florian_bound(1.0) == pytest.approx(HEX, abs=1e-15)
    assert tr.florian_bound(FLORIAN_Q) == pytest.approx(0.9208355993, abs=1e-9)
    assert tr.florian_bound(0.3) == pytest.approx(tr.density_radii((1, 0.3, 0.3)), abs=1e-12)
    for bad in (0.0, -0.5, 1.0001):
        with pytest.raises(DomainError):
            tr.florian_bound(bad)


def test_florian_strictly_decreasing():
    qs = np.linspace(0.01, 1.0, 10_000)
    vals = np.array([tr.florian_bound(float(q)) for q in qs])
    assert np.all(np.diff(vals) < 0)


def test_ratio_examples():
    assert tr.ratio_lls_over_lss(1 - 1e-7) == pytest.approx(1.0, abs=1e-6)
    direct = tr.density_radii((1, 0.5, 0.5)) / tr.density_radii((1, 1, 0.5))
    assert tr.ratio_lls_over_lss(0.5) == pytest.approx(direct, rel=1e-14)
    with pytest.raises(DomainError):
        tr.ratio_lls_over_lss(1.0)
    with pytest.raises(DomainError):
        tr.ratio_lls_over_lss(0.0)


def test_ratio_exceeds_one_away_from_one():
    r = np.linspace(1e-4, 0.999, 20_000)
    assert np.all(tr.ratio_lls_over_lss(r) > 1)


def test_intermediate_curve():
    assert tr.intermediate_density_curve(0.4, 0.4) == pytest.approx(tr.florian_bound(0.4), abs=1e-12)
    assert tr.intermediate_density_curve(0.4, 1.0) == tr.density_radii((0.4, 1.0, 1.0))
    with pytest.raises(DomainError):
        tr.intermediate_density_curve(0.5, 0.4)


def test_intermediate_endpoints_are_local_maxima():
    r = np.linspace(0.4, 1.0, 1000)
    vals = np.array([tr.intermediate_density_curve(0.4, float(x)) for x in r])
    assert vals[0] > vals[1] and vals[-1] > vals[-2]
    assert vals.min() < min(vals[0], vals[-1])


def test_check_min_density():
    rep = tr.check_min_density(200)
    assert rep.min_value >= HEX - 1e-12
    assert rep.min_value == pytest.approx(HEX, abs=1e-4)
    assert max(abs(t - math.pi / 3) for t in rep.argmin) <= rep.resolution
    assert tr.check_min_density(10).min_value >= HEX - 1e-12
    with pytest.raises(DomainError):
        tr.check_min_density(9)


def test_minimum_only_at_equilateral():
    th = tr.simplex_grid(120)
    t = np.tan(th)
    dens = np.sum((np.pi / 2 - th) * t * t, axis=1) / np.sum(t, axis=1)
    near = dens <= HEX + 1e-9
    assert np.all(np.abs(th[near] - math.pi / 3).max(axis=1) < 0.05)


def test_gap_area_curvature_negative():
    # central differences of the slope at 10^3 points of (0, pi/2)
    h = 1e-5
    thetas = np.linspace(0.001, math.pi / 2 - 0.001, 1000)
    for t in thetas:
        fd = (tr.gap_area_slope(t + h) - tr.gap_area_slope(t - h)) / (2 * h)
        exact = tr.gap_area_curvature(t)
        assert fd < 0
        assert exact < 0
        assert fd == pytest.approx(exact, rel=1e-4)


def test_gap_area_curvature_against_mpmath():
    import mpmath as mp

    mp.mp.dps = 40
    g = lambda t: mp.tan(t) - (mp.pi / 2 - t) * mp.tan(t) ** 2  # noqa: E731
    for t in [0.001, 0.1, 0.7, 1.0, 1.3, 1.5]:
        assert tr.gap_area_curvature(t) == pytest.approx(float(mp.diff(g, t, 2)), rel=1e-8)


def test_gap_area_slope_against_mpmath():
    import mpmath as mp

    mp.mp.dps = 40
    g = lambda t: mp.tan(t) - (mp.pi / 2 - t) * mp.tan(t) ** 2  # noqa: E731
    for t in [0.01, 0.7, 1.0708, 1.08, 1.4, 1.5697963]:
        assert tr.gap_area_slope(t) == pytest.approx(float(mp.diff(g, t)), rel=1e-12)


def test_gap_area_slope_matches_finite_difference():
    h = 1e-6
    for t in np.linspace(0.05, 1.5, 50):
        fd = (tr.gap_area(t + h) - tr.gap_area(t - h)) / (2 * h)
        assert fd == pytest.approx(tr.gap_area_slope(t), rel=1e-6, abs=1e-8)


def test_sector_area_alone_is_not_concave():
    # The concave quantity is the uncovered area; the sector area itself turns convex.
    h = 1e-4
    t = 1.3
    second = (tr.sector_area(t + h) - 2 * tr.sector_area(t) + tr.sector_area(t - h)) / h ** 2
    assert second > 0


def test_enumerate_two_size():
    sols = {(s.n, s.m): s for s in tr.enumerate_two_size()}
    assert set(sols) == {(3, 6), (4, 4), (6, 3)}
    for s in sols.values():
        assert 1 / s.n + 1 / s.m == pytest.approx(0.5, abs=1e-15)
        assert s.alpha == pytest.approx(math.pi / s.n)
        assert 0 < s.ratio <= 1
    assert sols[4, 4].ratio == pytest.approx(0.4142135624, abs=1e-10)
    assert sols[6, 3].ratio == pytest.approx(1.0, abs=1e-15)
    small = sols[3, 6].ratio
    assert small == pytest.approx(2 / math.sqrt(3) - 1, abs=1e-12)
    # a disc of that radius fits exactly in the gap between three unit discs
    assert 1 + small == pytest.approx(2 / math.sqrt(3), abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(radius, radius, radius)
def test_cross_form_identity(a, b, c):
    r = (a, b, c)
    assert abs(tr.density_radii(r) - tr.density_angles(tr.angles_from_radii(r))) < 1e-10


@settings(max_examples=300, deadline=None)
@given(st.floats(min_value=1e-3, max_value=1.0))
def test_florian_identity(q):
    assert abs(tr.florian_bound(q) - tr.density_radii((1, q, q))) < 1e-12


@settings(max_examples=300, deadline=None)
@given(st.floats(0.01, 1.0), st.floats(0.0, 1.0))
def test_ordering_chain(r1, t):
    r2 = r1 + t * (1 - r1)
    assert tr.density_radii((r1, r2, 1.0)) <= tr.density_radii((r1, r1, 1.0)) + 1e-12


@settings(max_examples=200, deadline=None)
@given(radius, radius, radius, st.floats(min_value=1e-3, max_value=1e3))
def test_scale_invariance(a, b, c, s):
    assert tr.density_radii((s * a, s * b, s * c)) == pytest.approx(tr.density_radii((a, b, c)), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(radius, radius, radius)
def test_permutation_invariance(a, b, c):
    base = tr.density_radii((a, b, c))
    for perm in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]:
        assert tr.density_radii(perm) == pytest.approx(base, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(radius, radius, radius)
def test_density_never_below_hexagonal(a, b, c):
    assert tr.density_radii((a, b, c)) >= HEX - 1e-12
