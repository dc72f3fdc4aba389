"""Density of three mutually tangent discs restricted to their centre triangle.

Two parametrisations are provided.  In the angle form the triangle is scaled
so its inradius is 1 and disc ``i`` has radius ``tan(theta_i)``, where
``theta_i`` is the angle at the incentre between the bisector towards vertex
``i`` and the foot of the perpendicular on an adjacent side.  In the radius
form the three radii are given directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from .errors import DomainError

HEX_DENSITY = math.pi / math.sqrt(12.0)

# Angles this close to pi/2 correspond to a disc of radius > 1e9 and are rejected.
ANGLE_EDGE = 1e-9
ANGLE_SUM_TOL = 1e-12


@dataclass(frozen=True)
class AngleTriple:
    theta1: float
    theta2: float
    theta3: float

    def __post_init__(self):
        for t in self:
            _check_theta(t)
        if abs(self.theta1 + self.theta2 + self.theta3 - math.pi) > ANGLE_SUM_TOL:
            raise DomainError(f"angles must sum to pi, got {sum(self)!r}")

    def __iter__(self):
        return iter((self.theta1, self.theta2, self.theta3))


@dataclass(frozen=True)
class RadiusTriple:
    r1: float
    r2: float
    r3: float

    def __post_init__(self):
        for r in self:
            if not (r > 0 and math.isfinite(r)):
                raise DomainError(f"radii must be positive and finite, got {r!r}")

    def __iter__(self):
        return iter((self.r1, self.r2, self.r3))


@dataclass(frozen=True)
class TwoSizeSolution:
    """Vertex data of a triangulated packing whose every triangle is a, b, b.

    ``n`` is the number of neighbours of an a-disc and ``2m`` the number of
    neighbours of a b-disc; ``alpha`` is the half angle at the a-disc.
    """

    n: int
    m: int
    alpha: float
    ratio: float


AngleLike = Union[AngleTriple, Iterable[float]]
RadiusLike = Union[RadiusTriple, Iterable[float]]


def _check_theta(theta: float) -> None:
    if not (0.0 < theta < math.pi / 2 - ANGLE_EDGE):
        raise DomainError(f"angle {theta!r} outside (0, pi/2)")


def _angles(angles: AngleLike) -> AngleTriple:
    return angles if isinstance(angles, AngleTriple) else AngleTriple(*angles)


def _radii(radii: RadiusLike) -> RadiusTriple:
    return radii if isinstance(radii, RadiusTriple) else RadiusTriple(*radii)


def sector_area(theta: float) -> float:
    """Area of the disc sector of radius ``tan(theta)`` inside the triangle."""
    _check_theta(theta)
    return (math.pi / 2 - theta) * math.tan(theta) ** 2


def triangle_halfarea(theta: float) -> float:
    """Twice the area of the right triangle with unit leg and angle ``theta``."""
    _check_theta(theta)
    return math.tan(theta)


def gap_area(theta: float) -> float:
    """Uncovered part of the two right triangles at one vertex: t - a."""
    return triangle_halfarea(theta) - sector_area(theta)


def gap_area_slope(theta: float) -> float:
    """Derivative of :func:`gap_area` in closed form."""
    _check_theta(theta)
    eps = math.pi / 2 - theta
    if eps > 0.5:
        t = math.tan(theta)
        return 1 + 2 * t * t - (math.pi - 2 * theta) * t * (1 + t * t)
    # Numerator (5 sin e + sin 3e)/4 - 2 e cos e over sin^3 e, summed as a series.
    num, k, fact = 0.0, 0, 1.0
    while k < 20:
        k += 1
        fact *= (2 * k) * (2 * k + 1)
        coef = (5 + 3 ** (2 * k + 1)) / 4 - 2 * (2 * k + 1)
        num += (-1) ** k * coef * eps ** (2 * k + 1) / fact
    return num / math.sin(eps) ** 3


def gap_area_curvature(theta: float) -> float:
    """Second derivative of :func:`gap_area` in closed form."""
    _check_theta(theta)
    eps = math.pi / 2 - theta
    c = math.sin(eps)
    if eps > 0.5:
        num = 4 * eps * c * c + 6 * c * math.cos(eps) - 6 * eps
    else:
        # The closed numerator cancels to O(eps^5); sum its series in u = 2 eps instead.
        u = 2 * eps
        num, term, k = 0.0, u ** 3 / 6.0, 1
        while k < 20:
            k += 1
            term *= -u * u / ((2 * k) * (2 * k + 1))
            num += (2 * k - 2) * term
    return num / c ** 4


def density_angles(angles: AngleLike) -> float:
    a = _angles(angles)
    covered = sum(sector_area(t) for t in a)
    total = sum(triangle_halfarea(t) for t in a)
    return covered / total


def incircle_radius(radii: RadiusLike) -> float:
    r1, r2, r3 = _radii(radii)
    return math.sqrt(r1 * r2 * r3 / (r1 + r2 + r3))


def triangle_area_heron(radii: RadiusLike) -> float:
    r1, r2, r3 = _radii(radii)
    return math.sqrt(r1 * r2 * r3 * (r1 + r2 + r3))


def _density_radii_np(r1, r2, r3):
    # Vectorised core shared by the scalar API and the grid scans.
    s = r1 + r2 + r3
    R = np.sqrt(r1 * r2 * r3 / s)
    covered = sum((np.pi / 2 - np.arctan(r / R)) * r * r for r in (r1, r2, r3))
    return covered / (R * s)


def density_radii(radii: RadiusLike) -> float:
    r = _radii(radii)
    R = incircle_radius(r)
    covered = sum((math.pi / 2 - math.atan(ri / R)) * ri * ri for ri in r)
    return covered / triangle_area_heron(r)


def angles_from_radii(radii: RadiusLike) -> AngleTriple:
    r = _radii(radii)
    R = incircle_radius(r)
    t1, t2, t3 = (math.atan(ri / R) for ri in r)
    # atan rounding can leave the sum a few ulps off pi; absorb it in the largest.
    err = math.pi - (t1 + t2 + t3)
    ts = [t1, t2, t3]
    k = max(range(3), key=ts.__getitem__)
    ts[k] += err
    return AngleTriple(*ts)


def florian_bound(q: float) -> float:
    """Florian's upper bound s(q) on the density of a packing with radius ratio q."""
    if not (0.0 < q <= 1.0):
        raise DomainError(f"radius ratio {q!r} outside (0, 1]")
    num = math.pi * q * q + 2 * (1 - q * q) * math.asin(q / (1 + q))
    return num / (2 * q * math.sqrt(1 + 2 * q))


def ratio_lls_over_lss(r):
    """Large-small-small over large-large-small triangle density.

    Accepts a scalar or an array of ratios in (0, 1).
    """
    arr = np.asarray(r, dtype=float)
    if not np.all((arr > 0) & (arr < 1)):
        raise DomainError("ratio must lie in (0, 1)")
    out = _density_radii_np(1.0, arr, arr) / _density_radii_np(1.0, 1.0, arr)
    return float(out) if out.ndim == 0 else out


def intermediate_density_curve(r0: float, r: float) -> float:
    if not (0 < r0 <= r <= 1):
        raise DomainError(f"need 0 < r0 <= r <= 1, got r0={r0!r}, r={r!r}")
    return density_radii((r0, r, 1.0))


@dataclass(frozen=True)
class MinDensityReport:
    min_value: float
    argmin: tuple[float, float, float]
    n_points: int
    resolution: float


def simplex_grid(grid_n: int, eps: float = 0.05) -> np.ndarray:
    """Valid angle triples on a barycentric subdivision of the trimmed simplex.

    Points are ``eps + (pi - 3 eps) * (i, j, k) / grid_n`` with ``i+j+k = grid_n``;
    those with an angle at or beyond pi/2 are dropped.
    """
    i, j = np.meshgrid(np.arange(grid_n + 1), np.arange(grid_n + 1), indexing="ij")
    mask = i + j <= grid_n
    i, j = i[mask], j[mask]
    k = grid_n - i - j
    span = math.pi - 3 * eps
    th = eps + span * np.stack([i, j, k], axis=1) / grid_n
    ok = np.all(th < math.pi / 2 - ANGLE_EDGE, axis=1)
    return th[ok]


def check_min_density(grid_n: int, eps: float = 0.05) -> MinDensityReport:
    if grid_n < 10:
        raise DomainError("grid_n must be at least 10")
    th = simplex_grid(grid_n, eps)
    t = np.tan(th)
    dens = np.sum((np.pi / 2 - th) * t * t, axis=1) / np.sum(t, axis=1)
    k = int(np.argmin(dens))
    return MinDensityReport(
        min_value=float(dens[k]),
        argmin=tuple(float(v) for v in th[k]),
        n_points=len(th),
        resolution=(math.pi - 3 * eps) / grid_n,
    )


def enumerate_two_size() -> list[TwoSizeSolution]:
    """All (n, m) with 1/n + 1/m = 1/2, n >= 3, m >= 2.

    m = 2n/(n-2) is an integer only when n - 2 divides 4, so n <= 6.
    """
    out = []
    for n in range(3, 7):
        m = Fraction(2 * n, n - 2)
        if m.denominator != 1:
            continue
        alpha = math.pi / n
        s = math.sin(alpha)
        b_over_a = s / (1 - s)
        ratio = min(b_over_a, 1 / b_over_a)
        out.append(TwoSizeSolution(n=n, m=int(m), alpha=alpha, ratio=ratio))
    return out
