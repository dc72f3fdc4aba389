"""Perturbations of the three-disc compact Packing 53.

Radii are 1 (large), p (medium) and q (small).  Raising q above q53 opens
the contact between the two large discs of each small-disc rhombus, while the
two medium discs of each medium-disc rhombus stay in contact.  That
constraint is a quartic in p.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import roots
from .errors import BracketError, DomainError

_Q53_SLACK = 1e-9
_GEOM_TOL = 1e-12


def quartic(p: float, q: float) -> float:
    return (2 * p ** 4 + (4 * q + 3) * p ** 3 + (2 * q * q - 2 * q + 1) * p * p
            - (5 * q * q + 6 * q) * p + q * q)


def _check_domain(q: float) -> None:
    lo = roots.q53() - _Q53_SLACK
    if not (lo <= q <= 1.0):
        raise DomainError(f"Packing 53 family needs q in [q53, 1], got {q!r}")


@lru_cache(maxsize=4096)
def solve_p(q: float) -> float:
    """Medium radius p(q) on the branch through Packing 53 and p(1) = 1.

    The quartic is 4q^2 (2q+1)(q-1) < 0 at p = q and 2(q+3)(1-q) > 0 at p = 1,
    so [q, 1] brackets the branch for every q < 1; the bracket is scanned for
    a second sign change before bisecting.
    """
    _check_domain(q)
    if q == 1.0:
        return 1.0
    f = lambda p: quartic(p, q)  # noqa: E731
    try:
        lo, hi = roots.locate_sign_change(f, q, 1.0, pieces=32)
    except BracketError as exc:
        raise BracketError(f"lost the medium-radius root at q={q!r}: {exc}") from exc
    if lo == hi:
        return lo
    return roots.bisect(f, lo, hi, 1e-16)


@dataclass(frozen=True)
class F53Geometry:
    """Rhombus of two r1 and two r3 discs about a twofold centre.

    The r3 centres lie at distance ``x`` from the centre along the symmetry
    line, the r1 centres at distance ``y`` on either side; ``d`` is the
    distance between an r1 centre and the r1 centre beyond the neighbouring
    r3 disc on the symmetry line.
    """

    r1: float
    r2: float
    r3: float
    x: float
    y: float
    d: float

    @property
    def valid(self) -> bool:
        return self.y >= self.r1 - _GEOM_TOL and self.x >= self.r3 - _GEOM_TOL

    def residuals(self) -> tuple[float, float]:
        r1, r2, r3 = self.r1, self.r2, self.r3
        d2 = 16 * r1 * r2 * r3 * (r1 + r2 + r3) / (r2 + r3) ** 2
        return (
            self.x ** 2 + self.y ** 2 - (r1 + r3) ** 2,
            (self.x + r1 + r3) ** 2 + self.y ** 2 - d2,
        )


def f53_geometry(r1: float, r2: float, r3: float) -> F53Geometry:
    if min(r1, r2, r3) <= 0:
        raise DomainError("radii must be positive")
    s = r1 + r3
    x = 8 * r1 * r2 * r3 * (r1 + r2 + r3) / ((r2 + r3) ** 2 * s) - s
    if x * x > s * s:
        raise DomainError(f"no rhombus for radii {(r1, r2, r3)!r}")
    y = math.sqrt(s * s - x * x)
    d = 4 * math.sqrt(r1 * r2 * r3 * (r1 + r2 + r3)) / (r2 + r3)
    return F53Geometry(r1, r2, r3, x, y, d)


def quad_area(r1: float, a: float, b: float) -> float:
    g = f53_geometry(r1, a, b)
    return 2 * g.x * g.y


def f53_density_assembled(q: float) -> float:
    p = solve_p(q)
    tri = math.sqrt(p * q * (1 + p + q))
    total = 16 * tri + 2 * quad_area(1.0, p, q) + 2 * quad_area(1.0, q, p)
    return 4 * math.pi * (1 + p * p + q * q) / total


def f53_density_closed(q: float) -> float:
    p = solve_p(q)
    s = 1 + p + q
    num = math.pi * (1 + p * p + q * q) * (p + q) ** 4 * (1 + p) ** 2 * (1 + q) ** 2
    den = (32 * p * q * s * (8 * p * p * q * q - (p * p - 6 * p * q + q * q) * (s - p * q))
           * math.sqrt(p * q * s))
    return num / den


def qb_closed_form() -> float:
    s12 = math.sqrt(12.0)
    return math.sqrt((s12 - 7 * math.tan(math.pi / 7)) / (5 * math.tan(math.pi / 5) - s12))


def packing53_radii() -> tuple[float, float, float]:
    """(1, p, q) of the unperturbed Packing 53."""
    q = roots.q53()
    return 1.0, solve_p(q), q
