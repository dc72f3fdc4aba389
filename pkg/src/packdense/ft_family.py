"""Fejes Toth's perturbed two-disc packings, radius ratio q in [q1, 1].

In the quarter cell, unit discs sit at (0, sqrt(1+2q)) and (x, y) and a disc
of radius q at (q, 0); reflecting in both axes gives the whole cell.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import roots
from .errors import DomainError

_Q1_SLACK = 1e-9


@dataclass(frozen=True)
class FtGeometry:
    q: float
    x: float
    y: float

    @property
    def h(self) -> float:
        """Height of the upper unit disc centre above the small pair."""
        return math.sqrt(1 + 2 * self.q)

    def residuals(self) -> tuple[float, float]:
        """Squared-distance errors of the unit-unit and unit-small tangencies."""
        q, x, y = self.q, self.x, self.y
        return (
            x * x + (y - self.h) ** 2 - 4.0,
            (x - q) ** 2 + y * y - (1 + q) ** 2,
        )


def _check_domain(q: float) -> None:
    lo = roots.q1() - _Q1_SLACK
    if not (lo <= q <= 1.0):
        raise DomainError(f"Fejes Toth family needs q in [q1, 1], got {q!r}")


def ft_geometry(q: float) -> FtGeometry:
    _check_domain(q)
    r = math.sqrt(2 * q ** 3 + 5 * q * q + 2 * q)
    x = 2 * (q + r) / (q + 1) ** 2
    # Subtracting the two tangency equations gives y*sqrt(1+2q) = x*q + 2q - 1.
    y = (2 * q ** 3 + 5 * q * q + 2 * q * r - 1) / (math.sqrt(1 + 2 * q) * (q + 1) ** 2)
    return FtGeometry(q, x, y)


def ft_density_geometric(q: float) -> float:
    g = ft_geometry(q)
    return math.pi * (q * q + 1) / ((g.h + g.y) * g.x)


def ft_density_closed(q: float) -> float:
    _check_domain(q)
    r = math.sqrt(2 * q ** 3 + 5 * q * q + 2 * q)
    num = math.pi * (q * q + 1) * (q + 1) ** 4 * math.sqrt(1 + 2 * q)
    den = 4 * q * (2 * q * q + 5 * q + r + 2) * (q + r)
    return num / den
