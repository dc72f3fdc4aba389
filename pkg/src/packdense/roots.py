"""Bracketed root finding and the certified critical radius ratios.

Integer polynomials are evaluated three ways: plain Horner, compensated
Horner (error-free transformations, roughly twice the working precision) and
an exact rational evaluation used to decide signs beyond doubt.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence, Union

from .errors import BracketError, CertificateError, DomainError


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with exact integer coefficients, lowest degree first."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if not coeffs or coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_descending(cls, coeffs: Sequence[int]) -> "IntPolynomial":
        return cls(tuple(reversed(coeffs)))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x: float) -> float:
        return compensated_horner(self, x)


def eval_polynomial(poly: IntPolynomial, x: float) -> float:
    acc = 0.0
    for c in reversed(poly.coefficients):
        acc = acc * x + c
    return acc


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    z = s - a
    return s, (a - (s - z)) + (b - z)


_SPLITTER = 134217729.0  # 2**27 + 1


def _split(a: float) -> tuple[float, float]:
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def compensated_horner(poly: IntPolynomial, x: float) -> float:
    """Horner's scheme with the rounding error of every step carried along."""
    coeffs = poly.coefficients
    s = float(coeffs[-1])
    c = 0.0
    for a in reversed(coeffs[:-1]):
        p, ep = _two_prod(s, x)
        s, es = _two_sum(p, float(a))
        c = c * x + (ep + es)
    return s + c


def exact_value(poly: IntPolynomial, x: float) -> Fraction:
    """Exact value at the binary rational ``x``."""
    fx = Fraction(x)
    acc = Fraction(0)
    for c in reversed(poly.coefficients):
        acc = acc * fx + c
    return acc


def exact_sign(poly: IntPolynomial, x: float) -> int:
    v = exact_value(poly, x)
    return (v > 0) - (v < 0)


def _sign(v: float) -> int:
    if not math.isfinite(v):
        raise FloatingPointError(f"non-finite function value {v!r}")
    return (v > 0) - (v < 0)


def bisect_bracket(
    f: Callable[[float], float], lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Shrink a sign-change bracket of ``f`` to width at most ``tol``.

    Stops early if the bracket cannot shrink further in floating point or if
    ``f`` vanishes exactly at a midpoint (then a degenerate bracket is returned).
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if not tol > 0:
        raise ValueError("tol must be positive")
    slo, shi = _sign(f(lo)), _sign(f(hi))
    if slo == 0:
        return lo, lo
    if shi == 0:
        return hi, hi
    if slo == shi:
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        sm = _sign(f(mid))
        if sm == 0:
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    a, b = bisect_bracket(f, lo, hi, tol)
    return 0.5 * (a + b)


def locate_sign_change(
    f: Callable[[float], float], lo: float, hi: float, pieces: int = 16
) -> tuple[float, float]:
    """Split ``[lo, hi]`` evenly and return the unique piece where ``f`` changes sign."""
    xs = [lo + (hi - lo) * k / pieces for k in range(pieces)] + [hi]
    signs = [_sign(f(x)) for x in xs]
    found = []
    for k in range(pieces):
        if signs[k] == 0:
            found.append((xs[k], xs[k]))
        elif signs[k] * signs[k + 1] < 0:
            found.append((xs[k], xs[k + 1]))
    if signs[-1] == 0:
        found.append((hi, hi))
    found = sorted(set(found))
    if not found:
        raise BracketError(f"no sign change found on [{lo!r}, {hi!r}]")
    if len(found) > 1:
        raise BracketError(f"ambiguous bracket on [{lo!r}, {hi!r}]: {found}")
    return found[0]


def find_root(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-14
) -> float:
    a, b = locate_sign_change(f, lo, hi)
    if a == b:
        return a
    return bisect(f, a, b, tol)


# Certificate polynomials for the critical ratios.
Q1_POLY = IntPolynomial.from_descending([1, 0, -10, -8, 9])
Q53_POLY = IntPolynomial.from_descending(
    [89, 1344, 4008, -464, -2410, 176, 296, -96, 1]
)
Q2_POLY = IntPolynomial.from_descending(
    [9, 81, 369, 1161, 2757, 4749, 5805, 5445, 3643, 1235, 243,
     -1029, -969, -369, -81, -9]
)
QFT_POLY = IntPolynomial.from_descending(
    [82944, 2073600, 25449984, 204553728, 1214611776, 5674077504,
     21595717440, 68441069376, 183725780496, 423619513104, 846900183408,
     1474917242352, 2239664278028, 2959314640332, 3384242724844,
     3313803241196, 2719452571159, 1783910866439, 815514300847,
     88889109343, -279883089565, -346836129933, -256274678853,
     -138435598005, -57157331979, -18283967739, -4571655651,
     -892845459, -132201675, -14152347, -985635, -33075]
)

Q_WINDOW = (0.60, 0.70)
QB_WINDOW = (0.70, 0.80)
CERT_WIDTH = 1e-12
ROOT_TOL = 1e-14


@lru_cache(maxsize=None)
def q1() -> float:
    """Radius ratio of the compact two-disc packing behind the Fejes Toth family."""
    return find_root(lambda x: compensated_horner(Q1_POLY, x), *Q_WINDOW, tol=ROOT_TOL)


@lru_cache(maxsize=None)
def q53() -> float:
    """Radius ratio (small over large) of the compact three-disc Packing 53."""
    return find_root(lambda x: compensated_horner(Q53_POLY, x), *Q_WINDOW, tol=ROOT_TOL)


@dataclass(frozen=True)
class CriticalRatio:
    name: str
    value: float
    bracket: tuple[float, float]
    certificate: Union[IntPolynomial, str]
    certificate_ok: bool
    residual: float
    notes: dict = field(default_factory=dict, compare=False)


def certificate_bracket(value: float, width: float = CERT_WIDTH) -> tuple[float, float]:
    """Bracket centred on ``value`` whose floating-point width is at most ``width``."""
    lo, hi = value - width / 2, value + width / 2
    while hi - lo > width:
        lo, hi = math.nextafter(lo, value), math.nextafter(hi, value)
    return lo, hi


def check_certificate(poly: IntPolynomial, bracket: tuple[float, float]) -> bool:
    """True iff ``poly`` takes strictly opposite signs at the bracket ends (exact)."""
    lo, hi = bracket
    return exact_sign(poly, lo) * exact_sign(poly, hi) < 0


def _poly_ratio(name: str, value: float, poly: IntPolynomial, residual: float) -> CriticalRatio:
    br = certificate_bracket(value)
    ok = check_certificate(poly, br)
    if not ok:
        raise CertificateError(f"{name}={value!r}: degree-{poly.degree} certificate has no sign change")
    return CriticalRatio(name, value, br, poly, ok, residual)


def _equation_ratio(name: str, value: float, tag: str, residual: float, tol: float = 1e-10) -> CriticalRatio:
    ok = abs(residual) < tol
    if not ok:
        raise CertificateError(f"{name}={value!r}: defining-equation residual {residual!r}")
    return CriticalRatio(name, value, certificate_bracket(value), tag, ok, residual)


def qb_equation(q: float) -> float:
    """q_B is the positive root of this quadratic in q."""
    s12 = math.sqrt(12.0)
    return q * q * (5 * math.tan(math.pi / 5) - s12) - (s12 - 7 * math.tan(math.pi / 7))


def critical_ratios() -> dict[str, CriticalRatio]:
    """Compute q1, q0, q2, q53, qFT and qB from their defining equations and certify them."""
    from . import f53_family, ft_family
    from .triangle import HEX_DENSITY

    v_q1, v_q53 = q1(), q53()
    lo, hi = Q_WINDOW

    ft_lo = max(lo, v_q1)
    v_q2 = find_root(lambda q: ft_family.ft_density_closed(q) - HEX_DENSITY, ft_lo, hi, ROOT_TOL)
    d53 = f53_family.f53_density_closed(v_q53)
    v_q0 = find_root(lambda q: ft_family.ft_density_closed(q) - d53, ft_lo, hi, ROOT_TOL)
    v_qft = find_root(
        lambda q: f53_family.f53_density_closed(q) - HEX_DENSITY, max(lo, v_q53), hi, ROOT_TOL
    )
    v_qb = find_root(qb_equation, *QB_WINDOW, tol=ROOT_TOL)

    # Geometric residuals: tangencies that appear exactly at q1 and q53.
    res_q1 = ft_family.ft_geometry(v_q1).y - 1.0
    g53 = f53_family.f53_geometry(1.0, f53_family.solve_p(v_q53), v_q53)
    res_q53 = g53.y - 1.0
    res_qb = v_qb - f53_family.qb_closed_form()

    table = [
        _poly_ratio("q1", v_q1, Q1_POLY, res_q1),
        _equation_ratio("q0", v_q0, "ft_density(q) = density of Packing 53",
                        ft_family.ft_density_closed(v_q0) - d53),
        _poly_ratio("q2", v_q2, Q2_POLY, ft_family.ft_density_closed(v_q2) - HEX_DENSITY),
        _poly_ratio("q53", v_q53, Q53_POLY, res_q53),
        _poly_ratio("qFT", v_qft, QFT_POLY, f53_family.f53_density_closed(v_qft) - HEX_DENSITY),
        _equation_ratio("qB", v_qb, "closed form sqrt((sqrt12 - 7 tan(pi/7)) / (5 tan(pi/5) - sqrt12))",
                        res_qb, tol=1e-12),
    ]
    if abs(res_q1) > 1e-10 or abs(res_q53) > 1e-10:
        raise CertificateError("polynomial root disagrees with the compact-packing tangency")
    return {cr.name: cr for cr in table}


def ordered(table: dict[str, CriticalRatio]) -> bool:
    names = ["q1", "q0", "q2", "q53", "qFT", "qB"]
    vals = [table[n].value for n in names]
    return all(a < b for a, b in zip(vals, vals[1:]))


def require_in(q: float, lo: float, hi: float, what: str) -> None:
    if not (lo <= q <= hi):
        raise DomainError(f"{what}: q={q!r} outside [{lo!r}, {hi!r}]")
