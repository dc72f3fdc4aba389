"""Disc packings of a flat torus: construction, verification, I/O.

Centres are stored in Cartesian coordinates; the basis vectors generate the
lattice of translations.  Distances between disc ``i`` and the translate of
disc ``j`` by ``a*u + b*v`` are what every check in this module is made of.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from . import f53_family, ft_family, roots
from .errors import ConsistencyError, DomainError, PackingFormatError

OVERLAP_TOL = 1e-9
CONTACT_TOL = 1e-7
LABELS = ("L", "M", "S")


@dataclass(frozen=True)
class Disk:
    center: tuple[float, float]
    radius: float
    label: str = "L"


@dataclass(frozen=True)
class TorusPacking:
    basis: tuple[tuple[float, float], tuple[float, float]]
    disks: tuple[Disk, ...]

    def __post_init__(self):
        u, v = self.basis
        b = ((float(u[0]), float(u[1])), (float(v[0]), float(v[1])))
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "disks", tuple(self.disks))
        if self.det == 0.0 or not math.isfinite(self.det):
            raise DomainError("lattice basis is degenerate")

    @property
    def matrix(self) -> np.ndarray:
        """Basis vectors as the columns of a 2x2 array."""
        return np.array(self.basis, dtype=float).T

    @property
    def det(self) -> float:
        (ux, uy), (vx, vy) = self.basis
        return ux * vy - uy * vx

    @property
    def area(self) -> float:
        return abs(self.det)

    @property
    def centers(self) -> np.ndarray:
        return np.array([d.center for d in self.disks], dtype=float).reshape(-1, 2)

    @property
    def radii(self) -> np.ndarray:
        return np.array([d.radius for d in self.disks], dtype=float)

    @property
    def labels(self) -> list[str]:
        return [d.label for d in self.disks]

    @property
    def density(self) -> float:
        return float(np.sum(math.pi * self.radii ** 2) / self.area)

    def fractional(self) -> np.ndarray:
        return np.linalg.solve(self.matrix, self.centers.T).T


# -- lattice helpers ---------------------------------------------------------

def reduce_basis(B: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lagrange-Gauss reduction.  Returns ``(Br, U)`` with ``Br = B @ U``."""
    Br = np.array(B, dtype=float)
    U = np.eye(2, dtype=np.int64)
    while True:
        if Br[:, 0] @ Br[:, 0] > Br[:, 1] @ Br[:, 1]:
            Br = Br[:, ::-1].copy()
            U = U[:, ::-1].copy()
        mu = round(float(Br[:, 0] @ Br[:, 1]) / float(Br[:, 0] @ Br[:, 0]))
        if mu == 0:
            return Br, U
        Br[:, 1] -= mu * Br[:, 0]
        U[:, 1] -= mu * U[:, 0]


def lattice_shifts(
    B: np.ndarray, d: np.ndarray, reach: float, reduced=None
) -> Iterator[tuple[tuple[int, int], np.ndarray]]:
    """All integer ``n`` (in the basis ``B``) with ``|d + B n| <= reach``.

    Yields ``(n, d + B n)``.  ``reduced`` may carry a precomputed
    :func:`reduce_basis` result.
    """
    Br, U = reduced if reduced is not None else reduce_basis(B)
    det = abs(Br[0, 0] * Br[1, 1] - Br[0, 1] * Br[1, 0])
    hmin = det / max(math.hypot(*Br[:, 0]), math.hypot(*Br[:, 1]))
    k = int(math.ceil(reach / hmin)) + 1
    n0 = np.rint(np.linalg.solve(Br, -np.asarray(d, float))).astype(np.int64)
    a = np.arange(-k, k + 1)
    grid = np.stack(np.meshgrid(a, a, indexing="ij"), axis=-1).reshape(-1, 2) + n0
    W = d + grid @ Br.T
    mask = np.einsum("ij,ij->i", W, W) <= reach * reach
    for nr, w in zip(grid[mask], W[mask]):
        n = U @ nr
        yield (int(n[0]), int(n[1])), w


def wrap(B: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Translate points into the half-open cell spanned by ``B``."""
    f = np.linalg.solve(B, np.asarray(pts, float).T).T
    f = f - np.floor(f)
    f[f >= 1.0] = 0.0
    return (B @ f.T).T


def same_mod_lattice(B: np.ndarray, a, b, tol: float) -> bool:
    d = np.asarray(b, float) - np.asarray(a, float)
    return next(lattice_shifts(B, d, tol), None) is not None


def _pairs(p: TorusPacking, reach: float):
    """(i, j, n, distance) for i <= j over all translates within ``reach``."""
    B = p.matrix
    c = p.centers
    red = reduce_basis(B)
    for i in range(len(c)):
        for j in range(i, len(c)):
            for n, w in lattice_shifts(B, c[j] - c[i], reach, red):
                if i == j and n == (0, 0):
                    continue
                yield i, j, n, float(np.hypot(w[0], w[1]))


# -- verification ------------------------------------------------------------

@dataclass(frozen=True)
class PackingReport:
    ok: bool
    worst_overlap: float
    density: float


def verify_packing(p: TorusPacking) -> PackingReport:
    """Check disjoint interiors against every lattice translate.

    ``worst_overlap`` is the largest ``r_i + r_j - |c_i - c_j - t|`` found,
    so positive values mean overlap and values near zero mean contacts.
    """
    r = p.radii
    if len(r) == 0:
        return PackingReport(True, -math.inf, 0.0)
    reach = 2 * float(r.max()) + 1e-6
    worst = -math.inf
    for i, j, _, dist in _pairs(p, reach):
        worst = max(worst, r[i] + r[j] - dist)
    return PackingReport(bool(worst <= OVERLAP_TOL), float(worst), p.density)


@dataclass(frozen=True)
class ContactGraph:
    n_vertices: int
    edges: tuple[tuple[int, int, tuple[int, int]], ...]
    faces: tuple[tuple[int, ...], ...]

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def face_sizes(self) -> list[int]:
        return [len(f) for f in self.faces]

    @property
    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + len(self.faces)

    @property
    def triangulated(self) -> bool:
        return (self.n_edges > 0 and all(len(f) == 3 for f in self.faces)
                and self.euler_characteristic == 0)

    def degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for i, j, _ in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg


def contact_graph(p: TorusPacking, tol: float = CONTACT_TOL) -> ContactGraph:
    """Tangency graph on the torus with faces traced from the rotation system."""
    r = p.radii
    B = p.matrix
    c = p.centers
    reach = 2 * float(r.max()) + 10 * tol
    edges = []
    for i, j, n, dist in _pairs(p, reach):
        if abs(dist - (r[i] + r[j])) > tol:
            continue
        if i == j and n < (0, 0):
            continue  # each self-contact appears once per sign of n
        edges.append((i, j, n))

    darts = []
    for i, j, n in edges:
        darts.append((i, j, n))
        darts.append((j, i, (-n[0], -n[1])))
    around: dict[int, list] = {i: [] for i in range(len(c))}
    for d in darts:
        i, j, n = d
        w = c[j] + B @ np.array(n) - c[i]
        around[i].append((math.atan2(w[1], w[0]), d))
    order = {}
    for i, lst in around.items():
        lst.sort()
        around[i] = [d for _, d in lst]
        for k, d in enumerate(around[i]):
            order[d] = k

    faces = []
    seen = set()
    for start in darts:
        if start in seen:
            continue
        face = []
        d = start
        while d not in seen:
            seen.add(d)
            face.append(d[0])
            i, j, n = d
            rev = (j, i, (-n[0], -n[1]))
            lst = around[j]
            d = lst[(order[rev] + 1) % len(lst)]
        faces.append(tuple(face))
    return ContactGraph(len(c), tuple(edges), tuple(faces))


# -- constructions -----------------------------------------------------------

def _make(basis, disks) -> TorusPacking:
    B = np.array(basis, dtype=float).T
    pts = wrap(B, np.array([d[0] for d in disks]))
    return TorusPacking(
        basis=tuple(map(tuple, basis)),
        disks=tuple(Disk((float(x), float(y)), float(r), lab)
                    for (x, y), (_, r, lab) in zip(pts, disks)),
    )


def _accept(p: TorusPacking, expected_density: float, tol: float) -> TorusPacking:
    rep = verify_packing(p)
    if not rep.ok:
        raise ConsistencyError(f"constructed packing overlaps by {rep.worst_overlap:.3e}")
    if abs(rep.density - expected_density) > tol:
        raise ConsistencyError(
            f"measured density {rep.density!r} != closed form {expected_density!r}")
    return p


def build_hexagonal() -> TorusPacking:
    return TorusPacking(((2.0, 0.0), (1.0, math.sqrt(3.0))), (Disk((0.0, 0.0), 1.0, "L"),))


def build_ft(q: float) -> TorusPacking:
    """Fejes Toth packing: two unit and two radius-q discs per cell.

    The cell is the centred-rectangular lattice spanned by (2x, 0) and
    (x, sqrt(1+2q) + y); the unit disc at (x, y) of the quarter cell is the
    translate of the one at (0, -sqrt(1+2q)).
    """
    g = ft_family.ft_geometry(q)
    h = g.h
    basis = ((2 * g.x, 0.0), (g.x, h + g.y))
    disks = [((0.0, h), 1.0, "L"), ((0.0, -h), 1.0, "L"),
             ((q, 0.0), q, "S"), ((-q, 0.0), q, "S")]
    return _accept(_make(basis, disks), ft_family.ft_density_closed(q), 1e-10)


def _apex(a, ra, b, rb, away) -> np.ndarray:
    """Point at distances ``ra`` from ``a`` and ``rb`` from ``b``, across line ab from ``away``."""
    a, b, away = (np.asarray(v, float) for v in (a, b, away))
    e = b - a
    dist = math.hypot(*e)
    t = (ra * ra - rb * rb + dist * dist) / (2 * dist)
    hh = math.sqrt(max(ra * ra - t * t, 0.0))
    e = e / dist
    n = np.array([-e[1], e[0]])
    side = n @ (away - a)
    return a + t * e - math.copysign(hh, side) * n


def _affine_orbit(seeds, gens, B, tol=1e-8):
    out = []
    for pt, r, lab in seeds:
        orbit = [wrap(B, pt[None, :])[0]]
        frontier = list(orbit)
        while frontier:
            nxt = []
            for x in frontier:
                for A, t in gens:
                    y = wrap(B, (A @ x + t)[None, :])[0]
                    if not any(same_mod_lattice(B, y, z, tol) for z in orbit):
                        orbit.append(y)
                        nxt.append(y)
            frontier = nxt
            if len(orbit) > 64:
                raise ConsistencyError("orbit does not close; construction is not periodic")
        out.extend((tuple(x), r, lab) for x in orbit)
    return out


def build_f53(q: float) -> TorusPacking:
    """Packing 53 (q = q53) or its perturbation with medium discs kept in contact.

    The cell is developed from one small-disc rhombus centred at the origin:
    the twofold rotation there, the twofold rotation about the centre of the
    adjacent medium-disc rhombus and the glide that carries one large disc of
    the rhombus onto the large disc beyond the small disc on its axis
    generate the whole pattern; their translations are the lattice.
    """
    lo = roots.q53() - 1e-9
    if not (lo <= q < 1.0):
        raise DomainError(f"Packing 53 family needs q in [q53, 1), got {q!r}")
    p = f53_family.solve_p(q)
    g = f53_family.f53_geometry(1.0, p, q)
    Q1 = np.array([g.x, 0.0])
    L1 = np.array([0.0, g.y])
    B1 = np.array([g.x + 1 + q, 0.0])
    P1 = _apex(L1, 1 + p, B1, 1 + p, away=Q1)
    qc = _apex(L1, 1 + q, P1, p + q, away=Q1)
    Pm = _apex(P1, 2 * p, B1, 1 + p, away=Q1)
    M = 0.5 * (P1 + Pm)

    # Orientation-reversing isometry z -> e conj(z) + c with L1 -> B1 and P1 -> mirror(P1).
    z = lambda v: complex(v[0], v[1])  # noqa: E731
    a1, a2 = z(P1) - z(L1), z(P1 * (1, -1)) - z(B1)
    e = a2 / a1.conjugate()
    cc = z(B1) - e * z(L1).conjugate()
    S = np.array([[e.real, e.imag], [e.imag, -e.real]])
    c = np.array([cc.real, cc.imag])
    sigma = lambda v: S @ v + c  # noqa: E731
    if np.hypot(*(sigma(qc) - Q1)) > 1e-9:
        raise ConsistencyError("glide does not respect the local configuration")

    u = 2 * M
    v = sigma(sigma(np.zeros(2)))
    if abs(u @ v) > 1e-9 * np.hypot(*u) * np.hypot(*v):
        raise ConsistencyError("developed lattice is not rectangular")
    phi = math.atan2(u[1], u[0])
    rot = np.array([[math.cos(phi), math.sin(phi)], [-math.sin(phi), math.cos(phi)]])
    B = np.column_stack([rot @ u, rot @ v])
    if B[1, 1] < 0:
        B[:, 1] *= -1
    B[np.abs(B) < 1e-12 * np.abs(B).max()] = 0.0

    gens = [(-np.eye(2), np.zeros(2)),
            (-np.eye(2), rot @ (2 * M)),
            (rot @ S @ rot.T, rot @ c)]
    seeds = [(rot @ L1, 1.0, "L"), (rot @ P1, p, "M"), (rot @ Q1, q, "S")]
    disks = _affine_orbit(seeds, gens, B)
    counts = {lab: sum(1 for d in disks if d[2] == lab) for lab in LABELS}
    if counts != {"L": 4, "M": 4, "S": 4}:
        raise ConsistencyError(f"expected four discs of each size, got {counts}")
    basis = (tuple(B[:, 0]), tuple(B[:, 1]))
    return _accept(_make(basis, disks), f53_family.f53_density_closed(q), 1e-9)


# -- persistence -------------------------------------------------------------

def to_json(p: TorusPacking) -> str:
    doc = {
        "basis": [list(p.basis[0]), list(p.basis[1])],
        "disks": [{"c": list(d.center), "r": d.radius, "label": d.label} for d in p.disks],
    }
    return json.dumps(doc, indent=2)


def _vec(obj, where: str) -> tuple[float, float]:
    if (not isinstance(obj, list) or len(obj) != 2
            or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in obj)):
        raise PackingFormatError(f"{where}: expected [x, y], got {obj!r}")
    return float(obj[0]), float(obj[1])


def from_json(text: str) -> TorusPacking:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PackingFormatError(
            f"invalid JSON at line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise PackingFormatError("top level must be an object")
    for key in ("basis", "disks"):
        if key not in doc:
            raise PackingFormatError(f"missing key {key!r}")
    basis = doc["basis"]
    if not isinstance(basis, list) or len(basis) != 2:
        raise PackingFormatError("'basis' must hold two vectors")
    u, v = _vec(basis[0], "basis[0]"), _vec(basis[1], "basis[1]")
    if not isinstance(doc["disks"], list):
        raise PackingFormatError("'disks' must be a list")
    disks = []
    for k, d in enumerate(doc["disks"]):
        if not isinstance(d, dict) or "c" not in d or "r" not in d:
            raise PackingFormatError(f"disks[{k}]: need keys 'c' and 'r'")
        r = d["r"]
        if not isinstance(r, (int, float)) or isinstance(r, bool) or not r > 0:
            raise PackingFormatError(f"disks[{k}].r: expected a positive number")
        label = d.get("label", "L")
        if not isinstance(label, str):
            raise PackingFormatError(f"disks[{k}].label: expected a string")
        disks.append(Disk(_vec(d["c"], f"disks[{k}].c"), float(r), label))
    try:
        return TorusPacking((u, v), tuple(disks))
    except DomainError as exc:
        raise PackingFormatError(str(exc)) from exc


# -- rendering ---------------------------------------------------------------

DEFAULT_PALETTE = {"L": "#f2c230", "M": "#3a6fd8", "S": "#d8433a"}


def render_svg(
    p: TorusPacking,
    tiles: int = 1,
    palette: Optional[Mapping[str, str]] = None,
    px_per_unit: float = 40.0,
) -> str:
    """SVG picture of ``tiles`` x ``tiles`` copies of the fundamental cell."""
    if tiles < 1:
        raise DomainError("tiles must be at least 1")
    colors = dict(DEFAULT_PALETTE)
    if palette:
        colors.update(palette)
    B = p.matrix
    c = p.centers
    rmax = float(p.radii.max()) if len(p.disks) else 0.0
    corners = np.array([B @ (a, b) for a in (0, tiles) for b in (0, tiles)])
    lo = corners.min(axis=0) - rmax
    hi = corners.max(axis=0) + rmax
    w, h = hi - lo

    def fmt(x: float) -> str:
        s = f"{x:.6f}"
        return "0.000000" if s == "-0.000000" else s

    # SVG y grows downwards; flip so the picture matches the usual orientation.
    def pt(x, y):
        return fmt(x - lo[0]), fmt(hi[1] - y)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{fmt(w * px_per_unit)}" height="{fmt(h * px_per_unit)}" '
        f'viewBox="0 0 {fmt(w)} {fmt(h)}">',
    ]
    for a in range(tiles):
        for b in range(tiles):
            shift = B @ (a, b)
            out.append(f'<g class="tile" data-tile="{a},{b}">')
            for d, ctr in zip(p.disks, c):
                x, y = pt(*(ctr + shift))
                fill = colors.get(d.label, "#9a9a9a")
                out.append(f'<circle class="{d.label}" cx="{x}" cy="{y}" r="{fmt(d.radius)}" '
                           f'fill="{fill}" stroke="#000000" stroke-width="0.02"/>')
            out.append("</g>")
    cell = [B @ v for v in ((0, 0), (1, 0), (1, 1), (0, 1))]
    pts = " ".join(",".join(pt(*v)) for v in cell)
    out.append(f'<polygon class="cell" points="{pts}" fill="none" stroke="#000000" '
               f'stroke-width="0.04" stroke-dasharray="0.2,0.1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def build(kind: str, q: Optional[float] = None) -> TorusPacking:
    """Dispatch used by the command line: ``hex``, ``ft`` or ``f53``."""
    if kind == "hex":
        return build_hexagonal()
    if q is None:
        raise DomainError(f"packing {kind!r} needs a radius ratio q")
    if kind == "ft":
        return build_ft(q)
    if kind == "f53":
        return build_f53(q)
    raise DomainError(f"unknown packing {kind!r}")
