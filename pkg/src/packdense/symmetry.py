"""Wallpaper group of a labelled disc packing on a flat torus.

Any symmetry of the periodic pattern normalises its translation lattice, so
its linear part is one of the finitely many orthogonal maps that carry the
lattice to itself.  For each such map the translation part is pinned down
(modulo the lattice) by where one disc of the rarest kind is sent, which
leaves a short list of candidates to test against the whole disc set.  The
result is the set of cosets ``x -> R x + t  (mod lattice)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import ConsistencyError
from .packing import TorusPacking, lattice_shifts, reduce_basis, same_mod_lattice, wrap

MATCH_TOL = 1e-7

WALLPAPER_GROUPS = (
    "p1", "p2", "pm", "pg", "cm", "pmm", "pmg", "pgg", "cmm",
    "p4", "p4m", "p4g", "p3", "p3m1", "p31m", "p6", "p6m",
)

POINT_GROUP_ORDER = {
    "p1": 1, "p2": 2, "pm": 2, "pg": 2, "cm": 2,
    "pmm": 4, "pmg": 4, "pgg": 4, "cmm": 4, "p4": 4,
    "p4m": 8, "p4g": 8, "p3": 3, "p3m1": 6, "p31m": 6, "p6": 6, "p6m": 12,
}


@dataclass(frozen=True)
class Isometry:
    """One coset ``x -> linear @ x + translation`` modulo the lattice.

    ``kind`` is identity, translation, rotation, reflection or glide.  For a
    rotation ``center`` is one fixed point; for reflections and glides
    ``axis`` is (point, unit direction) of the representative with the
    shortest slide and ``shift`` that slide (zero for a mirror).
    """

    linear: tuple[tuple[float, float], tuple[float, float]]
    translation: tuple[float, float]
    kind: str
    order: int
    center: Optional[tuple[float, float]] = None
    axis: Optional[tuple[tuple[float, float], tuple[float, float]]] = None
    shift: float = 0.0

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.linear, dtype=float)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.translation, dtype=float)

    @property
    def det(self) -> int:
        return int(round(np.linalg.det(self.matrix)))

    def apply(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return pts @ self.matrix.T + self.vector

    def describe(self) -> str:
        if self.kind == "rotation":
            return f"rotation order {self.order} about ({self.center[0]:.6f}, {self.center[1]:.6f})"
        if self.kind in ("reflection", "glide"):
            (px, py), (dx, dy) = self.axis
            angle = math.degrees(math.atan2(dy, dx)) % 180.0
            text = f"{self.kind} axis through ({px:.6f}, {py:.6f}) at {angle:.3f} deg"
            return text + (f", shift {self.shift:.6f}" if self.kind == "glide" else "")
        if self.kind == "translation":
            return f"translation by ({self.translation[0]:.6f}, {self.translation[1]:.6f})"
        return "identity"


@dataclass(frozen=True)
class SymmetryReport:
    group: str
    point_group_order: int
    max_rotation: int
    has_mirror: bool
    has_glide: bool
    isometries: tuple[Isometry, ...]


def _species(p: TorusPacking) -> list[tuple[str, float]]:
    return [(d.label, round(d.radius, 9)) for d in p.disks]


def _holohedry(B: np.ndarray, tol: float) -> list[np.ndarray]:
    """Orthogonal matrices R with R @ lattice = lattice."""
    Br, _ = reduce_basis(B)
    b1, b2 = Br[:, 0], Br[:, 1]
    n1, n2, g = b1 @ b1, b2 @ b2, b1 @ b2
    reach = math.sqrt(n2) * (1 + tol) + tol
    vecs = [w for _, w in lattice_shifts(B, np.zeros(2), reach)]
    rel = tol * max(n1, n2)
    out: list[np.ndarray] = []
    for w1 in vecs:
        if abs(w1 @ w1 - n1) > rel:
            continue
        for w2 in vecs:
            if abs(w2 @ w2 - n2) > rel or abs(w1 @ w2 - g) > rel:
                continue
            R = np.column_stack([w1, w2]) @ np.linalg.inv(Br)
            if np.abs(R.T @ R - np.eye(2)).max() > 1e-6:
                continue
            if not any(np.abs(R - S).max() < 1e-6 for S in out):
                out.append(R)
    return out


def _maps_onto(p: TorusPacking, R: np.ndarray, t: np.ndarray, tol: float) -> bool:
    B = p.matrix
    c = p.centers
    spec = _species(p)
    img = c @ R.T + t
    for i, x in enumerate(img):
        if not any(spec[j] == spec[i] and same_mod_lattice(B, x, c[j], tol)
                   for j in range(len(c))):
            return False
    return True


def _cosets(p: TorusPacking, tol: float = MATCH_TOL) -> list[tuple[np.ndarray, np.ndarray]]:
    B = p.matrix
    c = p.centers
    spec = _species(p)
    counts: dict = {}
    for s in spec:
        counts[s] = counts.get(s, 0) + 1
    rare = min(counts, key=lambda s: (counts[s], s))
    i0 = spec.index(rare)
    out = []
    for R in _holohedry(B, tol):
        found: list[np.ndarray] = []
        for j, s in enumerate(spec):
            if s != rare:
                continue
            t = c[j] - R @ c[i0]
            if any(same_mod_lattice(B, t, u, tol) for u in found):
                continue
            if _maps_onto(p, R, t, tol):
                found.append(t)
        out.extend((R, t) for t in found)
    return out


def _window(B: np.ndarray, k: int):
    Br, _ = reduce_basis(B)
    for a in range(-k, k + 1):
        for b in range(-k, k + 1):
            yield Br @ np.array([a, b], dtype=float)


def _rotation_order(R: np.ndarray) -> int:
    ang = abs(math.atan2(R[1, 0], R[0, 0]))
    return 1 if ang < 1e-9 else int(round(2 * math.pi / ang))


def _axis_dir(R: np.ndarray) -> np.ndarray:
    phi = 0.5 * math.atan2(R[1, 0], R[0, 0])
    return np.array([math.cos(phi), math.sin(phi)])


def _rotation_centers(B, R, t, tol) -> list[np.ndarray]:
    centers: list[np.ndarray] = []
    M = np.eye(2) - R
    for lam in _window(B, 3):
        x = np.linalg.solve(M, t + lam)
        if not any(same_mod_lattice(B, x, y, tol) for y in centers):
            centers.append(x)
    return centers


def _line_slides(B, R, t) -> list[tuple[float, np.ndarray]]:
    """(slide along the axis, representative translation) over nearby lattice shifts."""
    a = _axis_dir(R)
    return [(float((t + lam) @ a), t + lam) for lam in _window(B, 6)]


def _to_isometry(B: np.ndarray, R: np.ndarray, t: np.ndarray, tol: float) -> Isometry:
    lin = (tuple(map(float, R[0])), tuple(map(float, R[1])))
    det = np.linalg.det(R)
    if det > 0:
        order = _rotation_order(R)
        if order == 1:
            kind = "identity" if same_mod_lattice(B, np.zeros(2), t, tol) else "translation"
            return Isometry(lin, tuple(map(float, t)), kind, 1)
        ctr = wrap(B, _rotation_centers(B, R, t, tol)[0][None, :])[0]
        return Isometry(lin, tuple(map(float, t)), "rotation", order, center=tuple(map(float, ctr)))
    a = _axis_dir(R)
    slide, rep = min(_line_slides(B, R, t), key=lambda s: (round(abs(s[0]), 9), -s[0]))
    perp = rep - slide * a
    foot = wrap(B, (perp / 2)[None, :])[0]
    kind = "reflection" if abs(slide) <= tol else "glide"
    return Isometry(lin, tuple(map(float, t)), kind, 2,
                    axis=(tuple(map(float, foot)), tuple(map(float, a))),
                    shift=0.0 if kind == "reflection" else abs(slide))


def find_symmetries(p: TorusPacking, tol: float = MATCH_TOL) -> list[Isometry]:
    """One :class:`Isometry` per symmetry coset of the labelled disc set."""
    B = p.matrix
    return [_to_isometry(B, R, t, tol) for R, t in _cosets(p, tol)]


def compose(f: Isometry, g: Isometry) -> tuple[np.ndarray, np.ndarray]:
    """Linear and translation parts of ``f after g``."""
    return f.matrix @ g.matrix, f.matrix @ g.vector + f.vector


def contains(ops: list[Isometry], R: np.ndarray, t: np.ndarray, B: np.ndarray,
             tol: float = MATCH_TOL) -> bool:
    return any(np.abs(op.matrix - R).max() < 1e-6 and same_mod_lattice(B, op.vector, t, tol)
               for op in ops)


def is_closed(p: TorusPacking, ops: list[Isometry], tol: float = MATCH_TOL) -> bool:
    """Composition and inversion stay inside ``ops`` modulo the lattice."""
    B = p.matrix
    for f in ops:
        Rinv = f.matrix.T
        if not contains(ops, Rinv, -Rinv @ f.vector, B, tol):
            return False
        for g in ops:
            if not contains(ops, *compose(f, g), B, tol):
                return False
    return True


def symmetry_report(p: TorusPacking, tol: float = MATCH_TOL) -> SymmetryReport:
    B = p.matrix
    ops = find_symmetries(p, tol)
    linear: list[np.ndarray] = []
    for op in ops:
        if not any(np.abs(op.matrix - S).max() < 1e-6 for S in linear):
            linear.append(op.matrix)
    n_rot = sum(1 for S in linear if np.linalg.det(S) > 0)
    refl_ops = [op for op in ops if op.det < 0]

    # Per reflection direction: does some line act as a mirror, and is some slide
    # not itself a lattice translation (an essential glide)?
    directions: list[tuple[np.ndarray, bool, bool]] = []
    for op in refl_ops:
        a = _axis_dir(op.matrix)
        slides = _line_slides(B, op.matrix, op.vector)
        mirror = any(abs(s) <= tol for s, _ in slides)
        glide = any(not same_mod_lattice(B, np.zeros(2), s * a, tol) for s, _ in slides)
        for k, (b, m, g) in enumerate(directions):
            if abs(abs(a @ b) - 1) < 1e-9:
                directions[k] = (b, m or mirror, g or glide)
                break
        else:
            directions.append((a, mirror, glide))

    def on_mirror(x: np.ndarray) -> bool:
        return any(same_mod_lattice(B, np.zeros(2), x - op.matrix @ x - op.vector, tol)
                   for op in refl_ops)

    def max_centers_on_mirrors() -> bool:
        top = [op for op in ops if op.kind == "rotation" and op.order == n_rot]
        return all(on_mirror(x) for op in top
                   for x in _rotation_centers(B, op.matrix, op.vector, tol))

    has_mirror = any(m for _, m, _ in directions)
    has_glide = any(g for _, _, g in directions)
    n_mirror_dirs = sum(1 for _, m, _ in directions if m)
    if not directions:
        name = {1: "p1", 2: "p2", 3: "p3", 4: "p4", 6: "p6"}.get(n_rot)
    elif n_rot == 1:
        name = "cm" if has_mirror and has_glide else "pm" if has_mirror else "pg"
    elif n_rot == 2:
        if n_mirror_dirs == 2:
            name = "cmm" if has_glide else "pmm"
        elif n_mirror_dirs == 1:
            name = "pmg"
        else:
            name = "pgg"
    elif n_rot == 3:
        name = "p3m1" if max_centers_on_mirrors() else "p31m"
    elif n_rot == 4:
        name = "p4m" if max_centers_on_mirrors() else "p4g"
    elif n_rot == 6:
        name = "p6m"
    else:
        name = None
    if name is None or POINT_GROUP_ORDER[name] != len(linear):
        raise ConsistencyError(
            f"symmetry set matches no wallpaper group (rotations {n_rot}, "
            f"point group order {len(linear)}); tolerance problem?")
    return SymmetryReport(name, len(linear), n_rot, has_mirror, has_glide, tuple(ops))


def classify(p: TorusPacking, tol: float = MATCH_TOL) -> str:
    return symmetry_report(p, tol).group


def orbifold_ratio(p: TorusPacking) -> Fraction:
    """Area of the orbifold relative to a translational fundamental region."""
    return Fraction(1, POINT_GROUP_ORDER[classify(p)])
