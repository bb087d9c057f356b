"""
Ambient-vector model of Euclidean, spherical and hyperbolic n-space

Every space lives in R^{n+1}:
    E^n  the affine slice x_{n+1} = 1
    S^n  the unit sphere <x, x> = 1
    H^n  the upper sheet of <x, x> = -1
where <a, b> = b^T J a and J = diag(1, ..., 1, delta).  A material vector is
m * p for a point p and a mass m >= 0; its point and mass are recovered by
decompose().

Low-level helpers (bilinear_form, distance, exp_point, ...) are vectorised over
leading axes so the quadrature and Monte Carlo code can call them on whole grids.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import null_space

from errors import (
    DimensionMismatchError,
    InputFormatError,
    NoMassCenterError,
    OffSpaceError,
)

logger = logging.getLogger(__name__)

ON_SPACE_TOL = 1e-9
ISOMETRY_TOL = 1e-12

AmbientVector = NDArray[np.float64]
SeedLike = Union[int, np.random.Generator, None]


class GeometryKind(str, Enum):
    EUCLIDEAN = "euclidean"
    SPHERICAL = "spherical"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class Geometry:
    """One of E^n, S^n, H^n with its intrinsic dimension n"""

    kind: GeometryKind
    n: int

    def __post_init__(self):
        if not isinstance(self.kind, GeometryKind):
            try:
                kind = GeometryKind(str(self.kind).strip().lower())
            except ValueError:
                raise InputFormatError(f"Unknown geometry kind: {self.kind!r}") from None
            object.__setattr__(self, 'kind', kind)
        if isinstance(self.n, bool) or int(self.n) != self.n or int(self.n) < 1:
            raise DimensionMismatchError(f"Geometry dimension must be a positive integer, got {self.n!r}")
        object.__setattr__(self, 'n', int(self.n))

    @classmethod
    def euclidean(cls, n: int) -> "Geometry":
        return cls(GeometryKind.EUCLIDEAN, n)

    @classmethod
    def spherical(cls, n: int) -> "Geometry":
        return cls(GeometryKind.SPHERICAL, n)

    @classmethod
    def hyperbolic(cls, n: int) -> "Geometry":
        return cls(GeometryKind.HYPERBOLIC, n)

    @property
    def delta(self) -> float:
        return -1.0 if self.kind is GeometryKind.HYPERBOLIC else 1.0

    @property
    def dim(self) -> int:
        """Ambient dimension n + 1"""
        return self.n + 1

    @property
    def is_euclidean(self) -> bool:
        return self.kind is GeometryKind.EUCLIDEAN

    @property
    def is_spherical(self) -> bool:
        return self.kind is GeometryKind.SPHERICAL

    @property
    def is_hyperbolic(self) -> bool:
        return self.kind is GeometryKind.HYPERBOLIC

    @property
    def J(self) -> NDArray[np.float64]:
        diag = np.ones(self.dim)
        diag[-1] = self.delta
        return np.diag(diag)

    def with_dimension(self, n: int) -> "Geometry":
        return Geometry(self.kind, n)

    def pole(self) -> AmbientVector:
        """The base point e_{n+1}, on the space in all three geometries"""
        p = np.zeros(self.dim)
        p[-1] = 1.0
        return p

    def basis_vector(self, i: int) -> AmbientVector:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind.value, 'n': self.n}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Geometry":
        if not isinstance(data, dict) or 'kind' not in data or 'n' not in data:
            raise InputFormatError(f"Geometry must be an object with 'kind' and 'n', got {data!r}")
        return cls(data['kind'], data['n'])

    def __str__(self) -> str:
        letter = {'euclidean': 'E', 'spherical': 'S', 'hyperbolic': 'H'}[self.kind.value]
        return f"{letter}^{self.n}"


# ============================================================================
# Geometry-dispatched trigonometry
# ============================================================================

def _constant_like(x: ArrayLike, value: float):
    out = np.full(np.shape(x), value, dtype=float)
    return out if out.ndim else float(out)


def sinx(x: ArrayLike, g: Geometry):
    """x, sin x or sinh x"""
    if g.is_spherical:
        return np.sin(x)
    if g.is_hyperbolic:
        return np.sinh(x)
    return np.multiply(x, 1.0)


def cosx(x: ArrayLike, g: Geometry):
    """1, cos x or cosh x"""
    if g.is_spherical:
        return np.cos(x)
    if g.is_hyperbolic:
        return np.cosh(x)
    return _constant_like(x, 1.0)


def dcosx(x: ArrayLike, g: Geometry):
    """Derivative of cos_X: 0, -sin x or sinh x"""
    if g.is_euclidean:
        return _constant_like(x, 0.0)
    return -g.delta * sinx(x, g)


def tanx(x: ArrayLike, g: Geometry):
    if g.is_spherical:
        return np.tan(x)
    if g.is_hyperbolic:
        return np.tanh(x)
    return np.multiply(x, 1.0)


def arctanx(y: ArrayLike, g: Geometry):
    if g.is_spherical:
        return np.arctan(y)
    if g.is_hyperbolic:
        return np.arctanh(y)
    return np.multiply(y, 1.0)


def arcsinx(y: ArrayLike, g: Geometry):
    if g.is_spherical:
        return np.arcsin(y)
    if g.is_hyperbolic:
        return np.arcsinh(y)
    return np.multiply(y, 1.0)


# ============================================================================
# Bilinear form, on-space tests, distances
# ============================================================================

def as_coords(x: ArrayLike, g: Geometry) -> NDArray[np.float64]:
    """Validate shape and finiteness of ambient coordinates"""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != g.dim:
        raise DimensionMismatchError(
            f"Expected vectors of length {g.dim} for {g}, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise OffSpaceError("Ambient coordinates must be finite")
    return arr


def bilinear_form(a: ArrayLike, b: ArrayLike, g: Geometry):
    """<a, b> = sum_{i<=n} a_i b_i + delta a_{n+1} b_{n+1}"""
    a = as_coords(a, g)
    b = as_coords(b, g)
    prod = a * b
    prod[..., -1] *= g.delta
    out = np.sum(prod, axis=-1)
    return out if np.ndim(out) else float(out)


def on_space_defect(p: ArrayLike, g: Geometry):
    """Distance of p from the constraint surface (inf for the lower hyperbolic sheet)"""
    p = as_coords(p, g)
    if g.is_euclidean:
        defect = np.abs(p[..., -1] - 1.0)
    else:
        defect = np.abs(bilinear_form(p, p, g) - g.delta)
        if g.is_hyperbolic:
            defect = np.where(p[..., -1] > 0, defect, np.inf)
    return defect if np.ndim(defect) else float(defect)


def project_to_space(p: ArrayLike, g: Geometry, tol: float = ON_SPACE_TOL) -> NDArray[np.float64]:
    """Re-project points that lie on the space within tol; reject the rest"""
    p = as_coords(p, g)
    defect = np.asarray(on_space_defect(p, g))
    if np.any(defect >= tol):
        raise OffSpaceError(f"Point not on {g}: defect {float(np.max(defect)):.3e} exceeds {tol:.0e}")
    out = np.array(p, dtype=float, copy=True)
    if g.is_euclidean:
        out[..., -1] = 1.0
    else:
        norm = np.sqrt(np.abs(bilinear_form(out, out, g)))
        out = out / np.asarray(norm)[..., None]
    return out


def distance(p: ArrayLike, q: ArrayLike, g: Geometry):
    """Geodesic distance between points on the space

    Evaluated through the chord |p - q| so that nearby points keep full relative
    accuracy: d = 2 atan2(|p - q|, |p + q|) on S^n and d = 2 asinh(|p - q|_J / 2)
    on H^n.
    """
    p = project_to_space(p, g)
    q = project_to_space(q, g)
    diff = p - q
    if g.is_euclidean:
        d = np.linalg.norm(diff[..., :-1], axis=-1)
    elif g.is_spherical:
        d = 2.0 * np.arctan2(np.linalg.norm(diff, axis=-1), np.linalg.norm(p + q, axis=-1))
    else:
        arg = -np.asarray(bilinear_form(p, q, g))
        if np.any(arg < 1.0 - ON_SPACE_TOL):
            raise OffSpaceError(f"Hyperbolic distance argument {float(np.min(arg)):.3e} below 1")
        chord_sq = np.maximum(np.asarray(bilinear_form(diff, diff, g)), 0.0)
        d = 2.0 * np.arcsinh(np.sqrt(chord_sq) / 2.0)
    return d if np.ndim(d) else float(d)


# ============================================================================
# Geodesics, polar coordinates, hyperplanes
# ============================================================================

def exp_point(center: ArrayLike, direction: ArrayLike, dist: ArrayLike, g: Geometry) -> NDArray[np.float64]:
    """Point at distance dist along the geodesic leaving center with unit tangent direction

    cos_X(d) c + sin_X(d) v covers all three spaces; in E^n it reads c + d v.
    """
    center = np.asarray(center, dtype=float)
    direction = np.asarray(direction, dtype=float)
    dist = np.asarray(dist, dtype=float)
    return np.asarray(cosx(dist, g))[..., None] * center + np.asarray(sinx(dist, g))[..., None] * direction


def sphere_direction(angles: ArrayLike) -> NDArray[np.float64]:
    """Unit vectors of S^m from m angles (phi_2, ..., phi_{m+1}), last coordinate cos phi_2"""
    angles = np.asarray(angles, dtype=float)
    m = angles.shape[-1]
    out = np.empty(angles.shape[:-1] + (m + 1,))
    running = np.ones(angles.shape[:-1])
    for j in range(m):
        out[..., m - j] = running * np.cos(angles[..., j])
        running = running * np.sin(angles[..., j])
    out[..., 0] = running
    return out


def polar_chart(angles: ArrayLike, g: Geometry) -> NDArray[np.float64]:
    """Polar coordinates (phi_1, ..., phi_n) about the pole e_{n+1}

    phi_1 is the geodesic radius; the remaining angles place the direction on
    S^{n-1}.  For n = 1 the signed radius phi_1 alone is the coordinate.
    """
    angles = np.asarray(angles, dtype=float)
    if angles.shape[-1] != g.n:
        raise DimensionMismatchError(f"{g} polar chart takes {g.n} angles, got {angles.shape[-1]}")
    radius = angles[..., 0]
    direction = sphere_direction(angles[..., 1:])
    pad = np.zeros(angles.shape[:-1] + (1,))
    return exp_point(g.pole(), np.concatenate([direction, pad], axis=-1), radius, g)


def polar_volume_weight(angles: ArrayLike, g: Geometry) -> NDArray[np.float64]:
    """Volume element of polar_chart: sin_X^{n-1}(phi_1) sin^{n-2}(phi_2) ... sin(phi_{n-1})"""
    angles = np.asarray(angles, dtype=float)
    n = g.n
    weight = np.abs(np.asarray(sinx(angles[..., 0], g))) ** (n - 1)
    for j in range(1, n - 1):
        weight = weight * np.abs(np.sin(angles[..., j])) ** (n - 1 - j)
    return weight


def polar_box(radius: float, g: Geometry) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Coordinate box of polar_chart covering the closed ball of the given radius"""
    n = g.n
    if n == 1:
        return np.array([-radius]), np.array([radius])
    lower = np.zeros(n)
    upper = np.full(n, np.pi)
    upper[0] = radius
    upper[-1] = 2.0 * np.pi
    return lower, upper


def tangent_angle_cos(v: ArrayLike, w: ArrayLike, g: Geometry):
    """Cosine of the angle between two tangent vectors at the same point"""
    vw = np.asarray(bilinear_form(v, w, g))
    norms = np.sqrt(np.asarray(bilinear_form(v, v, g)) * np.asarray(bilinear_form(w, w, g)))
    out = np.clip(vw / norms, -1.0, 1.0)
    return out if np.ndim(out) else float(out)


def slant_cos(t: ArrayLike, p: ArrayLike, g: Geometry):
    """cos of the slant angle of the hyperplane with polar vector p relative to tangent t, in [0, 1]"""
    out = np.abs(np.asarray(tangent_angle_cos(t, p, g)))
    return out if np.ndim(out) else float(out)


def polar_vector(basis: ArrayLike, g: Geometry) -> AmbientVector:
    """Unit vector J-orthogonal to the n-dimensional subspace spanned by the rows of basis"""
    basis = as_coords(basis, g)
    if basis.ndim != 2 or basis.shape[0] != g.n:
        raise DimensionMismatchError(f"A hyperplane of {g} needs {g.n} spanning vectors, got {basis.shape[0]}")
    kernel = null_space(basis @ g.J)
    if kernel.shape[1] != 1:
        raise OffSpaceError("Spanning vectors are linearly dependent")
    p = kernel[:, 0]
    norm_sq = bilinear_form(p, p, g)
    if norm_sq <= 0:
        raise OffSpaceError("Subspace does not cut a hyperplane: its normal is not a positive vector")
    return p / np.sqrt(norm_sq)


# ============================================================================
# Material vectors
# ============================================================================

def mass_of(coords: ArrayLike, g: Geometry):
    """Mass of (possibly many) material vectors; no validation beyond shape"""
    coords = as_coords(coords, g)
    if g.is_euclidean:
        m = coords[..., -1]
    else:
        m = np.sqrt(np.maximum(g.delta * np.asarray(bilinear_form(coords, coords, g)), 0.0))
    return m if np.ndim(m) else float(m)


@dataclass(frozen=True, eq=False)
class MaterialVector:
    """A mass m >= 0 carried by a point p, stored as the ambient vector m * p"""

    geometry: Geometry
    coords: AmbientVector

    def __post_init__(self):
        coords = as_coords(self.coords, self.geometry)
        if coords.ndim != 1:
            raise DimensionMismatchError(f"A material vector is a single vector, got shape {coords.shape}")
        coords = np.array(coords, dtype=float, copy=True)
        coords.setflags(write=False)
        object.__setattr__(self, 'coords', coords)
        if self.is_zero:
            return
        g = self.geometry
        if g.is_euclidean and not coords[-1] > 0:
            raise OffSpaceError(f"Euclidean material vector needs a positive last coordinate, got {coords[-1]!r}")
        if g.is_hyperbolic:
            if not coords[-1] > 0 or not -bilinear_form(coords, coords, g) > 0:
                raise OffSpaceError("Hyperbolic material vector must lie inside the future light cone")

    @classmethod
    def zero(cls, g: Geometry) -> "MaterialVector":
        return cls(g, np.zeros(g.dim))

    @classmethod
    def from_mass_point(cls, g: Geometry, mass: float, point: ArrayLike) -> "MaterialVector":
        if not np.isfinite(mass) or mass < 0:
            raise OffSpaceError(f"Mass must be finite and non-negative, got {mass!r}")
        defect = on_space_defect(point, g)
        if defect > 1e-12:
            logger.warning(f"Re-projecting point onto {g}: defect {defect:.3e}")
        return cls(g, float(mass) * project_to_space(point, g))

    @classmethod
    def from_dict(cls, g: Geometry, data: Dict[str, Any]) -> "MaterialVector":
        """Accept {"mass": m, "point": [...]} or {"vector": [...]}"""
        if not isinstance(data, dict):
            raise InputFormatError(f"Point entry must be an object, got {data!r}")
        if 'vector' in data:
            return cls(g, data['vector'])
        if 'mass' in data and 'point' in data:
            try:
                mass = float(data['mass'])
            except (TypeError, ValueError):
                raise InputFormatError(f"Mass must be a number, got {data['mass']!r}") from None
            return cls.from_mass_point(g, mass, data['point'])
        raise InputFormatError(f"Point entry needs 'vector' or 'mass' and 'point', got keys {sorted(data)}")

    def to_dict(self) -> Dict[str, Any]:
        return {'vector': [float(x) for x in self.coords]}

    @property
    def is_zero(self) -> bool:
        return bool(np.all(self.coords == 0.0))

    @property
    def mass(self) -> float:
        return 0.0 if self.is_zero else mass_of(self.coords, self.geometry)

    @property
    def point(self) -> AmbientVector:
        return decompose(self)[1]

    def scaled(self, r: float) -> "MaterialVector":
        if r < 0:
            raise OffSpaceError(f"Masses are non-negative; cannot scale by {r!r}")
        return MaterialVector(self.geometry, r * self.coords)

    def __add__(self, other: "MaterialVector") -> "MaterialVector":
        _check_same_geometry(self.geometry, other.geometry)
        return MaterialVector(self.geometry, self.coords + other.coords)

    def __rmul__(self, r: float) -> "MaterialVector":
        return self.scaled(r)

    def __repr__(self) -> str:
        return f"MaterialVector({self.geometry}, {np.array2string(self.coords, precision=6)})"


def _check_same_geometry(g1: Geometry, g2: Geometry) -> None:
    if g1 != g2:
        raise DimensionMismatchError(f"Geometry mismatch: {g1} vs {g2}")


def decompose(a: MaterialVector) -> Tuple[float, AmbientVector]:
    """Split a = m [a] into its mass and its point"""
    if a.is_zero:
        raise NoMassCenterError("The zero material vector carries no point (zero mass)")
    g = a.geometry
    if g.is_euclidean:
        mass = float(a.coords[-1])
    else:
        q = g.delta * bilinear_form(a.coords, a.coords, g)
        if q <= 0:
            raise OffSpaceError(f"Vector is off the cone over {g}: delta*<a,a> = {q:.3e}")
        mass = float(np.sqrt(q))
    point = a.coords / mass
    if g.is_euclidean:
        point[-1] = 1.0
    return mass, point


# ============================================================================
# Isometries
# ============================================================================

@dataclass(frozen=True, eq=False)
class Isometry:
    """A linear map of R^{n+1} preserving the space and its form"""

    geometry: Geometry
    matrix: NDArray[np.float64]

    def __post_init__(self):
        g = self.geometry
        m = np.array(self.matrix, dtype=float, copy=True)
        if m.shape != (g.dim, g.dim):
            raise DimensionMismatchError(f"Isometry of {g} must be {g.dim}x{g.dim}, got {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, 'matrix', m)
        residual = self.residual()
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        if residual > 1e-10 * scale:
            raise OffSpaceError(f"Matrix is not an isometry of {g}: residual {residual:.3e}")

    def residual(self) -> float:
        """Entrywise deviation from the defining identities"""
        g = self.geometry
        m = self.matrix
        if g.is_euclidean:
            block = m[:-1, :-1]
            ortho = np.max(np.abs(block.T @ block - np.eye(g.n)))
            bottom = np.max(np.abs(m[-1] - g.pole()))
            return float(max(ortho, bottom))
        res = float(np.max(np.abs(m.T @ g.J @ m - g.J)))
        if g.is_hyperbolic and m[-1, -1] <= 0:
            return np.inf
        return res

    @classmethod
    def identity(cls, g: Geometry) -> "Isometry":
        return cls(g, np.eye(g.dim))

    @classmethod
    def antipodal(cls, g: Geometry) -> "Isometry":
        if not g.is_spherical:
            raise OffSpaceError(f"The antipodal map is an isometry of S^n only, not {g}")
        return cls(g, -np.eye(g.dim))

    @classmethod
    def rotation(cls, g: Geometry, i: int, j: int, angle: float) -> "Isometry":
        """Rotation by angle in the coordinate plane (i, j), both among the first n axes"""
        if not (0 <= i < g.n and 0 <= j < g.n and i != j):
            raise DimensionMismatchError(f"Rotation plane ({i}, {j}) invalid for {g}")
        m = np.eye(g.dim)
        c, s = np.cos(angle), np.sin(angle)
        m[i, i], m[i, j], m[j, i], m[j, j] = c, -s, s, c
        return cls(g, m)

    def compose(self, other: "Isometry") -> "Isometry":
        _check_same_geometry(self.geometry, other.geometry)
        return Isometry(self.geometry, self.matrix @ other.matrix)

    def apply_points(self, points: ArrayLike) -> NDArray[np.float64]:
        points = as_coords(points, self.geometry)
        return points @ self.matrix.T


def random_isometry(g: Geometry, seed: SeedLike = None) -> Isometry:
    """Seeded random isometry, reflections included

    S^n: Haar-distributed O(n+1) from a sign-corrected QR factorisation.
    H^n: a random point of the upper sheet as image of the pole, completed by a
         J-orthonormal frame of Gaussian vectors (Gram-Schmidt with <,>).
    E^n: orthogonal block plus a Gaussian translation column.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if g.is_spherical:
        return Isometry(g, _haar_orthogonal(rng, g.dim))
    if g.is_euclidean:
        m = np.eye(g.dim)
        m[:-1, :-1] = _haar_orthogonal(rng, g.n)
        m[:-1, -1] = rng.standard_normal(g.n)
        return Isometry(g, m)

    v = 0.7 * rng.standard_normal(g.n)
    t = float(np.linalg.norm(v))
    image_of_pole = np.concatenate([np.sinh(t) * v / t, [np.cosh(t)]])
    frame = []
    for _ in range(g.n):
        w = rng.standard_normal(g.dim)
        for _ in range(2):
            w = w + bilinear_form(w, image_of_pole, g) * image_of_pole
            for e in frame:
                w = w - bilinear_form(w, e, g) * e
        frame.append(w / np.sqrt(bilinear_form(w, w, g)))
    return Isometry(g, np.column_stack(frame + [image_of_pole]))


def _haar_orthogonal(rng: np.random.Generator, size: int) -> NDArray[np.float64]:
    q, r = np.linalg.qr(rng.standard_normal((size, size)))
    return q * np.sign(np.diag(r))


def apply_isometry(iso: Isometry, a: MaterialVector) -> MaterialVector:
    """g(a) = m_a g([a]); linear, so the matrix acts on the material vector directly"""
    _check_same_geometry(iso.geometry, a.geometry)
    return MaterialVector(a.geometry, iso.matrix @ a.coords)


__all__ = [
    "ON_SPACE_TOL",
    "GeometryKind",
    "Geometry",
    "MaterialVector",
    "Isometry",
    "sinx",
    "cosx",
    "dcosx",
    "tanx",
    "arctanx",
    "arcsinx",
    "as_coords",
    "bilinear_form",
    "on_space_defect",
    "project_to_space",
    "distance",
    "exp_point",
    "sphere_direction",
    "polar_chart",
    "polar_volume_weight",
    "polar_box",
    "tangent_angle_cos",
    "slant_cos",
    "polar_vector",
    "mass_of",
    "decompose",
    "random_isometry",
    "apply_isometry",
]
