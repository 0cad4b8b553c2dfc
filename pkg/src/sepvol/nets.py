"""delta-nets on the unit sphere S^2 and the bounds built from them.

Distances are chordal throughout; angular covering radii (degrees) only
appear when reading covering tables, via ``delta = 2 sin(eps/2)``.

Covering radii are certified in one of two ways:

* ``exact``: for a point set whose convex hull contains the origin in its
  interior, the farthest point of the sphere from the set lies along the
  outward normal of the hull facet closest to the origin.  With ``c`` the
  smallest facet offset the covering radius is exactly ``sqrt(2 - 2c)``.
* ``grid``: a latitude/longitude grid with covering spacing ``h`` is
  scanned; the net is certified at ``delta`` when every grid point lies
  within ``delta - h`` of the net, which is safe by the triangle inequality.
"""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .numerics import DomainError, PrecisionContext, resolve

log = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
UNIT_TOL = 1e-12
EXACT_TOL = 1e-12
MIN_TARGET_DELTA = 0.05
PROVENANCES = ("generated", "table", "user")


class NetTableError(ValueError):
    """Malformed or inadmissible covering-table input."""


# --------------------------------------------------------------------------
# Types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class NetTableRow:
    m: int
    epsilon_degrees: float
    delta: float

    @classmethod
    def from_angle(cls, m: int, epsilon_degrees: float) -> "NetTableRow":
        if not 0 < epsilon_degrees < 180:
            raise DomainError(f"covering angle must lie in (0, 180) degrees, got {epsilon_degrees}")
        return cls(int(m), float(epsilon_degrees), chordal_from_degrees(epsilon_degrees))


@dataclass(frozen=True)
class SphericalNet:
    """Finite point set on S^2 with an optional certified covering radius."""

    points: np.ndarray
    delta: float | None = None
    provenance: str = "user"
    certified: bool = False
    method: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.ndim != 2 or pts.shape[1] != 3 or len(pts) == 0:
            raise ValueError(f"a net needs a nonempty (n, 3) array of points, got shape {pts.shape}")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(np.abs(norms - 1.0) > UNIT_TOL):
            raise ValueError(f"net points must be unit vectors (worst |norm-1| = {np.abs(norms - 1).max():.3g})")
        if self.delta is not None and not 0 < self.delta < SQRT2:
            raise DomainError(f"net delta must lie in (0, sqrt 2), got {self.delta}")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"provenance must be one of {PROVENANCES}, got {self.provenance!r}")
        if self.certified and self.delta is None:
            raise ValueError("a certified net must carry its delta")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)


def chordal_from_degrees(epsilon_degrees: float) -> float:
    return 2.0 * math.sin(math.radians(epsilon_degrees) / 2.0)


def normalize_rows(points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


# --------------------------------------------------------------------------
# Covering tables
# --------------------------------------------------------------------------

def load_net_table(path, skip_inadmissible: bool = False) -> list[NetTableRow]:
    """Parse a ``m,epsilon_degrees`` CSV into rows sorted by ``m``.

    Rows whose chordal radius is not below ``sqrt 2`` cannot be used by the
    inradius lemma; they raise :class:`NetTableError` unless
    ``skip_inadmissible`` is set, in which case they are dropped with a
    logged warning.
    """
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["m", "epsilon_degrees"]:
            raise NetTableError(f"{path}: line 1: expected header 'm,epsilon_degrees', got {header!r}")
        for lineno, rec in enumerate(reader, start=2):
            if not rec or all(not x.strip() for x in rec):
                continue
            if len(rec) != 2:
                raise NetTableError(f"{path}: line {lineno}: expected 2 fields, got {len(rec)}")
            try:
                m = int(rec[0])
                eps = float(rec[1])
            except ValueError as exc:
                raise NetTableError(f"{path}: line {lineno}: {exc}") from None
            if m < 1:
                raise NetTableError(f"{path}: line {lineno}: point count must be positive, got {m}")
            if not 0 < eps < 180:
                raise NetTableError(f"{path}: line {lineno}: epsilon_degrees must lie in (0, 180), got {eps}")
            row = NetTableRow.from_angle(m, eps)
            if row.delta >= SQRT2:
                msg = f"{path}: line {lineno}: delta = {row.delta:.6f} is not below sqrt 2"
                if skip_inadmissible:
                    log.warning("%s; row skipped", msg)
                    continue
                raise NetTableError(msg)
            rows.append(row)
    return sorted(rows, key=lambda r: r.m)


def default_table_path() -> Path:
    return Path(str(resources.files("sepvol") / "data" / "nets.csv"))


def default_net_table() -> list[NetTableRow]:
    """The bundled covering table (the m = 130 anchor row)."""
    return load_net_table(default_table_path())


# --------------------------------------------------------------------------
# Point files
# --------------------------------------------------------------------------

def load_net_points(path, normalize: bool = True) -> SphericalNet:
    """Read an ``x,y,z`` CSV and its optional JSON sidecar (same stem, ``.json``).

    The sidecar's ``delta`` and ``method`` are carried over; its ``certified``
    claim is kept in ``meta`` only, since certification must be redone.
    """
    path = Path(path)
    pts = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "y", "z"]:
            raise ValueError(f"{path}: line 1: expected header 'x,y,z', got {header!r}")
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != 3:
                raise ValueError(f"{path}: line {lineno}: expected 3 fields, got {len(rec)}")
            try:
                pts.append([float(v) for v in rec])
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    if not pts:
        raise ValueError(f"{path}: no points")
    arr = normalize_rows(pts) if normalize else np.asarray(pts)
    sidecar = path.with_suffix(".json")
    meta, delta, method = {}, None, ""
    if sidecar.exists():
        meta = json.loads(sidecar.read_text(encoding="utf-8"))
        delta = meta.get("delta")
        method = meta.get("method", "")
    return SphericalNet(arr, delta=delta, provenance="user", method=method, meta=meta)


def save_net_points(net: SphericalNet, path) -> None:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "z"])
        for p in net.points:
            w.writerow([repr(float(v)) for v in p])
    side = {"delta": net.delta, "certified": net.certified, "method": net.method}
    path.with_suffix(".json").write_text(json.dumps(side, indent=2) + "\n", encoding="utf-8")


# --------------------------------------------------------------------------
# Reference nets
# --------------------------------------------------------------------------

def tetrahedron_points() -> np.ndarray:
    return np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float) / math.sqrt(3.0)


_PHI = (1 + math.sqrt(5.0)) / 2
_ICO_VERTS = np.array(
    [[-1, _PHI, 0], [1, _PHI, 0], [-1, -_PHI, 0], [1, -_PHI, 0],
     [0, -1, _PHI], [0, 1, _PHI], [0, -1, -_PHI], [0, 1, -_PHI],
     [_PHI, 0, -1], [_PHI, 0, 1], [-_PHI, 0, -1], [-_PHI, 0, 1]]
)
_ICO_FACES = np.array(
    [[0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
     [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
     [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
     [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1]]
)


def icosahedron_points() -> np.ndarray:
    return normalize_rows(_ICO_VERTS)


def geodesic_points(frequency: int) -> np.ndarray:
    """Class-I geodesic subdivision of the icosahedron: ``10 f^2 + 2`` points."""
    if frequency < 1:
        raise ValueError("frequency must be >= 1")
    f = frequency
    verts = _ICO_VERTS / np.linalg.norm(_ICO_VERTS[0])
    pts = []
    for a, b, c in _ICO_FACES:
        A, B, C = verts[a], verts[b], verts[c]
        for i in range(f + 1):
            for j in range(f + 1 - i):
                pts.append(A + (i / f) * (B - A) + (j / f) * (C - A))
    pts = normalize_rows(pts)
    # Shared edge points coincide up to rounding.
    _, keep = np.unique(np.round(pts, 9) + 0.0, axis=0, return_index=True)
    return pts[np.sort(keep)]


def fibonacci_points(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    r = np.sqrt(1 - z * z)
    theta = math.pi * (3 - math.sqrt(5.0)) * np.arange(n)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta), z])


# --------------------------------------------------------------------------
# Covering radius
# --------------------------------------------------------------------------

def hull_min_offset(points) -> float | None:
    """Smallest facet offset of ``conv(points)``; ``None`` if the hull is degenerate."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 4:
        return None
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return None
    return float((-hull.equations[:, 3]).min())


def exact_covering_radius(points) -> float | None:
    """Chordal covering radius from the convex hull, or ``None`` when not applicable.

    Applicable when the hull is full-dimensional and contains the origin in
    its interior; otherwise the covering radius is at least ``sqrt 2`` and a
    grid scan must be used.
    """
    c = hull_min_offset(points)
    if c is None or c <= 0:
        return None
    return math.sqrt(max(0.0, 2.0 - 2.0 * min(c, 1.0)))


def sphere_grid(spacing: float) -> np.ndarray:
    """Grid on S^2 whose chordal covering radius is at most ``spacing``.

    Rings of latitude are ``dt <= spacing`` apart in polar angle and each ring
    has at least ``2 pi sin(theta) / dt`` points, so any point is within
    ``dt/2`` (meridian) plus ``dt/2`` (parallel arc) of a grid point.
    """
    n_rings = int(math.ceil(math.pi / spacing))
    dt = math.pi / n_rings
    out = []
    for k in range(n_rings + 1):
        theta = k * dt
        s = math.sin(theta)
        count = max(1, int(math.ceil(2 * math.pi * s / dt)))
        phi = (np.arange(count) + 0.5 * (k % 2)) * (2 * math.pi / count)
        out.append(np.column_stack([s * np.cos(phi), s * np.sin(phi), np.full(count, math.cos(theta))]))
    return np.vstack(out)


def grid_worst_gap(points, spacing: float) -> float:
    """Largest chordal distance from a grid point to the set."""
    tree = cKDTree(np.asarray(points, dtype=float))
    dist, _ = tree.query(sphere_grid(spacing), k=1)
    return float(dist.max())


@dataclass(frozen=True)
class CoveringCertificate:
    certified: bool
    worst_gap: float
    method: str
    spacing: float | None
    net: SphericalNet

    def __bool__(self) -> bool:
        return self.certified


def certify_covering(net: SphericalNet, delta: float, method: str = "auto", spacing: float | None = None) -> CoveringCertificate:
    """Decide whether the balls of radius ``delta`` around the net cover S^2.

    ``method`` is ``"exact"``, ``"grid"`` or ``"auto"`` (exact when the hull
    certificate applies, else grid).  The grid spacing defaults to
    ``delta/16`` and must not exceed ``delta/8``.  On success the returned
    certificate carries a copy of the net marked certified at ``delta``.
    """
    if len(net) == 0:
        raise ValueError("cannot certify an empty net")
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if method not in ("auto", "exact", "grid"):
        raise ValueError(f"unknown certification method {method!r}")

    exact = exact_covering_radius(net.points) if method in ("auto", "exact") else None
    if exact is not None:
        ok = exact <= delta + EXACT_TOL
        return _certificate(net, delta, ok, exact, "exact", None)
    if method == "exact":
        # Origin not strictly inside the hull: covering radius >= sqrt 2.
        if delta < SQRT2:
            return _certificate(net, delta, False, SQRT2, "exact", None)
        method = "grid"

    h = delta / 16 if spacing is None else spacing
    if h > delta / 8:
        raise ValueError(f"grid spacing {h} is coarser than delta/8 = {delta / 8}; refusing to certify")
    gap = grid_worst_gap(net.points, h)
    return _certificate(net, delta, gap + h <= delta, gap, "grid", h)


def _certificate(net, delta, ok, gap, method, spacing) -> CoveringCertificate:
    out = net
    if ok and 0 < delta < SQRT2:
        out = replace(net, delta=float(delta), certified=True, method=net.method or method)
    return CoveringCertificate(bool(ok), float(gap), method, spacing, out)


def tetrahedron_net() -> SphericalNet:
    pts = tetrahedron_points()
    return SphericalNet(pts, delta=2 / math.sqrt(3.0), provenance="generated", certified=True, method="tetrahedron")


def icosahedron_net() -> SphericalNet:
    pts = icosahedron_points()
    return SphericalNet(pts, delta=exact_covering_radius(pts), provenance="generated", certified=True, method="icosahedral_subdivision")


def generate_net(target_delta: float, method: str = "icosahedral_subdivision") -> SphericalNet:
    """Smallest net of the chosen family whose exact covering radius is <= ``target_delta``."""
    if not MIN_TARGET_DELTA < target_delta < SQRT2:
        raise DomainError(f"target_delta must lie in ({MIN_TARGET_DELTA}, sqrt 2), got {target_delta}")
    if method == "icosahedral_subdivision":
        f = 1
        while True:
            pts = geodesic_points(f)
            delta = exact_covering_radius(pts)
            if delta <= target_delta:
                break
            f += 1
    elif method == "fibonacci":
        n = max(4, int(3.0 / target_delta**2))
        while True:
            pts = fibonacci_points(n)
            delta = exact_covering_radius(pts)
            if delta is not None and delta <= target_delta:
                break
            n = max(n + 1, int(n * 1.02))
    else:
        raise ValueError(f"unknown net generation method {method!r}")
    return SphericalNet(pts, delta=delta, provenance="generated", certified=True, method=method)


# --------------------------------------------------------------------------
# Inradius lemma
# --------------------------------------------------------------------------

def support_minimum(points, spacing: float = 0.01) -> float:
    """Minimum over a direction grid of the support function ``max_p <p, u>``."""
    u = sphere_grid(spacing)
    return float((u @ np.asarray(points, dtype=float).T).max(axis=1).min())


def conv_inradius_bound(net: SphericalNet, spacing: float = 0.01) -> float:
    """Radius ``1 - delta^2/2`` of a centered ball inside ``conv(net)``.

    The value is checked against the support function on a direction grid
    (a grid minimum can only overestimate the true minimum, so the check
    never passes an unsound bound it could have caught).
    """
    if not net.certified:
        raise ValueError("the inradius lemma needs a certified net")
    bound = 1.0 - net.delta**2 / 2.0
    empirical = support_minimum(net.points, spacing)
    if empirical < bound - 1e-12:
        raise ArithmeticError(f"inradius lemma violated: support minimum {empirical} < {bound}")
    return bound


def hull_inradius(points) -> float:
    """Exact distance from the origin to the boundary of ``conv(points)``."""
    c = hull_min_offset(points)
    if c is None:
        raise ValueError("degenerate hull")
    return c


# --------------------------------------------------------------------------
# Gaussian maxima over tensorized nets
# --------------------------------------------------------------------------

def gaussian_max_bound(radius: float, cardinality: int) -> float:
    """``R sqrt(2 ln #F)``, an upper bound on ``E max_{y in F} <y, x>`` for Gaussian x."""
    if not radius > 0:
        raise DomainError(f"radius must be positive, got {radius}")
    if int(cardinality) != cardinality or cardinality < 1:
        raise DomainError(f"cardinality must be a positive integer, got {cardinality!r}")
    return radius * math.sqrt(2.0 * math.log(cardinality))


def tensor_net_bound(N: int, m, delta, ctx: PrecisionContext | None = None):
    """``(1 - delta^2/2)^{-N} sqrt(2 ln(2 m^N))``.

    Bounds ``E max tr(XG)`` over the balanced separable body using the
    ``2 m^N`` signed tensor products of an ``m``-point ``delta``-net.
    """
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    mp = resolve(ctx).work
    delta = mp.mpf(delta)
    m = mp.mpf(m)
    if not 0 < delta < mp.sqrt(2):
        raise DomainError(f"delta must lie in (0, sqrt 2), got {delta}")
    if m < 1:
        raise DomainError(f"net cardinality must be >= 1, got {m}")
    val = (1 - delta**2 / 2) ** (-N) * mp.sqrt(2 * (mp.log(2) + N * mp.log(m)))
    return resolve(ctx).round(val)


MODELS = {"cap_16": 16.0, "table_5": 5.0}


@dataclass(frozen=True)
class OptimizedDelta:
    delta: float
    bound: float
    implied_m: float
    model: str


def phi_log(delta: float, N: int, K: float) -> float:
    """``ln phi(delta)`` for ``phi = (1 - delta^2/2)^{-N} sqrt(2 ln(2 (K/delta^2)^N))``."""
    return -N * math.log1p(-delta * delta / 2) + 0.5 * math.log(2 * (math.log(2) + N * math.log(K / (delta * delta))))


def optimize_delta(N: int, model: str = "cap_16") -> OptimizedDelta:
    """Minimize the net bound over delta for a cardinality model ``m = K/delta^2``.

    ``cap_16`` is the cap-counting bound ``m < 16/delta^2``; ``table_5`` is
    the empirical ``m delta^2 ~ 5`` of good coverings.  The search runs over
    ``ln delta`` with bounded Brent iteration (golden section with parabolic
    steps) to a tolerance far below 1e-6 in delta.
    """
    if int(N) != N or N < 2:
        raise DomainError(f"N must be an integer >= 2, got {N!r}")
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}; choose from {sorted(MODELS)}")
    K = MODELS[model]
    hi = math.log(SQRT2) - 1e-12
    res = minimize_scalar(
        lambda u: phi_log(math.exp(u), N, K), bounds=(math.log(1e-12), hi), method="bounded", options={"xatol": 1e-10}
    )
    delta = math.exp(res.x)
    return OptimizedDelta(delta=delta, bound=math.exp(res.fun), implied_m=K / delta**2, model=model)
