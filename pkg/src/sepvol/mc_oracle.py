"""Independent Monte Carlo and exact-geometry oracles.

Sampling is split into fixed-size chunks; chunk ``i`` draws from a generator
seeded by ``SeedSequence(seed, spawn_key=(i,))``.  Per-chunk partial moments
are merged in chunk order, so an estimate depends only on ``(seed, samples)``
and never on how many worker threads evaluated the chunks.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .nets import gaussian_max_bound

MIN_SAMPLES = 100
MIN_DISCRETE_SAMPLES = 1000
CHUNK = 10_000
LOW_ACCEPTANCE = 1e-3


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int

    def within(self, value: float, k: float = 3.0) -> bool:
        """True if ``value`` lies within ``k`` standard errors of the mean."""
        return abs(self.mean - value) <= k * self.stderr

    def to_dict(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "samples": self.samples, "seed": self.seed}


def stream_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _chunks(samples: int, chunk: int) -> list[int]:
    full, rest = divmod(samples, chunk)
    return [chunk] * full + ([rest] if rest else [])


def run_streams(
    draw: Callable[[np.random.Generator, int], np.ndarray],
    samples: int,
    seed: int,
    *,
    chunk: int = CHUNK,
    workers: int = 1,
    min_samples: int = MIN_SAMPLES,
) -> McEstimate:
    """Mean and standard error of ``draw(rng, n)`` over ``samples`` draws."""
    if samples < min_samples:
        raise ValueError(f"at least {min_samples} samples are required, got {samples}")
    sizes = _chunks(samples, chunk)

    def task(i: int):
        values = np.asarray(draw(stream_rng(seed, i), sizes[i]), dtype=float)
        return values.size, float(values.mean()), float(((values - values.mean()) ** 2).sum())

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(task, range(len(sizes))))
    else:
        parts = [task(i) for i in range(len(sizes))]

    # Chan et al. pairwise merge, in chunk order.
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        delta = mb - mean
        tot = n + nb
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    var = m2 / (n - 1) if n > 1 else 0.0
    return McEstimate(mean=mean, stderr=math.sqrt(var / n), samples=n, seed=seed)


def uniform_directions(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    g = rng.standard_normal((n, dim))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


# --------------------------------------------------------------------------
# Mean width
# --------------------------------------------------------------------------

def mc_mean_width(
    support_fn: Callable[[np.ndarray], np.ndarray],
    dim: int,
    samples: int = 100_000,
    seed: int = 0,
    *,
    vectorized: bool = True,
    workers: int = 1,
) -> McEstimate:
    """Average of a support function over the uniform measure on S^{dim-1}.

    This is half the mean width of the body.  ``support_fn`` receives an
    ``(n, dim)`` array of unit rows and returns ``n`` values; pass
    ``vectorized=False`` for a function of a single direction.
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    fn = support_fn if vectorized else (lambda u: np.array([support_fn(row) for row in u]))
    return run_streams(lambda rng, n: fn(uniform_directions(rng, n, dim)), samples, seed, workers=workers)


# --------------------------------------------------------------------------
# Volumes by rejection sampling
# --------------------------------------------------------------------------

def mc_volume_ratio(
    membership_fn: Callable[[np.ndarray], np.ndarray],
    bounding_box: Sequence[tuple[float, float]],
    dim: int,
    samples: int = 1_000_000,
    seed: int = 0,
    *,
    workers: int = 1,
) -> McEstimate:
    """Rejection-sampling estimate of a body's volume inside an axis box.

    ``membership_fn`` maps an ``(n, dim)`` array to a boolean array.  The
    returned estimate is ``vol(box) * acceptance``.  When fewer than one in a
    thousand points is accepted, the error bar uses the Agresti-Coull
    adjusted proportion and a warning is issued.
    """
    box = np.asarray(bounding_box, dtype=float)
    if box.shape != (dim, 2) or np.any(box[:, 1] <= box[:, 0]):
        raise ValueError(f"bounding_box must be {dim} (low, high) pairs with low < high")
    lo, width = box[:, 0], box[:, 1] - box[:, 0]
    box_vol = float(np.prod(width))

    def draw(rng, n):
        pts = lo + width * rng.random((n, dim))
        return np.asarray(membership_fn(pts), dtype=float) * box_vol

    est = run_streams(draw, samples, seed, workers=workers)
    rate = est.mean / box_vol
    if rate < LOW_ACCEPTANCE:
        warnings.warn(f"acceptance rate {rate:.2e} is below {LOW_ACCEPTANCE}; error bars widened", RuntimeWarning)
        k = rate * est.samples
        p_adj = (k + 2) / (est.samples + 4)
        stderr = box_vol * math.sqrt(p_adj * (1 - p_adj) / est.samples)
        est = McEstimate(est.mean, max(est.stderr, stderr), est.samples, est.seed)
    return est


def volume_radius(volume: McEstimate, dim: int, log_unit_ball: float) -> tuple[float, float]:
    """Volume radius ``(vol/vol B)^{1/dim}`` and its delta-method standard error."""
    vr = math.exp((math.log(volume.mean) - log_unit_ball) / dim)
    return vr, vr * volume.stderr / (dim * volume.mean)


# --------------------------------------------------------------------------
# Trace norm with exact small-case eigenvalues
# --------------------------------------------------------------------------

def trace_norm_pauli(coords: np.ndarray) -> np.ndarray:
    """Trace norm of 2x2 Hermitian matrices given as rows of Pauli coordinates.

    With ``M = (c0 I + c.sigma)/sqrt2`` the eigenvalues are
    ``(c0 +- |c|)/sqrt2``, hence ``||M||_1 = sqrt2 max(|c0|, |c|)``.
    """
    c = np.atleast_2d(coords)
    return math.sqrt(2.0) * np.maximum(np.abs(c[:, 0]), np.linalg.norm(c[:, 1:], axis=1))


def eigvalsh_3x3(m: np.ndarray) -> np.ndarray:
    """Closed-form (trigonometric) eigenvalues of a batch of 3x3 Hermitian matrices."""
    m = np.asarray(m, dtype=complex)
    q = np.trace(m, axis1=-2, axis2=-1).real / 3
    b = m - q[..., None, None] * np.eye(3)
    p = np.sqrt(np.maximum((np.abs(b) ** 2).sum(axis=(-2, -1)) / 6, 0.0))
    safe = np.where(p > 0, p, 1.0)
    det = np.linalg.det(b / safe[..., None, None]).real / 2
    phi = np.arccos(np.clip(det, -1.0, 1.0)) / 3
    ks = np.array([0.0, 2.0, 4.0]) * math.pi / 3
    return q[..., None] + 2 * p[..., None] * np.cos(phi[..., None] + ks)


def trace_norm(m: np.ndarray) -> np.ndarray:
    """Trace norm of a batch of Hermitian matrices (shape ``(..., d, d)``)."""
    m = np.asarray(m)
    dim = m.shape[-1]
    if dim == 2:
        a, dd = m[..., 0, 0].real, m[..., 1, 1].real
        mid = (a + dd) / 2
        rad = np.sqrt(((a - dd) / 2) ** 2 + np.abs(m[..., 0, 1]) ** 2)
        return np.abs(mid + rad) + np.abs(mid - rad)
    if dim == 3:
        return np.abs(eigvalsh_3x3(m)).sum(axis=-1)
    return np.abs(np.linalg.eigvalsh(m)).sum(axis=-1)


def operator_norm(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.shape[-1] == 3:
        return np.abs(eigvalsh_3x3(m)).max(axis=-1)
    return np.abs(np.linalg.eigvalsh(m)).max(axis=-1)


def delta1_volume(samples: int = 1_000_000, seed: int = 0, workers: int = 1) -> McEstimate:
    """Volume of the trace-norm unit ball of 2x2 Hermitians, by rejection in [-1,1]^4."""
    return mc_volume_ratio(
        lambda x: trace_norm_pauli(x) <= 1.0, [(-1.0, 1.0)] * 4, 4, samples, seed, workers=workers
    )


def symmetrization_membership(vertices: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    """Membership test for ``conv(-W u W)`` where W is the hull of ``vertices``."""
    from scipy.spatial import Delaunay

    pts = np.vstack([vertices, -np.asarray(vertices)])
    tri = Delaunay(pts)
    return lambda x: tri.find_simplex(x) >= 0


# --------------------------------------------------------------------------
# Gaussian maxima over finite sets
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DiscreteGaussianCheck:
    estimate: McEstimate
    radius: float
    bound: float
    bound_ok: bool


def check_discrete_gaussian(points, samples: int = 1_000_000, seed: int = 0, workers: int = 1) -> DiscreteGaussianCheck:
    """Monte Carlo estimate of ``E max_{y in F} <y, x>`` against ``R sqrt(2 ln #F)``.

    ``bound_ok`` holds when ``mean - 3 stderr <= bound``.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.size == 0:
        raise ValueError("point set must be nonempty")
    if samples < MIN_DISCRETE_SAMPLES:
        raise ValueError(f"at least {MIN_DISCRETE_SAMPLES} samples are required, got {samples}")
    dim = pts.shape[1]
    radius = float(np.linalg.norm(pts, axis=1).max())
    chunk = max(1000, min(CHUNK, 4_000_000 // max(1, len(pts))))
    est = run_streams(
        lambda rng, n: (rng.standard_normal((n, dim)) @ pts.T).max(axis=1),
        samples,
        seed,
        chunk=chunk,
        workers=workers,
        min_samples=MIN_DISCRETE_SAMPLES,
    )
    bound = gaussian_max_bound(radius, len(pts)) if radius > 0 else 0.0
    return DiscreteGaussianCheck(est, radius, bound, est.mean - 3 * est.stderr <= bound)
