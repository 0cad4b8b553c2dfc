"""GUE moments and bounds on the expected operator norm.

``G`` is the standard Gaussian on the real ``d^2``-dimensional space of
Hermitian matrices with the Hilbert-Schmidt inner product: real ``N(0,1)``
diagonal, off-diagonal real and imaginary parts ``N(0,1/2)``.

The normalized even moments ``a_p = d^{-1} E tr((G/(2 sqrt d))^{2p})`` obey
the three-term recursion

    a_p = (2p-1)/(2p+2) * (a_{p-1} + p(p-1)/(4d^2) * (2p-3)/(2p) * a_{p-2}),

with ``a_0 = 1`` and ``a_1 = 1/4``.  The moment recursion is written for the
semicircle-normalized matrix; the ``sqrt d`` is restored in every bound on
``E||G||_op`` returned here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .mc_oracle import McEstimate, run_streams
from .numerics import DomainError, PrecisionContext, gamma_k, resolve

EXACT_LIMIT = 64


@dataclass(frozen=True)
class GueMomentTable:
    d: int
    a: tuple

    @property
    def exact(self) -> bool:
        return isinstance(self.a[0], Fraction)


def _check_dim(d):
    if int(d) != d or d < 1:
        raise DomainError(f"matrix dimension must be a positive integer, got {d!r}")


def default_p_max(d: int) -> int:
    """``max(8, ceil(3 d^{2/3}))``, computed with integer arithmetic."""
    target = 27 * d * d  # (3 d^{2/3})^3
    p = int(round(target ** (1 / 3)))
    while p**3 < target:
        p += 1
    while p > 1 and (p - 1) ** 3 >= target:
        p -= 1
    return max(8, p)


def moment_table(d: int, p_max: int, ctx: PrecisionContext | None = None, exact: bool | None = None) -> GueMomentTable:
    """``a_0 .. a_{p_max}`` from the recursion.

    Rational arithmetic is used when ``d`` and ``p_max`` are both at most 64
    (override with ``exact``); otherwise multiprecision floats.
    """
    _check_dim(d)
    if int(p_max) != p_max or p_max < 1:
        raise DomainError(f"p_max must be a positive integer, got {p_max!r}")
    if exact is None:
        exact = d <= EXACT_LIMIT and p_max <= EXACT_LIMIT
    if exact:
        one = Fraction(1)
        def num(x, y=1):
            return Fraction(x, y)
    else:
        mp = resolve(ctx).work
        one = mp.mpf(1)
        def num(x, y=1):
            return mp.mpf(x) / y
    a = [one, num(1, 4)]
    d2 = 4 * d * d
    for p in range(2, p_max + 1):
        a.append(num(2 * p - 1, 2 * p + 2) * (a[p - 1] + num(p * (p - 1), d2) * num(2 * p - 3, 2 * p) * a[p - 2]))
    return GueMomentTable(d=d, a=tuple(a))


def catalan_product_bound(d: int, p: int, ctx: PrecisionContext | None = None):
    """Closed-form majorant ``C(2p,p) / (4^p (p+1)) * prod_j (1 + j(j-1)/(4d^2))`` of ``a_p``."""
    _check_dim(d)
    if int(p) != p or p < 1:
        raise DomainError(f"p must be a positive integer, got {p!r}")
    value = Fraction(math.comb(2 * p, p), 4**p * (p + 1))
    for j in range(1, p + 1):
        value *= 1 + Fraction(j * (j - 1), 4 * d * d)
    return resolve(ctx).mpf(value.numerator) / value.denominator


def _mp_value(x, mp):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def discrete_norm_candidates(d: int, p_max: int | None = None, ctx: PrecisionContext | None = None) -> list:
    """``2 sqrt(d) (d a_p)^{1/(2p)}`` for p = 1..p_max, each an upper bound on E||G||_op."""
    _check_dim(d)
    ctx = resolve(ctx)
    p_max = default_p_max(d) if p_max is None else p_max
    table = moment_table(d, p_max, ctx)
    mp = ctx.work
    root_d = mp.sqrt(d)
    return [2 * root_d * (d * _mp_value(table.a[p], mp)) ** (mp.mpf(1) / (2 * p)) for p in range(1, p_max + 1)]


def norm_bound_discrete(d: int, ctx: PrecisionContext | None = None, p_max: int | None = None):
    """Best moment bound ``min_p 2 sqrt(d) (d a_p)^{1/(2p)}`` on ``E||G||_op``.

    Each candidate comes from ``E||G|| <= (E tr G^{2p})^{1/(2p)}``.
    """
    ctx = resolve(ctx)
    return ctx.round(min(discrete_norm_candidates(d, p_max, ctx)))


def norm_bound_discrete_argmin(d: int, ctx: PrecisionContext | None = None, p_max: int | None = None) -> int:
    cands = discrete_norm_candidates(d, p_max, ctx)
    return 1 + min(range(len(cands)), key=cands.__getitem__)


# --------------------------------------------------------------------------
# Analytic (Stirling-majorized) bound
# --------------------------------------------------------------------------

def analytic_log_f(t, ctx: PrecisionContext | None = None):
    """``ln f(t)`` with ``f(t) = (exp(t^3/6) / (pi t^3))^{1/(4t)}``."""
    mp = resolve(ctx).work
    t = mp.mpf(t)
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    return (t**3 / 6 - mp.log(mp.pi) - 3 * mp.log(t)) / (4 * t)


def analytic_optimum(ctx: PrecisionContext | None = None):
    """Unconstrained minimizer ``t*`` of ``f`` and the minimum ``f(t*)``.

    The stationarity condition of ``ln f`` reduces to
    ``t^3/3 + 3 ln t + ln pi - 3 = 0``, whose left side is increasing, so the
    root is found by a bracketed search on ``[0.5, 3]``.
    """
    ctx = resolve(ctx)
    mp = ctx.work
    h = lambda t: t**3 / 3 + 3 * mp.log(t) + mp.log(mp.pi) - 3
    t_star = mp.findroot(h, (mp.mpf("0.5"), mp.mpf(3)), solver="anderson")
    return ctx.round(t_star), ctx.round(mp.exp(analytic_log_f(t_star, PrecisionContext(mp.prec))))


def norm_bound_analytic(d: int, ctx: PrecisionContext | None = None):
    """Stirling-form bound ``2 sqrt(d) f(t)^{1/d^{2/3}}`` at an admissible ``t``.

    Admissible ``t`` are ``p / d^{2/3}`` for integer ``p >= 1``; the two
    integers around ``t* d^{2/3}`` are compared.  Returns ``(t, bound)``.
    """
    _check_dim(d)
    ctx = resolve(ctx)
    mp = ctx.work
    wctx = PrecisionContext(mp.prec)
    scale = mp.cbrt(mp.mpf(d) ** 2)
    t_star, _ = analytic_optimum(wctx)
    base = int(mp.floor(t_star * scale))
    best = None
    for p in {max(1, base), base + 1}:
        t = p / scale
        lf = analytic_log_f(t, wctx)
        if best is None or lf < best[1]:
            best = (t, lf)
    t, lf = best
    return ctx.round(t), ctx.round(2 * mp.sqrt(d) * mp.exp(lf / scale))


# --------------------------------------------------------------------------
# Sampling
# --------------------------------------------------------------------------

def gue_batch(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """``n`` independent GUE matrices, shape ``(n, d, d)``."""
    z = rng.standard_normal((n, d, d)) + 1j * rng.standard_normal((n, d, d))
    upper = np.triu(z, 1) / math.sqrt(2.0)
    diag = rng.standard_normal((n, d))
    g = upper + np.conj(np.swapaxes(upper, -1, -2))
    idx = np.arange(d)
    g[:, idx, idx] = diag
    return g


def sample_gue(d: int, seed: int) -> np.ndarray:
    """One GUE matrix, bit-exactly determined by ``(d, seed)``."""
    _check_dim(d)
    return gue_batch(np.random.default_rng(seed), 1, d)[0]


def mc_moment(d: int, p: int, samples: int = 100_000, seed: int = 0, workers: int = 1) -> McEstimate:
    """Monte Carlo estimate of ``a_p = d^{-1} E tr((G/(2 sqrt d))^{2p})``."""
    scale = 2 * math.sqrt(d)

    def draw(rng, n):
        ev = np.linalg.eigvalsh(gue_batch(rng, n, d)) / scale
        return (ev ** (2 * p)).sum(axis=1) / d

    return run_streams(draw, samples, seed, workers=workers)


def mc_operator_norm(d: int, samples: int = 100_000, seed: int = 0, workers: int = 1) -> McEstimate:
    """Monte Carlo estimate of ``E||G||_op``."""
    return run_streams(
        lambda rng, n: np.abs(np.linalg.eigvalsh(gue_batch(rng, n, d))).max(axis=1), samples, seed, workers=workers
    )


def expected_norm_2x2_quadrature() -> float:
    """``E max(|l1|, |l2|)`` for d = 2 by quadrature of the eigenvalue density.

    The GUE(2) eigenvalue density is proportional to
    ``(l1 - l2)^2 exp(-(l1^2 + l2^2)/2)``.  In the coordinates
    ``m = (l1+l2)/2``, ``r = (l1-l2)/2 >= 0`` it factors as
    ``exp(-m^2) * r^2 exp(-r^2)`` and ``max(|l1|, |l2|) = |m| + r``.
    """
    from scipy import integrate

    inf = math.inf
    z_m, _ = integrate.quad(lambda m: math.exp(-m * m), -inf, inf)
    e_m, _ = integrate.quad(lambda m: abs(m) * math.exp(-m * m), -inf, inf)
    z_r, _ = integrate.quad(lambda r: r * r * math.exp(-r * r), 0, inf)
    e_r, _ = integrate.quad(lambda r: r**3 * math.exp(-r * r), 0, inf)
    return e_m / z_m + e_r / z_r


@dataclass(frozen=True)
class MeanWidthDelta:
    bound: object
    mc: McEstimate | None


def mean_width_delta(
    d: int,
    ctx: PrecisionContext | None = None,
    samples: int | None = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> MeanWidthDelta:
    """Bound and Monte Carlo estimate of the sphere average of ``||A||_op``.

    The bound is ``norm_bound_discrete(d) / gamma_{d^2}``.  The estimate
    averages ``||G||_op / ||G||_HS`` over GUE draws (``G/||G||_HS`` is uniform
    on the Hilbert-Schmidt sphere), so it does not go through ``gamma``.
    Pass ``samples=None`` to skip sampling.
    """
    _check_dim(d)
    ctx = resolve(ctx)
    bound = ctx.round(norm_bound_discrete(d, ctx) / gamma_k(d * d, ctx))
    if samples is None:
        return MeanWidthDelta(bound, None)
    if d < 2:
        raise DomainError("the Monte Carlo branch needs d >= 2")

    def draw(rng, n):
        g = gue_batch(rng, n, d)
        return np.abs(np.linalg.eigvalsh(g)).max(axis=1) / np.linalg.norm(g, axis=(1, 2))

    return MeanWidthDelta(bound, run_streams(draw, samples, seed, workers=workers))
