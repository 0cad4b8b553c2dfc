"""Volume-radius and in-radius bounds for separable states, as log-space reports.

Notation: ``N`` qubits (or qudits of local dimension ``D``), ``d = 2^N``
(``D^N``), ``n = d^2 - 1``.  ``Delta`` is the trace-norm unit ball and
``Sigma`` the symmetrized separable body, both in the ``d^2``-dimensional
space of Hermitian matrices; ``S`` and ``D`` denote the separable states and
all states inside the trace-one hyperplane.  Every per-dimension root is
taken with respect to ``dim S = d^2 - 1``.

Each pipeline returns an immutable :class:`BoundReport` whose values are
:class:`~sepvol.numerics.LogReal` objects, so outputs such as
``8.5286E-19996`` never pass through a hardware float.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Sequence

from scipy.optimize import minimize_scalar

from .gue import norm_bound_discrete
from .nets import MODELS, NetTableRow, default_net_table, optimize_delta, tensor_net_bound
from .numerics import (
    DEFAULT_BITS,
    DomainError,
    LogReal,
    PrecisionContext,
    gamma_k,
    log_ball_volume,
    log_gamma,
    log_gamma_k,
    resolve,
)
from .qubit_geometry import alpha_exponent

SCHEMA_VERSION = 1
DECIMAL_DIGITS = 4
# Placeholder for the unspecified universal net constant of CP^{D-1}.
C_PRIME_PLACEHOLDER = 3.0
# Above this size the log-factorial-product uses mpmath's Barnes G instead of a direct sum.
_DIRECT_SUM_LIMIT = 100_000


@dataclass(frozen=True)
class BoundReport:
    """One computed bound, with everything needed to reproduce it.

    ``per_dim`` is ``upper ** (1 / per_dim_root)`` (``lower`` when there is
    no upper member); ``per_dim_root`` is 1 when the bounded quantity is
    already a per-dimension value.
    """

    quantity: str
    lower: LogReal | None
    upper: LogReal | None
    per_dim: object
    per_dim_root: int
    equation_tags: tuple
    inputs: Mapping
    ctx: PrecisionContext
    extras: Mapping = field(default_factory=dict)
    flags: tuple = ()

    def __post_init__(self):
        if self.lower is not None and self.upper is not None and self.upper < self.lower:
            raise ArithmeticError(f"{self.quantity}: lower bound exceeds upper bound")

    def recompute_per_dim(self):
        member = self.upper if self.upper is not None else self.lower
        if member is None:
            return None
        mp = self.ctx.mp
        return mp.exp(mp.mpf(member.log_abs) / self.per_dim_root)

    def to_json_dict(self) -> dict:
        """Plain-JSON view with a fixed key order."""
        ref = self.upper if self.upper is not None else self.lower
        return {
            "schema_version": SCHEMA_VERSION,
            "quantity": self.quantity,
            "lower_log_e": _log_or_none(self.lower),
            "upper_log_e": _log_or_none(self.upper),
            "per_dim": None if self.per_dim is None else float(self.per_dim),
            "decimal_exponent": None if ref is None else ref.decimal(DECIMAL_DIGITS)[1],
            "lower_decimal": None if self.lower is None else self.lower.format(DECIMAL_DIGITS),
            "upper_decimal": None if self.upper is None else self.upper.format(DECIMAL_DIGITS),
            "equation_tags": list(self.equation_tags),
            "inputs": {k: _plain(v) for k, v in self.inputs.items()},
            "precision_bits": self.ctx.mantissa_bits,
            "flags": list(self.flags),
            "extras": {k: _plain(v) for k, v in self.extras.items()},
        }


def report_schema() -> dict:
    """JSON Schema that every :meth:`BoundReport.to_json_dict` output satisfies."""
    return json.loads(resources.files("sepvol").joinpath("data/report.schema.json").read_text())


def _log_or_none(x: LogReal | None):
    if x is None:
        return None
    if x.sign <= 0:
        raise DomainError("report members are positive quantities")
    return float(x.log_abs)


def _plain(v):
    if isinstance(v, LogReal):
        return v.format(DECIMAL_DIGITS)
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, Mapping):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return float(v)


def _report(quantity, lower, upper, root, tags, inputs, ctx, extras=None, flags=()) -> BoundReport:
    member = upper if upper is not None else lower
    per_dim = None
    if member is not None:
        per_dim = ctx.mp.exp(ctx.mp.mpf(member.log_abs) / root)
    return BoundReport(quantity, lower, upper, per_dim, root, tuple(tags), dict(inputs), ctx, dict(extras or {}), tuple(flags))


def _check_qubits(N, minimum=2):
    if int(N) != N or N < minimum:
        raise DomainError(f"qubit count must be an integer >= {minimum}, got {N!r}")
    return int(N)


def _log_alpha_gain(N, mp):
    """``ln d^{-alpha} = -(N/8) ln(27/16)``."""
    return -mp.mpf(N) / 8 * mp.log(mp.mpf(27) / 16)


# --------------------------------------------------------------------------
# Symmetrization
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetrizationFactor:
    n: int
    log_ratio: object  # ln(2^n / (n+1))
    distance_factor: object  # 2/sqrt(d) with d = sqrt(n+1)

    @property
    def per_dim(self):
        """``(2^n/(n+1))^{1/n}``, always in ``[1, 2)``."""
        mp = _mp_of(self.log_ratio)
        return mp.exp(self.log_ratio / self.n)

    def transfer(self, log_sigma_delta):
        """Bracket ``ln(vol S / vol D)`` given ``ln(vol Sigma / vol Delta)``.

        The two slab sections at distance ``2/sqrt d`` give
        ``h vol S <= vol Sigma / 2 <= h (2^n/(n+1)) vol S`` and the same for
        ``D`` and ``Delta``, so the ratio moves by at most ``2^n/(n+1)``.
        """
        return log_sigma_delta - self.log_ratio, log_sigma_delta + self.log_ratio


def _mp_of(x):
    return getattr(x, "context", resolve(None).mp)


def symmetrization_factor(n: int, ctx: PrecisionContext | None = None) -> SymmetrizationFactor:
    """Volume factor ``2^n/(n+1)`` (in log space) and slab width ``2/sqrt d``."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    ctx = resolve(ctx)
    mp = ctx.mp
    log_ratio = n * mp.log(2) - mp.log(n + 1)
    d = mp.sqrt(n + 1)
    return SymmetrizationFactor(int(n), log_ratio, 2 / mp.sqrt(d))


# --------------------------------------------------------------------------
# Delta: trace-norm ball
# --------------------------------------------------------------------------

def vr_delta_bounds(d: int, ctx: PrecisionContext | None = None):
    """``(lower, upper)`` on the volume radius of the trace-norm ball.

    The lower member is ``1/sqrt d``.  The upper member is the Urysohn bound
    ``E||G||_op / gamma_{d^2}`` with the moment bound on ``E||G||_op``, capped
    by ``2/sqrt d``.
    """
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")
    ctx = resolve(ctx)
    mp = ctx.mp
    cap = 2 / mp.sqrt(d)
    urysohn = norm_bound_discrete(d, ctx) / gamma_k(d * d, ctx)
    return 1 / mp.sqrt(d), min(cap, urysohn)


# --------------------------------------------------------------------------
# Sigma: symmetrized separable body
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SigmaBounds:
    lower: LogReal
    upper_closed: LogReal
    upper_net: LogReal
    net: Mapping


def _net_parameters(N, net_choice):
    """Resolve a net choice into ``(m, delta, description)``."""
    if net_choice is None:
        raise ValueError("a net is required: pass a table row, (m, delta), or a model name")
    if isinstance(net_choice, NetTableRow):
        return net_choice.m, net_choice.delta, {"source": "table", "m": net_choice.m,
                                                "epsilon_degrees": net_choice.epsilon_degrees}
    if isinstance(net_choice, str):
        if net_choice not in MODELS:
            raise ValueError(f"unknown net model {net_choice!r}; choose from {sorted(MODELS)}")
        opt = optimize_delta(N, net_choice)
        return opt.implied_m, opt.delta, {"source": "model", "model": net_choice}
    m, delta = net_choice
    return m, delta, {"source": "explicit", "m": m}


def _log_sigma_closed(N, mp):
    """``ln[sqrt(4N log2(4N)) / d^{1+alpha}]``."""
    return mp.log(4 * N * mp.log(4 * N) / mp.log(2)) / 2 - N * mp.log(2) + _log_alpha_gain(N, mp)


def vr_sigma_bounds(N: int, net_choice, ctx: PrecisionContext | None = None) -> SigmaBounds:
    """Lower and two upper bounds on the volume radius of ``Sigma`` for N qubits.

    * ``lower = d^{-(1+alpha)}``
    * ``upper_closed = sqrt(4N log2(4N)) / d^{1+alpha}``
    * ``upper_net = d^{-alpha} * tensor_net_bound / gamma_{d^2}``

    ``net_choice`` is a :class:`~sepvol.nets.NetTableRow`, an ``(m, delta)``
    pair, or a cardinality model name accepted by
    :func:`~sepvol.nets.optimize_delta`.
    """
    N = _check_qubits(N)
    ctx = resolve(ctx)
    mp = ctx.work
    m, delta, desc = _net_parameters(N, net_choice)
    d2 = 4**N
    log_d = N * mp.log(2)
    alpha_gain = _log_alpha_gain(N, mp)  # = -alpha ln d
    log_lower = -log_d + alpha_gain
    log_closed = _log_sigma_closed(N, mp)
    wctx = PrecisionContext(mp.prec)
    log_net = alpha_gain + mp.log(tensor_net_bound(N, m, delta, wctx)) - log_gamma_k(d2, wctx)
    r = ctx.round
    desc = dict(desc, delta=float(delta))
    return SigmaBounds(LogReal(1, r(log_lower)), LogReal(1, r(log_closed)), LogReal(1, r(log_net)), desc)


# --------------------------------------------------------------------------
# Two-sided per-dimension ratio
# --------------------------------------------------------------------------

RATIO_CONSTANTS = {"basic": 0.25, "refined": "sqrt(e/(8 pi))"}


def _ratio_constant(name, mp):
    if name == "basic":
        return mp.mpf(1) / 4
    if name == "refined":
        return mp.sqrt(mp.e / (8 * mp.pi))
    if isinstance(name, (int, float)) and name > 0:
        return mp.mpf(name)
    raise ValueError(f"constant must be 'basic', 'refined' or a positive number, got {name!r}")


def ratio_bounds(N: int, constant="basic", ctx: PrecisionContext | None = None) -> BoundReport:
    """Two-sided bound on ``(vol S / vol D)^{1/(d^2-1)}``.

    ``lower = c / 3^{3N/8}`` and ``upper = 4 sqrt(N log2(4N)) / 3^{3N/8}``,
    using ``d^{1/2+alpha} = 3^{3N/8}``.  ``constant`` selects ``c = 1/4``
    (``"basic"``), ``c = sqrt(e/(8 pi))`` (``"refined"``) or a number.
    """
    N = _check_qubits(N)
    ctx = resolve(ctx)
    mp = ctx.work
    log_scale = mp.mpf(3 * N) / 8 * mp.log(3)
    c = _ratio_constant(constant, mp)
    log_lower = mp.log(c) - log_scale
    log_upper = mp.log(4) + mp.log(N * mp.log(4 * N) / mp.log(2)) / 2 - log_scale
    lows = {k: float(mp.exp(mp.log(_ratio_constant(k, mp)) - log_scale)) for k in RATIO_CONSTANTS}
    return _report(
        "volume_ratio_per_dim",
        LogReal(1, ctx.round(log_lower)),
        LogReal(1, ctx.round(log_upper)),
        1,
        ("balanced_mean_width_upper", "symmetrization_transfer", "volume_ratio_lower"),
        {"N": N, "d": 2**N, "constant": constant if isinstance(constant, str) else float(constant)},
        ctx,
        extras={"lower_basic": lows["basic"], "lower_refined": lows["refined"], "nontrivial": bool(log_upper < 0)},
    )


def smallest_nontrivial_N(limit: int = 1000, ctx: PrecisionContext | None = None) -> int:
    """Smallest ``N >= 2`` whose :func:`ratio_bounds` upper member is below 1."""
    for N in range(2, limit + 1):
        if ratio_bounds(N, ctx=ctx).upper.log_abs < 0:
            return N
    raise ArithmeticError(f"no nontrivial N up to {limit}")


# --------------------------------------------------------------------------
# Volume of the state space
# --------------------------------------------------------------------------

def log_superfactorial(d: int, ctx: PrecisionContext | None = None):
    """``sum_{j=1}^{d} ln Gamma(j) = sum_{k=1}^{d-1} (d-k) ln k``."""
    ctx = resolve(ctx)
    mp = ctx.work
    if d <= _DIRECT_SUM_LIMIT:
        value = mp.fsum((d - k) * mp.log(k) for k in range(2, d))
    else:
        value = mp.log(mp.barnesg(d + 1))
    return ctx.round(value)


def vol_D_log(d: int, ctx: PrecisionContext | None = None) -> LogReal:
    """``vol D(C^d) = sqrt(d) (2 pi)^{d(d-1)/2} prod_{j=1}^{d} Gamma(j) / Gamma(d^2)``.

    The volume is the ``(d^2-1)``-dimensional volume of the density matrices
    in the trace-one hyperplane, Hilbert-Schmidt metric.
    """
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d!r}")
    ctx = resolve(ctx)
    mp = ctx.work
    wctx = PrecisionContext(mp.prec)
    value = (
        mp.log(d) / 2
        + mp.mpf(d * (d - 1)) / 2 * mp.log(2 * mp.pi)
        + log_superfactorial(d, wctx)
        - log_gamma(d * d, wctx)
    )
    return LogReal(1, ctx.round(value))


@dataclass(frozen=True)
class StateVolumeRadius:
    d: int
    value: object
    asymptote: object  # e^{-1/4} / sqrt(d)

    @property
    def scaled(self):
        """``sqrt(d)`` times the volume radius; tends to ``e^{-1/4}``."""
        return self.value * _mp_of(self.value).sqrt(self.d)


def state_volume_radius(d: int, ctx: PrecisionContext | None = None) -> StateVolumeRadius:
    ctx = resolve(ctx)
    mp = ctx.work
    n = d * d - 1
    log_vr = (mp.mpf(vol_D_log(d, ctx).log_abs) - log_ball_volume(n, PrecisionContext(mp.prec))) / n
    return StateVolumeRadius(d, ctx.round(mp.exp(log_vr)), ctx.round(mp.exp(mp.mpf(-1) / 4) / mp.sqrt(d)))


# --------------------------------------------------------------------------
# Explicit pipeline with a tabulated net
# --------------------------------------------------------------------------

def _log_ratio_chain(d, log_upsilon, mp):
    """``ln(vol S / vol D)`` from ``ln upsilon`` with ``upsilon >= vr(Sigma)``.

    ``vol S <= (sqrt(d)/2) vol Sigma`` (one slab of width ``2/sqrt d``), and
    ``vol Sigma <= upsilon^{d^2} vol B_{d^2}``.
    """
    wctx = PrecisionContext(mp.prec)
    d2 = d * d
    log_vol_s = mp.log(mp.sqrt(d) / 2) + log_ball_volume(d2, wctx) + d2 * log_upsilon
    return log_vol_s, log_vol_s - vol_D_log(d, wctx).log_abs


def best_table_row(N: int, rows: Iterable[NetTableRow] | None = None, ctx: PrecisionContext | None = None) -> NetTableRow:
    """Row minimizing :func:`~sepvol.nets.tensor_net_bound` for ``N``."""
    rows = list(default_net_table() if rows is None else rows)
    if not rows:
        raise ValueError("net table is empty")
    return min(rows, key=lambda r: tensor_net_bound(N, r.m, r.delta, ctx))


def tabulated_net_pipeline(N: int, table_row: NetTableRow | Sequence[NetTableRow] | None = None,
                        ctx: PrecisionContext | None = None) -> BoundReport:
    """Explicit upper bound on ``vol S / vol D`` for N qubits from a tabulated net.

    Steps: the Gaussian maximum over signed tensor products of the net
    (:func:`~sepvol.nets.tensor_net_bound`), then
    ``upsilon = d^{-alpha} * bound / gamma_{d^2} >= vr(Sigma)``, then the
    slab inequality for ``vol S`` and the closed formula for ``vol D``.  With
    no row given, the best row of the bundled table is used.
    """
    N = _check_qubits(N)
    ctx = resolve(ctx)
    mp = ctx.work
    wctx = PrecisionContext(mp.prec)
    if table_row is None or not isinstance(table_row, NetTableRow):
        table_row = best_table_row(N, table_row, wctx)
    d = 2**N
    d2 = d * d
    bound = tensor_net_bound(N, table_row.m, table_row.delta, wctx)
    log_upsilon = _log_alpha_gain(N, mp) + mp.log(bound) - log_gamma_k(d2, wctx)
    log_vol_s, log_ratio = _log_ratio_chain(d, log_upsilon, mp)
    n = d2 - 1
    lower_per_dim = ratio_bounds(N, "basic", wctx).lower
    r = ctx.round
    return _report(
        "volume_ratio",
        LogReal(1, r(lower_per_dim.log_abs * n)),
        LogReal(1, r(log_ratio)),
        n,
        ("net_gaussian_max", "balanced_volume_radius", "slab_volume_upper", "closed_state_volume"),
        {"N": N, "d": d, "m": table_row.m, "epsilon_degrees": table_row.epsilon_degrees,
         "delta": table_row.delta},
        ctx,
        extras={
            "tensor_net_bound": r(bound),
            "upsilon": r(mp.exp(log_upsilon)),
            "log_vol_S_upper": r(log_vol_s),
            "log_vol_D": vol_D_log(d, ctx).log_abs,
        },
    )


# --------------------------------------------------------------------------
# Constants
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticConstants:
    lower_limit: object  # e^{3/4} / sqrt(2 pi)
    upper_limit: object  # e^{1/4} sqrt(2 / ln 2)
    refined_c: object  # sqrt(e / (8 pi))
    tags: Mapping

    def to_dict(self) -> dict:
        return {"lower_limit": float(self.lower_limit), "upper_limit": float(self.upper_limit),
                "refined_c": float(self.refined_c), "tags": dict(self.tags)}


def asymptotic_constants(ctx: PrecisionContext | None = None) -> AsymptoticConstants:
    """Limits of the constants in the two-sided volume-ratio estimate."""
    mp = resolve(ctx).mp
    return AsymptoticConstants(
        lower_limit=mp.exp(mp.mpf(3) / 4) / mp.sqrt(2 * mp.pi),
        upper_limit=mp.exp(mp.mpf(1) / 4) * mp.sqrt(2 / mp.log(2)),
        refined_c=mp.sqrt(mp.e / (8 * mp.pi)),
        tags={"lower_limit": "closed_state_volume", "upper_limit": "closed_state_volume",
              "refined_c": "volume_ratio_lower"},
    )


# --------------------------------------------------------------------------
# In-radius
# --------------------------------------------------------------------------

def inradius_report(N: int, ctx: PrecisionContext | None = None) -> BoundReport:
    """Bounds on the in-radius of ``Sigma`` for N qubits.

    The lower member ``6^{-N/2}`` comes from the product structure.  An
    in-radius never exceeds a volume radius, so the upper member is the
    smaller of the ``Delta`` upper bound and, for ``N >= 2``, the closed
    ``Sigma`` bound.  Reference exponents (in base ``d``) are in ``extras``.
    """
    N = _check_qubits(N, minimum=1)
    ctx = resolve(ctx)
    mp = ctx.work
    d = 2**N
    log_lower = -mp.mpf(N) / 2 * mp.log(6)
    candidates = [mp.log(vr_delta_bounds(d, PrecisionContext(mp.prec))[1])]
    if N >= 2:
        candidates.append(_log_sigma_closed(N, mp))
    log_upper = min(candidates)
    alpha = alpha_exponent(2, PrecisionContext(mp.prec))
    r = ctx.round
    return _report(
        "sigma_inradius",
        LogReal(1, r(log_lower)),
        LogReal(1, r(log_upper)),
        1,
        ("product_inradius_lower", "volume_radius_upper"),
        {"N": N, "d": d},
        ctx,
        extras={
            "state_inradius": r(1 / mp.sqrt(d * (d - 1))),
            "lower_exponent": r(mp.log(6) / mp.log(4)),
            "volumetric_exponent": r(1 + alpha),
            "reference_eta": [r(mp.log(20) / mp.log(4)), 1.5],
            "reference_beta": [r(mp.log(20) / mp.log(4) - mp.mpf(1) / 2), 1.0],
        },
    )


# --------------------------------------------------------------------------
# Qudits
# --------------------------------------------------------------------------

def _qudit_log_net_bound(D, N, c_prime, delta, mp):
    """``ln[(1-delta)^{-N} sqrt(2 ln(2 (C'/delta)^{(2D-2)N}))]``."""
    log_card = mp.log(2) + (2 * D - 2) * N * mp.log(mp.mpf(c_prime) / delta)
    if log_card <= 0:
        raise DomainError("net cardinality model gives fewer than one point")
    return -N * mp.log(1 - delta) + mp.log(2 * log_card) / 2


def qudit_bound(D: int, N: int, c_prime: float | None = None, ctx: PrecisionContext | None = None,
                delta="inverse_n") -> BoundReport:
    """Upper bound on ``(vol S / vol D)^{1/(d^2-1)}`` for N qudits, ``d = D^N``.

    Each factor's pure states carry a ``delta``-net of at most
    ``(C'/delta)^{2D-2}`` points; the Gaussian maximum over the ``2 #F^N``
    signed tensor products, divided by ``gamma_{d^2}`` and refined by the
    balancing gain ``d^{-alpha_D}``, bounds ``vr(Sigma)``.  The slab
    inequality and the closed volume of ``D`` then give the ratio.

    ``delta`` is ``"inverse_n"`` (``1/N``), ``"optimal"`` (minimizes the
    bound over ``(0, 1)``) or a number in ``(0, 1)``.  Without ``c_prime`` a
    placeholder is used and the report is flagged.
    """
    if int(D) != D or D < 2:
        raise DomainError(f"local dimension must be an integer >= 2, got {D!r}")
    N = _check_qubits(N)
    ctx = resolve(ctx)
    mp = ctx.work
    flags = []
    if c_prime is None:
        c_prime = C_PRIME_PLACEHOLDER
        flags.append("c_prime_placeholder")
    if not c_prime > 0:
        raise DomainError(f"c_prime must be positive, got {c_prime!r}")
    if delta == "inverse_n":
        delta_v = mp.mpf(1) / N
    elif delta == "optimal":
        res = minimize_scalar(
            lambda u: float(_qudit_log_net_bound(D, N, c_prime, mp.mpf(math.exp(u)), mp)),
            bounds=(math.log(1e-9), math.log(min(0.999, c_prime / 1.0001))),
            method="bounded",
            options={"xatol": 1e-10},
        )
        delta_v = mp.mpf(math.exp(res.x))
    else:
        delta_v = mp.mpf(delta)
    if not 0 < delta_v < 1:
        raise DomainError(f"delta must lie in (0, 1), got {delta_v}")

    d = D**N
    d2 = d * d
    wctx = PrecisionContext(mp.prec)
    alpha = alpha_exponent(D, wctx)
    log_t = _qudit_log_net_bound(D, N, c_prime, delta_v, mp)
    log_ups_plain = log_t - log_gamma_k(d2, wctx)
    log_ups = log_ups_plain - alpha * mp.log(d)
    n = d2 - 1
    _, log_ratio = _log_ratio_chain(d, log_ups, mp)
    _, log_ratio_plain = _log_ratio_chain(d, log_ups_plain, mp)
    r = ctx.round
    return _report(
        "qudit_volume_ratio",
        None,
        LogReal(1, r(log_ratio)),
        n,
        ("projective_net_cardinality", "net_gaussian_max", "balanced_volume_radius", "slab_volume_upper",
         "closed_state_volume"),
        {"D": int(D), "N": N, "d": d, "c_prime": float(c_prime), "delta": r(delta_v),
         "delta_rule": delta if isinstance(delta, str) else "explicit"},
        ctx,
        extras={"alpha_D": r(alpha), "per_dim_unrefined": r(mp.exp(log_ratio_plain / n)),
                "upsilon": r(mp.exp(log_ups))},
        flags=flags,
    )


# --------------------------------------------------------------------------
# Report wrappers for the component bounds
# --------------------------------------------------------------------------

def delta_report(d: int, ctx: PrecisionContext | None = None) -> BoundReport:
    """:func:`vr_delta_bounds` as a report (values are already per-dimension)."""
    ctx = resolve(ctx)
    lo, hi = vr_delta_bounds(d, ctx)
    return _report("delta_volume_radius", LogReal.from_value(lo, ctx), LogReal.from_value(hi, ctx), 1,
                   ("trace_ball_volume_radius", "urysohn_mean_width"), {"d": int(d)}, ctx,
                   extras={"cap": ctx.round(2 / ctx.mp.sqrt(d))})


def sigma_report(N: int, net_choice, ctx: PrecisionContext | None = None) -> BoundReport:
    """:func:`vr_sigma_bounds` as a report; the upper member is the smaller upper bound."""
    ctx = resolve(ctx)
    sb = vr_sigma_bounds(N, net_choice, ctx)
    upper = min(sb.upper_closed, sb.upper_net)
    return _report("sigma_volume_radius", sb.lower, upper, 1,
                   ("balanced_volume_radius", "net_gaussian_max", "closed_mean_width_upper"),
                   dict({"N": int(N), "d": 2 ** int(N)}, **{f"net_{k}": v for k, v in sb.net.items()}), ctx,
                   extras={"upper_closed": sb.upper_closed, "upper_net": sb.upper_net})


def state_volume_report(d: int, ctx: PrecisionContext | None = None) -> BoundReport:
    """Exact volume of the d-dimensional state space (lower = upper)."""
    ctx = resolve(ctx)
    vol = vol_D_log(d, ctx)
    vr = state_volume_radius(d, ctx)
    return _report("state_volume", vol, vol, d * d - 1, ("closed_state_volume",), {"d": int(d)}, ctx,
                   extras={"volume_radius": vr.value, "asymptote": vr.asymptote, "scaled_volume_radius": vr.scaled})


__all__ = [
    "BoundReport",
    "report_schema",
    "SymmetrizationFactor",
    "SigmaBounds",
    "StateVolumeRadius",
    "AsymptoticConstants",
    "symmetrization_factor",
    "vr_delta_bounds",
    "vr_sigma_bounds",
    "ratio_bounds",
    "smallest_nontrivial_N",
    "log_superfactorial",
    "vol_D_log",
    "state_volume_radius",
    "best_table_row",
    "tabulated_net_pipeline",
    "asymptotic_constants",
    "inradius_report",
    "qudit_bound",
    "delta_report",
    "sigma_report",
    "state_volume_report",
    "DEFAULT_BITS",
]
