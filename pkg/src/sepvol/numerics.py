"""Arbitrary-precision special functions and log-space volume primitives.

Every volume in this package is handled through its natural logarithm.  The
quantities involved (for instance volume ratios near ``1e-19996``) are far
outside any hardware float range, so values are carried as :class:`LogReal`
and converted to decimal ``mantissa, exponent`` pairs only for output.

All arithmetic runs inside a private :class:`mpmath.MPContext` owned by a
:class:`PrecisionContext`; nothing touches mpmath's global ``mp`` state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath

DEFAULT_BITS = 256
MIN_BITS = 64
# Extra working bits used internally before rounding to the target precision.
GUARD_BITS = 24


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


@lru_cache(maxsize=None)
def _context(bits: int) -> mpmath.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision for arbitrary-precision real arithmetic.

    Contexts are immutable; the underlying mpmath context is cached per bit
    count and never mutated after creation, so sharing across threads is safe.
    """

    mantissa_bits: int = DEFAULT_BITS

    def __post_init__(self):
        if int(self.mantissa_bits) != self.mantissa_bits or self.mantissa_bits < MIN_BITS:
            raise ValueError(f"mantissa_bits must be an integer >= {MIN_BITS}, got {self.mantissa_bits!r}")

    @property
    def mp(self) -> mpmath.MPContext:
        return _context(self.mantissa_bits)

    @property
    def work(self) -> mpmath.MPContext:
        """Context with guard bits, for intermediate sums."""
        return _context(self.mantissa_bits + GUARD_BITS)

    def mpf(self, x):
        return self.mp.mpf(x)

    def round(self, x):
        """Round a (possibly higher precision) value to this context."""
        return self.mp.mpf(x)

    def describe(self) -> dict:
        return {"precision_bits": self.mantissa_bits}


DEFAULT_CTX = PrecisionContext()


def resolve(ctx: PrecisionContext | None) -> PrecisionContext:
    return DEFAULT_CTX if ctx is None else ctx


# --------------------------------------------------------------------------
# log-gamma via shifted Stirling series
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _stirling_coefficients(count: int, bits: int) -> tuple:
    """B_{2k} / (2k (2k-1)) for k = 1..count, at the given precision."""
    mp = _context(bits)
    return tuple(
        mp.mpf(mpmath.bernfrac(2 * k)[0]) / mp.mpf(mpmath.bernfrac(2 * k)[1]) / (2 * k * (2 * k - 1))
        for k in range(1, count + 1)
    )


def _log_gamma_at(x, w):
    """Shifted Stirling evaluation in context ``w``; returns (value, magnitude of largest part)."""
    wp = w.prec
    # The smallest Stirling term is about exp(-2*pi*x); shift until it is
    # below 2^-wp relative.
    threshold = int(math.ceil(wp * math.log(2) / (2 * math.pi))) + 2
    shift = 0
    if x < threshold:
        shift = int(math.ceil(threshold - x))
    z = x + shift

    result = (z - w.mpf(0.5)) * w.log(z) - z + w.log(2 * w.pi) / 2
    inv_z = 1 / z
    inv_z2 = inv_z * inv_z
    power = inv_z
    tol = w.ldexp(w.mpf(1), -wp) * max(abs(result), w.mpf(1))
    # Terms shrink until index ~ pi*z; the threshold keeps z above that need.
    coeffs = _stirling_coefficients(max(8, int(math.pi * threshold) + 8), wp)
    for c in coeffs:
        term = c * power
        result += term
        if abs(term) < tol:
            break
        power *= inv_z2
    else:  # pragma: no cover - threshold above guarantees convergence
        raise ArithmeticError("Stirling series failed to converge")

    largest = abs(result)
    if shift:
        prod = w.mpf(1)
        for i in range(shift):
            prod *= x + i
        result -= w.log(prod)
    return result, largest


def log_gamma(x, ctx: PrecisionContext | None = None):
    """Natural log of Gamma(x) for real x > 0.

    The argument is shifted upward until the asymptotic Stirling series
    converges to the working precision; the shift is then undone with one
    logarithm of a product.  Near the zeros at x = 1 and x = 2 that
    subtraction cancels, so the evaluation is repeated with as many extra
    bits as were lost.
    """
    ctx = resolve(ctx)
    w = ctx.work
    x = ctx.mp.mpf(x)
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    if x == 1 or x == 2:
        return ctx.mp.zero
    result, largest = _log_gamma_at(w.mpf(x), w)
    lost = (w.mag(largest) - w.mag(result)) if result != 0 else w.prec
    if lost > GUARD_BITS // 2:
        w = _context(w.prec + int(lost) + GUARD_BITS)
        result, _ = _log_gamma_at(w.mpf(x), w)
    return ctx.round(result)


def gamma_k(k: int, ctx: PrecisionContext | None = None):
    """Gaussian-to-spherical conversion constant sqrt(2) Gamma((k+1)/2) / Gamma(k/2).

    For a standard Gaussian vector g in R^k, E|g| = gamma_k.
    """
    ctx = resolve(ctx)
    if int(k) != k or k < 1:
        raise DomainError(f"gamma_k requires an integer k >= 1, got {k!r}")
    w = ctx.work
    half = w.mpf(k) / 2
    lg = log_gamma(half + w.mpf(0.5), PrecisionContext(w.prec)) - log_gamma(half, PrecisionContext(w.prec))
    return ctx.round(w.sqrt(2) * w.exp(lg))


def log_gamma_k(k: int, ctx: PrecisionContext | None = None):
    """Natural log of :func:`gamma_k`, without leaving log space."""
    ctx = resolve(ctx)
    if int(k) != k or k < 1:
        raise DomainError(f"gamma_k requires an integer k >= 1, got {k!r}")
    w = ctx.work
    wctx = PrecisionContext(w.prec)
    half = w.mpf(k) / 2
    return ctx.round(w.log(2) / 2 + log_gamma(half + w.mpf(0.5), wctx) - log_gamma(half, wctx))


def log_ball_volume(m: int, ctx: PrecisionContext | None = None):
    """Natural log of the volume of the unit Euclidean ball in R^m."""
    ctx = resolve(ctx)
    if int(m) != m or m < 1:
        raise DomainError(f"log_ball_volume requires an integer m >= 1, got {m!r}")
    w = ctx.work
    half = w.mpf(m) / 2
    return ctx.round(half * w.log(w.pi) - log_gamma(half + 1, PrecisionContext(w.prec)))


# --------------------------------------------------------------------------
# LogReal
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LogReal:
    """A real number stored as ``sign * exp(log_abs)``.

    ``sign`` is one of ``1, -1, 0``.  For zero the ``log_abs`` field is unused
    and conventionally ``-inf``.
    """

    sign: int
    log_abs: object

    def __post_init__(self):
        if self.sign not in (1, -1, 0):
            raise ValueError(f"sign must be 1, -1 or 0, got {self.sign!r}")

    @classmethod
    def from_log(cls, log_abs, sign: int = 1) -> "LogReal":
        return cls(sign, log_abs)

    @classmethod
    def from_value(cls, x, ctx: PrecisionContext | None = None) -> "LogReal":
        ctx = resolve(ctx)
        x = ctx.mpf(x)
        if x == 0:
            return cls(0, ctx.mp.ninf)
        return cls(1 if x > 0 else -1, ctx.mp.log(abs(x)))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def __mul__(self, other: "LogReal") -> "LogReal":
        if self.sign == 0 or other.sign == 0:
            return LogReal(0, self.log_abs)
        return LogReal(self.sign * other.sign, self.log_abs + other.log_abs)

    def __truediv__(self, other: "LogReal") -> "LogReal":
        if other.sign == 0:
            raise ZeroDivisionError("division by a zero LogReal")
        if self.sign == 0:
            return self
        return LogReal(self.sign * other.sign, self.log_abs - other.log_abs)

    def __pow__(self, exponent) -> "LogReal":
        if self.sign < 0:
            raise DomainError("real powers of a negative LogReal are undefined")
        if self.sign == 0:
            return self
        return LogReal(1, self.log_abs * exponent)

    def root(self, n) -> "LogReal":
        """``n``-th root of a non-negative value."""
        if self.sign < 0:
            raise DomainError("roots of a negative LogReal are undefined")
        if self.sign == 0:
            return self
        return LogReal(1, self.log_abs / n)

    def _key(self):
        # Orders by value: zero, positives by log, negatives reversed.
        if self.sign == 0:
            return (0, 0)
        return (self.sign, self.sign * self.log_abs)

    def __lt__(self, other: "LogReal") -> bool:
        return self._key() < other._key()

    def __le__(self, other: "LogReal") -> bool:
        return self._key() <= other._key()

    def log10(self):
        if self.sign == 0:
            raise DomainError("log10 of zero")
        mp = _context(_bits_of(self.log_abs))
        return mp.mpf(self.log_abs) / mp.log(10)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        la = float(self.log_abs)
        if la > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(la)

    def decimal(self, digits: int = 4) -> tuple[str, int]:
        """Return ``(mantissa_string, exponent)`` with ``digits`` after the point."""
        return decimal_parts(self, digits)

    def format(self, digits: int = 4) -> str:
        """``m.mmmmE±eeee`` rendering that survives any magnitude."""
        if self.sign == 0:
            return "0." + "0" * digits + "E+0000"
        mant, exp = decimal_parts(self, digits)
        sign = "-" if self.sign < 0 else ""
        return f"{sign}{mant}E{exp:+05d}"


def decimal_parts(x: LogReal, digits: int = 4) -> tuple[str, int]:
    """Split ``|x|`` into a decimal mantissa string and a base-10 exponent.

    The exponent is ``floor(log10|x|)``; rounding that pushes the mantissa to
    ``10.0...`` is carried into the exponent.
    """
    if x.sign == 0:
        return "0." + "0" * digits, 0
    mp = _context(max(128, _bits_of(x.log_abs)))
    l10 = mp.mpf(x.log_abs) / mp.log(10)
    exp = int(mp.floor(l10))
    mant = float(mp.power(10, l10 - exp))
    text = f"{mant:.{digits}f}"
    if text.startswith("10"):
        exp += 1
        text = f"{mant / 10:.{digits}f}"
    return text, exp


def _bits_of(v) -> int:
    ctx = getattr(v, "context", None)
    return getattr(ctx, "prec", 53) + 16


def decimal_exponent(x: LogReal) -> int:
    return decimal_parts(x)[1]
