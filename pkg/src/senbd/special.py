"""Regularized incomplete gamma functions and the inverse-gamma quantile."""
import math

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 1000


class ConvergenceError(RuntimeError):
    pass


def _series_p(a, x):
    # P(a, x) by the power series, good for x < a + 1
    term = 1.0 / a
    total = term
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"incomplete gamma series failed for a={a}, x={x}")


def _contfrac_q(a, x):
    # Q(a, x) by the Lentz continued fraction, good for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"incomplete gamma continued fraction failed for a={a}, x={x}")


def gammainc_pq(a, x):
    """Return (P(a, x), Q(a, x)), each computed on its accurate side."""
    if a <= 0:
        raise ValueError("shape must be positive")
    if x < 0:
        raise ValueError("x must be non-negative")
    if x == 0:
        return 0.0, 1.0
    if math.isinf(x):
        return 1.0, 0.0
    if x < a + 1.0:
        p = _series_p(a, x)
        return p, 1.0 - p
    q = _contfrac_q(a, x)
    return 1.0 - q, q


def gammainc(a, x):
    """Regularized lower incomplete gamma P(a, x)."""
    return gammainc_pq(a, x)[0]


def gammaincc(a, x):
    """Regularized upper incomplete gamma Q(a, x)."""
    return gammainc_pq(a, x)[1]


def inv_gamma_cdf(tau, shape):
    """CDF of InvGamma(shape, scale=1) at tau, i.e. Q(shape, 1/tau)."""
    if tau <= 0:
        return 0.0
    return gammaincc(shape, 1.0 / tau)


def inv_gamma_quantile(shape, p, rtol=1e-10, max_iter=200):
    """Return tau with InvGamma(shape, 1) CDF equal to p.

    Works in x = 1/tau, where the CDF is Q(shape, x). A geometric bracket is
    found first, then Newton steps are taken and clamped to the bracket
    (falling back to bisection in log x when a step leaves it).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"probability must lie in (0, 1), got {p}")
    if shape <= 0:
        raise ValueError(f"shape must be positive, got {shape}")

    # Residual is taken on whichever tail is small, so both ends stay accurate.
    upper = p <= 0.5
    target = p if upper else 1.0 - p

    def resid(x):
        pl, qu = gammainc_pq(shape, x)
        return (qu - target) if upper else (pl - target)

    # resid is decreasing in x for the upper tail and increasing for the lower
    sign = -1.0 if upper else 1.0
    lo = hi = max(shape, 1e-3)
    while sign * resid(lo) > 0:
        lo *= 0.5
        if lo < 1e-300:
            raise ConvergenceError("could not bracket the quantile from below")
    while sign * resid(hi) < 0:
        hi *= 2.0
        if hi > 1e300:
            raise ConvergenceError("could not bracket the quantile from above")

    log_gamma = math.lgamma(shape)
    x = math.sqrt(lo * hi)
    for _ in range(max_iter):
        r = resid(x)
        if abs(r) <= rtol * target * 1e-2:
            return 1.0 / x
        if sign * r > 0:
            hi = x
        else:
            lo = x
        # derivative of P with respect to x is the gamma density
        dens = math.exp(-x + (shape - 1.0) * math.log(x) - log_gamma)
        step = r / (sign * dens) if dens > 0 else math.inf
        x_new = x - step
        if not lo < x_new < hi:
            x_new = math.sqrt(lo * hi)
        if abs(x_new - x) <= 1e-15 * x:
            x = x_new
            break
        x = x_new
    r = resid(x)
    if abs(r) > rtol * target:
        raise ConvergenceError(
            f"quantile iteration did not converge (shape={shape}, p={p}, residual={r})")
    return 1.0 / x
