"""Normal and Student-t distribution functions.

Every function accepts a scalar or an array. A scalar argument gives a
float back, an array gives an array of the same shape.
"""
import math

import numpy as np
from scipy import optimize, special

from .errors import DomainError
from .utils import as_scalar_or_array

_BRENT_RTOL = 4 * np.finfo(float).eps
_BRENT_XTOL = 1e-15


def _prepare(values):
    arr = np.asarray(values, dtype=float)
    return arr, arr.ndim == 0


def _require_finite(arr, name):
    if not np.all(np.isfinite(arr)):
        raise DomainError("{} must be finite".format(name))


def _require_probability(arr):
    if np.any(np.isnan(arr)) or np.any((arr < 0.0) | (arr > 1.0)):
        raise DomainError("probabilities must lie in [0, 1]")


def check_dof(nu):
    """Validate degrees of freedom. ``inf`` is allowed and means normal."""
    try:
        nu = float(nu)
    except (TypeError, ValueError):
        raise DomainError("degrees of freedom must be a number, got {!r}".format(nu))
    if math.isnan(nu) or nu <= 0:
        raise DomainError("degrees of freedom must be positive, got {}".format(nu))
    return nu


def normal_cdf(z):
    arr, scalar = _prepare(z)
    _require_finite(arr, "z")
    return as_scalar_or_array(special.ndtr(arr), scalar)


def normal_sf(z):
    arr, scalar = _prepare(z)
    _require_finite(arr, "z")
    return as_scalar_or_array(special.ndtr(-arr), scalar)


def normal_inv_cdf(p):
    """Quantile of the standard normal; 0 and 1 map to -inf and +inf."""
    arr, scalar = _prepare(p)
    _require_probability(arr)
    return as_scalar_or_array(special.ndtri(arr), scalar)


def _beta_tail(arr, nu):
    # P(T > |t|); inside t^2 < nu the complementary beta form keeps the cdf
    # smooth around the median
    with np.errstate(over="ignore", invalid="ignore"):
        t2 = arr * arr
        far = 0.5 * special.betainc(0.5 * nu, 0.5, nu / (nu + t2))
        near = 0.5 - 0.5 * special.betainc(0.5, 0.5 * nu, t2 / (nu + t2))
    return np.where(t2 >= nu, far, near)


def t_cdf(t, nu):
    arr, scalar = _prepare(t)
    _require_finite(arr, "t")
    nu = check_dof(nu)
    if math.isinf(nu):
        return normal_cdf(t)
    tail = _beta_tail(arr, nu)
    return as_scalar_or_array(np.where(arr < 0, tail, 1.0 - tail), scalar)


def t_sf(t, nu):
    arr, scalar = _prepare(t)
    _require_finite(arr, "t")
    nu = check_dof(nu)
    if math.isinf(nu):
        return normal_sf(t)
    tail = _beta_tail(arr, nu)
    return as_scalar_or_array(np.where(arr > 0, tail, 1.0 - tail), scalar)


def t_pdf(t, nu):
    arr, scalar = _prepare(t)
    _require_finite(arr, "t")
    nu = check_dof(nu)
    if math.isinf(nu):
        dens = np.exp(-0.5 * arr * arr) / math.sqrt(2.0 * math.pi)
        return as_scalar_or_array(dens, scalar)
    log_norm = (
        special.gammaln(0.5 * (nu + 1.0))
        - special.gammaln(0.5 * nu)
        - 0.5 * math.log(nu * math.pi)
    )
    dens = np.exp(log_norm - 0.5 * (nu + 1.0) * np.log1p(arr * arr / nu))
    return as_scalar_or_array(dens, scalar)


def _t_root(p, nu, guess):
    if p == 0.5:
        return 0.0

    def excess(t):
        return float(t_cdf(t, nu)) - p

    width = max(abs(guess) * 1e-6, 1e-8)
    lo, hi = guess - width, guess + width
    while excess(lo) > 0:
        width *= 2.0
        lo = guess - width
    while excess(hi) < 0:
        width *= 2.0
        hi = guess + width
    if excess(lo) == 0:
        return lo
    if excess(hi) == 0:
        return hi
    return optimize.brentq(
        excess, lo, hi, xtol=_BRENT_XTOL, rtol=_BRENT_RTOL, maxiter=200
    )


def t_inv_cdf(p, nu):
    """Quantile of Student's t with ``nu`` degrees of freedom.

    The closed-form estimate from scipy seeds a bracketed Brent search on
    :func:`t_cdf`, so ``t_cdf(t_inv_cdf(p, nu), nu)`` reproduces ``p``.
    0 and 1 map to -inf and +inf.
    """
    arr, scalar = _prepare(p)
    _require_probability(arr)
    nu = check_dof(nu)
    if math.isinf(nu):
        return normal_inv_cdf(p)

    flat = np.atleast_1d(arr).ravel()
    guesses = np.asarray(special.stdtrit(nu, flat), dtype=float)
    out = np.empty_like(flat)
    out[flat == 0.0] = -np.inf
    out[flat == 1.0] = np.inf
    for k in np.flatnonzero((flat > 0.0) & (flat < 1.0)):
        guess = float(guesses[k]) if np.isfinite(guesses[k]) else 0.0
        out[k] = _t_root(float(flat[k]), nu, guess)
    return as_scalar_or_array(out.reshape(arr.shape), scalar)
