"""Closed-form solitons on the line and their half-line restrictions.

The sech-profile soliton

    phi_omega(x) = [(mu+1) omega]^(1/(2 mu)) sech^(1/mu)(mu sqrt(omega) x)

is the unique positive square-integrable solution of the stationary NLS
on the line.  Everything on a half-line reduces, via t = tanh(mu
sqrt(omega) x), to incomplete integrals of (1 - t^2)^p, which we
evaluate through the regularized incomplete beta function.  The module
also provides the monotone function g used to invert the (mass, vertex
value) constraint into soliton parameters.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import optimize, special

from .errors import DomainError, NumericsError
from .params import HalfLineConstraint, ModelParams, SolitonParams

_BRACKET_LIMIT = 200


def _log_sech(y):
    """log(sech(y)), overflow-safe for large |y|."""
    ay = np.abs(y)
    return math.log(2.0) - ay - np.log1p(np.exp(-2.0 * ay))


def _check_mu(mu: float) -> None:
    if not 0 < mu < 2:
        raise DomainError(f"nonlinearity mu must lie in (0, 2), got {mu}")


def soliton_value(p: SolitonParams, mu: float, x):
    """Evaluate phi_omega(x + xi); positive, even about the peak at x = -xi."""
    _check_mu(mu)
    y = mu * math.sqrt(p.omega) * (np.asarray(x, dtype=float) + p.xi)
    amp = ((mu + 1.0) * p.omega) ** (1.0 / (2.0 * mu))
    out = amp * np.exp(_log_sech(y) / mu)
    return float(out) if np.isscalar(x) else out


def soliton_derivative(p: SolitonParams, mu: float, x):
    """d/dx of phi_omega(x + xi); equals -sqrt(omega) phi tanh(mu sqrt(omega)(x+xi))."""
    y = mu * math.sqrt(p.omega) * (np.asarray(x, dtype=float) + p.xi)
    out = -math.sqrt(p.omega) * soliton_value(p, mu, x) * np.tanh(y)
    return float(out) if np.isscalar(x) else out


def profile_integral(t0: float, p: float) -> float:
    """Integral of (1 - t^2)^p over [t0, 1] for t0 in [-1, 1), p > -1.

    Reduces to the regularized incomplete beta function of the complement
    1 - t0^2, evaluated as (1 - t0)(1 + t0) so no relative accuracy is
    lost when t0 is close to 1.
    """
    full = special.beta(0.5, p + 1.0)  # integral over the whole of [-1, 1]
    if t0 < 0.0:
        if t0 < -1.0:
            raise DomainError(f"lower limit must be >= -1, got {t0}")
        return full - profile_integral(-t0, p)
    if t0 >= 1.0:
        return 0.0
    # branch on which side of the beta integral is the small one: t0^2
    # loses resolution near t0 = 1, the complement loses it near t0 = 0
    if t0 * t0 <= 0.5:
        return 0.5 * full * special.betaincc(0.5, p + 1.0, t0 * t0)
    comp = (1.0 - t0) * (1.0 + t0)
    return 0.5 * full * special.betainc(p + 1.0, 0.5, comp)


def _halfline_profile(y: float, p: float) -> float:
    """profile_integral(tanh(y), p) without forming tanh(y) at all.

    The complement 1 - tanh(y)^2 = sech(y)^2 comes straight from the
    overflow-safe log, which keeps full relative accuracy for large y
    where tanh(y) would round to within 1e-16 of 1.
    """
    full = special.beta(0.5, p + 1.0)
    if y < 0.0:
        return full - _halfline_profile(-y, p)
    comp = math.exp(2.0 * _log_sech(y))
    if comp > 0.5:  # small y: tanh(y)^2 is the well-resolved side
        t0 = math.tanh(y)
        return 0.5 * full * special.betaincc(0.5, p + 1.0, t0 * t0)
    return 0.5 * full * special.betainc(p + 1.0, 0.5, comp)


def line_soliton_mass(omega: float, mu: float) -> float:
    """Full-line mass of phi_omega; strictly increasing in omega."""
    _check_mu(mu)
    if not omega > 0:
        raise DomainError(f"soliton frequency must be > 0, got {omega}")
    pref = 2.0 * (mu + 1.0) ** (1.0 / mu) / mu
    return pref * omega ** (1.0 / mu - 0.5) * profile_integral(0.0, 1.0 / mu - 1.0)


def omega_line_of_mass(M: float, mu: float) -> float:
    """Frequency of the line soliton with mass M (closed-form inversion)."""
    if not M > 0:
        raise DomainError(f"mass must be > 0, got {M}")
    c = 2.0 * (mu + 1.0) ** (1.0 / mu) / mu * profile_integral(0.0, 1.0 / mu - 1.0)
    return (M / c) ** (2.0 * mu / (2.0 - mu))


def halfline_mass(p: SolitonParams, mu: float) -> float:
    """Mass of phi_omega(. + xi) on the half-line [0, +inf)."""
    _check_mu(mu)
    y = mu * math.sqrt(p.omega) * p.xi
    pref = (mu + 1.0) ** (1.0 / mu) / mu
    return pref * p.omega ** (1.0 / mu - 0.5) * _halfline_profile(y, 1.0 / mu - 1.0)


def halfline_nonlinear_integral(p: SolitonParams, mu: float) -> float:
    """Integral of phi_omega(. + xi)^(2 mu + 2) on [0, +inf)."""
    y = mu * math.sqrt(p.omega) * p.xi
    pref = (mu + 1.0) ** (1.0 + 1.0 / mu) / mu
    return pref * p.omega ** (1.0 / mu + 0.5) * _halfline_profile(y, 1.0 / mu)


def g_eval(z: float, mu: float) -> float:
    """The strictly decreasing scaling function g(z) = phi_1(z)^-(2-mu) * halfline mass.

    g maps (-inf, +inf) onto (0, +inf); for mu = 1 it equals sqrt(2) e^(-z).
    """
    _check_mu(mu)
    mass = halfline_mass(SolitonParams(1.0, float(z)), mu)
    if mass == 0.0:  # underflow far on the positive side; the true g is ~0
        return 0.0
    # log space keeps g finite-safe for |z| far beyond the overflow range
    log_phi1 = math.log(mu + 1.0) / (2.0 * mu) + _log_sech(mu * float(z)) / mu
    log_g = -(2.0 - mu) * log_phi1 + math.log(mass)
    if log_g > 700.0:
        return math.inf
    return math.exp(log_g)


def solve_constraint(c: HalfLineConstraint, mu: float) -> SolitonParams:
    """Unique (omega, xi) with half-line mass c.m and value c.a at the origin.

    Solves g(z) = m / a^(2-mu) for z = sqrt(omega) xi by bracketing the
    monotone g and running Brent's method, then recovers omega from the
    scaling property phi_omega(xi) = omega^(1/(2 mu)) phi_1(z) = a.
    """
    _check_mu(mu)
    try:
        target = c.m / c.a ** (2.0 - mu)
    except OverflowError:
        target = math.inf if c.a < 1.0 else 0.0
    if not (math.isfinite(target) and target > 0):
        raise NumericsError(f"constraint ratio m / a^(2-mu) = {target} is unusable")

    lo, hi = -1.0, 1.0
    for _ in range(_BRACKET_LIMIT):
        if g_eval(lo, mu) >= target:
            break
        lo *= 2.0
    else:
        raise NumericsError(f"could not bracket g from below for target {target}")
    for _ in range(_BRACKET_LIMIT):
        if g_eval(hi, mu) <= target:
            break
        hi *= 2.0
    else:
        raise NumericsError(f"could not bracket g from above for target {target}")

    try:
        z = optimize.brentq(
            lambda zz: g_eval(zz, mu) - target, lo, hi, xtol=1e-14, rtol=8.9e-16,
            maxiter=200,
        )
    except RuntimeError as exc:  # pragma: no cover - brentq converges on brackets
        raise NumericsError(f"root finder failed for g(z) = {target}") from exc

    phi1 = soliton_value(SolitonParams(1.0, z), mu, 0.0)
    omega = (c.a / phi1) ** (2.0 * mu)
    return SolitonParams(omega=omega, xi=z / math.sqrt(omega))


def halfline_F(c: HalfLineConstraint, params: ModelParams) -> float:
    """Half-line energy of the constrained soliton piece minus the vertex share.

    The kinetic term is reduced through the first integral
    (phi')^2 = omega phi^2 - phi^(2 mu + 2)/(mu + 1), which avoids any
    numerical differentiation:

        F(m, a) = omega m / 2 - I_nl / (mu + 1) - alpha a^2 / (2 N)

    with I_nl the half-line integral of phi^(2 mu + 2).
    """
    p = solve_constraint(c, params.mu)
    i_nl = halfline_nonlinear_integral(p, params.mu)
    return (
        0.5 * p.omega * c.m
        - i_nl / (params.mu + 1.0)
        - params.alpha / (2.0 * params.N) * c.a**2
    )
