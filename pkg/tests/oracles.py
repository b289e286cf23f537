"""Independent numerical oracles for cross-checking the closed forms.

Everything here deliberately avoids the package's evaluation routes:
integrals go through adaptive quadrature instead of incomplete beta
functions, and the critical mass comes from plain bisection on the
direct energy comparison instead of the algebraic criterion.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import quad

from starnls.params import ModelParams, SolitonParams
from starnls.soliton import soliton_value


def quad_profile_integral(t0: float, p: float) -> float:
    """Integral of (1 - t^2)^p over [t0, 1] by quadrature.

    The substitution t = sin(theta) removes the endpoint singularity for
    every p > -1/2, which covers all exponents used by the package
    (p = 1/mu - 1 and p = 1/mu for mu in (0, 2)).
    """
    if p <= -0.5:
        raise ValueError("oracle only valid for p > -1/2")

    def integrand(theta: float) -> float:
        return math.cos(theta) ** (2.0 * p + 1.0)

    val, _ = quad(integrand, math.asin(t0), 0.5 * math.pi, epsabs=1e-14, epsrel=1e-13)
    return val


def quad_halfline_mass(sp: SolitonParams, mu: float) -> float:
    """Half-line mass of the shifted soliton by direct quadrature."""

    def integrand(x: float) -> float:
        return soliton_value(sp, mu, x) ** 2

    val, _ = quad(integrand, 0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def quad_halfline_nonlinear(sp: SolitonParams, mu: float) -> float:
    """Half-line integral of phi^(2 mu + 2) by direct quadrature."""

    def integrand(x: float) -> float:
        return soliton_value(sp, mu, x) ** (2.0 * mu + 2.0)

    val, _ = quad(integrand, 0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def quad_halfline_kinetic(sp: SolitonParams, mu: float) -> float:
    """Half-line integral of (phi')^2 by quadrature of the exact derivative."""
    from starnls.soliton import soliton_derivative

    def integrand(x: float) -> float:
        return soliton_derivative(sp, mu, x) ** 2

    val, _ = quad(integrand, 0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def line_soliton_energy(M: float, mu: float) -> float:
    """Energy of the full-line soliton of mass M (first-integral reduction)."""
    from starnls.soliton import halfline_nonlinear_integral, omega_line_of_mass

    w = omega_line_of_mass(M, mu)
    i_nl = 2.0 * halfline_nonlinear_integral(SolitonParams(w, 0.0), mu)
    return 0.5 * w * M - i_nl / (mu + 1.0)


def bisect_threshold_mass(params: ModelParams, iters: int = 60) -> float:
    """Critical mass by plain bisection on the direct energy comparison.

    Finds the sign change of E(line soliton of mass M) - E(symmetric
    state of mass M); no Brent solver and no algebraic reduction.
    """
    from starnls.manifold import reduced_energy, tilde_point

    def diff(M: float) -> float:
        e_graph = reduced_energy(tilde_point(M, params), params)
        return line_soliton_energy(M, params.mu) - e_graph

    lo, hi = 1e-2, 1.0
    for _ in range(60):
        if diff(lo) > 0:
            break
        lo /= 2.0
    else:
        raise RuntimeError("no mass with a graph state below the line soliton")
    for _ in range(60):
        if diff(hi) < 0:
            break
        hi *= 2.0
    else:
        raise RuntimeError("no mass with a graph state above the line soliton")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if diff(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
