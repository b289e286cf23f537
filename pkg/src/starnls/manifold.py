"""The multi-soliton manifold, the symmetric state, and the reduced energy.

On the manifold of graph functions that are soliton pieces on every edge
with common vertex value a and fixed total mass M, the energy becomes a
smooth function of (m_1 ... m_{N-1}, a).  The edge-exchange-symmetric
stationary state sits at the equal-mass point of that manifold.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import optimize

from .errors import DomainError, NumericsError
from .fields import GraphField, Grid
from .params import (
    HalfLineConstraint,
    ManifoldPoint,
    ModelParams,
    SolitonParams,
    SymmetricStateParams,
)
from .soliton import (
    halfline_F,
    profile_integral,
    solve_constraint,
    soliton_derivative,
    soliton_value,
)

BOUNDARY_MARGIN = 1e-9


def mass_of_omega(omega: float, params: ModelParams) -> float:
    """Total mass of the symmetric state at frequency omega; strictly increasing."""
    thr = params.omega_threshold
    if not omega > thr:
        raise DomainError(f"frequency {omega} is below the threshold {thr}")
    mu = params.mu
    t0 = params.alpha / (params.N * math.sqrt(omega))
    pref = params.N * (mu + 1.0) ** (1.0 / mu) / mu
    return pref * omega ** (1.0 / mu - 0.5) * profile_integral(t0, 1.0 / mu - 1.0)


def omega_of_mass(M: float, params: ModelParams) -> float:
    """Monotone inversion of mass_of_omega."""
    if not M > 0:
        raise DomainError(f"mass must be > 0, got {M}")
    thr = params.omega_threshold
    lo_off, hi_off = thr, thr
    for _ in range(4000):
        if mass_of_omega(thr + lo_off, params) < M:
            break
        lo_off /= 2.0
    else:
        raise NumericsError(f"could not bracket omega from below for mass {M}")
    for _ in range(200):
        if mass_of_omega(thr + hi_off, params) > M:
            break
        hi_off *= 2.0
    else:
        raise NumericsError(f"could not bracket omega from above for mass {M}")
    return optimize.brentq(
        lambda w: mass_of_omega(w, params) - M,
        thr + lo_off,
        thr + hi_off,
        xtol=1e-15,
        rtol=8.9e-16,
        maxiter=200,
    )


def symmetric_state(omega: float, params: ModelParams) -> SymmetricStateParams:
    """Shift, vertex value and mass of the symmetric stationary state."""
    thr = params.omega_threshold
    if not omega > thr:
        raise DomainError(f"frequency {omega} is below the threshold {thr}")
    zeta = math.atanh(params.alpha / (params.N * math.sqrt(omega))) / (
        params.mu * math.sqrt(omega)
    )
    a = soliton_value(SolitonParams(omega, zeta), params.mu, 0.0)
    return SymmetricStateParams(
        omega=omega, zeta=zeta, a=a, mass=mass_of_omega(omega, params)
    )


def tilde_point(M: float, params: ModelParams) -> ManifoldPoint:
    """Manifold coordinates of the symmetric state: equal masses M/N, vertex value a.

    Built by inverting the mass function; the constraint solver is then
    asked for (M/N, a) and must reproduce the symmetric shift, which
    guards the two inversion routes against each other.
    """
    state = symmetric_state(omega_of_mass(M, params), params)
    sp = solve_constraint(HalfLineConstraint(m=M / params.N, a=state.a), params.mu)
    if abs(sp.xi - state.zeta) > 1e-9 * max(1.0, abs(state.zeta)):
        raise NumericsError(
            f"inconsistent shift for the symmetric point: {sp.xi} vs {state.zeta}"
        )
    return ManifoldPoint(m=np.full(params.N - 1, M / params.N), a=state.a, M=M)


def _check_interior(P: ManifoldPoint, params: ModelParams) -> None:
    if P.n_edges != params.N:
        raise DomainError(f"point has {P.n_edges} edges, model has {params.N}")
    if np.min(P.edge_masses()) < BOUNDARY_MARGIN:
        raise DomainError("point is too close to the manifold boundary")


def edge_solitons(P: ManifoldPoint, params: ModelParams) -> list[SolitonParams]:
    """Per-edge soliton parameters of the manifold point."""
    _check_interior(P, params)
    return [
        solve_constraint(HalfLineConstraint(m=float(m), a=P.a), params.mu)
        for m in P.edge_masses()
    ]


def build_multisoliton(P: ManifoldPoint, params: ModelParams, grid: Grid) -> GraphField:
    """Sample the multi-soliton with the given coordinates on a grid.

    Values and derivatives come from the closed forms, exact to machine
    precision on every node.
    """
    pieces = edge_solitons(P, params)
    x = grid.x
    edges = np.empty((params.N, grid.n_points), dtype=complex)
    derivs = np.empty_like(edges)
    for j, sp in enumerate(pieces):
        edges[j] = soliton_value(sp, params.mu, x)
        derivs[j] = soliton_derivative(sp, params.mu, x)
    return GraphField(edges=edges, grid=grid, params=params, edge_derivatives=derivs)


def symmetric_field(omega: float, params: ModelParams, grid: Grid) -> GraphField:
    """Sampled symmetric stationary state at frequency omega."""
    state = symmetric_state(omega, params)
    sp = SolitonParams(omega, state.zeta)
    x = grid.x
    row = soliton_value(sp, params.mu, x)
    drow = soliton_derivative(sp, params.mu, x)
    edges = np.tile(row.astype(complex), (params.N, 1))
    derivs = np.tile(drow.astype(complex), (params.N, 1))
    return GraphField(edges=edges, grid=grid, params=params, edge_derivatives=derivs)


def reduced_energy(P: ManifoldPoint, params: ModelParams) -> float:
    """Graph energy restricted to the manifold: sum of per-edge F terms."""
    _check_interior(P, params)
    return float(
        sum(
            halfline_F(HalfLineConstraint(m=float(m), a=P.a), params)
            for m in P.edge_masses()
        )
    )


def _fd_steps(x: np.ndarray, h: float) -> np.ndarray:
    return h * np.maximum(1.0, np.abs(x))


def reduced_gradient(P: ManifoldPoint, params: ModelParams, h: float = 1e-6) -> np.ndarray:
    """Central-difference gradient of the reduced energy in (m_1..m_{N-1}, a)."""
    x0 = P.coords()
    steps = _fd_steps(x0, h)
    grad = np.empty_like(x0)
    for i in range(len(x0)):
        xp, xm = x0.copy(), x0.copy()
        xp[i] += steps[i]
        xm[i] -= steps[i]
        fp = reduced_energy(ManifoldPoint.from_coords(xp, P.M), params)
        fm = reduced_energy(ManifoldPoint.from_coords(xm, P.M), params)
        grad[i] = (fp - fm) / (2.0 * steps[i])
    return grad


def reduced_hessian(P: ManifoldPoint, params: ModelParams, h: float = 1e-4) -> np.ndarray:
    """Central second differences of the reduced energy.

    The default step balances the h^2 truncation error against roundoff
    amplified by 1/h^2; the reduced energy itself is smooth to machine
    precision (closed forms plus incomplete-beta evaluation).
    """
    x0 = P.coords()
    n = len(x0)
    steps = _fd_steps(x0, h)
    f0 = reduced_energy(P, params)

    def f(x):
        return reduced_energy(ManifoldPoint.from_coords(x, P.M), params)

    H = np.empty((n, n))
    for i in range(n):
        xp, xm = x0.copy(), x0.copy()
        xp[i] += steps[i]
        xm[i] -= steps[i]
        H[i, i] = (f(xp) - 2.0 * f0 + f(xm)) / steps[i] ** 2
    for i in range(n):
        for j in range(i + 1, n):
            xpp, xpm, xmp, xmm = (x0.copy() for _ in range(4))
            xpp[[i, j]] += steps[[i, j]]
            xpm[i] += steps[i]
            xpm[j] -= steps[j]
            xmp[i] -= steps[i]
            xmp[j] += steps[j]
            xmm[[i, j]] -= steps[[i, j]]
            H[i, j] = H[j, i] = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (
                4.0 * steps[i] * steps[j]
            )
    return H


def ground_state_inequality(
    M: float, params: ModelParams
) -> tuple[float, float, bool]:
    """Both sides of the ground-state criterion at mass M.

    The symmetric state can only be a ground state when

        (2 - mu) omega_R M <= (2 - mu) omega M
                              + alpha mu (mu+1)^(1/mu) (omega - alpha^2/N^2)

    with omega the graph frequency at mass M and omega_R the line-soliton
    frequency at the same mass.  Returns (lhs, rhs, lhs <= rhs).
    """
    from .soliton import omega_line_of_mass

    mu = params.mu
    omega = omega_of_mass(M, params)
    omega_r = omega_line_of_mass(M, mu)
    lhs = (2.0 - mu) * omega_r * M
    rhs = (2.0 - mu) * omega * M + params.alpha * mu * (mu + 1.0) ** (1.0 / mu) * (
        omega - params.omega_threshold
    )
    return lhs, rhs, lhs <= rhs


def threshold_mass(params: ModelParams) -> float:
    """Critical mass above which the ground-state criterion fails.

    Bisects the single sign change of rhs - lhs in log M; above the
    returned mass the symmetric state is a local but not a global
    minimizer.
    """

    def margin(log_m: float) -> float:
        lhs, rhs, _ = ground_state_inequality(math.exp(log_m), params)
        return rhs - lhs

    lo = 0.0
    for _ in range(200):
        if margin(lo) > 0:
            break
        lo -= 1.0
    else:
        raise NumericsError("could not find a mass satisfying the criterion")
    hi = lo + 1.0
    for _ in range(200):
        if margin(hi) < 0:
            break
        hi += 1.0
    else:
        raise NumericsError("could not find a mass violating the criterion")
    log_m = optimize.brentq(margin, lo, hi, xtol=1e-12, rtol=8.9e-16, maxiter=200)
    return math.exp(log_m)
