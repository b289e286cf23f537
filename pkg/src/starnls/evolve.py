"""Conservative time propagation of the NLS flow on the star graph.

Space: lumped P1 finite elements on the N edges.  The delta vertex term
and the flux condition sum_j psi_j'(0) = -alpha psi(v) live in the
quadratic form, so the assembled operator is symmetric with respect to
the weighted discrete inner product (vertex weight N dx / 2).

Time: Crank-Nicolson with the nonlinearity written as the divided
difference of the potential density G(rho) = rho^(mu+1)/(mu+1) between
the two time levels.  At fixed-point convergence the scheme conserves
the discrete mass and the discrete energy exactly, which is the whole
test surface for conservation checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from .errors import DomainError, NumericsError
from .fields import GraphField, Grid, h1_inner, h1_norm
from .params import ModelParams

BLOWUP_AMPLITUDE = 1e6


@dataclass(frozen=True)
class PropagatorConfig:
    """Numerical parameters of one evolution run."""

    L: float = 40.0
    dx: float = 0.01
    dt: float = 0.005
    T: float = 20.0
    fp_tol: float = 1e-12
    max_fp_iter: int = 60
    # optional guard against bulk mass hitting the Dirichlet wall; even an
    # unperturbed run radiates O(dx^2) ripples of ~1e-6, so the guard is
    # off by default and meant for tightly truncated production runs
    boundary_tol: float | None = None

    def __post_init__(self):
        if not (self.dx > 0 and self.dt > 0 and self.T > 0):
            raise DomainError("dx, dt and T must all be positive")

    @property
    def grid(self) -> Grid:
        return Grid(L=self.L, dx=self.dx)

    @property
    def n_steps(self) -> int:
        return round(self.T / self.dt)


@dataclass
class StabilityTrace:
    """Time series recorded along a stability run."""

    times: np.ndarray
    orbital_distance: np.ndarray
    mass_drift: np.ndarray
    energy_drift: np.ndarray
    passed: bool | None = None
    meta: dict = field(default_factory=dict)


class VertexPropagator:
    """Crank-Nicolson stepper for one (N, alpha, mu, grid, dt) setup."""

    def __init__(self, params: ModelParams, cfg: PropagatorConfig):
        self.params = params
        self.cfg = cfg
        grid = cfg.grid
        self.n_interior = grid.n_points - 2  # Dirichlet node at x = L dropped
        self.size = 1 + params.N * self.n_interior
        dx = grid.dx

        w = np.full(self.size, dx)
        w[0] = params.N * dx / 2.0
        self.weights = w

        rows, cols, vals = [], [], []

        def add(i, j, v):
            rows.append(i)
            cols.append(j)
            vals.append(v)

        add(0, 0, params.N / dx - params.alpha)
        for e in range(params.N):
            base = 1 + e * self.n_interior
            add(0, base, -1.0 / dx)
            add(base, 0, -1.0 / dx)
            for k in range(self.n_interior):
                add(base + k, base + k, 2.0 / dx)
                if k + 1 < self.n_interior:
                    add(base + k, base + k + 1, -1.0 / dx)
                    add(base + k + 1, base + k, -1.0 / dx)
        self.stiffness = sparse.csr_matrix(
            (vals, (rows, cols)), shape=(self.size, self.size)
        )

        lhs = sparse.diags(1j / cfg.dt * w) - 0.5 * self.stiffness
        self._solver = splu(lhs.tocsc())
        self._rhs_op = (sparse.diags(1j / cfg.dt * w) + 0.5 * self.stiffness).tocsr()

    # -- packing -------------------------------------------------------
    def pack(self, F: GraphField) -> np.ndarray:
        psi = np.empty(self.size, dtype=complex)
        psi[0] = F.vertex_value
        for e in range(self.params.N):
            base = 1 + e * self.n_interior
            psi[base : base + self.n_interior] = F.edges[e, 1:-1]
        return psi

    def unpack(self, psi: np.ndarray) -> GraphField:
        edges = np.zeros((self.params.N, self.cfg.grid.n_points), dtype=complex)
        for e in range(self.params.N):
            base = 1 + e * self.n_interior
            edges[e, 0] = psi[0]
            edges[e, 1:-1] = psi[base : base + self.n_interior]
        return GraphField(edges=edges, grid=self.cfg.grid, params=self.params)

    # -- invariants ----------------------------------------------------
    def discrete_mass(self, psi: np.ndarray) -> float:
        return float(np.sum(self.weights * np.abs(psi) ** 2))

    def discrete_energy(self, psi: np.ndarray) -> float:
        mu = self.params.mu
        quad = np.vdot(psi, self.stiffness @ psi).real
        nl = np.sum(self.weights * np.abs(psi) ** (2.0 * mu + 2.0))
        return float(0.5 * quad - nl / (2.0 * mu + 2.0))

    # -- stepping ------------------------------------------------------
    def _nonlinear_factor(self, rho0: np.ndarray, rho1: np.ndarray) -> np.ndarray:
        """Divided difference of G(rho) = rho^(mu+1)/(mu+1) between levels."""
        mu = self.params.mu
        mid = 0.5 * (rho0 + rho1)
        diff = rho1 - rho0
        near = np.abs(diff) <= 1e-8 * np.maximum(mid, 1e-300)
        safe = np.where(near, 1.0, diff)
        dd = (rho1 ** (mu + 1.0) - rho0 ** (mu + 1.0)) / ((mu + 1.0) * safe)
        return np.where(near, mid**mu, dd)

    def step(self, psi: np.ndarray) -> np.ndarray:
        rhs_lin = self._rhs_op @ psi
        rho0 = np.abs(psi) ** 2
        new = psi
        prev_delta = math.inf
        for _ in range(self.cfg.max_fp_iter):
            mid = 0.5 * (psi + new)
            f = self._nonlinear_factor(rho0, np.abs(new) ** 2)
            cand = self._solver.solve(rhs_lin - self.weights * f * mid)
            delta = float(np.max(np.abs(cand - new)))
            new = cand
            scale = max(1.0, float(np.max(np.abs(new))))
            if delta <= self.cfg.fp_tol * scale:
                break
            # linear-solve roundoff floor: stalled but already far below any
            # accuracy that matters for the conservation checks
            if delta >= 0.5 * prev_delta and delta <= 100.0 * self.cfg.fp_tol * scale:
                break
            prev_delta = delta
        else:
            raise NumericsError("fixed-point iteration did not converge in a step")
        amp = float(np.max(np.abs(new)))
        if amp > BLOWUP_AMPLITUDE:
            raise NumericsError(f"blow-up detected: amplitude {amp:.3e}")
        if self.cfg.boundary_tol is not None:
            edge_tail = np.abs(
                new[self.n_interior :: self.n_interior][: self.params.N]
            )
            if float(np.max(edge_tail)) > self.cfg.boundary_tol:
                raise NumericsError(
                    "radiation reached the truncation boundary; enlarge L"
                )
        return new


def evolve(F0: GraphField, cfg: PropagatorConfig, record_stride: int = 10):
    """Generate (t, GraphField) snapshots of the flow started from F0.

    Snapshots are yielded at t = 0, every record_stride steps, and at the
    final time.
    """
    prop = VertexPropagator(F0.params, cfg)
    psi = prop.pack(F0)
    yield 0.0, prop.unpack(psi)
    for step in range(1, cfg.n_steps + 1):
        psi = prop.step(psi)
        if step % record_stride == 0 or step == cfg.n_steps:
            yield step * cfg.dt, prop.unpack(psi)


def orbital_distance(F: GraphField, ref: GraphField) -> float:
    """H^1 distance of F to the phase orbit of the reference field."""
    cross = h1_inner(ref, F)
    sq = h1_norm(F) ** 2 + h1_norm(ref) ** 2 - 2.0 * abs(cross)
    return math.sqrt(max(sq, 0.0))


def phase_aligned(F: GraphField, ref: GraphField) -> GraphField:
    """Rotate F by the H^1-optimal phase onto the reference field."""
    theta = cmath.phase(h1_inner(ref, F))
    return F.with_edges(F.edges * cmath.exp(-1j * theta))


def random_bump_field(
    rng: np.random.Generator,
    params: ModelParams,
    grid: Grid,
    n_bumps: int = 3,
    center_range: tuple[float, float] = (1.0, 6.0),
    width_range: tuple[float, float] = (0.5, 2.0),
) -> GraphField:
    """Smooth random perturbation: per-edge Gaussian bumps, vertex-continuous.

    The far end is damped to keep the Dirichlet truncation exact.
    """
    x = grid.x
    edges = np.zeros((params.N, grid.n_points), dtype=complex)
    for e in range(params.N):
        for _ in range(n_bumps):
            c = rng.uniform(*center_range)
            s = rng.uniform(*width_range)
            edges[e] += rng.standard_normal() * np.exp(-((x - c) ** 2) / (2.0 * s**2))
    # continuity correction: pull every edge to the mean vertex value
    v = np.mean(edges[:, 0])
    corr = np.exp(-0.5 * x**2)
    for e in range(params.N):
        edges[e] += (v - edges[e, 0]) * corr
    edges[:, 0] = v
    # exact truncation at x = L
    taper = 1.0 - np.exp(-((x - grid.L) ** 2) / 2.0)
    edges *= taper
    edges[:, -1] = 0.0
    return GraphField(edges=edges, grid=grid, params=params)


def perturbed_state(
    M: float,
    eps: float,
    params: ModelParams,
    grid: Grid,
    seed: int,
) -> tuple[GraphField, GraphField]:
    """Reference symmetric state of mass M and a mass-M perturbed copy.

    The perturbation is a reproducible random bump field of relative H^1
    size eps; the perturbed field is rescaled back to mass M.
    """
    from .fields import graph_mass
    from .manifold import omega_of_mass, symmetric_field

    ref = symmetric_field(omega_of_mass(M, params), params, grid)
    if eps == 0.0:
        return ref, ref.with_edges(ref.edges.copy())
    rng = np.random.default_rng(seed)
    bump = random_bump_field(rng, params, grid)
    scale = eps * h1_norm(ref) / h1_norm(bump)
    edges = ref.edges + scale * bump.edges
    F0 = GraphField(edges=edges, grid=grid, params=params)
    F0 = F0.with_edges(F0.edges * math.sqrt(M / graph_mass(F0)))
    return ref, F0


def stability_run(
    M: float,
    perturbation_size: float,
    cfg: PropagatorConfig,
    params: ModelParams,
    seed: int = 0,
    record_stride: int = 10,
    pass_factor: float = 5.0,
) -> StabilityTrace:
    """Evolve a perturbed symmetric state and track the orbital distance.

    PASS means the orbital distance never exceeded pass_factor times its
    initial value over the whole horizon.  The factor is an engineering
    choice: the stability theorem is qualitative and supplies no
    constant.
    """
    if perturbation_size < 0:
        raise DomainError("perturbation size must be >= 0")
    ref, F0 = perturbed_state(M, perturbation_size, params, cfg.grid, seed)

    prop = VertexPropagator(params, cfg)
    psi = prop.pack(F0)
    mass0 = prop.discrete_mass(psi)
    energy0 = prop.discrete_energy(psi)
    d0 = orbital_distance(F0, ref)

    times = [0.0]
    dists = [d0]
    mass_drift = [0.0]
    energy_drift = [0.0]
    for step in range(1, cfg.n_steps + 1):
        psi = prop.step(psi)
        if step % record_stride == 0 or step == cfg.n_steps:
            times.append(step * cfg.dt)
            dists.append(orbital_distance(prop.unpack(psi), ref))
            mass_drift.append(prop.discrete_mass(psi) / mass0 - 1.0)
            energy_drift.append(
                (prop.discrete_energy(psi) - energy0) / max(abs(energy0), 1e-300)
            )

    dists_arr = np.array(dists)
    passed = bool(np.max(dists_arr) <= pass_factor * d0) if d0 > 0 else None
    return StabilityTrace(
        times=np.array(times),
        orbital_distance=dists_arr,
        mass_drift=np.array(mass_drift),
        energy_drift=np.array(energy_drift),
        passed=passed,
        meta={
            "M": M,
            "eps": perturbation_size,
            "seed": seed,
            "initial_distance": d0,
            "max_distance": float(np.max(dists_arr)),
            "pass_factor": pass_factor,
        },
    )


def local_min_probe(
    M: float,
    radius: float,
    samples: int,
    params: ModelParams,
    grid: Grid | None = None,
    seed: int = 0,
) -> dict:
    """Sample mass-projected perturbations and report the energy gaps.

    Both energies use the same finite-difference quadrature, so the
    discretization bias cancels in the gap.  Gaps are paired with the
    orbital distance of each sample.
    """
    from .fields import graph_energy, graph_mass
    from .manifold import omega_of_mass, symmetric_field

    if radius > 1e-1:
        raise DomainError("probe radius must stay local (<= 1e-1)")
    grid = grid or Grid(L=40.0, dx=0.01)
    ref = symmetric_field(omega_of_mass(M, params), params, grid)
    ref_fd = ref.with_edges(ref.edges)  # drops exact derivatives
    e_ref = graph_energy(ref_fd).total
    ref_h1 = h1_norm(ref_fd)

    rng = np.random.default_rng(seed)
    gaps = np.empty(samples)
    dists = np.empty(samples)
    for k in range(samples):
        bump = random_bump_field(rng, params, grid)
        size = radius * rng.uniform(0.01, 1.0)
        edges = ref.edges + size * ref_h1 / h1_norm(bump) * bump.edges
        F = GraphField(edges=edges, grid=grid, params=params)
        F = F.with_edges(F.edges * math.sqrt(M / graph_mass(F)))
        gaps[k] = graph_energy(F).total - e_ref
        dists[k] = orbital_distance(F, ref_fd)
    far = dists > 1e-3
    return {
        "M": M,
        "radius": radius,
        "samples": samples,
        "seed": seed,
        "min_gap": float(np.min(gaps)),
        "min_gap_beyond_1e-3": float(np.min(gaps[far])) if np.any(far) else None,
        "gaps": gaps,
        "distances": dists,
    }


def mass_transfer_gap(
    M: float, t_values: np.ndarray, params: ModelParams
) -> tuple[np.ndarray, np.ndarray]:
    """Energy and folded-L^2 gaps along the mass-transfer curve.

    The curve moves mass t from the last edge to the first at a fixed
    vertex value; both gaps vanish quadratically at t = 0 with strictly
    positive curvature.
    """
    from scipy.integrate import quad

    from .manifold import reduced_energy, tilde_point
    from .params import HalfLineConstraint, ManifoldPoint
    from .soliton import solve_constraint, soliton_value

    t_values = np.asarray(t_values, dtype=float)
    if np.any(np.abs(t_values) >= M / params.N):
        raise DomainError("mass transfer exceeds the per-edge mass M/N")

    tp = tilde_point(M, params)
    e0 = reduced_energy(tp, params)
    sp0 = solve_constraint(HalfLineConstraint(m=M / params.N, a=tp.a), params.mu)

    def l2_branch(m: float) -> float:
        sp = solve_constraint(HalfLineConstraint(m=m, a=tp.a), params.mu)

        def integrand(x):
            return (
                soliton_value(sp, params.mu, x) - soliton_value(sp0, params.mu, x)
            ) ** 2

        val, _ = quad(integrand, 0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
        return val

    energy_gaps = np.empty_like(t_values)
    l2_gaps = np.empty_like(t_values)
    for k, t in enumerate(t_values):
        if t == 0.0:
            energy_gaps[k] = 0.0
            l2_gaps[k] = 0.0
            continue
        m = np.full(params.N - 1, M / params.N)
        m[0] += t
        P = ManifoldPoint(m=m, a=tp.a, M=M)
        energy_gaps[k] = reduced_energy(P, params) - e0
        l2_gaps[k] = l2_branch(M / params.N + t) + l2_branch(M / params.N - t)
    return energy_gaps, l2_gaps
