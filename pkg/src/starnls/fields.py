"""Sampled fields on the star graph and on the line, with their functionals.

A GraphField holds N complex edge profiles on a shared uniform grid
[0, L], continuous at the vertex and truncated to zero at x = L.  When a
field comes from a closed form, exact derivative samples ride along so
energy quadrature is not limited by finite-difference error.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import simpson

from .errors import DomainError
from .params import ModelParams


@dataclass(frozen=True)
class Grid:
    """Uniform grid on a truncated edge [0, L] with spacing dx."""

    L: float
    dx: float

    def __post_init__(self):
        if not (self.L > 0 and self.dx > 0 and self.dx < self.L):
            raise DomainError(f"invalid grid L={self.L}, dx={self.dx}")

    @property
    def n_points(self) -> int:
        return round(self.L / self.dx) + 1

    @property
    def x(self) -> np.ndarray:
        return np.linspace(0.0, self.L, self.n_points)


@dataclass(frozen=True)
class EnergyReport:
    """Mass, energy terms and total energy of a field.

    Sign convention: total = kinetic - nonlinear - vertex.
    """

    mass: float
    kinetic: float
    nonlinear: float
    vertex: float

    @property
    def total(self) -> float:
        return self.kinetic - self.nonlinear - self.vertex


@dataclass(frozen=True)
class GraphField:
    """N sampled complex edge profiles sharing the vertex value."""

    edges: np.ndarray  # shape (N, n_points), complex
    grid: Grid
    params: ModelParams
    edge_derivatives: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=complex)
        object.__setattr__(self, "edges", edges)
        if edges.ndim != 2 or edges.shape[0] != self.params.N:
            raise DomainError(
                f"expected {self.params.N} edges, got array of shape {edges.shape}"
            )
        if edges.shape[1] != self.grid.n_points:
            raise DomainError("edge sample count does not match the grid")
        v = edges[0, 0]
        if not np.allclose(edges[:, 0], v, rtol=0.0, atol=1e-12 * max(1.0, abs(v))):
            raise DomainError("edges disagree at the vertex")

    @property
    def vertex_value(self) -> complex:
        return complex(self.edges[0, 0])

    def derivatives(self) -> np.ndarray:
        """Exact derivative samples when available, else centered differences."""
        if self.edge_derivatives is not None:
            return self.edge_derivatives
        return np.gradient(self.edges, self.grid.dx, axis=1, edge_order=2)

    def with_edges(self, edges: np.ndarray) -> "GraphField":
        return GraphField(edges=edges, grid=self.grid, params=self.params)


@dataclass(frozen=True)
class LineField:
    """Complex samples on the symmetric grid [-L, L].

    Folded fields have a derivative kink at x = 0, so exact derivative
    samples, when present, come as one array per half-line (each
    including its own one-sided value at the origin).
    """

    samples: np.ndarray
    dx: float
    deriv_right: np.ndarray | None = field(default=None, compare=False)
    deriv_left: np.ndarray | None = field(default=None, compare=False)

    @property
    def center(self) -> int:
        return (len(self.samples) - 1) // 2

    @property
    def x(self) -> np.ndarray:
        return self.dx * (np.arange(len(self.samples)) - self.center)

    @property
    def value_at_zero(self) -> complex:
        return complex(self.samples[self.center])

    def half_derivatives(self) -> tuple[np.ndarray, np.ndarray]:
        """(right-half, left-half) derivative samples, finite-difference fallback."""
        if self.deriv_right is not None and self.deriv_left is not None:
            return self.deriv_right, self.deriv_left
        c = self.center
        right = np.gradient(self.samples[c:], self.dx, edge_order=2)
        left = np.gradient(self.samples[: c + 1], self.dx, edge_order=2)
        return right, left


def graph_mass(F: GraphField) -> float:
    """Squared L^2 norm over all edges (Simpson quadrature)."""
    dens = np.abs(F.edges) ** 2
    return float(sum(simpson(row, dx=F.grid.dx) for row in dens))


def graph_energy(F: GraphField) -> EnergyReport:
    """Energy report for the NLS functional with the delta vertex term."""
    dx = F.grid.dx
    mu, alpha = F.params.mu, F.params.alpha
    derivs = F.derivatives()
    kinetic = 0.5 * sum(simpson(np.abs(row) ** 2, dx=dx) for row in derivs)
    nonlinear = sum(
        simpson(np.abs(row) ** (2.0 * mu + 2.0), dx=dx) for row in F.edges
    ) / (2.0 * mu + 2.0)
    vertex = 0.5 * alpha * abs(F.vertex_value) ** 2
    return EnergyReport(
        mass=graph_mass(F),
        kinetic=float(kinetic),
        nonlinear=float(nonlinear),
        vertex=float(vertex),
    )


def h1_inner(F: GraphField, G: GraphField) -> complex:
    """H^1 inner product sum_j int (conj(f) g + conj(f') g')."""
    if F.grid != G.grid:
        raise DomainError("fields live on different grids")
    df, dg = F.derivatives(), G.derivatives()
    dens = np.conj(F.edges) * G.edges + np.conj(df) * dg
    return complex(sum(simpson(row, dx=F.grid.dx) for row in dens))


def h1_norm(F: GraphField) -> float:
    return float(np.sqrt(max(h1_inner(F, F).real, 0.0)))


def tau_fold(F: GraphField, i: int, j: int) -> LineField:
    """Glue edge i (x > 0) and mirrored edge j (x < 0) into one line field."""
    N = F.params.N
    if i == j or not (0 <= i < N and 0 <= j < N):
        raise DomainError(f"invalid edge pair ({i}, {j}) for N={N}")
    left = F.edges[j, :0:-1]
    samples = np.concatenate([left, F.edges[i]])
    deriv_right = deriv_left = None
    if F.edge_derivatives is not None:
        deriv_right = F.edge_derivatives[i]
        deriv_left = -F.edge_derivatives[j, ::-1]  # chain rule under x -> -x
    return LineField(
        samples=samples, dx=F.grid.dx, deriv_right=deriv_right, deriv_left=deriv_left
    )


def line_mass(u: LineField) -> float:
    return float(simpson(np.abs(u.samples) ** 2, dx=u.dx))


def line_energy_delta(u: LineField, strength: float, mu: float) -> float:
    """NLS energy on the line with a delta interaction of the given strength.

    The kinetic term is integrated half-line by half-line so a derivative
    kink at the origin does not pollute the quadrature.
    """
    dr, dl = u.half_derivatives()
    kinetic = 0.5 * (
        simpson(np.abs(dr) ** 2, dx=u.dx) + simpson(np.abs(dl) ** 2, dx=u.dx)
    )
    nonlinear = simpson(np.abs(u.samples) ** (2.0 * mu + 2.0), dx=u.dx) / (
        2.0 * mu + 2.0
    )
    vertex = 0.5 * strength * abs(u.value_at_zero) ** 2
    return float(kinetic - nonlinear - vertex)


def save_field(F: GraphField, path: str | Path) -> None:
    """Write a field as CSV (edge, x, re, im) under a JSON metadata header."""
    meta = {
        "N": F.params.N,
        "alpha": F.params.alpha,
        "mu": F.params.mu,
        "L": F.grid.L,
        "dx": F.grid.dx,
    }
    path = Path(path)
    with path.open("w", newline="") as fh:
        fh.write("# " + json.dumps(meta) + "\n")
        writer = csv.writer(fh)
        writer.writerow(["edge", "x", "re", "im"])
        x = F.grid.x
        for j in range(F.params.N):
            for k in range(F.grid.n_points):
                writer.writerow(
                    [
                        j,
                        repr(float(x[k])),
                        repr(float(F.edges[j, k].real)),
                        repr(float(F.edges[j, k].imag)),
                    ]
                )


def load_field(path: str | Path) -> GraphField:
    path = Path(path)
    with path.open() as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise DomainError(f"{path} is missing the JSON metadata header")
        meta = json.loads(header.lstrip("# "))
        reader = csv.DictReader(fh)
        params = ModelParams(N=int(meta["N"]), alpha=meta["alpha"], mu=meta["mu"])
        grid = Grid(L=meta["L"], dx=meta["dx"])
        edges = np.zeros((params.N, grid.n_points), dtype=complex)
        counts = np.zeros(params.N, dtype=int)
        for row in reader:
            j = int(row["edge"])
            edges[j, counts[j]] = float(row["re"]) + 1j * float(row["im"])
            counts[j] += 1
    if not np.all(counts == grid.n_points):
        raise DomainError(f"{path} has an inconsistent sample count")
    return GraphField(edges=edges, grid=grid, params=params)
