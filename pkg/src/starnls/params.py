"""Model and state parameter containers.

All containers are frozen dataclasses validated at construction, so a
value that made it into one of them can be trusted downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class ModelParams:
    """Star-graph model: edge count N, vertex strength alpha, nonlinearity mu.

    The nonlinear power is 2*mu + 1; mu must stay in (0, 2) for global
    well-posedness of the flow.
    """

    N: int
    alpha: float
    mu: float

    def __post_init__(self):
        if self.N < 2:
            raise DomainError(f"edge count N must be >= 2, got {self.N}")
        if not self.alpha > 0:
            raise DomainError(f"vertex strength alpha must be > 0, got {self.alpha}")
        if not 0 < self.mu < 2:
            raise DomainError(f"nonlinearity mu must lie in (0, 2), got {self.mu}")

    @property
    def omega_threshold(self) -> float:
        """Lowest admissible frequency alpha^2 / N^2 for the symmetric state."""
        return (self.alpha / self.N) ** 2


@dataclass(frozen=True)
class SolitonParams:
    """Frequency and shift of one half-line soliton piece."""

    omega: float
    xi: float

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"soliton frequency must be > 0, got {self.omega}")


@dataclass(frozen=True)
class HalfLineConstraint:
    """Half-line mass and vertex value pinning a unique soliton piece."""

    m: float
    a: float

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError(f"half-line mass must be > 0, got {self.m}")
        if not self.a > 0:
            raise DomainError(f"vertex value must be > 0, got {self.a}")


@dataclass(frozen=True)
class ManifoldPoint:
    """Coordinates (m_1 ... m_{N-1}, a) on the multi-soliton manifold of mass M."""

    m: np.ndarray
    a: float
    M: float

    def __post_init__(self):
        object.__setattr__(self, "m", np.asarray(self.m, dtype=float))
        if not self.M > 0:
            raise DomainError(f"total mass must be > 0, got {self.M}")
        if not self.a > 0:
            raise DomainError(f"vertex value must be > 0, got {self.a}")
        if np.any(self.m <= 0):
            raise DomainError("all edge masses must be > 0")
        if self.last_mass <= 0:
            raise DomainError(
                f"remaining mass on the last edge must be > 0, got {self.last_mass}"
            )

    @property
    def last_mass(self) -> float:
        return self.M - float(np.sum(self.m))

    @property
    def n_edges(self) -> int:
        return len(self.m) + 1

    def edge_masses(self) -> np.ndarray:
        """All N per-edge masses, the last one implied by the total."""
        return np.append(self.m, self.last_mass)

    def coords(self) -> np.ndarray:
        """Free coordinates (m_1 ... m_{N-1}, a) as a flat vector."""
        return np.append(self.m, self.a)

    @classmethod
    def from_coords(cls, x: np.ndarray, M: float) -> "ManifoldPoint":
        x = np.asarray(x, dtype=float)
        return cls(m=x[:-1], a=float(x[-1]), M=M)


@dataclass(frozen=True)
class SymmetricStateParams:
    """The edge-exchange-symmetric stationary state at a given frequency."""

    omega: float
    zeta: float
    a: float
    mass: float
