"""Standing waves and orbital stability of the NLS on a star graph.

Solitons on half-lines, the multi-soliton manifold, the energy-lowering
multi-soliton projection, reduced-energy Hessian analysis, and a
conservative Crank-Nicolson propagator with a delta vertex coupling.
"""

from .errors import DomainError, NumericsError
from .fields import EnergyReport, GraphField, Grid, LineField
from .params import (
    HalfLineConstraint,
    ManifoldPoint,
    ModelParams,
    SolitonParams,
    SymmetricStateParams,
)

__all__ = [
    "DomainError",
    "NumericsError",
    "EnergyReport",
    "GraphField",
    "Grid",
    "LineField",
    "HalfLineConstraint",
    "ManifoldPoint",
    "ModelParams",
    "SolitonParams",
    "SymmetricStateParams",
]

__version__ = "0.1.0"
