"""
Numerical laboratory for semilinear Dirac equations in de Sitter space.

The modules build on each other:

* :mod:`spinor` -- Dirac matrices, bilinears and the Majorana constraint,
* :mod:`geometry` -- distance function ``phi`` and light cones,
* :mod:`special` -- Gauss hypergeometric function and the kernels ``E``, ``K1``,
* :mod:`kernels` -- spherical means and the explicit free solution,
* :mod:`nonlinearity` -- the nonlinear terms,
* :mod:`evolution` -- finite-difference method-of-lines solver,
* :mod:`diagnostics` -- energy, gamma^2 and chirality laws along runs,
* :mod:`blowup` -- lifespan predictions and blow-up detection,
* :mod:`scattering` -- scattering data,
* :mod:`scenario`, :mod:`cli` -- scenario files and the command line.
"""

from .errors import (ConfigError, ConvergenceError, DesitterDiracError, DomainError,
                     NumericalError, PreconditionError, TailBoundError,
                     UnsupportedConfiguration)
from .evolution import Grid3, SpinorField, Trajectory, evolve
from .params import PhysicalParams, Potential
from .nonlinearity import NonlinSpec
from .special import KernelSpec, gauss_2f1, kernel_E, kernel_K1

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConvergenceError", "DesitterDiracError", "DomainError", "NumericalError",
    "PreconditionError", "TailBoundError", "UnsupportedConfiguration", "Grid3", "SpinorField",
    "Trajectory", "evolve", "PhysicalParams", "Potential", "NonlinSpec", "KernelSpec",
    "gauss_2f1", "kernel_E", "kernel_K1",
]
