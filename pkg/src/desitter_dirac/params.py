"""
Physical parameters of a run: Hubble rate, complex mass, matrix potential
and nonlinearity.

A potential is a finite sum ``V(x, t) = sum_j c_j(x, t) M_j`` of real scalar
profiles times constant 4x4 matrices. The channel names map to matrices:

===========  ==================  ==================================
channel      matrix              compatible with ``V^T g2 + g2 V = 0``
===========  ==================  ==================================
``scalar``   ``I4``              no
``alpha1-3`` ``alpha^l``         no
``gamma0``   ``gamma^0``         yes
``gamma5``   ``gamma^5``         yes
``g0g5``     ``i gamma^0 gamma^5``  yes
===========  ==================  ==================================

All channel matrices are Hermitian, so real profiles give a self-adjoint
potential.
"""

from dataclasses import dataclass, field

import numpy as np

from . import spinor as sa
from .errors import ConfigError, PreconditionError

CHANNELS = {
    "scalar": sa.I4,
    "alpha1": sa.ALPHA1,
    "alpha2": sa.ALPHA2,
    "alpha3": sa.ALPHA3,
    "gamma0": sa.GAMMA0,
    "gamma5": sa.GAMMA5,
    "g0g5": 1j * sa.GAMMA0 @ sa.GAMMA5,
}

POTENTIAL_CHECK_TOL = 1e-12


def _profile(spec):
    """Real scalar profile ``(x, t) -> c`` from a small dict description."""
    kind = spec.get("profile", "constant")
    amp = float(spec.get("amplitude", 0.0))
    if kind == "constant":
        return lambda X, t: amp * np.ones(X.shape[1:])
    if kind == "gaussian":
        width = float(spec.get("width", 1.0))
        center = np.asarray(spec.get("center", (0.0, 0.0, 0.0)), dtype=float)
        omega = float(spec.get("omega", 0.0))

        def prof(X, t):
            r2 = sum((X[k] - center[k]) ** 2 for k in range(3))
            return amp * np.cos(omega * t) * np.exp(-r2 / (2 * width**2))

        return prof
    raise ConfigError(f"unknown potential profile {kind!r}")


@dataclass
class Potential:
    """Matrix potential ``sum_j c_j(x, t) M_j``.

    Parameters
    ----------
    terms : list of (str, dict)
        Channel name and profile description (``profile`` is ``constant`` or
        ``gaussian`` with ``amplitude``, ``width``, ``center``, ``omega``).
    self_adjoint, gamma2_condition : bool
        Declared properties, verified on sample points by :meth:`check`.
    """

    terms: list = field(default_factory=list)
    self_adjoint: bool = True
    gamma2_condition: bool = False

    def __post_init__(self):
        self._compiled = []
        for name, spec in self.terms:
            if name not in CHANNELS:
                raise ConfigError(f"unknown potential channel {name!r}")
            self._compiled.append((CHANNELS[name], _profile(dict(spec))))

    @classmethod
    def from_dict(cls, d):
        if d is None:
            return None
        terms = [(t["channel"], t) for t in d.get("terms", [])]
        return cls(terms, bool(d.get("self_adjoint", True)),
                   bool(d.get("gamma2_condition", False)))

    @property
    def is_zero(self):
        return len(self._compiled) == 0

    def apply(self, X, t, psi):
        """``V(x, t) psi`` on a gridded field ``psi`` of shape ``(4, ...)``."""
        out = np.zeros_like(psi)
        for mat, prof in self._compiled:
            out += prof(X, t) * sa.apply(mat, psi)
        return out

    def matrix_at(self, x, t):
        """Dense 4x4 matrix ``V(x, t)`` at a single point."""
        X = np.asarray(x, dtype=float).reshape(3, 1)
        V = np.zeros((4, 4), dtype=complex)
        for mat, prof in self._compiled:
            V += float(prof(X, t)[0]) * mat
        return V

    def max_norm(self, X, t):
        """Upper bound for the operator norm of ``V`` over the grid ``X``."""
        total = 0.0
        for mat, prof in self._compiled:
            total += float(np.max(np.abs(prof(X, t)))) * np.linalg.norm(mat, 2)
        return total

    def check(self, points, times):
        """Verify the declared flags on sample points; returns residuals."""
        sa_res = 0.0
        g2_res = 0.0
        for x in points:
            for t in times:
                V = self.matrix_at(x, t)
                sa_res = max(sa_res, float(np.max(np.abs(V - V.conj().T))))
                g2_res = max(g2_res, float(np.max(np.abs(V.T @ sa.GAMMA2 + sa.GAMMA2 @ V))))
        if self.self_adjoint and sa_res > POTENTIAL_CHECK_TOL:
            raise PreconditionError(f"potential declared self-adjoint but residual {sa_res:.3g}")
        if self.gamma2_condition and g2_res > POTENTIAL_CHECK_TOL:
            raise PreconditionError(f"potential violates V^T g2 + g2 V = 0 (residual {g2_res:.3g})")
        return {"self_adjoint": sa_res, "gamma2_condition": g2_res}


@dataclass
class PhysicalParams:
    """Hubble rate ``H``, complex mass ``m``, optional potential and nonlinearity."""

    H: float
    m: complex = 0.0
    potential: Potential = None
    nonlin: object = None

    def __post_init__(self):
        self.H = float(self.H)
        self.m = complex(self.m)

    @property
    def is_linear(self):
        return self.nonlin is None

    @property
    def has_potential(self):
        return self.potential is not None and not self.potential.is_zero

    @property
    def delta_plus(self):
        """``-3H + 2|Im m|``: upper energy growth exponent."""
        return -3 * self.H + 2 * abs(self.m.imag)

    @property
    def delta_minus(self):
        """``-3H - 2|Im m|``: lower energy growth exponent."""
        return -3 * self.H - 2 * abs(self.m.imag)

    def linear(self):
        """Same parameters with the nonlinearity removed."""
        return PhysicalParams(self.H, self.m, self.potential, None)
