"""
Blow-up thresholds, lifespan predictions and detection of blow-up in runs.

The model is ``D_dS psi = G(psi) psi`` with ``G = c0 |psi|^alpha`` (the
equality case of ``Re(G z, conj z) >= c0 |z|^(2+alpha)``). For data supported in
``|x| <= R`` the energy ``E = int |psi|^2`` satisfies

    E' >= K(t) E^(1 + alpha/2) - A E,   K(t) = c0 (R + phi(t))^(-3 alpha/2),
    A = 3H + 2|Im m|,

which integrates to the lifespan bounds below.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DomainError
from .geometry import phi
from .special import gauss_2f1


@dataclass(frozen=True)
class BlowupParams:
    """Inputs of the lifespan formulas.

    ``c`` is the constant of the contracting-case coercivity condition and
    defaults to ``c0``.
    """

    H: float
    m: complex
    c0: float
    alpha: float
    R: float
    E0: float
    c: float = None

    def __post_init__(self):
        if not self.c0 > 0:
            raise DomainError("c0 must be > 0")
        if not self.alpha > 0:
            raise DomainError("alpha must be > 0")
        if not self.R > 0:
            raise DomainError("R must be > 0")
        if self.E0 < 0:
            raise DomainError("E0 must be >= 0")
        object.__setattr__(self, "m", complex(self.m))
        if self.c is None:
            object.__setattr__(self, "c", float(self.c0))

    @property
    def A(self):
        return 3 * self.H + 2 * abs(self.m.imag)


def threshold_energy(p):
    """``((3H + 2|Im m|)/c0)^(2/alpha) (R + 1/H)^3`` for ``H > 0``."""
    if p.H <= 0:
        raise DomainError("threshold_energy needs H > 0; use the contracting branch")
    return (p.A / p.c0) ** (2 / p.alpha) * (p.R + 1 / p.H) ** 3


def predict_T_expanding(p):
    """Lifespan bound for ``H > 0``; ``None`` when ``E0`` does not exceed the threshold."""
    if p.H <= 0:
        raise DomainError("predict_T_expanding needs H > 0")
    if p.E0 <= threshold_energy(p):
        return None
    arg = 1 - (p.A / p.c0) * p.E0 ** (-p.alpha / 2) * (p.R + 1 / p.H) ** (1.5 * p.alpha)
    return float(-2 / (p.alpha * p.A) * np.log(arg))


def cone_integral_quad(t, R, H, alpha):
    """``int_0^t (R + phi(s))^(-3 alpha/2) ds`` by adaptive quadrature."""
    val, _ = quad(lambda s: (R + float(phi(s, H))) ** (-1.5 * alpha), 0.0, t,
                  epsabs=0.0, epsrel=1e-13, limit=500)
    return float(val)


def cone_integral_limit(R, H, alpha):
    """``t -> infinity`` limit for ``H < 0``: ``(2/(3 alpha)) R^(1-3 alpha/2) F(1,1;1+3 alpha/2;HR+1)``."""
    if H >= 0:
        raise DomainError("the finite limit exists for H < 0 only")
    p = 1.5 * alpha
    return float(np.real((2 / (3 * alpha)) * R ** (1 - p) * gauss_2f1(1, 1, p + 1, H * R + 1)))


def cone_integral(t, R, H, alpha, method="auto"):
    """``int_0^t (R + phi(s))^(-3 alpha/2) ds``.

    ``H < 0`` uses the hypergeometric closed form, ``H = 0`` the power rule
    and ``H > 0`` adaptive quadrature (``method="quad"`` forces quadrature).
    """
    if t < 0:
        raise DomainError("t must be >= 0")
    if t == 0:
        return 0.0
    p = 1.5 * alpha
    if method == "quad" or (method == "auto" and H > 0):
        return cone_integral_quad(t, R, H, alpha)
    if H == 0:
        if p == 1:
            return float(np.log1p(t / R))
        return float(((R + t) ** (1 - p) - R ** (1 - p)) / (1 - p))
    if H * R + 1 >= 1:
        raise DomainError("closed form requires H R + 1 < 1 (H < 0)")
    aH = abs(H)
    eHt = np.exp(H * t)
    first = R ** (1 - p) * gauss_2f1(1, 1, p + 1, H * R + 1)
    second = (aH ** (p - 1) * ((H * R + 1) * eHt - 1) * (aH * R + np.exp(-H * t) - 1) ** (-p)
              * gauss_2f1(1, 1, p + 1, eHt * (H * R + 1)))
    return float(np.real((2 / (3 * alpha)) * (first + second)))


def contracting_gate(p):
    """Right side ``(c alpha/2) * cone_integral(infinity)`` of the large-data gate."""
    return 0.5 * p.c * p.alpha * cone_integral_limit(p.R, p.H, p.alpha)


def predict_T_contracting(p, rtol=1e-10):
    """Lifespan ``T_ls`` for ``H < 0``: root of ``(c alpha/2) I(T) = E0^(-alpha/2)``.

    Returns ``None`` when the data do not pass the large-data gate.
    """
    if p.H >= 0:
        raise DomainError("predict_T_contracting needs H < 0")
    if p.E0 == 0:
        return None
    target = p.E0 ** (-p.alpha / 2)
    if not target < contracting_gate(p):
        return None

    def g(t):
        return 0.5 * p.c * p.alpha * cone_integral(t, p.R, p.H, p.alpha) - target

    lo, hi = 0.0, 1.0
    while g(hi) < 0:
        lo, hi = hi, 2 * hi
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if g(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def coercivity_constant(H, m, c0, alpha, samples=2000, seed=0):
    """Sampled lower bound of ``(2 Re(G z, conj z) - 3H|z|^2 + 2 Im(m)(z, g0 conj z)) / |z|^(2+alpha)``.

    For ``G = c0 |z|^alpha`` and ``|z|`` drawn log-uniformly in [1e-2, 1e2].
    """
    rng = np.random.default_rng(seed)
    z = rng.normal(size=(samples, 4)) + 1j * rng.normal(size=(samples, 4))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    z *= 10 ** rng.uniform(-2, 2, size=(samples, 1))
    n2 = np.sum(np.abs(z) ** 2, axis=1)
    xi = np.sum(np.abs(z[:, :2]) ** 2, axis=1) - np.sum(np.abs(z[:, 2:]) ** 2, axis=1)
    lhs = 2 * c0 * n2 ** (1 + alpha / 2) - 3 * H * n2 + 2 * complex(m).imag * xi
    return float(np.min(lhs / n2 ** (1 + alpha / 2)))


def bernoulli_blowup_time(E0, k, A, alpha):
    """Blow-up time of ``E' = k E^(1+alpha/2) - A E``; ``inf`` if the solution stays finite."""
    u0 = E0 ** (-alpha / 2)
    if A == 0:
        return 2 * u0 / (alpha * k)
    arg = 1 - A * u0 / k
    if arg <= 0:
        return np.inf
    return float(-2 / (alpha * A) * np.log(arg))


def bernoulli_energy(t, E0, k, A, alpha):
    """Exact solution of the Bernoulli ODE above."""
    u0 = E0 ** (-alpha / 2)
    t = np.asarray(t, dtype=float)
    if A == 0:
        u = u0 - 0.5 * alpha * k * t
    else:
        u = k / A + (u0 - k / A) * np.exp(0.5 * alpha * A * t)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(u > 0, u ** (-2 / alpha), np.inf)


def uniform_surrogate_rate(c0, alpha, volume):
    """``k = 2 c0 volume^(-alpha/2)`` for spatially uniform data in a box of given volume."""
    return 2 * c0 * volume ** (-alpha / 2)


def energy_lower_bound(t, p):
    """Lower bound ``E(t) >= e^{-At} [E0^(-alpha/2) - (alpha/2) c0 J(t)]^(-2/alpha)``.

    ``J(t) = int_0^t (R + phi(s))^(-3 alpha/2) e^{-A alpha s/2} ds``; ``inf``
    once the bracket is no longer positive.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    for i, ti in enumerate(t):
        J, _ = quad(lambda s: (p.R + float(phi(s, p.H))) ** (-1.5 * p.alpha)
                    * np.exp(-0.5 * p.A * p.alpha * s), 0.0, ti, epsrel=1e-12)
        br = p.E0 ** (-p.alpha / 2) - 0.5 * p.alpha * p.c0 * J
        out[i] = np.exp(-p.A * ti) * br ** (-2 / p.alpha) if br > 0 else np.inf
    return out


def detect_blowup(traj_or_records, alpha, outcome=None, p=None):
    """Blow-up time estimate from a trajectory, or ``None`` when none occurred.

    The last two finite energy samples are used to extrapolate
    ``u = E^(-alpha/2)`` linearly to zero. With lifespan parameters ``p``
    the extrapolation is linear in ``J(t) = int_0^t (R + phi(s))^(-3 alpha/2) ds``,
    the variable in which the energy inequality integrates exactly, and
    the zero is mapped back to a time; otherwise it is linear in ``t``.
    """
    if hasattr(traj_or_records, "records"):
        outcome = traj_or_records.outcome
        records = traj_or_records.records
    else:
        records = traj_or_records
    if outcome != "blowup":
        return None
    pts = [(r["t"], r["E"]) for r in records if np.isfinite(r["E"]) and r["E"] > 0]
    if len(pts) < 2:
        return float(pts[-1][0]) if pts else None
    (t1, E1), (t2, E2) = pts[-2], pts[-1]
    u1, u2 = E1 ** (-alpha / 2), E2 ** (-alpha / 2)
    if u1 <= u2 or t2 <= t1:
        return float(t2)
    if p is None:
        return float(t2 + u2 * (t2 - t1) / (u1 - u2))
    J1 = cone_integral(t1, p.R, p.H, alpha, method="quad")
    J2 = cone_integral(t2, p.R, p.H, alpha, method="quad")
    target = J2 + u2 * (J2 - J1) / (u1 - u2)
    hi = t2 + (t2 - t1)
    while cone_integral(hi, p.R, p.H, alpha, method="quad") < target:
        if hi > t2 + 1e3 * (t2 - t1):
            return float(t2 + u2 * (t2 - t1) / (u1 - u2))
        hi = t2 + 2 * (hi - t2)
    return float(brentq(lambda s: cone_integral(s, p.R, p.H, alpha, method="quad") - target,
                        t2, hi, xtol=1e-14, rtol=1e-12))


def check_inequality_chain(records, p, tol=0.05, corrected=False):
    """Check ``E' >= K(t) E^(1+alpha/2) - A E`` between samples.

    ``E'`` is the centred difference of the sampled energies, compared with
    the right side at the midpoint. ``corrected=True`` uses the constant
    ``2 c0 ((4 pi/3)(R + phi)^3)^(-alpha/2)`` that follows from Hoelder's
    inequality on the actual ball volume.
    Returns ``(passed, worst_relative_shortfall)``.
    """
    t = np.array([r["t"] for r in records], dtype=float)
    E = np.array([r["E"] for r in records], dtype=float)
    ok = np.isfinite(E)
    t, E = t[ok], E[ok]
    worst = -np.inf
    for i in range(len(t) - 1):
        dt = t[i + 1] - t[i]
        dE = (E[i + 1] - E[i]) / dt
        tm = 0.5 * (t[i] + t[i + 1])
        Em = np.sqrt(E[i] * E[i + 1])
        rad = p.R + float(phi(tm, p.H))
        if corrected:
            K = 2 * p.c0 * ((4 * np.pi / 3) * rad**3) ** (-p.alpha / 2)
        else:
            K = p.c0 * rad ** (-1.5 * p.alpha)
        rhs = K * Em ** (1 + p.alpha / 2) - p.A * Em
        short = (rhs - dE) / max(abs(rhs), abs(dE), 1e-300)
        worst = max(worst, short)
    return bool(worst <= tol), float(worst)
