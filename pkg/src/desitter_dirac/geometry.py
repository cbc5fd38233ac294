"""
de Sitter background with scale factor ``a(t) = exp(H t)``: distance
function, light cones and the spacelike slices filling a backward cone.

Every formula has a removable singularity at ``H = 0``; below
``|H t| < SERIES_CUTOFF`` a Taylor series is used instead, so the
Minkowski limit is exact.
"""

from dataclasses import dataclass

import numpy as np

SERIES_CUTOFF = 1e-6


def phi(t, H):
    """Distance function ``(1 - exp(-H t)) / H`` (light travel distance since 0)."""
    t = np.asarray(t, dtype=float)
    x = H * t
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        exact = -np.expm1(-x) / H if H != 0 else t
    series = t * (1 - x / 2 + x * x / 6)
    out = np.where(np.abs(x) < SERIES_CUTOFF, series, exact)
    return out[()] if out.ndim == 0 else out


def phi_prime(t, H):
    """Characteristic speed ``exp(-H t)``."""
    return np.exp(-H * np.asarray(t, dtype=float))


def _log_time(u, H):
    # -(1/H) ln(1 - H u), the inverse of phi, with the H -> 0 series
    u = np.asarray(u, dtype=float)
    x = H * u
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = -np.log1p(-x) / H if H != 0 else u
    series = u * (1 + x / 2 + x * x / 3)
    out = np.where(np.abs(x) < SERIES_CUTOFF, series, exact)
    return out[()] if out.ndim == 0 else out


def phi_inverse(d, H):
    """Time at which ``phi`` reaches ``d``."""
    return _log_time(d, H)


@dataclass(frozen=True)
class ConeSpec:
    """Apex ``(apex_x, apex_t)`` of a curved light cone in a universe with rate ``H``."""

    apex_x: tuple
    apex_t: float
    H: float

    def __post_init__(self):
        if self.apex_t < 0:
            raise ValueError("apex_t must be >= 0")
        object.__setattr__(self, "apex_x", tuple(float(v) for v in self.apex_x))

    @property
    def radius(self):
        """Base radius ``phi(T)`` of the backward cone at t = 0."""
        return float(phi(self.apex_t, self.H))


def _dist(x, apex):
    x = np.asarray(x, dtype=float)
    return np.sqrt(np.sum((x - np.asarray(apex)) ** 2, axis=-1))


def in_forward_cone(x, t, x0, t0, H):
    """``|x - x0| <= phi(t) - phi(t0)``."""
    return _dist(x, x0) <= phi(t, H) - phi(t0, H)


def in_backward_cone(x, t, cone):
    """Membership of ``(x, t)`` in the solid backward cone ``D_-``."""
    if np.any(np.asarray(t) < 0) or np.any(np.asarray(t) > cone.apex_t):
        raise ValueError("t must lie in [0, apex_t]")
    return _dist(x, cone.apex_x) <= phi(cone.apex_t, cone.H) - phi(t, cone.H)


def _slice_root(s, r, pT):
    w = (2 * s * pT - s * s) / pT**2
    return np.sqrt((s - pT) ** 2 + w * r * r), w


def cone_slice_time(s, x, cone):
    """Time ``tau(s, x)`` of the slice with parameter ``s`` through ``x``.

    The slices interpolate between ``t = 0`` (``s = 0``) and the cone
    mantle (``s -> phi(T)``) and are admissible for ``|x - x0| <= phi(T)``.
    """
    pT = cone.radius
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or np.any(s >= pT):
        raise ValueError("slice parameter must satisfy 0 <= s < phi(T)")
    r = _dist(x, cone.apex_x)
    if np.any(r > pT * (1 + 1e-12)):
        raise ValueError("x lies outside the admissible radius phi(T)")
    root, _ = _slice_root(s, r, pT)
    return _log_time(pT - root, cone.H)


def cone_slice_limit(x, cone):
    """Limit of ``tau(s, x)`` as ``s -> phi(T)``: the backward mantle through x."""
    r = _dist(x, cone.apex_x)
    return _log_time(cone.radius - r, cone.H)


def slice_tilt(s, x, cone):
    """Closed form of ``exp(-H tau) |grad_x tau|`` on a slice; < 1 means spacelike."""
    pT = cone.radius
    r = _dist(x, cone.apex_x)
    root, w = _slice_root(np.asarray(s, dtype=float), r, pT)
    return w * r / root


def slice_tilt_fd(s, x, cone, h=1e-6):
    """``exp(-H tau) |grad_x tau|`` by central differences of ``tau`` in x."""
    x = np.asarray(x, dtype=float)
    grad = np.empty(3)
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        grad[k] = (cone_slice_time(s, x + e, cone) - cone_slice_time(s, x - e, cone)) / (2 * h)
    tau = cone_slice_time(s, x, cone)
    return float(np.exp(-cone.H * tau) * np.linalg.norm(grad))


def slice_normal_norm(s, x, cone, h=1e-6):
    """``n^* g^{-1} n`` of the slice's unit normal; positive for spacelike slices."""
    x = np.asarray(x, dtype=float)
    grad = np.empty(3)
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        grad[k] = (cone_slice_time(s, x + e, cone) - cone_slice_time(s, x - e, cone)) / (2 * h)
    tau = cone_slice_time(s, x, cone)
    g2 = float(grad @ grad)
    return (1 - np.exp(-2 * cone.H * tau) * g2) / (1 + g2)
