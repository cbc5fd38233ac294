"""
Gauss hypergeometric function and the scalar kernels ``E`` and ``K1``.

``gauss_2f1`` sums the hypergeometric series with a rigorous tail bound and
extends it to the whole real half-line ``z < 1`` with the Pfaff and
``z -> 1 - z`` transformations, including the logarithmic cases where
``c - a - b`` is an integer (Abramowitz & Stegun 15.3.10-15.3.12).
"""

from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from .errors import ConvergenceError, DomainError

SERIES_RTOL = 1e-14
MAX_TERMS = 1_000_000
# c - a - b closer than this to an integer is treated as exactly integral
EXACT_INT_TOL = 1e-12
# band around integers where the generic connection formula cancels badly
NEAR_INT_BAND = 1e-3
# closed-form kernel dispatch tolerance on M/H
CLOSED_FORM_TOL = 1e-12


def _as_int_nonpos(v, tol=1e-14):
    """True when ``v`` is (numerically) one of 0, -1, -2, ..."""
    v = complex(v)
    return abs(v.imag) <= tol and v.real <= tol and abs(v.real - round(v.real)) <= tol


def _snap(v, tol=1e-14):
    v = complex(v)
    if abs(v.imag) <= tol and abs(v.real - round(v.real)) <= tol:
        return complex(round(v.real), 0.0)
    return v


def _series(a, b, c, z):
    """Direct power series on an array of ``|z| < 1`` (or any z if terminating)."""
    z = np.asarray(z, dtype=complex)
    total = np.ones_like(z)
    term = np.ones_like(z)
    done = np.zeros(z.shape, dtype=bool)
    A, B, C = abs(a), abs(b), abs(c)
    lin = max(A + B + C - 1.0, 0.0)
    const = max(A * B + C, 0.0)
    absz = np.abs(z)
    for n in range(MAX_TERMS):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1))) * z
        total = total + term
        k = n + 1
        exact_zero = term == 0
        if k > C + 1:
            f = 1.0 + (lin * k + const) / ((k - C) * (k + 1))
            rho = absz * f
            with np.errstate(divide="ignore", invalid="ignore"):
                tail = np.abs(term) * rho / (1.0 - rho)
            ok = (rho < 1.0) & (tail <= SERIES_RTOL * np.abs(total))
        else:
            ok = np.zeros(z.shape, dtype=bool)
        done |= ok | exact_zero
        if done.all():
            return total
    raise ConvergenceError(f"hypergeometric series exceeded {MAX_TERMS} terms")


def _log_series(w, shift_a, shift_b, m, logw, psi_args):
    # sum_n coef_n w^n [ln w - psi(n+1) - psi(n+m+1) + psi(a'+n) + psi(b'+n)]
    total = np.zeros_like(w)
    t = np.ones_like(w)
    n = 0
    while True:
        bracket = (logw - sp.psi(n + 1.0) - sp.psi(n + m + 1.0)
                   + sp.psi(psi_args[0] + n) + sp.psi(psi_args[1] + n))
        contrib = t * bracket
        total = total + contrib
        if n > abs(shift_a) + abs(shift_b) + m + 2 and np.all(
                np.abs(t) * (1 + np.abs(logw)) <= 1e-16 * np.maximum(np.abs(total), 1e-300)):
            return total
        t = t * (shift_a + n) * (shift_b + n) / ((n + 1) * (n + 1 + m)) * w
        n += 1
        if n > MAX_TERMS:
            raise ConvergenceError("logarithmic connection series did not converge")


def _connection(a, b, c, z):
    """Evaluate on real ``z`` in [1/2, 1) through the ``1 - z`` transformation."""
    w = 1.0 - np.asarray(z, dtype=complex)
    s = c - a - b
    s_int = round(s.real)
    dist = abs(s - s_int)
    if dist > EXACT_INT_TOL * (1 + abs(s)):
        g1 = sp.gamma(c) * sp.gamma(s) * sp.rgamma(c - a) * sp.rgamma(c - b)
        g2 = sp.gamma(c) * sp.gamma(-s) * sp.rgamma(a) * sp.rgamma(b)
        out = g1 * _series(a, b, 1 - s, w)
        if g2 != 0:
            out = out + g2 * w**s * _series(c - a, c - b, 1 + s, w)
        return out

    m = abs(s_int)
    logw = np.log(w)
    if s_int >= 0:
        # c = a + b + m
        lead = np.zeros_like(w)
        if m > 0:
            t = np.ones_like(w)
            for n in range(m):
                lead = lead + t
                if n < m - 1:
                    t = t * (a + n) * (b + n) / ((n + 1) * (1 - m + n)) * w
            lead = lead * sp.gamma(m) * sp.gamma(c) * sp.rgamma(a + m) * sp.rgamma(b + m)
        pref = -sp.gamma(c) * sp.rgamma(a) * sp.rgamma(b)
        if pref == 0:
            return lead
        coef = 1.0 / sp.factorial(m)
        tail = _log_series(w, a + m, b + m, m, logw, (a + m, b + m)) * coef
        return lead + pref * (-w) ** m * tail

    # c = a + b - m
    t = np.ones_like(w)
    lead = np.zeros_like(w)
    for n in range(m):
        lead = lead + t
        if n < m - 1:
            t = t * (a - m + n) * (b - m + n) / ((n + 1) * (1 - m + n)) * w
    lead = lead * sp.gamma(m) * sp.gamma(c) * sp.rgamma(a) * sp.rgamma(b) * w ** (-m)
    pref = -((-1) ** m) * sp.gamma(c) * sp.rgamma(a - m) * sp.rgamma(b - m)
    if pref == 0:
        return lead
    coef = 1.0 / sp.factorial(m)
    tail = _log_series(w, a, b, m, logw, (a, b)) * coef
    return lead + pref * tail


def _real_unit_interval(a, b, c, z):
    """Real ``z`` in [0, 1): series below 1/2, connection formula above."""
    out = np.empty(z.shape, dtype=complex)
    low = z < 0.5
    if low.any():
        out[low] = _series(a, b, c, z[low])
    high = ~low
    if high.any():
        s = c - a - b
        dist = abs(s - round(s.real))
        zh = z[high]
        if EXACT_INT_TOL * (1 + abs(s)) < dist < NEAR_INT_BAND:
            # generic connection loses ~log10(1/dist) digits here; the plain
            # series is accurate, so use it wherever it converges in time
            res = np.empty(zh.shape, dtype=complex)
            slow = zh < 0.97
            if slow.any():
                res[slow] = _series(a, b, c, zh[slow])
            if (~slow).any():
                res[~slow] = _connection(a, b, c, zh[~slow])
            out[high] = res
        else:
            out[high] = _connection(a, b, c, zh)
    return out


def gauss_2f1(a, b, c, z):
    """Gauss hypergeometric function ``F(a, b; c; z)``.

    Parameters
    ----------
    a, b, c : complex
        Parameters; ``c`` must not be a nonpositive integer.
    z : complex or array_like
        Argument with ``|z| < 1``, or real ``z < 1``.  When ``a`` or ``b``
        is a nonpositive integer the series terminates and any ``z`` is
        accepted.

    Returns
    -------
    complex or ndarray
        Same shape as ``z``.

    Raises
    ------
    DomainError
        For ``c`` in {0, -1, -2, ...} or ``z`` outside the domain.
    ConvergenceError
        If a series needs more than ``MAX_TERMS`` terms.
    """
    a, b, c = _snap(a), _snap(b), _snap(c)
    if _as_int_nonpos(c):
        raise DomainError(f"c = {c} is a nonpositive integer")
    zarr = np.asarray(z, dtype=complex)
    scalar = zarr.ndim == 0
    zarr = np.atleast_1d(zarr)

    if _as_int_nonpos(a) or _as_int_nonpos(b):
        out = _series(a, b, c, zarr)
        return out[0] if scalar else out

    out = np.empty(zarr.shape, dtype=complex)
    is_real = np.abs(zarr.imag) == 0
    zr = zarr.real
    if np.any(~is_real & (np.abs(zarr) >= 1)) or np.any(is_real & (zr >= 1)):
        raise DomainError("z must satisfy |z| < 1 or be real and < 1")

    direct = (np.abs(zarr) < 0.5) | ~is_real
    if direct.any():
        out[direct] = _series(a, b, c, zarr[direct])
    unit = is_real & (zr >= 0.5)
    if unit.any():
        out[unit] = _real_unit_interval(a, b, c, zr[unit])
    neg = is_real & (zr <= -0.5)
    if neg.any():
        zn = zr[neg]
        wv = zn / (zn - 1.0)
        out[neg] = (1.0 - zn) ** (-a) * _real_unit_interval(a, c - b, c, wv)
    return out[0] if scalar else out


@dataclass(frozen=True)
class KernelSpec:
    """Kernel parameter ``M`` (usually ``H/2 +- i m``) and Hubble rate ``H``."""

    M: complex
    H: float

    def __post_init__(self):
        if self.H == 0:
            raise DomainError("kernels need H != 0")
        object.__setattr__(self, "M", complex(self.M))
        object.__setattr__(self, "H", float(self.H))

    @classmethod
    def plus(cls, m, H):
        """``M+ = H/2 + i m``."""
        return cls(0.5 * H + 1j * m, H)

    @classmethod
    def minus(cls, m, H):
        """``M- = H/2 - i m``."""
        return cls(0.5 * H - 1j * m, H)

    @property
    def ratio(self):
        return self.M / self.H


def kernel_E(r, t, t0, spec):
    """Kernel ``E(r, t; 0, t0; M)``.

    Vectorised over ``r`` and ``t`` (broadcast together). The points must lie
    in the light cone of ``(0, t0)``, i.e. ``|r| <= |phi(t) - phi(t0)|``.
    """
    H = spec.H
    mu = spec.ratio
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    u = np.exp(-H * t)
    u0 = np.exp(-H * t0)
    hr2 = (H * r) ** 2
    base = (u0 + u) ** 2 - hr2
    z = ((u - u0) ** 2 - hr2) / base
    scale = np.maximum((u - u0) ** 2 + hr2, 1e-300)
    if np.any(z < -1e-12 * scale / base) or np.any(base <= 0):
        raise DomainError("point lies outside the light cone of the kernel")
    z = np.maximum(z, 0.0)
    a = 0.5 - mu
    F = gauss_2f1(a, a, 1.0, z)
    out = 4.0 ** (-mu) * np.exp(spec.M * (t0 + t)) * base ** (mu - 0.5) * F
    return out[()] if np.ndim(out) == 0 else out


def _closed_form(r, t, spec):
    mu = spec.ratio
    H = spec.H
    if abs(mu - 0.5) < CLOSED_FORM_TOL or abs(mu + 0.5) < CLOSED_FORM_TOL:
        return 0.5 * np.exp(0.5 * H * t) * np.ones(np.broadcast(r, t).shape) + 0j
    if abs(mu - 1.5) < CLOSED_FORM_TOL:
        return (0.25 * np.exp(-0.5 * H * t)
                * ((1 - (H * r) ** 2) * np.exp(2 * H * t) + 1)) + 0j
    return None


def kernel_K1(r, t, spec, closed_form=True):
    """Kernel ``K1(r, t; M) = E(r, t; 0, 0; M)`` on ``0 <= r <= phi(t)``.

    For ``M`` in {H/2, -H/2, 3H/2} the elementary closed forms are used
    unless ``closed_form`` is False.
    """
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    if closed_form:
        out = _closed_form(r, t, spec)
        if out is not None:
            return out[()] if np.ndim(out) == 0 else out
    return kernel_E(r, t, 0.0, spec)
