"""
Integral operators of the representation theory and the explicit free
Dirac solution.

Data fields are plain callables ``f(points) -> values`` where ``points`` has
shape ``(N, 3)`` and ``values`` has shape ``(N,)`` or ``(N, k)``.  Wrapping a
callable in :class:`ScalarField3` attaches a declared support radius.

The distribution ``E^w(x, s)`` is never sampled. Its action on a test
function is the Kirchhoff wave ``d/ds [s * spherical mean]``, evaluated by
centred differences in the radius with one Richardson step.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import lebedev_rule

from . import spinor as sa
from .errors import UnsupportedConfiguration
from .geometry import phi as phi_dist
from .special import CLOSED_FORM_TOL, KernelSpec, kernel_E, kernel_K1

DEFAULT_SPHERE_DEGREE = 29
KIRCHHOFF_STEP = 2e-3
K1_TOL = 1e-8
G_TOL = 1e-7


@dataclass(frozen=True)
class ScalarField3:
    """Callable data on R^3 with a declared support ball ``|x - center| <= support_radius``."""

    func: object
    support_radius: float = np.inf
    center: tuple = (0.0, 0.0, 0.0)

    def __call__(self, points):
        return self.func(points)


@lru_cache(maxsize=None)
def sphere_rule(degree=DEFAULT_SPHERE_DEGREE, kind="lebedev"):
    """Nodes ``(N, 3)`` on the unit sphere and weights summing to one.

    ``lebedev`` integrates spherical harmonics up to ``degree`` exactly;
    ``gauss`` is a latitude-longitude product rule of the same exactness.
    """
    if kind == "lebedev":
        x, w = lebedev_rule(degree)
        return x.T.copy(), w / w.sum()
    if kind == "gauss":
        nt = degree // 2 + 1
        npf = degree + 1
        ct, wt = np.polynomial.legendre.leggauss(nt)
        ph = 2 * np.pi * np.arange(npf) / npf
        st = np.sqrt(1 - ct**2)
        nodes = np.stack([np.outer(st, np.cos(ph)).ravel(),
                          np.outer(st, np.sin(ph)).ravel(),
                          np.repeat(ct, npf)], axis=1)
        w = np.repeat(wt, npf) / (2 * npf)
        return nodes, w
    raise ValueError(f"unknown sphere rule {kind!r}")


def _eval(func, pts):
    flat = pts.reshape(-1, 3)
    vals = np.asarray(func(flat))
    return vals.reshape(pts.shape[:-1] + vals.shape[1:])


def spherical_mean(phi, x, radius, degree=DEFAULT_SPHERE_DEGREE, kind="lebedev"):
    """``V_phi(x, radius) = radius * mean of phi over the sphere |y - x| = radius``.

    ``x`` has shape ``(..., 3)`` and broadcasts against ``radius``; the
    result has the broadcast shape plus any component axes of ``phi``.
    Negative radii are allowed (``V`` is odd in the radius).
    """
    nodes, w = sphere_rule(degree, kind)
    x = np.asarray(x, dtype=float)
    radius = np.asarray(radius, dtype=float)
    shape = np.broadcast_shapes(x.shape[:-1], radius.shape)
    xb = np.broadcast_to(x, shape + (3,))
    rb = np.broadcast_to(radius, shape)
    pts = xb[..., None, :] + rb[..., None, None] * nodes
    vals = _eval(phi, pts)
    nd = len(shape)
    mean = np.tensordot(vals, w, axes=([nd], [0]))
    rshape = rb.reshape(shape + (1,) * (mean.ndim - nd))
    return rshape * mean


def kirchhoff_wave(phi, x, t, h=KIRCHHOFF_STEP, degree=DEFAULT_SPHERE_DEGREE, kind="lebedev"):
    """Solution ``v(x, t)`` of the flat wave equation with data ``(phi, 0)``.

    ``v = d/dt V_phi(x, t)``, using centred differences with steps ``h`` and
    ``h/2`` combined by Richardson extrapolation (error ``O(h^4)``).
    """
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    ts = np.stack([t + h, t - h, t + h / 2, t - h / 2])
    V = spherical_mean(phi, x[None] if x.ndim > 1 else x, ts.reshape(4, *t.shape), degree, kind)
    d1 = (V[0] - V[1]) / (2 * h)
    d2 = (V[2] - V[3]) / h
    return (4 * d2 - d1) / 3


def _gl(n):
    return np.polynomial.legendre.leggauss(n)


def _k1_fixed(phi, x, t, spec, n, degree):
    # 2 int_0^{phi(t)} K1(s, t) v(x, s) ds on n Gauss-Legendre nodes
    p = float(phi_dist(t, spec.H))
    xi, wi = _gl(n)
    s = 0.5 * p * (xi + 1)
    K = kernel_K1(np.abs(s), t, spec)
    v = kirchhoff_wave(phi, np.asarray(x, dtype=float), s, degree=degree)
    w = 0.5 * p * wi * K
    return 2 * np.tensordot(w, v, axes=(0, 0))


def apply_K1(phi, x, t, spec, tol=K1_TOL, n_nodes=None, degree=DEFAULT_SPHERE_DEGREE,
             return_nodes=False):
    """``K1(x, t, D; M)[phi] = 2 int_0^{phi(t)} K1(s, t; M) v_phi(x, s) ds``.

    Gauss-Legendre in ``s`` with the node count doubled from 16 until two
    successive results differ by less than ``tol``; a fixed ``n_nodes``
    skips the adaptation (used to keep finite-difference stencils smooth).
    Negative ``t`` evaluates the analytic continuation of the formula.
    """
    if t == 0:
        out = 0.0 * _eval(phi, np.zeros((1, 3)))[0] + 0j
        return (out, 0) if return_nodes else out
    if n_nodes is not None:
        val = _k1_fixed(phi, x, t, spec, n_nodes, degree)
        return (val, n_nodes) if return_nodes else val
    n = 16
    prev = _k1_fixed(phi, x, t, spec, n, degree)
    while True:
        n *= 2
        cur = _k1_fixed(phi, x, t, spec, n, degree)
        if np.max(np.abs(cur - prev)) < tol or n >= 1024:
            return (cur, n) if return_nodes else cur
        prev = cur


def _g_fixed(f, x, t, spec, nb, nr, degree):
    pt = float(phi_dist(t, spec.H))
    xb, wb = _gl(nb)
    xr, wr = _gl(nr)
    b = 0.5 * t * (xb + 1)
    total = 0.0
    for bj, wj in zip(b, wb):
        L = pt - float(phi_dist(bj, spec.H))
        r = 0.5 * L * (xr + 1)
        E = kernel_E(r, t, bj, spec)
        v = kirchhoff_wave(lambda pts, bj=bj: f(pts, bj), np.asarray(x, dtype=float), r,
                           degree=degree)
        total = total + 0.5 * t * wj * np.tensordot(0.5 * L * wr * E, v, axes=(0, 0))
    return 2 * total


def apply_G(f, x, t, spec, tol=G_TOL, degree=DEFAULT_SPHERE_DEGREE):
    """``G(x, t, D; M)[f]``, the Duhamel kernel operator.

    ``2 int_0^t db int_0^{phi(t) - phi(b)} E(r, t; 0, b; M) v_{f(., b)}(x, r) dr``
    with tensor Gauss-Legendre rules refined until the change is below ``tol``.
    ``f`` is called as ``f(points, b)``.
    """
    if t == 0:
        return 0.0 + 0j
    n = 8
    prev = _g_fixed(f, x, t, spec, n, n, degree)
    while True:
        n *= 2
        cur = _g_fixed(f, x, t, spec, n, n, degree)
        if np.max(np.abs(cur - prev)) < tol or n >= 256:
            return cur
        prev = cur


# --- free Dirac solution --------------------------------------------------------

def _huygens_kind(m, H):
    if abs(m) <= CLOSED_FORM_TOL * abs(H):
        return "m0"
    if abs(m - 1j * H) <= CLOSED_FORM_TOL * abs(H):
        return "plus_iH"
    if abs(m + 1j * H) <= CLOSED_FORM_TOL * abs(H):
        return "minus_iH"
    return None


def _k1_huygens(phi, x, t, H, which, n_nodes, degree):
    # closed-form K1 operators for M = +-H/2 ("half") and M = 3H/2 ("three_half")
    p = float(phi_dist(t, H))
    Vp = spherical_mean(phi, x, p, degree)
    if which == "half":
        return np.exp(0.5 * H * t) * Vp
    xi, wi = _gl(n_nodes)
    s = 0.5 * p * (xi + 1)
    Vs = spherical_mean(phi, np.asarray(x, dtype=float), s, degree)
    integral = np.tensordot(0.5 * p * wi * s, Vs, axes=(0, 0))
    e = np.exp(1.5 * H * t)
    return (0.5 * e * (1 + np.exp(-2 * H * t)) * Vp
            - 0.5 * H**2 * e * p**2 * Vp + H**2 * e * integral)


class _RepresentedField:
    """``W = diag(K1(M+) I2, K1(M-) I2)[Phi0]`` evaluated at arbitrary (x, t)."""

    def __init__(self, Phi0, params, degree, huygens=True, n_nodes=None, x_ref=None, t_ref=None):
        self.Phi0 = Phi0
        self.H = params.H
        self.m = params.m
        self.degree = degree
        self.kind = _huygens_kind(self.m, self.H) if huygens else None
        self.spec_p = KernelSpec.plus(self.m, self.H)
        self.spec_m = KernelSpec.minus(self.m, self.H)
        self.upper = lambda pts: np.asarray(Phi0(pts))[:, :2]
        self.lower = lambda pts: np.asarray(Phi0(pts))[:, 2:]
        if n_nodes is None:
            n_nodes = self._choose_nodes(x_ref, t_ref)
        self.n_nodes = n_nodes

    def _choose_nodes(self, x, t):
        if x is None or t is None or t == 0:
            return 32
        if self.kind is not None:
            # only the 3H/2 integral needs nodes; adapt on its integrand
            n = 16
            prev = self._eval_huygens(x, t, n)
            while n < 512:
                n *= 2
                cur = self._eval_huygens(x, t, n)
                if np.max(np.abs(cur - prev)) < K1_TOL:
                    break
                prev = cur
            return n
        _, n1 = apply_K1(self.upper, x, t, self.spec_p, degree=self.degree, return_nodes=True)
        _, n2 = apply_K1(self.lower, x, t, self.spec_m, degree=self.degree, return_nodes=True)
        return max(n1, n2)

    def _eval_huygens(self, x, t, n):
        H = self.H
        route = {"m0": ("half", "half"), "plus_iH": ("half", "three_half"),
                 "minus_iH": ("three_half", "half")}[self.kind]
        up = _k1_huygens(self.upper, x, t, H, route[0], n, self.degree)
        lo = _k1_huygens(self.lower, x, t, H, route[1], n, self.degree)
        return np.concatenate([up, lo])

    def __call__(self, x, t):
        if t == 0:
            return np.zeros(4, dtype=complex)
        if self.kind is not None:
            return self._eval_huygens(x, t, self.n_nodes)
        up = _k1_fixed(self.upper, x, t, self.spec_p, self.n_nodes, self.degree)
        lo = _k1_fixed(self.lower, x, t, self.spec_m, self.n_nodes, self.degree)
        return np.concatenate([up, lo])


def _richardson(fun, c, h):
    d1 = (fun(c + h) - fun(c - h)) / (2 * h)
    d2 = (fun(c + h / 2) - fun(c - h / 2)) / h
    return (4 * d2 - d1) / 3


def free_dirac_solution(Phi0, x, t, params, degree=DEFAULT_SPHERE_DEGREE, huygens=True,
                        h=None, n_nodes=None):
    """Explicit solution of the free Dirac equation in de Sitter space.

    Evaluates ``e^{-Ht} (d0 + e^{-Ht} sum_k g^k g^0 d_k - H/2 - i m g^0) W``
    with ``W = diag(K1(M+) I2, K1(M-) I2)[Phi0]``, which is the expanded form of
    ``-e^{-Ht}(i g0 d0 + i e^{-Ht} g^k d_k - i H/2 g0 + m)(i g0 W)``.

    Parameters
    ----------
    Phi0 : callable
        Initial spinor field, ``Phi0(points (N,3)) -> (N, 4)``.
    x : array_like, shape (3,)
    t : float
    params : PhysicalParams
        ``H != 0``, complex ``m``; a nonzero potential is rejected.
    huygens : bool
        Use the closed-form kernels when ``m`` is 0 or ``+-iH``.
    h : float, optional
        Outer differencing step; default ``1e-4 * max(1, |t|)``.
    n_nodes : int, optional
        Fixed Gauss-Legendre node count for the s-integrals (default:
        adapted once at ``(x, t)`` and then frozen for the whole stencil).

    Returns
    -------
    ndarray, shape (4,)
    """
    if params.has_potential:
        raise UnsupportedConfiguration("the explicit formula covers the free equation only (V = 0)")
    if params.nonlin is not None:
        raise UnsupportedConfiguration("the explicit formula covers the free equation only (F = 0)")
    x = np.asarray(x, dtype=float)
    H, m = params.H, params.m
    if t == 0:
        return np.asarray(Phi0(x[None]), dtype=complex)[0]
    W = _RepresentedField(Phi0, params, degree, huygens, n_nodes, x, t)
    if h is None:
        h = 1e-4 * max(1.0, abs(t))
    W0 = W(x, t)
    dt = _richardson(lambda tt: W(x, tt), t, h)
    out = dt - 0.5 * H * W0 - 1j * m * sa.apply(sa.GAMMA0, W0)
    c = np.exp(-H * t)
    for k in range(3):
        e = np.zeros(3)
        e[k] = 1.0
        dk = _richardson(lambda s: W(x + s * e, t), 0.0, h)
        out = out + c * sa.apply(sa.GAMMA[k + 1] @ sa.GAMMA0, dk)
    return c * out


def represented_field(Phi0, x, t, params, degree=DEFAULT_SPHERE_DEGREE, huygens=True,
                      n_nodes=32):
    """The inner field ``W(x, t)`` of :func:`free_dirac_solution` (fixed nodes)."""
    return _RepresentedField(Phi0, params, degree, huygens, n_nodes)(np.asarray(x, float), t)
