"""
Nonlinear terms of the semilinear Dirac equation.

Two conventions are in play. :func:`eval_F` returns the nonlinearity in
the form it is written for each model, while :func:`source_term` converts it
into the right-hand side of ``D_dS psi = source`` with

    D_dS = d0 + e^{-Ht} sum_l alpha^l d_l + (3/2) H + i m gamma^0 - i V.

``ChiralF`` is written for ``(i g0 d0 + ...) psi = F psi`` and therefore
enters as ``-i g0 F psi``. ``BlowupG`` is written as ``(i g0 d0 + ...) psi =
i G g0 psi``, i.e. ``D_dS psi = G psi``. The power-type kinds are already in
``D_dS`` form.
"""

from dataclasses import dataclass, field

import numpy as np

from . import spinor as sa
from .errors import ConfigError

KINDS = ("ChiralF", "PowerAbs", "PowerAbsPsi", "CubicGamma0", "BlowupG")


def _linear_fn(coeffs):
    a = float(coeffs.get("xi", 0.0))
    b = float(coeffs.get("eta", 0.0))
    return lambda xi, eta: a * xi + b * eta


def _default_alpha(xi, eta):
    return xi


def _default_beta(xi, eta):
    return eta


@dataclass
class NonlinSpec:
    """Nonlinearity selection.

    Parameters
    ----------
    kind : str
        One of ``ChiralF``, ``PowerAbs``, ``PowerAbsPsi``, ``CubicGamma0``,
        ``BlowupG``.
    alpha : float
        Growth exponent (``F ~ |psi|^(1+alpha)``); cubic terms have 2.
    c0 : float
        Coupling constant (``G = c0 |psi|^alpha`` for ``BlowupG``; overall
        factor for the power-type kinds; unused for ``ChiralF``).
    sign : int
        +1 or -1, the sign of the power-type terms.
    alpha_fn, beta_fn : callable
        Real functions of ``(xi, eta)`` for ``ChiralF``.
    """

    kind: str
    alpha: float = 2.0
    c0: float = 1.0
    sign: int = 1
    alpha_fn: object = field(default=_default_alpha)
    beta_fn: object = field(default=_default_beta)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown nonlinearity kind {self.kind!r}")
        if not self.alpha > 0:
            raise ConfigError("alpha must be > 0")
        if self.c0 < 0:
            raise ConfigError("c0 must be >= 0")
        if self.sign not in (1, -1):
            raise ConfigError("sign must be +1 or -1")
        if self.kind == "ChiralF":
            self._check_chiral_vanishing()

    def _check_chiral_vanishing(self):
        # alpha, beta = O(|xi| + |eta|) near the origin, probed on a shrinking ring
        rng = np.random.default_rng(0)
        ang = rng.uniform(0, 2 * np.pi, 64)
        for fn in (self.alpha_fn, self.beta_fn):
            ratios = []
            for r in (1e-2, 1e-4, 1e-6):
                xi, eta = r * np.cos(ang), r * np.sin(ang)
                val = np.asarray(fn(xi, eta), dtype=float)
                ratios.append(float(np.max(np.abs(val) / (np.abs(xi) + np.abs(eta)))))
            if not np.isfinite(ratios).all() or ratios[-1] > 10 * max(ratios[0], 1.0):
                raise ConfigError("ChiralF alpha/beta must vanish linearly at (0, 0)")

    @classmethod
    def from_dict(cls, d):
        if d is None or d.get("kind", "none") in ("none", None):
            return None
        kw = {k: d[k] for k in ("alpha", "c0", "sign") if k in d}
        if "alpha_fn" in d:
            kw["alpha_fn"] = _linear_fn(d["alpha_fn"])
        if "beta_fn" in d:
            kw["beta_fn"] = _linear_fn(d["beta_fn"])
        return cls(d["kind"], **kw)


def _norm(psi):
    return np.sqrt(np.sum(np.abs(psi) ** 2, axis=0))


def chiral_matrix_action(psi, a, b):
    """``[a I4 + i b gamma^5] psi`` with pointwise real ``a, b``."""
    return a * psi + 1j * b * sa.apply(sa.GAMMA5, psi)


def eval_F(psi, spec):
    """Nonlinearity ``F(psi)`` in its native form (see module docstring)."""
    psi = np.asarray(psi, dtype=complex)
    k = spec.kind
    if k == "ChiralF":
        xi, eta, _ = sa.chiral_density(psi)
        return chiral_matrix_action(psi, spec.alpha_fn(xi, eta), spec.beta_fn(xi, eta))
    n = _norm(psi)
    if k == "PowerAbs":
        return spec.sign * spec.c0 * np.broadcast_to(n ** (1 + spec.alpha), psi.shape).astype(complex)
    if k == "PowerAbsPsi":
        return spec.sign * spec.c0 * n**spec.alpha * psi
    if k == "CubicGamma0":
        xi = np.real(sa.bilinear(psi, sa.GAMMA0))
        return spec.c0 * xi * sa.apply(sa.GAMMA0, psi)
    # BlowupG
    return spec.c0 * n**spec.alpha * sa.apply(sa.GAMMA0, psi)


def blowup_G(psi, spec):
    """Scalar factor ``G(psi) = c0 |psi|^alpha`` of the blow-up model."""
    return spec.c0 * _norm(psi) ** spec.alpha


def source_term(psi, spec):
    """Right-hand side ``S(psi)`` of ``D_dS psi = S(psi)``."""
    psi = np.asarray(psi, dtype=complex)
    if spec.kind == "ChiralF":
        return -1j * sa.apply(sa.GAMMA0, eval_F(psi, spec))
    if spec.kind == "BlowupG":
        return blowup_G(psi, spec) * psi
    return eval_F(psi, spec)


def nonlinear_rate(psi, spec):
    """Bound for the local growth rate ``|dS/dpsi|`` used to limit time steps."""
    n = _norm(psi)
    s = _norm(source_term(psi, spec))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(n > 0, s / n, 0.0)
    return float((1 + spec.alpha) * np.max(ratio)) if ratio.size else 0.0


def eval_reduced_f1(chi, Psi, spec, majorana_tol=1e-28):
    """Reduced nonlinearity for the split ``psi = Psi + chi``.

    Returns ``F(psi) psi`` for ``ChiralF`` with the bilinears expanded as
    ``xi(psi) = xi(Psi) + 2 Re(Psi^* g0 chi) + xi(chi)`` (same for ``eta``),
    where ``xi(Psi)``, ``eta(Psi)`` are set to zero wherever ``Psi`` is of
    Majorana type to rounding (``rho^2 <= majorana_tol |Psi|^4``). With
    ``chi = 0`` and Majorana ``Psi`` the result is exactly zero.
    """
    if spec.kind != "ChiralF":
        raise ConfigError("eval_reduced_f1 applies to ChiralF only")
    chi = np.asarray(chi, dtype=complex)
    Psi = np.asarray(Psi, dtype=complex)
    xP, eP, rP = sa.chiral_density(Psi)
    maj = rP <= majorana_tol * np.sum(np.abs(Psi) ** 2, axis=0) ** 2
    xP = np.where(maj, 0.0, xP)
    eP = np.where(maj, 0.0, eP)
    g05 = sa.GAMMA0 @ sa.GAMMA5
    x_cross = 2 * np.real(sa.bilinear(Psi, sa.GAMMA0, chi))
    e_cross = 2 * np.real(-1j * sa.bilinear(Psi, g05, chi))
    xc, ec, _ = sa.chiral_density(chi)
    xi = xP + x_cross + xc
    eta = eP + e_cross + ec
    return chiral_matrix_action(Psi + chi, spec.alpha_fn(xi, eta), spec.beta_fn(xi, eta))


def _smooth_random_field(rng, n, amp):
    # band-limited random spinor field on an n^3 periodic grid
    k = np.fft.fftfreq(n) * n
    K2 = k[:, None, None] ** 2 + k[None, :, None] ** 2 + k[None, None, :] ** 2
    filt = np.exp(-K2 / 4.0)
    noise = rng.normal(size=(4, n, n, n)) + 1j * rng.normal(size=(4, n, n, n))
    f = np.fft.ifftn(np.fft.fftn(noise, axes=(1, 2, 3)) * filt, axes=(1, 2, 3))
    return amp * f / np.max(np.abs(f))


def lipschitz_probe(spec, samples=64, n=8, seed=0):
    """Monte-Carlo estimate of the Lipschitz constant of ``F``.

    Returns the largest observed ratio
    ``||F(p1) - F(p2)||_2 / (||p1 - p2||_2 (||p1||_inf^alpha + ||p2||_inf^alpha))``
    over ``samples`` distinct pairs of smooth random fields on an ``n^3``
    grid. Half of the pairs are close (relative perturbation 1e-3) so the
    local derivative is probed as well as secants. A diagnostic, not a proof.
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    rng = np.random.default_rng(seed)
    best = 0.0
    for j in range(samples):
        p1 = _smooth_random_field(rng, n, rng.uniform(0.2, 2.0))
        if j % 2:
            p2 = p1 + 1e-3 * _smooth_random_field(rng, n, 1.0)
        else:
            p2 = _smooth_random_field(rng, n, rng.uniform(0.0, 2.0))
        d = np.sqrt(np.sum(np.abs(p1 - p2) ** 2))
        if d == 0:
            continue
        num = np.sqrt(np.sum(np.abs(eval_F(p1, spec) - eval_F(p2, spec)) ** 2))
        den = d * (np.max(_norm(p1)) ** spec.alpha + np.max(_norm(p2)) ** spec.alpha)
        best = max(best, float(num / den))
    return best
