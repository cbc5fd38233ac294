"""
Dirac-representation gamma matrices and pointwise spinor bilinears.

All matrices are dense complex constants whose entries lie in {0, +-1, +-i},
so products and adjoints are exact in floating point.

Spinors are arrays whose *first* axis has length 4; any trailing axes are
treated as sample points, so every function here works both on a single
spinor of shape ``(4,)`` and on a gridded field of shape ``(4, n, n, n)``.
"""

import numpy as np

I2 = np.eye(2, dtype=complex)
O2 = np.zeros((2, 2), dtype=complex)
I4 = np.eye(4, dtype=complex)

SIGMA1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA3 = np.array([[1, 0], [0, -1]], dtype=complex)


def _block(a, b, c, d):
    return np.block([[a, b], [c, d]])


GAMMA0 = _block(I2, O2, O2, -I2)
GAMMA1 = _block(O2, SIGMA1, -SIGMA1, O2)
GAMMA2 = _block(O2, SIGMA2, -SIGMA2, O2)
GAMMA3 = _block(O2, SIGMA3, -SIGMA3, O2)
GAMMA5 = _block(O2, -I2, -I2, O2)
ALPHA1 = _block(O2, SIGMA1, SIGMA1, O2)
ALPHA2 = _block(O2, SIGMA2, SIGMA2, O2)
ALPHA3 = _block(O2, SIGMA3, SIGMA3, O2)

GAMMA = (GAMMA0, GAMMA1, GAMMA2, GAMMA3)
ALPHA = (ALPHA1, ALPHA2, ALPHA3)
SIGMA = (SIGMA1, SIGMA2, SIGMA3)
MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])

_NAMED = {
    "Gamma0": GAMMA0, "Gamma1": GAMMA1, "Gamma2": GAMMA2, "Gamma3": GAMMA3,
    "Gamma5": GAMMA5,
    "Alpha1": ALPHA1, "Alpha2": ALPHA2, "Alpha3": ALPHA3,
    "Sigma1": SIGMA1, "Sigma2": SIGMA2, "Sigma3": SIGMA3,
    "I2": I2, "I4": I4, "O2": O2,
}

# Realness tolerance for the bilinears, relative to 1 + |psi|^2.
REAL_TOL = 1e-12


def dirac_matrix(name):
    """Return a fresh copy of a named constant matrix.

    Parameters
    ----------
    name : str
        One of ``Gamma0..Gamma3``, ``Gamma5``, ``Alpha1..Alpha3``,
        ``Sigma1..Sigma3``, ``I2``, ``I4``, ``O2``.
    """
    try:
        return _NAMED[name].copy()
    except KeyError:
        raise ValueError(f"unknown matrix name {name!r}") from None


def apply(matrix, psi):
    """Apply a 4x4 matrix to the spinor axis of ``psi``."""
    return np.tensordot(matrix, psi, axes=(1, 0))


def bilinear(psi, matrix, phi=None):
    """Pointwise ``psi^* M phi`` (``phi`` defaults to ``psi``)."""
    if phi is None:
        phi = psi
    return np.sum(np.conj(psi) * apply(matrix, phi), axis=0)


def transpose_bilinear(psi, matrix):
    """Pointwise ``psi^T M psi`` (no complex conjugation)."""
    return np.sum(psi * apply(matrix, psi), axis=0)


def _check_real(value, psi, label):
    scale = 1.0 + np.sum(np.abs(psi) ** 2, axis=0)
    if np.any(np.abs(np.imag(value)) > REAL_TOL * scale):
        raise ArithmeticError(f"{label} has a non-negligible imaginary part")
    return np.real(value)


def chiral_density(psi):
    """Scalar and pseudoscalar densities of a spinor.

    Returns ``(xi, eta, rho2)`` with ``xi = psi^* g0 psi``,
    ``eta = -i psi^* g0 g5 psi`` and ``rho2 = xi**2 + eta**2``.

    ``psi^* g0 g5 psi`` itself is purely imaginary in this representation
    (``g0 g5`` is anti-Hermitian), so ``eta`` carries the factor ``-i`` that
    makes it real; ``|eta|`` equals ``|psi^* g0 g5 psi|`` and
    ``eta = 2 Im(psi1 conj(psi3)) + 2 Im(psi2 conj(psi4))``.
    """
    psi = np.asarray(psi, dtype=complex)
    xi = _check_real(bilinear(psi, GAMMA0), psi, "xi")
    eta = _check_real(-1j * bilinear(psi, GAMMA0 @ GAMMA5), psi, "eta")
    return xi, eta, xi**2 + eta**2


def rho2_components(psi):
    """Component form of ``rho^2``, independent of any matrix products."""
    p1, p2, p3, p4 = np.asarray(psi, dtype=complex)
    a = np.abs(p1) ** 2 + np.abs(p2) ** 2 - np.abs(p3) ** 2 - np.abs(p4) ** 2
    b = 2 * np.imag(p1 * np.conj(p3)) + 2 * np.imag(p2 * np.conj(p4))
    return a**2 + b**2


def charge_conjugate(psi, z=1.0):
    """``z g2 conj(psi)``; Majorana-type spinors are its fixed points."""
    return z * apply(GAMMA2, np.conj(psi))


def _check_unimodular(z):
    if abs(abs(z) - 1.0) > 1e-9:
        raise ValueError(f"|z| must be 1, got {abs(z)!r}")


def majorana_defect(psi, z=1.0):
    """Pointwise ``|psi - z g2 conj(psi)|^2``."""
    _check_unimodular(z)
    psi = np.asarray(psi, dtype=complex)
    d = psi - charge_conjugate(psi, z)
    return np.sum(np.abs(d) ** 2, axis=0)


def majorana_defect_identity(psi, z=1.0):
    """Right side ``2|psi|^2 + 2 Re(conj(z) psi^T g2 psi)`` of the defect identity."""
    _check_unimodular(z)
    psi = np.asarray(psi, dtype=complex)
    return (2 * np.sum(np.abs(psi) ** 2, axis=0)
            + 2 * np.real(np.conj(z) * transpose_bilinear(psi, GAMMA2)))


def majorana_spinor(upper, z=1.0):
    """Build a spinor with ``psi = z g2 conj(psi)`` from its upper half.

    ``upper`` has shape ``(2, ...)``; the lower half is fixed by the
    constraint to ``-z sigma2 conj(upper)``.
    """
    _check_unimodular(z)
    upper = np.asarray(upper, dtype=complex)
    lower = -z * np.tensordot(SIGMA2, np.conj(upper), axes=(1, 0))
    return np.concatenate([upper, lower], axis=0)


def gamma_identities():
    """Evaluate the fixed set of representation identities.

    Returns a dict mapping identity name to the max-abs residual; every
    residual is exactly zero for this representation.
    """
    g0, g1, g2, g3 = GAMMA
    res = {}

    def r(a, b):
        return float(np.max(np.abs(a - b)))

    res["anticommutation"] = max(
        r(GAMMA[m] @ GAMMA[n] + GAMMA[n] @ GAMMA[m], 2 * MINKOWSKI[m, n] * I4)
        for m in range(4) for n in range(4))
    res["alpha_hermitian"] = max(r(a.conj().T, a) for a in ALPHA)
    res["gamma0_gammak_is_alpha"] = max(r(g0 @ GAMMA[k + 1], ALPHA[k]) for k in range(3))
    res["gamma5_product"] = r(-1j * g0 @ g1 @ g2 @ g3, GAMMA5)
    res["gamma0_gamma5_anticommute"] = r(g0 @ GAMMA5, -GAMMA5 @ g0)
    res["gamma5_gamma2_anticommute"] = r(GAMMA5 @ g2 + g2 @ GAMMA5, 0 * I4)
    for ell in (1, 2, 3):
        gl = GAMMA[ell]
        res[f"transpose_gamma{ell}"] = r(gl.T @ g0 @ g2, g2 @ g0 @ gl)
    res["gamma2_gamma0_block"] = r(g2 @ g0, _block(O2, -SIGMA2, -SIGMA2, O2))
    res["gamma0_gamma5_block"] = r(g0 @ GAMMA5, _block(O2, -I2, I2, O2))
    res["gamma2_gamma0_gamma2"] = r(g2 @ g0 @ g2, g0)
    return res
