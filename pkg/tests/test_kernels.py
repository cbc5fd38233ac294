"""Spherical means, Kirchhoff waves, kernel operators and the explicit free solution."""

import numpy as np
import pytest
from scipy.integrate import dblquad

from desitter_dirac import spinor as sa
from desitter_dirac.errors import UnsupportedConfiguration
from desitter_dirac.geometry import phi
from desitter_dirac.kernels import (apply_G, apply_K1, free_dirac_solution, kirchhoff_wave,
                                    represented_field, sphere_rule, spherical_mean)
from desitter_dirac.nonlinearity import NonlinSpec
from desitter_dirac.params import Potential, PhysicalParams
from desitter_dirac.profiles import compact_bump, gaussian_bump
from desitter_dirac.special import KernelSpec, kernel_E


def r2(points):
    return np.sum(points**2, axis=-1)


def test_sphere_rules_integrate_polynomials():
    for kind in ("lebedev", "gauss"):
        nodes, w = sphere_rule(29, kind)
        assert w.sum() == pytest.approx(1.0, abs=1e-14)
        assert np.allclose(np.linalg.norm(nodes, axis=1), 1.0)
        # <z^2> = 1/3, <x^2 y^2 z^2> = 1/105
        assert w @ nodes[:, 2] ** 2 == pytest.approx(1 / 3, abs=1e-14)
        assert w @ np.prod(nodes**2, axis=1) == pytest.approx(1 / 105, abs=1e-14)


def test_spherical_mean_of_quadratic():
    x = np.array([0.3, -0.2, 0.5])
    for rad in (0.0, 0.4, 1.3, -0.7):
        # mean of |y|^2 over |y - x| = r is |x|^2 + r^2; V carries a factor r
        assert spherical_mean(r2, x, rad) == pytest.approx(rad * (x @ x + rad**2), abs=1e-13)


def test_kirchhoff_wave_solves_wave_equation():
    # u_tt = lap u with u(0) = |x|^2, u_t(0) = 0 has u = |x|^2 + 3 t^2
    x = np.array([0.1, 0.7, -0.4])
    for t in (0.2, 0.9):
        assert kirchhoff_wave(r2, x, t) == pytest.approx(x @ x + 3 * t**2, rel=1e-10)


def test_apply_k1_on_constant_data():
    # v = 1 for constant data, so K1[1] = 2 int_0^phi K1(s, t) ds; for M = H/2, K1 = e^{Ht/2}/2
    spec = KernelSpec(0.5, 1.0)
    t = 0.7
    val = apply_K1(lambda p: np.ones(len(p)), np.zeros(3), t, spec)
    assert val == pytest.approx(np.exp(0.5 * t) * phi(t, 1.0), rel=1e-10)
    assert apply_K1(lambda p: np.ones(len(p)), np.zeros(3), 0.0, spec) == 0


def test_apply_g_against_double_quadrature():
    # f(x, b) = g(b) constant in space: v = g(b), leaving a plain double integral of E
    spec = KernelSpec(0.5 + 0.3j, 1.0)
    t = 0.6
    g = np.cos

    def f(points, b):
        return g(b) * np.ones(len(points))

    got = apply_G(f, np.zeros(3), t, spec)

    def part(fn):
        val, _ = dblquad(lambda r, b: fn(g(b) * kernel_E(r, t, b, spec)), 0.0, t, 0.0,
                         lambda b: float(phi(t, 1.0) - phi(b, 1.0)), epsabs=1e-13, epsrel=1e-11)
        return val

    ref = 2 * (part(np.real) + 1j * part(np.imag))
    assert abs(got - ref) <= 1e-7 * abs(ref)


def test_initial_condition_reproduced():
    prof = gaussian_bump(1.0, 0.5, spinor_direction=(1, 0.5, 0.25j, 0))
    x = np.array([0.1, 0.2, 0.3])
    got = free_dirac_solution(prof, x, 0.0, PhysicalParams(1.0, 0.7))
    assert np.allclose(got, prof(x[None])[0], rtol=0, atol=0)


@pytest.mark.parametrize("m", [0.0, 1j, -1j])
def test_huygens_paths_match_generic(m):
    prof = gaussian_bump(1.0, 0.5, spinor_direction=(1, 0.5, 0.25j, 0))
    p = PhysicalParams(1.0, m)
    x = np.array([0.2, 0.1, -0.3])
    fast = free_dirac_solution(prof, x, 0.5, p)
    slow = free_dirac_solution(prof, x, 0.5, p, huygens=False)
    assert np.max(np.abs(fast - slow)) <= 1e-8 * np.max(np.abs(slow))


def test_massless_formula_is_spherical_mean():
    prof = gaussian_bump(1.0, 0.5, spinor_direction=(0.3, 1, 0, 0.2j))
    p = PhysicalParams(1.0, 0.0)
    x, t = np.array([0.3, 0.0, 0.1]), 0.8
    W = represented_field(prof, x, t, p)
    ref = np.exp(0.5 * t) * spherical_mean(prof, x, float(phi(t, 1.0)))
    assert np.allclose(W, ref, rtol=1e-13, atol=1e-15)


@pytest.mark.parametrize("m", [0.0, 0.7, 1j])
def test_pde_residual_is_second_order(m):
    prof = gaussian_bump(1.0, 0.5, spinor_direction=(1, 0.5, 0.25j, 0))
    p = PhysicalParams(1.0, m)
    x, t = np.array([0.2, 0.1, -0.3]), 0.5

    def residual(h):
        f = lambda y, s: free_dirac_solution(prof, y, s, p)
        psi = f(x, t)
        r = (f(x, t + h) - f(x, t - h)) / (2 * h) + 1.5 * psi + 1j * m * sa.apply(sa.GAMMA0, psi)
        for k in range(3):
            e = np.zeros(3)
            e[k] = h
            r = r + np.exp(-t) * sa.apply(sa.ALPHA[k], (f(x + e, t) - f(x - e, t)) / (2 * h))
        return np.max(np.abs(r))

    r1, r2_, r3 = residual(0.08), residual(0.04), residual(0.02)
    assert r3 < 1e-3
    assert 3.5 < r1 / r2_ < 4.5
    assert 3.5 < r2_ / r3 < 4.5


@pytest.mark.parametrize("m", [0.0, 1j, -1j])
def test_strong_huygens_support(m):
    R, t = 1.0, 0.8
    prof = compact_bump(1.0, R, spinor_direction=(1, 0.2, 0, 0.5j))
    p = PhysicalParams(1.0, m)
    outer = R + float(phi(t, 1.0))
    rng = np.random.default_rng(3)
    for _ in range(4):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        assert np.max(np.abs(free_dirac_solution(prof, (outer + 0.05) * d, t, p))) == 0.0
        assert np.max(np.abs(free_dirac_solution(prof, 0.3 * d, t, p))) > 1e-3


def test_rejects_potential_and_nonlinearity():
    prof = gaussian_bump()
    pot = Potential([("gamma0", {"profile": "constant", "amplitude": 0.1})])
    with pytest.raises(UnsupportedConfiguration):
        free_dirac_solution(prof, np.zeros(3), 0.3, PhysicalParams(1.0, 0.0, pot))
    with pytest.raises(UnsupportedConfiguration):
        free_dirac_solution(prof, np.zeros(3), 0.3,
                            PhysicalParams(1.0, 0.0, nonlin=NonlinSpec("ChiralF")))
