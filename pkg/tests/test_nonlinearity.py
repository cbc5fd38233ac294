"""Nonlinear terms: algebraic structure, the Majorana split and Lipschitz probes."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from desitter_dirac import spinor as sa
from desitter_dirac.errors import ConfigError
from desitter_dirac.nonlinearity import (KINDS, NonlinSpec, blowup_G, eval_F, eval_reduced_f1,
                                         lipschitz_probe, nonlinear_rate, source_term)

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
spinors = st.builds(lambda re, im: re + 1j * im,
                    arrays(np.float64, 4, elements=finite), arrays(np.float64, 4, elements=finite))
halves = st.builds(lambda re, im: re + 1j * im,
                   arrays(np.float64, 2, elements=finite), arrays(np.float64, 2, elements=finite))


@pytest.mark.parametrize("kind", KINDS)
def test_zero_maps_to_zero(kind):
    spec = NonlinSpec(kind)
    assert np.all(eval_F(np.zeros(4, dtype=complex), spec) == 0)
    assert np.all(source_term(np.zeros((4, 2, 2, 2), dtype=complex), spec) == 0)


def test_power_abs_psi_example():
    out = eval_F(np.array([1, 0, 0, 0], dtype=complex), NonlinSpec("PowerAbsPsi", alpha=2.0))
    assert np.array_equal(out, np.array([1, 0, 0, 0], dtype=complex))


def test_power_abs_sign_and_broadcast():
    psi = np.array([3, 4j, 0, 0], dtype=complex)
    plus = eval_F(psi, NonlinSpec("PowerAbs", alpha=1.0))
    minus = eval_F(psi, NonlinSpec("PowerAbs", alpha=1.0, sign=-1))
    assert np.allclose(plus, 25.0)
    assert np.allclose(minus, -25.0)


def test_cubic_gamma0():
    psi = np.array([1, 0, 0.5j, 0], dtype=complex)
    xi = 1 - 0.25
    assert np.allclose(eval_F(psi, NonlinSpec("CubicGamma0")), xi * sa.GAMMA0 @ psi)


@settings(max_examples=100, deadline=None)
@given(spinors)
def test_chiral_output_lies_in_matrix_family(psi):
    spec = NonlinSpec("ChiralF")
    xi, eta, _ = sa.chiral_density(psi)
    ref = xi * psi + 1j * eta * sa.GAMMA5 @ psi
    assert np.allclose(eval_F(psi, spec), ref, rtol=1e-12, atol=1e-12)


@settings(max_examples=100, deadline=None)
@given(halves, st.floats(0, 2 * np.pi))
def test_chiral_vanishes_on_majorana_spinors(upper, theta):
    psi = sa.majorana_spinor(upper, np.exp(1j * theta))
    out = eval_F(psi, NonlinSpec("ChiralF"))
    assert np.max(np.abs(out)) <= 1e-12 * (1 + np.sum(np.abs(psi) ** 2)) ** 1.5


@settings(max_examples=100, deadline=None)
@given(spinors, st.floats(0.1, 3), st.floats(0.5, 4))
def test_blowup_equality_case(psi, c0, alpha):
    spec = NonlinSpec("BlowupG", alpha=alpha, c0=c0)
    G = blowup_G(psi, spec)
    n = np.linalg.norm(psi)
    lhs = np.real(np.vdot(psi, G * psi))
    assert lhs == pytest.approx(c0 * n ** (2 + alpha), rel=1e-12, abs=1e-300)
    # G is a scalar, so it commutes with gamma^0
    assert np.allclose(sa.GAMMA0 @ (G * psi), G * (sa.GAMMA0 @ psi))
    assert np.allclose(eval_F(psi, spec), G * sa.GAMMA0 @ psi)
    assert np.allclose(source_term(psi, spec), G * psi)


def test_chiral_source_convention():
    psi = np.array([1, 0.5, 0.2j, -0.3], dtype=complex)
    spec = NonlinSpec("ChiralF")
    assert np.allclose(source_term(psi, spec), -1j * sa.GAMMA0 @ eval_F(psi, spec))


def test_reduced_f1_examples():
    spec = NonlinSpec("ChiralF")
    Psi = sa.majorana_spinor(np.array([1.0, 0.5j]), 1.0)
    assert np.all(eval_reduced_f1(np.zeros(4, dtype=complex), Psi, spec) == 0)
    chi = np.array([0.3, -0.1j, 0.2, 0.05], dtype=complex)
    only_xi = NonlinSpec("ChiralF", beta_fn=lambda xi, eta: 0 * eta)
    xi = np.real(np.vdot(chi, sa.GAMMA0 @ chi))
    assert np.allclose(eval_reduced_f1(chi, np.zeros(4, dtype=complex), only_xi), xi * chi)
    generic = np.array([1, 0, 0.3, 0.2j], dtype=complex)
    out = eval_reduced_f1(np.zeros(4, dtype=complex), generic, spec)
    assert np.allclose(out, eval_F(generic, spec))
    assert np.max(np.abs(out)) > 0.1


@settings(max_examples=100, deadline=None)
@given(spinors, halves)
def test_split_consistency_for_majorana_background(psi, upper):
    spec = NonlinSpec("ChiralF")
    Psi = sa.majorana_spinor(upper, 1.0)
    lhs = eval_F(psi, spec)
    rhs = eval_reduced_f1(psi - Psi, Psi, spec) + eval_F(Psi, spec)
    scale = (1 + np.sum(np.abs(psi) ** 2) + np.sum(np.abs(Psi) ** 2)) ** 1.5
    assert np.max(np.abs(lhs - rhs)) <= 1e-11 * scale


def test_reduced_f1_smallness_law():
    spec = NonlinSpec("ChiralF")
    rng = np.random.default_rng(7)
    ratios = []
    for _ in range(200):
        Psi = sa.majorana_spinor(rng.normal(size=2) + 1j * rng.normal(size=2), 1.0)
        chi = (rng.normal(size=4) + 1j * rng.normal(size=4)) * 10 ** rng.uniform(-6, 1)
        f1 = eval_reduced_f1(chi, Psi, spec)
        nc, nP = np.linalg.norm(chi), np.linalg.norm(Psi)
        ratios.append(np.linalg.norm(f1) / (nc * (nc + nP) ** 2))
    assert max(ratios) < 10.0


def test_reduced_f1_needs_chiral_kind():
    with pytest.raises(ConfigError):
        eval_reduced_f1(np.zeros(4), np.zeros(4), NonlinSpec("PowerAbsPsi"))


def test_spec_validation():
    with pytest.raises(ConfigError):
        NonlinSpec("Quartic")
    with pytest.raises(ConfigError):
        NonlinSpec("PowerAbs", alpha=0.0)
    with pytest.raises(ConfigError):
        NonlinSpec("PowerAbs", sign=2)
    with pytest.raises(ConfigError):
        NonlinSpec("ChiralF", alpha_fn=lambda xi, eta: 1.0 + 0 * xi)
    assert NonlinSpec.from_dict(None) is None
    assert NonlinSpec.from_dict({"kind": "none"}) is None
    spec = NonlinSpec.from_dict({"kind": "ChiralF", "alpha_fn": {"xi": 2.0}, "beta_fn": {"eta": -1}})
    assert spec.alpha_fn(1.0, 5.0) == 2.0
    assert spec.beta_fn(1.0, 5.0) == -5.0


def test_lipschitz_probe():
    c1 = lipschitz_probe(NonlinSpec("CubicGamma0"), samples=64, seed=0)
    c2 = lipschitz_probe(NonlinSpec("CubicGamma0"), samples=64, seed=1)
    assert np.isfinite(c1) and c1 > 0
    assert abs(c1 / c2 - 1) < 0.2
    assert np.isfinite(lipschitz_probe(NonlinSpec("PowerAbsPsi"), samples=16))
    with pytest.raises(ValueError):
        lipschitz_probe(NonlinSpec("PowerAbsPsi"), samples=1)


def test_nonlinear_rate_scales_with_amplitude():
    spec = NonlinSpec("BlowupG", alpha=2.0)
    psi = np.ones((4, 2, 2, 2), dtype=complex)
    assert nonlinear_rate(2 * psi, spec) == pytest.approx(4 * nonlinear_rate(psi, spec))
    assert nonlinear_rate(0 * psi, spec) == 0.0
