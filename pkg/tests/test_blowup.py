"""Blow-up thresholds, lifespans, cone integrals and detection."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad, solve_ivp

from desitter_dirac import blowup as bl
from desitter_dirac import diagnostics as dg
from desitter_dirac.errors import DomainError
from desitter_dirac.evolution import Grid3, SpinorField, evolve
from desitter_dirac.geometry import phi
from desitter_dirac.nonlinearity import NonlinSpec
from desitter_dirac.params import PhysicalParams
from desitter_dirac.profiles import uniform_field
from desitter_dirac.special import gauss_2f1
from oracles import lifespan_scan


def example(E0=48.0, **kw):
    args = dict(H=1.0, m=0.3, c0=1.0, alpha=2.0, R=1.0, E0=E0)
    args.update(kw)
    return bl.BlowupParams(**args)


def test_params_validation():
    for bad in (dict(c0=0.0), dict(alpha=-1.0), dict(R=0.0), dict(E0=-1.0)):
        with pytest.raises(DomainError):
            example(**bad)
    p = example(m=0.2 + 0.5j)
    assert p.A == 4.0
    assert p.c == p.c0


def test_worked_example():
    p = example()
    assert bl.threshold_energy(p) == 24.0
    assert bl.predict_T_expanding(p) == pytest.approx(np.log(2) / 3, rel=1e-14)


def test_threshold_limits_and_monotonicity():
    assert bl.threshold_energy(example(c0=1e12)) < 1e-10
    # 3H/c0 > 1: threshold grows with the exponent 2/alpha
    assert bl.threshold_energy(example(alpha=1.0)) > bl.threshold_energy(example(alpha=2.0))
    with pytest.raises(DomainError):
        bl.threshold_energy(example(H=-1.0))


def test_subcritical_gives_no_prediction():
    assert bl.predict_T_expanding(example(E0=24.0)) is None
    assert bl.predict_T_expanding(example(E0=10.0)) is None


def test_lifespan_limits():
    assert bl.predict_T_expanding(example(E0=24.0 * (1 + 1e-9))) > 5
    assert bl.predict_T_expanding(example(E0=1e12)) < 1e-4


@settings(max_examples=60, deadline=None)
@given(st.floats(25, 1e4), st.floats(1.0, 3.0), st.floats(0.5, 3.0))
def test_lifespan_decreases_in_energy_and_coupling(E0, factor, c0):
    p = example(E0=E0, c0=c0)
    T = bl.predict_T_expanding(p)
    if T is None:
        return
    assert bl.predict_T_expanding(example(E0=E0 * factor, c0=c0)) <= T
    assert bl.predict_T_expanding(example(E0=E0, c0=c0 * factor)) <= T


@pytest.mark.parametrize("R, alpha", [(0.5, 1.0), (0.3, 2.0), (0.8, 0.5), (0.5, 4 / 3)])
def test_cone_integral_closed_form_vs_quadrature(R, alpha):
    for t in (0.05, 0.5, 2.0, 8.0):
        c = bl.cone_integral(t, R, -1.0, alpha)
        q = bl.cone_integral_quad(t, R, -1.0, alpha)
        assert abs(c - q) <= 1e-8 * q


def test_cone_integral_limit_example():
    ref = (2 / 3) * 0.5 ** (-0.5) * np.real(gauss_2f1(1, 1, 2.5, 0.5))
    assert bl.cone_integral_limit(0.5, -1.0, 1.0) == pytest.approx(ref, rel=1e-15)
    tail, _ = quad(lambda s: (0.5 + float(phi(s, -1.0))) ** -1.5, 0, np.inf, epsrel=1e-12)
    assert ref == pytest.approx(tail, rel=1e-9)
    assert bl.cone_integral(40.0, 0.5, -1.0, 1.0) == pytest.approx(ref, rel=1e-9)


def test_cone_integral_flat_and_expanding():
    assert bl.cone_integral(0.0, 1.0, -1.0, 1.0) == 0.0
    # H = 0: power rule
    assert bl.cone_integral(2.0, 1.0, 0.0, 2.0) == pytest.approx(0.5 * (1 - 1 / 9), rel=1e-14)
    assert bl.cone_integral(2.0, 1.0, 0.0, 2 / 3) == pytest.approx(np.log(3.0), rel=1e-14)
    # H > 0: quadrature, bounded below by t (R + 1/H)^(-3 alpha/2)
    v = bl.cone_integral(1.0, 1.0, 1.0, 2.0)
    assert 2.0**-3 < v < 1.0
    with pytest.raises(DomainError):
        bl.cone_integral(-1.0, 1.0, -1.0, 1.0)
    with pytest.raises(DomainError):
        bl.cone_integral(1.0, 1.0, 1.0, 1.0, method="closed")


def test_cone_integral_strictly_increasing():
    t = np.linspace(0.01, 5, 60)
    for H in (-1.0, 0.0, 1.0):
        vals = [bl.cone_integral(s, 0.5, H, 1.0) for s in t]
        assert np.all(np.diff(vals) > 0)


def contracting(E0):
    return bl.BlowupParams(H=-1.0, m=0.0, c0=1.0, alpha=1.0, R=0.5, E0=E0, c=1.0)


def test_contracting_lifespan_against_scan_oracle():
    gate = bl.contracting_gate(contracting(1.0))
    p = contracting(4.0 / gate**2)
    T = bl.predict_T_contracting(p)
    assert np.isfinite(T)
    assert abs(T - lifespan_scan(p)) <= 1e-6 * T


def test_contracting_gate_and_limits():
    gate = bl.contracting_gate(contracting(1.0))
    assert bl.predict_T_contracting(contracting(0.5 / gate**2)) is None
    assert bl.predict_T_contracting(contracting(0.0)) is None
    near = bl.predict_T_contracting(contracting(1.0001 / gate**2))
    far = bl.predict_T_contracting(contracting(1e8))
    assert near > 3 and far < 1e-3
    with pytest.raises(DomainError):
        bl.predict_T_contracting(example())


def test_coercivity_constant():
    # G = c0 |z|^2 with H = 1, m real: 2 c0 - 3/|z|^2 is smallest at |z| = 1e-2
    c = bl.coercivity_constant(1.0, 0.0, 1.0, 2.0, samples=4000)
    assert c < 0
    assert bl.coercivity_constant(-1.0, 0.0, 1.0, 2.0) >= 2.0


def test_bernoulli_solution():
    E0, k, A, alpha = 4.0, 1.5, 3.0, 2.0
    T = bl.bernoulli_blowup_time(E0, k, A, alpha)
    assert np.isfinite(T)
    t = np.linspace(0, 0.95 * T, 50)
    sol = solve_ivp(lambda s, E: k * E ** (1 + alpha / 2) - A * E, (0, t[-1]), [E0],
                    t_eval=t, rtol=1e-12, atol=1e-12)
    assert np.allclose(bl.bernoulli_energy(t, E0, k, A, alpha), sol.y[0], rtol=1e-8)
    assert bl.bernoulli_energy(1.01 * T, E0, k, A, alpha) == np.inf
    # E0 at the threshold k/A: the solution stays finite
    assert bl.bernoulli_blowup_time(2.0, 1.5, 3.0, 2.0) == np.inf
    assert bl.bernoulli_blowup_time(E0, k, 0.0, alpha) == pytest.approx(2 * E0**-1 / (alpha * k))


def test_energy_lower_bound_starts_at_E0_and_diverges():
    p = example()
    lb = bl.energy_lower_bound([0.0, 0.1, 0.5], p)
    assert lb[0] == pytest.approx(48.0)
    assert lb[1] > 0
    assert lb[2] == np.inf


def test_detect_blowup_on_linear_run_is_none():
    g = Grid3(8, 1.0)
    tr = evolve(SpinorField(g, uniform_field().on_grid(g)), 0.2, PhysicalParams(1.0, 0.0),
                store_fields=False, observers=dg.make_observer(g))
    assert bl.detect_blowup(tr, 2.0) is None


def test_detect_blowup_on_exact_bernoulli_samples():
    E0, k, A, alpha = 4.0, 1.5, 3.0, 2.0
    T = bl.bernoulli_blowup_time(E0, k, A, alpha)
    t = np.linspace(0, 0.999 * T, 400)
    recs = [{"t": s, "E": e} for s, e in zip(t, bl.bernoulli_energy(t, E0, k, A, alpha))]
    assert bl.detect_blowup(recs, alpha, outcome="blowup") == pytest.approx(T, rel=1e-3)
    assert bl.detect_blowup(recs, alpha, outcome="completed") is None


def test_detect_blowup_in_cone_variable():
    # E^{-alpha/2} exactly linear in J(t): extrapolation in J recovers the zero
    p = example()
    J = lambda s: bl.cone_integral(s, p.R, p.H, p.alpha)
    t = [0.1, 0.2]
    J_star = 1.7 * J(0.2)
    recs = [{"t": s, "E": (J_star - J(s)) ** (-2 / p.alpha)} for s in t]
    t_star = bl.detect_blowup(recs, p.alpha, outcome="blowup", p=p)
    assert J(t_star) == pytest.approx(J_star, rel=1e-10)


def test_surrogate_blowup_time_within_five_percent():
    g = Grid3(8, 1.0)
    nl = NonlinSpec("BlowupG", alpha=2.0, c0=1.0)
    for m, direction in ((0.0, (1, 0, 0, 0)), (0.25j, (0, 0, 1, 0))):
        p = PhysicalParams(1.0, m, nonlin=nl)
        f0 = uniform_field(2.0, direction).on_grid(g)
        E0 = dg.energy(f0, g)
        s = dg.xi_moment(f0, g) / E0
        k = bl.uniform_surrogate_rate(1.0, 2.0, (2 * g.L) ** 3)
        T = bl.bernoulli_blowup_time(E0, k, 3.0 - 2 * m.imag * s if m else 3.0, 2.0)
        tr = evolve(SpinorField(g, f0), 2 * T, p, dissipation=0.0, sample_every=T / 200,
                    store_fields=False, observers=dg.make_observer(g))
        assert tr.outcome == "blowup"
        assert abs(bl.detect_blowup(tr, 2.0) / T - 1) < 0.05


def test_inequality_chain_on_synthetic_records():
    p = example()
    # exact Bernoulli growth with K = 1, which dominates K(t) = (1 + phi)^(-3)
    T = bl.bernoulli_blowup_time(48.0, 1.0, 3.0, 2.0)
    t = np.linspace(0, 0.9 * T, 200)
    fast = [{"t": s, "E": e} for s, e in zip(t, bl.bernoulli_energy(t, 48.0, 1.0, 3.0, 2.0))]
    ok, worst = bl.check_inequality_chain(fast, p)
    assert ok and worst < 0
    slow = [{"t": s, "E": 48.0 * np.exp(-3 * s)} for s in t]
    ok, worst = bl.check_inequality_chain(slow, p)
    assert not ok and worst > 0.05
