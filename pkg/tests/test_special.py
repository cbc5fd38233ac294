"""Gauss hypergeometric function and the scalar kernels, against mpmath."""

import numpy as np
import pytest

from desitter_dirac.errors import DomainError
from desitter_dirac.special import KernelSpec, gauss_2f1, kernel_E, kernel_K1
from oracles import hyp2f1_256 as oracle


def test_log_form():
    for z in (0.1, 0.5, 0.9):
        ref = -np.log1p(-z) / z
        assert abs(gauss_2f1(1, 1, 2, z) - ref) <= 1e-12 * abs(ref)


def test_terminating_polynomial_is_exact():
    z = np.linspace(-5, 5, 21)
    assert np.array_equal(gauss_2f1(-1, -1, 1, z), (1 + z).astype(complex))


def test_random_points_against_256_bit_oracle():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        mu = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        a = 0.5 - mu
        z = rng.uniform(0.0, 0.999)
        got = gauss_2f1(a, a, 1.0, z)
        ref = oracle(a, a, 1.0, z)
        worst = max(worst, abs(got - ref) / abs(ref))
    assert worst < 1e-12


@pytest.mark.parametrize("a, b, c", [
    (0.3, 0.7, 1.0),          # c - a - b = 0: logarithmic case
    (0.25, 0.25, 1.0),
    (1.0, 1.0, 2.0),
    (0.5, 1.5, 4.0),          # integer c - a - b = 2
    (1.2 + 0.3j, 1.2 + 0.3j, 1.0),
    (0.5 - 1j, 0.5 - 1j, 1.0),
    (-0.5, -0.5, 1.0),
    (2.0, 1.0, 1.5),
    (1.0, 1.0, 4.0),
])
@pytest.mark.parametrize("z", [-3.0, -0.7, 0.0, 0.3, 0.6, 0.95, 0.9999])
def test_parameter_families(a, b, c, z):
    ref = oracle(a, b, c, z)
    got = gauss_2f1(a, b, c, z)
    assert abs(got - ref) <= 1e-11 * max(abs(ref), 1.0)


def test_near_integer_excess_is_stable():
    for eps in (1e-4, 1e-8, 1e-13):
        a = 0.5 + eps
        ref = oracle(a, 0.5, 1.0, 0.9)
        assert abs(gauss_2f1(a, 0.5, 1.0, 0.9) - ref) <= 1e-10 * abs(ref)


def test_vectorised_matches_scalar():
    z = np.array([-2.0, -0.2, 0.1, 0.7, 0.99])
    vec = gauss_2f1(0.3, 1.1, 2.5, z)
    assert vec.shape == z.shape
    for zi, vi in zip(z, vec):
        # the vector sum may run a few more terms than the scalar one
        assert abs(vi - gauss_2f1(0.3, 1.1, 2.5, zi)) <= 1e-14 * abs(vi)


def test_domain_errors():
    with pytest.raises(DomainError):
        gauss_2f1(1, 1, 0, 0.5)
    with pytest.raises(DomainError):
        gauss_2f1(1, 1, -2, 0.5)
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 0.5, 1, 1.0)
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 0.5, 1, 1.5)


def test_k1_examples():
    one = KernelSpec(1.5, 1.0)
    assert kernel_K1(0.0, 0.0, one) == pytest.approx(0.5)
    assert kernel_K1(0.5, np.log(2), one) == pytest.approx(np.exp(-np.log(2) / 2), rel=1e-14)
    for M in (0.5, -0.5):
        t = 0.8
        assert kernel_K1(0.2, t, KernelSpec(M, 1.0)) == pytest.approx(0.5 * np.exp(0.5 * t))


@pytest.mark.parametrize("H", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("factor", [0.5, -0.5, 1.5])
def test_k1_closed_forms_on_cone_grid(H, factor):
    spec = KernelSpec(factor * H, H)
    t = np.linspace(0.05, 2.0, 20)[:, None]
    frac = np.linspace(0.0, 0.98, 20)[None, :]
    r = frac * (1 - np.exp(-H * t)) / H
    closed = kernel_K1(r, t, spec, closed_form=True)
    generic = kernel_K1(r, t, spec, closed_form=False)
    assert np.max(np.abs(closed - generic) / np.abs(generic)) < 1e-10


def test_kernel_symmetry_and_realness():
    rng = np.random.default_rng(5)
    for M in (0.3, 1.1, 0.5 + 0.7j):
        spec = KernelSpec(M, 1.0)
        for _ in range(10):
            t, t0 = rng.uniform(0, 2, 2)
            rmax = abs(np.exp(-t0) - np.exp(-t))
            r = rng.uniform(0, 1) * rmax
            a = kernel_E(r, t, t0, spec)
            b = kernel_E(r, t0, t, spec)
            assert abs(a - b) <= 1e-12 * abs(a)
            if np.isreal(M):
                assert abs(np.imag(a)) <= 1e-12 * abs(a)


def test_kernel_rejects_points_outside_cone():
    with pytest.raises(DomainError):
        kernel_E(2.0, 1.0, 0.0, KernelSpec(0.7, 1.0))
    with pytest.raises(DomainError):
        KernelSpec(0.5, 0.0)


def test_kernel_spec_constructors():
    assert KernelSpec.plus(0.7, 1.0).M == 0.5 + 0.7j
    assert KernelSpec.minus(0.7, 1.0).M == 0.5 - 0.7j
    # m = iH routes M+ to -H/2 and M- to 3H/2
    assert KernelSpec.plus(1j, 1.0).M == -0.5
    assert KernelSpec.minus(1j, 1.0).M == 1.5
