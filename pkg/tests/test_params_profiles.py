"""Potentials, physical parameters and initial-data profiles."""

import numpy as np
import pytest

from desitter_dirac import spinor as sa
from desitter_dirac.errors import ConfigError, PreconditionError
from desitter_dirac.evolution import Grid3
from desitter_dirac.params import CHANNELS, Potential, PhysicalParams
from desitter_dirac.profiles import (bump, compact_bump, from_dict, gaussian_bump, majorana_bump,
                                     parse_complex, parse_spinor, plane_mode, uniform_field)


def test_channel_matrices_are_hermitian():
    for mat in CHANNELS.values():
        assert np.array_equal(mat, mat.conj().T)


@pytest.mark.parametrize("name, compatible", [
    ("gamma0", True), ("gamma5", True), ("g0g5", True),
    ("scalar", False), ("alpha1", False), ("alpha2", False), ("alpha3", False),
])
def test_gamma2_condition_per_channel(name, compatible):
    M = CHANNELS[name]
    res = np.max(np.abs(M.T @ sa.GAMMA2 + sa.GAMMA2 @ M))
    assert (res == 0) == compatible


def test_potential_check_and_flags():
    pts = np.random.default_rng(0).uniform(-1, 1, (5, 3))
    good = Potential([("gamma0", {"profile": "gaussian", "amplitude": 0.3, "omega": 2.0}),
                      ("g0g5", {"profile": "constant", "amplitude": -0.1})], gamma2_condition=True)
    res = good.check(pts, [0.0, 0.5])
    assert res["gamma2_condition"] == 0 and res["self_adjoint"] == 0
    bad = Potential([("alpha1", {"profile": "constant", "amplitude": 0.2})], gamma2_condition=True)
    with pytest.raises(PreconditionError):
        bad.check(pts, [0.0])
    with pytest.raises(ConfigError):
        Potential([("gamma9", {})])
    with pytest.raises(ConfigError):
        Potential([("gamma0", {"profile": "sawtooth"})])


def test_potential_apply_matches_matrix():
    g = Grid3(8, 1.0)
    pot = Potential([("gamma5", {"profile": "gaussian", "amplitude": 0.4, "width": 0.5}),
                     ("scalar", {"profile": "constant", "amplitude": 0.2})])
    psi = np.random.default_rng(1).normal(size=(4, 8, 8, 8)) + 0j
    out = pot.apply(g.mesh, 0.3, psi)
    idx = (2, 5, 1)
    x = g.mesh[(slice(None),) + idx]
    assert np.allclose(out[(slice(None),) + idx], pot.matrix_at(x, 0.3) @ psi[(slice(None),) + idx])
    assert pot.max_norm(g.mesh, 0.0) >= np.linalg.norm(pot.matrix_at(x, 0.0), 2)


def test_physical_params():
    p = PhysicalParams(1, 0.5j)
    assert p.delta_plus == -2.0 and p.delta_minus == -4.0
    assert p.is_linear and not p.has_potential
    assert PhysicalParams(1.0, 0.0, Potential([])).has_potential is False
    assert p.linear() is not p


def test_bump_profile():
    assert bump(np.array([0.0]), 1.0)[0] == 1.0
    assert bump(np.array([1.0, 2.0]), 1.0).tolist() == [0.0, 0.0]
    prof = compact_bump(2.0, 1.5, power=2.0)
    assert prof.support_radius == 1.5
    assert prof(np.zeros((1, 3)))[0, 0] == 2.0
    with pytest.raises(ConfigError):
        compact_bump(power=0.0)


def test_profiles_on_grid_and_scaling():
    g = Grid3(8, 2.0)
    prof = gaussian_bump(1.0, 0.5, spinor_direction=(1, 1j, 0, 0))
    vals = prof.on_grid(g)
    assert vals.shape == (4, 8, 8, 8)
    assert np.allclose(np.sum(np.abs(vals) ** 2, axis=0), np.exp(-g.radius**2 / 0.25))
    assert np.allclose(prof.scaled(3.0).on_grid(g), 3 * vals)
    assert np.all(uniform_field(2.0).on_grid(g)[0] == 2.0)
    pm = plane_mode(g, (1, 0, 0))
    assert np.allclose(pm.on_grid(g)[0], np.exp(1j * np.pi * g.mesh[0] / 2))


def test_majorana_bump_is_majorana_everywhere():
    g = Grid3(8, 2.0)
    z = np.exp(0.4j)
    vals = majorana_bump(1.5, 1.8, upper=(1, 0.5j), z=z).on_grid(g)
    assert np.max(sa.majorana_defect(vals, z)) < 1e-28
    with pytest.raises(ConfigError):
        majorana_bump(shape="square")


def test_parsers():
    assert parse_complex([0, 1]) == 1j
    assert parse_complex("0.5j") == 0.5j
    assert parse_complex(2) == 2
    with pytest.raises(ConfigError):
        parse_complex([1, 2, 3])
    with pytest.raises(ConfigError):
        parse_complex("abc")
    with pytest.raises(ConfigError):
        parse_complex(None)
    assert parse_spinor([1, [0, 1], "2j", 0]) == (1, 1j, 2j, 0)
    with pytest.raises(ConfigError):
        parse_spinor([1, 2])


def test_from_dict():
    g = Grid3(8, 2.0)
    prof = from_dict({"profile": "majorana_bump", "upper": [1, [0, 0.5]], "z": 1, "width": 1.5})
    assert prof.kind == "compact"
    assert from_dict({"profile": "uniform", "amplitude": 2}).kind == "uniform"
    assert from_dict({"profile": "plane_mode", "k": [1, 0, 0]}, g).kind == "plane"
    with pytest.raises(ConfigError):
        from_dict({"profile": "plane_mode"})
    with pytest.raises(ConfigError):
        from_dict({"profile": "triangle"})
    with pytest.raises(ConfigError):
        from_dict({"profile": "gaussian_bump", "colour": 3})
    with pytest.raises(ConfigError):
        gaussian_bump(spinor_direction=(0, 0, 0, 0))
