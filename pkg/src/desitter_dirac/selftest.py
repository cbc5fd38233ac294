"""
Fast deterministic invariant suite behind ``desitter-dirac selftest``.

Each check yields one CSV row ``check, value, tolerance, passed``. Values are
printed with 17 significant digits and no timings are recorded, so two runs
at the same thread count produce identical files.
"""

import csv

import numpy as np

from . import blowup as bl
from . import diagnostics as dg
from . import spinor as sa
from .evolution import Grid3, SpinorField, evolve
from .nonlinearity import NonlinSpec, eval_reduced_f1
from .params import PhysicalParams, Potential
from .profiles import compact_bump, majorana_bump, uniform_field
from .scattering import check_scattering_condition
from .special import KernelSpec, gauss_2f1, kernel_K1


def _algebra():
    worst = max(float(np.max(np.abs(r))) for r in sa.gamma_identities().values())
    yield "gamma_identities", worst, 0.0


def _hypergeometric():
    z = np.array([0.1, 0.5, 0.9])
    err = np.max(np.abs(gauss_2f1(1, 1, 2, z) + np.log1p(-z) / z) / np.abs(np.log1p(-z) / z))
    yield "f11_2_log_form", float(err), 1e-12
    z = np.linspace(-3, 3, 13)
    yield "f_m1m1_1_polynomial", float(np.max(np.abs(gauss_2f1(-1, -1, 1, z) - (1 + z)))), 1e-15


def _kernels():
    r, t = np.meshgrid(np.linspace(0, 0.9, 8), np.linspace(0.1, 1.5, 8))
    worst = 0.0
    for H in (0.5, 1.0, 2.0):
        rr = r * (1 - np.exp(-H * t)) / H
        for M in (H / 2, -H / 2, 1.5 * H):
            spec = KernelSpec(M, H)
            closed = kernel_K1(rr, t, spec, closed_form=True)
            generic = kernel_K1(rr, t, spec, closed_form=False)
            worst = max(worst, float(np.max(np.abs(generic - closed) / np.abs(closed))))
    yield "k1_closed_vs_generic", worst, 1e-10


def _free_run():
    g = Grid3(16, 4.0)
    prof = compact_bump(1.0, 2.0, spinor_direction=(1, 0.5, 0.25j, 0))
    p = PhysicalParams(1.0, 0.7)
    tr = evolve(SpinorField(g, prof.on_grid(g)), 0.5, p, cfl=0.1, dissipation=0.0,
                sample_every=0.05, store_fields=False, observers=dg.make_observer(g))
    rep = dg.check_energy_identity(tr.records, p, 1e-6)
    yield "energy_conservation_real_mass", rep.max_violation, 1e-6
    rep = dg.check_gamma2_law(tr.records, p, 1e-6)
    yield "gamma2_law_free", rep.max_violation, 1e-6
    pot = Potential([("gamma0", {"profile": "gaussian", "amplitude": 0.3, "width": 1.0}),
                     ("gamma5", {"profile": "constant", "amplitude": 0.2})],
                    gamma2_condition=True)
    pv = PhysicalParams(1.0, 0.5j, pot)
    tr = evolve(SpinorField(g, prof.on_grid(g)), 0.5, pv, cfl=0.1, dissipation=0.0,
                sample_every=0.05, store_fields=False, observers=dg.make_observer(g))
    yield "gamma2_law_potential", dg.check_gamma2_law(tr.records, pv, 1e-6).max_violation, 1e-6
    yield ("energy_identity_complex_mass",
           dg.check_energy_identity(tr.records, pv, 1e-4, "simpson").max_violation, 1e-4)


def _majorana():
    g = Grid3(16, 4.0)
    prof = majorana_bump(1.0, 2.0, upper=(1, 0.5j), z=1.0)
    p = PhysicalParams(1.0, 0.7, nonlin=NonlinSpec("ChiralF"))
    tr = evolve(SpinorField(g, prof.on_grid(g)), 0.5, p, cfl=0.2, dissipation=0.01,
                sample_every=0.05, store_fields=False, observers=dg.make_observer(g))
    E0 = tr.records[0]["E"]
    yield "majorana_defect", max(r["defect"] for r in tr.records) / E0, 1e-8
    Psi = prof.on_grid(g)
    yield ("reduced_f1_vanishes",
           float(np.max(np.abs(eval_reduced_f1(np.zeros_like(Psi), Psi, p.nonlin)))), 0.0)


def _blowup():
    p = bl.BlowupParams(1.0, 0.0, 1.0, 2.0, 1.0, 48.0)
    yield "threshold_worked_example", abs(bl.threshold_energy(p) - 24.0), 1e-12
    yield "lifespan_worked_example", abs(bl.predict_T_expanding(p) - np.log(2) / 3), 1e-12
    worst = 0.0
    for t in (0.1, 1.0, 3.0):
        c = bl.cone_integral(t, 0.5, -1.0, 1.0)
        q = bl.cone_integral_quad(t, 0.5, -1.0, 1.0)
        worst = max(worst, abs(c - q) / q)
    yield "cone_integral_closed_vs_quad", worst, 1e-8
    g = Grid3(8, 1.0)
    A = 2.0
    prof = uniform_field(A, (1, 0, 0, 0))
    nl = NonlinSpec("BlowupG", alpha=2.0, c0=1.0)
    pp = PhysicalParams(1.0, 0.0, nonlin=nl)
    E0 = dg.energy(prof.on_grid(g), g)
    k = bl.uniform_surrogate_rate(1.0, 2.0, (2 * g.L) ** 3)
    t_exact = bl.bernoulli_blowup_time(E0, k, 3.0, 2.0)
    tr = evolve(SpinorField(g, prof.on_grid(g)), 2 * t_exact, pp, cfl=0.4, dissipation=0.0,
                sample_every=t_exact / 200, store_fields=False, observers=dg.make_observer(g))
    t_star = bl.detect_blowup(tr, 2.0)
    yield "bernoulli_surrogate_time", abs(t_star / t_exact - 1), 0.05


def _scattering():
    ok1, _ = check_scattering_condition(PhysicalParams(1.0, 0.5j), 1.0)
    ok2, _ = check_scattering_condition(PhysicalParams(1.0, 0.25j), 1.0)
    _, kappa = check_scattering_condition(PhysicalParams(1.0, 0.7), 2.0)
    yield "scattering_condition_examples", float((ok1 is False) + (ok2 is True) - 2), 0.0
    yield "scattering_exponent_cubic", abs(kappa + 3.0), 1e-15


SUITE = (_algebra, _hypergeometric, _kernels, _free_run, _majorana, _blowup, _scattering)


def run(path=None):
    """Run every check; returns ``(all_passed, rows)`` and writes a CSV when ``path`` is given."""
    rows = []
    for block in SUITE:
        for name, value, tol in block():
            rows.append((name, float(value), float(tol), bool(abs(value) <= tol)))
    if path is not None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(("check", "value", "tolerance", "passed"))
            for name, value, tol, ok in rows:
                w.writerow((name, dg.fmt(value), dg.fmt(tol), "PASS" if ok else "FAIL"))
    return all(r[3] for r in rows), rows
