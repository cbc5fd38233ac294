"""
Runtime checks of the energy, gamma^2 and chirality laws along trajectories.

All spatial integrals are grid sums times ``dx^3`` (the periodic trapezoid
rule); time integrals over sample histories use the trapezoid rule unless
``quadrature="simpson"`` is requested.

The integrated quantities tracked per sample are

* ``E = int |psi|^2``,
* ``Q = int psi^T g2 psi``,
* ``Xi = int psi^* g0 psi``,
* the chiral charge ``int rho`` with ``rho = sqrt(xi^2 + eta^2)``,
* the Majorana defect ``D_z = int |psi - z g2 conj(psi)|^2``.

``D_z = 2E + 2 Re(conj(z) Q)`` exactly.
"""

import csv
import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, cumulative_trapezoid

from . import spinor as sa
from .geometry import phi

SUPPORT_THRESHOLD = 1e-8
CSV_COLUMNS = ("t", "E", "E_envelope_hi", "E_envelope_lo", "Q_re", "Q_im",
               "chiral_charge", "support_radius")


def energy(values, grid):
    """``int |psi|^2 dx`` as ``dx^3 * sum |psi|^2``."""
    return float(grid.cell_volume * np.sum(np.abs(values) ** 2))


def gamma2_bilinear(values, grid):
    """``Q = int psi^T g2 psi dx``."""
    return complex(grid.cell_volume * np.sum(sa.transpose_bilinear(values, sa.GAMMA2)))


def xi_moment(values, grid):
    """``int psi^* g0 psi dx``."""
    return float(grid.cell_volume * np.sum(np.real(sa.bilinear(values, sa.GAMMA0))))


def chiral_charge(values, grid):
    """``int rho dx`` with ``rho^2 = xi^2 + eta^2``."""
    _, _, rho2 = sa.chiral_density(values)
    return float(grid.cell_volume * np.sum(np.sqrt(np.maximum(rho2, 0.0))))


def defect_integral(values, grid, z=1.0):
    """``int |psi - z g2 conj(psi)|^2 dx``."""
    return float(grid.cell_volume * np.sum(sa.majorana_defect(values, z)))


def mass_outside(values, grid, radius, center=(0.0, 0.0, 0.0)):
    """Fraction of ``int |psi|^2`` carried by points with ``|x - center| > radius``."""
    dens = np.sum(np.abs(values) ** 2, axis=0)
    total = dens.sum()
    if total == 0:
        return 0.0
    r = _radius(grid, center)
    return float(dens[r > radius].sum() / total)


def _radius(grid, center):
    c = np.asarray(center, dtype=float).reshape(3, 1, 1, 1)
    return np.sqrt(np.sum((grid.mesh - c) ** 2, axis=0))


def support_radius(values, grid, threshold=SUPPORT_THRESHOLD, center=(0.0, 0.0, 0.0)):
    """Smallest grid radius ``r`` with mass fraction outside ``|x - c| <= r`` below ``threshold``."""
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    dens = np.sum(np.abs(values) ** 2, axis=0).ravel()
    total = dens.sum()
    if total == 0:
        return 0.0
    r = _radius(grid, center).ravel()
    order = np.argsort(r, kind="stable")
    rs = r[order]
    # mass strictly outside rs[i]: suffix sums over larger radii
    outside = np.concatenate([np.cumsum(dens[order][::-1])[::-1][1:], [0.0]])
    # group equal radii so "outside" means strictly larger radius
    last_of_group = np.r_[rs[1:] != rs[:-1], True]
    ok = last_of_group & (outside <= threshold * total)
    return float(rs[np.argmax(ok)])


def sample_record(values, grid, t, z=1.0, center=(0.0, 0.0, 0.0), threshold=SUPPORT_THRESHOLD):
    """All per-sample integrals as a dict."""
    Q = gamma2_bilinear(values, grid)
    return {
        "t": float(t),
        "E": energy(values, grid),
        "Q_re": Q.real,
        "Q_im": Q.imag,
        "Xi": xi_moment(values, grid),
        "chiral_charge": chiral_charge(values, grid),
        "defect": defect_integral(values, grid, z),
        "support_radius": support_radius(values, grid, threshold, center),
    }


def make_observer(grid, z=1.0, center=(0.0, 0.0, 0.0), threshold=SUPPORT_THRESHOLD):
    """Observer callback for :func:`evolution.evolve` producing :func:`sample_record` dicts."""
    return lambda values, t: sample_record(values, grid, t, z, center, threshold)


def records_of(traj, z=1.0, center=(0.0, 0.0, 0.0)):
    """Observer records of a trajectory, computed from stored fields when absent."""
    if traj.records:
        return traj.records
    return [sample_record(f, traj.grid, t, z, center) for f, t in zip(traj.fields, traj.times)]


def _column(records, key):
    return np.array([r[key] for r in records], dtype=float)


def _history(t, y, quadrature):
    if len(t) < 2:
        return np.zeros_like(y)
    if quadrature == "simpson" and len(t) >= 3:
        return cumulative_simpson(y, x=t, initial=0.0)
    return cumulative_trapezoid(y, x=t, initial=0.0)


@dataclass
class DiagnosticReport:
    """Outcome of one check: ``passed`` is None when the check is informational only."""

    name: str
    passed: object
    max_violation: float
    location: float
    tolerance: float
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def check_energy_identity(records, params, tol=1e-4, quadrature="trapezoid"):
    """Energy identity with the ``Im m`` history term, in rescaled form.

    ``E(t) e^{3Ht} = E(0) + 2 Im(m) int_0^t e^{3Hs} Xi(s) ds``; the
    violation is the difference of both sides relative to ``E(0)``. For real
    ``m`` this is ``|E(t) e^{3Ht} / E(0) - 1|``.
    """
    t = _column(records, "t")
    E = _column(records, "E")
    Xi = _column(records, "Xi")
    H = params.H
    E0 = E[0]
    hist = _history(t, np.exp(3 * H * t) * Xi, quadrature)
    scale = E0 if E0 > 0 else 1.0
    viol = np.abs(E * np.exp(3 * H * t) - E0 - 2 * params.m.imag * hist) / scale
    i = int(np.argmax(viol))
    return DiagnosticReport("energy_identity", bool(viol[i] <= tol), float(viol[i]), float(t[i]),
                            tol, {"quadrature": quadrature})


def check_decay_envelope(records, params, tol=1e-3):
    """Two-sided bound ``e^{d-/2 t} |psi0| (1-tol) <= |psi(t)| <= e^{d+/2 t} |psi0| (1+tol)``."""
    t = _column(records, "t")
    nrm = np.sqrt(_column(records, "E"))
    n0 = nrm[0]
    hi = np.exp(0.5 * params.delta_plus * t) * n0
    lo = np.exp(0.5 * params.delta_minus * t) * n0
    scale = n0 if n0 > 0 else 1.0
    over = (nrm - hi * (1 + tol)) / scale
    under = (lo * (1 - tol) - nrm) / scale
    viol = np.maximum(over, under)
    i = int(np.argmax(viol))
    margin = np.maximum((nrm - hi) / scale, (lo - nrm) / scale)
    return DiagnosticReport("decay_envelope", bool(viol[i] <= 0), float(max(margin[i], 0.0)),
                            float(t[i]), tol,
                            {"delta_plus": params.delta_plus, "delta_minus": params.delta_minus,
                             "max_relative_excursion": float(np.max(margin))})


def check_gamma2_law(records, params, tol=1e-6, gamma2_ok=True):
    """``Q(t) e^{3Ht} = Q(0)``; the violation is measured relative to ``E(0)``."""
    if not gamma2_ok:
        return DiagnosticReport("gamma2_law", None, float("nan"), 0.0, tol,
                                {"skipped": "potential violates V^T g2 + g2 V = 0"})
    t = _column(records, "t")
    Q = _column(records, "Q_re") + 1j * _column(records, "Q_im")
    E0 = records[0]["E"]
    scale = E0 if E0 > 0 else 1.0
    viol = np.abs(Q * np.exp(3 * params.H * t) - Q[0]) / scale
    i = int(np.argmax(viol))
    return DiagnosticReport("gamma2_law", bool(viol[i] <= tol), float(viol[i]), float(t[i]), tol,
                            {"Q0_over_E0": float(abs(Q[0]) / scale)})


def check_chiral_bound(records, params, tol=1e-3, quadrature="trapezoid"):
    """Majorana-defect evolution for data with zero initial defect.

    The passing criterion is the inequality
    ``D(t) <= 4 |Im m| e^{-3Ht} int_0^t e^{3Hs} int rho ds`` up to ``tol``
    relative to ``E(0)``. The exact identity with the ``Xi`` history is
    evaluated as well and reported as ``identity_residual``.
    """
    t = _column(records, "t")
    D = _column(records, "defect")
    rho = _column(records, "chiral_charge")
    Xi = _column(records, "Xi")
    H = params.H
    E0 = records[0]["E"]
    scale = E0 if E0 > 0 else 1.0
    w = np.exp(-3 * H * t)
    bound = 4 * abs(params.m.imag) * w * _history(t, np.exp(3 * H * t) * rho, quadrature)
    ident = D[0] * w + 4 * params.m.imag * w * _history(t, np.exp(3 * H * t) * Xi, quadrature)
    viol = (D - bound) / scale
    i = int(np.argmax(viol))
    return DiagnosticReport("chiral_bound", bool(viol[i] <= tol), float(max(viol[i], 0.0)),
                            float(t[i]), tol,
                            {"identity_residual": float(np.max(np.abs(D - ident)) / scale),
                             "max_defect_over_E0": float(np.max(D) / scale),
                             "initial_defect_over_E0": float(D[0] / scale)})


def check_support(records, params, R, dx, horizon=True):
    """Support radius against ``R + phi(t) + 3 dx`` (and the horizon bound for H > 0)."""
    t = _column(records, "t")
    sr = _column(records, "support_radius")
    bound = R + phi(t, params.H) + 3 * dx
    viol = sr - bound
    i = int(np.argmax(viol))
    details = {"max_support_radius": float(np.max(sr))}
    passed = bool(viol[i] <= 0)
    if horizon and params.H > 0:
        hb = R + 1 / params.H + 3 * dx
        details["horizon_bound"] = hb
        passed = passed and bool(np.max(sr) <= hb)
    return DiagnosticReport("finite_speed", passed, float(max(viol[i], 0.0)), float(t[i]), 0.0,
                            details)


def csv_rows(records, params):
    """Rows of the standard CSV with the two energy envelopes ``e^{d+- t} E(0)``."""
    E0 = records[0]["E"] if records else 0.0
    rows = []
    for r in records:
        t = r["t"]
        rows.append({
            "t": t, "E": r["E"],
            "E_envelope_hi": np.exp(params.delta_plus * t) * E0,
            "E_envelope_lo": np.exp(params.delta_minus * t) * E0,
            "Q_re": r["Q_re"], "Q_im": r["Q_im"],
            "chiral_charge": r["chiral_charge"], "support_radius": r["support_radius"],
        })
    return rows


def fmt(x):
    """Float formatting with 17 significant digits (round-trip exact)."""
    return format(float(x), ".17g")


def write_csv(records, params, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for row in csv_rows(records, params):
            w.writerow([fmt(row[c]) for c in CSV_COLUMNS])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return None if obj is None else bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(fmt(obj))
    if isinstance(obj, complex):
        return [float(fmt(obj.real)), float(fmt(obj.imag))]
    return obj


def write_json(summary, path):
    with open(path, "w") as fh:
        json.dump(_jsonable(summary), fh, indent=2, sort_keys=True)
        fh.write("\n")
