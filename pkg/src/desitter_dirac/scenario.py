"""
Scenario files: schema, validation and the pipelines behind the CLI.

A scenario is a JSON document::

    {
      "schema_version": 1,
      "name": "free_decay",
      "grid": {"n": 48, "L": 4.0},
      "params": {"H": 1.0, "m": 0.7,
                 "potential": {...}, "nonlinearity": {...}},
      "initial": {"profile": "compact_bump", "amplitude": 1.0, "radius": 2.0},
      "run": {"t_end": 3.0, "cfl": 0.4, "dissipation": 0.01, "sample_every": 0.05},
      "checks": ["energy_identity", "finite_speed"],
      "tolerances": {"energy_identity": 1e-6},
      "output_dir": "out/free_decay"
    }

Complex numbers are written as numbers, ``[re, im]`` pairs or strings; the
mass may also be given as separate ``m_re`` and ``m_im`` entries.
Optional blocks ``blowup``, ``scattering`` and ``oracles`` configure the
corresponding subcommands. Everything is validated before any computation.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

from . import blowup as bl
from . import diagnostics as dg
from . import scattering as sc
from .errors import ConfigError, PreconditionError, UnsupportedConfiguration
from .evolution import Grid3, SpinorField, evolve
from .geometry import phi
from .kernels import free_dirac_solution
from .nonlinearity import NonlinSpec
from .params import PhysicalParams, Potential
from .profiles import from_dict as profile_from_dict
from .profiles import parse_complex

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CHECKS = ("energy_identity", "decay_envelope", "gamma2_law", "chiral_bound", "finite_speed",
          "inequality_chain")
EXIT_OK, EXIT_CONFIG, EXIT_PRECONDITION, EXIT_RUNTIME, EXIT_CHECK_FAILED = 0, 1, 2, 3, 4

_complex = {"anyOf": [{"type": "number"}, {"type": "string"},
                      {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}]}
_pos = {"type": "number", "exclusiveMinimum": 0}

SCHEMA = {
    "type": "object",
    "required": ["schema_version", "name", "grid", "params", "initial", "run"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string", "pattern": "^[A-Za-z0-9_.-]+$"},
        "description": {"type": "string"},
        "grid": {
            "type": "object", "required": ["n", "L"], "additionalProperties": False,
            "properties": {"n": {"type": "integer", "minimum": 8}, "L": _pos},
        },
        "params": {
            "type": "object", "required": ["H"], "additionalProperties": False,
            "properties": {
                "H": {"type": "number"},
                "m": _complex,
                "m_re": {"type": "number"},
                "m_im": {"type": "number"},
                "potential": {"type": ["object", "null"]},
                "nonlinearity": {"type": ["object", "null"]},
            },
        },
        "initial": {
            "type": "object", "required": ["profile"],
            "properties": {
                "profile": {"enum": ["gaussian_bump", "compact_bump", "majorana_bump",
                                     "plane_mode", "uniform"]},
                "normalize_energy": _pos,
            },
        },
        "run": {
            "type": "object", "required": ["t_end"], "additionalProperties": False,
            "properties": {
                "t_end": _pos,
                "cfl": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "dissipation": {"type": "number", "minimum": 0},
                "sample_every": _pos,
                "blowup_cap": _pos,
                "z": _complex,
            },
        },
        "checks": {"type": "array", "items": {"enum": list(CHECKS)}, "uniqueItems": True},
        "tolerances": {"type": "object", "propertyNames": {"enum": list(CHECKS)},
                       "additionalProperties": _pos},
        "blowup": {
            "type": "object", "additionalProperties": False,
            "properties": {"R": _pos, "c": _pos, "simulate": {"type": "boolean"}},
        },
        "scattering": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "T_max": _pos,
                "samples": {"type": "integer", "minimum": 2},
                "method": {"enum": ["pullback", "quadrature"]},
                "check_doubling": {"type": "boolean"},
            },
        },
        "oracles": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "n_points": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
                "sample_radius": _pos,
                "refine": {"type": "array", "items": {"type": "integer", "minimum": 8}},
                "tolerance": _pos,
            },
        },
        "output_dir": {"type": "string"},
    },
}


@dataclass
class Scenario:
    """Validated scenario with the physical objects already built."""

    name: str
    grid: Grid3
    params: PhysicalParams
    profile: object
    run: dict
    checks: list
    tolerances: dict
    blowup: dict
    scattering: dict
    oracles: dict
    output_dir: Path
    raw: dict = field(repr=False, default_factory=dict)

    @property
    def support_radius(self):
        return self.profile.support_radius

    def initial_field(self, grid=None):
        return SpinorField(grid or self.grid, self.profile.on_grid(grid or self.grid), 0.0)


def validate(doc):
    """Raise :class:`ConfigError` unless ``doc`` satisfies the scenario schema."""
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"scenario schema error at {where}: {exc.message}") from None


def load(source, output_dir=None):
    """Scenario from a path or an already parsed dict.

    ``output_dir`` overrides the file's ``output_dir`` (default
    ``out/<name>``).
    """
    if isinstance(source, dict):
        doc = source
    else:
        try:
            with open(source) as fh:
                doc = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"scenario file not found: {source}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {source}: {exc}") from None
    validate(doc)
    grid = Grid3(int(doc["grid"]["n"]), float(doc["grid"]["L"]))
    p = doc["params"]
    try:
        nonlin = NonlinSpec.from_dict(p.get("nonlinearity"))
        potential = Potential.from_dict(p.get("potential"))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad params block: {exc}") from None
    if "m" in p and ("m_re" in p or "m_im" in p):
        raise ConfigError("give the mass either as m or as m_re/m_im, not both")
    m = parse_complex(p["m"]) if "m" in p else complex(p.get("m_re", 0.0), p.get("m_im", 0.0))
    params = PhysicalParams(float(p["H"]), m, potential, nonlin)
    profile = profile_from_dict(doc["initial"], grid)
    target = doc["initial"].get("normalize_energy")
    if target is not None:
        e = dg.energy(profile.on_grid(grid), grid)
        if e == 0:
            raise ConfigError("cannot normalise the energy of zero data")
        profile = profile.scaled(np.sqrt(target / e))
    run = {"cfl": 0.4, "dissipation": 0.01, "sample_every": None, "blowup_cap": 1e6, "z": 1.0}
    run.update(doc["run"])
    run["z"] = parse_complex(run["z"])
    if run["sample_every"] is None:
        run["sample_every"] = run["t_end"] / 50
    out = Path(output_dir) if output_dir else Path(doc.get("output_dir", f"out/{doc['name']}"))
    return Scenario(doc["name"], grid, params, profile, run, list(doc.get("checks", [])),
                    dict(doc.get("tolerances", {})), dict(doc.get("blowup", {})),
                    dict(doc.get("scattering", {})), dict(doc.get("oracles", {})), out, doc)


# ---------------------------------------------------------------- preconditions

def preconditions(sc_, need_scattering=False):
    """Evaluate the physical preconditions; returns a list of dicts.

    Each entry has ``name``, ``passed`` and ``detail``. ``required`` marks the
    ones whose failure aborts the run.
    """
    out = []
    params = sc_.params
    pot = params.potential
    if pot is not None and not pot.is_zero:
        pts = np.random.default_rng(0).uniform(-sc_.grid.L, sc_.grid.L, size=(16, 3))
        times = np.linspace(0.0, sc_.run["t_end"], 5)
        try:
            res = pot.check(pts, times)
            out.append({"name": "potential_self_adjoint", "passed": True, "required": True,
                        "detail": res["self_adjoint"]})
            ok = res["gamma2_condition"] <= 1e-12
            out.append({"name": "potential_gamma2_condition", "passed": ok,
                        "required": pot.gamma2_condition, "detail": res["gamma2_condition"]})
        except PreconditionError as exc:
            out.append({"name": "potential", "passed": False, "required": True, "detail": str(exc)})
    if params.nonlin is not None and (need_scattering or sc_.scattering):
        ok, kappa = sc.check_scattering_condition(params, params.nonlin.alpha)
        out.append({"name": "scattering_condition", "passed": ok, "required": need_scattering,
                    "detail": {"kappa": kappa}})
    if "chiral_bound" in sc_.checks:
        f = sc_.profile.on_grid(sc_.grid)
        d0 = dg.defect_integral(f, sc_.grid, sc_.run["z"]) / max(dg.energy(f, sc_.grid), 1e-300)
        out.append({"name": "initial_majorana_defect", "passed": d0 <= 1e-12, "required": False,
                    "detail": d0})
    return out


def _enforce(pre):
    for p in pre:
        log.info("precondition %-28s %s", p["name"], "PASS" if p["passed"] else "FAIL")
    bad = [p for p in pre if p["required"] and not p["passed"]]
    if bad:
        raise PreconditionError("; ".join(f"{p['name']} failed ({p['detail']})" for p in bad))


# ---------------------------------------------------------------- run

def _evolve(sc_, grid=None, store_fields=False, t_end=None, sample_every=None, **over):
    grid = grid or sc_.grid
    r = dict(sc_.run)
    r.update(over)
    obs = dg.make_observer(grid, r["z"])
    return evolve(sc_.initial_field(grid), t_end or r["t_end"], sc_.params, cfl=r["cfl"],
                  dissipation=r["dissipation"], sample_every=sample_every or r["sample_every"],
                  store_fields=store_fields, observers=obs, blowup_cap=r["blowup_cap"])


def _default_tol(name, params):
    if name == "energy_identity":
        return 1e-6 if params.m.imag == 0 else 1e-4
    return {"decay_envelope": 1e-3, "gamma2_law": 1e-6, "chiral_bound": 1e-8,
            "finite_speed": 0.0, "inequality_chain": 0.05}[name]


def _blowup_params(sc_, E0):
    nl = sc_.params.nonlin
    if nl is None or nl.kind != "BlowupG":
        raise UnsupportedConfiguration("blow-up analysis needs the BlowupG nonlinearity")
    R = sc_.blowup.get("R", sc_.support_radius)
    if not np.isfinite(R):
        R = None
    return bl.BlowupParams(sc_.params.H, sc_.params.m, nl.c0, nl.alpha, R if R else 1.0, E0,
                           sc_.blowup.get("c")), R is not None


def run_checks(sc_, traj):
    """Run the enabled diagnostics on a trajectory; returns a list of reports."""
    recs = traj.records
    params = sc_.params
    reports = []
    for name in sc_.checks:
        tol = sc_.tolerances.get(name, _default_tol(name, params))
        if name == "energy_identity":
            rep = dg.check_energy_identity(recs, params, tol, "simpson")
        elif name == "decay_envelope":
            rep = dg.check_decay_envelope(recs, params, tol)
        elif name == "gamma2_law":
            ok = params.potential is None or params.potential.is_zero \
                or params.potential.gamma2_condition
            rep = dg.check_gamma2_law(recs, params, tol, gamma2_ok=ok)
        elif name == "chiral_bound":
            rep = dg.check_chiral_bound(recs, params, tol, "simpson")
        elif name == "finite_speed":
            R = sc_.support_radius
            if not np.isfinite(R):
                rep = dg.DiagnosticReport(name, None, float("nan"), 0.0, 0.0,
                                          {"skipped": "initial data not compactly supported"})
            else:
                rep = dg.check_support(recs, params, R, sc_.grid.dx)
        else:
            bp, _ = _blowup_params(sc_, recs[0]["E"])
            ok, worst = bl.check_inequality_chain(recs, bp, tol)
            rep = dg.DiagnosticReport(name, ok, worst, 0.0, tol, {})
        reports.append(rep)
    return reports


def _summary_lines(title, items):
    lines = [title]
    for k, v in items:
        lines.append(f"  {k:<32} {v}")
    return lines


def _verdict(passed):
    return "skipped" if passed is None else ("PASS" if passed else "FAIL")


def _write(out_dir, name, summary, lines):
    out_dir.mkdir(parents=True, exist_ok=True)
    dg.write_json(summary, out_dir / f"{name}.json")
    (out_dir / f"{name}.txt").write_text("\n".join(lines) + "\n")


def run_scenario(sc_):
    """Evolve, run the enabled checks and write ``<name>.csv`` / ``.json`` / ``.txt``.

    Returns ``(exit_code, summary)``; the code is 4 when a check fails.
    Blow-up is a flagged outcome, not an error.
    """
    pre = preconditions(sc_)
    _enforce(pre)
    traj = _evolve(sc_)
    reports = run_checks(sc_, traj)
    summary = {"name": sc_.name, "preconditions": pre, "outcome": traj.outcome,
               "t_stop": traj.t_stop, "n_steps": traj.n_steps,
               "checks": [r.to_dict() for r in reports]}
    if traj.outcome == "blowup":
        summary["blowup_reason"] = traj.blowup_reason
        nl = sc_.params.nonlin
        bp = None
        if nl is not None and nl.kind == "BlowupG" and np.isfinite(sc_.support_radius):
            bp, _ = _blowup_params(sc_, traj.records[0]["E"])
        summary["detected_t_star"] = bl.detect_blowup(traj, nl.alpha if nl else 2.0, p=bp)
    sc_.output_dir.mkdir(parents=True, exist_ok=True)
    dg.write_csv(traj.records, sc_.params, sc_.output_dir / f"{sc_.name}.csv")
    lines = _summary_lines(f"scenario {sc_.name}: outcome {traj.outcome} at t = {traj.t_stop:.6g}",
                           [(p["name"], _verdict(p["passed"])) for p in pre]
                           + [(r.name, f"{_verdict(r.passed)} (max violation {r.max_violation:.3g},"
                                       f" tol {r.tolerance:.3g})") for r in reports])
    _write(sc_.output_dir, sc_.name + "_summary", summary, lines)
    failed = any(r.passed is False for r in reports)
    return (EXIT_CHECK_FAILED if failed else EXIT_OK), summary, lines


# ---------------------------------------------------------------- blow-up

def predict_blowup(sc_):
    """Threshold, lifespan prediction and (optionally) simulated blow-up time.

    Uniform initial data select the Bernoulli surrogate: the exact blow-up
    time of ``E' = k E^(1+alpha/2) - A_eff E`` with ``k = 2 c0 (2L)^(-3 alpha/2)``
    and ``A_eff = 3H - 2 Im(m) Xi/E``, which requires data in a ``gamma^0``
    eigenspace so that ``Xi/E = +-1`` is conserved.
    """
    f0 = sc_.profile.on_grid(sc_.grid)
    E0 = dg.energy(f0, sc_.grid)
    bp, compact = _blowup_params(sc_, E0)
    H = bp.H
    rep = {"name": sc_.name, "E0": E0, "H": H, "c0": bp.c0, "alpha": bp.alpha}
    surrogate = sc_.profile.kind == "uniform"
    if surrogate:
        s = dg.xi_moment(f0, sc_.grid) / E0
        if abs(abs(s) - 1) > 1e-12:
            raise UnsupportedConfiguration("the uniform surrogate needs data in a gamma^0 eigenspace")
        k = bl.uniform_surrogate_rate(bp.c0, bp.alpha, (2 * sc_.grid.L) ** 3)
        A_eff = 3 * H - 2 * bp.m.imag * s
        rep.update(branch="surrogate", k=k, A=A_eff, threshold=None,
                   predicted_T=bl.bernoulli_blowup_time(E0, k, A_eff, bp.alpha))
    elif not compact:
        raise UnsupportedConfiguration("lifespan predictions need compactly supported or uniform data")
    elif H > 0:
        rep.update(branch="expanding", R=bp.R, A=bp.A, threshold=bl.threshold_energy(bp),
                   predicted_T=bl.predict_T_expanding(bp))
    elif H < 0:
        gate = bl.contracting_gate(bp)
        c_hat = bl.coercivity_constant(H, bp.m, bp.c0, bp.alpha)
        rep.update(branch="contracting", R=bp.R, c=bp.c, gate=gate,
                   threshold=gate ** (-2 / bp.alpha), coercivity_sampled_min=c_hat,
                   coercivity_ok=bool(c_hat >= bp.c), predicted_T=bl.predict_T_contracting(bp))
    else:
        raise UnsupportedConfiguration("H = 0 has no lifespan formula here")
    if rep["predicted_T"] is None:
        rep["scope"] = "subcritical: no prediction"
    rows = []
    if sc_.blowup.get("simulate", True):
        traj = _evolve(sc_)
        t_star = bl.detect_blowup(traj, bp.alpha, p=bp if compact and not surrogate else None)
        rep["outcome"] = traj.outcome
        rep["detected_t_star"] = t_star
        T = rep["predicted_T"]
        if t_star is not None and T is not None and np.isfinite(T):
            rep["margin"] = t_star / T
        elif t_star is not None:
            rep["scope"] = "blow-up detected outside theorem scope"
        if compact and not surrogate:
            ok, worst = bl.check_inequality_chain(traj.records, bp)
            rep["inequality_chain"] = {"passed": ok, "worst_shortfall": worst}
        t = np.array([r["t"] for r in traj.records])
        if surrogate:
            ref = bl.bernoulli_energy(t, E0, rep["k"], rep["A"], bp.alpha)
        elif compact and H > 0:
            ref = bl.energy_lower_bound(t, bp)
        else:
            ref = np.full_like(t, np.nan)
        rows = [(r["t"], r["E"], e) for r, e in zip(traj.records, ref)]
    sc_.output_dir.mkdir(parents=True, exist_ok=True)
    with open(sc_.output_dir / f"{sc_.name}_blowup.csv", "w") as fh:
        fh.write("t,E,E_reference\n")
        for row in rows:
            fh.write(",".join(dg.fmt(v) for v in row) + "\n")
    lines = _summary_lines(f"blow-up analysis {sc_.name} ({rep['branch']})",
                           [(k, rep.get(k)) for k in ("E0", "threshold", "predicted_T",
                                                      "detected_t_star", "margin", "scope")
                            if k in rep])
    _write(sc_.output_dir, sc_.name + "_blowup", rep, lines)
    return EXIT_OK, rep, lines


# ---------------------------------------------------------------- scattering

def scattering_report(sc_):
    """Scattering datum, residual series and (optionally) the ``T_max`` doubling check."""
    params = sc_.params
    if params.nonlin is None:
        raise UnsupportedConfiguration("scattering needs a nonlinearity")
    pre = preconditions(sc_, need_scattering=True)
    _enforce(pre)
    cfg = {"T_max": sc_.run["t_end"], "samples": 64, "method": "pullback", "check_doubling": False}
    cfg.update(sc_.scattering)
    T = float(cfg["T_max"])
    n = int(cfg["samples"])

    def forward(t_end):
        return evolve(sc_.initial_field(), t_end, params, cfl=sc_.run["cfl"],
                      dissipation=sc_.run["dissipation"], sample_every=t_end / n,
                      store_fields=True, blowup_cap=sc_.run["blowup_cap"])

    traj = forward(T)
    kw = dict(method=cfg["method"], cfl=sc_.run["cfl"], dissipation=sc_.run["dissipation"],
              max_nodes=n + 1)
    rep = sc.compute_psi_plus0(traj, params, **kw)
    res = sc.verify_asymptotic_freeness(traj, rep.psi_plus0, params, cfl=sc_.run["cfl"],
                                        dissipation=sc_.run["dissipation"])
    ok, kappa = sc.check_scattering_condition(params, params.nonlin.alpha)
    summary = {"name": sc_.name, "condition": ok, **rep.summary(),
               "residual_rate": res["rate"], "residual_decreasing": res["decreasing"],
               "residual_passed": res["passed"], "preconditions": pre}
    passed = res["passed"]
    if cfg["check_doubling"]:
        rep2 = sc.compute_psi_plus0(forward(2 * T), params, **kw)
        d = float(np.sqrt(sc_.grid.cell_volume
                          * np.sum(np.abs(rep2.psi_plus0.values - rep.psi_plus0.values) ** 2)))
        summary["doubling_difference"] = d
        summary["doubling_passed"] = bool(d <= rep.tail_bound)
        passed = passed and summary["doubling_passed"]
    sc_.output_dir.mkdir(parents=True, exist_ok=True)
    with open(sc_.output_dir / f"{sc_.name}_scattering.csv", "w") as fh:
        fh.write("t,residual,pulled_back_residual\n")
        for t, r in zip(res["t"], res["r"]):
            fh.write(f"{dg.fmt(t)},{dg.fmt(r)},{dg.fmt(np.exp(-0.5 * params.delta_minus * t) * r)}\n")
    lines = _summary_lines(f"scattering {sc_.name}",
                           [(k, summary[k]) for k in ("condition", "kappa", "T_max", "tail_bound",
                                                      "correction_norm", "residual_rate",
                                                      "residual_passed")]
                           + ([("doubling_passed", summary["doubling_passed"])]
                              if cfg["check_doubling"] else []))
    _write(sc_.output_dir, sc_.name + "_scattering", summary, lines)
    return (EXIT_OK if passed else EXIT_CHECK_FAILED), summary, lines


# ---------------------------------------------------------------- oracles

def trig_interpolate(values, grid, points):
    """Trigonometric interpolation of periodic grid data ``(c, n, n, n)`` at ``points (N, 3)``."""
    n, L = grid.n, grid.L
    coef = np.fft.fftn(values, axes=(1, 2, 3)) / n**3
    k = 2 * np.pi * np.fft.fftfreq(n, d=grid.dx)
    if n % 2 == 0:
        # split the Nyquist mode symmetrically so real data interpolate to real values
        k[n // 2] = 0.0
    out = np.empty((len(points), values.shape[0]), dtype=complex)
    for j, x in enumerate(np.asarray(points, dtype=float)):
        e = [np.exp(1j * k * (x[a] + L)) for a in range(3)]
        if n % 2 == 0:
            for a in range(3):
                e[a][n // 2] = np.cos(np.pi * n * (x[a] + L) / (2 * L))
        out[j] = np.einsum("cijk,i,j,k->c", coef, e[0], e[1], e[2])
    return out


def _sample_points(sc_, rng):
    cfg = sc_.oracles
    n = int(cfg.get("n_points", 10))
    rad = float(cfg.get("sample_radius", 1.0))
    pts = []
    while len(pts) < n:
        p = rng.uniform(-rad, rad, size=3)
        if np.linalg.norm(p) <= rad:
            pts.append(p)
    return np.array(pts) + np.asarray(getattr(sc_.profile, "center", (0, 0, 0)), dtype=float)


def compare_oracles(sc_):
    """Kernel representation vs finite differences at random interior points.

    The deviation is ``max |Psi_fd - Psi_kernel| / max |Psi_kernel|`` over the
    points and components, for every grid size in ``oracles.refine``
    (default: the scenario grid). For compact data the kernel is also
    evaluated outside ``R + phi(t)``, where it must vanish.
    """
    params = sc_.params
    if not params.is_linear or params.has_potential:
        raise UnsupportedConfiguration("compare-oracles needs a linear free scenario (F = 0, V = 0)")
    cfg = sc_.oracles
    rng = np.random.default_rng(int(cfg.get("seed", 0)))
    pts = _sample_points(sc_, rng)
    T = sc_.run["t_end"]
    kern = np.array([free_dirac_solution(sc_.profile, x, T, params) for x in pts])
    scale = float(np.max(np.abs(kern)))
    sizes = cfg.get("refine", [sc_.grid.n])
    devs = []
    for n in sizes:
        g = Grid3(int(n), sc_.grid.L)
        traj = evolve(sc_.initial_field(g), T, params, cfl=sc_.run["cfl"],
                      dissipation=sc_.run["dissipation"], store_fields=True)
        fd = trig_interpolate(traj.fields[-1], g, pts)
        devs.append(float(np.max(np.abs(fd - kern)) / scale) if scale > 0
                    else float(np.max(np.abs(fd))))
    tol = float(cfg.get("tolerance", 1e-2))
    summary = {"name": sc_.name, "t": T, "points": pts.tolist(), "grid_sizes": list(sizes),
               "deviation": devs, "tolerance": tol, "kernel_max": scale}
    passed = devs[-1] < tol
    if len(devs) > 1:
        summary["improves_under_refinement"] = bool(all(b < a for a, b in zip(devs, devs[1:])))
        passed = passed and summary["improves_under_refinement"]
    R = sc_.support_radius
    if np.isfinite(R):
        outer = R + float(phi(T, params.H))
        dirs = rng.normal(size=(4, 3))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        out_pts = [(outer + 0.25) * d for d in dirs]
        kout = max(float(np.max(np.abs(free_dirac_solution(sc_.profile, x, T, params))))
                   for x in out_pts)
        mfrac = dg.mass_outside(traj.fields[-1], g, outer + 3 * g.dx)
        summary.update(kernel_outside_max=kout, fd_mass_fraction_outside=mfrac)
        passed = passed and kout <= 1e-12 * max(scale, 1e-300) and mfrac < 1e-8
    summary["passed"] = bool(passed)
    lines = _summary_lines(f"oracle comparison {sc_.name} at t = {T}",
                           [(f"deviation n={n}", f"{d:.4g}") for n, d in zip(sizes, devs)]
                           + [(k, summary[k]) for k in ("improves_under_refinement",
                                                        "kernel_outside_max",
                                                        "fd_mass_fraction_outside", "passed")
                              if k in summary])
    _write(sc_.output_dir, sc_.name + "_oracles", summary, lines)
    return (EXIT_OK if passed else EXIT_CHECK_FAILED), summary, lines


def bundled_scenarios():
    """Paths of the scenario files shipped with the package."""
    here = Path(__file__).with_name("scenarios")
    return sorted(here.glob("*.json"))


def bundled(name):
    path = Path(__file__).with_name("scenarios") / f"{name}.json"
    if not path.exists():
        raise ConfigError(f"no bundled scenario named {name!r}")
    return path


def scenario_path(arg):
    """Accept a file path or the name of a bundled scenario."""
    if os.path.exists(arg):
        return Path(arg)
    return bundled(Path(arg).stem)
