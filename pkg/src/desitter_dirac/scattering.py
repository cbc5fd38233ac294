"""
Scattering data of small solutions in the expanding universe.

For ``D_dS psi = S(psi)`` Duhamel's principle gives

    psi(t) = U(t, 0) psi0 + int_0^t U(t, s) S(psi(s)) ds,

so the free solution approached as ``t -> infinity`` has initial datum

    psi0+ = psi0 + int_0^infinity U(0, s) S(psi(s)) ds.

Two evaluations of the truncated integral are offered. The default
("pullback") uses ``U(0, T) psi(T) = psi0 + int_0^T U(0, s) S(psi(s)) ds``:
the difference between the nonlinear state at ``T`` and the linear run with
the same step sequence is carried back to ``t = 0`` by one linear solve.
This has no time-quadrature error. The "quadrature" method applies Simpson or
trapezoid weights on the trajectory samples with a backward Horner sweep:
the accumulated sum is carried back from one node to the previous one by a
single linear solve. The integrand norm is bounded by
``C e^{kappa s}`` with

    kappa = -delta_minus/2 + (1 + alpha) delta_plus/2,
    delta_pm = -3H pm 2|Im m|,

which is negative exactly when ``4|Im m| + 2|Im m| alpha < 3 H alpha``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, TailBoundError
from .evolution import SpinorField, evolve, l2_norm, step
from .nonlinearity import source_term

TAIL_RTOL = 1e-6
MAX_NODES = 65


def scattering_exponent(H, m, alpha):
    """Decay exponent ``kappa`` of the Duhamel integrand."""
    mu = abs(complex(m).imag)
    return 0.5 * (3 * H + 2 * mu) - 0.5 * (3 * H - 2 * mu) * (1 + alpha)


def check_scattering_condition(params, alpha):
    """Whether ``4|Im m| + 2|Im m| alpha < 3 H alpha`` holds.

    Returns
    -------
    (bool, float)
        The strict inequality and the exponent ``kappa`` (negative iff true).
    """
    mu = abs(params.m.imag)
    ok = 4 * mu + 2 * mu * alpha < 3 * params.H * alpha
    return bool(ok), float(scattering_exponent(params.H, params.m, alpha))


@dataclass
class ScatteringReport:
    """Scattering datum and its error budget.

    ``psi_plus0`` is the grid datum, ``tail_bound`` the estimate of the
    neglected ``int_{T_max}^infinity`` part in L2 and ``correction_norm`` the
    L2 norm of ``psi_plus0 - psi0``.
    """

    psi_plus0: SpinorField
    T_max: float
    kappa: float
    tail_bound: float
    tail_constant: float
    correction_norm: float
    n_nodes: int
    residual: list = field(default_factory=list)

    def summary(self):
        return {"kappa": self.kappa, "T_max": self.T_max, "tail_bound": self.tail_bound,
                "tail_constant": self.tail_constant, "correction_norm": self.correction_norm,
                "n_nodes": self.n_nodes}


def _weights(t, rule):
    n = len(t)
    h = np.diff(t)
    w = np.zeros(n)
    uniform = n >= 3 and np.allclose(h, h[0], rtol=1e-9)
    if rule == "simpson" and uniform and (n - 1) % 2 == 0:
        w[0::2] = 2.0
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        return w * h[0] / 3
    w[:-1] += h / 2
    w[1:] += h / 2
    return w


def _thin(times, fields, max_nodes):
    # keep every s-th sample with s dividing the interval count, so both ends stay nodes
    n = len(times)
    stride = next(s for s in range(1, n) if (n - 1) % s == 0 and (n - 1) // s + 1 <= max_nodes) \
        if n > max_nodes else 1
    return list(times[::stride]), list(fields[::stride])


def tail_constant(times, sources, params, kappa, grid):
    """``C`` with ``|U(0, s) S(psi(s))| <= C e^{kappa s}`` fitted on the second half of the samples.

    Uses the backward growth ``|U(0, s) g| <= e^{-delta_minus s/2} |g|``.
    """
    t = np.asarray(times, dtype=float)
    half = t >= 0.5 * t[-1]
    vals = [np.exp(-0.5 * params.delta_minus * s) * l2_norm(f, grid) * np.exp(-kappa * s)
            for s, f, keep in zip(t, sources, half) if keep]
    return float(max(vals)) if vals else 0.0


def compute_psi_plus0(traj, params, T_max=None, method="pullback", rule="simpson", cfl=0.4,
                      dissipation=0.0, max_nodes=MAX_NODES, tail_rtol=TAIL_RTOL,
                      source_scale=1.0):
    """Scattering datum from a forward trajectory with stored fields.

    Parameters
    ----------
    traj : Trajectory
        Forward nonlinear run starting at ``t = 0`` with fields stored on a
        uniform sample grid.
    params : PhysicalParams
        Must carry the nonlinearity (``None`` gives ``psi_plus0 = psi0``).
    T_max : float, optional
        Truncation time; defaults to the last sample.
    method : {"pullback", "quadrature"}
        Evaluation of the truncated Duhamel integral (see module docstring).
    rule : {"simpson", "trapezoid"}
        Time quadrature on the sample nodes (``method="quadrature"``).
    dissipation : float
        Must equal the dissipation of the forward run for ``"pullback"``.
    source_scale : float
        Multiplies the source (``method="quadrature"`` only; used by
        linearity checks).

    Raises
    ------
    PreconditionError
        The scattering condition fails or the run does not reach ``T_max``.
    TailBoundError
        The tail bound exceeds ``tail_rtol * |psi0|``; carries the required ``T_max``.
    """
    if not traj.fields:
        raise PreconditionError("trajectory must store fields")
    grid = traj.grid
    psi0 = traj.fields[0]
    if traj.times[0] != 0:
        raise PreconditionError("trajectory must start at t = 0")
    T_max = traj.times[-1] if T_max is None else float(T_max)
    if traj.times[-1] < T_max * (1 - 1e-12) or traj.outcome != "completed":
        raise PreconditionError("trajectory does not cover [0, T_max]")
    if params.nonlin is None:
        return ScatteringReport(SpinorField(grid, psi0.copy(), 0.0), T_max,
                                float("-inf"), 0.0, 0.0, 0.0, 0)
    alpha = params.nonlin.alpha
    ok, kappa = check_scattering_condition(params, alpha)
    if not ok:
        mu = abs(params.m.imag)
        raise PreconditionError(
            f"scattering condition fails: 4|Im m| + 2|Im m| alpha = {4 * mu + 2 * mu * alpha:.6g}"
            f" is not < 3 H alpha = {3 * params.H * alpha:.6g}")
    keep = [i for i, s in enumerate(traj.times) if s <= T_max * (1 + 1e-12)]
    times, fields = _thin([traj.times[i] for i in keep], [traj.fields[i] for i in keep], max_nodes)
    sources = [source_scale * source_term(f, params.nonlin) for f in fields]

    C = tail_constant(times, sources, params, kappa, grid)
    n0 = l2_norm(psi0, grid)
    tail = C * np.exp(kappa * T_max) / abs(kappa)
    if tail > tail_rtol * max(n0, 1e-300) and C > 0:
        required = np.log(tail_rtol * n0 * abs(kappa) / C) / kappa
        raise TailBoundError(f"tail bound {tail:.3g} exceeds {tail_rtol:g} |psi0| = {tail_rtol * n0:.3g};"
                             f" need T_max >= {required:.4g}", required_T=float(required))

    if method == "pullback":
        acc = _pullback_correction(traj, params, T_max, cfl, dissipation)
    elif method == "quadrature":
        acc = _horner_correction(times, sources, params, grid, rule, cfl, dissipation)
    else:
        raise ValueError(f"unknown method {method!r}")
    plus0 = psi0 + acc
    return ScatteringReport(SpinorField(grid, plus0, 0.0), T_max, kappa, float(tail), C,
                            l2_norm(acc, grid), len(times))


def _horner_correction(times, sources, params, grid, rule, cfl, dissipation):
    w = _weights(np.asarray(times), rule)
    lin = params.linear()
    acc = w[-1] * sources[-1]
    for j in range(len(times) - 1, 0, -1):
        acc = evolve(SpinorField(grid, acc, times[j]), times[j - 1], lin, cfl=cfl,
                     dissipation=dissipation, store_fields=True).fields[-1]
        acc = acc + w[j - 1] * sources[j - 1]
    return acc


def _pullback_correction(traj, params, T_max, cfl, dissipation):
    grid = traj.grid
    k = int(np.argmin(np.abs(np.asarray(traj.times) - T_max)))
    lin_T = free_evolution_samples(SpinorField(grid, traj.fields[0], 0.0), traj.times[:k + 1],
                                   params, cfl, dissipation, dts=traj.dts)[-1]
    diff = traj.fields[k] - lin_T
    if not np.any(diff):
        return diff
    return evolve(SpinorField(grid, diff, traj.times[k]), 0.0, params.linear(), cfl=cfl,
                  dissipation=dissipation, store_fields=True).fields[-1]


def free_evolution_samples(psi_plus0, times, params, cfl=0.4, dissipation=0.0, dts=None):
    """``U(t, 0) psi_plus0`` at the given (increasing) times by linear evolution.

    With ``dts`` (the step sequence of a forward run that sampled at
    ``times``) the same steps are replayed, so time-stepping errors of the
    linear part match those of that run.
    """
    times = list(times)
    grid = psi_plus0.grid
    lin = params.linear()
    out = [psi_plus0.values.copy()]
    cur = psi_plus0.values
    if dts is not None:
        t, k = times[0], 1
        for dt in dts:
            if k >= len(times):
                break
            cur = step(cur, t, dt, lin, grid, dissipation)
            t += dt
            if abs(t - times[k]) <= 1e-9 * max(1.0, abs(times[k])):
                t = times[k]
                out.append(cur)
                k += 1
        if len(out) != len(times):
            raise PreconditionError("step sequence does not reproduce the sample times")
        return out
    for a, b in zip(times[:-1], times[1:]):
        cur = evolve(SpinorField(grid, cur, a), b, lin, cfl=cfl, dissipation=dissipation,
                     store_fields=True).fields[-1]
        out.append(cur)
    return out


def verify_asymptotic_freeness(traj, psi_plus0, params, cfl=0.4, dissipation=0.0,
                               window=(0.25, 0.75), rtol=0.2, match_steps=True):
    """Residual ``r(t) = |psi(t) - psi+(t)|`` and its decay rate.

    ``psi+(t)`` is the linear evolution of ``psi_plus0``. The rate is fitted
    to ``log(e^{-delta_minus t/2} r(t))``, which removes the linear
    backward growth and isolates the exponent ``kappa``, on the given
    fraction of the run. The result passes when ``r`` decreases over the last
    half of the run and the fitted rate is within ``rtol`` of ``kappa``.

    Returns
    -------
    dict
        ``t``, ``r``, ``rate``, ``kappa``, ``decreasing``, ``passed``.
    """
    times = list(traj.times)
    free = free_evolution_samples(psi_plus0, times, params, cfl, dissipation,
                                  dts=traj.dts if match_steps else None)
    grid = traj.grid
    r = np.array([l2_norm(a - b, grid) for a, b in zip(traj.fields, free)])
    t = np.asarray(times, dtype=float)
    alpha = params.nonlin.alpha if params.nonlin is not None else 2.0
    kappa = scattering_exponent(params.H, params.m, alpha)
    last = t >= 0.5 * t[-1]
    decreasing = bool(np.all(np.diff(r[last]) <= 0))
    sel = (t >= window[0] * t[-1]) & (t <= window[1] * t[-1]) & (r > 0)
    rate = float("nan")
    if np.count_nonzero(sel) >= 2:
        y = np.log(r[sel]) - 0.5 * params.delta_minus * t[sel]
        rate = float(np.polyfit(t[sel], y, 1)[0])
    passed = bool(decreasing and np.isfinite(rate) and abs(rate / kappa - 1) <= rtol)
    return {"t": t.tolist(), "r": r.tolist(), "rate": rate, "kappa": kappa,
            "decreasing": decreasing, "passed": passed}
