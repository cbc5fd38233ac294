"""
Method-of-lines solver for ``D_dS psi = S(psi)`` on a periodic box.

Spatial derivatives are fourth-order centred differences; time stepping is
classical RK4. An optional fourth-order dissipation ``-eps * delta^4 psi / dx``
(``delta^4`` the five-point fourth difference summed over axes) damps grid
modes; it is switched off for conservation checks.

Written out, the right-hand side is

    d0 psi = -e^{-Ht} sum_l alpha^l d_l psi - (3/2) H psi - i m g0 psi
             + i V psi + S(psi) + forcing.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import spinor as sa
from .errors import ConfigError, NumericalError, PreconditionError
from .nonlinearity import nonlinear_rate, source_term

CFL_DEFAULT = 0.4
CFL_LIMIT = 1.0
DISSIPATION_DEFAULT = 0.01
BLOWUP_CAP = 1e6
DT_MIN = 1e-12


@dataclass(frozen=True)
class Grid3:
    """Periodic cube ``[-L, L)^3`` with ``n`` points per axis."""

    n: int
    L: float

    def __post_init__(self):
        if self.n < 8:
            raise ConfigError("grid needs n >= 8")
        if self.L <= 0:
            raise ConfigError("box half-width L must be positive")

    @property
    def dx(self):
        return 2 * self.L / self.n

    @property
    def axis(self):
        return -self.L + self.dx * np.arange(self.n)

    @cached_property
    def mesh(self):
        """Coordinates, shape ``(3, n, n, n)``."""
        return np.stack(np.meshgrid(self.axis, self.axis, self.axis, indexing="ij"))

    @cached_property
    def radius(self):
        return np.sqrt(np.sum(self.mesh**2, axis=0))

    @property
    def cell_volume(self):
        return self.dx**3


@dataclass
class SpinorField:
    """Grid values ``(4, n, n, n)`` at time ``time``."""

    grid: Grid3
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        n = self.grid.n
        if self.values.shape != (4, n, n, n):
            raise ConfigError(f"field must have shape (4, {n}, {n}, {n})")

    def norm(self):
        return l2_norm(self.values, self.grid)

    def copy(self):
        return SpinorField(self.grid, self.values.copy(), self.time)


def l2_norm(values, grid):
    return float(np.sqrt(grid.cell_volume * np.sum(np.abs(values) ** 2)))


def d_axis(f, axis, dx):
    """Fourth-order centred periodic first derivative along ``axis``."""
    return (8 * (np.roll(f, -1, axis) - np.roll(f, 1, axis))
            - (np.roll(f, -2, axis) - np.roll(f, 2, axis))) / (12 * dx)


def fd_symbol(k, dx):
    """Symbol ``i kappa(k)`` of :func:`d_axis` on ``e^{ikx}``, returned as ``kappa``."""
    return (8 * np.sin(k * dx) - np.sin(2 * k * dx)) / (6 * dx)


def fourth_difference(f, dx):
    out = np.zeros_like(f)
    for ax in (1, 2, 3):
        out += (np.roll(f, -2, ax) - 4 * np.roll(f, -1, ax) + 6 * f
                - 4 * np.roll(f, 1, ax) + np.roll(f, 2, ax))
    return out / dx


def rhs(values, t, params, grid, dissipation=0.0, forcing=None, direction=1):
    """``d0 psi`` for the gridded spinor ``values`` of shape ``(4, n, n, n)``.

    ``direction`` is the sign of the time step; dissipation always damps in
    the direction of integration.
    """
    H, m = params.H, params.m
    dx = grid.dx
    out = -1.5 * H * values
    if m != 0:
        out -= 1j * m * sa.apply(sa.GAMMA0, values)
    c = np.exp(-H * t)
    for ell in range(3):
        out -= c * sa.apply(sa.ALPHA[ell], d_axis(values, ell + 1, dx))
    if params.has_potential:
        out += 1j * params.potential.apply(grid.mesh, t, values)
    if params.nonlin is not None:
        out += source_term(values, params.nonlin)
    if forcing is not None:
        out += forcing(t)
    if dissipation:
        out -= direction * dissipation * fourth_difference(values, dx)
    return out


def _max_speed(t, dt, H):
    return max(np.exp(-H * t), np.exp(-H * (t + dt)))


def step(values, t, dt, params, grid, dissipation=0.0, forcing=None, cfl_limit=CFL_LIMIT):
    """One classical RK4 step; rejects steps above the CFL limit."""
    if dt == 0:
        return values.copy()
    if params.nonlin is not None and dt < 0:
        raise PreconditionError("backward evolution is only defined for linear problems")
    cfl = abs(dt) * _max_speed(t, dt, params.H) / grid.dx
    if cfl > cfl_limit * (1 + 1e-12):
        raise PreconditionError(f"CFL number {cfl:.3g} exceeds the limit {cfl_limit}")
    d = 1 if dt > 0 else -1
    k1 = rhs(values, t, params, grid, dissipation, forcing, d)
    k2 = rhs(values + 0.5 * dt * k1, t + 0.5 * dt, params, grid, dissipation, forcing, d)
    k3 = rhs(values + 0.5 * dt * k2, t + 0.5 * dt, params, grid, dissipation, forcing, d)
    k4 = rhs(values + dt * k3, t + dt, params, grid, dissipation, forcing, d)
    return values + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


@dataclass
class Trajectory:
    """Time-ordered samples of a run.

    ``outcome`` is ``"completed"`` or ``"blowup"``; ``t_stop`` is the last
    time reached. ``fields`` holds sampled grids when storage was requested
    and ``records`` the per-sample observer output.
    """

    grid: Grid3
    times: list = field(default_factory=list)
    fields: list = field(default_factory=list)
    records: list = field(default_factory=list)
    dts: list = field(default_factory=list)
    cfl: float = CFL_DEFAULT
    outcome: str = "completed"
    t_stop: float = 0.0
    blowup_reason: str = ""
    n_steps: int = 0

    @property
    def final(self):
        return self.fields[-1] if self.fields else None


def choose_dt(values, t, params, grid, cfl, direction=1):
    """Step size from the CFL condition and the stiffness of the local terms."""
    dt = cfl * grid.dx / _max_speed(t, 0.0, params.H)
    rate = 1.5 * abs(params.H) + abs(params.m)
    if params.has_potential:
        rate += params.potential.max_norm(grid.mesh, t)
    if rate > 0:
        dt = min(dt, cfl / rate)
    if params.nonlin is not None:
        nl = nonlinear_rate(values, params.nonlin)
        if nl > 0:
            dt = min(dt, 0.25 / nl)
    # the speed at the end of the step may be larger when H < 0
    while dt * _max_speed(t, direction * dt, params.H) / grid.dx > cfl * (1 + 1e-12):
        dt *= 0.9
    return dt


def evolve(initial, t_end, params, cfl=CFL_DEFAULT, dissipation=DISSIPATION_DEFAULT,
           sample_every=None, store_fields=True, observers=None, forcing=None,
           blowup_cap=BLOWUP_CAP, dt_min=DT_MIN, max_steps=10_000_000):
    """Integrate from ``initial.time`` to ``t_end``.

    Parameters
    ----------
    initial : SpinorField
    t_end : float
        May be below ``initial.time`` for linear problems.
    params : PhysicalParams
    cfl : float
        Courant number relative to the characteristic speed ``e^{-Ht}``.
    dissipation : float
        Strength ``eps`` of the fourth-order dissipation.
    sample_every : float, optional
        Sampling interval; samples land exactly on multiples of it. Default:
        only the initial and final states.
    store_fields : bool
        Keep sampled grids in the trajectory (memory ~ 64 n^3 bytes each).
    observers : callable, optional
        ``observers(values, t) -> dict`` evaluated at every sample.
    forcing : callable, optional
        Additional source ``forcing(t) -> (4, n, n, n)``.

    Returns
    -------
    Trajectory
        With ``outcome == "blowup"`` when the L2 norm exceeds
        ``blowup_cap`` times its initial value, values become non-finite, or
        the step size falls below ``dt_min``.
    """
    grid = initial.grid
    t0 = float(initial.time)
    if not np.isfinite(t_end):
        raise ConfigError("t_end must be finite")
    if t_end == t0:
        raise PreconditionError("t_end must differ from the initial time")
    direction = 1 if t_end > t0 else -1
    if direction < 0 and params.nonlin is not None:
        raise PreconditionError("backward evolution is only defined for linear problems")
    if not 0 < cfl <= CFL_LIMIT:
        raise ConfigError(f"cfl must lie in (0, {CFL_LIMIT}]")
    values = initial.values.copy()
    norm0 = l2_norm(values, grid)
    traj = Trajectory(grid, cfl=cfl)

    def record(v, t):
        traj.times.append(t)
        if store_fields:
            traj.fields.append(v.copy())
        if observers is not None:
            traj.records.append(observers(v, t))

    record(values, t0)
    span = abs(t_end - t0)
    interval = span if sample_every is None else float(sample_every)
    if interval <= 0:
        raise ConfigError("sample_every must be positive")
    k_next = 1
    t = t0
    steps = 0
    while True:
        target_mag = min(k_next * interval, span)
        remaining = target_mag - abs(t - t0)
        dt = choose_dt(values, t, params, grid, cfl, direction)
        if dt < dt_min:
            traj.outcome, traj.blowup_reason = "blowup", "step size collapsed"
            if traj.times[-1] != t:
                record(values, t)
            break
        hit = dt >= remaining * (1 - 1e-12)
        if hit:
            dt = remaining
        new = step(values, t, direction * dt, params, grid, dissipation, forcing,
                   cfl_limit=CFL_LIMIT)
        t_new = t0 + direction * target_mag if hit else t + direction * dt
        steps += 1
        traj.dts.append(direction * dt)
        if not np.all(np.isfinite(new)):
            traj.outcome, traj.blowup_reason = "blowup", "non-finite values"
            if traj.times[-1] != t:
                record(values, t)
            break
        values, t = new, t_new
        if norm0 > 0 and l2_norm(values, grid) > blowup_cap * norm0:
            traj.outcome, traj.blowup_reason = "blowup", "norm cap exceeded"
            record(values, t)
            break
        if hit:
            record(values, t)
            if target_mag >= span:
                break
            k_next += 1
        if steps >= max_steps:
            raise NumericalError("step budget exhausted")
    traj.t_stop = t
    traj.n_steps = steps
    return traj


def propagator_apply(g, s, t, params, grid, cfl=CFL_DEFAULT, dissipation=0.0):
    """``S(t, s) g``: linear evolution of the grid values ``g`` from ``s`` to ``t``."""
    if params.nonlin is not None:
        raise PreconditionError("the propagator is defined for the linear equation only")
    if t == s:
        return np.array(g, dtype=complex, copy=True)
    traj = evolve(SpinorField(grid, g, s), t, params, cfl=cfl, dissipation=dissipation,
                  store_fields=True)
    return traj.fields[-1]
