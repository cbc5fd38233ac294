"""
Named initial-data profiles.

Every profile is a callable ``profile(points) -> values`` on points of shape
``(N, 3)`` returning ``(N, 4)`` complex spinors, so the same object feeds the
kernel formulas (pointwise) and the grid solver (via :meth:`on_grid`).
"""

from dataclasses import dataclass

import numpy as np

from . import spinor as sa
from .errors import ConfigError


def bump(r, radius):
    """C-infinity bump ``exp(1 - 1/(1 - (r/R)^2))`` on ``r < R``, zero outside; equals 1 at 0."""
    q = (np.asarray(r, dtype=float) / radius) ** 2
    out = np.zeros_like(q)
    inside = q < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - q[inside]))
    return out


def parse_complex(v):
    """Complex number from JSON: a number, a ``[re, im]`` pair or a string like ``"0.5j"``."""
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError(f"complex numbers are written as [re, im], got {v!r}")
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError:
            raise ConfigError(f"cannot parse complex number {v!r}") from None
    if isinstance(v, (int, float, complex, np.number)):
        return complex(v)
    raise ConfigError(f"cannot parse complex number {v!r}")


def parse_spinor(v, size=4):
    """Spinor (or half-spinor with ``size=2``) from a JSON list of complex entries."""
    if not isinstance(v, (list, tuple)) or len(v) != size:
        raise ConfigError(f"expected a list of {size} complex entries, got {v!r}")
    return tuple(parse_complex(c) for c in v)


def _unit(u):
    u = np.asarray(u, dtype=complex)
    n = np.linalg.norm(u)
    if n == 0:
        raise ConfigError("spinor direction must be nonzero")
    return u / n


@dataclass(frozen=True)
class Profile:
    """Scalar envelope times a constant spinor, or a plane wave.

    Use the constructors :func:`gaussian_bump`, :func:`compact_bump`,
    :func:`majorana_bump` and :func:`plane_mode`.
    """

    kind: str
    amplitude: float
    width: float
    center: tuple
    direction: tuple
    wavevector: tuple = (0.0, 0.0, 0.0)
    power: float = 1.0

    @property
    def support_radius(self):
        return self.width if self.kind == "compact" else np.inf

    def scaled(self, factor):
        """Same profile with the amplitude multiplied by ``factor``."""
        return Profile(self.kind, self.amplitude * float(factor), self.width, self.center,
                       self.direction, self.wavevector, self.power)

    def envelope(self, points):
        p = np.asarray(points, dtype=float)
        if self.kind == "plane":
            return np.exp(1j * p @ np.asarray(self.wavevector))
        if self.kind == "uniform":
            return np.ones(p.shape[:-1])
        r = np.linalg.norm(p - np.asarray(self.center), axis=-1)
        if self.kind == "gaussian":
            return np.exp(-(r**2) / (2 * self.width**2))
        return bump(r, self.width) ** self.power

    def __call__(self, points):
        env = self.amplitude * self.envelope(points)
        return env[..., None] * np.asarray(self.direction, dtype=complex)

    def on_grid(self, grid):
        """Sampled values, shape ``(4, n, n, n)``."""
        pts = np.moveaxis(grid.mesh, 0, -1)
        return np.moveaxis(self(pts), -1, 0).astype(complex)


def gaussian_bump(amplitude=1.0, width=0.5, center=(0.0, 0.0, 0.0), spinor_direction=(1, 0, 0, 0)):
    """``amplitude * exp(-|x - c|^2 / (2 width^2)) * u / |u|``."""
    return Profile("gaussian", float(amplitude), float(width), tuple(center),
                   tuple(_unit(spinor_direction)))


def compact_bump(amplitude=1.0, radius=1.0, center=(0.0, 0.0, 0.0), spinor_direction=(1, 0, 0, 0),
                 power=1.0):
    """Smooth bump supported in ``|x - c| <= radius`` with peak ``amplitude``.

    ``power > 1`` raises the bump to that power, which flattens it near the
    edge of the support and shrinks its high-frequency content.
    """
    if power <= 0:
        raise ConfigError("bump power must be positive")
    return Profile("compact", float(amplitude), float(radius), tuple(center),
                   tuple(_unit(spinor_direction)), power=float(power))


def majorana_bump(amplitude=1.0, width=1.0, center=(0.0, 0.0, 0.0), upper=(1, 0), z=1.0,
                  shape="compact", power=1.0):
    """Bump whose spinor satisfies ``psi = z g2 conj(psi)`` pointwise.

    The constant spinor is built from its normalised upper half; the scalar
    envelope is real, so the Majorana constraint survives multiplication.
    """
    u = sa.majorana_spinor(np.asarray(upper, dtype=complex), z)
    kind = {"compact": "compact", "gaussian": "gaussian"}.get(shape)
    if kind is None:
        raise ConfigError(f"unknown bump shape {shape!r}")
    return Profile(kind, float(amplitude), float(width), tuple(center),
                   tuple(u / np.linalg.norm(u)), power=float(power))


def plane_mode(grid, k=(1, 0, 0), spinor=(1, 0, 0, 0), amplitude=1.0):
    """Periodic plane wave ``u exp(i k . x)`` with integer mode numbers ``k``."""
    kv = 2 * np.pi * np.asarray(k, dtype=float) / (2 * grid.L)
    return Profile("plane", float(amplitude), 0.0, (0.0, 0.0, 0.0),
                   tuple(np.asarray(spinor, dtype=complex)), tuple(kv))


def uniform_field(amplitude=1.0, spinor_direction=(1, 0, 0, 0)):
    """Spatially constant spinor ``amplitude * u / |u|``."""
    return Profile("uniform", float(amplitude), 0.0, (0.0, 0.0, 0.0),
                   tuple(_unit(spinor_direction)))


def from_dict(d, grid=None):
    """Profile from a scenario ``initial`` block.

    Complex entries (spinor directions, ``z``) may be written as numbers,
    ``[re, im]`` pairs or strings.
    """
    d = dict(d)
    kind = d.pop("profile", None)
    d.pop("normalize_energy", None)
    if "spinor_direction" in d:
        d["spinor_direction"] = parse_spinor(d["spinor_direction"])
    if "spinor" in d:
        d["spinor"] = parse_spinor(d["spinor"])
    if "upper" in d:
        d["upper"] = parse_spinor(d["upper"], 2)
    if "z" in d:
        d["z"] = parse_complex(d["z"])
    try:
        if kind == "uniform":
            return uniform_field(**d)
        if kind == "gaussian_bump":
            return gaussian_bump(**d)
        if kind == "compact_bump":
            return compact_bump(**d)
        if kind == "majorana_bump":
            return majorana_bump(**d)
        if kind == "plane_mode":
            if grid is None:
                raise ConfigError("plane_mode needs a grid")
            return plane_mode(grid, **d)
    except TypeError as exc:
        raise ConfigError(f"bad arguments for profile {kind!r}: {exc}") from None
    raise ConfigError(f"unknown initial profile {kind!r}")
