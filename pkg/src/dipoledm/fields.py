"""Dipole arm currents and their far-field radiation patterns.

The current on a thin dipole is modelled to first order as a sinusoid that
vanishes at both tips.  Each arm can be given its own complex weight, which
splits the feed into a differential part (equal currents, same direction)
and a common part (equal currents, opposite direction).  Any common-mode
content tilts the amplitude pattern away from broadside.

The far field is the sin(theta)-weighted Fourier transform of the current
along the axis.  The range-dependent prefactor ``jk exp(-jkr) / (4 pi r)`` is
dropped, so every pattern here is a relative, range-free quantity.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, QuadratureError, ValidationError

SPEED_OF_LIGHT = 299_792_458.0  # m/s
DEFAULT_ARM_SAMPLES = 1025
MIN_ARM_SAMPLES = 257
DEFAULT_STEP_DEG = 0.5

__all__ = [
    "SPEED_OF_LIGHT",
    "DipoleSpec",
    "ArmExcitation",
    "CurrentDistribution",
    "FarFieldPattern",
    "ModeSplit",
    "wrap_phase",
    "default_angles",
    "simpson_weights",
    "sinusoidal_current",
    "excite_arms",
    "mode_decompose",
    "radiation_integral",
    "far_field",
    "halfwave_closed_form",
]


def wrap_phase(phase):
    """Wrap a phase (scalar or array) into (-pi, pi]."""
    wrapped = np.remainder(np.asarray(phase, dtype=float) + np.pi, 2 * np.pi) - np.pi
    wrapped = np.where(wrapped <= -np.pi, wrapped + 2 * np.pi, wrapped)
    if np.ndim(wrapped) == 0:
        return float(wrapped)
    return wrapped


def _frozen(array, dtype):
    out = np.array(array, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class DipoleSpec:
    """Geometry and drive of a centre-fed dipole.

    Parameters
    ----------
    length : float
        Total tip-to-tip length L in metres.
    frequency : float
        Operating frequency in hertz.
    current_peak : float
        Maximum current amplitude I_m in amperes.
    arm_samples : int
        Quadrature points per arm (feed and tip included).  Must be odd and
        at least 257.
    """

    length: float
    frequency: float
    current_peak: float = 1.0
    arm_samples: int = DEFAULT_ARM_SAMPLES

    def __post_init__(self):
        for name in ("length", "frequency", "current_peak"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be finite and > 0, got {value!r}")
        n = self.arm_samples
        if int(n) != n or n < MIN_ARM_SAMPLES or n % 2 == 0:
            raise ValidationError(
                f"arm_samples must be an odd integer >= {MIN_ARM_SAMPLES}, got {n!r}"
            )
        object.__setattr__(self, "arm_samples", int(n))
        if not (np.isfinite(self.wavenumber) and self.wavenumber > 0):
            raise ValidationError("frequency gives a non-finite wavenumber")

    @classmethod
    def half_wave(cls, frequency=1.86e9, **kwargs):
        """Dipole whose length is half a free-space wavelength."""
        return cls(length=SPEED_OF_LIGHT / frequency / 2, frequency=frequency, **kwargs)

    @property
    def wavelength(self):
        return SPEED_OF_LIGHT / self.frequency

    @property
    def wavenumber(self):
        return 2 * np.pi / self.wavelength


@dataclass(frozen=True)
class ArmExcitation:
    """Complex weights applied to the left (z < 0) and right (z > 0) arms.

    Phases are stored wrapped to (-pi, pi].  The amplitudes default to 1 so
    that only phase imbalance is modelled unless asked otherwise.
    """

    phase_left: float = 0.0
    phase_right: float = 0.0
    amplitude_left: float = 1.0
    amplitude_right: float = 1.0

    def __post_init__(self):
        for name in ("phase_left", "phase_right"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, wrap_phase(value))
        for name in ("amplitude_left", "amplitude_right"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value >= 0):
                raise ValidationError(f"{name} must be finite and >= 0, got {value!r}")

    @property
    def weight_left(self):
        return self.amplitude_left * complex(np.exp(1j * self.phase_left))

    @property
    def weight_right(self):
        return self.amplitude_right * complex(np.exp(1j * self.phase_right))

    @property
    def is_symmetric(self):
        return self.weight_left == self.weight_right


@dataclass(frozen=True)
class ModeSplit:
    """Differential and common parts of an arm excitation.

    ``differential + common`` is the left weight and ``differential -
    common`` the right weight.
    """

    differential: complex
    common: complex


@dataclass(frozen=True, eq=False)
class CurrentDistribution:
    """Sampled complex current along the dipole axis.

    ``positions`` run from -L/2 to L/2 and must include the feed point z = 0.
    ``wavenumber`` is carried along so the distribution can be transformed
    without the originating :class:`DipoleSpec`.
    """

    positions: np.ndarray
    values: np.ndarray
    wavenumber: float

    def __post_init__(self):
        z = _frozen(self.positions, float)
        values = _frozen(self.values, complex)
        if z.ndim != 1 or z.shape != values.shape:
            raise ValidationError("positions and values must be 1-D with equal length")
        if z.size < 3:
            raise ValidationError("a current distribution needs at least 3 samples")
        if np.any(np.diff(z) <= 0):
            raise ValidationError("positions must be strictly increasing")
        if not (np.isfinite(self.wavenumber) and self.wavenumber > 0):
            raise ValidationError("wavenumber must be finite and > 0")
        object.__setattr__(self, "positions", z)
        object.__setattr__(self, "values", values)

    @property
    def length(self):
        return float(self.positions[-1] - self.positions[0])

    def at(self, z):
        """Current at a sample position (exact match within 1e-12 L)."""
        idx = int(np.argmin(np.abs(self.positions - z)))
        if abs(self.positions[idx] - z) > 1e-12 * self.length:
            raise DomainError(f"z = {z!r} is not a sample position")
        return complex(self.values[idx])


@dataclass(frozen=True, eq=False)
class FarFieldPattern:
    """Complex field on a grid of polar angles (radians, inside (0, pi)).

    ``field`` holds normalized values; ``scale`` is the positive real constant
    they were divided by, so ``field * scale`` recovers the raw integral.
    """

    angles: np.ndarray
    field: np.ndarray
    scale: float = 1.0

    def __post_init__(self):
        angles = _frozen(self.angles, float)
        values = _frozen(self.field, complex)
        if angles.ndim != 1 or angles.shape != values.shape:
            raise ValidationError("angles and field must be 1-D with equal length")
        if angles.size < 2:
            raise ValidationError("a pattern needs at least 2 angles")
        if np.any(np.diff(angles) <= 0):
            raise ValidationError("pattern angles must be strictly increasing")
        _check_open_interval(angles)
        if not (np.isfinite(self.scale) and self.scale > 0):
            raise ValidationError("scale must be finite and > 0")
        object.__setattr__(self, "angles", angles)
        object.__setattr__(self, "field", values)

    @property
    def magnitude(self):
        return np.abs(self.field)

    @property
    def phase(self):
        return wrap_phase(np.angle(self.field))

    def unnormalized(self):
        return self.field * self.scale


def _check_open_interval(angles):
    angles = np.asarray(angles, dtype=float)
    bad = ~((angles > 0) & (angles < np.pi))
    if np.any(bad):
        first = float(angles[bad][0])
        raise DomainError(f"angle {first!r} rad lies outside (0, pi)")


def default_angles(step_deg=DEFAULT_STEP_DEG):
    """Grid from ``step_deg`` to ``180 - step_deg`` degrees, in radians."""
    n = int(round(180.0 / step_deg))
    if n < 3 or not math.isclose(n * step_deg, 180.0):
        raise ValidationError(f"step_deg must divide 180 into >= 3 parts, got {step_deg!r}")
    return np.deg2rad(np.arange(1, n) * step_deg)


def simpson_weights(n, h):
    """Composite Simpson weights for ``n`` (odd, >= 3) points spaced ``h``."""
    if n < 3 or n % 2 == 0:
        raise QuadratureError(f"composite Simpson needs an odd count >= 3, got {n}")
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def sinusoidal_current(spec):
    """Symmetric sinusoidal current ``I_m sin(k (L/2 - |z|))``.

    Sampled at ``2 * arm_samples - 1`` equally spaced points, the feed point
    shared by both arms.
    """
    if not isinstance(spec, DipoleSpec):
        raise ValidationError("spec must be a DipoleSpec")
    half = spec.length / 2
    z = np.linspace(-half, half, 2 * spec.arm_samples - 1)
    z[spec.arm_samples - 1] = 0.0
    k = spec.wavenumber
    values = spec.current_peak * np.sin(k * (half - np.abs(z)))
    # sin(k*0) is exact, but keep the tips pinned regardless of rounding in |z|
    values[0] = values[-1] = 0.0
    return CurrentDistribution(z, values.astype(complex), k)


def excite_arms(spec, exc):
    """Weight each arm of the sinusoidal current by its complex excitation.

    The feed sample, shared by both arms, carries the mean of the two
    weights.

    >>> d = excite_arms(DipoleSpec.half_wave(), ArmExcitation(0.0, 0.0))
    >>> abs(d.values[0]), abs(d.values[-1])
    (0.0, 0.0)
    """
    if not isinstance(exc, ArmExcitation):
        raise ValidationError("exc must be an ArmExcitation")
    base = sinusoidal_current(spec)
    z = base.positions
    weights = np.where(
        z < 0,
        exc.weight_left,
        np.where(z > 0, exc.weight_right, 0.5 * (exc.weight_left + exc.weight_right)),
    )
    return CurrentDistribution(z, base.values * weights, base.wavenumber)


def mode_decompose(exc):
    """Split an arm excitation into differential and common weights."""
    left, right = exc.weight_left, exc.weight_right
    return ModeSplit(differential=(left + right) / 2, common=(left - right) / 2)


def _arm_split(z):
    """Index of the feed sample, checking each arm suits composite Simpson."""
    centre = np.flatnonzero(np.abs(z) <= 1e-12 * (z[-1] - z[0]))
    if centre.size != 1:
        raise QuadratureError("current samples must include the feed point z = 0 exactly once")
    c = int(centre[0])
    for arm in (z[: c + 1], z[c:]):
        if arm.size < 3:
            raise QuadratureError("each arm needs at least 3 samples")
        if arm.size % 2 == 0:
            raise QuadratureError("each arm needs an odd number of samples")
        steps = np.diff(arm)
        if np.ptp(steps) > 1e-9 * steps.mean():
            raise QuadratureError("samples must be equally spaced within each arm")
    return c


def radiation_integral(current, angles):
    """Raw far field ``sin(theta) * integral I(z) exp(jkz cos theta) dz``.

    Each arm is integrated separately by composite Simpson's rule; no
    normalization is applied.
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    _check_open_interval(angles)
    z = current.positions
    c = _arm_split(z)
    weights = np.zeros(z.size)
    weights[: c + 1] += simpson_weights(c + 1, (z[c] - z[0]) / c)
    weights[c:] += simpson_weights(z.size - c, (z[-1] - z[c]) / (z.size - 1 - c))
    kernel = np.exp(1j * current.wavenumber * np.outer(np.cos(angles), z))
    return np.sin(angles) * (kernel @ (weights * current.values))


def far_field(current, angles=None):
    """Peak-normalized complex far-field pattern of a current distribution.

    The raw integral is divided by its largest magnitude over ``angles``
    (a positive real constant), so phases are left untouched.

    Parameters
    ----------
    current : CurrentDistribution
    angles : array_like, optional
        Strictly increasing polar angles in (0, pi).  Defaults to the 0.5
        degree grid.

    Returns
    -------
    FarFieldPattern
    """
    if angles is None:
        angles = default_angles()
    raw = radiation_integral(current, angles)
    peak = float(np.max(np.abs(raw)))
    if not peak > 0:
        raise ValidationError("far field vanishes on the whole grid")
    return FarFieldPattern(np.atleast_1d(np.asarray(angles, dtype=float)), raw / peak, peak)


def halfwave_closed_form(angle):
    """Half-wave dipole pattern ``cos(pi/2 cos theta) / sin theta``."""
    theta = np.asarray(angle, dtype=float)
    _check_open_interval(np.atleast_1d(theta))
    out = np.cos(0.5 * np.pi * np.cos(theta)) / np.sin(theta)
    if out.ndim == 0:
        return float(out)
    return out
