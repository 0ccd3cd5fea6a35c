"""Narrowband channel models for planar-region arrays.

Far-field responses use the plane-wave phase convention
``exp(+j * beta * <p, u>)`` where beta = 2*pi/lambda, p is the element
position and u the unit vector toward the receiver.  In 1-D, u reduces to
cos(theta) with theta measured from the array axis, so theta = 90 deg is
broadside.  Near-field responses use spherical spreading,
``g(d) * exp(-j * beta * d)``; the two conventions agree in the far-field
limit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, SingularGeometryError
from .geometry import ArrayLayout

SPEED_OF_LIGHT = 299792458.0

# Slack, in degrees, for angle range checks.
ANGLE_TOL_DEG = 1e-9


@dataclass(frozen=True)
class CarrierSpec:
    """Carrier frequency and wavelength, kept mutually consistent."""

    frequency_hz: float
    wavelength_m: float

    def __post_init__(self):
        if not (math.isfinite(self.frequency_hz) and self.frequency_hz > 0):
            raise InvalidArgumentError(f"frequency_hz must be positive, got {self.frequency_hz}")
        if not (math.isfinite(self.wavelength_m) and self.wavelength_m > 0):
            raise InvalidArgumentError(f"wavelength_m must be positive, got {self.wavelength_m}")
        if abs(self.frequency_hz * self.wavelength_m - SPEED_OF_LIGHT) > 1e-9 * SPEED_OF_LIGHT:
            raise InvalidArgumentError(
                "frequency_hz * wavelength_m must equal the speed of light "
                f"(got {self.frequency_hz * self.wavelength_m!r})"
            )

    @classmethod
    def from_frequency(cls, frequency_hz: float) -> "CarrierSpec":
        if not (math.isfinite(frequency_hz) and frequency_hz > 0):
            raise InvalidArgumentError(f"frequency_hz must be positive, got {frequency_hz}")
        return cls(frequency_hz, SPEED_OF_LIGHT / frequency_hz)

    @classmethod
    def from_wavelength(cls, wavelength_m: float) -> "CarrierSpec":
        if not (math.isfinite(wavelength_m) and wavelength_m > 0):
            raise InvalidArgumentError(f"wavelength_m must be positive, got {wavelength_m}")
        return cls(SPEED_OF_LIGHT / wavelength_m, wavelength_m)

    @property
    def beta(self) -> float:
        """Wavenumber 2*pi/lambda in rad/m."""
        return 2.0 * math.pi / self.wavelength_m


@dataclass(frozen=True)
class Direction:
    """Far-field arrival/departure direction.

    Exactly one of ``theta_deg`` (1-D: angle from the array axis, in
    [0, 180]) or ``phi_rad`` (2-D: in-plane azimuth from the x-axis) is set.
    """

    theta_deg: float | None = None
    phi_rad: float | None = None

    def __post_init__(self):
        if (self.theta_deg is None) == (self.phi_rad is None):
            raise InvalidArgumentError("set exactly one of theta_deg or phi_rad")
        if self.theta_deg is not None:
            if not math.isfinite(self.theta_deg):
                raise InvalidArgumentError("theta_deg must be finite")
            if not -ANGLE_TOL_DEG <= self.theta_deg <= 180.0 + ANGLE_TOL_DEG:
                raise InvalidArgumentError(
                    f"theta_deg must lie in [0, 180], got {self.theta_deg}"
                )
        if self.phi_rad is not None and not math.isfinite(self.phi_rad):
            raise InvalidArgumentError("phi_rad must be finite")

    @property
    def dim(self) -> int:
        return 1 if self.theta_deg is not None else 2

    def unit_vector(self) -> np.ndarray:
        """Unit propagation vector: (cos theta,) in 1-D, (cos phi, sin phi) in 2-D."""
        if self.theta_deg is not None:
            return np.array([math.cos(math.radians(self.theta_deg))])
        return np.array([math.cos(self.phi_rad), math.sin(self.phi_rad)])


@dataclass(frozen=True)
class PolarLocation:
    """Near-field point at distance d_m and azimuth phi_rad from the origin."""

    d_m: float
    phi_rad: float

    def __post_init__(self):
        if not (math.isfinite(self.d_m) and self.d_m > 0):
            raise InvalidArgumentError(f"d_m must be positive, got {self.d_m}")
        if not math.isfinite(self.phi_rad):
            raise InvalidArgumentError("phi_rad must be finite")

    def xy(self) -> np.ndarray:
        return self.d_m * np.array([math.cos(self.phi_rad), math.sin(self.phi_rad)])


@dataclass(frozen=True)
class PathSpec:
    """One propagation path: a direction and a complex gain."""

    direction: Direction
    coeff: complex


class AmplitudeModel(str, enum.Enum):
    """Per-element amplitude in near-field responses."""

    UNIT = "unit"
    FREE_SPACE = "free-space"


def steering_vector(layout: ArrayLayout, direction: Direction, carrier: CarrierSpec) -> np.ndarray:
    """Far-field array response for a plane wave from ``direction``.

    Entries are unit modulus: exp(+j * beta * <p_m, u>).
    """
    if direction.dim != layout.dim:
        raise InvalidArgumentError(
            f"direction dim {direction.dim} does not match layout dim {layout.dim}"
        )
    if layout.dim == 1:
        phase = carrier.beta * layout.positions * direction.unit_vector()[0]
    else:
        phase = carrier.beta * (layout.positions @ direction.unit_vector())
    return np.exp(1j * phase)


def nearfield_response(
    layout: ArrayLayout,
    loc: PolarLocation,
    carrier: CarrierSpec,
    amplitude: AmplitudeModel = AmplitudeModel.UNIT,
) -> np.ndarray:
    """Spherical-wave array response g(d_m) * exp(-j * beta * d_m).

    Requires a 2-D layout.  ``amplitude`` selects g: 1 for UNIT, or the
    free-space loss lambda / (4 * pi * d) for FREE_SPACE.  Raises
    SingularGeometryError if the point coincides with an element.
    """
    if layout.dim != 2:
        raise InvalidArgumentError("nearfield_response requires a 2-D layout")
    d = np.sqrt(((loc.xy() - layout.positions) ** 2).sum(axis=1))
    if np.any(d < 1e-12):
        raise SingularGeometryError(
            f"target at distance {d.min():.3g} m from an element; response undefined"
        )
    phase = np.exp(-1j * carrier.beta * d)
    if amplitude is AmplitudeModel.FREE_SPACE:
        return (carrier.wavelength_m / (4.0 * math.pi * d)) * phase
    return phase


def multipath_channel(
    layout: ArrayLayout, paths: Sequence[PathSpec], carrier: CarrierSpec
) -> np.ndarray:
    """Superposition of far-field paths: sum_k coeff_k * a(direction_k)."""
    if len(paths) == 0:
        raise InvalidArgumentError("multipath_channel needs at least one path")
    h = np.zeros(layout.n, dtype=complex)
    for p in paths:
        h += p.coeff * steering_vector(layout, p.direction, carrier)
    return h


def channel_correlation(h1: np.ndarray, h2: np.ndarray) -> float:
    """Normalized correlation |h1^H h2| / (||h1|| ||h2||), in [0, 1]."""
    h1 = np.asarray(h1)
    h2 = np.asarray(h2)
    if h1.shape != h2.shape or h1.ndim != 1:
        raise InvalidArgumentError("channel vectors must be 1-D arrays of equal length")
    n1 = np.linalg.norm(h1)
    n2 = np.linalg.norm(h2)
    if n1 == 0 or n2 == 0:
        raise InvalidArgumentError("channel_correlation is undefined for a zero vector")
    return min(1.0, float(abs(np.vdot(h1, h2)) / (n1 * n2)))


def rayleigh_distance(aperture_m: float, carrier: CarrierSpec) -> float:
    """Near-field/far-field boundary 2 * A^2 / lambda for aperture A."""
    if not (math.isfinite(aperture_m) and aperture_m >= 0):
        raise InvalidArgumentError(f"aperture_m must be >= 0, got {aperture_m}")
    return 2.0 * aperture_m * aperture_m / carrier.wavelength_m
