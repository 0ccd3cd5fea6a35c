"""Beamforming weights and link metrics.

Weights and channel vectors are 1-D complex numpy arrays; weight vectors
returned by this module have unit L2 norm.  Normalized dB quantities are
clamped at DB_FLOOR so downstream CSV and plotting code never sees -inf.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import AmplitudeModel, CarrierSpec, Direction, PolarLocation, nearfield_response
from .errors import InvalidArgumentError
from .geometry import ArrayLayout

DB_FLOOR = -160.0

# Relative singular-value threshold used when building null-space projectors.
_RANK_TOL = 1e-12


@dataclass(frozen=True)
class LinkBudget:
    """Transmit power and noise power, both in dBm."""

    tx_power_dbm: float
    noise_power_dbm: float

    def __post_init__(self):
        if not math.isfinite(self.tx_power_dbm) or not math.isfinite(self.noise_power_dbm):
            raise InvalidArgumentError("link budget powers must be finite")
        if self.tx_power_dbm <= self.noise_power_dbm:
            warnings.warn(
                f"tx power {self.tx_power_dbm} dBm does not exceed noise power "
                f"{self.noise_power_dbm} dBm",
                stacklevel=2,
            )

    @property
    def tx_power_mw(self) -> float:
        return 10.0 ** (self.tx_power_dbm / 10.0)

    @property
    def noise_power_mw(self) -> float:
        return 10.0 ** (self.noise_power_dbm / 10.0)


@dataclass(frozen=True)
class BeamPattern:
    """Normalized 1-D gain pattern over a sorted angle grid; peak at 0 dB."""

    theta_deg: np.ndarray
    gains_db: np.ndarray

    def __post_init__(self):
        th = np.asarray(self.theta_deg, dtype=float)
        g = np.asarray(self.gains_db, dtype=float)
        if th.ndim != 1 or th.shape != g.shape or th.size == 0:
            raise InvalidArgumentError("theta_deg and gains_db must be equal-length 1-D arrays")
        if np.any(np.diff(th) <= 0):
            raise InvalidArgumentError("theta_deg must be strictly increasing")
        if abs(g.max()) > 1e-9:
            raise InvalidArgumentError(f"normalized pattern must peak at 0 dB, got {g.max()}")
        object.__setattr__(self, "theta_deg", th)
        object.__setattr__(self, "gains_db", g)


@dataclass(frozen=True)
class FocusMap:
    """Normalized gain heat-map over a Cartesian grid; peak at 0 dB.

    ``gains_db`` has shape (len(ys), len(xs)); row i holds y = ys[i].
    """

    xs: np.ndarray
    ys: np.ndarray
    gains_db: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        g = np.asarray(self.gains_db, dtype=float)
        if xs.ndim != 1 or ys.ndim != 1 or xs.size == 0 or ys.size == 0:
            raise InvalidArgumentError("xs and ys must be non-empty 1-D arrays")
        if np.any(np.diff(xs) <= 0) or np.any(np.diff(ys) <= 0):
            raise InvalidArgumentError("grid axes must be strictly increasing")
        if g.shape != (ys.size, xs.size):
            raise InvalidArgumentError(
                f"gains_db shape {g.shape} does not match grid ({ys.size}, {xs.size})"
            )
        if abs(g.max()) > 1e-9:
            raise InvalidArgumentError(f"normalized map must peak at 0 dB, got {g.max()}")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "gains_db", g)


def mrt_weights(h: np.ndarray) -> np.ndarray:
    """Maximum-ratio weights h / ||h||."""
    h = np.asarray(h, dtype=complex)
    norm = np.linalg.norm(h)
    if norm == 0:
        raise InvalidArgumentError("mrt_weights is undefined for a zero channel")
    return h / norm


def zf_weights(h0: np.ndarray, null_channels: Sequence[np.ndarray]) -> np.ndarray:
    """Unit-norm weights maximizing gain toward h0 with nulls on each given channel.

    Projects h0 onto the orthogonal complement of the span of the null
    channels (SVD with relative threshold 1e-12), then rotates the global
    phase so w^H h0 is real and positive.  An empty null set reduces to MRT.
    Raises InvalidArgumentError when h0 lies inside the null span.
    """
    h0 = np.asarray(h0, dtype=complex)
    if len(null_channels) == 0:
        return mrt_weights(h0)
    mat = np.column_stack([np.asarray(h, dtype=complex) for h in null_channels])
    if mat.shape[0] != h0.shape[0]:
        raise InvalidArgumentError("null channels must have the same length as h0")
    u, sv, _ = np.linalg.svd(mat, full_matrices=False)
    if sv.size and sv[0] > 0:
        u = u[:, sv > _RANK_TOL * sv[0]]
        w = h0 - u @ (u.conj().T @ h0)
    else:
        w = h0.copy()
    norm = np.linalg.norm(w)
    if norm < 1e-12 * max(np.linalg.norm(h0), 1e-300):
        raise InvalidArgumentError("target channel lies in the span of the null channels")
    w /= norm
    inner = np.vdot(w, h0)
    w *= inner.conjugate() / abs(inner)
    return w


def beam_gain(w: np.ndarray, h: np.ndarray) -> float:
    """Array gain |w^H h|^2."""
    w = np.asarray(w)
    h = np.asarray(h)
    if w.shape != h.shape or w.ndim != 1:
        raise InvalidArgumentError("weights and channel must be 1-D arrays of equal length")
    return float(abs(np.vdot(w, h)) ** 2)


def beam_pattern(
    layout: ArrayLayout,
    w: np.ndarray,
    theta_grid_deg: np.ndarray,
    carrier: CarrierSpec,
) -> BeamPattern:
    """Far-field gain pattern of a 1-D layout, normalized to its own peak."""
    if layout.dim != 1:
        raise InvalidArgumentError("beam_pattern requires a 1-D layout")
    th = np.asarray(theta_grid_deg, dtype=float)
    gains = pattern_gains(layout, w, th, carrier)
    peak = gains.max()
    if peak <= 0:
        raise InvalidArgumentError("pattern is identically zero; cannot normalize")
    return BeamPattern(th, to_db(gains / peak))


def pattern_gains(
    layout: ArrayLayout,
    w: np.ndarray,
    theta_grid_deg: np.ndarray,
    carrier: CarrierSpec,
) -> np.ndarray:
    """Raw (unnormalized) gains |w^H a(theta)|^2 over an angle grid."""
    w = np.asarray(w, dtype=complex)
    if w.shape != (layout.n,):
        raise InvalidArgumentError("weights length must match the layout")
    th = np.asarray(theta_grid_deg, dtype=float)
    phase = carrier.beta * np.outer(np.cos(np.radians(th)), layout.positions)
    return np.abs(np.exp(1j * phase) @ w.conj()) ** 2


def focus_map(
    layout: ArrayLayout,
    w: np.ndarray,
    xs: np.ndarray,
    ys: np.ndarray,
    carrier: CarrierSpec,
    amplitude: AmplitudeModel = AmplitudeModel.UNIT,
) -> FocusMap:
    """Near-field gain map of a 2-D layout over a grid, normalized to its peak.

    Grid points must keep a positive distance from every element.
    """
    if layout.dim != 2:
        raise InvalidArgumentError("focus_map requires a 2-D layout")
    w = np.asarray(w, dtype=complex)
    if w.shape != (layout.n,):
        raise InvalidArgumentError("weights length must match the layout")
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    diff = pts[:, None, :] - layout.positions[None, :, :]
    d = np.sqrt((diff**2).sum(axis=2))
    if np.any(d < 1e-12):
        raise InvalidArgumentError("grid point coincides with an array element")
    resp = np.exp(-1j * carrier.beta * d)
    if amplitude is AmplitudeModel.FREE_SPACE:
        resp *= carrier.wavelength_m / (4.0 * math.pi * d)
    gains = (np.abs(resp @ w.conj()) ** 2).reshape(ys.size, xs.size)
    peak = gains.max()
    if peak <= 0:
        raise InvalidArgumentError("focus map is identically zero; cannot normalize")
    return FocusMap(xs, ys, to_db(gains / peak))


def to_db(ratio: np.ndarray | float) -> np.ndarray | float:
    """10*log10 with the result clamped at DB_FLOOR."""
    ratio = np.asarray(ratio, dtype=float)
    out = np.full(ratio.shape, DB_FLOOR)
    pos = ratio > 0
    out[pos] = np.maximum(10.0 * np.log10(ratio[pos]), DB_FLOOR)
    if out.ndim == 0:
        return float(out)
    return out


def snr(budget: LinkBudget, w: np.ndarray, h: np.ndarray) -> float:
    """Receive SNR P * |w^H h|^2 / sigma^2 (linear, powers from the budget)."""
    return budget.tx_power_mw * beam_gain(w, h) / budget.noise_power_mw


def secrecy_rate(gamma_b: float, gamma_e: float) -> float:
    """max(0, log2(1 + gamma_b) - log2(1 + gamma_e)) in bits/s/Hz."""
    if gamma_b < 0 or gamma_e < 0:
        raise InvalidArgumentError("SNRs must be non-negative")
    return max(0.0, math.log2(1.0 + gamma_b) - math.log2(1.0 + gamma_e))


def leakage_power(w: np.ndarray, eve_channels: Sequence[np.ndarray]) -> float:
    """Total normalized power captured by the given channels, sum |w^H h_k|^2."""
    return float(sum(beam_gain(w, h) for h in eve_channels))


def adversary_subspace_rank(eve_channels: Sequence[np.ndarray]) -> float:
    """Effective rank of the stacked adversary channels.

    Uses the entropy of the normalized squared singular values:
    exp(-sum p_i log p_i).  Equals k for k orthonormal channels and degrades
    toward 1 as channels become collinear.
    """
    if len(eve_channels) == 0:
        raise InvalidArgumentError("need at least one adversary channel")
    mat = np.column_stack([np.asarray(h, dtype=complex) for h in eve_channels])
    sv = np.linalg.svd(mat, compute_uv=False)
    total = (sv**2).sum()
    if total == 0:
        raise InvalidArgumentError("all adversary channels are zero")
    p = (sv**2) / total
    p = p[p > 0]
    return float(np.exp(-(p * np.log(p)).sum()))
