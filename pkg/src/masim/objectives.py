"""Declarative placement objectives and their evaluation.

An objective spec pairs a scenario (target, adversaries, budget) with a
sense (minimize or maximize).  ``evaluate_objective`` turns a spec plus a
concrete layout into a scalar; optimizers treat that scalar as a black box
except for NullDepth, which also has an analytic gradient.

Channel specs inside LeakageMin may be a far-field Direction, a near-field
PolarLocation, or a tuple of PathSpec (multipath).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .beamforming import LinkBudget, mrt_weights, secrecy_rate, snr
from .channel import (
    AmplitudeModel,
    CarrierSpec,
    Direction,
    PathSpec,
    PolarLocation,
    multipath_channel,
    nearfield_response,
    steering_vector,
)
from .errors import InvalidArgumentError
from .geometry import ArrayLayout, PlacementConstraints, validate_layout

ChannelSpec = Union[Direction, PolarLocation, tuple]


@dataclass(frozen=True)
class NullDepth:
    """Residual power at the null directions under MRT toward the target.

    Value is sum_k |a(target)^H a(null_k)|^2 / n^2, in [0, K]; zero exactly
    when every null is exact.  An empty null tuple is allowed and gives a
    constant 0 objective.  Sense: minimize.
    """

    target: Direction
    nulls: tuple[Direction, ...] = ()

    def __post_init__(self):
        for nd in self.nulls:
            if nd == self.target:
                raise InvalidArgumentError("target direction cannot also be a null")

    @property
    def sense(self) -> str:
        return "minimize"


@dataclass(frozen=True)
class SecrecyRateFarField:
    """Secrecy rate with MRT toward rx and a worst-case (max-SNR) eavesdropper.

    Sense: maximize.  With no eavesdroppers the value is the rx capacity.
    """

    rx: Direction
    eves: tuple[Direction, ...]
    budget: LinkBudget

    @property
    def sense(self) -> str:
        return "maximize"


@dataclass(frozen=True)
class SecrecyRateNearField:
    """Near-field secrecy rate; channels are spherical-wave responses.

    Sense: maximize.  ``amplitude`` selects the per-element amplitude model.
    """

    rx: PolarLocation
    eves: tuple[PolarLocation, ...]
    budget: LinkBudget
    amplitude: AmplitudeModel = AmplitudeModel.FREE_SPACE

    def __post_init__(self):
        for loc in self.eves:
            if loc == self.rx:
                raise InvalidArgumentError("an eavesdropper coincides with the receiver")

    @property
    def sense(self) -> str:
        return "maximize"


@dataclass(frozen=True)
class LeakageMin:
    """Total power leaked to adversary channels under MRT toward the target.

    Sense: minimize.  ``amplitude`` applies to near-field channel specs.
    """

    target: ChannelSpec
    eves: tuple[ChannelSpec, ...]
    amplitude: AmplitudeModel = AmplitudeModel.UNIT

    def __post_init__(self):
        if len(self.eves) == 0:
            raise InvalidArgumentError("LeakageMin needs at least one adversary channel spec")

    @property
    def sense(self) -> str:
        return "minimize"


ObjectiveSpec = Union[NullDepth, SecrecyRateFarField, SecrecyRateNearField, LeakageMin]


def resolve_channel(
    spec: ChannelSpec,
    layout: ArrayLayout,
    carrier: CarrierSpec,
    amplitude: AmplitudeModel = AmplitudeModel.UNIT,
) -> np.ndarray:
    """Build the channel vector described by a channel spec."""
    if isinstance(spec, Direction):
        return steering_vector(layout, spec, carrier)
    if isinstance(spec, PolarLocation):
        return nearfield_response(layout, spec, carrier, amplitude)
    if isinstance(spec, tuple):
        return multipath_channel(layout, spec, carrier)
    raise InvalidArgumentError(f"unsupported channel spec {type(spec).__name__}")


def target_channel(spec: ObjectiveSpec, layout: ArrayLayout, carrier: CarrierSpec) -> np.ndarray:
    """Channel toward the intended receiver (the MRT target) for a spec."""
    if isinstance(spec, NullDepth):
        return steering_vector(layout, spec.target, carrier)
    if isinstance(spec, SecrecyRateFarField):
        return steering_vector(layout, spec.rx, carrier)
    if isinstance(spec, SecrecyRateNearField):
        return nearfield_response(layout, spec.rx, carrier, spec.amplitude)
    if isinstance(spec, LeakageMin):
        return resolve_channel(spec.target, layout, carrier, spec.amplitude)
    raise InvalidArgumentError(f"unsupported objective spec {type(spec).__name__}")


def evaluate_objective(
    spec: ObjectiveSpec,
    layout: ArrayLayout,
    carrier: CarrierSpec,
    constraints: PlacementConstraints | None,
) -> float:
    """Scalar objective value for a layout.

    When ``constraints`` is given the layout is checked first and an
    infeasible layout raises InvalidArgumentError; pass None to skip the
    check (e.g. for layouts feasible by construction).
    """
    if constraints is not None:
        report = validate_layout(layout, constraints)
        if not report.ok:
            raise InvalidArgumentError(
                f"layout violates constraints: {report.violations[0].message}"
            )
    if isinstance(spec, NullDepth):
        a0 = steering_vector(layout, spec.target, carrier)
        total = 0.0
        for nd in spec.nulls:
            ak = steering_vector(layout, nd, carrier)
            total += abs(np.vdot(a0, ak)) ** 2
        return total / layout.n**2
    if isinstance(spec, (SecrecyRateFarField, SecrecyRateNearField)):
        h_rx = target_channel(spec, layout, carrier)
        w = mrt_weights(h_rx)
        gamma_b = snr(spec.budget, w, h_rx)
        gamma_e = 0.0
        for e in spec.eves:
            if isinstance(spec, SecrecyRateFarField):
                h_e = steering_vector(layout, e, carrier)
            else:
                h_e = nearfield_response(layout, e, carrier, spec.amplitude)
            gamma_e = max(gamma_e, snr(spec.budget, w, h_e))
        return secrecy_rate(gamma_b, gamma_e)
    if isinstance(spec, LeakageMin):
        w = mrt_weights(target_channel(spec, layout, carrier))
        total = 0.0
        for e in spec.eves:
            h_e = resolve_channel(e, layout, carrier, spec.amplitude)
            total += abs(np.vdot(w, h_e)) ** 2
        return total
    raise InvalidArgumentError(f"unsupported objective spec {type(spec).__name__}")


def signed_value(spec: ObjectiveSpec, value: float) -> float:
    """Map a raw objective value onto minimize orientation."""
    return value if spec.sense == "minimize" else -value


def null_offsets(spec: NullDepth) -> np.ndarray:
    """delta_k = cos(theta_k) - cos(theta_0) for a 1-D nulling spec."""
    if spec.target.dim != 1 or any(nd.dim != 1 for nd in spec.nulls):
        raise InvalidArgumentError("null offsets are defined for 1-D directions")
    c0 = math.cos(math.radians(spec.target.theta_deg))
    return np.array([math.cos(math.radians(nd.theta_deg)) - c0 for nd in spec.nulls])


def nulling_value(spec: NullDepth, x: np.ndarray, beta: float, deltas: np.ndarray) -> float:
    """Fast NullDepth value for 1-D positions x given precomputed offsets."""
    n = x.size
    if deltas.size == 0:
        return 0.0
    s = np.exp(1j * beta * np.outer(deltas, x)).sum(axis=1)
    return float((np.abs(s) ** 2).sum()) / n**2


def nulling_gradient(spec: NullDepth, layout: ArrayLayout, carrier: CarrierSpec) -> np.ndarray:
    """Analytic gradient of the NullDepth objective w.r.t. 1-D positions.

    d f / d x_m = -(2 beta / n^2) * sum_k delta_k * Im(conj(S_k) e^{j beta x_m delta_k})
    with S_k = sum_m e^{j beta x_m delta_k}.
    """
    if layout.dim != 1:
        raise InvalidArgumentError("nulling_gradient requires a 1-D layout")
    x = layout.positions
    deltas = null_offsets(spec)
    if deltas.size == 0:
        return np.zeros(x.size)
    beta = carrier.beta
    phases = np.exp(1j * beta * np.outer(deltas, x))  # (K, n)
    s = phases.sum(axis=1)  # (K,)
    inner = np.imag(s.conj()[:, None] * phases)  # (K, n)
    return -(2.0 * beta / x.size**2) * (deltas[:, None] * inner).sum(axis=0)
