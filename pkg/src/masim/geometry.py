"""Array geometry: moving regions, layouts, constraints, and projections.

Positions are expressed in meters. A 1-D moving region is the segment
[0, extent_m] on the array axis; a 2-D region is the square [0, extent_m]^2.
1-D layouts store positions with shape (n,), 2-D layouts with shape (n, 2).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleConstraintsError, InvalidArgumentError

# Absolute slack, in meters, used both when checking constraints and when
# projecting onto them.  Far above double rounding error at lab scales.
GEOM_TOL = 1e-12


@dataclass(frozen=True)
class MovingRegion:
    """Region the movable elements may occupy: [0, extent_m]^dim."""

    dim: int
    extent_m: float

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise InvalidArgumentError(f"region dim must be 1 or 2, got {self.dim}")
        if not (math.isfinite(self.extent_m) and self.extent_m > 0):
            raise InvalidArgumentError(
                f"region extent must be finite and positive, got {self.extent_m}"
            )


@dataclass(frozen=True)
class CLMACoupling:
    """Collocated-motor coupling: elements sit on a column-by-row grid.

    A coupled array with r rows and c columns is driven by r + c motors.
    ``col_track_coords`` are the c x-coordinates and ``row_track_coords``
    the r y-coordinates; element (i, j) sits at (col[j], row[i]).  Layouts
    are stored row-major: element index i * c + j.
    """

    row_track_coords: tuple[float, ...]
    col_track_coords: tuple[float, ...]

    def __post_init__(self):
        if len(self.row_track_coords) == 0 or len(self.col_track_coords) == 0:
            raise InvalidArgumentError("coupling track coordinate lists must be non-empty")
        for name, coords in (
            ("row_track_coords", self.row_track_coords),
            ("col_track_coords", self.col_track_coords),
        ):
            if not all(math.isfinite(v) for v in coords):
                raise InvalidArgumentError(f"coupling {name} must be finite")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_track_coords), len(self.col_track_coords)


@dataclass(frozen=True)
class PlacementConstraints:
    """Feasible set for element positions.

    Elements must lie inside ``region``, keep pairwise (Euclidean) distance
    of at least ``min_spacing_m``, and, when ``coupling`` is given, form the
    row/column cross-product grid that coupled drive motors can realize.
    """

    region: MovingRegion
    min_spacing_m: float
    coupling: CLMACoupling | None = None

    def __post_init__(self):
        if not (math.isfinite(self.min_spacing_m) and self.min_spacing_m >= 0):
            raise InvalidArgumentError(
                f"min_spacing_m must be finite and >= 0, got {self.min_spacing_m}"
            )
        if self.coupling is not None and self.region.dim != 2:
            raise InvalidArgumentError("coupling requires a 2-D region")


@dataclass(frozen=True)
class ArrayLayout:
    """Concrete element positions; shape (n,) in 1-D, (n, 2) in 2-D."""

    dim: int
    positions: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if self.dim == 1:
            if pos.ndim != 1 or pos.size < 1:
                raise InvalidArgumentError("1-D layout needs positions of shape (n,), n >= 1")
        elif self.dim == 2:
            if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] < 1:
                raise InvalidArgumentError("2-D layout needs positions of shape (n, 2), n >= 1")
        else:
            raise InvalidArgumentError(f"layout dim must be 1 or 2, got {self.dim}")
        if not np.all(np.isfinite(pos)):
            raise InvalidArgumentError("layout positions must be finite")
        object.__setattr__(self, "positions", pos)

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    def as_points(self) -> np.ndarray:
        """Positions as an (n, 2) array; 1-D layouts get y = 0."""
        if self.dim == 2:
            return self.positions
        return np.column_stack([self.positions, np.zeros(self.n)])


@dataclass(frozen=True)
class Violation:
    """One constraint violation found by validate_layout."""

    kind: str  # "bounds", "spacing", or "coupling"
    indices: tuple[int, ...]
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def make_ula(n: int, spacing_m: float, origin_m: float = 0.0) -> ArrayLayout:
    """Uniform linear array: n elements spaced spacing_m apart from origin_m."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if not (math.isfinite(spacing_m) and spacing_m > 0):
        raise InvalidArgumentError(f"spacing_m must be finite and positive, got {spacing_m}")
    return ArrayLayout(1, origin_m + spacing_m * np.arange(n))


def make_upa(rows: int, cols: int, spacing_m: float) -> ArrayLayout:
    """Uniform planar array anchored at the origin, row-major element order."""
    if rows < 1 or cols < 1:
        raise InvalidArgumentError(f"rows and cols must be >= 1, got {rows}x{cols}")
    if not (math.isfinite(spacing_m) and spacing_m > 0):
        raise InvalidArgumentError(f"spacing_m must be finite and positive, got {spacing_m}")
    xs = spacing_m * np.arange(cols)
    ys = spacing_m * np.arange(rows)
    gx, gy = np.meshgrid(xs, ys)
    return ArrayLayout(2, np.column_stack([gx.ravel(), gy.ravel()]))


def clma_layout(coupling: CLMACoupling) -> ArrayLayout:
    """Grid layout realized by the given coupled motor coordinates."""
    ys = np.asarray(coupling.row_track_coords, dtype=float)
    xs = np.asarray(coupling.col_track_coords, dtype=float)
    gx, gy = np.meshgrid(xs, ys)
    return ArrayLayout(2, np.column_stack([gx.ravel(), gy.ravel()]))


def aperture(layout: ArrayLayout) -> float:
    """Largest pairwise element distance; 0 for a single element."""
    if layout.n == 1:
        return 0.0
    pts = layout.as_points()
    diff = pts[:, None, :] - pts[None, :, :]
    return float(np.sqrt((diff**2).sum(axis=2)).max())


def _coupling_coords_from_grid(pos: np.ndarray, rows: int, cols: int):
    """Infer (row_coords, col_coords) assuming row-major grid order."""
    grid = pos.reshape(rows, cols, 2)
    col_coords = grid[0, :, 0].copy()
    row_coords = grid[:, 0, 1].copy()
    return row_coords, col_coords


def validate_layout(layout: ArrayLayout, constraints: PlacementConstraints) -> ValidationReport:
    """Check a layout against constraints and report every violation.

    Bounds and spacing are checked with an absolute slack of GEOM_TOL so
    that layouts produced by project_to_feasible always validate.
    """
    report = ValidationReport()
    if layout.dim != constraints.region.dim:
        raise InvalidArgumentError(
            f"layout dim {layout.dim} does not match region dim {constraints.region.dim}"
        )
    pos = layout.positions
    ext = constraints.region.extent_m
    low = pos < -GEOM_TOL
    high = pos > ext + GEOM_TOL
    bad = np.any(low | high, axis=-1) if layout.dim == 2 else (low | high)
    for i in np.nonzero(bad)[0]:
        report.violations.append(
            Violation("bounds", (int(i),), f"element {i} outside [0, {ext}]")
        )

    s = constraints.min_spacing_m
    if s > 0 and layout.n > 1:
        pts = layout.as_points()
        diff = pts[:, None, :] - pts[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=2))
        for i, j in zip(*np.nonzero(np.triu(dist < s - GEOM_TOL, k=1))):
            report.violations.append(
                Violation(
                    "spacing",
                    (int(i), int(j)),
                    f"elements {i} and {j} are {dist[i, j]:.6g} m apart, need {s:.6g}",
                )
            )

    cpl = constraints.coupling
    if cpl is not None:
        rows, cols = cpl.shape
        if layout.n != rows * cols:
            report.violations.append(
                Violation(
                    "coupling",
                    (),
                    f"coupled grid needs {rows * cols} elements, layout has {layout.n}",
                )
            )
        else:
            row_coords, col_coords = _coupling_coords_from_grid(pos, rows, cols)
            expected = clma_layout(CLMACoupling(tuple(row_coords), tuple(col_coords)))
            err = np.abs(expected.positions - pos).max()
            if err > GEOM_TOL:
                report.violations.append(
                    Violation(
                        "coupling",
                        (),
                        f"positions deviate from a row/column grid by {err:.3g} m",
                    )
                )
    return report


def _project_axis(x: np.ndarray, extent: float, spacing: float) -> np.ndarray:
    """Project 1-D coordinates onto [0, extent] with pairwise gaps >= spacing.

    Clips, then walks the sorted coordinates left-to-right pushing each up
    to keep the minimum gap, re-clips the top, and walks right-to-left.
    Order-preserving and idempotent.
    """
    n = x.size
    if spacing * (n - 1) > extent + GEOM_TOL:
        raise InfeasibleConstraintsError(
            f"cannot place {n} elements with spacing {spacing:.6g} m in extent {extent:.6g} m"
        )
    order = np.argsort(x, kind="stable")
    y = np.clip(x[order], 0.0, extent)
    for i in range(1, n):
        if y[i] < y[i - 1] + spacing:
            y[i] = y[i - 1] + spacing
    y = np.minimum(y, extent)
    for i in range(n - 2, -1, -1):
        if y[i] > y[i + 1] - spacing:
            y[i] = y[i + 1] - spacing
    out = np.empty_like(y)
    out[order] = y
    return out


def _project_plane(pos: np.ndarray, extent: float, spacing: float) -> np.ndarray:
    """Clip into the square, then push violating pairs apart until feasible."""
    n = pos.shape[0]
    if spacing > 0:
        per_axis = int(extent / spacing) + 1
        if n > per_axis * per_axis:
            raise InfeasibleConstraintsError(
                f"cannot place {n} elements with spacing {spacing:.6g} m "
                f"in a {extent:.6g} m square"
            )
    pts = np.clip(pos, 0.0, extent)
    if spacing <= 0 or n == 1:
        return pts
    target = spacing + GEOM_TOL + 1e-9 * spacing
    for _ in range(100):
        moved = False
        for i, j in itertools.combinations(range(n), 2):
            d = pts[j] - pts[i]
            dist = math.hypot(d[0], d[1])
            if dist >= spacing - GEOM_TOL:
                continue
            if dist < 1e-15:
                u = np.array([1.0, 0.0])  # deterministic direction for stacked points
            else:
                u = d / dist
            push = 0.5 * (target - dist)
            pts[i] = np.clip(pts[i] - push * u, 0.0, extent)
            pts[j] = np.clip(pts[j] + push * u, 0.0, extent)
            moved = True
        if not moved:
            return pts
    raise InfeasibleConstraintsError(
        f"pairwise repulsion did not converge for {n} elements "
        f"(spacing {spacing:.6g} m, extent {extent:.6g} m)"
    )


def project_to_feasible(layout: ArrayLayout, constraints: PlacementConstraints) -> ArrayLayout:
    """Map an arbitrary layout onto the feasible set.

    1-D uses an order-preserving clip-and-push sweep.  2-D without coupling
    uses deterministic pairwise repulsion (capped at 100 sweeps).  With
    coupling, column/row motor coordinates are fit by least squares (the
    per-column x means and per-row y means) and each axis is projected as
    in 1-D.  Raises InfeasibleConstraintsError when no feasible layout
    exists or the repulsion cap is hit.
    """
    if layout.dim != constraints.region.dim:
        raise InvalidArgumentError(
            f"layout dim {layout.dim} does not match region dim {constraints.region.dim}"
        )
    ext = constraints.region.extent_m
    s = constraints.min_spacing_m
    if layout.dim == 1:
        return ArrayLayout(1, _project_axis(layout.positions, ext, s))
    cpl = constraints.coupling
    if cpl is None:
        return ArrayLayout(2, _project_plane(layout.positions, ext, s))
    rows, cols = cpl.shape
    if layout.n != rows * cols:
        raise InvalidArgumentError(
            f"coupled projection needs {rows * cols} elements, layout has {layout.n}"
        )
    grid = layout.positions.reshape(rows, cols, 2)
    col_coords = _project_axis(grid[:, :, 0].mean(axis=0), ext, s)
    row_coords = _project_axis(grid[:, :, 1].mean(axis=1), ext, s)
    return clma_layout(CLMACoupling(tuple(row_coords), tuple(col_coords)))
