"""Optical arms: ordered element chains from the two-photon source to one
detector, and the per-momentum Green's functions obtained by propagating
plane-wave modes through them numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .grids import ComplexField, TransverseGrid
from .optics import TransmissionMask, sample_mask


@dataclass(frozen=True)
class Gap:
    """Free-space gap; negative distances are allowed (backward unfolding)."""
    distance: float


@dataclass(frozen=True)
class Lens:
    focal_length: float

    def __post_init__(self) -> None:
        if self.focal_length == 0.0:
            raise ValueError("lens focal length must be nonzero")


@dataclass(frozen=True)
class MaskElement:
    mask: TransmissionMask


@dataclass(frozen=True)
class Pinhole:
    """Centered circular stop of the given diameter (one grid cell minimum)."""
    diameter: float

    def __post_init__(self) -> None:
        if not self.diameter > 0:
            raise ValueError(f"pinhole diameter must be positive, got {self.diameter!r}")


ArmElement = Union[Gap, Lens, MaskElement, Pinhole]


@dataclass(frozen=True)
class OpticalArm:
    """Source-to-detector element chain sharing one sampling grid.

    The source plane and the detector plane use the same grid; the arm's
    elements are applied in listing order to a field launched at the source.
    """

    elements: tuple[ArmElement, ...]
    grid: TransverseGrid
    wavelength: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(self.elements))
        if len(self.elements) == 0:
            raise ValueError("an optical arm needs at least one element")
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength!r}")


def _element_transmission(element: ArmElement, grid: TransverseGrid) -> np.ndarray:
    """Pointwise transmission array for mask-like elements."""
    if isinstance(element, MaskElement):
        return sample_mask(element.mask, grid)
    # pinhole: top-hat of the given diameter, cell-coverage weighted
    hole = TransmissionMask.single_slit(element.diameter)
    return sample_mask(hole, grid)


def _apply_elements(values: np.ndarray, arm: OpticalArm, *, adjoint: bool = False) -> np.ndarray:
    """Run a (n,) or (n, m) stack of fields through the arm's elements.

    With ``adjoint=True`` the elements are applied in reverse order with
    negated gap distances and conjugated phases/transmissions, i.e. the
    Hermitian adjoint of the forward arm operator.
    """
    grid = arm.grid
    k = 2.0 * np.pi / arm.wavelength
    q = grid.fft_momenta()
    x = grid.positions
    matrix = values.ndim == 2

    def expand(a: np.ndarray) -> np.ndarray:
        return a[:, None] if matrix else a

    elements = reversed(arm.elements) if adjoint else arm.elements
    sign = -1.0 if adjoint else 1.0
    out = values
    for element in elements:
        if isinstance(element, Gap):
            z = sign * element.distance
            if z == 0.0:
                continue
            phase = np.exp(-0.5j * z * q * q / k)
            out = np.fft.ifft(np.fft.fft(out, axis=0) * expand(phase), axis=0)
        elif isinstance(element, Lens):
            f = sign * element.focal_length
            out = out * expand(np.exp(-0.5j * k * x * x / f))
        else:
            t = _element_transmission(element, grid)
            if adjoint:
                t = np.conj(t)
            out = out * expand(t)
    return out


def plane_wave(grid: TransverseGrid, q: float, wavelength: float) -> ComplexField:
    """Unit-amplitude transverse mode exp(i*q*x) on the grid."""
    return ComplexField(grid, np.exp(1j * q * grid.positions), wavelength)


def propagate_through(arm: OpticalArm, input_field: ComplexField) -> ComplexField:
    """Apply the arm's elements, in order, to a field at the source plane."""
    if input_field.grid is not arm.grid and input_field.grid != arm.grid:
        raise ValueError("field grid does not match arm grid")
    out = _apply_elements(input_field.values, arm)
    return ComplexField(arm.grid, out, input_field.wavelength)


def arm_green_function(arm: OpticalArm, q: float) -> ComplexField:
    """Field at the detector plane of a plane-wave mode launched at the source.

    ``q`` must lie within the momentum span of the arm's grid.  Momenta on
    the grid's own lattice propagate as exact eigenmodes of the gaps.
    """
    q_max = float(np.max(np.abs(arm.grid.momenta)))
    if abs(q) > q_max:
        raise ValueError(f"|q|={abs(q):g} rad/m outside grid momentum range {q_max:g}")
    return propagate_through(arm, plane_wave(arm.grid, q, arm.wavelength))


def absorbing_window(grid: TransverseGrid, clear_radius: float,
                     stop_radius: float) -> TransmissionMask:
    """Soft-edged aperture that damps the field approaching the grid boundary.

    Transmission is exactly 1 for |x| <= clear_radius, rolls off as a raised
    cosine, and is 0 beyond stop_radius.  Interleaving these windows inside
    long free-space gaps removes the light that would otherwise wrap around
    the periodic grid; rays that end inside the clear zone travel in
    straight lines and never meet the absorber, so the field of interest is
    untouched.
    """
    if not (0 < clear_radius < stop_radius <= grid.extent / 2):
        raise ValueError(
            "need 0 < clear_radius < stop_radius <= extent/2, got "
            f"{clear_radius!r}, {stop_radius!r} on extent {grid.extent!r}"
        )
    r = np.abs(grid.positions)
    t = np.ones(grid.n_points)
    roll = (r > clear_radius) & (r < stop_radius)
    t[roll] = np.cos(0.5 * np.pi * (r[roll] - clear_radius) / (stop_radius - clear_radius)) ** 2
    t[r >= stop_radius] = 0.0
    return TransmissionMask.custom(t, description="absorbing edge window")


def windowed_gap(total_distance: float, grid: TransverseGrid, *,
                 n_steps: int = 4, keep_fraction: float = 0.70,
                 stop_fraction: float = 0.92) -> tuple[ArmElement, ...]:
    """Split a long gap into steps with absorbing windows in between.

    The window radii grow linearly with the distance travelled so that every
    absorber clips exactly the rays destined beyond ``stop_fraction`` of the
    half-extent at the final plane, while rays ending inside
    ``keep_fraction`` of the half-extent are fully transmitted everywhere.
    Use this for gaps long enough for diffracted tails to reach the grid
    edge; short gaps do not need it.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be at least 1")
    if not (0 < keep_fraction < stop_fraction <= 1):
        raise ValueError("need 0 < keep_fraction < stop_fraction <= 1")
    half = grid.extent / 2.0
    step = total_distance / n_steps
    elements: list[ArmElement] = []
    for i in range(1, n_steps):
        frac = i / n_steps
        elements.append(Gap(step))
        elements.append(MaskElement(
            absorbing_window(grid, keep_fraction * half * frac,
                             stop_fraction * half * frac)))
    elements.append(Gap(step))
    return tuple(elements)


def arm_mode_matrix(arm: OpticalArm, q_values: np.ndarray) -> np.ndarray:
    """Detector-plane fields of many modes at once, one column per momentum.

    Returns the complex matrix G with G[i, j] = g(x_i; q_j); this is the
    batched version of :func:`arm_green_function` and the workhorse behind
    the joint-amplitude assembly.
    """
    q_values = np.asarray(q_values, dtype=float)
    q_max = float(np.max(np.abs(arm.grid.momenta)))
    if q_values.size and np.max(np.abs(q_values)) > q_max:
        raise ValueError("momentum outside grid range")
    modes = np.exp(1j * np.outer(arm.grid.positions, q_values))
    return _apply_elements(modes, arm)
