"""Joint two-photon amplitudes from a momentum-anticorrelated source.

A collinear degenerate down-conversion source emits photon pairs whose
transverse momenta are exactly opposite on the discrete lattice (mode q in
arm 1 pairs with mode -q in arm 2).  The joint detection amplitude is

    A(x1, x2) = sum_{|q| <= q_aperture} g1(x1; q) * g2(x2; -q) * dq

with g_i the numerically propagated arm Green's functions; |A|^2 is the
coincidence-rate density.  The same sum evaluated in the advanced-wave
order (backward from detector 2 to the source, momentum-flip at the
source, forward to detector 1) is :func:`klyshko_unfold`; the two agree to
rounding error because they are the same linear algebra reassociated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arms import OpticalArm, _apply_elements, arm_mode_matrix
from .grids import ComplexField, TransverseGrid


@dataclass(frozen=True)
class BiphotonSource:
    """Degenerate pair source: one wavelength, a momentum aperture, a grid.

    ``q_aperture`` is the half-width of the emitted transverse-momentum
    band, q_aperture = (2*pi/wavelength) * divergence/2 for a full-cone
    divergence angle.
    """

    wavelength: float
    q_aperture: float
    grid: TransverseGrid

    def __post_init__(self) -> None:
        if not self.wavelength > 0:
            raise ValueError("wavelength must be positive")
        if not self.q_aperture > 0:
            raise ValueError("q_aperture must be positive")
        if self.q_aperture > float(np.max(np.abs(self.grid.momenta))):
            raise ValueError("q_aperture exceeds the grid momentum range")

    @classmethod
    def from_divergence(cls, wavelength: float, divergence: float,
                        grid: TransverseGrid) -> "BiphotonSource":
        q_ap = (2.0 * np.pi / wavelength) * divergence / 2.0
        return cls(wavelength=wavelength, q_aperture=q_ap, grid=grid)

    def max_mode_index(self) -> int:
        """Largest |m| of an emitted lattice mode q = m * dq."""
        m_ap = int(np.floor(self.q_aperture / self.grid.dq * (1.0 + 1e-12)))
        return min(m_ap, self.grid.n_points // 2 - 1)

    def mode_mask(self, q: np.ndarray) -> np.ndarray:
        """Boolean selector of emitted lattice modes.

        Selection is by integer lattice index so the joint-amplitude sum and
        the advanced-wave unfolding pick exactly the same modes regardless
        of rounding in the two momentum-lattice representations.  The
        unpaired most-negative FFT mode is dropped so every kept q has its
        -q partner.
        """
        indices = np.rint(np.asarray(q) / self.grid.dq).astype(np.int64)
        return np.abs(indices) <= self.max_mode_index()

    def emitted_momenta(self) -> np.ndarray:
        """Sorted lattice momenta inside the aperture."""
        q = self.grid.momenta
        return q[self.mode_mask(q)]


@dataclass
class BiphotonMap:
    """Joint amplitude A[x1, x2] on a grid pair; |A|^2 is the G2 density."""

    amplitude: np.ndarray
    grid1: TransverseGrid
    grid2: TransverseGrid

    def __post_init__(self) -> None:
        self.amplitude = np.asarray(self.amplitude, dtype=np.complex128)
        if self.amplitude.shape != (self.grid1.n_points, self.grid2.n_points):
            raise ValueError("amplitude shape does not match the grids")
        if not np.any(self.amplitude):
            raise ValueError("joint amplitude is identically zero")

    def g2(self) -> np.ndarray:
        return np.abs(self.amplitude) ** 2


def biphoton_map(arm1: OpticalArm, arm2: OpticalArm,
                 source: BiphotonSource) -> BiphotonMap:
    """Assemble the joint amplitude for two arms fed by one pair source."""
    if not (arm1.wavelength == arm2.wavelength == source.wavelength):
        raise ValueError(
            "arms and source must share one degenerate wavelength, got "
            f"{arm1.wavelength}, {arm2.wavelength}, {source.wavelength}"
        )
    if arm1.grid != source.grid or arm2.grid != source.grid:
        raise ValueError("arms and source must share the sampling grid")
    qs = source.emitted_momenta()
    if qs.size == 0:
        raise ValueError("no lattice modes inside the source momentum aperture")
    g1 = arm_mode_matrix(arm1, qs)
    g2 = arm_mode_matrix(arm2, -qs)
    amplitude = (g1 * source.grid.dq) @ g2.T
    return BiphotonMap(amplitude=amplitude, grid1=arm1.grid, grid2=arm2.grid)


def erase_pattern(joint: BiphotonMap, x2_fixed: float) -> np.ndarray:
    """Coincidence pattern over x1 with detector 2 parked at one point.

    Returns |A(x1, x2_fixed)|^2 normalized to its own maximum.
    """
    j = joint.grid2.index_of(x2_fixed)
    pattern = np.abs(joint.amplitude[:, j]) ** 2
    peak = pattern.max()
    if peak == 0.0:
        raise ValueError(f"joint amplitude vanishes along x2 = {x2_fixed} m")
    return pattern / peak


def read_pattern(joint: BiphotonMap) -> np.ndarray:
    """Coincidence pattern over x1 with detector 2 integrating its plane.

    Returns sum_x2 |A|^2 * dx2, normalized to its own maximum.
    """
    pattern = np.sum(np.abs(joint.amplitude) ** 2, axis=1) * joint.grid2.dx
    return pattern / pattern.max()


def image_profile(joint: BiphotonMap, x1_fixed: float = 0.0) -> np.ndarray:
    """Coincidence profile over x2 at a fixed detector-1 position.

    In an imaging configuration this is the ghost image of the arm-1 mask.
    """
    i = joint.grid1.index_of(x1_fixed)
    profile = np.abs(joint.amplitude[i, :]) ** 2
    peak = profile.max()
    if peak == 0.0:
        raise ValueError(f"joint amplitude vanishes along x1 = {x1_fixed} m")
    return profile / peak


def klyshko_unfold(arm1: OpticalArm, arm2: OpticalArm, source: BiphotonSource,
                   x2_fixed: float) -> ComplexField:
    """Advanced-wave field at detector 1 for a point detector 2.

    Launches a one-sample point source at ``x2_fixed`` on the detector-2
    plane, runs arm 2 backward (reverse element order, negated gaps,
    conjugated phases and transmissions), applies the source's
    momentum-reversing mirror (complex conjugation at the source plane)
    band-limited to the emission aperture, then runs arm 1 forward.

    The result equals the ``x2_fixed`` column of the joint amplitude from
    :func:`biphoton_map` up to rounding, so ``|result|**2`` reproduces the
    corresponding :func:`erase_pattern` slice.
    """
    if not (arm1.wavelength == arm2.wavelength == source.wavelength):
        raise ValueError("arms and source must share one degenerate wavelength")
    if arm1.grid != source.grid or arm2.grid != source.grid:
        raise ValueError("arms and source must share the sampling grid")
    grid = source.grid

    start = np.zeros(grid.n_points, dtype=np.complex128)
    start[grid.index_of(x2_fixed)] = 1.0

    backward = _apply_elements(start, arm2, adjoint=True)

    # The pair source acts as a phase-conjugating mirror (q -> -q together
    # with conjugation), restricted to the emitted momentum band.
    mirrored = np.conj(backward)
    spectrum = np.fft.fft(mirrored)
    spectrum[~source.mode_mask(grid.fft_momenta())] = 0.0
    # n * dq makes the unfolded field match the joint-amplitude column exactly
    at_source = np.fft.ifft(spectrum) * (grid.n_points * grid.dq)

    forward = _apply_elements(at_source, arm1)
    return ComplexField(grid, forward, arm1.wavelength)
