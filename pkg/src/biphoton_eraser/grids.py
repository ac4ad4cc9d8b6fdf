"""Uniform transverse sampling grids and scalar complex fields.

Everything in this package is one-dimensional: a single horizontal
transverse coordinate x (meters) sampled on a uniform grid, together with
the conjugate transverse-momentum lattice q (rad/m).  The grid size is
restricted to powers of two so the FFT-based propagators stay fast and the
position/momentum lattices stay exactly conjugate (dx * dq * n == 2*pi).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TransverseGrid:
    """Uniform sampling of a transverse plane and its conjugate momenta.

    Parameters
    ----------
    n_points : int
        Number of samples; must be a power of two, at least 2.
    extent : float
        Full physical width in meters, centered on the optical axis.

    Attributes
    ----------
    positions : ndarray
        Sample positions x_k = (k - n/2) * dx, strictly increasing and
        symmetric about zero up to the single unpaired sample at -extent/2.
    momenta : ndarray
        Conjugate momentum lattice q_k = (k - n/2) * dq with dq = 2*pi/extent,
        in the same (sorted) ordering as ``positions``.
    """

    n_points: int
    extent: float
    positions: np.ndarray = field(init=False, repr=False, compare=False)
    momenta: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.n_points
        if not isinstance(n, (int, np.integer)) or n < 2 or (n & (n - 1)) != 0:
            raise ValueError(f"n_points must be a power of two >= 2, got {n!r}")
        if not self.extent > 0:
            raise ValueError(f"extent must be positive, got {self.extent!r}")
        offsets = np.arange(n) - n // 2
        positions = offsets * self.dx
        momenta = offsets * self.dq
        positions.setflags(write=False)
        momenta.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "momenta", momenta)

    @property
    def dx(self) -> float:
        """Sample spacing in meters."""
        return self.extent / self.n_points

    @property
    def dq(self) -> float:
        """Momentum lattice spacing 2*pi/extent in rad/m."""
        return 2.0 * np.pi / self.extent

    def fft_momenta(self) -> np.ndarray:
        """Momentum lattice in FFT ordering (DC first), rad/m."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.dx)

    def index_of(self, x: float) -> int:
        """Index of the grid sample nearest to position ``x`` (meters)."""
        if not (self.positions[0] <= x <= self.positions[-1]):
            raise ValueError(
                f"position {x} m outside grid span "
                f"[{self.positions[0]}, {self.positions[-1]}] m"
            )
        return int(round(x / self.dx)) + self.n_points // 2


def make_grid(n_points: int, extent: float) -> TransverseGrid:
    """Build a :class:`TransverseGrid`; see the class for the constraints."""
    return TransverseGrid(n_points=n_points, extent=extent)


@dataclass
class ComplexField:
    """A scalar monochromatic field sampled on a :class:`TransverseGrid`.

    ``values`` holds one complex amplitude per grid sample; intensities and
    energies are taken as ``|values|**2`` with the trapezoid-free Riemann
    measure dx.
    """

    grid: TransverseGrid
    values: np.ndarray
    wavelength: float

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.n_points,):
            raise ValueError(
                f"values shape {self.values.shape} does not match grid "
                f"({self.grid.n_points},)"
            )
        if not self.wavelength > 0:
            raise ValueError(f"wavelength must be positive, got {self.wavelength!r}")

    @property
    def wavenumber(self) -> float:
        """k = 2*pi/wavelength = omega/c in rad/m."""
        return 2.0 * np.pi / self.wavelength

    def intensity(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def energy(self) -> float:
        """Total power surrogate sum(|v|^2) * dx."""
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dx)
