"""Geometry of the published random delayed-choice eraser experiment and
builders turning it into concrete optical arms.

The experiment: a 457.9 nm pump drives collinear degenerate down-conversion
(signal/idler at 915.8 nm, divergence ~27 mrad).  The signal photon crosses
a double slit 115 mm from the crystal and is scanned 1250 mm further on.
The idler passes an f = 500 mm lens 885 mm from the crystal; 1000 mm behind
the lens (= 2f, where the unit-magnification two-photon image of the slit
forms) a beam splitter feeds two detection layouts: a transmitted arm with
an f' = 250 mm lens and a tiny pinhole in its Fourier plane at 500 mm
(which-path information erased), and a reflected arm with an f' = 50 mm
lens read out wide open near its Fourier plane at 55 mm (which-path
information read).  Fibers of 4.5 m and 2 m time-encode the two choices.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .arms import (
    ArmElement,
    Gap,
    Lens,
    MaskElement,
    OpticalArm,
    Pinhole,
    absorbing_window,
    windowed_gap,
)
from .biphoton import BiphotonSource
from .grids import TransverseGrid, make_grid
from .optics import TransmissionMask


@dataclass(frozen=True)
class EraserSetup:
    """Full two-arm experiment record; all lengths in meters, angles in rad.

    ``d_B_prime`` (lens L to the choice lenses) is derived as
    ``d_NPBS + d_Lprime``.
    """

    pump_wavelength: float
    signal_wavelength: float
    d_A: float
    d_A_prime: float
    d_B: float
    d_NPBS: float
    d_Lprime: float
    f: float
    f_T_prime: float
    f_R_prime: float
    z_T: float
    z_R: float
    slit: TransmissionMask
    detector1_width: float
    divergence: float
    fiber_length_T: float
    fiber_length_R: float
    fiber_index: float = 1.496

    def __post_init__(self) -> None:
        lengths = {
            "pump_wavelength": self.pump_wavelength,
            "signal_wavelength": self.signal_wavelength,
            "d_A": self.d_A, "d_A_prime": self.d_A_prime, "d_B": self.d_B,
            "d_NPBS": self.d_NPBS, "d_Lprime": self.d_Lprime, "f": self.f,
            "f_T_prime": self.f_T_prime, "f_R_prime": self.f_R_prime,
            "z_T": self.z_T, "z_R": self.z_R,
            "detector1_width": self.detector1_width,
            "divergence": self.divergence,
            "fiber_length_T": self.fiber_length_T,
            "fiber_length_R": self.fiber_length_R,
            "fiber_index": self.fiber_index,
        }
        for name, value in lengths.items():
            if not value > 0:
                raise ValueError(f"{name} must be positive, got {value!r}")
        if abs(self.signal_wavelength - 2.0 * self.pump_wavelength) > 0.005 * self.signal_wavelength:
            raise ValueError(
                "degenerate phase matching requires signal_wavelength == "
                f"2 * pump_wavelength within 0.5%, got {self.signal_wavelength} "
                f"vs pump {self.pump_wavelength}"
            )

    @property
    def d_B_prime(self) -> float:
        return self.d_NPBS + self.d_Lprime

    def with_slit(self, slit: TransmissionMask) -> "EraserSetup":
        return replace(self, slit=slit)


#: Double-slit geometries used in the two published runs (width a, separation d).
SLIT_SETS = {
    1: (150e-6, 470e-6),
    2: (100e-6, 250e-6),
}


def paper_setup(slit_set: int = 1) -> EraserSetup:
    """The published experiment's numbers with one of its two double slits.

    The signal wavelength is taken as exactly twice the 457.9 nm pump
    (915.8 nm; the detection filters were centered at 916 nm).  Slit set 1
    is a = 150 um / d = 470 um, slit set 2 is a = 100 um / d = 250 um.
    """
    try:
        a, d = SLIT_SETS[slit_set]
    except KeyError:
        raise ValueError(f"slit_set must be one of {sorted(SLIT_SETS)}, got {slit_set!r}")
    return EraserSetup(
        pump_wavelength=457.9e-9,
        signal_wavelength=915.8e-9,
        d_A=0.115,
        d_A_prime=1.250,
        d_B=0.885,
        d_NPBS=0.985,
        d_Lprime=0.015,
        f=0.500,
        f_T_prime=0.250,
        f_R_prime=0.050,
        z_T=0.500,
        z_R=0.055,
        slit=TransmissionMask.double_slit(a, d),
        detector1_width=200e-6,
        divergence=27e-3,
        fiber_length_T=4.5,
        fiber_length_R=2.0,
    )


def default_grid(setup: EraserSetup, n_points: int = 4096,
                 extent: float | None = None) -> TransverseGrid:
    """Alias-safe grid for this geometry.

    The default extent is 0.9 * sqrt(n * lambda * f): the largest width at
    which the imaging lens's quadratic phase stays Nyquist-sampled at the
    grid edge, with 10% margin.  At n = 4096 this is ~39 mm, comfortably
    containing the full central diffraction lobe at detector 1.
    """
    if extent is None:
        extent = 0.9 * float(np.sqrt(n_points * setup.signal_wavelength * setup.f))
    return make_grid(n_points, extent)


def biphoton_source(setup: EraserSetup, grid: TransverseGrid) -> BiphotonSource:
    """Momentum-anticorrelated pair source matching the setup's divergence."""
    return BiphotonSource.from_divergence(setup.signal_wavelength,
                                          setup.divergence, grid)


def signal_arm(setup: EraserSetup, grid: TransverseGrid, *,
               absorbers: bool = True) -> OpticalArm:
    """Arm A: crystal -> double slit -> far-zone detector D1.

    The long far-zone gap is split with absorbing edge windows by default;
    the slit's diffracted tails decay only like 1/x and would otherwise wrap
    around the periodic grid into the pattern region.
    """
    elements: list[ArmElement] = [Gap(setup.d_A), MaskElement(setup.slit)]
    if absorbers:
        elements.extend(windowed_gap(setup.d_A_prime, grid))
    else:
        elements.append(Gap(setup.d_A_prime))
    return OpticalArm(tuple(elements), grid, setup.signal_wavelength)


def imaging_arm(setup: EraserSetup, grid: TransverseGrid) -> OpticalArm:
    """Arm B up to the two-photon image plane (ghost-imaging configuration)."""
    return OpticalArm(
        (Gap(setup.d_B), Lens(setup.f), Gap(setup.d_B_prime)),
        grid, setup.signal_wavelength,
    )


def erase_arm(setup: EraserSetup, grid: TransverseGrid, *,
              pinhole_diameter: float | None = None,
              pupil: bool = True) -> OpticalArm:
    """Arm B through the transmitted (erasing) output: lens f_T' and the
    Fourier-plane detector at z_T.

    ``pinhole_diameter`` adds the physical pinhole in front of the fiber;
    pass ``grid.dx`` for the published "very small" pinhole (one grid cell).
    Without it the arm exposes the whole Fourier plane so the joint map can
    be sliced at any detector position.

    ``pupil`` apodizes the choice lens with a soft-edged aperture (a real
    lens is finite).  Without it the hard grid edge acts as the pupil and
    its diffraction tails smear the Fourier-plane spots; the advanced-wave
    picture of the pinhole is then no longer cleanly collimated.  The read
    arm carries no such mask: it integrates the whole plane, so only its
    unitarity matters.
    """
    half = grid.extent / 2.0
    elements: list[ArmElement] = [
        Gap(setup.d_B), Lens(setup.f), Gap(setup.d_B_prime),
    ]
    if pupil:
        elements.append(MaskElement(absorbing_window(grid, 0.68 * half, 0.96 * half)))
    elements.extend([Lens(setup.f_T_prime), Gap(setup.z_T)])
    if pinhole_diameter is not None:
        elements.append(Pinhole(pinhole_diameter))
    return OpticalArm(tuple(elements), grid, setup.signal_wavelength)


def read_arm(setup: EraserSetup, grid: TransverseGrid) -> OpticalArm:
    """Arm B through the reflected (reading) output: lens f_R', wide open."""
    return OpticalArm(
        (Gap(setup.d_B), Lens(setup.f), Gap(setup.d_B_prime),
         Lens(setup.f_R_prime), Gap(setup.z_R)),
        grid, setup.signal_wavelength,
    )
