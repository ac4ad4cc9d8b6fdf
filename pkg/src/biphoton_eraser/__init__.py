"""Biphoton Fourier-optics simulation of a random delayed-choice quantum eraser.

The package is organized bottom-up:

* :mod:`~biphoton_eraser.grids`, :mod:`~biphoton_eraser.optics` -- 1-D
  paraxial wave-optics substrate (grids, masks, propagation, lenses);
* :mod:`~biphoton_eraser.arms`, :mod:`~biphoton_eraser.biphoton` -- optical
  arms, per-momentum Green's functions, joint two-photon amplitudes,
  erase/read coincidence patterns, Klyshko advanced-wave unfolding;
* :mod:`~biphoton_eraser.presets`, :mod:`~biphoton_eraser.analysis` -- the
  published experiment's geometry, analytic oracles, visibility and
  detector-smearing analysis, geometry audits;
* :mod:`~biphoton_eraser.montecarlo` -- coincidence-counting Monte Carlo
  with fiber time-encoding and TAC/MCA histograms;
* :mod:`~biphoton_eraser.cli` -- batch runner emitting CSV data files.
"""

import os as _os

# Honor ERASER_SIM_THREADS before numpy initializes its BLAS thread pools.
_threads = _os.environ.get("ERASER_SIM_THREADS")
if _threads:
    for _var in ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS",
                 "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from .grids import ComplexField, TransverseGrid, make_grid
from .optics import (
    TransmissionMask,
    apply_lens,
    apply_mask,
    fourier_plane_distance,
    fresnel_propagate,
    sample_mask,
)
from .arms import (
    ArmElement,
    Gap,
    Lens,
    MaskElement,
    OpticalArm,
    Pinhole,
    absorbing_window,
    arm_green_function,
    arm_mode_matrix,
    plane_wave,
    propagate_through,
    windowed_gap,
)
from .biphoton import (
    BiphotonMap,
    BiphotonSource,
    biphoton_map,
    erase_pattern,
    image_profile,
    klyshko_unfold,
    read_pattern,
)
from .presets import (
    EraserSetup,
    biphoton_source,
    default_grid,
    erase_arm,
    imaging_arm,
    paper_setup,
    read_arm,
    signal_arm,
)
from .analysis import (
    AuditCheck,
    AuditReport,
    PatternRecord,
    analytic_erase,
    envelope_halfwidth,
    fringe_period,
    geometry_audit,
    pattern_flatness,
    profile_correlation,
    smear_with_detector,
    visibility,
)
from .montecarlo import (
    SPEED_OF_LIGHT,
    ChoiceOptics,
    EventRecord,
    EventTable,
    McaHistogram,
    TimingReport,
    build_mca,
    delayed_choice_audit,
    sample_events,
    windowed_patterns,
)

__version__ = "0.1.0"

__all__ = [
    "ArmElement",
    "AuditCheck",
    "AuditReport",
    "BiphotonMap",
    "BiphotonSource",
    "ChoiceOptics",
    "ComplexField",
    "EraserSetup",
    "EventRecord",
    "EventTable",
    "Gap",
    "Lens",
    "MaskElement",
    "McaHistogram",
    "OpticalArm",
    "PatternRecord",
    "Pinhole",
    "SPEED_OF_LIGHT",
    "TimingReport",
    "TransmissionMask",
    "TransverseGrid",
    "absorbing_window",
    "analytic_erase",
    "apply_lens",
    "apply_mask",
    "arm_green_function",
    "arm_mode_matrix",
    "biphoton_map",
    "biphoton_source",
    "build_mca",
    "default_grid",
    "delayed_choice_audit",
    "envelope_halfwidth",
    "erase_arm",
    "erase_pattern",
    "fourier_plane_distance",
    "fresnel_propagate",
    "fringe_period",
    "geometry_audit",
    "image_profile",
    "imaging_arm",
    "klyshko_unfold",
    "make_grid",
    "paper_setup",
    "pattern_flatness",
    "plane_wave",
    "profile_correlation",
    "propagate_through",
    "read_arm",
    "read_pattern",
    "sample_events",
    "sample_mask",
    "signal_arm",
    "smear_with_detector",
    "visibility",
    "windowed_gap",
    "windowed_patterns",
]
