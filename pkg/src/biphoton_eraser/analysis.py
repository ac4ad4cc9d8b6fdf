"""Pattern records, the closed-form double-slit oracle, detector smearing,
fringe visibility, and the geometric consistency audit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .optics import fourier_plane_distance
from .presets import EraserSetup


# --------------------------------------------------------------------------
# Pattern records and fringe metrics
# --------------------------------------------------------------------------

@dataclass
class PatternRecord:
    """A normalized coincidence pattern over detector-1 positions.

    ``rate`` is normalized to its own maximum (values in [0, 1]);
    ``fringe_period`` is optional metadata used to define the central fringe
    window when computing visibility.
    """

    x1: np.ndarray
    rate: np.ndarray
    label: str
    visibility: float | None = None
    fringe_period: float | None = None

    def __post_init__(self) -> None:
        self.x1 = np.asarray(self.x1, dtype=float)
        self.rate = np.asarray(self.rate, dtype=float)
        if self.x1.shape != self.rate.shape or self.x1.ndim != 1:
            raise ValueError("x1 and rate must be 1-D arrays of equal length")
        if self.label not in ("erase", "read"):
            raise ValueError(f"label must be 'erase' or 'read', got {self.label!r}")
        if np.any(self.rate < 0) or np.any(self.rate > 1 + 1e-12):
            raise ValueError("rates must be normalized into [0, 1]")


def fringe_period(setup: EraserSetup) -> float:
    """Double-slit fringe period lambda * d_A' / d at detector 1."""
    if setup.slit.kind != "double_slit":
        raise ValueError("fringe period is defined for a double slit only")
    return setup.signal_wavelength * setup.d_A_prime / setup.slit.separation


def envelope_halfwidth(setup: EraserSetup) -> float:
    """First zero lambda * d_A' / a of the single-slit envelope at detector 1."""
    if setup.slit.kind != "double_slit":
        raise ValueError("envelope halfwidth is defined for a double slit only")
    return setup.signal_wavelength * setup.d_A_prime / setup.slit.width


def analytic_erase(setup: EraserSetup, x1) -> np.ndarray | float:
    """Closed-form erased-pattern oracle Sinc^2(pi x a / (l d')) * Cos^2(pi x d / (l d')).

    Normalized to 1 at x1 = 0.  Accepts scalars or arrays.
    """
    if setup.slit.kind != "double_slit":
        raise ValueError("the closed form needs a double-slit mask")
    x = np.asarray(x1, dtype=float)
    scale = setup.signal_wavelength * setup.d_A_prime
    envelope = np.sinc(x * setup.slit.width / scale) ** 2
    fringes = np.cos(np.pi * x * setup.slit.separation / scale) ** 2
    out = envelope * fringes
    return float(out) if np.isscalar(x1) else out


def visibility(pattern: PatternRecord, fringe_period: float | None = None,
               region: tuple[float, float] | None = None) -> float:
    """Fringe contrast (max - min)/(max + min) around the central fringe.

    The minimum is searched within one fringe period of the global maximum
    when a period is known (argument or ``pattern.fringe_period``); without
    one, the nearest local minima bracketing the maximum are used.
    """
    x, r = pattern.x1, pattern.rate
    if region is not None:
        keep = (x >= region[0]) & (x <= region[1])
        x, r = x[keep], r[keep]
    if r.size < 8:
        raise ValueError("insufficient range: need at least 8 samples")
    period = fringe_period if fringe_period is not None else pattern.fringe_period
    i_max = int(np.argmax(r))
    vmax = r[i_max]
    if vmax == 0.0:
        return 0.0
    if period is not None:
        if x[-1] - x[0] < period:
            raise ValueError("insufficient range: pattern spans less than one fringe")
        window = np.abs(x - x[i_max]) <= period / 2.0
        vmin = float(np.min(r[window]))
    else:
        vmin = vmax
        for step in (-1, 1):
            i = i_max
            while 0 < i + step < r.size - 1 and r[i + step] <= r[i]:
                i += step
            vmin = min(vmin, float(r[i]))
    return (vmax - vmin) / (vmax + vmin)


def pattern_flatness(pattern: PatternRecord,
                     region: tuple[float, float] | None = None) -> float:
    """Largest relative deviation from the mean, max|r - mean| / mean."""
    x, r = pattern.x1, pattern.rate
    if region is not None:
        keep = (x >= region[0]) & (x <= region[1])
        x, r = x[keep], r[keep]
    if r.size == 0:
        raise ValueError("empty region")
    mean = float(np.mean(r))
    if mean == 0.0:
        raise ValueError("pattern vanishes on the region")
    return float(np.max(np.abs(r - mean)) / mean)


def profile_correlation(profile: np.ndarray, reference: np.ndarray) -> float:
    """Normalized (Pearson) cross-correlation between two sampled profiles."""
    profile = np.asarray(profile, dtype=float)
    reference = np.asarray(reference, dtype=float)
    if profile.shape != reference.shape:
        raise ValueError("profiles must have equal shapes")
    return float(np.corrcoef(profile, reference)[0, 1])


def smear_with_detector(pattern: PatternRecord, width: float) -> PatternRecord:
    """Moving-average the pattern with a top-hat of the detector width.

    Fractional-cell kernel weights keep the effective window width exact.
    The record is trimmed to the positions the window fully covers (half a
    detector width is lost per edge), re-normalized to its own maximum, and
    its visibility is recomputed when a fringe period is attached.
    """
    if width < 0:
        raise ValueError("detector width must be nonnegative")
    if width == 0.0:
        return PatternRecord(pattern.x1.copy(), pattern.rate.copy(), pattern.label,
                             pattern.visibility, pattern.fringe_period)
    span = pattern.x1[-1] - pattern.x1[0]
    if width >= span:
        raise ValueError(f"detector width {width} m not below pattern span {span} m")
    dx = float(np.mean(np.diff(pattern.x1)))
    half = width / 2.0
    n_side = int(np.ceil(half / dx + 0.5))
    offsets = np.arange(-n_side, n_side + 1) * dx
    weights = np.clip(np.minimum(offsets + dx / 2, half)
                      - np.maximum(offsets - dx / 2, -half), 0.0, None)
    weights /= weights.sum()
    smoothed = np.convolve(pattern.rate, weights, mode="valid")
    kept = slice(n_side, pattern.x1.size - n_side)
    if smoothed.size < 8:
        raise ValueError("detector window leaves too little of the pattern")
    smoothed = smoothed / smoothed.max()
    record = PatternRecord(pattern.x1[kept].copy(), smoothed, pattern.label,
                           fringe_period=pattern.fringe_period)
    if record.fringe_period is not None:
        record.visibility = visibility(record)
    return record


# --------------------------------------------------------------------------
# Geometry audit
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AuditCheck:
    name: str
    status: str  # PASS | FAIL | INFO
    value: float
    detail: str

    def line(self) -> str:
        return f"{self.status:4s} {self.name}: {self.detail}"


@dataclass(frozen=True)
class AuditReport:
    checks: tuple[AuditCheck, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return all(c.status != "FAIL" for c in self.checks)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]

    def __str__(self) -> str:
        return "\n".join(self.lines())

    def __getitem__(self, name: str) -> AuditCheck:
        for check in self.checks:
            if check.name == name:
                return check
        raise KeyError(name)


def _fourier_plane_check(name: str, object_distance: float, f_prime: float,
                         configured: float) -> AuditCheck:
    recomputed = fourier_plane_distance(object_distance, f_prime)
    rel = abs(recomputed - configured) / configured
    if rel <= 1e-9:
        status = "PASS"
    elif rel <= 0.015:
        status = "INFO"
    else:
        status = "FAIL"
    return AuditCheck(
        name, status, rel,
        f"recomputed {recomputed * 1e3:.4g} mm vs configured "
        f"{configured * 1e3:.4g} mm ({rel * 100:.2f}% deviation)",
    )


def geometry_audit(setup: EraserSetup) -> AuditReport:
    """Consistency audit of a setup: never raises, reports line by line.

    Checks (i) the two-photon imaging condition
    1/(d_A + d_B) + 1/d_B' = 1/f, (ii) the unit-magnification condition
    d_A + d_B = d_B' = 2f, (iii) both configured Fourier-plane distances
    against the thin-lens solution with the object plane in the imaging
    lens's focal plane, and (iv) that the source divergence comfortably
    exceeds the slit diffraction angle (ratio >= 5) so no first-order
    pattern forms.
    """
    checks: list[AuditCheck] = []

    residual = 1.0 / (setup.d_A + setup.d_B) + 1.0 / setup.d_B_prime - 1.0 / setup.f
    checks.append(AuditCheck(
        "two_photon_imaging_condition",
        "PASS" if abs(residual) <= 1e-9 / setup.f else "FAIL",
        residual,
        f"1/(d_A+d_B) + 1/d_B' - 1/f = {residual:.3g} per meter",
    ))

    mag_dev = max(abs(setup.d_A + setup.d_B - 2 * setup.f),
                  abs(setup.d_B_prime - 2 * setup.f)) / (2 * setup.f)
    checks.append(AuditCheck(
        "unit_magnification",
        "PASS" if mag_dev <= 1e-9 else "FAIL",
        mag_dev,
        f"d_A+d_B = {(setup.d_A + setup.d_B) * 1e3:.4g} mm, "
        f"d_B' = {setup.d_B_prime * 1e3:.4g} mm, 2f = {2 * setup.f * 1e3:.4g} mm",
    ))

    object_distance = setup.d_B_prime - setup.f
    checks.append(_fourier_plane_check(
        "fourier_plane_transmitted", object_distance, setup.f_T_prime, setup.z_T))
    checks.append(_fourier_plane_check(
        "fourier_plane_reflected", object_distance, setup.f_R_prime, setup.z_R))

    if setup.slit.kind == "double_slit":
        diffraction_angle = setup.signal_wavelength / setup.slit.separation
        ratio = setup.divergence / diffraction_angle
        checks.append(AuditCheck(
            "divergence_margin",
            "PASS" if ratio >= 5.0 else "FAIL",
            ratio,
            f"divergence {setup.divergence * 1e3:.3g} mrad vs slit diffraction "
            f"{diffraction_angle * 1e3:.3g} mrad (ratio {ratio:.2f}, need >= 5)",
        ))
    else:
        checks.append(AuditCheck(
            "divergence_margin", "INFO", float("nan"),
            "no double slit configured; diffraction-angle margin not applicable",
        ))

    return AuditReport(tuple(checks))
