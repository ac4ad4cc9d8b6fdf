"""Coincidence-counting Monte Carlo: random erase/read choice at the beam
splitter, joint-position sampling from the two biphoton maps, fiber time
encoding, detector jitter, TAC/MCA histograms, and time-windowed patterns.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .analysis import PatternRecord, visibility as _visibility
from .biphoton import BiphotonMap
from .presets import EraserSetup

SPEED_OF_LIGHT = 299_792_458.0  # m/s

_FWHM_TO_SIGMA = 1.0 / (2.0 * np.sqrt(2.0 * np.log(2.0)))


@dataclass(frozen=True)
class ChoiceOptics:
    """Beam-splitter choice and time encoding of the two idler paths.

    ``splitter_ratio`` is the probability that a pair takes the transmitted
    (erasing) path; the delays are the extra fiber flight times of the two
    paths; ``jitter_fwhm`` is the Gaussian FWHM of the t2 - t1 measurement
    (detector response), and may be zero for idealized runs.
    """

    splitter_ratio: float = 0.5
    delay_T: float = 0.0
    delay_R: float = 0.0
    jitter_fwhm: float = 1e-9

    def __post_init__(self) -> None:
        # the degenerate endpoints are allowed: they route every pair down
        # one path, which is useful for calibration runs
        if not 0.0 <= self.splitter_ratio <= 1.0:
            raise ValueError(f"splitter_ratio must be in [0, 1], got {self.splitter_ratio!r}")
        if self.delay_T < 0 or self.delay_R < 0:
            raise ValueError("fiber delays must be nonnegative")
        if self.jitter_fwhm < 0:
            raise ValueError("jitter FWHM must be nonnegative")

    @classmethod
    def from_setup(cls, setup: EraserSetup, *, splitter_ratio: float = 0.5,
                   jitter_fwhm: float = 1e-9) -> "ChoiceOptics":
        """Fiber delays length * index / c from the setup's fibers."""
        return cls(
            splitter_ratio=splitter_ratio,
            delay_T=setup.fiber_length_T * setup.fiber_index / SPEED_OF_LIGHT,
            delay_R=setup.fiber_length_R * setup.fiber_index / SPEED_OF_LIGHT,
            jitter_fwhm=jitter_fwhm,
        )


@dataclass(frozen=True)
class EventRecord:
    """One joint detection: arm choice, transverse positions, arrival times."""

    index: int
    choice: str  # "T" (erase) or "R" (read)
    x1: float
    x2: float
    t1: float
    t2: float

    @property
    def dt(self) -> float:
        return self.t2 - self.t1


class EventTable:
    """Columnar store of joint-detection events.

    Behaves as a sequence of :class:`EventRecord`; the column arrays
    (``x1``, ``x2``, ``t1``, ``t2``, ``transmitted``) are exposed directly
    for vectorized analysis of large runs.
    """

    def __init__(self, transmitted: np.ndarray, x1: np.ndarray, x2: np.ndarray,
                 t1: np.ndarray, t2: np.ndarray):
        self.transmitted = np.asarray(transmitted, dtype=bool)
        self.x1 = np.asarray(x1, dtype=float)
        self.x2 = np.asarray(x2, dtype=float)
        self.t1 = np.asarray(t1, dtype=float)
        self.t2 = np.asarray(t2, dtype=float)
        n = len(self.transmitted)
        if not all(len(a) == n for a in (self.x1, self.x2, self.t1, self.t2)):
            raise ValueError("event columns must have equal lengths")

    def __len__(self) -> int:
        return len(self.transmitted)

    def __getitem__(self, i: int) -> EventRecord:
        return EventRecord(
            index=int(i if i >= 0 else len(self) + i),
            choice="T" if self.transmitted[i] else "R",
            x1=float(self.x1[i]), x2=float(self.x2[i]),
            t1=float(self.t1[i]), t2=float(self.t2[i]),
        )

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    @property
    def dt(self) -> np.ndarray:
        return self.t2 - self.t1

    def transmitted_fraction(self) -> float:
        return float(np.mean(self.transmitted))

    def to_csv(self, path) -> None:
        """Write index,choice,x1_m,x2_m,dt_s rows (17 significant digits)."""
        dt = self.dt
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["index", "choice", "x1_m", "x2_m", "dt_s"])
            for i in range(len(self)):
                writer.writerow([
                    i, "T" if self.transmitted[i] else "R",
                    f"{self.x1[i]:.17g}", f"{self.x2[i]:.17g}", f"{dt[i]:.17g}",
                ])


def _joint_cdf(joint: BiphotonMap) -> np.ndarray:
    density = np.abs(joint.amplitude) ** 2
    total = density.sum()
    if not total > 0:
        raise ValueError("joint density is identically zero")
    cdf = np.cumsum(density.ravel())
    cdf /= cdf[-1]
    cdf[-1] = 1.0
    return cdf


def sample_events(map_T: BiphotonMap, map_R: BiphotonMap, optics: ChoiceOptics,
                  n_events: int, seed: int) -> EventTable:
    """Draw joint detections from the two choice configurations.

    Each event flips the splitter (Bernoulli with ``splitter_ratio`` for the
    transmitted/erase path), samples (x1, x2) from the chosen map's
    normalized |A|^2 by discrete inverse-CDF, and assigns
    t2 - t1 = path delay + Gaussian jitter.  The draw order is fixed, so a
    given (inputs, seed) reproduces the event stream bit for bit.
    """
    if n_events <= 0:
        raise ValueError(f"n_events must be positive, got {n_events!r}")
    if map_T.grid1 != map_R.grid1:
        raise ValueError("the two maps must share the detector-1 grid")
    rng = np.random.default_rng(seed)
    transmitted = rng.random(n_events) < optics.splitter_ratio
    u = rng.random(n_events)
    jitter = rng.standard_normal(n_events) * (optics.jitter_fwhm * _FWHM_TO_SIGMA)

    x1 = np.empty(n_events)
    x2 = np.empty(n_events)
    for is_t, joint in ((True, map_T), (False, map_R)):
        branch = transmitted == is_t
        if not np.any(branch):
            continue
        flat = np.searchsorted(_joint_cdf(joint), u[branch], side="right")
        i1, i2 = np.divmod(flat, joint.grid2.n_points)
        x1[branch] = joint.grid1.positions[i1]
        x2[branch] = joint.grid2.positions[i2]

    t1 = np.zeros(n_events)
    t2 = np.where(transmitted, optics.delay_T, optics.delay_R) + jitter
    return EventTable(transmitted, x1, x2, t1, t2)


# --------------------------------------------------------------------------
# TAC/MCA histogram
# --------------------------------------------------------------------------

@dataclass
class McaHistogram:
    """Histogram of arrival-time differences with proposed choice windows.

    ``window_T``/``window_R`` are (start, stop) intervals in seconds around
    the transmitted-path and reflected-path peaks; they are None when the
    corresponding peak cannot be resolved.
    """

    bin_width: float
    bin_centers: np.ndarray
    counts: np.ndarray
    window_T: tuple[float, float] | None = None
    window_R: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        self.bin_centers = np.asarray(self.bin_centers, dtype=float)
        self.counts = np.asarray(self.counts)
        if np.any(self.counts < 0):
            raise ValueError("histogram counts must be nonnegative")
        if self.window_T is not None and self.window_R is not None:
            lo = max(self.window_T[0], self.window_R[0])
            hi = min(self.window_T[1], self.window_R[1])
            if lo < hi:
                raise ValueError("choice windows must be disjoint")

    def total(self) -> int:
        return int(self.counts.sum())

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["bin_center_s", "count"])
            for center, count in zip(self.bin_centers, self.counts):
                writer.writerow([f"{center:.17g}", int(count)])


def _peak_fwhm(centers: np.ndarray, counts: np.ndarray, i_peak: int,
               bin_width: float) -> tuple[float, float]:
    """(centroid, FWHM) of the peak at i_peak via half-maximum crossings."""
    half = counts[i_peak] / 2.0

    def crossing(step: int) -> float:
        i = i_peak
        while 0 <= i + step < counts.size and counts[i + step] >= half:
            i += step
        j = i + step
        if j < 0 or j >= counts.size:
            return centers[i] + step * bin_width / 2.0
        # linear interpolation between the last bin above and first below
        frac = (counts[i] - half) / max(counts[i] - counts[j], 1e-300)
        return centers[i] + step * frac * bin_width

    left, right = crossing(-1), crossing(+1)
    inside = (centers >= left) & (centers <= right)
    if np.any(inside):
        centroid = float(np.sum(centers[inside] * counts[inside])
                         / np.sum(counts[inside]))
    else:
        centroid = float(centers[i_peak])
    return centroid, float(right - left)


def build_mca(events: EventTable, bin_width: float) -> McaHistogram:
    """Bin t2 - t1 and propose +-3 sigma coincidence windows per choice peak.

    Two peaks appear whenever the two path delays differ by more than about
    three jitter FWHMs; the windows are matched to the transmitted/reflected
    paths by the events' own choice labels.
    """
    if not bin_width > 0:
        raise ValueError(f"bin_width must be positive, got {bin_width!r}")
    dt = events.dt
    start = np.floor(dt.min() / bin_width) * bin_width - bin_width
    n_bins = int(np.ceil((dt.max() - start) / bin_width)) + 2
    edges = start + np.arange(n_bins + 1) * bin_width
    counts, _ = np.histogram(dt, bins=edges)
    centers = 0.5 * (edges[:-1] + edges[1:])

    i0 = int(np.argmax(counts))
    c0, w0 = _peak_fwhm(centers, counts, i0, bin_width)
    exclusion = max(5.0 * w0, 3.0 * bin_width)
    masked = np.where(np.abs(centers - c0) <= exclusion, 0, counts)
    peaks = [(c0, w0)]
    if masked.max() > 0.05 * counts[i0]:
        i1 = int(np.argmax(masked))
        peaks.append(_peak_fwhm(centers, counts, i1, bin_width))

    def window(center: float, fwhm: float) -> tuple[float, float]:
        sigma = max(fwhm * _FWHM_TO_SIGMA, bin_width / 2.0)
        return (center - 3.0 * sigma, center + 3.0 * sigma)

    window_T = window_R = None
    has_t, has_r = np.any(events.transmitted), not np.all(events.transmitted)
    if len(peaks) == 2:
        median_t = np.median(dt[events.transmitted]) if has_t else None
        (ca, wa), (cb, wb) = peaks
        if median_t is None:
            window_R = window(ca, wa) if counts.sum() else None
        elif abs(ca - median_t) <= abs(cb - median_t):
            window_T, window_R = window(ca, wa), window(cb, wb)
        else:
            window_T, window_R = window(cb, wb), window(ca, wa)
        if not has_r:
            window_R = None
    else:
        center, fwhm = peaks[0]
        if has_t and not has_r:
            window_T = window(center, fwhm)
        elif has_r and not has_t:
            window_R = window(center, fwhm)
        # both choices present but unresolved: leave the windows unset

    return McaHistogram(bin_width=bin_width, bin_centers=centers, counts=counts,
                        window_T=window_T, window_R=window_R)


def windowed_patterns(events: EventTable, histogram: McaHistogram, *,
                      n_bins: int = 256,
                      fringe_period: float | None = None
                      ) -> tuple[PatternRecord, PatternRecord]:
    """Time-gated x1 histograms: (erase record, read record).

    Events are assigned by their measured t2 - t1 falling inside the
    histogram's proposed windows, exactly as the experiment gates its
    coincidence counter; the two records therefore come from disjoint event
    subsets.
    """
    if histogram.window_T is None or histogram.window_R is None:
        raise ValueError("histogram does not resolve both choice windows")
    lo = max(histogram.window_T[0], histogram.window_R[0])
    hi = min(histogram.window_T[1], histogram.window_R[1])
    if lo < hi:
        raise ValueError("choice windows overlap")

    dt = events.dt
    edges = np.linspace(events.x1.min(), events.x1.max(), n_bins + 1)
    centers = 0.5 * (edges[:-1] + edges[1:])

    records = []
    for label, window in (("erase", histogram.window_T), ("read", histogram.window_R)):
        inside = (dt >= window[0]) & (dt <= window[1])
        counts, _ = np.histogram(events.x1[inside], bins=edges)
        peak = counts.max()
        if peak == 0:
            raise ValueError(f"no events inside the {label} window")
        record = PatternRecord(centers, counts / peak, label,
                               fringe_period=fringe_period)
        if fringe_period is not None:
            record.visibility = _visibility(record)
        records.append(record)
    return records[0], records[1]


# --------------------------------------------------------------------------
# Delayed-choice timing audit
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class TimingReport:
    """Margin by which the idler's choice happens after the signal detection."""

    path_difference: float  # meters, (d_B + d_NPBS) - (d_A + d_A')
    margin: float           # seconds, path_difference / c
    jitter_fwhm: float      # seconds
    passed: bool

    def lines(self) -> list[str]:
        status = "PASS" if self.passed else "FAIL"
        return [
            f"{status} delayed_choice_margin: path difference "
            f"{self.path_difference * 1e3:.4g} mm -> {self.margin * 1e9:.4g} ns "
            f"vs timing resolution {self.jitter_fwhm * 1e9:.4g} ns",
        ]

    def __str__(self) -> str:
        return "\n".join(self.lines())


def delayed_choice_audit(setup: EraserSetup,
                         jitter_fwhm: float = 1e-9) -> TimingReport:
    """Check that the splitter choice is made after the signal detection.

    The optical path from the crystal to the choice splitter must exceed the
    crystal-to-detector-1 path by more than the coincidence timing
    resolution.
    """
    path_difference = (setup.d_B + setup.d_NPBS) - (setup.d_A + setup.d_A_prime)
    margin = path_difference / SPEED_OF_LIGHT
    return TimingReport(
        path_difference=path_difference,
        margin=margin,
        jitter_fwhm=jitter_fwhm,
        passed=margin > jitter_fwhm,
    )
