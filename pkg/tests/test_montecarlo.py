import numpy as np
import pytest

from biphoton_eraser import (
    SPEED_OF_LIGHT,
    ChoiceOptics,
    McaHistogram,
    biphoton_map,
    biphoton_source,
    build_mca,
    default_grid,
    delayed_choice_audit,
    erase_arm,
    fringe_period,
    pattern_flatness,
    read_arm,
    sample_events,
    signal_arm,
    windowed_patterns,
)
import dataclasses


@pytest.fixture(scope="module")
def mc_maps(setup1):
    """Erase (pinhole) and read maps on a small grid for sampling tests."""
    grid = default_grid(setup1, 1024)
    source = biphoton_source(setup1, grid)
    arm1 = signal_arm(setup1, grid)
    map_t = biphoton_map(arm1, erase_arm(setup1, grid, pinhole_diameter=grid.dx),
                         source)
    map_r = biphoton_map(arm1, read_arm(setup1, grid), source)
    return grid, map_t, map_r


@pytest.fixture(scope="module")
def optics(setup1):
    return ChoiceOptics.from_setup(setup1)


# --------------------------------------------------------------------------
# choice optics
# --------------------------------------------------------------------------

def test_fiber_delays(optics):
    assert optics.delay_T == pytest.approx(4.5 * 1.496 / SPEED_OF_LIGHT, rel=1e-12)
    assert optics.delay_R == pytest.approx(2.0 * 1.496 / SPEED_OF_LIGHT, rel=1e-12)
    separation = optics.delay_T - optics.delay_R
    assert separation == pytest.approx(12.475e-9, rel=1e-3)


def test_choice_optics_validation():
    with pytest.raises(ValueError):
        ChoiceOptics(splitter_ratio=1.5)
    with pytest.raises(ValueError):
        ChoiceOptics(delay_T=-1e-9)
    with pytest.raises(ValueError):
        ChoiceOptics(jitter_fwhm=-1e-9)
    ChoiceOptics(splitter_ratio=1.0)  # degenerate splitter allowed
    ChoiceOptics(jitter_fwhm=0.0)    # ideal detectors allowed


# --------------------------------------------------------------------------
# event sampling
# --------------------------------------------------------------------------

def test_degenerate_splitter_labels_all_transmitted(mc_maps):
    _, map_t, map_r = mc_maps
    optics = ChoiceOptics(splitter_ratio=1.0, delay_T=20e-9, delay_R=10e-9)
    events = sample_events(map_t, map_r, optics, 500, seed=1)
    assert events.transmitted_fraction() == 1.0
    assert all(record.choice == "T" for record in events)


def test_split_fraction_within_binomial_error(mc_maps, optics):
    _, map_t, map_r = mc_maps
    n = 200_000
    events = sample_events(map_t, map_r, optics, n, seed=7)
    assert abs(events.transmitted_fraction() - 0.5) <= 4 * np.sqrt(0.25 / n)


def test_events_reproducible_bit_for_bit(mc_maps, optics):
    _, map_t, map_r = mc_maps
    a = sample_events(map_t, map_r, optics, 5000, seed=123)
    b = sample_events(map_t, map_r, optics, 5000, seed=123)
    for field in ("transmitted", "x1", "x2", "t1", "t2"):
        np.testing.assert_array_equal(getattr(a, field), getattr(b, field))
    c = sample_events(map_t, map_r, optics, 5000, seed=124)
    assert not np.array_equal(a.x1, c.x1)


def test_event_records_and_csv(mc_maps, optics, tmp_path):
    _, map_t, map_r = mc_maps
    events = sample_events(map_t, map_r, optics, 64, seed=5)
    assert len(events) == 64
    record = events[3]
    assert record.index == 3
    assert record.choice in ("T", "R")
    assert record.dt == record.t2 - record.t1
    path_a, path_b = tmp_path / "a.csv", tmp_path / "b.csv"
    events.to_csv(path_a)
    events.to_csv(path_b)
    assert path_a.read_bytes() == path_b.read_bytes()
    header = path_a.read_text().splitlines()[0]
    assert header == "index,choice,x1_m,x2_m,dt_s"


def test_sample_events_validation(mc_maps, optics, setup1):
    grid, map_t, map_r = mc_maps
    with pytest.raises(ValueError):
        sample_events(map_t, map_r, optics, 0, seed=1)
    other_grid = default_grid(setup1, 512)
    other_source = biphoton_source(setup1, other_grid)
    map_other = biphoton_map(signal_arm(setup1, other_grid),
                             read_arm(setup1, other_grid), other_source)
    with pytest.raises(ValueError):
        sample_events(map_t, map_other, optics, 10, seed=1)


def test_transmitted_positions_follow_erase_marginal(mc_maps, optics):
    # chi-squared per bin of the sampled x1 histogram against the map's own
    # marginal stays near 1
    grid, map_t, map_r = mc_maps
    n = 200_000
    events = sample_events(map_t, map_r, optics, n, seed=11)
    picked = events.x1[events.transmitted]
    indices = np.rint((picked - grid.positions[0]) / grid.dx).astype(int)
    observed = np.bincount(indices, minlength=grid.n_points)
    density = map_t.g2().sum(axis=1)
    expected = density / density.sum() * picked.size
    keep = expected >= 10
    chi2 = np.sum((observed[keep] - expected[keep]) ** 2 / expected[keep])
    dof = int(keep.sum())
    assert 0.85 <= chi2 / dof <= 1.20


def test_joint_sampling_total_variation(mc_maps, optics):
    # empirical joint frequencies approach the map density: TV <= 0.01 at
    # one million draws on a 256 x 256 coarse graining of the erase map
    grid, map_t, map_r = mc_maps
    n = 1_000_000
    events = sample_events(map_t, map_t, optics, n, seed=21)
    fold = grid.n_points // 256
    density = map_t.g2()
    coarse = density.reshape(256, fold, 256, fold).sum(axis=(1, 3))
    coarse /= coarse.sum()
    i1 = np.rint((events.x1 - grid.positions[0]) / grid.dx).astype(int) // fold
    i2 = np.rint((events.x2 - grid.positions[0]) / grid.dx).astype(int) // fold
    counts = np.zeros((256, 256))
    np.add.at(counts, (i1, i2), 1.0)
    tv = 0.5 * np.abs(counts / n - coarse).sum()
    assert tv <= 0.01


def test_read_map_sampling_converges(mc_maps, optics):
    # the diffuse read map needs far more draws per cell; check the
    # total-variation distance at least shrinks as the sample grows
    grid, map_t, map_r = mc_maps
    fold = grid.n_points // 128
    density = map_r.g2()
    coarse = density.reshape(128, fold, 128, fold).sum(axis=(1, 3))
    coarse /= coarse.sum()

    def tv(n):
        events = sample_events(map_r, map_r, optics, n, seed=31)
        i1 = np.rint((events.x1 - grid.positions[0]) / grid.dx).astype(int) // fold
        i2 = np.rint((events.x2 - grid.positions[0]) / grid.dx).astype(int) // fold
        counts = np.zeros((128, 128))
        np.add.at(counts, (i1, i2), 1.0)
        return 0.5 * np.abs(counts / n - coarse).sum()

    assert tv(400_000) < tv(50_000)


# --------------------------------------------------------------------------
# MCA histogram
# --------------------------------------------------------------------------

def test_mca_two_peaks_at_fiber_separation(mc_maps, optics):
    _, map_t, map_r = mc_maps
    events = sample_events(map_t, map_r, optics, 100_000, seed=3)
    histogram = build_mca(events, bin_width=1e-10)
    assert histogram.total() == 100_000
    assert histogram.window_T is not None and histogram.window_R is not None
    center_t = 0.5 * (histogram.window_T[0] + histogram.window_T[1])
    center_r = 0.5 * (histogram.window_R[0] + histogram.window_R[1])
    expected = optics.delay_T - optics.delay_R
    assert abs((center_t - center_r) - expected) <= 1.5e-10
    # each peak's FWHM reproduces the configured 1 ns jitter within 10%
    for window in (histogram.window_T, histogram.window_R):
        sigma = (window[1] - window[0]) / 6.0
        fwhm = sigma * 2 * np.sqrt(2 * np.log(2))
        assert 0.9e-9 <= fwhm <= 1.1e-9


def test_mca_windows_capture_and_separate(mc_maps, optics):
    _, map_t, map_r = mc_maps
    events = sample_events(map_t, map_r, optics, 200_000, seed=13)
    histogram = build_mca(events, bin_width=1e-10)
    dt = events.dt
    t_mask = events.transmitted
    in_t = (dt >= histogram.window_T[0]) & (dt <= histogram.window_T[1])
    in_r = (dt >= histogram.window_R[0]) & (dt <= histogram.window_R[1])
    # +-3 sigma windows keep essentially all of their own peak
    assert in_t[t_mask].mean() >= 0.99
    assert in_r[~t_mask].mean() >= 0.99
    # and none of the other one (29 sigma apart: zero crossings expected)
    assert np.count_nonzero(in_r & t_mask) <= 1
    assert np.count_nonzero(in_t & ~t_mask) <= 1


def test_mca_zero_jitter_equal_delays_single_bin(mc_maps):
    _, map_t, map_r = mc_maps
    optics = ChoiceOptics(delay_T=5e-9, delay_R=5e-9, jitter_fwhm=0.0)
    events = sample_events(map_t, map_r, optics, 1000, seed=2)
    histogram = build_mca(events, bin_width=1e-10)
    assert np.count_nonzero(histogram.counts) == 1
    assert histogram.counts.max() == 1000


def test_mca_zero_jitter_distinct_delays(mc_maps):
    _, map_t, map_r = mc_maps
    optics = ChoiceOptics(delay_T=20e-9, delay_R=10e-9, jitter_fwhm=0.0)
    events = sample_events(map_t, map_r, optics, 2000, seed=2)
    histogram = build_mca(events, bin_width=1e-10)
    assert np.count_nonzero(histogram.counts) == 2
    assert histogram.window_T is not None and histogram.window_R is not None


def test_mca_validation(mc_maps, optics):
    _, map_t, map_r = mc_maps
    events = sample_events(map_t, map_r, optics, 100, seed=1)
    with pytest.raises(ValueError):
        build_mca(events, bin_width=0.0)
    with pytest.raises(ValueError):
        McaHistogram(bin_width=1e-10, bin_centers=np.zeros(3),
                     counts=np.array([1, -2, 3]))
    with pytest.raises(ValueError):
        McaHistogram(bin_width=1e-10, bin_centers=np.zeros(3),
                     counts=np.ones(3), window_T=(0.0, 2.0), window_R=(1.0, 3.0))


def test_mca_csv_golden(mc_maps, optics, tmp_path):
    _, map_t, map_r = mc_maps
    events = sample_events(map_t, map_r, optics, 5000, seed=17)
    histogram = build_mca(events, bin_width=1e-10)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    histogram.to_csv(a)
    histogram.to_csv(b)
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().splitlines()[0] == "bin_center_s,count"


# --------------------------------------------------------------------------
# windowed patterns
# --------------------------------------------------------------------------

def test_windowed_patterns_split_events(mc_maps, optics, setup1):
    _, map_t, map_r = mc_maps
    events = sample_events(map_t, map_r, optics, 300_000, seed=4)
    histogram = build_mca(events, bin_width=1e-10)
    erase_rec, read_rec = windowed_patterns(events, histogram,
                                            fringe_period=fringe_period(setup1))
    assert erase_rec.label == "erase" and read_rec.label == "read"
    assert erase_rec.visibility >= 0.90
    # read flatness needs coarse bins for Poisson headroom at this depth
    region = (-1.5 * fringe_period(setup1), 1.5 * fringe_period(setup1))
    coarse_read = windowed_patterns(events, histogram, n_bins=16)[1]
    assert pattern_flatness(coarse_read, region) <= 0.05


def test_windowed_patterns_need_resolved_windows(mc_maps):
    _, map_t, map_r = mc_maps
    optics = ChoiceOptics(delay_T=5e-9, delay_R=5e-9, jitter_fwhm=1e-9)
    events = sample_events(map_t, map_r, optics, 20_000, seed=6)
    histogram = build_mca(events, bin_width=1e-10)
    with pytest.raises(ValueError):
        windowed_patterns(events, histogram)


# --------------------------------------------------------------------------
# delayed-choice timing
# --------------------------------------------------------------------------

def test_delayed_choice_margin(setup1):
    report = delayed_choice_audit(setup1)
    assert report.path_difference == pytest.approx(0.505, rel=1e-9)
    assert abs(report.margin - 1.684e-9) <= 0.05e-9
    assert report.passed
    assert "PASS" in str(report)


def test_delayed_choice_fails_when_splitter_moved(setup1):
    shorter = dataclasses.replace(setup1, d_NPBS=setup1.d_NPBS - 0.4)
    report = delayed_choice_audit(shorter)
    assert report.margin == pytest.approx(0.35e-9, rel=0.02)
    assert not report.passed
    assert "FAIL" in str(report)
