import numpy as np
import pytest

from biphoton_eraser import (
    PatternRecord,
    analytic_erase,
    envelope_halfwidth,
    fringe_period,
    geometry_audit,
    paper_setup,
    pattern_flatness,
    profile_correlation,
    smear_with_detector,
    visibility,
)
import dataclasses


# --------------------------------------------------------------------------
# closed-form oracle
# --------------------------------------------------------------------------

def test_analytic_erase_normalized_at_center(setup1):
    assert analytic_erase(setup1, 0.0) == 1.0


def test_analytic_erase_first_fringe_zero(setup1):
    # cosine factor vanishes at lambda d_A' / (2 d) ~ 1.218 mm
    x_zero = setup1.signal_wavelength * setup1.d_A_prime / (2 * setup1.slit.separation)
    assert x_zero == pytest.approx(1.2178e-3, rel=1e-3)
    assert analytic_erase(setup1, x_zero) < 1e-12


def test_fringe_scales(setup1, setup2):
    assert fringe_period(setup1) == pytest.approx(2.4356e-3, rel=1e-3)
    assert fringe_period(setup2) == pytest.approx(4.579e-3, rel=1e-3)
    assert envelope_halfwidth(setup1) == pytest.approx(7.632e-3, rel=1e-3)


def test_analytic_erase_needs_double_slit(setup1):
    from biphoton_eraser import TransmissionMask
    broken = setup1.with_slit(TransmissionMask.single_slit(100e-6))
    with pytest.raises(ValueError):
        analytic_erase(broken, 0.0)
    with pytest.raises(ValueError):
        fringe_period(broken)


def test_analytic_erase_periodicity(setup2):
    # fringe maxima at integer multiples of the period, zeros halfway
    period = fringe_period(setup2)
    x = np.linspace(-2.5, 2.5, 11) * period
    values = analytic_erase(setup2, x)
    maxima = values[1::2]  # -2, -1, 0, +1, +2 periods: fringe peaks
    envelope = np.sinc(x[1::2] * setup2.slit.width /
                       (setup2.signal_wavelength * setup2.d_A_prime)) ** 2
    np.testing.assert_allclose(maxima, envelope, rtol=1e-12)
    assert values[5] == pytest.approx(1.0)
    minima = values[::2]  # half-integer multiples
    assert np.all(minima < 1e-10)


# --------------------------------------------------------------------------
# records, visibility, smearing
# --------------------------------------------------------------------------

def _cos2_record(period=2.4356e-3, n=4801, spans=3.0, label="erase"):
    # n chosen so the fringe extrema land exactly on the sample lattice
    x = np.linspace(-spans * period, spans * period, n)
    rate = np.cos(np.pi * x / period) ** 2
    return PatternRecord(x, rate, label, fringe_period=period)


def test_record_validation():
    with pytest.raises(ValueError):
        PatternRecord(np.arange(4.0), np.ones(3), "erase")
    with pytest.raises(ValueError):
        PatternRecord(np.arange(4.0), np.ones(4), "other")
    with pytest.raises(ValueError):
        PatternRecord(np.arange(4.0), 2 * np.ones(4), "read")


def test_visibility_perfect_fringe():
    assert visibility(_cos2_record()) == pytest.approx(1.0, abs=1e-9)


def test_visibility_constant_pattern():
    x = np.linspace(-1, 1, 101)
    record = PatternRecord(x, np.ones_like(x), "read")
    assert visibility(record) == 0.0


def test_visibility_without_period_uses_local_minima():
    record = _cos2_record()
    record.fringe_period = None
    assert visibility(record) == pytest.approx(1.0, abs=1e-9)


def test_visibility_insufficient_range():
    record = PatternRecord(np.linspace(0, 1e-3, 50), np.ones(50), "erase",
                           fringe_period=5e-3)
    with pytest.raises(ValueError):
        visibility(record)
    tiny = PatternRecord(np.linspace(0, 1, 5), np.ones(5), "erase")
    with pytest.raises(ValueError):
        visibility(tiny)


def test_smear_zero_width_is_identity(setup1):
    record = _cos2_record()
    out = smear_with_detector(record, 0.0)
    np.testing.assert_array_equal(out.rate, record.rate)


def test_smear_published_detector_width(setup1):
    # 200 um top-hat onto the pure slit-1 fringe: visibility
    # sinc(pi w d / (lambda d_A')) ~ 0.98895
    record = _cos2_record(period=fringe_period(setup1), n=12001, spans=2.0)
    out = smear_with_detector(record, 200e-6)
    assert out.visibility == pytest.approx(0.98895, abs=5e-4)


def test_smear_full_period_kills_fringes(setup1):
    # averaging over one full fringe period nulls the oscillation; what is
    # left is the envelope slope across the central window (0.056 for this
    # slit set), against 1.0 unsmeared
    period = fringe_period(setup1)
    x = np.linspace(-6e-3, 6e-3, 24001)
    record = PatternRecord(x, analytic_erase(setup1, x), "erase",
                           fringe_period=period)
    out = smear_with_detector(record, period)
    assert out.visibility <= 0.06
    # the pure fringe factor with no envelope is nulled outright
    flat = smear_with_detector(_cos2_record(period=period, spans=2.0), period)
    assert flat.visibility <= 1e-6


def test_smear_monotone_in_width(setup1):
    record = _cos2_record(period=fringe_period(setup1), n=12001, spans=2.0)
    widths = np.linspace(0.0, 1.8e-3, 10)
    values = [smear_with_detector(record, w).visibility
              if w > 0 else visibility(record) for w in widths]
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_smear_width_bounds():
    record = _cos2_record()
    with pytest.raises(ValueError):
        smear_with_detector(record, -1e-6)
    with pytest.raises(ValueError):
        smear_with_detector(record, 1.0)


def test_flatness_and_correlation_helpers():
    x = np.linspace(-1, 1, 201)
    record = PatternRecord(x, np.full_like(x, 0.5), "read")
    assert pattern_flatness(record) == 0.0
    with pytest.raises(ValueError):
        pattern_flatness(record, region=(5.0, 6.0))
    assert profile_correlation(x, x) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        profile_correlation(x, x[:-1])


# --------------------------------------------------------------------------
# geometry audit
# --------------------------------------------------------------------------

def test_audit_published_setup_passes(setup1):
    report = geometry_audit(setup1)
    assert report.passed
    assert report["two_photon_imaging_condition"].status == "PASS"
    assert report["two_photon_imaging_condition"].value == 0.0
    assert report["unit_magnification"].status == "PASS"
    assert report["fourier_plane_transmitted"].status == "PASS"
    reflected = report["fourier_plane_reflected"]
    assert reflected.status == "INFO"
    assert reflected.value == pytest.approx(1.0 / 99.0, rel=1e-6)
    assert reflected.value <= 0.015
    assert report["divergence_margin"].status == "PASS"


def test_audit_slit2_divergence_ratio(setup2):
    report = geometry_audit(setup2)
    ratio = report["divergence_margin"]
    assert ratio.status == "PASS"
    assert ratio.value == pytest.approx(27e-3 / (915.8e-9 / 250e-6), rel=1e-6)
    assert ratio.value == pytest.approx(7.37, abs=0.01)


def test_audit_flags_broken_geometry(setup1):
    shifted = dataclasses.replace(setup1, d_NPBS=0.585)
    report = geometry_audit(shifted)
    assert not report.passed
    assert report["two_photon_imaging_condition"].status == "FAIL"
    assert report["unit_magnification"].status == "FAIL"

    narrow = dataclasses.replace(setup1, divergence=5e-3)
    report = geometry_audit(narrow)
    assert report["divergence_margin"].status == "FAIL"
    assert not report.passed


def test_audit_report_text(setup1):
    report = geometry_audit(setup1)
    text = str(report)
    assert len(report.lines()) == 5
    assert "PASS" in text and "INFO" in text
    with pytest.raises(KeyError):
        report["no_such_check"]
