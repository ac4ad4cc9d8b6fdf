import dataclasses

import numpy as np
import pytest

from biphoton_eraser import (
    Gap,
    Lens,
    MaskElement,
    Pinhole,
    TransmissionMask,
    default_grid,
    erase_arm,
    imaging_arm,
    paper_setup,
    read_arm,
    signal_arm,
)


def test_published_distances_satisfy_imaging_conditions():
    setup = paper_setup(1)
    assert setup.d_A + setup.d_B == 2 * setup.f == 1.0
    assert setup.d_B_prime == 2 * setup.f
    assert setup.d_B_prime == setup.d_NPBS + setup.d_Lprime


def test_published_wavelengths_and_slits():
    s1, s2 = paper_setup(1), paper_setup(2)
    assert s1.pump_wavelength == 457.9e-9
    assert s1.signal_wavelength == 2 * s1.pump_wavelength
    assert (s1.slit.width, s1.slit.separation) == (150e-6, 470e-6)
    assert (s2.slit.width, s2.slit.separation) == (100e-6, 250e-6)
    assert s1.detector1_width == 200e-6
    assert s1.divergence == 27e-3
    assert (s1.fiber_length_T, s1.fiber_length_R) == (4.5, 2.0)
    assert s1.fiber_index == pytest.approx(1.496)


def test_unknown_slit_set_rejected():
    with pytest.raises(ValueError):
        paper_setup(3)


def test_setup_validation():
    setup = paper_setup(1)
    with pytest.raises(ValueError):
        dataclasses.replace(setup, d_A=-0.1)
    with pytest.raises(ValueError):
        dataclasses.replace(setup, signal_wavelength=900e-9)  # not degenerate
    # 0.4% off is still within the degeneracy tolerance
    dataclasses.replace(setup, signal_wavelength=2 * 457.9e-9 * 1.004)


def test_default_grid_extent_is_alias_safe():
    setup = paper_setup(1)
    for n in (1024, 4096):
        grid = default_grid(setup, n)
        assert grid.extent == pytest.approx(
            0.9 * np.sqrt(n * setup.signal_wavelength * setup.f), rel=1e-12)
        # quadratic lens phase resolvable at the grid edge
        k = 2 * np.pi / setup.signal_wavelength
        assert k * (grid.extent / 2) / setup.f <= np.pi / grid.dx
    explicit = default_grid(setup, 512, extent=10e-3)
    assert explicit.extent == 10e-3


def _kinds(arm):
    return [type(e).__name__ for e in arm.elements]


def test_signal_arm_structure():
    setup = paper_setup(1)
    grid = default_grid(setup, 512)
    arm = signal_arm(setup, grid)
    kinds = _kinds(arm)
    assert kinds[0] == "Gap" and arm.elements[0].distance == setup.d_A
    assert kinds[1] == "MaskElement"
    gaps = [e.distance for e in arm.elements[2:] if isinstance(e, Gap)]
    assert sum(gaps) == pytest.approx(setup.d_A_prime, rel=1e-12)
    bare = signal_arm(setup, grid, absorbers=False)
    assert _kinds(bare) == ["Gap", "MaskElement", "Gap"]


def test_choice_arm_structures():
    setup = paper_setup(1)
    grid = default_grid(setup, 512)
    t_arm = erase_arm(setup, grid, pinhole_diameter=grid.dx)
    assert _kinds(t_arm) == ["Gap", "Lens", "Gap", "MaskElement", "Lens", "Gap", "Pinhole"]
    assert t_arm.elements[1].focal_length == setup.f
    assert t_arm.elements[4].focal_length == setup.f_T_prime
    assert t_arm.elements[5].distance == setup.z_T
    t_bare = erase_arm(setup, grid, pupil=False)
    assert _kinds(t_bare) == ["Gap", "Lens", "Gap", "Lens", "Gap"]

    r_arm = read_arm(setup, grid)
    assert _kinds(r_arm) == ["Gap", "Lens", "Gap", "Lens", "Gap"]
    assert r_arm.elements[3].focal_length == setup.f_R_prime
    assert r_arm.elements[4].distance == setup.z_R

    i_arm = imaging_arm(setup, grid)
    assert _kinds(i_arm) == ["Gap", "Lens", "Gap"]
    assert i_arm.elements[2].distance == setup.d_B_prime


def test_slit_swap_helper():
    setup = paper_setup(1)
    custom = setup.with_slit(TransmissionMask.single_slit(300e-6))
    assert custom.slit.kind == "single_slit"
    assert custom.d_A == setup.d_A
