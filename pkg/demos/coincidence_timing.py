"""One detector pair records both behaviors at once.

The idler's erase/read choice happens at a beam splitter and is time-encoded
by fibers of different lengths, so a single stop detector serves both
choices: the arrival-time histogram shows two peaks, and gating the
coincidence counter on one peak or the other pulls fringes or a flat
pattern out of the same event stream.  The path-length audit confirms the
choice happens after the signal photon is already detected.
"""

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from biphoton_eraser import (
    ChoiceOptics,
    biphoton_map,
    biphoton_source,
    build_mca,
    default_grid,
    delayed_choice_audit,
    erase_arm,
    fringe_period,
    paper_setup,
    read_arm,
    sample_events,
    signal_arm,
    windowed_patterns,
)

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

setup = paper_setup(1)
grid = default_grid(setup, 2048)
source = biphoton_source(setup, grid)
arm_signal = signal_arm(setup, grid)

map_erase = biphoton_map(arm_signal,
                         erase_arm(setup, grid, pinhole_diameter=grid.dx), source)
map_read = biphoton_map(arm_signal, read_arm(setup, grid), source)

optics = ChoiceOptics.from_setup(setup)
events = sample_events(map_erase, map_read, optics, 400_000, seed=42)
histogram = build_mca(events, bin_width=1e-10)
erase_rec, read_rec = windowed_patterns(events, histogram,
                                        fringe_period=fringe_period(setup))

print(delayed_choice_audit(setup))
print(f"transmitted fraction: {events.transmitted_fraction():.4f}")
print(f"gated erase visibility: {erase_rec.visibility:.4f}")

fig, (top, bottom) = plt.subplots(2, 1, figsize=(9, 7))
t_ns = histogram.bin_centers * 1e9
top.semilogy(t_ns, np.maximum(histogram.counts, 0.5), "C0", lw=1.0)
for window, color, label in ((histogram.window_R, "C3", "read window"),
                             (histogram.window_T, "C2", "erase window")):
    top.axvspan(window[0] * 1e9, window[1] * 1e9, color=color, alpha=0.2, label=label)
top.set_xlabel(r"$t_2 - t_1$ (ns)")
top.set_ylabel("counts per 0.1 ns bin")
top.set_title("Fiber-encoded choice: start-stop histogram of one detector pair")
top.legend(fontsize=8)

x_mm = erase_rec.x1 * 1e3
keep = np.abs(x_mm) <= 8.0
bottom.plot(x_mm[keep], erase_rec.rate[keep], "C2o-", ms=2.5, lw=0.8,
            label="events in erase window")
bottom.plot(read_rec.x1 * 1e3, read_rec.rate, "C3s-", ms=2.5, lw=0.8,
            label="events in read window")
bottom.set_xlim(-8, 8)
bottom.set_xlabel("signal detector position $x_1$ (mm)")
bottom.set_ylabel("normalized gated rate")
bottom.legend(fontsize=8)
fig.tight_layout()
fig.savefig(OUT / "coincidence_timing.png", dpi=150)
print(f"wrote {OUT / 'coincidence_timing.png'}")
