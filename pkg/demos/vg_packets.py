"""Variance-Gamma wave packets: complex-order Bessel functions against FFT.

The closed-form VG(2) packet needs K of complex order nu + 1/2 + i omega t
and Gamma of complex argument.  Both are evaluated here from their integral
representation and Lanczos series, then compared with the spectral engine.
At large omega t two maxima drift outwards while a small peak lingers at 0.
"""
import numpy as np

from levypacket import analysis, solutions
from levypacket.evolution import evolve_wavepacket
from levypacket.presets import PRESETS

preset = PRESETS["fig-vgwf2"]
times = (0.0, 1.0, 3.0, 6.0, 9.0)
psi = evolve_wavepacket(preset.scenario(times=times))
x = psi.grid.x
inner = np.abs(x) <= 20

for i, t in enumerate(times):
    ref = solutions.vg_wf(x[inner], t, omega=2.0, nu=2.0, a=1.0)
    gap = np.abs(psi.values[i][inner] - ref).max()
    q = np.abs(psi.values[i]) ** 2
    modes = analysis.find_modes(q, x)
    heights = np.interp(modes.positions, x, q)
    tall = sorted(np.array(modes.positions)[np.argsort(heights)[-2:]]) if modes.count > 1 else modes.positions
    norm = q.sum() * psi.grid.dx
    print(f"omega t={2 * t:4.1f}  |closed - FFT| {gap:.1e}  norm {norm:.10f}  "
          f"modes {modes.count}  tallest at {', '.join(f'{p:+.2f}' for p in tall)}")
