"""Two-point jumps shed sub-packets from a narrow Gaussian.

Wiener-Poisson noise with jumps +-a acts on a Gaussian packet as a complex
Poisson superposition of copies shifted by multiples of a.  With a narrow
packet and little diffusion the copies show up as separate satellites.
"""
import numpy as np

from levypacket import analysis, solutions
from levypacket.evolution import InitialState, Scenario, evolve_wavepacket
from levypacket.presets import parse_noise
from levypacket.spectral import GridPair

b, D, a, omega = 0.25, 0.02, 2.0, 1.0
noise = parse_noise(f"wiener_poisson(D={D}, lambda={omega}, component=dirac(a={a}))")
times = (0.0, 0.5, 1.0, 1.5, 3.0)
psi = evolve_wavepacket(Scenario(noise, InitialState("normal", b), GridPair(40.0, 8192), times, mode="schrodinger"))
x = psi.grid.x

for i, t in enumerate(times):
    q = np.abs(psi.values[i]) ** 2
    modes = analysis.find_modes(q, x)
    ref = solutions.poisson_wf("dirac_comp", x, t, D=D, omega=omega, b=b, a=a)
    print(f"omega t={omega * t:3.1f}  peaks at {', '.join(f'{p:+.2f}' for p in modes.positions)}"
          f"   |series - FFT| {np.abs(psi.values[i] - ref).max():.1e}")
