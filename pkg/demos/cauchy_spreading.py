"""Cauchy densities widen linearly in time and never acquire a variance.

A Cauchy(b) initial law under Cauchy noise of speed v stays Cauchy with
width b + vt.  The grid variance of such a slice is finite but meaningless,
so diagnostics report infinity from the declared tail instead.
"""
import numpy as np

from levypacket import analysis
from levypacket.evolution import evolve_process
from levypacket.presets import PRESETS

preset = PRESETS["fig-cauchycauchy"]
rho = evolve_process(preset.scenario())
x = rho.grid.x

for i, t in enumerate(rho.times):
    q = rho.values[i].real
    half = q[rho.grid.origin] / 2
    k = np.flatnonzero((x > 0) & (q >= half)).max()  # last sample above half height
    right = x[k] + (q[k] - half) / (q[k] - q[k + 1]) * (x[k + 1] - x[k])
    rep = analysis.norms(rho)[i]
    print(f"t={t:3.1f}  HWHM {right:6.3f} (b+vt={1 + t:3.1f})  mass {rep.total:.12f}  "
          f"tail beyond L {rep.tail_estimate:.2e}  variance {analysis.variance_of(rho, i)}")

err = max(np.abs(rho.values[i].real - preset.reference(x, t))[np.abs(x) <= 20].max()
          for i, t in enumerate(rho.times))
print(f"\nsup gap to the closed form on |x|<=20: {err:.2e}")
