"""Named desk-scale scenarios with their closed-form references.

All presets use unit scales (``a = b = 1``), ``tau = 1`` and the output times
0, 0.5, 1, 2, 4.  These parameter values are choices made here; they are not
measured data.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .evolution import InitialState, Scenario
from .laws import parse_law
from .poisson import parse_wiener_poisson
from .solutions import (
    Noise,
    cauchy_cauchy_wf,
    cauchy_process_pdf,
    cauchy_student_pdf,
    cauchy_student_wf,
    gauss_process_pdf,
    gauss_wf,
    poisson_process_pdf,
    poisson_wf,
    rqm_process_pdf,
    rqm_wf,
    vg_process_pdf,
    vg_wf,
)
from .spectral import GridPair

__all__ = ["Preset", "PRESETS", "parse_noise", "get_preset"]

TIMES = (0.0, 0.5, 1.0, 2.0, 4.0)
HEAVY = (4800.0, 131072)
LIGHT = (40.0, 4096)
CUSP = (40.0, 262144)  # CHF ~ u^-2: needs u_max ~ 1e4


def parse_noise(text: str, tau: float = 1.0) -> Noise:
    """Noise from the law grammar; ``wiener_poisson(...)`` gives a compound noise."""
    text = text.strip()
    if text.startswith(("wiener_poisson", "wp(")):
        return Noise(parse_wiener_poisson(text, tau=tau), tau)
    return Noise(parse_law(text), tau)


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    noise: str
    initial: str
    mode: str
    grid: tuple
    b: float = 1.0
    nu: float | None = None
    times: tuple = TIMES
    reference: Callable | None = field(default=None, compare=False)
    family: str = "rational"  # accuracy class of the reference: rational/gaussian or bessel

    def scenario(self, grid: GridPair | None = None, times=None) -> Scenario:
        return Scenario(parse_noise(self.noise), InitialState(self.initial, self.b, self.nu),
                        grid or GridPair(*self.grid), tuple(times or self.times), mode=self.mode)

    def config_text(self) -> str:
        lines = ["[scenario]", f"noise = {self.noise}", "tau = 1", f"initial = {self.initial}",
                 f"b = {self.b:g}"]
        if self.nu is not None:
            lines.append(f"nu = {self.nu:g}")
        lines += [f"times = {', '.join(f'{t:g}' for t in self.times)}", f"mode = {self.mode}", "",
                  "[grid]", f"L = {self.grid[0]:g}", f"N = {self.grid[1]}", ""]
        return "\n".join(lines)


def _p(name, description, noise, initial, mode, grid, reference, family="rational", **kw):
    return Preset(name, description, noise, initial, mode, grid, reference=reference, family=family, **kw)


_LIST = [
    _p("fig-gauss", "normal noise on a normal law", "normal(a=1)", "normal", "process", LIGHT,
       lambda x, t: gauss_process_pdf(x, t, D=0.5, b=1.0), "gaussian"),
    _p("fig-gausswf", "free Gaussian packet", "normal(a=1)", "normal", "schrodinger", LIGHT,
       lambda x, t: gauss_wf(x, t, D=0.5, b=1.0), "gaussian"),
    _p("fig-cauchycauchy", "Cauchy noise on a Cauchy law", "cauchy(a=1)", "cauchy", "process", HEAVY,
       lambda x, t: cauchy_process_pdf(x, t, v=1.0, b=1.0)),
    _p("fig-cauchystudent", "Cauchy noise on a Student(3) law", "cauchy(a=1)", "student3", "process", HEAVY,
       lambda x, t: cauchy_student_pdf(x, t, v=1.0, b=1.0)),
    _p("fig-studentWF", "Cauchy noise on a Student(3) packet", "cauchy(a=1)", "student3", "schrodinger", HEAVY,
       lambda x, t: cauchy_student_wf(x, t, v=1.0, b=1.0)),
    _p("fig-cauchyWF", "Cauchy noise on a Cauchy packet", "cauchy(a=1)", "cauchy", "schrodinger", HEAVY,
       lambda x, t: cauchy_cauchy_wf(x, t, v=1.0, b=1.0)),
    _p("fig-vg-laplace", "VG(1) noise on a Laplace law", "vg(nu=1, a=1)", "laplace", "process", CUSP,
       lambda x, t: vg_process_pdf(x, t, omega=1.0, nu=1.0, a=1.0), "bessel"),
    _p("fig-vg2", "VG(2) noise on a VG(2) law", "vg(nu=2, a=1)", "vg", "process", LIGHT,
       lambda x, t: vg_process_pdf(x, t, omega=2.0, nu=2.0, a=1.0), "bessel", nu=2.0),
    _p("fig-vgwf-laplace", "VG(1) noise on a Laplace packet", "vg(nu=1, a=1)", "laplace", "schrodinger", CUSP,
       lambda x, t: vg_wf(x, t, omega=1.0, nu=1.0, a=1.0), "bessel", b=0.5),
    _p("fig-vgwf2", "VG(2) noise on a VG(2) packet", "vg(nu=2, a=1)", "vg", "schrodinger", LIGHT,
       lambda x, t: vg_wf(x, t, omega=2.0, nu=2.0, a=1.0), "bessel", nu=2.0),
    _p("fig-gpn", "Wiener-Poisson noise, normal jumps, on a normal law",
       "wiener_poisson(D=0.5, lambda=1, component=normal(c=1))", "normal", "process", LIGHT,
       lambda x, t: poisson_process_pdf("normal_comp", x, t, D=0.5, omega=1.0, b=1.0, c=1.0), "gaussian"),
    _p("fig-gpd", "Wiener-Poisson noise, two-point jumps, on a normal law",
       "wiener_poisson(D=0.5, lambda=1, component=dirac(a=1))", "normal", "process", LIGHT,
       lambda x, t: poisson_process_pdf("dirac_comp", x, t, D=0.5, omega=1.0, b=1.0, a=1.0), "gaussian"),
    _p("fig-lsgpn", "Wiener-Poisson noise, normal jumps, on a Gaussian packet",
       "wiener_poisson(D=0.5, lambda=1, component=normal(c=1))", "normal", "schrodinger", LIGHT,
       lambda x, t: poisson_wf("normal_comp", x, t, D=0.5, omega=1.0, b=1.0, c=1.0), "gaussian"),
    _p("fig-lsgpd", "Wiener-Poisson noise, two-point jumps, on a Gaussian packet",
       "wiener_poisson(D=0.5, lambda=1, component=dirac(a=1))", "normal", "schrodinger", LIGHT,
       lambda x, t: poisson_wf("dirac_comp", x, t, D=0.5, omega=1.0, b=1.0, a=1.0), "gaussian"),
    _p("fig-rqm", "relativistic noise on a relativistic law", "relativistic(nu=1, a=1)", "relativistic",
       "process", LIGHT, lambda x, t: rqm_process_pdf(x, t, omega=1.0, nu=1.0, a=1.0), "bessel", nu=1.0),
    _p("fig-rqmwf", "relativistic noise on a relativistic packet", "relativistic(nu=1, a=1)", "relativistic",
       "schrodinger", LIGHT, lambda x, t: rqm_wf(x, t, omega=1.0, nu=1.0, a=1.0), "bessel", nu=1.0),
]

PRESETS = {p.name: p for p in _LIST}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None
