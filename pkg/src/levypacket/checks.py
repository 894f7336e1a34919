"""Registered invariant checks, run by ``levypacket check``.

Each check returns a :class:`CheckResult` carrying the measured error and
its tolerance.  Check names are ``family:item`` or a bare name.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analysis, specfun
from .evolution import InitialState, Scenario, evolve_process, evolve_wavepacket, process_residual, schrodinger_residual
from .laws import UNCLOSED, Family, LawSpec, chf, convolve_family, lch, lkh_reconstruct, parse_law, triplet
from .presets import PRESETS, parse_noise
from .solutions import cauchy_student_wf, cauchy_student_wf_rhs
from .spectral import ComplexField, GridPair, adaptive_integrate, convolve, navot_origin_value, pv_generator_apply

__all__ = ["CheckResult", "CHECKS", "run_check", "oracle_error", "semigroup_error"]


@dataclass(frozen=True)
class CheckResult:
    check: str
    max_error: float
    tolerance: float

    @property
    def status(self) -> str:
        return "pass" if self.max_error <= self.tolerance else "fail"

    def to_dict(self) -> dict:
        return {"check": self.check, "status": self.status, "max_error": self.max_error,
                "tolerance": self.tolerance}


_LKH_LAWS = {
    "cauchy": "cauchy(a=1)",
    "laplace": "laplace(a=1)",
    "student3": "student(alpha=3, a=1)",
    "relativistic": "relativistic(nu=1, a=1)",
    "vg": "vg(nu=2, a=1)",
    "stable": "stable(alpha=1.5, a=1)",
    "normal": "normal(a=1)",
}


def _lkh(key: str) -> float:
    law = parse_law(_LKH_LAWS[key])
    u = np.linspace(-10.0, 10.0, 41)
    return float(np.abs(lkh_reconstruct(triplet(law), u) - lch(law, u)).max())


def oracle_error(name: str, xmax: float = 20.0) -> float:
    """Sup-norm gap between a preset's spectral evolution and its closed form on ``|x| <= xmax``."""
    p = PRESETS[name]
    sc = p.scenario()
    fld = evolve_process(sc) if p.mode == "process" else evolve_wavepacket(sc)
    x = fld.grid.x
    m = np.abs(x) <= xmax
    err = 0.0
    for i, t in enumerate(fld.times):
        ref = p.reference(x[m], t)
        got = fld.values[i][m] if p.mode != "process" else fld.values[i][m].real
        err = max(err, float(np.abs(got - ref).max()))
    return err


def _oracle_tol(name: str) -> float:
    return 1e-4 if PRESETS[name].family == "bessel" else 1e-6


def _unitarity(name: str) -> float:
    fld = evolve_wavepacket(PRESETS[name].scenario())
    n = np.array([r.grid for r in analysis.norms(fld)])
    return float(np.abs(n / n[0] - 1.0).max())


def _mass(name: str) -> float:
    fld = evolve_process(PRESETS[name].scenario())
    return float(max(abs(r.total - 1.0) for r in analysis.norms(fld)))


def _beta_identity() -> float:
    # deterministic low-discrepancy cover of [0.1, 10]^2
    k = np.arange(50)
    a = 0.1 * 100.0 ** ((k * 0.6180339887498949) % 1.0)
    b = 0.1 * 100.0 ** ((k * 0.7548776662466927) % 1.0)
    return max(analysis.beta_decomposition_check(ai, bi) for ai, bi in zip(a, b))


def k0_fields(L: float = 160.0, N: int = 16384) -> ComplexField:
    """Samples of :math:`K_0(|s|)` with the Navot value at ``s = 0``."""
    g = GridPair(L, N)
    s = np.abs(g.x)
    vals = np.zeros(N)
    nz = s > 0
    vals[nz] = specfun.bessel_k(0.0, s[nz])
    vals[g.origin] = navot_origin_value(g.dx, -1.0, math.log(2.0) - specfun.EULER_GAMMA).real
    return ComplexField(g, (0.0,), vals, "position", log_singularities=((g.origin, -1.0),))


def _k0_square() -> float:
    k2 = lambda y: specfun.bessel_k(0.0, y) ** 2
    sq = adaptive_integrate(k2, 0.0, 1.0, tol=0.0, rtol=1e-12) + adaptive_integrate(k2, 1.0, np.inf, tol=0.0, rtol=1e-12)
    return abs(sq - math.pi**2 / 4)


def _k0_convolution() -> float:
    f = k0_fields()
    conv = convolve(f, f)
    x = f.grid.x
    m = np.abs(x) <= 20.0
    return float(np.abs(conv.values[0][m] - 0.5 * math.pi**2 * np.exp(-np.abs(x[m]))).max())


def _closure() -> float:
    u = np.linspace(-20.0, 20.0, 401)
    pairs = [
        ("cauchy(a=1)", "cauchy(a=2)"),
        ("stable(alpha=1.5, a=1)", "stable(alpha=1.5, a=0.5)"),
        ("vg(nu=1, a=1)", "vg(nu=2.5, a=1)"),
        ("relativistic(nu=1, a=1)", "relativistic(nu=0.5, a=1)"),
    ]
    err = 0.0
    for lt, rt in pairs:
        lhs, rhs = parse_law(lt), parse_law(rt)
        target = convolve_family(lhs, rhs)
        err = max(err, float(np.abs(chf(lhs, u) * chf(rhs, u) - chf(target, u)).max()))
    s3 = parse_law("student(alpha=3, a=1)")
    if convolve_family(s3, s3) is not UNCLOSED:
        return math.inf
    return err


def semigroup_error(noise_text: str, initial: InitialState, grid: GridPair, t1: float, t2: float,
                    mode: str = "process") -> float:
    """Gap between one-step evolution to ``t2`` and two steps through ``t1``."""
    noise = parse_noise(noise_text)
    evolve = evolve_process if mode == "process" else evolve_wavepacket
    direct = evolve(Scenario(noise, initial, grid, (0.0, t2)))
    first = evolve(Scenario(noise, initial, grid, (0.0, t1))).window(1, 2)
    restart = InitialState.from_samples(first.with_values(first.values, times=(0.0,)))
    second = evolve(Scenario(noise, restart, grid, (0.0, t2 - t1)))
    return float(np.abs(second.values[1] - direct.values[1]).max())


def _semigroup() -> float:
    g = GridPair.default()
    cases = [
        ("normal(a=1)", InitialState("normal"), g),
        ("vg(nu=2, a=1)", InitialState("vg", nu=2.0), g),
        ("relativistic(nu=1, a=1)", InitialState("relativistic", nu=1.0), g),
        ("cauchy(a=1)", InitialState("student3"), GridPair.heavy_tail()),
    ]
    return max(semigroup_error(n, s, gr, 1.0, 2.5) for n, s, gr in cases)


def _residual_cases(kind: str) -> float:
    dt = 1e-3 if kind.startswith("cauchy") else 1e-4
    times = (0.0,) + tuple(1.0 + k * dt for k in (-2, -1, 0, 1, 2))
    if kind.startswith("cauchy"):
        noise, init, grid = parse_noise("cauchy(a=1)"), InitialState("student3"), GridPair.heavy_tail()
    else:
        noise, init, grid = parse_noise("normal(a=1)"), InitialState("normal"), GridPair.default()
    sc = Scenario(noise, init, grid, times)
    if kind.endswith("process"):
        return process_residual(evolve_process(sc).window(1, 6), noise).relative
    return schrodinger_residual(evolve_wavepacket(sc).window(1, 6), noise).relative


def _triangle() -> float:
    noise = parse_noise("cauchy(a=1)")
    x = np.linspace(-10.0, 10.0, 41)
    err = 0.0
    for t in (0.0, 0.5, 1.0, 2.0):
        rhs = cauchy_student_wf_rhs(x, t, v=1.0, b=1.0)
        num = -pv_generator_apply(lambda s: cauchy_student_wf(s, t, v=1.0, b=1.0), noise.triplet(), x)
        err = max(err, float(np.abs(num - rhs).max()))
    return err


def _bimodality() -> float:
    """Distance of the detected onset from ``t = b/v``."""
    x = np.linspace(-20.0, 20.0, 8001)
    onset = analysis.bimodality_onset(lambda t: np.abs(cauchy_student_wf(x, t, v=1.0, b=1.0)) ** 2,
                                      times=np.linspace(0.0, 4.0, 41), x=x, tol=1e-4)
    return math.inf if onset is None else abs(onset - 1.0)


def _register() -> dict[str, tuple[Callable[[], float], float]]:
    reg: dict[str, tuple[Callable[[], float], float]] = {}
    for key in _LKH_LAWS:
        reg[f"lkh:{key}"] = (lambda k=key: _lkh(k), 1e-5)
    for name, p in PRESETS.items():
        short = name.removeprefix("fig-")
        reg[f"oracle:{short}"] = (lambda n=name: oracle_error(n), _oracle_tol(name))
        if p.mode == "schrodinger":
            reg[f"unitarity:{short}"] = (lambda n=name: _unitarity(n), 1e-6)
        else:
            reg[f"mass:{short}"] = (lambda n=name: _mass(n), 1e-6)
    reg["unitarity:rqm"] = reg["unitarity:rqmwf"]
    reg["beta-identity"] = (_beta_identity, 1e-12)
    reg["k0:square"] = (_k0_square, 1e-8)
    reg["k0:convolution"] = (_k0_convolution, 1e-5)
    reg["closure"] = (_closure, 1e-10)
    reg["semigroup"] = (_semigroup, 1e-8)
    reg["residual:cauchy-process"] = (lambda: _residual_cases("cauchy-process"), 1e-3)
    reg["residual:cauchy-wave"] = (lambda: _residual_cases("cauchy-wave"), 1e-3)
    reg["residual:gauss-process"] = (lambda: _residual_cases("gauss-process"), 1e-6)
    reg["residual:gauss-wave"] = (lambda: _residual_cases("gauss-wave"), 1e-6)
    reg["residual:triangle"] = (_triangle, 1e-6)
    reg["bimodality"] = (_bimodality, 1e-3)
    return reg


CHECKS = _register()


def run_check(name: str) -> CheckResult:
    try:
        fn, tol = CHECKS[name]
    except KeyError:
        raise KeyError(f"unknown check {name!r}") from None
    return CheckResult(name, float(fn()), tol)
