import math

import numpy as np
import pytest

from levypacket import analysis, solutions as so
from levypacket.checks import semigroup_error
from levypacket.errors import AliasingError, DomainError, NotInfinitelyDivisible
from levypacket.evolution import (
    InitialState,
    Scenario,
    evolve_process,
    evolve_wavepacket,
    process_residual,
    schrodinger_residual,
    thread_count,
)
from levypacket.presets import parse_noise
from levypacket.spectral import GridPair

LIGHT = GridPair.default()
HEAVY = GridPair.heavy_tail()
TIMES = (0.0, 0.5, 1.0, 2.0, 4.0)


def scenario(noise, init, grid=LIGHT, times=TIMES, mode="process"):
    return Scenario(parse_noise(noise), init, grid, times, mode=mode)


def inner(field, lim=20.0):
    return np.abs(field.grid.x) <= lim


def test_scenario_validation():
    n = parse_noise("normal(a=1)")
    with pytest.raises(DomainError):
        Scenario(n, InitialState("normal"), LIGHT, (0.0,))
    with pytest.raises(DomainError):
        Scenario(n, InitialState("normal"), LIGHT, (0.5, 1.0))
    with pytest.raises(DomainError):
        Scenario(n, InitialState("normal"), LIGHT, (0.0, 2.0, 1.0))
    with pytest.raises(DomainError):
        Scenario(n, InitialState("normal"), LIGHT, (0.0, 1.0), mode="sideways")
    with pytest.raises(DomainError):
        InitialState("vg")


def test_not_infinitely_divisible_noise():
    with pytest.raises(NotInfinitelyDivisible):
        evolve_process(scenario("uniform(a=1)", InitialState("normal")))


def test_aliasing_is_reported():
    with pytest.raises(AliasingError):
        evolve_process(scenario("normal(a=1)", InitialState("cauchy"), GridPair(40.0, 256), times=(0.0, 1e-6)))


def test_gauss_process():
    rho = evolve_process(scenario("normal(a=1)", InitialState("normal")))
    x = rho.grid.x
    for i, t in enumerate(TIMES):
        assert np.abs(rho.values[i] - so.gauss_process_pdf(x, t, D=0.5, b=1.0)).max() <= 1e-9


def test_cauchy_student_process():
    rho = evolve_process(scenario("cauchy(a=1)", InitialState("student3"), HEAVY))
    m = inner(rho)
    for i, t in enumerate(TIMES):
        assert np.abs(rho.values[i][m] - so.cauchy_student_pdf(rho.grid.x[m], t, v=1.0, b=1.0)).max() <= 1e-6


@pytest.mark.parametrize("kind,nu,noise,grid", [
    ("normal", None, "normal(a=1)", LIGHT),
    ("student3", None, "cauchy(a=1)", HEAVY),
    # the u^-4 CHF tail beyond u_max = pi N / 2L needs N = 16384 here
    ("vg", 2.0, "vg(nu=2, a=1)", GridPair(40.0, 16384)),
    ("relativistic", 1.0, "relativistic(nu=1, a=1)", LIGHT),
    # periodic images of a Cauchy law add pi / (12 L^2) near the centre
    ("cauchy", None, "cauchy(a=1)", GridPair.heavy_tail(2.0)),
])
def test_initial_slice(kind, nu, noise, grid):
    init = InitialState(kind, 1.0, nu)
    rho = evolve_process(scenario(noise, init, grid, times=(0.0, 1.0)))
    m = inner(rho)
    assert np.abs(rho.values[0][m] - init.pdf(rho.grid.x[m])).max() <= 1e-8


def test_student_wf():
    psi = evolve_wavepacket(scenario("cauchy(a=1)", InitialState("student3"), HEAVY, mode="schrodinger"))
    m = inner(psi)
    for i, t in enumerate(TIMES):
        assert np.abs(psi.values[i][m] - so.cauchy_student_wf(psi.grid.x[m], t, v=1.0, b=1.0)).max() <= 1e-6


def test_rqm_wf():
    psi = evolve_wavepacket(scenario("relativistic(nu=1, a=1)", InitialState("relativistic", 1.0, 1.0),
                                     mode="schrodinger"))
    m = inner(psi)
    for i, t in enumerate(TIMES):
        ref = so.rqm_wf(psi.grid.x[m], t, omega=1.0, nu=1.0, a=1.0)
        assert np.abs(psi.values[i][m] - ref).max() <= 1e-4


def test_zero_noise_is_static():
    psi = evolve_wavepacket(scenario("degenerate()", InitialState("laplace"), GridPair(40, 262144),
                                     times=(0.0, 1.0, 2.0), mode="schrodinger"))
    assert np.array_equal(psi.values[1], psi.values[0]) and np.array_equal(psi.values[2], psi.values[0])
    res = schrodinger_residual(psi, parse_noise("degenerate()"))
    assert res.relative == 0.0
    rho = evolve_process(scenario("degenerate()", InitialState("normal"), times=(0.0, 1.0, 2.0)))
    assert process_residual(rho, parse_noise("degenerate()")).summary()["max_abs"] == 0.0


def test_momentum_shift():
    k0 = 16 * LIGHT.du
    psi = evolve_wavepacket(scenario("normal(a=1)", InitialState("normal", k0=k0), times=(0.0, 1.0),
                                     mode="schrodinger"))
    x = psi.grid.x
    ref0 = InitialState("normal").wf(x) * np.exp(1j * k0 * x)
    assert np.abs(psi.values[0] - ref0).max() <= 1e-12
    # the packet drifts with group velocity 2 D k0 = k0
    q = np.abs(psi.values[1]) ** 2
    mean = (x * q).sum() / q.sum()
    assert mean == pytest.approx(k0, rel=1e-8)


def test_unitarity_and_initial_norm_report():
    psi = evolve_wavepacket(scenario("cauchy(a=1)", InitialState("cauchy"), HEAVY, mode="schrodinger"))
    n = np.array([r.grid for r in analysis.norms(psi)])
    assert np.abs(n / n[0] - 1).max() <= 1e-6
    assert "initial_norm2" in psi.info and psi.info["renormalization"] == 1.0


@pytest.mark.parametrize("kind", ["normal", "laplace", "student3", "cauchy"])
def test_density_is_squared_wave(kind):
    init = InitialState(kind, 1.0)
    assert init.matched
    x = np.array([0.1, 0.7, 1.0, 3.0, 11.0])
    assert np.abs(np.abs(init.wf(x)) ** 2 - init.pdf(x)).max() <= 1e-12


def test_process_and_wave_agree_at_zero():
    # periodic images of the 1/x^2 packet tail shift |psi(0)|^2 by pi / (3 L^2)
    for kind, noise, grid in (("normal", "normal(a=1)", LIGHT), ("student3", "cauchy(a=1)", GridPair(19200.0, 524288))):
        sc = scenario(noise, InitialState(kind), grid, times=(0.0, 1.0), mode="both")
        rho, psi = evolve_process(sc), evolve_wavepacket(sc)
        assert np.abs(np.abs(psi.values[0]) ** 2 - rho.values[0]).max() <= 1e-8


@pytest.mark.parametrize("noise,init,grid", [
    ("normal(a=1)", InitialState("normal"), LIGHT),
    ("vg(nu=2, a=1)", InitialState("vg", nu=2.0), LIGHT),
    ("relativistic(nu=1, a=1)", InitialState("relativistic", nu=1.0), LIGHT),
    ("wiener_poisson(D=0.5, lambda=1, component=dirac(a=1))", InitialState("normal"), LIGHT),
    ("cauchy(a=1)", InitialState("student3"), HEAVY),
])
def test_semigroup(noise, init, grid):
    assert semigroup_error(noise, init, grid, 1.0, 2.5) <= 1e-8


def test_semigroup_wave():
    assert semigroup_error("relativistic(nu=1, a=1)", InitialState("relativistic", nu=1.0), LIGHT, 1.0, 2.5,
                           mode="schrodinger") <= 1e-8


@pytest.mark.parametrize("noise,init,var0,rate", [
    ("normal(a=1)", InitialState("normal"), 1.0, 1.0),
    ("vg(nu=2, a=1)", InitialState("vg", nu=2.0), 4.0, 4.0),
    ("relativistic(nu=1, a=1)", InitialState("relativistic", nu=1.0), 1.0, 1.0),
    ("wiener_poisson(D=0.5, lambda=1, component=dirac(a=1))", InitialState("normal"), 1.0, 2.0),
])
def test_variance_linear_in_time(noise, init, var0, rate):
    rho = evolve_process(scenario(noise, init))
    got = np.array([analysis.variance_of(rho, i) for i in range(len(TIMES))])
    assert np.allclose(got, var0 + rate * np.array(TIMES), rtol=1e-4, atol=0)


def _residual_field(noise, init, grid, dt, mode):
    times = (0.0,) + tuple(1.0 + k * dt for k in (-2, -1, 0, 1, 2))
    sc = scenario(noise, init, grid, times=times, mode=mode)
    fld = evolve_process(sc) if mode == "process" else evolve_wavepacket(sc)
    return fld.window(1, 6)


@pytest.mark.slow
def test_cauchy_residuals():
    n = parse_noise("cauchy(a=1)")
    r = process_residual(_residual_field("cauchy(a=1)", InitialState("student3"), HEAVY, 1e-3, "process"), n)
    assert r.relative <= 1e-3
    w = schrodinger_residual(_residual_field("cauchy(a=1)", InitialState("student3"), HEAVY, 1e-3, "schrodinger"), n)
    assert w.relative <= 1e-3


def test_gauss_residuals():
    n = parse_noise("normal(a=1)")
    r = process_residual(_residual_field("normal(a=1)", InitialState("normal"), LIGHT, 1e-4, "process"), n)
    assert r.relative <= 1e-6
    w = schrodinger_residual(_residual_field("normal(a=1)", InitialState("normal"), LIGHT, 1e-4, "schrodinger"), n)
    assert w.relative <= 1e-6
    for rep in (r, w):
        assert rep.richardson < 0.1 * np.abs(rep.time_derivative).max() * 1e-6


def test_residual_needs_uniform_steps():
    rho = evolve_process(scenario("normal(a=1)", InitialState("normal"), times=(0.0, 1.0, 3.0)))
    with pytest.raises(DomainError):
        process_residual(rho, parse_noise("normal(a=1)"))


def test_thread_count(monkeypatch):
    monkeypatch.setenv("LEVYPACKET_THREADS", "1")
    assert thread_count() == 1
    a = evolve_process(scenario("normal(a=1)", InitialState("normal")))
    monkeypatch.setenv("LEVYPACKET_THREADS", "3")
    b = evolve_process(scenario("normal(a=1)", InitialState("normal")))
    assert np.array_equal(a.values, b.values)
