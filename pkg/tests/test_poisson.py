import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from levypacket.errors import NotAbsolutelyContinuous
from levypacket.laws import Family, LawSpec, lkh_reconstruct, parse_law
from levypacket.poisson import (
    CompoundSpec,
    compound_chf,
    compound_pdf_series,
    compound_triplet,
    generator_apply_compound,
    parse_wiener_poisson,
    truncation_index,
)
from levypacket.spectral import PlaneWave

NORMAL = LawSpec(Family.NORMAL, scale=1.0)


def spec(comp="normal(c=1)", lam=1.0, b0=1.0, tol=1e-10):
    bg = LawSpec(Family.NORMAL, scale=b0) if b0 else None
    return CompoundSpec(lam, parse_law(comp), bg, tol)


def test_chf_examples():
    u = np.linspace(-10, 10, 41)
    s = spec("dirac(a=0.7)", lam=1.3, b0=0.4)
    assert np.allclose(compound_chf(s, u), np.exp(1.3 * (np.cos(0.7 * u) - 1) - 0.08 * u * u))
    s = spec("normal(c=0.5)", lam=2.0, b0=0)
    assert np.allclose(compound_chf(s, u), np.exp(2.0 * (np.exp(-u * u / 8) - 1)))
    assert np.array_equal(compound_chf(spec(lam=0.0), u), np.exp(-u * u / 2))
    assert compound_chf(spec(), 0.0) == 1.0


def test_series_origin_value():
    k = np.arange(200)
    terms = np.exp(-np.array([math.lgamma(j + 1) for j in k])) / np.sqrt(2 * math.pi * (k + 1))
    assert compound_pdf_series(spec(), 0.0) == pytest.approx(math.exp(-1) * terms.sum(), rel=1e-12)


def test_series_zero_rate_is_background():
    x = np.linspace(-5, 5, 21)
    ref = np.exp(-0.5 * x * x / 1.3**2) / np.sqrt(2 * math.pi * 1.3**2)
    assert np.array_equal(compound_pdf_series(spec(lam=0.0, b0=1.3), x), ref)


@pytest.mark.parametrize("comp", ["normal(c=1)", "dirac(a=1)", "dirac(a=2.5)"])
def test_series_unit_mass_and_symmetry(comp):
    s = spec(comp, lam=1.7, b0=0.6)
    mass, _ = integrate.quad(lambda x: compound_pdf_series(s, x), -np.inf, np.inf, limit=400, epsabs=1e-13)
    assert mass == pytest.approx(1.0, abs=1e-10)
    x = np.linspace(0, 12, 49)
    assert np.array_equal(compound_pdf_series(s, x), compound_pdf_series(s, -x))
    assert np.all(compound_pdf_series(s, x) >= 0)


def test_series_needs_background():
    with pytest.raises(NotAbsolutelyContinuous):
        compound_pdf_series(spec("dirac(a=1)", b0=0), 0.2)


def test_process_oracle(oracles):
    from levypacket.solutions import poisson_process_pdf

    for kind, x, t, ref in oracles["poisson_pdf"]:
        got = poisson_process_pdf(kind, x, t, D=0.5, omega=1.0, b=1.0, c=1.0, a=1.0)
        assert got == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("comp", ["normal(c=1)", "dirac(a=1)"])
def test_chf_is_transform_of_series(comp):
    s = spec(comp, lam=1.0, b0=1.0)
    for u in (0.0, 1.0, 3.0, 10.0):
        val, _ = integrate.quad(lambda x: compound_pdf_series(s, x) * math.cos(u * x), -40, 40, limit=800,
                                epsabs=1e-13)
        assert val == pytest.approx(float(compound_chf(s, u)), abs=1e-6)


def test_truncation_index():
    for lam in (0.1, 1.0, 30.0):
        K = truncation_index(lam, 1e-10)
        assert K >= math.ceil(lam + 10 * math.sqrt(lam) + 20)
        from scipy.stats import poisson
        assert poisson.sf(K, lam) < 1e-10


def test_triplets():
    t = compound_triplet(spec("normal(c=2)", lam=3.0, b0=0.5))
    y = np.array([0.0, 1.0, 3.0])
    assert t.gaussian == 0.5
    assert np.allclose(t.levy_density(y), 3.0 * np.exp(-y * y / 8) / math.sqrt(8 * math.pi))
    t = compound_triplet(spec("dirac(a=0.7)", lam=2.0))
    assert t.has_atoms and sorted(t.atoms) == [(-0.7, 1.0), (0.7, 1.0)]
    t = compound_triplet(spec(lam=0.0, b0=1.2))
    assert t.gaussian == 1.2 and t.levy_density is None and not t.has_atoms


def test_lkh_on_compound():
    s = spec("normal(c=1)", lam=1.5, b0=0.8)
    u = np.linspace(-10, 10, 21)
    assert np.abs(lkh_reconstruct(compound_triplet(s), u) - np.log(compound_chf(s, u))).max() <= 1e-6


@pytest.mark.parametrize("u", [0.4, 1.0, 3.3])
def test_bernoulli_generator_on_plane_wave(u):
    s = spec("dirac(a=0.8)", lam=1.2, b0=0.5)
    x = np.array([-1.0, 0.0, 2.5])
    got = generator_apply_compound(s, PlaneWave(u), x)
    ref = (1.2 * (math.cos(0.8 * u) - 1) - 0.125 * u * u) * np.exp(1j * u * x)
    assert np.abs(got - ref).max() <= 1e-10


def test_bernoulli_generator_elementary():
    s = spec("dirac(a=1.5)", lam=0.7, b0=0)
    const = lambda y: np.full(np.shape(y), 2.0)
    assert np.all(generator_apply_compound(s, const, np.array([0.0, 4.0])) == 0)
    assert generator_apply_compound(s, lambda y: y * y, 0.3) == pytest.approx(0.7 * 1.5**2, abs=1e-14)


def test_normal_generator_on_plane_wave():
    s = spec("normal(c=1)", lam=1.0, b0=1.0)
    got = generator_apply_compound(s, PlaneWave(2.0), 0.5)
    assert got == pytest.approx(complex(np.log(compound_chf(s, 2.0))) * np.exp(1j), abs=1e-6)


def test_parse_wiener_poisson():
    s = parse_wiener_poisson("wiener_poisson(D=0.5, lambda=2, component=dirac(a=1.5))", tau=2.0)
    assert s.rate == 2 and s.component.family is Family.BERNOULLI_PM and s.component.scale == 1.5
    assert s.b0 == pytest.approx(math.sqrt(2.0))


@settings(max_examples=20, deadline=None)
@given(st.floats(0.05, 5.0), st.floats(0.2, 2.0), st.floats(0.2, 2.0), st.floats(-6, 6))
def test_series_symmetric(lam, c, b0, x):
    s = spec(f"normal(c={c})", lam=lam, b0=b0)
    assert compound_pdf_series(s, x) == compound_pdf_series(s, -x)
