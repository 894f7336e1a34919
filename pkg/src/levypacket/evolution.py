r"""Spectral evolution of densities and wave packets.

Process side: :math:`\Phi(u,t) = \chi_0(u)\,e^{t\eta(u)/\tau}`, then CHF inversion.
Schrodinger side: :math:`\hat\psi(u,t) = e^{it\eta(u)/\tau}\hat\psi_0(u)`, then the
inverse wave-function transform.  Both are exact in ``u``; the time list only
chooses which slices are materialised.

Residuals check the evolution equations directly in ``x``.  The time
derivative is a central difference and the generator is applied to the
spline interpolant of a slice.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import specfun
from .errors import DomainError, NotInfinitelyDivisible
from .laws import Family, LawSpec, chf as law_chf, pdf as law_pdf, tail_model
from .poisson import generator_apply_compound
from .solutions import Noise
from .spectral import (
    ALIASING_TOL,
    ComplexField,
    GridPair,
    Tail,
    chf_to_pdf,
    navot_origin_value,
    pdf_to_chf,
    pv_generator_apply,
    wf_to_wfhat,
    wfhat_to_wf,
)

__all__ = [
    "INITIAL_KINDS",
    "InitialState",
    "Scenario",
    "ResidualReport",
    "evolve_process",
    "evolve_wavepacket",
    "process_residual",
    "schrodinger_residual",
    "thread_count",
]

INITIAL_KINDS = ("normal", "cauchy", "student3", "vg", "laplace", "relativistic")
RENORM_TOL = 1e-10
SMOOTH_SPECTRA = ("normal", "vg", "laplace", "relativistic")


def thread_count() -> int:
    """Worker threads for slice-level work; ``LEVYPACKET_THREADS`` caps it."""
    env = os.environ.get("LEVYPACKET_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError(f"LEVYPACKET_THREADS must be an integer, got {env!r}") from None
    return max(1, min(4, os.cpu_count() or 1))


def _map(fn, items):
    items = list(items)
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# initial states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InitialState:
    """Initial law and wave packet of one family.

    ``b`` is the scale, ``nu`` the shape (``vg`` and ``relativistic``) and
    ``k0`` an optional plane-wave phase, applied as the shift
    :math:`\\hat\\psi_0(u - k_0)`.

    ``matched`` tells whether :math:`\\rho_0 = |\\psi_0|^2`.  The ``vg`` and
    ``relativistic`` states pair a law with a packet whose spectrum is a
    power of the CHF, so they are unmatched.

    A state can also be built from grid samples with :meth:`from_samples`;
    it then only works on that grid.
    """

    kind: str
    b: float = 1.0
    nu: float | None = None
    k0: float = 0.0
    samples: ComplexField | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in INITIAL_KINDS + ("sampled",):
            raise DomainError(f"unknown initial state {self.kind!r}")
        if not self.b > 0:
            raise DomainError("initial scale b must be positive")
        if self.kind in ("vg", "relativistic"):
            if self.nu is None or not self.nu > 0:
                raise DomainError(f"{self.kind} initial state needs nu > 0")
            if self.kind == "vg" and not self.nu > 0.25:
                raise DomainError("vg wave packet is square integrable only for nu > 1/4")
        if self.kind == "sampled" and self.samples is None:
            raise DomainError("sampled initial state needs samples")

    @classmethod
    def from_samples(cls, field_slice: ComplexField) -> "InitialState":
        """Wrap one position-space slice (a density or a wave packet)."""
        if field_slice.space != "position" or field_slice.values.shape[0] != 1:
            raise DomainError("from_samples needs a single position-space slice")
        return cls("sampled", samples=field_slice)

    @property
    def matched(self) -> bool:
        return self.kind in ("normal", "cauchy", "student3", "laplace")

    def law(self) -> LawSpec:
        fam, shape = {
            "normal": (Family.NORMAL, None),
            "cauchy": (Family.CAUCHY, None),
            "student3": (Family.STUDENT, 3.0),
            "laplace": (Family.LAPLACE, None),
            "vg": (Family.VG, self.nu),
            "relativistic": (Family.RELATIVISTIC, self.nu),
        }[self.kind]
        return LawSpec(fam, shape, self.b)

    # process side
    def pdf(self, x):
        return law_pdf(self.law(), x)

    def chf(self, u):
        return law_chf(self.law(), u)

    def density_tail(self):
        """``(coefficient, exponent)`` of the density tail, or ``None``."""
        if self.kind == "sampled":
            return None
        return tail_model(self.law())

    # Schrodinger side
    def wf(self, x):
        x = np.asarray(x, dtype=float)
        b = self.b
        if self.kind == "normal":
            out = (2 * math.pi * b * b) ** -0.25 * np.exp(-x * x / (4 * b * b))
        elif self.kind == "cauchy":
            out = 1.0 / np.sqrt(b * math.pi * (1.0 + (x / b) ** 2))
        elif self.kind == "student3":
            out = math.sqrt(2 * b / math.pi) * b / (b * b + x * x)
        elif self.kind == "laplace":
            out = np.exp(-np.abs(x) / (2 * b)) / math.sqrt(2 * b)
        elif self.kind == "vg":
            from .solutions import vg_wf
            out = vg_wf(x, 0.0, omega=0.0, nu=self.nu, a=b).real
        elif self.kind == "relativistic":
            nu = self.nu
            s = np.sqrt(nu * nu + (x / b) ** 2)
            out = nu * specfun.bessel_k(1.0, s) / (math.sqrt(b * math.pi * specfun.bessel_k(1.0, 2 * nu)) * s)
        else:
            raise DomainError("sampled initial states are only defined on their grid")
        if self.k0:
            out = out * np.exp(1j * self.k0 * x)
        return out

    def _wfhat_centred(self, u):
        u = np.asarray(u, dtype=float)
        b = self.b
        if self.kind == "normal":
            return (2 * b * b / math.pi) ** 0.25 * np.exp(-(b * u) ** 2)
        if self.kind == "student3":
            return math.sqrt(b) * np.exp(-b * np.abs(u))
        if self.kind == "laplace":
            return 2.0 * math.sqrt(b / math.pi) / (1.0 + 4.0 * (b * u) ** 2)
        if self.kind == "vg":
            nu = self.nu
            c = math.sqrt(b * math.exp(math.lgamma(2 * nu) - math.lgamma(2 * nu - 0.5)) / math.sqrt(math.pi))
            return c * (1.0 + (b * u) ** 2) ** (-nu)
        if self.kind == "relativistic":
            nu = self.nu
            return math.sqrt(b / (2 * specfun.bessel_k(1.0, 2 * nu))) * np.exp(-nu * np.sqrt(1.0 + (b * u) ** 2))
        if self.kind == "cauchy":
            out = np.zeros(u.shape)
            nz = u != 0
            out[nz] = math.sqrt(2 * b) / math.pi * specfun.bessel_k(0.0, b * np.abs(u[nz]))
            return out
        raise DomainError("sampled initial states are only defined on their grid")

    def wfhat(self, u):
        """Momentum wave function; the Cauchy log singularity is left at 0."""
        return self._wfhat_centred(np.asarray(u, dtype=float) - self.k0)

    def wfhat_on(self, grid: GridPair) -> tuple[np.ndarray, tuple]:
        """Samples of the momentum wave function on ``grid.u``.

        Returns the samples and the log-singularity table; for ``cauchy`` the
        singular sample holds the Navot value.
        """
        if self.kind == "sampled":
            self._check_grid(grid)
            if self.samples.kind == "density":
                raise DomainError("sampled state holds a density, not a wave packet")
            return wf_to_wfhat(self.samples).values[0], ()
        vals = np.asarray(self.wfhat(grid.u), dtype=float)
        if self.kind != "cauchy":
            return vals, ()
        shift = self.k0 / grid.du
        if abs(shift - round(shift)) > 1e-9:
            raise DomainError("cauchy phase k0 must be a multiple of the frequency step")
        idx = grid.origin + int(round(shift))
        b = self.b
        coeff = -math.sqrt(2 * b) / math.pi
        regular = math.sqrt(2 * b) / math.pi * (-math.log(b / 2) - specfun.EULER_GAMMA)
        vals[idx] = navot_origin_value(grid.du, coeff, regular).real
        return vals, ((idx, coeff),)

    def chf_on(self, grid: GridPair) -> np.ndarray:
        if self.kind == "sampled":
            self._check_grid(grid)
            if self.samples.kind != "density":
                raise DomainError("sampled state holds a wave packet, not a density")
            phi = pdf_to_chf(self.samples).values[0]
            # the forward sum of a periodised density is exactly Hermitian up to rounding
            return 0.5 * (phi + np.conj(np.concatenate(([phi[0]], phi[:0:-1]))))
        return np.asarray(self.chf(grid.u), dtype=complex)

    def _check_grid(self, grid: GridPair):
        if self.samples.grid != grid:
            raise DomainError("sampled initial state lives on a different grid")


# ---------------------------------------------------------------------------
# scenarios
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    """Noise, initial state, grid and output times."""

    noise: Noise
    initial: InitialState
    grid: GridPair
    times: tuple
    mode: str = "process"
    aliasing_tol: float = ALIASING_TOL
    truncation_tol: float = 1e-10
    series_tol: float = 1e-12

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        if len(times) < 2:
            raise DomainError("a scenario needs at least two times")
        if times[0] != 0.0:
            raise DomainError("times must start at t = 0")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise DomainError("times must be strictly ascending")
        if self.mode not in ("process", "schrodinger", "both"):
            raise DomainError(f"unknown mode {self.mode!r}")
        object.__setattr__(self, "times", times)


def _noise_eta(noise: Noise, u) -> np.ndarray:
    try:
        return np.asarray(noise.eta(u), dtype=float)
    except NotInfinitelyDivisible:
        raise
    except Exception as exc:  # pragma: no cover - defensive
        raise DomainError(f"noise {noise} has no usable exponent: {exc}") from exc


def _noise_tail(noise: Noise):
    """Levy-measure tail ``(coefficient per unit time, exponent)`` or ``None``."""
    if noise.is_compound:
        return None
    law = noise.law
    fam = law.family
    a = law.scale
    if fam is Family.CAUCHY:
        return a / math.pi / noise.tau, 2.0
    if fam is Family.STUDENT and law.shape == 3.0:
        return 2.0 * a**3 / math.pi / noise.tau, 4.0
    if fam is Family.STABLE and law.shape < 2:
        return tail_model(law)[0] / noise.tau, 1.0 + law.shape
    return None


def _process_tail(scenario: Scenario, times) -> Tail | None:
    init = scenario.initial.density_tail()
    noise = _noise_tail(scenario.noise)
    t = np.asarray(times, dtype=float)
    parts = []
    if init is not None:
        parts.append((np.full(len(t), init[0]), init[1]))
    if noise is not None:
        parts.append((noise[0] * t, noise[1]))
    if not parts:
        return None
    p = min(e for _, e in parts)
    coef = sum(c for c, e in parts if e == p)
    width = 0.0
    kind, b = scenario.initial.kind, scenario.initial.b
    if noise is None and kind in ("cauchy", "student3"):
        width = b
    elif kind == "cauchy" and not scenario.noise.is_compound and scenario.noise.law.family is Family.CAUCHY:
        width = b + scenario.noise.rates().v * t  # Cauchy stays Cauchy
    return Tail(np.asarray(coef, dtype=float), p, width)


def _wave_tail(scenario: Scenario, times) -> Tail | None:
    r"""Tail of :math:`|\psi|^2` for the heavy-tailed matched packets."""
    init, b = scenario.initial, scenario.initial.b
    t = np.asarray(times, dtype=float)
    if init.kind == "cauchy":
        # the logarithms of the two branches cancel at leading order
        return Tail(np.full(t.shape, b / math.pi), 2.0)
    if init.kind == "student3":
        v = scenario.noise.rates().v
        vt = 0.0 if v is None else v * t
        return Tail(2.0 * b / math.pi * (b * b + vt * vt) * np.ones(t.shape), 4.0)
    return None


def evolve_process(scenario: Scenario) -> ComplexField:
    """Density slices :math:`\\rho(x, t)` for every scenario time.

    Raises
    ------
    AliasingError
        If the transition CHF has not decayed at the frequency window edge.
    NotInfinitelyDivisible
        If the noise law has no exponent.
    """
    g = scenario.grid
    eta = _noise_eta(scenario.noise, g.u)
    chi0 = scenario.initial.chf_on(g)
    t = np.asarray(scenario.times)[:, None]
    phi = chi0[None, :] * np.exp(t * eta[None, :])
    field_u = ComplexField(g, scenario.times, phi, "frequency", kind="chf")
    rho = chf_to_pdf(field_u, aliasing_tol=scenario.aliasing_tol)
    return rho.with_values(rho.values, tail=_process_tail(scenario, scenario.times),
                           info=dict(rho.info, noise=str(scenario.noise), initial=scenario.initial.kind))


def evolve_wavepacket(scenario: Scenario) -> ComplexField:
    r"""Wave-packet slices :math:`\psi(x, t)` for every scenario time.

    The discrete norm of the initial spectrum is corrected once when it
    deviates from 1 by more than ``1e-10``.  The factor is recorded in
    ``info["renormalization"]``.  Only spectra smooth at their centre are
    corrected.  Where :math:`\hat\psi` has a cusp (``student3``) or a
    logarithm (``cauchy``) the plain sum of :math:`|\hat\psi|^2` carries an
    ``O(du^2)`` quadrature error while the samples themselves already
    reproduce :math:`\psi`; rescaling would only spread that error over
    every slice.  Sampled restarts are taken as they are.
    """
    g = scenario.grid
    eta = _noise_eta(scenario.noise, g.u)
    hat0, logs = scenario.initial.wfhat_on(g)
    hat0 = np.asarray(hat0, dtype=complex)
    norm2 = float(np.sum(np.abs(hat0) ** 2) * g.du)
    factor = 1.0
    if abs(norm2 - 1.0) > RENORM_TOL and scenario.initial.kind in SMOOTH_SPECTRA:
        factor = 1.0 / math.sqrt(norm2)
        hat0 = hat0 * factor
    t = np.asarray(scenario.times)[:, None]
    hat = hat0[None, :] * np.exp(1j * t * eta[None, :])
    field_u = ComplexField(g, scenario.times, hat, "frequency", kind="spectrum", log_singularities=logs)
    psi = wfhat_to_wf(field_u, aliasing_tol=scenario.aliasing_tol)
    info = dict(psi.info, renormalization=factor, initial_norm2=norm2, noise=str(scenario.noise),
                initial=scenario.initial.kind)
    return psi.with_values(psi.values, tail=_wave_tail(scenario, scenario.times), info=info)


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidualReport:
    """Residual of an evolution equation on interior time slices.

    ``residual[i, j]`` belongs to ``times[i]`` and ``x[j]``.  ``relative`` is
    ``max|residual| / max|d/dt|``.  ``richardson`` estimates the central
    difference error from the wide stencil (``nan`` with fewer than five
    slices).
    """

    times: np.ndarray
    x: np.ndarray
    residual: np.ndarray
    time_derivative: np.ndarray
    generator: np.ndarray
    relative: float
    richardson: float

    def summary(self) -> dict:
        return {
            "max_abs": float(np.abs(self.residual).max()),
            "relative": self.relative,
            "richardson": self.richardson,
        }


def _uniform_step(times) -> float:
    times = np.asarray(times)
    if times.size < 3:
        raise DomainError("residuals need at least three time slices")
    steps = np.diff(times)
    if np.max(np.abs(steps - steps[0])) > 1e-9 * max(1.0, steps[0]):
        raise DomainError("residuals need uniformly spaced times")
    return float(steps[0])


def _apply_generator(noise: Noise, f, x):
    if noise.is_compound:
        return generator_apply_compound(noise.law, f, x)
    return pv_generator_apply(f, noise.triplet(), x)


def _residual(field: ComplexField, noise: Noise, x, complex_time: bool) -> ResidualReport:
    if field.space != "position":
        raise DomainError("residuals need a position-space field")
    dt = _uniform_step(field.times)
    x = np.asarray(x if x is not None else np.linspace(-10.0, 10.0, 41) * noise.scale, dtype=float)
    idx = np.arange(1, len(field.times) - 1)
    # central differences evaluated at x through the same interpolant
    splines = _map(field.at, range(len(field.times)))
    vals = np.array([s(x) for s in splines])
    dvals = (vals[2:] - vals[:-2]) / (2 * dt)
    rich = math.nan
    if len(field.times) >= 5:
        wide = (vals[4:] - vals[:-4]) / (4 * dt)
        rich = float(np.abs(dvals[1:-1] - wide).max()) / 3.0
    gen = np.array(_map(lambda i: np.asarray(_apply_generator(noise, splines[i], x)), idx))
    if complex_time:
        res = 1j * dvals + gen
    else:
        res = dvals - gen
    scale = float(np.abs(dvals).max())
    rel = float(np.abs(res).max()) / scale if scale > 0 else float(np.abs(res).max())
    if scale > 0 and rich == rich:
        rich /= scale
    return ResidualReport(np.asarray(field.times)[idx], x, res, dvals, gen, rel, rich)


def process_residual(field: ComplexField, noise: Noise, x=None) -> ResidualReport:
    r"""Residual :math:`\partial_t\rho - A\rho` of the forward equation.

    ``A`` is the noise generator (Gaussian part plus principal-value jump
    integral).  ``x`` defaults to 41 points on ``[-10, 10]`` times the noise
    scale.

    Raises
    ------
    UnknownLevyMeasure
        When the noise has no Levy density (general Student noise).
    """
    return _residual(field, noise, x, complex_time=False)


def schrodinger_residual(field: ComplexField, noise: Noise, x=None) -> ResidualReport:
    r"""Residual :math:`i\partial_t\psi + A\psi` of the Levy-Schrodinger equation."""
    return _residual(field, noise, x, complex_time=True)
