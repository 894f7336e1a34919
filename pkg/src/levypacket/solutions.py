r"""Closed-form process densities and wave packets.

Each evaluator solves one noise/initial-state pair exactly.  Together they
are the reference layer for the spectral engine.

Time enters only through the rate combinations of a :class:`Noise` with time
scale :math:`\tau`:

* normal noise :math:`N_a`: :math:`D = a^2/2\tau`,
* Cauchy noise :math:`C_a`: :math:`v = a/\tau`,
* VG, relativistic and compound Poisson noises: :math:`\omega = \nu/\tau`
  (or :math:`\lambda/\tau`).

Transition CHFs are :math:`e^{t\eta(u)/\tau}` and propagators are
:math:`e^{it\eta(u)/\tau}`, so the propagator is unimodular.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DomainError
from .laws import Family, LawSpec, LevyTriplet, lch, pdf as law_pdf, triplet as law_triplet
from .poisson import CompoundSpec, compound_lch, compound_triplet, mixture_density, truncation_index

__all__ = [
    "Noise",
    "RateParams",
    "transition_chf",
    "propagator_chf",
    "gauss_process_pdf",
    "gauss_wf",
    "cauchy_process_pdf",
    "cauchy_student_pdf",
    "cauchy_student_wf",
    "cauchy_student_wf_rhs",
    "cauchy_cauchy_wf",
    "vg_process_pdf",
    "vg_wf",
    "poisson_process_pdf",
    "poisson_wf",
    "rqm_process_pdf",
    "rqm_chf",
    "rqm_wf",
]


@dataclass(frozen=True)
class RateParams:
    """Rates derived from a noise law and its time scale ``tau``."""

    tau: float
    D: float | None = None
    v: float | None = None
    omega: float | None = None


@dataclass(frozen=True)
class Noise:
    """A background Levy noise: a law (per time ``tau``) and the time scale."""

    law: LawSpec | CompoundSpec
    tau: float = 1.0

    def __post_init__(self):
        if not self.tau > 0:
            raise DomainError("time scale tau must be positive")

    @property
    def is_compound(self) -> bool:
        return isinstance(self.law, CompoundSpec)

    @property
    def scale(self) -> float:
        if self.is_compound:
            return max(self.law.component.scale, self.law.b0)
        return self.law.scale

    def eta(self, u):
        """Logarithmic characteristic per unit time."""
        if self.is_compound:
            return compound_lch(self.law, u) / self.tau
        return np.asarray(lch(self.law, u)) / self.tau

    def triplet(self) -> LevyTriplet:
        """Levy triplet of the generator per unit time."""
        trip = compound_triplet(self.law) if self.is_compound else law_triplet(self.law)
        return trip if self.tau == 1.0 else trip.rescaled(1.0 / self.tau)

    def rates(self) -> RateParams:
        law, tau = self.law, self.tau
        if self.is_compound:
            return RateParams(tau, D=law.b0**2 / (2 * tau), omega=law.rate / tau)
        fam = law.family
        if fam is Family.NORMAL:
            return RateParams(tau, D=law.scale**2 / (2 * tau))
        if fam is Family.CAUCHY:
            return RateParams(tau, v=law.scale / tau)
        if fam is Family.LAPLACE:
            return RateParams(tau, omega=1.0 / tau)
        if fam in (Family.VG, Family.RELATIVISTIC, Family.COMPOUND_POISSON):
            return RateParams(tau, omega=law.shape / tau)
        return RateParams(tau)

    def __str__(self):
        return f"{self.law} [tau={self.tau:g}]"


def transition_chf(noise: Noise, u, t: float):
    r"""Transition characteristic function :math:`e^{t\eta(u)/\tau}`."""
    return np.exp(t * noise.eta(u))


def propagator_chf(noise: Noise, u, t: float):
    r"""Propagator :math:`e^{it\eta(u)/\tau}`, of unit modulus."""
    return np.exp(1j * t * noise.eta(u))


# ---------------------------------------------------------------------------
# normal noise
# ---------------------------------------------------------------------------

def gauss_process_pdf(x, t, *, D, b):
    """Normal density with variance ``2 D t + b**2``."""
    var = 2.0 * D * t + b * b
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x / var) / np.sqrt(2 * math.pi * var)


def gauss_wf(x, t, *, D, b):
    r"""Free Gaussian packet
    :math:`(b^2/2\pi)^{1/4}e^{-x^2/4(b^2+iDt)}/\sqrt{b^2+iDt}`."""
    beta = b * b + 1j * D * t
    x = np.asarray(x, dtype=float)
    return (b * b / (2 * math.pi)) ** 0.25 * np.exp(-x * x / (4 * beta)) / np.sqrt(beta)


# ---------------------------------------------------------------------------
# Cauchy noise
# ---------------------------------------------------------------------------

def cauchy_process_pdf(x, t, *, v, b):
    """Cauchy initial law under Cauchy noise: Cauchy with scale ``b + v t``."""
    c = b + v * t
    x = np.asarray(x, dtype=float)
    return c / (math.pi * (c * c + x * x))


def cauchy_student_pdf(x, t, *, v, b):
    r"""Student(3) initial law under Cauchy noise.

    .. math::

        \rho(x,t) = \frac{(b+vt)^2(2b+vt) + vt\,x^2}{\pi[(b+vt)^2 + x^2]^2}
    """
    c = b + v * t
    x = np.asarray(x, dtype=float)
    x2 = x * x
    return (c * c * (2 * b + v * t) + v * t * x2) / (math.pi * (c * c + x2) ** 2)


def cauchy_student_wf(x, t, *, v, b):
    r""":math:`\sqrt{2b/\pi}\,z/(z^2+x^2)` with :math:`z = b + ivt`."""
    z = b + 1j * v * t
    x = np.asarray(x, dtype=float)
    return math.sqrt(2 * b / math.pi) * z / (z * z + x * x)


def cauchy_student_wf_rhs(x, t, *, v, b):
    r"""Right-hand side :math:`i\partial_t\psi` of the Cauchy-Schrodinger equation
    for :func:`cauchy_student_wf`: :math:`v\sqrt{2b/\pi}(z^2-x^2)/(z^2+x^2)^2`."""
    z = b + 1j * v * t
    x = np.asarray(x, dtype=float)
    x2 = x * x
    return v * math.sqrt(2 * b / math.pi) * (z * z - x2) / (z * z + x2) ** 2


def _cauchy_amp(w):
    return (0.5 * math.pi - 1j * np.arcsinh(w)) / np.sqrt(1.0 + w * w)


def cauchy_cauchy_wf(x, t, *, v, b):
    r"""Cauchy initial packet :math:`(b\pi)^{-1/2}(1+x^2/b^2)^{-1/2}` under Cauchy noise.

    .. math::

        \psi(x,t) = \frac{1}{\pi\sqrt{b\pi}}\Big[A\big(\tfrac{x+vt}{b}\big)
        + \overline{A\big(\tfrac{x-vt}{b}\big)}\Big],\qquad
        A(z) = \frac{\pi/2 - i\,\mathrm{arsinh}\,z}{\sqrt{1+z^2}}
    """
    x = np.asarray(x, dtype=float)
    return (_cauchy_amp((x + v * t) / b) + np.conj(_cauchy_amp((x - v * t) / b))) / (math.pi * math.sqrt(b * math.pi))


# ---------------------------------------------------------------------------
# VG noise
# ---------------------------------------------------------------------------

def vg_process_pdf(x, t, *, omega, nu, a):
    """VG initial law under VG noise of the same scale: ``VG_a(nu + omega t)``."""
    return law_pdf(LawSpec(Family.VG, nu + omega * t, a), x)


def _vg_wf_norm(nu: float, a: float) -> float:
    return math.sqrt(a * math.exp(math.lgamma(2 * nu) - math.lgamma(2 * nu - 0.5)) / math.sqrt(math.pi))


def vg_wf(x, t, *, omega, nu, a, origin_offset: float | None = None):
    r"""VG initial packet under VG-Schrodinger evolution.

    With :math:`\mu = \nu + i\omega t` and
    :math:`C = \sqrt{a\Gamma(2\nu)/(\sqrt\pi\,\Gamma(2\nu-\frac12))}`,

    .. math::

        \psi(x,t) = \frac{2C}{2^\mu\Gamma(\mu)\,a}
        \Big(\frac{|x|}{a}\Big)^{\mu-\frac12}K_{\mu-\frac12}\Big(\frac{|x|}{a}\Big).

    At ``x = 0`` the limit :math:`z^mK_m(z)\to2^{m-1}\Gamma(m)` is used when
    :math:`\nu > 1/2`.  Otherwise the origin is evaluated at ``origin_offset``
    (default ``1e-3 * a``).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    mu = complex(nu, omega * t)
    m = mu - 0.5
    C = _vg_wf_norm(nu, a)
    pref = 2.0 * C / (2.0**mu * specfun.gamma_complex(mu) * a)
    r = np.abs(x) / a
    out = np.empty(x.shape, dtype=complex)
    zero = r == 0
    if np.any(zero):
        if nu > 0.5:
            out[zero] = pref * 2.0 ** (m - 1.0) * specfun.gamma_complex(m)
        else:
            off = 1e-3 if origin_offset is None else origin_offset / a
            out[zero] = pref * np.exp(m * math.log(off)) * specfun.bessel_k_complex(m, off)
    pos = ~zero
    if np.any(pos):
        rp = r[pos]
        out[pos] = pref * np.exp(m * np.log(rp)) * specfun.bessel_k_complex(m, rp.astype(complex))
    return out


# ---------------------------------------------------------------------------
# Wiener-Poisson noise
# ---------------------------------------------------------------------------

def _component(kind: str, c, a) -> LawSpec:
    if kind in ("normal_comp", "normal"):
        if c is None:
            raise DomainError("normal component needs c")
        return LawSpec(Family.NORMAL, scale=c)
    if kind in ("dirac_comp", "dirac"):
        if a is None:
            raise DomainError("dirac component needs a")
        return LawSpec(Family.BERNOULLI_PM, scale=a)
    raise DomainError(f"unknown compound component kind {kind!r}")


def poisson_process_pdf(kind: str, x, t, *, D, omega, b, c=None, a=None, tol=1e-12):
    r"""Normal initial law :math:`N(b^2)` under Wiener-Poisson noise.

    ``normal_comp``: :math:`\sum_k w_k N(x;\,2Dt+b^2+kc^2)`;
    ``dirac_comp``: :math:`\sum_k w_k 2^{-k}\sum_j\binom kj N(x-(2j-k)a;\,2Dt+b^2)`,
    with :math:`w_k = e^{-\omega t}(\omega t)^k/k!`.
    """
    comp = _component(kind, c, a)
    x = np.asarray(x, dtype=float)
    return mixture_density(x, omega * t, 2.0 * D * t + b * b, comp, tol)


def poisson_wf(kind: str, x, t, *, D, omega, b, c=None, a=None, tol=1e-12):
    r"""Gaussian initial packet under Wiener-Poisson-Schrodinger evolution.

    A complex Poisson superposition of Gaussian packets with
    :math:`\beta = b^2 + iDt` (plus :math:`kc^2/2` for normal jumps):

    .. math::

        \psi = e^{-i\omega t}\Big(\frac{2b^2}{\pi}\Big)^{1/4}
        \sum_k\frac{(i\omega t)^k}{k!}\,G_k(x),\qquad
        G(x;\beta) = \frac{e^{-x^2/4\beta}}{\sqrt{2\beta}}

    where ``dirac_comp`` splits each :math:`G_k` into binomially weighted
    copies shifted by :math:`(2j-k)a`.
    """
    comp = _component(kind, c, a)
    x = np.asarray(x, dtype=float)
    lam = omega * t
    if lam == 0:
        return gauss_wf(x, t, D=D, b=b)
    K = truncation_index(lam, tol)
    pref = np.exp(-1j * lam) * (2 * b * b / math.pi) ** 0.25
    beta0 = b * b + 1j * D * t
    out = np.zeros(x.shape, dtype=complex)
    coef = 1.0 + 0j
    for k in range(K + 1):
        if k:
            coef = coef * (1j * lam) / k
        if coef == 0:
            break
        if comp.family is Family.NORMAL:
            beta = beta0 + 0.5 * k * comp.scale**2
            out += coef * np.exp(-x * x / (4 * beta)) / np.sqrt(2 * beta)
        else:
            j = np.arange(k + 1)
            logb = math.lgamma(k + 1) - np.array([math.lgamma(i + 1) + math.lgamma(k - i + 1) for i in j])
            weights = np.exp(logb - k * math.log(2.0))
            for wj, sj in zip(weights, (2 * j - k) * comp.scale):
                xs = x - sj
                out += coef * wj * np.exp(-xs * xs / (4 * beta0)) / np.sqrt(2 * beta0)
    return pref * out


# ---------------------------------------------------------------------------
# relativistic noise
# ---------------------------------------------------------------------------

def rqm_process_pdf(x, t, *, omega, nu, a):
    """Relativistic initial law under relativistic noise: ``R_a(nu + omega t)``."""
    return law_pdf(LawSpec(Family.RELATIVISTIC, nu + omega * t, a), x)


def rqm_chf(u, t, *, omega, nu, a):
    r""":math:`e^{(\nu+\omega t)(1-\sqrt{1+a^2u^2})}`."""
    u = np.asarray(u, dtype=float)
    return np.exp(-(nu + omega * t) * a * a * u * u / (1.0 + np.sqrt(1.0 + a * a * u * u)))


def rqm_wf(x, t, *, omega, nu, a):
    r"""Relativistic initial packet under relativistic-Schrodinger evolution.

    .. math::

        \psi(x,t) = \frac{(\nu+i\omega t)\,e^{i\omega t}\,K_1(s)}{\sqrt{a\pi K_1(2\nu)}\;s},
        \qquad s = \sqrt{(\nu+i\omega t)^2 + x^2/a^2}

    on the principal branch, where :math:`\operatorname{Re}s > 0`.
    """
    x = np.asarray(x, dtype=float)
    mu = complex(nu, omega * t)
    s = np.sqrt(mu * mu + (x / a) ** 2 + 0j)
    if np.any(s.real <= 0):
        raise DomainError("principal square root left the right half-plane")
    norm = math.sqrt(a * math.pi * specfun.bessel_k(1.0, 2.0 * nu))
    return mu * np.exp(1j * omega * t) * specfun.bessel_k_complex(1.0, s) / (norm * s)
