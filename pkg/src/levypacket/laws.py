r"""Catalog of symmetric laws: densities, characteristic functions, Levy data.

Every law is evaluated in dimensionless form and the scale ``a`` enters once,
through :math:`p_a(x) = p(x/a)/a` and :math:`\chi_a(u) = \chi(au)`.

>>> law = parse_law("vg(nu=2,a=1.0)")
>>> float(chf(law, 0.0))
1.0
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import specfun
from .errors import (
    DomainError,
    NotAbsolutelyContinuous,
    NotInfinitelyDivisible,
    ParseError,
    ScaleMismatch,
    UnknownLevyMeasure,
    UnsupportedClosedForm,
)
from .spectral import adaptive_integrate, _cos_tail, _vec_integral

__all__ = [
    "Family",
    "LawSpec",
    "LevyTriplet",
    "Unclosed",
    "UNCLOSED",
    "Expectation",
    "pdf",
    "chf",
    "lch",
    "triplet",
    "lkh_reconstruct",
    "convolve_family",
    "variance",
    "expectation",
    "parse_law",
    "format_law",
    "absolutely_continuous",
    "tail_model",
]


class Family(str, enum.Enum):
    DEGENERATE = "degenerate"
    NORMAL = "normal"
    CAUCHY = "cauchy"
    LAPLACE = "laplace"
    STABLE = "stable"
    VG = "vg"
    STUDENT = "student"
    RELATIVISTIC = "relativistic"
    UNIFORM = "uniform"
    BERNOULLI_PM = "bernoulli"
    COMPOUND_POISSON = "cpoisson"


_SHAPED = {Family.STABLE, Family.VG, Family.STUDENT, Family.RELATIVISTIC, Family.COMPOUND_POISSON}
_NOT_ID = {Family.UNIFORM, Family.BERNOULLI_PM}


@dataclass(frozen=True)
class LawSpec:
    """A symmetric law of the catalog.

    ``shape`` is alpha (stable, Student), nu (VG, relativistic) or lambda
    (compound Poisson, with ``component`` set); ``scale`` is the length ``a``.
    """

    family: Family
    shape: float | None = None
    scale: float = 1.0
    component: "LawSpec | None" = None

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError(f"scale must be positive, got {self.scale!r}")
        if fam in _SHAPED:
            if self.shape is None or not self.shape > 0:
                raise DomainError(f"{fam.value} needs a positive shape parameter")
            object.__setattr__(self, "shape", float(self.shape))
        elif self.shape is not None:
            raise DomainError(f"{fam.value} takes no shape parameter")
        if fam is Family.STABLE and self.shape > 2:
            raise DomainError("stable index must satisfy 0 < alpha <= 2")
        if fam is Family.COMPOUND_POISSON:
            if self.component is None:
                raise DomainError("compound Poisson law needs a component")
            if self.component.family is Family.COMPOUND_POISSON:
                raise DomainError("nested compound Poisson components are not supported")
        elif self.component is not None:
            raise DomainError("only compound Poisson laws take a component")

    @property
    def infinitely_divisible(self) -> bool:
        return self.family not in _NOT_ID

    def __str__(self):
        return format_law(self)


class Unclosed:
    """Marker returned when a convolution leaves the family."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNCLOSED"

    def __bool__(self):
        return False


UNCLOSED = Unclosed()


class Expectation(str, enum.Enum):
    ZERO = "exists-zero"
    UNDEFINED = "undefined"  # no mean: the law is centred on its median


@dataclass(frozen=True, eq=False)
class LevyTriplet:
    r"""Symmetric Levy-Khintchine data :math:`(\beta, \gamma, \ell)` plus atoms.

    ``levy_density`` is even and vectorised; ``atoms`` are ``(position,
    weight)`` pairs of a purely atomic Levy measure.  ``singularity_order``
    is ``s`` in :math:`\ell(y) \sim |y|^{-1-s}` near zero (``-1`` when bounded).
    ``scale`` sets the natural length of the measure.
    """

    drift: float = 0.0
    gaussian: float = 0.0
    levy_density: Callable | None = None
    singularity_order: float = -1.0
    scale: float = 1.0
    atoms: tuple = ()
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.drift != 0.0:
            raise DomainError("only symmetric triplets (zero drift) are supported")
        if self.singularity_order >= 2:
            raise DomainError("singularity order must be < 2 for a Levy measure")
        for pos, w in self.atoms:
            if w < 0:
                raise DomainError("atom weights must be nonnegative")
        if self.levy_density is not None and self.check:
            ell = self.levy_density
            near = adaptive_integrate(lambda y: y * y * ell(y), 0.0, self.scale, tol=1e-12, rtol=1e-10)
            far = adaptive_integrate(ell, self.scale, np.inf, tol=1e-12)
            if not (math.isfinite(near) and math.isfinite(far)):
                raise DomainError("Levy density fails the integrability condition")

    @property
    def has_atoms(self) -> bool:
        return bool(self.atoms)

    @property
    def is_zero(self) -> bool:
        return self.gaussian == 0.0 and self.levy_density is None and not self.atoms

    def rescaled(self, factor: float) -> "LevyTriplet":
        """Multiply the whole measure (and the Gaussian variance) by ``factor``."""
        ell = self.levy_density
        dens = None if ell is None else (lambda y, _e=ell: factor * _e(y))
        return LevyTriplet(0.0, self.gaussian * math.sqrt(factor), dens, self.singularity_order,
                           self.scale, tuple((p, w * factor) for p, w in self.atoms), check=False)


# ---------------------------------------------------------------------------
# dimensionless building blocks
# ---------------------------------------------------------------------------

def _std_pdf(law: LawSpec, x):
    fam, s = law.family, law.shape
    ax = np.abs(x)
    if fam is Family.NORMAL:
        return np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
    if fam is Family.CAUCHY:
        return 1.0 / (math.pi * (1.0 + x * x))
    if fam is Family.LAPLACE:
        return 0.5 * np.exp(-ax)
    if fam is Family.STABLE:
        if s == 1.0:
            return 1.0 / (math.pi * (1.0 + x * x))
        if s == 2.0:
            return np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)
        raise UnsupportedClosedForm("stable densities are only closed-form for alpha in {1, 2}")
    if fam is Family.VG:
        return _vg_std_pdf(s, ax)
    if fam is Family.STUDENT:
        lognorm = _student_lognorm(s)
        return np.exp(lognorm - 0.5 * (s + 1.0) * np.log1p(x * x))
    if fam is Family.RELATIVISTIC:
        r = np.sqrt(s * s + x * x)
        return s * math.exp(s) * specfun.bessel_k(1.0, r) / (math.pi * r)
    if fam is Family.UNIFORM:
        return np.where(ax < 1.0, 0.5, np.where(ax == 1.0, 0.25, 0.0))
    raise NotAbsolutelyContinuous(f"{fam.value} law has atoms and no density")


def _student_lognorm(alpha: float) -> float:
    # -ln B(1/2, alpha/2)
    return math.lgamma(0.5 * (alpha + 1.0)) - math.lgamma(0.5) - math.lgamma(0.5 * alpha)


def _vg_std_pdf(nu: float, ax):
    ax = np.asarray(ax, dtype=float)
    n = nu - 1.0
    if abs(n - round(n)) < 1e-14 and n >= 0:
        # finite sum e^{-|x|} theta_n(|x|) / (n! 2^{n+1})
        n = int(round(n))
        return np.exp(-ax) * specfun.reverse_bessel_theta(n, ax) / (math.factorial(n) * 2.0 ** (n + 1))
    m = nu - 0.5
    lognorm = -((nu - 1.0) * math.log(2.0) + math.lgamma(nu) + 0.5 * math.log(2 * math.pi))
    out = np.empty_like(ax)
    zero = ax == 0
    if np.any(zero):
        if m > 0:
            out[zero] = math.gamma(m) / (2.0 * math.sqrt(math.pi) * math.gamma(nu))
        else:
            out[zero] = np.inf
    am = abs(m)
    # leading term of x^m K_|m|(x): K overflows long before the product does
    tiny = ~zero & (ax < 10.0 ** (-8.0 / min(am, 1.0))) if am > 0 else np.zeros_like(zero)
    if np.any(tiny):
        lead = math.lgamma(am) + (am - 1.0) * math.log(2.0)
        out[tiny] = np.exp(lognorm + lead + (m - am) * np.log(ax[tiny]))
    pos = ~zero & ~tiny
    if np.any(pos):
        xp = ax[pos]
        out[pos] = np.exp(lognorm + m * np.log(xp)) * specfun.bessel_k(am, xp)
    return out


def _std_chf(law: LawSpec, u):
    fam, s = law.family, law.shape
    au = np.abs(u)
    if fam is Family.DEGENERATE:
        return np.ones_like(au)
    if fam is Family.NORMAL:
        return np.exp(-0.5 * u * u)
    if fam is Family.CAUCHY:
        return np.exp(-au)
    if fam is Family.LAPLACE:
        return 1.0 / (1.0 + u * u)
    if fam is Family.STABLE:
        return np.exp(-au**s / s)
    if fam is Family.VG:
        return (1.0 + u * u) ** (-s)
    if fam is Family.STUDENT:
        return _student_std_chf(s, au)
    if fam is Family.RELATIVISTIC:
        return np.exp(s * (1.0 - np.sqrt(1.0 + u * u)))
    if fam is Family.UNIFORM:
        return np.sinc(u / math.pi)
    if fam is Family.BERNOULLI_PM:
        return np.cos(u)
    raise AssertionError(fam)


def _student_std_chf(alpha: float, au):
    au = np.asarray(au, dtype=float)
    n = (alpha - 1.0) / 2.0
    if abs(n - round(n)) < 1e-14 and n >= 0:
        n = int(round(n))
        coef = math.factorial(n) * 2.0**n / math.factorial(2 * n)
        return coef * np.exp(-au) * specfun.reverse_bessel_theta(n, au)
    h = 0.5 * alpha
    out = np.ones_like(au)
    pos = au > 0
    if np.any(pos):
        up = au[pos]
        logk = np.log(specfun.bessel_k(h, np.minimum(up, 700.0)))
        logv = math.log(2.0) + h * np.log(up) + logk - h * math.log(2.0) - math.lgamma(h)
        out[pos] = np.where(up < 700.0, np.exp(logv), 0.0)
    return out


def _std_lch(law: LawSpec, u):
    fam, s = law.family, law.shape
    au = np.abs(u)
    if fam in _NOT_ID:
        raise NotInfinitelyDivisible(f"{fam.value} law is not infinitely divisible")
    if fam is Family.DEGENERATE:
        return np.zeros_like(au)
    if fam is Family.NORMAL:
        return -0.5 * u * u
    if fam is Family.CAUCHY:
        return -au
    if fam is Family.LAPLACE:
        return -np.log1p(u * u)
    if fam is Family.STABLE:
        return -au**s / s
    if fam is Family.VG:
        return -s * np.log1p(u * u)
    if fam is Family.STUDENT:
        if s == 1.0:
            return -au
        if s == 3.0:
            return np.log1p(au) - au
        with np.errstate(divide="ignore"):
            return np.log(_student_std_chf(s, au))
    if fam is Family.RELATIVISTIC:
        # 1 - sqrt(1+u^2) written without cancellation
        return -s * u * u / (1.0 + np.sqrt(1.0 + u * u))
    raise AssertionError(fam)


# ---------------------------------------------------------------------------
# public evaluation API
# ---------------------------------------------------------------------------

def _out(val):
    return val if np.ndim(val) else val.item()


def absolutely_continuous(law: LawSpec) -> bool:
    return law.family not in (Family.DEGENERATE, Family.BERNOULLI_PM, Family.COMPOUND_POISSON)


def pdf(law: LawSpec, x):
    r"""Density :math:`p_a(x) = p(x/a)/a` of an absolutely continuous law.

    Raises
    ------
    NotAbsolutelyContinuous
        For the degenerate, Bernoulli and pure compound Poisson laws.
    UnsupportedClosedForm
        For stable laws with :math:`\alpha \notin \{1, 2\}`.
    """
    if not absolutely_continuous(law):
        raise NotAbsolutelyContinuous(f"{law.family.value} law has atoms and no density")
    x = np.asarray(x, dtype=float)
    a = law.scale
    return _out(np.asarray(_std_pdf(law, x / a), dtype=float) / a)


def chf(law: LawSpec, u):
    r"""Characteristic function :math:`\chi_a(u) = \chi(au)` (real, since every law is symmetric)."""
    u = np.asarray(u, dtype=float)
    if law.family is Family.COMPOUND_POISSON:
        return _out(np.exp(law.shape * (np.asarray(chf(law.component, u)) - 1.0)))
    return _out(np.asarray(_std_chf(law, law.scale * u), dtype=float))


def lch(law: LawSpec, u):
    r"""Logarithmic characteristic :math:`\eta(u) = \ln\chi(u)`."""
    u = np.asarray(u, dtype=float)
    if law.family is Family.COMPOUND_POISSON:
        return _out(law.shape * (np.asarray(chf(law.component, u)) - 1.0))
    return _out(np.asarray(_std_lch(law, law.scale * u), dtype=float))


def _student3_levy_std(y):
    y = np.abs(np.asarray(y, dtype=float))
    out = np.empty_like(y)
    big = y >= 60.0
    if np.any(~big):
        ys = y[~big]
        si, ci = specfun.sin_cos_integrals(ys)
        out[~big] = (1.0 - ys * (np.sin(ys) * ci - np.cos(ys) * si)) / (math.pi * ys * ys)
    if np.any(big):
        yb = y[big]
        # 1 - y f(y) ~ sum_{k>=1} (-1)^{k+1} (2k)! / y^{2k}
        inv2 = 1.0 / (yb * yb)
        acc = np.zeros_like(yb)
        term = np.ones_like(yb)
        for k in range(1, 12):
            term = term * (2 * k - 1) * (2 * k) * inv2
            acc += (-1) ** (k + 1) * term
        out[big] = acc / (math.pi * yb * yb)
    return out


def _stable_levy_const(alpha: float) -> float:
    if alpha == 1.0:
        return 1.0 / math.pi
    return 1.0 / (-2.0 * alpha * math.gamma(-alpha) * math.cos(0.5 * alpha * math.pi))


def triplet(law: LawSpec) -> LevyTriplet:
    r"""Levy-Khintchine triplet of an infinitely divisible law.

    Raises
    ------
    NotInfinitelyDivisible
        For uniform and Bernoulli laws.
    UnknownLevyMeasure
        For Student laws other than :math:`\alpha \in \{1, 3\}`.
    """
    fam, s, a = law.family, law.shape, law.scale
    if fam in _NOT_ID:
        raise NotInfinitelyDivisible(f"{fam.value} law is not infinitely divisible")
    if fam is Family.DEGENERATE:
        return LevyTriplet(scale=a)
    if fam is Family.NORMAL or (fam is Family.STABLE and s == 2.0):
        return LevyTriplet(gaussian=a, scale=a)
    if fam is Family.CAUCHY or (fam is Family.STUDENT and s == 1.0):
        return LevyTriplet(levy_density=lambda y: a / (math.pi * np.asarray(y, dtype=float) ** 2),
                           singularity_order=1.0, scale=a)
    if fam is Family.STABLE:
        c = _stable_levy_const(s) * a**s
        return LevyTriplet(levy_density=lambda y: c * np.abs(np.asarray(y, dtype=float)) ** (-1.0 - s),
                           singularity_order=s, scale=a)
    if fam in (Family.LAPLACE, Family.VG):
        nu = 1.0 if fam is Family.LAPLACE else s

        def ell(y):
            ay = np.abs(np.asarray(y, dtype=float))
            return nu * np.exp(-ay / a) / ay

        return LevyTriplet(levy_density=ell, singularity_order=0.0, scale=a)
    if fam is Family.STUDENT:
        if s != 3.0:
            raise UnknownLevyMeasure("Student Levy measures are only known in closed form for alpha = 3")
        return LevyTriplet(levy_density=lambda y: _student3_levy_std(np.asarray(y, dtype=float) / a) / a,
                           singularity_order=1.0, scale=a)
    if fam is Family.RELATIVISTIC:
        def ell(y):
            ay = np.abs(np.asarray(y, dtype=float))
            return s * specfun.bessel_k(1.0, ay / a) / (math.pi * ay)

        return LevyTriplet(levy_density=ell, singularity_order=1.0, scale=a)
    if fam is Family.COMPOUND_POISSON:
        comp, lam = law.component, s
        if comp.family is Family.BERNOULLI_PM:
            return LevyTriplet(atoms=((comp.scale, 0.5 * lam), (-comp.scale, 0.5 * lam)), scale=comp.scale)
        if not absolutely_continuous(comp):
            raise UnknownLevyMeasure("compound Poisson component must be Bernoulli or absolutely continuous")
        return LevyTriplet(levy_density=lambda y: lam * np.asarray(pdf(comp, y)),
                           singularity_order=-1.0, scale=comp.scale)
    raise AssertionError(fam)


def lkh_reconstruct(trip: LevyTriplet, u):
    r"""Evaluate the symmetric Levy-Khintchine formula numerically.

    .. math::

        \eta(u) = -\frac{\gamma^2u^2}{2} + 2\int_0^\infty(\cos uy - 1)\,\ell(y)\,dy
        + \sum_{\rm atoms} w\,(\cos uy_a - 1)

    The integral is split into an analytic core :math:`(0,\varepsilon)`, an
    adaptive body and a Fourier-weighted tail.
    """
    u_arr = np.atleast_1d(np.asarray(u, dtype=float))
    out = -0.5 * trip.gaussian**2 * u_arr**2
    for pos, w in trip.atoms:
        out = out + w * (np.cos(u_arr * pos) - 1.0)
    ell = trip.levy_density
    if ell is not None:
        sc = trip.scale
        eps = 1e-4 * sc
        core = adaptive_integrate(lambda y: y * y * ell(y), 0.0, eps, tol=0.0, rtol=1e-12)
        outer = 60.0 * sc
        mass_tail = adaptive_integrate(ell, outer, np.inf, tol=1e-14)
        pts = list(eps * 10.0 ** np.arange(1, 7))
        for i, uu in enumerate(u_arr):
            if uu == 0.0:
                continue
            body = _vec_integral(lambda y: -2.0 * np.sin(0.5 * uu * y) ** 2 * ell(y), eps, outer,
                                 pts + list(np.arange(1, 60) * sc), tol=1e-13, what="LKh integral")
            tail = _cos_tail(ell, outer, uu) - mass_tail
            out[i] += -uu * uu * core + 2.0 * (float(body) + tail)
    return out if np.ndim(u) else float(out[0])


# ---------------------------------------------------------------------------
# closure, moments
# ---------------------------------------------------------------------------

def _as_stable(law: LawSpec):
    fam = law.family
    if fam is Family.NORMAL:
        return 2.0, law.scale
    if fam is Family.CAUCHY or (fam is Family.STUDENT and law.shape == 1.0):
        return 1.0, law.scale
    if fam is Family.STABLE:
        return law.shape, law.scale
    return None


def _from_stable(alpha: float, a: float) -> LawSpec:
    if alpha == 2.0:
        return LawSpec(Family.NORMAL, scale=a)
    if alpha == 1.0:
        return LawSpec(Family.CAUCHY, scale=a)
    return LawSpec(Family.STABLE, alpha, a)


def _as_vg(law: LawSpec):
    if law.family is Family.LAPLACE:
        return 1.0, law.scale
    if law.family is Family.VG:
        return law.shape, law.scale
    return None


def convolve_family(lhs: LawSpec, rhs: LawSpec):
    """Law of the sum of independent ``lhs`` and ``rhs`` when the family is closed.

    Returns ``UNCLOSED`` when the sum leaves the catalog.

    Raises
    ------
    ScaleMismatch
        For VG or relativistic laws with different scales.
    """
    if lhs.family is Family.DEGENERATE:
        return rhs
    if rhs.family is Family.DEGENERATE:
        return lhs
    st_l, st_r = _as_stable(lhs), _as_stable(rhs)
    if st_l and st_r:
        if st_l[0] != st_r[0]:
            return UNCLOSED
        alpha = st_l[0]
        return _from_stable(alpha, (st_l[1] ** alpha + st_r[1] ** alpha) ** (1.0 / alpha))
    vg_l, vg_r = _as_vg(lhs), _as_vg(rhs)
    if vg_l and vg_r:
        if vg_l[1] != vg_r[1]:
            raise ScaleMismatch("VG laws only add their shapes at equal scale")
        return LawSpec(Family.VG, vg_l[0] + vg_r[0], vg_l[1])
    if lhs.family is Family.RELATIVISTIC and rhs.family is Family.RELATIVISTIC:
        if lhs.scale != rhs.scale:
            raise ScaleMismatch("relativistic laws only add their shapes at equal scale")
        return LawSpec(Family.RELATIVISTIC, lhs.shape + rhs.shape, lhs.scale)
    if lhs.family is Family.COMPOUND_POISSON and rhs.family is Family.COMPOUND_POISSON:
        if lhs.component == rhs.component:
            return LawSpec(Family.COMPOUND_POISSON, lhs.shape + rhs.shape, component=lhs.component)
    return UNCLOSED


def variance(law: LawSpec) -> float:
    """Variance, ``inf`` when the second moment diverges."""
    fam, s, a = law.family, law.shape, law.scale
    if fam is Family.DEGENERATE:
        return 0.0
    if fam is Family.NORMAL:
        return a * a
    if fam is Family.CAUCHY:
        return math.inf
    if fam is Family.STABLE:
        return a * a if s == 2.0 else math.inf
    if fam is Family.LAPLACE:
        return 2.0 * a * a
    if fam is Family.VG:
        return 2.0 * s * a * a
    if fam is Family.STUDENT:
        return a * a / (s - 2.0) if s > 2.0 else math.inf
    if fam is Family.RELATIVISTIC:
        return s * a * a
    if fam is Family.UNIFORM:
        return a * a / 3.0
    if fam is Family.BERNOULLI_PM:
        return a * a
    if fam is Family.COMPOUND_POISSON:
        return s * variance(law.component)
    raise AssertionError(fam)


def expectation(law: LawSpec) -> Expectation:
    """Whether the mean exists (it is then zero by symmetry)."""
    fam, s = law.family, law.shape
    if fam is Family.CAUCHY:
        return Expectation.UNDEFINED
    if fam in (Family.STABLE, Family.STUDENT) and s <= 1.0:
        return Expectation.UNDEFINED
    if fam is Family.COMPOUND_POISSON:
        return expectation(law.component)
    return Expectation.ZERO


def tail_model(law: LawSpec):
    """``(A, p)`` with ``pdf ~ A |x|^-p`` for power-law tails, else ``None``."""
    fam, s, a = law.family, law.shape, law.scale
    if fam is Family.CAUCHY or (fam is Family.STABLE and s == 1.0):
        return a / math.pi, 2.0
    if fam is Family.STABLE and s < 2.0:
        c = _stable_levy_const(s)
        return c * a**s, 1.0 + s
    if fam is Family.STUDENT:
        lognorm = _student_lognorm(s)
        return math.exp(lognorm) * a**s, s + 1.0
    return None


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_ALIASES = {
    "degenerate": Family.DEGENERATE, "delta": Family.DEGENERATE,
    "normal": Family.NORMAL, "gauss": Family.NORMAL, "gaussian": Family.NORMAL,
    "cauchy": Family.CAUCHY,
    "laplace": Family.LAPLACE,
    "stable": Family.STABLE,
    "vg": Family.VG,
    "student": Family.STUDENT,
    "relativistic": Family.RELATIVISTIC, "rel": Family.RELATIVISTIC,
    "uniform": Family.UNIFORM,
    "bernoulli": Family.BERNOULLI_PM, "dirac": Family.BERNOULLI_PM,
    "cpoisson": Family.COMPOUND_POISSON, "poisson": Family.COMPOUND_POISSON,
}
_SCALE_KEYS = ("a", "b", "c", "scale")
_SHAPE_KEYS = ("alpha", "nu", "lambda", "shape")

_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)|(.))")


def _tokenize(text: str):
    pos, toks = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        pos = m.end()
        if m.group(1):
            toks.append(("name", m.group(1)))
        elif m.group(2):
            toks.append(("num", m.group(2)))
        elif m.group(3) and not m.group(3).isspace():
            toks.append(("op", m.group(3)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"unexpected token {tok[1]!r} in {self.text!r}")
        self.i += 1
        return tok[1]

    def call(self):
        """name '(' [key '=' value {',' key '=' value}] ')'"""
        name = self.take("name").lower()
        args = {}
        if self.peek() == ("op", "("):
            self.take("op", "(")
            while self.peek() != ("op", ")"):
                key = self.take("name")
                self.take("op", "=")
                if self.peek()[0] == "num":
                    args[key] = float(self.take("num"))
                else:
                    args[key] = self.call()
                if self.peek() == ("op", ","):
                    self.take("op", ",")
                elif self.peek() != ("op", ")"):
                    raise ParseError(f"expected ',' or ')' in {self.text!r}")
            self.take("op", ")")
        return name, args

    def done(self):
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")


def _law_from_call(name: str, args: dict) -> LawSpec:
    if name not in _ALIASES:
        raise ParseError(f"unknown law family {name!r}")
    fam = _ALIASES[name]
    args = dict(args)
    component = None
    if "component" in args:
        comp = args.pop("component")
        if not isinstance(comp, tuple):
            raise ParseError("component must be a law")
        component = _law_from_call(*comp)
    scale = 1.0
    shape = None
    for key in list(args):
        val = args.pop(key)
        if isinstance(val, tuple):
            raise ParseError(f"parameter {key!r} must be numeric")
        if key in _SCALE_KEYS:
            scale = val
        elif key in _SHAPE_KEYS:
            shape = val
        else:
            raise ParseError(f"unknown parameter {key!r} for {name}")
    try:
        return LawSpec(fam, shape, scale, component)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc


def parse_call(text: str):
    """Parse ``name(key=value, ...)`` into ``(name, args)``; values may nest."""
    p = _Parser(text)
    out = p.call()
    p.done()
    return out


def parse_law(text: str) -> LawSpec:
    """Parse strings such as ``"vg(nu=2,a=1.0)"`` or ``"cpoisson(lambda=1,component=normal(a=1))"``."""
    return _law_from_call(*parse_call(text))


def format_law(law: LawSpec) -> str:
    fam = law.family
    parts = []
    if fam in (Family.STABLE, Family.STUDENT):
        parts.append(f"alpha={law.shape:g}")
    elif fam in (Family.VG, Family.RELATIVISTIC):
        parts.append(f"nu={law.shape:g}")
    elif fam is Family.COMPOUND_POISSON:
        parts.append(f"lambda={law.shape:g}")
        parts.append(f"component={format_law(law.component)}")
    if fam is not Family.COMPOUND_POISSON and fam is not Family.DEGENERATE:
        parts.append(f"a={law.scale:g}")
    return f"{fam.value}({','.join(parts)})"
