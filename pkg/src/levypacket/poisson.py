r"""Symmetrised compound Poisson laws with a Gaussian background.

The law :math:`N_{b_0} * P(\lambda, X)` has characteristic function

.. math::

    \chi(u) = e^{-b_0^2u^2/2}\, e^{\lambda(\chi_X(u) - 1)},

which is absolutely continuous as soon as :math:`b_0 > 0`.  Two components
are supported: a centred normal :math:`N_c` and the symmetric Bernoulli
(two-point) law :math:`\pm a`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, NotAbsolutelyContinuous, ParseError
from .laws import Family, LawSpec, LevyTriplet, chf as law_chf, parse_call, pdf as law_pdf, _law_from_call
from .spectral import pv_generator_apply, _finite_difference_d2

__all__ = [
    "CompoundSpec",
    "truncation_index",
    "compound_chf",
    "compound_lch",
    "compound_pdf_series",
    "compound_triplet",
    "generator_apply_compound",
    "parse_wiener_poisson",
    "compound_variance",
]


@dataclass(frozen=True)
class CompoundSpec:
    """``background * P(rate, component)``; ``background`` is a normal law or ``None``."""

    rate: float
    component: LawSpec
    background: LawSpec | None = None
    tol: float = 1e-12

    def __post_init__(self):
        if not self.rate >= 0:
            raise DomainError("Poisson rate must be nonnegative")
        if self.component.family not in (Family.NORMAL, Family.BERNOULLI_PM):
            raise DomainError("component must be a normal or Bernoulli law")
        if self.background is not None and self.background.family is not Family.NORMAL:
            raise DomainError("background must be a normal law")

    @property
    def b0(self) -> float:
        return 0.0 if self.background is None else self.background.scale

    @property
    def absolutely_continuous(self) -> bool:
        return self.b0 > 0.0

    def __str__(self):
        comp = self.component
        name = "normal(c=" if comp.family is Family.NORMAL else "dirac(a="
        return f"wiener_poisson(b0={self.b0:g},lambda={self.rate:g},component={name}{comp.scale:g}))"


def truncation_index(lam: float, tol: float) -> int:
    r"""Number of series terms ``K`` such that the neglected terms are below ``tol``.

    ``K = max(ceil(lam + 10 sqrt(lam) + 20), k*)`` where ``k*`` is the first
    index past ``lam`` with :math:`\lambda^k/k! < tol`.
    """
    base = int(math.ceil(lam + 10.0 * math.sqrt(lam) + 20.0))
    if lam <= 0:
        return base
    k = max(int(math.ceil(lam)), 1)
    log_tol = math.log(tol)
    while k * math.log(lam) - math.lgamma(k + 1.0) >= log_tol:
        k += 1
    return max(base, k)


def compound_lch(spec: CompoundSpec, u, t_scaling: float | None = None):
    u = np.asarray(u, dtype=float)
    lam = spec.rate * (1.0 if t_scaling is None else t_scaling)
    return -0.5 * spec.b0**2 * u * u + lam * (np.asarray(law_chf(spec.component, u)) - 1.0)


def compound_chf(spec: CompoundSpec, u, t_scaling: float | None = None):
    r""":math:`\chi_{b_0}(u)\,e^{\lambda(\chi_c(u)-1)}`; ``t_scaling`` replaces
    :math:`\lambda` by :math:`\lambda t`."""
    return np.exp(compound_lch(spec, u, t_scaling))


def compound_variance(spec: CompoundSpec) -> float:
    comp = spec.component
    return spec.b0**2 + spec.rate * comp.scale**2


def _poisson_weights(lam: float, K: int) -> np.ndarray:
    k = np.arange(K + 1)
    if lam == 0:
        return (k == 0).astype(float)
    return np.exp(-lam + k * math.log(lam) - gammaln(k + 1.0))


def _normal(x, var):
    return np.exp(-0.5 * x * x / var) / np.sqrt(2 * math.pi * var)


def compound_pdf_series(spec: CompoundSpec, x, t_scaling: float | None = None):
    r"""Density of the law as a Poisson mixture of Gaussians.

    Normal component ``N_c``:
    :math:`\sum_k w_k\,N(x;\,b_0^2 + kc^2)`.  Bernoulli component ``\pm a``:
    :math:`\sum_k w_k\,2^{-k}\sum_j\binom{k}{j}N(x-(2j-k)a;\,b_0^2)`, with
    Poisson weights :math:`w_k = e^{-\lambda}\lambda^k/k!`.

    Raises
    ------
    NotAbsolutelyContinuous
        If there is no background (or ``b0 = 0``).
    """
    if spec.background is None or spec.b0 == 0.0:
        raise NotAbsolutelyContinuous("compound Poisson law without Gaussian background has atoms")
    lam = spec.rate * (1.0 if t_scaling is None else t_scaling)
    x = np.asarray(x, dtype=float)
    return mixture_density(x, lam, spec.b0**2, spec.component, spec.tol)


def mixture_density(x, lam: float, var0: float, component: LawSpec, tol: float):
    """Poisson/Gaussian mixture density with background variance ``var0``."""
    x = np.abs(x)  # exact mirror symmetry, whatever the summation order
    K = truncation_index(lam, tol)
    w = _poisson_weights(lam, K)
    out = np.zeros(np.shape(x))
    c = component.scale
    if component.family is Family.NORMAL:
        for k in range(K + 1):
            if w[k] == 0.0:
                continue
            out = out + w[k] * _normal(x, var0 + k * c * c)
        return out
    for k in range(K + 1):
        if w[k] < 1e-300:
            continue
        j = np.arange(k + 1)
        binom = np.exp(gammaln(k + 1.0) - gammaln(j + 1.0) - gammaln(k - j + 1.0) - k * math.log(2.0))
        shifts = (2 * j - k) * c
        for bj, sj in zip(binom, shifts):
            out = out + w[k] * bj * _normal(x - sj, var0)
    return out


def compound_triplet(spec: CompoundSpec) -> LevyTriplet:
    r"""Levy triplet :math:`(0, b_0, \lambda p_c)`; Bernoulli components become atoms."""
    comp, lam = spec.component, spec.rate
    if lam == 0.0:
        return LevyTriplet(gaussian=spec.b0, scale=max(comp.scale, spec.b0 or comp.scale))
    if comp.family is Family.BERNOULLI_PM:
        return LevyTriplet(gaussian=spec.b0, atoms=((comp.scale, 0.5 * lam), (-comp.scale, 0.5 * lam)),
                           scale=comp.scale)
    return LevyTriplet(gaussian=spec.b0, levy_density=lambda y: lam * np.asarray(law_pdf(comp, y)),
                       singularity_order=-1.0, scale=comp.scale)


def generator_apply_compound(spec: CompoundSpec, f, x, *, d2f=None):
    r"""Generator of the compound law applied to ``f``.

    Bernoulli components use the exact finite difference
    :math:`\tfrac{b_0^2}{2}f'' + \tfrac{\lambda}{2}[f(x+a) - 2f(x) + f(x-a)]`;
    normal components go through the principal-value integral.
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    comp = spec.component
    if comp.family is Family.NORMAL:
        out = pv_generator_apply(f, compound_triplet(spec), x_arr, d2f=d2f)
        return out if np.ndim(x) else complex(out[0])
    a, lam = comp.scale, spec.rate
    fx = np.asarray(f(x_arr), dtype=complex)
    out = 0.5 * lam * (f(x_arr + a) - 2 * fx + f(x_arr - a))
    if spec.b0:
        if d2f is not None:
            d2 = d2f(x_arr)
        elif hasattr(f, "second_derivative"):
            d2 = f.second_derivative(x_arr)
        else:
            d2 = _finite_difference_d2(f, x_arr, 1e-3 * max(a, spec.b0))
        out = out + 0.5 * spec.b0**2 * np.asarray(d2)
    return out if np.ndim(x) else complex(out[0])


def parse_wiener_poisson(text: str, tau: float = 1.0, tol: float = 1e-12) -> CompoundSpec:
    """Parse ``wiener_poisson(D=..., lambda=..., component=normal(c=...)|dirac(a=...))``.

    ``D`` is the diffusion coefficient, so the background scale is
    ``b0 = sqrt(2 D tau)``.
    """
    name, args = parse_call(text)
    if name not in ("wiener_poisson", "wp"):
        raise ParseError(f"expected wiener_poisson(...), got {name!r}")
    args = dict(args)
    if "component" not in args or not isinstance(args["component"], tuple):
        raise ParseError("wiener_poisson needs component=normal(c=...) or dirac(a=...)")
    comp = _law_from_call(*args.pop("component"))
    D = args.pop("D", 0.0)
    b0 = args.pop("b0", None)
    lam = args.pop("lambda", None)
    if args:
        raise ParseError(f"unknown wiener_poisson parameters {sorted(args)}")
    if lam is None:
        raise ParseError("wiener_poisson needs lambda=...")
    if b0 is None:
        if D < 0:
            raise ParseError("D must be nonnegative")
        b0 = math.sqrt(2.0 * D * tau)
    background = LawSpec(Family.NORMAL, scale=b0) if b0 > 0 else None
    try:
        return CompoundSpec(lam, comp, background, tol)
    except DomainError as exc:
        raise ParseError(str(exc)) from exc
