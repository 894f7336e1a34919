r"""Special functions used by the law catalog and the closed-form solutions.

Everything here is NumPy-vectorised and pure.  The functions cover exactly
what the rest of the package needs:

* modified Bessel functions of the second kind :math:`K_\mu(z)` for real and
  complex order and argument,
* the complex Gamma function,
* the auxiliary sine/cosine integrals :math:`\mathrm{si}` and :math:`\mathrm{ci}`,
* reverse Bessel polynomials :math:`\theta_n(x)`.

Complex arguments are ordinary Python/NumPy complex numbers; square roots and
logarithms follow the principal branch (cut along the negative real axis).
"""
from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, PoleError

__all__ = [
    "EULER_GAMMA",
    "bessel_k",
    "bessel_k_complex",
    "gamma_complex",
    "sin_cos_integrals",
    "reverse_bessel_theta",
]

EULER_GAMMA = 0.57721566490153286061

# Lanczos coefficients for g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_C = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_CHUNK = 256
_LOG_FLOOR = math.log(1e-18)


def reverse_bessel_theta(n: int, x):
    r"""Reverse Bessel polynomial :math:`\theta_n(x)`.

    Uses :math:`\theta_0 = 1`, :math:`\theta_1 = x + 1` and
    :math:`\theta_n = (2n-1)\theta_{n-1} + x^2\theta_{n-2}`.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"reverse_bessel_theta needs an integer n >= 0, got {n!r}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if prev.ndim else float(prev)
    cur = x + 1.0
    for k in range(2, int(n) + 1):
        prev, cur = cur, (2 * k - 1) * cur + x * x * prev
    return cur if cur.ndim else float(cur)


def _half_integer_index(order: float):
    twice = 2.0 * order
    if abs(twice - round(twice)) < 1e-14 and round(twice) % 2 == 1:
        return int(round(order - 0.5))
    return None


def _k_trapezoid(mu, z, shift: bool = True, hfac: float = 8.0):
    r"""Trapezoid rule for :math:`\tfrac12\int_{\mathbb R} e^{-z\cosh t - \mu t}\,dt`.

    The line of integration is moved to :math:`\operatorname{Im} t = \beta`,
    with :math:`\beta` taken from the saddle point of the integrand and
    clipped so that the shifted line stays inside the strip where the
    integrand decays.  The trapezoid rule on an analytic, doubly
    exponentially decaying integrand converges geometrically in ``1/h``.
    """
    mu = complex(mu)
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    out = np.empty(z.shape, dtype=complex)
    flat_z = z.ravel()
    flat_out = out.ravel()
    for start in range(0, flat_z.size, _CHUNK):
        zc = flat_z[start:start + _CHUNK]
        phi = np.angle(zc)
        room = np.pi / 2 - np.abs(phi)
        if shift:
            beta = np.arcsinh(-mu / zc).imag
            beta = np.clip(beta, -0.85 * room, 0.85 * room)
        else:
            beta = np.zeros_like(room)
        d = room - np.abs(beta)
        h = float(min(0.1, d.min() / hfac))
        c = np.minimum((zc * np.exp(1j * beta)).real, (zc * np.exp(-1j * beta)).real)
        c = float(c.min())
        s_max = 3.0
        for _ in range(4):
            need = 70.0 + abs(mu.real) * s_max + abs(mu.imag) * np.pi + float(np.abs(zc).max())
            s_max = max(1.0, math.log(2.0 * need / c))
        s = np.arange(-s_max, s_max + 0.5 * h, h)
        t = s[None, :] + 1j * beta[:, None]
        expo = -zc[:, None] * np.cosh(t) - mu * t
        flat_out[start:start + _CHUNK] = 0.5 * h * np.exp(expo).sum(axis=1)
    return out


def bessel_k(order: float, x):
    r"""Modified Bessel function of the second kind for real order.

    Parameters
    ----------
    order : float
        Order :math:`\nu \ge 0` (negative orders are mapped by
        :math:`K_{-\nu} = K_\nu`).
    x : float or array_like
        Positive argument.

    Returns
    -------
    float or ndarray
        :math:`K_\nu(x)`.  Half-integer orders use the closed form
        :math:`\sqrt{\pi/2x}\,e^{-x}\theta_n(x)/x^n`; everything else is
        evaluated from the integral :math:`\int_0^\infty e^{-x\cosh t}\cosh(\nu t)\,dt`.
    """
    x_arr = np.asarray(x, dtype=float)
    if np.any(~(x_arr > 0)):
        raise DomainError("bessel_k requires x > 0")
    order = abs(float(order))
    n = _half_integer_index(order)
    if n is not None:
        val = np.sqrt(np.pi / (2 * x_arr)) * np.exp(-x_arr) * reverse_bessel_theta(n, x_arr) / x_arr**n
    elif abs(order - round(order)) < 1e-14 and 1 < round(order) <= 5:
        # upward recurrence K_{k+1} = K_{k-1} + (2k/x) K_k is stable for K
        k_prev = _k_trapezoid(0.0, x_arr.ravel()).real
        k_cur = _k_trapezoid(1.0, x_arr.ravel()).real
        xf = x_arr.ravel()
        for k in range(1, int(round(order))):
            k_prev, k_cur = k_cur, k_prev + 2.0 * k / xf * k_cur
        val = k_cur.reshape(x_arr.shape)
    else:
        val = _k_trapezoid(order, x_arr.ravel()).real.reshape(x_arr.shape)
    return val if np.ndim(val) else float(val)


def bessel_k_complex(order, z, *, shift: bool = True):
    r"""Modified Bessel function :math:`K_\mu(z)` for complex order and argument.

    Evaluates :math:`K_\mu(z) = \tfrac12\int_{-\infty}^{\infty}
    e^{-z\cosh t-\mu t}\,dt`, valid for :math:`\operatorname{Re} z > 0`.

    Parameters
    ----------
    order : complex
        Order :math:`\mu`.
    z : complex or array_like
        Argument with positive real part.
    shift : bool, optional
        Move the integration line through the saddle point (default).  With
        ``shift=False`` the real axis is used, which suffers cancellation for
        large :math:`|\operatorname{Im}\mu|` but serves as an independent
        check for moderate parameters.
    """
    z_arr = np.asarray(z, dtype=complex)
    if np.any(~(z_arr.real > 0)):
        raise DomainError("bessel_k_complex requires Re z > 0")
    val = _k_trapezoid(order, z_arr.ravel(), shift=shift).reshape(z_arr.shape)
    return val if val.ndim else complex(val)


def _lanczos(z):
    z = z - 1.0
    acc = np.full(z.shape, _LANCZOS_C[0], dtype=complex)
    for i in range(1, len(_LANCZOS_C)):
        acc = acc + _LANCZOS_C[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return np.sqrt(2 * np.pi) * t ** (z + 0.5) * np.exp(-t) * acc


def gamma_complex(z):
    r"""Gamma function for complex argument.

    Lanczos approximation (:math:`g=7`, nine terms) for
    :math:`\operatorname{Re} z \ge 1/2` and the reflection formula
    :math:`\Gamma(z)\Gamma(1-z) = \pi/\sin(\pi z)` otherwise.

    Raises
    ------
    PoleError
        If ``z`` is a non-positive integer.
    """
    z_arr = np.atleast_1d(np.asarray(z, dtype=complex))
    near_int = np.abs(z_arr - np.round(z_arr.real)) < 1e-15
    if np.any(near_int & (np.round(z_arr.real) <= 0)):
        raise PoleError("gamma_complex has poles at non-positive integers")
    out = np.empty_like(z_arr)
    right = z_arr.real >= 0.5
    if np.any(right):
        out[right] = _lanczos(z_arr[right])
    if np.any(~right):
        zl = z_arr[~right]
        out[~right] = np.pi / (np.sin(np.pi * zl) * _lanczos(1.0 - zl))
    out = out.reshape(np.shape(z))
    return out if out.ndim else complex(out)


def _e1_imag_cf(x):
    r"""Continued fraction for :math:`E_1(ix)`, modified Lentz, :math:`x \ge 4`."""
    z = 1j * x
    tiny = 1e-300
    b = z + 1.0
    c = np.full(z.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    for i in range(1, 400):
        an = -float(i * i)
        b = b + 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h = h * delta
        if np.all(np.abs(delta - 1.0) < 1e-16):
            break
    return h * np.exp(-z)


def sin_cos_integrals(x):
    r"""Auxiliary sine and cosine integrals.

    .. math::

        \mathrm{si}(x) = -\int_x^\infty \frac{\sin y}{y}\,dy, \qquad
        \mathrm{ci}(x) = -\int_x^\infty \frac{\cos y}{y}\,dy .

    Power series below ``x = 4``; above, the continued fraction of
    :math:`E_1(ix) = -\mathrm{ci}(x) + i\,\mathrm{si}(x)`.

    Returns
    -------
    si, ci : float or ndarray
    """
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~(x_arr > 0)):
        raise DomainError("sin_cos_integrals requires x > 0")
    si = np.empty_like(x_arr)
    ci = np.empty_like(x_arr)
    small = x_arr < 4.0
    if np.any(small):
        xs = x_arr[small]
        x2 = xs * xs
        term = xs.copy()          # x^{2k+1}/(2k+1)! with sign
        s_sum = xs.copy()
        cterm = np.ones_like(xs)  # x^{2k}/(2k)! with sign
        c_sum = np.zeros_like(xs)
        for k in range(1, 40):
            term = -term * x2 / ((2 * k) * (2 * k + 1))
            cterm = -cterm * x2 / ((2 * k - 1) * (2 * k))
            s_sum += term / (2 * k + 1)
            c_sum += cterm / (2 * k)
        si[small] = s_sum - np.pi / 2
        ci[small] = EULER_GAMMA + np.log(xs) + c_sum
    if np.any(~small):
        e1 = _e1_imag_cf(x_arr[~small])
        si[~small] = e1.imag
        ci[~small] = -e1.real
    si = si.reshape(np.shape(x))
    ci = ci.reshape(np.shape(x))
    if si.ndim == 0:
        return float(si), float(ci)
    return si, ci
