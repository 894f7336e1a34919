r"""Dual-grid discrete Fourier kernel and the quadrature layer.

Two transform conventions live here, each with its own code path.

Characteristic functions (laws and process densities)::

    phi(u) = int rho(x) exp(+iux) dx,      rho(x) = (1/2pi) int phi(u) exp(-iux) du

Wave functions (Schrodinger-like packets)::

    psihat(u) = (1/sqrt(2pi)) int psi(x) exp(-iux) dx,
    psi(x)    = (1/sqrt(2pi)) int psihat(u) exp(+iux) du

Both grids are symmetric about the origin.  With ``N`` divisible by four the
kernel :math:`e^{\mp iu_kx_j}` equals :math:`(-1)^{j+k}e^{\mp 2\pi ijk/N}`, so
every transform is one FFT bracketed by sign flips.  Because the inversion
sums are Riemann sums of the Fourier integral, a density reconstructed from a
characteristic function is the *periodisation*
:math:`\sum_m \rho(x + 2Lm)` of the true density (Poisson summation).  Fields
produced that way carry ``periodic=True``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.interpolate import make_interp_spline
from scipy.special import hyp2f1

from .errors import AliasingError, ConvergenceError, DomainError, NonSymmetricError, SingularityError

__all__ = [
    "GridPair",
    "Tail",
    "ComplexField",
    "GridFunction",
    "PlaneWave",
    "chf_to_pdf",
    "pdf_to_chf",
    "wfhat_to_wf",
    "wf_to_wfhat",
    "convolve",
    "pv_generator_apply",
    "adaptive_integrate",
    "navot_origin_value",
    "log_pair_correction",
]

ALIASING_TOL = 1e-8
EDGE_TOL = 1e-10


@dataclass(frozen=True)
class GridPair:
    r"""Reciprocal position/frequency grids.

    ``x_j = -L + j dx`` with ``dx = 2L/N`` and ``u_k = -pi/dx + k du`` with
    ``du = pi/L``, ``j, k = 0..N-1``.  Index ``N/2`` is the origin on both.
    """

    L: float
    N: int

    def __post_init__(self):
        if not (self.L > 0 and math.isfinite(self.L)):
            raise DomainError(f"grid half-width must be positive, got {self.L!r}")
        n = int(self.N)
        if n != self.N or n < 8 or n & (n - 1):
            raise DomainError(f"grid size must be a power of two >= 8, got {self.N!r}")

    @classmethod
    def default(cls, scale: float = 1.0) -> "GridPair":
        """``L = 40*scale``, ``N = 4096``: adequate for exponentially light tails."""
        return cls(40.0 * scale, 4096)

    @classmethod
    def heavy_tail(cls, scale: float = 1.0) -> "GridPair":
        """``L = 4800*scale``, ``N = 131072``: wide window for ``|x|^-2`` tails."""
        return cls(4800.0 * scale, 131072)

    @property
    def dx(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def du(self) -> float:
        return math.pi / self.L

    @property
    def u_max(self) -> float:
        return math.pi / self.dx

    @property
    def origin(self) -> int:
        return self.N // 2

    @cached_property
    def x(self) -> np.ndarray:
        x = -self.L + self.dx * np.arange(self.N)
        x.setflags(write=False)
        return x

    @cached_property
    def u(self) -> np.ndarray:
        u = -self.u_max + self.du * np.arange(self.N)
        u.setflags(write=False)
        return u

    @cached_property
    def _sign(self) -> np.ndarray:
        s = np.where(np.arange(self.N) % 2 == 0, 1.0, -1.0)
        s.setflags(write=False)
        return s


@dataclass(frozen=True)
class Tail:
    r"""Power-law tail model :math:`q(x) \approx A\,(x^2 + w^2)^{-p/2}`.

    ``coefficient`` (``A``) and ``width`` (``w``) hold one value per time
    slice; ``w = 0`` is the bare power law.  The width makes Cauchy and
    Student tails exact.  ``q`` is the density for process fields and
    :math:`|\psi|^2` for wave fields.
    """

    coefficient: np.ndarray
    exponent: float
    width: np.ndarray | float = 0.0

    def mass_outside(self, L: float) -> np.ndarray:
        p = self.exponent
        A = np.asarray(self.coefficient, dtype=float)
        if p <= 1:
            return np.full(A.shape, np.inf)
        w2 = np.broadcast_to(np.asarray(self.width, dtype=float) ** 2, A.shape)
        # int_L^inf (x^2 + w^2)^(-p/2) dx
        shape = hyp2f1(0.5 * p, 0.5 * (p - 1.0), 0.5 * (p + 1.0), -w2 / (L * L))
        return 2.0 * A * L ** (1.0 - p) / (p - 1.0) * shape

    def second_moment_finite(self) -> bool:
        return self.exponent > 3


@dataclass(frozen=True, eq=False)
class ComplexField:
    """Samples of a function on one grid of a :class:`GridPair`, one row per time.

    Attributes
    ----------
    grid : GridPair
    times : tuple of float
    values : ndarray, shape (len(times), N)
    space : {"position", "frequency"}
    kind : {"density", "chf", "wave", "spectrum", "generic"}
    periodic : bool
        Samples are the periodisation of the underlying function, as produced
        by spectral inversion.
    tail : Tail or None
        Declared asymptotic tail of the underlying function.
    log_singularities : tuple of (index, coefficient)
        Samples whose underlying function behaves like ``c ln|s - s_i|``;
        the stored value at ``index`` is the regularised one.
    info : dict
        Diagnostics (discarded imaginary parts, renormalisation factors...).
    """

    grid: GridPair
    times: tuple
    values: np.ndarray
    space: str
    kind: str = "generic"
    periodic: bool = False
    tail: Tail | None = None
    log_singularities: tuple = ()
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex, copy=True)
        if vals.ndim == 1:
            vals = vals[None, :]
        times = tuple(float(t) for t in self.times)
        if vals.shape != (len(times), self.grid.N):
            raise DomainError(f"values shape {vals.shape} does not match {(len(times), self.grid.N)}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("field contains NaN or Inf")
        if self.space not in ("position", "frequency"):
            raise DomainError(f"unknown space {self.space!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "times", times)

    @classmethod
    def sample(cls, grid: GridPair, fn: Callable, space: str, times: Sequence[float] | None = None, **kw):
        """Evaluate ``fn(s)`` (or ``fn(s, t)`` when ``times`` is given) on the grid."""
        s = grid.x if space == "position" else grid.u
        if times is None:
            return cls(grid, (0.0,), np.asarray(fn(s))[None, :], space, **kw)
        rows = [np.asarray(fn(s, t)) * np.ones(grid.N) for t in times]
        return cls(grid, tuple(times), np.array(rows), space, **kw)

    @property
    def coords(self) -> np.ndarray:
        return self.grid.x if self.space == "position" else self.grid.u

    @property
    def step(self) -> float:
        return self.grid.dx if self.space == "position" else self.grid.du

    @property
    def real(self) -> np.ndarray:
        return self.values.real

    def slice(self, i: int) -> np.ndarray:
        return self.values[i]

    def at(self, i: int) -> "GridFunction":
        """Spline interpolant of slice ``i`` (position space only)."""
        return GridFunction(self.coords, self.values[i])

    def window(self, start: int, stop: int) -> "ComplexField":
        """Slices ``start:stop`` as a new field."""
        tail = self.tail
        if tail is not None:
            width = np.broadcast_to(tail.width, np.shape(tail.coefficient))[start:stop]
            tail = Tail(np.asarray(tail.coefficient)[start:stop], tail.exponent, width)
        return replace(self, times=self.times[start:stop], values=self.values[start:stop], tail=tail)

    def with_values(self, values, **changes) -> "ComplexField":
        return replace(self, values=values, **changes)


class GridFunction:
    """Quintic-spline interpolant of grid samples, zero outside the grid.

    Exposes ``second_derivative`` so generator application can use the
    interpolant's exact curvature.
    """

    def __init__(self, coords, values):
        self.coords = np.asarray(coords, dtype=float)
        vals = np.asarray(values)
        self.is_complex = np.iscomplexobj(vals) and np.any(vals.imag != 0)
        self.lo = float(self.coords[0])
        self.hi = float(self.coords[-1])
        self.step = float(self.coords[1] - self.coords[0])
        self._re = make_interp_spline(self.coords, vals.real, k=5)
        self._im = make_interp_spline(self.coords, vals.imag, k=5) if self.is_complex else None
        self._re2 = self._re.derivative(2)
        self._im2 = self._im.derivative(2) if self.is_complex else None

    def _eval(self, re, im, s):
        s = np.asarray(s, dtype=float)
        inside = (s >= self.lo) & (s <= self.hi)
        out = np.where(inside, re(np.clip(s, self.lo, self.hi)), 0.0)
        if im is None:
            return out
        return out + 1j * np.where(inside, im(np.clip(s, self.lo, self.hi)), 0.0)

    def __call__(self, s):
        return self._eval(self._re, self._im, s)

    def second_derivative(self, s):
        return self._eval(self._re2, self._im2, s)


class PlaneWave:
    r"""The function :math:`A e^{iks}`; lets generators use exact oscillatory tails."""

    def __init__(self, frequency: float, amplitude: complex = 1.0):
        self.frequency = float(frequency)
        self.amplitude = complex(amplitude)

    def __call__(self, s):
        return self.amplitude * np.exp(1j * self.frequency * np.asarray(s, dtype=float))

    def second_derivative(self, s):
        return -self.frequency**2 * self(s)


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def _check_hermitian(phi: np.ndarray, tol: float = 1e-10):
    # phi(-u_k) sits at index N-k for k >= 1
    mirrored = np.conj(phi[:, :0:-1])
    scale = max(1.0, float(np.abs(phi).max()))
    err = float(np.abs(phi[:, 1:] - mirrored).max()) if phi.shape[1] > 1 else 0.0
    if err > tol * scale:
        raise NonSymmetricError(f"characteristic function is not Hermitian (defect {err:.3e})")


def _check_edges(values: np.ndarray, tol: float, what: str):
    edge = float(np.abs(values[:, [0, 1, -1]]).max())
    if edge > tol:
        raise AliasingError(f"{what} has magnitude {edge:.3e} at the grid edge (limit {tol:.1e})")


def chf_to_pdf(phi: ComplexField, *, aliasing_tol: float = ALIASING_TOL) -> ComplexField:
    r"""Invert characteristic-function samples to density samples.

    Computes :math:`\rho(x_j) = \frac{du}{2\pi}\sum_k \phi(u_k)e^{-iu_kx_j}`
    with the Nyquist sample treated as the average of :math:`\pm u_{max}`
    (the trapezoid weight on the two window ends).  The returned field is
    real-valued, flagged periodic, and records the largest discarded
    imaginary part in ``info["max_imag"]``.

    Raises
    ------
    AliasingError
        If :math:`|\phi|` exceeds ``aliasing_tol`` at the window edge.
    NonSymmetricError
        If :math:`\phi(-u) \ne \overline{\phi(u)}`.
    """
    if phi.space != "frequency":
        raise DomainError("chf_to_pdf expects a frequency-space field")
    g = phi.grid
    vals = np.array(phi.values)
    origin = vals[:, g.origin]
    if np.any(np.abs(origin - 1.0) > 1e-12):
        raise DomainError("characteristic function must equal 1 at u = 0")
    _check_hermitian(vals)
    _check_edges(vals, aliasing_tol, "characteristic function")
    vals[:, 0] = vals[:, 0].real
    rho = (g.du / (2 * np.pi)) * g._sign * np.fft.fft(g._sign * vals, axis=1)
    max_imag = float(np.abs(rho.imag).max())
    info = dict(phi.info, max_imag=max_imag)
    return ComplexField(g, phi.times, rho.real, "position", kind="density", periodic=True, info=info)


def pdf_to_chf(rho: ComplexField) -> ComplexField:
    r"""Forward transform :math:`\phi(u_k) = dx\sum_j \rho(x_j)e^{iu_kx_j}`."""
    if rho.space != "position":
        raise DomainError("pdf_to_chf expects a position-space field")
    g = rho.grid
    phi = g.dx * g._sign * g.N * np.fft.ifft(g._sign * rho.values, axis=1)
    return ComplexField(g, rho.times, phi, "frequency", kind="chf", info=dict(rho.info))


def wfhat_to_wf(psihat: ComplexField, *, aliasing_tol: float = ALIASING_TOL) -> ComplexField:
    r"""Inverse wave-function transform
    :math:`\psi(x_j) = \frac{du}{\sqrt{2\pi}}\sum_k\hat\psi(u_k)e^{iu_kx_j}`.

    Unitary on the grid: :math:`\sum|\psi_j|^2dx = \sum|\hat\psi_k|^2du`.
    """
    if psihat.space != "frequency":
        raise DomainError("wfhat_to_wf expects a frequency-space field")
    g = psihat.grid
    _check_edges(psihat.values, aliasing_tol, "momentum wave function")
    psi = (g.du / math.sqrt(2 * np.pi)) * g._sign * g.N * np.fft.ifft(g._sign * psihat.values, axis=1)
    return ComplexField(g, psihat.times, psi, "position", kind="wave", periodic=True, info=dict(psihat.info))


def wf_to_wfhat(psi: ComplexField) -> ComplexField:
    r"""Forward wave-function transform
    :math:`\hat\psi(u_k) = \frac{dx}{\sqrt{2\pi}}\sum_j\psi(x_j)e^{-iu_kx_j}`."""
    if psi.space != "position":
        raise DomainError("wf_to_wfhat expects a position-space field")
    g = psi.grid
    hat = (g.dx / math.sqrt(2 * np.pi)) * g._sign * np.fft.fft(g._sign * psi.values, axis=1)
    return ComplexField(g, psi.times, hat, "frequency", kind="spectrum", info=dict(psi.info))


# ---------------------------------------------------------------------------
# logarithmic singularities
# ---------------------------------------------------------------------------

def navot_origin_value(step: float, log_coefficient: float, regular_value: complex) -> complex:
    r"""Sample to store at a point where ``f(s) = c ln|s| + r(s)``.

    With this value, the plain Riemann sum of ``f`` times any smooth function
    is exact up to terms of order ``step**3``:
    :math:`\sum'_{k\ne0} h\ln|kh|\,g(kh) + h\,g(0)\ln(h/2\pi)` reproduces
    :math:`\int\ln|s|\,g(s)\,ds`.
    """
    return log_coefficient * math.log(step / (2 * math.pi)) + regular_value


# Defect of sum_k a_k a_{m-k} against int ln|s| ln|m-s| ds for a_k = ln|k|,
# a_0 = -ln(2 pi).  Entries m = 0..7 by extended-precision summation (m = 0 is
# 2 zeta''(0) + ln^2(2 pi)); larger m from the asymptotic series below.
_PAIR_DEFECT = (
    -0.63492080058140628,
    -0.055099894539086341,
    -0.014775067984501321,
    -0.0066726196436270988,
    -0.0037757733673685192,
    -0.0024233442427193622,
    -0.0016855025394090486,
    -0.001239501696233725,
)
# zeta'(-2j) for j = 1..6
_ZETA_PRIME_NEG_EVEN = (
    -0.030448457058393271,
    0.0079838114502686243,
    -0.0058997591435159375,
    0.0083161619856022474,
    -0.018929926338140374,
    0.063270583341463001,
)


def log_pair_correction(m) -> np.ndarray:
    """Pair defect ``e(m)`` for two logarithmic singularities ``m`` cells apart."""
    m = np.abs(np.asarray(m, dtype=int))
    out = np.empty(m.shape, dtype=float)
    small = m < len(_PAIR_DEFECT)
    out[small] = np.take(_PAIR_DEFECT, m[small])
    big = m[~small].astype(float)
    acc = np.zeros_like(big)
    for j, zp in enumerate(_ZETA_PRIME_NEG_EVEN, start=1):
        acc += zp / (j * big ** (2 * j))
    out[~small] = 2.0 * acc
    return out


def convolve(f: ComplexField, g: ComplexField, *, edge_tol: float = EDGE_TOL) -> ComplexField:
    r"""Periodic discrete convolution :math:`(f*g)(s_m) = h\sum_j f(s_j)g(s_m-s_j)`.

    Both fields must sit on the same grid and in the same space.  Unless both
    are flagged periodic, their edge values must be below ``edge_tol``.
    When both fields declare logarithmic singularities, the quadrature
    defect of every singular pair is removed from the output, so the result
    keeps the accuracy of smooth data.
    """
    if f.grid != g.grid or f.space != g.space:
        raise DomainError("convolve needs fields on the same grid and space")
    nf, ng = len(f.times), len(g.times)
    if nf != ng and 1 not in (nf, ng):
        raise DomainError("time slices of the two fields do not match")
    if not (f.periodic and g.periodic):
        _check_edges(f.values, edge_tol, "first convolution factor")
        _check_edges(g.values, edge_tol, "second convolution factor")
    grid = f.grid
    h = f.step
    n = grid.N
    gshift = np.roll(g.values, -grid.origin, axis=1)
    out = h * np.fft.ifft(np.fft.fft(f.values, axis=1) * np.fft.fft(gshift, axis=1), axis=1)
    if f.log_singularities and g.log_singularities:
        offsets = np.arange(n) - n // 2
        for i_f, c_f in f.log_singularities:
            for i_g, c_g in g.log_singularities:
                centre = (i_f + i_g - grid.origin) % n
                idx = (centre + offsets) % n
                out[:, idx] -= h * c_f * c_g * log_pair_correction(offsets)
    times = f.times if nf >= ng else g.times
    periodic = f.periodic or g.periodic
    return ComplexField(grid, times, out, f.space, kind="generic", periodic=periodic, info={})


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def adaptive_integrate(f: Callable, a: float, b: float, tol: float = 1e-10, *, rtol: float = 0.0,
                       limit: int = 500, points=None):
    """Adaptive Gauss-Kronrod quadrature of a real or complex scalar function.

    Infinite limits are accepted.  Raises :class:`ConvergenceError` when
    neither the absolute tolerance ``tol`` nor the relative tolerance
    ``rtol`` is reached.
    """
    def run(g):
        kw = dict(epsabs=tol, epsrel=rtol, limit=limit, full_output=1)
        if points is not None and np.isfinite(a) and np.isfinite(b):
            kw["points"] = points
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            res = integrate.quad(g, a, b, **kw)
        if len(res) > 3:
            raise ConvergenceError(f"adaptive_integrate failed on [{a}, {b}]: {res[3].splitlines()[0]}")
        return res[0]

    probe = f(0.5 * (a + b) if np.isfinite(a) and np.isfinite(b) else (a + 1.0 if np.isfinite(a) else 0.0))
    if np.iscomplexobj(probe):
        return complex(run(lambda s: f(s).real), run(lambda s: f(s).imag))
    return run(f)


def _vec_integral(fn, a, b, points=(), tol=1e-12, what="integral"):
    pts = [p for p in points if a < p < b]
    res, err, info = integrate.quad_vec(fn, a, b, epsabs=tol, epsrel=1e-10, points=pts or None,
                                        limit=20000, full_output=True)
    if not info.success:
        raise ConvergenceError(f"{what} did not converge on [{a}, {b}] (error {err:.2e})")
    return res


def _finite_difference_d2(f, x, h):
    return (f(x + h) - 2 * f(x) + f(x - h)) / (h * h)


def pv_generator_apply(f, triplet, x, *, eps: float | None = None, d2f: Callable | None = None,
                       cutoff: float | None = None, tol: float = 1e-12):
    r"""Apply the generator of a symmetric Levy process to ``f`` at ``x``.

    .. math::

        (Af)(x) = \frac{\gamma^2}{2}f''(x)
        + \int_0^\infty [f(x+y)+f(x-y)-2f(x)]\,\ell(y)\,dy
        + \sum_{\rm atoms} w\,[f(x+y_a)-f(x)].

    The integral is symmetrised so it converges absolutely; on
    :math:`(0,\varepsilon)` the bracket is replaced by its Taylor term
    :math:`f''(x)y^2`.

    Parameters
    ----------
    f : callable
        Vectorised function of position.  :class:`GridFunction` (zero outside
        its grid) and :class:`PlaneWave` get exact tail treatment; for other
        callables the integral runs to ``cutoff`` and ``f`` is frozen at its
        values there beyond it.
    triplet : LevyTriplet
    x : float or array_like
    eps : float, optional
        Core radius, default ``1e-4 * triplet.scale``.
    d2f : callable, optional
        Exact second derivative of ``f``.
    cutoff : float, optional
        Outer integration radius for generic callables
        (default ``1e4 * triplet.scale``).

    Raises
    ------
    SingularityError
        If the Levy density is too singular at the origin.
    """
    if triplet.singularity_order >= 2:
        raise SingularityError("Levy density singularity order must be < 2")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    scale = triplet.scale
    fx = np.asarray(f(x_arr), dtype=complex)

    if d2f is not None:
        d2 = np.asarray(d2f(x_arr), dtype=complex)
    elif hasattr(f, "second_derivative"):
        d2 = np.asarray(f.second_derivative(x_arr), dtype=complex)
    else:
        d2 = _finite_difference_d2(f, x_arr, 1e-3 * scale)

    out = 0.5 * triplet.gaussian**2 * d2
    for pos, weight in triplet.atoms:
        out = out + weight * (f(x_arr + pos) - fx)

    ell = triplet.levy_density
    if ell is not None:
        eps = 1e-4 * scale if eps is None else float(eps)
        core = adaptive_integrate(lambda y: y * y * ell(y), 0.0, eps, tol=0.0, rtol=1e-12)
        out = out + d2 * core

        if isinstance(f, GridFunction):
            outer = max(abs(f.lo), abs(f.hi)) + float(np.abs(x_arr).max())
        elif isinstance(f, PlaneWave):
            outer = 50.0 * scale
        else:
            outer = 1e4 * scale if cutoff is None else float(cutoff)

        def body(y):
            return (f(x_arr + y) + f(x_arr - y) - 2 * fx) * ell(y)

        decades = eps * 10.0 ** np.arange(1, 12)
        pts = list(decades)
        if isinstance(f, GridFunction):
            pts += list(np.abs(x_arr - f.lo)) + list(np.abs(f.hi - x_arr))
        out = out + _vec_integral(body, eps, outer, pts, tol=tol, what="generator integral")

        mass_tail = adaptive_integrate(ell, outer, np.inf, tol=1e-15)
        if isinstance(f, (GridFunction, PlaneWave)):
            out = out - 2 * fx * mass_tail
        else:
            # far field frozen at its values at the cutoff
            far = np.asarray(f(x_arr + outer) + f(x_arr - outer), dtype=complex)
            out = out + (far - 2 * fx) * mass_tail
        if isinstance(f, PlaneWave) and f.frequency != 0.0:
            cos_tail = _cos_tail(ell, outer, f.frequency)
            out = out + 2 * fx * cos_tail
        elif isinstance(f, PlaneWave):
            out = out + 2 * fx * mass_tail
    return out if np.ndim(x) else complex(out[0])


def _cos_tail(ell, start: float, k: float) -> float:
    r""":math:`\int_{start}^\infty \cos(ky)\ell(y)\,dy` by QAWF."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(lambda s: ell(s + start), 0.0, np.inf, weight="cos", wvar=abs(k),
                             full_output=1, limlst=200)
        res_s = integrate.quad(lambda s: ell(s + start), 0.0, np.inf, weight="sin", wvar=abs(k),
                               full_output=1, limlst=200)
    # cos(k(s+start)) = cos(ks)cos(k start) - sin(ks)sin(k start)
    return res[0] * math.cos(k * start) - res_s[0] * math.sin(abs(k) * start)
