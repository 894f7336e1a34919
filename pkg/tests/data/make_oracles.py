"""Regenerate ``oracles.json`` with mpmath at 30 digits.

Every value here comes from mpmath special functions or from direct
quadrature of a spectral integral, never from levypacket itself.  Run once;
the JSON file is committed and the tests only read it.
"""
import json
from pathlib import Path

import mpmath as mp

mp.mp.dps = 30


def c(z):
    z = mp.mpc(z)
    return [float(z.real), float(z.imag)]


def inv_cos(f, x):
    """int_0^inf f(u) cos(ux) du, oscillation-aware for x > 0."""
    if x == 0:
        return mp.quad(f, [0, 1, 5, 20, 80, mp.inf])
    return mp.quadosc(lambda u: f(u) * mp.cos(u * x), [0, mp.inf], omega=x)


def main():
    out = {}
    out["bessel_k_real"] = [
        [nu, x, float(mp.besselk(nu, x))]
        for nu in (0, 0.3, 1, 1.5, 2, 2.7, 4, 5)
        for x in (0.01, 0.5, 1, 3, 10, 40)
    ]
    pairs = [(0.5 + 1j, 1.0), (1.5 + 2j, 0.7), (0.5 + 20j, 3.0), (1, 1 + 2j), (1, mp.sqrt((1 + 4j) ** 2 + 4)),
             (0.5 + 4j, 0.05), (2.5 + 1j, 15.0), (1, 0.3 + 2.5j), (0.5 + 8j, 20.0)]
    out["bessel_k_complex"] = [[c(mu), c(z), c(mp.besselk(mu, z))] for mu, z in pairs]
    out["gamma_complex"] = [[c(z), c(mp.gamma(z))] for z in (0.5 + 1j, 1.5 + 4j, -2.3 + 0.1j, 10 + 10j, 0.1, 3 - 7j)]
    out["si_ci"] = [[x, float(mp.si(x) - mp.pi / 2), float(mp.ci(x))] for x in (0.1, 1, 3.9, 4.1, 10, 100)]
    out["zeta_prime_neg_even"] = [float(mp.zeta(-2 * j, derivative=1)) for j in range(1, 7)]

    # Cauchy packet: psi(x,t) = (2/sqrt(2pi)) int_0^inf sqrt(2)/pi K0(u) e^{-i t u} cos(ux) du
    rows = []
    for t in (0.5, 2.0):
        for x in (0.0, 0.5, 2.0, 7.0):
            re = mp.quad(lambda u: mp.sqrt(2) / mp.pi * mp.besselk(0, u) * mp.cos(t * u) * mp.cos(u * x),
                         [0, 1, 5, 20, 80, mp.inf])
            im = mp.quad(lambda u: -mp.sqrt(2) / mp.pi * mp.besselk(0, u) * mp.sin(t * u) * mp.cos(u * x),
                         [0, 1, 5, 20, 80, mp.inf])
            rows.append([x, t, c(2 / mp.sqrt(2 * mp.pi) * mp.mpc(re, im))])
    out["cauchy_cauchy_wf"] = rows

    # VG packet, noise VG(nu_n, a=1), initial VG(nu) spectrum C (1+u^2)^-nu
    rows = []
    for nu, omega in ((2.0, 2.0), (1.0, 1.0)):
        C = mp.sqrt(mp.gamma(2 * nu) / (mp.sqrt(mp.pi) * mp.gamma(2 * nu - 0.5)))
        for t in (1.0, 3.0):
            for x in (0.0, 0.5, 3.0):
                f = lambda u: C * (1 + u * u) ** (-nu - 1j * omega * t)
                val = inv_cos(f, x)
                rows.append([nu, omega, x, t, c(2 / mp.sqrt(2 * mp.pi) * val)])
    out["vg_wf"] = rows

    # relativistic packet through mpmath's complex K1
    rows = []
    for t in (0.5, 4.0):
        for x in (0.0, 1.0, 5.0):
            mu = mp.mpc(1, t)
            s = mp.sqrt(mu * mu + x * x)
            val = mu * mp.exp(1j * t) * mp.besselk(1, s) / (mp.sqrt(mp.pi * mp.besselk(1, 2)) * s)
            rows.append([x, t, c(val)])
    out["rqm_wf"] = rows

    # Wiener-Poisson densities by CHF inversion, D = 1/2, omega = 1, b = 1, c = a = 1
    rows = []
    for kind in ("normal_comp", "dirac_comp"):
        for t in (0.5, 2.0):
            for x in (0.0, 1.0, 3.0):
                if kind == "normal_comp":
                    chf = lambda u: mp.exp(-(0.5 + 0.5 * t) * u * u + t * (mp.exp(-u * u / 2) - 1))
                else:
                    chf = lambda u: mp.exp(-(0.5 + 0.5 * t) * u * u + t * (mp.cos(u) - 1))
                val = inv_cos(chf, x) / mp.pi
                rows.append([kind, x, t, float(val)])
    out["poisson_pdf"] = rows

    # densities of the catalog by CHF inversion
    rows = []
    for x in (0.0, 1.0, 5.0):
        val = inv_cos(lambda u: mp.exp(-u ** 1.5 / 1.5), x) / mp.pi
        rows.append(["stable(alpha=1.5, a=1)", x, float(val)])
    for x in (0.0, 0.7, 4.0):
        val = inv_cos(lambda u: (1 + u * u) ** -2.5, x) / mp.pi
        rows.append(["vg(nu=2.5, a=1)", x, float(val)])
    for nu in (0.5, 2.0):
        for x in (0.0, 1.0, 6.0):
            r = mp.sqrt(nu * nu + x * x)
            rows.append([f"relativistic(nu={nu:g}, a=1)", x, float(nu * mp.exp(nu) * mp.besselk(1, r) / (mp.pi * r))])
    out["law_pdf"] = rows

    # Student(5) CHF by forward transform of its density
    rows = []
    norm = mp.gamma(3) / (mp.sqrt(mp.pi) * mp.gamma(2.5))
    for u in (0.5, 2.0):
        val = 2 * mp.quadosc(lambda y: norm * (1 + y * y) ** -3 * mp.cos(u * y), [0, mp.inf], omega=u)
        rows.append([u, float(val)])
    out["student5_chf"] = rows

    # Student(3) Levy density: y^2 l(y) = (1/pi) int_0^inf cos(uy)/(1+u)^2 du
    rows = []
    for y in (0.1, 1.0, 10.0, 100.0):
        val = mp.quadosc(lambda u: mp.cos(u * y) / (1 + u) ** 2, [0, mp.inf], omega=y) / (mp.pi * y * y)
        rows.append([y, float(val)])
    out["student3_levy"] = rows

    Path(__file__).with_name("oracles.json").write_text(json.dumps(out, indent=1) + "\n")


if __name__ == "__main__":
    main()
