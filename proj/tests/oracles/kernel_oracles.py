"""Independent high-precision reference values frozen into the C++ tests.

Uses mpmath oscillatory quadrature directly on the defining integrals; nothing
here shares code with the library.
"""
import mpmath as mp

mp.mp.dps = 30


def stable_density_1d(alpha, r):
    # s = u^(1/alpha) makes the damping a plain exp(-u); plain quadosc on the
    # original variable loses ~1e-6 for small alpha
    a = mp.mpf(alpha)
    f = lambda u: mp.cos(r * u ** (1 / a)) * mp.exp(-u) * u ** (1 / a - 1) / a
    if r == 0:
        return mp.gamma(1 + 1 / a) / mp.pi
    if a >= 1:  # the substitution would add an endpoint singularity
        # exp(-s^a) is below 1e-40 past s = 100^(1/a); integrate a finite range
        g = lambda s: mp.cos(r * s) * mp.exp(-s ** a)
        return mp.quad(g, mp.linspace(0, 100 ** (1 / a), 200)) / mp.pi
    return mp.quadosc(f, [0, mp.inf], zeros=lambda k: ((k - mp.mpf(1) / 2) * mp.pi / r) ** a) / mp.pi


def stable_density_2d(alpha, r):
    f = lambda s: s * mp.besselj(0, r * s) * mp.exp(-s ** alpha)
    if r == 0:
        return mp.quad(lambda s: s * mp.exp(-s ** alpha), [0, 1, 10, mp.inf]) / (2 * mp.pi)
    return mp.quadosc(f, [0, mp.inf], zeros=lambda n: mp.besseljzero(0, n) / r) / (2 * mp.pi)


def norm_integral(alpha, n):
    # integral over R^n of (1 - cos xi_1)/|xi|^(n+alpha), radially reduced
    sphere = {1: 2, 2: 2 * mp.pi, 3: 4 * mp.pi}[n]
    avg = {1: mp.cos, 2: lambda p: mp.besselj(0, p), 3: lambda p: mp.sin(p) / p}[n]
    # exact termwise integration of the Taylor series of 1 - avg(p) on [0, 1]
    coef = {1: lambda k: (-1) ** (k + 1) / mp.factorial(2 * k),
            2: lambda k: (-1) ** (k + 1) / (4 ** k * mp.factorial(k) ** 2),
            3: lambda k: (-1) ** (k + 1) / mp.factorial(2 * k + 1)}[n]
    head = mp.nsum(lambda k: coef(int(k)) / (2 * k - alpha), [1, mp.inf])
    tail = 1 / alpha - mp.quadosc(lambda p: avg(p) * p ** (-1 - alpha), [1, mp.inf], period=2 * mp.pi)
    return sphere * (head + tail)


if __name__ == "__main__":
    print("P(1.5,0)", stable_density_1d(1.5, 0), mp.gamma(mp.mpf(5) / 3) / mp.pi)
    for r in [0.0, 0.1, 0.5, 1.0, 2.5, 5.0, 10.0, 40.0]:
        print("P(0.5,%g)" % r, mp.nstr(stable_density_1d(0.5, r), 20))
    for r in [0.0, 0.7, 3.0, 12.0]:
        print("P(1.5,%g)" % r, mp.nstr(stable_density_1d(1.5, r), 20))
    for r in [0.0, 1.0, 4.0]:
        print("P2(0.8,%g)" % r, mp.nstr(stable_density_2d(0.8, r), 20))
    for a, n in [(1, 1), (0.1, 1), (1.9, 1), (1, 2), (0.5, 3)]:
        I = norm_integral(mp.mpf(a), n)
        closed = 2 ** mp.mpf(a) * mp.gamma((n + mp.mpf(a)) / 2) / (mp.pi ** (mp.mpf(n) / 2) * abs(mp.gamma(-mp.mpf(a) / 2)))
        print("C(%d,%g)" % (n, a), mp.nstr(1 / I, 20), "closed", mp.nstr(closed, 20))
