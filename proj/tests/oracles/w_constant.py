"""Independent evaluation of W(f) for a polynomial map, by adaptive quadrature."""
import numpy as np
from scipy import integrate


def smooth_step(x):
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    p, q = np.exp(-1 / x), np.exp(-1 / (1 - x))
    return p / (p + q)


def w_constant(coeffs, lo=0.25, hi=0.75):
    f = np.polynomial.Polynomial(coeffs)
    df, d2f = f.deriv(), f.deriv(2)
    theta = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    z = np.exp(1j * theta)
    m1 = np.abs(f(z)).max()
    radii = np.linspace(1, 2, 100001)
    mods = np.array([np.abs(f(r * z[::16])).max() for r in radii[::100]])
    ok = radii[::100][mods <= (1 + m1) / 2]
    R = ok.max()
    from scipy.optimize import brentq
    if R < 2:
        R = brentq(lambda r: np.abs(f(r * z[::16])).max() - (1 + m1) / 2, R, min(2, R + 0.01))
    a, b = 1 + lo * (R - 1), 1 + hi * (R - 1)


    h = 1e-4

    def bump(rho):
        return 1 - smooth_step((rho - a) / (b - a))

    def H(rho, th):
        zz = rho * np.exp(1j * th)
        return np.log(abs(zz * df(zz) / f(zz)))

    def chi_c(rho, th):
        return bump(rho) * H(rho, th)

    def integrand(th, rho):
        # |grad chi|^2 + 2 chi Lap chi in polar coordinates via finite differences
        c = chi_c(rho, th)
        cr = (chi_c(rho + h, th) - chi_c(rho - h, th)) / (2 * h)
        ct = (chi_c(rho, th + h) - chi_c(rho, th - h)) / (2 * h)
        crr = (chi_c(rho + h, th) - 2 * c + chi_c(rho - h, th)) / h**2
        ctt = (chi_c(rho, th + h) - 2 * c + chi_c(rho, th - h)) / h**2
        lap = crr + cr / rho + ctt / rho**2
        grad2 = cr**2 + (ct / rho) ** 2
        return (4 * grad2 + 8 * c * lap) * rho / (96 * np.pi)

    S, _ = integrate.dblquad(integrand, 1, R, 0, 2 * np.pi, epsabs=1e-11, epsrel=1e-11)
    om = np.log(np.abs(z * df(z) / f(z)))
    modes = np.fft.fft(om) / len(om)
    k = np.fft.fftfreq(len(om), 1 / len(om))
    energy = np.sum(np.abs(k) * np.abs(modes) ** 2)
    return -np.log(abs(coeffs[1])) - energy - 12 * S


if __name__ == "__main__":
    print(repr(w_constant([0, 0.7, 0.03 + 0.01j, -0.02])))
