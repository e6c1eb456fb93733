"""High-precision reference values for the control functions and cost model.

Evaluated with mpmath at 50 significant digits, independently of the Rust
implementation. The printed values are frozen into tests/formulas.rs.
"""
from mpmath import mp, mpf, sqrt, log

mp.dps = 50


def deviation(s, T, gamma):
    return sqrt(log(2 * mpf(T) ** (1 + gamma)) / (2 * s))


def radius(i, alpha):
    return (mpf(2) ** i) ** (-alpha)


def eps(i, L, alpha):
    return L * radius(i, alpha)


def d1(i, s, L, lx, lk, alpha, gamma):
    rho = radius(i, alpha)
    return eps(i, L, alpha) + 2 * deviation(s, 2 ** i, gamma) + 2 * lx * rho + 2 * lk * rho


def d2(i, s, L, lx, lk, alpha, gamma):
    rho = radius(i, alpha)
    return 2 * eps(i, L, alpha) - (2 * deviation(s, 2 ** i, gamma) + 2 * lx * rho + 2 * lk * rho)


def prior(i, rnd, mean, lx, lk, alpha, gamma):
    rho = radius(i, alpha)
    T = mpf(2) ** i
    slack = 2 * lx * rho + 2 * lk * rho + 2 * deviation(rnd - 1, T, gamma)
    return mean - slack, mean + slack, T ** (-(1 + gamma))


def cost(a, b, delta, c, eta, b1, b2):
    return c * ((b - a) ** b1 + eta * delta ** b2)


half = mpf(1) / 2
sixth = mpf(1) / 6
vals = {
    "D(1,1,0.5)": deviation(1, 1, half),
    "D(1,64,0.5)": deviation(1, 64, half),
    "D(100,64,0.5)": deviation(100, 64, half),
    "D(400,4096,0.5)": deviation(400, 4096, half),
    "D(64,256,0.5)": deviation(64, 256, half),
    "D1(6,100)": d1(6, 100, 5, half, half, sixth, half),
    "D1(0,1,L=0)": d1(0, 1, 5, 0, 0, sixth, half),
    "D2(6,100)": d2(6, 100, 5, half, half, sixth, half),
}
a, b, delta = prior(12, 401, mpf("0.6"), half, half, sixth, half)
vals["prior_a"] = a
vals["prior_b"] = b
vals["prior_delta"] = delta
vals["cost(0.2,0.7,0.01;b1=1,b2=2)"] = cost(mpf("0.2"), mpf("0.7"), mpf("0.01"), 1, 1, 1, 2)
vals["cost(prior;b1=2,b2=1)"] = cost(a, b, delta, 1, 1, 2, 1)
vals["hoeffding 2exp(-2 D(64)^2 64)"] = 2 * mp.e ** (-2 * deviation(64, 256, half) ** 2 * 64)
vals["256^-1.5"] = mpf(256) ** (-mpf("1.5"))

for k, v in vals.items():
    print(f"{k:40s} {mp.nstr(v, 20)}")
