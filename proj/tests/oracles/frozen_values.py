"""Independent high-precision values frozen into the C++ tests.

Uses only mpmath and fractions: Jacobi polynomials through mpmath.jacobi on
[-1, 1], norms by adaptive quadrature, Hahn polynomials by exact 3F2 sums,
and the chamber normalization by the Selberg integral.
"""
from fractions import Fraction
from math import factorial
import mpmath as mp

mp.mp.dps = 40


def hahn_q(k, x, a, b, M):
    s = Fraction(0)
    for j in range(0, min(k, x) + 1):
        num = poch(-k, j) * poch(-x, j) * poch(k + a + b + 1, j)
        den = poch(-M, j) * poch(a + 1, j) * factorial(j)
        s += Fraction(num) / Fraction(den)
    return s


def poch(a, k):
    r = Fraction(1)
    for i in range(k):
        r *= a + i
    return r


def jac(n, alpha, beta, x):
    # Orthogonal on (0,1) against x^beta (1-x)^alpha: t = 2x - 1 maps the weight
    # (1-t)^alpha (1+t)^beta onto it.
    return mp.jacobi(n, alpha, beta, 2 * x - 1)


def jfun(n, alpha, beta, x):
    w = lambda u: u ** beta * (1 - u) ** alpha
    norm = mp.quad(lambda u: jac(n, alpha, beta, u) ** 2 * w(u), [0, 0.5, 1])
    return jac(n, alpha, beta, x) * mp.sqrt(w(x) / norm)


def heat(alpha, beta, K, t, x, y, terms=40):
    return mp.fsum(mp.e ** (-t * K(i)) * jfun(i, alpha, beta, x) * jfun(i, alpha, beta, y) for i in range(terms))


def selberg_B(p, alpha, beta):
    # int_{[0,1]^p} prod x^beta (1-x)^alpha |Delta|^2 dx, then the chamber is 1/p! of it.
    s = mp.mpf(1)
    for j in range(p):
        s *= mp.gamma(beta + 1 + j) * mp.gamma(alpha + 1 + j) * mp.gamma(j + 2) / (
            mp.gamma(beta + alpha + 2 + (p + j - 1)))
    return 1 / (s / mp.factorial(p))


if __name__ == "__main__":
    print("hahn Q_2(3; a=1, b=1/2, M=5) =", hahn_q(2, 3, Fraction(1), Fraction(1, 2), 5))
    print("hahn Q_4(1; a=2, b=1, M=6) =", hahn_q(4, 1, Fraction(2), Fraction(1), 6))
    print("B p=2 z'=3 w'=1 =", mp.nstr(selberg_B(2, 1, 1), 30))
    print("B p=3 z'=4.5 w'=0.5 =", mp.nstr(selberg_B(3, 1.5, 0.5), 30))
    # p=1, z'=2, w'=0.5: alpha = 1, beta = 0.5, K(i) = i (i + 2.5)
    K1 = lambda i: i * (i + 2.5)
    print("J^0.5(0.3,0.6) p=1 z'=2 w'=0.5 =", mp.nstr(heat(1, 0.5, K1, 0.5, 0.3, 0.6), 30))
    print("J^0.1(0.25,0.7) p=1 z'=2 w'=0.5 =", mp.nstr(heat(1, 0.5, K1, 0.1, 0.25, 0.7, 80), 30))
    # p=2, z'=3, w'=1: alpha = 1, beta = 1, K(i) = i (i + 3)
    K2 = lambda i: i * (i + 3)
    a, b = 1, 1
    x, y = (0.2, 0.55), (0.35, 0.8)
    t = 0.4
    Jm = mp.matrix(2, 2)
    for i in range(2):
        for j in range(2):
            Jm[i, j] = heat(a, b, K2, t, x[i], y[j])
    B = selberg_B(2, a, b)
    rho = lambda X: B * (X[1] - X[0]) ** 2 * mp.fprod(u ** b * (1 - u) ** a for u in X)
    Ktot = K2(0) + K2(1)
    P = mp.sqrt(rho(y) / rho(x)) * mp.e ** (t * Ktot) * mp.det(Jm)
    print("P^0.4(Y|X) p=2 z'=3 w'=1 X=(0.2,0.55) Y=(0.35,0.8) =", mp.nstr(P, 30))
    # same X, Y at t = 3: the direct determinant cancels there in double precision
    t = 3
    for i in range(2):
        for j in range(2):
            Jm[i, j] = heat(a, b, K2, t, x[i], y[j])
    P3 = mp.sqrt(rho(y) / rho(x)) * mp.e ** (t * Ktot) * mp.det(Jm)
    print("P^3(Y|X) p=2 z'=3 w'=1 X=(0.2,0.55) Y=(0.35,0.8) =", mp.nstr(P3, 30))
    rho1 = mp.fsum(jfun(i, a, b, 0.37) ** 2 for i in range(2))
    print("rho_1(0.37) p=2 z'=3 w'=1 =", mp.nstr(rho1, 30))
    # two-time correlation det at (0.3, 0) and (0.6, 0.3)
    xx, yy, tau = 0.3, 0.6, 0.3
    kd = lambda u, v: mp.fsum(jfun(i, a, b, u) * jfun(i, a, b, v) for i in range(2))
    fwd = -mp.fsum(mp.e ** (-tau * K2(i)) * jfun(i, a, b, xx) * jfun(i, a, b, yy) for i in range(2, 40))
    bwd = mp.fsum(mp.e ** (tau * K2(i)) * jfun(i, a, b, yy) * jfun(i, a, b, xx) for i in range(2))
    print("rho_2(0.3,0; 0.6,0.3) p=2 z'=3 w'=1 =", mp.nstr(kd(xx, xx) * kd(yy, yy) - fwd * bwd, 30))
