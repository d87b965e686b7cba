#!/usr/bin/env python3
"""Regenerate tests/oracles/oracle_values.hpp with mpmath at 40 digits.

    python3 tests/oracles/gen_oracles.py > tests/oracles/oracle_values.hpp
"""
import mpmath as mp

mp.mp.dps = 40


def I(j, x):
    return mp.besseli(abs(j), x)


def det_f(k, n, x):
    l = len(k)
    return mp.det(mp.matrix([[I(k[j] - n[i], x) for j in range(l)] for i in range(l)]))


def xi0_mu0(lam):
    # lambda * prod_{j>=1} (1 + lambda/j^2)
    s = mp.sqrt(mp.mpc(lam))
    return mp.re(lam * mp.sinh(mp.pi * s) / (mp.pi * s))


def xi1_mu0(lam):
    # lambda * prod_{j>=2} (j - a)(j - b)/(j (j-1)), a + b = 1, ab = lambda
    d = mp.sqrt(mp.mpc(1 - 4 * lam))
    a, b = (1 + d) / 2, (1 - d) / 2
    return mp.re(lam / (mp.gamma(1 + a) * mp.gamma(1 + b)))


def xi_product(l, lam, mu):
    # Partial products at J = 1000 * 2^k extrapolated in 1/J, then compared
    # against the next-lower order for an error estimate.
    lam, mu2 = mp.mpf(lam), mp.mpf(mu) ** 2

    def partial(J):
        q = mp.mpf(J) * (J - l)
        x = [1 + lam / q, mu2 / q, mp.mpf(1), mp.mpf(0)]
        for j in range(J - 1, l, -1):
            q = mp.mpf(j) * (j - l)
            a0, b0 = 1 + lam / q, mu2 / q
            x = [a0 * x[0] + b0 * x[2], a0 * x[1] + b0 * x[3], x[0], x[1]]
        return lam * x[0] + mu2 * x[2]

    Js = [1000 * 2 ** k for k in range(6)]
    vals = [partial(J) for J in Js]
    hs = [mp.mpf(1) / J for J in Js]
    # Neville table at h = 0
    T = list(vals)
    best = None
    prev = None
    for order in range(1, len(T)):
        for i in range(len(T) - 1, order - 1, -1):
            T[i] = T[i] + (T[i] - T[i - 1]) * hs[i] / (hs[i - order] - hs[i])
        prev, best = best, T[-1]
    return best, abs(best - prev)


def torus_monodromy_A0(lval, omega):
    K = mp.matrix([[-1j * lval, 1 / (2 * mp.mpf(omega))], [1 / (2 * mp.mpf(omega)), 0]])
    return mp.expm(2 * mp.pi * K)


def heun1_defect(l, lam, mu, N=None):
    # Backward recurrence of the first equation from a_{N+1} = 0, a_N = 1;
    # returns mu a_1 + lambda a_0 normalized by max |a_n|.
    lam, mu = mp.mpf(lam), mp.mpf(mu)
    if N is None:
        N = max(400, int(20 * l + 10 * mp.ceil(abs(lam) + mu * mu)))
    a_next, a = mp.mpf(0), mp.mpf(1)
    big = mp.mpf(1)
    for n in range(N, 0, -1):
        a_prev = -(mu * (n + 1) * a_next + (n * (n + l) + lam) * a) / (-mu * (n + l))
        a_next, a = a, a_prev
        big = max(big, abs(a))
    return (mu * a_next + lam * a) / big


def josephson_root(l, omega, A0):
    def f(A):
        mu = A / (2 * mp.mpf(omega))
        lam = 1 / (4 * mp.mpf(omega) ** 2) - mu ** 2
        return heun1_defect(l, lam, mu)
    return mp.findroot(f, (mp.mpf(A0) - 0.01, mp.mpf(A0) + 0.01), solver="secant")


def lit(v):
    return mp.nstr(v, 20)


out = []
out.append("#pragma once")
out.append("")
out.append("// Generated by tests/oracles/gen_oracles.py (mpmath, 40 digits). Do not edit.")
out.append("")
out.append("namespace oracle {")
out.append("")
out.append("struct BesselCase { int j; double x; double value; };")
out.append("inline constexpr BesselCase bessel[] = {")
for j, x in [(0, 1), (1, 2), (0, 2), (5, 1), (3, 5), (20, 5), (10, 10), (0, 50), (2, 0.5), (40, 20), (0, 0.001)]:
    out.append(f"    {{{j}, {x}, {lit(I(j, mp.mpf(x)))}}},")
out.append("};")
out.append("")
out.append("struct DetCase { int l; int k[4]; int n[4]; double x; double value; };")
out.append("inline constexpr DetCase det[] = {")
for k, n, x in [((1, 0), (1, 0), 2), ((3, 2), (1, 0), 1), ((2, 1, 0), (2, 1, 0), 1),
                ((3, 1, -2), (0, -1, -4), 5), ((3, 1, 0, -2), (2, 1, -1, -3), 2.5),
                ((2, 1), (1, 0), 2), ((6, 0), (-5, -6), 0.1)]:
    kk = ", ".join(map(str, k))
    nn = ", ".join(map(str, n))
    out.append(f"    {{{len(k)}, {{{kk}}}, {{{nn}}}, {x}, {lit(det_f(k, n, mp.mpf(x)))}}},")
out.append("};")
out.append("")
out.append("struct XiCase { int l; double lambda; double mu; double value; double err; };")
out.append("inline constexpr XiCase xi_closed[] = {")
for lam in [0.25, 1.0, -0.5, 3.0]:
    out.append(f"    {{0, {lam}, 0.0, {lit(xi0_mu0(lam))}, 0.0}},")
for lam in [0.5, 2.0, -1.5]:
    out.append(f"    {{1, {lam}, 0.0, {lit(xi1_mu0(lam))}, 0.0}},")
out.append("};")
out.append("inline constexpr XiCase xi_product[] = {")
for l, lam, mu in [(0, 0.25, 0.1), (0, -4.0, 2.5), (1, 1.0, 0.3), (2, -3.0, 1.5), (1, -10.0, 3.0)]:
    v, e = xi_product(l, lam, mu)
    out.append(f"    {{{l}, {lam}, {mu}, {lit(v)}, {mp.nstr(e, 3)}}},")
out.append("};")
out.append("")
out.append("struct LineRoot { int l; double omega; double A; };")
out.append("inline constexpr LineRoot line_roots[] = {")
for l, A0 in [(0, 2.05), (0, 4.09), (1, 2.98), (2, 3.85), (0, 17.122)]:
    out.append(f"    {{{l}, 0.7, {lit(josephson_root(l, 0.7, A0))}}},")
out.append("};")
out.append("")
out.append("struct MonodromyCase { double omega; double B; double re[4]; double im[4]; };")
out.append("inline constexpr MonodromyCase monodromy_A0[] = {")
for omega, B in [(0.7, 0.35), (0.7, 1.4), (0.5, 0.0)]:
    M = torus_monodromy_A0(mp.mpf(B) / omega, omega)
    re = ", ".join(lit(mp.re(M[i, j])) for i in range(2) for j in range(2))
    im = ", ".join(lit(mp.im(M[i, j])) for i in range(2) for j in range(2))
    out.append(f"    {{{omega}, {B}, {{{re}}}, {{{im}}}}},")
out.append("};")
out.append("")
out.append("} // namespace oracle")
print("\n".join(out))
