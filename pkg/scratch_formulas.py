# Scratch verification of closed-form residues vs contour/series oracle.
import math
import numpy as np
from gaussmap_lab.algebra import *
from gaussmap_lab.sphere import PuncturedSphere
from gaussmap_lab.weierstrass import WeierstrassData, OneForm, alpha, period_report

rng = np.random.default_rng(7)


def rc():
    return complex(rng.uniform(-2, 2), rng.uniform(-2, 2))


def P(*cs):
    return Poly(list(cs), exact=False)


Z = P(0, 1)
Z2P1 = P(1, 0, 1)          # z^2+1
Q = P(1, 0, 2)             # 2z^2+1


def case1_data(s, t, b, th, variant):
    q2 = Q * Q
    num = q2.scale(s * (b - t)) + P(b * (t - s))
    den = q2.scale(b - t) + P(t - s)
    g = RationalMap(num, den)
    wd = {1: P(0, 0, 1) * (Z2P1 ** 2),
          2: P(0, 0, 0, 0, 1) * (Z2P1 ** 2),
          5: P(0, 0, 1) * (Z2P1 ** 3),
          8: P(0, 0, 0, 1) * (Z2P1 ** 2)}[variant]
    h = RationalMap((den * den).scale(th), wd)
    return WeierstrassData(g, OneForm(h), PuncturedSphere((INF, 1j, -1j, 0j)))


def case4_data(s, t, b, th):
    zm1 = P(-1, 0, 1) ** 2                      # (z^2-1)^2
    num = zm1.scale(s * (b - t)) + P(0, 0, 4 * b * (s - t))
    den = zm1.scale(b - t) + P(0, 0, 4 * (s - t))
    g = RationalMap(num, den)
    h = RationalMap((den * den).scale(th), P(0, 0, 1) * (Z2P1 ** 3))
    return WeierstrassData(g, OneForm(h), PuncturedSphere((INF, 1j, -1j, 0j)))


def p49_data(s, b1, b2, th, which="g1"):
    A = P(-1, 1) ** 4                            # (z-1)^4
    B = P(1, 1) ** 4                             # (z+1)^4
    num = A.scale(b2 * (b1 - s)) + B.scale(b1 * (s - b2))
    den = A.scale(b1 - s) + B.scale(s - b2)
    g = RationalMap(num, den)
    if which == "g1":
        wnum = den * den
    else:
        alt = A.scale(b2 - s) + B.scale(b1 - s)
        wnum = alt * alt
    h = RationalMap(wnum.scale(th), P(0, 0, 1) * (Z2P1 ** 3))
    return WeierstrassData(g, OneForm(h), PuncturedSphere((INF, 1j, -1j, 0j)))


def case2_data(s, t, b, th):
    Pp = P(23, 10j, 1) ** 2
    lin = P(-1j, 1).scale(512j)
    num = Pp.scale(s * (b - t)) + lin.scale(b * (t - s))
    den = Pp.scale(b - t) + lin.scale(t - s)
    g = RationalMap(num, den)
    h = RationalMap((den * den).scale(th), P(0, 17j, 1) ** 2 * (Z2P1 ** 2))
    return WeierstrassData(g, OneForm(h), PuncturedSphere((INF, 1j, -1j, -17j)))


def res_triples(data):
    rep = period_report(data)
    return {repr(p): tuple(complex(r) for r in t) for p, t in rep.entries}


def cmp(tag, got, want, tol=1e-8):
    scale = 1 + max(abs(want), abs(got))
    ok = abs(got - want) <= tol * scale
    print(f"  {tag:28s} got {got:+.6e}  want {want:+.6e}  {'OK' if ok else '** MISMATCH **'}")
    return ok


print("=== Case 1 variant 1 ===")
for _ in range(3):
    s, t, b, th = rc(), rc(), rc(), rc()
    d = case1_data(s, t, b, th, 1)
    R = res_triples(d)
    r1 = (1j / 8) * th * (b - s) * (b * (16 * s * t - 3 * t**2 - 13) - s * (13 * t**2 + 3) + 16 * t)
    r2 = (1 / 8) * th * (b - s) * (b * (16 * s * t - 3 * t**2 + 13) - s * (13 * t**2 - 3) - 16 * t)
    r3 = (-1j / 4) * th * (b - s) * (b * (8 * s + 5 * t) - t * (5 * s + 8 * t))
    cmp("a1@i", R["1j"][0], r1); cmp("a2@i", R["1j"][1], r2); cmp("a3@i", R["1j"][2], r3)
    cmp("a1@-i", R["(-0-1j)"][0], -r1); cmp("a1@0", R["0j"][0], 0)

print("=== Case 1 variant 2 ===")
for _ in range(2):
    s, t, b, th = rc(), rc(), rc(), rc()
    d = case1_data(s, t, b, th, 2)
    R = res_triples(d)
    r1 = (1j / 8) * th * (b - s) * (b * (16 * s * t - 5 * t**2 - 11) - s * (11 * t**2 + 5) + 16 * t)
    r2 = (1 / 8) * th * (b - s) * (b * (16 * s * t - 5 * t**2 + 11) - s * (11 * t**2 - 5) - 16 * t)
    r3 = (-1j / 4) * th * (b - s) * (b * (8 * s + 3 * t) - t * (3 * s + 8 * t))
    cmp("a1@i", R["1j"][0], r1); cmp("a2@i", R["1j"][1], r2); cmp("a3@i", R["1j"][2], r3)
    cmp("a2@-i", R["(-0-1j)"][1], -r2); cmp("a3@0", R["0j"][2], 0)

print("=== Case 1 variant 5 ===")
for _ in range(3):
    s, t, b, th = rc(), rc(), rc(), rc()
    d = case1_data(s, t, b, th, 5)
    R = res_triples(d)
    x1 = b**2 * (128 * s**2 - 32 * s * t + 15 * t**2 - 111) - 2 * b * (112 * s**2 * t - s * t**2 + s - 112 * t) + 3 * s**2 * (37 * t**2 - 5) + 32 * t * (s - 4 * t)
    x2 = b**2 * (128 * s**2 - 32 * s * t + 15 * t**2 + 111) - 2 * b * (112 * s**2 * t - s * t**2 - s + 112 * t) + 3 * s**2 * (37 * t**2 + 5) - 32 * t * (s + 4 * t)
    x3 = b**2 * (112 * s - t) + 2 * b * (8 * s**2 - 127 * s * t + 8 * t**2) - s * t * (s - 112 * t)
    cmp("a1@i", R["1j"][0], (-1j / 32) * th * x1)
    cmp("a2@i", R["1j"][1], (-1 / 32) * th * x2)
    cmp("a3@i", R["1j"][2], (1j / 16) * th * x3)
    cmp("a1@-i", R["(-0-1j)"][0], -(-1j / 32) * th * x1)
    cmp("a2@0", R["0j"][1], 0)

print("=== Case 1 variant 8 ===")
for _ in range(2):
    s, t, b, th = rc(), rc(), rc(), rc()
    d = case1_data(s, t, b, th, 8)
    R = res_triples(d)
    r1 = 0.5 * th * (b - s) * (b * (4 * s * t - t**2 - 3) - s * (3 * t**2 + 1) + 4 * t)
    r2 = (-1j / 2) * th * (b - s) * (b * (4 * s * t - t**2 + 3) - s * (3 * t**2 - 1) - 4 * t)
    r3 = -th * (b - s) * (b * (2 * s + t) - t * (s + 2 * t))
    cmp("a1@i", R["1j"][0], r1); cmp("a2@i", R["1j"][1], r2); cmp("a3@i", R["1j"][2], r3)
    cmp("a1@-i(sym)", R["(-0-1j)"][0], r1)
    cmp("a1@0(=-r1/2)", R["0j"][0], -r1 / 2)
    cmp("a3@0(=-r3/2)", R["0j"][2], -r3 / 2)

print("=== Case 4 variant 5 ===")
for _ in range(2):
    s, t, b, th = rc(), rc(), rc(), rc()
    d = case4_data(s, t, b, th)
    R = res_triples(d)
    r1 = (-1j / 2) * th * (b - s) * (b * (4 * s * t - t**2 - 3) - s * (3 * t**2 + 1) + 4 * t)
    r2 = (-1 / 2) * th * (b - s) * (b * (4 * s * t - t**2 + 3) - s * (3 * t**2 - 1) - 4 * t)
    r3 = 1j * th * (b - s) * (b * (2 * s + t) - t * (s + 2 * t))
    cmp("a1@i", R["1j"][0], r1); cmp("a2@i", R["1j"][1], r2); cmp("a3@i", R["1j"][2], r3)
    cmp("a2@-i", R["(-0-1j)"][1], -r2); cmp("a1@0", R["0j"][0], 0)

print("=== Case 2 variant 1 (infeasible family) ===")
for _ in range(2):
    s, t, b, th = rc(), rc(), rc(), rc()
    d = case2_data(s, t, b, th)
    R = res_triples(d)
    U = th * (b - s) ** 2
    cmp("a1@-i", R["(-0-1j)"][0], -64j * U * (t**2 - 1))
    cmp("a2@-i", R["(-0-1j)"][1], -64 * U * (t**2 + 1))
    cmp("a3@-i", R["(-0-1j)"][2], 128j * U * t)

print("=== P49 variant 5: which omega numerator? ===")
for which in ("g1", "alt"):
    s, b1, b2, th = rc(), rc(), rc(), rc()
    d = p49_data(s, b1, b2, th, which)
    R = res_triples(d)
    r1 = (1j / 2) * th * (32 * s * (b2 - s) + 13 * b2**2 * (s**2 - 1) + b1**2 * (32 * b2**2 - 32 * b2 * s + 13 * (s**2 - 1)) + b1 * (32 * s - 32 * b2**2 * s + 6 * b2 * (s**2 - 1)))
    r2 = (-1 / 2) * th * (32 * s * (b2 - s) - 13 * b2**2 * (s**2 + 1) - b1**2 * (32 * b2**2 - 32 * b2 * s + 13 * (s**2 + 1)) + b1 * (32 * s + 32 * b2**2 * s - 6 * b2 * (s**2 + 1)))
    r3 = -1j * th * (b1**2 * (16 * b2 - 3 * s) - b2 * s * (3 * b2 - 16 * s) + 2 * b1 * (8 * b2**2 - 29 * b2 * s + 8 * s**2))
    r10 = 4 * th * (b1 - b2) * (b1 * (2 * b2 * s - s**2 - 1) - b2 * (s**2 + 1) + 2 * s)
    r20 = -4j * th * (b1 - b2) * (b1 * (2 * b2 * s - s**2 + 1) - b2 * (s**2 - 1) - 2 * s)
    r30 = -8 * th * (b1 - b2) * (b1 * b2 - s**2)
    print(f"--- omega numerator = {which}")
    ok = True
    ok &= cmp("a1@i", R["1j"][0], r1)
    ok &= cmp("a2@i", R["1j"][1], r2)
    ok &= cmp("a3@i", R["1j"][2], r3)
    ok &= cmp("a1@-i", R["(-0-1j)"][0], -r1)
    ok &= cmp("a2@-i", R["(-0-1j)"][1], r2)
    ok &= cmp("a1@0", R["0j"][0], r10)
    ok &= cmp("a2@0", R["0j"][1], r20)
    ok &= cmp("a3@0", R["0j"][2], r30)
    print("  all match:", ok)

print("=== P49 example instance period check for both omegas ===")
s = 1j
b1 = -4 * math.sqrt(10) / 13 + 3j / 13
b2 = -b1.conjugate()
for which in ("g1", "alt"):
    d = p49_data(s, b1, b2, 1.0, which)
    rep = period_report(d)
    print(f"  {which}: max_im = {rep.max_im:.3e}  verdict {rep.verdict}")
