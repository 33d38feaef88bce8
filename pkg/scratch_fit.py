# Recover residue closed forms as exact polynomials in the family parameters.
import itertools
import math
from fractions import Fraction
import numpy as np
from gaussmap_lab.algebra import *
from gaussmap_lab.sphere import PuncturedSphere
from gaussmap_lab.weierstrass import WeierstrassData, OneForm, period_report

rng = np.random.default_rng(123)


def P(*cs):
    return Poly(list(cs), exact=False)


Z2P1 = P(1, 0, 1)
Q = P(1, 0, 2)


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
    zm1 = P(-1, 0, 1) ** 2
    num = zm1.scale(s * (b - t)) + P(0, 0, 4 * b * (s - t))
    den = zm1.scale(b - t) + P(0, 0, 4 * (s - t))
    g = RationalMap(num, den)
    h = RationalMap((den * den).scale(th), P(0, 0, 1) * (Z2P1 ** 3))
    return WeierstrassData(g, OneForm(h), PuncturedSphere((INF, 1j, -1j, 0j)))


def case2_data(s, t, b, th):
    Pp = P(23, 10j, 1) ** 2
    lin = P(-1j, 1).scale(512j)
    num = Pp.scale(s * (b - t)) + lin.scale(b * (t - s))
    den = Pp.scale(b - t) + lin.scale(t - s)
    g = RationalMap(num, den)
    h = RationalMap((den * den).scale(th), (P(17j, 1) ** 2) * (Z2P1 ** 2))
    return WeierstrassData(g, OneForm(h), PuncturedSphere((INF, 1j, -1j, -17j)))


def p49_data(s, b1, b2, th, which="g1"):
    A = P(-1, 1) ** 4
    B = P(1, 1) ** 4
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


MONOS = [(i, j, k) for i in range(5) for j in range(5) for k in range(5) if i + j + k <= 4]


def fit(build, puncture, comp, nsamp=90, names=("s", "t", "b")):
    rows, vals = [], []
    samples = []
    while len(samples) < nsamp:
        s, t, b = (complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(3))
        try:
            d = build(s, t, b, 1.0)
        except Exception:
            continue
        rep = period_report(d)
        tripled = {repr(p): tr for p, tr in rep.entries}
        v = complex(tripled[puncture][comp])
        rows.append([s**i * t**j * b**k for (i, j, k) in MONOS])
        vals.append(v)
        samples.append((s, t, b))
    A = np.array(rows)
    y = np.array(vals)
    sol, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = np.max(np.abs(A @ sol - y)) / max(1.0, np.max(np.abs(y)))
    terms = []
    for (i, j, k), c in zip(MONOS, sol):
        re = Fraction(c.real).limit_denominator(256)
        im = Fraction(c.imag).limit_denominator(256)
        if abs(complex(float(re), float(im)) - c) > 1e-6 * max(1, abs(c)):
            terms.append(((i, j, k), None, c))
        elif re or im:
            terms.append(((i, j, k), (re, im), None))
    txt = []
    for (i, j, k), frac, raw in terms:
        mono = "".join(n + (f"^{e}" if e > 1 else "") for n, e in zip(names, (i, j, k)) if e)
        if frac is not None:
            re, im = frac
            coef = f"({re}{'+' if im >= 0 else ''}{im}i)"
        else:
            coef = f"[{raw:.6f}]"
        txt.append(f"{coef}{mono or '1'}")
    return " + ".join(txt), resid


for variant in (2, 5, 8):
    print(f"=== Case 1 variant {variant} ===")
    for comp, punc in itertools.product(range(3), ["1j", "0j"]):
        f, r = fit(lambda s, t, b, th, v=variant: case1_data(s, t, b, th, v), punc, comp)
        print(f"  a{comp+1}@{punc}: {f}   (fit resid {r:.1e})")

print("=== Case 2 variant 1 ===")
for comp in range(3):
    f, r = fit(case2_data, "(-0-1j)", comp)
    print(f"  a{comp+1}@-i: {f}   (fit resid {r:.1e})")

print("=== P49 (omega from true denominator g1) ===")
for comp, punc in itertools.product(range(3), ["1j", "0j"]):
    f, r = fit(lambda s, b1, b2, th: p49_data(s, b1, b2, th, "g1"), punc, comp, names=("s", "p", "q"))
    print(f"  a{comp+1}@{punc}: {f}   (fit resid {r:.1e})")
