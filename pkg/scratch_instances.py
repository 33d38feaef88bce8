# End-to-end checks of the paper example instances before freezing the catalog.
import cmath
import math
from gaussmap_lab.algebra import *
from gaussmap_lab.sphere import PuncturedSphere, tr_report, check_bounds
from gaussmap_lab.weierstrass import WeierstrassData, OneForm, period_report, regularity_and_completeness, total_curvature
from scratch_fit import case1_data, case4_data, case2_data, p49_data, P, Z2P1


def full_check(tag, data, expect_D, expect_R, expect_nu):
    rep = period_report(data)
    tr = tr_report(data.g, data.dom)
    met = regularity_and_completeness(data)
    print(f"{tag}: deg={data.g.degree}  max_im={rep.max_im:.2e} period={'PASS' if rep.verdict else 'FAIL'}"
          f"  D={tr.n_omitted} R={tr.n_ramified} nu={tr.total_weight}"
          f"  regular={met.regular} complete={met.complete}  C={total_curvature(data)}pi")
    ok = (rep.verdict and tr.n_omitted == expect_D and tr.n_ramified == expect_R
          and tr.total_weight == expect_nu and met.regular and met.complete)
    print("   ->", "ALL OK" if ok else "** PROBLEM **")


from fractions import Fraction as Fr

s16 = cmath.exp(1j * math.pi / 6)

full_check("C1W1 (tau=0,b=-3s/13,s=e^{ipi/6})", case1_data(s16, 0, -3 * s16 / 13, 1.0, 1), 2, 1, Fr(5, 2))
full_check("C1W2 (tau=0,b=-5s/11,s=e^{ipi/6})", case1_data(s16, 0, -5 * s16 / 11, 1.0, 2), 2, 1, Fr(5, 2))
s5 = math.sqrt(13 / 2)
full_check("C1W5 (tau=0,b=-s/7,s=sqrt(13/2))", case1_data(s5, 0, -s5 / 7, 1.0, 5), 2, 1, Fr(5, 2))
s8 = cmath.exp(1j * math.pi / 3)
full_check("C1W8 (tau=0,b=-s/3,s=e^{ipi/3})", case1_data(s8, 0, -s8 / 3, 1.0, 8), 2, 1, Fr(5, 2))
full_check("C4W5 (tau=0,b=-s/3,s=e^{ipi/6})", case4_data(s16, 0, -s16 / 3, 1.0), 2, 1, Fr(5, 2))

s = 1j
b1 = -4 * math.sqrt(10) / 13 + 3j / 13
b2 = -b1.conjugate()
full_check("P49 (paper instance)", p49_data(s, b1, b2, 1.0, "g1"), 1, 2, Fr(5, 2))
d = p49_data(s, b1, b2, 1.0, "g1")
tr = tr_report(d.g, d.dom)
print("   P49 ramified orders:", [(v, o) for v, o in tr.ramified])

# KW instance a=0, b=2, sigma^2 = -3/5
def kw_data(a, b):
    s2 = (5 * a + 11 * b - 16) / (16 * a * b - 11 * a - 5 * b)
    assert s2 < 0, s2
    s = 1j * math.sqrt(-s2)
    num = P(4 * a * (b - 1), 0, 4 * a * (b - 1), 0, (b - a)).scale(s)
    den = P(4 * (b - 1), 0, 4 * (b - 1), 0, (b - a))
    g = RationalMap(num, den)
    h = RationalMap(den * den, P(0, 0, 1) * (Z2P1 ** 2))
    return WeierstrassData(g, OneForm(h), PuncturedSphere((0j, 1j, -1j, INF)))

full_check("KW (a=0,b=2)", kw_data(0, 2), 2, 1, Fr(5, 2))
full_check("KW (a=-1,b=2)", kw_data(-1, 2), 2, 1, Fr(5, 2))

# MS instance family
def ms_data(a, t):
    s2 = (t + 3) / (a * ((t - 1) * a + 4))
    assert s2 < 0
    s = 1j * math.sqrt(-s2)
    g = RationalMap(P(1 + a * (t - 1), 0, 1).scale(s), P(t, 0, 1))
    h = RationalMap(P(t, 0, 1) ** 2, Z2P1 ** 2)
    return WeierstrassData(g, OneForm(h), PuncturedSphere((1j, -1j, INF)))

full_check("MS (a=-1,t=0)", ms_data(-1, 0), 2, 1, Fr(5, 2))
full_check("MS (a=-2,t=0)", ms_data(-2, 0), 2, 1, Fr(5, 2))
full_check("MS (a=-1,t=2)", ms_data(-1, 2), 2, 1, Fr(5, 2))

# Case 2 never passes periods: generic params
d2 = case2_data(0.5 + 0.3j, 1.2 - 0.4j, -0.7 + 1.1j, 1.0)
rep2 = period_report(d2)
print("C2W1 generic: max_im =", f"{rep2.max_im:.3e}", "verdict:", rep2.verdict)
tr2 = tr_report(d2.g, d2.dom)
print("C2W1 tr: D,R,nu =", tr2.n_omitted, tr2.n_ramified, tr2.total_weight)
met2 = regularity_and_completeness(d2)
print("C2W1 metric:", met2.regular, met2.complete, met2.end_orders)
