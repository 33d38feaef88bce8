"""Weierstrass data semantics: metric, periods, curvature, Gauss normal.

Data is a pair (g, omega) on a punctured sphere, omega = h dz.  The
induced metric is (1 + |g|^2)^2 |h|^2 |dz|^2, so the data is regular iff
the zeros of h inside the domain sit exactly on the poles of g with
doubled order.  The vector form

    alpha = 1/2 * (1 - g^2, i (1 + g^2), 2 g) * omega

is a null triple of meromorphic 1-forms; on a punctured sphere the period
condition for Re(integral of alpha) reduces to every residue of alpha at
every puncture being real.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import (
    EC,
    EC_I,
    EC_ONE,
    INF,
    ExactComplex,
    Poly,
    RationalMap,
    contour_integral,
    is_inf,
    residue,
    residue_at_infinity,
    roots,
)
from .errors import MetricSingular
from .sphere import PuncturedSphere, cluster_matches, sphere_close

__all__ = [
    "OneForm",
    "WeierstrassData",
    "AlphaForm",
    "alpha",
    "regularity_and_completeness",
    "period_report",
    "total_curvature",
    "pointwise_geometry",
    "MetricReport",
    "PeriodReport",
    "loop_integral",
]


@dataclass(frozen=True)
class OneForm:
    """A meromorphic 1-form h dz in the affine chart."""

    h: RationalMap

    def __post_init__(self):
        if self.h.is_zero:
            raise ValueError("one-form is identically zero")

    def order_at(self, p, tol: float = 1e-9) -> int:
        """Order of the form at p, using w = 1/z at infinity (dz = -dw/w^2)."""
        h = self.h
        if is_inf(p):
            return h.den.degree - h.num.degree - 2
        shift = p if h.exact else complex(p)
        return h.num.order_at(shift) - h.den.order_at(shift)


@dataclass(frozen=True)
class WeierstrassData:
    """A Gauss map and 1-form pair on a punctured sphere.

    The form must be holomorphic on the domain: every pole of h (including
    the chart pole at infinity) has to be a puncture.
    """

    g: RationalMap
    omega: OneForm
    dom: PuncturedSphere

    def __post_init__(self):
        if self.g.is_constant:
            raise ValueError("Gauss map must be nonconstant")
        h = self.omega.h
        for cl in h.poles(tol=1e-12):
            if not any(cluster_matches(cl.location, cl.radius, q) for q in self.dom):
                raise ValueError(f"one-form has a pole at interior point {cl.location!r}")
        if self.dom.contains_point(INF) and self.omega.order_at(INF) < 0:
            raise ValueError("one-form has a pole at interior point inf")

    @property
    def exact(self) -> bool:
        return self.g.exact and self.omega.h.exact


@dataclass(frozen=True)
class AlphaForm:
    """Coefficients (against dz) of the null vector 1-form."""

    a1: RationalMap
    a2: RationalMap
    a3: RationalMap

    def components(self):
        return (self.a1, self.a2, self.a3)

    def null_defect(self) -> float:
        """Max magnitude of a1^2 + a2^2 + a3^2 at probe points (0 if exact zero)."""
        s = self.a1 * self.a1 + self.a2 * self.a2 + self.a3 * self.a3
        if s.num.is_zero:
            return 0.0
        probes = [0.37 + 0.61j, -1.2 + 0.35j, 2.1 - 1.7j, 0.05 - 2.3j]
        worst = 0.0
        for z in probes:
            try:
                val = abs(complex(s.to_approx()(z)))
            except ZeroDivisionError:
                continue
            ref = max(abs(complex(self.a1.to_approx()(z))), 1.0) ** 2
            worst = max(worst, val / ref)
        return worst

    def pole_points(self, tol: float = 1e-9) -> list[complex]:
        """Finite pole locations over all three components (deduplicated)."""
        pts: list[complex] = []
        for comp in self.components():
            for cl in comp.poles(tol=1e-12):
                loc = complex(cl.location)
                if all(abs(loc - q) > tol * (1 + abs(loc)) for q in pts):
                    pts.append(loc)
        return pts


def _proportional_scalar(a: Poly, b: Poly, rtol: float = 1e-9):
    """c with a = c*b (numerically), determined at b's largest coefficient.

    Unlike long division this never amplifies through a small leading
    coefficient, which matters near the degenerate locus of a family.
    """
    if a.is_zero or b.is_zero or a.degree != b.degree:
        return None
    bc = [complex(x) for x in b.coeffs]
    ac = [complex(x) for x in a.coeffs]
    k = max(range(len(bc)), key=lambda i: abs(bc[i]))
    c = ac[k] / bc[k]
    scale = max(abs(x) for x in ac)
    if all(abs(x - c * y) <= rtol * scale for x, y in zip(ac, bc)):
        return c
    return None


def _try_div(a: Poly, b: Poly, rtol: float = 1e-8) -> Poly | None:
    """a / b when the division is (numerically) exact, else None."""
    if a.is_zero or b.is_zero or (a.degree or 0) < b.degree:
        return None
    q, r = a.divmod(b)
    if r.is_zero:
        return q
    if a.exact:
        return None
    top = max(abs(complex(c)) for c in a.coeffs)
    if max(abs(complex(c)) for c in r.coeffs) <= rtol * top:
        return q
    return None


def alpha(data: WeierstrassData) -> AlphaForm:
    """The null triple ((1-g^2)/2, i(1+g^2)/2, g) * h.

    Exact data cancels through the gcd in the rational-map constructor; in
    approx mode the family-structured cancellation h_num = c * den(g)^2 is
    detected by polynomial division so no spurious poles survive.
    """
    g, h = data.g, data.omega.h
    n, d = g.num, g.den
    hn, hd = h.num, h.den
    d2 = d * d
    half = EC(1, 0) / EC(2) if g.exact else 0.5
    ihalf = EC(0, 1) / EC(2) if g.exact else 0.5j
    if not g.exact:
        c = _proportional_scalar(hn, d2)
        if c is not None:
            a1 = RationalMap((d2 - n * n).scale(half * c), hd)
            a2 = RationalMap((d2 + n * n).scale(ihalf * c), hd)
            a3 = RationalMap((n * d).scale(c), hd)
            return AlphaForm(a1, a2, a3)
    q2 = _try_div(hn, d2)
    if q2 is not None:
        a1 = RationalMap(((d2 - n * n) * q2).scale(half), hd)
        a2 = RationalMap(((d2 + n * n) * q2).scale(ihalf), hd)
    else:
        a1 = RationalMap(((d2 - n * n) * hn).scale(half), d2 * hd)
        a2 = RationalMap(((d2 + n * n) * hn).scale(ihalf), d2 * hd)
    q1 = _try_div(hn, d)
    if q1 is not None:
        a3 = RationalMap(n * q1, hd)
    else:
        a3 = RationalMap(n * hn, d * hd)
    return AlphaForm(a1, a2, a3)


# ---------------------------------------------------------------------------
# metric
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricReport:
    regular: bool
    degenerate_points: tuple
    complete: bool
    end_orders: tuple  # ((puncture, k), ...)

    def end_order(self, p, tol: float = 1e-9) -> int:
        for q, k in self.end_orders:
            if sphere_close(p, q, tol):
                return k
        raise KeyError(f"{p!r} is not an end")


def _pole_order_of_g(g: RationalMap, p, tol: float = 1e-9) -> int:
    if is_inf(p):
        dn = 0 if g.num.is_zero else g.num.degree
        return max(0, dn - g.den.degree)
    if is_inf(g(p)):
        return g.den.order_at(p)
    return 0


def regularity_and_completeness(data: WeierstrassData, tol: float = 1e-9) -> MetricReport:
    """Check metric regularity on the domain and completeness at the ends.

    Regular: at every interior point, ord(h) = 2 * (pole order of g), which
    pins the zeros of h onto the poles of g with doubled order.  The end
    exponent k_p = ord_p(h) - 2 * m_p governs completeness: the end is
    complete iff k_p <= -1 (metric length to the puncture diverges).
    """
    g, h = data.g, data.omega.h
    dom = data.dom
    degenerate = []

    g_poles = list(roots(g.den, 1e-12)) if g.den.degree else []
    h_zeros = list(roots(h.num, 1e-12)) if (h.num.degree or 0) > 0 else []

    def same_point(c1, c2):
        return cluster_matches(c1.location, c1.radius + c2.radius, c2.location, tol)

    def at_puncture(c):
        return any(cluster_matches(c.location, c.radius, q, tol) for q in dom)

    for gp in g_poles:
        if at_puncture(gp):
            continue
        matched = [hz.multiplicity for hz in h_zeros if same_point(hz, gp)]
        if sum(matched) != 2 * gp.multiplicity:
            degenerate.append(gp.location)
    for hz in h_zeros:
        if at_puncture(hz):
            continue
        if not any(same_point(hz, gp) for gp in g_poles):
            degenerate.append(hz.location)
    if dom.contains_point(INF, tol):
        m_inf = _pole_order_of_g(g, INF)
        if data.omega.order_at(INF) != 2 * m_inf:
            degenerate.append(INF)

    ends = []
    for p in dom:
        k = data.omega.order_at(p) - 2 * _pole_order_of_g(g, p)
        ends.append((p, k))
    complete = all(k <= -1 for _, k in ends)
    return MetricReport(
        regular=not degenerate,
        degenerate_points=tuple(degenerate),
        complete=complete,
        end_orders=tuple(ends),
    )


# ---------------------------------------------------------------------------
# periods
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PeriodReport:
    """Residue triples of alpha at each puncture and the realness verdict."""

    entries: tuple  # ((puncture, (r1, r2, r3)), ...)
    max_im: float
    scale: float
    tol: float
    mode: str

    @property
    def verdict(self) -> bool:
        return self.max_im <= self.tol * (1.0 + self.scale)

    def residues_at(self, p, tol: float = 1e-9):
        for q, triple in self.entries:
            if sphere_close(p, q, tol):
                return triple
        raise KeyError(f"no entry for puncture {p!r}")


def period_report(data: WeierstrassData, mode: str = "exact", tol: float = 1e-9) -> PeriodReport:
    """Residues of all three alpha components at every puncture.

    mode "exact" uses Laurent-coefficient extraction (exact for exact
    data); mode "numeric" integrates small circles around each finite
    puncture, which is the independent cross-check of the same numbers.
    """
    form = alpha(data)
    entries = []
    for p in data.dom:
        triple = tuple(_residue_at(comp, p, mode) for comp in form.components())
        entries.append((p, triple))
    ims = [abs(complex(r).imag) for _, t in entries for r in t]
    mags = [abs(complex(r)) for _, t in entries for r in t]
    return PeriodReport(
        entries=tuple(entries),
        max_im=max(ims) if ims else 0.0,
        scale=max(mags) if mags else 0.0,
        tol=tol,
        mode=mode,
    )


def _residue_at(comp: RationalMap, p, mode: str):
    if is_inf(p):
        return residue_at_infinity(comp if mode == "exact" else comp.to_approx(), mode=mode)
    if mode == "exact" and comp.exact and isinstance(p, (ExactComplex, int)):
        return residue(comp, p, mode="exact")
    if mode == "numeric":
        return residue(comp, complex(p), mode="numeric")
    return residue(comp.to_approx(), complex(p), mode="exact")


def loop_integral(data: WeierstrassData, p, radius: float | None = None, nodes: int = 512):
    """Numeric circle integral of alpha around a finite puncture p.

    Returns the complex 3-vector; its real part is -2*pi*Im(Res) per
    component, so period-closed data gives a real part near zero.
    """
    form = alpha(data)
    center = complex(p)
    if radius is None:
        dists = [abs(center - complex(q)) for q in data.dom if not is_inf(q) and not sphere_close(q, p)]
        dists += [abs(center - z) for z in form.pole_points() if abs(center - z) > 1e-9]
        radius = min(1.0, min(dists) / 2.0) if dists else 0.5
    return tuple(contour_integral(c.to_approx(), center, radius, nodes) for c in form.components())


# ---------------------------------------------------------------------------
# curvature and the unit normal
# ---------------------------------------------------------------------------

def total_curvature(data: WeierstrassData) -> int:
    """Total curvature in units of pi: -4 times the degree of the Gauss map."""
    return -4 * data.g.degree


def pointwise_geometry(data: WeierstrassData, z) -> tuple[float, tuple[float, float, float]]:
    """Gaussian curvature and unit normal at an interior point.

    K = -4 |g'(z)/h(z)|^2 / (1 + |g(z)|^2)^4; the normal is the inverse
    stereographic image of g(z).
    """
    if not data.dom.contains_point(z):
        raise MetricSingular("point is a puncture")
    g = data.g.to_approx()
    h = data.omega.h.to_approx()
    zc = complex(z)
    gz = g(zc)
    if is_inf(gz) or abs(complex(gz)) > 1e12:
        raise MetricSingular("Gauss map has a pole here; use a rotated chart")
    hz = h(zc)
    if is_inf(hz):
        raise MetricSingular("one-form is singular here")
    hz = complex(hz)
    if hz == 0:
        raise MetricSingular("metric degenerates here")
    gz = complex(gz)
    gprime = complex(g.derivative()(zc))
    k = -4.0 * abs(gprime / hz) ** 2 / (1.0 + abs(gz) ** 2) ** 4
    denom = 1.0 + abs(gz) ** 2
    normal = (2.0 * gz.real / denom, 2.0 * gz.imag / denom, (abs(gz) ** 2 - 1.0) / denom)
    return k, normal
