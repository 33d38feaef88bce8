"""Ramification theory of rational maps on punctured spheres.

A point of the sphere is a complex number, an ExactComplex, or the
sentinel ``INF``.  A value is *omitted* on the punctured domain when its
whole fiber sits inside the puncture set; it is *totally ramified* (and
not omitted) when the fiber meets the domain and every fiber point inside
the domain is a branch point.  The order of such a value is the minimal
multiplicity over its interior fiber points, and the total weight adds
1 - 1/order over those values plus 1 per omitted value.

Everything decision-bearing runs exactly whenever the inputs are exact:
multiplicities come from squarefree decompositions and membership tests
are exact evaluations, never float comparisons.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    EC,
    EC_ONE,
    EC_ZERO,
    INF,
    ExactComplex,
    Poly,
    RationalMap,
    RootCluster,
    is_inf,
    poly_gcd,
    roots,
    squarefree_decomposition,
)
from .errors import Degenerate, NotOmitted, TolTooCoarse

__all__ = [
    "PuncturedSphere",
    "MoebiusMap",
    "RamificationProfile",
    "TotallyRamifiedReport",
    "AllocationPattern",
    "BoundCheck",
    "BoundEntry",
    "sphere_close",
    "cluster_matches",
    "cross_ratio",
    "canonical_phi",
    "mobius_apply",
    "multiplicity_at",
    "fiber",
    "ramification_profile",
    "tr_report",
    "check_bounds",
    "classify_allocation",
    "compose_mobius_post",
    "compose_mobius_pre",
]


def _is_exact_point(p) -> bool:
    return isinstance(p, (ExactComplex, int, Fraction)) or is_inf(p)


def sphere_close(v, w, tol: float = 1e-9) -> bool:
    """Identity test for sphere points; exact pairs compare exactly."""
    vi, wi = is_inf(v), is_inf(w)
    if vi or wi:
        if vi and wi:
            return True
        other = w if vi else v
        if _is_exact_point(other):
            return False
        return abs(complex(other)) > 1.0 / tol
    if _is_exact_point(v) and _is_exact_point(w):
        return ExactComplex.coerce(v) == ExactComplex.coerce(w)
    cv, cw = complex(v), complex(w)
    return abs(cv - cw) <= tol * (1.0 + abs(cv))


def cluster_matches(location, radius: float, q, tol: float = 1e-9) -> bool:
    """Does a root cluster (known only to within radius) sit at point q?"""
    if is_inf(q):
        return is_inf(location)
    if is_inf(location):
        return False
    eff = max(tol * (1.0 + abs(complex(q))), 3.0 * radius)
    return abs(complex(location) - complex(q)) <= eff


# ---------------------------------------------------------------------------
# domains and Moebius transformations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PuncturedSphere:
    """The sphere minus a finite set of pairwise distinct punctures."""

    punctures: tuple

    def __init__(self, punctures, tol: float = 1e-9):
        pts = tuple(punctures)
        for a, b in itertools.combinations(pts, 2):
            if sphere_close(a, b, 10 * tol):
                raise Degenerate(f"punctures {a!r} and {b!r} coincide (or are closer than 10*tol)")
        object.__setattr__(self, "punctures", pts)

    @property
    def n(self) -> int:
        return len(self.punctures)

    def contains_point(self, p, tol: float = 1e-9) -> bool:
        """True when p lies in the domain (is not a puncture)."""
        return not any(sphere_close(p, q, tol) for q in self.punctures)

    def __iter__(self):
        return iter(self.punctures)


@dataclass(frozen=True)
class MoebiusMap:
    """z -> (a z + b) / (c z + d) with ad - bc != 0."""

    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        zero = det.is_zero if isinstance(det, ExactComplex) else det == 0
        if zero:
            raise Degenerate("Moebius matrix is singular")

    @staticmethod
    def identity(exact=True) -> "MoebiusMap":
        one = EC_ONE if exact else 1.0 + 0j
        zero = EC_ZERO if exact else 0j
        return MoebiusMap(one, zero, zero, one)

    def __call__(self, z):
        return mobius_apply(self, z)

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """self after other: (self ∘ other)(z) = self(other(z))."""
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )


def _scalar_is_zero(x) -> bool:
    return x.is_zero if isinstance(x, ExactComplex) else complex(x) == 0


def mobius_apply(m: MoebiusMap, z):
    if is_inf(z):
        if _scalar_is_zero(m.c):
            return INF
        return m.a / m.c
    num = m.a * z + m.b
    den = m.c * z + m.d
    if _scalar_is_zero(den):
        if _scalar_is_zero(num):
            raise Degenerate("0/0 in Moebius evaluation")
        return INF
    return num / den


def canonical_phi(sigma, tau, b) -> MoebiusMap:
    """The Moebius map sending sigma -> 0, tau -> 1, b -> infinity."""
    pts = (sigma, tau, b)
    for x, y in itertools.combinations(pts, 2):
        if sphere_close(x, y):
            raise Degenerate("canonical_phi needs three distinct points")
    exact = all(_is_exact_point(p) for p in pts)
    one = EC_ONE if exact else 1.0 + 0j
    zero = EC_ZERO if exact else 0j

    def s(x):
        return ExactComplex.coerce(x) if exact and not is_inf(x) else (x if is_inf(x) else complex(x))

    sigma, tau, b = s(sigma), s(tau), s(b)
    if is_inf(sigma):
        # w -> (tau - b) / (w - b)
        return MoebiusMap(zero, tau - b, one, -b)
    if is_inf(tau):
        # w -> (w - sigma) / (w - b)
        return MoebiusMap(one, -sigma, one, -b)
    if is_inf(b):
        # w -> (w - sigma) / (tau - sigma)
        return MoebiusMap(one, -sigma, zero, tau - sigma)
    return MoebiusMap(tau - b, -sigma * (tau - b), tau - sigma, -b * (tau - sigma))


def cross_ratio(z1, z2, z3, z4):
    """[z1, z2; z3, z4] = (z1-z3)/(z1-z4) * (z2-z4)/(z2-z3), with inf limits."""
    pts = [z1, z2, z3, z4]
    distinct = []
    for p in pts:
        if not any(sphere_close(p, q) for q in distinct):
            distinct.append(p)
    if len(distinct) < 3:
        raise Degenerate("cross ratio needs at least three distinct points")
    exact = all(_is_exact_point(p) for p in pts)
    if not exact:
        pts = [p if is_inf(p) else complex(p) for p in pts]
    else:
        pts = [p if is_inf(p) else ExactComplex.coerce(p) for p in pts]
    z1, z2, z3, z4 = pts
    if is_inf(z1):
        return _ratio(z2 - z4, z2 - z3)
    if is_inf(z2):
        return _ratio(z1 - z3, z1 - z4)
    if is_inf(z3):
        return _ratio(z2 - z4, z1 - z4)
    if is_inf(z4):
        return _ratio(z1 - z3, z2 - z3)
    return _ratio((z1 - z3) * (z2 - z4), (z1 - z4) * (z2 - z3))


def _ratio(num, den):
    if _scalar_is_zero(den):
        return INF
    return num / den


def compose_mobius_post(m: MoebiusMap, g: RationalMap) -> RationalMap:
    """m ∘ g as a rational map."""
    exact = g.exact and all(_is_exact_point(x) for x in (m.a, m.b, m.c, m.d))
    work = g if exact else g.to_approx()

    def s(x):
        return ExactComplex.coerce(x) if exact else complex(x)

    num = work.num.scale(s(m.a)) + work.den.scale(s(m.b))
    den = work.num.scale(s(m.c)) + work.den.scale(s(m.d))
    return RationalMap(num, den)


def compose_mobius_pre(g: RationalMap, m: MoebiusMap) -> RationalMap:
    """g ∘ m as a rational map (homogenized to the map degree of g)."""
    exact = g.exact and all(_is_exact_point(x) for x in (m.a, m.b, m.c, m.d))
    work = g if exact else g.to_approx()

    def s(x):
        return ExactComplex.coerce(x) if exact else complex(x)

    lin_num = Poly([s(m.b), s(m.a)], exact=exact)
    lin_den = Poly([s(m.d), s(m.c)], exact=exact)
    deg = work.degree

    def substitute(p: Poly) -> Poly:
        out = Poly.zero(exact=exact)
        for k, c in enumerate(p.coeffs):
            out = out + (lin_num ** k) * (lin_den ** (deg - k)).scale(c)
        return out

    return RationalMap(substitute(work.num), substitute(work.den))


# ---------------------------------------------------------------------------
# multiplicities, fibers, branching
# ---------------------------------------------------------------------------

def _difference_poly(g: RationalMap, v, rel: float = 1e-11) -> Poly:
    """num - v*den, trimmed against cancellation in approx mode."""
    if g.exact and _is_exact_point(v) and not is_inf(v):
        return g.num - g.den.scale(ExactComplex.coerce(v))
    work = g.to_approx()
    cv = complex(v)
    p = work.num - work.den.scale(cv)
    scale = max(
        max((abs(complex(c)) for c in work.num.coeffs), default=0.0),
        abs(cv) * max((abs(complex(c)) for c in work.den.coeffs), default=0.0),
    )
    if p.is_zero:
        return p
    cs = list(p.coeffs)
    while cs and abs(cs[-1]) <= rel * scale:
        cs.pop()
    return Poly(cs, exact=False)


def multiplicity_at(g: RationalMap, p, tol: float = 1e-9) -> int:
    """Order of vanishing of g - g(p) at p (pole order when g(p) = inf)."""
    if g.is_constant:
        raise ValueError("multiplicity undefined for constant maps")
    if is_inf(p):
        return multiplicity_at(g.reciprocal_argument(), EC_ZERO if g.exact else 0j, tol)
    v = g(p)
    if is_inf(v):
        return g.den.order_at(p, tol)
    diff = _difference_poly(g, v)
    if diff.is_zero:
        raise ValueError("map is constant")
    return diff.order_at(p, tol)


def fiber(g: RationalMap, v, tol: float = 1e-9) -> list[tuple[object, int]]:
    """The full preimage of v with multiplicities (sums to the map degree)."""
    if g.is_constant:
        raise ValueError("fiber undefined for constant maps")
    d = g.degree
    if is_inf(v):
        pts = [(cl.location, cl.multiplicity) for cl in roots(g.den, _root_tol(tol))] if g.den.degree else []
        drop = d - g.den.degree
    else:
        diff = _difference_poly(g, v)
        if diff.is_zero:
            raise ValueError("map is constant at this value")
        pts = [(cl.location, cl.multiplicity) for cl in roots(diff, _root_tol(tol))] if diff.degree else []
        drop = d - (diff.degree or 0)
        if diff.degree is None:
            drop = d
    if drop > 0:
        pts.append((INF, drop))
    assert sum(m for _, m in pts) == d
    return pts


def _root_tol(tol: float) -> float:
    return min(1e-12, tol * 1e-3)


@dataclass(frozen=True)
class RamificationProfile:
    """Branch points of a rational map with the total branching order."""

    degree: int
    branch_points: tuple  # ((point, multiplicity e >= 2), ...)
    total_branching: int

    def euler_check(self) -> bool:
        """Riemann-Hurwitz on the sphere: total branching = 2 deg - 2."""
        return self.total_branching == 2 * self.degree - 2


def ramification_profile(g: RationalMap, tol: float = 1e-9) -> RamificationProfile:
    if g.is_constant:
        raise ValueError("constant maps have no ramification profile")
    w = g.wronskian()
    if not w.exact:
        w = w.trim(1e-11)
    branch = []
    total = 0
    if not w.is_zero and w.degree:
        for cl in roots(w, _root_tol(tol)):
            branch.append((cl.location, cl.multiplicity + 1))
            total += cl.multiplicity
    e_inf = multiplicity_at(g, INF, tol)
    if e_inf >= 2:
        branch.append((INF, e_inf))
        total += e_inf - 1
    return RamificationProfile(g.degree, tuple(branch), total)


# ---------------------------------------------------------------------------
# totally ramified values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TotallyRamifiedReport:
    """Omitted and totally ramified values of a map on a punctured sphere.

    ``ramified`` holds the non-omitted totally ramified values with their
    orders; ``total_weight`` is the exact rational
    n_omitted + sum(1 - 1/order).
    """

    degree: int
    punctures: tuple
    omitted: tuple
    ramified: tuple  # ((value, order), ...)
    total_branching: int
    tol: float

    @property
    def n_omitted(self) -> int:
        return len(self.omitted)

    @property
    def n_ramified(self) -> int:
        return len(self.ramified)

    @property
    def order_sum(self) -> int:
        return sum(order for _, order in self.ramified)

    @property
    def total_weight(self) -> Fraction:
        w = Fraction(self.n_omitted)
        for _, order in self.ramified:
            w += 1 - Fraction(1, order)
        return w

    def order_of(self, value, tol: float | None = None):
        """Order of a totally ramified value; inf for omitted values."""
        t = self.tol if tol is None else tol
        for v in self.omitted:
            if sphere_close(v, value, t):
                return math.inf
        for v, order in self.ramified:
            if sphere_close(v, value, t):
                return order
        raise KeyError(f"{value!r} is not a totally ramified value")


def _try_exact_value(g: RationalMap, v):
    """Snap a float candidate value to a small exact one, verified exactly.

    Verification: v is a critical value of g iff num - v*den shares a root
    with the Wronskian, an exact gcd computation.  Returns None when no
    verified exact representative is found.
    """
    if not g.exact or is_inf(v):
        return None
    cv = complex(v)
    re = Fraction(cv.real).limit_denominator(10 ** 6)
    im = Fraction(cv.imag).limit_denominator(10 ** 6)
    if abs(re - Fraction(cv.real)) > 1e-9 * (1 + abs(cv)) or abs(im - Fraction(cv.imag)) > 1e-9 * (1 + abs(cv)):
        return None
    cand = ExactComplex(re, im)
    diff = g.num - g.den.scale(cand)
    if diff.is_zero:
        return None
    w = g.wronskian()
    if w.is_zero or not w.degree or not diff.degree:
        # candidate can still be legitimate when the fiber is all at infinity
        return cand if not diff.degree else None
    return cand if poly_gcd(diff, w).degree else None


def _candidate_values(g: RationalMap, dom: PuncturedSphere, tol: float):
    """Critical values and puncture images, deduplicated (exact rep preferred)."""
    cands = [g(q) for q in dom]
    profile = ramification_profile(g, tol)
    for point, _ in profile.branch_points:
        v = g(point)
        if not is_inf(v) and abs(complex(v)) > 1.0 / tol:
            v = INF
        if not is_inf(v) and not _is_exact_point(v):
            snapped = _try_exact_value(g, v)
            if snapped is not None:
                v = snapped
        cands.append(v)
    reps: list = []
    for v in cands:
        matched = False
        for i, w in enumerate(reps):
            if sphere_close(v, w, tol):
                # prefer an exact representative when both name the same value
                if _is_exact_point(v) and not _is_exact_point(w):
                    reps[i] = v
                matched = True
                break
        if matched:
            continue
        for w in reps:
            if not (_is_exact_point(v) and _is_exact_point(w)):
                if not is_inf(v) and not is_inf(w):
                    if abs(complex(v) - complex(w)) < 10 * tol * (1.0 + abs(complex(v))):
                        raise TolTooCoarse(
                            f"candidate values {v!r} and {w!r} are separated by less than 10*tol"
                        )
        reps.append(v)
    return reps, profile


def _fiber_split(g: RationalMap, v, dom: PuncturedSphere, tol: float):
    """Split the fiber of v into puncture part and interior orders.

    Returns (interior_orders, puncture_mults, witness) where witness is an
    interior point location (or None) usable in error messages.
    """
    d = g.degree
    exact_path = g.exact and _is_exact_point(v) and all(_is_exact_point(q) for q in dom)
    if exact_path:
        if is_inf(v):
            p = g.den
            drop = d - g.den.degree
        else:
            p = g.num - g.den.scale(ExactComplex.coerce(v))
            drop = d - (p.degree if not p.is_zero else 0)
            if p.is_zero:
                raise ValueError("constant map")
        interior: list[int] = []
        witness = None
        finite_punctures = [ExactComplex.coerce(q) for q in dom if not is_inf(q)]
        if p.degree and p.degree > 0:
            for factor, mult in squarefree_decomposition(p):
                hits = sum(1 for q in finite_punctures if factor(q).is_zero)
                free = factor.degree - hits
                if free > 0:
                    interior.extend([mult] * free)
                    if witness is None:
                        for cl in roots(factor, _root_tol(tol)):
                            if all(not sphere_close(cl.location, q, tol) for q in dom):
                                witness = cl.location
                                break
        if drop > 0:
            inf_is_puncture = any(is_inf(q) for q in dom)
            if not inf_is_puncture:
                interior.append(drop)
                witness = witness if witness is not None else INF
        return interior, None, witness
    # approx path: cluster the fiber and match clusters to punctures,
    # widening the match window by each cluster's own radius
    if is_inf(v):
        diff = g.den
        drop = d - g.den.degree
    else:
        diff = _difference_poly(g, v)
        if diff.is_zero:
            raise ValueError("constant map")
        drop = d - (diff.degree or 0)
    interior = []
    witness = None
    if diff.degree:
        for cl in roots(diff, _root_tol(tol)):
            at_puncture = any(cluster_matches(cl.location, cl.radius, q, tol) for q in dom)
            if not at_puncture:
                interior.append(cl.multiplicity)
                if witness is None:
                    witness = cl.location
    if drop > 0 and not any(is_inf(q) for q in dom):
        interior.append(drop)
        witness = witness if witness is not None else INF
    return interior, None, witness


def tr_report(g: RationalMap, dom: PuncturedSphere, tol: float = 1e-9) -> TotallyRamifiedReport:
    """Classify every candidate value as omitted, totally ramified, or neither.

    Candidates are the critical values of g together with the images of the
    punctures; any value with a simple preimage inside the domain cannot be
    totally ramified, so the candidate set is exhaustive.
    """
    if g.is_constant:
        raise ValueError("tr_report needs a nonconstant map")
    reps, profile = _candidate_values(g, dom, tol)
    omitted = []
    ramified = []
    for v in reps:
        interior, _, _ = _fiber_split(g, v, dom, tol)
        if not interior:
            omitted.append(v)
        elif all(m >= 2 for m in interior):
            ramified.append((v, min(interior)))
    ramified.sort(key=lambda t: (t[1], _sort_key(t[0])))
    return TotallyRamifiedReport(
        degree=g.degree,
        punctures=tuple(dom),
        omitted=tuple(sorted(omitted, key=_sort_key)),
        ramified=tuple(ramified),
        total_branching=profile.total_branching,
        tol=tol,
    )


def _sort_key(v):
    if is_inf(v):
        return (1, 0.0, 0.0)
    c = complex(v)
    return (0, round(c.real, 9), round(c.imag, 9))


# ---------------------------------------------------------------------------
# the bound suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundEntry:
    name: str
    lhs: object
    rhs: object
    ok: bool
    slack: object
    sharp: bool


@dataclass(frozen=True)
class BoundCheck:
    entries: tuple

    @property
    def core_ok(self) -> bool:
        return all(e.ok for e in self.entries if not e.name.startswith("end_count"))

    @property
    def all_ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def entry(self, name: str) -> BoundEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)


def check_bounds(report: TotallyRamifiedReport, genus: int = 0, n_punctures: int | None = None) -> BoundCheck:
    """Evaluate the order-sum and total-weight inequalities for the report.

    Only genus 0 domains are produced by this package; the genus argument
    feeds the end-count estimate, which is evaluated only when there is at
    least one puncture (it concerns maps arising from complete ends).
    """
    d = report.degree
    if d < 2:
        raise ValueError("bound suite requires map degree >= 2")
    n = len(report.punctures) if n_punctures is None else n_punctures
    b_total = report.total_branching
    s = report.order_sum
    r = report.n_ramified
    d_omit = report.n_omitted
    nu = report.total_weight

    cap = (d * b_total) // (d - 1)
    entries = [
        _entry("order_sum_ge_twice_count", 2 * r, s, 2 * r <= s),
        _entry("order_sum_le_branching_cap", s, cap, s <= cap),
        _entry("order_sum_le_sphere_cap", s, 2 * d, s <= 2 * d),
        _entry("weight_le_quarter_cap", nu, d_omit + Fraction(cap, 4), nu <= d_omit + Fraction(cap, 4)),
        _entry("count_le_branch_budget", r, b_total // ((d + 1) // 2), r <= b_total // ((d + 1) // 2)),
    ]
    if n >= 1:
        bound = 2 + Fraction(2 * genus - 2 + n, d)
        entries.append(_entry("end_count_weight_estimate", nu, bound, nu <= bound))
    return BoundCheck(tuple(entries))


def _entry(name, lhs, rhs, ok):
    slack = rhs - lhs
    return BoundEntry(name=name, lhs=lhs, rhs=rhs, ok=ok, slack=slack, sharp=(slack == 0))


# ---------------------------------------------------------------------------
# end allocation patterns
# ---------------------------------------------------------------------------

_CASE_TABLE = {
    ((4,), (2, 1, 1)): "Case 1",
    ((3, 1), (3, 1)): "Case 2",
    ((3, 1), (2, 2)): "Case 3",
    ((2, 2), (2, 2)): "Case 4",
}


@dataclass(frozen=True)
class AllocationPattern:
    """Sorted end-multiplicity brackets of each listed omitted value."""

    brackets: tuple  # ((value, (m1 >= m2 >= ...)), ...)
    case: str

    def bracket_of(self, value, tol: float = 1e-9):
        for v, br in self.brackets:
            if sphere_close(v, value, tol):
                return br
        raise KeyError(f"no bracket recorded for {value!r}")


def classify_allocation(g: RationalMap, dom: PuncturedSphere, values, tol: float = 1e-9) -> AllocationPattern:
    """Bracket the end multiplicities of each value; all fibers must be at ends."""
    brackets = []
    for v in values:
        interior, _, witness = _fiber_split(g, v, dom, tol)
        if interior:
            raise NotOmitted(v, witness)
        counts = []
        for q in dom:
            m = _order_at_point(g, v, q, tol)
            if m > 0:
                counts.append(m)
        counts.sort(reverse=True)
        assert sum(counts) == g.degree
        brackets.append((v, tuple(counts)))
    case = "Unclassified"
    if len(brackets) == 2:
        key = (brackets[0][1], brackets[1][1])
        case = _CASE_TABLE.get(key) or _CASE_TABLE.get((key[1], key[0]), "Unclassified")
    return AllocationPattern(tuple(brackets), case)


def _order_at_point(g: RationalMap, v, q, tol: float) -> int:
    """Order of vanishing of g - v at q (0 when g(q) != v)."""
    gq = g(q)
    if not sphere_close(gq, v, tol):
        return 0
    if is_inf(q):
        return _order_at_point(g.reciprocal_argument(), v, EC_ZERO if g.exact else 0j, tol)
    if is_inf(v):
        return g.den.order_at(q, tol)
    diff = _difference_poly(g, v)
    return diff.order_at(q, tol)
