"""Catalog of the known Weierstrass-data families on punctured spheres.

Each entry builds concrete data from named complex parameters, knows its
validity predicate, its expected invariants (omitted count, ramified
count and orders, total weight, total curvature), and, for the
degree-4 families, the closed-form residue triples of the null form at
every end together with the real/imaginary period constraints those
residues generate.

Families with ids starting ``canon-`` are bare degree-4 maps used for
structural verification (omitted set, end allocation, cross-ratio
necessity); they carry no 1-form.

The id ``t47-c2-w1`` is buildable data whose period system is provably
unsatisfiable; it exists so the obstruction can be exercised end to end.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import EC, INF, ExactComplex, Poly, RationalMap, is_inf
from .errors import InvalidParams, StructuralViolation, Unsupported
from .sphere import (
    AllocationPattern,
    PuncturedSphere,
    classify_allocation,
    cross_ratio,
    sphere_close,
    tr_report,
)
from .weierstrass import OneForm, WeierstrassData

__all__ = [
    "FAMILY_IDS",
    "CANONICAL_IDS",
    "Expected",
    "FamilyInstance",
    "build",
    "default_params",
    "validate_params",
    "period_constraints",
    "residue_formulas",
    "obstruction_triple",
    "ObstructionReport",
    "verify_canonical",
    "CanonicalReport",
    "VARIANT_EQUIVALENCES",
    "check_variant_equivalence",
    "kw_params_as_c1w2",
]


# ---------------------------------------------------------------------------
# instances
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Expected:
    """Invariants a valid instance of the family must reproduce."""

    n_omitted: int
    n_ramified: int
    ramified_orders: tuple
    total_weight: Fraction
    curvature_pi: int
    period_solvable: bool = True


@dataclass(frozen=True)
class FamilyInstance:
    family: str
    params: dict
    gauss_map: RationalMap
    dom: PuncturedSphere
    omega: OneForm | None
    expected: Expected

    @property
    def data(self) -> WeierstrassData:
        if self.omega is None:
            raise Unsupported(f"family {self.family!r} is a bare Gauss map with no 1-form")
        return WeierstrassData(self.gauss_map, self.omega, self.dom)


def _P(*cs) -> Poly:
    return Poly(list(cs), exact=False)


_Z2P1 = _P(1, 0, 1)        # z^2 + 1
_QUAD = _P(1, 0, 2)        # 2z^2 + 1


def _real(x, name) -> float:
    x = complex(x)
    if abs(x.imag) > 1e-12 * (1 + abs(x)):
        raise InvalidParams(f"{name} must be real, got {x}")
    return x.real


def _distinct(params: dict, names, eps=1e-12):
    vals = [complex(params[n]) for n in names]
    for a in range(len(vals)):
        for b in range(a + 1, len(vals)):
            if abs(vals[a] - vals[b]) <= eps * (1 + abs(vals[a])):
                raise InvalidParams(f"{names[a]} and {names[b]} must be distinct")


def _nonzero(x, name):
    if abs(complex(x)) <= 1e-14:
        raise InvalidParams(f"{name} must be nonzero")


# the four-end domain shared by every degree-4 family here; exact points
# so the canonical maps run on fully exact paths
_DOM4 = PuncturedSphere((INF, EC(0, 1), EC(0, -1), EC(0)))
_DOM4_C2 = PuncturedSphere((INF, EC(0, 1), EC(0, -1), EC(0, -17)))
_DOM3 = PuncturedSphere((EC(0, 1), EC(0, -1), INF))

# (z - t)^a (z - i)^b (z + i)^c exponents of the ten 1-form shapes, t = 0
_OMEGA_SHAPE = {
    1: (2, 2, 2), 2: (4, 2, 2), 3: (2, 4, 2), 4: (2, 2, 4), 5: (2, 3, 3),
    6: (3, 3, 2), 7: (3, 2, 3), 8: (3, 2, 2), 9: (2, 3, 2), 10: (2, 2, 3),
}


def _omega_den(variant: int) -> Poly:
    a, b, c = _OMEGA_SHAPE[variant]
    return (_P(0, 1) ** a) * (_P(-1j, 1) ** b) * (_P(1j, 1) ** c)


def _case1_maps(sigma, tau, b, theta, variant):
    q2 = _QUAD * _QUAD
    num = q2.scale(sigma * (b - tau)) + _P(b * (tau - sigma))
    den = q2.scale(b - tau) + _P(tau - sigma)
    g = RationalMap(num, den)
    h = RationalMap((den * den).scale(theta), _omega_den(variant))
    return g, OneForm(h)


def _case4_maps(sigma, tau, b, theta, variant=5):
    zsq = _P(-1, 0, 1) ** 2
    num = zsq.scale(sigma * (b - tau)) + _P(0, 0, 4 * b * (sigma - tau))
    den = zsq.scale(b - tau) + _P(0, 0, 4 * (sigma - tau))
    g = RationalMap(num, den)
    h = RationalMap((den * den).scale(theta), _omega_den(variant))
    return g, OneForm(h)


def _case2_maps(sigma, tau, b, theta):
    psq = _P(23, 10j, 1) ** 2
    lin = _P(-1j, 1).scale(512j)
    num = psq.scale(sigma * (b - tau)) + lin.scale(b * (tau - sigma))
    den = psq.scale(b - tau) + lin.scale(tau - sigma)
    g = RationalMap(num, den)
    h = RationalMap((den * den).scale(theta), (_P(17j, 1) ** 2) * (_Z2P1 ** 2))
    return g, OneForm(h)


def _p49_maps(sigma, b1, b2, theta):
    a4 = _P(-1, 1) ** 4
    b4 = _P(1, 1) ** 4
    num = a4.scale(b2 * (b1 - sigma)) + b4.scale(b1 * (sigma - b2))
    den = a4.scale(b1 - sigma) + b4.scale(sigma - b2)
    g = RationalMap(num, den)
    # regularity forces the 1-form numerator to be the square of the true
    # denominator of g (its zeros are exactly the four simple poles of g)
    h = RationalMap((den * den).scale(theta), _omega_den(5))
    return g, OneForm(h)


def _ms_maps(a, t, sigma):
    g = RationalMap(_P(1 + a * (t - 1), 0, 1).scale(sigma), _P(t, 0, 1))
    h = RationalMap(_P(t, 0, 1) ** 2, _Z2P1 ** 2)
    return g, OneForm(h)


def _kw_maps(a, b, sigma):
    num = _P(4 * a * (b - 1), 0, 4 * a * (b - 1), 0, b - a).scale(sigma)
    den = _P(4 * (b - 1), 0, 4 * (b - 1), 0, b - a)
    g = RationalMap(num, den)
    h = RationalMap(den * den, (_P(0, 1) ** 2) * (_Z2P1 ** 2))
    return g, OneForm(h)


def _canon_g111():
    return RationalMap(Poly([1]), Poly([1, 0, 2]) ** 2)


def _canon_g211():
    return RationalMap(Poly([EC(0, 512)]) * Poly([EC(0, -1), 1]), Poly([23, EC(0, 10), 1]) ** 2)


def _canon_g42():
    return RationalMap(Poly([0, 0, -4]), Poly([-1, 0, 1]) ** 2)


def _canon_gd1():
    return RationalMap(Poly([-1, 1]) ** 4, Poly([1, 1]) ** 4)


_EXPECT_25_8PI = Expected(2, 1, (2,), Fraction(5, 2), -8)
_EXPECT_25_16PI = Expected(2, 1, (2,), Fraction(5, 2), -16)
_EXPECT_P49 = Expected(1, 2, (4, 4), Fraction(5, 2), -16)


def _validate_ms(p):
    a = _real(p["a"], "a")
    t = _real(p["t"], "t")
    if a in (0.0,):
        raise InvalidParams("a must be nonzero")
    if abs(a - 1) < 1e-12 or abs(t - 1) < 1e-12:
        raise InvalidParams("a and t must avoid 1")
    den = a * ((t - 1) * a + 4)
    if abs(den) < 1e-12:
        raise InvalidParams("a((t-1)a+4) must be nonzero")
    rhs = (t + 3) / den
    if not rhs < 0:
        raise InvalidParams(f"(t+3)/(a((t-1)a+4)) = {rhs} must be negative")
    sigma = p.get("sigma")
    if sigma is None:
        sigma = 1j * math.sqrt(-rhs)
        p = dict(p, sigma=sigma)
    if abs(complex(sigma) ** 2 - rhs) > 1e-9 * (1 + abs(rhs)):
        raise InvalidParams("sigma^2 does not match the closing constraint")
    return p


def _validate_kw(p):
    a = _real(p["a"], "a")
    b = _real(p["b"], "b")
    if abs(a - 1) < 1e-12 or abs(b - 1) < 1e-12:
        raise InvalidParams("a and b must avoid 1")
    if abs(a - b) < 1e-12:
        raise InvalidParams("a and b must be distinct")
    den = 16 * a * b - 11 * a - 5 * b
    if abs(den) < 1e-12:
        raise InvalidParams("16ab-11a-5b must be nonzero")
    rhs = (5 * a + 11 * b - 16) / den
    if not rhs < 0:
        raise InvalidParams(f"(5a+11b-16)/(16ab-11a-5b) = {rhs} must be negative")
    sigma = p.get("sigma")
    if sigma is None:
        sigma = 1j * math.sqrt(-rhs)
        p = dict(p, sigma=sigma)
    sigma = complex(sigma)
    if abs(sigma.real) > 1e-12 * (1 + abs(sigma)):
        raise InvalidParams("sigma must be purely imaginary")
    if abs(sigma ** 2 - rhs) > 1e-9 * (1 + abs(rhs)):
        raise InvalidParams("sigma^2 does not match the closing constraint")
    return p


def _validate_t47(p):
    _distinct(p, ("sigma", "tau", "b"))
    _nonzero(p["theta"], "theta")
    return p


def _validate_p49(p):
    _distinct(p, ("sigma", "b1", "b2"))
    _nonzero(p["theta"], "theta")
    return p


_SQ10 = math.sqrt(10.0)
_B1_DEFAULT = complex(-4 * _SQ10 / 13, 3 / 13)

# irrational example constants are double precision (relative error below
# 1e-15); every verdict taken at them is a numeric verdict, never exact
_DEFAULTS = {
    "ms": {"a": -1.0, "t": 0.0, "sigma": 1j * math.sqrt(3 / 5)},
    "kw": {"a": 0.0, "b": 2.0, "sigma": 1j * math.sqrt(3 / 5)},
    "t47-c1-w1": {"sigma": cmath.exp(1j * math.pi / 6), "tau": 0j, "b": -3 * cmath.exp(1j * math.pi / 6) / 13, "theta": 1.0 + 0j},
    "t47-c1-w2": {"sigma": cmath.exp(1j * math.pi / 6), "tau": 0j, "b": -5 * cmath.exp(1j * math.pi / 6) / 11, "theta": 1.0 + 0j},
    "t47-c1-w5": {"sigma": complex(math.sqrt(13 / 2)), "tau": 0j, "b": complex(-math.sqrt(13 / 2) / 7), "theta": 1.0 + 0j},
    "t47-c1-w8": {"sigma": cmath.exp(1j * math.pi / 3), "tau": 0j, "b": -cmath.exp(1j * math.pi / 3) / 3, "theta": 1.0 + 0j},
    "t47-c2-w1": {"sigma": 0.5 + 0.3j, "tau": 1.2 - 0.4j, "b": -0.7 + 1.1j, "theta": 1.0 + 0j},
    "t47-c4-w5": {"sigma": cmath.exp(1j * math.pi / 6), "tau": 0j, "b": -cmath.exp(1j * math.pi / 6) / 3, "theta": 1.0 + 0j},
    "p49-w5": {"sigma": 1j, "b1": _B1_DEFAULT, "b2": -_B1_DEFAULT.conjugate(), "theta": 1.0 + 0j},
    "canon-g111": {},
    "canon-g211": {},
    "canon-g42": {},
    "canon-gd1": {},
}

_T47_PARAM_NAMES = ("sigma", "tau", "b", "theta")

_REGISTRY = {
    "ms": dict(names=("a", "t", "sigma"), validate=_validate_ms,
               build=lambda p: (_ms_maps(p["a"].real if isinstance(p["a"], complex) else p["a"],
                                         p["t"].real if isinstance(p["t"], complex) else p["t"],
                                         complex(p["sigma"])), _DOM3),
               expected=_EXPECT_25_8PI),
    "kw": dict(names=("a", "b", "sigma"), validate=_validate_kw,
               build=lambda p: (_kw_maps(complex(p["a"]).real, complex(p["b"]).real, complex(p["sigma"])), _DOM4),
               expected=_EXPECT_25_16PI),
    "t47-c1-w1": dict(names=_T47_PARAM_NAMES, validate=_validate_t47,
                      build=lambda p: (_case1_maps(p["sigma"], p["tau"], p["b"], p["theta"], 1), _DOM4),
                      expected=_EXPECT_25_16PI),
    "t47-c1-w2": dict(names=_T47_PARAM_NAMES, validate=_validate_t47,
                      build=lambda p: (_case1_maps(p["sigma"], p["tau"], p["b"], p["theta"], 2), _DOM4),
                      expected=_EXPECT_25_16PI),
    "t47-c1-w5": dict(names=_T47_PARAM_NAMES, validate=_validate_t47,
                      build=lambda p: (_case1_maps(p["sigma"], p["tau"], p["b"], p["theta"], 5), _DOM4),
                      expected=_EXPECT_25_16PI),
    "t47-c1-w8": dict(names=_T47_PARAM_NAMES, validate=_validate_t47,
                      build=lambda p: (_case1_maps(p["sigma"], p["tau"], p["b"], p["theta"], 8), _DOM4),
                      expected=_EXPECT_25_16PI),
    "t47-c2-w1": dict(names=_T47_PARAM_NAMES, validate=_validate_t47,
                      build=lambda p: (_case2_maps(p["sigma"], p["tau"], p["b"], p["theta"]), _DOM4_C2),
                      expected=Expected(2, 1, (2,), Fraction(5, 2), -16, period_solvable=False)),
    "t47-c4-w5": dict(names=_T47_PARAM_NAMES, validate=_validate_t47,
                      build=lambda p: (_case4_maps(p["sigma"], p["tau"], p["b"], p["theta"]), _DOM4),
                      expected=_EXPECT_25_16PI),
    "p49-w5": dict(names=("sigma", "b1", "b2", "theta"), validate=_validate_p49,
                   build=lambda p: (_p49_maps(p["sigma"], p["b1"], p["b2"], p["theta"]), _DOM4),
                   expected=_EXPECT_P49),
    "canon-g111": dict(names=(), validate=lambda p: p,
                       build=lambda p: ((_canon_g111(), None), _DOM4),
                       expected=_EXPECT_25_16PI),
    "canon-g211": dict(names=(), validate=lambda p: p,
                       build=lambda p: ((_canon_g211(), None), _DOM4_C2),
                       expected=_EXPECT_25_16PI),
    "canon-g42": dict(names=(), validate=lambda p: p,
                      build=lambda p: ((_canon_g42(), None), _DOM4),
                      expected=_EXPECT_25_16PI),
    "canon-gd1": dict(names=(), validate=lambda p: p,
                      build=lambda p: ((_canon_gd1(), None), _DOM4),
                      expected=_EXPECT_P49),
}

FAMILY_IDS = tuple(_REGISTRY)
CANONICAL_IDS = ("canon-g111", "canon-g211", "canon-g42", "canon-gd1")


def default_params(family: str) -> dict:
    if family not in _REGISTRY:
        raise Unsupported(f"unknown family {family!r}")
    return dict(_DEFAULTS[family])


def validate_params(family: str, params: dict) -> dict:
    """Check the family predicate; returns params (with derived entries filled)."""
    if family not in _REGISTRY:
        raise Unsupported(f"unknown family {family!r}")
    entry = _REGISTRY[family]
    p = dict(params)
    missing = [n for n in entry["names"] if n not in p and not (family == "ms" and n == "sigma") and not (family == "kw" and n == "sigma")]
    if missing:
        raise InvalidParams(f"missing parameters for {family!r}: {missing}")
    extra = [n for n in p if n not in entry["names"]]
    if extra:
        raise InvalidParams(f"unknown parameters for {family!r}: {extra}")
    return entry["validate"](p)


def build(family: str, params: dict | None = None) -> FamilyInstance:
    """Instantiate a family; omitted params default to the catalog instance."""
    if family not in _REGISTRY:
        raise Unsupported(f"unknown family {family!r}")
    entry = _REGISTRY[family]
    p = default_params(family)
    if params:
        p.update(params)
    p = validate_params(family, p)
    (g, omega), dom = entry["build"](p)
    return FamilyInstance(
        family=family,
        params=p,
        gauss_map=g,
        dom=dom,
        omega=omega,
        expected=entry["expected"],
    )


# ---------------------------------------------------------------------------
# closed-form residues and period constraints
# ---------------------------------------------------------------------------

def _c1w1_brackets(s, t, b):
    e1 = b * (16 * s * t - 3 * t * t - 13) - s * (13 * t * t + 3) + 16 * t
    e2 = b * (16 * s * t - 3 * t * t + 13) - s * (13 * t * t - 3) - 16 * t
    e3 = b * (8 * s + 5 * t) - t * (5 * s + 8 * t)
    return e1, e2, e3


def _c1w2_brackets(s, t, b):
    e1 = b * (16 * s * t - 5 * t * t - 11) - s * (11 * t * t + 5) + 16 * t
    e2 = b * (16 * s * t - 5 * t * t + 11) - s * (11 * t * t - 5) - 16 * t
    e3 = b * (8 * s + 3 * t) - t * (3 * s + 8 * t)
    return e1, e2, e3


def _c1w5_brackets(s, t, b):
    x1 = (b * b * (128 * s * s - 32 * s * t + 15 * t * t - 111)
          - 2 * b * (112 * s * s * t - s * t * t + s - 112 * t)
          + 3 * s * s * (37 * t * t - 5) + 32 * t * (s - 4 * t))
    x2 = (b * b * (128 * s * s - 32 * s * t + 15 * t * t + 111)
          - 2 * b * (112 * s * s * t - s * t * t - s + 112 * t)
          + 3 * s * s * (37 * t * t + 5) - 32 * t * (s - 4 * t))
    x3 = (b * b * (112 * s - t) + 2 * b * (8 * s * s - 127 * s * t + 8 * t * t)
          - s * t * (s - 112 * t))
    return x1, x2, x3


def _c1w8_brackets(s, t, b):
    u1 = b * (4 * s * t - t * t - 3) - s * (3 * t * t + 1) + 4 * t
    u2 = b * (4 * s * t - t * t + 3) - s * (3 * t * t - 1) - 4 * t
    u3 = b * (2 * s + t) - t * (s + 2 * t)
    return u1, u2, u3


def _p49_brackets(s, b1, b2):
    a1 = (32 * s * (b2 - s) + 13 * b2 * b2 * (s * s - 1)
          + b1 * b1 * (32 * b2 * b2 - 32 * b2 * s + 13 * (s * s - 1))
          + b1 * (32 * s - 32 * b2 * b2 * s + 6 * b2 * (s * s - 1)))
    a2 = (32 * s * (b2 - s) - 13 * b2 * b2 * (s * s + 1)
          - b1 * b1 * (32 * b2 * b2 - 32 * b2 * s + 13 * (s * s + 1))
          + b1 * (32 * s + 32 * b2 * b2 * s - 6 * b2 * (s * s + 1)))
    a3 = (b1 * b1 * (16 * b2 - 3 * s) - b2 * s * (3 * b2 - 16 * s)
          + 2 * b1 * (8 * b2 * b2 - 29 * b2 * s + 8 * s * s))
    c1 = b1 * (2 * b2 * s - s * s - 1) - b2 * (s * s + 1) + 2 * s
    c2 = b1 * (2 * b2 * s - s * s + 1) - b2 * (s * s - 1) - 2 * s
    c3 = b1 * b2 - s * s
    return a1, a2, a3, c1, c2, c3


def residue_formulas(family: str, params: dict | None = None) -> dict:
    """Closed-form residue triples of the null form at each end.

    Keys are the ends carrying printed formulas; values are complex
    triples.  The total over all ends vanishes componentwise, so the end
    at infinity is included as minus the finite sum.
    """
    inst_params = default_params(family)
    if params:
        inst_params.update(params)
    p = validate_params(family, inst_params) if family in _REGISTRY else None
    if family in ("t47-c1-w1", "t47-c1-w2"):
        s, t, b, th = (complex(p[k]) for k in _T47_PARAM_NAMES)
        e1, e2, e3 = (_c1w1_brackets if family.endswith("w1") else _c1w2_brackets)(s, t, b)
        sign = 1.0 if family.endswith("w1") else -1.0
        at_i = (sign * 0.125j * th * (b - s) * e1,
                sign * 0.125 * th * (b - s) * e2,
                sign * -0.25j * th * (b - s) * e3)
        return {1j: at_i, -1j: tuple(-r for r in at_i), 0j: (0j, 0j, 0j), INF: (0j, 0j, 0j)}
    if family == "t47-c1-w5":
        s, t, b, th = (complex(p[k]) for k in _T47_PARAM_NAMES)
        x1, x2, x3 = _c1w5_brackets(s, t, b)
        at_i = (-1j / 32 * th * x1, -th * x2 / 32, 1j / 16 * th * x3)
        return {1j: at_i, -1j: tuple(-r for r in at_i), 0j: (0j, 0j, 0j), INF: (0j, 0j, 0j)}
    if family == "t47-c1-w8":
        s, t, b, th = (complex(p[k]) for k in _T47_PARAM_NAMES)
        u1, u2, u3 = _c1w8_brackets(s, t, b)
        at_i = (0.5 * th * (b - s) * u1, -0.5j * th * (b - s) * u2, -th * (b - s) * u3)
        return {1j: at_i, -1j: at_i, 0j: tuple(-2 * r for r in at_i), INF: (0j, 0j, 0j)}
    if family == "t47-c4-w5":
        s, t, b, th = (complex(p[k]) for k in _T47_PARAM_NAMES)
        u1, u2, u3 = _c1w8_brackets(s, t, b)
        at_i = (-0.5j * th * (b - s) * u1, -0.5 * th * (b - s) * u2, 1j * th * (b - s) * u3)
        return {1j: at_i, -1j: tuple(-r for r in at_i), 0j: (0j, 0j, 0j), INF: (0j, 0j, 0j)}
    if family == "t47-c2-w1":
        s, t, b, th = (complex(p[k]) for k in _T47_PARAM_NAMES)
        u = th * (b - s) ** 2
        return {-1j: (-64j * u * (t * t - 1), -64 * u * (t * t + 1), 128j * u * t)}
    if family == "p49-w5":
        s, b1, b2, th = (complex(p[k]) for k in ("sigma", "b1", "b2", "theta"))
        a1, a2, a3, c1, c2, c3 = _p49_brackets(s, b1, b2)
        at_i = (0.5j * th * a1, -0.5 * th * a2, -1j * th * a3)
        at_mi = tuple(-r for r in at_i)
        at_0 = (4 * th * (b1 - b2) * c1, -4j * th * (b1 - b2) * c2, -8 * th * (b1 - b2) * c3)
        at_inf = tuple(-(x + y + z) for x, y, z in zip(at_i, at_mi, at_0))
        return {1j: at_i, -1j: at_mi, 0j: at_0, INF: at_inf}
    raise Unsupported(f"no printed residue formulas for family {family!r}")


def period_constraints(family: str, params: dict | None = None):
    """The real left-hand sides whose simultaneous vanishing is the period
    condition for the family, in the catalog's fixed order."""
    inst_params = default_params(family)
    if params:
        inst_params.update(params)
    p = validate_params(family, inst_params)
    if family in ("t47-c1-w1", "t47-c1-w2"):
        s, t, b, th = (complex(p[k]) for k in _T47_PARAM_NAMES)
        e1, e2, e3 = (_c1w1_brackets if family.endswith("w1") else _c1w2_brackets)(s, t, b)
        f = th * (b - s)
        return [(f * e1).real, (f * e2).imag, (f * e3).real]
    if family == "t47-c1-w5":
        s, t, b, th = (complex(p[k]) for k in _T47_PARAM_NAMES)
        x1, x2, x3 = _c1w5_brackets(s, t, b)
        return [(th * x1).real, (th * x2).imag, (th * x3).real]
    if family == "t47-c1-w8":
        s, t, b, th = (complex(p[k]) for k in _T47_PARAM_NAMES)
        u1, u2, u3 = _c1w8_brackets(s, t, b)
        f = th * (b - s)
        return [(f * u1).imag, (f * u2).real, (f * u3).imag]
    if family == "t47-c4-w5":
        s, t, b, th = (complex(p[k]) for k in _T47_PARAM_NAMES)
        u1, u2, u3 = _c1w8_brackets(s, t, b)
        f = th * (b - s)
        return [(f * u1).real, (f * u2).imag, (f * u3).real]
    if family == "t47-c2-w1":
        s, t, b, th = (complex(p[k]) for k in _T47_PARAM_NAMES)
        u = th * (b - s) ** 2
        return [((t * t - 1) * u).real, ((t * t + 1) * u).imag, (t * u).real]
    if family == "p49-w5":
        s, b1, b2, th = (complex(p[k]) for k in ("sigma", "b1", "b2", "theta"))
        a1, a2, a3, c1, c2, c3 = _p49_brackets(s, b1, b2)
        d = th * (b1 - b2)
        return [(th * a1).real, (th * a2).imag, (th * a3).real,
                (d * c1).imag, (d * c2).real, (d * c3).imag]
    raise Unsupported(f"family {family!r} carries no period constraint system")


# ---------------------------------------------------------------------------
# the infeasibility pattern
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ObstructionReport:
    """Evaluation of the three-membership pattern that forces U = 0.

    For any tau, requiring (tau^2-1)U purely imaginary, (tau^2+1)U real,
    and tau*U purely imaginary simultaneously is only possible at U = 0;
    `case` records which branch of the case split applies at this tau and
    `failed_conditions` which memberships the sampled U actually violates.
    """

    t1: complex
    t2: complex
    t3: complex
    infeasible: bool
    case: str
    failed_conditions: tuple


def obstruction_triple(u, tau) -> ObstructionReport:
    u = complex(u)
    tau = complex(tau)
    t1 = (tau * tau - 1) * u
    t2 = (tau * tau + 1) * u
    t3 = tau * u
    eps = 1e-12 * (1 + abs(u)) * (1 + abs(tau)) ** 2
    failed = []
    if abs(t1.real) > eps:
        failed.append(1)
    if abs(t2.imag) > eps:
        failed.append(2)
    if abs(t3.real) > eps:
        failed.append(3)
    # case split: either tau^2 + 1 = 0 (conditions 1 and 3 pin U to both
    # axes), or conditions 1 and 2 force |tau| = 1 and then conditions 2
    # and 3 pin e^{i phi} U to both axes; both branches force U = 0
    if abs(tau * tau + 1) <= 1e-12 * (1 + abs(tau)) ** 2:
        case = "tau^2+1=0: conditions 1 and 3 give U in iR and U in R"
    elif abs(abs(tau) - 1) <= 1e-12:
        case = "|tau|=1: conditions 2 and 3 give tau*U in R and tau*U in iR"
    else:
        case = "generic: conditions 1 and 2 force |tau| = 1, contradiction"
    return ObstructionReport(t1, t2, t3, True, case, tuple(failed))


# ---------------------------------------------------------------------------
# canonical-map verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CanonicalReport:
    family: str
    clauses: tuple  # ((name, ok, detail), ...)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.clauses)


_CANON_SPEC = {
    "canon-g111": dict(omitted=(EC(0), EC(1)), case="Case 1", cross=EC(-1), inf_fiber=(2, 2)),
    "canon-g211": dict(omitted=(EC(0), EC(1)), case="Case 2", cross=EC(9), inf_fiber=(2, 2)),
    "canon-g42": dict(omitted=(EC(0), EC(1)), case="Case 4", cross=EC(-1), inf_fiber=(2, 2)),
    "canon-gd1": dict(omitted=(EC(1),), case=None, cross=EC(-1), inf_fiber=(4,)),
}


def verify_canonical(family: str, tol: float = 1e-9) -> CanonicalReport:
    """Structural checks of the four canonical degree-4 maps.

    Verifies the degree, the omitted set on the fixed domain, the totally
    ramified value(s) with interior fibers, the end allocation pattern,
    and the cross-ratio necessity value.  Raises StructuralViolation on
    the first failed clause.
    """
    if family not in CANONICAL_IDS:
        raise Unsupported(f"{family!r} is not a canonical map id")
    want = _CANON_SPEC[family]
    inst = build(family)
    g, dom = inst.gauss_map, inst.dom
    clauses = []

    def clause(name, ok, detail=""):
        clauses.append((name, bool(ok), detail))
        if not ok:
            raise StructuralViolation(f"{family}: clause {name!r} failed ({detail})")

    clause("degree", g.degree == 4, f"degree {g.degree}")
    rep = tr_report(g, dom, tol)
    omit_ok = len(rep.omitted) == len(want["omitted"]) and all(
        any(sphere_close(v, w, tol) for w in rep.omitted) for v in want["omitted"]
    )
    clause("omitted_set", omit_ok, f"omitted {rep.omitted}")

    if family == "canon-gd1":
        # both remaining totally ramified values come from one quadruple point
        clause("ramified_orders", tuple(o for _, o in rep.ramified) == (4, 4), str(rep.ramified))
        from .sphere import fiber
        f0 = fiber(g, EC(0), tol)
        finf = fiber(g, INF, tol)
        ok0 = len(f0) == 1 and f0[0][1] == 4 and sphere_close(f0[0][0], EC(1), 1e-7)
        okinf = len(finf) == 1 and finf[0][1] == 4 and sphere_close(finf[0][0], EC(-1), 1e-7)
        clause("quadruple_points", ok0 and okinf, f"fiber(0)={f0}, fiber(inf)={finf}")
        alloc = classify_allocation(g, dom, [EC(1)], tol)
        clause("end_allocation", alloc.bracket_of(EC(1)) == (1, 1, 1, 1), str(alloc.brackets))
        cr = cross_ratio(INF, EC(0), EC(0, 1), EC(0, -1))
        clause("cross_ratio", cr == want["cross"], f"[inf,0;i,-i] = {cr}")
        return CanonicalReport(family, tuple(clauses))

    # the three maps omitting {0, 1}: infinity is the unique other value
    inf_entry = [o for v, o in rep.ramified if is_inf(v)]
    clause("inf_totally_ramified", inf_entry == [2], str(rep.ramified))
    from .sphere import fiber
    finf = fiber(g, INF, tol)
    fiber_ok = sorted(m for _, m in finf) == sorted(want["inf_fiber"]) and all(
        not any(sphere_close(loc, q, 1e-7) for q in dom) for loc, _ in finf
    )
    clause("inf_fiber_interior", fiber_ok, f"fiber(inf) = {finf}")
    alloc = classify_allocation(g, dom, [EC(0), EC(1)], tol)
    clause("end_allocation", alloc.case == want["case"], f"{alloc.case}: {alloc.brackets}")

    ends0 = {q: _end_order(g, EC(0), q, tol) for q in dom}
    ends1 = {q: _end_order(g, EC(1), q, tol) for q in dom}
    if family == "canon-g211":
        p3 = _end_with(ends0, 3)
        p1 = _end_with(ends0, 1)
        s3 = _end_with(ends1, 3)
        s1 = _end_with(ends1, 1)
        cr = cross_ratio(p3, p1, s3, s1)
        clause("g211_simple_value", _end_order(g, EC(1), EC(0, -17), tol) == 1, "G(-17i) = 1 simply")
    else:
        p0 = _end_with(ends0, 4) if family == "canon-g111" else _end_with(ends0, 2)
        if family == "canon-g111":
            p1 = _end_with(ends1, 2)
            simples = sorted((q for q, m in ends1.items() if m == 1), key=_pt_key)
            cr = cross_ratio(p0, p1, simples[0], simples[1])
        else:
            others0 = sorted((q for q, m in ends0.items() if m == 2), key=_pt_key)
            others1 = sorted((q for q, m in ends1.items() if m == 2), key=_pt_key)
            cr = cross_ratio(others0[0], others0[1], others1[0], others1[1])
    clause("cross_ratio", cr == want["cross"], f"cross ratio = {cr}")
    return CanonicalReport(family, tuple(clauses))


def _end_order(g, v, q, tol):
    from .sphere import _order_at_point
    return _order_at_point(g, v, q, tol)


def _end_with(orders: dict, m: int):
    for q, k in orders.items():
        if k == m:
            return q
    raise StructuralViolation(f"no end carries multiplicity {m}")


def _pt_key(q):
    if is_inf(q):
        return (1, 0.0, 0.0)
    c = complex(q)
    return (0, c.real, c.imag)


# ---------------------------------------------------------------------------
# variant symmetries and the KW embedding
# ---------------------------------------------------------------------------

# the 1-form shapes identified by coordinate symmetries; (a, b) means
# shape a maps onto shape b under the named transform, theta multiplied
# by the recorded factor (the sign of the pullback of the denominator)
VARIANT_EQUIVALENCES = (
    dict(case="t47-c1", variants=(4, 3), transform="z -> -z", theta_factor=-1),
    dict(case="t47-c1", variants=(7, 6), transform="z -> -z", theta_factor=-1),
    dict(case="t47-c1", variants=(10, 9), transform="z -> -z", theta_factor=1),
    dict(case="t47-c4", variants=(8, 5), transform="z -> i(z+i)/(z-i), sigma and tau swapped"),
)


def check_variant_equivalence(entry: dict, sigma, tau, b, theta, tol: float = 1e-8) -> bool:
    """Spot-check one symmetry identification numerically.

    For z -> -z the pullback fixes 0 and infinity and swaps the ends at
    +/-i, so the residue triples of shape a must match those of shape b
    (with theta negated) at the swapped ends.  For the Case 4 Moebius
    symmetry, the residue triples must agree up to one common complex
    factor absorbed into theta after the end permutation
    inf -> i, i -> inf, -i -> 0, 0 -> -i and the sigma/tau swap.
    """
    from .weierstrass import period_report

    va, vb = entry["variants"]
    if entry["case"] == "t47-c1":
        ga, oa = _case1_maps(sigma, tau, b, theta, va)
        gb, ob = _case1_maps(sigma, tau, b, entry["theta_factor"] * theta, vb)
        ra = period_report(WeierstrassData(ga, oa, _DOM4))
        rb = period_report(WeierstrassData(gb, ob, _DOM4))
        swap = {1j: -1j, -1j: 1j, 0j: 0j}
        for p, q in swap.items():
            ta = ra.residues_at(p)
            tb = rb.residues_at(q)
            if any(abs(complex(x) - complex(y)) > tol * (1 + abs(complex(x))) for x, y in zip(ta, tb)):
                return False
        return True
    ga, oa = _case4_maps(sigma, tau, b, theta, variant=va)
    gb, ob = _case4_maps(tau, sigma, b, theta, variant=vb)
    ra = period_report(WeierstrassData(ga, oa, _DOM4))
    rb = period_report(WeierstrassData(gb, ob, _DOM4))
    perm = {INF: 1j, 1j: INF, -1j: 0j, 0j: -1j}
    ratio = None
    for p, q in perm.items():
        ta = ra.residues_at(p)
        tb = rb.residues_at(q)
        for x, y in zip(ta, tb):
            x, y = complex(x), complex(y)
            if abs(y) < 1e-12 and abs(x) < 1e-12:
                continue
            if abs(y) < 1e-12:
                return False
            r = x / y
            if ratio is None:
                ratio = r
            elif abs(r - ratio) > tol * (1 + abs(ratio)):
                return False
    return ratio is not None


def kw_params_as_c1w2(a: float, b: float, sigma: complex) -> dict:
    """Parameters embedding the 4-punctured catalog family into shape 2.

    Substituting tau = sigma, sigma = sigma*a, b = sigma*b and changing
    the coordinate by z -> 1/z carries the shape-2 family onto the
    4-punctured example family with real moduli (a, b)."""
    return {"sigma": complex(sigma) * a, "tau": complex(sigma), "b": complex(sigma) * b, "theta": 1.0 + 0j}
