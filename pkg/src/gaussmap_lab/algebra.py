"""Scalar, polynomial, and rational-function kernel.

Two scalar modes run through everything here:

* exact mode: Gaussian rationals (`ExactComplex`, a pair of
  `fractions.Fraction`), closed under +, -, *, / and therefore able to
  certify identities (residue sums, coprimality, multiplicity counts)
  with no tolerance at all;
* approx mode: IEEE doubles (`complex`), used for root finding, contour
  integration, and any data whose parameters are irrational.

Polynomials are dense, stored lowest degree first.  The zero polynomial
is flagged (`is_zero`) rather than given a numeric degree, so no code
path ever does arithmetic on a fake degree.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ContourTooLarge, ConvergenceFailure, NotAPole, ZeroDenominator

__all__ = [
    "ExactComplex",
    "EC",
    "EC_ZERO",
    "EC_ONE",
    "EC_I",
    "INF",
    "is_inf",
    "Poly",
    "RationalMap",
    "RootCluster",
    "normalize",
    "poly_gcd",
    "squarefree_decomposition",
    "roots",
    "residue",
    "residue_at_infinity",
    "all_residues",
    "contour_integral",
]


# ---------------------------------------------------------------------------
# exact scalars
# ---------------------------------------------------------------------------

def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if x != int(x):
            raise TypeError(f"refusing to coerce non-integral float {x!r} to exact; use Fraction")
        return Fraction(int(x))
    raise TypeError(f"cannot coerce {type(x).__name__} to Fraction")


@dataclass(frozen=True, slots=True)
class ExactComplex:
    """A Gaussian rational re + im*i with Fraction components.

    Denominators are kept positive and in lowest terms by Fraction itself.
    All arithmetic is exact; division by zero raises ZeroDivisionError.
    """

    re: Fraction
    im: Fraction

    @staticmethod
    def of(re, im=0) -> "ExactComplex":
        return ExactComplex(_to_fraction(re), _to_fraction(im))

    @staticmethod
    def coerce(x) -> "ExactComplex":
        if isinstance(x, ExactComplex):
            return x
        if isinstance(x, complex):
            raise TypeError("cannot coerce a float complex to ExactComplex")
        return ExactComplex.of(x)

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    def conjugate(self) -> "ExactComplex":
        return ExactComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        other = ExactComplex.coerce(other)
        return ExactComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = ExactComplex.coerce(other)
        return ExactComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return ExactComplex.coerce(other) - self

    def __mul__(self, other):
        other = ExactComplex.coerce(other)
        return ExactComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ExactComplex.coerce(other)
        d = other.abs2()
        if not d:
            raise ZeroDivisionError("division by exact zero")
        num = self * other.conjugate()
        return ExactComplex(num.re / d, num.im / d)

    def __rtruediv__(self, other):
        return ExactComplex.coerce(other) / self

    def __neg__(self):
        return ExactComplex(-self.re, -self.im)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = EC_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (ExactComplex, int, Fraction)):
            other = ExactComplex.coerce(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"({self.re}{'+' if self.im >= 0 else ''}{self.im}i)"


def EC(re, im=0) -> ExactComplex:
    """Shorthand constructor for exact Gaussian rationals."""
    return ExactComplex.of(re, im)


EC_ZERO = EC(0)
EC_ONE = EC(1)
EC_I = EC(0, 1)


def _is_exact_scalar(x) -> bool:
    return isinstance(x, (ExactComplex, int, Fraction))


def _require_finite(c: complex) -> complex:
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise OverflowError(f"non-finite float scalar {c!r}")
    return c


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Dense univariate polynomial, coefficients lowest degree first.

    Exact instances hold ExactComplex coefficients, approx instances hold
    complex doubles; the two kinds never mix inside one polynomial.
    Trailing coefficients that are literally zero are trimmed on
    construction, so the leading coefficient of a nonzero polynomial is
    nonzero and ``degree`` equals the index of the leading coefficient.
    """

    __slots__ = ("coeffs", "exact")

    def __init__(self, coeffs, exact=None):
        items = list(coeffs)
        if exact is None:
            exact = all(_is_exact_scalar(c) for c in items)
        if exact:
            items = [ExactComplex.coerce(c) for c in items]
            while items and items[-1].is_zero:
                items.pop()
        else:
            items = [_require_finite(complex(c)) for c in items]
            while items and items[-1] == 0:
                items.pop()
        self.coeffs = tuple(items)
        self.exact = bool(exact)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def zero(exact=True) -> "Poly":
        return Poly([], exact=exact)

    @staticmethod
    def one(exact=True) -> "Poly":
        return Poly([1] if exact else [1.0 + 0j], exact=exact)

    @staticmethod
    def monomial(degree: int, coeff=1, exact=True) -> "Poly":
        return Poly([0] * degree + [coeff] if exact else [0j] * degree + [complex(coeff)], exact=exact)

    @staticmethod
    def from_roots(rts, exact=True, lead=1) -> "Poly":
        p = Poly([lead], exact=exact)
        for r in rts:
            p = p * Poly([-r if exact else -complex(r), 1 if exact else 1.0 + 0j], exact=exact)
        return p

    # -- structure -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self):
        """Degree of a nonzero polynomial; None for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def lead(self):
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def _zero_scalar(self):
        return EC_ZERO if self.exact else 0j

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self._zero_scalar()

    def to_approx(self) -> "Poly":
        if not self.exact:
            return self
        return Poly([complex(c) for c in self.coeffs], exact=False)

    def complex_coeffs(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex) if self.coeffs else np.zeros(1, dtype=complex)

    # -- arithmetic ----------------------------------------------------------

    def _coerce_pair(self, other):
        if not isinstance(other, Poly):
            other = Poly([other])
        if self.exact and not other.exact:
            return self.to_approx(), other
        if other.exact and not self.exact:
            return self, other.to_approx()
        return self, other

    def __add__(self, other):
        a, b = self._coerce_pair(other)
        n = max(len(a.coeffs), len(b.coeffs))
        return Poly([a.coeff(k) + b.coeff(k) for k in range(n)], exact=a.exact)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce_pair(other)
        n = max(len(a.coeffs), len(b.coeffs))
        return Poly([a.coeff(k) - b.coeff(k) for k in range(n)], exact=a.exact)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Poly([-c for c in self.coeffs], exact=self.exact)

    def __mul__(self, other):
        a, b = self._coerce_pair(other)
        if a.is_zero or b.is_zero:
            return Poly.zero(exact=a.exact)
        out = [a._zero_scalar()] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, ca in enumerate(a.coeffs):
            for j, cb in enumerate(b.coeffs):
                out[i + j] = out[i + j] + ca * cb
        return Poly(out, exact=a.exact)

    __rmul__ = __mul__

    def scale(self, s) -> "Poly":
        if self.exact and _is_exact_scalar(s):
            s = ExactComplex.coerce(s)
            return Poly([c * s for c in self.coeffs], exact=True)
        s = complex(s)
        return Poly([complex(c) * s for c in self.coeffs], exact=False)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        out = Poly.one(exact=self.exact)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Poly"):
        """Long division; exact in exact mode, floating otherwise."""
        a, b = self._coerce_pair(other)
        if b.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        if a.is_zero or a.degree < b.degree:
            return Poly.zero(exact=a.exact), a
        rem = list(a.coeffs)
        blead = b.lead
        q = [a._zero_scalar()] * (a.degree - b.degree + 1)
        for k in range(a.degree - b.degree, -1, -1):
            c = rem[k + b.degree] / blead
            q[k] = c
            for j, cb in enumerate(b.coeffs):
                rem[k + j] = rem[k + j] - c * cb
        return Poly(q, exact=a.exact), Poly(rem[: b.degree], exact=a.exact)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self) -> "Poly":
        if self.is_zero or self.degree == 0:
            return Poly.zero(exact=self.exact)
        return Poly([self.coeffs[k] * k for k in range(1, len(self.coeffs))], exact=self.exact)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self._coerce_pair(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        return hash((self.exact, self.coeffs))

    # -- evaluation ----------------------------------------------------------

    def __call__(self, z):
        if self.is_zero:
            return EC_ZERO if (self.exact and _is_exact_scalar(z)) else 0j
        if self.exact and _is_exact_scalar(z):
            z = ExactComplex.coerce(z)
            acc = EC_ZERO
            for c in reversed(self.coeffs):
                acc = acc * z + c
            return acc
        z = complex(z)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + complex(c)
        return acc

    def eval_many(self, zs: np.ndarray) -> np.ndarray:
        if self.is_zero:
            return np.zeros_like(np.asarray(zs, dtype=complex))
        return np.polynomial.polynomial.polyval(np.asarray(zs, dtype=complex), self.complex_coeffs())

    def magnitude_scale(self, z: complex) -> float:
        """Sum |c_k| |z|^k; the natural backward-error scale at z."""
        az = abs(z)
        s, p = 0.0, 1.0
        for c in self.coeffs:
            s += abs(complex(c)) * p
            p *= az
        return s or 1.0

    # -- transforms ----------------------------------------------------------

    def shift(self, p) -> "Poly":
        """Return self(z + p), by repeated synthetic division."""
        if self.is_zero:
            return self
        exact = self.exact and _is_exact_scalar(p)
        work = self if exact else self.to_approx()
        p = ExactComplex.coerce(p) if exact else complex(p)
        cs = list(work.coeffs)
        n = len(cs)
        out = []
        for _ in range(n):
            # divide by (z - p): remainder is next Taylor coefficient
            acc = cs[-1]
            newcs = [acc]
            for k in range(n - 2 - len(out), -1, -1):
                acc = cs[k] + acc * p
                newcs.append(acc)
            newcs.reverse()
            out.append(newcs[0])
            cs = newcs[1:]
            if not cs:
                break
        return Poly(out, exact=exact)

    def reversed_coeffs(self, length=None) -> "Poly":
        """Return z^n * self(1/z) with n = length-1 (defaults to degree)."""
        if self.is_zero:
            return self
        n = (self.degree if length is None else length - 1)
        if n < self.degree:
            raise ValueError("length too small to hold reversal")
        pad = [self._zero_scalar()] * (n - self.degree)
        return Poly(list(reversed(list(self.coeffs) + pad)), exact=self.exact)

    def monic(self) -> "Poly":
        if self.is_zero:
            raise ValueError("cannot normalize zero polynomial")
        lead = self.lead
        if self.exact:
            return Poly([c / lead for c in self.coeffs], exact=True)
        return Poly([complex(c) / complex(lead) for c in self.coeffs], exact=False)

    def trim(self, tol: float) -> "Poly":
        """Drop trailing coefficients below tol * max|c| (approx mode only)."""
        if self.exact or self.is_zero:
            return self
        top = max(abs(c) for c in self.coeffs)
        cs = list(self.coeffs)
        while cs and abs(cs[-1]) <= tol * top:
            cs.pop()
        return Poly(cs, exact=False)

    def order_at(self, p, tol: float = 0.0) -> int:
        """Order of vanishing at p (0 if self(p) != 0)."""
        if self.is_zero:
            raise ValueError("zero polynomial vanishes to infinite order")
        if self.exact and _is_exact_scalar(p):
            shifted = self.shift(p)
            k = 0
            while shifted.coeffs[k].is_zero:
                k += 1
            return k
        shifted = self.to_approx().shift(complex(p))
        scale = max(abs(c) for c in shifted.coeffs)
        eps = (tol or 1e-9) * scale
        k = 0
        while k < len(shifted.coeffs) - 1 and abs(shifted.coeffs[k]) <= eps:
            k += 1
        return k

    def __repr__(self):
        if self.is_zero:
            return "Poly(0)"
        parts = [f"{c!r}*z^{k}" if k else f"{c!r}" for k, c in enumerate(self.coeffs)]
        return "Poly(" + " + ".join(parts) + ")"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over the Gaussian rationals (exact polynomials only)."""
    if not (a.exact and b.exact):
        raise ValueError("poly_gcd requires exact polynomials")
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    return a.monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun decomposition p = lead * prod F_m^m with each F_m monic squarefree.

    Returns [(F_m, m)] for the nontrivial factors, ordered by multiplicity.
    """
    if not p.exact:
        raise ValueError("squarefree decomposition requires exact input")
    if p.is_zero:
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return []
    p = p.monic()
    dp = p.derivative()
    a = poly_gcd(p, dp)
    out = []
    if a.degree == 0:
        return [(p, 1)]
    b = p // a
    c = dp // a
    d = c - b.derivative()
    m = 1
    while True:
        g = poly_gcd(b, d) if not d.is_zero else b
        if g.degree and g.degree > 0:
            out.append((g, m))
        if d.is_zero:
            break
        b2 = b // g if g.degree else b
        if b2.degree == 0:
            break
        c2 = d // g if g.degree else d
        b, c = b2, c2
        d = c - b.derivative()
        m += 1
    # drop accidental degree-0 entries
    return [(f, m) for (f, m) in out if f.degree and f.degree > 0]


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootCluster:
    """A numeric root location with its multiplicity and a radius bound."""

    location: complex
    multiplicity: int
    radius: float

    def __iter__(self):
        yield self.location
        yield self.multiplicity


def _aberth(coeffs: np.ndarray, tol: float, max_iter: int = 600) -> np.ndarray:
    """Aberth simultaneous iteration on a complex coefficient array.

    Expects coeffs lowest-first with nonzero lead and nonzero constant
    term (roots at the origin must be stripped by the caller).
    """
    n = len(coeffs) - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    if n == 1:
        return np.array([-coeffs[0] / coeffs[1]])
    c = coeffs / coeffs[-1]
    # Fujiwara bound for the initial inclusion circle
    r = 2.0 * max(abs(c[k]) ** (1.0 / (n - k)) for k in range(n))
    r = max(min(r, 1e6), 1e-6)
    angles = 2.0 * np.pi * (np.arange(n) / n) + 0.4
    z = r * np.exp(1j * angles)
    dcoeffs = c[1:] * np.arange(1, n + 1)
    for _ in range(max_iter):
        pz = np.polynomial.polynomial.polyval(z, c)
        scale = np.polynomial.polynomial.polyval(np.abs(z), np.abs(c))
        if np.all(np.abs(pz) <= tol * np.maximum(scale, 1.0)):
            return z
        dpz = np.polynomial.polynomial.polyval(z, dcoeffs)
        dpz = np.where(dpz == 0, 1e-300, dpz)
        w = pz / dpz
        diffs = z[:, None] - z[None, :]
        np.fill_diagonal(diffs, 1.0)
        inv = 1.0 / diffs
        np.fill_diagonal(inv, 0.0)
        s = np.sum(inv, axis=1)
        denom = 1.0 - w * s
        denom = np.where(denom == 0, 1e-300, denom)
        step = w / denom
        z = z - step
    pz = np.polynomial.polynomial.polyval(z, c)
    scale = np.polynomial.polynomial.polyval(np.abs(z), np.abs(c))
    if np.all(np.abs(pz) <= 1e3 * tol * np.maximum(scale, 1.0)):
        return z
    raise ConvergenceFailure(f"Aberth iteration stalled (residual {np.max(np.abs(pz)):.3e})")


def _link_points(points: list[complex], thr_of) -> list[list[complex]]:
    """Single-linkage grouping with a location-dependent threshold."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(points[i] - points[j]) <= thr_of(points[i]):
                parent[find(i)] = find(j)
    groups: dict[int, list[complex]] = {}
    for i, p in enumerate(points):
        groups.setdefault(find(i), []).append(p)
    return list(groups.values())


def _derivative_coeffs(coeffs: np.ndarray, order: int) -> np.ndarray:
    return np.polynomial.polynomial.polyder(coeffs, m=order) if order else coeffs


def _magnitude_at(coeffs: np.ndarray, x: complex) -> float:
    return float(np.polynomial.polynomial.polyval(abs(x), np.abs(coeffs))) or 1.0


def _refine_multiple(coeffs: np.ndarray, m: int, x: complex) -> tuple[complex, float]:
    """Newton on the (m-1)-th derivative, where an m-fold root is simple."""
    q = _derivative_coeffs(coeffs, m - 1)
    dq = _derivative_coeffs(q, 1)
    step = 0.0
    for _ in range(40):
        qv = np.polynomial.polynomial.polyval(x, q)
        dqv = np.polynomial.polynomial.polyval(x, dq)
        if dqv == 0:
            break
        delta = qv / dqv
        x = x - delta
        step = abs(delta)
        if step <= 1e-15 * (1.0 + abs(x)):
            break
    return complex(x), float(step)


def _multiplicity_consistent(coeffs: np.ndarray, x: complex, m: int) -> bool:
    """All derivatives below order m must be numerically tiny at x."""
    for j in range(m):
        dj = _derivative_coeffs(coeffs, j)
        val = abs(np.polynomial.polynomial.polyval(x, dj))
        if val > 1e-7 * _magnitude_at(dj, x):
            return False
    return True


def _cluster_roots(coeffs: np.ndarray, points: list[complex], tol: float) -> list[RootCluster]:
    """Group approximate roots into multiplicity clusters, refine, validate.

    Multiple roots are only located to (backward error)^(1/m), so linkage
    starts generous (worst case m = deg) and falsely merged clusters are
    split back when the derivative magnitudes contradict the multiplicity.
    """
    n_total = len(coeffs) - 1

    def build(members: list[complex], spread: float) -> list[RootCluster]:
        m = len(members)
        center = sum(members) / m
        if m == 1:
            return [RootCluster(complex(center), 1, max(tol, 1e-14) * (1.0 + abs(center)))]
        refined, step = _refine_multiple(coeffs, m, center)
        if _multiplicity_consistent(coeffs, refined, m):
            radius = max(step * 10.0, 1e-12 * (1.0 + abs(refined)))
            return [RootCluster(refined, m, radius)]
        if spread < 1e-14:
            # inconsistent but unsplittable: keep the cluster, flag a wide radius
            return [RootCluster(complex(center), m, max(s_dev(members, center), tol))]
        out = []
        for sub in _link_points(members, lambda z: spread / 16.0 * (1.0 + abs(z))):
            out.extend(build(sub, spread / 16.0))
        return out

    def s_dev(members, center):
        return max(abs(p - center) for p in members)

    base = max(tol, 1e-13) ** (1.0 / max(n_total, 1))
    out: list[RootCluster] = []
    for members in _link_points(points, lambda z: base * (1.0 + abs(z))):
        out.extend(build(members, base))
    return out


def _as_exact_poly(p: Poly) -> Poly | None:
    """Exact rewrite of an approx polynomial whose coefficients are
    small rationals represented exactly in floating point; None otherwise.

    The denominator bound is kept small so that irrational coefficients
    perturbed at roundoff level never masquerade as exact rationals.
    """
    if p.exact:
        return p
    out = []
    for c in p.coeffs:
        c = complex(c)
        re = Fraction(c.real).limit_denominator(1 << 12)
        im = Fraction(c.imag).limit_denominator(1 << 12)
        if float(re) != c.real or float(im) != c.imag:
            return None
        out.append(ExactComplex(re, im))
    return Poly(out, exact=True)


def roots(p: Poly, tol: float = 1e-12) -> list[RootCluster]:
    """Root clusters of p with multiplicities summing to deg p.

    Exact polynomials are routed through the squarefree decomposition, so
    multiplicities are certified and only simple roots are iterated on.
    Approx polynomials go through Aberth iteration plus cluster merging.
    """
    if p.is_zero:
        raise ValueError("zero polynomial has no well-defined root set")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if p.degree == 0:
        return []
    out: list[RootCluster] = []
    if p.exact:
        for factor, mult in squarefree_decomposition(p):
            cs = factor.complex_coeffs()
            k0 = 0
            while abs(cs[k0]) == 0:
                k0 += 1
            if k0:
                out.append(RootCluster(0j, k0 * mult, 0.0))
                cs = cs[k0:]
            if len(cs) > 1:
                zs = _aberth(cs, tol)
                zs = _polish(cs, zs)
                for z in zs:
                    out.append(RootCluster(z, mult, _root_radius(cs, z)))
    else:
        exact_rewrite = _as_exact_poly(p)
        if exact_rewrite is None and p.degree > 0:
            exact_rewrite = _as_exact_poly(p.monic())
        if exact_rewrite is not None:
            return roots(exact_rewrite, tol)
        cs = p.complex_coeffs()
        top = max(abs(cs))
        k0 = 0
        while abs(cs[k0]) <= 1e-300 * top:
            k0 += 1
        if k0:
            out.append(RootCluster(0j, k0, 1e-14))
        cs2 = cs[k0:]
        if len(cs2) > 1:
            pts = list(_aberth(cs2, tol))
            out.extend(_cluster_roots(cs2, pts, tol))
        total = sum(c.multiplicity for c in out)
        if total != p.degree:
            raise ConvergenceFailure(f"cluster multiplicities sum to {total}, expected {p.degree}")
    out.sort(key=lambda c: (round(c.location.real, 9), round(c.location.imag, 9)))
    return out


def _polish(coeffs: np.ndarray, zs: np.ndarray, sweeps: int = 3) -> np.ndarray:
    dc = coeffs[1:] * np.arange(1, len(coeffs))
    for _ in range(sweeps):
        pz = np.polynomial.polynomial.polyval(zs, coeffs)
        dpz = np.polynomial.polynomial.polyval(zs, dc)
        dpz = np.where(dpz == 0, 1e-300, dpz)
        zs = zs - pz / dpz
    return zs


def _root_radius(coeffs: np.ndarray, z: complex) -> float:
    dc = coeffs[1:] * np.arange(1, len(coeffs))
    pz = np.polynomial.polynomial.polyval(np.array([z]), coeffs)[0]
    dpz = np.polynomial.polynomial.polyval(np.array([z]), dc)[0]
    if dpz == 0:
        return 1e-8
    n = len(coeffs) - 1
    return float(n * abs(pz / dpz)) + 1e-300


# ---------------------------------------------------------------------------
# rational maps
# ---------------------------------------------------------------------------

INF = type("_PointAtInfinity", (), {
    "__repr__": lambda self: "inf",
    "__reduce__": lambda self: (_get_inf, ()),
})()


def _get_inf():
    return INF


def is_inf(p) -> bool:
    return p is INF


class RationalMap:
    """Quotient of two polynomials, canonicalized on construction.

    In exact mode the pair is reduced to coprime form with a monic
    denominator, so evaluation never meets 0/0.  In approx mode the
    denominator is scaled monic and common factors are the caller's
    responsibility (the family constructors build reduced data directly).
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den, _normalized=False):
        if not isinstance(num, Poly):
            num = Poly(num)
        if not isinstance(den, Poly):
            den = Poly(den)
        if den.is_zero:
            raise ZeroDenominator("denominator is identically zero")
        if num.exact != den.exact:
            num, den = num.to_approx(), den.to_approx()
        if not _normalized:
            if num.exact:
                if not num.is_zero:
                    g = poly_gcd(num, den)
                    if g.degree and g.degree > 0:
                        num = num // g
                        den = den // g
                lead = den.lead
                num = num.scale(EC_ONE / lead)
                den = den.scale(EC_ONE / lead)
            else:
                # sup-norm scaling; a monic denominator would blow up the
                # coefficients whenever the leading coefficient is small
                s = max(abs(complex(c)) for c in den.coeffs)
                num = num.scale(1.0 / s)
                den = den.scale(1.0 / s)
        self.num = num
        self.den = den

    # -- basics ----------------------------------------------------------------

    @property
    def exact(self) -> bool:
        return self.num.exact

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return (self.num.is_zero or self.num.degree == 0) and self.den.degree == 0

    @property
    def degree(self) -> int:
        """Degree as a map of the sphere: max(deg num, deg den)."""
        if self.num.is_zero:
            return 0
        return max(self.num.degree, self.den.degree)

    def to_approx(self) -> "RationalMap":
        if not self.exact:
            return self
        return RationalMap(self.num.to_approx(), self.den.to_approx(), _normalized=True)

    @staticmethod
    def const(c, exact=True) -> "RationalMap":
        return RationalMap(Poly([c], exact=exact), Poly.one(exact=exact))

    @staticmethod
    def identity(exact=True) -> "RationalMap":
        return RationalMap(Poly([0, 1] if exact else [0j, 1 + 0j]), Poly.one(exact=exact))

    # -- evaluation --------------------------------------------------------------

    def __call__(self, p):
        """Evaluate at a point of the sphere (INF allowed, INF returned)."""
        if is_inf(p):
            dn = -1 if self.num.is_zero else self.num.degree
            dd = self.den.degree
            if dn > dd:
                return INF
            if dn < dd:
                return EC_ZERO if self.exact else 0j
            return self.num.lead / self.den.lead
        n = self.num(p)
        d = self.den(p)
        if self.exact and _is_exact_scalar(p):
            if d.is_zero:
                if n.is_zero:
                    raise ZeroDivisionError("0/0 in non-canonical rational map")
                return INF
            return n / d
        n, d = complex(n), complex(d)
        if d == 0:
            if n == 0:
                raise ZeroDivisionError("0/0 at float evaluation point")
            return INF
        return n / d

    def eval_many(self, zs: np.ndarray) -> np.ndarray:
        return self.num.eval_many(zs) / self.den.eval_many(zs)

    # -- arithmetic ---------------------------------------------------------------

    def _pair(self, other):
        if not isinstance(other, RationalMap):
            other = RationalMap.const(other, exact=_is_exact_scalar(other))
        if self.exact and not other.exact:
            return self.to_approx(), other
        if other.exact and not self.exact:
            return self, other.to_approx()
        return self, other

    def __add__(self, other):
        a, b = self._pair(other)
        return RationalMap(a.num * b.den + b.num * a.den, a.den * b.den)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        return RationalMap(a.num * b.den - b.num * a.den, a.den * b.den)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RationalMap(-self.num, self.den, _normalized=True)

    def __mul__(self, other):
        a, b = self._pair(other)
        return RationalMap(a.num * b.num, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._pair(other)
        if b.num.is_zero:
            raise ZeroDivisionError("division by zero rational map")
        return RationalMap(a.num * b.den, a.den * b.num)

    def __rtruediv__(self, other):
        a, b = self._pair(other)
        return b / a

    def __pow__(self, n: int):
        if n < 0:
            return RationalMap(self.den, self.num) ** (-n)
        out = RationalMap.const(1, exact=self.exact)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, RationalMap):
            return NotImplemented
        a, b = self._pair(other)
        return a.num * b.den == b.num * a.den

    def derivative(self) -> "RationalMap":
        w = self.num.derivative() * self.den - self.num * self.den.derivative()
        return RationalMap(w, self.den * self.den)

    def wronskian(self) -> Poly:
        """num' * den - num * den', the numerator of the derivative."""
        return self.num.derivative() * self.den - self.num * self.den.derivative()

    def reciprocal_argument(self) -> "RationalMap":
        """The map w -> self(1/w), canonicalized in the w chart."""
        dn = 0 if self.num.is_zero else self.num.degree
        dd = self.den.degree
        d = max(dn, dd)
        num = self.num.reversed_coeffs(d + 1) if not self.num.is_zero else self.num
        den = self.den.reversed_coeffs(d + 1)
        return RationalMap(num, den)

    def poles(self, tol: float = 1e-12) -> list[RootCluster]:
        """Finite poles with orders; ∞ is reported separately by order_at_infinity."""
        if self.den.degree == 0:
            return []
        return roots(self.den, tol)

    def order_at_infinity(self) -> int:
        """Order of vanishing at ∞: deg den - deg num (negative at a pole)."""
        if self.num.is_zero:
            raise ValueError("zero map has no finite order at infinity")
        return self.den.degree - self.num.degree

    def __repr__(self):
        return f"RationalMap({self.num!r} / {self.den!r})"


def normalize(num: Poly, den: Poly) -> RationalMap:
    """Canonical coprime form with monic denominator (exact scalars)."""
    return RationalMap(num, den)


# ---------------------------------------------------------------------------
# residues
# ---------------------------------------------------------------------------

def _series_inverse(coeffs, m: int, exact: bool):
    """Inverse of a power series mod z^m; coeffs[0] must be nonzero."""
    c0 = coeffs[0]
    if exact:
        inv0 = EC_ONE / c0
        inv = [inv0]
        for k in range(1, m):
            acc = EC_ZERO
            for j in range(1, min(k, len(coeffs) - 1) + 1):
                acc = acc + coeffs[j] * inv[k - j]
            inv.append(-inv0 * acc)
        return inv
    inv0 = 1.0 / complex(c0)
    inv = [inv0]
    for k in range(1, m):
        acc = 0j
        for j in range(1, min(k, len(coeffs) - 1) + 1):
            acc += complex(coeffs[j]) * inv[k - j]
        inv.append(-inv0 * acc)
    return inv


def residue(r: RationalMap, p, mode: str = "exact", *, not_a_pole: str = "zero",
            contour_nodes: int = 512, radius: float | None = None, tol: float = 1e-12):
    """Residue of r at the finite point p.

    mode "exact" extracts the Laurent coefficient by shifted division
    (exact when the scalars are exact); mode "numeric" integrates over a
    circle around p with the trapezoid rule.  A regular point returns 0
    when not_a_pole == "zero" and raises NotAPole otherwise.
    """
    if is_inf(p):
        return residue_at_infinity(r, mode=mode, contour_nodes=contour_nodes, tol=tol)
    if mode == "numeric":
        return _residue_contour(r, p, contour_nodes, radius, tol, not_a_pole)
    exact = r.exact and _is_exact_scalar(p)
    work = r if exact else r.to_approx()
    pp = ExactComplex.coerce(p) if exact else complex(p)
    den_s = work.den.shift(pp)
    num_s = work.num.shift(pp)
    if exact:
        m = 0
        while m < len(den_s.coeffs) and den_s.coeffs[m].is_zero:
            m += 1
    else:
        dscale = max(abs(c) for c in den_s.coeffs)
        m = 0
        while m < len(den_s.coeffs) - 1 and abs(den_s.coeffs[m]) <= 1e-11 * dscale:
            m += 1
        if abs(den_s.coeffs[m]) <= 1e-11 * dscale:
            m += 1
    if m == 0:
        if not_a_pole == "raise":
            raise NotAPole(f"{p!r} is not a pole")
        return EC_ZERO if exact else 0j
    tail = list(den_s.coeffs[m:])
    inv = _series_inverse(tail, m, exact)
    # residue = coefficient of z^(m-1) in num_s * inv
    acc = EC_ZERO if exact else 0j
    for j in range(m):
        cnum = num_s.coeff(j)
        k = m - 1 - j
        if k < len(inv):
            acc = acc + cnum * inv[k]
    return acc


def _residue_contour(r: RationalMap, p, nodes: int, radius, tol, not_a_pole):
    work = r.to_approx()
    p = complex(p)
    pole_list = [complex(c.location) for c in work.poles(tol=1e-10)]
    dists = sorted(abs(p - q) for q in pole_list)
    on_pole = bool(dists) and dists[0] < 1e-7 * (1.0 + abs(p))
    if not on_pole and not_a_pole == "raise":
        raise NotAPole(f"{p!r} is not a pole")
    others = [d for d in dists if d > 1e-7 * (1.0 + abs(p))]
    auto = min(1.0, others[0] / 2.0) if others else 1.0
    rad = radius if radius is not None else auto
    if others and others[0] < 2.0 * rad - 1e-15:
        raise ContourTooLarge(f"pole within 2r of contour around {p!r}")
    val = contour_integral(work, p, rad, nodes)
    return val / (2j * math.pi)


def contour_integral(r: RationalMap, center: complex, radius: float, nodes: int = 512) -> complex:
    """Trapezoid-rule circle integral of r dz (spectrally accurate)."""
    work = r.to_approx()
    k = np.arange(nodes)
    w = np.exp(2j * np.pi * k / nodes)
    zs = complex(center) + radius * w
    vals = work.eval_many(zs)
    if not np.all(np.isfinite(vals)):
        raise OverflowError("contour hit a pole; shrink the radius")
    return complex(np.sum(vals * radius * w) * 2j * np.pi / nodes)


def residue_at_infinity(r: RationalMap, mode: str = "exact", *, contour_nodes: int = 512, tol: float = 1e-12):
    """Residue at ∞ of the 1-form r dz, i.e. residue at 0 of -r(1/w)/w^2."""
    dn = 0 if r.num.is_zero else r.num.degree
    dd = r.den.degree
    d = max(dn, dd)
    if r.num.is_zero:
        return EC_ZERO if r.exact else 0j
    revn = r.num.reversed_coeffs(d + 1)
    revd = r.den.reversed_coeffs(d + 1)
    # -r(1/w)/w^2 = -revn(w)/(revd(w) * w^2) after the common reversal
    exp = -2
    if exp >= 0:
        num = (-revn) * Poly.monomial(exp, exact=r.exact)
        den = revd
    else:
        num = -revn
        den = revd * Poly.monomial(-exp, exact=r.exact)
    s = RationalMap(num, den, _normalized=True)
    zero = EC(0) if s.exact else 0j
    return residue(s, zero, mode=mode, contour_nodes=contour_nodes, tol=tol)


def all_residues(r: RationalMap, tol: float = 1e-12):
    """Residues at every finite pole plus ∞; their sum vanishes identically.

    Pole locations come from the root finder, so residues are evaluated in
    approx mode even for exact maps (poles are generally irrational).
    """
    work = r.to_approx()
    items = [
        (cl.location, cl.multiplicity, residue(work, complex(cl.location)))
        for cl in r.poles(tol)
    ]
    inf_res = residue_at_infinity(work)
    return items, inf_res
