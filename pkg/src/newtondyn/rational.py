"""Rational maps of the Riemann sphere in homogeneous coordinates.

A point of coefficient space is a pair of binary forms

    F_a(X, Y) = sum_i num[i] X^i Y^(d-i),   F_b(X, Y) = sum_i den[i] X^i Y^(d-i),

so that ``f([X:Y]) = [F_a : F_b]``. When the two forms share a factor the map
is degenerate; the common zeros are its holes and removing the common factor
gives the reduced map.

Two coefficient arithmetics are supported. If every coefficient is a Gaussian
rational (``int``, ``Fraction`` or a sympy rational ``a + b*I``) the map is
*exact* and gcds, fixed-point multiplicities and multipliers at rational
points are computed symbolically. Otherwise coefficients are complex floats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import sympy as sp

from . import _poly
from ._poly import RootSolverError

__all__ = [
    "INF",
    "HomogeneousRationalMap",
    "HoleDecomposition",
    "FixedPointRecord",
    "IndeterminatePointError",
    "IllConditionedHoleError",
    "NotFixedError",
    "RootSolverError",
    "as_projective",
    "to_affine",
    "chordal",
    "evaluate",
    "extract_holes",
    "fixed_points",
    "multiplier_at",
    "critical_points",
]

INF = complex(math.inf, 0.0)

CHORDAL_TOL = 1e-9
HOLE_TOL = 1e-8
# |rho - 1| at or below this counts as multiplier one
PARABOLIC_TOL = 1e-6
_ZERO_COEFF = 1e-14

_z = sp.Symbol("z")


class IndeterminatePointError(ValueError):
    """Both homogeneous components vanish: the point is a hole."""


class IllConditionedHoleError(ValueError):
    """Near-common roots too far apart to merge and too close to ignore."""


class NotFixedError(ValueError):
    pass


# --------------------------------------------------------------------------
# numbers and points


def exact_number(x):
    """``x`` as a sympy Gaussian rational, or None if it is not exact."""
    if isinstance(x, (bool, np.bool_)):
        return None
    if isinstance(x, (int, np.integer)):
        return sp.Integer(int(x))
    if isinstance(x, Fraction):
        return sp.Rational(x.numerator, x.denominator)
    if isinstance(x, sp.Basic):
        if x in (sp.zoo, sp.oo, -sp.oo):
            return None
        re, im = sp.expand(x).as_real_imag()
        if re.is_Rational and im.is_Rational:
            return re + sp.I * im
    return None


def is_infinite(z):
    if isinstance(z, sp.Basic):
        return z in (sp.zoo, sp.oo, -sp.oo)
    try:
        return math.isinf(abs(complex(z)))
    except TypeError:
        return False


def as_projective(z):
    """Affine value (or ``INF``) to a homogeneous pair."""
    if isinstance(z, tuple):
        return z
    if is_infinite(z):
        return (1, 0)
    return (z, 1)


def to_affine(p):
    x, y = p
    if y == 0:
        return INF
    ex, ey = exact_number(x), exact_number(y)
    if ex is not None and ey is not None and (isinstance(x, sp.Basic) or isinstance(y, sp.Basic)):
        return sp.nsimplify(sp.expand(ex / ey))
    return complex(x) / complex(y)


def normalize_point(p):
    x, y = complex(p[0]), complex(p[1])
    n = math.hypot(abs(x), abs(y))
    if n == 0:
        raise IndeterminatePointError("zero vector is not a projective point")
    return (x / n, y / n)


def chordal(p, q):
    """Chordal distance between two points (affine values or pairs)."""
    x1, y1 = (complex(v) for v in as_projective(p))
    x2, y2 = (complex(v) for v in as_projective(q))
    n1 = math.hypot(abs(x1), abs(y1))
    n2 = math.hypot(abs(x2), abs(y2))
    return abs(x1 * y2 - x2 * y1) / (n1 * n2)


def chordal_array(z, w):
    """Vectorised chordal distance for affine arrays (``inf`` allowed)."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    zi, wi = np.isinf(z), np.isinf(w)
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        d = np.abs(z - w) / (np.sqrt(1 + np.abs(z) ** 2) * np.sqrt(1 + np.abs(w) ** 2))
        d = np.where(zi & ~wi, 1 / np.sqrt(1 + np.abs(w) ** 2), d)
        d = np.where(wi & ~zi, 1 / np.sqrt(1 + np.abs(z) ** 2), d)
        d = np.where(zi & wi, 0.0, d)
    return d


# --------------------------------------------------------------------------
# the map


def _homog(c, x, y):
    """F(x, y), F_X, F_Y for ascending coefficients ``c`` (vectorised)."""
    d = len(c) - 1
    xp = [np.ones_like(x)]
    yp = [np.ones_like(y)]
    for _ in range(d):
        xp.append(xp[-1] * x)
        yp.append(yp[-1] * y)
    F = sum(c[i] * xp[i] * yp[d - i] for i in range(d + 1))
    FX = sum(i * c[i] * xp[i - 1] * yp[d - i] for i in range(1, d + 1)) if d else 0 * x
    FY = sum((d - i) * c[i] * xp[i] * yp[d - i - 1] for i in range(d)) if d else 0 * x
    return F, FX, FY


@dataclass(frozen=True, eq=False)
class HomogeneousRationalMap:
    """A point ``[F_a : F_b]`` of the coefficient space of degree-d maps."""

    num_coeffs: tuple
    den_coeffs: tuple
    exact: bool = False

    def __post_init__(self):
        if len(self.num_coeffs) != len(self.den_coeffs):
            raise ValueError("numerator and denominator need the same formal degree")
        if len(self.num_coeffs) < 1:
            raise ValueError("formal degree must be >= 0")
        if all(c == 0 for c in self.num_coeffs + self.den_coeffs):
            raise ValueError("all coefficients vanish")

    @classmethod
    def from_coeffs(cls, num, den, normalize=True):
        num, den = list(num), list(den)
        d = max(len(num), len(den)) - 1
        num += [0] * (d + 1 - len(num))
        den += [0] * (d + 1 - len(den))
        ex = [exact_number(c) for c in num + den]
        if all(e is not None for e in ex):
            coeffs = ex
            exact = True
        else:
            coeffs = [complex(c) for c in num + den]
            exact = False
        if normalize:
            coeffs = _normalize_coeffs(coeffs, exact)
        return cls(tuple(coeffs[: d + 1]), tuple(coeffs[d + 1 :]), exact)

    @classmethod
    def from_affine(cls, numer, denom, degree=None, normalize=True):
        """Build from ascending affine coefficient lists of p(z)/q(z)."""
        numer, denom = list(numer), list(denom)
        d = degree if degree is not None else max(len(numer), len(denom)) - 1
        if len(numer) > d + 1 or len(denom) > d + 1:
            raise ValueError("formal degree smaller than polynomial degree")
        numer += [0] * (d + 1 - len(numer))
        denom += [0] * (d + 1 - len(denom))
        return cls.from_coeffs(numer, denom, normalize=normalize)

    @property
    def formal_degree(self):
        return len(self.num_coeffs) - 1

    @property
    def degree(self):
        """Actual degree after removing holes."""
        return extract_holes(self).reduced_map.formal_degree

    def float_coeffs(self):
        return (
            np.array([complex(c) for c in self.num_coeffs]),
            np.array([complex(c) for c in self.den_coeffs]),
        )

    def to_float(self):
        a, b = self.float_coeffs()
        return HomogeneousRationalMap(tuple(a), tuple(b), False)

    def sympy_polys(self):
        if not self.exact:
            raise TypeError("sympy polynomials need exact coefficients")
        a = sp.Poly(list(reversed(self.num_coeffs)), _z, domain="QQ_I")
        b = sp.Poly(list(reversed(self.den_coeffs)), _z, domain="QQ_I")
        return a, b

    def __call__(self, z):
        """Affine evaluation on arrays; poles give ``inf``, holes ``nan``."""
        z = np.asarray(z, dtype=complex)
        a, b = self.float_coeffs()
        inf = np.isinf(z)
        x = np.where(inf, 1.0, z)
        y = np.where(inf, 0.0, 1.0).astype(complex)
        Fa = _homog(a, x, y)[0]
        Fb = _homog(b, x, y)[0]
        with np.errstate(divide="ignore", invalid="ignore"):
            out = Fa / Fb
        out = np.where((Fb == 0) & (Fa != 0), INF, out)
        return out if out.ndim else complex(out)

    def iterate_chart(self, w, n=1, chart=0):
        """Value and derivative of ``f^n`` in one affine chart.

        ``chart=0`` uses the coordinate z, ``chart=1`` the coordinate 1/z.
        Homogeneous pairs are rescaled at each step, so orbits through
        infinity are fine.
        """
        a, b = self.float_coeffs()
        w = np.asarray(w, dtype=complex)
        one = np.ones_like(w)
        if chart == 0:
            x, y, dx, dy = w, one, one, 0 * one
        else:
            x, y, dx, dy = one, w, 0 * one, one
        with np.errstate(all="ignore"):
            for _ in range(n):
                Fa, FaX, FaY = _homog(a, x, y)
                Fb, FbX, FbY = _homog(b, x, y)
                ndx = FaX * dx + FaY * dy
                ndy = FbX * dx + FbY * dy
                s = np.maximum(np.abs(Fa), np.abs(Fb))
                x, y, dx, dy = Fa / s, Fb / s, ndx / s, ndy / s
            if chart == 0:
                val = x / y
                der = (dx * y - x * dy) / (y * y)
            else:
                val = y / x
                der = (dy * x - y * dx) / (x * x)
        return val, der

    def affine_value(self, z):
        return self(z)

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"HomogeneousRationalMap(d={self.formal_degree}, {kind}, num={list(self.num_coeffs)}, den={list(self.den_coeffs)})"


def _normalize_coeffs(coeffs, exact):
    if exact:
        mods = [sp.re(c) ** 2 + sp.im(c) ** 2 for c in coeffs]
        top = max(mods)
        k = next(i for i, m in enumerate(mods) if m == top)
        piv = coeffs[k]
        return [sp.nsimplify(sp.expand(c / piv)) for c in coeffs]
    arr = np.array(coeffs, dtype=complex)
    mods = np.abs(arr)
    k = int(np.argmax(mods >= (1 - 1e-12) * mods.max()))
    return list(arr / arr[k])


# --------------------------------------------------------------------------
# evaluation


def evaluate(f, p, at_holes="raise"):
    """Image of the projective point ``p`` (affine values are accepted too).

    Float maps return a unit-norm representative; exact maps evaluated at an
    exact point return an exact pair scaled so the last nonzero coordinate
    is 1. At a hole, ``at_holes='reduced'`` evaluates the reduced map instead.
    """
    x, y = as_projective(p)
    if f.exact and exact_number(x) is not None and exact_number(y) is not None:
        x, y = exact_number(x), exact_number(y)
        Fa = sp.expand(sum(c * x**i * y ** (f.formal_degree - i) for i, c in enumerate(f.num_coeffs)))
        Fb = sp.expand(sum(c * x**i * y ** (f.formal_degree - i) for i, c in enumerate(f.den_coeffs)))
        if Fa == 0 and Fb == 0:
            return _at_hole(f, p, at_holes)
        if Fb != 0:
            return (sp.nsimplify(sp.expand(Fa / Fb)), sp.Integer(1))
        return (sp.Integer(1), sp.Integer(0))
    a, b = f.float_coeffs()
    x, y = normalize_point((x, y))
    Fa = _homog(a, np.complex128(x), np.complex128(y))[0]
    Fb = _homog(b, np.complex128(x), np.complex128(y))[0]
    scale = max(np.abs(a).sum(), np.abs(b).sum())
    if abs(Fa) <= 1e-12 * scale and abs(Fb) <= 1e-12 * scale:
        return _at_hole(f, p, at_holes)
    return normalize_point((complex(Fa), complex(Fb)))


def _at_hole(f, p, at_holes):
    if at_holes == "reduced":
        red = extract_holes(f).reduced_map
        if red.formal_degree == f.formal_degree:
            raise IndeterminatePointError(f"{p!r} is indeterminate")
        return evaluate(red, p, at_holes="raise")
    raise IndeterminatePointError(f"{p!r} is a hole of the map; use the reduced map")


# --------------------------------------------------------------------------
# holes


@dataclass(frozen=True)
class HoleDecomposition:
    """``f = H_f * f_hat``; ``holes`` lists (projective point, multiplicity)."""

    holes: tuple
    reduced_map: HomogeneousRationalMap
    original: HomogeneousRationalMap

    @property
    def total_multiplicity(self):
        return sum(m for _, m in self.holes)

    @property
    def hole_values(self):
        return [to_affine(p) for p, _ in self.holes]

    def gcd_coeffs(self):
        """Ascending coefficients (in X, with Y implicit) of H_f."""
        out = np.array([1.0 + 0j])
        for p, m in self.holes:
            x, y = (complex(v) for v in p)
            # linear form y*X - x*Y vanishes at [x:y]
            for _ in range(m):
                out = _mul_forms(out, np.array([-x, y]))
        return out

    def recompose(self):
        """H_f * f_hat as a normalized map (equals f up to scale)."""
        h = self.gcd_coeffs()
        a, b = self.reduced_map.float_coeffs()
        return HomogeneousRationalMap.from_coeffs(_mul_forms(h, a), _mul_forms(h, b))


def _mul_forms(u, v):
    """Product of binary forms stored by ascending X power."""
    return np.convolve(np.asarray(u, dtype=complex), np.asarray(v, dtype=complex))


def _leading_zeros(c, tol):
    k = 0
    while k < len(c) and abs(c[k]) <= tol:
        k += 1
    return k


def extract_holes(f):
    """Common zeros of F_a and F_b with multiplicities, and the reduced map."""
    if f.exact:
        return _extract_exact(f)
    return _extract_float(f)


def _extract_exact(f):
    d = f.formal_degree
    num, den = list(f.num_coeffs), list(f.den_coeffs)
    deg_a = max((i for i, c in enumerate(num) if c != 0), default=-1)
    deg_b = max((i for i, c in enumerate(den) if c != 0), default=-1)
    m_inf = d - max(deg_a, deg_b)
    A, B = f.sympy_polys()
    if A.is_zero:
        g = B
    elif B.is_zero:
        g = A
    else:
        g = sp.gcd(A, B)
    g = g.monic() if not g.is_zero else g
    holes = []
    if g.degree() > 0:
        for r, mult in _exact_roots(g):
            holes.append(((r, sp.Integer(1)), mult))
        holes.sort(key=lambda h: (float(sp.re(h[0][0])), float(sp.im(h[0][0]))))
    if m_inf > 0:
        holes.append(((sp.Integer(1), sp.Integer(0)), m_inf))
    qa = sp.div(A, g)[0] if g.degree() > 0 else A
    qb = sp.div(B, g)[0] if g.degree() > 0 else B
    dr = d - m_inf - max(g.degree(), 0)
    ra = list(reversed(qa.all_coeffs())) if not qa.is_zero else [0]
    rb = list(reversed(qb.all_coeffs())) if not qb.is_zero else [0]
    ra += [0] * (dr + 1 - len(ra))
    rb += [0] * (dr + 1 - len(rb))
    red = HomogeneousRationalMap.from_coeffs(ra[: dr + 1], rb[: dr + 1])
    return HoleDecomposition(tuple(holes), red, f)


def _exact_roots(P):
    """Roots of a sympy Poly over QQ_I with multiplicity.

    Linear factors give exact roots; higher irreducible factors are solved
    numerically (their roots are simple, being roots of an irreducible factor).
    """
    out = []
    for factor, mult in P.factor_list()[1]:
        if factor.degree() == 1:
            c1, c0 = factor.all_coeffs()
            out.append((sp.nsimplify(sp.expand(-c0 / c1)), mult))
        else:
            coeffs = [complex(c) for c in reversed(factor.all_coeffs())]
            out.extend((complex(r), mult) for r in _poly.poly_roots(coeffs))
    return out


def _extract_float(f):
    d = f.formal_degree
    a, b = f.float_coeffs()
    scale = max(np.abs(a).max(), np.abs(b).max())
    tol = _ZERO_COEFF * scale
    a = np.where(np.abs(a) <= tol, 0, a)
    b = np.where(np.abs(b) <= tol, 0, b)
    holes = []
    # zeros at [1:0] (top coefficients) and [0:1] (bottom ones) are read off exactly
    m_inf = min(_leading_zeros(a[::-1], 0), _leading_zeros(b[::-1], 0))
    a_core = a[: d + 1 - m_inf]
    b_core = b[: d + 1 - m_inf]
    m0 = min(_leading_zeros(a_core, 0), _leading_zeros(b_core, 0))
    a_core, b_core = a_core[m0:], b_core[m0:]
    if m0:
        holes.append(((0j, 1 + 0j), m0))
    ra = _poly.poly_roots(a_core) if np.any(a_core) else np.zeros(0, complex)
    rb = _poly.poly_roots(b_core) if np.any(b_core) else np.zeros(0, complex)
    if not np.any(a_core):
        ra = rb.copy()
    if not np.any(b_core):
        rb = ra.copy()
    common = _match_roots(ra, rb)
    for z, m in common:
        holes.append(((complex(z), 1 + 0j), m))
        for _ in range(m):
            a_core = _deflate(a_core, z)
            b_core = _deflate(b_core, z)
    if m_inf:
        holes.append(((1 + 0j, 0j), m_inf))
    dr = d - sum(m for _, m in holes)
    a_core = np.concatenate([a_core, np.zeros(max(0, dr + 1 - a_core.size))])[: dr + 1]
    b_core = np.concatenate([b_core, np.zeros(max(0, dr + 1 - b_core.size))])[: dr + 1]
    red = HomogeneousRationalMap.from_coeffs(a_core, b_core)
    holes = [((complex(p[0]), complex(p[1])), m) for p, m in holes]
    return HoleDecomposition(tuple(holes), red, f)


def _match_roots(ra, rb):
    """Pair root clusters of two polynomials; returns (centre, multiplicity)."""
    if ra.size == 0 or rb.size == 0:
        return []
    ca = [(ra[g].mean(), len(g)) for g in _poly.cluster(ra, 1e-5)]
    cb = [(rb[g].mean(), len(g)) for g in _poly.cluster(rb, 1e-5)]
    out, used = [], set()
    for za, ma in ca:
        best, bj = None, None
        for j, (zb, mb) in enumerate(cb):
            if j in used:
                continue
            dist = abs(za - zb) / max(1.0, abs(za))
            if best is None or dist < best:
                best, bj = dist, j
        if best is None:
            continue
        if best <= HOLE_TOL:
            used.add(bj)
            out.append(((za + cb[bj][0]) / 2, min(ma, cb[bj][1])))
        elif best <= 1e-4:
            raise IllConditionedHoleError(
                f"near-common roots {za:.12g} and {cb[bj][0]:.12g} differ by {best:.3g} "
                f"(merge tolerance {HOLE_TOL:g})"
            )
    return out


def _deflate(c, z):
    """Divide ascending coefficients by (X - z)."""
    n = c.size - 1
    q = np.zeros(n, dtype=complex)
    acc = 0j
    for i in range(n, 0, -1):
        acc = acc * z + c[i]
        q[i - 1] = acc
    return q


# --------------------------------------------------------------------------
# fixed points


@dataclass(frozen=True)
class FixedPointRecord:
    location: tuple
    multiplier: complex
    multiplicity: int

    @property
    def z(self):
        return to_affine(self.location)

    @property
    def is_parabolic(self):
        return self.multiplicity > 1


def _fixed_form(f):
    """Ascending coefficients of phi(z) = F_a(z,1) - z F_b(z,1), padded to d+2."""
    d = f.formal_degree
    num, den = list(f.num_coeffs), list(f.den_coeffs)
    zero = sp.Integer(0) if f.exact else 0j
    phi = [zero] * (d + 2)
    for i in range(d + 1):
        phi[i] += num[i]
        phi[i + 1] -= den[i]
    return phi


def fixed_points(f):
    """All d+1 fixed points with multiplicity and multiplier."""
    d = f.formal_degree
    if d < 1:
        raise ValueError("fixed points need degree >= 1")
    if extract_holes(f).holes:
        raise ValueError("fixed points are defined for nondegenerate maps; reduce first")
    phi = _fixed_form(f)
    if all(c == 0 for c in phi):
        raise ValueError("the identity has no isolated fixed points")
    if f.exact:
        recs = _fixed_exact(f, phi)
    else:
        recs = _fixed_float(f, phi)
    total = sum(r.multiplicity for r in recs)
    if total != d + 1:
        raise RootSolverError(f"found fixed-point multiplicity {total}, expected {d + 1}", partial=recs)
    return recs


def _fixed_exact(f, phi):
    d = f.formal_degree
    top = max(i for i, c in enumerate(phi) if c != 0)
    m_inf = d + 1 - top
    P = sp.Poly(list(reversed(phi[: top + 1])), _z, domain="QQ_I")
    recs = []
    if P.degree() > 0:
        for r, mult in _exact_roots(P):
            if exact_number(r) is not None:
                rho = multiplier_at(f, r)
            else:
                rho = multiplier_at(f.to_float(), r)
            recs.append(FixedPointRecord((r, sp.Integer(1)), rho, mult))
    if m_inf:
        recs.append(FixedPointRecord((1, 0), multiplier_at(f, INF, check=False), m_inf))
    return recs


def _fixed_float(f, phi):
    d = f.formal_degree
    c = np.array(phi, dtype=complex)
    scale = np.abs(c).max()
    core = c.copy()
    top = core.size - 1
    while top >= 0 and abs(core[top]) <= _ZERO_COEFF * scale:
        top -= 1
    m_inf = d + 1 - top
    roots = _poly.poly_roots(core[: top + 1])
    recs = []
    if roots.size:
        _, rho = f.iterate_chart(roots, 1, 0)
        near_one = np.abs(rho - 1) <= PARABOLIC_TOL
        simple = [i for i in range(roots.size) if not near_one[i]]
        for i in simple:
            recs.append(FixedPointRecord((complex(roots[i]), 1 + 0j), complex(rho[i]), 1))
        multi = np.flatnonzero(near_one)
        for g in _poly.cluster(roots[multi], 1e-3):
            idx = multi[g]
            z = complex(roots[idx].mean())
            _, r = f.iterate_chart(np.array([z]), 1, 0)
            recs.append(FixedPointRecord((z, 1 + 0j), complex(r[0]), len(idx)))
    if m_inf:
        _, r = f.iterate_chart(np.array([0j]), 1, 1)
        recs.append(FixedPointRecord((1 + 0j, 0j), complex(r[0]), m_inf))
    return recs


def multiplier_at(f, z, check=True):
    """Derivative of ``f`` at the fixed point ``z`` in a local chart."""
    z = to_affine(z) if isinstance(z, tuple) else z
    if f.exact and (is_infinite(z) or exact_number(z) is not None):
        return _multiplier_exact(f, z, check)
    if is_infinite(z):
        val, der = f.iterate_chart(np.array([0j]), 1, 1)
        if check and abs(val[0]) > 1e-8:
            raise NotFixedError(f"infinity maps to {1 / val[0]}")
        return complex(der[0])
    z = complex(z)
    chart = 0 if abs(z) <= 1 else 1
    w = z if chart == 0 else 1 / z
    val, der = f.iterate_chart(np.array([w]), 1, chart)
    if check and chordal(_from_chart(val[0], chart), z) > 1e-7:
        raise NotFixedError(f"{z} maps to {_from_chart(val[0], chart)}")
    return complex(der[0])


def _from_chart(w, chart):
    if chart == 0:
        return w
    return INF if w == 0 else 1 / w


def _multiplier_exact(f, z, check):
    d = f.formal_degree
    w = sp.Symbol("w")
    if is_infinite(z):
        Fa = sum(c * w ** (d - i) for i, c in enumerate(f.num_coeffs))
        Fb = sum(c * w ** (d - i) for i, c in enumerate(f.den_coeffs))
        g = Fb / Fa
        pt = sp.Integer(0)
    else:
        g = sum(c * w**i for i, c in enumerate(f.num_coeffs)) / sum(c * w**i for i, c in enumerate(f.den_coeffs))
        pt = exact_number(z)
    if check:
        val = sp.simplify(g.subs(w, pt))
        if val != pt:
            raise NotFixedError(f"{z} maps to {val}")
    return sp.nsimplify(sp.simplify(sp.diff(g, w).subs(w, pt)))


# --------------------------------------------------------------------------
# critical points


def critical_points(f):
    """Critical points of a nondegenerate map, as (affine value, multiplicity).

    Zeros of the Jacobian form F_aX F_bY - F_aY F_bX (degree 2d-2). Exact
    maps give exact critical points wherever they are Gaussian rationals.
    """
    d = f.formal_degree
    if f.exact:
        return _critical_exact(f)
    a, b = f.float_coeffs()
    i = np.arange(d + 1)
    # partial derivatives as forms of degree d-1, ascending in X
    aX, aY = (i * a)[1:], ((d - i) * a)[:-1]
    bX, bY = (i * b)[1:], ((d - i) * b)[:-1]
    J = _mul_forms(aX, bY) - _mul_forms(aY, bX)
    scale = np.abs(J).max()
    if scale == 0:
        raise ValueError("constant map")
    top = J.size - 1
    while top >= 0 and abs(J[top]) <= _ZERO_COEFF * scale:
        top -= 1
    m_inf = (2 * d - 2) - top
    roots = _poly.poly_roots(J[: top + 1])
    out = [(complex(roots[g].mean()), len(g)) for g in _poly.cluster(roots, 1e-5)]
    if m_inf:
        out.append((INF, m_inf))
    return out


def _critical_exact(f):
    d = f.formal_degree
    a, b = list(f.num_coeffs), list(f.den_coeffs)
    aX = [i * a[i] for i in range(1, d + 1)]
    aY = [(d - i) * a[i] for i in range(d)]
    bX = [i * b[i] for i in range(1, d + 1)]
    bY = [(d - i) * b[i] for i in range(d)]
    J = [sp.Integer(0)] * (2 * d - 1)
    for i in range(d):
        for j in range(d):
            J[i + j] += aX[i] * bY[j] - aY[i] * bX[j]
    J = [sp.expand(c) for c in J]
    if all(c == 0 for c in J):
        raise ValueError("constant map")
    top = max(i for i, c in enumerate(J) if c != 0)
    out = []
    if top > 0:
        P = sp.Poly(list(reversed(J[: top + 1])), _z, domain="QQ_I")
        out = _exact_roots(P)
    if top < 2 * d - 2:
        out.append((INF, 2 * d - 2 - top))
    return out
