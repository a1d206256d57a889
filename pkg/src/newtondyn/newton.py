"""Newton maps N_P(z) = z - P(z)/P'(z) built from roots or coefficients.

For a polynomial with ascending coefficients ``c`` homogenised to degree d,
the Newton map is ``[X P_X - P : Y P_X]``; its coefficients are

    num[i] = (i - 1) c[i],    den[i] = (i + 1) c[i + 1],

which also makes sense when ``P`` has repeated roots or roots at infinity
(the resulting point of coefficient space is then degenerate).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from . import _poly
from .rational import (
    INF,
    HomogeneousRationalMap,
    _exact_roots,
    chordal,
    evaluate,
    exact_number,
    is_infinite,
    to_affine,
)

__all__ = [
    "NewtonMap",
    "MarkedNormalForm",
    "CriticalPoint",
    "RepeatedRootError",
    "newton_from_roots",
    "newton_from_poly",
    "newton_coefficients",
    "projective_newton_map",
    "classify_critical_points",
    "normalize_marked",
    "per2_polynomial",
    "per2_slice",
]

_z = sp.Symbol("z")


class RepeatedRootError(ValueError):
    """Roots collide; use the degeneration tools for colliding roots."""


def _as_number(x):
    e = exact_number(x)
    return e if e is not None else complex(x)


def _all_exact(values):
    return all(exact_number(v) is not None for v in values)


def newton_coefficients(poly):
    """(num, den) of the homogeneous Newton map of ascending coefficients ``poly``."""
    c = list(poly)
    d = len(c) - 1
    num = [(i - 1) * c[i] for i in range(d + 1)]
    den = [(i + 1) * c[i + 1] for i in range(d)] + [0 * c[0]]
    return num, den


def _linear_forms_product(points):
    """Ascending-in-X coefficients of prod (beta X - alpha Y) over [alpha:beta]."""
    exact = _all_exact([v for p in points for v in p])
    one = sp.Integer(1) if exact else 1 + 0j
    out = [one]
    for alpha, beta in points:
        if exact:
            alpha, beta = exact_number(alpha), exact_number(beta)
        else:
            alpha, beta = complex(alpha), complex(beta)
        lin = [-alpha, beta]
        new = [0 * one] * (len(out) + 1)
        for i, a in enumerate(out):
            for j, b in enumerate(lin):
                new[i + j] = new[i + j] + a * b
        out = [sp.expand(v) for v in new] if exact else new
    return out


def projective_newton_map(roots, normalize=True):
    """Newton map of prod over roots, allowing repeats and ``INF``.

    Roots are affine values or ``INF``. A repeated root or a root at infinity
    gives a degenerate point of coefficient space (holes).
    """
    pts = [(1, 0) if is_infinite(r) else (r, 1) for r in roots]
    coeffs = _linear_forms_product(pts)
    num, den = newton_coefficients(coeffs)
    return HomogeneousRationalMap.from_coeffs(num, den, normalize=normalize)


@dataclass(frozen=True, eq=False)
class NewtonMap:
    """Newton map of a polynomial with d distinct roots."""

    roots: tuple
    poly: tuple
    map: HomogeneousRationalMap
    second_derivative_roots: tuple
    exact: bool = False
    _crit: list = field(default=None, repr=False, compare=False)

    @property
    def degree(self):
        return len(self.poly) - 1

    def poly_float(self):
        return np.array([complex(c) for c in self.poly])

    def P(self, z):
        return _poly.horner(self.poly_float(), z)

    def __call__(self, z):
        return self.map(z)

    def multiplier_at_infinity(self):
        d = self.degree
        return sp.Rational(d, d - 1) if self.exact else d / (d - 1)

    @property
    def additional_critical_points(self):
        return list(self.second_derivative_roots)

    def root_array(self):
        return np.array([complex(r) for r in self.roots])


def _derivative(c):
    return [i * c[i] for i in range(1, len(c))]


def _poly_from_roots(roots):
    exact = _all_exact(roots)
    if exact:
        out = [sp.Integer(1)]
        for r in roots:
            r = exact_number(r)
            new = [sp.Integer(0)] * (len(out) + 1)
            for i, a in enumerate(out):
                new[i] += -r * a
                new[i + 1] += a
            out = [sp.expand(v) for v in new]
        return out
    return list(_poly.from_roots([complex(r) for r in roots]))


def _check_distinct(roots, exact):
    for a, b in itertools.combinations(roots, 2):
        if exact:
            if sp.expand(exact_number(a) - exact_number(b)) == 0:
                raise RepeatedRootError(
                    f"repeated root {a}; colliding roots define a degenerate map, "
                    "see projective_newton_map and the degeneration module"
                )
        elif abs(complex(a) - complex(b)) <= 1e-12:
            raise RepeatedRootError(
                f"roots {a} and {b} closer than 1e-12; colliding roots define a degenerate map, "
                "see projective_newton_map and the degeneration module"
            )


def newton_from_roots(roots):
    """Newton map of prod (z - r) over the given distinct finite roots."""
    roots = list(roots)
    if len(roots) < 2:
        raise ValueError("need at least two roots")
    if any(is_infinite(r) for r in roots):
        raise ValueError("roots must be finite; use projective_newton_map for roots at infinity")
    exact = _all_exact(roots)
    roots = [exact_number(r) for r in roots] if exact else [complex(r) for r in roots]
    _check_distinct(roots, exact)
    poly = _poly_from_roots(roots)
    return _build(poly, roots, exact)


def newton_from_poly(coeffs):
    """Newton map of the polynomial with ascending coefficients ``coeffs``."""
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) < 3:
        raise ValueError("need a polynomial of degree >= 2")
    exact = _all_exact(coeffs)
    if exact:
        coeffs = [exact_number(c) for c in coeffs]
        P = sp.Poly(list(reversed(coeffs)), _z, domain="QQ_I")
        if sp.gcd(P, P.diff(_z)).degree() > 0:
            raise RepeatedRootError("polynomial has a repeated root")
        roots = []
        for r, m in _exact_roots(P):
            roots.extend([r] * m)
    else:
        coeffs = [complex(c) for c in coeffs]
        roots = list(_poly.poly_roots(coeffs))
        _check_distinct(roots, False)
    roots.sort(key=lambda r: (float(sp.re(r)), float(sp.im(r))) if isinstance(r, sp.Basic) else (r.real, r.imag))
    return _build(coeffs, roots, exact)


def _build(poly, roots, exact):
    num, den = newton_coefficients(poly)
    f = HomogeneousRationalMap.from_coeffs(num, den)
    d2 = _derivative(_derivative(poly))
    if exact:
        P2 = sp.Poly(list(reversed(d2)), _z, domain="QQ_I")
        add = []
        if P2.degree() > 0:
            for r, m in _exact_roots(P2):
                add.extend([r] * m)
    else:
        add = list(_poly.poly_roots(np.array(d2, dtype=complex)))
    return NewtonMap(tuple(roots), tuple(poly), f, tuple(add), exact)


# --------------------------------------------------------------------------
# critical points


@dataclass(frozen=True)
class CriticalPoint:
    point: object
    kind: str  # "root" or "additional"
    free: bool
    multiplicity: int
    also_additional: bool = False

    @property
    def z(self):
        return complex(self.point)


def _same(a, b, exact):
    if exact and exact_number(a) is not None and exact_number(b) is not None:
        return sp.expand(exact_number(a) - exact_number(b)) == 0
    return abs(complex(a) - complex(b)) <= 1e-9 * max(1.0, abs(complex(a)))


def classify_critical_points(N):
    """All 2d-2 critical points grouped by location.

    A critical point is free when N does not fix it. A point that is both a
    root and a zero of P'' is reported once (kind ``root``, not free) with the
    combined multiplicity.
    """
    out = []
    add = list(N.second_derivative_roots)
    # group repeated additional points
    groups = []
    for a in add:
        for g in groups:
            if _same(g[0], a, N.exact):
                g[1] += 1
                break
        else:
            groups.append([a, 1])
    used = [False] * len(groups)
    for r in N.roots:
        mult, also = 1, False
        for k, (a, m) in enumerate(groups):
            if not used[k] and _same(a, r, N.exact):
                used[k] = True
                mult += m
                also = True
        out.append(CriticalPoint(r, "root", False, mult, also))
    for k, (a, m) in enumerate(groups):
        if used[k]:
            continue
        out.append(CriticalPoint(a, "additional", not _is_fixed(N, a), m))
    return out


def _is_fixed(N, c):
    if N.exact and exact_number(c) is not None:
        img = evaluate(N.map, (exact_number(c), 1))
        return to_affine(img) == exact_number(c)
    img = N.map(complex(c))
    return chordal(img, complex(c)) <= 1e-9


def free_critical_points(N):
    return [c for c in classify_critical_points(N) if c.kind == "additional" and c.free]


# --------------------------------------------------------------------------
# marked normal form


@dataclass(frozen=True)
class MarkedNormalForm:
    """``normalized_roots[i] = scale * roots[perm[i]] + shift``."""

    normalized_roots: tuple
    scale: object
    shift: object
    order: tuple

    @property
    def r(self):
        return self.normalized_roots[2]

    @property
    def s(self):
        return self.normalized_roots[3]


def _key(z):
    z = complex(z)
    # rounding keeps float noise from deciding ties
    return (round(z.real, 9), round(z.imag, 9))


def normalize_marked(roots):
    """Send the farthest pair of roots to {0, 1}, keeping the rest in order.

    Ties (several farthest pairs, or both orientations of a pair) are broken
    by the lexicographically smallest list of remaining images, compared by
    (real, imaginary) parts.
    """
    roots = list(roots)
    if len(roots) < 3:
        raise ValueError("need at least three roots")
    exact = _all_exact(roots)
    vals = [exact_number(r) for r in roots] if exact else [complex(r) for r in roots]
    dist = {}
    for i, j in itertools.permutations(range(len(vals)), 2):
        dist[i, j] = abs(complex(vals[i]) - complex(vals[j]))
    dmax = max(dist.values())
    best = None
    for (i, j), dd in dist.items():
        if exact:
            dij = sp.expand((vals[i] - vals[j]) * sp.conjugate(vals[i] - vals[j]))
            if dd < dmax * (1 - 1e-9):
                continue
            if not all(
                sp.expand((vals[a] - vals[b]) * sp.conjugate(vals[a] - vals[b])) <= dij
                for a, b in itertools.combinations(range(len(vals)), 2)
            ):
                continue
        elif dd < dmax * (1 - 1e-12):
            continue
        scale = 1 / (vals[j] - vals[i])
        shift = -vals[i] * scale
        if exact:
            scale, shift = sp.nsimplify(sp.expand(scale)), sp.nsimplify(sp.expand(shift))
        rest = [k for k in range(len(vals)) if k not in (i, j)]
        imgs = [scale * vals[k] + shift for k in rest]
        if exact:
            imgs = [sp.nsimplify(sp.expand(v)) for v in imgs]
        key = [_key(v) for v in imgs]
        if best is None or key < best[0]:
            best = (key, imgs, scale, shift, (i, j, *rest))
    _, imgs, scale, shift, order = best
    zero, one = (sp.Integer(0), sp.Integer(1)) if exact else (0j, 1 + 0j)
    return MarkedNormalForm((zero, one, *imgs), scale, shift, order)


# --------------------------------------------------------------------------
# the slice with a superattracting 2-cycle 0 <-> 1


def per2_polynomial(c):
    """Ascending coefficients of z^4/12 - c z^3/6 + (4c-3) z/12 + (3-4c)/12.

    For every admissible c its Newton map swaps 0 and 1, and its additional
    critical points are 0 and c (P'' = z^2 - c z).
    """
    e = exact_number(c)
    if e is not None:
        c = e
        q = sp.Rational
        return [(3 - 4 * c) / 12, (4 * c - 3) / 12, sp.Integer(0), -c / 6, q(1, 12)]
    c = complex(c)
    return [(3 - 4 * c) / 12, (4 * c - 3) / 12, 0j, -c / 6, 1 / 12]


def per2_slice(c):
    """Newton map of :func:`per2_polynomial`; raises on repeated roots."""
    return newton_from_poly(per2_polynomial(c))
