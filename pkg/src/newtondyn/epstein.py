"""Periodic cycles and Epstein's fixed-point invariants.

For a cycle of period n the multiplier, topological multiplicity m and
holomorphic index are those of the cycle point as a fixed point of f^n:

    m = (1/2 pi i) \\oint (1 - g'(w)) / (w - g(w)) dw,
    index = (1/2 pi i) \\oint 1 / (w - g(w)) dw,      g = f^n,

and the residu iteratif is m/2 - index. Both integrals are evaluated by the
trapezoidal rule on a circle, which converges geometrically for these
periodic analytic integrands.
"""
from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np
import sympy as sp

from . import _poly
from ._poly import RootSolverError
from .rational import (
    INF,
    HomogeneousRationalMap,
    IllConditionedHoleError,
    chordal,
    chordal_array,
    critical_points,
    evaluate,
    exact_number,
    extract_holes,
    is_infinite,
    to_affine,
)

__all__ = [
    "CycleReport",
    "FsiReport",
    "CriticalOrbit",
    "SolverCapError",
    "ContourError",
    "periodic_points",
    "find_cycles",
    "cycle_report",
    "holomorphic_index",
    "residu_iteratif",
    "contour_invariants",
    "classify_multiplier",
    "gamma_of",
    "gamma_delta",
    "critical_orbits",
    "attracting_cycles_from_orbits",
]

SOLVER_CAP = 70
NODES = 512
RADIUS_FLOOR = 1e-6
SUPERATTRACTING_TOL = 1e-8
UNIT_TOL = 1e-9
ROTATION_TOL = 1e-9
MAX_Q = 64
MERGE_TOL = 1e-10

NONREPELLING = (
    "superattracting",
    "attracting",
    "irrationally-indifferent",
    "parabolic-attracting",
    "parabolic-indifferent",
    "parabolic-repelling",
)


class SolverCapError(ValueError):
    pass


class ContourError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# helpers for points and charts


def _chart_of(z):
    if is_infinite(z):
        return 1, 0j
    z = complex(z)
    if abs(z) <= 1:
        return 0, z
    return 1, 1 / z


def _to_chart(z, chart):
    if chart == 0:
        return complex(z)
    return 0j if is_infinite(z) else (INF if z == 0 else 1 / complex(z))


def _image(f, z, n=1):
    """f^n(z) for a single affine point (``INF`` allowed)."""
    chart, w = _chart_of(z)
    val, _ = f.iterate_chart(np.array([w]), n, chart)
    v = complex(val[0])
    if chart == 0:
        return v
    if v == 0:
        return INF
    return 1 / v


def _derivative_along(f, z, n):
    chart, w = _chart_of(z)
    _, der = f.iterate_chart(np.array([w]), n, chart)
    return complex(der[0])


def _float_map(f):
    return f.to_float() if f.exact else f


# --------------------------------------------------------------------------
# periodic points


def _compose_coeffs(f, n):
    """Affine ascending coefficients (A_n, B_n) of f^n = A_n / B_n."""
    a, b = f.float_coeffs()
    d = f.formal_degree
    A, B = np.array([0, 1], dtype=complex), np.array([1], dtype=complex)
    for _ in range(n):
        Apow = [np.array([1.0 + 0j])]
        Bpow = [np.array([1.0 + 0j])]
        for _ in range(d):
            Apow.append(_poly.polymul(Apow[-1], A))
            Bpow.append(_poly.polymul(Bpow[-1], B))
        deg = d * max(A.size - 1, B.size - 1, 1)
        newA = np.zeros(deg + 1, dtype=complex)
        newB = np.zeros(deg + 1, dtype=complex)
        for i in range(d + 1):
            term = _poly.polymul(Apow[i], Bpow[d - i])
            newA[: term.size] += a[i] * term
            newB[: term.size] += b[i] * term
        s = max(np.abs(newA).max(), np.abs(newB).max())
        A, B = newA / s, newB / s
        # homogeneous degree bookkeeping: keep length d^k + 1
    return A, B


def _phi_values(f, n):
    """Callable giving (Phi, Phi') up to a common factor, Phi = A_n - z B_n."""

    def values(z):
        z = np.asarray(z, dtype=complex)
        a, b = f.float_coeffs()
        x, y = z.copy(), np.ones_like(z)
        dx, dy = np.ones_like(z), np.zeros_like(z)
        with np.errstate(all="ignore"):
            from .rational import _homog

            for _ in range(n):
                Fa, FaX, FaY = _homog(a, x, y)
                Fb, FbX, FbY = _homog(b, x, y)
                ndx = FaX * dx + FaY * dy
                ndy = FbX * dx + FbY * dy
                s = np.maximum(np.abs(Fa), np.abs(Fb))
                s = np.where(s == 0, 1.0, s)
                x, y, dx, dy = Fa / s, Fb / s, ndx / s, ndy / s
        return x - z * y, dx - y - z * dy

    return values


@functools.lru_cache(maxsize=64)
def periodic_points(f, n, cap=SOLVER_CAP):
    """All fixed points of f^n with multiplicity (as a tuple; ``INF`` allowed)."""
    f = _float_map(f)
    d = f.formal_degree
    total = d**n + 1
    if total > cap:
        raise SolverCapError(f"f^{n} has {total} fixed points, above the solver cap {cap}")
    A, B = _compose_coeffs(f, n)
    phi = np.zeros(total + 1, dtype=complex)
    phi[: A.size] += A
    phi[1 : B.size + 1] -= B
    core = _poly.trim(phi, 1e-12)
    m_inf = total - (core.size - 1)
    if m_inf > 0 and chordal(_image(f, INF, n), INF) > 1e-8:
        # the trimmed coefficients were noise, not a genuine root at infinity
        core = phi[: total + 1]
        m_inf = 0
    start = np.roots(core[::-1]) if core.size > 1 else np.zeros(0, complex)
    roots, done = _poly.aberth(_phi_values(f, n), start)
    bad = [z for z in roots if not _accept_periodic(f, z, n)]
    if bad:
        raise RootSolverError(
            f"{len(bad)} of {roots.size} periodic-point estimates failed to converge for period {n}",
            partial=tuple(roots),
        )
    out = [complex(z) for z in roots] + [INF] * m_inf
    return tuple(out)


def _accept_periodic(f, z, n):
    """Small residual, or a small Newton correction for strongly expanding points."""
    if not np.isfinite(z):
        return False
    w = _image(f, z, n)
    if chordal(w, z) <= 1e-7:
        return True
    if is_infinite(w):
        return False
    d = _derivative_along(f, z, n)
    if not np.isfinite(d) or abs(d - 1) < 1:
        return False
    return abs(w - z) / abs(d - 1) <= 1e-9 * max(1.0, abs(z))


def _group_points(points, radius=1e-5):
    """Cluster points (INF kept apart); returns list of (centre, count)."""
    fin = [p for p in points if not is_infinite(p)]
    n_inf = len(points) - len(fin)
    groups = []
    if fin:
        arr = np.array(fin)
        for g in _poly.cluster(arr, radius):
            groups.append((complex(arr[g].mean()), len(g)))
    if n_inf:
        groups.append((INF, n_inf))
    return groups


def _exact_period(f, z, n, tol=1e-8):
    for k in range(1, n + 1):
        if n % k == 0 and chordal(_image(f, z, k), z) <= tol:
            return k
    return None


def _in_region(z, region):
    if region is None:
        return True
    if is_infinite(z):
        return False
    x0, y0, x1, y1 = region
    z = complex(z)
    return x0 <= z.real <= x1 and y0 <= z.imag <= y1


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class CycleReport:
    points: tuple
    period: int
    multiplier: complex
    multiplicity: int
    index: complex
    residu: complex
    classification: str
    degeneracy: int | None = None
    rotation: tuple | None = None
    return_residu: complex | None = None
    notes: tuple = ()

    @property
    def gamma(self):
        return gamma_of(self)

    def contains(self, z, tol=1e-6):
        return any(chordal(p, z) <= tol for p in self.points)

    def same_cycle(self, other, tol=1e-6):
        return self.period == other.period and all(other.contains(p, tol) for p in self.points)

    def to_dict(self):
        from .jsonio import cnum

        return {
            "points": [cnum(p) for p in self.points],
            "period": self.period,
            "multiplier": cnum(self.multiplier),
            "multiplicity": self.multiplicity,
            "index": cnum(self.index),
            "residu": cnum(self.residu),
            "classification": self.classification,
            "degeneracy": self.degeneracy,
            "rotation": list(self.rotation) if self.rotation else None,
            "return_residu": cnum(self.return_residu) if self.return_residu is not None else None,
            "gamma": self.gamma,
            "notes": list(self.notes),
        }


def rotation_number(rho):
    """(p, q) with rho = exp(2 pi i p/q), q <= 64, or None."""
    if abs(abs(rho) - 1) > UNIT_TOL:
        return None
    theta = (cmath.phase(rho) / (2 * math.pi)) % 1.0
    fr = Fraction(theta).limit_denominator(MAX_Q)
    err = abs(theta - fr)
    if abs(theta - 1) < abs(theta - fr):  # theta just below 1
        fr, err = Fraction(0), abs(theta - 1)
    if err > ROTATION_TOL:
        return None
    return (fr.numerator % max(fr.denominator, 1), fr.denominator)


def classify_multiplier(rho):
    """Classification of a non-parabolic multiplier."""
    a = abs(rho)
    if a <= SUPERATTRACTING_TOL:
        return "superattracting"
    if a < 1 - UNIT_TOL:
        return "attracting"
    if a > 1 + UNIT_TOL:
        return "repelling"
    return "irrationally-indifferent"


def gamma_of(cycle):
    c = cycle.classification
    if c in ("repelling", "superattracting"):
        return 0
    if c in ("attracting", "irrationally-indifferent"):
        return 1
    nu = cycle.degeneracy or 0
    if c == "parabolic-repelling":
        return nu
    return nu + 1


# --------------------------------------------------------------------------
# contour quadrature


def contour_invariants(f, z, n, radius, nodes=NODES):
    """(multiplicity, index) of z as a fixed point of f^n on a circle of given radius."""
    chart, c = _chart_of(z)
    k = np.arange(nodes)
    e = np.exp(2j * np.pi * k / nodes)
    w = c + radius * e
    g, dg = f.iterate_chart(w, n, chart)
    with np.errstate(all="ignore"):
        h = 1.0 / (w - g)
        idx = np.mean(h * radius * e)
        m = np.mean((1.0 - dg) * h * radius * e)
    if not (np.isfinite(idx) and np.isfinite(m)):
        raise ContourError("non-finite integrand on contour")
    return complex(m), complex(idx)


def _others_distance(z, others):
    chart, c = _chart_of(z)
    best = math.inf
    for p in others:
        q = _to_chart(p, chart)
        if is_infinite(q):
            continue
        dist = abs(q - c)
        if dist > 0:
            best = min(best, dist)
    return best


def _contour_radius(z, others):
    r = 0.5 * _others_distance(z, others)
    return min(max(r, RADIUS_FLOOR), 0.25)


def _radius_floor(z, rho):
    """Smallest contour radius tried.

    A strongly expanding point of f^n has a pole of f^n at distance about
    |z| / |rho|, so the floor drops below RADIUS_FLOOR for large multipliers.
    """
    if rho is None or not np.isfinite(rho) or abs(rho) <= 1e3:
        return RADIUS_FLOOR
    _, c = _chart_of(z)
    scale = max(abs(c), 1e-3)
    return max(min(RADIUS_FLOOR, 1e-2 * scale / abs(rho)), 1e-12 * max(1.0, abs(c)))


def _stable_invariants(f, z, n, others, rho=None, expect_simple=None):
    """Contour invariants with the reproducible radius rule and auto-shrink."""
    R = _contour_radius(z, others)
    floor = _radius_floor(z, rho)
    last_err = None
    while R >= floor * (1 - 1e-12):
        try:
            m, idx = contour_invariants(f, z, n, R)
            mr = round(m.real)
            ok = abs(m - mr) <= 1e-6 and mr >= 1
            if ok and mr == 1 and rho is not None and abs(1 - rho) > 1e-12:
                closed = 1 / (1 - rho)
                ok = abs(idx - closed) <= 1e-6 * max(1.0, abs(closed))
            if ok and mr > 1:
                m2, idx2 = contour_invariants(f, z, n, R / 2)
                ok = abs(m2 - mr) <= 1e-6 and abs(idx2 - idx) <= 1e-6 * max(1.0, abs(idx))
            if ok:
                return int(mr), idx, R
            last_err = f"m={m:.6g}, index={idx:.6g} at radius {R:.3g}"
        except ContourError as exc:
            last_err = str(exc)
        R /= 2
    raise ContourError(f"contour quadrature failed down to radius floor: {last_err}")


# --------------------------------------------------------------------------
# building cycle reports


def _other_fixed_points(f, z, n):
    """Fixed points of f^n other than (the cluster at) z, if computable."""
    try:
        pts = periodic_points(_float_map(f), n)
    except SolverCapError:
        return None
    groups = [g for g, _ in _group_points(pts)]
    if not groups:
        return []
    own = min(range(len(groups)), key=lambda k: chordal(groups[k], z))
    return [g for k, g in enumerate(groups) if k != own]


def cycle_report(f, z, n, others=None):
    """Full report for the cycle through z of exact period n."""
    f = _float_map(f)
    pts = [z]
    for _ in range(n - 1):
        pts.append(_image(f, pts[-1]))
    rho = _derivative_along(f, z, n)
    if others is None:
        others = _other_fixed_points(f, z, n)
    if others is None:
        # fall back to the distances between the cycle's own points
        others = [p for p in pts[1:]]
    notes = []
    m, idx, R = _stable_invariants(f, z, n, others, rho)
    residu = m / 2 - idx
    classification = None
    nu = rot = ret = None
    if m >= 2:
        rot = (0, 1)
        rho = 1 + 0j if abs(rho - 1) <= 1e-4 else rho
    else:
        rot = rotation_number(rho)
    if rot is not None:
        p, q = rot
        if q == 1:
            mq, ret = m, residu
        else:
            mq, iq, _ = _stable_invariants(f, z, n * q, others)
            ret = mq / 2 - iq
        if mq == 1:
            notes.append("multiplier is numerically a root of unity but the return map has multiplicity 1")
            rot = None
            ret = None
        else:
            if (mq - 1) % q:
                notes.append(f"multiplicity {mq} of the return map is not of the form nu*q+1")
            nu = (mq - 1) // q
            # consistency of the residu under iteration: T(g) = 2 T(g^2)
            try:
                m2, i2, _ = _stable_invariants(f, z, 2 * n * q, others)
                if abs(ret - 2 * (m2 / 2 - i2)) > 1e-5:
                    notes.append("residu iteration identity violated")
            except ContourError:
                notes.append("residu iteration identity not checked")
            re = ret.real
            if abs(re) <= 1e-6:
                classification = "parabolic-indifferent"
            elif re < 0:
                classification = "parabolic-attracting"
            else:
                classification = "parabolic-repelling"
    if classification is None:
        classification = classify_multiplier(rho)
    return CycleReport(
        points=tuple(pts),
        period=n,
        multiplier=complex(rho),
        multiplicity=int(m),
        index=complex(idx),
        residu=complex(residu),
        classification=classification,
        degeneracy=nu,
        rotation=tuple(rot) if rot else None,
        return_residu=complex(ret) if ret is not None else None,
        notes=tuple(notes),
    )


def find_cycles(f, max_period, region=None, cap=SOLVER_CAP):
    """Every cycle of exact period <= max_period meeting ``region``.

    ``region`` is (x0, y0, x1, y1) or None for the whole sphere. Cycles are
    deduplicated up to rotation; a parabolic cluster of fixed points counts
    once with its multiplicity.
    """
    f = _float_map(f)
    try:
        degenerate = bool(extract_holes(f).holes)
    except IllConditionedHoleError:
        # near-common roots closer than 1e-4 but not within the hole tolerance:
        # the map is nondegenerate at working precision
        degenerate = False
    if degenerate:
        raise ValueError("cycles are computed for nondegenerate maps; reduce first")
    out = []
    for n in range(1, max_period + 1):
        pts = periodic_points(f, n, cap)
        groups = _group_points(pts)
        seen = []
        for z, cnt in groups:
            k = _exact_period(f, z, n)
            if k != n:
                continue
            if any(c.contains(z, 1e-6) for c in seen):
                continue
            others = [g for g, _ in groups if g is not z]
            rep = cycle_report(f, z, n, others)
            if cnt != rep.multiplicity:
                rep = replace(rep, notes=rep.notes + (f"root cluster size {cnt} vs contour multiplicity {rep.multiplicity}",))
            seen.append(rep)
        out.extend(c for c in seen if any(_in_region(p, region) for p in c.points))
    return out


def holomorphic_index(f, cycle):
    """Index of the cycle (as a fixed point of f^n) by contour quadrature."""
    f = _float_map(f)
    z = cycle.points[0]
    others = _other_fixed_points(f, z, cycle.period) or list(cycle.points[1:])
    _, idx, _ = _stable_invariants(f, z, cycle.period, others, cycle.multiplier)
    return idx


def residu_iteratif(f, cycle):
    return cycle.multiplicity / 2 - holomorphic_index(f, cycle)


# --------------------------------------------------------------------------
# critical orbits, gamma and delta


@dataclass(frozen=True)
class CriticalOrbit:
    point: object
    multiplicity: int
    status: str  # "finite", "infinite" or "unresolved"
    target: object = None  # index into the cycle list, or None
    exact: bool = False
    orbit: tuple = field(default=(), repr=False)
    reason: str = ""


@dataclass(frozen=True)
class FsiReport:
    gamma_per_cycle: tuple
    gamma_total: int
    delta: int
    satisfied: bool | None
    status: str = "ok"
    critical_orbits: tuple = ()
    notes: tuple = ()

    def to_dict(self):
        from .jsonio import cnum

        return {
            "gamma_per_cycle": [{"cycle": c.to_dict(), "gamma": g} for c, g in self.gamma_per_cycle],
            "gamma_total": self.gamma_total,
            "delta": self.delta,
            "satisfied": self.satisfied,
            "status": self.status,
            "critical_orbits": [
                {
                    "point": cnum(o.point),
                    "multiplicity": o.multiplicity,
                    "status": o.status,
                    "target_cycle": o.target,
                    "exact": o.exact,
                    "reason": o.reason,
                }
                for o in self.critical_orbits
            ],
            "notes": list(self.notes),
        }


def _horner(c, u):
    acc = 0j
    for x in reversed(c):
        acc = acc * u + x
    return acc


def _orbit(f, z, steps):
    """Orbit of one point with scalar Horner evaluation in the better chart."""
    a, b = (list(map(complex, c)) for c in f.float_coeffs())
    ar, br = a[::-1], b[::-1]
    pts = [z]
    for _ in range(steps):
        w = pts[-1]
        if is_infinite(w):
            Fa, Fb = _horner(ar, 0j), _horner(br, 0j)
        elif abs(w) <= 1:
            Fa, Fb = _horner(a, w), _horner(b, w)
        else:
            Fa, Fb = _horner(ar, 1 / w), _horner(br, 1 / w)
        if not (cmath.isfinite(Fa) and cmath.isfinite(Fb)):
            pts.append(complex(math.nan, math.nan))
        elif abs(Fb) >= abs(Fa):
            pts.append(Fa / Fb if Fb != 0 else complex(math.nan, math.nan))
        else:
            v = Fb / Fa
            pts.append(INF if v == 0 else 1 / v)
    return pts


def _refine_cycle_point(f, z, n, iters=60):
    """Newton's method on f^n(z) - z in the chart of z."""
    for _ in range(iters):
        chart, w = _chart_of(z)
        val, der = f.iterate_chart(np.array([w]), n, chart)
        g, dg = complex(val[0]), complex(der[0])
        if not (np.isfinite(g) and np.isfinite(dg)) or dg == 1:
            break
        step = (g - w) / (1 - dg)
        w2 = w + step
        z = w2 if chart == 0 else (INF if w2 == 0 else 1 / w2)
        if abs(step) <= 1e-15 * max(1.0, abs(w)):
            break
    return z


def attracting_cycles_from_orbits(f, seeds, horizon=2000, max_period=64):
    """Attracting cycles reached by the orbits of ``seeds`` (numerically)."""
    f = _float_map(f)
    found = []
    for s in seeds:
        pts = _orbit(f, s, horizon)
        tail = pts[-(2 * max_period + 2) :]
        last = tail[-1]
        n = None
        for p in range(1, min(max_period, len(tail) - 1) + 1):
            if chordal(tail[-1 - p], last) <= 1e-9:
                n = p
                break
        if n is None:
            continue
        z = _refine_cycle_point(f, last, n)
        n = _exact_period(f, z, n, 1e-9) or n
        if any(c.contains(z, 1e-6) for c in found):
            continue
        rep = cycle_report(f, z, n, others=None if f.formal_degree**n + 1 <= SOLVER_CAP else [])
        if rep.classification in ("attracting", "superattracting"):
            found.append(rep)
    return found


def _exact_orbit_finite(f, c, steps=12):
    """True if the exact orbit of c repeats within ``steps``; None if undecided."""
    z = exact_number(c)
    if z is None and not is_infinite(c):
        return None
    seen = [("inf" if z is None else z)]
    p = (1, 0) if z is None else (z, 1)
    for _ in range(steps):
        try:
            p = evaluate(f, p)
        except Exception:
            return None
        v = to_affine(p)
        key = "inf" if is_infinite(v) else v
        if key != "inf" and len(str(key)) > 400:
            return None
        if key in seen:
            return True
        seen.append(key)
    return None


def critical_orbits(f, cycles, horizon=2000):
    """Fate of every critical point: finite orbit, infinite tail or unresolved."""
    fl = _float_map(f)
    crits = critical_points(f)
    out = []
    for c, mult in crits:
        if f.exact:
            ex = _exact_orbit_finite(f, c)
            if ex:
                out.append(CriticalOrbit(c, mult, "finite", _cycle_hit(fl, c, cycles), True))
                continue
        cz = INF if is_infinite(c) else complex(c)
        pts = _orbit(fl, cz, horizon)
        status, target, reason = _numeric_fate(fl, pts, cycles)
        out.append(CriticalOrbit(cz, mult, status, target, False, tuple(pts[:64]), reason))
    return out


def _cycle_hit(f, c, cycles):
    for _ in range(64):
        for k, cyc in enumerate(cycles):
            if cyc.contains(c, 1e-9):
                return k
        c = _image(f, c)
    return None


def _numeric_fate(f, pts, cycles):
    for i, z in enumerate(pts):
        for k, cyc in enumerate(cycles):
            d = min(chordal(z, p) for p in cyc.points)
            if d <= MERGE_TOL:
                prev = min(chordal(pts[i - 1], p) for p in cyc.points) if i else math.inf
                if prev > 1e-3:
                    return "finite", k, "lands on a cycle"
                return "infinite", k, "converges to a cycle"
    # slow (parabolic) convergence: end of orbit close to a nonrepelling cycle
    last = pts[-1]
    for k, cyc in enumerate(cycles):
        if cyc.classification.startswith("parabolic") or cyc.classification == "irrationally-indifferent":
            d = min(chordal(last, p) for p in cyc.points)
            d_half = min(chordal(pts[len(pts) // 2], p) for p in cyc.points)
            if d < 1e-2 and d < d_half:
                return "infinite", k, "approaches a neutral cycle"
    return "unresolved", None, "orbit neither lands on nor converges to a known cycle within the horizon"


def _merge_tails(f, orbits, cycles, horizon):
    """Count infinite tails, merging orbits that eventually coincide."""
    inf = [o for o in orbits if o.status == "infinite"]
    if not inf:
        return 0
    steps = min(horizon, 200)
    seqs = []
    for o in inf:
        pts = _orbit(f, o.point, steps)
        seqs.append(pts)
    parent = list(range(len(inf)))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i in range(len(inf)):
        for j in range(i + 1, len(inf)):
            if find(i) == find(j):
                continue
            if _coincide(seqs[i], seqs[j], cycles):
                parent[find(i)] = find(j)
    return len({find(i) for i in range(len(inf))})


def _coincide(a, b, cycles):
    cyc_pts = [p for c in cycles for p in c.points]

    def far_from_cycles(z):
        return all(chordal(z, p) > 1e-4 for p in cyc_pts)

    for i, z in enumerate(a):
        if not far_from_cycles(z):
            break
        for j, w in enumerate(b):
            if not far_from_cycles(w):
                break
            if chordal(z, w) <= MERGE_TOL:
                # confirm on the next iterates
                ok = all(
                    chordal(a[i + k], b[j + k]) <= 1e-6
                    for k in range(1, 4)
                    if i + k < len(a) and j + k < len(b)
                )
                if ok:
                    return True
    return False


def gamma_delta(f, critical_orbit_horizon=2000, max_period=None):
    """Cycle invariant gamma(f), tail count delta(f) and the FSI check."""
    fl = _float_map(f)
    d = fl.formal_degree
    if max_period is None:
        max_period = max(p for p in range(1, 8) if d**p + 1 <= SOLVER_CAP)
    crit = [c for c, _ in critical_points(f)]
    seeds = [INF if is_infinite(c) else complex(c) for c in crit]
    try:
        cycles = [c for c in find_cycles(fl, max_period) if c.classification in NONREPELLING]
        for c in attracting_cycles_from_orbits(fl, seeds, critical_orbit_horizon):
            if not any(c.same_cycle(o) for o in cycles):
                cycles.append(c)
    except (ContourError, RootSolverError) as exc:
        note = f"cycle invariants not computable: {type(exc).__name__}: {exc}"
        return FsiReport((), 0, 0, None, "unresolved", (), (note,))
    orbits = critical_orbits(f, cycles, critical_orbit_horizon)
    gammas = tuple((c, gamma_of(c)) for c in cycles)
    g = sum(v for _, v in gammas)
    unresolved = [o for o in orbits if o.status == "unresolved"]
    delta = _merge_tails(fl, orbits, cycles, critical_orbit_horizon)
    notes = ["infinite tails merged by eventual coincidence of orbits"]
    if unresolved:
        return FsiReport(gammas, g, delta, None, "unresolved", tuple(orbits), tuple(notes))
    return FsiReport(gammas, g, delta, g <= delta, "ok", tuple(orbits), tuple(notes))
