"""Numeric sampling of degenerating families and comparison with their limits.

A family is sampled at a decreasing list of parameters t. Cycles are
continued from the largest t downwards, their limit positions are estimated
by Aitken extrapolation over the last three samples, and the limits are
compared with the holes of the limit map. The same samples drive the basin
shrinkage measurement near a hole and the numeric cross-check of the
series reduction.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy as sp
from scipy.optimize import linear_sum_assignment
from scipy.spatial import ConvexHull, QhullError

from . import berkovich as bk
from .basins import basin_raster
from .epstein import _derivative_along, _image, cycle_report, find_cycles, periodic_points
from .newton import newton_coefficients, newton_from_roots, per2_polynomial
from .puiseux import PuiseuxSeries, parse_family, series
from .rational import (
    INF,
    HomogeneousRationalMap,
    chordal,
    chordal_array,
    extract_holes,
    is_infinite,
    to_affine,
)

__all__ = [
    "DEFAULT_T",
    "Family",
    "FamilySample",
    "CycleTrack",
    "series_family",
    "roots_family",
    "map_family",
    "per2_family",
    "odd_quintic_family",
    "sample_family",
    "track_limit_cycles",
    "aitken",
    "basin_shrink_check",
    "parabolic_collision_probe",
    "compare_with_berkovich",
    "projective_distance",
    "numeric_degeneration_type",
    "dichotomy_check",
    "family_from_spec",
    "degeneration_report",
]

DEFAULT_T = (1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
COLLISION_TOL = 1e-12
HOLE_FACTOR = 10.0
ERR_FLOOR = 1e-10
MAX_REFINE = 6
RESOLUTION_ULPS = 64  # pixels narrower than this many ulps of the centre are not trusted


# --------------------------------------------------------------------------
# families


@dataclass
class Family:
    """A holomorphic family t -> f_t with its limit at t = 0.

    ``roots_at`` is set for Newton families (t -> list of roots);
    ``map_at`` always returns a HomogeneousRationalMap. ``series_roots`` is
    set when the roots are Puiseux series, which enables the comparison
    with the series reduction.
    """

    name: str
    map_at: object
    limit: HomogeneousRationalMap
    roots_at: object = None
    series_roots: list | None = None

    @property
    def is_newton(self):
        return self.roots_at is not None

    def newton_at(self, t):
        return newton_from_roots(self.roots_at(t))

    @property
    def marked(self):
        """(r, s) when the family is a marked quartic {0, 1, r, s}."""
        if self.series_roots is None or len(self.series_roots) != 4:
            return None
        a, b = self.series_roots[:2]
        if a.is_exact_zero and (b - 1).is_exact_zero:
            return self.series_roots[2], self.series_roots[3]
        return None


def _limit_from_poly(coeffs):
    num, den = newton_coefficients(coeffs)
    return HomogeneousRationalMap.from_coeffs(num, den)


def _newton_map_at(roots_at):
    def f(t):
        return newton_from_roots(roots_at(t)).map

    return f


def series_family(spec, name=None):
    """Newton family from Puiseux roots: a spec string, {r, s}, or a list of roots."""
    if isinstance(spec, str):
        spec = parse_family(spec)
    if isinstance(spec, dict):
        if "roots" in spec:
            roots = [series(x) for x in spec["roots"]]
        else:
            roots = [PuiseuxSeries.zero(), PuiseuxSeries.coerce(1), series(spec["r"]), series(spec["s"])]
    else:
        roots = [series(x) for x in spec]

    def roots_at(t):
        return [x(t) for x in roots]

    red = []
    for x in roots:
        if x.terms and x.valuation < 0:
            raise ValueError("roots must stay bounded as t -> 0; normalize the family first")
        red.append(x.reduce() if x.terms else 0j)
    limit = _limit_from_poly(_exact_poly(red))
    label = name or "roots " + ", ".join(str(x) for x in roots)
    return Family(label, _newton_map_at(roots_at), limit, roots_at, roots)


def _exact_poly(roots):
    """Ascending coefficients of prod (z - root), rationalized when possible."""
    ex = bk._rationalize([complex(r) for r in roots])
    z = sp.Symbol("z")
    if ex is not None:
        P = sp.Poly(sp.prod([z - r for r in ex]), z)
        return list(reversed(P.all_coeffs()))
    from ._poly import from_roots

    return list(from_roots([complex(r) for r in roots]))


def roots_family(roots_at, limit_roots, name="family"):
    """Newton family from a callable t -> roots and the limit roots (repeats allowed)."""
    limit = _limit_from_poly(_exact_poly(limit_roots))
    return Family(name, _newton_map_at(roots_at), limit, roots_at, None)


def map_family(map_at, limit, name="family"):
    """General family of rational maps (no Newton structure)."""
    return Family(name, map_at, limit)


def per2_family(c0, direction=1.0):
    """Newton maps of the slice with the superattracting cycle 0 <-> 1, at c = c0 + direction*t."""
    c0e = bk._rationalize([complex(c0)])
    c0e = c0e[0] if c0e else complex(c0)

    def roots_at(t):
        c = complex(c0) + direction * t
        coeffs = np.array(per2_polynomial(c), dtype=complex)
        return list(np.roots(coeffs[::-1]))

    limit = _limit_from_poly(per2_polynomial(c0e))
    return Family(f"per2 c = {c0} + {direction}*t", _newton_map_at(roots_at), limit, roots_at, None)


def odd_quintic_family():
    """f_t = -N_t for the roots {-1, -t, 0, t, 1}; f_t o f_t = N_t o N_t."""

    def map_at(t):
        g = newton_from_roots([-1.0, -t, 0.0, t, 1.0]).map
        num, den = g.float_coeffs()
        return HomogeneousRationalMap.from_coeffs(-num, den)

    base = _limit_from_poly(_exact_poly([-1, 0, 0, 0, 1]))
    limit = HomogeneousRationalMap.from_coeffs([-c for c in base.num_coeffs], list(base.den_coeffs))
    return Family("odd quintic -N_{-1,-t,0,t,1}", map_at, limit)


# --------------------------------------------------------------------------
# sampling


@dataclass
class FamilySample:
    family: Family
    t_values: tuple
    maps: list
    newton: list
    dropped: list = field(default_factory=list)

    @property
    def limit(self):
        return self.family.limit

    def holes(self):
        return [(_cplx(to_affine(p)), m) for p, m in extract_holes(self.family.limit).holes]

    def reduced_limit(self):
        g = extract_holes(self.family.limit).reduced_map
        return g.to_float() if g.exact else g


def _cplx(z):
    return INF if z is None or is_infinite(z) else complex(z)


def _collides(roots):
    r = np.asarray(roots, dtype=complex)
    d = np.abs(r[:, None] - r[None, :])
    np.fill_diagonal(d, np.inf)
    return d.min() <= COLLISION_TOL * max(1.0, np.abs(r).max())


def sample_family(family, t_values=DEFAULT_T):
    """Evaluate the family at each t, dropping (with a warning) sampled collisions."""
    if not isinstance(family, Family):
        family = series_family(family)
    ts, maps, newton, dropped = [], [], [], []
    for t in sorted(t_values, reverse=True):
        if family.is_newton:
            roots = family.roots_at(t)
            if _collides(roots):
                warnings.warn(f"roots collide at t = {t}; sample dropped")
                dropped.append(t)
                continue
            N = newton_from_roots(roots)
            newton.append(N)
            maps.append(N.map)
        else:
            newton.append(None)
            maps.append(family.map_at(t))
        ts.append(t)
    return FamilySample(family, tuple(ts), maps, newton, dropped)


# --------------------------------------------------------------------------
# cycles and their limits


def _cycles(f, n):
    """Cycles of exact period n as (points, multiplier), finite points only."""
    pts = [p for p in periodic_points(f, n) if not is_infinite(p)]
    if not pts:
        return [], []
    arr = np.array(pts)
    d = np.abs(arr[:, None] - arr[None, :])
    np.fill_diagonal(d, np.inf)
    tol = max(1e-13, 1e-3 * float(d.min())) if len(pts) > 1 else 1e-9
    out = []
    for z in pts:
        if any(min(abs(z - q) for q in c[0]) <= tol for c in out):
            continue
        orbit = [z]
        for _ in range(n - 1):
            orbit.append(_image(f, orbit[-1]))
        if any(is_infinite(w) for w in orbit):
            continue
        back = _image(f, orbit[-1])
        if is_infinite(back) or abs(back - z) > 1e-6 * max(1.0, abs(z)) + 10 * tol:
            continue
        # exact period: no earlier return
        if any(abs(orbit[k] - z) <= tol for k in range(1, n)):
            continue
        out.append((tuple(complex(w) for w in orbit), _derivative_along(f, z, n)))
    return out, pts


def aitken(seq):
    """(limit, error estimate) of the last three terms; falls back to the last term."""
    seq = [complex(x) for x in seq]
    if len(seq) < 3:
        return seq[-1], abs(seq[-1] - seq[0]) if len(seq) > 1 else np.inf

    def acc(a, b, c):
        den = (c - b) - (b - a)
        if abs(den) <= 1e-300 or abs(den) <= 1e-14 * max(abs(a), abs(b), abs(c), 1e-300):
            return c
        return c - (c - b) ** 2 / den

    A = acc(*seq[-3:])
    if len(seq) >= 4:
        err = abs(A - acc(*seq[-4:-1]))
    else:
        err = abs(seq[-1] - A)
    return A, err


def _limit_point(seq):
    """Aitken limit with the chart switched for orbits that run to infinity."""
    seq = [complex(x) for x in seq]
    if all(abs(z) > 1 for z in seq[-3:]):
        w, err = aitken([1 / z for z in seq])
        if abs(w) <= ERR_FLOOR:
            return INF, err
        return 1 / w, err / abs(w) ** 2
    return aitken(seq)


@dataclass
class CycleTrack:
    period: int
    t_values: tuple
    points: np.ndarray  # (len(t), period), NaN once lost
    multipliers: np.ndarray
    reports: list
    phase_limits: list  # per phase (limit, error)
    limit: list  # Gamma: distinct limit positions
    holes: list
    colliding_holes: list
    relation: str  # "none", "equal" (Gamma inside the holes), "proper" (hole strictly inside Gamma)
    partial: bool = False
    notes: list = field(default_factory=list)

    @property
    def hole_collision(self):
        return bool(self.colliding_holes)

    @property
    def attracting(self):
        m = self.multipliers[np.isfinite(self.multipliers)]
        return bool(m.size) and bool(np.all(np.abs(m) < 1))

    def to_dict(self):
        from .jsonio import cnum

        return {
            "period": self.period,
            "t_values": list(self.t_values),
            "points": [[cnum(complex(z)) if np.isfinite(z) else None for z in row] for row in self.points],
            "multipliers": [cnum(complex(m)) if np.isfinite(m) else None for m in self.multipliers],
            "limit": [cnum(z) for z in self.limit],
            "limit_errors": [float(e) for _, e in self.phase_limits],
            "holes": [cnum(h) for h in self.holes],
            "colliding_holes": [cnum(h) for h in self.colliding_holes],
            "hole_collision": self.hole_collision,
            "relation": self.relation,
            "partial": self.partial,
            "notes": list(self.notes),
        }


def _match(cur, candidates, others):
    """Best (displacement, aligned points) among candidate cycles, and the allowed step."""
    n = len(cur)
    cur = np.array(cur)
    best = (np.inf, None)
    for pts, rho in candidates:
        pts = np.array(pts)
        for s in range(n):
            al = np.roll(pts, -s)
            disp = float(np.abs(al - cur).max())
            if disp < best[0]:
                best = (disp, (tuple(al), rho))
    gap = np.inf
    if n > 1:
        d = np.abs(cur[:, None] - cur[None, :])
        np.fill_diagonal(d, np.inf)
        gap = float(d.min())
    far = [q for q in others if np.abs(cur - q).min() > 1e-9 * max(1.0, abs(q))]
    if far:
        gap = min(gap, float(min(np.abs(cur - q).min() for q in far)))
    return best, gap


def _continue(family, cur, t_prev, t_next, n, depth=0):
    f_prev = family.map_at(t_prev)
    _, others = _cycles(f_prev, n)
    cands, _ = _cycles(family.map_at(t_next), n)
    (disp, hit), gap = _match(cur, cands, others)
    if hit is not None and disp <= gap / 2:
        return hit
    if depth >= MAX_REFINE:
        return None
    t_mid = float(np.sqrt(t_prev * t_next))
    mid = _continue(family, cur, t_prev, t_mid, n, depth + 1)
    if mid is None:
        return None
    return _continue(family, mid[0], t_mid, t_next, n, depth + 1)


def track_limit_cycles(sample, period, select="nonrepelling", reports=True):
    """Continue cycles of the given period from the largest t down to the smallest.

    ``select`` is "nonrepelling", "attracting", "all", or a list of seed
    points at the largest t (the cycle through the nearest periodic point is
    followed).
    """
    fam = sample.family
    ts = sample.t_values
    cyc0, _ = _cycles(sample.maps[0], period)
    if isinstance(select, str):
        keep = {
            "all": lambda r: True,
            "nonrepelling": lambda r: abs(r) <= 1 + 1e-9,
            "attracting": lambda r: abs(r) < 1,
        }[select]
        chosen = [c for c in cyc0 if keep(c[1])]
    else:
        chosen = []
        for seed in select:
            best = min(cyc0, key=lambda c: min(abs(np.array(c[0]) - seed)), default=None)
            if best is not None:
                k = int(np.argmin(np.abs(np.array(best[0]) - seed)))
                chosen.append((tuple(np.roll(best[0], -k)), best[1]))
    holes = [h for h, _ in sample.holes()]
    out = []
    for pts, rho in chosen:
        rows = [np.array(pts)]
        mults = [rho]
        partial = False
        cur = pts
        for k in range(1, len(ts)):
            hit = _continue(fam, cur, ts[k - 1], ts[k], period)
            if hit is None:
                partial = True
                break
            cur = hit[0]
            rows.append(np.array(hit[0]))
            mults.append(hit[1])
        P = np.full((len(ts), period), np.nan + 0j)
        M = np.full(len(ts), np.nan + 0j)
        for k, (row, m) in enumerate(zip(rows, mults)):
            P[k] = row
            M[k] = m
        reps = []
        if reports:
            for k in range(len(rows)):
                try:
                    reps.append(cycle_report(sample.maps[k], complex(P[k, 0]), period))
                except Exception as exc:  # contour trouble at very small t
                    reps.append(None)
        out.append(_finish_track(period, ts, P, M, reps, holes, partial))
    return out


def _finish_track(period, ts, P, M, reps, holes, partial):
    good = [k for k in range(len(ts)) if np.all(np.isfinite(P[k]))]
    notes = []
    phase_limits = []
    if len(good) < 3:
        notes.append("fewer than three samples; limit taken as the last sample")
    for i in range(period):
        seq = [P[k, i] for k in good]
        phase_limits.append(_limit_point(seq) if len(seq) >= 3 else (complex(seq[-1]), np.inf))
    gamma = []
    for z, err in phase_limits:
        tol = max(HOLE_FACTOR * err, ERR_FLOOR)
        if not any(_close(z, w, tol) for w in gamma):
            gamma.append(z)
    colliding = []
    flags = []
    for z, err in phase_limits:
        tol = max(HOLE_FACTOR * err, ERR_FLOOR)
        hit = [h for h in holes if _close(z, h, tol)]
        flags.append(bool(hit))
        for h in hit:
            if not any(_close(h, c, 0) for c in colliding):
                colliding.append(h)
    if not colliding:
        rel = "none"
    elif all(flags):
        rel = "equal"
    else:
        rel = "proper"
    return CycleTrack(period, tuple(ts), P, M, reps, phase_limits, gamma, holes, colliding, rel, partial, notes)


def _close(a, b, tol):
    if is_infinite(a) or is_infinite(b):
        return is_infinite(a) and is_infinite(b) or chordal(a, b) <= tol
    return abs(complex(a) - complex(b)) <= tol


# --------------------------------------------------------------------------
# basin shrinkage near a hole


def _diameter(pts):
    if len(pts) < 3:
        return float(np.abs(pts[:, None] - pts[None, :]).max()) if len(pts) else 0.0
    xy = np.column_stack([pts.real, pts.imag])
    try:
        hull = xy[ConvexHull(xy).vertices]
    except QhullError:
        hull = xy
    h = hull[:, 0] + 1j * hull[:, 1]
    return float(np.abs(h[:, None] - h[None, :]).max())


def _component_at(N, cycle, phase, center, half, res):
    window = (center.real - half, center.imag - half, center.real + half, center.imag + half)
    # capture radius well below the pixel size, so the component is not inflated
    tol = min(1e-6, 1e-3 * half / res)
    ras = basin_raster(N, window=window, resolution=(res, res), cycles=[cycle], cycle_tol=tol)
    p = ras.pixel_of(cycle.points[phase])
    if p is None:
        return None, ras
    if ras.labels[p] < 0 or ras.targets[ras.labels[p]] != ("cycle", 0, phase):
        # the pixel is coarser than the component; zoom in
        return None, ras
    cid = ras.components[p]
    return ras.components == cid, ras


def _measure(N, cycle, phase, center, res=256, start=0.5, max_steps=60):
    """Diameter of the basin component of a cycle point, zooming until well resolved.

    Returns (diameter, raster). When the component is narrower than what
    double precision can resolve around ``center`` the raster is None and the
    diameter is an upper bound (the width of the finest window tried).
    """
    half = start
    floor = RESOLUTION_ULPS * np.finfo(float).eps * max(1.0, abs(center)) * res
    for _ in range(max_steps):
        if half < floor:
            return 2 * half * 4, None
        mask, ras = _component_at(N, cycle, phase, center, half, res)
        if mask is None:
            half /= 4
            continue
        touches = mask[0].any() or mask[-1].any() or mask[:, 0].any() or mask[:, -1].any()
        ii, jj = np.nonzero(mask)
        extent = max(ii.max() - ii.min(), jj.max() - jj.min()) + 1
        if touches:
            if half >= 64 * start:
                return np.inf, ras
            half *= 2
            continue
        if extent < res // 8:
            half = max(half * extent / (res / 2), half / 16)
            continue
        pts = ras.pixel_centers()[mask]
        return _diameter(pts), ras
    return np.nan, None


def _separated(N, cycle, phase, hole, v_radius, res=256):
    """(separated, distance bound): does the component of a cycle point avoid the disk V?

    Pixels of V whose orbits reach the cycle with this phase are found on a
    raster covering V. If there are none the component misses V; otherwise a
    raster covering both V and the cycle point decides connectivity.
    """
    hole = complex(hole)
    half = 1.05 * v_radius
    tol = min(1e-6, 1e-3 * half / res)
    win = (hole.real - half, hole.imag - half, hole.real + half, hole.imag + half)
    ras = basin_raster(N, window=win, resolution=(res, res), cycles=[cycle], cycle_tol=tol)
    k = ras.targets.index(("cycle", 0, phase))
    Z = ras.pixel_centers()
    inside = (np.abs(Z - hole) < v_radius) & (ras.labels == k)
    if not inside.any():
        return True, v_radius
    z = cycle.points[phase]
    half = 1.1 * max(abs(z - hole) + v_radius, v_radius)
    cx = (z + hole) / 2
    win = (cx.real - half, cx.imag - half, cx.real + half, cx.imag + half)
    ras = basin_raster(N, window=win, resolution=(2 * res, 2 * res), cycles=[cycle], cycle_tol=tol)
    p = ras.pixel_of(z)
    if p is None or ras.labels[p] != k:
        return False, 0.0
    mask = ras.components == ras.components[p]
    Z = ras.pixel_centers()
    d = float(np.abs(Z[mask] - hole).min())
    return d >= v_radius, d


class _CycleStub:
    def __init__(self, points):
        self.points = tuple(complex(p) for p in points)
        self.period = len(self.points)


def basin_shrink_check(sample, track, resolution=256):
    """Diameters of the component at the hole-bound cycle point, and separation of the others.

    Requires a cycle whose limit contains a hole and also a point away from
    the holes; otherwise the report is returned with ``skipped`` set.
    """
    report = {"skipped": False, "reason": None, "t_values": [], "diameters": [], "separation": []}
    if not sample.family.is_newton:
        report.update(skipped=True, reason="not a Newton family")
        return report
    if track.relation != "proper":
        why = {
            "none": "the cycle limit misses the holes",
            "equal": "the whole cycle collides with the hole",
        }[track.relation]
        report.update(skipped=True, reason=why)
        return report
    hole = track.colliding_holes[0]
    on_hole = [i for i, (z, e) in enumerate(track.phase_limits) if _close(z, hole, max(HOLE_FACTOR * e, ERR_FLOOR))]
    away = [i for i in range(track.period) if i not in on_hole]
    i0 = on_hole[0]
    lim_away = [track.phase_limits[i][0] for i in away]
    r_limit = min(abs(complex(z) - hole) for z in lim_away if not is_infinite(z))
    v_radius = 0.1 * r_limit
    diam, sep, bounded = [], [], []
    for k, t in enumerate(sample.t_values):
        if not np.all(np.isfinite(track.points[k])):
            break
        N = sample.newton[k]
        cyc = _CycleStub(track.points[k])
        d, ras = _measure(N, cyc, i0, complex(track.points[k, i0]), res=resolution)
        diam.append(d)
        bounded.append(ras is None)
        checks = [_separated(N, cyc, i, hole, v_radius, resolution) for i in away]
        sep.append((all(c[0] for c in checks), min(c[1] for c in checks)))
        report["t_values"].append(t)
    report["diameters"] = diam
    # True where the component was below double-precision resolution and the value is an upper bound
    report["upper_bound_only"] = bounded
    report["separation"] = sep
    report["neighbourhood_radius"] = v_radius
    # an unbounded (or beyond the largest window) component counts as infinite
    # samples below double-precision resolution carry no information either way
    resolved = [d for d, ub in zip(diam, bounded) if not ub]
    report["monotone"] = (
        len(resolved) >= 2
        and np.isfinite(resolved[-1])
        and all(a > b or (np.isinf(a) and np.isfinite(b)) for a, b in zip(resolved, resolved[1:]))
    )
    report["separated"] = all(ok for ok, _ in sep)
    report["separation"] = [d for _, d in sep]
    report["hole"] = hole
    report["passed"] = bool(report["monotone"] and report["separated"])
    return report


# --------------------------------------------------------------------------
# parabolic collisions


def parabolic_collision_probe(sample, track1, track2, max_period=None):
    """Classify the common limit of two tracked cycles, or None when the limits are disjoint."""
    holes = [h for h, _ in sample.holes()]
    meet = None
    for z1, e1 in track1.phase_limits:
        for z2, e2 in track2.phase_limits:
            tol = max(HOLE_FACTOR * max(e1, e2), 1e-6)
            if _close(z1, z2, tol):
                if any(_close(z1, h, tol) for h in holes):
                    continue
                meet = complex(z1)
                break
        if meet is not None:
            break
    if meet is None:
        return None
    g = sample.reduced_limit()
    n_max = max_period or max(track1.period, track2.period)
    cyc = None
    for c in find_cycles(g, n_max):
        if any(abs(complex(p) - meet) <= 1e-3 for p in c.points if not is_infinite(p)):
            cyc = c
            break
    out = {"point": meet, "cycle": None, "parabolic": False, "merge_consistent": None, "diagnostic": None}
    if cyc is None:
        out["diagnostic"] = "the common limit is not a cycle of the limit map"
        return out
    out["cycle"] = cyc
    out["parabolic"] = cyc.classification.startswith("parabolic")
    if not out["parabolic"]:
        out["diagnostic"] = f"the common limit is {cyc.classification}, not parabolic"
        return out
    # every cycle of the smallest-t map that collapses onto the parabolic cycle
    q = cyc.rotation[1] if cyc.rotation else 1
    last = [k for k in range(len(sample.t_values)) if np.all(np.isfinite(track1.points[k]))][-1]
    spread = max(
        float(np.abs(np.asarray(tr.points[last]) - meet).min()) for tr in (track1, track2)
    )
    radius = max(10 * spread, 1e-8)
    near = []
    for n in sorted({cyc.period, cyc.period * q}):
        cands, _ = _cycles(sample.maps[last], n)
        near += [(pts, rho) for pts, rho in cands if np.abs(np.array(pts) - meet).min() <= radius]
    out["colliding_cycles"] = [{"period": len(p), "multiplier": complex(r)} for p, r in near]
    out["expected_count"] = (cyc.degeneracy or 0) + 1
    if near and all(abs(r) < 1 for _, r in near):
        out["merge_consistent"] = cyc.classification in ("parabolic-attracting", "parabolic-indifferent")
    return out


# --------------------------------------------------------------------------
# numeric against series


def projective_distance(f, g):
    """sqrt(2 - 2|<u, v>|) for the unit coefficient vectors of two maps.

    Evaluated as |u - e^{i theta} v| with the optimal phase, which equals the
    formula but keeps full precision for nearby maps.
    """
    u = np.concatenate(f.float_coeffs())
    v = np.concatenate(g.float_coeffs())
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    ip = np.vdot(v, u)
    phase = ip / abs(ip) if abs(ip) > 0 else 1.0
    return float(np.linalg.norm(u - phase * v))


def _gap(fL):
    """Smallest positive exponent among the normalized series coefficients."""
    exps = [q for c in fL.coefficients() for q, _ in c.terms if q > 0]
    truncs = [c.trunc for c in fL.coefficients() if c.trunc != bk.INF_ORDER]
    if not exps:
        return min(truncs) if truncs else Fraction(1)
    return min(exps)


def _is_root_track(tr, sample=None):
    """Fixed points sitting on roots of the Newton family: not free cycles."""
    if tr.period != 1:
        return False
    good = [k for k in range(len(tr.t_values)) if np.isfinite(tr.points[k, 0])]
    if sample is not None and sample.family.is_newton and good:
        for k in good:
            r = np.asarray(sample.family.roots_at(tr.t_values[k]), dtype=complex)
            z = tr.points[k, 0]
            if np.abs(r - z).min() > 1e-7 * max(1.0, abs(z)):
                return False
        return True
    m = tr.multipliers[np.isfinite(tr.multipliers)]
    return m.size > 0 and bool(np.all(np.abs(m) < 1e-8))


def compare_with_berkovich(sample, tracks=(), grid=20):
    """Consistency of the numeric samples with the series analysis."""
    fam = sample.family
    if fam.series_roots is None:
        raise ValueError("the comparison needs a family given by Puiseux series roots")
    fL = bk.newton_over_L(fam.series_roots)
    red = bk.reduction(fL)
    gap = _gap(fL)
    report = {"gap": str(gap), "checks": {}}

    # (a) coefficient limits
    dists = [projective_distance(f, red) for f in sample.maps]
    report["coefficient_distance"] = dists
    tmin = min(sample.t_values)
    bound = 10 * tmin ** float(gap)
    report["coefficient_bound"] = bound
    report["checks"]["coefficients"] = dists[-1] <= bound
    ratios = [a / b for a, b in zip(dists, dists[1:]) if b > 0]
    report["coefficient_ratios"] = ratios
    pred = 10 ** float(gap)
    ts = sample.t_values
    steps = [ts[k] / ts[k + 1] for k in range(len(ts) - 1)]
    report["checks"]["coefficient_rate"] = all(
        r >= (s ** float(gap)) / 2 for r, s in zip(ratios, steps) if dists[0] > 1e-13
    )

    # locally uniform convergence off the holes (chordal metric)
    dec = extract_holes(red)
    holes = [_cplx(to_affine(p)) for p, _ in dec.holes]
    ghat = dec.reduced_map
    xs = np.linspace(-2, 2, grid)
    Z = (xs[None, :] + 1j * xs[:, None]).ravel()
    far = np.ones(Z.size, dtype=bool)
    for h in holes:
        if not is_infinite(h):
            far &= np.abs(Z - complex(h)) >= 0.2
    Z = Z[far]
    unif = []
    for t, f in zip(sample.t_values, sample.maps):
        unif.append(float(chordal_array(f(Z), ghat(Z)).max()))
    report["uniform_distance"] = unif
    report["checks"]["uniform"] = all(u <= 10 * t ** float(gap) for u, t in zip(unif, sample.t_values))

    # (b) critical orbits against the predicted targets
    marked = fam.marked
    if marked is not None and len(fam.series_roots) == 4:
        ana = bk.analyze_family(*marked)
        crit = bk.additional_critical_points(ana.type.r, ana.type.s) if ana.type.relabel == (0, 1) else None
        report["type"] = ana.type.tag
        report["checks"]["table_free"] = ana.checks["critical_orbits"]
        if crit is not None:
            num_crit = []
            for t, N in zip(sample.t_values, sample.newton):
                pred_pts = [c(t) for c in crit]
                got = np.array([complex(c) for c in N.additional_critical_points])
                num_crit.append(max(float(np.abs(got - p).min()) for p in pred_pts))
            report["critical_point_deviation"] = num_crit
            report["checks"]["critical_points"] = all(
                d <= 10 * t ** float(min(c.trunc for c in crit) - 1) + 1e-9 for d, t in zip(num_crit, sample.t_values)
            )
        # (c) cycle limits: a hole or a point projecting into the branch points
        vrep = [ana.tree.internal_vertices[k] for k in ana.tree.v_rep]
        ok = True
        free = [tr for tr in tracks if not _is_root_track(tr, sample)]
        report["shadow_tracks"] = len(free)
        for tr in free:
            for z, e in tr.phase_limits:
                if any(_close(z, h, max(HOLE_FACTOR * e, ERR_FLOOR)) for h in holes):
                    continue
                if is_infinite(z):
                    ok = False
                    continue
                proj = bk.project_to_tree(PuiseuxSeries.coerce(complex(z)), ana.tree)
                if isinstance(proj, str) or not any(proj == V for V in vrep):
                    ok = False
        report["checks"]["cycle_shadow"] = ok
    report["passed"] = all(report["checks"].values())
    return report


# --------------------------------------------------------------------------
# degeneration type from samples, and the collision dichotomy

RATE_MIN = 0.25  # a distance counts as collapsing when it decays at least like t^RATE_MIN


def _rates(sample):
    """Pairwise root distances at the two smallest t and their decay exponents."""
    fam = sample.family
    ts = sample.t_values
    if not fam.is_newton or len(ts) < 2:
        return None
    # follow the labels along a fine geometric chain so clustered roots keep their identity
    chain = np.geomspace(ts[-2], ts[-1], int(np.ceil(np.log(ts[-2] / ts[-1]) / np.log(1.1))) + 1)
    prev = np.asarray(fam.roots_at(chain[0]), dtype=complex)
    cur = prev
    for t in chain[1:]:
        nxt = np.asarray(fam.roots_at(t), dtype=complex)
        _, col = linear_sum_assignment(np.abs(cur[:, None] - nxt[None, :]))
        cur = nxt[col]
    last = cur
    D0 = np.abs(prev[:, None] - prev[None, :])
    D1 = np.abs(last[:, None] - last[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        rate = np.log(D0 / D1) / np.log(ts[-2] / ts[-1])
    np.fill_diagonal(rate, 0.0)
    return last, D1, rate


def numeric_degeneration_type(sample):
    """Degeneration type of a quartic Newton family read off the root collision pattern."""
    got = _rates(sample)
    if got is None or len(got[0]) != 4:
        return None
    roots, D, rate = got
    pairs = [(i, j) for i in range(4) for j in range(i + 1, 4) if rate[i, j] >= RATE_MIN]
    if not pairs:
        return None
    # clusters of collapsing roots
    label = list(range(4))
    for i, j in pairs:
        a, b = label[i], label[j]
        label = [a if x == b else x for x in label]
    clusters = [[k for k in range(4) if label[k] == g] for g in sorted(set(label))]
    sizes = sorted(len(c) for c in clusters)
    if sizes == [1, 1, 2]:
        return "type1"
    if sizes == [2, 2]:
        return "type2"
    if sizes == [1, 3]:
        tri = next(c for c in clusters if len(c) == 3)
        rs = sorted((rate[i, j], D[i, j]) for i in tri for j in tri if i < j)
        return "type3a" if rs[-1][0] - rs[0][0] >= RATE_MIN else "type3b"
    return None


def _cluster_size(sample, hole):
    got = _rates(sample)
    if got is None:
        return 0
    roots, _, rate = got
    near = int(np.abs(roots - hole).argmin())
    return 1 + int(np.sum(rate[near] >= RATE_MIN))


def _hole_scale(sample, hole):
    """Per-t (anchor, scale): a root of the collapsing cluster and the cluster diameter."""
    k = _cluster_size(sample, hole)
    out = []
    for t in sample.t_values:
        r = np.asarray(sample.family.roots_at(t), dtype=complex)
        cl = r[np.argsort(np.abs(r - hole))[:k]]
        if cl.size < 2:
            out.append((complex(hole), np.nan))
            continue
        out.append((complex(cl[0]), float(np.abs(cl[:, None] - cl[None, :]).max())))
    return out


def _is_cycle_of(g, pts, tol=1e-5):
    """Is the finite set pts forward invariant under g and nonrepelling?"""
    pts = [complex(p) for p in pts]
    for p in pts:
        w = _image(g, p)
        if is_infinite(w) or min(abs(complex(w) - q) for q in pts) > tol * max(1.0, abs(p)):
            return False, None
    rho = _derivative_along(g, pts[0], len(pts))
    return abs(rho) <= 1 + 1e-6, complex(rho)


def dichotomy_check(sample, tracks, type_tag=None):
    """Collision constraints on the limits of free nonrepelling cycles.

    A limit away from the holes must be a nonrepelling cycle of the reduced
    limit. A limit that meets a hole must contain it strictly for types 1
    and 2; for type 3a a limit equal to the hole must become a proper
    collision after rescaling at the outer scale of the collapsing cluster;
    type 3b allows both, but two free cycles cannot both reduce to the hole.
    """
    tag = type_tag or numeric_degeneration_type(sample)
    g = sample.reduced_limit()
    free = [tr for tr in tracks if not _is_root_track(tr, sample)]
    rows = []
    for tr in free:
        row = {"period": tr.period, "relation": tr.relation, "limit": tr.limit, "ok": True, "reason": None}
        if tr.relation == "none":
            finite = [z for z in tr.limit if not is_infinite(z)]
            nonrep, rho = _is_cycle_of(g, finite) if finite else (False, None)
            row["limit_multiplier"] = rho
            row["ok"] = bool(nonrep)
            if not nonrep:
                row["reason"] = "limit is not a nonrepelling cycle of the reduced map"
        elif tr.relation == "equal":
            if tag in ("type1", "type2"):
                row["ok"] = False
                row["reason"] = "the whole cycle collapsed onto the hole"
            elif tag == "type3a":
                hole = tr.colliding_holes[0]
                sc = _hole_scale(sample, hole)
                P = np.array([(tr.points[k] - a) / s for k, (a, s) in enumerate(sc)])
                sub = _finish_track(tr.period, tr.t_values, P, tr.multipliers, [], [0j], tr.partial)
                row["rescaled_relation"] = sub.relation
                row["rescaled_limit"] = sub.limit
                row["ok"] = sub.relation == "proper"
                if not row["ok"]:
                    row["reason"] = "rescaled limit does not properly contain the hole"
        rows.append(row)
    if tag == "type3b":
        eq = [r for r in rows if r["relation"] == "equal"]
        if len(eq) >= 2:
            for r in eq:
                r["ok"] = False
                r["reason"] = "two free cycles both collapsed onto the hole"
    return {"type": tag, "free_tracks": len(free), "rows": rows, "passed": all(r["ok"] for r in rows)}


# --------------------------------------------------------------------------
# one report per family


NAMED_FAMILIES = {
    "odd-quintic": odd_quintic_family,
}


def family_from_spec(spec):
    """'r = t; s = 1/2', 'roots = ...', 'odd-quintic' or 'per2:c0'."""
    spec = spec.strip()
    if spec in NAMED_FAMILIES:
        return NAMED_FAMILIES[spec]()
    if spec.startswith("per2:"):
        return per2_family(complex(spec[5:].strip().replace("i", "j")))
    return series_family(spec)


def degeneration_report(family, t_values=DEFAULT_T, max_period=2, basin_resolution=128):
    """Tracks, collision checks, basin shrinkage and the series comparison in one dict."""
    if isinstance(family, str):
        family = family_from_spec(family)
    sample = sample_family(family, t_values)
    tracks = []
    for n in range(1, max_period + 1):
        tracks += track_limit_cycles(sample, n, reports=False)
    free = [tr for tr in tracks if not _is_root_track(tr, sample)]
    out = {
        "family": family.name,
        "t_values": list(sample.t_values),
        "dropped": list(sample.dropped),
        "holes": [{"point": h, "multiplicity": m} for h, m in sample.holes()],
        "tracks": [dict(tr.to_dict(), root=_is_root_track(tr, sample)) for tr in tracks],
        "checks": {},
    }
    tag = None
    if family.marked is not None:
        out["series"] = compare_with_berkovich(sample, tracks)
        tag = out["series"].get("type")
        out["checks"]["series"] = out["series"]["passed"]
    if family.is_newton:
        tag = tag or numeric_degeneration_type(sample)
        out["dichotomy"] = dichotomy_check(sample, tracks, tag)
        out["checks"]["dichotomy"] = out["dichotomy"]["passed"]
        shrink = []
        for tr in free:
            if tr.relation == "proper" and tr.attracting:
                shrink.append(dict(basin_shrink_check(sample, tr, basin_resolution), period=tr.period))
        out["basin_shrinkage"] = shrink
        if shrink:
            out["checks"]["basin_shrinkage"] = all(r["passed"] for r in shrink)
    out["type"] = tag
    out["hole_collisions"] = [
        {"period": tr.period, "relation": tr.relation, "colliding_holes": tr.colliding_holes} for tr in free if tr.hole_collision
    ]
    out["passed"] = all(out["checks"].values())
    return out
