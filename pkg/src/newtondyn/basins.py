"""Raster basins of Newton maps and the hyperbolic type of a quartic.

Each pixel is iterated under the Newton map until it lands within ``eps``
of a root, within 1e-6 of a point of a free attracting cycle, or runs out
of iterations. Basins are then split into 4-connected components; the
immediate basin of a cycle point is the component of its own pixel.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import _poly
from .epstein import attracting_cycles_from_orbits
from .newton import NewtonMap, classify_critical_points

__all__ = [
    "BasinRaster",
    "HyperbolicTypeReport",
    "basin_raster",
    "auto_window",
    "free_cycles",
    "immediate_basin_member",
    "classify_hyperbolic_type",
    "AMBIGUOUS",
]

AMBIGUOUS = "ambiguous"
CYCLE_TOL = 1e-6
TYPES = ("A", "B", "C", "D", "IE", "FE1", "FE2", "unresolved")


@dataclass(frozen=True, eq=False)
class BasinRaster:
    """``labels[i, j]`` indexes ``targets`` (-1: unresolved); row 0 is the top."""

    window: tuple
    resolution: tuple
    labels: np.ndarray
    components: np.ndarray
    targets: tuple
    iterations: np.ndarray = field(repr=False)
    cycles: tuple = ()
    roots: tuple = ()

    def pixel_of(self, z):
        x0, y0, x1, y1 = self.window
        W, H = self.resolution
        z = complex(z)
        j = int(np.floor((z.real - x0) / (x1 - x0) * W))
        i = int(np.floor((y1 - z.imag) / (y1 - y0) * H))
        if 0 <= i < H and 0 <= j < W:
            return i, j
        return None

    def pixel_centers(self):
        x0, y0, x1, y1 = self.window
        W, H = self.resolution
        xs = x0 + (np.arange(W) + 0.5) * (x1 - x0) / W
        ys = y1 - (np.arange(H) + 0.5) * (y1 - y0) / H
        return xs[None, :] + 1j * ys[:, None]

    def target_of(self, z):
        p = self.pixel_of(z)
        if p is None:
            return None
        k = self.labels[p]
        return None if k < 0 else self.targets[k]

    def component_of(self, z, margin=2):
        """Component id at z, or AMBIGUOUS near an edge, boundary or unresolved pixel."""
        p = self.pixel_of(z)
        if p is None:
            return AMBIGUOUS
        i, j = p
        H, W = self.labels.shape
        if i < margin or j < margin or i >= H - margin or j >= W - margin:
            return AMBIGUOUS
        block = self.components[i - margin : i + margin + 1, j - margin : j + margin + 1]
        c = self.components[i, j]
        if c == 0 or np.any(block != c):
            return AMBIGUOUS
        return int(c)

    def fraction(self, kind):
        """Share of pixels whose target is of the given kind ('root' or 'cycle')."""
        idx = [k for k, t in enumerate(self.targets) if t[0] == kind]
        return float(np.isin(self.labels, idx).mean()) if idx else 0.0


def free_cycles(N, horizon=2000):
    """Attracting cycles of period >= 2 reached by free critical points."""
    seeds = [complex(c.point) for c in classify_critical_points(N) if c.kind == "additional" and c.free]
    cyc = attracting_cycles_from_orbits(N.map, seeds, horizon)
    return [c for c in cyc if c.period >= 2]


def auto_window(N, cycles=()):
    """Bounding box of roots, cycle points and additional critical points, padded x2, square."""
    pts = [complex(r) for r in N.roots]
    pts += [complex(p) for c in cycles for p in c.points]
    pts += [complex(c) for c in N.second_derivative_roots]
    pts = np.array(pts)
    cx = (pts.real.min() + pts.real.max()) / 2
    cy = (pts.imag.min() + pts.imag.max()) / 2
    half = max(pts.real.max() - pts.real.min(), pts.imag.max() - pts.imag.min(), 1e-3) / 2
    half *= 2
    return (cx - half, cy - half, cx + half, cy + half)


def _newton_step(c, dc, z):
    p, dp = _poly.horner_with_derivative(c, z)
    with np.errstate(all="ignore"):
        return z - p / dp


def basin_raster(N: NewtonMap, window=None, resolution=(512, 512), iter_cap=2000, eps=1e-9, cycles=None, cycle_tol=CYCLE_TOL):
    if cycles is None:
        cycles = free_cycles(N, iter_cap)
    if window is None:
        window = auto_window(N, cycles)
    x0, y0, x1, y1 = window
    W, H = resolution
    coeffs = N.poly_float()
    roots = N.root_array()
    targets = [("root", k) for k in range(roots.size)]
    cyc_pts = []
    for j, cyc in enumerate(cycles):
        for p, z in enumerate(cyc.points):
            targets.append(("cycle", j, p))
            cyc_pts.append((j, p, complex(z), cyc.period))
    xs = x0 + (np.arange(W) + 0.5) * (x1 - x0) / W
    ys = y1 - (np.arange(H) + 0.5) * (y1 - y0) / H
    z = (xs[None, :] + 1j * ys[:, None]).ravel()
    labels = np.full(z.size, -1, dtype=np.int32)
    iters = np.full(z.size, iter_cap, dtype=np.int32)
    active = np.arange(z.size)
    zc = z.copy()
    scale = max(1.0, np.abs(roots).max())
    for k in range(iter_cap + 1):
        if active.size == 0:
            break
        w = zc
        for r_i, r in enumerate(roots):
            hit = np.abs(w - r) <= eps * scale
            if hit.any():
                labels[active[hit]] = r_i
                iters[active[hit]] = k
        for t_off, (j, p, cz, n) in enumerate(cyc_pts):
            hit = (np.abs(w - cz) <= cycle_tol) & (labels[active] < 0)
            if hit.any():
                phase = (p - k) % n
                labels[active[hit]] = roots.size + _cycle_offset(cycles, j) + phase
                iters[active[hit]] = k
        keep = (labels[active] < 0) & np.isfinite(w)
        active = active[keep]
        zc = _newton_step(coeffs, None, w[keep])
    labels = labels.reshape(H, W)
    comps = np.zeros((H, W), dtype=np.int32)
    nxt = 0
    for t in range(len(targets)):
        mask = labels == t
        if not mask.any():
            continue
        lab, cnt = ndimage.label(mask)
        comps[mask] = lab[mask] + nxt
        nxt += cnt
    return BasinRaster(tuple(window), (W, H), labels, comps, tuple(targets), iters.reshape(H, W), tuple(cycles),
        tuple(complex(r) for r in roots),
    )


def _cycle_offset(cycles, j):
    return sum(c.period for c in cycles[:j])


def immediate_basin_member(raster, point, cycle, phase=None):
    """True/False, or AMBIGUOUS near a boundary or an unresolved pixel.

    ``cycle`` is a cycle index of the raster, or ``("root", k)``. With
    ``phase=None`` the point may lie in the component of any cycle point.
    """
    cp = raster.component_of(point)
    if cp == AMBIGUOUS:
        return AMBIGUOUS
    if isinstance(cycle, tuple) and cycle[0] == "root":
        # the component of the root pixel itself
        return _same_component(raster, cp, [raster.roots[cycle[1]]])
    cyc = raster.cycles[cycle]
    phases = range(cyc.period) if phase is None else [phase]
    return _same_component(raster, cp, [cyc.points[p] for p in phases])


def _same_component(raster, cp, anchors):
    for a in anchors:
        ca = raster.component_of(a)
        if ca == AMBIGUOUS:
            return AMBIGUOUS
        if ca == cp:
            return True
    return False


@dataclass(frozen=True)
class CriticalAssignment:
    point: complex
    multiplicity: int
    target: tuple  # ("root", k) or ("cycle", j)
    immediate: object  # True / False / AMBIGUOUS
    component: object

    def to_dict(self):
        from .jsonio import cnum

        return {
            "point": cnum(self.point),
            "multiplicity": self.multiplicity,
            "target": list(self.target) if self.target else None,
            "immediate": self.immediate if isinstance(self.immediate, bool) else None,
            "component": self.component if isinstance(self.component, int) else None,
        }


@dataclass(frozen=True)
class HyperbolicTypeReport:
    type: str
    free_cycles: tuple
    critical_assignments: tuple
    reason: str = ""
    resolution: tuple = ()
    window: tuple = ()

    def to_dict(self):
        return {
            "type": self.type,
            "free_cycles": [c.to_dict() for c in self.free_cycles],
            "critical_assignments": [a.to_dict() for a in self.critical_assignments],
            "reason": self.reason,
            "resolution": list(self.resolution),
            "window": list(self.window),
        }


def _orbit_target(N, c, cycles, iter_cap, eps):
    roots = N.root_array()
    coeffs = N.poly_float()
    z = complex(c)
    scale = max(1.0, np.abs(roots).max())
    for k in range(iter_cap + 1):
        d = np.abs(roots - z)
        if d.min() <= eps * scale:
            return ("root", int(d.argmin())), k
        for j, cyc in enumerate(cycles):
            for p, q in enumerate(cyc.points):
                if abs(z - complex(q)) <= CYCLE_TOL:
                    return ("cycle", j), k
        z = complex(_newton_step(coeffs, None, np.array([z]))[0])
        if not np.isfinite(z):
            return None, k
    return None, iter_cap


def _additional_points(N):
    """Additional critical points (grouped), including ones sitting on roots."""
    out = []
    for c in classify_critical_points(N):
        if c.kind == "additional":
            out.append((complex(c.point), c.multiplicity, None))
        elif c.also_additional:
            k = int(np.argmin(np.abs(N.root_array() - complex(c.point))))
            out.append((complex(c.point), c.multiplicity - 1, ("root", k)))
    return out


def _assign(N, raster, cycles, iter_cap, eps):
    assigns = []
    for c, mult, on_root in _additional_points(N):
        if on_root is not None:
            assigns.append(CriticalAssignment(c, mult, on_root, True, raster.component_of(c)))
            continue
        target, _ = _orbit_target(N, c, cycles, iter_cap, eps)
        if target is None:
            assigns.append(CriticalAssignment(c, mult, None, AMBIGUOUS, AMBIGUOUS))
            continue
        if target[0] == "root":
            imm = immediate_basin_member(raster, c, target)
        else:
            imm = immediate_basin_member(raster, c, target[1])
        assigns.append(CriticalAssignment(c, mult, target, imm, raster.component_of(c)))
    return assigns


def _decide(assigns):
    if any(a.target is None for a in assigns):
        return "unresolved", "a critical orbit did not converge within the iteration cap"
    if any(a.target[0] == "root" and a.immediate is True for a in assigns):
        return "IE", "an additional critical point lies in the immediate basin of a root"
    if any(a.immediate == AMBIGUOUS for a in assigns):
        return None, "raster ambiguity"
    # expand by multiplicity: a double point counts twice in one component
    pts = [a for a in assigns for _ in range(max(a.multiplicity, 1))][:2]
    if len(pts) < 2:
        return "unresolved", "fewer than two additional critical points"
    a, b = pts
    ta, tb = a.target[0], b.target[0]
    if ta == "cycle" and tb == "cycle":
        if a.target != b.target:
            return "D", "two distinct free cycles"
        if a.immediate and b.immediate:
            if a.component == b.component:
                return "A", "both in one immediate component of the free cycle"
            return "B", "in different immediate components of the free cycle"
        if a.immediate != b.immediate:
            return "C", "one immediate, one captured"
        return "unresolved", "no additional critical point in the immediate basin of the free cycle"
    if {ta, tb} == {"root", "cycle"}:
        cyc = a if ta == "cycle" else b
        if cyc.immediate:
            return "FE1", "one escapes to a root, the other in the immediate basin of a free cycle"
        return "unresolved", "free cycle attracts no critical point immediately"
    return "FE2", "both additional critical points in non-immediate root basins"


def classify_hyperbolic_type(N, window=None, resolution=512, iter_cap=2000, eps=1e-9, retries=2):
    """Hyperbolic type of a quartic Newton map by raster basin analysis."""
    cycles = free_cycles(N, iter_cap)
    res = resolution
    reason = ""
    for attempt in range(retries + 1):
        raster = basin_raster(N, window, (res, res), iter_cap, eps, cycles)
        assigns = _assign(N, raster, cycles, iter_cap, eps)
        t, reason = _decide(assigns)
        if t is not None:
            return HyperbolicTypeReport(t, tuple(cycles), tuple(assigns), reason, (res, res), raster.window)
        res *= 2
    return HyperbolicTypeReport(
        "unresolved", tuple(cycles), tuple(assigns), f"{reason} persists after {retries} refinements",
        (res // 2, res // 2), raster.window,
    )
