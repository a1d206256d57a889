"""Quartic Newton maps over the Puiseux field and their Berkovich structure.

Type II points of the Berkovich line are closed disks D(a, e^{-q}) over the
field; a disk is stored as its radius exponent ``q`` together with a centre
truncated below ``q`` (every point of the disk is a centre, and dropping
terms of order >= q picks a canonical one). The Gauss point is D(0, 1).

The hull of the marked roots {0, 1, r, s} and infinity is a finite tree
whose branch points are the joins x v y = D(x, |x - y|) of pairs of finite
roots. A branch point has one direction towards infinity plus one direction
for every residue class of roots inside its disk.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .puiseux import INF_ORDER, PuiseuxSeries, TruncationUnderflowError, series
from .rational import HomogeneousRationalMap, extract_holes, fixed_points, multiplier_at, to_affine

__all__ = [
    "RationalMapOverL",
    "Disk",
    "DegenerationType",
    "FixTree",
    "NotNormalFormError",
    "VerificationFailure",
    "induced_newton",
    "reduction",
    "classify_degeneration",
    "build_fix_tree",
    "project_to_tree",
    "project_to_rep",
    "rescaling_reduction",
    "additional_critical_points",
    "free_critical_projections",
    "bad_directions",
    "GAUSS",
    "BerkovichAnalysis",
    "analyze_family",
    "random_family",
]


class NotNormalFormError(ValueError):
    pass


class VerificationFailure(AssertionError):
    """A computed structure disagrees with the predicted one."""


def _S(x):
    return x if isinstance(x, PuiseuxSeries) else series(x)


def _val(x):
    """Valuation, or a lower bound (the truncation order) for cancelled series."""
    if x.is_underflow:
        return x.trunc
    return x.valuation


def _red(x):
    if x.is_underflow:
        if x.trunc > 0:
            return 0j
        raise TruncationUnderflowError(f"coefficient known only as O(t^{x.trunc}); raise the truncation order")
    return x.reduce()


# --------------------------------------------------------------------------
# maps over L


@dataclass(frozen=True, eq=False)
class RationalMapOverL:
    """``[sum num[i] X^i Y^(d-i) : sum den[i] X^i Y^(d-i)]`` with series coefficients."""

    num: tuple
    den: tuple

    @property
    def degree(self):
        return len(self.num) - 1

    def coefficients(self):
        return list(self.num) + list(self.den)

    def min_valuation(self):
        vals = [_val(c) for c in self.coefficients() if not c.is_exact_zero]
        known = [c.valuation for c in self.coefficients() if c.terms]
        if not known:
            raise TruncationUnderflowError("every coefficient cancelled; raise the truncation order")
        v = min(known)
        if min(vals) < v:
            raise TruncationUnderflowError("a cancelled coefficient may dominate; raise the truncation order")
        return v

    def normalized(self):
        """Divide by t^vmin so the largest coefficient has absolute value 1."""
        v = self.min_valuation()
        shift = PuiseuxSeries.monomial(1.0, -v, INF_ORDER)
        return RationalMapOverL(tuple(c * shift for c in self.num), tuple(c * shift for c in self.den))

    def is_normalized(self):
        return self.min_valuation() == 0

    def evaluate_at(self, t0):
        """The complex map at parameter t0."""
        num = [c(t0) for c in self.num]
        den = [c(t0) for c in self.den]
        return HomogeneousRationalMap.from_coeffs(num, den)

    def to_dict(self):
        return {"num": [c.to_dict() for c in self.num], "den": [c.to_dict() for c in self.den]}


def _poly_mul(a, b):
    out = [PuiseuxSeries.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _poly_from_roots(roots):
    out = [PuiseuxSeries.coerce(1)]
    for r in roots:
        out = _poly_mul(out, [-_S(r), PuiseuxSeries.coerce(1)])
    return out


def newton_over_L(roots):
    """Newton map of prod (z - root) over L (roots as series)."""
    roots = [_S(r) for r in roots]
    for a, b in itertools.combinations(roots, 2):
        diff = a - b
        if diff.is_exact_zero or diff.is_underflow:
            raise ValueError(f"roots {a} and {b} coincide as series")
    c = _poly_from_roots(roots)
    d = len(c) - 1
    num = tuple((i - 1) * c[i] for i in range(d + 1))
    den = tuple([(i + 1) * c[i + 1] for i in range(d)] + [PuiseuxSeries.zero()])
    return RationalMapOverL(num, den).normalized()


def induced_newton(r, s):
    """Normalized Newton map of z(z-1)(z-r)(z-s) over L."""
    r, s = _S(r), _S(s)
    for name, x in (("r", r), ("s", s)):
        for k in (0, 1):
            dx = x - k
            if dx.is_exact_zero or dx.is_underflow:
                raise ValueError(f"{name} coincides with the root {k}")
    return newton_over_L([0, 1, r, s])


def reduction(f, exact=False):
    """Coefficientwise residue of the normalized map, as a complex map.

    With ``exact=True`` coefficients within 1e-12 of a Gaussian rational with
    denominator <= 10^6 are rationalized so that hole extraction is exact.
    """
    if not f.is_normalized():
        f = f.normalized()
    num = [_red(c) for c in f.num]
    den = [_red(c) for c in f.den]
    if exact:
        ex = _rationalize(num + den)
        if ex is not None:
            d = len(num)
            return HomogeneousRationalMap.from_coeffs(ex[:d], ex[d:])
    return HomogeneousRationalMap.from_coeffs(num, den)


def _rationalize(values, tol=1e-12):
    import sympy as sp

    out = []
    for v in values:
        parts = []
        for x in (v.real, v.imag):
            fr = Fraction(x).limit_denominator(10**6)
            if abs(float(fr) - x) > tol * max(1.0, abs(x)):
                return None
            parts.append(sp.Rational(fr.numerator, fr.denominator))
        out.append(parts[0] + sp.I * parts[1])
    return out


def conjugate_affine(f, a, b=0):
    """M^{-1} o f o M with M(z) = a z + b, in series arithmetic."""
    a, b = _S(a), PuiseuxSeries.coerce(b)
    d = f.degree
    # powers of (a z + b) as polynomials in z
    lin = [b, a]
    powers = [[PuiseuxSeries.coerce(1)]]
    for _ in range(d):
        powers.append(_poly_mul(powers[-1], lin))

    def compose(coeffs):
        out = [PuiseuxSeries.zero()] * (d + 1)
        for i, c in enumerate(coeffs):
            if c.is_exact_zero:
                continue
            for k, p in enumerate(powers[i]):
                out[k] = out[k] + c * p
        return out

    A = compose(f.num)
    B = compose(f.den)
    num = tuple(A[k] - b * B[k] for k in range(d + 1))
    den = tuple(a * B[k] for k in range(d + 1))
    return RationalMapOverL(num, den).normalized()


def rescaling_reduction(f, a, b=0, exact=False):
    """red(M^{-1} o f o M) for M(z) = a z + b."""
    if _S(a).is_exact_zero:
        raise ValueError("the scale must be nonzero")
    try:
        g = conjugate_affine(f, a, b)
    except TruncationUnderflowError as exc:
        raise TruncationUnderflowError(f"conjugation exhausted the truncation order ({exc}); use a higher order") from None
    return reduction(g, exact)


# --------------------------------------------------------------------------
# degeneration types


@dataclass(frozen=True)
class DegenerationType:
    tag: str
    r: PuiseuxSeries
    s: PuiseuxSeries
    relabel: tuple = ()  # (a, b): marked roots moved to 0 and 1 by z -> (z - a)/(b - a)

    def __str__(self):
        return self.tag


def _type_of_normal_form(r, s):
    rr, rs = _red_or_none(r), _red_or_none(s)
    if rr is None or rs is None:
        return None
    if _is(rr, 0) and not _is(rs, 0) and not _is(rs, 1):
        return "type1"
    if _is(rr, 0) and _is(rs, 1):
        return "type2"
    if _is(rr, 0) and _is(rs, 0):
        vr, vs = r.valuation, s.valuation
        if vr > vs:
            return "type3a"
        if vr == vs and (r - s).valuation == vr:
            return "type3b"
    return None


def _is(z, k, tol=1e-12):
    return abs(z - k) <= tol


def _red_or_none(x):
    try:
        if x.valuation < 0:
            return None
        return x.reduce()
    except TruncationUnderflowError:
        return None


def classify_degeneration(r, s):
    """Type 1, 2, 3a, 3b, or nondegenerate, up to relabelling the roots.

    Families not already in normal form are moved there by an affine change
    of coordinates sending a farthest pair of roots to {0, 1}.
    """
    r, s = _S(r), _S(s)
    roots = [PuiseuxSeries.zero(), PuiseuxSeries.coerce(1), r, s]
    reds = [_red_or_none(x) for x in roots]
    if all(x is not None for x in reds) and all(
        not _is(reds[i], reds[j], 1e-12) for i, j in itertools.combinations(range(4), 2)
    ):
        return DegenerationType("nondegenerate", r, s, (0, 1))
    tag = _type_of_normal_form(r, s)
    if tag:
        return DegenerationType(tag, r, s, (0, 1))
    # search relabelings: (a, b) -> (0, 1), remaining roots in both orders
    dist = {}
    for i, j in itertools.permutations(range(4), 2):
        dist[i, j] = (roots[i] - roots[j]).valuation
    vmin = min(dist.values())
    for i, j in itertools.permutations(range(4), 2):
        if dist[i, j] != vmin:
            continue
        scale = (roots[j] - roots[i]).inverse()
        rest = [k for k in range(4) if k not in (i, j)]
        for k1, k2 in (rest, rest[::-1]):
            r2 = (roots[k1] - roots[i]) * scale
            s2 = (roots[k2] - roots[i]) * scale
            tag = _type_of_normal_form(r2, s2)
            if tag:
                return DegenerationType(tag, r2, s2, (i, j, k1, k2))
    raise NotNormalFormError("no relabelling of the roots reaches a type 1/2/3a/3b normal form")


# --------------------------------------------------------------------------
# disks and the hull tree


@dataclass(frozen=True, eq=False)
class Disk:
    """Closed disk {x : v(x - center) >= q}, radius e^{-q}."""

    center: PuiseuxSeries
    q: Fraction

    @classmethod
    def make(cls, center, q):
        q = Fraction(q)
        c = _S(center)
        terms = [(e, a) for e, a in c.terms if e < q]
        return cls(PuiseuxSeries(terms, INF_ORDER), q)

    @property
    def radius(self):
        return float(np.exp(-float(self.q)))

    def contains_point(self, x):
        d = _S(x) - self.center
        if d.is_exact_zero:
            return True
        return _val(d) >= self.q

    def contains(self, other):
        return other.q >= self.q and self.contains_point(other.center)

    def __eq__(self, other):
        return isinstance(other, Disk) and self.q == other.q and self.contains_point(other.center)

    def __hash__(self):
        return hash(self.q)

    def label(self):
        return f"D({self.center}, e^-{self.q})"

    def to_dict(self):
        return {"center": self.center.to_dict(), "radius_exponent": str(self.q)}


GAUSS = Disk.make(PuiseuxSeries.zero(), 0)


def join(x, y):
    """x v y: the smallest disk containing the type I points x and y."""
    d = _S(x) - _S(y)
    if d.is_exact_zero or d.is_underflow:
        raise ValueError("join of a point with itself is the point")
    return Disk.make(x, d.valuation)


@dataclass(frozen=True, eq=False)
class FixTree:
    leaves: dict
    internal_vertices: tuple
    vertex_names: tuple
    edges: tuple
    valences: tuple
    v_rep: tuple
    type_tag: str

    def index_of(self, disk):
        for k, v in enumerate(self.internal_vertices):
            if v == disk:
                return k
        return None

    def name_of(self, disk):
        k = self.index_of(disk)
        return None if k is None else self.vertex_names[k]

    def to_dict(self):
        return {
            "type": self.type_tag,
            "leaves": {k: (v.to_dict() if v is not None else "inf") for k, v in self.leaves.items()},
            "vertices": [
                {"name": n, "disk": v.to_dict(), "valence": val}
                for n, v, val in zip(self.vertex_names, self.internal_vertices, self.valences)
            ],
            "edges": [list(e) for e in self.edges],
            "v_rep": [self.vertex_names[k] for k in self.v_rep],
        }


def _residue_classes(disk, points):
    classes = []
    for x in points:
        if not disk.contains_point(x):
            continue
        d = _S(x) - disk.center
        if d.is_exact_zero or _val(d) > disk.q:
            res = 0j
        else:
            res = d.coefficient(disk.q)
        if not any(abs(res - c) <= 1e-9 * max(1.0, abs(c)) for c in classes):
            classes.append(res)
    return classes


def build_fix_tree(r, s, type_tag=None):
    """Hull of {0, 1, r, s, infinity} with branch points, valences and V_rep."""
    r, s = _S(r), _S(s)
    if type_tag is None:
        type_tag = classify_degeneration(r, s).tag
    leaves = {"0": PuiseuxSeries.zero(), "1": PuiseuxSeries.coerce(1), "r": r, "s": s}
    names = list(leaves)
    verts, vnames = [], []
    for a, b in itertools.combinations(names, 2):
        D = join(leaves[a], leaves[b])
        for k, V in enumerate(verts):
            if V == D:
                break
        else:
            verts.append(D)
            vnames.append(_vertex_name(D, a, b))
    # order: largest disk (Gauss point) first
    order = sorted(range(len(verts)), key=lambda k: (verts[k].q, vnames[k]))
    verts = [verts[k] for k in order]
    vnames = [vnames[k] for k in order]
    pts = list(leaves.values())
    valences = tuple(1 + len(_residue_classes(V, pts)) for V in verts)
    edges = []
    for k, V in enumerate(verts):
        parent = _smallest_container(verts, V, exclude=k)
        edges.append((vnames[k], "inf" if parent is None else vnames[parent]))
    for n, x in leaves.items():
        holder = _smallest_container_point(verts, x)
        edges.append((n, vnames[holder]))
    v_rep = tuple(k for k, v in enumerate(valences) if v >= 3)
    return FixTree(dict(leaves, inf=None), tuple(verts), tuple(vnames), tuple(edges), valences, v_rep, type_tag)


def _vertex_name(D, a, b):
    if D == GAUSS:
        return "xi_g"
    return f"{a}v{b}"


def _smallest_container(verts, V, exclude):
    best = None
    for k, W in enumerate(verts):
        if k == exclude or W == V:
            continue
        if W.contains(V) and (best is None or W.q > verts[best].q):
            best = k
    return best


def _smallest_container_point(verts, x):
    best = None
    for k, W in enumerate(verts):
        if W.contains_point(x) and (best is None or W.q > verts[best].q):
            best = k
    return best


def project_to_tree(x, tree):
    """Projection of a type I point onto H_fix: a leaf name or a Disk."""
    x = _S(x)
    best_v, best_leaf = None, None
    for name, leaf in tree.leaves.items():
        if leaf is None:
            continue
        d = x - leaf
        if d.is_exact_zero:
            return name
        v = _val(d)
        if best_v is None or v > best_v:
            best_v, best_leaf = v, name
    if best_v < 0:
        # outside the unit disk: on the segment from the Gauss point to infinity
        return Disk.make(x, best_v)
    return Disk.make(tree.leaves[best_leaf], best_v)


def project_to_rep(x, tree):
    """Projection onto H_rep, the hull of the branch points."""
    p = project_to_tree(x, tree)
    if isinstance(p, str):
        p = Disk.make(tree.leaves[p], Fraction(10**6))
    verts = [tree.internal_vertices[k] for k in tree.v_rep]
    top = min(verts, key=lambda V: V.q)
    if not top.contains(p):
        return top
    if any(p.contains(V) for V in verts):
        return p
    k = _smallest_container(verts, p, exclude=None)
    return verts[k]


# --------------------------------------------------------------------------
# critical points over L


def additional_critical_points(r, s):
    """Roots of P''(z) = 12 z^2 - 6 e1 z + 2 e2 for P = z(z-1)(z-r)(z-s)."""
    r, s = _S(r), _S(s)
    e1 = 1 + r + s
    e2 = r + s + r * s
    disc = 9 * e1 * e1 - 24 * e2
    if disc.is_exact_zero:
        c = e1 * (1 / 4)
        return [c, c]
    root = disc.sqrt()
    big = None
    for sign in (1, -1):
        cand = 3 * e1 + sign * root
        if cand.terms and (big is None or cand.valuation < big.valuation):
            big = cand
    if big is None:
        raise TruncationUnderflowError("critical point extraction needs a higher truncation order")
    c1 = big * (1 / 12)
    c2 = (e2 * (1 / 6)) / c1
    return [c1, c2]


def free_critical_projections(r, s, tree=None, expected=None):
    """Sigma: projections of the additional critical points onto H_rep.

    Compared with {xi_g} (types 1, 2) or {xi_g, 0 v s} (types 3a, 3b);
    a mismatch raises :class:`VerificationFailure`.
    """
    r, s = _S(r), _S(s)
    if tree is None:
        tree = build_fix_tree(r, s)
    crit = additional_critical_points(r, s)
    sigma = []
    for c in crit:
        D = project_to_rep(c, tree)
        if not any(D == E for E in sigma):
            sigma.append(D)
    if expected is None:
        expected = [GAUSS]
        if tree.type_tag in ("type3a", "type3b"):
            expected.append(join(PuiseuxSeries.zero(), s) if not s.is_exact_zero else GAUSS)
    ok = len(sigma) == len(expected) and all(any(D == E for E in sigma) for E in expected)
    if not ok:
        raise VerificationFailure(
            f"projections {[d.label() for d in sigma]} differ from {[d.label() for d in expected]}"
        )
    return sigma, crit


def bad_directions(f):
    """Directions at the Gauss point given by the holes of the reduction."""
    return [to_affine(p) for p, _ in extract_holes(reduction(f)).holes]


# --------------------------------------------------------------------------
# per-family analysis against the predicted structure

# deg N^, #superattracting fixed points, #attracting fixed points of N^
REDUCED_STRUCTURE = {
    "type1": (3, 2, 1),
    "type2": (2, 0, 2),
    "type3a": (2, 1, 1),
    "type3b": (2, 1, 1),
}
# allowed number of free critical points over L, attracting fixed points of N^
FREE_CRITICAL = {
    "type1": ({1, 2}, (0,)),
    "type2": ({2}, (0, 1)),
    "type3a": ({2}, (0,)),
    "type3b": ({1, 2}, (0,)),
}
# internal vertex count and sorted valences of the hull
TREE_SHAPE = {
    "type1": (2, (3, 4)),
    "type2": (3, (3, 3, 3)),
    "type3a": (3, (3, 3, 3)),
    "type3b": (2, (3, 4)),
}
ORBIT_STEPS = 2000
ORBIT_TOL = 1e-9
FIXED_SA_TOL = 1e-9


def _fixed_counts(g):
    """(#superattracting, #attracting non-super) fixed points of a complex map."""
    sa = att = 0
    pts = []
    for rec in fixed_points(g):
        rho = abs(complex(rec.multiplier))
        if rho <= FIXED_SA_TOL:
            sa += 1
        elif rho < 1 - 1e-9:
            att += 1
        pts.append((rec.z, complex(rec.multiplier)))
    return sa, att, pts


def _orbit_target(g, z0, targets):
    """Index of the target the orbit converges to, and whether the orbit is infinite.

    An orbit is counted infinite when no iterate lands exactly on the target
    before the orbit is within ORBIT_TOL of it (convergence is geometric for
    an attracting, non-superattracting target).
    """
    z = complex(z0)
    for _ in range(ORBIT_STEPS):
        for k, a in enumerate(targets):
            if abs(z - a) < ORBIT_TOL:
                return k, True
            if z == a:
                return k, False
        z = complex(g(z))
        if not np.isfinite(z):
            return None, True
    return None, True


@dataclass
class BerkovichAnalysis:
    type: DegenerationType
    tree: FixTree
    sigma: list
    critical_points: list
    free_critical: int
    reduction: HomogeneousRationalMap
    reduced_degree: int
    holes: list  # (hole, multiplicity, multiplier of N^ there)
    fixed_superattracting: int
    fixed_attracting: int
    critical_reductions: list
    critical_targets: list  # (reduction, index into attracting fixed points or None, infinite orbit)
    rescalings: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    fsi: object = None

    @property
    def verified(self):
        return all(self.checks.values())

    def failures(self):
        return [k for k, v in self.checks.items() if not v]

    def to_dict(self):
        from .jsonio import cnum

        return {
            "type": self.type.tag,
            "relabel": list(self.type.relabel),
            "r": self.type.r.to_dict(),
            "s": self.type.s.to_dict(),
            "tree": self.tree.to_dict(),
            "sigma": [self.tree.name_of(d) or d.label() for d in self.sigma],
            "free_critical_points": self.free_critical,
            "reduction": {
                "num": [cnum(complex(c)) for c in self.reduction.float_coeffs()[0]],
                "den": [cnum(complex(c)) for c in self.reduction.float_coeffs()[1]],
            },
            "reduced_degree": self.reduced_degree,
            "holes": [
                {"point": cnum(complex(h) if h is not None else np.inf), "multiplicity": m, "multiplier": cnum(rho)}
                for h, m, rho in self.holes
            ],
            "fixed_superattracting": self.fixed_superattracting,
            "fixed_attracting": self.fixed_attracting,
            "critical_reductions": [
                {"point": cnum(c), "target": tgt, "infinite_orbit": inf}
                for c, tgt, inf in self.critical_targets
            ],
            "rescalings": self.rescalings,
            "fsi": None if self.fsi is None else self.fsi.to_dict(),
            "checks": self.checks,
            "verified": self.verified,
        }


def _rescaling_plan(tag, r, s):
    """(name, scale, shift, expected degree, expected #superattracting, expected #nonrepelling-attracting)."""
    plan = []
    if tag in ("type1", "type2"):
        plan.append(("0vr", r, 0, 2, 2, 0))
    if tag == "type3a":
        plan.append(("0vs", s, 0, 2, None, 2))
        plan.append(("0vr", r, 0, 2, 2, 0))
    if tag == "type3b":
        plan.append(("0vr", r, 0, 3, 3, 0))
    return plan


def analyze_family(r, s, with_fsi=False, exact=False):
    """Classify a family and check every predicted structural quantity."""
    dtype = classify_degeneration(r, s)
    if dtype.tag == "nondegenerate":
        raise NotNormalFormError("the family does not degenerate; nothing to analyze")
    tag, r, s = dtype.tag, dtype.r, dtype.s
    checks = {}
    tree = build_fix_tree(r, s, tag)
    nv, vals = TREE_SHAPE[tag]
    checks["tree_shape"] = len(tree.v_rep) == nv and tuple(sorted(tree.valences)) == vals
    checks["gauss_vertex"] = tree.index_of(GAUSS) is not None

    try:
        sigma, crit = free_critical_projections(r, s, tree)
        checks["sigma"] = True
    except VerificationFailure:
        crit = additional_critical_points(r, s)
        sigma = []
        for c in crit:
            D = project_to_rep(c, tree)
            if not any(D == E for E in sigma):
                sigma.append(D)
        checks["sigma"] = False
    roots = [PuiseuxSeries.zero(), PuiseuxSeries.coerce(1), r, s]
    free = sum(1 for c in crit if not _coincides_with_any(c, roots))
    allowed, attract = FREE_CRITICAL[tag]
    checks["free_critical_count"] = free in allowed

    f = induced_newton(r, s)
    red = reduction(f, exact=exact)
    dec = extract_holes(red)
    Nhat = dec.reduced_map
    holes = []
    for p, m in dec.holes:
        h = to_affine(p)
        rho_raw = multiplier_at(Nhat, h if h is not None else p, check=False)
        rho = complex(rho_raw)
        holes.append((h, m, rho))
        checks.setdefault("hole_multipliers", True)
        if Nhat.exact:
            import sympy as sp

            good = sp.simplify(sp.sympify(rho_raw) - sp.Rational(m, m + 1)) == 0
        else:
            good = abs(rho - m / (m + 1)) <= 1e-10
        if not good:
            checks["hole_multipliers"] = False
    deg, nsa, na = REDUCED_STRUCTURE[tag]
    checks["reduced_degree"] = Nhat.degree == deg
    g = Nhat.to_float() if exact else Nhat
    fsa, fa, fpts = _fixed_counts(g)
    checks["fixed_point_counts"] = (fsa, fa) == (nsa, na)
    att_pts = [z for z, rho in fpts if FIXED_SA_TOL < abs(rho) < 1 - 1e-9]
    checks["attracting_locations"] = sorted(att_pts, key=lambda z: (z.real, z.imag)) == [] if not attract else (
        len(att_pts) == len(attract) and all(min(abs(z - a) for z in att_pts) < 1e-8 for a in attract)
    )

    creds = [_red_or_none(c) for c in crit]
    targets = [complex(a) for a in attract]
    ctarg = []
    for c in creds:
        if c is None:
            ctarg.append((None, None, False))
            continue
        k, inf = _orbit_target(g, c, targets)
        ctarg.append((complex(c), k, inf))
    checks["critical_orbits"] = _table_free_ok(tag, ctarg)

    rescalings = []
    for name, a, b, edeg, esa, eatt in _rescaling_plan(tag, r, s):
        gdec = extract_holes(rescaling_reduction(f, a, b, exact=exact))
        gr = gdec.reduced_map
        gr = gr.to_float() if exact else gr
        sa, at, _ = _fixed_counts(gr)
        ok = gr.degree == edeg and (sa == esa if esa is not None else True) and (sa + at == (eatt or esa))
        rescalings.append({
            "at": name,
            "degree": gr.degree,
            "fixed_superattracting": sa,
            "fixed_attracting": at,
            "holes": [[cnum_or_inf(to_affine(p)), m] for p, m in gdec.holes],
            "ok": bool(ok),
        })
        checks[f"rescaling_{name}"] = bool(ok)

    out = BerkovichAnalysis(
        type=dtype, tree=tree, sigma=sigma, critical_points=crit, free_critical=free,
        reduction=red, reduced_degree=Nhat.degree, holes=holes,
        fixed_superattracting=fsa, fixed_attracting=fa, critical_reductions=creds,
        critical_targets=ctarg, rescalings=rescalings, checks=checks,
    )
    if with_fsi:
        from .epstein import gamma_delta

        rep = gamma_delta(Nhat)
        out.fsi = rep
        checks["fsi_inequality"] = bool(rep.satisfied)
        if tag == "type2":
            checks["fsi_pair"] = (rep.gamma_total, rep.delta) == (2, 2)
        elif tag in ("type3a", "type3b"):
            checks["fsi_pair"] = (rep.gamma_total, rep.delta) == (1, 1)
        else:
            checks["fsi_pair"] = rep.gamma_total in (1, 2) and rep.delta in (1, 2)
    return out


def cnum_or_inf(z):
    from .jsonio import cnum

    return cnum(np.inf if z is None or (isinstance(z, float) and np.isinf(z)) else complex(z))


def _coincides_with_any(c, roots):
    for x in roots:
        d = c - x
        if d.is_exact_zero or d.is_underflow:
            return True
    return False


def _table_free_ok(tag, ctarg):
    nonzero = [(c, k, inf) for c, k, inf in ctarg if c is not None and abs(c) > 1e-12]
    zero = [c for c, _, _ in ctarg if c is not None and abs(c) <= 1e-12]
    if tag == "type1":
        return any(k == 0 and inf for _, k, inf in nonzero)
    if tag == "type2":
        hits = {k for _, k, inf in nonzero if inf and k is not None}
        return len(nonzero) == 2 and hits == {0, 1}
    # types 3a, 3b
    return len(zero) >= 1 and any(k == 0 and inf for _, k, inf in nonzero)


# --------------------------------------------------------------------------
# random families of a given type


def _rand_exponent(rng, lo=Fraction(1, 3), hi=Fraction(3)):
    den = int(rng.integers(1, 4))
    while True:
        q = Fraction(int(rng.integers(1, 4 * den)), den)
        if lo <= q <= hi:
            return q


def _rand_coeff(rng, lo=0.3, hi=2.0):
    mod = rng.uniform(lo, hi)
    return complex(mod * np.exp(2j * np.pi * rng.uniform()))


def _tail(rng, q0, trunc):
    terms = []
    for _ in range(int(rng.integers(0, 3))):
        q = q0 + _rand_exponent(rng, Fraction(1, 3), Fraction(2))
        terms.append((q, _rand_coeff(rng, 0.1, 1.0)))
    return terms


def random_family(tag, rng, trunc=Fraction(8)):
    """A random pair (r, s) of the requested degeneration type."""
    if tag == "type1":
        q = _rand_exponent(rng)
        r = PuiseuxSeries([(q, _rand_coeff(rng))] + _tail(rng, q, trunc), trunc)
        while True:
            s0 = _rand_coeff(rng, 0.2, 1.5)
            if abs(s0 - 1) > 0.2:
                break
        s = PuiseuxSeries([(0, s0)] + _tail(rng, 0, trunc), trunc)
    elif tag == "type2":
        q, p = _rand_exponent(rng), _rand_exponent(rng)
        r = PuiseuxSeries([(q, _rand_coeff(rng))] + _tail(rng, q, trunc), trunc)
        s = PuiseuxSeries([(0, 1), (p, _rand_coeff(rng))] + _tail(rng, p, trunc), trunc)
    elif tag == "type3a":
        q2 = _rand_exponent(rng, Fraction(1, 3), Fraction(2))
        q1 = q2 + _rand_exponent(rng, Fraction(1, 3), Fraction(2))
        r = PuiseuxSeries([(q1, _rand_coeff(rng))] + _tail(rng, q1, trunc), trunc + q1)
        s = PuiseuxSeries([(q2, _rand_coeff(rng))] + _tail(rng, q2, trunc), trunc + q2)
    elif tag == "type3b":
        q = _rand_exponent(rng)
        a = _rand_coeff(rng)
        while True:
            b = _rand_coeff(rng)
            if abs(a - b) > 0.3:
                break
        r = PuiseuxSeries([(q, a)] + _tail(rng, q, trunc), trunc + q)
        s = PuiseuxSeries([(q, b)] + _tail(rng, q, trunc), trunc + q)
    else:
        raise ValueError(f"unknown degeneration type {tag!r}")
    return r, s
