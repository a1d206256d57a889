"""Blaschke model of an immediate basin near the escape boundary.

B_a(w) = -w^k (w - a)/(1 - a w) with 0 < a < 1 maps the unit disk onto itself,
fixes 0 with local degree k and has one more critical point x_a in (0, 1).
As a -> 1 the point x_a runs to 1, the segment [0, x_a] stays forward
invariant, the hyperbolic step d(x_a, B_a(x_a)) stays bounded, and B_a
converges to w^k locally uniformly on the open disk.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "BlaschkeParams",
    "BracketError",
    "blaschke",
    "critical_numerator",
    "nonfixed_critical",
    "hyperbolic_distance",
    "escape_diagnostics",
    "default_a_sequence",
]

INVARIANCE_SAMPLES = 256
SUP_RADIUS = 0.9
SUP_SAMPLES = 720


class BracketError(RuntimeError):
    pass


@dataclass(frozen=True)
class BlaschkeParams:
    a: float
    k: int = 2

    def __post_init__(self):
        if not 0 < self.a < 1:
            raise ValueError("a must lie in (0, 1)")
        if int(self.k) != self.k or self.k < 2:
            raise ValueError("k must be an integer >= 2")

    def __call__(self, w):
        return blaschke(w, self.a, self.k)


def blaschke(w, a, k=2):
    w = np.asarray(w, dtype=complex) if np.iscomplexobj(w) else np.asarray(w, dtype=float)
    return -(w**k) * (w - a) / (1 - a * w)


def critical_numerator(a, k=2):
    """Numerator of B_a' as ascending coefficients.

    B_a'(w) has numerator -w^(k-1) q(w) with q(w) = -k a w^2 + ((k+1) + (k-1) a^2) w - k a.
    """
    q = np.array([-k * a, (k + 1) + (k - 1) * a * a, -k * a])
    return -np.concatenate([np.zeros(k - 1), q])


def _q(w, a, k):
    return -k * a * w * w + ((k + 1) + (k - 1) * a * a) * w - k * a


def nonfixed_critical(params):
    """The critical point x_a of B_a in (0, 1)."""
    a, k = params.a, params.k
    lo, hi = _q(0.0, a, k), _q(1.0, a, k)
    # q(0) = -ka < 0 and q(1) = (k-1)(1-a)^2 + 2(1-a) > 0; the roots of q have
    # product 1, so exactly one lies in (0, 1) when the signs differ
    if not (lo < 0 < hi):
        raise BracketError(f"no sign change of the critical quadratic on (0, 1) for a={a}, k={k}")
    return float(brentq(_q, 0.0, 1.0, args=(a, k), xtol=1e-15, rtol=4 * np.finfo(float).eps))


def hyperbolic_distance(p, q):
    """Distance in the unit disk for the curvature -1 metric."""
    rho = abs((p - q) / (1 - np.conj(p) * q))
    return float(2 * np.arctanh(rho))


def default_a_sequence(n=6):
    return [1 - 10.0 ** (-j) for j in range(1, n + 1)]


@dataclass
class DiagnosticsRow:
    j: int | None
    a: float
    x_a: float
    image_x_a: float
    invariant: bool
    invariance_max: float
    hyperbolic_step: float
    sup_to_limit: float
    sup_to_negated: float

    def to_dict(self):
        return dict(self.__dict__)


@dataclass
class DiagnosticsTable:
    k: int
    rows: list
    limit: str = "w^k"
    limit_sign: int = 1
    sign_note: str = ""
    checks: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())

    def to_dict(self):
        return {
            "k": self.k,
            "limit": self.limit,
            "limit_sign": self.limit_sign,
            "sign_note": self.sign_note,
            "rows": [r.to_dict() for r in self.rows],
            "checks": dict(self.checks),
            "passed": self.passed,
        }

    def to_text(self):
        head = f"{'j':>3} {'a':>12} {'x_a':>14} {'B(x_a)':>14} {'inv':>4} {'d(x,B(x))':>12} {'sup|B-w^k|':>12}"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            j = "" if r.j is None else str(r.j)
            lines.append(
                f"{j:>3} {r.a:>12.8f} {r.x_a:>14.10f} {r.image_x_a:>14.10f} {'yes' if r.invariant else 'NO':>4}"
                f" {r.hyperbolic_step:>12.6f} {r.sup_to_limit:>12.4e}"
            )
        lines.append("")
        for name, ok in self.checks.items():
            lines.append(f"{name}: {'pass' if ok else 'FAIL'}")
        return "\n".join(lines)


def _row(a, k, j=None):
    p = BlaschkeParams(a, k)
    x = nonfixed_critical(p)
    bx = float(np.real(blaschke(x, a, k)))
    ws = np.linspace(0.0, x, INVARIANCE_SAMPLES)
    img = np.real(blaschke(ws, a, k))
    inv = bool(np.all(img >= -1e-15) and np.all(img <= x))
    theta = np.linspace(0, 2 * np.pi, SUP_SAMPLES, endpoint=False)
    w = SUP_RADIUS * np.exp(1j * theta)
    b = blaschke(w, a, k)
    # the difference is holomorphic on the disk, so the boundary circle carries the sup
    sup_pos = float(np.abs(b - w**k).max())
    sup_neg = float(np.abs(b + w**k).max())
    return DiagnosticsRow(j, float(a), x, bx, inv, float(img.max()), hyperbolic_distance(x, bx), sup_pos, sup_neg)


def escape_diagnostics(k=2, a_sequence=None, band=0.2, n=6):
    """Per-a table of x_a, invariance of [0, x_a], hyperbolic step and distance to the limit.

    Without ``a_sequence`` the values a = 1 - 10^-j, j = 1..n are used.
    """
    if a_sequence is None:
        a_sequence = default_a_sequence(n)
        js = list(range(1, len(a_sequence) + 1))
    else:
        js = [None] * len(a_sequence)
    a_sequence = [float(a) for a in a_sequence]
    if any(b <= a for a, b in zip(a_sequence, a_sequence[1:])):
        raise ValueError("a_sequence must be increasing")
    rows = [_row(a, k, j) for a, j in zip(a_sequence, js)]
    xs = [r.x_a for r in rows]
    sups = [r.sup_to_limit for r in rows]
    checks = {
        "x_a_increasing": all(b > a for a, b in zip(xs, xs[1:])),
        "forward_invariant": all(r.invariant for r in rows),
        "sup_decreasing": all(b < a for a, b in zip(sups, sups[1:])),
    }
    if len(rows) >= 4:
        ref = rows[2].hyperbolic_step
        checks["hyperbolic_step_bounded"] = all(abs(r.hyperbolic_step - ref) <= band * ref for r in rows[3:])
    note = (
        "(w - a)/(1 - a w) -> -1 locally uniformly on the open disk as a -> 1, "
        "so -w^k (w - a)/(1 - a w) -> +w^k; sup_to_negated tracks the distance to -w^k"
    )
    return DiagnosticsTable(k, rows, "w^k", 1, note, checks)
