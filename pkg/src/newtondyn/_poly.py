"""Polynomial helpers shared by the rational-map and cycle code.

Coefficient arrays are always in ascending order: ``c[i]`` multiplies ``z**i``.
"""
from __future__ import annotations

import numpy as np


class RootSolverError(RuntimeError):
    """Raised when root refinement fails; ``partial`` holds the best estimates."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


def trim(c, tol=1e-14):
    """Drop top coefficients whose modulus is below ``tol`` times the largest one."""
    c = np.asarray(c, dtype=complex)
    if c.size == 0:
        return c
    scale = np.max(np.abs(c))
    if scale == 0:
        return c[:0]
    k = c.size
    while k > 0 and abs(c[k - 1]) <= tol * scale:
        k -= 1
    return c[:k]


def horner(c, z):
    """Evaluate ascending coefficients ``c`` at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros_like(z)
    for a in c[::-1]:
        out = out * z + a
    return out


def horner_with_derivative(c, z):
    z = np.asarray(z, dtype=complex)
    p = np.zeros_like(z)
    dp = np.zeros_like(z)
    for a in c[::-1]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def aberth(values, z0, tol=1e-14, maxiter=500):
    """Simultaneous Aberth-Ehrlich refinement of all roots.

    ``values(z)`` returns ``(p(z), p'(z))`` for an array ``z``. Returns the
    refined roots and a boolean mask of the ones whose last correction was
    below ``tol`` (relative).
    """
    z = np.array(z0, dtype=complex)
    n = z.size
    done = np.zeros(n, dtype=bool)
    if n == 0:
        return z, done
    eye = np.eye(n, dtype=bool)
    for _ in range(maxiter):
        p, dp = values(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            diff = z[:, None] - z[None, :]
            diff[eye] = 1.0
            inv = 1.0 / diff
            inv[eye] = 0.0
            s = inv.sum(axis=1)
            w = ratio / (1.0 - ratio * s)
        w[~np.isfinite(w)] = 0.0
        w[p == 0] = 0.0
        z = z - w
        done = np.abs(w) <= tol * np.maximum(1.0, np.abs(z))
        if done.all():
            break
    return z, done


def relative_residual(c, z):
    """|p(z)| divided by sum |c_i| |z|^i, elementwise."""
    z = np.asarray(z, dtype=complex)
    num = np.abs(horner(c, z))
    den = horner(np.abs(c).astype(complex), np.abs(z)).real
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(den > 0, num / den, 0.0)
    return r


def poly_roots(c, residual_tol=1e-12):
    """All finite roots of the ascending coefficient list ``c`` (with multiplicity).

    Companion-matrix eigenvalues (``numpy.roots``) followed by Aberth
    refinement. Leading coefficients below 1e-14 relative are dropped first.
    """
    c = trim(c)
    if c.size <= 1:
        return np.zeros(0, dtype=complex)
    # factor out exact zero roots so the eigenvalue problem stays well scaled
    k0 = 0
    while k0 < c.size and c[k0] == 0:
        k0 += 1
    core = c[k0:]
    zeros = np.zeros(k0, dtype=complex)
    if core.size <= 1:
        return zeros
    start = np.roots(core[::-1])
    refined, _ = aberth(lambda z: horner_with_derivative(core, z), start)
    res = relative_residual(core, refined)
    if not np.all(res <= residual_tol):
        # the eigenvalues may simply be better than the refinement
        res0 = relative_residual(core, start)
        refined = np.where(res0 < res, start, refined)
        res = np.minimum(res, res0)
        if not np.all(res <= residual_tol):
            raise RootSolverError(
                f"root refinement stalled at relative residual {res.max():.3g}",
                partial=np.concatenate([zeros, refined]),
            )
    return np.concatenate([zeros, refined])


def cluster(points, radius):
    """Group points closer than ``radius`` (relative to max(1,|z|)).

    Returns a list of index lists; single-linkage, deterministic order.
    """
    points = np.asarray(points, dtype=complex)
    n = points.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(1.0, abs(points[i]), abs(points[j]))
            if abs(points[i] - points[j]) <= radius * scale:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def polymul(a, b):
    return np.convolve(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def polypow(a, k):
    out = np.array([1.0 + 0j])
    for _ in range(k):
        out = polymul(out, a)
    return out


def from_roots(roots):
    """Monic ascending coefficients of prod (z - r)."""
    out = np.array([1.0 + 0j])
    for r in roots:
        out = polymul(out, [-r, 1.0])
    return out
