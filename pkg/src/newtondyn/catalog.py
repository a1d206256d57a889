"""Quartic polynomials with a known hyperbolic type, exact coefficients (ascending)."""
from __future__ import annotations

import sympy as sp

__all__ = ["TYPED_QUARTICS", "INCONSISTENT_B", "typed_quartic"]

_R = sp.Rational
_I = sp.I

TYPED_QUARTICS = {
    # additional critical point 0 lies on the superattracting cycle 0 -> 1 -> 0
    "A": [_R(1, 4), _R(-1, 4), 0, 0, _R(1, 12)],
    # 0 on the cycle 0 -> 1 -> 0, the other additional critical point -1 + 3i/2 lands in the basin of 0
    "C": [_R(7, 12) - _I / 2, -(_R(7, 12) - _I / 2), 0, _R(1, 6) - _I / 4, _R(1, 12)],
    # 0 on 0 -> 1 -> 0, the other additional critical point 13/10 on a second attracting 2-cycle
    "D": [-_R(13, 30) + _R(1, 4), _R(13, 30) - _R(1, 4), 0, -_R(13, 60), _R(1, 12)],
    # 0 fixed, 7/4 in the basin of 0 but not in its immediate basin
    "IE": [0, _R(3, 4), 0, -_R(7, 24), _R(1, 12)],
    # +-1 both map to the fixed point -3 via -1 -> 1 -> -3
    "FE2": [-_R(15, 4), 1, -_R(3, 2), 0, _R(1, 4)],
}

# Labelled as bitransitive with additional critical points +-1 on a 2-cycle
# -1 <-> 1, but its Newton map sends -1 to 2/5, so the stated cycle is absent.
INCONSISTENT_B = [-_R(11, 12), 1, -_R(1, 2), 0, _R(1, 12)]


def typed_quartic(tag):
    return list(TYPED_QUARTICS[tag])
