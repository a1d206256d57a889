"""Fixed points of Newton maps and what happens when two roots collide.

Every root of P is a superattracting fixed point of N = z - P/P' and infinity
is repelling with multiplier d/(d-1). The holomorphic indices of all fixed
points add up to 1. When roots collide the map drops degree, and the lost
factor leaves a hole at the collision point.
"""
import numpy as np
import sympy as sp

from newtondyn.epstein import find_cycles, gamma_delta
from newtondyn.newton import newton_from_roots, projective_newton_map
from newtondyn.rational import extract_holes, multiplier_at

rng = np.random.default_rng(7)
roots = np.sqrt(rng.uniform(0, 1, 4)) * np.exp(2j * np.pi * rng.uniform(0, 1, 4))
N = newton_from_roots(list(roots))

print("fixed points of a random quartic Newton map")
fixed = find_cycles(N.map, 1)
for c in fixed:
    z = c.points[0]
    print(f"  {complex(z):.6f}  m={c.multiplicity}  rho={complex(c.multiplier):.3g}  index={complex(c.index):.6f}  {c.classification}")
print(f"  sum of multiplicities {sum(c.multiplicity for c in fixed)}")
print(f"  sum of indices {sum(complex(c.index) for c in fixed):.12f}")
print(f"  multiplier at infinity {complex(N.multiplier_at_infinity()).real:.15f}")

fsi = gamma_delta(N.map)
print(f"  gamma = {fsi.gamma_total}, delta = {fsi.delta}, gamma <= delta: {fsi.satisfied}")

print("\nroots 0, t, 1 with t -> 0 (exact arithmetic)")
dec = extract_holes(projective_newton_map([0, 0, 1]))
g = dec.reduced_map
z = sp.Symbol("z")
num = sum(c * z**i for i, c in enumerate(g.num_coeffs))
den = sum(c * z**i for i, c in enumerate(g.den_coeffs))
print(f"  holes {dec.holes}")
print(f"  reduced map {sp.factor(num / den)}")
print(f"  multiplier at the hole {multiplier_at(g, 0)}")

print("\nthree roots colliding at 0")
dec = extract_holes(projective_newton_map([0, 0, 0, 1]))
print(f"  holes {dec.holes}, multiplier {multiplier_at(dec.reduced_map, 0)}")
