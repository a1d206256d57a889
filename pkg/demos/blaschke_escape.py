"""The Blaschke model of an immediate basin whose critical point escapes.

B_a(w) = -w^2 (w - a)/(1 - a w) fixes 0 with local degree 2 and has one
more critical point x_a in (0, 1). As a -> 1 the critical point runs to the
boundary while one step of B_a moves it a bounded hyperbolic distance.
"""
import numpy as np

from newtondyn.blaschke import escape_diagnostics

table = escape_diagnostics(k=2, n=6)
print(table.to_text())
print(f"\nlimit of the hyperbolic step: ln 4 = {np.log(4):.6f}")
print(table.sign_note)
