"""Hyperbolic types of quartic Newton maps and their basin pictures.

A quartic Newton map has two additional critical points. Where they go
decides the type: onto an attracting cycle (A, C, D), into the basin of a
root but not its immediate basin (IE), or onto a root after finitely many
steps (FE2). Images are written as PPM next to this script.
"""
import sys
import time
from pathlib import Path

from newtondyn.basins import classify_hyperbolic_type
from newtondyn.catalog import typed_quartic
from newtondyn.newton import newton_from_poly
from newtondyn.render import RenderJob, render_julia, render_param_per2, save_image

out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).with_name("out"))
out.mkdir(exist_ok=True)

for tag in ("A", "C", "D", "IE", "FE2"):
    N = newton_from_poly(typed_quartic(tag))
    t0 = time.perf_counter()
    rep = classify_hyperbolic_type(N, resolution=512)
    dt = time.perf_counter() - t0
    print(f"{tag:>4}: classified as {rep.type:<4} ({dt:.1f} s), free cycles {len(rep.free_cycles)}")
    for a in rep.critical_assignments:
        print(f"        critical point {complex(a.point):.4f} -> {a.target}, immediate {a.immediate}")
    img, _ = render_julia(RenderJob("julia", rep.window, (400, 400), 200), N)
    save_image(img, out / f"julia_{tag}.ppm")

# the slice where 0 and 1 form a superattracting 2-cycle; c is the free critical point
img, _ = render_param_per2(RenderJob("param-per2", None, (420, 360), 200), marks=[(1.3, "D")])
save_image(img, out / "per2.png")
print(f"images written to {out}")
