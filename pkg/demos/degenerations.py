"""Degenerating quartic families: series predictions against numeric samples.

A family with roots 0, 1, r(t), s(t) given by Puiseux series degenerates as
t -> 0. The series side predicts the reduced map, the holes and how the free
critical points behave; the numeric side samples the actual maps at small t
and tracks their cycles.
"""
from newtondyn.berkovich import analyze_family
from newtondyn.degeneration import degeneration_report
from newtondyn.puiseux import series

FAMILIES = [("t", "1/2"), ("t", "1 - t"), ("t^2", "t"), ("t", "2*t")]

for r, s in FAMILIES:
    ana = analyze_family(series(r), series(s), with_fsi=True)
    holes = ", ".join(f"{complex(h):.3g} (mult {m}, rho {complex(rho).real:.4f})" for h, m, rho in ana.holes)
    print(f"r = {r}, s = {s}: {ana.type.tag}, reduced degree {ana.reduced_degree}, holes {holes}")
    print(f"    tree vertices {len(ana.tree.v_rep)}, valences {sorted(ana.tree.valences)}, verified {ana.verified}")
    if ana.fsi is not None:
        print(f"    reduced map: gamma = {ana.fsi.gamma_total}, delta = {ana.fsi.delta}")
    rep = degeneration_report(f"r = {r}; s = {s}", (1e-2, 1e-3, 1e-4, 1e-5))
    dist = ", ".join(f"{d:.1e}" for d in rep["series"]["coefficient_distance"])
    print(f"    distance of sampled maps to the reduction: {dist}")

print("\na free attracting 2-cycle running into a hole (Per2 slice at c = 1/2)")
rep = degeneration_report("per2:0.5", (1e-2, 1e-3, 1e-4, 1e-5))
for row in rep["dichotomy"]["rows"]:
    print(f"    period {row['period']}: relation {row['relation']}, ok {row['ok']}")
for sh in rep["basin_shrinkage"]:
    print("    basin diameters " + ", ".join(f"{d:.2e}" for d in sh["diameters"]))

print("\nodd quintic: a 2-cycle collapses onto the hole")
rep = degeneration_report("odd-quintic", (1e-2, 1e-3, 1e-4, 1e-5))
print(f"    {rep['hole_collisions']}")
