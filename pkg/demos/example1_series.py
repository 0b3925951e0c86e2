"""Five-dimensional simplex plus one point: interior points, the series, its p-adic profile."""
from fractions import Fraction as F
from pathlib import Path

from hypalg import io
from hypalg.factorial import dwork_orbit_check, p_integrality_report
from hypalg.geometry import dilate, interior_lattice_points
from hypalg.relations import relation_lattice
from hypalg.series import Window, construct_v, psi_mns_series, specialize, verify_box_euler

cfg = io.config_from_json(io.load_json(Path(__file__).parent / "data" / "example1.json"))
L = relation_lattice(cfg)
gamma = L.basis[0]
print("relation lattice basis:", gamma)

P = cfg.polytope
for d in (1, 2, 3):
    print(f"interior points of {d}P:", len(interior_lattice_points(dilate(P, d))))

u0 = (2, 1, -1, 0, 0, 3)
v = construct_v(cfg, u0, subset=range(1, 7))
print("v =", [str(x) for x in v])

s = psi_mns_series(v, cfg, L, Window.around_line(gamma, -2, 20))
coeffs = specialize(s, gamma, origin=(0,) * cfg.N)
for l, c in enumerate(coeffs[:6]):
    print(f"  coefficient {l}: {c}")

rep = verify_box_euler(s, [-x for x in u0], cfg, L)
print("box and Euler equations hold:", rep.passed, f"({rep.terms_compared} terms compared)")

pr = p_integrality_report(s, [2, 3, 5, 7, 11, 13])
for p, (val, first) in sorted(pr.per_prime.items()):
    print(f"  p={p}: largest denominator exponent {val}, first offender {first}")

for p in (2, 5, 7, 11, 13):
    print(f"Dwork orbit for p={p} stays on an interior point:", dwork_orbit_check(v, cfg, p, 10))
