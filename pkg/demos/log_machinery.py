"""Logarithmic quasisolutions for (2;1,1): combinations, closed form, vanishing."""
from hypalg.geometry import config_alpha_beta
from hypalg.logseries import (
    base_point,
    closed_form_816,
    combine_solution,
    f_poly,
    log_free_part,
    quasisolution,
    ray_window,
)
from hypalg.relations import relation_lattice
from hypalg.series import specialize, verify_box_euler

alpha, beta = (2,), (1, 1)
cfg = config_alpha_beta(alpha, beta)
L = relation_lattice(cfg)
g = L.basis[0]
w = ray_window(alpha, beta, 10, -6)

for k in (-2, 0, 2):
    print(f"f_(2,{k}) log coefficients:", {p: str(c) for p, c in f_poly(2, k).items()})

for r in range(3):
    s = combine_solution([g] * r, (1, 0, 0, 2), cfg, L, w)
    print(f"log degree {r}: {len(s.terms)} terms, solves the system:",
          verify_box_euler(s, (1, 0, 0, 2), cfg, L).passed)

u0 = base_point(alpha, beta)
mu = tuple(-x for x in u0)
closed = closed_form_816(alpha, beta, u0, w)
print("closed form equals log-free part:",
      log_free_part(quasisolution((0, 1), mu, cfg, L, w)).equals(closed))
print("closed form coefficients:", [str(c) for c in specialize(closed, g)[:6]])
print("non-rearrangement (2,3) vanishes:", quasisolution((2, 3), mu, cfg, L, w).is_zero())
