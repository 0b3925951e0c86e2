"""The (2;1,1) configuration: central binomials and their quadratic relation."""
from math import comb

from hypalg.geometry import config_alpha_beta
from hypalg.relations import relation_lattice
from hypalg.series import Window, psi_mns_series, specialize, verify_polynomial_relation

cfg = config_alpha_beta((2,), (1, 1))
L = relation_lattice(cfg)
g = L.basis[0]
s = psi_mns_series((-1, -1, 0, 0, 0), cfg, L, Window.around_line(g, 0, 30))
y = specialize(s, g, origin=(0,) * cfg.N, t_scale=-1)
print("y(t) =", " + ".join(f"{c}t^{k}" for k, c in enumerate(y[:6])), "+ ...")
assert y == [comb(2 * k, k) for k in range(31)]
# (1 - 4t) y^2 - 1 = 0 up to t^30
print("(1 - 4t) y^2 = 1 holds:", verify_polynomial_relation(y, {(0, 2): 1, (1, 2): -4, (0, 0): -1}, K=30))
