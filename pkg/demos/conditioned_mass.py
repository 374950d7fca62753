"""Mass of the killed density conditioned on the exit place, for the two-term and the Doob form."""

import math

import numpy as np

from slitbm.conditioned import free_density, killed_density_2d_grid
from slitbm.slit import hit_place_density, hit_place_density_axis, level_hit_cdf

t, y, z = 1.0, 1.0, -1.0

# polar Gauss rule over the upper half-plane around (z, 0), doubled by symmetry
g, gw = np.polynomial.legendre.leggauss(40)
u = 0.5 * (g + 1)
r, dr = 3 * u / (1 - u), 1.5 * gw / (1 - u) ** 2
th, dth = 0.5 * math.pi * (g + 1), 0.5 * math.pi * gw
pts = [(z + a * math.cos(b), a * math.sin(b)) for a in r for b in th]
wts = np.array([a * da * db for a, da in zip(r, dr) for db in dth])
h = np.array([hit_place_density(p, z) for p in pts])
norm = float(hit_place_density_axis(y, z))

doob = 2 * np.dot(killed_density_2d_grid(t, y, pts) * h, wts) / norm
free = np.array([free_density(t, (y, 0.0), p) for p in pts])
two_term = 2 * np.dot(free * h, wts) / norm - float(level_hit_cdf(y - z, t))
print(f"Doob kernel mass     {doob:.6f}   P(tau > t | exit at z) = erf(1) = {math.erf(1):.6f}")
print(f"two-term kernel mass {two_term:.6f}")
