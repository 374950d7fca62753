"""Killed density on the positive axis and its Laplace transform, the lambda-Green function."""

import math

from scipy import integrate

from slitbm.green import green_lambda_axis, killed_density_axis

x, y = 1.0, 4.0
print(f"G(0; {x}, {y}) = {green_lambda_axis(0.0, x, y):.10f}   (1/pi) ln 3 = {math.log(3) / math.pi:.10f}")
for lam in (0.5, 1.0, 2.0):
    f = lambda t: math.exp(-lam * lam * t / 2) * float(killed_density_axis(t, x, y))  # noqa: E731
    lap = integrate.quad(f, 0, 10, limit=200)[0] + integrate.quad(f, 10, math.inf)[0]
    print(f"lam={lam}: Laplace of killed density {lap:.10f}, Green function {green_lambda_axis(lam, x, y):.10f}")
