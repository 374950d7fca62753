"""Where a Brownian path from (1, 0) first touches the slit: closed form, exact sampler, Euler paths."""

import numpy as np

from slitbm.mc import MCConfig, complete_places, simulate_hits
from slitbm.slit import hit_place_cdf_axis, sample_hit_place_exact


def main():
    rng = np.random.default_rng(0)
    exact = sample_hit_place_exact((1.0, 0.0), rng, 200_000)
    rec = simulate_hits(MCConfig(paths=20_000, step=1e-3, horizon=10.0, seed=1), (1.0, 0.0))
    euler = complete_places(rec, seed=1)
    print(f"censored at t=10: {rec.censored.mean():.3f} (finished by the exact sampler)")
    print("   v   P(B > v) closed   exact    euler")
    for v in (-0.1, -0.5, -1.0, -3.0, -10.0, -100.0):
        closed = float(hit_place_cdf_axis(1.0, -v))
        print(f"{v:6.1f}   {closed:.4f}         {np.mean(exact > v):.4f}   {np.mean(euler > v):.4f}")


if __name__ == "__main__":
    main()
