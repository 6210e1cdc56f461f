"""Strong-coupling sequence in the harmonic approximation and its extrapolation.

Also reports how far the harmonic relative state is from the variational one.
"""

import argparse
import math

from trapent.numerics import build_radial_grid
from trapent.radial_solver import solve_ground_radial
from trapent.wigner_limit import DEFAULT_G_LIST, HarmonicRadial, asymptotic_spectrum


def harmonic_distance(g):
    sol = solve_ground_radial(g)
    grid = build_radial_grid(200, sol.r_max)
    r = grid.nodes
    return math.sqrt(grid.integrate((sol.u(r) - HarmonicRadial(g).u(r)) ** 2))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--g-list", default=",".join(str(g) for g in DEFAULT_G_LIST))
    p.add_argument("--grid-points", type=int, default=64)
    a = p.parse_args()
    g_list = [float(x) for x in a.g_list.split(",")]
    res = asymptotic_spectrum(g_list, grid_points=a.grid_points)
    print(f"{'g':>8} {'r_cl':>8} {'Omega_0':>10} {'Omega_1':>10} {'Omega_2':>10} "
          f"{'l0/l1':>9} {'l0/l2':>9} {'l0/l3':>10} {'circ.var':>9}")
    for pt in res.points:
        print(f"{pt.g:8.0f} {pt.classical_radius:8.4f} {pt.omega[0]:10.6f} {pt.omega[1]:10.6f} "
              f"{pt.omega[2]:10.6f} {pt.lambda_ratios[0]:9.3f} {pt.lambda_ratios[1]:9.1f} "
              f"{pt.lambda_ratios[2]:10.0f} {pt.circular_variance:9.2e}")
    print(f"{'inf':>8} {'':>8} {res.omega_inf:10.6f} {'':>10} {'':>10} {res.lambda_ratios[0]:9.3f} "
          f"{res.lambda_ratios[1]:9.1f} {res.lambda_ratios[2]:10.0f}")
    print("\nparity overlaps at largest g:", [round(v, 7) for v in res.points[-1].parity_overlaps])
    print("\nL2 distance harmonic vs variational relative state:")
    for g in (20.0, 100.0, 250.0, 1000.0):
        d = harmonic_distance(g)
        print(f"  g={g:7.0f}  {d:.4f}   d*g^(1/3)={d * g ** (1 / 3):.3f}")
