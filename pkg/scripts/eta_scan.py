"""Dense scan of the collective occupancies eta_1..eta_5 in ln g.

Lists every local maximum per channel; channels l >= 2 show a weak-coupling
bump followed by a minimum before the main maximum. Also prints the largest
share 2 eta_l / eta_0 over l > 1 against the 1e-3 threshold.
"""

import argparse

import numpy as np

from trapent.pipeline import NEGLIGIBLE_SHARE, AnalysisConfig, analyze

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--g-min", type=float, default=0.1)
    p.add_argument("--g-max", type=float, default=500.0)
    p.add_argument("--points", type=int, default=60)
    p.add_argument("--l-max", type=int, default=12)
    a = p.parse_args()
    g = np.geomspace(a.g_min, a.g_max, a.points)
    eta = []
    share = []
    for x in g:
        rep = analyze(float(x), AnalysisConfig(l_max=a.l_max)).report
        eta.append(rep.eta[:6])
        share.append(rep.metadata["max_share_l_gt_1"])
    eta = np.array(eta)
    for l in range(1, 6):
        e = eta[:, l]
        peaks = np.where((e[1:-1] > e[:-2]) & (e[1:-1] > e[2:]))[0] + 1
        dips = np.where((e[1:-1] < e[:-2]) & (e[1:-1] < e[2:]))[0] + 1
        print(f"l={l}: maxima at g={[round(float(g[i]), 3) for i in peaks]} "
              f"(eta={[float(f'{e[i]:.3e}') for i in peaks]}), minima at g={[round(float(g[i]), 3) for i in dips]}")
    above = g[np.array(share) > NEGLIGIBLE_SHARE]
    print(f"\nshare 2 eta_l/eta_0 (l>1) above {NEGLIGIBLE_SHARE}: g in", [round(float(x), 3) for x in above])
