"""Where quadratic scaling gives way to linear scaling.

For the correlated family with correlation parameter eta the generator variance
is n^2 dw^2 / (n (1 - eta) + eta). The local exponent d log Var / d log n falls
from 2 to 1 around n = eta / (1 - eta).

    python3 demos/02_correlation_transition.py [--plot out.png]
"""
import argparse

import numpy as np

from tfqm import fit_scaling_exponent, scaling_sweep

parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
parser.add_argument("--plot", help="save the local exponent to this path (needs matplotlib)")
args = parser.parse_args()

ns = [int(v) for v in np.unique(np.rint(np.geomspace(1, 1e5, 60)))]
reports = {eta: scaling_sweep(eta, 1.0, ns) for eta in (0.9, 0.99, 0.999)}

for eta, r in reports.items():
    slopes = dict(r.local_slopes)
    below = [n for n in ns if n <= r.transition_n]
    print(f"eta={eta}: transition n = {r.transition_n:.1f}, "
          f"slope at n={below[-1]} is {slopes[below[-1]]:.3f}, at n={ns[-1]} is {slopes[ns[-1]]:.3f}, "
          f"single power-law fit {fit_scaling_exponent(r.points):.3f}")

if args.plot:
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    for eta, r in reports.items():
        n, s = zip(*r.local_slopes)
        ax.semilogx(n, s, label=f"eta={eta}")
        ax.axvline(r.transition_n, color="0.7", lw=0.8)
    ax.set_xlabel("photon number n")
    ax.set_ylabel("local exponent")
    ax.legend()
    fig.tight_layout()
    fig.savefig(args.plot, dpi=150)
    print(f"wrote {args.plot}")
