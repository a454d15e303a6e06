"""Plot a trajectory CSV written by ``sbm-tcl dynamics``.

    python scripts/plot_trajectory.py traj.csv [out.png]

Needs matplotlib, which the package itself does not depend on.
"""
import sys

import numpy as np


def main(argv):
    if not argv:
        print(__doc__.strip())
        return 2
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.genfromtxt(argv[0], delimiter=",", names=True)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for name in ("v1", "v2", "v3"):
        ax.plot(data["t"], data[name], label=name)
    ax.set_xlabel("t")
    ax.legend()
    fig.tight_layout()
    out = argv[1] if len(argv) > 1 else argv[0].rsplit(".", 1)[0] + ".png"
    fig.savefig(out, dpi=120)
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
