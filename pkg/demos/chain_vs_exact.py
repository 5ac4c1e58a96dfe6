"""Monte Carlo estimates from the marked cycle-rooted tree chain next to the
exact values, on the 3x3 grid.

    python3 demos/chain_vs_exact.py [steps]
"""
import sys

from looprate import families, loop_stats
from looprate.sampler import estimate_looping

if __name__ == "__main__":
    steps = int(sys.argv[1]) if len(sys.argv) > 1 else 10**6
    g, rot = families.grid(3, 3)
    exact = loop_stats(g, rot)
    est = estimate_looping(g, steps, seed=1)
    for key, value in (("rho", exact.rho), ("tau", exact.tau), ("lambda", exact.lambda_)):
        r = est[key]
        z = (r.estimate - float(value)) / r.stderr
        print(f"{key:>6}: exact {float(value):.6f} ({value})  estimate {r.estimate:.6f} +- {r.half_width:.6f}  z={z:+.2f}")
