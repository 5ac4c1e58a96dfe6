"""Lattice-limit rows for the nine built-in lattices, alpha(beta) three ways,
and the wired-patch kernels closing in on the symmetry values.

    python3 demos/lattice_table.py
"""
from looprate.lattice import (
    BETA,
    TABLE_ORDER,
    alpha_closed,
    alpha_quadrature,
    alpha_torus,
    builtin,
    limit_check,
    table_row,
)


def fmt(x):
    return f"{float(x):.6f}"


if __name__ == "__main__":
    print(f"{'lattice':<20}{'tau':>10}{'lambda':>10}{'1/rho':>10}{'rho':>10}{'delta*rho':>11}{'sigma':>10}")
    for name in TABLE_ORDER:
        r = table_row(builtin(name))
        vals = (r.tau, r.lambda_, r.mean_lerw_loop, r.rho, r.delta_rho, r.sand_density)
        print(f"{name:<20}" + "".join(f"{fmt(v):>10}" for v in vals))

    print("\nexact rational rows:")
    for name in ("square", "fisher", "triakis_triangular"):
        r = table_row(builtin(name))
        print(f"  {name}: tau = {r.tau}, sand density = {r.sand_density}")

    print("\nweighted triakis triangular lattice:")
    r = table_row(builtin("triakis_triangular", BETA))
    print(f"  tau(beta) = {r.tau}")
    print(f"  rho(beta) = {r.rho}")

    print("\nalpha(beta):")
    for b in (0.5, 1, 2):
        print(f"  beta={b}: closed {alpha_closed(b):.15f}  quad {alpha_quadrature(b):.15f}  torus {alpha_torus(b):.12f}")

    print("\nwired square patches, central kernel vs 1/4:")
    for n in (8, 16, 32, 64):
        print(f"  n={n:>2}: deviation {limit_check(builtin('square'), n).deviation:.2e}")
