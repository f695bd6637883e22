"""Show how the Supnick permutation turns a corner-block ray into a cross, and how
shifts slide the cross along the diagonal without changing a Toeplitz objective.

Run with ``python3 demos/permuted_rays.py``.
"""

from structqap.cli import render_heatmap
from structqap.generators import (
    RaySpec,
    admissible_shifts,
    extremal_anti_monge,
    ps_ray,
    shift_bounds,
    supnick_permutation,
)
from structqap.matrix import ExactMatrix, format_rational, identity, qap_objective


def main(n=10, p=2, q=7):
    print(f"corner-block ray, n={n}, p={p}, q={q}")
    print(render_heatmap(extremal_anti_monge(n, p, q)))
    print(f"after the Supnick permutation {supnick_permutation(n)}")
    print(render_heatmap(ps_ray(RaySpec(n, p, q))))

    shifts = admissible_shifts(n, p, q)
    print("shift bounds (L, R):", shift_bounds(n, p, q), " admissible u:", shifts)
    f = [0, 5, 3, 2, 8, 1, 4, 7, 6, 9]
    B = ExactMatrix.from_function(n, lambda i, j: f[abs(i - j)])
    for u in shifts:
        C = ps_ray(RaySpec(n, p, q, u))
        print(f"u={u:2d}  Z(C, B, id) = {format_rational(qap_objective(C, B, identity(n)))}")
    print(f"\ncross slid to u={shifts[-1]}")
    print(render_heatmap(ps_ray(RaySpec(n, p, q, shifts[-1]))))


if __name__ == "__main__":
    main()
