"""Generate one instance per solvable case, detect it and confirm the optimum by enumeration.

Run with ``python3 demos/theorem_suite.py [n] [seed]`` (defaults 7 and 0).
"""

import sys
import time

from structqap.generators import random_instance
from structqap.matrix import format_rational, qap_objective
from structqap.solver import brute_force, detect_case

# class of A, then the summands of B
CASES = {
    "LS_robinson_simple": ("robinson", ("simple_toeplitz",)),
    "DW_kalmanson_dw": ("kalmanson", ("dw_toeplitz",)),
    "CDW_antimonge": ("cdw_conic", ("monotone_anti_monge",)),
    "down_benevolent": ("robinson_kalmanson", ("down_benevolent",)),
    "up_benevolent_PS": ("ps_anti_monge", ("up_benevolent",)),
    "PSmonge_down_benevolent": ("ps_monge", ("down_benevolent",)),
    "BCRW_antimonge_benevolent": ("monotone_anti_monge_asym", ("up_benevolent",)),
    "combined_1": ("cdw_conic", ("monotone_anti_monge", "down_benevolent")),
    "combined_2": ("down_benevolent", ("ps_monge", "robinson_kalmanson")),
    "combined_3": ("dw_toeplitz", ("cyclic_ps_monge", "kalmanson")),
}


def main(n=7, seed=0):
    for case, (a_cls, b_cls) in CASES.items():
        A = random_instance(a_cls, n, seed)
        parts = [random_instance(c, n, seed + 1 + k) for k, c in enumerate(b_cls)]
        B = parts[0] if len(parts) == 1 else parts[0] + parts[1]
        split = tuple(parts) if len(parts) == 2 else None
        cert = detect_case(A, B, split, cases=(case,))
        # detect_case without a restriction may report a broader case first
        reported = detect_case(A, B, split).case
        t = time.perf_counter()
        bf = brute_force(A, B)
        took = time.perf_counter() - t
        value = qap_objective(A, B, cert.optimal_permutation)
        print(f"{case:27s} reported as {reported:27s} perm {cert.optimal_permutation}  "
              f"value {format_rational(value):>10s}  brute force {format_rational(bf.value):>10s}  "
              f"{'ok' if value == bf.value else 'MISMATCH'} ({took:.2f}s)")


if __name__ == "__main__":
    args = [int(a) for a in sys.argv[1:3]]
    main(*args)
