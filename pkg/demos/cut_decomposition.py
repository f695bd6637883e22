"""Walk through the 6x6 Robinson matrix that is a sum of three unsorted cuts.

Run with ``python3 demos/cut_decomposition.py``.
"""

from structqap.cli import render_heatmap
from structqap.decomposition import (
    cdw_decomposition,
    cut_weight_matrix,
    robinson_kalmanson_decomposition,
)
from structqap.generators import cut_matrix_from_blocks
from structqap.matrix import ExactMatrix, format_rational
from structqap.recognizers import BlockPartition, check_cut_matrix, classify

C = ExactMatrix(
    [
        [0, 1, 2, 3, 3, 3],
        [1, 0, 2, 3, 3, 3],
        [2, 2, 0, 2, 3, 3],
        [3, 3, 2, 0, 2, 2],
        [3, 3, 3, 2, 0, 1],
        [3, 3, 3, 2, 1, 0],
    ]
)


def main():
    print(render_heatmap(C))
    report = classify(C)
    print("classes:", ", ".join(name for name, v in report.items() if v))

    # the obvious way to write C uses three cuts, none with sorted block sizes
    parts = [((1, 3), (4, 4), (5, 6)), ((1, 2), (3, 3), (4, 6)), ((1, 1), (2, 2), (3, 4), (5, 5), (6, 6))]
    total = ExactMatrix.zeros(6)
    for blocks in parts:
        M = cut_matrix_from_blocks(BlockPartition(6, blocks))
        total = total + M
        sizes = check_cut_matrix(M).certificate.sizes
        print(f"cut {blocks}: sizes {sizes}, sorted: {list(sizes) == sorted(sizes)}")
    print("sum of the three cuts equals C:", total == C)

    D = cut_weight_matrix(C)
    print("\npositive cut weights:", {k: format_rational(v) for k, v in D.positive().items()})

    rk = robinson_kalmanson_decomposition(C)
    print("single-block decomposition:")
    for t in rk.terms:
        print(f"  {format_rational(t.weight)} x {t.label}  blocks {t.blocks.blocks}")
    print(f"  offset {format_rational(rk.offset)}")

    v = cdw_decomposition(C)
    dec = v.certificate
    print("\nsorted-block decomposition (peeled paths in the cut-weight graph):")
    for path, t in zip(dec.paths, dec.terms):
        print(f"  path {path}: {format_rational(t.weight)} x blocks {t.blocks.blocks}")
    print(f"  offset {format_rational(dec.offset)}, reconstructs C: {dec.reconstructs(C)}")


if __name__ == "__main__":
    main()
