"""Kronecker products, column-stacking, and the partial trace.

The outer product of stacked vectors carries the same entries as the
Kronecker product, just indexed differently; the script prints the exact
index correspondence, shows the deliberately wrong (row-stacking) convention
failing, and demonstrates the partial trace contracting one factor of a
product operator.
"""

import numpy as np

from attnops import kron, kron_vec_check, partial_trace, trace, vectorize

np.set_printoptions(precision=4, suppress=True)


def main():
    q = np.array([[1.0, 2.0], [3.0, 4.0]])
    k = np.array([[5.0, 6.0], [7.0, 8.0]])

    print("vec stacks columns:", vectorize(q).ravel())
    print("\nQ kron K:\n", kron(q, k))
    print("\nvec(Q) vec(K)^T:\n", vectorize(q) @ vectorize(k).T)

    report = kron_vec_check(q, k)
    print(f"\ncolumn-stacking correspondence: passed={report.passed} "
          f"(max deviation {report.max_deviation:.1e})")

    bad = kron_vec_check(q, k, vec_order="row")
    print(f"row-stacking negative control:  passed={bad.passed} "
          f"(max deviation {bad.max_deviation:.1e})  <- must fail")

    print("\npartial trace of a product operator factorizes:")
    t = kron(q, k)
    print("  Tr_W(Q kron K):\n", partial_trace(t, 2, 2, "w"))
    print("  tr(K) * Q:\n", trace(k) * q)
    print("  Tr_V(Q kron K):\n", partial_trace(t, 2, 2, "v"))
    print("  tr(Q) * K:\n", trace(q) * k)
    print(f"  full trace preserved: {trace(partial_trace(t, 2, 2, 'w')):.4f} "
          f"== {trace(t):.4f}")


if __name__ == "__main__":
    main()
