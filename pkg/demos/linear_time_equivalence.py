"""Show that the factorized path computes the same function as materializing T.

The rebracketing T V = Q ((K^T K)(Q^T V)) and the normalizer identity
tr(T) = sum((K^T K) o (Q^T Q)) together remove every n-by-n intermediate.
This script checks the equality numerically across sizes and confirms that
the gradients (probed by central finite differences) agree too, i.e. the two
routes are the same function, not just coincidentally equal outputs.
"""

import numpy as np

from attnops import (
    fd_probe,
    operator_trace,
    random_inputs,
    score_matrix,
    tensor_attention_linear,
    tensor_attention_naive,
)


def main():
    print("forward equality, random instances:")
    for n, d in ((4, 2), (16, 4), (64, 8), (128, 16)):
        inputs = random_inputs(n, d, seed=n * 31 + d)
        diff = np.max(np.abs(tensor_attention_linear(inputs) - tensor_attention_naive(inputs)))
        print(f"  n={n:4d} d={d:3d}: max abs diff {diff:.3e}")

    print("\nnormalizer identity tr(T) = sum((K^T K) o (Q^T Q)) = ||Q K^T||_F^2:")
    inputs = random_inputs(32, 6, seed=7)
    frob = float(np.sum(score_matrix(inputs.q, inputs.k) ** 2))
    print(f"  Hadamard-sum trace: {operator_trace(inputs.q, inputs.k):.12f}")
    print(f"  squared Frobenius:  {frob:.12f}")

    print("\ngradient agreement (central differences on u^T f(Q) w):")
    rng = np.random.default_rng(0)
    inputs = random_inputs(4, 3, seed=11)
    u, w = rng.standard_normal(4), rng.standard_normal(3)
    g_naive = fd_probe("tensor_naive", inputs, u, w)
    g_linear = fd_probe("tensor_linear", inputs, u, w)
    print(f"  max abs gradient diff: {np.max(np.abs(g_naive - g_linear)):.3e}")


if __name__ == "__main__":
    main()
