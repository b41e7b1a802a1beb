"""Matrix exponential: Taylor truncation against the diagonal rational approximant.

Shows the degree-(2,2) approximant evaluated at 1 (exactly 19/7 without
scaling), the exact nilpotent case where both methods terminate, the
cross-method agreement on random contractions, and scaling-and-squaring
rescuing accuracy once the norm grows.
"""

import math

import numpy as np

from attnops import expm_pade, expm_taylor, pade_coefficients

np.set_printoptions(precision=8, suppress=True)


def main():
    p, q = pade_coefficients(2, 2)
    print("degree-(2,2) coefficients (ascending):")
    print("  numerator:  ", p)
    print("  denominator:", q)
    raw = expm_pade(np.array([[1.0]]), 2, 2, scaling_threshold=math.inf)[0, 0]
    print(f"raw approximant at 1: {raw!r}  (19/7 = {19 / 7!r}, e = {math.e!r})")

    print("\nnilpotent argument: the series terminates, both methods are exact")
    nilpotent = np.array([[0.0, 1.0], [0.0, 0.0]])
    print("  taylor:", expm_taylor(nilpotent, 2).tolist())
    print("  rational:", expm_pade(nilpotent).tolist())

    print("\ncross-method agreement on random 1-norm contractions:")
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(20):
        a = rng.standard_normal((4, 4))
        a /= max(np.max(np.sum(np.abs(a), axis=0)), 1.0)
        worst = max(worst, np.max(np.abs(expm_taylor(a, 30) - expm_pade(a, 6, 6))))
    print(f"  worst over 20 matrices: {worst:.3e}")

    print("\nscaling-and-squaring keeps large-norm arguments accurate:")
    a = rng.standard_normal((4, 4)) * 3.0
    left = expm_pade(a) @ expm_pade(-a)
    print(f"  || expm(A) expm(-A) - I ||_max = {np.max(np.abs(left - np.eye(4))):.3e}")


if __name__ == "__main__":
    main()
