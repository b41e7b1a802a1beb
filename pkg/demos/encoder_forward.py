"""Run the mini encoder with every token-mixing mechanism and compare readouts.

Same seed, same patches; only the mixer changes.  Row normalization can
legitimately report a degenerate normalizer on random activations (row sums of
a PSD operator are sign-indefinite), which is shown rather than hidden.  Note
that with q = k = v the channel-space mechanism reduces to the same
rebracketed product as the factorized token-space path, so those two rows
print identical checksums; that is an identity, not a bug.
"""

import numpy as np

from attnops import (
    DegenerateNormalizer,
    array_checksum,
    random_matrix,
    variant_ids,
    vit_forward,
    vit_init,
)


def main():
    n_patches, width, depth = 4, 8, 2
    patches = random_matrix(n_patches, width, seed=0)
    print(f"{n_patches} patches, width {width}, {depth} blocks, seed 0\n")
    print(f"{'mechanism':>16}  {'norm':>10}  checksum")
    for mechanism in variant_ids():
        params = vit_init(width, width, 4 * width, n_patches, depth,
                          seed=0, mechanism=mechanism)
        try:
            y = vit_forward(params, patches)
        except DegenerateNormalizer as exc:
            print(f"{mechanism:>16}  {'-':>10}  degenerate normalizer: {exc}")
            continue
        print(f"{mechanism:>16}  {np.linalg.norm(y):10.4f}  {array_checksum(y)}")


if __name__ == "__main__":
    main()
