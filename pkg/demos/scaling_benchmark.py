"""Measure the complexity slopes: doubling ratios instead of absolute times.

time(2n) / time(n) is machine independent: about 2 for a linear-time kernel,
about 4 for a quadratic one.  The fast diagonal and the factorized attention
path double; the materializing routes quadruple.  Token counts are kept
moderate here so the demo finishes quickly; raise them for cleaner ratios.
"""

from attnops import BenchConfig, run_bench


def main():
    config = BenchConfig(
        variants=("diag_fast", "diag_naive", "tensor_linear", "tensor_naive"),
        n_values=(512, 1024, 2048),
        d=32,
        seeds=(0,),
        repetitions=5,
        warmup=2,
    )
    records, summary = run_bench(config)
    print(f"{len(records)} timing records")
    for line in summary.lines():
        print(line)
    print("\nexpected: diag_fast and tensor_linear ratios near 2 (linear);")
    print("          diag_naive and tensor_naive ratios at least 4 (quadratic or")
    print("          worse once the materialized matrices outgrow the caches)")


if __name__ == "__main__":
    main()
