"""Timing harness with deterministic inputs and checksummed outputs.

Each (variant, n, seed) cell regenerates its inputs from the seed, runs the
warmup repetitions unrecorded, then times each measured repetition on the
monotonic clock and emits one record carrying a 64-bit checksum of the output
bytes.  The checksum pins the computation (nothing can be skipped) and makes
reruns comparable: identical configs must reproduce identical checksums.

Summaries report the median time per cell and the empirical doubling ratio
time(2n) / time(n) between consecutive token counts, which is the
machine-independent way to read off the complexity slope: about 2 for a
linear-time kernel, about 4 for a quadratic one.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from statistics import median

import numpy as np

from .attention import AttnInputs
from .errors import AttnOpsError, UnknownVariant
from .registry import VARIANTS
from .synth import random_inputs
from .tensor_attention import diag_fast, score_matrix

CSV_HEADER = "variant,n,d,seed,rep,wall_nanos,checksum"
_RECORD_FIELDS = ("variant", "n", "d", "seed", "rep", "wall_nanos", "checksum")


def array_checksum(a: np.ndarray) -> str:
    """64-bit blake2b digest of the raw array bytes, hex encoded."""
    return hashlib.blake2b(np.ascontiguousarray(a).tobytes(), digest_size=8).hexdigest()


def _diag_naive(inputs: AttnInputs) -> np.ndarray:
    # Quadratic route: materialize the n-by-n score matrix, then square its rows.
    scores = score_matrix(inputs.q, inputs.k)
    return np.einsum("ij,ij->i", scores, scores.conj()).real


def _diag_fast(inputs: AttnInputs) -> np.ndarray:
    return diag_fast(inputs.q, inputs.k)


_EXTRA_TARGETS = {
    "diag_fast": _diag_fast,
    "diag_naive": _diag_naive,
}


def bench_targets() -> dict:
    targets = dict(VARIANTS)
    targets.update(_EXTRA_TARGETS)
    return targets


@dataclass(frozen=True)
class BenchConfig:
    variants: tuple
    n_values: tuple
    d: int = 32
    d_v: int | None = None
    seeds: tuple = (0,)
    repetitions: int = 5
    warmup: int = 1
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        object.__setattr__(self, "variants", tuple(self.variants))
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        known = bench_targets()
        for v in self.variants:
            if v not in known:
                raise UnknownVariant(f"variants: unknown id {v!r}; known: {sorted(known)}")
        if not self.variants:
            raise ValueError("variants: need at least one id")
        if not self.n_values:
            raise ValueError("n_values: need at least one token count")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError(f"n_values: must be strictly increasing, got {self.n_values}")
        if min(self.n_values) < 1:
            raise ValueError("n_values: token counts must be >= 1")
        if self.d < 1:
            raise ValueError("d: must be >= 1")
        if self.d_v is not None and self.d_v < 1:
            raise ValueError("d_v: must be >= 1")
        if not self.seeds:
            raise ValueError("seeds: need at least one seed")
        if self.repetitions < 3:
            raise ValueError(f"repetitions: must be >= 3, got {self.repetitions}")
        if self.warmup < 0:
            raise ValueError("warmup: must be >= 0")
        if self.format not in ("csv", "jsonl"):
            raise ValueError(f"format: must be 'csv' or 'jsonl', got {self.format!r}")


@dataclass(frozen=True)
class BenchRecord:
    variant: str
    n: int
    d: int
    seed: int
    rep: int
    wall_nanos: int
    checksum: str

    def csv_row(self) -> str:
        return f"{self.variant},{self.n},{self.d},{self.seed},{self.rep},{self.wall_nanos},{self.checksum}"

    def json_object(self) -> str:
        return json.dumps({f: getattr(self, f) for f in _RECORD_FIELDS})


@dataclass(frozen=True)
class BenchSummary:
    medians: dict
    doubling_ratios: dict
    warnings: tuple

    def lines(self) -> list[str]:
        out = []
        for (variant, n), nanos in sorted(self.medians.items()):
            out.append(f"{variant:>16}  n={n:<7d} median {nanos / 1e6:10.3f} ms")
        for (variant, n_from, n_to), ratio in sorted(self.doubling_ratios.items()):
            out.append(f"{variant:>16}  n {n_from} -> {n_to}: time ratio {ratio:.2f}")
        out.extend(self.warnings)
        return out


def run_bench(config: BenchConfig) -> tuple[list, BenchSummary]:
    """Execute the sweep and return (records, summary).

    Cells run sequentially on the calling thread so timing windows never
    overlap; reruns with the same config reproduce the same checksums.
    """
    targets = bench_targets()
    records: list[BenchRecord] = []
    for variant in config.variants:
        fn = targets[variant]
        for n in config.n_values:
            for seed in config.seeds:
                inputs = random_inputs(n, config.d, d_v=config.d_v, seed=seed)
                for _ in range(config.warmup):
                    fn(inputs)
                for rep in range(config.repetitions):
                    start = time.perf_counter_ns()
                    out = fn(inputs)
                    elapsed = time.perf_counter_ns() - start
                    records.append(
                        BenchRecord(
                            variant=variant,
                            n=n,
                            d=config.d,
                            seed=seed,
                            rep=rep,
                            wall_nanos=max(int(elapsed), 1),
                            checksum=array_checksum(out),
                        )
                    )
    summary = summarize(records)
    if config.output_path:
        write_records(records, config.output_path, config.format)
    return records, summary


def summarize(records) -> BenchSummary:
    by_cell: dict = {}
    for r in records:
        by_cell.setdefault((r.variant, r.n), []).append(r.wall_nanos)
    medians = {cell: float(median(times)) for cell, times in by_cell.items()}
    ratios: dict = {}
    variants = sorted({variant for variant, _ in medians})
    for variant in variants:
        ns = sorted(n for v, n in medians if v == variant)
        for n_from, n_to in zip(ns, ns[1:]):
            ratios[(variant, n_from, n_to)] = medians[(variant, n_to)] / medians[(variant, n_from)]
    warnings = tuple(
        f"warning: {variant} at n={n} has median {nanos:.0f} ns (< 1 us); "
        "timer resolution may dominate"
        for (variant, n), nanos in sorted(medians.items())
        if nanos < 1000
    )
    return BenchSummary(medians=medians, doubling_ratios=ratios, warnings=warnings)


def write_records(records, path: str, format: str = "csv") -> None:
    """CSV (fixed seven-column header) or JSONL (same seven fields), newline-terminated."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if format == "csv":
            fh.write(CSV_HEADER + "\n")
            for r in records:
                fh.write(r.csv_row() + "\n")
        elif format == "jsonl":
            for r in records:
                fh.write(r.json_object() + "\n")
        else:
            raise ValueError(f"format: must be 'csv' or 'jsonl', got {format!r}")


# ---------------------------------------------------------------------------
# flat key=value config files


_LIST_KEYS = {"variants", "n_values", "seeds"}
_INT_KEYS = {"d", "d_v", "repetitions", "warmup"}


def parse_config_text(text: str, overrides: dict | None = None) -> BenchConfig:
    """Parse ``key=value`` lines (lists comma-separated); overrides win.

    Unknown keys and malformed values raise AttnOpsError naming the field.
    """
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise AttnOpsError(f"config line {lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key in _LIST_KEYS:
            items = [item.strip() for item in value.split(",") if item.strip()]
            if key == "variants":
                values[key] = tuple(items)
            else:
                try:
                    values[key] = tuple(int(item) for item in items)
                except ValueError:
                    raise AttnOpsError(f"{key}: expected integers, got {value!r}") from None
        elif key in _INT_KEYS:
            try:
                values[key] = int(value)
            except ValueError:
                raise AttnOpsError(f"{key}: expected an integer, got {value!r}") from None
        elif key == "format":
            values[key] = value
        elif key in ("out", "output_path"):
            values["output_path"] = value
        else:
            raise AttnOpsError(f"unknown config key {key!r}")
    values.update(overrides or {})
    missing = [k for k in ("variants", "n_values") if k not in values]
    if missing:
        raise AttnOpsError(f"{missing[0]}: required but not set")
    try:
        return BenchConfig(**values)
    except (ValueError, UnknownVariant) as exc:
        raise AttnOpsError(str(exc)) from None
