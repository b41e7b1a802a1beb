"""Attention through trace-normalized positive semi-definite token operators.

The n-by-n token operator is built from the score matrix A = Q K^H: the query
side uses A A^H, the key side A^H A, and the elementwise flavor multiplies A
against its conjugate transpose entry by entry.  All flavors are Hermitian
with real non-negative diagonals; the two product flavors are PSD and share
the same trace, which equals both the squared Frobenius norm of A and
sum((K^H K) o (Q^H Q)^T).  The last identity is what the linear-time path
exploits: it rebrackets T V as Q ((K^H K)(Q^H V)) so that no n-by-n matrix is
ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .attention import AttnInputs
from .dense import as_matrix
from .errors import (
    ComplexNotSupported,
    DegenerateNormalizer,
    DimensionMismatch,
    NonFiniteInput,
)
from .expm import ExpmSpec, matrix_exponential

Q_SIDE = "q"
K_SIDE = "k"
TRACE = "trace"
DIAG = "diag"
ROW = "row"

_SIDES = (Q_SIDE, K_SIDE)
_NORMALIZATIONS = (TRACE, DIAG, ROW)


@dataclass(frozen=True)
class TensorOpConfig:
    """Which operator flavor to build and how to normalize it.

    ``trace_epsilon=None`` resolves to the scale-aware default 1e-12 * n at
    call time; a normalizer below the threshold raises DegenerateNormalizer
    instead of being silently padded.
    """

    side: str = Q_SIDE
    hadamard: bool = False
    normalization: str = TRACE
    trace_epsilon: float | None = None

    def __post_init__(self):
        if self.side not in _SIDES:
            raise ValueError(f"side must be one of {_SIDES}, got {self.side!r}")
        if self.normalization not in _NORMALIZATIONS:
            raise ValueError(
                f"normalization must be one of {_NORMALIZATIONS}, got {self.normalization!r}"
            )
        if self.trace_epsilon is not None and not self.trace_epsilon > 0:
            raise ValueError("trace_epsilon must be positive")

    def epsilon(self, n: int) -> float:
        return self.trace_epsilon if self.trace_epsilon is not None else 1e-12 * n


def _conformable(q, k) -> tuple[np.ndarray, np.ndarray]:
    q = as_matrix(q, "q")
    k = as_matrix(k, "k")
    if q.shape != k.shape:
        raise DimensionMismatch(f"q {q.shape} and k {k.shape} must share both dimensions")
    common = np.result_type(q.dtype, k.dtype)
    return q.astype(common, copy=False), k.astype(common, copy=False)


def score_matrix(q, k) -> np.ndarray:
    """A = Q K^H (plain transpose for real inputs)."""
    q, k = _conformable(q, k)
    return q @ k.conj().T


def build_tensor_operator(q, k, cfg: TensorOpConfig = TensorOpConfig()) -> np.ndarray:
    """Materialize the n-by-n token operator for the configured flavor.

    The elementwise flavor computes entries A[i, j] * conj(A[j, i]); the two
    sides of it coincide, so ``cfg.side`` only matters for the product flavors.
    """
    a = score_matrix(q, k)
    if cfg.hadamard:
        return a * a.conj().T
    if cfg.side == Q_SIDE:
        return a @ a.conj().T
    return a.conj().T @ a


def operator_trace(q, k) -> float:
    """tr of the product-flavor operator, via the d-by-d Hadamard-sum identity.

    Costs O(n d^2) and is the same for both sides: tr(A A^H) = tr(A^H A)
    = sum((K^H K) o (Q^H Q)^T), real and non-negative.
    """
    q, k = _conformable(q, k)
    key_gram = k.conj().T @ k
    query_gram = q.conj().T @ q
    return float(np.real(np.sum(key_gram * query_gram.T)))


# Row-block size for the fast diagonal: keeps the per-block Gram product in
# cache so the kernel stays memory-resident as n grows.
_DIAG_BLOCK_ROWS = 1024


def diag_fast(q, k, side: str = Q_SIDE) -> np.ndarray:
    """Diagonal of the product-flavor operator in O(n d^2).

    Query side: out[i] = sum_{k,l} Q[i,k] conj(Q[i,l]) (K^H K)[k,l], computed
    by dotting rows of Q (K^H K) against rows of conj(Q), block of rows at a
    time; key side swaps the roles.  Entries are clamped at zero, since in
    exact arithmetic each one is a sum of squared magnitudes.
    """
    if side not in _SIDES:
        raise ValueError(f"side must be one of {_SIDES}, got {side!r}")
    q, k = _conformable(q, k)
    base, other = (q, k) if side == Q_SIDE else (k, q)
    gram = other.conj().T @ other
    n = base.shape[0]
    out = np.empty(n)
    for start in range(0, n, _DIAG_BLOCK_ROWS):
        piece = base[start : start + _DIAG_BLOCK_ROWS]
        out[start : start + _DIAG_BLOCK_ROWS] = np.einsum(
            "ij,ij->i", piece @ gram, piece.conj()
        ).real
    return np.maximum(out, 0.0)


def normalized_tensor_operator(q, k, cfg: TensorOpConfig = TensorOpConfig()) -> np.ndarray:
    """Materialized operator with the configured normalization applied.

    Trace mode divides by tr(T); diag mode divides row i by T[i, i]; row mode
    divides row i by the row sum (T 1)[i], so a non-negative operator becomes
    row-stochastic.  Row mode orders row sums and is real-only.
    """
    t = build_tensor_operator(q, k, cfg)
    n = t.shape[0]
    eps = cfg.epsilon(n)
    if cfg.normalization == TRACE:
        total = float(np.real(np.trace(t)))
        if total < eps:
            raise DegenerateNormalizer(f"operator trace {total:.3e} is below {eps:.3e}")
        return t / total
    if cfg.normalization == DIAG:
        diagonal = np.real(np.diag(t))
        worst = int(np.argmin(diagonal))
        if diagonal[worst] < eps:
            raise DegenerateNormalizer(
                f"diagonal entry {worst} = {diagonal[worst]:.3e} is below {eps:.3e}"
            )
        return t / diagonal[:, None]
    if np.iscomplexobj(t):
        raise ComplexNotSupported("row normalization orders row sums; real inputs only")
    sums = t.sum(axis=1)
    worst = int(np.argmin(sums))
    if sums[worst] < eps:
        raise DegenerateNormalizer(f"row sum {worst} = {sums[worst]:.3e} is below {eps:.3e}")
    return t / sums[:, None]


def tensor_attention_naive(inputs: AttnInputs, cfg: TensorOpConfig = TensorOpConfig()) -> np.ndarray:
    """Materialize the normalized operator (O(n^2) memory) and apply it to v."""
    return normalized_tensor_operator(inputs.q, inputs.k, cfg) @ inputs.v


def tensor_attention_linear(
    inputs: AttnInputs,
    side: str = Q_SIDE,
    trace_epsilon: float | None = None,
) -> np.ndarray:
    """Trace-normalized tensor attention without materializing any n-by-n matrix.

    Fixed evaluation order: the d-by-d key Gram matrix, then the d-by-d_v
    projected values, then the single n-by-d product, scaled by the reciprocal
    of the Hadamard-sum trace.  Equal to the materialized trace-normalized
    path up to roundoff.
    """
    if side not in _SIDES:
        raise ValueError(f"side must be one of {_SIDES}, got {side!r}")
    q, k = inputs.q, inputs.k
    if side == K_SIDE:
        q, k = k, q
    gram = k.conj().T @ k
    projected = q.conj().T @ inputs.v
    total = float(np.real(np.sum(gram * (q.conj().T @ q).T)))
    eps = trace_epsilon if trace_epsilon is not None else 1e-12 * inputs.n
    if total < eps:
        raise DegenerateNormalizer(f"operator trace {total:.3e} is below {eps:.3e}")
    return (q @ (gram @ projected)) / total


def tensor_attention_relu(inputs: AttnInputs, cfg: TensorOpConfig = TensorOpConfig()) -> np.ndarray:
    """Clamp the materialized operator at zero, then trace-normalize and apply.

    The normalizer is the trace of the unclamped operator; clamping cannot
    change it because the diagonal is non-negative.  Real inputs only.
    """
    _require_real_inputs(inputs, "relu tensor attention")
    t = build_tensor_operator(inputs.q, inputs.k, cfg)
    total = float(np.trace(t))
    eps = cfg.epsilon(t.shape[0])
    if total < eps:
        raise DegenerateNormalizer(f"operator trace {total:.3e} is below {eps:.3e}")
    return (np.maximum(t, 0.0) @ inputs.v) / total


def tensor_attention_elem_exp(
    inputs: AttnInputs, cfg: TensorOpConfig = TensorOpConfig()
) -> np.ndarray:
    """Exponentiate the trace-normalized operator entry by entry, then apply."""
    _require_real_inputs(inputs, "elementwise-exp tensor attention")
    t_hat = _trace_normalized(inputs, cfg)
    out = np.exp(t_hat) @ inputs.v
    if not np.all(np.isfinite(out)):
        raise NonFiniteInput("elementwise exponential overflowed")
    return out


def tensor_attention_expm(
    inputs: AttnInputs,
    cfg: TensorOpConfig = TensorOpConfig(),
    spec: ExpmSpec = ExpmSpec(),
) -> np.ndarray:
    """Apply the matrix exponential of the trace-normalized operator to v."""
    return matrix_exponential(_trace_normalized(inputs, cfg), spec) @ inputs.v


def tensor_attention_masked(
    inputs: AttnInputs, cfg: TensorOpConfig = TensorOpConfig()
) -> np.ndarray:
    """Keep only the lower triangle (diagonal included) before applying.

    Token i attends to tokens j <= i.  The trace normalizer is unchanged by
    the mask since the diagonal survives it.
    """
    t = build_tensor_operator(inputs.q, inputs.k, cfg)
    total = float(np.real(np.trace(t)))
    eps = cfg.epsilon(t.shape[0])
    if total < eps:
        raise DegenerateNormalizer(f"operator trace {total:.3e} is below {eps:.3e}")
    return (np.tril(t) @ inputs.v) / total


def tensor_attention_residual(
    inputs: AttnInputs,
    cfg: TensorOpConfig = TensorOpConfig(),
    lam: float = 0.0,
) -> np.ndarray:
    """(T + lam * tr(T) * I) v, evaluated in the factorized linear-time form.

    Unnormalized by design.  Only the product flavors admit the O(n)
    factorization, so the elementwise flavor is rejected.
    """
    if lam < 0:
        raise ValueError("lam must be non-negative")
    if cfg.hadamard:
        raise ValueError("the elementwise flavor has no linear-time factorization")
    q, k = inputs.q, inputs.k
    if cfg.side == K_SIDE:
        q, k = k, q
    gram = k.conj().T @ k
    out = q @ (gram @ (q.conj().T @ inputs.v))
    if lam:
        total = float(np.real(np.sum(gram * (q.conj().T @ q).T)))
        out = out + lam * total * inputs.v
    return out


@dataclass(frozen=True)
class AttentionIntermediates:
    """Reusable products of one attention evaluation.

    scores is Q K^H; key_gram and query_gram are the Hermitian d-by-d Gram
    matrices K^H K and Q^H Q; normalized_operator is T / tr(T).
    """

    scores: np.ndarray
    key_gram: np.ndarray
    query_gram: np.ndarray
    normalized_operator: np.ndarray


def attention_intermediates(
    q, k, cfg: TensorOpConfig = TensorOpConfig()
) -> AttentionIntermediates:
    q, k = _conformable(q, k)
    trace_cfg = TensorOpConfig(
        side=cfg.side, hadamard=cfg.hadamard, normalization=TRACE, trace_epsilon=cfg.trace_epsilon
    )
    return AttentionIntermediates(
        scores=score_matrix(q, k),
        key_gram=k.conj().T @ k,
        query_gram=q.conj().T @ q,
        normalized_operator=normalized_tensor_operator(q, k, trace_cfg),
    )


def _require_real_inputs(inputs: AttnInputs, what: str) -> None:
    if inputs.is_complex:
        raise ComplexNotSupported(f"{what} is defined for real inputs only")


def _trace_normalized(inputs: AttnInputs, cfg: TensorOpConfig) -> np.ndarray:
    t = build_tensor_operator(inputs.q, inputs.k, cfg)
    total = float(np.real(np.trace(t)))
    eps = cfg.epsilon(t.shape[0])
    if total < eps:
        raise DegenerateNormalizer(f"operator trace {total:.3e} is below {eps:.3e}")
    return t / total
