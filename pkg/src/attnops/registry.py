"""Canonical variant ids shared by the encoder, the benchmark harness, and probes.

Every entry maps a string id to a forward function (AttnInputs, **options) ->
ndarray of shape (n, d_v).  Options not listed here are forwarded to the
underlying implementation.
"""

from __future__ import annotations

import numpy as np

from .attention import AttnInputs, linear_kernel_attention, softmax_attention
from .errors import UnknownVariant
from .expm import ExpmSpec
from .tensor_attention import (
    TensorOpConfig,
    tensor_attention_elem_exp,
    tensor_attention_expm,
    tensor_attention_linear,
    tensor_attention_masked,
    tensor_attention_naive,
    tensor_attention_relu,
    tensor_attention_residual,
)
from .tensor_interaction import InteractionConfig, tensor_interaction


def _tensor_cfg(side="q", normalization="trace", hadamard=False, trace_epsilon=None):
    return TensorOpConfig(
        side=side, hadamard=hadamard, normalization=normalization, trace_epsilon=trace_epsilon
    )


def _softmax(inputs: AttnInputs) -> np.ndarray:
    return softmax_attention(inputs)


def _kernel(inputs: AttnInputs, epsilon: float = 1e-12) -> np.ndarray:
    return linear_kernel_attention(inputs, epsilon)


def _tensor_naive(inputs, side="q", normalization="trace", hadamard=False, trace_epsilon=None):
    return tensor_attention_naive(inputs, _tensor_cfg(side, normalization, hadamard, trace_epsilon))


def _tensor_diag(inputs, side="q", hadamard=False, trace_epsilon=None):
    return tensor_attention_naive(inputs, _tensor_cfg(side, "diag", hadamard, trace_epsilon))


def _tensor_row(inputs, side="q", hadamard=False, trace_epsilon=None):
    return tensor_attention_naive(inputs, _tensor_cfg(side, "row", hadamard, trace_epsilon))


def _tensor_linear(inputs, side="q", trace_epsilon=None):
    return tensor_attention_linear(inputs, side=side, trace_epsilon=trace_epsilon)


def _tensor_relu(inputs, side="q", hadamard=False, trace_epsilon=None):
    return tensor_attention_relu(inputs, _tensor_cfg(side, "trace", hadamard, trace_epsilon))


def _tensor_elem_exp(inputs, side="q", hadamard=False, trace_epsilon=None):
    return tensor_attention_elem_exp(inputs, _tensor_cfg(side, "trace", hadamard, trace_epsilon))


def _tensor_expm(inputs, side="q", hadamard=False, trace_epsilon=None, spec: ExpmSpec = ExpmSpec()):
    return tensor_attention_expm(inputs, _tensor_cfg(side, "trace", hadamard, trace_epsilon), spec)


def _tensor_masked(inputs, side="q", hadamard=False, trace_epsilon=None):
    return tensor_attention_masked(inputs, _tensor_cfg(side, "trace", hadamard, trace_epsilon))


def _tensor_residual(inputs, side="q", lam: float = 0.5, trace_epsilon=None):
    return tensor_attention_residual(inputs, _tensor_cfg(side, "trace", False, trace_epsilon), lam)


def _interaction(inputs, side="q", hadamard=False, orientation="nxd", trace_epsilon=None):
    cfg = InteractionConfig(
        side=side, hadamard=hadamard, orientation=orientation, trace_epsilon=trace_epsilon
    )
    return tensor_interaction(inputs, cfg)


VARIANTS = {
    "softmax": _softmax,
    "kernel": _kernel,
    "tensor_naive": _tensor_naive,
    "tensor_diag": _tensor_diag,
    "tensor_row": _tensor_row,
    "tensor_linear": _tensor_linear,
    "tensor_relu": _tensor_relu,
    "tensor_elem_exp": _tensor_elem_exp,
    "tensor_expm": _tensor_expm,
    "tensor_masked": _tensor_masked,
    "tensor_residual": _tensor_residual,
    "interaction": _interaction,
}


def variant_ids() -> tuple[str, ...]:
    return tuple(sorted(VARIANTS))


def forward(variant: str, inputs: AttnInputs, **options) -> np.ndarray:
    try:
        fn = VARIANTS[variant]
    except KeyError:
        raise UnknownVariant(
            f"unknown variant {variant!r}; expected one of {variant_ids()}"
        ) from None
    return fn(inputs, **options)
