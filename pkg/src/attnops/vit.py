"""Forward-only pre-norm encoder with a pluggable token-mixing mechanism.

The block structure is the standard one: prepend a class token to the embedded
patches, add positional embeddings, then run L rounds of

    tokens <- mix(LN(tokens)) + tokens
    tokens <- mlp(LN(tokens)) + tokens

and read out the layer-normalized class token.  The mixer is any registry
variant id (or a callable), which makes the encoder the integration vehicle
for comparing mechanisms end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy.special import erf

from .attention import AttnInputs
from .dense import as_matrix
from .errors import DimensionMismatch
from .registry import forward as registry_forward

LAYER_NORM_EPS = 1e-5


@dataclass(frozen=True)
class BlockParams:
    ln1_scale: np.ndarray
    ln1_shift: np.ndarray
    ln2_scale: np.ndarray
    ln2_shift: np.ndarray
    mlp_w1: np.ndarray
    mlp_b1: np.ndarray
    mlp_w2: np.ndarray
    mlp_b2: np.ndarray


@dataclass(frozen=True)
class ViTParams:
    """Embedding, per-block and readout parameters plus the mixer selection."""

    patch_embed: np.ndarray
    pos_embed: np.ndarray
    class_token: np.ndarray
    blocks: tuple
    head_scale: np.ndarray
    head_shift: np.ndarray
    mechanism: str | Callable[[AttnInputs], np.ndarray] = "softmax"
    mechanism_options: Mapping = field(default_factory=dict)

    @property
    def patch_dim(self) -> int:
        return self.patch_embed.shape[0]

    @property
    def width(self) -> int:
        return self.patch_embed.shape[1]

    @property
    def n_patches(self) -> int:
        return self.pos_embed.shape[0] - 1

    @property
    def depth(self) -> int:
        return len(self.blocks)


def vit_init(
    patch_dim: int,
    width: int,
    hidden: int,
    n_patches: int,
    depth: int,
    seed: int = 0,
    mechanism: str | Callable[[AttnInputs], np.ndarray] = "softmax",
    mechanism_options: Mapping | None = None,
) -> ViTParams:
    """Uniform [-1/sqrt(width), 1/sqrt(width)] init; identical seeds give identical bytes.

    Layer-norm scales start at one and shifts at zero; everything else is
    drawn from a single seeded stream in a fixed order.
    """
    for name, count in (
        ("patch_dim", patch_dim),
        ("width", width),
        ("hidden", hidden),
        ("n_patches", n_patches),
    ):
        if count < 1:
            raise ValueError(f"{name} must be >= 1, got {count}")
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    rng = np.random.default_rng(seed)
    bound = 1.0 / math.sqrt(width)

    def draw(*shape):
        return rng.uniform(-bound, bound, shape)

    blocks = []
    patch_embed = draw(patch_dim, width)
    pos_embed = draw(n_patches + 1, width)
    class_token = draw(width)
    for _ in range(depth):
        blocks.append(
            BlockParams(
                ln1_scale=np.ones(width),
                ln1_shift=np.zeros(width),
                ln2_scale=np.ones(width),
                ln2_shift=np.zeros(width),
                mlp_w1=draw(width, hidden),
                mlp_b1=draw(hidden),
                mlp_w2=draw(hidden, width),
                mlp_b2=draw(width),
            )
        )
    return ViTParams(
        patch_embed=patch_embed,
        pos_embed=pos_embed,
        class_token=class_token,
        blocks=tuple(blocks),
        head_scale=np.ones(width),
        head_shift=np.zeros(width),
        mechanism=mechanism,
        mechanism_options=dict(mechanism_options or {}),
    )


def layer_norm(x: np.ndarray, scale: np.ndarray, shift: np.ndarray) -> np.ndarray:
    """Per-row normalization to mean 0 / variance 1, then affine scale and shift."""
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    return (x - mean) / np.sqrt(var + LAYER_NORM_EPS) * scale + shift


def gelu(x: np.ndarray) -> np.ndarray:
    return 0.5 * x * (1.0 + erf(x / math.sqrt(2.0)))


def vit_forward(params: ViTParams, patches) -> np.ndarray:
    """Run the encoder on pre-flattened patch rows and return the class-token readout."""
    patches = as_matrix(patches, "patches")
    if patches.shape != (params.n_patches, params.patch_dim):
        raise DimensionMismatch(
            f"patches shape {patches.shape} != ({params.n_patches}, {params.patch_dim})"
        )
    if callable(params.mechanism):
        mix = params.mechanism
    else:
        def mix(attn: AttnInputs) -> np.ndarray:
            return registry_forward(params.mechanism, attn, **params.mechanism_options)

    tokens = np.vstack([params.class_token, patches @ params.patch_embed]) + params.pos_embed
    for block in params.blocks:
        normed = layer_norm(tokens, block.ln1_scale, block.ln1_shift)
        mixed = mix(AttnInputs(normed, normed, normed))
        if mixed.shape != tokens.shape:
            raise DimensionMismatch(
                f"mixer returned shape {mixed.shape}, expected {tokens.shape}"
            )
        tokens = mixed + tokens
        normed = layer_norm(tokens, block.ln2_scale, block.ln2_shift)
        tokens = (gelu(normed @ block.mlp_w1 + block.mlp_b1) @ block.mlp_w2 + block.mlp_b2) + tokens
    return layer_norm(tokens[:1], params.head_scale, params.head_shift)[0]
