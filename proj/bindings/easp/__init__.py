"""Elastic speech perception toolkit: elastic MoE layers, consistency-based
transcript filtering, and the multi-task tag token protocol."""

from ._core import (
    EMoEConfig,
    EMoELayer,
    build_layer,
    ctc_greedy_decode,
    ctc_loss,
    decode_tags,
    edit_distance,
    encode_tags,
    rescore,
    sample_group,
    vad_segment,
    vocab_info,
    wer,
)

__all__ = [
    "EMoEConfig",
    "EMoELayer",
    "build_layer",
    "ctc_greedy_decode",
    "ctc_loss",
    "decode_tags",
    "edit_distance",
    "encode_tags",
    "rescore",
    "sample_group",
    "vad_segment",
    "vocab_info",
    "wer",
]
