"""Polar coding with the symmetric balance parametrization.

A binary polar-code library: the self-inverse transform, plain and list
successive-cancellation decoders working on theta = P(0) - P(1) values,
systematic encoding, frozen-set construction, three codec modes and a
Monte-Carlo simulation harness.
"""

from .codec_modes import (
    CrcChannelCode,
    OuterParity,
    channel_decode_nonsystematic,
    channel_decode_systematic,
    channel_encode_nonsystematic,
    channel_encode_systematic,
    crc_parity,
    crc_value,
    source_decode,
    source_encode,
    source_extension,
)
from .construction import (
    ConstructionConfig,
    bec_bhattacharyya,
    construct_bec,
    construct_monte_carlo,
)
from .core import (
    CodeSpec,
    SpecFormatError,
    bit_reverse,
    bit_reverse_permutation,
    bits_of,
    derive_systematic_sets,
    index_of,
    polar_transform,
)
from .harness import (
    ChannelModel,
    SimConfig,
    SimResult,
    bench_scaling,
    channel_emit,
    parse_channel,
    rng_for_trial,
    simulate,
)
from .parametrization import (
    ThetaFlags,
    combine_bit,
    combine_bit_ternary,
    combine_check,
    combine_check_ternary,
    map_decision,
    theta_from_prior,
)
from .sc_decoder import (
    DecodeResult,
    DecoderMemory,
    genie_error_profile,
    sc_decode,
    update_theta,
    update_u,
)
from .scl_decoder import (
    DegeneratePoolError,
    PathPool,
    SclPath,
    SclResult,
    copy_path,
    extend_path,
    magnify_p,
    mark_top_L,
    prune_path,
    scl_decode,
    split_path,
)
from .systematic_encoder import systematic_encode, systematic_encode_batch

__version__ = "0.1.0"

__all__ = [
    "CodeSpec",
    "SpecFormatError",
    "bits_of",
    "index_of",
    "bit_reverse",
    "bit_reverse_permutation",
    "polar_transform",
    "derive_systematic_sets",
    "ThetaFlags",
    "theta_from_prior",
    "combine_check",
    "combine_bit",
    "combine_check_ternary",
    "combine_bit_ternary",
    "map_decision",
    "DecoderMemory",
    "DecodeResult",
    "sc_decode",
    "update_theta",
    "update_u",
    "genie_error_profile",
    "PathPool",
    "SclPath",
    "SclResult",
    "DegeneratePoolError",
    "scl_decode",
    "extend_path",
    "split_path",
    "prune_path",
    "copy_path",
    "magnify_p",
    "mark_top_L",
    "systematic_encode",
    "systematic_encode_batch",
    "bec_bhattacharyya",
    "construct_bec",
    "construct_monte_carlo",
    "ConstructionConfig",
    "OuterParity",
    "crc_value",
    "crc_parity",
    "source_encode",
    "source_extension",
    "source_decode",
    "channel_encode_nonsystematic",
    "channel_decode_nonsystematic",
    "channel_encode_systematic",
    "channel_decode_systematic",
    "CrcChannelCode",
    "ChannelModel",
    "parse_channel",
    "channel_emit",
    "rng_for_trial",
    "SimConfig",
    "SimResult",
    "simulate",
    "bench_scaling",
]
