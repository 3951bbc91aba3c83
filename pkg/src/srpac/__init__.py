"""Polar, PAC, reverse-PAC and selective reverse-PAC codes with sphere
decoding, minimum-weight censuses and Monte-Carlo BLER simulation."""

from .baseline import scl_decode, sc_decode
from .census import (CensusError, WeightCensus, census_compare, exhaustive_census, lsd_census,
                     stable_lsd_census)
from .channel import ChannelParams, awgn, bpsk_modulate, ebn0_to_sigma2, llr, stream
from .gf2 import BitMatrix
from .polar import (CodeSpec, SizeError, build_info_set, load_info_set, min_distance,
                    polar_encode, polar_transform, row_weight)
from .precode import (EffectiveGenerator, Mode, PrecodeSpec, build_P_forward, build_P_reverse,
                      build_P_selective, effective_generator, encode, precode)
from .sim import (ConfigError, SimConfig, SimResult, SimRow, census_table, load_config, run_bler,
                  union_bound)
from .sphere import DecodeOutcome, DecoderError, list_sphere_decode, sphere_decode

__all__ = [
    "scl_decode",
    "sc_decode",
    "CensusError",
    "WeightCensus",
    "census_compare",
    "exhaustive_census",
    "lsd_census",
    "stable_lsd_census",
    "ChannelParams",
    "awgn",
    "bpsk_modulate",
    "ebn0_to_sigma2",
    "llr",
    "stream",
    "BitMatrix",
    "CodeSpec",
    "SizeError",
    "build_info_set",
    "load_info_set",
    "min_distance",
    "polar_encode",
    "polar_transform",
    "row_weight",
    "EffectiveGenerator",
    "Mode",
    "PrecodeSpec",
    "build_P_forward",
    "build_P_reverse",
    "build_P_selective",
    "effective_generator",
    "encode",
    "precode",
    "ConfigError",
    "SimConfig",
    "SimResult",
    "SimRow",
    "census_table",
    "load_config",
    "run_bler",
    "union_bound",
    "DecodeOutcome",
    "DecoderError",
    "list_sphere_decode",
    "sphere_decode",
]
__version__ = "0.1.0"
