from .extractor import EXTRACTOR_BACKENDS, ExtractorConfig, extraction_distance
from .fooling import FoolingGap, as_vectorized, fooling_gap, uniform_acceptance
from .generator import Generator
from .gf2 import clmul, gf_mul, gf_pow, irreducible_modulus, is_irreducible
from .gip_stretch import GipStretchGenerator, gip_stretch_expand
from .inw import InwGenerator, entropy_requirement, inw_expand
from .seed_length import (
    DEFAULT_PRG_C,
    SEED_MODELS,
    SeedLengthReport,
    prg_main_delta,
    prg_main_ell,
    seed_length_report,
    small_bias_for_formulas,
)
from .small_bias import (
    SmallBiasGenerator,
    max_parity_bias,
    parity_biases,
    small_bias_ell,
    small_bias_expand,
)

del extractor
del fooling
del generator
del gf2
del gip_stretch
del inw
del seed_length
del small_bias
