"""Kolmogorov complexity, the Edis law, and bisection localization."""

from .edis import (
    LISTED_RHO,
    BitOracle,
    EdisTrace,
    HypothesisViolated,
    OracleExhausted,
    edis_decompose,
    edis_eval,
    edis_trace,
    seeded_oracle,
)
from .kolmogorov import (
    CENSUS_MAX_N,
    ComplexityRecord,
    GeneratorTooShort,
    GrowthTable,
    RandomnessCensus,
    compressibility_growth,
    incompressibility_census,
    k_complexity,
)
from .sigma import (
    BitSourcePoint,
    HalfSpaceOracle,
    HiddenPoint,
    InconsistentOracle,
    SigmaEncoding,
    localize,
    program_point,
    random_point,
    sigma_decode,
    sigma_encode,
)

__all__ = [
    "LISTED_RHO",
    "BitOracle",
    "EdisTrace",
    "HypothesisViolated",
    "OracleExhausted",
    "edis_decompose",
    "edis_eval",
    "edis_trace",
    "seeded_oracle",
    "CENSUS_MAX_N",
    "ComplexityRecord",
    "GeneratorTooShort",
    "GrowthTable",
    "RandomnessCensus",
    "compressibility_growth",
    "incompressibility_census",
    "k_complexity",
    "BitSourcePoint",
    "HalfSpaceOracle",
    "HiddenPoint",
    "InconsistentOracle",
    "SigmaEncoding",
    "localize",
    "program_point",
    "random_point",
    "sigma_decode",
    "sigma_encode",
]
