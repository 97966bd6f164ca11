"""Quantum discord, its square, and monogamy indicators for few-qubit states."""
from .kernels import BACKEND
from .qstate import (
    DensityMatrix,
    LogicQubitMap,
    NumericalFailure,
    Partition,
    PureState,
    RankError,
    binary_entropy,
    build_named_state,
    compress_support,
    partial_trace,
    purify,
    random_pure_haar,
    tensor_product,
    von_neumann_entropy,
)
from .entanglement import (
    concurrence_between,
    concurrence_pure,
    concurrence_wootters,
    eof_between,
    eof_from_csq,
    three_tangle,
)
from .discord import (
    DiscordResult,
    MeasurementSetting,
    conditional_entropy,
    discord_koashi_winter,
    min_measured_conditional_entropy,
    mutual_information,
    quantum_discord,
    xstate_criterion,
    xstate_discord,
)
from .monogamy import (
    CorrelationCache,
    IndicatorSet,
    MonogamyReport,
    entanglement_indicators,
    monogamy_condition,
    pure3_batch,
    q3_mean,
    q3_mixed_indicator,
    q3_pure,
    q4_components,
    sqd_decomposition,
)
from .dynamics import (
    DampingParams,
    SweepTable,
    damping_amplitudes,
    indicator_sweep,
    output_state,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DensityMatrix",
    "LogicQubitMap",
    "NumericalFailure",
    "Partition",
    "PureState",
    "RankError",
    "binary_entropy",
    "build_named_state",
    "compress_support",
    "partial_trace",
    "purify",
    "random_pure_haar",
    "tensor_product",
    "von_neumann_entropy",
    "concurrence_between",
    "concurrence_pure",
    "concurrence_wootters",
    "eof_between",
    "eof_from_csq",
    "three_tangle",
    "DiscordResult",
    "MeasurementSetting",
    "conditional_entropy",
    "discord_koashi_winter",
    "min_measured_conditional_entropy",
    "mutual_information",
    "quantum_discord",
    "xstate_criterion",
    "xstate_discord",
    "CorrelationCache",
    "IndicatorSet",
    "MonogamyReport",
    "entanglement_indicators",
    "monogamy_condition",
    "pure3_batch",
    "q3_mean",
    "q3_mixed_indicator",
    "q3_pure",
    "q4_components",
    "sqd_decomposition",
    "DampingParams",
    "SweepTable",
    "damping_amplitudes",
    "indicator_sweep",
    "output_state",
]
