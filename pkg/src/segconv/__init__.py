"""Stride-2 transpose convolution: a conventional upsample-then-correlate
engine, a parity-segregated engine that skips the zeros, cost/memory
analysis, and a benchmark harness exposed through a service and CLI."""

from .analysis import (
    SAVINGS_UPSAMPLED_MINUS_INPUT,
    SAVINGS_UPSAMPLED_TOTAL,
    CostModel,
    cost_model,
    memory_savings_bytes,
    mult_count_reference,
    mult_count_segregated,
)
from .bench import (
    GAN_SUITE,
    BenchReport,
    ConfigError,
    LayerConfig,
    RunOptions,
    emit_report,
    load_config_file,
    parse_report_csv,
    run_benchmark,
)
from .engines import (
    ENGINE_REFERENCE,
    ENGINE_SEGREGATED,
    ComparisonReport,
    EngineCounters,
    PreparedLayer,
    SpecError,
    TransposeConvSpec,
    compare_outputs,
    layer_forward,
    output_dims,
    prepare_layer,
    transpose_conv_reference,
    transpose_conv_reference_counted,
    transpose_conv_segregated,
    transpose_conv_segregated_counted,
)
from .segregation import (
    EffectivePadding,
    SubKernelSet,
    effective_padding,
    merge_subkernels,
    segregate_kernel,
    subkernel_dims,
)
from .synth import gen_kernel_bank, gen_synthetic, splitmix64, unit_floats
from .tensor_io import (
    FormatError,
    load_ppm,
    load_raw_tensor,
    parse_ppm,
    save_raw_tensor,
    sct_bytes_to_tensor,
    tensor_to_sct_bytes,
)
from .tensors import (
    ShapeError,
    as_channel_tensor,
    as_feature_map,
    cross_correlate_valid,
    pad_zero,
    upsample_bed_of_nails,
)

__all__ = [
    "BenchReport", "ComparisonReport", "ConfigError", "CostModel",
    "EffectivePadding", "EngineCounters", "FormatError", "GAN_SUITE",
    "LayerConfig", "PreparedLayer", "RunOptions", "ShapeError", "SpecError",
    "SubKernelSet", "TransposeConvSpec",
    "ENGINE_REFERENCE", "ENGINE_SEGREGATED",
    "SAVINGS_UPSAMPLED_MINUS_INPUT", "SAVINGS_UPSAMPLED_TOTAL",
    "as_channel_tensor", "as_feature_map", "compare_outputs", "cost_model",
    "cross_correlate_valid", "effective_padding", "emit_report",
    "gen_kernel_bank", "gen_synthetic", "layer_forward", "load_config_file",
    "load_ppm", "load_raw_tensor", "memory_savings_bytes", "merge_subkernels",
    "mult_count_reference", "mult_count_segregated", "output_dims",
    "pad_zero", "parse_ppm", "parse_report_csv", "prepare_layer", "run_benchmark",
    "save_raw_tensor", "sct_bytes_to_tensor", "segregate_kernel",
    "splitmix64", "subkernel_dims", "tensor_to_sct_bytes",
    "transpose_conv_reference", "transpose_conv_reference_counted",
    "transpose_conv_segregated", "transpose_conv_segregated_counted",
    "unit_floats", "upsample_bed_of_nails",
]
