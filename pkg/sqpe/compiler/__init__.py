"""Random compilation of time evolutions into Pauli and Pauli-rotation factors."""

from .random_compiler import (
    DEFAULT_EPSILON_C,
    DEFAULT_EPSILON_Q,
    CompilationConfig,
    NormalizationSum,
    PauliFactor,
    QnDistribution,
    RotationFactor,
    SampledUnitary,
    SegmentDraw,
    assemble_unitary,
    draw_segments,
    normalization_sum,
    qn_distribution,
    sample_unitary,
    term_tables,
    theta_of,
    write_unitary_dump,
)

__all__ = [
    "DEFAULT_EPSILON_C",
    "DEFAULT_EPSILON_Q",
    "CompilationConfig",
    "NormalizationSum",
    "PauliFactor",
    "QnDistribution",
    "RotationFactor",
    "SampledUnitary",
    "SegmentDraw",
    "assemble_unitary",
    "draw_segments",
    "normalization_sum",
    "qn_distribution",
    "sample_unitary",
    "term_tables",
    "theta_of",
    "write_unitary_dump",
]
