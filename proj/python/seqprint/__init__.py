"""Structural fingerprinting of bit-sequence corpora."""

from ._seqprint import (  # noqa: F401
    ArxKeystream,
    BiasedBits,
    BitSequence,
    ComparisonReport,
    Corpus,
    CorpusAnalysis,
    Distribution,
    Fingerprint,
    Lcg,
    NullBaseline,
    PatternProfile,
    RecurrenceHistogram,
    SeqprintError,
    StructuralMetrics,
    UniformRef,
    analyze_corpus,
    arx_block,
    compare,
    compute_fingerprint,
    concentration_stats,
    count_occurrences,
    deviation_score,
    extract_profile,
    fingerprint_distance,
    generate_corpus,
    generate_sequence,
    merge_profiles,
    normalize,
    null_baseline,
    pattern_entropy,
    permutation_nulls,
    read_corpus,
    recurrence_histogram,
    report_to_json,
    write_corpus,
)

__version__ = "0.1.0"
