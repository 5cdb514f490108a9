"""Python bindings for the ideaminer C++ core."""

from ideaminer._core import (
    EXIT_FATAL,
    EXIT_NO_GO,
    EXIT_OK,
    BowCorpus,
    Error,
    Pipeline,
    TermTrajectory,
    classify_trend,
    default_config_text,
    fit_dtm,
    fit_lda,
    load_config,
    method_gate,
    normalize_title,
    ols_forecast,
    pearson_correlation,
    perplexity,
    porter_stem,
    select_k,
    top_terms_at_slice,
    topic_term_trajectory,
    umass_coherence,
)

__all__ = [
    "EXIT_FATAL",
    "EXIT_NO_GO",
    "EXIT_OK",
    "BowCorpus",
    "Error",
    "Pipeline",
    "TermTrajectory",
    "classify_trend",
    "default_config_text",
    "fit_dtm",
    "fit_lda",
    "load_config",
    "method_gate",
    "normalize_title",
    "ols_forecast",
    "pearson_correlation",
    "perplexity",
    "porter_stem",
    "select_k",
    "top_terms_at_slice",
    "topic_term_trajectory",
    "umass_coherence",
]
