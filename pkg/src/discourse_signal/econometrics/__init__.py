"""Time-series statistics: sentiment series, lagged correlation, unit-root
and causality testing, with the OLS and distribution plumbing they need."""

from .causality import (GrangerResult, GrangerSweep, granger_sweep,
                        granger_test)
from .correlation import (CorrelationResult, CorrelationTable,
                          lagged_correlation, nearest_rank_percentile,
                          pearson, percentile_filter)
from .distributions import (dist_cdf, f_cdf, f_sf, regularized_incomplete_beta,
                            student_t_cdf, two_sided_t_pvalue)
from .regression import ols, ols_fit, prefix_rss
from .series import SENTIMENT_KINDS, SentimentSeries, daily_sentiment_series
from .stationarity import CRITICAL_VALUES, AdfResult, adf_test

__all__ = [
    "AdfResult", "CRITICAL_VALUES", "CorrelationResult", "CorrelationTable",
    "GrangerResult", "GrangerSweep", "SENTIMENT_KINDS", "SentimentSeries",
    "adf_test", "daily_sentiment_series", "dist_cdf", "f_cdf", "f_sf",
    "granger_sweep", "granger_test", "lagged_correlation",
    "nearest_rank_percentile", "ols", "ols_fit", "pearson",
    "percentile_filter", "prefix_rss", "regularized_incomplete_beta",
    "student_t_cdf", "two_sided_t_pvalue",
]
