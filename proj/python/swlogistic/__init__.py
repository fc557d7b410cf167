"""Regime-switching stochastic logistic simulation toolkit."""

from ._core import (
    BlowupReport,
    DynamicsClass,
    DynamicsKind,
    Error,
    ErrorCurve,
    ErrorCurveEntry,
    GammaDistribution,
    Histogram,
    KsResult,
    Model,
    MomentCurves,
    Path,
    ReferenceKind,
    SchemeConfig,
    SchemeKind,
    SlopeFit,
    StrongErrorOptions,
    SummaryStats,
    TrajectoryStudyOptions,
    beta,
    blowup_frequency,
    brownian_increments,
    cdf_distance,
    classify,
    empirical_density,
    fit_slope,
    gamma_cdf,
    gamma_pdf,
    gamma_stationary,
    ks_statistic,
    lyapunov_estimate,
    lyapunov_samples,
    moment_estimate,
    normal_quantile,
    sample_chain,
    simulate,
    stationary_distribution,
    strong_error,
    summarize,
    terminal_samples,
    time_average,
    time_average_samples,
    transition_matrix,
    truncation_cap,
)

__all__ = [
    "BlowupReport",
    "DynamicsClass",
    "DynamicsKind",
    "Error",
    "ErrorCurve",
    "ErrorCurveEntry",
    "GammaDistribution",
    "Histogram",
    "KsResult",
    "Model",
    "MomentCurves",
    "Path",
    "ReferenceKind",
    "SchemeConfig",
    "SchemeKind",
    "SlopeFit",
    "StrongErrorOptions",
    "SummaryStats",
    "TrajectoryStudyOptions",
    "beta",
    "blowup_frequency",
    "brownian_increments",
    "cdf_distance",
    "classify",
    "empirical_density",
    "fit_slope",
    "gamma_cdf",
    "gamma_pdf",
    "gamma_stationary",
    "ks_statistic",
    "lyapunov_estimate",
    "lyapunov_samples",
    "moment_estimate",
    "normal_quantile",
    "sample_chain",
    "simulate",
    "stationary_distribution",
    "strong_error",
    "summarize",
    "terminal_samples",
    "time_average",
    "time_average_samples",
    "transition_matrix",
    "truncation_cap",
]

__version__ = "0.1.0"
