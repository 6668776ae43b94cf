"""Sample-based stability and cost verification for control over packet-dropping channels."""

from ._core import (
    ChannelTrace,
    Decision,
    ExperimentConfig,
    IntervalMethod,
    MarginSpec,
    PlantModel,
    RateInterval,
    TrialLedger,
    Verdict,
    bernstein_fast_interval,
    bernstein_sample_size,
    bernstein_tail,
    correctness_bound,
    cost_test,
    critical_rate,
    draw_trace,
    exact_interval,
    general_test,
    hoeffding_interval,
    hoeffding_sample_size,
    hoeffding_tail,
    kronecker_stable,
    low_variance_regime,
    lyapunov_cost,
    normal_interval,
    normal_quantile,
    run_experiment,
    sample_mean,
    simulate,
    spectral_radius,
    stability_test,
    stability_threshold,
    sweep_sample_complexity,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
