"""oneflab: generators and diagnostics for ergodic and non-ergodic 1/f processes."""

from .series import TimeSeries
from .generators import (
    Ar1Config,
    FbmConfig,
    FgnConfig,
    LorenzConfig,
    RenewalConfig,
    TelegraphConfig,
    TrendNoiseConfig,
    gen_ar1,
    gen_fbm,
    gen_fgn,
    gen_lorenz,
    gen_renewal,
    gen_telegraph,
    gen_trend_noise,
    generate,
    regenerate,
    sample_pareto,
)
from .diagnostics import (
    AgingSpectrum,
    Periodogram,
    PowerLawDecision,
    ScalingFit,
    conditional_spectrum,
    dfa,
    empirical_acf,
    fit_loglog_slope,
    gph_estimate,
    periodogram,
    reject_powerlaw,
    rescaled_range,
)
from .ensemble import (
    EnsembleResult,
    EnsembleSpec,
    Observable,
    aging_exponent,
    aging_spectrum_ensemble,
    ergodicity_breaking,
    mittag_leffler_moment_ratio,
    moment_ratio_test,
    run_ensemble,
)
from .config import ExperimentConfig, parse_config, serialize_config, config_hash
from .experiments import RunSummary, list_experiments, run_experiment

__version__ = "0.1.0"
