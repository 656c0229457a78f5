"""Multi-realization experiments: ergodicity-breaking statistics, aging
fits across seeds, and the Mittag-Leffler moment-ratio test.

Realizations are independent work units keyed by seed; aggregation is a
deterministic seed-ordered reduction, so results are bit-for-bit
reproducible regardless of execution order.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gamma as _gamma_fn
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import generators
from .diagnostics import ScalingFit, band_mean_power, default_band, empirical_acf, fit_loglog_slope, periodogram
from .generators import GeneratorConfig

MAX_DROP_FRACTION = 0.10
MIN_REALIZATIONS_FOR_EB = 30


class Observable(BaseModel):
    """What to measure on each windowed realization."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["band_power", "acf_at_lag", "time_mean"]
    band: Optional[tuple[float, float]] = None
    lag: int = 1

    @model_validator(mode="after")
    def _check(self):
        if self.kind == "acf_at_lag" and self.lag < 1:
            raise ValueError("lag must be >= 1")
        return self


class EnsembleSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    generator: GeneratorConfig
    n_realizations: int = Field(ge=2)
    base_seed: int = 0
    windows: tuple[int, ...]
    observable: Observable
    # seed_i = base_seed + seed_stride * i; stride 0 forces identical realizations
    seed_stride: int = 1

    @model_validator(mode="after")
    def _check(self):
        w = self.windows
        if len(w) < 1 or list(w) != sorted(set(w)):
            raise ValueError("windows must be non-empty and strictly increasing")
        if w[-1] > self.generator.n:
            raise ValueError(f"largest window {w[-1]} exceeds generator length {self.generator.n}")
        return self

    def seeds(self) -> list[int]:
        return [self.base_seed + self.seed_stride * i for i in range(self.n_realizations)]


@dataclass(frozen=True)
class EnsembleResult:
    spec: EnsembleSpec
    per_realization: np.ndarray  # (n_surviving, n_windows)
    seeds: tuple[int, ...]
    mean: np.ndarray
    variance: np.ndarray
    eb: np.ndarray  # Var(A)/<A>^2 per window; NaN where the mean vanishes
    moment_ratio: np.ndarray  # <A^2>/<A>^2 per window; NaN where the mean vanishes
    n_dropped: int
    drop_errors: tuple[str, ...]


def _evaluate(obs: Observable, values: np.ndarray, window: int, band: tuple[float, float]) -> float:
    v = values[:window]
    if obs.kind == "time_mean":
        return float(v.mean())
    if obs.kind == "acf_at_lag":
        return float(empirical_acf(v, obs.lag)[obs.lag])
    return band_mean_power(periodogram(v), band)


def run_ensemble(spec: EnsembleSpec) -> EnsembleResult:
    """Generate each realization, evaluate the observable at every window, aggregate."""
    band = spec.observable.band or default_band(spec.windows[0])
    rows, kept_seeds, errors = [], [], []
    for seed in spec.seeds():
        try:
            ts = generators.generate(spec.generator, seed)
            rows.append([_evaluate(spec.observable, ts.values, w, band) for w in spec.windows])
            kept_seeds.append(seed)
        except (ValueError, RuntimeError) as exc:
            errors.append(f"seed {seed}: {exc}")
    n_dropped = spec.n_realizations - len(rows)
    if n_dropped > MAX_DROP_FRACTION * spec.n_realizations:
        raise RuntimeError(
            f"{n_dropped}/{spec.n_realizations} realizations failed: {errors[:3]}"
        )
    a = np.asarray(rows, dtype=float)
    mean = a.mean(axis=0)
    var = a.var(axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        eb = np.where(np.abs(mean) > 0, var / mean**2, np.nan)
        mr = np.where(np.abs(mean) > 0, (a**2).mean(axis=0) / mean**2, np.nan)
    return EnsembleResult(
        spec=spec,
        per_realization=a,
        seeds=tuple(kept_seeds),
        mean=mean,
        variance=var,
        eb=eb,
        moment_ratio=mr,
        n_dropped=n_dropped,
        drop_errors=tuple(errors),
    )


def ergodicity_breaking(result: EnsembleResult) -> np.ndarray:
    """EB(T) = Var(A)/<A>^2 per window; ergodic observables decay to 0."""
    if result.per_realization.shape[0] < MIN_REALIZATIONS_FOR_EB:
        raise ValueError(
            f"need >= {MIN_REALIZATIONS_FOR_EB} surviving realizations for a stable EB"
        )
    if np.any(~np.isfinite(result.eb)):
        raise ValueError(
            "EB undefined: the ensemble-mean observable vanishes at some window; "
            "choose an observable with a nonzero mean (e.g. band_power)"
        )
    return result.eb


def mittag_leffler_moment_ratio(theta: float) -> float:
    """Second-moment ratio 2*Gamma(1+theta)^2/Gamma(1+2*theta) of the normalized law."""
    if not 0 < theta <= 1:
        raise ValueError("theta must lie in (0, 1]")
    return 2.0 * _gamma_fn(1.0 + theta) ** 2 / _gamma_fn(1.0 + 2.0 * theta)


@dataclass(frozen=True)
class MomentRatioTest:
    measured: float
    predicted: float
    passed: bool


def moment_ratio_test(result: EnsembleResult, theta: float, rel_tol: float = 0.20) -> MomentRatioTest:
    """Compare <A^2>/<A>^2 at the largest window against the Mittag-Leffler value."""
    if result.spec.observable.kind != "band_power":
        raise ValueError("moment_ratio_test requires the band_power observable")
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    ergodicity_breaking(result)  # validates count and finiteness
    measured = float(result.moment_ratio[-1])
    predicted = mittag_leffler_moment_ratio(theta)
    return MomentRatioTest(measured, predicted, bool(abs(measured / predicted - 1.0) <= rel_tol))


def renewal_count_moment_ratio(theta: float, horizon: float, n_paths: int, seed: int = 0) -> float:
    """Brute-force oracle for the Mittag-Leffler constant.

    Counts renewals N(T) of a power-law renewal process up to T=horizon;
    N(T)/T^theta converges to a Mittag-Leffler law, so <N^2>/<N>^2
    estimates the predicted moment ratio independently of any spectral
    machinery.
    """
    rng = np.random.default_rng(seed)
    counts = np.empty(n_paths)
    for i in range(n_paths):
        t, n = 0.0, 0
        while t < horizon:
            w = rng.random(512) ** (-1.0 / theta)
            cs = np.cumsum(w)
            if t + cs[-1] < horizon:
                t += cs[-1]
                n += 512
            else:
                n += int(np.searchsorted(t + cs, horizon))
                break
        counts[i] = n
    return float((counts**2).mean() / counts.mean() ** 2)


def aging_exponent(spec: EnsembleSpec) -> ScalingFit:
    """Slope of log(ensemble-mean band power) vs log T; estimates theta-1."""
    if spec.observable.kind != "band_power":
        raise ValueError("aging_exponent requires the band_power observable")
    result = run_ensemble(spec)
    w = np.array(spec.windows, dtype=float)
    return fit_loglog_slope(w, result.mean, float(w[0]), float(w[-1]))


@dataclass(frozen=True)
class AgingSpectrumSummary:
    """Ensemble-mean aging spectrum: per-window mean spectra plus both exponent fits."""

    windows: tuple[int, ...]
    fixed_band: tuple[float, float]
    mean_spectra: tuple[np.ndarray, ...]  # mean power per window, aligned with freqs
    freqs: tuple[np.ndarray, ...]
    freq_fit: ScalingFit  # frequency slope of the mean spectrum at the largest window
    t_fit: ScalingFit  # T-scaling of ensemble-mean band power
    mean_band_power: np.ndarray
    eb: np.ndarray
    moment_ratio: np.ndarray


def aging_spectrum_ensemble(
    generator: GeneratorConfig,
    n_realizations: int,
    base_seed: int,
    windows,
    fixed_band: tuple[float, float] | None = None,
) -> AgingSpectrumSummary:
    """Average conditional spectra across seeds and fit both scaling exponents."""
    windows = tuple(int(w) for w in windows)
    band = fixed_band or default_band(windows[0])
    sums: dict[int, np.ndarray] = {}
    freqs: dict[int, np.ndarray] = {}
    bp = np.empty((n_realizations, len(windows)))
    for i in range(n_realizations):
        ts = generators.generate(generator, base_seed + i)
        for j, T in enumerate(windows):
            p = periodogram(ts.values[:T])
            if T not in sums:
                sums[T] = np.zeros_like(p.power)
                freqs[T] = p.freqs
            sums[T] += p.power
            bp[i, j] = band_mean_power(p, band)
    mean_spectra = tuple(sums[T] / n_realizations for T in windows)
    t_largest = windows[-1]
    freq_fit = fit_loglog_slope(freqs[t_largest], sums[t_largest] / n_realizations, *band)
    mean_bp = bp.mean(axis=0)
    t_fit = fit_loglog_slope(np.array(windows, dtype=float), mean_bp, float(windows[0]), float(windows[-1]))
    with np.errstate(divide="ignore", invalid="ignore"):
        eb = bp.var(axis=0) / mean_bp**2
        mr = (bp**2).mean(axis=0) / mean_bp**2
    return AgingSpectrumSummary(
        windows=windows,
        fixed_band=band,
        mean_spectra=mean_spectra,
        freqs=tuple(freqs[T] for T in windows),
        freq_fit=freq_fit,
        t_fit=t_fit,
        mean_band_power=mean_bp,
        eb=eb,
        moment_ratio=mr,
    )
