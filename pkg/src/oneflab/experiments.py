"""Named experiments and the experiment runner.

Each named experiment operationalizes one commonly conflated claim about
the Hurst effect, 1/f spectra, and long-range dependence, with hard-coded
pass/fail tolerances so CI can gate on exit status.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import diagnostics as diag
from . import generators as gen
from .config import ExperimentConfig, config_hash
from .ensemble import (
    EnsembleSpec,
    Observable,
    aging_spectrum_ensemble,
    mittag_leffler_moment_ratio,
    run_ensemble,
)
from .io import default_output_root, write_csv, write_summary
from .series import TimeSeries

AGING_WINDOWS = (2**12, 2**13, 2**14, 2**15, 2**16)
LORENZ_RS_WINDOWS = (10, 20, 40, 80, 160, 320, 640, 1000)
LORENZ_LOW_BAND = (0.001, 0.05)
# large GPH bandwidth for residual whiteness checks (residuals are white,
# so variance shrinks with m without bias)
RESIDUAL_GPH_BANDWIDTH = 1024


@dataclass
class Check:
    name: str
    value: float
    constraint: str
    passed: bool


@dataclass
class RunSummary:
    experiment: str
    config_hash: str
    fits: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    passed: bool = False
    failed_error: str | None = None
    wall_time_s: float = 0.0
    artifacts: list = field(default_factory=list)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["checks"] = [asdict(c) if isinstance(c, Check) else c for c in self.checks]
        return d


def _fit_dict(f: diag.ScalingFit) -> dict:
    return asdict(f)


def _interval_check(name: str, value: float, target: float, tol: float) -> Check:
    return Check(name, float(value), f"{target} +/- {tol}", bool(abs(value - target) <= tol))


def _bound_check(name: str, value: float, op: str, bound: float) -> Check:
    ok = value > bound if op == ">" else value < bound
    return Check(name, float(value), f"{op} {bound}", bool(ok))


def _series_rows(ts: TimeSeries):
    return ((i * ts.dt, v) for i, v in enumerate(ts.values))


def _spectra_rows(freqs_list, power_list, windows):
    for f, p, T in zip(freqs_list, power_list, windows):
        for fi, pi in zip(f, p):
            yield (float(fi), float(pi), int(T))


class _Run:
    """Collects fits, checks and artifact tables for one experiment run."""

    def __init__(self):
        self.fits: dict = {}
        self.checks: list[Check] = []
        self.tables: dict[str, tuple] = {}  # filename -> (header, rows)


def _run_fgn_baseline(cfg: ExperimentConfig, run: _Run) -> None:
    ts = gen.generate(cfg.generator, cfg.base_seed)
    h = cfg.generator.hurst
    rs = diag.rescaled_range(ts)
    alpha = diag.dfa(ts)
    d = diag.gph_estimate(diag.periodogram(ts))
    run.fits = {"rs": _fit_dict(rs), "dfa": _fit_dict(alpha), "gph": _fit_dict(d)}
    run.checks = [
        _interval_check("rs_exponent", rs.exponent, h, 0.12),
        _interval_check("dfa_exponent", alpha.exponent, h, 0.10),
        _interval_check("gph_d", d.exponent, h - 0.5, 0.15),
    ]
    run.tables["series.csv"] = (("t", "value"), _series_rows(ts))


def _run_hurst_without_lrd(cfg: ExperimentConfig, run: _Run) -> None:
    g = cfg.generator
    ts = gen.generate(g, cfg.base_seed)
    rs = diag.rescaled_range(ts)
    # regress out the known trend shape, then ask GPH whether any memory remains
    t = np.arange(1, g.n + 1, dtype=float)
    basis = np.column_stack([np.ones(g.n), (g.m + t) ** (-g.gamma)])
    coef, _, _, _ = np.linalg.lstsq(basis, ts.values, rcond=None)
    resid = ts.values - basis @ coef
    d = diag.gph_estimate(diag.periodogram(resid), m=RESIDUAL_GPH_BANDWIDTH)
    run.fits = {"rs": _fit_dict(rs), "gph_residual": _fit_dict(d)}
    run.checks = [
        _bound_check("rs_exponent", rs.exponent, ">", 0.6),
        _interval_check("gph_residual_d", d.exponent, 0.0, 0.10),
    ]
    run.tables["series.csv"] = (("t", "value"), _series_rows(ts))


def _run_hurst_without_1f(cfg: ExperimentConfig, run: _Run) -> None:
    ts = gen.generate(cfg.generator, cfg.base_seed)
    rs = diag.rescaled_range(ts, LORENZ_RS_WINDOWS)
    p = diag.periodogram(ts)
    decision = diag.reject_powerlaw(p.freqs, p.power, *LORENZ_LOW_BAND)
    run.fits = {
        "rs": _fit_dict(rs),
        "powerlaw_decision": asdict(decision),
    }
    run.checks = [
        _bound_check("rs_exponent", rs.exponent, ">", 0.55),
        Check(
            "low_band_is_powerlaw",
            float(decision.is_powerlaw),
            "== 0 (power law rejected)",
            not decision.is_powerlaw,
        ),
    ]
    run.tables["series.csv"] = (("t", "value"), _series_rows(ts))
    run.tables["spectrum.csv"] = (("freq", "power"), zip(p.freqs, p.power))


def _aging_checks(cfg: ExperimentConfig, summary, run: _Run) -> None:
    g = cfg.generator
    if g.kind == "renewal":
        run.checks += [
            _interval_check("frequency_exponent", summary.freq_fit.exponent, g.theta - 2.0, 0.15),
            _interval_check("t_exponent", summary.t_fit.exponent, g.theta - 1.0, 0.15),
        ]
    elif g.kind == "fgn":
        run.checks += [
            _interval_check("frequency_exponent", summary.freq_fit.exponent, 1.0 - 2.0 * g.hurst, 0.10),
            _interval_check("t_exponent", summary.t_fit.exponent, 0.0, 0.10),
        ]
    else:
        # no closed-form expectation for other generators; report fits only
        pass


def _ensemble_block(cfg: ExperimentConfig, default_n: int):
    ens = cfg.ensemble
    n = ens.n_realizations if ens is not None else default_n
    windows = ens.windows if ens is not None else AGING_WINDOWS
    return n, windows


def _run_aging_spectrum(cfg: ExperimentConfig, run: _Run) -> None:
    n, windows = _ensemble_block(cfg, default_n=200)
    summary = aging_spectrum_ensemble(cfg.generator, n, cfg.base_seed, windows)
    run.fits = {"frequency": _fit_dict(summary.freq_fit), "t_scaling": _fit_dict(summary.t_fit)}
    _aging_checks(cfg, summary, run)
    run.tables["spectra.csv"] = (
        ("freq", "power", "window_T"),
        _spectra_rows(summary.freqs, summary.mean_spectra, summary.windows),
    )
    run.tables["band_power.csv"] = (
        ("window_T", "mean_band_power", "eb", "moment_ratio"),
        zip(
            summary.windows,
            summary.mean_band_power.tolist(),
            summary.eb.tolist(),
            summary.moment_ratio.tolist(),
        ),
    )


def _run_1f_without_lrd(cfg: ExperimentConfig, run: _Run) -> None:
    n, windows = _ensemble_block(cfg, default_n=200)
    summary = aging_spectrum_ensemble(cfg.generator, n, cfg.base_seed, windows)
    run.fits = {"frequency": _fit_dict(summary.freq_fit), "t_scaling": _fit_dict(summary.t_fit)}
    _aging_checks(cfg, summary, run)
    run.checks.append(_bound_check("eb_largest_window", float(summary.eb[-1]), ">", 0.1))
    run.tables["spectra.csv"] = (
        ("freq", "power", "window_T"),
        _spectra_rows(summary.freqs, summary.mean_spectra, summary.windows),
    )


def _run_eb_dichotomy(cfg: ExperimentConfig, run: _Run) -> None:
    n, windows = _ensemble_block(cfg, default_n=100)
    nonerg = aging_spectrum_ensemble(cfg.generator, n, cfg.base_seed, windows)
    control_cfg = gen.FgnConfig(hurst=0.7, n=cfg.generator.n)
    erg = aging_spectrum_ensemble(control_cfg, n, cfg.base_seed, windows)
    eb_ne, eb_e = float(nonerg.eb[-1]), float(erg.eb[-1])
    run.fits = {
        "eb_nonergodic": {"per_window": [float(v) for v in nonerg.eb]},
        "eb_ergodic_control": {"per_window": [float(v) for v in erg.eb]},
    }
    run.checks = [
        _bound_check("eb_nonergodic", eb_ne, ">", 0.1),
        _bound_check("eb_ergodic_control", eb_e, "<", 0.1),
    ]
    if cfg.generator.kind == "renewal" and 0 < cfg.generator.theta < 1:
        predicted = mittag_leffler_moment_ratio(cfg.generator.theta)
        measured = float(nonerg.moment_ratio[-1])
        run.fits["moment_ratio"] = {"measured": measured, "predicted": predicted}
        run.checks.append(
            Check(
                "moment_ratio",
                measured,
                f"within 20% of {predicted:.6g}",
                bool(abs(measured / predicted - 1.0) <= 0.20),
            )
        )
    run.tables["eb.csv"] = (
        ("window_T", "eb_nonergodic", "eb_ergodic_control"),
        zip(windows, nonerg.eb, erg.eb),
    )


def _run_custom(cfg: ExperimentConfig, run: _Run) -> None:
    if cfg.generator is None:
        raise ValueError("custom experiment requires a generator block")
    ts = gen.generate(cfg.generator, cfg.base_seed)
    run.tables["series.csv"] = (("t", "value"), _series_rows(ts))
    d = cfg.diagnostics
    for est in d.estimators:
        if est == "rs":
            run.fits["rs"] = _fit_dict(diag.rescaled_range(ts, d.rs_windows))
        elif est == "dfa":
            run.fits["dfa"] = _fit_dict(diag.dfa(ts, d.dfa_windows, d.dfa_order))
        elif est == "gph":
            run.fits["gph"] = _fit_dict(diag.gph_estimate(diag.periodogram(ts), d.gph_bandwidth))
        elif est == "acf":
            acf = diag.empirical_acf(ts, d.acf_max_lag)
            run.tables["acf.csv"] = (("lag", "acf"), enumerate(acf.tolist()))
        elif est == "periodogram":
            p = diag.periodogram(ts)
            run.tables["spectrum.csv"] = (("freq", "power"), zip(p.freqs, p.power))
    if cfg.ensemble is not None:
        spec = EnsembleSpec(
            generator=cfg.generator,
            n_realizations=cfg.ensemble.n_realizations,
            base_seed=cfg.base_seed,
            windows=cfg.ensemble.windows,
            observable=cfg.ensemble.observable,
        )
        result = run_ensemble(spec)
        run.tables["ensemble.csv"] = (
            ("window_T", "mean", "variance", "eb", "moment_ratio"),
            zip(spec.windows, result.mean, result.variance, result.eb, result.moment_ratio),
        )


_RUNNERS = {
    "fgn-baseline": _run_fgn_baseline,
    "hurst-without-lrd": _run_hurst_without_lrd,
    "hurst-without-1f": _run_hurst_without_1f,
    "1f-without-lrd": _run_1f_without_lrd,
    "aging-spectrum": _run_aging_spectrum,
    "eb-dichotomy": _run_eb_dichotomy,
    "custom": _run_custom,
}

EXPERIMENT_DESCRIPTIONS = {
    "fgn-baseline": "fGn sanity run: R/S, DFA and GPH all recover the configured Hurst exponent",
    "hurst-without-lrd": "power-decay trend plus white noise: Hurst effect with no long memory",
    "hurst-without-1f": "Lorenz x-component: Hurst effect with an exponential (non-power-law) spectrum",
    "1f-without-lrd": "renewal process: 1/f spectrum that ages with window length, non-ergodic",
    "aging-spectrum": "windowed conditional spectrum: frequency and window-length scaling exponents",
    "eb-dichotomy": "ergodicity-breaking parameter: renewal vs fGn control, plus moment-ratio test",
    "custom": "user-specified generator, diagnostics and ensemble blocks",
}


def list_experiments() -> list[dict]:
    return [{"name": k, "description": v} for k, v in EXPERIMENT_DESCRIPTIONS.items()]


def run_experiment(cfg: ExperimentConfig, out_dir=None, quiet: bool = False) -> RunSummary:
    """Execute generators -> diagnostics -> (optional) ensemble; write artifacts.

    On any module error a partial summary marked failed is written before
    the error propagates.
    """
    out = Path(out_dir) if out_dir else (
        Path(cfg.output_dir) if cfg.output_dir else default_output_root() / cfg.experiment
    )
    summary = RunSummary(experiment=cfg.experiment, config_hash=config_hash(cfg))
    t0 = time.perf_counter()
    run = _Run()
    try:
        _RUNNERS[cfg.experiment](cfg, run)
    except Exception as exc:
        summary.failed_error = f"{type(exc).__name__}: {exc}"
        summary.wall_time_s = time.perf_counter() - t0
        write_summary(summary.as_dict(), out / "summary.yaml")
        raise
    for fname, (header, rows) in run.tables.items():
        write_csv(out / fname, header, rows)
        summary.artifacts.append(str(out / fname))
    summary.fits = run.fits
    summary.checks = run.checks
    summary.passed = all(c.passed for c in run.checks)
    summary.wall_time_s = time.perf_counter() - t0
    write_summary(summary.as_dict(), out / "summary.yaml")
    if not quiet:
        for c in run.checks:
            print(f"[{'PASS' if c.passed else 'FAIL'}] {cfg.experiment}: {c.name} = {c.value:.4g} ({c.constraint})")
    return summary
