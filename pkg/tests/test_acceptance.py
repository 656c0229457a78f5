"""End-to-end acceptance suite.

Each test checks one headline property of the package and prints a single
[PASS]/[FAIL] line (run pytest with -s or rely on captured output in -v
reports).  All expected values are either analytic or were validated with
independent brute-force oracles before being frozen here.
"""
import math

import numpy as np
import pytest

from oneflab import (
    EnsembleSpec,
    FgnConfig,
    Observable,
    RenewalConfig,
    aging_spectrum_ensemble,
    dfa,
    ergodicity_breaking,
    gen_fgn,
    gph_estimate,
    mittag_leffler_moment_ratio,
    parse_config,
    periodogram,
    rescaled_range,
    run_ensemble,
    run_experiment,
    sample_pareto,
    serialize_config,
)
from oneflab.diagnostics import rescaled_range_points
from oneflab.ensemble import renewal_count_moment_ratio

WINDOWS = (2**12, 2**13, 2**14, 2**15, 2**16)


def _report(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


# 1 ------------------------------------------------------------------ aging


def test_acceptance_aging_spectrum_renewal():
    s = aging_spectrum_ensemble(RenewalConfig(theta=0.5, n=2**16), 200, 0, WINDOWS)
    f_ok = abs(s.freq_fit.exponent - (-1.5)) <= 0.15
    t_ok = abs(s.t_fit.exponent - (-0.5)) <= 0.15
    _report(
        "aging-spectrum renewal theta=0.5",
        f_ok and t_ok,
        f"freq exponent {s.freq_fit.exponent:.3f} (want -1.5±0.15), "
        f"T exponent {s.t_fit.exponent:.3f} (want -0.5±0.15)",
    )


# 2 ------------------------------------------------------------------ control


def test_acceptance_stationary_control_fgn():
    s = aging_spectrum_ensemble(FgnConfig(hurst=0.8, n=2**16), 100, 0, WINDOWS)
    f_ok = abs(s.freq_fit.exponent - (-0.6)) <= 0.1
    t_ok = abs(s.t_fit.exponent) <= 0.1
    _report(
        "stationary control fGn H=0.8",
        f_ok and t_ok,
        f"freq exponent {s.freq_fit.exponent:.3f} (want -0.6±0.1), "
        f"T exponent {s.t_fit.exponent:.3f} (want 0±0.1)",
    )


# 3 ------------------------------------------------------------------ Feller


def test_acceptance_iid_rs_baseline():
    rng = np.random.default_rng(0)
    js = [rescaled_range(rng.normal(size=2**13)).exponent for _ in range(100)]
    mean_j = float(np.mean(js))
    ok = abs(mean_j - 0.50) <= 0.05
    _report("iid R/S baseline", ok, f"mean J {mean_j:.3f} (want 0.50±0.05)")


# 4 ------------------------------------------------------------------ trend


def test_acceptance_hurst_without_lrd(tmp_path):
    cfg = parse_config("experiment: hurst-without-lrd\n")
    summary = run_experiment(cfg, out_dir=tmp_path, quiet=True)
    detail = "; ".join(f"{c.name}={c.value:.3f} ({c.constraint})" for c in summary.checks)
    _report("hurst-without-lrd experiment", summary.passed, detail)


# 5 ------------------------------------------------------------------ Lorenz


def test_acceptance_hurst_without_1f(tmp_path):
    cfg = parse_config("experiment: hurst-without-1f\n")
    summary = run_experiment(cfg, out_dir=tmp_path, quiet=True)
    detail = "; ".join(f"{c.name}={c.value:.3f} ({c.constraint})" for c in summary.checks)
    _report("hurst-without-1f experiment", summary.passed, detail)


# 6 ------------------------------------------------------------------ EB


def test_acceptance_eb_dichotomy():
    obs = Observable(kind="band_power")
    eb_ne = ergodicity_breaking(
        run_ensemble(
            EnsembleSpec(
                generator=RenewalConfig(theta=0.5, n=2**16),
                n_realizations=100,
                windows=(2**16,),
                observable=obs,
            )
        )
    )[-1]
    eb_e = ergodicity_breaking(
        run_ensemble(
            EnsembleSpec(
                generator=FgnConfig(hurst=0.7, n=2**16),
                n_realizations=100,
                windows=(2**16,),
                observable=obs,
            )
        )
    )[-1]
    ok = eb_ne > 0.1 and eb_e < 0.1
    _report(
        "ergodic/non-ergodic EB dichotomy",
        ok,
        f"EB(renewal)={eb_ne:.3f} (want >0.1), EB(fGn)={eb_e:.4f} (want <0.1)",
    )


# 7 ------------------------------------------------------------------ Mittag-Leffler


def test_acceptance_mittag_leffler_moment_ratio():
    predicted = mittag_leffler_moment_ratio(0.5)
    oracle = renewal_count_moment_ratio(0.5, horizon=1e6, n_paths=2000)
    res = run_ensemble(
        EnsembleSpec(
            generator=RenewalConfig(theta=0.5, n=2**16),
            n_realizations=100,
            windows=(2**16,),
            observable=Observable(kind="band_power"),
        )
    )
    measured = float(res.moment_ratio[-1])
    ok = (
        abs(predicted - math.pi / 2) < 1e-12
        and abs(oracle / predicted - 1.0) <= 0.1
        and abs(measured / predicted - 1.0) <= 0.2
    )
    _report(
        "Mittag-Leffler moment ratio theta=0.5",
        ok,
        f"analytic {predicted:.4f} (pi/2), counting oracle {oracle:.4f}, "
        f"band-power ensemble {measured:.4f} (want within 20%)",
    )


# 8 ------------------------------------------------------------------ invariants


def test_acceptance_invariant_suite(tmp_path):
    failures = []

    # estimator cross-consistency on fGn
    for h in (0.6, 0.7, 0.8):
        js, alphas, ds = [], [], []
        for s in range(100):
            x = gen_fgn(FgnConfig(hurst=h, n=2**13), s)
            js.append(rescaled_range(x).exponent)
            alphas.append(dfa(x).exponent)
            ds.append(gph_estimate(periodogram(x)).exponent)
        j, a, d = float(np.mean(js)), float(np.mean(alphas)), float(np.mean(ds))
        if abs(j - h) > 0.1:
            failures.append(f"R/S H={h}: J={j:.3f}")
        if abs(a - h) > 0.07:
            failures.append(f"DFA H={h}: alpha={a:.3f}")
        if abs(d - (h - 0.5)) > 0.1:
            failures.append(f"GPH H={h}: d={d:.3f}")

    # Parseval
    rng = np.random.default_rng(1)
    for _ in range(50):
        x = rng.normal(size=int(rng.integers(8, 1000)))
        p = periodogram(x)
        if abs(p.total_power / float(np.sum(x**2)) - 1.0) > 1e-8:
            failures.append("Parseval violated")
            break

    # R/S affine invariance
    x = rng.normal(size=4096)
    p1 = rescaled_range_points(x, (64, 128, 256, 512))
    p2 = rescaled_range_points(3.0 * x + 5.0, (64, 128, 256, 512))
    if not np.allclose([v for _, v in p1], [v for _, v in p2], rtol=1e-12):
        failures.append("R/S affine invariance violated")

    # Pareto KS
    for theta in (0.5, 1.0, 1.5):
        u = np.random.default_rng(2).uniform(1e-12, 1.0, 200_000)
        w = np.sort(sample_pareto(theta, 1.0, u))
        emp = np.arange(1, len(w) + 1) / len(w)
        cdf = 1.0 - w ** (-theta)
        ks = float(np.abs(emp - cdf).max())
        if ks > 0.01:
            failures.append(f"Pareto KS theta={theta}: {ks:.4f}")

    # config round-trip
    cfg = parse_config("experiment: fgn-baseline\n")
    if parse_config(serialize_config(cfg)) != cfg:
        failures.append("config round-trip not idempotent")

    # end-to-end byte determinism
    custom = parse_config(
        "experiment: custom\ngenerator:\n  kind: renewal\n  theta: 0.5\n  n: 4096\n"
    )
    run_experiment(custom, out_dir=tmp_path / "a", quiet=True)
    run_experiment(custom, out_dir=tmp_path / "b", quiet=True)
    if (tmp_path / "a" / "series.csv").read_bytes() != (tmp_path / "b" / "series.csv").read_bytes():
        failures.append("reruns not byte-identical")

    _report(
        "estimator cross-consistency invariant suite",
        not failures,
        "all invariants hold" if not failures else "; ".join(failures),
    )
