"""Single-series estimators: periodogram, ACF, R/S, DFA, GPH, slope fits,
power-law rejection, and the windowed conditional spectrum.

All operations are pure functions of their inputs.  Frequencies are in
cycles per sample throughout.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .series import TimeSeries

# geometric log-binning density used by every log-log fit
BINS_PER_DECADE = 8
# r-squared margin by which a power-law fit must beat an exponential fit
POWERLAW_R2_MARGIN = 0.05


def _values(x) -> np.ndarray:
    v = x.values if isinstance(x, TimeSeries) else np.asarray(x, dtype=float)
    return np.asarray(v, dtype=float)


@dataclass(frozen=True)
class Periodogram:
    """One-sided periodogram normalized so dc_power + sum(power) == sum(x**2).

    The sample mean is NOT removed; zero-frequency energy lives in
    ``dc_power`` and the ``freqs``/``power`` arrays cover the floor(n/2)
    positive frequencies.
    """

    freqs: np.ndarray
    power: np.ndarray
    dc_power: float
    norm: str = "sum-equals-energy"

    def __post_init__(self):
        if len(self.freqs) != len(self.power):
            raise ValueError("freqs and power must have equal length")

    @property
    def total_power(self) -> float:
        return self.dc_power + float(self.power.sum())


@dataclass(frozen=True)
class ScalingFit:
    """A fitted log-log exponent with its OLS standard error and fit range."""

    exponent: float
    stderr: float
    lo: float
    hi: float
    n_points: int
    r_squared: float


@dataclass(frozen=True)
class PowerLawDecision:
    is_powerlaw: bool
    r2_power: float
    r2_exp: float


@dataclass(frozen=True)
class AgingSpectrum:
    """Window-length-dependent spectra of one series.

    ``spectra[i]`` is the periodogram of x[0..windows[i]].  ``freq_fits``
    are per-window slope fits over ``fixed_band``; ``t_fit`` is the fit of
    band-averaged power against window length T.
    """

    windows: tuple[int, ...]
    spectra: tuple[Periodogram, ...]
    fixed_band: tuple[float, float]
    band_power: np.ndarray
    freq_fits: tuple[ScalingFit, ...]
    t_fit: ScalingFit


def periodogram(x) -> Periodogram:
    """Raw rectangular-window periodogram; mean not removed."""
    v = _values(x)
    n = v.size
    if n < 8:
        raise ValueError(f"series too short for a periodogram: n={n} < 8")
    X = np.fft.rfft(v)
    nf = n // 2
    freqs = np.arange(1, nf + 1, dtype=float) / n
    power = (2.0 / n) * np.abs(X[1 : nf + 1]) ** 2
    if n % 2 == 0:
        power[-1] *= 0.5  # Nyquist bin has no mirror
    dc = float(np.abs(X[0]) ** 2 / n)
    return Periodogram(freqs=freqs, power=power, dc_power=dc)


def empirical_acf(x, max_lag: int) -> np.ndarray:
    """Biased autocorrelation estimate rho(0..max_lag); the mean IS removed."""
    v = _values(x)
    n = v.size
    if not 0 < max_lag < n / 2:
        raise ValueError(f"max_lag must lie in (0, n/2); got {max_lag} with n={n}")
    vc = v - v.mean()
    var = float(np.dot(vc, vc)) / n
    if var <= 0.0:
        raise ValueError("zero-variance (constant) series has no autocorrelation")
    # FFT autocorrelation, biased normalization 1/n
    m = 1 << int(2 * n - 1).bit_length()
    F = np.fft.rfft(vc, m)
    ac = np.fft.irfft(F * np.conj(F), m)[: max_lag + 1] / n
    return ac / ac[0]


def _ols_loglike(xreg: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """OLS slope, slope stderr, r-squared of y on xreg."""
    A = np.column_stack([xreg, np.ones_like(xreg)])
    coef, _, _, _ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    rss = float(resid @ resid)
    dof = len(y) - 2
    stderr = 0.0
    if dof > 0:
        s2 = rss / dof
        cov00 = s2 * np.linalg.inv(A.T @ A)[0, 0]
        stderr = float(np.sqrt(max(cov00, 0.0)))
    sst = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if sst == 0.0 else 1.0 - rss / sst
    return float(coef[0]), stderr, float(min(max(r2, 0.0), 1.0))


def _log_bin(xs: np.ndarray, ys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Geometric bins, BINS_PER_DECADE per decade; bin value = mean of log members."""
    lx, ly = np.log(xs), np.log(ys)
    span = lx.max() - lx.min()
    nb = max(3, int(np.ceil(span / np.log(10.0) * BINS_PER_DECADE)))
    edges = np.linspace(lx.min(), lx.max() + 1e-12, nb + 1)
    idx = np.digitize(lx, edges) - 1
    bx, by = [], []
    for b in range(nb):
        sel = idx == b
        if sel.any():
            bx.append(lx[sel].mean())
            by.append(ly[sel].mean())
    return np.array(bx), np.array(by)


def _band_select(xs, ys, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if np.any(xs <= 0):
        raise ValueError("xs must be strictly positive")
    sel = (xs >= lo) & (xs <= hi)
    xs, ys = xs[sel], ys[sel]
    if np.any(ys <= 0):
        raise ValueError("ys must be strictly positive inside the fit range")
    if xs.size < 3:
        raise ValueError(f"need at least 3 points in [{lo}, {hi}]; got {xs.size}")
    return xs, ys


def fit_loglog_slope(xs, ys, lo: float, hi: float) -> ScalingFit:
    """Log-binned OLS of log(y) on log(x) over [lo, hi]."""
    xs, ys = _band_select(xs, ys, lo, hi)
    bx, by = _log_bin(xs, ys)
    if bx.size < 3:
        raise ValueError(f"fewer than 3 binned points in [{lo}, {hi}]")
    slope, stderr, r2 = _ols_loglike(bx, by)
    return ScalingFit(slope, stderr, lo, hi, int(bx.size), r2)


def reject_powerlaw(xs, ys, lo: float, hi: float) -> PowerLawDecision:
    """Power-law vs exponential discrimination on binned points.

    is_powerlaw requires the log-log r-squared to beat the log-linear
    (exponential) one by POWERLAW_R2_MARGIN.
    """
    xs, ys = _band_select(xs, ys, lo, hi)
    bx, by = _log_bin(xs, ys)
    if bx.size < 3:
        raise ValueError(f"fewer than 3 binned points in [{lo}, {hi}]")
    _, _, r2_power = _ols_loglike(bx, by)
    _, _, r2_exp = _ols_loglike(np.exp(bx), by)
    return PowerLawDecision(bool(r2_power >= r2_exp + POWERLAW_R2_MARGIN), r2_power, r2_exp)


def default_rs_windows(n: int, smallest: int = 64) -> list[int]:
    """Dyadic window ladder smallest..n/4 (classical R/S bias is worst below ~64)."""
    taus, tau = [], smallest
    while tau <= n // 4:
        taus.append(tau)
        tau *= 2
    return taus


def rescaled_range_points(x, window_sizes=None) -> list[tuple[int, float]]:
    """Per-window mean R/S over disjoint blocks; zero-std blocks are skipped."""
    v = _values(x)
    n = v.size
    taus = sorted(set(int(t) for t in (window_sizes if window_sizes is not None else default_rs_windows(n))))
    if any(t < 8 or t > n // 4 for t in taus):
        raise ValueError("window sizes must lie in [8, n/4]")
    if len(taus) < 4:
        raise ValueError("need at least 4 distinct window sizes")
    pts = []
    for tau in taus:
        nb = n // tau
        blocks = v[: nb * tau].reshape(nb, tau)
        s = blocks.std(axis=1, ddof=1)
        ok = s > 0
        if not ok.any():
            continue  # all blocks degenerate at this tau
        dev = np.cumsum(blocks - blocks.mean(axis=1, keepdims=True), axis=1)
        r = dev.max(axis=1) - dev.min(axis=1)
        pts.append((tau, float(np.mean(r[ok] / s[ok]))))
    return pts


def rescaled_range(x, window_sizes=None) -> ScalingFit:
    """Classical R/S: disjoint blocks, mean-adjusted cumulative range over block std."""
    pts = rescaled_range_points(x, window_sizes)
    if len(pts) < 4:
        raise ValueError("fewer than 4 usable window sizes (degenerate blocks)")
    lt = np.log([p[0] for p in pts])
    lr = np.log([p[1] for p in pts])
    slope, stderr, r2 = _ols_loglike(lt, lr)
    return ScalingFit(slope, stderr, float(pts[0][0]), float(pts[-1][0]), len(pts), r2)


def default_dfa_windows(n: int, smallest: int = 8) -> list[int]:
    return default_rs_windows(n, smallest=smallest)


def dfa(x, window_sizes=None, detrend_order: int = 1) -> ScalingFit:
    """Detrended fluctuation analysis of the integrated, mean-removed series."""
    if detrend_order not in (1, 2):
        raise ValueError("detrend_order must be 1 or 2")
    v = _values(x)
    n = v.size
    taus = sorted(set(int(t) for t in (window_sizes if window_sizes is not None else default_dfa_windows(n))))
    if any(t < detrend_order + 2 for t in taus):
        raise ValueError(f"window sizes must be >= detrend_order+2 = {detrend_order + 2}")
    if len(taus) < 4:
        raise ValueError("need at least 4 distinct window sizes")
    y = np.cumsum(v - v.mean())
    pts = []
    for tau in taus:
        nb = n // tau
        if nb < 1:
            continue
        segs = y[: nb * tau].reshape(nb, tau)
        t = np.arange(tau, dtype=float)
        V = np.vander(t, detrend_order + 1)
        # one shared least-squares solve for all blocks at this tau
        coef, _, _, _ = np.linalg.lstsq(V, segs.T, rcond=None)
        resid = segs.T - V @ coef
        f2 = float(np.mean(resid**2))
        if f2 > 0:
            pts.append((tau, np.sqrt(f2)))
    if len(pts) < 4:
        raise ValueError("fewer than 4 usable window sizes")
    lt = np.log([p[0] for p in pts])
    lf = np.log([p[1] for p in pts])
    slope, stderr, r2 = _ols_loglike(lt, lf)
    return ScalingFit(slope, stderr, float(pts[0][0]), float(pts[-1][0]), len(pts), r2)


def gph_bandwidth(n: int) -> int:
    """Conventional default bandwidth floor(sqrt(n/2)) for a length-n series."""
    return int(np.sqrt(n / 2.0))


def gph_estimate(p: Periodogram, m: int | None = None) -> ScalingFit:
    """Log-periodogram regression for the memory parameter d.

    Regresses log(power_k) on -log(4 sin^2(pi f_k)) over the m lowest bins.
    """
    nf = len(p.freqs)
    if m is None:
        m = gph_bandwidth(2 * nf)
    if not 3 <= m <= nf:
        raise ValueError(f"bandwidth m must lie in [3, {nf}]; got {m}")
    fk = p.freqs[:m]
    pk = p.power[:m]
    ok = pk > 0
    n_zero = int(m - ok.sum())
    if n_zero:
        warnings.warn(f"gph_estimate: excluded {n_zero} zero-power bins", stacklevel=2)
    if ok.sum() < 3:
        raise ValueError("fewer than 3 positive-power bins in the GPH band")
    xreg = -np.log(4.0 * np.sin(np.pi * fk[ok]) ** 2)
    slope, stderr, r2 = _ols_loglike(xreg, np.log(pk[ok]))
    return ScalingFit(slope, stderr, float(fk[0]), float(fk[m - 1]), int(ok.sum()), r2)


def default_band(smallest_window: int) -> tuple[float, float]:
    """Low-frequency decade fully resolved at the smallest window."""
    return (16.0 / smallest_window, 160.0 / smallest_window)


def band_mean_power(p: Periodogram, band: tuple[float, float]) -> float:
    sel = (p.freqs >= band[0]) & (p.freqs <= band[1])
    if not sel.any():
        raise ValueError(f"band {band} contains no frequency bins")
    return float(p.power[sel].mean())


def conditional_spectrum(x, windows, fixed_band: tuple[float, float] | None = None) -> AgingSpectrum:
    """Spectra of the growing prefixes x[0..T]; exposes frequency- and T-scaling fits."""
    v = _values(x)
    windows = tuple(int(w) for w in windows)
    if list(windows) != sorted(set(windows)):
        raise ValueError("windows must be strictly increasing")
    if windows[-1] > v.size:
        raise ValueError(f"largest window {windows[-1]} exceeds series length {v.size}")
    band = tuple(fixed_band) if fixed_band is not None else default_band(windows[0])
    if band[0] < 1.0 / windows[0]:
        raise ValueError(f"band {band} not resolvable at the smallest window {windows[0]}")
    spectra, fits, bp = [], [], []
    for T in windows:
        p = periodogram(v[:T])
        spectra.append(p)
        fits.append(fit_loglog_slope(p.freqs, p.power, *band))
        bp.append(band_mean_power(p, band))
    bp = np.array(bp)
    t_fit = fit_loglog_slope(np.array(windows, dtype=float), bp, float(windows[0]), float(windows[-1]))
    return AgingSpectrum(
        windows=windows,
        spectra=tuple(spectra),
        fixed_band=band,
        band_power=bp,
        freq_fits=tuple(fits),
        t_fit=t_fit,
    )
