"""Seeded, reproducible synthesis of the processes under study.

Every generator is a pure function of (config, seed): repeated calls agree
exactly, and concurrent use is safe as long as each invocation owns its
seed.  All stochastic generators live on a unit-dt grid; only the Lorenz
integrator has a physical time step.
"""
from __future__ import annotations

from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.signal import lfilter

from .series import TimeSeries

# magnitude below which a negative circulant eigenvalue is treated as
# round-off and clamped to zero; larger negatives are a hard error
_EIGENVALUE_TOL = 1e-12


class _Config(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class FgnConfig(_Config):
    """Fractional Gaussian noise: stationary increments of an H-self-similar walk."""

    kind: Literal["fgn"] = "fgn"
    hurst: float = Field(0.7, gt=0.0, lt=1.0)
    sigma: float = Field(1.0, gt=0.0)
    n: int = Field(2**14, ge=1)


class FbmConfig(FgnConfig):
    """Cumulative sum of fGn (a nonstationary self-similar walk)."""

    kind: Literal["fbm"] = "fbm"


class RenewalConfig(_Config):
    """Multi-state renewal process with power-law waiting times.

    Waiting times satisfy P(t > x) = (x / t_min)^(-theta) for x >= t_min,
    with no upper cutoff.  The process starts with a fresh renewal at t=0
    and the final dwell is censored at the window edge.
    """

    kind: Literal["renewal"] = "renewal"
    theta: float = Field(0.5, gt=0.0, lt=2.0)
    t_min: float = Field(1.0, gt=0.0)
    levels: tuple[float, ...] = (-1.0, 1.0)
    level_rule: Literal["alternating", "iid-uniform"] = "alternating"
    n: int = Field(2**14, ge=1)

    @model_validator(mode="after")
    def _check_levels(self):
        if len(self.levels) < 2:
            raise ValueError("levels must contain at least 2 entries")
        if self.level_rule == "alternating" and len(self.levels) != 2:
            raise ValueError("alternating rule requires exactly 2 levels")
        return self


class TelegraphConfig(_Config):
    """Two-state telegraph process with exponential waiting times (ergodic control)."""

    kind: Literal["telegraph"] = "telegraph"
    rate: float = Field(0.1, gt=0.0)
    levels: tuple[float, float] = (-1.0, 1.0)
    n: int = Field(2**14, ge=1)


class Ar1Config(_Config):
    kind: Literal["ar1"] = "ar1"
    phi: float = Field(0.9, gt=-1.0, lt=1.0)
    sigma: float = Field(1.0, gt=0.0)
    n: int = Field(2**14, ge=1)


class TrendNoiseConfig(_Config):
    """iid Gaussian noise plus a deterministic trend c*(m+t)^(-gamma), t = 1..n."""

    kind: Literal["trend_noise"] = "trend_noise"
    c: float = 5.0
    m: float = Field(1.0, ge=0.0)
    gamma: float = Field(0.3, gt=0.0, lt=0.5)
    sigma: float = Field(1.0, gt=0.0)
    n: int = Field(2**14, ge=1)


class LorenzConfig(_Config):
    kind: Literal["lorenz"] = "lorenz"
    sigma_l: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0
    dt_integrate: float = Field(0.01, gt=0.0)
    sample_stride: int = Field(10, ge=1)
    n: int = Field(2**14, ge=1)
    initial_state: tuple[float, float, float] = (1.0, 1.0, 1.0)
    transient_steps: int = Field(10_000, ge=0)


GeneratorConfig = Annotated[
    Union[
        FgnConfig,
        FbmConfig,
        RenewalConfig,
        TelegraphConfig,
        Ar1Config,
        TrendNoiseConfig,
        LorenzConfig,
    ],
    Field(discriminator="kind"),
]


def fgn_autocovariance(hurst: float, sigma: float, max_lag: int) -> np.ndarray:
    """Theoretical fGn autocovariance gamma(k) for k = 0..max_lag."""
    k = np.arange(max_lag + 1, dtype=float)
    h2 = 2.0 * hurst
    return 0.5 * sigma**2 * ((k + 1) ** h2 - 2 * k**h2 + np.abs(k - 1) ** h2)


def _meta(kind: str, cfg: _Config, seed) -> dict:
    return {"generator": kind, "config": cfg.model_dump(), "seed": seed}


def gen_fgn(cfg: FgnConfig, seed: int) -> TimeSeries:
    """Exact-in-distribution fGn via circulant embedding of the covariance."""
    n = cfg.n
    gamma = fgn_autocovariance(cfg.hurst, cfg.sigma, n - 1) if n > 1 else fgn_autocovariance(cfg.hurst, cfg.sigma, 0)
    circ = np.concatenate([gamma, [0.0], gamma[:0:-1]]) if n > 1 else np.array([gamma[0], gamma[0]])
    lam = np.fft.fft(circ).real
    if lam.min() < -_EIGENVALUE_TOL * lam.max():
        raise RuntimeError(
            f"circulant embedding failed: negative eigenvalue {lam.min():.3e} "
            f"for hurst={cfg.hurst}, n={n}"
        )
    lam = np.clip(lam, 0.0, None)

    rng = np.random.default_rng(seed)
    m = 2 * n
    z = np.empty(m, dtype=complex)
    z[0] = rng.standard_normal()
    z[n] = rng.standard_normal()
    if n > 1:
        v = rng.standard_normal((n - 1, 2))
        z[1:n] = (v[:, 0] + 1j * v[:, 1]) / np.sqrt(2.0)
        z[n + 1 :] = np.conj(z[1:n][::-1])
    x = (np.fft.ifft(np.sqrt(lam) * z) * np.sqrt(m)).real[:n]
    return TimeSeries(x, meta=_meta("fgn", cfg, seed))


def gen_fbm(cfg: FgnConfig, seed: int) -> TimeSeries:
    """Cumulative sum of gen_fgn with the same seed; starts at the first increment."""
    incr = gen_fgn(cfg, seed)
    return TimeSeries(np.cumsum(incr.values), meta=_meta("fbm", cfg, seed))


def sample_pareto(theta: float, t_min: float, u) -> np.ndarray | float:
    """Inverse-CDF Pareto draw: t_min * u^(-1/theta), so P(t > x) = (x/t_min)^(-theta)."""
    if theta <= 0:
        raise ValueError("theta must be positive")
    if t_min <= 0:
        raise ValueError("t_min must be positive")
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr <= 0.0) or np.any(u_arr >= 1.0):
        raise ValueError("u must lie strictly inside (0, 1)")
    out = t_min * u_arr ** (-1.0 / theta)
    return out if out.ndim else float(out)


def _piecewise_constant(n: int, waits: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """Hold levels[i] over [t_i, t_i + waits[i]); sample at integer times 0..n-1."""
    ends = np.cumsum(waits)
    bounds = np.minimum(np.ceil(ends), n).astype(np.int64)
    counts = np.diff(np.concatenate([[0], bounds]))
    return np.repeat(levels, counts)[:n]


def gen_renewal(cfg: RenewalConfig, seed: int) -> TimeSeries:
    """Piecewise-constant renewal series; fresh renewal at t=0, last dwell censored at n."""
    rng = np.random.default_rng(seed)
    levels = np.asarray(cfg.levels, dtype=float)
    waits_parts, level_parts = [], []
    total = 0.0
    n_renewals = 0
    chunk = 256
    while total < cfg.n:
        u = rng.random(chunk)
        w = sample_pareto(cfg.theta, cfg.t_min, np.clip(u, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0)))
        if cfg.level_rule == "alternating":
            idx = (n_renewals + np.arange(chunk)) % 2
        else:
            idx = rng.integers(len(levels), size=chunk)
        n_renewals += chunk
        waits_parts.append(w)
        level_parts.append(levels[idx])
        total += float(w.sum())
        chunk = min(2 * chunk, 65_536)
    waits = np.concatenate(waits_parts)
    lvls = np.concatenate(level_parts)
    x = _piecewise_constant(cfg.n, waits, lvls)
    return TimeSeries(x, meta=_meta("renewal", cfg, seed))


def gen_telegraph(rate: float, levels, n: int, seed: int) -> TimeSeries:
    """Alternating two-state process with exponential(rate) waiting times."""
    cfg = TelegraphConfig(rate=rate, levels=tuple(levels), n=n)
    rng = np.random.default_rng(seed)
    lv = np.asarray(cfg.levels, dtype=float)
    waits_parts, total, chunk = [], 0.0, 256
    while total < n:
        w = rng.exponential(1.0 / rate, size=chunk)
        waits_parts.append(w)
        total += float(w.sum())
        chunk = min(2 * chunk, 65_536)
    waits = np.concatenate(waits_parts)
    lvls = lv[np.arange(len(waits)) % 2]
    x = _piecewise_constant(n, waits, lvls)
    return TimeSeries(x, meta=_meta("telegraph", cfg, seed))


def gen_ar1(cfg: Ar1Config, seed: int) -> TimeSeries:
    """x_{t+1} = phi x_t + eps_t, started from the stationary distribution."""
    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(cfg.n) * cfg.sigma
    x0 = rng.standard_normal() * cfg.sigma / np.sqrt(1.0 - cfg.phi**2)
    u = np.concatenate([[x0], eps[1:]])
    x = lfilter([1.0], [1.0, -cfg.phi], u)
    return TimeSeries(x, meta=_meta("ar1", cfg, seed))


def gen_trend_noise(cfg: TrendNoiseConfig, seed: int) -> TimeSeries:
    rng = np.random.default_rng(seed)
    t = np.arange(1, cfg.n + 1, dtype=float)
    x = rng.standard_normal(cfg.n) * cfg.sigma + cfg.c * (cfg.m + t) ** (-cfg.gamma)
    return TimeSeries(x, meta=_meta("trend_noise", cfg, seed))


def _lorenz_rhs(s: np.ndarray, sigma_l: float, rho: float, beta: float) -> np.ndarray:
    x, y, z = s
    return np.array([sigma_l * (y - x), x * (rho - z) - y, x * y - beta * z])


def gen_lorenz(cfg: LorenzConfig) -> TimeSeries:
    """Fixed-step RK4 integration; returns the x-component after a transient."""
    dt = cfg.dt_integrate
    s = np.array(cfg.initial_state, dtype=float)
    out = np.empty(cfg.n)
    j = 0
    total = cfg.transient_steps + cfg.n * cfg.sample_stride
    for i in range(total):
        k1 = _lorenz_rhs(s, cfg.sigma_l, cfg.rho, cfg.beta)
        k2 = _lorenz_rhs(s + 0.5 * dt * k1, cfg.sigma_l, cfg.rho, cfg.beta)
        k3 = _lorenz_rhs(s + 0.5 * dt * k2, cfg.sigma_l, cfg.rho, cfg.beta)
        k4 = _lorenz_rhs(s + dt * k3, cfg.sigma_l, cfg.rho, cfg.beta)
        s = s + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if i >= cfg.transient_steps and (i - cfg.transient_steps) % cfg.sample_stride == 0:
            if not np.all(np.isfinite(s)):
                raise RuntimeError(f"Lorenz integration diverged at step {i}")
            out[j] = s[0]
            j += 1
            if j == cfg.n:
                break
    if not np.all(np.isfinite(s)):
        raise RuntimeError("Lorenz integration diverged")
    return TimeSeries(out, dt=dt * cfg.sample_stride, meta=_meta("lorenz", cfg, None))


_DISPATCH = {
    "fgn": (FgnConfig, gen_fgn),
    "fbm": (FbmConfig, gen_fbm),
    "renewal": (RenewalConfig, gen_renewal),
    "ar1": (Ar1Config, gen_ar1),
    "trend_noise": (TrendNoiseConfig, gen_trend_noise),
}


def generate(cfg, seed: int = 0) -> TimeSeries:
    """Dispatch on cfg.kind; the single entry point used by ensemble/service/CLI."""
    if isinstance(cfg, LorenzConfig):
        return gen_lorenz(cfg)
    if isinstance(cfg, TelegraphConfig):
        return gen_telegraph(cfg.rate, cfg.levels, cfg.n, seed)
    fn = _DISPATCH[cfg.kind][1]
    return fn(cfg, seed)


def config_from_dict(d: dict):
    """Rebuild a generator config from its serialized form (kind-discriminated)."""
    kinds = dict(_DISPATCH)
    kinds["telegraph"] = (TelegraphConfig, None)
    kinds["lorenz"] = (LorenzConfig, None)
    kind = d.get("kind")
    if kind not in kinds:
        raise ValueError(f"unknown generator kind: {kind!r}")
    return kinds[kind][0].model_validate(d)


def regenerate(meta: dict) -> TimeSeries:
    """Reproduce a series from its provenance record, bit-for-bit."""
    cfg = config_from_dict(meta["config"])
    return generate(cfg, meta.get("seed"))
