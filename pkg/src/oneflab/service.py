"""FastAPI service exposing generation, analysis and experiment runs.

The handler functions are plain callables over pydantic models; the HTTP
routes and the CLI are both thin clients of the same handlers.
"""
from __future__ import annotations

from typing import Optional

from fastapi import FastAPI
from pydantic import BaseModel, ConfigDict

from . import diagnostics as diag
from . import generators as gen
from .config import DiagnosticsBlock, ExperimentConfig, serialize_config
from .experiments import RunSummary, list_experiments, run_experiment
from .generators import GeneratorConfig


class GenerateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    generator: GeneratorConfig
    seed: int = 0


class GenerateResponse(BaseModel):
    values: list[float]
    dt: float
    meta: dict


class AnalyzeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    # either an explicit series or a generator+seed to synthesize one
    series: Optional[list[float]] = None
    generator: Optional[GeneratorConfig] = None
    seed: int = 0
    diagnostics: DiagnosticsBlock = DiagnosticsBlock()


class FitModel(BaseModel):
    exponent: float
    stderr: float
    lo: float
    hi: float
    n_points: int
    r_squared: float


class AnalyzeResponse(BaseModel):
    fits: dict[str, FitModel]
    acf: Optional[list[float]] = None
    periodogram: Optional[dict] = None


class ExperimentRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    config: ExperimentConfig
    out_dir: Optional[str] = None
    quiet: bool = True


class ExperimentResponse(BaseModel):
    experiment: str
    config_hash: str
    config: str
    passed: bool
    checks: list[dict]
    fits: dict
    wall_time_s: float
    artifacts: list[str]


def handle_generate(req: GenerateRequest) -> GenerateResponse:
    ts = gen.generate(req.generator, req.seed)
    return GenerateResponse(values=ts.values.tolist(), dt=ts.dt, meta=ts.meta)


def handle_analyze(req: AnalyzeRequest) -> AnalyzeResponse:
    if (req.series is None) == (req.generator is None):
        raise ValueError("provide exactly one of 'series' or 'generator'")
    values = req.series if req.series is not None else gen.generate(req.generator, req.seed).values
    d = req.diagnostics
    fits: dict[str, FitModel] = {}
    acf = None
    pgram = None
    for est in d.estimators:
        if est == "rs":
            fits["rs"] = FitModel(**diag.rescaled_range(values, d.rs_windows).__dict__)
        elif est == "dfa":
            fits["dfa"] = FitModel(**diag.dfa(values, d.dfa_windows, d.dfa_order).__dict__)
        elif est == "gph":
            fits["gph"] = FitModel(**diag.gph_estimate(diag.periodogram(values), d.gph_bandwidth).__dict__)
        elif est == "acf":
            acf = diag.empirical_acf(values, d.acf_max_lag).tolist()
        elif est == "periodogram":
            p = diag.periodogram(values)
            pgram = {"freqs": p.freqs.tolist(), "power": p.power.tolist(), "dc_power": p.dc_power}
    return AnalyzeResponse(fits=fits, acf=acf, periodogram=pgram)


def handle_experiment(req: ExperimentRequest) -> ExperimentResponse:
    summary: RunSummary = run_experiment(req.config, out_dir=req.out_dir, quiet=req.quiet)
    d = summary.as_dict()
    return ExperimentResponse(
        experiment=d["experiment"],
        config_hash=d["config_hash"],
        config=serialize_config(req.config),
        passed=d["passed"],
        checks=d["checks"],
        fits=d["fits"],
        wall_time_s=d["wall_time_s"],
        artifacts=d["artifacts"],
    )


app = FastAPI(title="oneflab", description="stochastic 1/f time-series laboratory")


@app.exception_handler(ValueError)
async def _value_error(request, exc):
    from fastapi.responses import JSONResponse

    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(RuntimeError)
async def _runtime_error(request, exc):
    from fastapi.responses import JSONResponse

    return JSONResponse(status_code=500, content={"detail": str(exc)})


@app.get("/health")
def health():
    return {"status": "ok"}


@app.get("/experiments")
def experiments():
    return list_experiments()


@app.post("/generate", response_model=GenerateResponse)
def generate_route(req: GenerateRequest):
    return handle_generate(req)


@app.post("/analyze", response_model=AnalyzeResponse)
def analyze_route(req: AnalyzeRequest):
    return handle_analyze(req)


@app.post("/experiments/run", response_model=ExperimentResponse)
def experiment_route(req: ExperimentRequest):
    return handle_experiment(req)
