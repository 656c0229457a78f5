"""Command-line front end; a thin client over the service handlers."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ExperimentConfig, parse_config
from .experiments import list_experiments
from .io import default_output_root, write_csv
from .service import (
    AnalyzeRequest,
    ExperimentRequest,
    GenerateRequest,
    handle_analyze,
    handle_experiment,
    handle_generate,
)


def _load_config(path: str) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def _with_seed(cfg: ExperimentConfig, seed) -> ExperimentConfig:
    return cfg if seed is None else cfg.model_copy(update={"base_seed": seed})


def _out_dir(args, cfg: ExperimentConfig) -> Path:
    if args.out:
        return Path(args.out)
    if cfg.output_dir:
        return Path(cfg.output_dir)
    return default_output_root() / cfg.experiment


def _cmd_list(args) -> int:
    for e in list_experiments():
        print(f"{e['name']:20s} {e['description']}")
    return 0


def _cmd_generate(args) -> int:
    cfg = _with_seed(_load_config(args.config), args.seed)
    if cfg.generator is None:
        print("error: config has no generator block", file=sys.stderr)
        return 2
    resp = handle_generate(GenerateRequest(generator=cfg.generator, seed=cfg.base_seed))
    out = _out_dir(args, cfg)
    path = out / "series.csv"
    write_csv(path, ("t", "value"), ((i * resp.dt, v) for i, v in enumerate(resp.values)))
    if not args.quiet:
        print(f"wrote {len(resp.values)} samples to {path}")
    return 0


def _cmd_analyze(args) -> int:
    cfg = _with_seed(_load_config(args.config), args.seed)
    if cfg.generator is None:
        print("error: config has no generator block", file=sys.stderr)
        return 2
    resp = handle_analyze(
        AnalyzeRequest(generator=cfg.generator, seed=cfg.base_seed, diagnostics=cfg.diagnostics)
    )
    out = _out_dir(args, cfg)
    rows = [
        (name, f.exponent, f.stderr, f.lo, f.hi, f.n_points, f.r_squared)
        for name, f in resp.fits.items()
    ]
    write_csv(out / "fits.csv", ("estimator", "exponent", "stderr", "lo", "hi", "n_points", "r_squared"), rows)
    if not args.quiet:
        for name, f in resp.fits.items():
            print(f"{name}: exponent={f.exponent:.4f} stderr={f.stderr:.4f} r2={f.r_squared:.4f}")
    return 0


def _cmd_experiment(args) -> int:
    if args.config:
        cfg = _load_config(args.config)
        if cfg.experiment != args.name:
            print(
                f"error: config is for experiment {cfg.experiment!r}, not {args.name!r}",
                file=sys.stderr,
            )
            return 2
    else:
        cfg = parse_config(f"experiment: {args.name}\n")
    cfg = _with_seed(cfg, args.seed)
    resp = handle_experiment(
        ExperimentRequest(config=cfg, out_dir=str(_out_dir(args, cfg)), quiet=args.quiet)
    )
    if not args.quiet:
        print(json.dumps({"passed": resp.passed, "config_hash": resp.config_hash}))
    return 0 if resp.passed else 1


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("oneflab.service:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oneflab", description="stochastic 1/f time-series laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="path to a YAML experiment config")
        p.add_argument("--seed", type=int, default=None, help="override base_seed")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--quiet", action="store_true")

    p = sub.add_parser("list-experiments", help="list named experiments")
    p.set_defaults(fn=_cmd_list)

    p = sub.add_parser("generate", help="generate a series and write series.csv")
    common(p)
    p.set_defaults(fn=_cmd_generate)

    p = sub.add_parser("analyze", help="run diagnostics on a generated series")
    common(p)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("experiment", help="run a named experiment")
    p.add_argument("name", help="experiment name (see list-experiments)")
    common(p)
    p.set_defaults(fn=_cmd_experiment)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=_cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) in ("generate", "analyze") and not args.config:
        print("error: --config is required", file=sys.stderr)
        return 2
    try:
        return args.fn(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
