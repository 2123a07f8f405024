"""Command-line entry points: batch optimization, episodes, and the service.

    ecodispatch optimize <config> --out <dir> [--seed N]
    ecodispatch episode  <config> --out <dir> [--seed N]
    ecodispatch serve    [--bind host:port] [--runs-dir <dir>]
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .exports import episode_csv
from .loop import run_episode
from .runconfig import episode_horizon, ingest_forecasts, load_run_config
from .runner import StageError, execute_run, write_run_outputs


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ecodispatch",
        description="Multi-objective economic dispatch testbed",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_opt = sub.add_parser("optimize", help="run one optimization and export CSVs")
    p_opt.add_argument("config", help="run configuration file (YAML)")
    p_opt.add_argument("--out", required=True, help="output directory")
    p_opt.add_argument("--seed", type=int, default=None,
                       help="override the configured RNG seed")

    p_ep = sub.add_parser(
        "episode",
        help="run a batch episode (always closed-loop; human-in-the-loop "
             "runs live in the service)")
    p_ep.add_argument("config", help="run configuration file (YAML)")
    p_ep.add_argument("--out", required=True, help="output directory")
    p_ep.add_argument("--seed", type=int, default=None,
                      help="override the configured RNG seed")

    p_srv = sub.add_parser("serve", help="start the HTTP/JSON service")
    p_srv.add_argument("--bind", default="127.0.0.1:8000", help="host:port")
    p_srv.add_argument("--runs-dir", default="runs",
                       help="directory for persisted run records")

    args = parser.parse_args(argv)
    if args.command == "optimize":
        return cli_optimize(args.config, args.out, seed=args.seed)
    if args.command == "episode":
        return cli_episode(args.config, args.out, seed=args.seed)
    return cli_serve(args.bind, args.runs_dir)


def cli_optimize(config_path: str, out_dir: str, seed: int | None = None) -> int:
    """Optimize once and write front.csv, generations.csv, comparison.csv."""
    try:
        config = load_run_config(config_path)
    except (OSError, ValueError) as exc:
        print(f"error at parse: {exc}", file=sys.stderr)
        return 1
    try:
        result = execute_run(config, seed=seed)
        write_run_outputs(result, out_dir)
    except StageError as exc:
        print(f"error at {exc.stage}: {exc.cause}", file=sys.stderr)
        return 1
    print(f"archive size {len(result.archive)}, "
          f"{result.problem.evaluations} evaluations, outputs in {out_dir}")
    return 0


def cli_episode(config_path: str, out_dir: str, seed: int | None = None) -> int:
    """Run a closed-loop episode and export its per-instant log."""
    try:
        import dataclasses

        from .loop import CLOSED_LOOP

        config = load_run_config(config_path)
        if config.loop is None:
            raise ValueError("config has no loop section")
        loop = dataclasses.replace(config.loop, mode=CLOSED_LOOP)
        if seed is not None:
            loop = dataclasses.replace(
                loop, moga=dataclasses.replace(loop.moga, rng_seed=seed))
        config = dataclasses.replace(config, loop=loop)
    except (OSError, ValueError) as exc:
        print(f"error at parse: {exc}", file=sys.stderr)
        return 1
    try:
        forecasts = ingest_forecasts(config, horizon=episode_horizon(config))
        log = run_episode(config.loop, forecasts, config.params, config.ratings)
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "episode.csv").write_bytes(episode_csv(log).encode("utf-8"))
    except (OSError, ValueError) as exc:
        print(f"error at assemble: {exc}", file=sys.stderr)
        return 1
    fallbacks = sum(1 for r in log.records if r.fallback)
    print(f"{len(log.records)} cycles, {fallbacks} fallbacks, "
          f"cost {log.total_cost:.2f} EUR, co2 {log.total_co2:.2f} kg, "
          f"log in {out_dir}")
    return 0


def cli_serve(bind: str, runs_dir: str) -> int:
    """Serve the operator API until interrupted."""
    import uvicorn

    from .service import create_app

    host, _, port = bind.partition(":")
    app = create_app(runs_dir=Path(runs_dir))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8000))
    return 0


if __name__ == "__main__":
    sys.exit(main())
