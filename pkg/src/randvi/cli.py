"""Command line entry point: ``randvi run | audit | calibrate``."""
from __future__ import annotations

import sys

import click

from .harness import PRESETS, ConfigError, audit_directory, calibration_report, load_config, preset, run_experiment


def _echo_report(items: dict):
    for k, v in items.items():
        if isinstance(v, bool):
            v = "true" if v else "false"
        elif isinstance(v, float):
            v = format(v, ".6g")
        click.echo(f"{k} = {v}")


@click.group()
def main():
    """Randomized feasibility-step solvers for strongly monotone VIs."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="INI experiment file.")
@click.option("--preset", "preset_name", type=click.Choice(PRESETS), help="Built-in experiment.")
@click.option("--scale", type=click.Choice(["desk", "full"]), default="desk", show_default=True,
              help="Matrix-game size used by presets.")
@click.option("--trials", type=int, help="Override the number of trials.")
@click.option("--iters", type=int, help="Override the iteration budget T.")
@click.option("--seed", type=int, help="Override the base seed (trial i uses seed + i).")
@click.option("--out", type=click.Path(file_okay=False), help="Output directory.")
@click.option("--workers", type=int, default=1, show_default=True, help="Worker processes.")
@click.option("--record-every", type=int, help="Record every n-th iteration (the last one always).")
def run(config_path, preset_name, scale, trials, iters, seed, out, workers, record_every):
    """Run an experiment and write traces, aggregates and a summary."""
    if (config_path is None) == (preset_name is None):
        raise click.UsageError("give exactly one of --config or --preset")
    try:
        cfg = load_config(config_path) if config_path else preset(preset_name, scale)
        cfg = cfg.with_overrides(trials=trials, iterations=iters, base_seed=seed, output_dir=out,
                                 record_every=record_every)
    except ConfigError as exc:
        raise click.ClickException(str(exc))
    res = run_experiment(cfg, workers=max(1, workers))
    click.echo(f"wrote {len(res.files)} files to {res.output_dir}")
    _echo_report({k: v for k, v in res.summary.items() if ".audit." in k or k == "audits_passed"})
    sys.exit(0 if res.passed else 1)


@main.command()
@click.option("--trace-dir", required=True, type=click.Path(exists=True, file_okay=False))
def audit(trace_dir):
    """Re-audit the traces of a finished run."""
    report, ok = audit_directory(trace_dir)
    _echo_report(report)
    sys.exit(0 if ok else 1)


@main.command()
@click.option("--preset", "preset_name", required=True, type=click.Choice(PRESETS))
@click.option("--scale", type=click.Choice(["desk", "full"]), default="desk", show_default=True)
def calibrate(preset_name, scale):
    """Print the regularity constant, subgradient bound and q for each constrained agent."""
    _echo_report(calibration_report(preset(preset_name, scale)))


if __name__ == "__main__":
    main()
