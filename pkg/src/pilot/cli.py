"""Command-line entry points: serve, repl, skills, bench."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import PilotConfig
from .errors import CorruptStore, CorruptTable
from .orchestrator import Orchestrator, TurnResult


def _load_config(path: str | None) -> PilotConfig:
    return PilotConfig.load(path) if path else PilotConfig()


def _build(config: PilotConfig) -> Orchestrator:
    try:
        return Orchestrator(config).start()
    except (CorruptStore, CorruptTable) as exc:
        click.echo(f"startup aborted: {exc}", err=True)
        sys.exit(2)


@click.group()
def main() -> None:
    """Multi-agent tool orchestrator for a simulated social robot."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(config_path: str | None, host: str) -> None:
    """Start the console API (with the simulated robot mounted under /api)."""
    import uvicorn

    from .api import create_console_app

    config = _load_config(config_path)
    orchestrator = _build(config)
    app = create_console_app(orchestrator)
    ready = orchestrator.ready()
    click.echo(f"ready: {json.dumps(ready['subsystems'])}")
    try:
        uvicorn.run(app, host=host, port=config.api_port, log_level="warning")
    finally:
        orchestrator.shutdown()


def _print_turn(result: TurnResult) -> None:
    if result.error:
        click.echo(f"  ! {result.error}")
        return
    assert result.route is not None
    click.echo(f"  route: {result.route.target.value}")
    if result.script is not None:
        marker = {"fast": "[fast path]", "slow": "[slow path]", "control": "[control]"}.get(
            result.path or "", ""
        )
        if marker:
            click.echo(f"  {marker}")
        for utterance in result.script.utterances:
            click.echo(f"  <{utterance.emotion.value} x{utterance.rate:.2f}> {utterance.text}")
    if result.commands is not None:
        for outcome in result.commands:
            line = outcome.command.to_dict()
            status = "ok" if outcome.outcome.value == "ok" else f"error: {outcome.detail}"
            click.echo(f"  {line['command']} {line} -> {status}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--session", default="repl", show_default=True)
def repl(config_path: str | None, session: str) -> None:
    """Interactive loop: type instructions; :state / :table / :memory / :quit."""
    config = _load_config(config_path)
    orchestrator = _build(config)
    click.echo("pilot repl ready (Ctrl-D or :quit to exit)")
    try:
        while True:
            try:
                line = input("> ").strip()
            except EOFError:
                click.echo("")
                break
            if not line:
                continue
            if line in (":quit", ":q"):
                break
            if line == ":state":
                click.echo(json.dumps(orchestrator.tsm_snapshot(session), indent=2))
                continue
            if line == ":table":
                click.echo(json.dumps(orchestrator.process_table_snapshot(), indent=2))
                continue
            if line == ":memory":
                click.echo(json.dumps(orchestrator.memory_snapshot(), indent=2))
                continue
            try:
                result = orchestrator.submit(session, line)
            except ValueError as exc:
                click.echo(f"  ! {exc}")
                continue
            _print_turn(result)
    finally:
        orchestrator.shutdown()  # flushes supervised workers; persistence is per-commit


@main.group()
def skills() -> None:
    """Skill inventory helpers."""


@skills.command("list")
@click.option("--dir", "directory", type=click.Path(), required=True)
def skills_list(directory: str) -> None:
    """List scanned skills and any manifest warnings."""
    from .pia import scan_skills

    inventory, warnings = scan_skills(directory)
    for skill in inventory:
        click.echo(f"{skill.name}: {skill.description}")
    for warning in warnings:
        click.echo(f"warning: {warning.path}: {warning.reason}", err=True)
    click.echo(f"{len(inventory)} skill(s), {len(warnings)} warning(s)")


@main.command()
@click.argument("suite", type=click.Choice(["route", "sensorbind", "taskparser", "fastthinking", "toolext"]))
@click.option("--runs", default=5, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None)
@click.option("--latency/--no-latency", default=False, help="Add wall-clock latency conditions (fastthinking only).")
def bench(suite: str, runs: int, seed: int, out_path: str | None, latency: bool) -> None:
    """Generate a suite, evaluate it against the scripted provider, report mean±std."""
    from .bench import format_report, run_suite
    from .bench.report import report_emit

    report = run_suite(suite, runs=runs, seed=seed, include_latency=latency)
    click.echo(format_report(report))
    if out_path:
        files = report_emit(report, Path(out_path))
        for file in files:
            click.echo(f"wrote {file}")


if __name__ == "__main__":
    main()
