"""Thin command-line client for the simulation service.

By default every command runs the service in-process (ASGI transport,
no socket); --server points it at a remote instance instead.  Flags
override values from an optional JSON config file (--config accepts a
previously emitted meta.json as well), and the merged, validated config
is what lands in the output meta.json, so any artifact can be
regenerated bit-exactly from its meta file.

Exit codes: 0 on success, 2 on configuration errors.
"""

from __future__ import annotations

import asyncio
import json
import sys
from pathlib import Path

import click
import httpx
import pydantic

from . import __version__
from .formats import render_meta
from .schemas import (
    EvolveConfig,
    ImageScoreConfig,
    LatticeRunConfig,
    SweepConfig,
)

_SERVER_OPTION = click.option(
    "--server",
    default=None,
    metavar="URL",
    help="Base URL of a running service; default executes in-process.",
)
_CONFIG_OPTION = click.option(
    "--config",
    "config_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    default=None,
    help="JSON config file; explicit flags override its values.",
)


def _load_config_file(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"config file {path} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise click.UsageError(f"config file {path} must hold a JSON object")
    # accept a previously written meta.json verbatim
    if "config" in data and "command" in data:
        data = data["config"]
    return data


def _merge(ctx: click.Context, file_cfg: dict, flags: dict) -> dict:
    """Defaults < config file < explicitly passed flags."""
    merged = dict(flags)
    merged.update(file_cfg)
    for name, value in flags.items():
        if ctx.get_parameter_source(name) is click.core.ParameterSource.COMMANDLINE:
            merged[name] = value
    return merged


def _validate(model, payload: dict):
    try:
        return model.model_validate(payload)
    except pydantic.ValidationError as exc:
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"]) or "config"
            click.echo(f"config error: {loc}: {err['msg']}", err=True)
        sys.exit(2)


def _post(server: str | None, path: str, payload: dict) -> dict:
    async def go():
        if server is None:
            from .service.app import app

            transport = httpx.ASGITransport(app=app)
            base_url = "http://donation-ca.internal"
        else:
            transport = None
            base_url = server
        async with httpx.AsyncClient(
            transport=transport, base_url=base_url, timeout=None
        ) as client:
            return await client.post(path, json=payload)

    try:
        response = asyncio.run(go())
    except httpx.HTTPError as exc:
        click.echo(f"service request failed: {exc}", err=True)
        sys.exit(1)
    if response.status_code == 422:
        click.echo("config rejected by service:", err=True)
        click.echo(response.text, err=True)
        sys.exit(2)
    if response.status_code != 200:
        click.echo(f"service error {response.status_code}: {response.text}", err=True)
        sys.exit(1)
    return response.json()


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        click.echo(f"cannot write {path}: {exc}", err=True)
        sys.exit(2)
    click.echo(f"wrote {path}")


def _read_states_file(path: Path) -> list[int]:
    try:
        text = path.read_text()
    except OSError as exc:
        raise click.UsageError(f"cannot read init file {path}: {exc}")
    states = [int(c) for c in text if c in "01"]
    if not states:
        raise click.UsageError(f"init file {path} holds no 0/1 states")
    return states


@click.group()
@click.version_option(version=__version__, prog_name="donation-ca")
def main():
    """Donation-game simulations on a 1-D binary cellular automaton."""


@main.command("run")
@click.option("--rule", default=None, help="Strategy label, e.g. RBA:both or IGB:left:h.")
@click.option("--raw-rule", type=int, default=None, help="Raw Wolfram rule 0..255 (pattern mode).")
@click.option("--n", default=100, show_default=True, help="Lattice size.")
@click.option("--steps", default=300, show_default=True, help="Iterations to run.")
@click.option("--init", default="random", show_default=True,
              type=click.Choice(["random", "single", "checker", "file"]))
@click.option("--init-file", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              default=None, help="0/1 text file for --init file.")
@click.option("--swap", default=0, show_default=True, help="Random pair swaps per iteration.")
@click.option("--directed", is_flag=True, help="Shift even positions +2 each iteration.")
@click.option("--er", default=0.0, show_default=True, help="Perception noise probability.")
@click.option("--ea", default=0.0, show_default=True, help="Action noise probability.")
@click.option("--fatigue", default=0, show_default=True, help="Fatigue limit (0 disables).")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default="run", show_default=True, help="Output file prefix.")
@_SERVER_OPTION
@_CONFIG_OPTION
@click.pass_context
def cmd_run(ctx, rule, raw_rule, n, steps, init, init_file, swap, directed, er, ea,
            fatigue, seed, out, server, config_file):
    """Run one simulation; write <out>.pbm, <out>.metrics.csv, <out>.meta.json."""
    flags = {
        "rule": rule, "raw_rule": raw_rule, "n": n, "steps": steps, "init": init,
        "swap": swap, "directed": directed, "er": er, "ea": ea,
        "fatigue": fatigue, "seed": seed,
    }
    payload = _merge(ctx, _load_config_file(config_file), flags)
    if payload.get("init") == "file":
        if init_file is None:
            raise click.UsageError("--init file requires --init-file PATH")
        payload["init"] = "explicit"
        payload["states"] = _read_states_file(init_file)
    if payload.get("rule") is not None and payload.get("raw_rule") is not None:
        # an explicit flag beats the other source's leftover value
        if ctx.get_parameter_source("raw_rule") is click.core.ParameterSource.COMMANDLINE:
            payload["rule"] = None
        else:
            payload["raw_rule"] = None
    cfg = _validate(LatticeRunConfig, payload)
    result = _post(server, "/run", cfg.model_dump(mode="json"))
    click.echo(f"rule {cfg.rule or cfg.raw_rule} -> Wolfram {result['meta']['rule_number']}")
    prefix = Path(out)
    _write(Path(str(prefix) + ".pbm"), result["pbm"])
    _write(Path(str(prefix) + ".metrics.csv"), result["metrics_csv"])
    _write(Path(str(prefix) + ".meta.json"), render_meta(result["meta"]))


@main.command("sweep")
@click.option("--rules", default=None,
              help="Comma-separated strategy labels; default is all 12 curated rules.")
@click.option("--axis", type=click.Choice(["swap", "er", "ea"]), default="swap",
              show_default=True)
@click.option("--values", default=None,
              help="Comma-separated axis values, e.g. 0,5,10,20.")
@click.option("--n", default=100, show_default=True)
@click.option("--steps", default=300, show_default=True)
@click.option("--init", default="random", show_default=True,
              type=click.Choice(["random", "single", "checker"]))
@click.option("--swap", default=0, show_default=True, help="Base swap level (non-swept axes).")
@click.option("--directed", is_flag=True)
@click.option("--er", default=0.0, show_default=True)
@click.option("--ea", default=0.0, show_default=True)
@click.option("--fatigue", default=0, show_default=True)
@click.option("--replicates", default=30, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default="sweep", show_default=True)
@_SERVER_OPTION
@_CONFIG_OPTION
@click.pass_context
def cmd_sweep(ctx, rules, axis, values, n, steps, init, swap, directed, er, ea,
              fatigue, replicates, seed, out, server, config_file):
    """Sweep a mobility or noise axis; write <out>.csv and <out>.meta.json."""
    flags = {
        "axis": axis, "n": n, "steps": steps, "init": init, "swap": swap,
        "directed": directed, "er": er, "ea": ea, "fatigue": fatigue,
        "replicates": replicates, "seed": seed,
    }
    payload = _merge(ctx, _load_config_file(config_file), flags)
    if rules is not None:
        payload["rules"] = [r.strip() for r in rules.split(",") if r.strip()]
    if values is not None:
        try:
            payload["values"] = [float(v) for v in values.split(",") if v.strip()]
        except ValueError:
            raise click.UsageError(f"cannot parse --values {values!r}")
    if "values" not in payload:
        raise click.UsageError("sweep needs --values (or a config file with values)")
    cfg = _validate(SweepConfig, payload)
    result = _post(server, "/sweep", cfg.model_dump(mode="json"))
    prefix = Path(out)
    _write(Path(str(prefix) + ".csv"), result["csv"])
    _write(Path(str(prefix) + ".meta.json"), render_meta(result["meta"]))


@main.command("evolve")
@click.option("--population", "--n", "population", default=100, show_default=True)
@click.option("--generations", default=100, show_default=True)
@click.option("--gen-iters", default=300, show_default=True,
              help="Lattice iterations per generation.")
@click.option("--pm", default=0.001, show_default=True, help="Mutation probability.")
@click.option("--fatigue", default=0, show_default=True)
@click.option("--swap", default=0, show_default=True)
@click.option("--directed", is_flag=True)
@click.option("--er", default=0.0, show_default=True)
@click.option("--ea", default=0.0, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--bitmap", is_flag=True, help="Also write the stacked site bitmap.")
@click.option("--out", default="evolve", show_default=True)
@_SERVER_OPTION
@_CONFIG_OPTION
@click.pass_context
def cmd_evolve(ctx, population, generations, gen_iters, pm, fatigue, swap, directed,
               er, ea, seed, bitmap, out, server, config_file):
    """Evolve strategies; write abundance CSV (plus optional bitmap)."""
    flags = {
        "population": population, "generations": generations, "gen_iters": gen_iters,
        "pm": pm, "fatigue": fatigue, "swap": swap, "directed": directed,
        "er": er, "ea": ea, "seed": seed, "bitmap": bitmap,
    }
    payload = _merge(ctx, _load_config_file(config_file), flags)
    cfg = _validate(EvolveConfig, payload)
    result = _post(server, "/evolve", cfg.model_dump(mode="json"))
    prefix = Path(out)
    _write(Path(str(prefix) + ".csv"), result["csv"])
    if result.get("pbm"):
        _write(Path(str(prefix) + ".pbm"), result["pbm"])
    _write(Path(str(prefix) + ".meta.json"), render_meta(result["meta"]))


@main.command("imagescore")
@click.option("--population", default=100, show_default=True)
@click.option("--rounds", default=5000, show_default=True)
@click.option("--benefit", default=1.0, show_default=True)
@click.option("--cost", default=0.1, show_default=True)
@click.option("--pairings", default="local,random", show_default=True,
              help="Comma-separated pairing modes.")
@click.option("--noise", default="0,0.2", show_default=True,
              help="Comma-separated levels applied to both noise kinds.")
@click.option("--swaps", default="0,2", show_default=True,
              help="Comma-separated swap levels.")
@click.option("--replicates", default=20, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default="imagescore", show_default=True)
@_SERVER_OPTION
@_CONFIG_OPTION
@click.pass_context
def cmd_imagescore(ctx, population, rounds, benefit, cost, pairings, noise, swaps,
                   replicates, seed, out, server, config_file):
    """Compare local vs random pairing payoffs; write <out>.csv."""
    flags = {
        "population": population, "rounds": rounds, "benefit": benefit, "cost": cost,
        "replicates": replicates, "seed": seed,
    }
    payload = _merge(ctx, _load_config_file(config_file), flags)
    for name, raw, cast in (("pairings", pairings, str), ("noise", noise, float),
                            ("swaps", swaps, int)):
        if ctx.get_parameter_source(name) is click.core.ParameterSource.COMMANDLINE \
                or name not in payload:
            try:
                payload[name] = [cast(v.strip()) for v in raw.split(",") if v.strip()]
            except ValueError:
                raise click.UsageError(f"cannot parse --{name} {raw!r}")
    cfg = _validate(ImageScoreConfig, payload)
    result = _post(server, "/imagescore", cfg.model_dump(mode="json"))
    prefix = Path(out)
    _write(Path(str(prefix) + ".csv"), result["csv"])
    _write(Path(str(prefix) + ".meta.json"), render_meta(result["meta"]))


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def cmd_serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("donation_ca.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
