"""`bench` command-line interface.

A thin client over the service API: commands assemble requests, send them
to an in-process app (or a remote one via --server) and print the result.

Exit codes: 0 success; 1 a verification failed or a layer errored;
2 configuration or IO problems.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .bench import ConfigError, load_config_file
from .client import ServiceClient, ServiceError
from .tensor_io import FormatError

EXIT_VERIFICATION_FAILED = 1
EXIT_CONFIG_ERROR = 2


@click.group()
def main():
    """Benchmark and verify stride-2 transpose-convolution engines."""


def _run_options(engine, repeats, seed, threads, verify, input_dir=None) -> dict:
    options = {"engine": engine, "repeats": repeats, "seed": seed,
               "threads": threads, "verify": verify}
    if input_dir is not None:
        options["input_dir"] = str(input_dir)
    return options


_shared_run_options = [
    click.option("--server", default=None, metavar="URL",
                 help="Remote service URL; default is an in-process service."),
    click.option("--engine", type=click.Choice(["ref", "seg", "both"]), default="both",
                 show_default=True, help="Engines to time."),
    click.option("--repeats", type=click.IntRange(min=1), default=None,
                 help="Override per-config timing repeats."),
    click.option("--seed", type=int, default=0, show_default=True),
    click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True),
    click.option("--verify/--no-verify", default=True, show_default=True,
                 help="Check engine outputs against each other."),
    click.option("--format", "fmt", type=click.Choice(["json", "markdown", "csv"]),
                 default="json", show_default=True),
    click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
                 help="Write the report here instead of stdout."),
]


def _with_options(options):
    def wrap(func):
        for option in reversed(options):
            func = option(func)
        return func
    return wrap


def _emit_and_exit(client: ServiceClient, report: dict, fmt: str, out: Path | None):
    text = json.dumps(report, indent=2) if fmt == "json" else client.render(report, fmt)
    if out is not None:
        out.write_text(text + ("\n" if not text.endswith("\n") else ""))
    else:
        click.echo(text)
    failures = []
    for rec in report["layers"]:
        equiv = rec.get("equivalence") or {}
        if rec.get("error") is not None:
            failures.append(f"{rec['name']}: {rec['error']}")
        elif equiv.get("checked") and not equiv.get("passed"):
            failures.append(f"{rec['name']}: equivalence check failed")
    if failures:
        for line in failures:
            click.echo(f"FAILED {line}", err=True)
        sys.exit(EXIT_VERIFICATION_FAILED)


def _fail_config(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_CONFIG_ERROR)


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=False, dir_okay=False, path_type=Path),
              help="JSON list of layer records.")
@click.option("--input-dir", type=click.Path(file_okay=False, path_type=Path),
              default=None, help="Directory of <name>.sct/<name>.ppm input tensors.")
@_with_options(_shared_run_options)
def run(config_path, input_dir, server, engine, repeats, seed, threads, verify, fmt, out):
    """Benchmark the layer configs in a config file."""
    try:
        configs = load_config_file(config_path)
    except ConfigError as exc:
        _fail_config(str(exc))
    payload = [vars(cfg) for cfg in configs]
    options = _run_options(engine, repeats, seed, threads, verify, input_dir)
    try:
        with ServiceClient(server) as client:
            report = client.run(payload, options)
            _emit_and_exit(client, report, fmt, out)
    except (ServiceError, OSError) as exc:
        _fail_config(str(exc))


@main.command("gan-suite")
@_with_options(_shared_run_options)
def gan_suite(server, engine, repeats, seed, threads, verify, fmt, out):
    """Benchmark the built-in GAN generator layer suite."""
    options = _run_options(engine, repeats, seed, threads, verify)
    try:
        with ServiceClient(server) as client:
            report = client.run_gan_suite(options)
            _emit_and_exit(client, report, fmt, out)
    except (ServiceError, OSError) as exc:
        _fail_config(str(exc))


@main.command()
@click.option("--n", "kernel_n", type=click.IntRange(min=2), required=True,
              help="Kernel side length.")
@click.option("--size", type=click.IntRange(min=1), required=True,
              help="Input side length (square input).")
@click.option("--pad", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--c-in", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--c-out", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--server", default=None, metavar="URL")
def verify(kernel_n, size, pad, c_in, c_out, seed, server):
    """Check the segregated engine against the reference on one case."""
    try:
        with ServiceClient(server) as client:
            result = client.verify(kernel_n=kernel_n, input_h=size, input_w=size,
                                   pad=pad, c_in=c_in, c_out=c_out, seed=seed)
    except (ServiceError, OSError) as exc:
        _fail_config(str(exc))
    click.echo(f"case: input {size}x{size}x{c_in}, kernel {kernel_n}x{kernel_n}, "
               f"pad {pad}, channels {c_in}->{c_out}")
    click.echo(f"output: {result['out_h']}x{result['out_w']}")
    click.echo(f"max_abs_diff: {result['max_abs_diff']:.3e}  "
               f"max_rel_diff: {result['max_rel_diff']:.3e}")
    click.echo(f"mults: reference={result['mults_reference']} "
               f"segregated={result['mults_segregated']} "
               f"(ideal ratio {result['ideal_ratio']:.3f})")
    click.echo("PASS" if result["passed"] else "FAIL")
    if not result["passed"]:
        sys.exit(EXIT_VERIFICATION_FAILED)


@main.command()
@click.argument("ppm", type=click.Path(dir_okay=False, path_type=Path))
@click.argument("sct", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--server", default=None, metavar="URL")
def convert(ppm, sct, server):
    """Convert a binary PPM image to an SCT1 raw tensor file."""
    try:
        raw = ppm.read_bytes()
    except OSError as exc:
        _fail_config(str(exc))
    try:
        with ServiceClient(server) as client:
            blob, info = client.convert_ppm(raw)
        sct.write_bytes(blob)
    except (ServiceError, FormatError, OSError) as exc:
        _fail_config(str(exc))
    click.echo(f"wrote {sct} ({info['channels']}x{info['height']}x{info['width']})")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the benchmark service."""
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
