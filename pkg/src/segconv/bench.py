"""Benchmark harness: layer configs, the built-in GAN generator suite,
timed engine runs with equivalence verification, and report emission.

Reports are deterministic for a fixed (configs, seed, threads) apart from
the wall-time fields. Timing is the median of `repeats` runs after one
discarded warm-up run, and each timed section brackets exactly one engine
invocation.
"""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import (
    SAVINGS_UPSAMPLED_MINUS_INPUT,
    SAVINGS_UPSAMPLED_TOTAL,
    memory_savings_bytes,
    mult_count_reference,
    mult_count_segregated,
)
from .engines import (
    ENGINE_REFERENCE,
    ENGINE_SEGREGATED,
    TransposeConvSpec,
    compare_outputs,
    output_dims,
    prepare_layer,
)
from .synth import gen_kernel_bank, gen_synthetic, splitmix64
from .tensor_io import FormatError, load_ppm, load_raw_tensor

REPORT_FORMAT_VERSION = 1
FORMATS = ("json", "markdown", "csv")

VERIFY_REL_TOL = 1e-5
VERIFY_ABS_TOL = 1e-6

CONFIG_KEYS = ("name", "input_h", "input_w", "c_in", "kernel_n", "c_out", "pad", "repeats")
_REQUIRED_KEYS = ("name", "input_h", "input_w", "c_in", "kernel_n", "c_out")

CSV_COLUMNS = ("layer", "input_size", "kernel_size", "time_ref_s", "time_seg_s",
               "speedup", "mults_ref", "mults_seg", "memory_savings_bytes")


class ConfigError(ValueError):
    """A benchmark config file or record is unusable."""


@dataclass(frozen=True)
class LayerConfig:
    """One transpose-convolution layer to benchmark."""

    name: str
    input_h: int
    input_w: int
    c_in: int
    kernel_n: int
    c_out: int
    pad: int = 2
    repeats: int = 5

    def spec(self) -> TransposeConvSpec:
        return TransposeConvSpec(in_h=self.input_h, in_w=self.input_w,
                                 kernel_n=self.kernel_n, pad=self.pad,
                                 c_in=self.c_in, c_out=self.c_out)


@dataclass
class RunOptions:
    """Knobs for one benchmark run."""

    engine: str = "both"                # "ref" | "seg" | "both"
    repeats: int | None = None          # overrides per-config repeats when set
    seed: int = 0
    threads: int = 1
    verify: bool = True
    input_dir: str | None = None        # optional dir of <name>.sct / <name>.ppm inputs


@dataclass
class BenchReport:
    """Envelope for per-layer benchmark records plus the environment stamp."""

    environment: dict
    layers: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"format_version": REPORT_FORMAT_VERSION,
                "environment": self.environment,
                "layers": self.layers}

    @classmethod
    def from_dict(cls, data: dict) -> "BenchReport":
        if not isinstance(data, dict) or "layers" not in data or "environment" not in data:
            raise FormatError("report must be a dict with 'environment' and 'layers'")
        if data.get("format_version") != REPORT_FORMAT_VERSION:
            raise FormatError(f"unsupported report format_version "
                              f"{data.get('format_version')!r}")
        return cls(environment=dict(data["environment"]),
                   layers=[dict(rec) for rec in data["layers"]])

    def failures(self) -> list[str]:
        """Names of layers whose verification failed or that errored."""
        bad = []
        for rec in self.layers:
            equiv = rec.get("equivalence", {})
            if rec.get("error") is not None:
                bad.append(rec["name"])
            elif equiv.get("checked") and not equiv.get("passed"):
                bad.append(rec["name"])
        return bad


# Table-style generator chains from well-known GAN models. All layers use
# kernel 4, stride 2, padding 2 (the config that doubles the spatial size).
GAN_SUITE: tuple[LayerConfig, ...] = (
    LayerConfig("dcgan_l2", 4, 4, 1024, 4, 512),
    LayerConfig("dcgan_l3", 8, 8, 512, 4, 256),
    LayerConfig("dcgan_l4", 16, 16, 256, 4, 128),
    LayerConfig("dcgan_l5", 32, 32, 128, 4, 3),
    LayerConfig("gpgan_l2", 4, 4, 512, 4, 256),
    LayerConfig("gpgan_l3", 8, 8, 256, 4, 128),
    LayerConfig("gpgan_l4", 16, 16, 128, 4, 64),
    LayerConfig("gpgan_l5", 32, 32, 64, 4, 3),
    LayerConfig("ebgan_l2", 4, 4, 2048, 4, 1024),
    LayerConfig("ebgan_l3", 8, 8, 1024, 4, 512),
    LayerConfig("ebgan_l4", 16, 16, 512, 4, 256),
    LayerConfig("ebgan_l5", 32, 32, 256, 4, 128),
    LayerConfig("ebgan_l6", 64, 64, 128, 4, 64),
    LayerConfig("ebgan_l7", 128, 128, 64, 4, 64),
)


def load_config_file(path) -> list[LayerConfig]:
    """Read a JSON list of layer records with the documented keys."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise ConfigError("config file must hold a JSON list of layer records")
    configs = []
    for i, rec in enumerate(data):
        if not isinstance(rec, dict):
            raise ConfigError(f"config record {i} is not an object")
        unknown = set(rec) - set(CONFIG_KEYS)
        if unknown:
            raise ConfigError(f"config record {i} has unknown keys {sorted(unknown)}; "
                              f"allowed keys are {list(CONFIG_KEYS)}")
        missing = [key for key in _REQUIRED_KEYS if key not in rec]
        if missing:
            raise ConfigError(f"config record {i} is missing keys {missing}")
        try:
            configs.append(LayerConfig(**rec))
        except TypeError as exc:
            raise ConfigError(f"config record {i} is malformed: {exc}") from exc
    return configs


def run_benchmark(configs: list[LayerConfig], options: RunOptions | None = None) -> BenchReport:
    """Time the requested engines over each config and attach cost analysis.

    Per-config failures are recorded in the layer record, not raised.
    """
    options = options or RunOptions()
    engines = _engine_set(options.engine, options.verify)
    report = BenchReport(environment={
        "element_bits": 32,
        "threads": int(options.threads),
        "seed": int(options.seed),
        "engine": options.engine,
        "verify": bool(options.verify),
        "repeats_override": options.repeats,
    })
    for index, config in enumerate(configs):
        report.layers.append(_run_layer(index, config, options, engines))
    return report


def emit_report(report: BenchReport, fmt: str) -> str:
    """Render a report as schema-stable JSON, a markdown table, or flat CSV."""
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2)
    if fmt == "markdown":
        return _emit_markdown(report)
    if fmt == "csv":
        return _emit_csv(report)
    raise ValueError(f"unknown report format {fmt!r}, expected one of {FORMATS}")


def parse_report_csv(text: str) -> list[dict]:
    """Parse emit_report(..., "csv") output back into typed row dicts."""
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for raw in reader:
        rows.append({
            "layer": raw["layer"],
            "input_size": raw["input_size"],
            "kernel_size": raw["kernel_size"],
            "time_ref_s": _parse_float(raw["time_ref_s"]),
            "time_seg_s": _parse_float(raw["time_seg_s"]),
            "speedup": _parse_float(raw["speedup"]),
            "mults_ref": _parse_int(raw["mults_ref"]),
            "mults_seg": _parse_int(raw["mults_seg"]),
            "memory_savings_bytes": _parse_int(raw["memory_savings_bytes"]),
        })
    return rows


# ---------------------------------------------------------------------------

def _engine_set(engine: str, verify: bool) -> tuple[str, ...]:
    mapping = {
        "ref": (ENGINE_REFERENCE,),
        "seg": (ENGINE_SEGREGATED,),
        "both": (ENGINE_REFERENCE, ENGINE_SEGREGATED),
    }
    if engine not in mapping:
        raise ConfigError(f"unknown engine selection {engine!r}, "
                          f"expected one of {sorted(mapping)}")
    selected = mapping[engine]
    if verify:
        return (ENGINE_REFERENCE, ENGINE_SEGREGATED)
    return selected


def _layer_input(config: LayerConfig, options: RunOptions, input_seed: int) -> tuple[np.ndarray, str]:
    if options.input_dir:
        base = Path(options.input_dir)
        for suffix, loader in ((".sct", load_raw_tensor), (".ppm", load_ppm)):
            candidate = base / f"{config.name}{suffix}"
            if candidate.is_file():
                tensor = loader(candidate)
                wanted = (config.c_in, config.input_h, config.input_w)
                if tensor.shape != wanted:
                    raise ConfigError(f"input file {candidate} has shape {tensor.shape}, "
                                      f"config wants {wanted}")
                return tensor, f"file:{candidate.name}"
    tensor = gen_synthetic(config.c_in, config.input_h, config.input_w, input_seed)
    return tensor, "synthetic"


def _time_engine(x: np.ndarray, bank: np.ndarray, config: LayerConfig,
                 engine: str, repeats: int, threads: int) -> tuple[np.ndarray, float]:
    # Weight layout is a one-time step; only the forward pass is timed.
    prepared = prepare_layer(bank, config.pad, engine)
    out = prepared.forward(x, threads=threads)  # discarded warm-up run
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        out = prepared.forward(x, threads=threads)
        samples.append(time.perf_counter() - start)
    return out, statistics.median(samples)


def _run_layer(index: int, config: LayerConfig, options: RunOptions,
               engines: tuple[str, ...]) -> dict:
    record = {
        "name": config.name,
        "input_h": config.input_h, "input_w": config.input_w, "c_in": config.c_in,
        "kernel_n": config.kernel_n, "c_out": config.c_out, "pad": config.pad,
        "repeats": options.repeats if options.repeats is not None else config.repeats,
        "out_h": None, "out_w": None,
        "input_source": None,
        "time_reference_s": None, "time_segregated_s": None, "speedup": None,
        "mults_reference": None, "mults_segregated": None, "ideal_ratio": None,
        "memory_savings_upsampled_total_bytes": None,
        "memory_savings_upsampled_minus_input_bytes": None,
        "equivalence": {"checked": False, "shapes_match": None, "max_abs_diff": None,
                        "max_rel_diff": None, "rel_tol": VERIFY_REL_TOL,
                        "abs_tol": VERIFY_ABS_TOL, "passed": None},
        "error": None,
    }
    try:
        spec = config.spec()
        record["out_h"], record["out_w"] = output_dims(spec)
        record["mults_reference"] = mult_count_reference(spec)
        record["mults_segregated"] = mult_count_segregated(spec)
        record["ideal_ratio"] = record["mults_reference"] / record["mults_segregated"]
        record["memory_savings_upsampled_total_bytes"] = memory_savings_bytes(
            config.input_h, config.input_w, config.pad, config.c_in,
            SAVINGS_UPSAMPLED_TOTAL)
        record["memory_savings_upsampled_minus_input_bytes"] = memory_savings_bytes(
            config.input_h, config.input_w, config.pad, config.c_in,
            SAVINGS_UPSAMPLED_MINUS_INPUT)

        input_seed = splitmix64((options.seed & ((1 << 64) - 1)) + 2 * index)
        bank_seed = splitmix64(input_seed + 1)
        x, source = _layer_input(config, options, input_seed)
        record["input_source"] = source
        bank = gen_kernel_bank(config.c_in, config.c_out, config.kernel_n, bank_seed)

        outputs = {}
        for engine in engines:
            outputs[engine], seconds = _time_engine(
                x, bank, config, engine, record["repeats"], options.threads)
            key = ("time_reference_s" if engine == ENGINE_REFERENCE
                   else "time_segregated_s")
            record[key] = seconds
        if record["time_reference_s"] and record["time_segregated_s"]:
            record["speedup"] = record["time_reference_s"] / record["time_segregated_s"]
        if options.verify:
            cmp = compare_outputs(outputs[ENGINE_SEGREGATED], outputs[ENGINE_REFERENCE],
                                  VERIFY_REL_TOL, VERIFY_ABS_TOL)
            record["equivalence"] = {"checked": True, **cmp.to_dict()}
    except ValueError as exc:
        record["error"] = str(exc)
    return record


def _fmt_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_rows(report: BenchReport) -> list[list[str]]:
    rows = []
    for rec in report.layers:
        input_size = f"{rec['input_h']}x{rec['input_w']}x{rec['c_in']}"
        kernel_size = (f"{rec['kernel_n']}x{rec['kernel_n']}"
                       f"x{rec['c_in']}x{rec['c_out']}")
        rows.append([
            rec["name"], input_size, kernel_size,
            _fmt_cell(rec["time_reference_s"]), _fmt_cell(rec["time_segregated_s"]),
            _fmt_cell(rec["speedup"]), _fmt_cell(rec["mults_reference"]),
            _fmt_cell(rec["mults_segregated"]),
            _fmt_cell(rec["memory_savings_upsampled_total_bytes"]),
        ])
    return rows


def _emit_csv(report: BenchReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(_csv_rows(report))
    return buf.getvalue()


def _emit_markdown(report: BenchReport) -> str:
    env = report.environment
    lines = [
        f"threads: {env.get('threads')}, seed: {env.get('seed')}, "
        f"element bits: {env.get('element_bits')}",
        "",
        "| layer | input size | kernel size | time_ref_s | time_seg_s | speedup "
        "| mults_ref | mults_seg | memory savings (bytes) |",
        "|---|---|---|---|---|---|---|---|---|",
    ]
    for row in _csv_rows(report):
        cells = [cell if cell != "" else "-" for cell in row]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def _parse_float(cell: str) -> float | None:
    return None if cell == "" else float(cell)


def _parse_int(cell: str) -> int | None:
    return None if cell == "" else int(cell)
