"""FastAPI service wrapping the transpose-convolution engines.

Benchmark endpoints are serialized by a process-wide lock so a timing run
never shares the machine with another in-flight benchmark.
"""

from __future__ import annotations

import base64
import binascii
import threading
from importlib.metadata import PackageNotFoundError, version

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import bench
from ..analysis import mult_count_reference, mult_count_segregated
from ..engines import (
    ENGINE_REFERENCE,
    ENGINE_SEGREGATED,
    TransposeConvSpec,
    compare_outputs,
    layer_forward,
    output_dims,
)
from ..synth import gen_kernel_bank, gen_synthetic, splitmix64
from ..tensor_io import parse_ppm, tensor_to_sct_bytes
from . import schemas

_bench_lock = threading.Lock()


def _package_version() -> str:
    try:
        return version("segconv")
    except PackageNotFoundError:
        return "unknown"


def create_app() -> FastAPI:
    app = FastAPI(title="segconv", description="stride-2 transpose-convolution "
                  "benchmark and verification service")

    @app.exception_handler(ValueError)
    async def value_error_handler(_: Request, exc: ValueError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=_package_version())

    @app.get("/configs/gan-suite", response_model=list[schemas.LayerConfigIn])
    def gan_suite_configs():
        return [schemas.LayerConfigIn(**vars(cfg)) for cfg in bench.GAN_SUITE]

    @app.post("/bench/run", response_model=schemas.BenchReportOut)
    def bench_run(request: schemas.RunRequest):
        configs = [bench.LayerConfig(**cfg.model_dump()) for cfg in request.configs]
        return _run(configs, request.options)

    @app.post("/bench/gan-suite", response_model=schemas.BenchReportOut)
    def bench_gan_suite(request: schemas.SuiteRequest):
        return _run(list(bench.GAN_SUITE), request.options)

    @app.post("/verify", response_model=schemas.VerifyResponse)
    def verify(request: schemas.VerifyRequest):
        spec = TransposeConvSpec(in_h=request.input_h, in_w=request.input_w,
                                 kernel_n=request.kernel_n, pad=request.pad,
                                 c_in=request.c_in, c_out=request.c_out)
        out_h, out_w = output_dims(spec)
        x = gen_synthetic(request.c_in, request.input_h, request.input_w,
                          splitmix64(request.seed))
        bank = gen_kernel_bank(request.c_in, request.c_out, request.kernel_n,
                               splitmix64(request.seed + 1))
        ref = layer_forward(x, bank, request.pad, engine=ENGINE_REFERENCE)
        seg = layer_forward(x, bank, request.pad, engine=ENGINE_SEGREGATED)
        cmp = compare_outputs(seg, ref, bench.VERIFY_REL_TOL, bench.VERIFY_ABS_TOL)
        mults_ref = mult_count_reference(spec)
        mults_seg = mult_count_segregated(spec)
        return schemas.VerifyResponse(
            passed=cmp.passed, out_h=out_h, out_w=out_w,
            max_abs_diff=cmp.max_abs_diff, max_rel_diff=cmp.max_rel_diff,
            rel_tol=cmp.rel_tol, abs_tol=cmp.abs_tol,
            mults_reference=mults_ref, mults_segregated=mults_seg,
            ideal_ratio=mults_ref / mults_seg)

    @app.post("/convert/ppm-to-sct", response_model=schemas.ConvertResponse)
    def convert(request: schemas.ConvertRequest):
        try:
            raw = base64.b64decode(request.ppm_base64, validate=True)
        except (binascii.Error, ValueError) as exc:
            raise ValueError(f"ppm_base64 is not valid base64: {exc}") from exc
        tensor = parse_ppm(raw)
        blob = tensor_to_sct_bytes(tensor)
        return schemas.ConvertResponse(
            sct_base64=base64.b64encode(blob).decode("ascii"),
            channels=tensor.shape[0], height=tensor.shape[1], width=tensor.shape[2])

    @app.post("/report/render", response_model=schemas.RenderResponse)
    def render(request: schemas.RenderRequest):
        report = bench.BenchReport.from_dict(request.report.model_dump())
        return schemas.RenderResponse(text=bench.emit_report(report, request.format))

    def _run(configs: list[bench.LayerConfig], options: schemas.RunOptionsIn) -> dict:
        run_options = bench.RunOptions(**options.model_dump())
        with _bench_lock:
            report = bench.run_benchmark(configs, run_options)
        return report.to_dict()

    return app


app = create_app()
