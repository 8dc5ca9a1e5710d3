"""FastAPI wrapper around the curve-invariant engine.

The engine itself is pure and stateless; endpoints just decode a request
model, run the computation, and echo the request config back with the
result rows.  Engine errors map onto the wire as

    ConfigError and friends      -> 400 {"error": {"kind": "config"}}
    OriginNotInterior            -> 400 {"error": {"kind": "origin_not_interior"}}
    any other GeometryError      -> 500 {"error": {"kind": "numerical"}}

with the failing parameter value inside the message when the engine knows
it.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..curves import speed
from ..errors import (
    ConfigError,
    GeometryError,
    InsufficientPoints,
    NonMonotoneGrid,
    OriginNotInterior,
    OutOfRange,
    TooFewSamples,
)
from ..frames import build_frame, frenet_residuals
from ..gauges import verify_gauge
from ..invariants import classify, invariants_at
from ..numerics import cumulative_trapezoid
from ..translation import verify_translation
from . import schemas

_CONFIG_ERRORS = (
    ConfigError,
    OutOfRange,
    InsufficientPoints,
    TooFewSamples,
    NonMonotoneGrid,
)


def _error_payload(exc: GeometryError) -> tuple[int, dict]:
    if isinstance(exc, OriginNotInterior):
        kind, status = "origin_not_interior", 400
    elif isinstance(exc, _CONFIG_ERRORS):
        kind, status = "config", 400
    else:
        kind, status = "numerical", 500
    return status, {"error": {"kind": kind, "message": str(exc)}}


def _echo(request) -> dict:
    return request.model_dump(mode="json", exclude_none=True, by_alias=True)


def _invariant_rows(req: schemas.InvariantsRequest) -> list[schemas.InvariantsRow]:
    gauge = req.gauge.to_gauge()
    curve = req.curve.to_curve()
    tols = req.tolerances.to_config()
    grid = req.range.grid()
    phis = [speed(gauge, curve.jet(float(t))) for t in grid]
    s = cumulative_trapezoid(grid, phis)
    rows = []
    for t, si in zip(grid, s):
        inv = invariants_at(gauge, curve, float(t), tols)
        rows.append(
            schemas.InvariantsRow(
                t=float(t), s=float(si), I1=inv.i1, I2=inv.i2, I3=inv.i3, I4=inv.i4
            )
        )
    return rows


def create_app() -> FastAPI:
    app = FastAPI(title="gaugecurves", version="0.1.0")

    @app.exception_handler(GeometryError)
    async def geometry_error_handler(request: Request, exc: GeometryError):
        status, payload = _error_payload(exc)
        return JSONResponse(status_code=status, content=payload)

    @app.get("/api/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/api/invariants", response_model=schemas.InvariantsResponse)
    def invariants(req: schemas.InvariantsRequest) -> schemas.InvariantsResponse:
        return schemas.InvariantsResponse(config=_echo(req), rows=_invariant_rows(req))

    @app.post("/api/classify", response_model=schemas.ClassifyResponse)
    def classify_endpoint(req: schemas.ClassifyRequest) -> schemas.ClassifyResponse:
        rows = _invariant_rows(req)
        verdict = classify([r.I4 for r in rows], class_tol=req.tolerances.class_tol)
        return schemas.ClassifyResponse(
            config=_echo(req),
            verdict=verdict.verdict,
            i4_value=verdict.i4_value,
            max_deviation=verdict.max_deviation,
            class_tol=verdict.class_tol,
            count=verdict.count,
        )

    @app.post("/api/frame", response_model=schemas.FrameResponse)
    def frame(req: schemas.FrameRequest) -> schemas.FrameResponse:
        gauge = req.gauge.to_gauge()
        curve = req.curve.to_curve()
        tols = req.tolerances.to_config()
        frames = build_frame(
            gauge, curve, req.range.grid(), c1=req.c1, c2=req.c2, tols=tols
        )
        residuals = frenet_residuals(frames)
        rows = [
            schemas.FrameRow(
                t=fr.t,
                s=fr.s,
                e1=tuple(fr.e1),
                e2=tuple(fr.e2),
                e3=tuple(fr.e3),
                k=fr.k,
                kstar=fr.kstar,
                w=fr.w,
                wstar=fr.wstar,
                res1=float(res[0]),
                res2=float(res[1]),
                res3=float(res[2]),
            )
            for fr, res in zip(frames, residuals)
        ]
        return schemas.FrameResponse(config=_echo(req), rows=rows)

    @app.post("/api/translate-check", response_model=schemas.TranslateCheckResponse)
    def translate_check(req: schemas.TranslateCheckRequest) -> schemas.TranslateCheckResponse:
        base = req.gauge.to_gauge()
        curve = req.curve.to_curve()
        tols = req.tolerances.to_config()
        report = verify_translation(
            base,
            req.a0,
            curve,
            req.range.grid(),
            tols=tols,
            i4_tol=req.tolerances.i4,
            change_tol=req.tolerances.change,
        )
        names = ("I1", "I2", "I3", "I4")
        rows = [
            schemas.TranslateCheckRow(
                invariant=names[j],
                max_change_vs_base=float(report.max_change[j]),
                max_formula_vs_direct=float(report.max_formula_gap[j]),
                changed=report.changed[j],
            )
            for j in range(4)
        ]
        return schemas.TranslateCheckResponse(
            config=_echo(req),
            rows=rows,
            i4_max_gap=report.i4_max_gap,
            i4_tol=report.i4_tol,
            i4_pass=report.i4_pass,
        )

    @app.post("/api/verify-gauge", response_model=schemas.VerifyGaugeResponse)
    def verify_gauge_endpoint(req: schemas.VerifyGaugeRequest) -> schemas.VerifyGaugeResponse:
        gauge = req.gauge.to_gauge()
        audit = verify_gauge(gauge, sample_count=req.samples, seed=req.seed)
        return schemas.VerifyGaugeResponse(
            config=_echo(req),
            positivity=audit.positivity,
            homogeneity=audit.homogeneity,
            subadditivity=audit.subadditivity,
            euler=audit.euler,
            sample_count=audit.sample_count,
            tol=req.tol,
            passed=audit.passed(req.tol),
        )

    return app


app = create_app()
