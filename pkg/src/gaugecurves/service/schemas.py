"""Request/response models for the computation service."""

from __future__ import annotations

from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..curves import Curve, SampledCurve, curve_from_key
from ..gauges import Gauge, gauge_from_json
from ..numerics import ToleranceConfig


class GaugeSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["euclidean", "randers", "ellipsoid", "translated"]
    b: Optional[float] = None
    base: Optional["GaugeSpec"] = None
    a0: Optional[tuple[float, float, float]] = None

    @model_validator(mode="after")
    def _fields_match_kind(self) -> "GaugeSpec":
        if self.kind in ("randers", "ellipsoid") and self.b is None:
            raise ValueError(f"gauge kind {self.kind!r} requires field 'b'")
        if self.kind == "translated" and (self.base is None or self.a0 is None):
            raise ValueError("gauge kind 'translated' requires fields 'base' and 'a0'")
        return self

    def to_gauge(self) -> Gauge:
        return gauge_from_json(self.model_dump(exclude_none=True))


GaugeSpec.model_rebuild()


class CurveSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    key: Optional[str] = None
    samples: Optional[list[tuple[float, float, float, float]]] = None
    order: int = 6

    @model_validator(mode="after")
    def _exactly_one_source(self) -> "CurveSpec":
        if (self.key is None) == (self.samples is None):
            raise ValueError("curve spec needs exactly one of 'key' or 'samples'")
        return self

    def to_curve(self) -> Curve:
        if self.key is not None:
            return curve_from_key(self.key)
        return SampledCurve(np.asarray(self.samples, dtype=float), order=self.order)


class RangeSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t0: float
    t1: float
    n: int = Field(ge=5, le=200_000)

    @model_validator(mode="after")
    def _ordered(self) -> "RangeSpec":
        if not self.t1 > self.t0:
            raise ValueError("range needs t1 > t0")
        return self

    def grid(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.n)


class ToleranceSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    root: float = Field(default=1e-12, gt=0.0)
    fd_step: float = Field(default=1e-5, gt=0.0)
    residual: float = Field(default=1e-6, gt=0.0)
    class_tol: float = Field(default=1e-6, gt=0.0, alias="class")
    i4: float = Field(default=1e-6, gt=0.0)
    change: float = Field(default=1e-3, gt=0.0)
    gauge: float = Field(default=1e-8, gt=0.0)

    def to_config(self) -> ToleranceConfig:
        return ToleranceConfig(
            root_tol=self.root, fd_step_scale=self.fd_step, residual_tol=self.residual
        )


class InvariantsRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gauge: GaugeSpec
    curve: CurveSpec
    range: RangeSpec
    tolerances: ToleranceSpec = ToleranceSpec()


class InvariantsRow(BaseModel):
    t: float
    s: float
    I1: float
    I2: float
    I3: float
    I4: float


class InvariantsResponse(BaseModel):
    config: dict
    rows: list[InvariantsRow]


class ClassifyRequest(InvariantsRequest):
    pass


class ClassifyResponse(BaseModel):
    config: dict
    verdict: Literal["CylindricalHelix", "Rectifying", "Generic"]
    i4_value: float
    max_deviation: float
    class_tol: float
    count: int


class FrameRequest(InvariantsRequest):
    c1: float = 1.0
    c2: float = 0.0


class FrameRow(BaseModel):
    t: float
    s: float
    e1: tuple[float, float, float]
    e2: tuple[float, float, float]
    e3: tuple[float, float, float]
    k: float
    kstar: float
    w: float
    wstar: float
    res1: float
    res2: float
    res3: float


class FrameResponse(BaseModel):
    config: dict
    rows: list[FrameRow]


class TranslateCheckRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gauge: GaugeSpec
    a0: tuple[float, float, float]
    curve: CurveSpec
    range: RangeSpec
    tolerances: ToleranceSpec = ToleranceSpec()


class TranslateCheckRow(BaseModel):
    invariant: Literal["I1", "I2", "I3", "I4"]
    max_change_vs_base: float
    max_formula_vs_direct: float
    changed: bool


class TranslateCheckResponse(BaseModel):
    config: dict
    rows: list[TranslateCheckRow]
    i4_max_gap: float
    i4_tol: float
    i4_pass: bool


class VerifyGaugeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gauge: GaugeSpec
    samples: int = Field(default=1000, ge=2, le=100_000)
    seed: int = 0
    tol: float = Field(default=1e-8, gt=0.0)


class VerifyGaugeResponse(BaseModel):
    config: dict
    positivity: float
    homogeneity: float
    subadditivity: float
    euler: float
    sample_count: int
    tol: float
    passed: bool
