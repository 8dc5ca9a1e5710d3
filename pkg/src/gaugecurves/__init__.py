"""Frenet-type frames and differential invariants for curves in
3-dimensional gauge spaces."""

from .errors import (
    ConfigError,
    DegenerateCurvature,
    DegenerateDirection,
    GeometryError,
    InsufficientPoints,
    MaxIterations,
    NonMonotoneGrid,
    NoSignChange,
    OriginNotInterior,
    OutOfRange,
    ResidualTooLarge,
    RootBracketFailure,
    SingularSystem,
    SolverDivergence,
    TooFewSamples,
    ZeroDenominator,
)
from .numerics import DEFAULT_TOLS, ToleranceConfig, vec3
from .gauges import (
    EllipsoidGauge,
    EuclideanGauge,
    Gauge,
    GaugeAudit,
    ImplicitGauge,
    RandersGauge,
    TranslatedGauge,
    birkhoff_orthogonal,
    gauge_from_json,
    randers_birkhoff,
    verify_gauge,
)
from .curves import (
    ArcJet,
    CircularHelix,
    Curve,
    CurveJet,
    PerturbedHelix,
    SampledCurve,
    ScaledEllipse,
    SpeedProfile,
    SpeedScaledCurve,
    TwistedCubic,
    UnitSpeedHelix,
    arc_reparameterize,
    curve_from_key,
    jet_from_samples,
    load_curve_csv,
    profile_from_key,
    speed,
)
from .frames import (
    FrameCoefficients,
    FrameFreedom,
    FrenetFrame,
    build_frame,
    coefficients_at,
    decompose_p,
    decompose_q,
    frame_change,
    frenet_residuals,
)
from .invariants import (
    CurveClass,
    Invariants,
    classify,
    derived_invariants,
    euclidean_oracle,
    invariants_at,
    invariants_from_jet,
    q2_at,
    q2_prime_at,
)
from .translation import (
    A0Components,
    TranslationContext,
    TranslationReport,
    decompose_a0,
    make_translated,
    translate_coefficients,
    verify_translation,
)

__version__ = "0.1.0"
