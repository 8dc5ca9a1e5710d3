"""Differential invariants of curves in a gauge geometry.

The four functions

    I1 = k w = p3,            I2 = k'/k = p2,
    I3 = k k* + w w* = -p1 - p3 q2,
    I4 = (w*/k)' = q1 - q2',

built from the frame coefficients are independent of the frame constants
(c1, c2), so they are genuine invariants of the curve and the gauge.  I4
classifies the curve: identically zero for cylindrical helices (constant
slope against a fixed direction), a nonzero constant exactly for
rectifying curves (curves whose position stays in the plane spanned by e1
and e3 through one point), anything else is generic.

The only numerically differentiated ingredient is q2' (= dq2/ds): q2 is
sampled at five stencil points in the curve parameter and differentiated
with the fourth-order formula, then converted by the exact chain rule
1/phi.  The wide stencil keeps the evaluation noise of q2 (itself one
differencing deep) out of the invariant at the 1e-8 level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .curves import Curve, CurveJet, arc_reparameterize, speed
from .errors import ConfigError, TooFewSamples, ZeroDenominator
from .frames import coefficients_at, decompose_q
from .gauges import Gauge
from .numerics import (
    DEFAULT_TOLS,
    ToleranceConfig,
    central_diff_5pt,
    fd_step,
    require_increasing,
)

# Relative step for the five-point q2 stencil; chosen so that fourth-order
# truncation and differenced-solver noise are both below 1e-8.
Q2_STEP_SCALE = 2e-3


@dataclass(frozen=True)
class Invariants:
    """Values of I1..I4 at one point of a curve."""

    i1: float
    i2: float
    i3: float
    i4: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.i1, self.i2, self.i3, self.i4)


def q2_at(
    gauge: Gauge,
    curve: Curve,
    t: float,
    tols: ToleranceConfig = DEFAULT_TOLS,
    method: str = "auto",
) -> float:
    """The coefficient q2 of v' = q1 e1 + q2 e1' at parameter t."""
    arc = arc_reparameterize(gauge, curve, t, tols, method=method)
    return decompose_q(arc, tols)[1]


def q2_prime_at(
    gauge: Gauge,
    curve: Curve,
    t: float,
    tols: ToleranceConfig = DEFAULT_TOLS,
    method: str = "auto",
    s_speed: float | None = None,
) -> float:
    """dq2/ds at parameter t (five-point stencil over t, chain rule)."""
    if s_speed is None:
        s_speed = speed(gauge, curve.jet(t))
    h = fd_step(t, Q2_STEP_SCALE)
    dq2_dt = central_diff_5pt(
        lambda u: q2_at(gauge, curve, u, tols, method=method), t, h
    )
    return dq2_dt / s_speed


def invariants_at(
    gauge: Gauge,
    curve: Curve,
    t: float,
    tols: ToleranceConfig = DEFAULT_TOLS,
    method: str = "auto",
) -> Invariants:
    """All four invariants of the curve at parameter t."""
    coeffs, arc = coefficients_at(gauge, curve, t, tols, method=method)
    q2p = q2_prime_at(gauge, curve, t, tols, method=method, s_speed=arc.s_speed)
    return Invariants(
        i1=coeffs.p3,
        i2=coeffs.p2,
        i3=-coeffs.p1 - coeffs.p3 * coeffs.q2,
        i4=coeffs.q1 - q2p,
    )


class _TaylorCurve(Curve):
    """Quartic Taylor model of a curve around one jet."""

    def __init__(self, jet: CurveJet):
        if jet.d4 is None:
            raise ConfigError("invariants from a single jet need order 4 (d4 present)")
        self._jet = jet

    def jet(self, t: float) -> CurveJet:
        j = self._jet
        u = t - j.t
        return CurveJet(
            t=t,
            gamma=j.gamma + u * (j.d1 + u * (j.d2 / 2 + u * (j.d3 / 6 + u * j.d4 / 24))),
            d1=j.d1 + u * (j.d2 + u * (j.d3 / 2 + u * j.d4 / 6)),
            d2=j.d2 + u * (j.d3 + u * j.d4 / 2),
            d3=j.d3 + u * j.d4,
            d4=j.d4,
        )

    def spec(self) -> dict:
        return {"key": f"taylor@{self._jet.t}"}


def invariants_from_jet(
    gauge: Gauge,
    jet: CurveJet,
    tols: ToleranceConfig = DEFAULT_TOLS,
    method: str = "auto",
) -> Invariants:
    """Invariants from a single order-4 jet.

    The jet is promoted to its quartic Taylor curve and evaluated at the
    jet's own parameter; the q2 stencil stays inside the Taylor ball, so
    the result matches invariants_at on analytic curves.
    """
    return invariants_at(gauge, _TaylorCurve(jet), jet.t, tols, method=method)


def euclidean_oracle(
    kappa: float,
    tau: float,
    dkappa_ds: float = 0.0,
    d_tau_over_kappa_ds: float = 0.0,
) -> Invariants:
    """Invariants predicted by classical curvature/torsion data.

    For the Euclidean gauge the frame coefficients reduce to
    (p1, p2, p3, q1, q2) = (-kappa^2, kappa'/kappa, kappa tau, 0,
    -tau/kappa), which gives I = (kappa tau, kappa'/kappa,
    kappa^2 + tau^2, (tau/kappa)').
    """
    if kappa <= 0.0:
        raise ConfigError(f"kappa must be positive, got {kappa}")
    return Invariants(
        i1=kappa * tau,
        i2=dkappa_ds / kappa,
        i3=kappa * kappa + tau * tau,
        i4=d_tau_over_kappa_ds,
    )


@dataclass(frozen=True)
class CurveClass:
    """Classification verdict with its supporting I4 statistics."""

    verdict: str  # "CylindricalHelix" | "Rectifying" | "Generic"
    i4_value: float
    max_deviation: float
    class_tol: float
    count: int


def classify(
    samples: Sequence[Union[Invariants, float]],
    class_tol: float = 1e-6,
) -> CurveClass:
    """Classify a curve from sampled invariants.

    I4 identically zero (within class_tol) means CylindricalHelix; I4
    equal to a nonzero constant means Rectifying; otherwise Generic.
    i4_value is the median of the samples, max_deviation the largest
    distance from zero (helix verdict) or from the median (otherwise).
    """
    if class_tol <= 0.0:
        raise ConfigError(f"class_tol must be positive, got {class_tol}")
    vals = np.array(
        [s.i4 if isinstance(s, Invariants) else float(s) for s in samples], dtype=float
    )
    if vals.size < 5:
        raise TooFewSamples(f"classification needs at least 5 samples, got {vals.size}")
    center = float(np.median(vals))
    dev_zero = float(np.max(np.abs(vals)))
    dev_center = float(np.max(np.abs(vals - center)))
    if dev_zero <= class_tol:
        return CurveClass("CylindricalHelix", center, dev_zero, class_tol, vals.size)
    if dev_center <= class_tol:
        return CurveClass("Rectifying", center, dev_center, class_tol, vals.size)
    return CurveClass("Generic", center, dev_center, class_tol, vals.size)


def derived_invariants(
    s_grid: np.ndarray,
    samples: Sequence[Invariants],
    w_nonzero: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Second-tier derived functions along a grid.

    Returns (w'/w, (k*/w)') computed frame-independently as
    w'/w = I1'/I1 - I2 and (k*/w)' = (I3/I1)' - I4.  Both divide by I1;
    with w_nonzero=True a near-zero I1 raises ZeroDenominator, otherwise
    the affected entries are NaN.
    """
    s = require_increasing(np.asarray(s_grid, dtype=float), "s grid")
    if s.size != len(samples):
        raise ConfigError("s grid and samples length mismatch")
    if s.size < 3:
        raise TooFewSamples("derived invariants need at least 3 samples")
    I1 = np.array([inv.i1 for inv in samples])
    I2 = np.array([inv.i2 for inv in samples])
    I3 = np.array([inv.i3 for inv in samples])
    I4 = np.array([inv.i4 for inv in samples])

    tiny = 1e-12 * max(1.0, float(np.max(np.abs(I1))))
    bad = np.abs(I1) <= tiny
    if np.any(bad):
        if w_nonzero:
            raise ZeroDenominator(
                "I1 vanishes on the grid; derived invariants undefined"
            )
        I1 = np.where(bad, np.nan, I1)

    j1 = np.gradient(I1, s, edge_order=2) / I1 - I2
    j2 = np.gradient(I3 / I1, s, edge_order=2) - I4
    return j1, j2
