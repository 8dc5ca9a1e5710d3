"""Frenet-type frames adapted to a gauge.

Along a regular curve with unit tangent e1 (gauge speed 1 with respect to
arc length s), the second derivative of e1 decomposes in the moving basis
{e1, e1', v} where v is the Birkhoff-orthogonal direction of the
osculating plane:

    e1'' = p1 e1 + p2 e1' + p3 v,        v' = q1 e1 + q2 e1'.

The frame {e1, e2, e3} is then assembled from two quadratures:

    k  = c1 * exp( integral p2 ds ),     e2 = e1' / k,
    f  = c2 - integral q1 ds,            e3 = v + f e1,

with curvature-type functions k* = (f p3 - p1)/k, w = p3/k and
w* = -k (f + q2), satisfying e1' = k e2, e2' = -k* e1 + w e3,
e3' = -w* e2.  The constants (c1 > 0, c2) are the frame freedom: any two
admissible frames differ by k -> a k, e3 -> e3 + b e1.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, InsufficientPoints, ResidualTooLarge
from .gauges import Gauge
from .curves import ArcJet, Curve, arc_reparameterize
from .numerics import (
    DEFAULT_TOLS,
    ToleranceConfig,
    Vec3,
    cumulative_trapezoid,
    require_increasing,
    solve2x2,
    solve3x3,
)


@dataclass(frozen=True)
class FrameCoefficients:
    """Decomposition coefficients of e1'' and v' in {e1, e1', v}."""

    p1: float
    p2: float
    p3: float
    q1: float
    q2: float


def decompose_p(arc: ArcJet, tols: ToleranceConfig = DEFAULT_TOLS) -> tuple[float, float, float]:
    """Coefficients of e1'' = p1 e1 + p2 e1' + p3 v."""
    x = solve3x3((arc.e1, arc.de1_ds, arc.v), arc.d2e1_ds2)
    return float(x[0]), float(x[1]), float(x[2])


def decompose_q(arc: ArcJet, tols: ToleranceConfig = DEFAULT_TOLS) -> tuple[float, float]:
    """Coefficients of v' = q1 e1 + q2 e1'.

    v' lies in span{e1, e1'} for a smooth strictly convex gauge; the
    least-squares solution is accepted only if the out-of-plane residual
    stays below residual_tol relative to |v'|.
    """
    u1, u2, rhs = arc.e1, arc.de1_ds, arc.dv_ds
    q1, q2 = solve2x2(
        float(np.dot(u1, u1)), float(np.dot(u1, u2)),
        float(np.dot(u2, u1)), float(np.dot(u2, u2)),
        float(np.dot(u1, rhs)), float(np.dot(u2, rhs)),
    )
    resid = rhs - q1 * u1 - q2 * u2
    rnorm = float(np.linalg.norm(resid))
    if rnorm > tols.residual_tol * max(1.0, float(np.linalg.norm(rhs))):
        raise ResidualTooLarge(
            f"dv/ds leaves span{{e1, e1'}} by {rnorm:.3e} (tol {tols.residual_tol:.1e})"
        )
    return float(q1), float(q2)


def coefficients_at(
    gauge: Gauge,
    curve: Curve,
    t: float,
    tols: ToleranceConfig = DEFAULT_TOLS,
    method: str = "auto",
) -> tuple[FrameCoefficients, ArcJet]:
    """Frame coefficients and arc data of a curve at parameter t."""
    arc = arc_reparameterize(gauge, curve, t, tols, method=method)
    p1, p2, p3 = decompose_p(arc, tols)
    q1, q2 = decompose_q(arc, tols)
    return FrameCoefficients(p1=p1, p2=p2, p3=p3, q1=q1, q2=q2), arc


@dataclass(frozen=True)
class FrenetFrame:
    """Frame and curvature data at one grid point."""

    t: float
    s: float
    e1: Vec3
    e2: Vec3
    e3: Vec3
    k: float
    kstar: float
    w: float
    wstar: float
    c1: float
    c2: float


@dataclass(frozen=True)
class FrameFreedom:
    """Admissible frame change: k -> a k (a > 0), e3 -> e3 + b e1."""

    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0.0:
            raise ConfigError(f"frame scaling a must be positive, got {self.a}")


def build_frame(
    gauge: Gauge,
    curve: Curve,
    t_grid: np.ndarray,
    c1: float = 1.0,
    c2: float = 0.0,
    tols: ToleranceConfig = DEFAULT_TOLS,
    method: str = "auto",
) -> list[FrenetFrame]:
    """Construct the frame along a strictly increasing parameter grid.

    Arc length starts at 0 at the first grid point and the quadratures for
    k and f are cumulative trapezoids over the grid, so c1 is the value of
    k and c2 the value of f there.
    """
    t_grid = require_increasing(np.asarray(t_grid, dtype=float), "t grid")
    if t_grid.size < 2:
        raise InsufficientPoints("frame construction needs at least 2 grid points")
    if c1 <= 0.0:
        raise ConfigError(f"frame constant c1 must be positive, got {c1}")

    n = t_grid.size
    phi = np.empty(n)
    p = np.empty((n, 3))
    q = np.empty((n, 2))
    e1 = np.empty((n, 3))
    de1 = np.empty((n, 3))
    v = np.empty((n, 3))
    for i, t in enumerate(t_grid):
        coeffs, arc = coefficients_at(gauge, curve, float(t), tols, method=method)
        phi[i] = arc.s_speed
        p[i] = (coeffs.p1, coeffs.p2, coeffs.p3)
        q[i] = (coeffs.q1, coeffs.q2)
        e1[i] = arc.e1
        de1[i] = arc.de1_ds
        v[i] = arc.v

    s = cumulative_trapezoid(t_grid, phi)
    k = c1 * np.exp(cumulative_trapezoid(s, p[:, 1]))
    f = c2 - cumulative_trapezoid(s, q[:, 0])

    frames = []
    for i in range(n):
        e2 = de1[i] / k[i]
        e3 = v[i] + f[i] * e1[i]
        frames.append(
            FrenetFrame(
                t=float(t_grid[i]),
                s=float(s[i]),
                e1=e1[i],
                e2=e2,
                e3=e3,
                k=float(k[i]),
                kstar=float((f[i] * p[i, 2] - p[i, 0]) / k[i]),
                w=float(p[i, 2] / k[i]),
                wstar=float(-k[i] * (f[i] + q[i, 1])),
                c1=float(c1),
                c2=float(c2),
            )
        )
    return frames


def frame_change(frame: FrenetFrame, freedom: FrameFreedom) -> FrenetFrame:
    """Apply the admissible frame change (a, b) to one frame point.

    k -> a k, e2 -> e2/a, e3 -> e3 + b e1, k* -> (k* + b w)/a, w -> w/a,
    w* -> a (w* - b k); e1 and the invariant combinations are untouched.
    """
    a, b = freedom.a, freedom.b
    return replace(
        frame,
        e2=frame.e2 / a,
        e3=frame.e3 + b * frame.e1,
        k=a * frame.k,
        kstar=(frame.kstar + b * frame.w) / a,
        w=frame.w / a,
        wstar=a * (frame.wstar - b * frame.k),
        c1=a * frame.c1,
        c2=frame.c2 + b,
    )


def frenet_residuals(frames: list[FrenetFrame]) -> np.ndarray:
    """Pointwise norms of the frame-equation residuals along the grid.

    Returns an (n, 3) array: |e1' - k e2|, |e2' + k* e1 - w e3| and
    |e3' + w* e2| with the s-derivatives taken by second-order finite
    differences over the (possibly nonuniform) grid.
    """
    if len(frames) < 3:
        raise InsufficientPoints("residual check needs at least 3 grid points")
    s = np.array([fr.s for fr in frames])
    E1 = np.array([fr.e1 for fr in frames])
    E2 = np.array([fr.e2 for fr in frames])
    E3 = np.array([fr.e3 for fr in frames])
    k = np.array([fr.k for fr in frames])
    kstar = np.array([fr.kstar for fr in frames])
    w = np.array([fr.w for fr in frames])
    wstar = np.array([fr.wstar for fr in frames])

    dE1 = np.gradient(E1, s, axis=0, edge_order=2)
    dE2 = np.gradient(E2, s, axis=0, edge_order=2)
    dE3 = np.gradient(E3, s, axis=0, edge_order=2)

    r1 = np.linalg.norm(dE1 - k[:, None] * E2, axis=1)
    r2 = np.linalg.norm(dE2 + kstar[:, None] * E1 - w[:, None] * E3, axis=1)
    r3 = np.linalg.norm(dE3 + wstar[:, None] * E2, axis=1)
    return np.column_stack([r1, r2, r3])
