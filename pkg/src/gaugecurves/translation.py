"""Behaviour of the invariants under parallel translation of the unit
sphere.

Translating the unit ball by a0 (keeping the origin interior) changes
lengths, so a curve that is unit speed for the base gauge is traversed at
speed 1/f with f = ds/dsbar the ratio of the two arc lengths.  Writing
a0 = a01 ebar1 + a02 (debar1/dsbar) + a03 vbar in the translated frame
data, the coefficients transform as

    pbar1 = f f'' - 2 f'^2 + p1 f^2 - p2 f f' - p3 f^3 a01
    pbar2 = 3 f' + p2 f - p3 f^3 a02
    pbar3 = p3 f^3 (1 - a03)
    qbar1 = q1 - q2 f'/f
    qbar2 = q2 / f

(primes are d/ds along the base arc length).  I1, I2, I3 genuinely change
under translation, but I4 does not: qbar1 - dqbar2/dsbar collapses to
q1 - q2', so I4 is a translation invariant.  `verify_translation` checks
this two independent ways per grid point: once by recomputing everything
directly under the translated gauge, once through the formulas above.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Curve
from .errors import InsufficientPoints
from .frames import FrameCoefficients, coefficients_at
from .gauges import Gauge, TranslatedGauge
from .invariants import Invariants, invariants_at, q2_prime_at
from .numerics import (
    DEFAULT_TOLS,
    ToleranceConfig,
    Vec3,
    require_increasing,
    solve3x3,
)


def make_translated(base: Gauge, a0: Vec3, tols: ToleranceConfig = DEFAULT_TOLS) -> TranslatedGauge:
    """Gauge of the unit ball translated by a0 (admissible iff
    F_base(-a0) < 1)."""
    return TranslatedGauge(base, a0, tols)


@dataclass(frozen=True)
class A0Components:
    """Coordinates of a0 in the translated frame data
    {ebar1, debar1/dsbar, vbar}."""

    a01: float
    a02: float
    a03: float


def decompose_a0(a0: Vec3, e1bar: Vec3, de1bar_dsbar: Vec3, vbar: Vec3) -> A0Components:
    """Solve a0 = a01 ebar1 + a02 debar1/dsbar + a03 vbar."""
    x = solve3x3((e1bar, de1bar_dsbar, vbar), np.asarray(a0, dtype=float))
    return A0Components(a01=float(x[0]), a02=float(x[1]), a03=float(x[2]))


@dataclass(frozen=True)
class TranslationContext:
    """Arc-length ratio f = ds/dsbar and its s-derivatives at one point."""

    f: float
    df_ds: float
    d2f_ds2: float


def translate_coefficients(
    p: tuple[float, float, float],
    q: tuple[float, float],
    ctx: TranslationContext,
    a0c: A0Components,
) -> tuple[tuple[float, float, float], tuple[float, float]]:
    """Coefficients of the same curve under the translated gauge."""
    p1, p2, p3 = p
    q1, q2 = q
    f, f1, f2 = ctx.f, ctx.df_ds, ctx.d2f_ds2
    pbar1 = f * f2 - 2.0 * f1 * f1 + p1 * f * f - p2 * f * f1 - p3 * f**3 * a0c.a01
    pbar2 = 3.0 * f1 + p2 * f - p3 * f**3 * a0c.a02
    pbar3 = p3 * f**3 * (1.0 - a0c.a03)
    qbar1 = q1 - q2 * f1 / f
    qbar2 = q2 / f
    return (pbar1, pbar2, pbar3), (qbar1, qbar2)


@dataclass(frozen=True)
class TranslationReport:
    """Invariants of one curve under a gauge and its translate.

    base / direct / formula are (n, 4) arrays of (I1, I2, I3, I4) per grid
    point: `direct` recomputed from scratch under the translated gauge,
    `formula` through the coefficient transformation.  max_formula_gap is
    the per-invariant maximum |formula - direct| (the two independent
    routes agreeing), max_change the maximum |direct - base|, and i4_pass
    states whether I4 stayed invariant within i4_tol.
    """

    t_grid: np.ndarray
    base: np.ndarray
    direct: np.ndarray
    formula: np.ndarray
    max_formula_gap: np.ndarray
    max_change: np.ndarray
    changed: tuple[bool, bool, bool, bool]
    i4_max_gap: float
    i4_tol: float
    i4_pass: bool
    change_tol: float


def _context_at(
    base: Gauge, translated: TranslatedGauge, curve: Curve, t: float
) -> TranslationContext:
    """f = phi_base/phi_translated and its s-derivatives at t.

    phi derivatives in t come from gauge gradients and Hessians (exact
    chain rules), so f'' carries no second-differencing noise.
    """
    jet = curve.jet(t)
    d1, d2, d3 = jet.d1, jet.d2, jet.d3

    def phi_jet(g: Gauge) -> tuple[float, float, float]:
        val = g.eval(d1)
        grad = g.gradient(d1)
        hess = g.hessian(d1)
        return (
            val,
            float(np.dot(grad, d2)),
            float(np.dot(grad, d3) + np.dot(d2, hess @ d2)),
        )

    u, u1, u2 = phi_jet(base)        # phi_base and t-derivatives
    w, w1, w2 = phi_jet(translated)  # phi_bar and t-derivatives

    f = u / w
    f_t = (u1 * w - u * w1) / (w * w)
    f_tt = (u2 * w - u * w2) / (w * w) - 2.0 * w1 * f_t / w
    df_ds = f_t / u
    d2f_ds2 = (f_tt * u - f_t * u1) / u**3
    return TranslationContext(f=f, df_ds=df_ds, d2f_ds2=d2f_ds2)


def verify_translation(
    base: Gauge,
    a0: Vec3,
    curve: Curve,
    t_grid: np.ndarray,
    tols: ToleranceConfig = DEFAULT_TOLS,
    i4_tol: float = 1e-6,
    change_tol: float = 1e-3,
    method: str = "auto",
) -> TranslationReport:
    """Compare invariants of one curve under a gauge and its translate.

    Per grid point this computes the base invariants, the translated
    invariants directly (fresh pipeline under the translated gauge), and
    the translated invariants through the coefficient formulas; it then
    summarises which invariants changed and whether I4 stayed put.
    """
    t_grid = require_increasing(np.asarray(t_grid, dtype=float), "t grid")
    if t_grid.size < 2:
        raise InsufficientPoints("translation check needs at least 2 grid points")
    translated = make_translated(base, a0, tols)
    a0 = np.asarray(a0, dtype=float)

    n = t_grid.size
    base_vals = np.empty((n, 4))
    direct_vals = np.empty((n, 4))
    formula_vals = np.empty((n, 4))

    for i, t in enumerate(t_grid):
        t = float(t)
        coeffs, arc = coefficients_at(base, curve, t, tols, method=method)
        q2p = q2_prime_at(base, curve, t, tols, method=method, s_speed=arc.s_speed)
        base_inv = Invariants(
            i1=coeffs.p3,
            i2=coeffs.p2,
            i3=-coeffs.p1 - coeffs.p3 * coeffs.q2,
            i4=coeffs.q1 - q2p,
        )

        direct_inv = invariants_at(translated, curve, t, tols, method=method)

        ctx = _context_at(base, translated, curve, t)
        e1bar = ctx.f * arc.e1
        de1bar_dsbar = ctx.f * (ctx.df_ds * arc.e1 + ctx.f * arc.de1_ds)
        vbar = arc.v + a0
        a0c = decompose_a0(a0, e1bar, de1bar_dsbar, vbar)
        (pb1, pb2, pb3), (qb1, qb2) = translate_coefficients(
            (coeffs.p1, coeffs.p2, coeffs.p3), (coeffs.q1, coeffs.q2), ctx, a0c
        )
        dqbar2_dsbar = q2p - coeffs.q2 * ctx.df_ds / ctx.f
        formula_inv = Invariants(
            i1=pb3,
            i2=pb2,
            i3=-pb1 - pb3 * qb2,
            i4=qb1 - dqbar2_dsbar,
        )

        base_vals[i] = base_inv.as_tuple()
        direct_vals[i] = direct_inv.as_tuple()
        formula_vals[i] = formula_inv.as_tuple()

    max_formula_gap = np.max(np.abs(formula_vals - direct_vals), axis=0)
    max_change = np.max(np.abs(direct_vals - base_vals), axis=0)
    i4_max_gap = float(max_change[3])
    return TranslationReport(
        t_grid=t_grid,
        base=base_vals,
        direct=direct_vals,
        formula=formula_vals,
        max_formula_gap=max_formula_gap,
        max_change=max_change,
        changed=tuple(bool(c > change_tol) for c in max_change),
        i4_max_gap=i4_max_gap,
        i4_tol=i4_tol,
        i4_pass=bool(i4_max_gap <= i4_tol),
        change_tol=change_tol,
    )
