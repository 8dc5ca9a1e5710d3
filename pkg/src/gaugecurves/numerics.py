"""Small numerical kernels shared by the geometry modules.

Everything here is deterministic and side-effect free: tiny linear solves
with an explicit degeneracy floor, finite-difference stencils, cumulative
trapezoid integration, and a bracketed scalar root solver.  The geometry
modules call these instead of reaching for a large solver library so the
failure modes stay inspectable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    MaxIterations,
    NonMonotoneGrid,
    NoSignChange,
    SingularSystem,
)

# A 3-vector is a plain float64 array of shape (3,).
Vec3 = np.ndarray

# Relative determinant floor for the small Cramer solves: a system counts
# as singular when |det| <= DET_FLOOR * product of column norms.
DET_FLOOR = 1e-12


def vec3(x: float, y: float, z: float) -> Vec3:
    """Build a float64 3-vector."""
    return np.array([float(x), float(y), float(z)], dtype=float)


@dataclass(frozen=True)
class ToleranceConfig:
    """Shared tolerance knobs threaded through the pipeline.

    root_tol        absolute residual target for scalar root solves
    fd_step_scale   relative step for first-derivative central differences
    residual_tol    relative residual bound for decomposition checks
    """

    root_tol: float = 1e-12
    fd_step_scale: float = 1e-5
    residual_tol: float = 1e-6


DEFAULT_TOLS = ToleranceConfig()


def fd_step(t: float, scale: float) -> float:
    """Step size scale * max(1, |t|) used by the difference stencils."""
    return scale * max(1.0, abs(t))


def solve3x3(
    columns: Sequence[Vec3],
    rhs: Vec3,
    *,
    det_floor: float = DET_FLOOR,
) -> np.ndarray:
    """Solve [c1 c2 c3] x = rhs by Cramer's rule.

    Raises SingularSystem when |det| <= det_floor * |c1| |c2| |c3|, so
    near-degenerate bases fail loudly instead of amplifying noise.
    """
    c1, c2, c3 = (np.asarray(c, dtype=float) for c in columns)
    b = np.asarray(rhs, dtype=float)
    det = float(np.dot(np.cross(c1, c2), c3))
    scale = float(np.linalg.norm(c1) * np.linalg.norm(c2) * np.linalg.norm(c3))
    if abs(det) <= det_floor * scale or scale == 0.0:
        raise SingularSystem(
            f"3x3 system determinant {det:.3e} below floor {det_floor:.1e} * {scale:.3e}"
        )
    x1 = float(np.dot(np.cross(b, c2), c3)) / det
    x2 = float(np.dot(np.cross(c1, b), c3)) / det
    x3 = float(np.dot(np.cross(c1, c2), b)) / det
    return np.array([x1, x2, x3])


def solve2x2(
    a11: float, a12: float, a21: float, a22: float,
    b1: float, b2: float,
    *,
    det_floor: float = DET_FLOOR,
) -> tuple[float, float]:
    """Solve a 2x2 system by Cramer's rule with the same floor policy."""
    det = a11 * a22 - a12 * a21
    scale = np.hypot(a11, a21) * np.hypot(a12, a22)
    if abs(det) <= det_floor * scale or scale == 0.0:
        raise SingularSystem(
            f"2x2 system determinant {det:.3e} below floor {det_floor:.1e} * {scale:.3e}"
        )
    return (b1 * a22 - b2 * a12) / det, (a11 * b2 - a21 * b1) / det


def central_diff(f: Callable[[float], float], t: float, h: float):
    """Second-order central difference (f(t+h) - f(t-h)) / (2h).

    Works for scalar- or vector-valued f.
    """
    if h <= 0.0:
        raise ValueError("step h must be positive")
    fp = f(t + h)
    fm = f(t - h)
    return (np.asarray(fp) - np.asarray(fm)) / (2.0 * h) if np.ndim(fp) else (fp - fm) / (2.0 * h)


def central_diff_5pt(f: Callable[[float], float], t: float, h: float) -> float:
    """Fourth-order five-point first derivative.

    (-f(t+2h) + 8 f(t+h) - 8 f(t-h) + f(t-2h)) / (12 h); the extra order
    lets the caller use a larger h, which keeps evaluation noise from
    dominating the derivative.
    """
    if h <= 0.0:
        raise ValueError("step h must be positive")
    return (-f(t + 2 * h) + 8 * f(t + h) - 8 * f(t - h) + f(t - 2 * h)) / (12.0 * h)


def second_diff(f: Callable[[float], float], t: float, h: float) -> float:
    """Second-order central second derivative."""
    if h <= 0.0:
        raise ValueError("step h must be positive")
    return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h)


def require_increasing(grid: np.ndarray, what: str = "grid") -> np.ndarray:
    """Validate a strictly increasing 1-D grid and return it as float64."""
    g = np.asarray(grid, dtype=float).ravel()
    if g.size >= 2 and not np.all(np.diff(g) > 0.0):
        raise NonMonotoneGrid(f"{what} must be strictly increasing")
    return g


def cumulative_trapezoid(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Cumulative trapezoid integral of y over x, zero at x[0].

    x must be strictly increasing; y may be (n,) or (n, k).
    """
    x = require_increasing(x, "integration grid")
    y = np.asarray(y, dtype=float)
    if y.shape[0] != x.shape[0]:
        raise ValueError("x and y length mismatch")
    dx = np.diff(x)
    pair = 0.5 * (y[1:] + y[:-1])
    steps = pair * dx[:, None] if y.ndim > 1 else pair * dx
    out = np.zeros_like(y)
    np.cumsum(steps, axis=0, out=out[1:])
    return out


def integrate_trapezoid(
    samples: Sequence[tuple[float, float]],
) -> list[tuple[float, float]]:
    """Cumulative trapezoid over (s, value) pairs.

    Returns [(s_i, integral from s_0 to s_i)]; the grid must be strictly
    increasing.
    """
    pts = np.asarray(list(samples), dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("samples must be (s, value) pairs")
    acc = cumulative_trapezoid(pts[:, 0], pts[:, 1])
    return [(float(s), float(a)) for s, a in zip(pts[:, 0], acc)]


def find_root_bracketed(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    root_tol: float = DEFAULT_TOLS.root_tol,
    max_iter: int = 200,
) -> float:
    """Find x in [lo, hi] with |f(x)| <= root_tol, f(lo) and f(hi) of
    opposite sign.

    Secant steps accelerated inside a bisection safeguard; once inside
    tolerance a few extra secant polish steps run while they still shrink
    |f|, so downstream differencing sees a machine-level fixed point
    rather than a value that wanders inside the tolerance band.
    """
    if not (hi > lo):
        raise ValueError("need lo < hi")
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise NoSignChange(
            f"f({lo:.6g}) = {flo:.3e} and f({hi:.6g}) = {fhi:.3e} have the same sign"
        )

    x, fx = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    for _ in range(max_iter):
        # Secant candidate from the bracket endpoints, bisection fallback.
        denom = fhi - flo
        mid = lo + (hi - lo) * (-flo / denom) if denom != 0.0 else 0.5 * (lo + hi)
        width = hi - lo
        if not (lo + 0.01 * width <= mid <= hi - 0.01 * width):
            mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if abs(fmid) < abs(fx):
            x, fx = mid, fmid
        if fmid == 0.0:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
        if abs(fx) <= root_tol or (hi - lo) <= 1e-15 * max(1.0, abs(lo), abs(hi)):
            break
    else:
        raise MaxIterations(
            f"root solve used {max_iter} iterations; best |f| = {abs(fx):.3e}"
        )

    # Polish: secant from the two best points while |f| strictly improves.
    a, fa = lo, flo
    b, fb = hi, fhi
    for _ in range(8):
        denom = fb - fa
        if denom == 0.0:
            break
        cand = b - fb * (b - a) / denom
        if not np.isfinite(cand):
            break
        fc = f(cand)
        if abs(fc) >= abs(fx):
            break
        a, fa = b, fb
        b, fb = cand, fc
        x, fx = cand, fc
        if fc == 0.0:
            break
    if abs(fx) > root_tol:
        raise MaxIterations(
            f"root polish stalled at |f| = {abs(fx):.3e} > root_tol {root_tol:.1e}"
        )
    return x
