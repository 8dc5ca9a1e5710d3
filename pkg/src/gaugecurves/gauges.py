"""Gauges (asymmetric Minkowski norms) on R^3 and Birkhoff orthogonality.

A gauge F is positive for x != 0, positively homogeneous (F(lam x) =
lam F(x) for lam > 0) and subadditive; its unit ball B = {F <= 1} is a
convex body with the origin interior, smooth and strictly convex for the
concrete gauges here, but not necessarily symmetric (F(-x) != F(x) in
general).

The geometric primitive everything else builds on: given an oriented
plane H = span{X, Y}, the Birkhoff-orthogonal direction v is the point of
the unit sphere S = {F = 1} whose tangent plane is parallel to H, chosen
on the side where {v, X, Y} is positively oriented.  Equivalently v is
the support point of B in the direction n = X x Y, characterised by

    grad F(v) = lam * n,  lam > 0,  F(v) = 1.

Gauges with a closed-form support point (the offset round sphere, the
axis-aligned ellipsoid, the Euclidean ball, and any translate of these)
return it directly; the generic path solves the characterisation above
with a damped Newton iteration and a derivative-free fallback.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConfigError,
    DegenerateDirection,
    NoSignChange,
    OriginNotInterior,
    RootBracketFailure,
    SolverDivergence,
)
from .numerics import (
    DEFAULT_TOLS,
    ToleranceConfig,
    Vec3,
    fd_step,
    find_root_bracketed,
    vec3,
)

# Relative steps for the finite-difference fallbacks.
_GRAD_STEP = 1e-6
_HESS_STEP = 1e-4


class Gauge(abc.ABC):
    """A convex distance function on R^3."""

    @abc.abstractmethod
    def eval(self, x: Vec3) -> float:
        """Value F(x); 0 exactly at the origin."""

    def __call__(self, x: Vec3) -> float:
        return self.eval(x)

    def gradient(self, x: Vec3) -> Vec3:
        """grad F(x) for x != 0; central differences unless overridden."""
        x = np.asarray(x, dtype=float)
        if not np.any(x):
            raise DegenerateDirection("gradient undefined at the origin")
        h = fd_step(float(np.linalg.norm(x)), _GRAD_STEP)
        g = np.empty(3)
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            g[i] = (self.eval(x + e) - self.eval(x - e)) / (2.0 * h)
        return g

    def hessian(self, x: Vec3) -> np.ndarray:
        """Hessian of F at x; central differences of the gradient unless
        overridden."""
        x = np.asarray(x, dtype=float)
        h = fd_step(float(np.linalg.norm(x)), _HESS_STEP)
        H = np.empty((3, 3))
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            H[:, i] = (self.gradient(x + e) - self.gradient(x - e)) / (2.0 * h)
        return 0.5 * (H + H.T)

    def support_point(self, n: Vec3) -> Optional[Vec3]:
        """Closed-form support point of the unit ball in direction n, or
        None when this gauge has no closed form."""
        return None

    @abc.abstractmethod
    def spec(self) -> dict:
        """JSON-compatible description (echoed back by the service)."""


class EuclideanGauge(Gauge):
    """F(x) = |x|, the round unit ball."""

    def eval(self, x: Vec3) -> float:
        return float(np.linalg.norm(x))

    def gradient(self, x: Vec3) -> Vec3:
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        if r == 0.0:
            raise DegenerateDirection("gradient undefined at the origin")
        return x / r

    def hessian(self, x: Vec3) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        if r == 0.0:
            raise DegenerateDirection("hessian undefined at the origin")
        u = x / r
        return (np.eye(3) - np.outer(u, u)) / r

    def support_point(self, n: Vec3) -> Optional[Vec3]:
        n = np.asarray(n, dtype=float)
        r = float(np.linalg.norm(n))
        if r == 0.0:
            raise DegenerateDirection("support direction is zero")
        return n / r

    def spec(self) -> dict:
        return {"kind": "euclidean"}


class RandersGauge(Gauge):
    """F(x) = |x| + b x3 with 0 <= b < 1: the round ball offset along z.

    The unit sphere is the Euclidean unit-radius sphere of the ellipsoidal
    quadratic form obtained by completing the square, which is what makes
    the closed-form support point below exact.
    """

    def __init__(self, b: float):
        b = float(b)
        if not (0.0 <= b < 1.0):
            raise ConfigError(f"randers parameter must satisfy 0 <= b < 1, got {b}")
        self.b = b

    def eval(self, x: Vec3) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.linalg.norm(x) + self.b * x[2])

    def gradient(self, x: Vec3) -> Vec3:
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        if r == 0.0:
            raise DegenerateDirection("gradient undefined at the origin")
        return x / r + vec3(0.0, 0.0, self.b)

    def hessian(self, x: Vec3) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        r = float(np.linalg.norm(x))
        if r == 0.0:
            raise DegenerateDirection("hessian undefined at the origin")
        u = x / r
        return (np.eye(3) - np.outer(u, u)) / r

    def support_point(self, n: Vec3) -> Optional[Vec3]:
        return randers_birkhoff(self.b, np.asarray(n, dtype=float))

    def spec(self) -> dict:
        return {"kind": "randers", "b": self.b}


class EllipsoidGauge(Gauge):
    """F(x) = sqrt((1-b^2)(x1^2 + x2^2) + (1-b^2)^2 x3^2).

    The quadratic gauge whose unit ball is the offset round ball of
    RandersGauge(b) translated so its centre sits at the origin.
    """

    def __init__(self, b: float):
        b = float(b)
        if not (0.0 <= b < 1.0):
            raise ConfigError(f"ellipsoid parameter must satisfy 0 <= b < 1, got {b}")
        self.b = b
        m = 1.0 - b * b
        self._diag = np.array([m, m, m * m])

    def eval(self, x: Vec3) -> float:
        x = np.asarray(x, dtype=float)
        return float(math.sqrt(np.dot(self._diag * x, x)))

    def gradient(self, x: Vec3) -> Vec3:
        x = np.asarray(x, dtype=float)
        f = self.eval(x)
        if f == 0.0:
            raise DegenerateDirection("gradient undefined at the origin")
        return self._diag * x / f

    def hessian(self, x: Vec3) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        f = self.eval(x)
        if f == 0.0:
            raise DegenerateDirection("hessian undefined at the origin")
        g = self._diag * x
        return np.diag(self._diag) / f - np.outer(g, g) / f**3

    def support_point(self, n: Vec3) -> Optional[Vec3]:
        n = np.asarray(n, dtype=float)
        if not np.any(n):
            raise DegenerateDirection("support direction is zero")
        w = n / self._diag
        return w / math.sqrt(float(np.dot(n, w)))

    def spec(self) -> dict:
        return {"kind": "ellipsoid", "b": self.b}


class TranslatedGauge(Gauge):
    """Gauge of the translated unit ball B + a0.

    F(x) is the unique mu > 0 with F_base(x/mu - a0) = 1, found by a
    bracketed root solve; the translate must keep the origin interior,
    i.e. F_base(-a0) < 1.
    """

    def __init__(self, base: Gauge, a0: Vec3, tols: ToleranceConfig = DEFAULT_TOLS):
        a0 = np.asarray(a0, dtype=float)
        if a0.shape != (3,):
            raise ConfigError("a0 must be a 3-vector")
        margin = base.eval(-a0)
        if margin >= 1.0:
            raise OriginNotInterior(
                f"translated ball excludes the origin: F_base(-a0) = {margin:.6g} >= 1"
            )
        self.base = base
        self.a0 = a0
        self._tols = tols

    def eval(self, x: Vec3) -> float:
        x = np.asarray(x, dtype=float)
        if not np.any(x):
            return 0.0

        def g(mu: float) -> float:
            return self.base.eval(x / mu - self.a0) - 1.0

        mu0 = self.base.eval(x)
        if mu0 <= 0.0:
            # Base gauges are positive away from 0; seed from |x| instead.
            mu0 = float(np.linalg.norm(x))
        lo, hi = mu0 / 4.0, mu0 * 4.0
        for _ in range(80):
            if g(lo) > 0.0:
                break
            lo /= 4.0
        else:
            raise RootBracketFailure("no lower bracket for translated gauge value")
        for _ in range(80):
            if g(hi) < 0.0:
                break
            hi *= 4.0
        else:
            raise RootBracketFailure("no upper bracket for translated gauge value")
        try:
            return find_root_bracketed(g, lo, hi, root_tol=self._tols.root_tol)
        except NoSignChange:  # endpoints landed exactly on the root
            return lo if abs(g(lo)) <= abs(g(hi)) else hi

    def gradient(self, x: Vec3) -> Vec3:
        x = np.asarray(x, dtype=float)
        mu = self.eval(x)
        if mu == 0.0:
            raise DegenerateDirection("gradient undefined at the origin")
        z = x / mu - self.a0
        gb = self.base.gradient(z)
        denom = float(np.dot(gb, x))
        if denom == 0.0:
            raise DegenerateDirection("degenerate normalisation in translated gradient")
        return mu * gb / denom

    def support_point(self, n: Vec3) -> Optional[Vec3]:
        # argmax_{B + a0} <n, .> is the base support point shifted by a0.
        base_pt = self.base.support_point(n)
        if base_pt is None:
            return None
        return base_pt + self.a0

    def spec(self) -> dict:
        return {"kind": "translated", "base": self.base.spec(), "a0": [float(c) for c in self.a0]}


class ImplicitGauge(Gauge):
    """Gauge of a convex body given by a level function G <= 1.

    G must be smooth with G(0) < 1 and grow along every ray so the body is
    star-shaped about the origin; strict convexity of {G = 1} is the
    caller's responsibility.  Used for gauges with no closed form (and, in
    tests, for deliberately broken bodies).
    """

    def __init__(
        self,
        level: Callable[[Vec3], float],
        grad_level: Optional[Callable[[Vec3], Vec3]] = None,
        name: str = "implicit",
        tols: ToleranceConfig = DEFAULT_TOLS,
    ):
        if level(np.zeros(3)) >= 1.0:
            raise OriginNotInterior("level function must have G(0) < 1")
        self.level = level
        self.grad_level = grad_level
        self.name = name
        self._tols = tols

    def eval(self, x: Vec3) -> float:
        x = np.asarray(x, dtype=float)
        if not np.any(x):
            return 0.0

        def g(mu: float) -> float:
            return float(self.level(x / mu)) - 1.0

        mu0 = float(np.linalg.norm(x))
        lo, hi = mu0 / 4.0, mu0 * 4.0
        for _ in range(80):
            if g(lo) > 0.0:
                break
            lo /= 4.0
        else:
            raise RootBracketFailure("no lower bracket for implicit gauge value")
        for _ in range(80):
            if g(hi) < 0.0:
                break
            hi *= 4.0
        else:
            raise RootBracketFailure("no upper bracket for implicit gauge value")
        try:
            return find_root_bracketed(g, lo, hi, root_tol=self._tols.root_tol)
        except NoSignChange:
            return lo if abs(g(lo)) <= abs(g(hi)) else hi

    def _grad_level_at(self, z: Vec3) -> Vec3:
        if self.grad_level is not None:
            return np.asarray(self.grad_level(z), dtype=float)
        h = fd_step(float(np.linalg.norm(z)), _GRAD_STEP)
        g = np.empty(3)
        for i in range(3):
            e = np.zeros(3)
            e[i] = h
            g[i] = (float(self.level(z + e)) - float(self.level(z - e))) / (2.0 * h)
        return g

    def gradient(self, x: Vec3) -> Vec3:
        x = np.asarray(x, dtype=float)
        f = self.eval(x)
        if f == 0.0:
            raise DegenerateDirection("gradient undefined at the origin")
        z = x / f
        gl = self._grad_level_at(z)
        denom = float(np.dot(gl, z))
        if denom == 0.0:
            raise DegenerateDirection("degenerate normalisation in implicit gradient")
        return gl / denom

    def spec(self) -> dict:
        return {"kind": "implicit", "name": self.name}


def randers_birkhoff(b: float, y: Vec3) -> Vec3:
    """Closed-form support point of the RandersGauge(b) unit ball in
    direction y.

    With D = sqrt((1-b^2)(y1^2 + y2^2) + y3^2):

        v = (y1/D, y2/D, (y3/D - b) / (1-b^2)).

    Derivation: the unit ball is the centred ellipsoid of EllipsoidGauge(b)
    translated by -(0, 0, b/(1-b^2)); take the quadratic-form argmax and
    shift it back.
    """
    if not (0.0 <= b < 1.0):
        raise ConfigError(f"randers parameter must satisfy 0 <= b < 1, got {b}")
    y = np.asarray(y, dtype=float)
    m = 1.0 - b * b
    D = math.sqrt(m * (y[0] * y[0] + y[1] * y[1]) + y[2] * y[2])
    if D == 0.0:
        raise DegenerateDirection("support direction is zero")
    return vec3(y[0] / D, y[1] / D, (y[2] / D - b) / m)


def _newton_support(
    gauge: Gauge,
    n_hat: Vec3,
    tols: ToleranceConfig,
    v0: Optional[Vec3] = None,
) -> tuple[Vec3, float]:
    """Newton iteration on (grad F(v) - lam n, F(v) - 1) = 0.

    Returns (v, residual_inf_norm) for the best iterate; the caller
    decides whether that is good enough.
    """
    if v0 is None:
        f0 = gauge.eval(n_hat)
        v = n_hat / f0 if f0 > 0.0 else n_hat.copy()
    else:
        v = np.asarray(v0, dtype=float).copy()
    lam = float(np.dot(gauge.gradient(v), n_hat))

    def residual(vv: Vec3, ll: float) -> np.ndarray:
        return np.concatenate([gauge.gradient(vv) - ll * n_hat, [gauge.eval(vv) - 1.0]])

    r = residual(v, lam)
    best_v, best_r = v.copy(), float(np.max(np.abs(r)))
    for _ in range(60):
        H = gauge.hessian(v)
        J = np.zeros((4, 4))
        J[:3, :3] = H
        J[:3, 3] = -n_hat
        J[3, :3] = gauge.gradient(v)
        try:
            delta = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            delta = np.linalg.lstsq(J, -r, rcond=None)[0]
        # Backtrack until the residual actually drops.
        alpha = 1.0
        cur = float(np.max(np.abs(r)))
        for _ in range(12):
            v_new = v + alpha * delta[:3]
            lam_new = lam + alpha * delta[3]
            r_new = residual(v_new, lam_new)
            if float(np.max(np.abs(r_new))) < cur:
                break
            alpha *= 0.5
        else:
            break
        v, lam, r = v_new, lam_new, r_new
        rn = float(np.max(np.abs(r)))
        if rn < best_r and lam > 0.0:
            best_v, best_r = v.copy(), rn
        if rn <= 1e-14:
            break
    return best_v, best_r


def _golden_support(gauge: Gauge, n_hat: Vec3) -> Vec3:
    """Derivative-free support point: maximise <n, u>/F(u) over directions
    u(theta, phi) by alternating golden-section sweeps."""
    phi0 = math.asin(max(-1.0, min(1.0, n_hat[2])))
    theta0 = math.atan2(n_hat[1], n_hat[0])

    def score(theta: float, phi: float) -> float:
        u = vec3(math.cos(phi) * math.cos(theta), math.cos(phi) * math.sin(theta), math.sin(phi))
        f = gauge.eval(u)
        return float(np.dot(n_hat, u)) / f if f > 0.0 else -math.inf

    inv_gr = (math.sqrt(5.0) - 1.0) / 2.0

    def golden_max(fun, lo: float, hi: float) -> float:
        a, b = lo, hi
        c = b - inv_gr * (b - a)
        d = a + inv_gr * (b - a)
        fc, fd = fun(c), fun(d)
        for _ in range(90):
            if fc >= fd:
                b, d, fd = d, c, fc
                c = b - inv_gr * (b - a)
                fc = fun(c)
            else:
                a, c, fc = c, d, fd
                d = a + inv_gr * (b - a)
                fd = fun(d)
            if (b - a) < 1e-14:
                break
        return 0.5 * (a + b)

    theta, phi = theta0, phi0
    for width in (math.pi / 2.0, 1e-2, 1e-4):
        theta = golden_max(lambda th: score(th, phi), theta - width, theta + width)
        phi_lo = max(phi - width, -math.pi / 2 + 1e-9)
        phi_hi = min(phi + width, math.pi / 2 - 1e-9)
        phi = golden_max(lambda ph: score(theta, ph), phi_lo, phi_hi)
    u = vec3(math.cos(phi) * math.cos(theta), math.cos(phi) * math.sin(theta), math.sin(phi))
    return u / gauge.eval(u)


def birkhoff_orthogonal(
    gauge: Gauge,
    X: Vec3,
    Y: Vec3,
    tols: ToleranceConfig = DEFAULT_TOLS,
    method: str = "auto",
    v0: Optional[Vec3] = None,
) -> Vec3:
    """Direction v on the unit sphere Birkhoff-orthogonal to span{X, Y},
    with {v, X, Y} positively oriented.

    method "auto" prefers the gauge's closed-form support point and falls
    back to Newton; "newton" forces the iterative path (used to check the
    closed forms against an independent computation).  v0 optionally warm
    starts Newton.
    """
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    n = np.cross(X, Y)
    nn = float(np.linalg.norm(n))
    if nn <= 1e-14 * float(np.linalg.norm(X) * np.linalg.norm(Y)) or nn == 0.0:
        raise DegenerateDirection("X and Y are (nearly) linearly dependent")
    n_hat = n / nn

    if method not in ("auto", "newton"):
        raise ConfigError(f"unknown birkhoff method {method!r}")
    if method == "auto":
        sp = gauge.support_point(n_hat)
        if sp is not None:
            return sp

    v, res = _newton_support(gauge, n_hat, tols, v0=v0)
    accept = 1e-9
    if res > accept or float(np.dot(gauge.gradient(v), n_hat)) <= 0.0:
        # Re-locate the basin derivative-free, then polish with Newton.
        v_g = _golden_support(gauge, n_hat)
        v2, res2 = _newton_support(gauge, n_hat, tols, v0=v_g)
        if res2 <= res:
            v, res = v2, res2
        if res > accept:
            raise SolverDivergence(
                f"support-point iteration stalled at residual {res:.3e}"
            )
    return v


@dataclass(frozen=True)
class GaugeAudit:
    """Maximum violations of the gauge axioms over a random sample."""

    positivity: float
    homogeneity: float
    subadditivity: float
    euler: float
    sample_count: int

    def worst(self) -> float:
        return max(self.positivity, self.homogeneity, self.subadditivity, self.euler)

    def passed(self, tol: float) -> bool:
        return bool(self.worst() <= tol)


def verify_gauge(gauge: Gauge, sample_count: int = 1000, seed: int = 0) -> GaugeAudit:
    """Sample the gauge axioms and report maximum violations.

    Checks positivity away from the origin, positive 1-homogeneity,
    subadditivity, and the Euler identity <grad F(x), x> = F(x); all but
    positivity are reported relative to max(1, magnitude).
    """
    if sample_count < 2:
        raise ConfigError("sample_count must be at least 2")
    rng = np.random.default_rng(seed)
    dirs = rng.standard_normal((sample_count, 3))
    dirs /= np.maximum(np.linalg.norm(dirs, axis=1)[:, None], 1e-12)
    radii = np.exp(rng.uniform(math.log(0.25), math.log(4.0), sample_count))
    pts = dirs * radii[:, None]
    lams = np.exp(rng.uniform(math.log(0.1), math.log(10.0), sample_count))

    vals = np.array([gauge.eval(p) for p in pts])
    positivity = max(0.0, float(-np.min(vals)))

    homog = 0.0
    euler = 0.0
    for p, f, lam in zip(pts, vals, lams):
        fl = gauge.eval(lam * p)
        homog = max(homog, abs(fl - lam * f) / max(1.0, lam * abs(f)))
        g = gauge.gradient(p)
        euler = max(euler, abs(float(np.dot(g, p)) - f) / max(1.0, abs(f)))

    sub = 0.0
    for i in range(sample_count - 1):
        fxy = gauge.eval(pts[i] + pts[i + 1])
        gap = (fxy - vals[i] - vals[i + 1]) / max(1.0, vals[i] + vals[i + 1])
        sub = max(sub, gap)

    return GaugeAudit(
        positivity=positivity,
        homogeneity=homog,
        subadditivity=max(0.0, sub),
        euler=euler,
        sample_count=sample_count,
    )


def gauge_from_json(obj: dict) -> Gauge:
    """Build a gauge from its JSON description.

    Kinds: {"kind": "euclidean"}, {"kind": "randers", "b": b},
    {"kind": "ellipsoid", "b": b},
    {"kind": "translated", "base": <gauge>, "a0": [x, y, z]}.
    """
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError("gauge spec must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "euclidean":
        return EuclideanGauge()
    if kind == "randers":
        if "b" not in obj:
            raise ConfigError("randers gauge needs field 'b'")
        return RandersGauge(obj["b"])
    if kind == "ellipsoid":
        if "b" not in obj:
            raise ConfigError("ellipsoid gauge needs field 'b'")
        return EllipsoidGauge(obj["b"])
    if kind == "translated":
        if "base" not in obj or "a0" not in obj:
            raise ConfigError("translated gauge needs fields 'base' and 'a0'")
        a0 = obj["a0"]
        if not (isinstance(a0, (list, tuple)) and len(a0) == 3):
            raise ConfigError("a0 must be a list of three numbers")
        return TranslatedGauge(gauge_from_json(obj["base"]), vec3(*a0))
    raise ConfigError(f"unknown gauge kind {kind!r}")
