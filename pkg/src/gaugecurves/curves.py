"""Spatial curves, their parameter jets, and gauge arc-length data.

A curve only has to produce a CurveJet (position and derivatives up to
third, optionally fourth order, with respect to its own parameter t).
From a jet and a gauge, `arc_reparameterize` produces the arc-length
quantities the frame construction consumes: unit tangent e1 = gamma'/phi
with phi = F(gamma'), its first two arc-length derivatives via the chain
rule, the Birkhoff-orthogonal direction v of the osculating plane, and
dv/ds by central-differencing v along the curve.

The invariant pipeline differentiates the jet data twice more, so
analytic curves should be C^4; sampled curves get their jets from a local
degree-6 least-squares polynomial over a 9-point window, which smooths
mild sample noise and supplies the four derivatives.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import (
    ConfigError,
    DegenerateCurvature,
    DegenerateDirection,
    InsufficientPoints,
    NonMonotoneGrid,
    OutOfRange,
)
from .gauges import Gauge, birkhoff_orthogonal
from .numerics import DEFAULT_TOLS, ToleranceConfig, Vec3, fd_step, vec3


@dataclass(frozen=True)
class CurveJet:
    """Position and t-derivatives of a curve at parameter t."""

    t: float
    gamma: Vec3
    d1: Vec3
    d2: Vec3
    d3: Vec3
    d4: Optional[Vec3] = None


class Curve:
    """Base class: subclasses implement jet(t)."""

    def jet(self, t: float) -> CurveJet:
        raise NotImplementedError

    def gamma(self, t: float) -> Vec3:
        return self.jet(t).gamma

    def spec(self) -> dict:
        raise NotImplementedError


class UnitSpeedHelix(Curve):
    """Circular helix (cos t, sin t, t)/(sqrt(2) + b).

    The 1/(sqrt(2) + b) factor makes it unit gauge speed for the offset
    round gauge with the same parameter b.
    """

    def __init__(self, b: float):
        b = float(b)
        if not (0.0 <= b < 1.0):
            raise ConfigError(f"helix1 parameter must satisfy 0 <= b < 1, got {b}")
        self.b = b
        self._rho = 1.0 / (math.sqrt(2.0) + b)

    def jet(self, t: float) -> CurveJet:
        r = self._rho
        c, s = math.cos(t), math.sin(t)
        return CurveJet(
            t=t,
            gamma=vec3(r * c, r * s, r * t),
            d1=vec3(-r * s, r * c, r),
            d2=vec3(-r * c, -r * s, 0.0),
            d3=vec3(r * s, -r * c, 0.0),
            d4=vec3(r * c, r * s, 0.0),
        )

    def spec(self) -> dict:
        return {"key": f"helix1:{self.b}"}


class ScaledEllipse(Curve):
    """Planar ellipse (0, cos t / sqrt(1-b^2), sin t / (1-b^2)).

    Lives in the x2 x3 plane; the axes match the offset round gauge with
    parameter b so its gauge speed has the closed form 1/g(t) with
    g(t) = sqrt(1 - b^2 sin^2 t) - b cos t.
    """

    def __init__(self, b: float):
        b = float(b)
        if not (0.0 <= b < 1.0):
            raise ConfigError(f"ellipse4 parameter must satisfy 0 <= b < 1, got {b}")
        self.b = b
        m = 1.0 - b * b
        self._ay = 1.0 / math.sqrt(m)
        self._az = 1.0 / m

    def jet(self, t: float) -> CurveJet:
        ay, az = self._ay, self._az
        c, s = math.cos(t), math.sin(t)
        return CurveJet(
            t=t,
            gamma=vec3(0.0, ay * c, az * s),
            d1=vec3(0.0, -ay * s, az * c),
            d2=vec3(0.0, -ay * c, -az * s),
            d3=vec3(0.0, ay * s, -az * c),
            d4=vec3(0.0, ay * c, az * s),
        )

    def spec(self) -> dict:
        return {"key": f"ellipse4:{self.b}"}


class CircularHelix(Curve):
    """(R cos t, R sin t, c t) with radius R > 0 and pitch c."""

    def __init__(self, radius: float, pitch: float):
        radius = float(radius)
        pitch = float(pitch)
        if radius <= 0.0:
            raise ConfigError(f"helix radius must be positive, got {radius}")
        self.radius = radius
        self.pitch = pitch

    def jet(self, t: float) -> CurveJet:
        R, p = self.radius, self.pitch
        c, s = math.cos(t), math.sin(t)
        return CurveJet(
            t=t,
            gamma=vec3(R * c, R * s, p * t),
            d1=vec3(-R * s, R * c, p),
            d2=vec3(-R * c, -R * s, 0.0),
            d3=vec3(R * s, -R * c, 0.0),
            d4=vec3(R * c, R * s, 0.0),
        )

    def spec(self) -> dict:
        return {"key": f"circular_helix:{self.radius}:{self.pitch}"}


class TwistedCubic(Curve):
    """(t, t^2/2, t^3/3): the standard non-planar polynomial test curve."""

    def jet(self, t: float) -> CurveJet:
        return CurveJet(
            t=t,
            gamma=vec3(t, 0.5 * t * t, t * t * t / 3.0),
            d1=vec3(1.0, t, t * t),
            d2=vec3(0.0, 1.0, 2.0 * t),
            d3=vec3(0.0, 0.0, 2.0),
            d4=vec3(0.0, 0.0, 0.0),
        )

    def spec(self) -> dict:
        return {"key": "cubic"}


class PerturbedHelix(Curve):
    """UnitSpeedHelix(b) with an eps * sin(2t) wobble in x3.

    Breaks the screw symmetry of the helix so the fourth invariant is
    visibly non-constant; used as the generic-classification witness.
    """

    def __init__(self, b: float, eps: float):
        self.base = UnitSpeedHelix(b)
        self.b = float(b)
        self.eps = float(eps)

    def jet(self, t: float) -> CurveJet:
        bj = self.base.jet(t)
        e = self.eps
        c2, s2 = math.cos(2.0 * t), math.sin(2.0 * t)
        return CurveJet(
            t=t,
            gamma=bj.gamma + vec3(0.0, 0.0, e * s2),
            d1=bj.d1 + vec3(0.0, 0.0, 2.0 * e * c2),
            d2=bj.d2 + vec3(0.0, 0.0, -4.0 * e * s2),
            d3=bj.d3 + vec3(0.0, 0.0, -8.0 * e * c2),
            d4=bj.d4 + vec3(0.0, 0.0, 16.0 * e * s2),
        )

    def spec(self) -> dict:
        return {"key": f"perturbed_helix:{self.b}:{self.eps}"}


@dataclass(frozen=True)
class SpeedProfile:
    """A positive scaling function with three derivatives."""

    name: str
    f: Callable[[float], float]
    df: Callable[[float], float]
    d2f: Callable[[float], float]
    d3f: Callable[[float], float]


def _two_plus_sin() -> SpeedProfile:
    return SpeedProfile(
        name="two_plus_sin",
        f=lambda t: 2.0 + math.sin(t),
        df=math.cos,
        d2f=lambda t: -math.sin(t),
        d3f=lambda t: -math.cos(t),
    )


def _cubic_rectifier(K: float) -> SpeedProfile:
    """Profile p(t) = w(t)/K where w is the fourth invariant of the
    twisted cubic under the Euclidean gauge:

        w(t) = 18 t (t^4 - 1) / (t^4 + 4 t^2 + 1)^(5/2).

    Scaling the cubic's tangent field by p divides that invariant by p,
    so the scaled curve has fourth invariant identically K: a closed-form
    rectifying witness.  Valid on parameter windows where p > 0 (for
    K < 0 that is 0 < t < 1).
    """
    K = float(K)
    if K == 0.0:
        raise ConfigError("cubic_rectifier constant K must be nonzero")

    def pjet(t: float) -> tuple[float, float, float, float]:
        B = t**4 + 4.0 * t**2 + 1.0
        B1 = 4.0 * t**3 + 8.0 * t
        B2 = 12.0 * t**2 + 8.0
        B3 = 24.0 * t
        N = 18.0 * (t**5 - t)
        N1 = 18.0 * (5.0 * t**4 - 1.0)
        N2 = 360.0 * t**3
        N3 = 1080.0 * t**2
        u = B**-2.5
        u1 = -2.5 * B1 * B**-3.5
        u2 = 8.75 * B1**2 * B**-4.5 - 2.5 * B2 * B**-3.5
        u3 = 26.25 * B1 * B2 * B**-4.5 - 39.375 * B1**3 * B**-5.5 - 2.5 * B3 * B**-3.5
        p0 = N * u / K
        p1 = (N1 * u + N * u1) / K
        p2 = (N2 * u + 2.0 * N1 * u1 + N * u2) / K
        p3 = (N3 * u + 3.0 * N2 * u1 + 3.0 * N1 * u2 + N * u3) / K
        return p0, p1, p2, p3

    return SpeedProfile(
        name=f"cubic_rectifier:{K}",
        f=lambda t: pjet(t)[0],
        df=lambda t: pjet(t)[1],
        d2f=lambda t: pjet(t)[2],
        d3f=lambda t: pjet(t)[3],
    )


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


class SpeedScaledCurve(Curve):
    """Curve defined by scaling a base curve's tangent field:
    gamma'(t) = f(t) * base'(t), anchored at gamma(t0) = base(t0).

    Positions come from Gauss-Legendre quadrature of the tangent field;
    jets are closed-form Leibniz combinations, so the invariant pipeline
    never differentiates the quadrature.
    """

    def __init__(self, base: Curve, profile: SpeedProfile, t0: float = 0.0):
        self.base = base
        self.profile = profile
        self.t0 = float(t0)

    def _tangent(self, t: float) -> Vec3:
        f = self.profile.f(t)
        if f <= 0.0:
            raise DegenerateDirection(
                f"speed profile {self.profile.name} not positive at t = {t:.6g}"
            )
        return f * self.base.jet(t).d1

    def jet(self, t: float) -> CurveJet:
        bj = self.base.jet(t)
        f = self.profile.f(t)
        if f <= 0.0:
            raise DegenerateDirection(
                f"speed profile {self.profile.name} not positive at t = {t:.6g}"
            )
        f1 = self.profile.df(t)
        f2 = self.profile.d2f(t)
        f3 = self.profile.d3f(t)
        d4 = None
        if bj.d4 is not None:
            d4 = f3 * bj.d1 + 3.0 * f2 * bj.d2 + 3.0 * f1 * bj.d3 + f * bj.d4

        # gamma(t) = base(t0) + integral of f * base' over [t0, t].
        a, b = self.t0, t
        pos = self.base.jet(self.t0).gamma.copy()
        if b != a:
            nseg = max(1, int(math.ceil(abs(b - a) / 0.5)))
            edges = np.linspace(a, b, nseg + 1)
            for lo, hi in zip(edges[:-1], edges[1:]):
                mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
                for node, wgt in zip(_GL_NODES, _GL_WEIGHTS):
                    pos = pos + wgt * half * self._tangent(mid + half * node)

        return CurveJet(
            t=t,
            gamma=pos,
            d1=f * bj.d1,
            d2=f1 * bj.d1 + f * bj.d2,
            d3=f2 * bj.d1 + 2.0 * f1 * bj.d2 + f * bj.d3,
            d4=d4,
        )

    def spec(self) -> dict:
        return {"key": f"scaled:{self.base.spec()['key']}:{self.profile.name}"}


class SampledCurve(Curve):
    """Curve given by (t, x, y, z) rows; jets from local polynomial fits."""

    def __init__(self, rows: np.ndarray, order: int = 6):
        rows = np.asarray(rows, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != 4:
            raise ConfigError("sampled curve rows must have columns t, x, y, z")
        if rows.shape[0] < 7:
            raise InsufficientPoints(
                f"sampled curve needs at least 7 rows, got {rows.shape[0]}"
            )
        if not np.all(np.diff(rows[:, 0]) > 0.0):
            raise NonMonotoneGrid("sample parameter column must be strictly increasing")
        if not (3 <= int(order) <= 8):
            raise ConfigError(f"fit order must be in [3, 8], got {order}")
        self.rows = rows
        self.order = int(order)

    def jet(self, t: float) -> CurveJet:
        return jet_from_samples(self.rows, t, order=self.order)

    def spec(self) -> dict:
        return {"samples": self.rows.shape[0], "order": self.order}


def jet_from_samples(samples: np.ndarray, t: float, order: int = 6) -> CurveJet:
    """Jet at t from (t, x, y, z) samples via a windowed polynomial fit.

    Uses up to 9 points around t, fit in the shifted/scaled variable
    (t_i - t)/scale for conditioning; the fit is least-squares, so mild
    sample noise is damped rather than amplified.  Requires at least 3
    samples strictly on each side of t.
    """
    rows = np.asarray(samples, dtype=float)
    ts = rows[:, 0]
    n = rows.shape[0]
    below = int(np.searchsorted(ts, t, side="left"))
    above = n - int(np.searchsorted(ts, t, side="right"))
    if t < ts[0] or t > ts[-1]:
        raise OutOfRange(
            f"t = {t:.6g} outside sample range [{ts[0]:.6g}, {ts[-1]:.6g}]"
        )
    if below < 3 or above < 3:
        raise OutOfRange(
            f"t = {t:.6g} needs 3 samples on each side ({below} below, {above} above)"
        )

    width = min(9, n)
    k0 = min(max(below - width // 2, 0), n - width)
    window = rows[k0 : k0 + width]
    deg = min(int(order), width - 2)

    u = window[:, 0] - t
    scale = float(np.max(np.abs(u)))
    coef = np.polynomial.polynomial.polyfit(u / scale, window[:, 1:], deg)

    def deriv(m: int) -> Vec3:
        return math.factorial(m) * coef[m] / scale**m

    return CurveJet(
        t=float(t),
        gamma=deriv(0),
        d1=deriv(1),
        d2=deriv(2),
        d3=deriv(3),
        d4=deriv(4) if deg >= 4 else None,
    )


def load_curve_csv(source: Union[str, io.TextIOBase], order: int = 6) -> SampledCurve:
    """Load a sampled curve from CSV with header line 't,x,y,z'."""
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            return load_curve_csv(fh, order=order)
    header = source.readline().strip()
    if [c.strip() for c in header.split(",")] != ["t", "x", "y", "z"]:
        raise ConfigError(f"curve CSV must start with header 't,x,y,z', got {header!r}")
    try:
        rows = np.loadtxt(source, delimiter=",", ndmin=2)
    except ValueError as exc:
        raise ConfigError(f"malformed curve CSV: {exc}") from exc
    return SampledCurve(rows, order=order)


@dataclass(frozen=True)
class ArcJet:
    """Arc-length frame data of a curve at one parameter value."""

    s_speed: float
    e1: Vec3
    de1_ds: Vec3
    d2e1_ds2: Vec3
    v: Vec3
    dv_ds: Vec3


def speed(gauge: Gauge, jet: CurveJet) -> float:
    """Gauge speed F(gamma') at the jet's parameter."""
    phi = gauge.eval(jet.d1)
    if phi <= 0.0:
        raise DegenerateDirection(f"curve is not regular at t = {jet.t:.6g}")
    return phi


def arc_reparameterize(
    gauge: Gauge,
    curve: Curve,
    t: float,
    tols: ToleranceConfig = DEFAULT_TOLS,
    method: str = "auto",
) -> ArcJet:
    """Arc-length tangent data and osculating-plane support direction at t.

    e1 and its two s-derivatives come from exact chain rules in the jet;
    v is Birkhoff-orthogonal to span{gamma', gamma''}; dv/ds is a central
    difference of v at t +/- h over the curve parameter divided by the
    gauge speed.
    """
    jet = curve.jet(t)
    phi = speed(gauge, jet)
    d1, d2, d3 = jet.d1, jet.d2, jet.d3

    n2 = float(np.linalg.norm(d1)) * float(np.linalg.norm(d2))
    if n2 == 0.0 or float(np.linalg.norm(np.cross(d1, d2))) / n2 < 1e-8:
        raise DegenerateCurvature(
            f"gamma' and gamma'' nearly parallel at t = {t:.6g}; frame undefined"
        )
    # |d1 x d2| / |d1|^3 is the (parameterization-invariant) Euclidean
    # curvature; below this floor d2 is indistinguishable from rounding or
    # fit noise, which passes the angle check in a random direction.
    cross = float(np.linalg.norm(np.cross(d1, d2)))
    if cross / float(np.linalg.norm(d1)) ** 3 < 1e-10:
        raise DegenerateCurvature(
            f"curvature at t = {t:.6g} is below the resolvable floor; frame undefined"
        )

    g = gauge.gradient(d1)
    H = gauge.hessian(d1)
    phi_t = float(np.dot(g, d2))
    phi_tt = float(np.dot(g, d3) + np.dot(d2, H @ d2))

    e1 = d1 / phi
    de1 = d2 / phi**2 - d1 * (phi_t / phi**3)
    d2e1 = (
        d3 / phi**3
        - 3.0 * d2 * (phi_t / phi**4)
        + d1 * (3.0 * phi_t**2 / phi**5 - phi_tt / phi**4)
    )

    v = birkhoff_orthogonal(gauge, d1, d2, tols, method=method)
    h = fd_step(t, tols.fd_step_scale)
    jp = curve.jet(t + h)
    jm = curve.jet(t - h)
    vp = birkhoff_orthogonal(gauge, jp.d1, jp.d2, tols, method=method, v0=v)
    vm = birkhoff_orthogonal(gauge, jm.d1, jm.d2, tols, method=method, v0=v)
    dv_ds = (vp - vm) / (2.0 * h * phi)

    return ArcJet(s_speed=phi, e1=e1, de1_ds=de1, d2e1_ds2=d2e1, v=v, dv_ds=dv_ds)


_PROFILE_BUILDERS = {
    "two_plus_sin": (0, lambda args: _two_plus_sin()),
    "cubic_rectifier": (1, lambda args: _cubic_rectifier(float(args[0]))),
}


def profile_from_key(name: str, args: Sequence[str]) -> SpeedProfile:
    """Build a speed profile from its registry name and parameters."""
    if name not in _PROFILE_BUILDERS:
        raise ConfigError(f"unknown speed profile {name!r}")
    argc, builder = _PROFILE_BUILDERS[name]
    if len(args) != argc:
        raise ConfigError(f"profile {name!r} takes {argc} parameter(s), got {len(args)}")
    try:
        return builder(args)
    except ValueError as exc:
        raise ConfigError(f"bad parameter for profile {name!r}: {exc}") from exc


def curve_from_key(key: str) -> Curve:
    """Build a registry curve from an inline key like 'helix1:0.5'.

    Keys: helix1:b, ellipse4:b, circular_helix:R:c, cubic,
    perturbed_helix:b:eps, scaled:<base key>:<profile>[:<profile args>].
    """
    parts = [p for p in key.strip().split(":") if p != ""]
    if not parts:
        raise ConfigError("empty curve key")
    name, args = parts[0], parts[1:]
    try:
        if name == "helix1":
            (b,) = args
            return UnitSpeedHelix(float(b))
        if name == "ellipse4":
            (b,) = args
            return ScaledEllipse(float(b))
        if name == "circular_helix":
            radius, pitch = args
            return CircularHelix(float(radius), float(pitch))
        if name == "cubic":
            if args:
                raise ConfigError("curve 'cubic' takes no parameters")
            return TwistedCubic()
        if name == "perturbed_helix":
            b, eps = args
            return PerturbedHelix(float(b), float(eps))
        if name == "scaled":
            for i, tok in enumerate(args):
                if tok in _PROFILE_BUILDERS:
                    base = curve_from_key(":".join(args[:i]))
                    profile = profile_from_key(tok, args[i + 1 :])
                    return SpeedScaledCurve(base, profile)
            raise ConfigError(f"no known speed profile in scaled curve key {key!r}")
    except ValueError as exc:
        raise ConfigError(f"bad curve key {key!r}: {exc}") from exc
    except ConfigError:
        raise
    raise ConfigError(f"unknown curve {name!r}")
