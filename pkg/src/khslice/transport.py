"""Numerical symplectic parallel transport in the model Lefschetz fibrations.

Models (standard flat Kahler metric on C^3):

* A1:     pi(a, b, c) = a^2 + b^2 + c^2        (one critical value, 0)
* A2(d):  pi(a, b, c) = a^3 - a d + b c        (critical values -+ sqrt(4 d^3/27))

The horizontal lift of a base velocity v at a fiber point p is
H = conj(grad pi) / |grad pi|^2 * v, where grad pi is the vector of
holomorphic partials; integrating H along a path is naive symplectic
parallel transport.  Each accepted Runge-Kutta step is followed by a
Newton projection back onto the fiber, so the fiber residual stays at
the projection tolerance independently of path length.  The rescaled
variant subtracts sigma times the fiberwise component of the radial
Liouville field (half the Euler field of the flat form) and
post-composes with the fiber Liouville flow for the same total time.

Vanishing cycles: for A1 over t > 0 the cycle is sqrt(t) S^2 in the real
locus (Fibonacci-lattice sampled); for A2 over z = zeta_minus + eps the
cycle Lambda_alpha fibers in circles |b| = |c|, b c = -(a^3 - a d - z)
over the segment between the two rightmost real roots of
a^3 - a d - z = 0.  The monodromy path gamma(d, eps) runs to 0, makes a
positive full circle around zeta_plus, and returns.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .slices import critical_values


class TransportError(RuntimeError):
    pass


class NearCriticalError(TransportError):
    """Raised when the transported cloud approaches Crit(pi); carries the
    offending gradient norm and path parameter."""

    def __init__(self, grad_norm: float, s: float):
        super().__init__(f"|grad pi| = {grad_norm:.3e} too small at path parameter {s:.6f}")
        self.grad_norm = grad_norm
        self.s = s


# -- model fibrations ----------------------------------------------------------


@dataclass(frozen=True)
class ModelFibration:
    kind: str
    d: complex = 0.0

    @staticmethod
    def a1() -> "ModelFibration":
        return ModelFibration("A1")

    @staticmethod
    def a2(d: complex) -> "ModelFibration":
        if d == 0:
            raise ValueError("A2 needs d != 0 for two distinct critical values")
        return ModelFibration("A2", complex(d))

    def value(self, pts: np.ndarray) -> np.ndarray:
        a, b, c = pts[..., 0], pts[..., 1], pts[..., 2]
        if self.kind == "A1":
            return a * a + b * b + c * c
        return a**3 - a * self.d + b * c

    def gradient(self, pts: np.ndarray) -> np.ndarray:
        """Vector of holomorphic partials (d pi / d a, d pi / d b, d pi / d c)."""
        a, b, c = pts[..., 0], pts[..., 1], pts[..., 2]
        if self.kind == "A1":
            return np.stack([2 * a, 2 * b, 2 * c], axis=-1)
        return np.stack([3 * a * a - self.d, c, b], axis=-1)

    def critical_values(self):
        if self.kind == "A1":
            return (0j,)
        return critical_values(self.d)


def horizontal(model: ModelFibration, p: np.ndarray, v: complex, min_grad: float = 1e-10) -> np.ndarray:
    """The unique lift H of the base direction v with D pi(H) = v, orthogonal
    to the fiber tangent space in the flat metric."""
    p = np.asarray(p, dtype=complex)
    g = model.gradient(p)
    g2 = np.sum(np.abs(g) ** 2, axis=-1)
    if np.min(g2) < min_grad**2:
        raise NearCriticalError(float(np.sqrt(np.min(g2))), float("nan"))
    return np.conj(g) * (v / g2)[..., None]


# -- paths ----------------------------------------------------------------------


@dataclass(frozen=True)
class TransportPath:
    """Piecewise path in the base: segments are ('line', z0, z1) or
    ('circle', center, radius, phi0, phi1)."""

    segments: tuple

    def n_segments(self) -> int:
        return len(self.segments)

    def point(self, seg: int, s: float) -> complex:
        kind, *args = self.segments[seg]
        if kind == "line":
            z0, z1 = args
            return z0 + (z1 - z0) * s
        center, radius, p0, p1 = args
        return center + radius * np.exp(1j * (p0 + (p1 - p0) * s))

    def velocity(self, seg: int, s: float) -> complex:
        kind, *args = self.segments[seg]
        if kind == "line":
            z0, z1 = args
            return z1 - z0
        center, radius, p0, p1 = args
        return radius * 1j * (p1 - p0) * np.exp(1j * (p0 + (p1 - p0) * s))

    def start(self) -> complex:
        return self.point(0, 0.0)

    def end(self) -> complex:
        return self.point(self.n_segments() - 1, 1.0)

    def reversed(self) -> "TransportPath":
        out = []
        for kind, *args in reversed(self.segments):
            if kind == "line":
                z0, z1 = args
                out.append(("line", z1, z0))
            else:
                center, radius, p0, p1 = args
                out.append(("circle", center, radius, p1, p0))
        return TransportPath(tuple(out))


def line_path(z0: complex, z1: complex) -> TransportPath:
    return TransportPath((("line", complex(z0), complex(z1)),))


def circle_loop(t: complex, turns: float = 1.0) -> TransportPath:
    """The loop s -> t exp(i s) around 0, traversed ccw ``turns`` times."""
    t = complex(t)
    r = abs(t)
    p0 = math.atan2(t.imag, t.real)
    return TransportPath((("circle", 0j, r, p0, p0 + 2 * math.pi * turns),))


def gamma_path(d: float, eps: float, power: int = 1) -> TransportPath:
    """The path from zeta_minus + eps to 0, a positive full circle around
    zeta_plus iterated ``power`` times, and back."""
    zm, zp = critical_values(d)
    z0 = zm + eps
    segs = [("line", z0, 0j)]
    for _ in range(power):
        segs.append(("circle", zp, abs(zp), math.pi, 3 * math.pi))
    segs.append(("line", 0j, z0))
    return TransportPath(tuple(segs))


# -- point clouds ---------------------------------------------------------------


@dataclass
class PointCloud:
    """Sampled Lagrangian in one fiber: points in C^3, the fiber value, and
    the sample parameters identifying each point on the model sphere."""

    points: np.ndarray  # (N, 3) complex
    fiber: complex
    params: np.ndarray | None = None

    def __len__(self):
        return len(self.points)

    def max_fiber_residual(self, model: ModelFibration) -> float:
        return float(np.max(np.abs(model.value(self.points) - self.fiber)))


def fibonacci_sphere(n: int) -> np.ndarray:
    """Quasi-uniform deterministic samples of the unit 2-sphere."""
    k = np.arange(n, dtype=float)
    golden = (1 + 5**0.5) / 2
    z = 1 - (2 * k + 1) / n
    theta = 2 * math.pi * k / golden
    r = np.sqrt(np.maximum(0.0, 1 - z * z))
    return np.stack([r * np.cos(theta), r * np.sin(theta), z], axis=-1)


def vanishing_cycle(t: float, n_samples: int = 200) -> PointCloud:
    """The A1 vanishing cycle sqrt(t) S^2 over t > 0."""
    if not t > 0:
        raise ValueError("the A1 vanishing cycle needs t > 0")
    pts = math.sqrt(t) * fibonacci_sphere(n_samples)
    return PointCloud(pts.astype(complex), complex(t), params=pts / math.sqrt(t))


def a2_cycle(
    d: float, eps: float, n_samples: int = 200, n_a: int | None = None, n_th: int | None = None
) -> PointCloud:
    """Samples of Lambda_alpha over z = zeta_minus + eps: circles
    |b| = |c|, b c = w(a) >= 0 over the segment [r2, r3] between the two
    rightmost roots of a^3 - a d = z."""
    if not (d > 0 and 0 < eps):
        raise ValueError("need d > 0 and eps > 0")
    if not eps < d ** 1.5 / 100:
        raise ValueError("need eps << d (enforced: eps < d^(3/2)/100)")
    zm, _zp = critical_values(d)
    z = zm.real + eps
    roots = np.sort(np.roots([1.0, 0.0, -d, -z]).real)
    r1, r2, r3 = roots
    if n_a is None:
        n_a = max(4, int(round(math.sqrt(n_samples / 2))))
    if n_th is None:
        n_th = max(4, n_samples // n_a)
    a_vals = r2 + (r3 - r2) * (np.arange(n_a) + 0.5) / n_a
    th_vals = 2 * math.pi * np.arange(n_th) / n_th
    pts = []
    params = []
    for ia, a in enumerate(a_vals):
        w = -(a**3 - a * d - z)
        w = max(w, 0.0)
        rad = math.sqrt(w)
        for it, th in enumerate(th_vals):
            pts.append([a, rad * np.exp(1j * th), rad * np.exp(-1j * th)])
            params.append([ia, it])
    # the two pole points of the sphere
    for a_pole in (r2, r3):
        pts.append([a_pole, 0j, 0j])
        params.append([-1, 0] if a_pole == r2 else [-2, 0])
    return PointCloud(np.array(pts, dtype=complex), complex(z), params=np.array(params))


# -- the integrator --------------------------------------------------------------

# Dormand-Prince 5(4) tableau
_DP_A = [
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
]
_DP_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_DP_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_DP_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)


def _project_to_fiber(model, pts, target, tol=1e-12, max_iter=6):
    for _ in range(max_iter):
        r = model.value(pts) - target
        if np.max(np.abs(r)) < tol:
            return pts
        g = model.gradient(pts)
        g2 = np.sum(np.abs(g) ** 2, axis=-1)
        pts = pts - np.conj(g) * (r / g2)[..., None]
    return pts


def _fiber_liouville(model, pts):
    """Fiberwise component of the radial Liouville field Z = p / 2."""
    z = pts / 2
    g = model.gradient(pts)
    g2 = np.sum(np.abs(g) ** 2, axis=-1)
    coeff = np.sum(z * g, axis=-1) / g2  # D pi(z) / |grad|^2
    return z - np.conj(g) * coeff[..., None]


def transport(
    model: ModelFibration,
    path: TransportPath,
    cloud: PointCloud,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    fiber_tol: float = 1e-9,
    min_grad: float = 1e-10,
    rescale_sigma: float | None = None,
    record_length: bool = False,
):
    """Integrate the (optionally rescaled) horizontal field along the path.

    Returns the transported cloud, or ``(cloud, lengths)`` with per-point
    path lengths when ``record_length`` is set.
    """
    pts = np.array(cloud.points, dtype=complex)
    if abs(model.value(pts).mean() - path.start()) > 1e-6:
        raise TransportError("cloud does not sit over the path start")
    lengths = np.zeros(len(pts))
    total_time = 0.0

    def rhs(seg, s, y):
        g = model.gradient(y)
        g2 = np.sum(np.abs(g) ** 2, axis=-1)
        gmin = float(np.sqrt(np.min(g2)))
        if gmin < min_grad:
            raise NearCriticalError(gmin, s)
        out = np.conj(g) * (path.velocity(seg, s) / g2)[..., None]
        if rescale_sigma:
            out = out - rescale_sigma * _fiber_liouville(model, y)
        return out

    for seg in range(path.n_segments()):
        s = 0.0
        h = 0.05
        while s < 1.0:
            h = min(h, 1.0 - s)
            k = []
            try:
                for stage in range(7):
                    ys = pts
                    if stage:
                        acc = sum(_DP_A[stage][m] * k[m] for m in range(stage))
                        ys = pts + h * acc
                    k.append(rhs(seg, s + _DP_C[stage] * h, ys))
            except NearCriticalError as err:
                raise NearCriticalError(err.grad_norm, seg + s) from None
            y5 = pts + h * sum(b * ki for b, ki in zip(_DP_B5, k))
            y4 = pts + h * sum(b * ki for b, ki in zip(_DP_B4, k))
            err = np.max(np.sqrt(np.sum(np.abs(y5 - y4) ** 2, axis=-1)))
            scale = atol + rtol * max(1.0, float(np.max(np.abs(y5))))
            if err <= scale:
                if record_length:
                    lengths += np.sqrt(np.sum(np.abs(y5 - pts) ** 2, axis=-1))
                pts = y5
                s += h
                total_time += h
                if not rescale_sigma:
                    pts = _project_to_fiber(model, pts, path.point(seg, s))
            ratio = (scale / err) ** 0.2 if err > 0 else 2.0
            h = min(0.25, h * min(2.0, max(0.2, 0.9 * ratio)))
            if h < 1e-12:
                raise TransportError(f"step size underflow at segment {seg}, s = {s}")

    if rescale_sigma:
        # post-compose with the fiber Liouville flow for the elapsed time
        tau = 0.0
        target = path.end()
        h = 0.05
        goal = rescale_sigma * total_time
        while tau < goal:
            h = min(h, goal - tau)
            z1 = _fiber_liouville(model, pts)
            z2 = _fiber_liouville(model, pts + 0.5 * h * z1)
            z3 = _fiber_liouville(model, pts + 0.5 * h * z2)
            z4 = _fiber_liouville(model, pts + h * z3)
            pts = pts + (h / 6) * (z1 + 2 * z2 + 2 * z3 + z4)
            pts = _project_to_fiber(model, pts, target)
            tau += h

    pts = _project_to_fiber(model, pts, path.end())
    out = PointCloud(pts, path.end(), params=cloud.params)
    if out.max_fiber_residual(model) > fiber_tol:
        raise TransportError("fiber residual above tolerance after transport")
    if record_length:
        return out, lengths
    return out


# -- A1 checks -------------------------------------------------------------------


@dataclass(frozen=True)
class A1MonodromyReport:
    t: float
    n_samples: int
    hausdorff_to_cycle: float
    max_antipode_deviation: float
    antipodal_ok: bool
    tol: float

    @property
    def ok(self) -> bool:
        return self.hausdorff_to_cycle < self.tol


def a1_monodromy_check(t: float, n_samples: int = 200, tol: float = 1e-4) -> A1MonodromyReport:
    """Transport the vanishing cycle once around the full loop; the image
    must return to the cycle setwise (Picard-Lefschetz/Dehn twist), and each
    sample lands (numerically) on the antipode of its start; the pointwise
    antipodality is reported softly."""
    model = ModelFibration.a1()
    cloud = vanishing_cycle(t, n_samples)
    out = transport(model, circle_loop(t), cloud)
    pts = out.points
    radial = np.sqrt(np.sum(np.abs(pts.real) ** 2, axis=-1))
    dist = np.sqrt(
        np.sum(pts.imag**2, axis=-1) + (radial - math.sqrt(t)) ** 2
    )
    hausdorff = float(np.max(dist))
    anti = float(np.max(np.abs(pts + cloud.points)))
    return A1MonodromyReport(t, n_samples, hausdorff, anti, anti < 1e-3, tol)


# -- A2 monodromy and the curve comparison ----------------------------------------


@dataclass(frozen=True)
class A2MonodromyReport:
    d: float
    eps: float
    power: int
    max_bc_asymmetry: float
    endpoint_pattern: int
    interior_pattern: int
    arc_points: np.ndarray

    def pattern(self) -> tuple[int, int]:
        return (self.endpoint_pattern, self.interior_pattern)


def a2_monodromy(d: float, eps: float, power: int, n_samples: int = 200, bc_tol: float = 1e-4):
    """Transport Lambda_alpha around gamma(d,eps)^power; asserts the image
    stays in mu^-1(0) (max ||b|-|c|| below tolerance) and returns the
    a-coordinate projection as a planar arc, with its intersection pattern
    against the original segment alpha = [r2, r3]."""
    model = ModelFibration.a2(d)
    cloud = a2_cycle(d, eps, n_samples)
    path = gamma_path(d, eps, abs(power)) if power else None
    if power < 0:
        path = path.reversed()
    if power == 0:
        out = cloud
    else:
        out = transport(model, path, cloud, rtol=1e-11)
    bc = float(np.max(np.abs(np.abs(out.points[:, 1]) - np.abs(out.points[:, 2]))))
    if bc > bc_tol:
        raise TransportError(f"transported cycle leaves mu^-1(0): {bc:.2e}")

    zm, _zp = critical_values(d)
    z = zm.real + eps
    roots = np.sort(np.roots([1.0, 0.0, -d, -z]).real)
    r1, r2, r3 = roots

    # adaptively refined single-meridian trace: the twist stretches the
    # source parametrization enormously near the moving root, so uniform
    # sampling corner-cuts the spiral
    arc = _trace_projected_arc(model, path, d, eps, r2, r3)

    span = r3 - r2
    tolr = 0.05 * span
    ends = 0
    for pole in (arc[0], arc[-1]):
        if min(abs(pole - r2), abs(pole - r3)) < tolr:
            ends += 1
    interior = _reduced_segment_crossings(arc, (r1, r2, r3))
    return A2MonodromyReport(d, eps, power, bc, ends, interior, arc)


def _reduced_segment_crossings(arc: np.ndarray, roots) -> int:
    """Minimal number of crossings of the traced arc with the open segment
    (r2, r3): read off the sequence of real-axis crossings binned by the
    intervals between the roots, cancel adjacent equal letters (bigons with
    the axis) and strip letters adjacent to the arc's own endpoints, then
    count the (r2, r3) letters."""
    r1, r2, r3 = roots
    cuts = [r1, r2, r3]
    word: list[int] = []
    im = arc.imag
    noise = 1e-9
    for idx in range(len(arc) - 1):
        y0, y1 = im[idx], im[idx + 1]
        if y0 * y1 < 0 and max(abs(y0), abs(y1)) > noise:
            x = (arc[idx].real * abs(y1) + arc[idx + 1].real * abs(y0)) / (abs(y0) + abs(y1))
            word.append(sum(1 for c in cuts if x > c))  # interval index 0..3
    # which punctures the arc ends at (nearest root)
    def nearest(z):
        return int(np.argmin([abs(z - c) for c in cuts]))

    p_start, p_end = nearest(arc[0]), nearest(arc[-1])
    changed = True
    while changed and word:
        changed = False
        for idx in range(len(word) - 1):
            if word[idx] == word[idx + 1]:
                del word[idx : idx + 2]
                changed = True
                break
        if word and word[0] in (p_start, p_start + 1):
            word.pop(0)
            changed = True
        if word and word[-1] in (p_end, p_end + 1):
            word.pop()
            changed = True
    return sum(1 for w in word if w == 2)


def _meridian_points(d: float, z: float, r2: float, r3: float, ts: np.ndarray) -> np.ndarray:
    a = r2 + (r3 - r2) * ts
    w = np.maximum(-(a**3 - a * d - z), 0.0)
    rad = np.sqrt(w)
    return np.stack([a.astype(complex), rad.astype(complex), rad.astype(complex)], axis=-1)


def _trace_projected_arc(
    model: ModelFibration,
    path: TransportPath | None,
    d: float,
    eps: float,
    r2: float,
    r3: float,
    max_pts: int = 4000,
) -> np.ndarray:
    zm, _zp = critical_values(d)
    z = zm.real + eps
    ts = list(np.linspace(0.0, 1.0, 257))
    pts = _meridian_points(d, z, r2, r3, np.array(ts))
    if path is not None:
        pts = transport(model, path, PointCloud(pts, complex(z)), rtol=1e-11).points
    images = {t: p for t, p in zip(ts, pts)}
    gap = 0.05 * (r3 - r2)
    for _round in range(12):
        keys = sorted(images)
        new_ts = []
        for t0, t1 in zip(keys, keys[1:]):
            if abs(images[t0][0] - images[t1][0]) > gap:
                new_ts.append(0.5 * (t0 + t1))
        if not new_ts or len(images) + len(new_ts) > max_pts:
            break
        new_pts = _meridian_points(d, z, r2, r3, np.array(new_ts))
        if path is not None:
            new_pts = transport(model, path, PointCloud(new_pts, complex(z)), rtol=1e-11).points
        for t, p in zip(new_ts, new_pts):
            images[t] = p
    keys = sorted(images)
    return np.array([images[t][0] for t in keys])


# -- gradient estimates ------------------------------------------------------------


@dataclass(frozen=True)
class GradientEstimateReport:
    kind: str
    n_samples: int
    fitted_bound: float
    doubled_bound: float

    @property
    def stable(self) -> bool:
        return abs(self.fitted_bound - self.doubled_bound) <= 0.2 * max(
            self.fitted_bound, self.doubled_bound
        )

    @property
    def ok(self) -> bool:
        return self.fitted_bound > 1e-3 and self.stable


def gradient_estimate_check(
    model: ModelFibration, radius: float = 1.0, n_samples: int = 100_000, seed: int = 0
) -> GradientEstimateReport:
    """Empirical constant in |grad pi|^2 >= nu^-1 |pi| (A1), respectively
    |grad pi_d|^2 >= nu^-1 |d|^(1/2) min |pi_d - zeta_+-| (A2), over a ball."""
    if radius > 2:
        raise ValueError("region radius must be <= 2")

    def run(n):
        rng = np.random.default_rng(seed)
        pts = rng.standard_normal((n, 6))
        norms = np.sqrt(np.sum(pts**2, axis=-1))
        radial = rng.random(n) ** (1 / 6)
        pts = pts / norms[:, None] * (radius * radial)[:, None]
        z = (pts[:, :3] + 1j * pts[:, 3:]).astype(complex)
        g2 = np.sum(np.abs(model.gradient(z)) ** 2, axis=-1)
        if model.kind == "A1":
            ref = np.abs(model.value(z))
        else:
            zm, zp = model.critical_values()
            val = model.value(z)
            ref = abs(model.d) ** 0.5 * np.minimum(np.abs(val - zm), np.abs(val - zp))
        mask = ref > 1e-12
        return float(np.min(g2[mask] / ref[mask]))

    return GradientEstimateReport(model.kind, n_samples, run(n_samples), run(2 * n_samples))


# -- Maslov corrections for Markov II ----------------------------------------------


def maslov_markov(sign: str | int, d: float = 1.0, eps: float = 1e-3, n_samples: int = 512) -> int:
    """Morse index of the local graph function at the unique intersection
    point of Lambda_alpha with its +-1-monodromy image: 0 for Markov II+,
    2 for II-.

    Near the shared pole q = (r3, 0, 0) the fiber has holomorphic
    coordinates (b, c); Lambda_alpha is the real form {c = conj b}, and the
    transported sphere is {c ~= u conj b} for a unit complex u.  Writing
    Lambda_alpha as graph(dh) over the image, both Hessian eigenvalues are
    tan(-arg(u)/2), so the index is 0 or 2 by the sign of arg(u).
    """
    if sign in ("+", 1):
        power = 1
    elif sign in ("-", -1):
        power = -1
    else:
        raise ValueError("sign must be '+' or '-'")
    model = ModelFibration.a2(d)
    cloud = a2_cycle(d, eps, n_samples)
    path = gamma_path(d, eps, 1)
    if power < 0:
        path = path.reversed()
    out = transport(model, path, cloud, rtol=1e-11)
    b = out.points[:, 1]
    c = out.points[:, 2]
    absb = np.abs(b)
    good = absb > 0
    scale = np.quantile(absb[good], 0.25)
    near = good & (absb < scale)
    num = np.sum(c[near] * b[near])  # fit c = u conj(b): u = sum(c b)/sum(|b|^2)
    den = np.sum(absb[near] ** 2)
    u = num / den
    if abs(abs(u) - 1) > 0.1:
        raise TransportError(f"graph fit not unitary: |u| = {abs(u):.3f}")
    psi = -math.atan2(u.imag, u.real)
    eig = math.tan(psi / 2)
    if abs(eig) < 1e-6:
        raise TransportError("degenerate Hessian in the Maslov computation")
    return 0 if eig > 0 else 2


# -- squared phase ------------------------------------------------------------------


def squared_phase(model: ModelFibration, pts: np.ndarray, frames: np.ndarray) -> np.ndarray:
    """The circle-valued squared phase of the Lagrangian frames, using the
    fiber volume form eta(xi1, xi2) = det[xi1, xi2, conj grad] / |grad|^2."""
    g = model.gradient(pts)
    g2 = np.sum(np.abs(g) ** 2, axis=-1)
    dets = np.linalg.det(
        np.stack([frames[:, 0, :], frames[:, 1, :], np.conj(g)], axis=1)
    ) / g2
    vals = dets**2 / np.abs(dets) ** 2
    return vals


def phase_spread_a1(t: float = 1.0, n_samples: int = 200) -> float:
    """Spread of the squared phase over the A1 vanishing cycle (exactly
    constant for the flat metric; the spread is numerical noise)."""
    cloud = vanishing_cycle(t, n_samples)
    pts = cloud.points
    n = pts.real / np.sqrt(np.sum(pts.real**2, axis=-1))[:, None]
    ref = np.where(np.abs(n[:, 2:3]) < 0.9, np.array([[0.0, 0.0, 1.0]]), np.array([[1.0, 0.0, 0.0]]))
    t1 = np.cross(n, ref)
    t1 /= np.linalg.norm(t1, axis=-1)[:, None]
    t2 = np.cross(n, t1)
    frames = np.stack([t1, t2], axis=1).astype(complex)
    vals = squared_phase(ModelFibration.a1(), pts, frames)
    args = np.angle(vals)
    return float(np.max(np.abs(args - args.mean())))


def phase_spread_a2(d: float = 1.0, eps: float = 1e-3, n_samples: int = 200) -> float:
    """Spread of the squared phase over Lambda_alpha (constant: the frame
    determinant is a positive real multiple of i along the cycle)."""
    model = ModelFibration.a2(d)
    cloud = a2_cycle(d, eps, n_samples)
    pts = cloud.points
    interior = cloud.params[:, 0] >= 0
    pts = pts[interior]
    a = pts[:, 0].real
    th = np.angle(pts[:, 1])
    w = np.abs(pts[:, 1]) ** 2
    wp = -(3 * a**2 - d)
    rad = np.sqrt(np.maximum(w, 1e-300))
    t1 = np.stack(
        [np.ones_like(a, dtype=complex),
         (wp / (2 * rad)) * np.exp(1j * th),
         (wp / (2 * rad)) * np.exp(-1j * th)],
        axis=-1,
    )
    t2 = np.stack(
        [np.zeros_like(a, dtype=complex), 1j * rad * np.exp(1j * th), -1j * rad * np.exp(-1j * th)],
        axis=-1,
    )
    # orthonormalize the real frame (Gram-Schmidt over the real inner product)
    def renorm(v):
        return v / np.sqrt(np.sum(np.abs(v) ** 2, axis=-1))[:, None]

    t1 = renorm(t1)
    inner = np.sum((t2 * np.conj(t1)).real, axis=-1)
    t2 = renorm(t2 - inner[:, None] * t1)
    frames = np.stack([t1, t2], axis=1)
    vals = squared_phase(model, pts, frames)
    args = np.unwrap(np.angle(vals))
    return float(np.max(np.abs(args - args.mean())))
