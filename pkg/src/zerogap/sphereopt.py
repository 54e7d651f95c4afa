"""Maximizing |P| on the unit sphere and measuring angular gaps to zero sets.

The search ascends log|P| with tangent-projected gradients from a seeded
low-discrepancy batch of starts, then polishes the leading candidates by
Newton steps in a tangent chart.  In two dimensions no search is needed: the
restriction to the circle is a trigonometric polynomial whose critical
points are found exactly, so results there are certified by root isolation
rather than iteration.

Angular distances to zero sets are exact (closed form) for products of
affine forms and for any polynomial in two variables; in higher dimension
they are upper-bound estimates from constrained minimization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import ndtri
from scipy.stats import qmc

from . import trigcircle
from .polycore import AffineForm, CirclePlane, MultiPoly, restrict_to_circle

__all__ = [
    "SphereMaxResult",
    "SphereGapReport",
    "unit_vector",
    "sphere_starts",
    "maximize_abs_on_sphere",
    "slice_distance",
    "angular_distance_to_zero_set",
    "verify_sphere_gap",
]

RNG_NAME = "sobol-gauss/1"

_NEAR_MAX_REL = 1e-9
_LOG_FLOOR = -1e30


def unit_vector(v):
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def sphere_starts(dim, count, seed):
    """Deterministic low-discrepancy start points on S^(dim-1)."""
    eng = qmc.Sobol(d=dim, scramble=True, seed=int(seed))
    m = max(1, math.ceil(math.log2(count)))
    u = eng.random_base2(m)[:count]
    g = ndtri(np.clip(u, 1e-12, 1 - 1e-12))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0] = 1.0
    return g / norms[:, None]


def _log_abs_objective(poly: MultiPoly):
    """(values, gradients) of log|P| on row batches, factored when possible."""
    if poly.affine_factors is not None:
        A = np.array([f.normal for f in poly.affine_factors])
        b = np.array([f.offset for f in poly.affine_factors])

        def value(X):
            L = X @ A.T - b
            with np.errstate(divide="ignore"):
                return np.where(
                    np.all(L != 0.0, axis=1), np.sum(np.log(np.abs(L)), axis=1), _LOG_FLOOR
                )

        def grad(X):
            L = X @ A.T - b
            L = np.where(L == 0.0, 1e-300, L)
            return (1.0 / L) @ A

    else:

        def value(X):
            v = poly.eval(X)
            with np.errstate(divide="ignore"):
                return np.where(v != 0.0, np.log(np.abs(v)), _LOG_FLOOR)

        def grad(X):
            v = poly.eval(X)
            v = np.where(v == 0.0, 1e-300, v)
            return poly.gradient(X) / v[:, None]

    return value, grad


def _batch_sphere_ascent(value, grad, X, iters=160, gtol=1e-12):
    """Projected gradient ascent with backtracking, all rows in lockstep."""
    f = value(X)
    for _ in range(iters):
        G = grad(X)
        Gt = G - np.sum(G * X, axis=1, keepdims=True) * X
        gnorm = np.linalg.norm(Gt, axis=1)
        if np.all(gnorm < gtol):
            break
        step = 0.5 / (1.0 + gnorm)
        live = gnorm >= gtol
        improved = np.zeros(len(X), dtype=bool)
        for _ in range(30):
            trial = np.where(live[:, None], X + step[:, None] * Gt, X)
            trial = trial / np.linalg.norm(trial, axis=1, keepdims=True)
            ft = value(trial)
            better = live & (ft > f)
            X = np.where(better[:, None], trial, X)
            f = np.where(better, ft, f)
            improved |= better
            live = live & ~better
            if not np.any(live):
                break
            step = step * 0.25
        if not np.any(improved):
            break
    return X, f


def _tangent_basis(x):
    d = len(x)
    k = int(np.argmax(np.abs(x)))
    cols = [x] + [np.eye(d)[:, j] for j in range(d) if j != k]
    q, _ = np.linalg.qr(np.column_stack(cols))
    return q[:, 1:]


def _polish_on_sphere(value, grad, x, iters=20):
    """Newton in a tangent chart; Hessian by differencing the chart gradient.

    Degenerate directions (orbits of symmetries) make the Hessian singular;
    a least-squares solve moves only along the determined directions.
    """
    x = unit_vector(x)
    h = 1e-6
    f0 = float(value(x[None, :])[0])
    for _ in range(iters):
        B = _tangent_basis(x)
        d1 = B.shape[1]

        def chart_grad(xi):
            y = x + B @ xi
            ny = np.linalg.norm(y)
            p = y / ny
            g = grad(p[None, :])[0]
            return B.T @ (g - (g @ p) * p) / ny

        g0 = chart_grad(np.zeros(d1))
        if np.linalg.norm(g0) < 1e-13:
            break
        H = np.empty((d1, d1))
        for j in range(d1):
            e = np.zeros(d1)
            e[j] = h
            H[:, j] = (chart_grad(e) - chart_grad(-e)) / (2 * h)
        H = (H + H.T) / 2
        s, *_ = np.linalg.lstsq(H, -g0, rcond=1e-10)
        norm_s = np.linalg.norm(s)
        if norm_s > 0.2:
            s *= 0.2 / norm_s
        accepted = False
        t = 1.0
        for _ in range(10):
            x_new = unit_vector(x + B @ (t * s))
            f_new = float(value(x_new[None, :])[0])
            if f_new >= f0 - 1e-14 * (1.0 + abs(f0)):
                x, f0 = x_new, max(f_new, f0)
                accepted = True
                break
            t *= 0.5
        if not accepted:
            gt = grad(x[None, :])[0]
            gt = gt - (gt @ x) * x
            gn = np.linalg.norm(gt)
            if gn < 1e-13:
                break
            t, improved = 1e-2 / (1.0 + gn), False
            for _ in range(25):
                x_new = unit_vector(x + t * gt)
                f_new = float(value(x_new[None, :])[0])
                if f_new > f0:
                    x, f0 = x_new, f_new
                    improved = True
                    break
                t *= 0.5
            if not improved:
                break
        if norm_s < 1e-14:
            break
    return x


@dataclass(frozen=True)
class SphereMaxResult:
    point: np.ndarray
    value: float
    log_value: float
    all_near_max: tuple


def _dedupe_points(points, tol=1e-7):
    out = []
    for p in points:
        if all(np.linalg.norm(p - q) > tol for q in out):
            out.append(p)
    return out


def maximize_abs_on_sphere(poly: MultiPoly, starts=64, seed=0) -> SphereMaxResult:
    """Global maximum of |P| over the unit sphere, deterministic per seed.

    In dimension two the answer comes from exact circle root isolation; in
    higher dimension from seeded multi-start ascent with Newton polish.
    """
    d = poly.dim
    if d < 2:
        raise ValueError("sphere maximization needs dimension >= 2")
    value, grad = _log_abs_objective(poly)

    if d == 2:
        plane = CirclePlane(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        T = restrict_to_circle(poly, plane)
        if T.is_trivially_zero():
            raise ValueError("polynomial vanishes identically on the unit sphere")
        M, thetas = trigcircle.trig_max_points(T)
        if M == 0.0:
            raise ValueError("polynomial vanishes identically on the unit sphere")
        pts = [np.array([math.cos(t), math.sin(t)]) for t in thetas]
        return SphereMaxResult(pts[0], M, math.log(M), tuple(pts))

    X = sphere_starts(d, starts, seed)
    X, f = _batch_sphere_ascent(value, grad, X)
    if np.max(f) <= _LOG_FLOOR / 2:
        raise ValueError("polynomial vanishes identically on the unit sphere")
    order = np.argsort(-f)
    top = [X[i] for i in order[: max(8, min(32, starts))]]
    polished = [_polish_on_sphere(value, grad, p) for p in top]
    logs = [float(value(p[None, :])[0]) for p in polished]
    best = max(logs)
    keep = [
        (lv, p)
        for lv, p in zip(logs, polished)
        if lv >= best + math.log1p(-_NEAR_MAX_REL)
    ]
    pts = _dedupe_points([p for _, p in sorted(keep, key=lambda t: (-t[0], tuple(t[1])))])
    return SphereMaxResult(pts[0], math.exp(best), best, tuple(pts))


def slice_distance(form: AffineForm, p) -> float:
    """Intrinsic spherical distance from p to {x on sphere : <a,x> = b}."""
    if abs(form.offset) >= 1.0:
        return math.inf
    p = unit_vector(p)
    s = float(np.clip(form.normal @ p, -1.0, 1.0))
    return abs(math.asin(s) - math.asin(form.offset))


def _nearest_slice_point(form: AffineForm, p):
    a, b = form.normal, form.offset
    alpha = float(np.clip(a @ p, -1.0, 1.0))
    w = p - alpha * a
    nw = np.linalg.norm(w)
    if nw < 1e-12:
        w = np.zeros_like(a)
        w[int(np.argmin(np.abs(a)))] = 1.0
        w -= (w @ a) * a
        nw = np.linalg.norm(w)
    return b * a + math.sqrt(max(0.0, 1.0 - b * b)) * w / nw


def _zero_distance_d2(poly, p):
    plane = CirclePlane(np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    T = restrict_to_circle(poly, plane)
    zeros = trigcircle.trig_zeros(T)
    if len(zeros) == 0:
        return math.inf, None
    theta_p = math.atan2(p[1], p[0])
    best = min(zeros, key=lambda z: trigcircle.circle_distance(theta_p, z.theta))
    return (
        trigcircle.circle_distance(theta_p, best.theta),
        np.array([math.cos(best.theta), math.sin(best.theta)]),
    )


def _zero_distance_search(poly, p, budget, seed):
    """Constrained minimization of the angle to the zero variety on the sphere."""
    d = poly.dim
    n_seeds = max(8, budget)
    seeds = sphere_starts(d, n_seeds, seed + 1)
    if d == 3:
        extra = sphere_starts(d, 512, seed + 2)
        vals = np.abs(poly.eval(extra))
        grads = np.linalg.norm(poly.gradient(extra), axis=1)
        score = vals / np.maximum(grads, 1e-12)
        seeds = np.vstack([seeds, extra[np.argsort(score)[: n_seeds // 2]]])
    scale = max(float(np.max(np.abs(poly.eval(sphere_starts(d, 256, seed + 3))))), 1e-300)

    cons = [
        {
            "type": "eq",
            "fun": lambda x: poly.eval(x) / scale,
            "jac": lambda x: poly.gradient(x) / scale,
        },
        {
            "type": "eq",
            "fun": lambda x: x @ x - 1.0,
            "jac": lambda x: 2.0 * x,
        },
    ]
    best = math.inf
    best_zero = None
    for x0 in seeds:
        res = minimize(
            lambda x: -(p @ x),
            x0,
            jac=lambda x: -p,
            method="SLSQP",
            constraints=cons,
            options={"maxiter": 120, "ftol": 1e-14},
        )
        x = res.x
        nx = np.linalg.norm(x)
        if nx == 0:
            continue
        x = x / nx
        if abs(poly.eval(x)) > 1e-8 * scale:
            continue
        dist = math.acos(float(np.clip(p @ x, -1.0, 1.0)))
        if dist < best:
            best, best_zero = dist, x
    return best, best_zero


def angular_distance_to_zero_set(poly: MultiPoly, p, budget=64, seed=0, return_zero=False):
    """Angular distance from p to the zero set of P on the sphere.

    Exact for tagged affine-form products and in dimension two; otherwise an
    upper-bound estimate from seeded constrained minimization.  Returns the
    +inf sentinel when no zero is found on the sphere.
    """
    p = unit_vector(p)
    if poly.affine_factors is not None:
        best = math.inf
        best_zero = None
        for f in poly.affine_factors:
            dist = slice_distance(f, p)
            if dist < best:
                best = dist
                best_zero = _nearest_slice_point(f, p) if dist < math.inf else None
        return (best, best_zero) if return_zero else best
    if poly.dim == 2:
        dist, zero = _zero_distance_d2(poly, p)
        return (dist, zero) if return_zero else dist
    dist, zero = _zero_distance_search(poly, p, budget, seed)
    return (dist, zero) if return_zero else dist


@dataclass(frozen=True)
class SphereGapReport:
    degree: int
    maximizer: np.ndarray
    value: float
    distance: float
    bound: float
    passed: bool
    equality_circle: CirclePlane | None
    interlacing: bool | None

    def to_json(self):
        eq = None
        if self.equality_circle is not None:
            eq = {
                "circle": {
                    "u": self.equality_circle.u.tolist(),
                    "v": self.equality_circle.v.tolist(),
                },
                "interlacing": self.interlacing,
            }
        return {
            "degree": self.degree,
            "maximizer": self.maximizer.tolist(),
            "value": self.value,
            "distance": self.distance,
            "bound": self.bound,
            "passed": self.passed,
            "equality": eq,
        }


def verify_sphere_gap(poly: MultiPoly, seed=0, starts=64, tol=1e-6, budget=64) -> SphereGapReport:
    """Check that a maximizer of |P| keeps angular distance >= pi/(2 deg P).

    Among near-equal maximizers the one with the largest zero-set distance is
    reported; the bound holds at every true maximizer, so preferring the
    farthest is sound.  When the measured distance sits at the bound within
    tolerance, the circle through the maximizer and its nearest zero is
    attached along with the interlacing diagnostic of the restriction.
    """
    n = poly.degree
    res = maximize_abs_on_sphere(poly, starts=starts, seed=seed)
    scored = []
    for cand in res.all_near_max:
        dist, zero = angular_distance_to_zero_set(poly, cand, budget=budget, seed=seed, return_zero=True)
        scored.append((dist, cand, zero))
    dist, p, zero = max(scored, key=lambda t: t[0])
    bound = math.pi / (2 * n)
    passed = dist >= bound - tol
    circle = None
    interlacing = None
    if zero is not None and math.isfinite(dist) and abs(dist - bound) < tol:
        v = zero - (zero @ p) * p
        nv = np.linalg.norm(v)
        if nv > 1e-9:
            circle = CirclePlane(p, v / nv)
            T = restrict_to_circle(poly, circle)
            interlacing, _ = trigcircle.interlacing_check(T)
    return SphereGapReport(
        degree=n,
        maximizer=p,
        value=res.value,
        distance=dist,
        bound=bound,
        passed=passed,
        equality_circle=circle,
        interlacing=interlacing,
    )
