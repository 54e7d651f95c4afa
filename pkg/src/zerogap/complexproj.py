"""Homogeneous complex polynomials on the unit sphere of C^d.

Points of C^d are carried as 2d real coordinates (real parts first, then
imaginary parts), so the sphere S^(2d-1) reuses the projected-ascent engine.
Weighted families maximize sum delta_k^2 log|P_k|, which realizes the
fractional-power product |P_1^(d1^2) ... P_N^(dN^2)| without ever raising a
complex number to a fractional power.

Angular distance between unit vectors is arccos of the magnitude of the
Hermitian inner product: the distance between the unit-scalar orbits, which
is the quantity the bounds below control.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import VerificationError
from .sphereopt import _batch_sphere_ascent, _polish_on_sphere, sphere_starts

__all__ = [
    "ComplexHomogPoly",
    "WeightedSystem",
    "ComplexGapReport",
    "maximize_weighted_log",
    "complex_zero_distance",
    "verify_complex_gap",
    "chart_radius_check",
    "verify_weighted_gap",
    "hermitian_angle",
]

_LOG_FLOOR = -1e30
_NEAR_MAX_REL = 1e-9


def to_complex(x):
    x = np.asarray(x, dtype=float)
    d = x.shape[-1] // 2
    return x[..., :d] + 1j * x[..., d:]

def to_real(z):
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=-1)


def hermitian_angle(u, v):
    """arccos |<u, v>| for unit complex vectors."""
    ip = abs(np.sum(np.asarray(u) * np.conj(np.asarray(v))))
    return math.acos(min(1.0, ip))


class ComplexHomogPoly:
    """Sparse homogeneous polynomial in d complex variables."""

    __slots__ = ("dim", "degree", "terms", "linear_factors")

    def __init__(self, dim, terms, linear_factors=None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        merged = {}
        for exps, coeff in dict(terms).items():
            e = tuple(int(v) for v in exps)
            if len(e) != dim:
                raise ValueError(f"exponent vector {e} does not match dim {dim}")
            if any(v < 0 for v in e):
                raise ValueError(f"negative exponent in {e}")
            c = merged.get(e, 0j) + complex(coeff)
            merged[e] = c
        merged = {e: c for e, c in merged.items() if c != 0}
        if not merged:
            raise ValueError("the identically-zero polynomial is not accepted")
        degrees = {sum(e) for e in merged}
        if len(degrees) != 1:
            raise ValueError(f"not homogeneous: term degrees {sorted(degrees)}")
        self.dim = int(dim)
        self.terms = tuple(sorted(merged.items()))
        self.degree = degrees.pop()
        self.linear_factors = linear_factors

    @classmethod
    def from_linear_product(cls, rows):
        """Product of linear forms sum_j c_j z_j, one coefficient row each."""
        C = np.asarray(rows, dtype=complex)
        if C.ndim != 2 or C.shape[0] == 0:
            raise ValueError("need a nonempty matrix of coefficient rows")
        if np.any(np.all(C == 0, axis=1)):
            raise ValueError("zero linear factor")
        d = C.shape[1]
        terms = {(0,) * d: 1.0 + 0j}
        for row in C:
            nxt = {}
            for e, c in terms.items():
                for j in range(d):
                    if row[j] != 0:
                        ee = list(e)
                        ee[j] += 1
                        key = tuple(ee)
                        nxt[key] = nxt.get(key, 0j) + c * row[j]
            terms = nxt
        return cls(d, terms, linear_factors=C)

    def eval(self, z):
        z = np.asarray(z, dtype=complex)
        single = z.ndim == 1
        Z = np.atleast_2d(z)
        if Z.shape[-1] != self.dim:
            raise ValueError(f"point dimension {Z.shape[-1]} != poly dim {self.dim}")
        vals = np.zeros(Z.shape[0], dtype=complex)
        for e, c in self.terms:
            mono = np.full(Z.shape[0], c)
            for j, ej in enumerate(e):
                if ej:
                    mono = mono * Z[:, j] ** ej
            vals = vals + mono
        return vals[0] if single else vals

    __call__ = eval

    def holomorphic_gradient(self, z):
        """Partial derivatives with respect to each complex variable."""
        z = np.asarray(z, dtype=complex)
        single = z.ndim == 1
        Z = np.atleast_2d(z)
        G = np.zeros((Z.shape[0], self.dim), dtype=complex)
        for e, c in self.terms:
            for j, ej in enumerate(e):
                if ej == 0:
                    continue
                mono = np.full(Z.shape[0], c * ej)
                for i, ei in enumerate(e):
                    p = ei - 1 if i == j else ei
                    if p:
                        mono = mono * Z[:, i] ** p
                G[:, j] += mono
        return G[0] if single else G

    def to_json(self):
        return {
            "dim": self.dim,
            "deg": self.degree,
            "terms": [{"e": list(e), "re": c.real, "im": c.imag} for e, c in self.terms],
        }

    @classmethod
    def from_json(cls, obj):
        poly = cls(obj["dim"], {tuple(t["e"]): complex(t["re"], t.get("im", 0.0)) for t in obj["terms"]})
        if "deg" in obj and obj["deg"] != poly.degree:
            raise ValueError(f"declared degree {obj['deg']} != actual {poly.degree}")
        return poly

    def __repr__(self):
        return f"ComplexHomogPoly(dim={self.dim}, degree={self.degree}, nterms={len(self.terms)})"


@dataclass(frozen=True)
class WeightedSystem:
    """Polynomials with positive weights, sum delta_k^2 deg P_k <= 1."""

    items: tuple

    def __init__(self, items):
        items = tuple((p, float(d)) for p, d in items)
        if not items:
            raise ValueError("empty weighted system")
        if any(d <= 0 for _, d in items):
            raise ValueError("weights must be positive")
        dims = {p.dim for p, _ in items}
        if len(dims) != 1:
            raise ValueError("mixed dimensions in weighted system")
        D = sum(d * d * p.degree for p, d in items)
        if D > 1.0 + 1e-12:
            raise ValueError(f"weighted degree sum {D} exceeds 1")
        object.__setattr__(self, "items", items)

    @property
    def dim(self):
        return self.items[0][0].dim

    @property
    def weighted_degree(self):
        return sum(d * d * p.degree for p, d in self.items)


def _weighted_log_objective(items):
    polys = [p for p, _ in items]
    weights = [d * d for _, d in items]

    def value(X):
        Z = to_complex(X)
        total = np.zeros(Z.shape[0])
        dead = np.zeros(Z.shape[0], dtype=bool)
        for poly, w in zip(polys, weights):
            v = np.abs(poly.eval(Z))
            dead |= v == 0.0
            with np.errstate(divide="ignore"):
                total = total + w * np.log(np.where(v == 0.0, 1.0, v))
        return np.where(dead, _LOG_FLOOR, total)

    def grad(X):
        Z = to_complex(X)
        G = np.zeros(X.shape)
        d = Z.shape[1]
        for poly, w in zip(polys, weights):
            v = poly.eval(Z)
            v = np.where(v == 0, 1e-300, v)
            ratio = poly.holomorphic_gradient(Z) / v[:, None]
            G[:, :d] += w * ratio.real
            G[:, d:] += w * -ratio.imag
        return G

    return value, grad


def _maximize_items(items, starts, seed):
    dim2 = 2 * items[0][0].dim
    value, grad = _weighted_log_objective(items)
    X = sphere_starts(dim2, starts, seed)
    X, f = _batch_sphere_ascent(value, grad, X)
    if np.max(f) <= _LOG_FLOOR / 2:
        raise ValueError("every start collapsed onto a zero set")
    order = np.argsort(-f)
    top = [X[i] for i in order[: max(8, min(32, starts))]]
    polished = [_polish_on_sphere(value, grad, p) for p in top]
    logs = [float(value(p[None, :])[0]) for p in polished]
    best = max(logs)
    pool = [p for lv, p in zip(logs, polished) if lv >= best + math.log1p(-_NEAR_MAX_REL)]
    pool.sort(key=lambda p: tuple(p))
    return pool, best


def maximize_weighted_log(system: WeightedSystem, starts=64, seed=0):
    """Maximizer of sum delta_k^2 log|P_k| on the unit sphere of C^d.

    Returns the point as 2d real coordinates (unit vector in R^(2d)).
    """
    pool, _ = _maximize_items(system.items, starts, seed)
    return pool[0]


def _zeros_on_projective_line(poly):
    """Unit representatives of the zeros of a binary form (d = 2 only)."""
    n = poly.degree
    coeffs = np.zeros(n + 1, dtype=complex)  # coefficient of z1^j z2^(n-j)
    for (e1, e2), c in poly.terms:
        coeffs[e1] = c
    reps = []
    deg1 = max(j for j in range(n + 1) if coeffs[j] != 0)
    if deg1 < n:
        reps.append(np.array([1.0 + 0j, 0.0 + 0j]))  # z2 divides P
    if deg1 > 0:
        roots = np.roots(coeffs[: deg1 + 1][::-1])  # P(w, 1) = sum coeffs[j] w^j
        for r in roots:
            v = np.array([r, 1.0 + 0j])
            reps.append(v / np.linalg.norm(v))
    return reps


def complex_zero_distance(poly: ComplexHomogPoly, p, budget=48, seed=0, return_zero=False):
    """Min over zeros z on the sphere of arccos |<p, z>|.

    Exact for tagged products of linear forms and for d = 2 (found through
    chart root isolation); elsewhere a seeded constrained-search estimate.
    +inf sentinel when nothing is found (cannot happen for d >= 2 since
    homogeneous polynomials always vanish somewhere on the sphere).
    """
    p = np.asarray(p, dtype=complex)
    p = p / np.linalg.norm(p)

    if poly.linear_factors is not None:
        best, best_zero = math.inf, None
        for row in poly.linear_factors:
            nr = np.linalg.norm(row)
            val = abs(np.sum(row * p)) / nr
            dist = math.asin(min(1.0, val))
            if dist < best:
                w = np.conj(row) / nr
                resid = p - np.sum(p * row) / nr * w
                nr2 = np.linalg.norm(resid)
                if nr2 < 1e-9:
                    # p sits on the normal direction; any unit vector in the
                    # zero plane is nearest
                    basis = np.eye(poly.dim, dtype=complex)
                    cand = [b - np.sum(b * row) / nr * w for b in basis]
                    resid = max(cand, key=np.linalg.norm)
                    nr2 = np.linalg.norm(resid)
                best, best_zero = dist, resid / nr2
        return (best, best_zero) if return_zero else best

    if poly.dim == 2:
        best, best_zero = math.inf, None
        for z in _zeros_on_projective_line(poly):
            dist = hermitian_angle(p, z)
            if dist < best:
                best, best_zero = dist, z
        return (best, best_zero) if return_zero else best

    # general estimator: maximize |<p,z>| over the zero set
    d = poly.dim
    pr = to_real(p)
    scale = max(
        float(np.max(np.abs(poly.eval(to_complex(sphere_starts(2 * d, 128, seed + 5)))))),
        1e-300,
    )

    def obj(x):
        z = to_complex(x)
        c = np.sum(z * np.conj(p))
        return -abs(c) ** 2

    def obj_jac(x):
        z = to_complex(x)
        c = np.sum(z * np.conj(p))
        gc = np.conj(p)
        gx = 2 * (np.conj(c) * gc).real
        gy = 2 * (np.conj(c) * 1j * gc).real
        return -np.concatenate([gx, gy])

    def c_re(x):
        return poly.eval(to_complex(x)).real / scale

    def c_im(x):
        return poly.eval(to_complex(x)).imag / scale

    def c_re_jac(x):
        g = poly.holomorphic_gradient(to_complex(x))
        return np.concatenate([g.real, -g.imag]) / scale

    def c_im_jac(x):
        g = poly.holomorphic_gradient(to_complex(x))
        return np.concatenate([g.imag, g.real]) / scale

    cons = [
        {"type": "eq", "fun": c_re, "jac": c_re_jac},
        {"type": "eq", "fun": c_im, "jac": c_im_jac},
        {"type": "eq", "fun": lambda x: x @ x - 1.0, "jac": lambda x: 2.0 * x},
    ]
    best, best_zero = math.inf, None
    for x0 in sphere_starts(2 * d, max(8, budget), seed + 7):
        res = minimize(obj, x0, jac=obj_jac, method="SLSQP", constraints=cons,
                       options={"maxiter": 150, "ftol": 1e-14})
        x = res.x
        nx = np.linalg.norm(x)
        if nx == 0:
            continue
        z = to_complex(x / nx)
        if abs(poly.eval(z)) > 1e-8 * scale:
            continue
        dist = hermitian_angle(p, z)
        if dist < best:
            best, best_zero = dist, z
    return (best, best_zero) if return_zero else best


@dataclass(frozen=True)
class ComplexGapReport:
    maximizer: np.ndarray  # complex unit vector
    distances: tuple
    bounds: tuple
    passed: tuple
    euclidean_distances: tuple  # sin of the angular distances
    cp1_radius: float | None

    @property
    def all_passed(self):
        return all(self.passed)

    def to_json(self):
        return {
            "maximizer": {
                "re": self.maximizer.real.tolist(),
                "im": self.maximizer.imag.tolist(),
            },
            "distances": list(self.distances),
            "bounds": list(self.bounds),
            "passed": list(self.passed),
            "euclidean_distances": list(self.euclidean_distances),
            "cp1_radius": self.cp1_radius,
        }


def verify_complex_gap(poly: ComplexHomogPoly, seed=0, starts=64, tol=1e-6) -> ComplexGapReport:
    """Check distance >= arcsin(1/sqrt(deg)) at a maximizer of |P|."""
    n = poly.degree
    pool, _ = _maximize_items(((poly, 1.0),), starts, seed)
    scored = [
        (complex_zero_distance(poly, to_complex(x), seed=seed), to_complex(x)) for x in pool
    ]
    dist, z = max(scored, key=lambda t: t[0])
    bound = math.asin(1.0 / math.sqrt(n))
    radius = None
    if poly.dim == 2 and math.isfinite(dist):
        radius = math.tan(dist)
    return ComplexGapReport(
        maximizer=z,
        distances=(dist,),
        bounds=(bound,),
        passed=(dist >= bound - tol,),
        euclidean_distances=(math.sin(dist) if math.isfinite(dist) else math.inf,),
        cp1_radius=radius,
    )


def chart_radius_check(poly: ComplexHomogPoly, zero, seed=0, starts=64, tol=1e-8) -> float:
    """Chart radius of the |P|-maximizer in the affine chart centered at a zero.

    The chart places ``zero`` at the origin of the projective line (d = 2);
    the radius of the maximizer is tan of its Hermitian angle from the zero.
    Raises when the squared radius falls below 1/(deg-1), which no true
    maximizer can do.
    """
    if poly.dim != 2:
        raise ValueError("chart radius is defined on the projective line (dim 2)")
    n = poly.degree
    if n < 2:
        raise ValueError("need degree >= 2; degree 1 satisfies the pi/2 bound directly")
    zero = np.asarray(zero, dtype=complex)
    zero = zero / np.linalg.norm(zero)
    scale = max(
        float(np.max(np.abs(poly.eval(to_complex(sphere_starts(4, 128, seed + 5)))))), 1e-300
    )
    if abs(poly.eval(zero)) > 1e-8 * scale:
        raise ValueError("the supplied point is not a zero of the polynomial")
    pool, _ = _maximize_items(((poly, 1.0),), starts, seed)
    p = to_complex(pool[0])
    angle = hermitian_angle(p, zero)
    a = math.tan(angle)
    if a * a < 1.0 / (n - 1) - tol:
        raise VerificationError(
            f"chart radius {a} has a^2 < 1/(n-1) = {1.0 / (n - 1)}; maximizer cannot be this close"
        )
    return a


def verify_weighted_gap(system: WeightedSystem, seed=0, starts=64, tol=1e-6) -> ComplexGapReport:
    """Check distance to each Z(P_k) >= arcsin(delta_k) at the weighted maximizer."""
    pool, _ = _maximize_items(system.items, starts, seed)
    best = None
    for x in pool:
        z = to_complex(x)
        dists = tuple(complex_zero_distance(p, z, seed=seed) for p, _ in system.items)
        worst = min(d - math.asin(min(1.0, dk)) for d, (_, dk) in zip(dists, system.items))
        if best is None or worst > best[0]:
            best = (worst, z, dists)
    _, z, dists = best
    bounds = tuple(math.asin(min(1.0, dk)) for _, dk in system.items)
    passed = tuple(d >= b - tol for d, b in zip(dists, bounds))
    return ComplexGapReport(
        maximizer=z,
        distances=dists,
        bounds=bounds,
        passed=passed,
        euclidean_distances=tuple(math.sin(d) if math.isfinite(d) else math.inf for d in dists),
        cp1_radius=None,
    )
