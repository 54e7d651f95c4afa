"""Trigonometric polynomials on the circle: zeros, extrema, gap certificates.

Zero isolation goes through the substitution z = e^{i theta}, which turns a
degree-n trigonometric polynomial into an algebraic polynomial of degree 2n
whose roots are found as companion-matrix eigenvalues.  Roots near the unit
circle are pulled back to angles and polished by Newton iteration; clusters
of polished angles give multiplicities, confirmed through derivative
magnitudes.  A nonzero trigonometric polynomial of degree n has at most 2n
zeros on the circle counted with multiplicity, which bounds everything the
certificates below count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TrigPoly",
    "CircleZero",
    "CircleZeroSet",
    "ZeroGapReport",
    "trig_zeros",
    "trig_max_points",
    "min_max_to_zero_distance",
    "zero_gap_certificate",
    "interlacing_check",
    "circle_distance",
]

TWO_PI = 2.0 * math.pi

# trailing Fourier pairs with both entries below this (relative) size are
# regarded as absent when the degree is tightened
_DEGREE_TRIM = 1e-14
# companion roots farther than this from the unit circle are discarded before
# refinement; multiplicity-m circle zeros perturb eigenvalues by
# O(eps^(1/m)), about 1e-8 for double and 1e-4 for quadruple zeros
_RADIAL_CAPTURE = 1e-4
_CLUSTER_TOL = 1e-6
_RESIDUAL_TOL = 1e-8
_DERIV_TOL = 1e-6


class TrigPoly:
    """T(theta) = a0 + sum_k (a_k cos k theta + b_k sin k theta)."""

    __slots__ = ("a0", "coeffs", "degree")

    def __init__(self, a0, coeffs=(), trim=False):
        a0 = float(a0)
        pairs = [(float(a), float(b)) for a, b in coeffs]
        if trim:
            scale = max([abs(a0)] + [max(abs(a), abs(b)) for a, b in pairs])
            while pairs and max(abs(pairs[-1][0]), abs(pairs[-1][1])) <= _DEGREE_TRIM * scale:
                pairs.pop()
        if pairs and max(abs(pairs[-1][0]), abs(pairs[-1][1])) == 0.0:
            raise ValueError("leading coefficient pair is zero; pass trim=True or drop it")
        self.a0 = a0
        self.coeffs = tuple(pairs)
        self.degree = len(pairs)

    def eval(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full(theta.shape, self.a0)
        for k, (a, b) in enumerate(self.coeffs, start=1):
            out = out + a * np.cos(k * theta) + b * np.sin(k * theta)
        return float(out) if out.ndim == 0 else out

    __call__ = eval

    def derivative(self) -> "TrigPoly":
        pairs = [(k * b, -k * a) for k, (a, b) in enumerate(self.coeffs, start=1)]
        return TrigPoly(0.0, pairs, trim=False) if pairs else TrigPoly(0.0)

    def shift(self, s) -> "TrigPoly":
        """T(theta + s) as a new TrigPoly."""
        pairs = []
        for k, (a, b) in enumerate(self.coeffs, start=1):
            c, sn = math.cos(k * s), math.sin(k * s)
            pairs.append((a * c + b * sn, -a * sn + b * c))
        return TrigPoly(self.a0, pairs, trim=False)

    def __add__(self, other):
        n = max(self.degree, other.degree)
        pairs = []
        for k in range(1, n + 1):
            a1, b1 = self.coeffs[k - 1] if k <= self.degree else (0.0, 0.0)
            a2, b2 = other.coeffs[k - 1] if k <= other.degree else (0.0, 0.0)
            pairs.append((a1 + a2, b1 + b2))
        return TrigPoly(self.a0 + other.a0, pairs, trim=True)

    def scaled(self, c) -> "TrigPoly":
        return TrigPoly(c * self.a0, [(c * a, c * b) for a, b in self.coeffs], trim=False)

    def sup_norm(self, samples=4096):
        grid = np.linspace(0.0, TWO_PI, samples, endpoint=False)
        return float(np.max(np.abs(self.eval(grid))))

    def is_trivially_zero(self):
        return self.a0 == 0.0 and all(a == 0.0 and b == 0.0 for a, b in self.coeffs)

    def to_json(self):
        return {"n": self.degree, "a0": self.a0, "c": [[a, b] for a, b in self.coeffs]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["a0"], [tuple(p) for p in obj["c"]], trim=True)

    def __repr__(self):
        return f"TrigPoly(degree={self.degree})"


@dataclass(frozen=True)
class CircleZero:
    theta: float
    multiplicity: int


@dataclass(frozen=True)
class CircleZeroSet:
    zeros: tuple

    @property
    def total_multiplicity(self):
        return sum(z.multiplicity for z in self.zeros)

    @property
    def angles(self):
        return [z.theta for z in self.zeros]

    def __len__(self):
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)


@dataclass(frozen=True)
class ZeroGapReport:
    """Outcome of the cosine-comparison certificate for one trig polynomial.

    ``q_identically_zero`` marks the extremal case where the shifted input is
    exactly -+M cos(n theta); then zeros and maximizers are equally spaced
    and the gap equals the bound.
    """

    max_points: tuple
    max_value: float
    min_distance: float
    bound: float
    passed: bool
    q_identically_zero: bool
    q_zero_multiplicity: int


def circle_distance(t1, t2):
    """Shorter arc length between two angles."""
    d = abs(t1 - t2) % TWO_PI
    return min(d, TWO_PI - d)


def _check_nonzero(T: TrigPoly):
    if T.is_trivially_zero():
        raise ValueError("identically-zero trigonometric polynomial")


def _companion_angles(T: TrigPoly):
    """Angles of roots of z^n T(theta(z)) lying near the unit circle."""
    n = T.degree
    c = np.zeros(2 * n + 1, dtype=complex)
    c[n] = T.a0
    for k, (a, b) in enumerate(T.coeffs, start=1):
        c[n + k] = (a - 1j * b) / 2.0
        c[n - k] = (a + 1j * b) / 2.0
    c = c / np.max(np.abs(c))
    roots = np.roots(c[::-1])
    keep = np.abs(np.abs(roots) - 1.0) <= _RADIAL_CAPTURE
    return np.mod(np.angle(roots[keep]), TWO_PI)


def _newton_polish(T, dT, theta, steps=60):
    best, best_val = theta, abs(T.eval(theta))
    for _ in range(steps):
        f = T.eval(theta)
        g = dT.eval(theta)
        if g == 0.0:
            break
        step = f / g
        if abs(step) > 0.5:
            step = math.copysign(0.5, step)
        theta -= step
        v = abs(T.eval(theta))
        if v < best_val:
            best, best_val = theta % TWO_PI, v
        if abs(step) < 1e-15:
            break
    return best


def _cluster_circular(angles, tol):
    """Group sorted angles into clusters of circular diameter <= tol."""
    if len(angles) == 0:
        return []
    order = np.sort(np.asarray(angles))
    clusters = [[order[0]]]
    for t in order[1:]:
        if t - clusters[-1][-1] <= tol:
            clusters[-1].append(t)
        else:
            clusters.append([t])
    # merge across the 0/2pi seam
    if len(clusters) > 1 and (TWO_PI - clusters[-1][-1]) + clusters[0][0] <= tol:
        first = clusters.pop(0)
        clusters[-1].extend(t + TWO_PI for t in first)
    return clusters


def trig_zeros(T: TrigPoly) -> CircleZeroSet:
    """All zeros of T in [0, 2pi) with multiplicities.

    Each returned angle satisfies |T| < 1e-8 * sup|T|; multiplicity m is
    declared only when the derivatives through order m-1 vanish within
    tolerance at the refined angle.
    """
    _check_nonzero(T)
    if T.degree == 0:
        return CircleZeroSet(())
    sup = T.sup_norm()
    dT = T.derivative()
    raw = _companion_angles(T)
    polished = [_newton_polish(T, dT, t) for t in raw]
    polished = [t for t in polished if abs(T.eval(t)) <= _RESIDUAL_TOL * sup]

    derivs = [T, dT]
    zeros = []
    for cluster in _cluster_circular(polished, _CLUSTER_TOL):
        size = len(cluster)
        theta = float(np.mean(cluster)) % TWO_PI
        # multiplicity supported by small derivatives; Bernstein scaling
        # n^j bounds the j-th derivative of a degree-n trig polynomial
        m = 1
        while m < size:
            while len(derivs) <= m:
                derivs.append(derivs[-1].derivative())
            dscale = sup * max(1.0, float(T.degree)) ** m
            if abs(derivs[m].eval(theta)) < _DERIV_TOL * dscale:
                m += 1
            else:
                break
        # polish on the first non-vanishing derivative level, where the
        # zero is simple
        while len(derivs) <= m:
            derivs.append(derivs[-1].derivative())
        theta = _newton_polish(derivs[m - 1], derivs[m], theta)
        if abs(T.eval(theta)) <= _RESIDUAL_TOL * sup:
            zeros.append(CircleZero(theta % TWO_PI, m))
    zeros.sort(key=lambda z: z.theta)
    return CircleZeroSet(tuple(zeros))


def trig_max_points(T: TrigPoly):
    """(M, points): maximum of |T| over the circle and all its maximizers."""
    _check_nonzero(T)
    if T.degree == 0:
        return abs(T.a0), [0.0]
    dT = T.derivative()
    crit = list(trig_zeros(dT).angles) if not dT.is_trivially_zero() else [0.0]
    if not crit:
        crit = [0.0]
    vals = np.abs(T.eval(np.array(crit)))
    M = float(np.max(vals))
    pts = sorted(float(t) for t, v in zip(crit, vals) if v >= M * (1.0 - 1e-9))
    return M, pts


def min_max_to_zero_distance(T: TrigPoly) -> float:
    """Minimal circular distance from a maximizer of |T| to a zero of T."""
    _check_nonzero(T)
    zeros = trig_zeros(T)
    if len(zeros) == 0:
        return math.inf
    _, pts = trig_max_points(T)
    return min(circle_distance(t, z.theta) for t in pts for z in zeros)


def zero_gap_certificate(T: TrigPoly, tol=1e-7) -> ZeroGapReport:
    """Certify that maximizers of |T| sit at least pi/(2n) from every zero.

    Shifts a global maximizer to the origin and forms the comparison
    polynomial Q(theta) = T(theta) - T(0) cos(n theta), which has a double
    zero at 0.  Q vanishing identically flags the extremal equally-spaced
    case; otherwise the measured gap is reported against the pi/(2n) bound.
    """
    _check_nonzero(T)
    n = T.degree
    M, pts = trig_max_points(T)
    zeros = trig_zeros(T) if n > 0 else CircleZeroSet(())
    if len(zeros) == 0:
        min_dist = math.inf
    else:
        min_dist = min(circle_distance(t, z.theta) for t in pts for z in zeros)
    bound = math.pi / (2 * n) if n > 0 else math.inf
    passed = min_dist >= bound - tol if min_dist != math.inf else True

    q_zero = False
    q_mult = 0
    if n > 0:
        shifted = T.shift(pts[0])
        cos_n = TrigPoly(0.0, [(0.0, 0.0)] * (n - 1) + [(1.0, 0.0)], trim=False)
        Q = shifted + cos_n.scaled(-shifted.eval(0.0))
        if Q.sup_norm() < 1e-10 * max(T.sup_norm(), 1e-300):
            q_zero = True
        else:
            q_mult = trig_zeros(Q).total_multiplicity
    return ZeroGapReport(
        max_points=tuple(pts),
        max_value=M,
        min_distance=min_dist,
        bound=bound,
        passed=passed,
        q_identically_zero=q_zero,
        q_zero_multiplicity=q_mult,
    )


def interlacing_check(T: TrigPoly, tol=1e-8):
    """Whether zeros and |T|-maximizers alternate in 4n equal arcs.

    Returns (interlaces, arcs); arcs lists consecutive gaps of the merged
    event sequence around the circle.
    """
    _check_nonzero(T)
    n = T.degree
    if n == 0:
        return False, []
    zeros = trig_zeros(T)
    M, pts = trig_max_points(T)
    zs = [z.theta for z in zeros]
    events = sorted([(t, "z") for t in zs] + [(t, "m") for t in pts])
    arcs = []
    for i, (t, _) in enumerate(events):
        t_next = events[(i + 1) % len(events)][0] + (TWO_PI if i + 1 == len(events) else 0.0)
        arcs.append(t_next - t)
    if len(zs) != 2 * n or len(pts) != 2 * n:
        return False, arcs
    if any(z.multiplicity != 1 for z in zeros):
        return False, arcs
    alternating = all(events[i][1] != events[(i + 1) % len(events)][1] for i in range(len(events)))
    target = math.pi / (2 * n)
    equal = all(abs(a - target) <= tol for a in arcs)
    return alternating and equal, arcs
