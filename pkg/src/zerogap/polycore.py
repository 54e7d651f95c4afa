"""Sparse real multivariate polynomials, affine forms, and restriction to circles.

A polynomial is stored as a sorted tuple of (exponent-vector, coefficient)
pairs.  The identically-zero polynomial is rejected at construction: every
bound computed downstream divides by the degree or assumes a nonempty zero
structure, so zero input is an error, not a value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .trigcircle import TrigPoly

__all__ = [
    "MultiPoly",
    "AffineForm",
    "CirclePlane",
    "product_of_affine_forms",
    "restrict_to_circle",
]

_UNIT_TOL = 1e-12


class MultiPoly:
    """Sparse polynomial in ``dim`` real variables.

    Terms are kept in lexicographic exponent order so that sums are evaluated
    in a reproducible sequence.  Instances are immutable by convention; all
    operations return new objects.
    """

    __slots__ = ("dim", "terms", "degree", "affine_factors", "_arrays")

    def __init__(self, dim, terms, affine_factors=None):
        if dim < 1:
            raise ValueError(f"dimension must be positive, got {dim}")
        merged = {}
        for exps, coeff in dict(terms).items():
            e = tuple(int(x) for x in exps)
            if len(e) != dim:
                raise ValueError(f"exponent vector {e} does not match dim {dim}")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            c = merged.get(e, 0.0) + float(coeff)
            merged[e] = c
        merged = {e: c for e, c in merged.items() if c != 0.0}
        if not merged:
            raise ValueError("the identically-zero polynomial is not accepted")
        self.dim = int(dim)
        self.terms = tuple(sorted(merged.items()))
        self.degree = max(sum(e) for e, _ in self.terms)
        self.affine_factors = affine_factors
        self._arrays = None

    @classmethod
    def from_affine_product(cls, forms):
        """Product of affine forms, kept factored; expansion is deferred.

        Evaluation and gradients go through the factor list, which is exact
        and avoids expanding, e.g., a 150-factor product in three variables.
        """
        forms = tuple(forms)
        if not forms:
            raise ValueError("empty form list")
        d = forms[0].dim
        if any(f.dim != d for f in forms):
            raise ValueError("affine forms of mixed dimension")
        obj = cls.__new__(cls)
        obj.dim = d
        obj.terms = None
        obj.degree = len(forms)
        obj.affine_factors = forms
        obj._arrays = None
        return obj

    def _expanded_terms(self):
        if self.terms is None:
            terms = {(0,) * self.dim: 1.0}
            for f in self.affine_factors:
                nxt = {}
                for exps, coeff in terms.items():
                    for j in range(self.dim):
                        if f.normal[j] != 0.0:
                            e = list(exps)
                            e[j] += 1
                            key = tuple(e)
                            nxt[key] = nxt.get(key, 0.0) + coeff * f.normal[j]
                    if f.offset != 0.0:
                        nxt[exps] = nxt.get(exps, 0.0) - coeff * f.offset
                terms = nxt
            self.terms = tuple(sorted((e, c) for e, c in terms.items() if c != 0.0))
        return self.terms

    def _term_arrays(self):
        if self._arrays is None:
            terms = self._expanded_terms()
            E = np.array([e for e, _ in terms], dtype=np.int64)
            C = np.array([c for _, c in terms], dtype=float)
            self._arrays = (E, C)
        return self._arrays

    def eval(self, point):
        """Value at ``point``; ``point`` may also be an (N, dim) batch."""
        x = np.asarray(point, dtype=float)
        single = x.ndim == 1
        if x.shape[-1] != self.dim:
            raise ValueError(f"point dimension {x.shape[-1]} != poly dim {self.dim}")
        X = np.atleast_2d(x)
        if self.affine_factors is not None:
            vals = np.ones(X.shape[0])
            for f in self.affine_factors:
                vals = vals * (X @ f.normal - f.offset)
        else:
            E, C = self._term_arrays()
            vals = np.prod(X[:, None, :] ** E[None, :, :], axis=2) @ C
        return float(vals[0]) if single else vals

    def gradient(self, point):
        """Gradient at ``point``; batches as in :meth:`eval`."""
        x = np.asarray(point, dtype=float)
        single = x.ndim == 1
        if x.shape[-1] != self.dim:
            raise ValueError(f"point dimension {x.shape[-1]} != poly dim {self.dim}")
        X = np.atleast_2d(x)
        n_pts = X.shape[0]
        if self.affine_factors is not None:
            m = len(self.affine_factors)
            A = np.array([f.normal for f in self.affine_factors])
            b = np.array([f.offset for f in self.affine_factors])
            L = X @ A.T - b
            # prefix/suffix products over factors keep the gradient exact at zeros
            pre = np.ones((n_pts, m + 1))
            suf = np.ones((n_pts, m + 1))
            for i in range(m):
                pre[:, i + 1] = pre[:, i] * L[:, i]
                suf[:, m - 1 - i] = suf[:, m - i] * L[:, m - 1 - i]
            G = (pre[:, :m] * suf[:, 1:]) @ A
        else:
            E, C = self._term_arrays()
            G = np.empty((n_pts, self.dim))
            P = X[:, None, :] ** E[None, :, :]
            for j in range(self.dim):
                Ej = E.copy()
                expo = Ej[:, j].copy()
                Ej[:, j] = np.maximum(expo - 1, 0)
                mono = np.prod(X[:, None, :] ** Ej[None, :, :], axis=2)
                G[:, j] = mono @ (C * expo)
        return G[0] if single else G

    def __call__(self, point):
        return self.eval(point)

    def __repr__(self):
        if self.terms is None:
            return f"MultiPoly(dim={self.dim}, degree={self.degree}, factored x{len(self.affine_factors)})"
        return f"MultiPoly(dim={self.dim}, degree={self.degree}, nterms={len(self.terms)})"

    def to_json(self):
        return {"dim": self.dim, "terms": [{"e": list(e), "c": c} for e, c in self._expanded_terms()]}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["dim"], {tuple(t["e"]): t["c"] for t in obj["terms"]})


@dataclass(frozen=True)
class AffineForm:
    """L(x) = <normal, x> - offset with a unit normal."""

    normal: np.ndarray
    offset: float

    def __init__(self, normal, offset):
        a = np.asarray(normal, dtype=float)
        norm = float(np.linalg.norm(a))
        if norm < _UNIT_TOL:
            raise ValueError("affine form normal must be nonzero")
        object.__setattr__(self, "normal", a / norm)
        object.__setattr__(self, "offset", float(offset))
        self.normal.setflags(write=False)

    @property
    def dim(self):
        return self.normal.shape[0]

    def eval(self, point):
        return np.asarray(point, dtype=float) @ self.normal - self.offset

    def to_json(self):
        return {"a": self.normal.tolist(), "b": self.offset}

    @classmethod
    def from_json(cls, obj):
        return cls(obj["a"], obj["b"])


@dataclass(frozen=True)
class CirclePlane:
    """Circle x(theta) = center + radius*(u cos theta + v sin theta)."""

    u: np.ndarray
    v: np.ndarray
    radius: float = 1.0
    center: np.ndarray = None

    def __init__(self, u, v, radius=1.0, center=None):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        nu, nv = np.linalg.norm(u), np.linalg.norm(v)
        if abs(nu - 1.0) > 1e-6 or abs(nv - 1.0) > 1e-6:
            raise ValueError("u and v must be unit vectors")
        u, v = u / nu, v / nv
        if abs(float(u @ v)) > _UNIT_TOL:
            raise ValueError("u and v must be orthogonal")
        if radius <= 0:
            raise ValueError("radius must be positive")
        if center is None:
            center = np.zeros_like(u)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "radius", float(radius))
        object.__setattr__(self, "center", np.asarray(center, dtype=float))
        self.u.setflags(write=False)
        self.v.setflags(write=False)
        self.center.setflags(write=False)

    @property
    def dim(self):
        return self.u.shape[0]

    def point(self, theta):
        theta = np.asarray(theta, dtype=float)
        return (
            self.center
            + self.radius * np.multiply.outer(np.cos(theta), self.u)
            + self.radius * np.multiply.outer(np.sin(theta), self.v)
        )


def product_of_affine_forms(forms) -> MultiPoly:
    """Expanded product of affine forms; degree equals the number of forms."""
    forms = list(forms)
    if not forms:
        raise ValueError("empty form list")
    d = forms[0].dim
    if any(f.dim != d for f in forms):
        raise ValueError("affine forms of mixed dimension")
    poly = MultiPoly.from_affine_product(forms)
    if len(forms) <= 24:
        poly._expanded_terms()
    return poly


def _conv_center(a, b):
    # convolution of centered Fourier coefficient arrays
    return np.convolve(a, b)


def restrict_to_circle(poly: MultiPoly, plane: CirclePlane) -> TrigPoly:
    """Restriction of ``poly`` to the circle, as a trigonometric polynomial.

    Each coordinate on the circle is a degree-1 Fourier series; monomials are
    expanded by convolving those series, which reproduces the exact
    product-to-sum trigonometric identities with no sampling step.
    """
    if plane.dim != poly.dim:
        raise ValueError(f"plane dimension {plane.dim} != poly dim {poly.dim}")
    base = []
    for i in range(poly.dim):
        cp = plane.radius * (plane.u[i] - 1j * plane.v[i]) / 2.0
        base.append(np.array([np.conj(cp), plane.center[i], cp], dtype=complex))

    if poly.affine_factors is not None and poly.terms is None:
        acc = np.array([1.0 + 0j])
        for f in poly.affine_factors:
            fac = np.array([0.0 + 0j, -f.offset, 0.0 + 0j], dtype=complex)
            for i in range(poly.dim):
                if f.normal[i] != 0.0:
                    fac = fac + f.normal[i] * base[i]
            acc = _conv_center(acc, fac)
        series = acc
    else:
        max_exp = [0] * poly.dim
        for e, _ in poly.terms:
            for i, ei in enumerate(e):
                max_exp[i] = max(max_exp[i], ei)
        # powers[i][k] = Fourier series of x_i(theta)**k
        powers = []
        for i in range(poly.dim):
            ps = [np.array([1.0 + 0j])]
            for _ in range(max_exp[i]):
                ps.append(_conv_center(ps[-1], base[i]))
            powers.append(ps)
        deg = poly.degree
        series = np.zeros(2 * deg + 1, dtype=complex)
        for e, c in poly.terms:
            mono = np.array([complex(c)])
            for i, ei in enumerate(e):
                if ei:
                    mono = _conv_center(mono, powers[i][ei])
            k = (len(mono) - 1) // 2
            series[deg - k : deg + k + 1] += mono

    n = (len(series) - 1) // 2
    a0 = float(series[n].real)
    pairs = [(2.0 * series[n + k].real, -2.0 * series[n + k].imag) for k in range(1, n + 1)]
    return TrigPoly(a0, pairs, trim=True)
