"""Smooth objectives for J-orthogonality constrained benchmarks.

Provides the objective abstraction consumed by the solvers (value, gradient,
curvature description, optional finite-sum structure) plus the three
application objectives: a quadratic trace model with exact Kronecker
curvature, the hyperbolic eigenvalue problem (HEVP) and the hyperbolic
structural probe problem (HSPP) on the ultrahyperbolic manifold.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Signature, cs_random_init

__all__ = [
    "KroneckerH",
    "LipschitzBound",
    "SmoothObjective",
    "FiniteSumObjective",
    "QuadraticObjective",
    "HevpObjective",
    "HsppObjective",
    "quadratic_objective",
    "hevp_objective",
    "hspp_objective",
    "ultrahyperbolic_distance",
    "diffeomorphism_phi",
    "power_iteration_norm",
]

_KINK_BAND = 1e-8  # |u| within this of 1: treat the distance derivative as 0


@dataclass(frozen=True)
class KroneckerH:
    """Curvature description H = D kron C for two symmetric n x n matrices."""

    c: np.ndarray
    d: np.ndarray


@dataclass(frozen=True)
class LipschitzBound:
    """Scalar gradient-Lipschitz bound L_f (curvature H unknown)."""

    value: float


class SmoothObjective:
    """Base class: value/gradient plus a curvature description.

    Subclasses set `curvature` to a KroneckerH or LipschitzBound instance and
    implement value() and grad().  scalar_bound() returns a constant usable
    as the scalar curvature surrogate in the block subproblems.
    """

    curvature: KroneckerH | LipschitzBound

    def value(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def grad(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def scalar_bound(self) -> float:
        if isinstance(self.curvature, LipschitzBound):
            return self.curvature.value
        raise NotImplementedError


class FiniteSumObjective(SmoothObjective):
    """Objective of the form f = (1/N) sum_i f_i with per-term gradients."""

    n_terms: int

    def term_value(self, i: int, x: np.ndarray) -> float:
        raise NotImplementedError

    def term_grad(self, i: int, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def minibatch_grad(self, idx, x: np.ndarray) -> np.ndarray:
        """(1/|S|) sum_{i in S} grad f_i(x); defaults to a term_grad loop."""
        idx = np.asarray(idx)
        g = np.zeros_like(x)
        for i in idx:
            g += self.term_grad(int(i), x)
        return g / idx.size


def power_iteration_norm(a: np.ndarray, iters: int = 80, seed: int = 0) -> float:
    """Spectral norm estimate of a symmetric matrix by power iteration."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(a.shape[0])
    v /= np.linalg.norm(v)
    lam = 0.0
    for _ in range(iters):
        w = a @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        lam = nw
    return float(lam)


def _check_symmetric(m: np.ndarray, name: str, tol: float = 1e-12) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square")
    scale = max(1.0, float(np.abs(m).max()))
    if np.abs(m - m.T).max() > tol * scale:
        raise ValueError(f"{name} must be symmetric")


class QuadraticObjective(SmoothObjective):
    """f(X) = 0.5 tr(X^T C X D) with exact curvature H = D kron C."""

    def __init__(self, c: np.ndarray, d: np.ndarray):
        c = np.asarray(c, dtype=float)
        d = np.asarray(d, dtype=float)
        _check_symmetric(c, "C")
        _check_symmetric(d, "D")
        if c.shape != d.shape:
            raise ValueError("C and D must have the same shape")
        self.c = c
        self.d = d
        self.curvature = KroneckerH(c, d)

    def value(self, x: np.ndarray) -> float:
        return float(0.5 * np.sum(x * (self.c @ x @ self.d)))

    def grad(self, x: np.ndarray) -> np.ndarray:
        return 0.5 * (self.c @ x @ self.d + self.c.T @ x @ self.d.T)

    def scalar_bound(self) -> float:
        return power_iteration_norm(self.c) * power_iteration_norm(self.d)


def quadratic_objective(c: np.ndarray, d: np.ndarray) -> QuadraticObjective:
    return QuadraticObjective(c, d)


class HevpObjective(FiniteSumObjective):
    """Hyperbolic eigenvalue problem: f(X) = -tr(X^T D^T D X).

    The objective is concave, so H = 0 is a valid curvature description and
    the tightest one; the finite-sum split is over the m rows of the data
    matrix, f_i(X) = -m * ||D[i, :] X||^2.
    """

    def __init__(self, data: np.ndarray):
        data = np.asarray(data, dtype=float)
        if data.ndim != 2:
            raise ValueError("data must be an m x n matrix")
        self.data = data
        self.gram = data.T @ data
        n = data.shape[1]
        self.n_terms = data.shape[0]
        self.curvature = KroneckerH(np.zeros((n, n)), np.zeros((n, n)))
        self._lipschitz = 2.0 * power_iteration_norm(self.gram)

    def value(self, x: np.ndarray) -> float:
        return float(-np.sum(x * (self.gram @ x)))

    def grad(self, x: np.ndarray) -> np.ndarray:
        return -2.0 * self.gram @ x

    def scalar_bound(self) -> float:
        return self._lipschitz

    def term_value(self, i: int, x: np.ndarray) -> float:
        row = self.data[i] @ x
        return float(-self.n_terms * row @ row)

    def term_grad(self, i: int, x: np.ndarray) -> np.ndarray:
        row = self.data[i : i + 1]
        return -2.0 * self.n_terms * row.T @ (row @ x)

    def minibatch_grad(self, idx, x: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx)
        sub = self.data[idx]
        return (-2.0 * self.n_terms / idx.size) * sub.T @ (sub @ x)


def hevp_objective(data: np.ndarray) -> HevpObjective:
    return HevpObjective(data)


def _indefinite_gram(a: np.ndarray, b: np.ndarray, jdiag: np.ndarray) -> np.ndarray:
    return (a * jdiag) @ b.T


def ultrahyperbolic_distance(x, y, sig: Signature, alpha: float = 1.0) -> float:
    """Geodesic distance on the ultrahyperbolic manifold of radius alpha.

    With u = <x, y>_q / alpha^2 the distance is alpha*acosh(|u|) for |u| >= 1
    and alpha*acos(|u|) otherwise.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u = float(np.sum(x * y * sig.diag)) / alpha**2
    au = abs(u)
    if au >= 1.0:
        return float(alpha * np.arccosh(au))
    return float(alpha * np.arccos(au))


def diffeomorphism_phi(row, sig: Signature, alpha: float = 1.0) -> np.ndarray:
    """Double projection of a vector onto {x : <x, x>_q = -alpha^2}.

    Splits the input as (head, tail) along the signature, rescales the tail to
    the sphere of radius alpha and then stretches it by
    sqrt(alpha^2 + ||head||^2) / alpha, which lands exactly on the manifold.
    Rows already on the manifold are fixed points.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    row = np.asarray(row, dtype=float)
    p = sig.p
    head = row[:p]
    tail = row[p:]
    tail_norm = np.linalg.norm(tail)
    if tail_norm == 0.0:
        raise ValueError("cannot project a row whose negative-signature tail is zero")
    out = np.empty_like(row)
    out[:p] = head
    out[p:] = (np.sqrt(alpha**2 + head @ head) / tail_norm) * tail
    return out


class HsppObjective(FiniteSumObjective):
    """Hyperbolic structural probe: fit geodesic distances to a target metric.

    Rows of the data matrix are projected onto the ultrahyperbolic manifold
    once at construction; the variable X acts as a linear map Q = phi(D) X and
    the loss is the mean squared deviation (1/m^2) sum_ij (T_ij - d(Q_i, Q_j))^2.
    The distance has an acosh/acos kink at |u| = 1; its derivative is clamped
    to zero in a small band around the kink.
    """

    def __init__(self, data, targets, alpha: float, sig: Signature, rng_seed: int = 0):
        data = np.asarray(data, dtype=float)
        targets = np.asarray(targets, dtype=float)
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        m, n = data.shape
        if targets.shape != (m, m):
            raise ValueError("targets must be m x m")
        if np.abs(targets - targets.T).max() > 1e-10 * max(1.0, np.abs(targets).max()):
            raise ValueError("targets must be symmetric")
        if np.abs(np.diag(targets)).max() > 1e-12:
            raise ValueError("targets must have zero diagonal")
        if sig.n != n:
            raise ValueError("signature dimension must match data columns")
        self.alpha = float(alpha)
        self.sig = sig
        self.targets = targets
        self.phi = np.vstack([diffeomorphism_phi(row, sig, alpha) for row in data])
        self.n_terms = m
        # no closed-form curvature: sample gradient Lipschitz ratios on random
        # feasible pairs and keep a x2 safety margin
        rng = np.random.default_rng(rng_seed)
        ratio = 0.0
        for _ in range(50):
            xa = cs_random_init(sig, rng, scale=0.5).x
            xb = cs_random_init(sig, rng, scale=0.5).x
            dist = np.linalg.norm(xa - xb)
            if dist < 1e-12:
                continue
            ratio = max(
                ratio, np.linalg.norm(self.grad(xa) - self.grad(xb)) / dist
            )
        self.curvature = LipschitzBound(2.0 * ratio if ratio > 0 else 1.0)

    def _distance_fields(self, x: np.ndarray):
        """Pairwise u, distances and clamped derivative factors k."""
        q = self.phi @ x
        u = _indefinite_gram(q, q, self.sig.diag) / self.alpha**2
        au = np.abs(u)
        dist = np.where(
            au >= 1.0,
            self.alpha * np.arccosh(np.maximum(au, 1.0)),
            self.alpha * np.arccos(np.minimum(au, 1.0)),
        )
        sign = np.sign(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            k_hyp = sign / (self.alpha * np.sqrt(np.maximum(u * u - 1.0, 0.0)))
            k_sph = -sign / (self.alpha * np.sqrt(np.maximum(1.0 - u * u, 0.0)))
        k = np.where(au >= 1.0, k_hyp, k_sph)
        k[np.abs(au - 1.0) <= _KINK_BAND] = 0.0
        return q, u, dist, k

    def value(self, x: np.ndarray) -> float:
        _, _, dist, _ = self._distance_fields(x)
        r = self.targets - dist
        return float(np.sum(r * r)) / self.n_terms**2

    def grad(self, x: np.ndarray) -> np.ndarray:
        m = self.n_terms
        q, _, dist, k = self._distance_fields(x)
        r = self.targets - dist
        w = (r * k) @ (q * self.sig.diag)
        return (-4.0 / m**2) * self.phi.T @ w

    def term_value(self, i: int, x: np.ndarray) -> float:
        _, _, dist, _ = self._distance_fields(x)
        r = self.targets[i] - dist[i]
        return float(r @ r) / self.n_terms

    def term_grad(self, i: int, x: np.ndarray) -> np.ndarray:
        return self.minibatch_grad([i], x)

    def minibatch_grad(self, idx, x: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx)
        m = self.n_terms
        q, _, dist, k = self._distance_fields(x)
        qj = q * self.sig.diag
        rk = (self.targets - dist) * k
        # grad f_i = -(2/m) sum_j rk_ij (phi_i^T (q_j J) + phi_j^T (q_i J))
        term1 = self.phi[idx].T @ (rk[idx] @ qj)
        term2 = (rk[idx] @ self.phi).T @ qj[idx]
        return (-2.0 / (m * idx.size)) * (term1 + term2)


def hspp_objective(
    data, targets, alpha: float, sig: Signature, rng_seed: int = 0
) -> HsppObjective:
    return HsppObjective(data, targets, alpha, sig, rng_seed)
