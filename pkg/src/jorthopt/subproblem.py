"""Exact global solution of the 2x2 block subproblem.

Each block step minimizes 0.5 * ||V - I||_Qdot^2 + <V - I, P> over the 2x2
matrices feasible for the block: hyperbolic rotations/reflections when the two
signature entries differ, plane rotations/reflections otherwise.  Both kinds
reduce to one scalar variable whose stationarity condition is a quartic,
solved in closed form; the global minimizer is picked by direct evaluation
over all candidate families (the identity is always a candidate, so every
solve is a descent step).

vec() is column-major throughout: vec(V) = [V11, V21, V12, V22].
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BlockKind, BlockPair, JOrthMatrix
from .quartic import solve_quartic

__all__ = [
    "SubproblemData",
    "ReducedCoeffs",
    "SubproblemSolution",
    "build_subproblem",
    "reduce_hyperbolic",
    "solve_hyperbolic_block",
    "solve_orthogonal_block",
    "solve_block",
    "subproblem_value",
    "HYPERBOLIC_PATTERNS",
    "ORTHOGONAL_PATTERNS",
]

_T_EDGE = 1e-12       # |t| >= 1 - _T_EDGE is discarded (cosh blow-up)
_SIGN_CHECK = 1e-6    # pre-squared stationarity agreement, relative

# Entry sign patterns (s11, s12, s21, s22) for V = [[s11*c, s12*s], [s21*s, s22*c]].
# Hyperbolic: c = cosh(mu), s = sinh(mu); orthogonal: c = cos(phi), s = sin(phi).
HYPERBOLIC_PATTERNS = {
    1: (1.0, 1.0, 1.0, 1.0),     # [[ c,  s], [ s,  c]]
    2: (1.0, -1.0, -1.0, 1.0),   # [[ c, -s], [-s,  c]]
    3: (-1.0, -1.0, 1.0, 1.0),   # [[-c, -s], [ s,  c]]
    4: (1.0, -1.0, 1.0, -1.0),   # [[ c, -s], [ s, -c]]
}
ORTHOGONAL_PATTERNS = {
    1: (1.0, -1.0, 1.0, 1.0),    # rotation   [[c, -s], [s,  c]]
    2: (1.0, 1.0, 1.0, -1.0),    # reflection [[c,  s], [s, -c]]
}


@dataclass(frozen=True)
class SubproblemData:
    """Curvature matrix Qdot = Q + theta*I (4x4 PSD) and linear term P (2x2)."""

    qdot: np.ndarray
    pmat: np.ndarray
    kind: BlockKind
    theta: float


@dataclass(frozen=True)
class ReducedCoeffs:
    """Coefficients of the reduced objective a*c + b*s + c*c^2 + d*c*s + e*s^2."""

    a: float
    b: float
    c: float
    d: float
    e: float

    @property
    def w(self) -> float:
        return self.c + self.e


@dataclass(frozen=True)
class SubproblemSolution:
    v: np.ndarray
    value: float
    case_id: int


def _vec(m: np.ndarray) -> np.ndarray:
    return m.reshape(4, order="F")


def _mat(v: np.ndarray) -> np.ndarray:
    return v.reshape(2, 2, order="F")


def subproblem_value(sp: SubproblemData, v: np.ndarray) -> float:
    """0.5 * ||V||_Qdot^2 + <V, P> (the constant-free subproblem objective)."""
    vv = _vec(v)
    return float(0.5 * vv @ sp.qdot @ vv + np.sum(v * sp.pmat))


def build_subproblem(
    x: JOrthMatrix,
    grad: np.ndarray,
    b: BlockPair,
    q_mode,
    theta: float,
) -> SubproblemData:
    """Assemble the block subproblem from the current iterate and gradient.

    q_mode is either ("scalar", varsigma) for Q = varsigma*I4, or
    ("exact", (C, D)) for the curvature H = D kron C compressed onto the
    block: Q = (Z D Z^T) kron C[B, B] with Z = X(B, :).
    """
    if theta <= 0:
        raise ValueError("theta must be positive")
    mode, payload = q_mode
    idx = b.idx
    if mode == "scalar":
        q = float(payload) * np.eye(4)
    elif mode == "exact":
        c_mat, d_mat = payload
        z = x.x[idx, :]
        q = np.kron(z @ d_mat @ z.T, c_mat[np.ix_(idx, idx)])
        q = 0.5 * (q + q.T)
    else:
        raise ValueError(f"unknown q_mode {mode!r}")
    qdot = q + theta * np.eye(4)
    p_full = grad[idx, :] @ x.x[idx, :].T
    pmat = p_full - _mat(qdot @ _vec(np.eye(2)))
    return SubproblemData(qdot=qdot, pmat=pmat, kind=b.kind, theta=theta)


def _reduce_pattern(sp: SubproblemData, signs) -> ReducedCoeffs:
    s11, s12, s21, s22 = signs
    p = sp.pmat
    a = s11 * p[0, 0] + s22 * p[1, 1]
    b = s12 * p[0, 1] + s21 * p[1, 0]
    u_c = np.array([s11, 0.0, 0.0, s22])   # vec of the cosh/cos slots
    u_s = np.array([0.0, s21, s12, 0.0])   # vec of the sinh/sin slots
    qc = sp.qdot @ u_c
    qs = sp.qdot @ u_s
    return ReducedCoeffs(
        a=float(a),
        b=float(b),
        c=float(0.5 * u_c @ qc),
        d=float(u_c @ qs),
        e=float(0.5 * u_s @ qs),
    )


def reduce_hyperbolic(sp: SubproblemData, case: int) -> ReducedCoeffs:
    """Reduced scalar objective for one of the four hyperbolic sign cases."""
    if sp.kind is not BlockKind.HYPERBOLIC:
        raise ValueError("reduce_hyperbolic requires a hyperbolic block")
    if case not in HYPERBOLIC_PATTERNS:
        raise ValueError(f"case must be in 1..4, got {case}")
    return _reduce_pattern(sp, HYPERBOLIC_PATTERNS[case])


def _pattern_matrix(signs, c: float, s: float) -> np.ndarray:
    s11, s12, s21, s22 = signs
    return np.array([[s11 * c, s12 * s], [s21 * s, s22 * c]])


def solve_hyperbolic_block(sp: SubproblemData) -> SubproblemSolution:
    """Global minimizer over the four hyperbolic families and both branches.

    For each sign case the objective along (cosh mu, sinh mu) becomes
    p(t) = (a + b t)/sqrt(1-t^2) + (w + d t)/(1-t^2) in t = tanh(mu), whose
    stationarity quartic is c4 t^4 + c3 t^3 + c2 t^2 + c1 t + c0 with
    c4 = d^2+a^2, c3 = 4wd+2ab, c2 = 4w^2+2d^2-a^2+b^2, c1 = 4wd-2ab,
    c0 = d^2-b^2.  The negative branch (cosh -> -cosh) flips the signs of
    (a, b), which leaves the quartic unchanged; only the root sign-filter
    differs.  Roots that fail the pre-squared stationarity check
    d t^2 + 2wt + d = -(b + a t) sqrt(1-t^2) are squaring artifacts and are
    dropped.
    """
    if sp.kind is not BlockKind.HYPERBOLIC:
        raise ValueError("solve_hyperbolic_block requires a hyperbolic block")
    identity = np.eye(2)
    best_v = identity
    best_val = subproblem_value(sp, identity)
    best_case = 1

    for case, signs in HYPERBOLIC_PATTERNS.items():
        rc = _reduce_pattern(sp, signs)
        a, b, d, w = rc.a, rc.b, rc.d, rc.w
        scale = max(1.0, abs(a), abs(b), abs(d), abs(w))
        c4 = d * d + a * a
        c3 = 4.0 * w * d + 2.0 * a * b
        c2 = 4.0 * w * w + 2.0 * d * d - a * a + b * b
        c1 = 4.0 * w * d - 2.0 * a * b
        c0 = d * d - b * b
        if max(abs(c4), abs(c3), abs(c2), abs(c1), abs(c0)) <= 1e-14 * scale * scale:
            roots = [0.0]
        else:
            roots = solve_quartic(c4, c3, c2, c1, c0)
        roots = [t for t in roots if abs(t) < 1.0 - _T_EDGE]
        if 0.0 not in roots:
            roots.append(0.0)  # cheap extra candidate, always feasible

        for branch in (1.0, -1.0):
            aa, bb = branch * a, branch * b
            for t in roots:
                root_term = math.sqrt(1.0 - t * t)
                lhs = d * t * t + 2.0 * w * t + d
                rhs = -(bb + aa * t) * root_term
                if t != 0.0 and abs(lhs - rhs) > _SIGN_CHECK * scale:
                    continue
                r = 1.0 / root_term
                v = _pattern_matrix(signs, branch * r, branch * t * r)
                val = subproblem_value(sp, v)
                if val < best_val:
                    best_v, best_val, best_case = v, val, case

    return SubproblemSolution(v=best_v, value=best_val, case_id=best_case)


def solve_orthogonal_block(sp: SubproblemData) -> SubproblemSolution:
    """Global minimizer over plane rotations and reflections.

    With (cos phi, sin phi) on the unit circle and the tangent half-angle
    substitution t = tan(phi/2), stationarity of the reduced objective is the
    quartic (d-b) t^4 - (2a + 4(e-c)) t^3 - 6d t^2 + (-2a + 4(e-c)) t + (b+d).
    The substitution cannot reach phi = pi, so (cos, sin) = (-1, 0) is added
    as an explicit boundary candidate.
    """
    if sp.kind is not BlockKind.ORTHOGONAL:
        raise ValueError("solve_orthogonal_block requires an orthogonal block")
    identity = np.eye(2)
    best_v = identity
    best_val = subproblem_value(sp, identity)
    best_case = 1

    for case, signs in ORTHOGONAL_PATTERNS.items():
        rc = _reduce_pattern(sp, signs)
        a, b, c, d, e = rc.a, rc.b, rc.c, rc.d, rc.e
        scale = max(1.0, abs(a), abs(b), abs(d), abs(e - c))
        q4 = d - b
        q3 = -2.0 * a - 4.0 * (e - c)
        q2 = -6.0 * d
        q1 = -2.0 * a + 4.0 * (e - c)
        q0 = b + d
        if max(abs(q4), abs(q3), abs(q2), abs(q1), abs(q0)) <= 1e-14 * scale:
            roots = [0.0]
        else:
            roots = solve_quartic(q4, q3, q2, q1, q0)
        candidates = [(1.0, 0.0), (-1.0, 0.0)]
        for t in roots:
            den = 1.0 + t * t
            candidates.append(((1.0 - t * t) / den, 2.0 * t / den))
        for cc, ss in candidates:
            v = _pattern_matrix(signs, cc, ss)
            val = subproblem_value(sp, v)
            if val < best_val:
                best_v, best_val, best_case = v, val, case

    return SubproblemSolution(v=best_v, value=best_val, case_id=best_case)


def solve_block(sp: SubproblemData) -> SubproblemSolution:
    """Dispatch on the block kind."""
    if sp.kind is BlockKind.HYPERBOLIC:
        return solve_hyperbolic_block(sp)
    return solve_orthogonal_block(sp)
