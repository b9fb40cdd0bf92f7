"""Closed-form real root finding for polynomials up to degree four.

Ferrari's method (quartic -> resolvent cubic -> two quadratics) with a cubic
solver in Cardano/trigonometric form underneath.  All candidate roots are
polished by Newton steps in extended precision and validated against the
polynomial residual; near-degenerate factorizations fall back to the
companion-matrix eigenvalue method.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["solve_quartic", "solve_cubic", "solve_quadratic", "real_companion_roots"]

_DEGENERATE_LEAD = 1e-12   # leading coefficient cutoff, relative to max |coeff|
_ACCEPT_RESIDUAL = 1e-10   # polished-root residual acceptance, relative
_DEDUPE = 1e-8


def _polish(coeffs: np.ndarray, t: float) -> float:
    """A few Newton steps in long double on p(t) = sum coeffs[i] t^(deg-i)."""
    c = coeffs.astype(np.longdouble)
    dc = c[:-1] * np.arange(len(c) - 1, 0, -1, dtype=np.longdouble)
    x = np.longdouble(t)
    for _ in range(8):
        p = np.longdouble(0.0)
        for ci in c:
            p = p * x + ci
        dp = np.longdouble(0.0)
        for ci in dc:
            dp = dp * x + ci
        if dp == 0.0:
            break
        step = p / dp
        x_new = x - step
        if abs(step) <= np.finfo(np.longdouble).eps * max(1.0, abs(x)):
            x = x_new
            break
        x = x_new
    return float(x)


def _residual(coeffs: np.ndarray, t: float) -> float:
    """|p(t)| evaluated by Horner in long double."""
    x = np.longdouble(t)
    p = np.longdouble(0.0)
    for ci in coeffs.astype(np.longdouble):
        p = p * x + ci
    return float(abs(p))


def _finish(coeffs: np.ndarray, candidates: list[float]) -> list[float]:
    """Polish, residual-filter and dedupe candidate real roots."""
    scale = float(np.max(np.abs(coeffs)))
    deg = len(coeffs) - 1
    roots = []
    for t in candidates:
        if not math.isfinite(t):
            continue
        t = _polish(coeffs, t)
        tol = _ACCEPT_RESIDUAL * scale * max(1.0, abs(t)) ** deg
        if _residual(coeffs, t) <= tol:
            roots.append(t)
    roots.sort()
    out: list[float] = []
    for t in roots:
        if not out or abs(t - out[-1]) > _DEDUPE * max(1.0, abs(t)):
            out.append(t)
    return out


def real_companion_roots(coeffs) -> list[float]:
    """Real roots via companion-matrix eigenvalues (numpy.roots), polished."""
    coeffs = np.asarray(coeffs, dtype=float)
    all_roots = np.roots(coeffs)
    cands = [float(r.real) for r in all_roots if abs(r.imag) <= 1e-7 * max(1.0, abs(r))]
    return _finish(coeffs, cands)


def solve_quadratic(c2: float, c1: float, c0: float) -> list[float]:
    """Real roots of c2 t^2 + c1 t + c0, numerically stable form."""
    if c2 == 0.0 and c1 == 0.0 and c0 == 0.0:
        raise ValueError("zero polynomial has no well-defined root set")
    scale = max(abs(c2), abs(c1), abs(c0))
    if abs(c2) <= _DEGENERATE_LEAD * scale:
        if abs(c1) <= _DEGENERATE_LEAD * scale:
            return []
        return [-c0 / c1]
    disc = c1 * c1 - 4.0 * c2 * c0
    fuzz = 4.0 * np.finfo(float).eps * max(c1 * c1, abs(4.0 * c2 * c0))
    if disc < -fuzz:
        return []
    if disc <= fuzz:
        return _finish(np.array([c2, c1, c0]), [-c1 / (2.0 * c2)])
    sq = math.sqrt(disc)
    qq = -0.5 * (c1 + math.copysign(sq, c1))
    roots = [qq / c2]
    if qq != 0.0:
        roots.append(c0 / qq)
    else:
        roots.append(0.0)
    return _finish(np.array([c2, c1, c0]), roots)


def _cubic_candidates(b: float, c: float, d: float) -> list[float]:
    """Candidate real roots of the monic cubic t^3 + b t^2 + c t + d."""
    # depressed form y^3 + p y + q, t = y - b/3
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    shift = -b / 3.0
    disc = -4.0 * p ** 3 - 27.0 * q * q
    if disc >= 0.0:
        # three real roots (trigonometric form); p <= 0 here
        if p >= 0.0:
            # only possible with p ~ 0: triple root region
            return [shift + np.cbrt(-q)]
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg) / 3.0
        return [shift + m * math.cos(phi - 2.0 * math.pi * k / 3.0) for k in range(3)]
    # one real root (Cardano)
    rt = math.sqrt(q * q / 4.0 + p ** 3 / 27.0)
    u = np.cbrt(-q / 2.0 + rt)
    v = np.cbrt(-q / 2.0 - rt)
    return [shift + u + v]


def solve_cubic(c3: float, c2: float, c1: float, c0: float) -> list[float]:
    """All real roots of c3 t^3 + c2 t^2 + c1 t + c0."""
    coeffs = np.array([c3, c2, c1, c0])
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        raise ValueError("zero polynomial has no well-defined root set")
    if abs(c3) <= _DEGENERATE_LEAD * scale:
        return solve_quadratic(c2, c1, c0)
    cands = _cubic_candidates(c2 / c3, c1 / c3, c0 / c3)
    roots = _finish(coeffs, cands)
    if not roots:
        # a real cubic always has a real root; the closed form lost it
        roots = real_companion_roots(coeffs)
    return roots


def _ferrari_candidates(b: float, c: float, d: float, e: float) -> list[float] | None:
    """Candidate real roots of the monic quartic t^4 + b t^3 + c t^2 + d t + e.

    Returns None when the resolvent factorization is too ill-conditioned to
    trust, signalling the companion-matrix fallback.
    """
    # depressed form y^4 + p y^2 + q y + r, t = y - b/4
    b2 = b * b
    p = c - 3.0 * b2 / 8.0
    q = d - b * c / 2.0 + b2 * b / 8.0
    r = e - b * d / 4.0 + b2 * c / 16.0 - 3.0 * b2 * b2 / 256.0
    shift = -b / 4.0
    qscale = max(1.0, abs(p), abs(r))

    if abs(q) <= 1e-14 * qscale:
        # biquadratic: z^2 + p z + r with z = y^2
        cands = []
        for z in solve_quadratic(1.0, p, r):
            if z >= 0.0:
                cands.extend([shift + math.sqrt(z), shift - math.sqrt(z)])
        return cands

    # resolvent cubic 8 m^3 + 8 p m^2 + (2 p^2 - 8 r) m - q^2 = 0
    ms = _cubic_candidates(p, (2.0 * p * p - 8.0 * r) / 8.0, -q * q / 8.0)
    m = max(ms)
    if m <= 1e-14 * qscale:
        return None
    s = math.sqrt(2.0 * m)
    half = p / 2.0 + m
    corr = q / (2.0 * s)
    cands = []
    for sgn in (-1.0, 1.0):
        # factor y^2 - sgn*s*y + (half + sgn*corr)
        cc = half + sgn * corr
        disc = 2.0 * m - 4.0 * cc
        fuzz = 1e-10 * max(1.0, 2.0 * m, abs(4.0 * cc))
        if disc < -fuzz:
            continue
        sq = math.sqrt(max(disc, 0.0))
        y0 = (sgn * s + sq) / 2.0
        y1 = (sgn * s - sq) / 2.0
        cands.extend([shift + y0, shift + y1])
    return cands


def solve_quartic(c4: float, c3: float, c2: float, c1: float, c0: float) -> list[float]:
    """All real roots of c4 t^4 + c3 t^3 + c2 t^2 + c1 t + c0, sorted ascending.

    Degenerate leading coefficients fall through to the cubic / quadratic /
    linear solvers.  Every returned root is Newton-polished so that the
    polynomial residual stays below ~1e-8 relative to the coefficient scale.
    """
    coeffs = np.array([c4, c3, c2, c1, c0], dtype=float)
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0:
        raise ValueError("zero polynomial has no well-defined root set")
    if abs(c4) <= _DEGENERATE_LEAD * scale:
        return solve_cubic(c3, c2, c1, c0)
    cands = _ferrari_candidates(c3 / c4, c2 / c4, c1 / c4, c0 / c4)
    if cands is None:
        return real_companion_roots(coeffs)
    return _finish(coeffs, cands)
