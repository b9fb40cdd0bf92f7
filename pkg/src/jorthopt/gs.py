"""Gauss-Seidel block coordinate descent: one random 2x2 block per iteration.

Each iteration samples a block pair uniformly with replacement, builds the
majorized 2x2 subproblem at the current iterate and applies its exact global
minimizer.  Since the identity is always a subproblem candidate, every step
satisfies f(X+) <= f(X) - (theta/2) ||V - I||_F^2 whenever the curvature
choice majorizes the objective.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import JOrthMatrix, apply_block_update, n_pairs, sample_block
from .objectives import KroneckerH, SmoothObjective
from .subproblem import build_subproblem, solve_block

__all__ = ["GsConfig", "IterationRecord", "gs_solve", "gs_step", "resolve_q_mode"]

_FEASIBLE_START = 1e-6


@dataclass
class GsConfig:
    theta: float | None = None        # None: 1e-3 (exact) or 1e-3*(1+varsigma) (scalar)
    q_mode: str = "scalar"            # "scalar" or "exact"
    varsigma: float | None = None     # None: objective's own scalar bound
    max_iters: int | None = 10_000
    time_limit: float | None = None   # seconds
    seed: int = 0
    trace_every: int = 1
    eps_stop: float | None = None     # moving-average step-size stop, off by default
    callback: Callable[["IterationRecord"], None] | None = None

    def __post_init__(self):
        if self.max_iters is None and self.time_limit is None:
            raise ValueError("need at least one of max_iters / time_limit")
        if self.theta is not None and self.theta <= 0:
            raise ValueError("theta must be positive")
        if self.q_mode not in ("scalar", "exact"):
            raise ValueError("q_mode must be 'scalar' or 'exact'")


@dataclass
class IterationRecord:
    iter: int
    elapsed: float
    objective: float
    residual: float
    v_dist: float                     # ||V - I||_F^2 of the step (summed for Jacobi)
    grad_dev: float | None = field(default=None)  # ||G~ - grad f||_F, VR runs only


def resolve_q_mode(obj: SmoothObjective, q_mode: str, varsigma: float | None):
    """Materialize the subproblem curvature choice and the default theta."""
    if q_mode == "exact":
        if not isinstance(obj.curvature, KroneckerH):
            raise ValueError("exact q_mode needs an objective with Kronecker curvature")
        return ("exact", (obj.curvature.c, obj.curvature.d)), 1e-3
    vs = obj.scalar_bound() if varsigma is None else float(varsigma)
    return ("scalar", vs), 1e-3 * (1.0 + vs)


def gs_step(obj: SmoothObjective, x: JOrthMatrix, b, q_mode, theta: float):
    """One block update applied in place; returns (Vbar, new objective value)."""
    grad = obj.grad(x.x)
    sp = build_subproblem(x, grad, b, q_mode, theta)
    sol = solve_block(sp)
    apply_block_update(x, b, sol.v)
    return sol.v, obj.value(x.x)


def gs_solve(
    obj: SmoothObjective, x0: JOrthMatrix, cfg: GsConfig
) -> tuple[JOrthMatrix, list[IterationRecord]]:
    """Run the Gauss-Seidel solver from a feasible starting point.

    Returns the final iterate and the recorded trace (one record every
    cfg.trace_every iterations plus the final one).
    """
    if x0.residual > _FEASIBLE_START:
        raise ValueError(
            f"starting point is infeasible (residual {x0.residual:.3e} > {_FEASIBLE_START})"
        )
    q_mode, default_theta = resolve_q_mode(obj, cfg.q_mode, cfg.varsigma)
    theta = cfg.theta if cfg.theta is not None else default_theta
    rng = np.random.default_rng(cfg.seed)
    x = x0.copy()

    trace: list[IterationRecord] = []
    start = time.perf_counter()
    window = n_pairs(x.n)
    recent: list[float] = []

    def record(t: int, fval: float, vdist: float) -> None:
        rec = IterationRecord(
            iter=t,
            elapsed=time.perf_counter() - start,
            objective=fval,
            residual=x.residual,
            v_dist=vdist,
        )
        trace.append(rec)
        if cfg.callback is not None:
            cfg.callback(rec)

    t = 0
    fval = obj.value(x.x)
    vdist = 0.0
    while True:
        if cfg.max_iters is not None and t >= cfg.max_iters:
            break
        if cfg.time_limit is not None and time.perf_counter() - start > cfg.time_limit:
            break
        b = sample_block(x.sig, rng)
        vbar, fval = gs_step(obj, x, b, q_mode, theta)
        vdist = float(np.sum((vbar - np.eye(2)) ** 2))
        t += 1
        if t % cfg.trace_every == 0:
            record(t, fval, vdist)
        if cfg.eps_stop is not None:
            recent.append(vdist)
            if len(recent) > window:
                recent.pop(0)
            if len(recent) == window and sum(recent) / window < cfg.eps_stop:
                break

    if not trace or trace[-1].iter != t:
        record(t, fval, vdist)
    return x, trace
