"""Dividend maximization under a cap on expected discounted capital injections.

The primal value V(x, K) is recovered through the Lagrangian dual
``inf over lam >= 1 of lam K + V_lam(x)``: feasibility is classified against
the pay-nothing injection floor, and in the interior case the optimal
multiplier is pinned down by complementary slackness (the injection
functional of the lam-optimal policy equals K exactly).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from . import dividends as dv
from .errors import DomainError, NumericalError
from .scale import ScaleEngine

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-9


class SolutionStatus(str, Enum):
    INFEASIBLE = "infeasible"
    PAY_NOTHING = "pay_nothing"
    UNCONSTRAINED_OPTIMUM = "unconstrained_optimum"
    INTERIOR_OPTIMUM = "interior_optimum"


@dataclass(frozen=True)
class ConstraintSolution:
    status: SolutionStatus
    policy: dv.Policy
    value: float                     # -inf for infeasible
    lambda_star: float | None = None
    injections_check: float | None = None   # injection functional at the optimum


# -- injection functionals ---------------------------------------------------

def psi_x(engine: ScaleEngine, x: float, a: float) -> float:
    """Expected discounted injections under the barrier-at-a policy."""
    if a <= 0:
        raise DomainError(f"psi_x requires a > 0, got {a}")
    if x < 0:
        raise DomainError(f"psi_x requires x >= 0, got {x}")
    y = min(x, a)
    return engine.z(a) / (engine.q * engine.w(a)) * engine.z(y) - engine.k_q(y)


def k_lower(engine: ScaleEngine, x: float) -> float:
    """Feasibility floor: injections of the pay-nothing strategy,
    -k(x) + Z(x)/phi(q)."""
    if x < 0:
        raise DomainError(f"k_lower requires x >= 0, got {x}")
    return -engine.k_q(x) + engine.z(x) / engine.phi

def k_upper(engine: ScaleEngine) -> float:
    """Injections of the barrier-at-0 policy: infinite for unbounded
    variation, else (c - psi'(0+))/q."""
    if not engine.model.is_bounded_variation():
        return math.inf
    return (engine.model.drift - engine.mean) / engine.q


def psi_bar(engine: ScaleEngine, x: float, c1: float, c2: float) -> float:
    """Expected discounted injections under the reflected (c1, c2)-policy."""
    if not 0 <= c1 < c2:
        raise DomainError(f"psi_bar requires 0 <= c1 < c2, got c1={c1} c2={c2}")
    if x < 0:
        raise DomainError(f"psi_bar requires x >= 0, got {x}")
    dz = engine.z(c2) - engine.z(c1)
    dzbar = engine.z_bar(c2) - engine.z_bar(c1)
    if x <= c2:
        return engine.z(x) * dzbar / dz - engine.k_q(x)
    return engine.z(c1) * dzbar / dz - engine.k_q(c1)


# -- solvers -----------------------------------------------------------------

def _invert_psi_x(engine: ScaleEngine, x: float, K: float) -> float:
    """Unique a with psi_x(a) = K; psi_x is strictly decreasing in a."""
    lo = 1e-9
    for _ in range(120):
        if psi_x(engine, x, lo) > K:
            break
        lo /= 4.0
    else:
        raise NumericalError(f"psi_x inversion: no lower bracket for x={x}, K={K}")
    hi = max(2.0 * x, 1.0)
    for _ in range(120):
        if psi_x(engine, x, hi) < K:
            break
        hi *= 2.0
    else:
        raise NumericalError(f"psi_x inversion: no upper bracket for x={x}, K={K}")
    return brentq(lambda a: psi_x(engine, x, a) - K, lo, hi, xtol=1e-12)


def _classify_floor(engine: ScaleEngine, x: float, K: float) -> ConstraintSolution | None:
    kl = k_lower(engine, x)
    if K < kl - BOUNDARY_TOL:
        return ConstraintSolution(status=SolutionStatus.INFEASIBLE,
                                  policy=dv.PayNothing(), value=-math.inf)
    if K <= kl + BOUNDARY_TOL:
        return ConstraintSolution(status=SolutionStatus.PAY_NOTHING,
                                  policy=dv.PayNothing(), value=0.0,
                                  injections_check=kl)
    return None


def solve_no_cost(engine: ScaleEngine, x: float, K: float) -> ConstraintSolution:
    """Constrained problem without transaction cost (barrier policies)."""
    if x < 0 or K < 0:
        raise DomainError(f"solve_no_cost requires x >= 0 and K >= 0, got x={x} K={K}")
    floor = _classify_floor(engine, x, K)
    if floor is not None:
        return floor
    ku = k_upper(engine)
    if K >= ku:
        # constraint slack: lam = 1 with immediate full payout (barrier at 0)
        value = K + x + engine.mean / engine.q
        return ConstraintSolution(status=SolutionStatus.UNCONSTRAINED_OPTIMUM,
                                  policy=dv.Barrier(0.0), value=value,
                                  lambda_star=1.0, injections_check=ku)
    a_star = _invert_psi_x(engine, x, K)
    lam_star = 1.0 / engine.h(a_star)
    value = dv.barrier_value(engine, lam_star, a_star, x).dividends_npv
    return ConstraintSolution(status=SolutionStatus.INTERIOR_OPTIMUM,
                              policy=dv.Barrier(a_star), value=value,
                              lambda_star=lam_star,
                              injections_check=psi_x(engine, x, a_star))


def solve_with_cost(engine: ScaleEngine, x: float, K: float, delta: float) -> ConstraintSolution:
    """Constrained problem with transaction cost (reflected-pair policies)."""
    if delta <= 0:
        raise DomainError("solve_with_cost requires delta > 0; use solve_no_cost for delta = 0")
    if x < 0 or K < 0:
        raise DomainError(f"solve_with_cost requires x >= 0 and K >= 0, got x={x} K={K}")
    floor = _classify_floor(engine, x, K)
    if floor is not None:
        return floor
    th1 = dv.optimal_thresholds(engine, 1.0, delta)
    ku_x = psi_bar(engine, x, th1.c1, th1.c2)
    if K >= ku_x:
        value = x + engine.mean / engine.q + K
        return ConstraintSolution(status=SolutionStatus.UNCONSTRAINED_OPTIMUM,
                                  policy=dv.ReflectedPair(th1.c1, th1.c2, delta),
                                  value=value, lambda_star=1.0,
                                  injections_check=ku_x)

    thresholds: dict[float, dv.Thresholds] = {1.0: th1}

    def slack(lam: float) -> float:
        th = thresholds.get(lam)
        if th is None:
            th = dv.optimal_thresholds(engine, lam, delta)
            thresholds[lam] = th
        return psi_bar(engine, x, th.c1, th.c2) - K

    # geometric scan for sign changes of lam -> injections(lam) - K
    scan = [1.0]
    while scan[-1] < 1e6:
        scan.append(scan[-1] * 2.0)
    values = []
    brackets = []
    prev_lam, prev_val = scan[0], slack(scan[0])
    values.append(prev_val)
    for lam in scan[1:]:
        val = slack(lam)
        values.append(val)
        if prev_val > 0 >= val or prev_val >= 0 > val:
            brackets.append((prev_lam, lam))
        prev_lam, prev_val = lam, val
        if len(brackets) >= 1 and val < 0:
            # keep scanning a little to detect non-monotone re-crossings
            if lam > brackets[0][1] * 8:
                break
    if not brackets:
        trace = ", ".join(f"{l:g}:{v:.3e}" for l, v in zip(scan, values))
        raise NumericalError(f"no multiplier sign change found; scan trace: {trace}")

    candidates = []
    for lo, hi in brackets:
        lam_star = brentq(slack, lo, hi, xtol=1e-10)
        th = dv.optimal_thresholds(engine, lam_star, delta)
        policy = dv.ReflectedPair(th.c1, th.c2, delta)
        v_lam = dv.pair_value(engine, lam_star, policy, x).combined
        candidates.append((lam_star * K + v_lam, lam_star, policy))
    if len(candidates) > 1:
        logger.warning("multiple multiplier roots found (%d); keeping the dual minimizer",
                       len(candidates))
    value, lam_star, policy = min(candidates, key=lambda t: t[0])
    return ConstraintSolution(status=SolutionStatus.INTERIOR_OPTIMUM,
                              policy=policy, value=value, lambda_star=lam_star,
                              injections_check=psi_bar(engine, x, policy.c1, policy.c2))


def solve(engine: ScaleEngine, x: float, K: float, delta: float = 0.0) -> ConstraintSolution:
    """Dispatch on the transaction cost."""
    if delta == 0.0:
        return solve_no_cost(engine, x, K)
    return solve_with_cost(engine, x, K, delta)


# -- dual envelope -----------------------------------------------------------

def paper_lambda_grid() -> list[float]:
    """Multiplier grid 1, 1.1, ..., 2, 3, ..., 10, 20, ..., 100, 200, ...,
    1000, 2000, ..., 10000, 20000 used for the envelope datasets."""
    grid = [round(1.0 + 0.1 * i, 1) for i in range(10)]
    grid += list(range(2, 10))
    grid += [10 * i for i in range(1, 10)]
    grid += [100 * i for i in range(1, 10)]
    grid += [1000 * i for i in range(1, 11)]
    grid += [20000]
    return [float(g) for g in grid]


@dataclass(frozen=True)
class EnvelopeTable:
    """Curves lam K + V_lam(x) on a grid, with their pointwise minimum."""

    x: np.ndarray                 # (nx,)
    lambdas: np.ndarray           # (nl,)
    curves: np.ndarray            # (nl, nx)
    envelope: np.ndarray          # (nx,)
    argmin_lambda: np.ndarray     # (nx,)


def dual_envelope(engine: ScaleEngine, x_grid, K: float, lambda_grid, delta: float = 0.0) -> EnvelopeTable:
    """Evaluate every multiplier curve and the dual envelope."""
    x_grid = np.asarray(list(x_grid), dtype=float)
    lambdas = np.asarray(list(lambda_grid), dtype=float)
    if x_grid.size == 0 or lambdas.size == 0:
        raise DomainError("dual_envelope requires nonempty grids")
    curves = np.empty((lambdas.size, x_grid.size))
    for i, lam in enumerate(lambdas):
        if delta == 0.0:
            a = dv.optimal_barrier(engine, lam)
            for j, x in enumerate(x_grid):
                if a > 0:
                    v = dv.barrier_value(engine, lam, a, x).combined
                else:
                    # immediate-payout limit of the barrier value: x + v(0+)
                    v = x + dv.zeta_at_zero(engine, lam) + lam * engine.mean / engine.q
                curves[i, j] = lam * K + v
        else:
            th = dv.optimal_thresholds(engine, lam, delta)
            pol = dv.ReflectedPair(th.c1, th.c2, delta)
            for j, x in enumerate(x_grid):
                curves[i, j] = lam * K + dv.pair_value(engine, lam, pol, x).combined
    idx = np.argmin(curves, axis=0)
    envelope = curves[idx, np.arange(x_grid.size)]
    return EnvelopeTable(x=x_grid, lambdas=lambdas, curves=curves,
                         envelope=envelope, argmin_lambda=lambdas[idx])
