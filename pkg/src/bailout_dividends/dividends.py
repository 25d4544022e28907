"""Optimal dividend policies with capital injection, for a fixed injection cost.

Two families of controls:

* barrier at ``a`` (no transaction cost): pay every excess over ``a`` as it
  accrues, inject to keep the surplus nonnegative;
* reflected pair ``(c1, c2)`` (fixed cost ``delta`` per payment): whenever the
  injected surplus reaches or exceeds ``c2``, pay a lump bringing it down to
  ``c1`` and pay the cost ``delta``.

The slope functional ``zeta(a) = (1 - lam Z(a)) / (q W(a))`` is maximized by
the optimal barrier; the pair objective
``G(c1, c2) = (c2 - c1 - delta - lam (Zbar(c2) - Zbar(c1))) / (Z(c2) - Z(c1))``
has a unique maximizer with ``0 <= c1 <= a_lam < c2`` characterized by the
first-order conditions ``zeta(c1) = zeta(c2) = G`` (the c1-equation holding
only when c1 > 0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .errors import DomainError, NumericalError
from .scale import ScaleEngine

_ROOT_TOL = 1e-12


# -- policies ----------------------------------------------------------------

@dataclass(frozen=True)
class PayNothing:
    pass


@dataclass(frozen=True)
class Barrier:
    a: float

    def __post_init__(self):
        if self.a < 0:
            raise DomainError(f"barrier level must be nonnegative, got {self.a}")


@dataclass(frozen=True)
class ReflectedPair:
    c1: float
    c2: float
    delta: float = 0.0

    def __post_init__(self):
        if self.c1 < 0 or self.c2 <= self.c1:
            raise DomainError(f"need 0 <= c1 < c2, got c1={self.c1} c2={self.c2}")
        if self.delta < 0:
            raise DomainError(f"delta must be nonnegative, got {self.delta}")


Policy = PayNothing | Barrier | ReflectedPair


@dataclass(frozen=True)
class ValueReport:
    """NPV decomposition of a policy started from capital x."""

    dividends_npv: float   # net of per-payment costs
    injections_npv: float
    lam: float
    x: float

    @property
    def combined(self) -> float:
        return self.dividends_npv - self.lam * self.injections_npv


@dataclass(frozen=True)
class Thresholds:
    """Optimal reflected-pair levels for a given injection cost multiplier."""

    c1: float
    c2: float
    a_lambda: float
    g_max: float
    foc_residual: float    # |G(c1,c2) - zeta(c2)| at the reported solution
    match_residual: float  # |zeta(c1) - zeta(c2)| when c1 > 0, else 0


# -- barrier problem ---------------------------------------------------------

def _check_lambda(lam: float) -> None:
    if lam < 1.0:
        raise DomainError(
            f"injection cost multiplier must be >= 1 (got {lam}); below 1 the value is infinite"
        )


def zeta(engine: ScaleEngine, lam: float, a: float) -> float:
    """Barrier slope functional (1 - lam Z(a)) / (q W(a)), a > 0."""
    _check_lambda(lam)
    if a <= 0:
        raise DomainError(f"zeta requires a > 0, got {a}")
    return (1.0 - lam * engine.z(a)) / (engine.q * engine.w(a))


def zeta_at_zero(engine: ScaleEngine, lam: float) -> float:
    """Limit of zeta at 0+: 0 for lam = 1, -(lam-1)/(q W(0)) otherwise.

    Minus infinity for unbounded variation with lam > 1.
    """
    _check_lambda(lam)
    if lam == 1.0:
        return 0.0
    w0 = engine.backend.w0
    if w0 == 0.0:
        return -math.inf
    return -(lam - 1.0) / (engine.q * w0)


def optimal_barrier(engine: ScaleEngine, lam: float) -> float:
    """Level maximizing zeta: 0 on the small-lam bounded-variation branch,
    else the unique solution of h(a) = 1/lam."""
    _check_lambda(lam)
    model = engine.model
    if model.is_bounded_variation():
        mass = model.jumps.rate if model.jumps else 0.0
        if mass == 0.0 or lam < 1.0 + engine.q / mass:
            return 0.0
    return engine.h_inverse(1.0 / lam)


def barrier_value(engine: ScaleEngine, lam: float, a: float, x: float) -> ValueReport:
    """NPV report of the barrier-at-a policy from initial capital x."""
    _check_lambda(lam)
    if a <= 0:
        raise DomainError(f"barrier_value requires a > 0, got {a}")
    if x < 0:
        raise DomainError(f"initial capital must be nonnegative, got {x}")
    y = min(x, a)
    div = engine.z(y) / (engine.q * engine.w(a))
    inj = engine.z(a) / (engine.q * engine.w(a)) * engine.z(y) - engine.k_q(y)
    if x > a:
        div += x - a
    return ValueReport(dividends_npv=div, injections_npv=inj, lam=lam, x=x)


# -- reflected-pair problem --------------------------------------------------

def g(engine: ScaleEngine, lam: float, c1: float, c2: float, delta: float) -> float:
    """Pair objective G(c1, c2); diverges to -inf as c2 decreases to c1."""
    _check_lambda(lam)
    if not 0 <= c1 < c2:
        raise DomainError(f"g requires 0 <= c1 < c2, got c1={c1} c2={c2}")
    dz = engine.z(c2) - engine.z(c1)
    dzbar = engine.z_bar(c2) - engine.z_bar(c1)
    return (c2 - c1 - delta - lam * dzbar) / dz


def _match_c1(engine: ScaleEngine, lam: float, a_lam: float, target: float) -> float:
    """Unique c1 in [0, a_lam) with zeta(c1) = target, or 0 when the limit at
    zero already lies above the target."""
    if a_lam <= 0.0:
        return 0.0
    if zeta_at_zero(engine, lam) >= target:
        return 0.0
    lo = a_lam / 2.0
    for _ in range(400):
        if zeta(engine, lam, lo) < target:
            break
        lo /= 2.0
    else:
        return 0.0
    hi = a_lam * (1.0 - 1e-12)
    if zeta(engine, lam, hi) <= target:
        return hi
    return brentq(lambda c: zeta(engine, lam, c) - target, lo, hi, xtol=_ROOT_TOL)


def optimal_thresholds(engine: ScaleEngine, lam: float, delta: float) -> Thresholds:
    """Unique maximizer of G for delta > 0.

    Search: zeta is strictly decreasing on (a_lam, inf), so c2 parameterizes
    the matching level m = zeta(c2) and c1(c2) solves zeta(c1) = m on
    [0, a_lam).  The scalar equation G(c1(c2), c2) = zeta(c2) then has a
    bracketed root: the left side tends to -inf as c2 decreases to a_lam and
    the difference turns positive for large c2.
    """
    _check_lambda(lam)
    if delta <= 0:
        raise DomainError("optimal_thresholds requires delta > 0; use the barrier solver for delta = 0")
    a_lam = optimal_barrier(engine, lam)

    def residual(c2: float) -> float:
        c1 = _match_c1(engine, lam, a_lam, zeta(engine, lam, c2))
        return g(engine, lam, c1, c2, delta) - zeta(engine, lam, c2)

    lo = a_lam + 1e-9 if a_lam > 0 else 1e-9
    for _ in range(60):
        if residual(lo) < 0:
            break
        lo = a_lam + (lo - a_lam) / 4.0
    hi = max(2.0 * a_lam, a_lam + max(1.0, 4.0 * delta))
    for _ in range(60):
        if residual(hi) > 0:
            break
        hi = a_lam + 2.0 * (hi - a_lam)
        if hi - a_lam > 1e7:
            raise NumericalError(
                f"threshold bracketing failed for lam={lam}, delta={delta}: no sign change up to c2={hi}"
            )
    c2 = brentq(residual, lo, hi, xtol=_ROOT_TOL)
    c1 = _match_c1(engine, lam, a_lam, zeta(engine, lam, c2))
    g_max = g(engine, lam, c1, c2, delta)
    foc = abs(g_max - zeta(engine, lam, c2))
    match = abs(zeta(engine, lam, c1) - zeta(engine, lam, c2)) if c1 > 0 else 0.0
    return Thresholds(c1=c1, c2=c2, a_lambda=a_lam, g_max=g_max,
                      foc_residual=foc, match_residual=match)


def pair_value(engine: ScaleEngine, lam: float, pair: ReflectedPair, x: float) -> ValueReport:
    """NPV report of a reflected (c1, c2)-policy from initial capital x."""
    _check_lambda(lam)
    if x < 0:
        raise DomainError(f"initial capital must be nonnegative, got {x}")
    c1, c2, delta = pair.c1, pair.c2, pair.delta
    dz = engine.z(c2) - engine.z(c1)
    dzbar = engine.z_bar(c2) - engine.z_bar(c1)
    y = min(x, c2)
    div = (c2 - c1 - delta) * engine.z(y) / dz
    inj = engine.z(y) * dzbar / dz - engine.k_q(y)
    if x > c2:
        # an immediate payment of x - c1 (costing delta) restarts the policy at c1
        div = x - c1 - delta + (c2 - c1 - delta) * engine.z(c1) / dz
        inj = engine.z(c1) * dzbar / dz - engine.k_q(c1)
    return ValueReport(dividends_npv=div, injections_npv=inj, lam=lam, x=x)


def policy_value(engine: ScaleEngine, lam: float, policy: Policy, x: float) -> ValueReport:
    """NPV report for any supported policy type."""
    if isinstance(policy, PayNothing):
        inj = -engine.k_q(x) + engine.z(x) / engine.phi
        return ValueReport(dividends_npv=0.0, injections_npv=inj, lam=lam, x=x)
    if isinstance(policy, Barrier):
        return barrier_value(engine, lam, policy.a, x)
    return pair_value(engine, lam, policy, x)
