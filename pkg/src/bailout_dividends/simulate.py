"""Monte Carlo oracle for the controlled risk process.

Simulates ``X - D + R`` under any supported policy: the Gaussian part by
Euler increments, compound Poisson jumps exactly at their exponential
arrival times (the step containing a jump is split), drift exactly.
Capital injections keep the state nonnegative and are applied at step
boundaries and at jump times; the barrier policy skims the per-step
overflow, the reflected-pair policy pays a lump of ``state - c1`` minus
the cost ``delta`` whenever the state is at or above ``c2``.

Estimates are averaged over paths with sample standard errors.  Two
accuracy knobs beyond (paths, step):

* far-field blocking: while the state is provably far from every payment
  boundary, many Euler steps are merged into one Gaussian increment (the
  merged displacement is exact in law; the probability of an undetected
  boundary touch is below the 8-sigma tail, ~1e-15 per block);
* bridge-exact boundaries: reflections (the dividend barrier and the
  injection floor) and exit crossings are resolved through the sampled
  running extremum of each Gaussian advance, which removes the
  O(sqrt(dt)) monitoring bias entirely; only the reflected-pair payment
  level is monitored discretely, with an optional continuity correction
  of 0.5826 sigma sqrt(dt) (on by default).

Determinism: every path derives its two random streams (Gaussian /
jumps) from (seed, path index) alone, so results are bit-identical for a
fixed config regardless of scheduling.  Antithetic pairs negate the
Gaussian stream and share the jump stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .dividends import Barrier, PayNothing, Policy, ReflectedPair
from .errors import DomainError
from .levy import Exponential, Gamma, LevyModel

# continuity-correction constant: -zeta(1/2) / sqrt(2 pi)
_BETA = 0.5826

_KIND_PAY_NOTHING = 0
_KIND_BARRIER = 1
_KIND_PAIR = 2

_JUMP_NONE = 0
_JUMP_EXPONENTIAL = 1
_JUMP_GAMMA = 2

_U64 = np.uint64
_INV_2_53 = 1.0 / 9007199254740992.0


@dataclass(frozen=True)
class SimConfig:
    """Path count, Euler step, truncation horizon, seed, antithetic flag."""

    n_paths: int
    time_step: float = 1e-3
    horizon: float | None = None   # default: 6 ln(10) / q, i.e. e^{-qT} = 1e-6
    seed: int = 0
    antithetic: bool = False
    boundary_correction: bool = True

    def __post_init__(self):
        if self.n_paths <= 0:
            raise DomainError(f"n_paths must be positive, got {self.n_paths}")
        if self.time_step <= 0 or self.time_step > 1e-2:
            raise DomainError(
                f"time_step must lie in (0, 1e-2], got {self.time_step}"
            )
        if self.horizon is not None and self.horizon <= 0:
            raise DomainError(f"horizon must be positive, got {self.horizon}")
        if self.antithetic and self.n_paths % 2:
            raise DomainError("antithetic simulation needs an even n_paths")

    def resolved_horizon(self, q: float) -> float:
        if self.horizon is not None:
            return self.horizon
        return 6.0 * math.log(10.0) / q


@dataclass(frozen=True)
class SimResult:
    """Sample means and standard errors of the discounted functionals."""

    dividends_mean: float
    dividends_se: float
    injections_mean: float
    injections_se: float
    payments_count_mean: float
    n_paths_used: int
    truncation_error_bound: float
    horizon_warning: bool


# -- random streams ----------------------------------------------------------
#
# xoshiro256++ with splitmix64 seeding; state is a length-4 uint64 array.
# Implemented here (rather than using a library generator) so that per-path
# seeding and the antithetic sign convention are part of the determinism
# contract and identical across numba versions.

@njit(cache=True, inline="always")
def _splitmix64(z):
    z = _U64(z + _U64(0x9E3779B97F4A7C15))
    z = _U64((z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9))
    z = _U64((z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB))
    return _U64(z ^ (z >> _U64(31)))


@njit(cache=True)
def _stream_init(state, seed, path, sub):
    # distinct (seed, path, sub) triples give independent-looking streams
    z = _splitmix64(_U64(seed) ^ _U64(_U64(path) * _U64(0x9E3779B97F4A7C15)) ^ _U64(sub))
    for i in range(4):
        z = _splitmix64(z)
        state[i] = z


@njit(cache=True, inline="always")
def _rotl(x, k):
    return _U64((x << _U64(k)) | (x >> _U64(64 - k)))


@njit(cache=True, inline="always")
def _next_u64(s):
    result = _U64(_rotl(_U64(s[0] + s[3]), 23) + s[0])
    t = _U64(s[1] << _U64(17))
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


@njit(cache=True, inline="always")
def _uniform(s):
    # uniform on (0, 1]; never 0, so log is safe
    return (np.float64(_next_u64(s) >> _U64(11)) + 1.0) * _INV_2_53


def _ziggurat_tables():
    """Layer tables for the 128-region ziggurat normal sampler."""
    m1 = 2147483648.0
    dn = tn = 3.442619855899
    vn = 9.91256303526217e-3
    kn = np.zeros(128, dtype=np.int64)
    wn = np.zeros(128)
    fn = np.zeros(128)
    qq = vn / math.exp(-0.5 * dn * dn)
    kn[0] = int((dn / qq) * m1)
    kn[1] = 0
    wn[0] = qq / m1
    wn[127] = dn / m1
    fn[0] = 1.0
    fn[127] = math.exp(-0.5 * dn * dn)
    for i in range(126, 0, -1):
        dn = math.sqrt(-2.0 * math.log(vn / dn + math.exp(-0.5 * dn * dn)))
        kn[i + 1] = int((dn / tn) * m1)
        tn = dn
        fn[i] = math.exp(-0.5 * dn * dn)
        wn[i] = dn / m1
    return kn, wn, fn


_ZIG_KN, _ZIG_WN, _ZIG_FN = _ziggurat_tables()
_ZIG_R = 3.442619855899


@njit(cache=True, inline="always")
def _normal(s):
    """Standard normal variate (Marsaglia-Tsang ziggurat, 128 layers)."""
    while True:
        hz = np.int64(np.int32(_next_u64(s) & _U64(0xFFFFFFFF)))
        iz = hz & 127
        if (hz if hz >= 0 else -hz) < _ZIG_KN[iz]:
            return hz * _ZIG_WN[iz]
        if iz == 0:
            while True:
                x = -math.log(_uniform(s)) / _ZIG_R
                y = -math.log(_uniform(s))
                if y + y >= x * x:
                    break
            return _ZIG_R + x if hz >= 0 else -(_ZIG_R + x)
        x = hz * _ZIG_WN[iz]
        if _ZIG_FN[iz] + _uniform(s) * (_ZIG_FN[iz - 1] - _ZIG_FN[iz]) < math.exp(-0.5 * x * x):
            return x


@njit(cache=True)
def _gamma_draw(s, shape, scale):
    """Gamma(shape, scale) variate (Marsaglia-Tsang squeeze)."""
    if shape < 1.0:
        # boost: Gamma(shape) = Gamma(shape + 1) * U^{1/shape}
        g = _gamma_draw(s, shape + 1.0, 1.0)
        return scale * g * _uniform(s) ** (1.0 / shape)
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        n = _normal(s)
        v = 1.0 + c * n
        if v <= 0.0:
            continue
        v = v * v * v
        u = _uniform(s)
        n2 = n * n
        if u < 1.0 - 0.0331 * n2 * n2:
            return scale * d * v
        if math.log(u) < 0.5 * n2 + d * (1.0 - v + math.log(v)):
            return scale * d * v


@njit(cache=True, inline="always")
def _jump_size(s, jkind, jp1, jp2):
    if jkind == _JUMP_EXPONENTIAL:
        return -jp1 * math.log(_uniform(s))
    return _gamma_draw(s, jp1, jp2)


# -- path kernels ------------------------------------------------------------

@njit(cache=True, inline="always")
def _block_span(dist, sigma, adverse_drift):
    """Largest time u with 8 sigma sqrt(u) + adverse_drift * u <= dist."""
    b = 8.0 * sigma
    if adverse_drift <= 0.0:
        root = dist / b
    else:
        root = (-b + math.sqrt(b * b + 4.0 * adverse_drift * dist)) / (2.0 * adverse_drift)
    return root * root


@njit(cache=True, inline="always")
def _bridge_max(gs, z, var):
    """Running maximum of a Brownian increment path conditioned on endpoint z."""
    return 0.5 * (z + math.sqrt(z * z - 2.0 * var * math.log(_uniform(gs))))


@njit(cache=True, inline="always")
def _bridge_min(gs, z, var):
    """Running minimum of a Brownian increment path conditioned on endpoint z."""
    return 0.5 * (z - math.sqrt(z * z - 2.0 * var * math.log(_uniform(gs))))


@njit(cache=True)
def _policy_path(gs, js, sign, kind, lo, up, delta, x0, q, dt, horizon,
                 drift, sigma, jkind, jrate, jp1, jp2, pair_shift):
    """One controlled path; returns (dividends, injections, payments).

    For sigma > 0 the reflections at the barrier and at 0 are exact in law:
    each Gaussian advance samples the endpoint and then the bridge extremum,
    and the Skorokhod construction turns the excess of the running extremum
    over the boundary gap into the exact dividend/injection lump for the
    interval.  Only the reflected-pair upper level is genuinely a discrete
    event; its monitoring uses the continuity-corrected level.
    """
    t = 0.0
    state = x0
    disc = 1.0
    div = 0.0
    inj = 0.0
    npay = 0.0
    decay = math.exp(-q * dt)
    adverse_up = drift if drift > 0.0 else 0.0
    adverse_lo = -drift if drift < 0.0 else 0.0
    abs_drift = drift if drift > 0.0 else -drift
    # smallest boundary distance at which an 8-step block can possibly fit
    block_gate = 8.0 * sigma * math.sqrt(8.0 * dt) + abs_drift * 8.0 * dt
    pair_up = up - pair_shift

    # action at time zero (the state is known exactly here)
    if kind == _KIND_BARRIER and state > up:
        div += state - up
        npay += 1.0
        state = up
    elif kind == _KIND_PAIR and state >= up:
        div += state - lo - delta
        npay += 1.0
        state = lo

    if jkind == _JUMP_NONE:
        next_jump = horizon + 1.0
    else:
        next_jump = -math.log(_uniform(js)) / jrate

    while t < horizon - 1e-12:
        # merge steps while every boundary is out of reach
        if sigma > 0.0:
            d_lo = state
            if kind == _KIND_BARRIER:
                d_up = up - state
            elif kind == _KIND_PAIR:
                d_up = pair_up - state
            else:
                d_up = 1e300
            d_min = d_lo if d_lo < d_up else d_up
        else:
            d_min = -1.0
        if d_min > block_gate:
            span = _block_span(d_lo, sigma, adverse_lo)
            span_up = _block_span(d_up, sigma, adverse_up)
            if span_up < span:
                span = span_up
            limit = next_jump - t
            if horizon - t < limit:
                limit = horizon - t
            if span > limit:
                span = limit
            nblock = int(span / dt)
            if nblock >= 8:
                tau = nblock * dt
                state += drift * tau + sigma * math.sqrt(tau) * _normal(gs) * sign
                disc *= math.exp(-q * tau)
                t += tau
                continue

        t_end = t + dt
        if t_end > horizon:
            t_end = horizon
        while next_jump < t_end:
            tau = next_jump - t
            disc *= math.exp(-q * tau)
            if sigma > 0.0:
                var = sigma * sigma * tau
                guard = 6.0 * sigma * math.sqrt(tau)
                z = drift * tau + sigma * math.sqrt(tau) * _normal(gs) * sign
                state_new = state + z
                if kind == _KIND_BARRIER:
                    gap = up - state
                    zpos = z if z > 0.0 else 0.0
                    if gap < zpos + guard:
                        exc = _bridge_max(gs, z, var) - gap
                        if exc > 0.0:
                            div += disc * exc
                            npay += 1.0
                            state_new -= exc
                zneg = -z if z < 0.0 else 0.0
                if state < zneg + guard:
                    deficit = -(state + _bridge_min(gs, z, var))
                    if deficit > 0.0:
                        inj += disc * deficit
                        state_new += deficit
                state = state_new
            else:
                state += drift * tau
                # continuous upward crossing by drift settles before the jump
                if kind == _KIND_BARRIER and state > up:
                    div += disc * (state - up)
                    npay += 1.0
                    state = up
                elif kind == _KIND_PAIR and state >= up:
                    div += disc * (state - lo - delta)
                    npay += 1.0
                    state = lo
            t = next_jump
            state -= _jump_size(js, jkind, jp1, jp2)
            if state < 0.0:
                inj += disc * (-state)
                state = 0.0
            next_jump = t - math.log(_uniform(js)) / jrate
        tau = t_end - t
        disc *= decay if tau == dt else math.exp(-q * tau)
        if sigma > 0.0:
            var = sigma * sigma * tau
            guard = 6.0 * sigma * math.sqrt(tau)
            z = drift * tau + sigma * math.sqrt(tau) * _normal(gs) * sign
            state_new = state + z
            if kind == _KIND_BARRIER:
                gap = up - state
                zpos = z if z > 0.0 else 0.0
                if gap < zpos + guard:
                    exc = _bridge_max(gs, z, var) - gap
                    if exc > 0.0:
                        div += disc * exc
                        npay += 1.0
                        state_new -= exc
            zneg = -z if z < 0.0 else 0.0
            if state < zneg + guard:
                deficit = -(state + _bridge_min(gs, z, var))
                if deficit > 0.0:
                    inj += disc * deficit
                    state_new += deficit
            state = state_new
        else:
            state += drift * tau
            if kind == _KIND_BARRIER and state > up:
                div += disc * (state - up)
                npay += 1.0
                state = up
        t = t_end
        # the pair payment is a genuinely discrete event: monitored per step
        if kind == _KIND_PAIR and state >= pair_up:
            div += disc * (state - lo - delta)
            npay += 1.0
            state = lo
    return div, inj, npay


@njit(cache=True)
def _policy_driver(n_out, seed, antithetic, kind, lo, up, delta, x0, q, dt,
                   horizon, drift, sigma, jkind, jrate, jp1, jp2, pair_shift,
                   out_div, out_inj, out_pay):
    gs = np.empty(4, dtype=np.uint64)
    js = np.empty(4, dtype=np.uint64)
    for p in range(n_out):
        _stream_init(gs, seed, p, 1)
        _stream_init(js, seed, p, 2)
        d1, i1, k1 = _policy_path(gs, js, 1.0, kind, lo, up, delta, x0, q, dt,
                                  horizon, drift, sigma, jkind, jrate, jp1, jp2,
                                  pair_shift)
        if antithetic:
            _stream_init(gs, seed, p, 1)
            _stream_init(js, seed, p, 2)
            d2, i2, k2 = _policy_path(gs, js, -1.0, kind, lo, up, delta, x0, q,
                                      dt, horizon, drift, sigma, jkind, jrate,
                                      jp1, jp2, pair_shift)
            out_div[p] = 0.5 * (d1 + d2)
            out_inj[p] = 0.5 * (i1 + i2)
            out_pay[p] = 0.5 * (k1 + k2)
        else:
            out_div[p] = d1
            out_inj[p] = i1
            out_pay[p] = k1


@njit(cache=True)
def _exit_path(gs, js, sign, x0, b, a, q, dt, horizon,
               drift, sigma, jkind, jrate, jp1, jp2):
    """Uncontrolled two-sided exit; returns (up_disc, down_disc).

    Diffusion crossings are detected exactly in law through the bridge
    extrema of each Gaussian advance; jump crossings are exact by
    construction.  The discount is taken at the end of the advance that
    contains the crossing (an O(q dt) relative timing error).
    """
    t = 0.0
    state = x0
    disc = 1.0
    decay = math.exp(-q * dt)
    adverse_up = drift if drift > 0.0 else 0.0
    adverse_lo = -drift if drift < 0.0 else 0.0
    abs_drift = drift if drift > 0.0 else -drift
    block_gate = 8.0 * sigma * math.sqrt(8.0 * dt) + abs_drift * 8.0 * dt

    if state >= a:
        return 1.0, 0.0
    if state < b or (state == b and sigma == 0.0 and drift <= 0.0):
        return 0.0, 1.0

    if jkind == _JUMP_NONE:
        next_jump = horizon + 1.0
    else:
        next_jump = -math.log(_uniform(js)) / jrate

    while t < horizon:
        if sigma > 0.0:
            d_lo = state - b
            d_up = a - state
            d_min = d_lo if d_lo < d_up else d_up
        else:
            d_min = -1.0
        if d_min > block_gate:
            span = _block_span(d_lo, sigma, adverse_lo)
            span_up = _block_span(d_up, sigma, adverse_up)
            if span_up < span:
                span = span_up
            limit = next_jump - t
            if span > limit:
                span = limit
            nblock = int(span / dt)
            if nblock >= 8:
                tau = nblock * dt
                state += drift * tau + sigma * math.sqrt(tau) * _normal(gs) * sign
                disc *= math.exp(-q * tau)
                t += tau
                continue

        t_end = t + dt
        while next_jump < t_end:
            tau = next_jump - t
            disc *= math.exp(-q * tau)
            if sigma > 0.0:
                var = sigma * sigma * tau
                guard = 6.0 * sigma * math.sqrt(tau)
                z = drift * tau + sigma * math.sqrt(tau) * _normal(gs) * sign
                gap = a - state
                zpos = z if z > 0.0 else 0.0
                if gap < zpos + guard:
                    if _bridge_max(gs, z, var) >= gap:
                        return disc, 0.0
                zneg = -z if z < 0.0 else 0.0
                if state - b < zneg + guard:
                    if state + _bridge_min(gs, z, var) <= b:
                        return 0.0, disc
                state += z
            else:
                state += drift * tau
                if state >= a:
                    return disc, 0.0
            t = next_jump
            state -= _jump_size(js, jkind, jp1, jp2)
            if state < b:
                return 0.0, disc
            next_jump = t - math.log(_uniform(js)) / jrate
        tau = t_end - t
        disc *= decay if tau == dt else math.exp(-q * tau)
        if sigma > 0.0:
            var = sigma * sigma * tau
            guard = 6.0 * sigma * math.sqrt(tau)
            z = drift * tau + sigma * math.sqrt(tau) * _normal(gs) * sign
            gap = a - state
            zpos = z if z > 0.0 else 0.0
            if gap < zpos + guard:
                if _bridge_max(gs, z, var) >= gap:
                    return disc, 0.0
            zneg = -z if z < 0.0 else 0.0
            if state - b < zneg + guard:
                if state + _bridge_min(gs, z, var) <= b:
                    return 0.0, disc
            state += z
        else:
            state += drift * tau
            if state >= a:
                return disc, 0.0
        t = t_end
    return 0.0, 0.0


@njit(cache=True)
def _exit_driver(n_out, seed, antithetic, x0, b, a, q, dt, horizon,
                 drift, sigma, jkind, jrate, jp1, jp2, out_up, out_down):
    gs = np.empty(4, dtype=np.uint64)
    js = np.empty(4, dtype=np.uint64)
    for p in range(n_out):
        _stream_init(gs, seed, p, 1)
        _stream_init(js, seed, p, 2)
        u1, d1 = _exit_path(gs, js, 1.0, x0, b, a, q, dt, horizon,
                            drift, sigma, jkind, jrate, jp1, jp2)
        if antithetic:
            _stream_init(gs, seed, p, 1)
            _stream_init(js, seed, p, 2)
            u2, d2 = _exit_path(gs, js, -1.0, x0, b, a, q, dt, horizon,
                                drift, sigma, jkind, jrate, jp1, jp2)
            out_up[p] = 0.5 * (u1 + u2)
            out_down[p] = 0.5 * (d1 + d2)
        else:
            out_up[p] = u1
            out_down[p] = d1


# -- public wrappers ---------------------------------------------------------

def _jump_params(model: LevyModel):
    if model.jumps is None:
        return _JUMP_NONE, 0.0, 0.0, 0.0
    dist = model.jumps.dist
    if isinstance(dist, Exponential):
        return _JUMP_EXPONENTIAL, model.jumps.rate, dist.mean, 0.0
    if isinstance(dist, Gamma):
        if dist.shape == 1.0:
            return _JUMP_EXPONENTIAL, model.jumps.rate, dist.scale, 0.0
        return _JUMP_GAMMA, model.jumps.rate, dist.shape, dist.scale
    raise DomainError(f"unsupported jump distribution {type(dist).__name__}")


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    n = values.size
    mean = float(np.mean(values))
    if n < 2:
        return mean, math.inf
    se = float(np.std(values, ddof=1) / math.sqrt(n))
    return mean, se


def simulate_policy(model: LevyModel, policy: Policy, x: float, q: float,
                    config: SimConfig) -> SimResult:
    """Estimate discounted dividends (net of costs) and injections."""
    if x < 0:
        raise DomainError(f"initial capital must be nonnegative, got {x}")
    if q <= 0:
        raise DomainError(f"discount rate must be positive, got {q}")
    if isinstance(policy, PayNothing):
        kind, lo, up, delta = _KIND_PAY_NOTHING, 0.0, math.inf, 0.0
    elif isinstance(policy, Barrier):
        if policy.a <= 0:
            raise DomainError("simulated barrier level must be positive")
        kind, lo, up, delta = _KIND_BARRIER, 0.0, policy.a, 0.0
    elif isinstance(policy, ReflectedPair):
        kind, lo, up, delta = _KIND_PAIR, policy.c1, policy.c2, policy.delta
    else:
        raise DomainError(f"unsupported policy {type(policy).__name__}")

    horizon = config.resolved_horizon(q)
    jkind, jrate, jp1, jp2 = _jump_params(model)
    pair_shift = 0.0
    if kind == _KIND_PAIR and config.boundary_correction:
        pair_shift = _BETA * model.sigma * math.sqrt(config.time_step)

    n_out = config.n_paths // 2 if config.antithetic else config.n_paths
    out_div = np.empty(n_out)
    out_inj = np.empty(n_out)
    out_pay = np.empty(n_out)
    _policy_driver(n_out, config.seed, config.antithetic, kind, lo, up, delta,
                   x, q, config.time_step, horizon, model.drift, model.sigma,
                   jkind, jrate, jp1, jp2, pair_shift,
                   out_div, out_inj, out_pay)

    div_mean, div_se = _mean_se(out_div)
    inj_mean, inj_se = _mean_se(out_inj)
    # residual value after the horizon is bounded by the highest reachable
    # level plus the discounted future income stream
    level_bound = max(x, up if math.isfinite(up) else x) + max(model.drift, 0.0) / q
    trunc = math.exp(-q * horizon) * level_bound
    warn = math.exp(-q * horizon) > 1e-4
    return SimResult(dividends_mean=div_mean, dividends_se=div_se,
                     injections_mean=inj_mean, injections_se=inj_se,
                     payments_count_mean=float(np.mean(out_pay)),
                     n_paths_used=config.n_paths,
                     truncation_error_bound=trunc, horizon_warning=warn)


def simulate_exit(model: LevyModel, x: float, b: float, a: float, q: float,
                  config: SimConfig) -> tuple[SimResult, SimResult]:
    """MC estimates of the discounted two-sided exit indicators.

    Returns (up, down) SimResults; the dividends fields carry the
    indicator estimates and the injections fields are zero.
    """
    if not (b < a and b <= x <= a):
        raise DomainError(f"simulate_exit requires b < a and b <= x <= a, got x={x} b={b} a={a}")
    if q <= 0:
        raise DomainError(f"discount rate must be positive, got {q}")
    horizon = config.resolved_horizon(q)
    jkind, jrate, jp1, jp2 = _jump_params(model)

    n_out = config.n_paths // 2 if config.antithetic else config.n_paths
    out_up = np.empty(n_out)
    out_down = np.empty(n_out)
    _exit_driver(n_out, config.seed, config.antithetic, x, b, a, q,
                 config.time_step, horizon, model.drift, model.sigma,
                 jkind, jrate, jp1, jp2, out_up, out_down)

    trunc = math.exp(-q * horizon)
    warn = trunc > 1e-4

    def pack(vals):
        mean, se = _mean_se(vals)
        return SimResult(dividends_mean=mean, dividends_se=se,
                         injections_mean=0.0, injections_se=0.0,
                         payments_count_mean=0.0, n_paths_used=config.n_paths,
                         truncation_error_bound=trunc, horizon_warning=warn)

    return pack(out_up), pack(out_down)
