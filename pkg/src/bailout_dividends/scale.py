"""q-scale functions and fluctuation identities for spectrally negative models.

The scale function W is defined through its Laplace transform
``integral exp(-theta x) W(x) dx = 1 / (psi(theta) - q)`` and vanishes on the
negative half-line.  Companions:

    Wbar(x) = int_0^x W,   Z(x) = 1 + q Wbar(x),   Zbar(x) = int_0^x Z.

Backends
--------
``inversion``
    Bromwich inversion by the Euler-summation Fourier-series method.  The
    exponential growth is factored out first: we invert
    ``x -> exp(-phi(q) x) W(x)`` whose transform ``1/(psi(s + phi(q)) - q)``
    is bounded, so double precision suffices.  Contour/averaging parameters
    (A = 20, 35 regular + 15 averaged terms) are our choice and give ~1e-8
    absolute accuracy on the tilted function.
``brownian`` / ``cramer_lundberg``
    Exact two-exponential forms obtained from the partial fractions of
    ``1/(psi - q)``; usable when the model is Brownian-with-drift or a
    classical risk process with exponential claims.  These serve as
    independent oracles for the inversion backend.

Antiderivatives Wbar and Zbar are computed by the trapezoidal rule on a
cached uniform grid for every backend; W and W' are interpolated from the
same grid (monotone cubic on the tilted values) for the inversion backend.
The grid extends transparently when a larger argument is requested; engines
are safe for concurrent readers once warm, and grid extension is serialized
by an internal lock.
"""

from __future__ import annotations

import threading
from math import comb

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import DomainError, NumericalError
from .levy import Exponential, Gamma, LevyModel

# Euler-summation inversion parameters (documented choice, see module docstring)
_EULER_A = 20.0
_EULER_N = 35
_EULER_M = 15
_EULER_WEIGHTS = np.array([comb(_EULER_M, j) for j in range(_EULER_M + 1)]) * 2.0 ** (-_EULER_M)


def euler_laplace_inversion(fhat, x):
    """Invert a Laplace transform at positive points ``x`` (vectorized).

    ``fhat`` must accept a complex ndarray.  Intended for bounded, smooth
    originals; the caller is responsible for tilting away exponential growth.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("inversion requires x > 0")
    k = np.arange(_EULER_N + _EULER_M + 1)
    s = (_EULER_A + 2j * np.pi * k[None, :]) / (2.0 * x[:, None])
    terms = np.real(fhat(s))
    terms[:, 0] *= 0.5
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    partial = np.cumsum(terms * signs[None, :], axis=1)
    avg = partial[:, _EULER_N:] @ _EULER_WEIGHTS
    return np.exp(_EULER_A / 2.0) / x * avg


class _InversionBackend:
    """Evaluates tilted W and W' by numerical Laplace inversion."""

    def __init__(self, model: LevyModel, q: float, phi: float):
        self.model = model
        self.q = q
        self.phi = phi
        if model.is_bounded_variation():
            self.w0 = 1.0 / model.drift
            self.wp0 = (q + model.jumps.rate if model.jumps else q) / model.drift**2
        else:
            self.w0 = 0.0
            self.wp0 = 2.0 / model.sigma**2

    def w_tilted(self, x):
        """exp(-phi x) W(x) on x > 0."""
        return euler_laplace_inversion(
            lambda s: 1.0 / (self.model.psi(s + self.phi) - self.q), x
        )

    def w_prime_tilted(self, x):
        """exp(-phi x) W'(x) on x > 0."""
        return euler_laplace_inversion(
            lambda s: (s + self.phi) / (self.model.psi(s + self.phi) - self.q) - self.w0, x
        )


class _ExponentialMixtureBackend:
    """Exact W as a sum of exponentials: W(x) = sum_i exp(theta_i x) / psi'(theta_i).

    Valid whenever psi - q is a rational function with simple real roots,
    which covers Brownian-with-drift and Cramer-Lundberg with exponential
    claims.
    """

    def __init__(self, model: LevyModel, q: float, roots: np.ndarray):
        self.model = model
        self.q = q
        self.roots = roots
        self.weights = 1.0 / model.psi_prime(roots)
        if model.is_bounded_variation():
            self.w0 = 1.0 / model.drift
            self.wp0 = (q + model.jumps.rate if model.jumps else q) / model.drift**2
        else:
            self.w0 = 0.0
            self.wp0 = 2.0 / model.sigma**2

    def w(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(self.roots * x[..., None]) @ self.weights

    def w_prime(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(self.roots * x[..., None]) @ (self.weights * self.roots)

    def w_tilted(self, x):
        x = np.asarray(x, dtype=float)
        phi = self.roots.max()
        return np.exp((self.roots - phi) * x[..., None]) @ self.weights

    def w_prime_tilted(self, x):
        x = np.asarray(x, dtype=float)
        phi = self.roots.max()
        return np.exp((self.roots - phi) * x[..., None]) @ (self.weights * self.roots)

    # exact antiderivatives, used by oracle tests
    def w_bar(self, x):
        x = np.asarray(x, dtype=float)
        return np.expm1(self.roots * x[..., None]) @ (self.weights / self.roots)

    def z(self, x):
        return 1.0 + self.q * self.w_bar(x)

    def z_bar(self, x):
        x = np.asarray(x, dtype=float)
        inner = np.expm1(self.roots * x[..., None]) / self.roots - x[..., None]
        return x + self.q * (inner @ (self.weights / self.roots))


def _brownian_backend(model: LevyModel, q: float) -> _ExponentialMixtureBackend:
    if model.jumps is not None or model.sigma <= 0:
        raise DomainError("brownian backend requires sigma > 0 and no jumps")
    mu, s2 = model.drift, model.sigma**2
    disc = np.sqrt(mu**2 + 2.0 * q * s2)
    roots = np.array([(-mu + disc) / s2, (-mu - disc) / s2])
    return _ExponentialMixtureBackend(model, q, roots)


def _cramer_lundberg_backend(model: LevyModel, q: float) -> _ExponentialMixtureBackend:
    jumps = model.jumps
    ok = (
        model.sigma == 0
        and jumps is not None
        and (
            isinstance(jumps.dist, Exponential)
            or (isinstance(jumps.dist, Gamma) and jumps.dist.shape == 1.0)
        )
    )
    if not ok:
        raise DomainError("cramer_lundberg backend requires sigma = 0 and exponential claims")
    c, lam = model.drift, jumps.rate
    eta = 1.0 / jumps.dist.expectation
    # (psi(theta) - q)(eta + theta) = c theta^2 + (c eta - lam - q) theta - q eta
    roots = np.roots([c, c * eta - lam - q, -q * eta])
    roots = np.sort(np.real_if_close(roots))[::-1]
    return _ExponentialMixtureBackend(model, q, np.asarray(roots, dtype=float))


class ScaleEngine:
    """Evaluator for W, W', Wbar, Z, Zbar and the fluctuation identities.

    Parameters
    ----------
    model, q : the risk process and the discount rate (q > 0).
    method : "inversion" (default), "brownian", or "cramer_lundberg".
    grid_step : cache grid spacing; antiderivatives use the trapezoidal rule
        on this grid.
    x_max : initial cache extent, grown geometrically on demand.
    """

    def __init__(self, model: LevyModel, q: float, method: str = "inversion",
                 grid_step: float = 1e-3, x_max: float = 12.0):
        if q <= 0:
            raise DomainError(f"discount rate q must be positive, got {q}")
        self.model = model
        self.q = q
        self.method = method
        self.grid_step = grid_step
        self.phi = model.phi(q)
        self.mean = model.mean()
        if method == "inversion":
            self.backend = _InversionBackend(model, q, self.phi)
        elif method == "brownian":
            self.backend = _brownian_backend(model, q)
        elif method == "cramer_lundberg":
            self.backend = _cramer_lundberg_backend(model, q)
        else:
            raise DomainError(f"unknown scale method {method!r}")
        self._lock = threading.Lock()
        self._grid_x_max = 0.0
        self._build_grid(x_max)

    # -- cache --------------------------------------------------------------

    def _build_grid(self, x_max: float) -> None:
        h = self.grid_step
        n = int(np.ceil(x_max / h))
        x = np.linspace(0.0, n * h, n + 1)
        wt = np.empty_like(x)
        wpt = np.empty_like(x)
        wt[0] = self.backend.w0
        wpt[0] = self.backend.wp0
        wt[1:] = self.backend.w_tilted(x[1:])
        wpt[1:] = self.backend.w_prime_tilted(x[1:])
        growth = np.exp(self.phi * x)
        w = wt * growth
        wbar = cumulative_trapezoid(w, x, initial=0.0)
        zbar = x + self.q * cumulative_trapezoid(wbar, x, initial=0.0)
        tilt = 1.0 / growth
        self._grid_x = x
        self._w_t = PchipInterpolator(x, wt)
        self._wp_t = PchipInterpolator(x, wpt)
        self._wbar_t = PchipInterpolator(x, wbar * tilt)
        self._zbar_t = PchipInterpolator(x, zbar * tilt)
        self._grid_x_max = x[-1]

    def _ensure(self, x_needed: float) -> None:
        if x_needed <= self._grid_x_max:
            return
        with self._lock:
            if x_needed > self._grid_x_max:
                self._build_grid(1.5 * x_needed)

    def _eval(self, name, x, below):
        x_arr = np.asarray(x, dtype=float)
        if x_arr.size and np.any(np.isfinite(x_arr)):
            finite_max = np.max(x_arr[np.isfinite(x_arr)])
            if finite_max > self._grid_x_max:
                self._ensure(finite_max)
        # look the interpolator up only after _ensure, which may rebind it
        interp = getattr(self, name)
        pos = np.maximum(x_arr, 0.0)
        out = interp(pos) * np.exp(self.phi * pos)
        out = np.where(x_arr < 0, below(x_arr), out)
        if np.isscalar(x):
            return float(out)
        return out

    # -- basic functions ----------------------------------------------------

    def w(self, x):
        """W(x); zero on the negative half-line."""
        if self.method != "inversion":
            x_arr = np.asarray(x, dtype=float)
            out = np.where(x_arr < 0, 0.0, self.backend.w(np.maximum(x_arr, 0.0)))
            return float(out) if np.isscalar(x) else out
        return self._eval('_w_t', x, lambda v: np.zeros_like(v))

    def w_prime(self, x):
        """W'(x) (right derivative at 0)."""
        if self.method != "inversion":
            x_arr = np.asarray(x, dtype=float)
            out = np.where(x_arr < 0, 0.0, self.backend.w_prime(np.maximum(x_arr, 0.0)))
            return float(out) if np.isscalar(x) else out
        return self._eval('_wp_t', x, lambda v: np.zeros_like(v))

    def w_bar(self, x):
        """Wbar(x) = int_0^x W; zero for x <= 0."""
        return self._eval('_wbar_t', x, lambda v: np.zeros_like(v))

    def z(self, x):
        """Z(x) = 1 + q Wbar(x); identically 1 for x <= 0."""
        wb = self.w_bar(x)
        return 1.0 + self.q * wb

    def z_bar(self, x):
        """Zbar(x) = int_0^x Z; equals x for x <= 0."""
        return self._eval('_zbar_t', x, lambda v: v)

    def k_q(self, x):
        """Zbar(x) + psi'(0+)/q, the injection kernel."""
        return self.z_bar(x) + self.mean / self.q

    # -- fluctuation identities ---------------------------------------------

    def exit_up(self, x, b, a):
        """Discounted probability of exiting [b, a] at the top: W(x-b)/W(a-b)."""
        if not (b < a and b <= x <= a):
            raise DomainError(f"exit_up requires b < a and b <= x <= a, got x={x} b={b} a={a}")
        return self.w(x - b) / self.w(a - b)

    def exit_down(self, x, b, a):
        """Discounted probability of exiting [b, a] at the bottom."""
        if not (b < a and b <= x <= a):
            raise DomainError(f"exit_down requires b < a and b <= x <= a, got x={x} b={b} a={a}")
        return self.z(x - b) - self.z(a - b) * self.w(x - b) / self.w(a - b)

    def reflected_upcross(self, x, b):
        """E_x[exp(-q kappa_b)] for the process reflected at 0: Z(x)/Z(b)."""
        if not (0 <= x <= b):
            raise DomainError(f"reflected_upcross requires 0 <= x <= b, got x={x} b={b}")
        return self.z(x) / self.z(b)

    def injection_until_upcross(self, x, b):
        """Expected discounted injections before the reflected process reaches b."""
        if not (0 <= x <= b):
            raise DomainError(f"injection_until_upcross requires 0 <= x <= b, got x={x} b={b}")
        return -self.k_q(x) + self.k_q(b) * self.z(x) / self.z(b)

    # -- H and its inverse ---------------------------------------------------

    def h(self, a):
        """Discounted drawdown functional Z(a) - q W(a)^2 / W'(a), a > 0."""
        if np.any(np.asarray(a) <= 0):
            raise DomainError(f"h requires a > 0, got {a}")
        wa = self.w(a)
        return self.z(a) - self.q * wa * wa / self.w_prime(a)

    def h_limit_at_zero(self) -> float:
        """Limit of h(a) as a -> 0+: 1 minus q W(0)^2 / W'(0+)."""
        w0, wp0 = self.backend.w0, self.backend.wp0
        return 1.0 - self.q * w0 * w0 / wp0

    def h_inverse(self, y: float, tol: float = 1e-12) -> float:
        """Solve h(a) = y; h is strictly decreasing from h_limit_at_zero() to 0."""
        h0 = self.h_limit_at_zero()
        if not (0.0 < y <= h0 + 1e-12):
            raise DomainError(f"h_inverse requires y in (0, {h0}], got {y}")
        if y >= h0:
            return 0.0
        lo = 1e-12
        prev_a, prev_h = lo, h0
        hi, h_hi = 1.0, self.h(1.0)
        for _ in range(200):
            if h_hi < y:
                return brentq(lambda a: self.h(a) - y, lo, hi, xtol=tol)
            nxt = 1.5 * hi
            h_nxt = self.h(nxt)
            if not h_nxt < h_hi:
                # h is strictly decreasing, so a non-decreasing sample means the
                # evaluation noise floor was reached; continue on the fitted
                # exponential tail, which is exact to leading order as a -> inf
                break
            prev_a, prev_h = hi, h_hi
            hi, h_hi = nxt, h_nxt
        else:
            raise NumericalError(f"h_inverse bracketing failed at hi={hi}, h(hi)={h_hi}")
        rho = np.log(prev_h / h_hi) / (hi - prev_a)
        if not rho > 0:
            raise NumericalError(f"h_inverse tail fit failed: nonpositive decay rate {rho}")
        return hi + np.log(h_hi / y) / rho

    # -- inspection ----------------------------------------------------------

    def dump_grid(self, path) -> None:
        """Write the cache grid (x, W, W', Z, Wbar, Zbar) as CSV."""
        x = self._grid_x
        cols = np.column_stack([
            x, self.w(x), self.w_prime(x), self.z(x), self.w_bar(x), self.z_bar(x),
        ])
        header = "x,W,Wprime,Z,Wbar,Zbar"
        np.savetxt(path, cols, delimiter=",", header=header, comments="", fmt="%.12g")
