"""Confidence radii, constants and the parameter solvers for lil'HDoC.

Bernoulli rewards are 1/2-sub-gaussian, so the variance proxy is fixed at
``SIGMA = 0.5`` throughout.  Functions that can become undefined for small
pull counts return ``math.inf`` rather than NaN; an infinite radius simply
means an arm cannot be classified yet.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ConfigError

SIGMA = 0.5
EPS_RTOL = 1e-9

INF = math.inf


def _check_eps(eps: float) -> None:
    if not (0.0 < eps <= 1.0):
        raise ConfigError(f"eps must lie in (0, 1], got {eps}")


def c_epsilon(eps: float) -> float:
    """LIL union-bound constant ((2 + eps) / eps) * (1 / log(1 + eps)) ** (1 + eps)."""
    _check_eps(eps)
    return (2.0 + eps) / eps * (1.0 / math.log1p(eps)) ** (1.0 + eps)


def r_of_eps(eps: float) -> float:
    """Exponent (1 + sqrt(eps))^2 (1 + eps); strictly increasing in eps."""
    return (1.0 + math.sqrt(eps)) ** 2 * (1.0 + eps)


def lil_radius(n: int, omega: float, eps: float) -> float:
    """Finite-LIL radius U(n, omega) for a 1/2-sub-gaussian mean of n samples.

    (1 + sqrt(eps)) * sqrt((1 + eps) / (2 n) * log(log((1 + eps) n) / omega))

    Returns ``inf`` when the iterated log is negative or its argument is not
    positive; exactly 0 when the inner ratio equals 1.
    """
    if n < 1:
        raise ConfigError(f"pull count must be >= 1, got {n}")
    if omega <= 0:
        raise ConfigError(f"omega must be positive, got {omega}")
    _check_eps(eps)
    inner = math.log((1.0 + eps) * n)
    if inner <= 0.0:
        return INF
    ratio = inner / omega
    if ratio < 1.0:
        return INF
    return (1.0 + math.sqrt(eps)) * math.sqrt((1.0 + eps) / (2.0 * n) * math.log(ratio))


def hdoc_id_radius(n: int, K: int, delta: float) -> float:
    """HDoC / LUCB-G identification radius sqrt(log(4 K n^2 / delta) / (2 n))."""
    if n < 1 or K < 1:
        raise ConfigError(f"need n >= 1 and K >= 1, got n={n}, K={K}")
    if not delta > 0.0:
        raise ConfigError(f"delta must be positive, got {delta}")
    n = float(n)
    arg = 4.0 * K * n * n / delta
    if not arg > 1.0:
        raise ConfigError(f"4 K n^2 / delta = {arg} must exceed 1")
    return math.sqrt(math.log(arg) / (2.0 * n))


def ucb_sampling_bonus(n: int, t: int) -> float:
    """Exploration bonus sqrt(log t / (2 n)) shared by HDoC and lil'HDoC."""
    if n < 1 or t < 1:
        raise ConfigError(f"need n >= 1 and t >= 1, got n={n}, t={t}")
    return math.sqrt(math.log(t) / (2.0 * n))


def _loglog_ratio(x: float) -> float:
    lx = math.log(x)
    return math.log(lx) / lx


def epsilon_target(K: int, delta: float) -> float:
    """min(log log B / log B, log log C / log C) with B = K + 1, C = max(1/delta, e)."""
    return min(_loglog_ratio(K + 1.0), _loglog_ratio(max(1.0 / delta, math.e)))


def solve_epsilon(K: int, delta: float) -> float:
    """Largest eps in (0, 1] with r(eps) - 1 <= epsilon_target(K, delta).

    Bisection on the increasing map r; the returned value is always on the
    feasible side.
    """
    if K < 2:
        raise ConfigError("instance too small for lil'HDoC parameterization (K < 2)")
    if not (0.0 < delta < 1.0 / math.e):
        raise ConfigError("delta must be strictly below 1/e")
    target = epsilon_target(K, delta)
    if r_of_eps(1.0) - 1.0 <= target:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > EPS_RTOL * lo or lo == 0.0:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if r_of_eps(mid) - 1.0 <= target:
            lo = mid
        else:
            hi = mid
    return lo


def t_rhs_log(K: int, delta: float, eps: float) -> float:
    """log of (1/4) K^(r-1) (1/delta)^(r-1) c_eps^r."""
    r = r_of_eps(eps)
    return (math.log(0.25) + (r - 1.0) * math.log(K) + (r - 1.0) * math.log(1.0 / delta)
            + r * math.log(c_epsilon(eps)))


def t_lhs_log(t: int, eps: float) -> float:
    """log of t^2 / log((1 + eps) t)^r, defined for t >= 2."""
    r = r_of_eps(eps)
    return 2.0 * math.log(t) - r * math.log(math.log((1.0 + eps) * t))


def solve_T(K: int, delta: float, eps: float) -> int:
    """Least integer T >= 2 with T^2 / log((1+eps) T)^r >= (1/4) K^(r-1) delta^(1-r) c_eps^r.

    Evaluated in log space.  Exponential bracketing, then bisection on the
    (nondecreasing for t >= 2) predicate.
    """
    rhs = t_rhs_log(K, delta, eps)

    def ok(t):
        return t_lhs_log(t, eps) >= rhs

    if ok(2):
        return 2
    lo, hi = 2, 4
    while not ok(hi):
        lo, hi = hi, hi * 2
    # invariant: ok(hi) and not ok(lo)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class LilParams:
    K: int
    delta: float
    epsilon: float
    r: float
    c_eps: float
    B: float
    C: float
    omega: float
    T: int

    def id_radius(self, n: int) -> float:
        return lil_radius(n, self.omega, self.epsilon)


def lil_params(K: int, delta: float) -> LilParams:
    eps = solve_epsilon(K, delta)
    c = c_epsilon(eps)
    omega = delta / (c * K)
    omega_max = math.log1p(eps) / math.e
    if not (0.0 < omega < omega_max):
        raise ConfigError(
            f"omega={omega:.6g} outside the LIL admissible range (0, {omega_max:.6g}) "
            f"for K={K}, delta={delta}, eps={eps:.6g}"
        )
    return LilParams(
        K=K,
        delta=delta,
        epsilon=eps,
        r=r_of_eps(eps),
        c_eps=c,
        B=K + 1.0,
        C=max(1.0 / delta, math.e),
        omega=omega,
        T=solve_T(K, delta, eps),
    )


def lemma2_transform(c: float, omega: float, eps: float) -> float:
    """(1/c) * log(2 * log((1 + eps) / (c * omega)) / omega).

    Upper bound on any t with (1/t) log(log((1 + eps) t) / omega) >= c.
    ``inf`` when the outer log's argument is not positive.
    """
    if c <= 0 or not (0.0 < omega < 1.0) or not (0.0 < eps < 1.0):
        raise ConfigError(f"lemma2_transform needs c > 0, omega, eps in (0, 1); got {c}, {omega}, {eps}")
    arg = 2.0 * math.log((1.0 + eps) / (c * omega)) / omega
    if arg <= 0.0:
        return INF
    return math.log(arg) / c


def theorem3_bound(gap: float, K: int, delta: float, eps: float) -> float:
    """High-probability per-arm sample bound for an arm at distance ``gap`` from the threshold."""
    if gap <= 0:
        return INF
    c = c_epsilon(eps)
    sq = (1.0 + math.sqrt(eps)) ** 2
    inner = 2.0 * c * K * sq * (1.0 + eps) ** 2 / (delta * gap * gap)
    return 2.0 * (1.0 + eps) * sq / (gap * gap) * math.log(2.0 * c * K * math.log(inner) / delta)
