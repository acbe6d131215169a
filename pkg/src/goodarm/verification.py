"""Numeric checks of the bounds and solvers, plus a Monte-Carlo correctness check.

Each suite yields :class:`Check` records; ``run_suites`` collects them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence

import numpy as np

from .algorithms import run_gai
from .bounds import (
    epsilon_target,
    hdoc_id_radius,
    lemma2_transform,
    lil_params,
    lil_radius,
    r_of_eps,
    solve_epsilon,
    solve_T,
    t_lhs_log,
    t_rhs_log,
    theorem3_bound,
)
from .core import Algorithm, AlgoConfig, BanditInstance

GRID_K = (2, 6, 100)
GRID_DELTA = (1e-2, 1e-3)
# max over the grid of T / (log(K+1) log(max(1/delta, e))) was 575.77 (K=2, delta=1e-2)
T_SCALING_C = 580.0
EASY_INSTANCE = BanditInstance((0.9, 0.8, 0.2, 0.1), 0.5, "easy")


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    measured: Dict[str, object] = field(default_factory=dict)

    def as_dict(self):
        return {"suite": self.suite, "check": self.name, "passed": self.passed, **self.measured}


def grid():
    for K in GRID_K:
        for d in GRID_DELTA:
            yield K, d


def linear_scan_T(K: int, delta: float, eps: float) -> int:
    rhs = t_rhs_log(K, delta, eps)
    t = 2
    while t_lhs_log(t, eps) < rhs:
        t += 1
    return t


def log_grid(lo: int, hi: float = 1e7, points: int = 200) -> np.ndarray:
    return np.unique(np.round(np.geomspace(lo, hi, points)).astype(np.int64))


def suite_solver() -> Iterator[Check]:
    for K, d in grid():
        eps = solve_epsilon(K, d)
        target = epsilon_target(K, d)
        T = solve_T(K, d, eps)
        scan = linear_scan_T(K, d, eps)
        yield Check("solver", f"T K={K} delta={d}", T == scan, {"T": T, "linear_scan": scan})
        ok = (r_of_eps(eps) - 1 <= target) and (r_of_eps(eps + 1e-6) - 1 > target)
        yield Check("solver", f"eps K={K} delta={d}", ok and r_of_eps(eps) <= 1.5,
                    {"eps": eps, "target": target, "r": r_of_eps(eps)})
        # feasibility predicate nondecreasing over 2..T+1000
        ts = np.arange(2, T + 1000)
        lhs = np.array([t_lhs_log(int(t), eps) for t in ts])
        yield Check("solver", f"monotone K={K} delta={d}", bool(np.all(np.diff(lhs) >= 0)),
                    {"checked_up_to": int(ts[-1])})


def lemma2_holds(c: float, omega: float, eps: float) -> tuple:
    """Brute-force every integer t that can satisfy the condition; returns (ok, bound, largest t).

    For t >= 1000 the left side is strictly decreasing, so the scan stops at the
    first such t where it has dropped below c.
    """
    bound = lemma2_transform(c, omega, eps)
    hi = max(2 * bound if math.isfinite(bound) else 0, 1000)

    def lhs_at(t):
        inner = np.log((1 + eps) * t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return inner, np.log(inner / omega) / t

    while lhs_at(float(int(hi)))[1] >= c:
        hi *= 2
    t = np.arange(1, int(hi) + 1, dtype=np.float64)
    inner, lhs = lhs_at(t)
    sat = t[(inner > 0) & (lhs >= c)]
    largest = int(sat.max()) if sat.size else 0
    return (largest <= bound if sat.size else True), bound, largest


def lemma2_triples(n: int = 1000, seed: int = 7):
    rng = np.random.default_rng(seed)
    c = 10 ** rng.uniform(-4, 1, n)
    omega = 10 ** rng.uniform(-8, -1e-9, n)
    eps = rng.uniform(1e-3, 1 - 1e-9, n)
    return list(zip(c.tolist(), omega.tolist(), eps.tolist()))


def suite_lemma2(n: int = 1000) -> Iterator[Check]:
    failures, nonvacuous = [], 0
    for c, w, e in lemma2_triples(n):
        ok, bound, largest = lemma2_holds(c, w, e)
        nonvacuous += largest > 0
        if not ok:
            failures.append((c, w, e, bound, largest))
    yield Check("lemma2", f"{n} random triples", not failures,
                {"failures": len(failures), "nonvacuous": nonvacuous})


def suite_crossover() -> Iterator[Check]:
    for K, d in grid():
        p = lil_params(K, d)
        ns = log_grid(p.T)
        worst = max(lil_radius(int(n), p.omega, p.epsilon) - hdoc_id_radius(int(n), K, d) for n in ns)
        yield Check("crossover", f"K={K} delta={d}", worst <= 0.0,
                    {"T": p.T, "points": len(ns), "max_lil_minus_hdoc": worst})


def suite_tscaling() -> Iterator[Check]:
    ratios = []
    for K, d in grid():
        p = lil_params(K, d)
        ratios.append(p.T / (math.log(K + 1) * math.log(max(1 / d, math.e))))
    yield Check("tscaling", "T / (log(K+1) log(max(1/delta,e)))", max(ratios) <= T_SCALING_C,
                {"max_ratio": max(ratios), "c": T_SCALING_C})


def suite_theorem3() -> Iterator[Check]:
    K, d = 6, 0.01
    eps = solve_epsilon(K, d)
    for gap in (1e-2, 1e-3, 1e-4):
        ratio = theorem3_bound(gap / 10, K, d, eps) / theorem3_bound(gap, K, d, eps)
        yield Check("theorem3", f"ratio gap={gap}", 100.0 <= ratio <= 102.0, {"ratio": ratio})


def misclassification_rate(instance: BanditInstance, algorithm, delta: float, runs: int,
                           seed: int = 0) -> float:
    cfg = AlgoConfig(algorithm, delta, seed)
    wrong = sum(run_gai(instance, cfg, run_index=i).misclassified for i in range(runs))
    return wrong / runs


def suite_correctness(runs: int = 200, delta: float = 0.1) -> Iterator[Check]:
    limit = delta + 3 * math.sqrt(delta * (1 - delta) / runs)
    for algo in Algorithm:
        rate = misclassification_rate(EASY_INSTANCE, algo, delta, runs, seed=20240601)
        yield Check("correctness", algo.value, rate <= limit, {"error_rate": rate, "limit": limit})


SUITES = {
    "solver": suite_solver,
    "lemma2": suite_lemma2,
    "crossover": suite_crossover,
    "tscaling": suite_tscaling,
    "theorem3": suite_theorem3,
    "correctness": suite_correctness,
}


def run_suites(names: Optional[Sequence[str]] = None) -> List[Check]:
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s) {unknown}; choose from {sorted(SUITES)}")
    return [chk for n in names for chk in SUITES[n]()]
