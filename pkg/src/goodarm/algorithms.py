"""Good-arm identification loop: lil'HDoC and the HDoC / LUCB-G baselines.

All three share one loop and differ only in their sampling index, their
identification radius and the number of initial pulls per arm:

    algorithm   sampling index                    identification radius      init
    hdoc        mean + sqrt(log t / 2N)           sqrt(log(4KN^2/d) / 2N)    1
    lucbg       mean + sqrt(log(4KN^2/d) / 2N)    sqrt(log(4KN^2/d) / 2N)    1
    lilhdoc     mean + sqrt(log t / 2N)           U(N, d / (c_eps K))        T

``t`` is the index of the round about to be played (total pulls so far + 1).
Two execution paths exist: a pure-Python loop that works with any object
exposing ``pull(arm) -> {0, 1}``, and a compiled kernel used for
:class:`~goodarm.env.BernoulliEnv`.  Both evaluate identical floating-point
expressions and consume the generator identically, so they return identical
outcomes.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numba import njit, uint64

from .bounds import hdoc_id_radius, lil_params, lil_radius, LilParams, ucb_sampling_bonus
from .core import (
    Algorithm,
    AlgoConfig,
    ArmState,
    BanditInstance,
    Event,
    Label,
    RunOutcome,
    score_outcome,
)
from .env import BernoulliEnv, new_env


class IdentifyResult(enum.Enum):
    GOOD = "good"
    BAD = "bad"
    UNDECIDED = "undecided"


def identify_check(mean: float, radius: float, xi: float) -> IdentifyResult:
    if math.isinf(radius):
        return IdentifyResult.UNDECIDED
    if mean - radius >= xi:
        return IdentifyResult.GOOD
    if mean + radius <= xi:
        return IdentifyResult.BAD
    return IdentifyResult.UNDECIDED


@dataclass(frozen=True)
class PolicySpec:
    algorithm: Algorithm
    sampling_index: Callable[[ArmState, int], float]
    id_radius: Callable[[ArmState], float]
    init_pulls: int
    params: Optional[LilParams] = None


def make_policy(algorithm: Algorithm, K: int, delta: float) -> PolicySpec:
    algorithm = Algorithm.parse(algorithm) if isinstance(algorithm, str) else algorithm

    def ucb(arm: ArmState, t: int) -> float:
        return arm.mean + ucb_sampling_bonus(arm.pulls, t)

    def hdoc_radius(arm: ArmState) -> float:
        return hdoc_id_radius(arm.pulls, K, delta)

    if algorithm is Algorithm.HDOC:
        return PolicySpec(algorithm, ucb, hdoc_radius, 1)
    if algorithm is Algorithm.LUCBG:
        def lucb(arm, t):
            return arm.mean + hdoc_id_radius(arm.pulls, K, delta)

        return PolicySpec(algorithm, lucb, hdoc_radius, 1)

    params = lil_params(K, delta)
    return PolicySpec(
        algorithm,
        ucb,
        lambda arm: lil_radius(arm.pulls, params.omega, params.epsilon),
        params.T,
        params,
    )


_CODES = {Algorithm.LILHDOC: 0, Algorithm.HDOC: 1, Algorithm.LUCBG: 2}


# --------------------------------------------------------------------------
# compiled path

@njit(inline="always")
def _rotl(x, k):
    return (x << uint64(k)) | (x >> uint64(64 - k))


@njit(nogil=True, cache=True)
def _radius(code, n, K, delta, eps, omega, one_plus_sqrt_eps):
    if code == 0:
        inner = math.log((1.0 + eps) * n)
        if inner <= 0.0:
            return math.inf
        ratio = inner / omega
        if ratio < 1.0:
            return math.inf
        return one_plus_sqrt_eps * math.sqrt((1.0 + eps) / (2.0 * n) * math.log(ratio))
    fn = float(n)
    return math.sqrt(math.log(4.0 * K * fn * fn / delta) / (2.0 * fn))


@njit(nogil=True, cache=True)
def _kernel(means, xi, code, init_pulls, delta, eps, omega, budget, state):
    K = means.shape[0]
    pulls = np.zeros(K, np.int64)
    wins = np.zeros(K, np.int64)
    active = np.ones(K, np.bool_)
    ev_arm = np.zeros(K, np.int64)
    ev_label = np.zeros(K, np.int64)  # 1 good, 0 bad
    ev_round = np.zeros(K, np.int64)
    ev_pulls = np.zeros(K, np.int64)
    ev_wins = np.zeros(K, np.int64)
    n_events = 0
    n_active = K
    s0 = state[0]
    s1 = state[1]
    s2 = state[2]
    s3 = state[3]
    scale = 1.0 / 9007199254740992.0
    opse = 1.0 + math.sqrt(eps)
    t = 0
    truncated = False

    for phase_arm in range(K + 1):
        # phase_arm < K: warm-up pulls of that arm; phase_arm == K: adaptive loop
        while True:
            if phase_arm < K:
                if pulls[phase_arm] >= init_pulls:
                    break
                best = phase_arm
            else:
                if n_active == 0:
                    break
                logt = math.log(float(t + 1))
                best = -1
                best_val = -math.inf
                for i in range(K):
                    if active[i]:
                        n = pulls[i]
                        if code == 2:
                            v = wins[i] / n + _radius(2, n, K, delta, eps, omega, opse)
                        else:
                            v = wins[i] / n + math.sqrt(logt / (2.0 * n))
                        if v > best_val or best < 0:
                            best_val = v
                            best = i
            if t >= budget:
                truncated = True
                break
            r = _rotl(s1 * uint64(5), 7) * uint64(9)
            tt = s1 << uint64(17)
            s2 ^= s0
            s3 ^= s1
            s1 ^= s2
            s0 ^= s3
            s2 ^= tt
            s3 = _rotl(s3, 45)
            u = (r >> uint64(11)) * scale
            t += 1
            pulls[best] += 1
            if u < means[best]:
                wins[best] += 1
            if phase_arm < K and pulls[best] < init_pulls:
                continue
            n = pulls[best]
            mean = wins[best] / n
            rad = _radius(code, n, K, delta, eps, omega, opse)
            label = -1
            if not math.isinf(rad):
                if mean - rad >= xi:
                    label = 1
                elif mean + rad <= xi:
                    label = 0
            if label >= 0:
                active[best] = False
                n_active -= 1
                ev_arm[n_events] = best
                ev_label[n_events] = label
                ev_round[n_events] = t
                ev_pulls[n_events] = n
                ev_wins[n_events] = wins[best]
                n_events += 1
            if phase_arm < K:
                break
        if truncated:
            break

    state[0] = s0
    state[1] = s1
    state[2] = s2
    state[3] = s3
    return t, truncated, pulls, ev_arm, ev_label, ev_round, ev_pulls, ev_wins, n_events


# --------------------------------------------------------------------------

def _assemble(instance, events, truncated, t, pulls_per_arm) -> RunOutcome:
    tau = [ev.round for ev in events if ev.label is Label.GOOD]
    outcome = RunOutcome(
        events=events,
        tau_lambda=tau,
        tau_stop=None if truncated else t,
        truncated=truncated,
        misclassified=False,
        pulls_per_arm=list(pulls_per_arm),
        total_pulls=t,
    )
    outcome.misclassified = score_outcome(outcome, instance)
    return outcome


def _run_python(instance: BanditInstance, policy: PolicySpec, budget: int, env) -> RunOutcome:
    K, xi = instance.K, instance.threshold
    arms = [ArmState() for _ in range(K)]
    active = list(range(K))
    events = []
    t = 0

    def classify(i):
        arm = arms[i]
        res = identify_check(arm.mean, policy.id_radius(arm), xi)
        if res is IdentifyResult.UNDECIDED:
            return
        label = Label.GOOD if res is IdentifyResult.GOOD else Label.BAD
        events.append(Event(i, label, t, arm.pulls, arm.reward_sum))
        active.remove(i)

    for i in range(K):
        for _ in range(policy.init_pulls):
            if t >= budget:
                return _assemble(instance, events, True, t, [a.pulls for a in arms])
            arms[i].update(env.pull(i))
            t += 1
        classify(i)

    while active:
        if t >= budget:
            return _assemble(instance, events, True, t, [a.pulls for a in arms])
        best, best_val = active[0], -math.inf
        for i in active:
            v = policy.sampling_index(arms[i], t + 1)
            if v > best_val:
                best, best_val = i, v
        arms[best].update(env.pull(best))
        t += 1
        classify(best)

    return _assemble(instance, events, False, t, [a.pulls for a in arms])


def run_gai(
    instance: BanditInstance,
    config: AlgoConfig,
    env=None,
    *,
    run_index: int = 0,
    fast: Optional[bool] = None,
) -> RunOutcome:
    """Run one good-arm identification episode.

    ``env`` defaults to ``new_env(instance, config.seed, run_index)``.  Any
    object with ``pull(arm)`` works; a :class:`BernoulliEnv` is simulated by
    the compiled kernel unless ``fast=False``.
    """
    config.validate_for(instance)
    policy = make_policy(config.algorithm, instance.K, config.delta)
    if env is None:
        env = new_env(instance, config.seed, run_index)
    use_kernel = isinstance(env, BernoulliEnv) and fast is not False
    if fast and not isinstance(env, BernoulliEnv):
        raise TypeError("the compiled path needs a BernoulliEnv")
    if not use_kernel:
        return _run_python(instance, policy, config.max_total_pulls, env)

    params = policy.params
    state = env.state
    t, truncated, pulls, ev_arm, ev_label, ev_round, ev_pulls, ev_wins, n_ev = _kernel(
        np.asarray(instance.arm_means, dtype=np.float64),
        instance.threshold,
        _CODES[policy.algorithm],
        policy.init_pulls,
        config.delta,
        params.epsilon if params else 1.0,
        params.omega if params else 1.0,
        config.max_total_pulls,
        state,
    )
    env.state = state
    env.pull_count += int(t)
    events = [
        Event(int(ev_arm[k]), Label.GOOD if ev_label[k] else Label.BAD, int(ev_round[k]),
              int(ev_pulls[k]), int(ev_wins[k]))
        for k in range(n_ev)
    ]
    return _assemble(instance, events, bool(truncated), int(t), [int(p) for p in pulls])


def replay_labels(outcome: RunOutcome, instance: BanditInstance, config: AlgoConfig) -> bool:
    """Recompute every recorded label from its (pulls, reward_sum) snapshot."""
    policy = make_policy(config.algorithm, instance.K, config.delta)
    for ev in outcome.events:
        arm = ArmState(ev.pulls, ev.reward_sum)
        res = identify_check(arm.mean, policy.id_radius(arm), instance.threshold)
        if res.value != ev.label.value:
            return False
    return True
