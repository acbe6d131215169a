"""Seeded Bernoulli environment.

Rewards come from xoshiro256** (Blackman & Vigna), a published generator
whose output sequence is fully specified, so golden traces are portable.
The 256-bit state for run ``run_index`` under base ``seed`` is

    numpy.random.SeedSequence(entropy=seed, spawn_key=(run_index,)).generate_state(4, uint64)

i.e. numpy's documented hash-based seed mixing, which gives independent
streams per run index.  A draw is ``u = (next() >> 11) * 2**-53`` and the
reward is ``1`` iff ``u < mean``.
"""

from __future__ import annotations

import numpy as np

from .core import BanditInstance

MASK64 = (1 << 64) - 1
TWO_M53 = 1.0 / 9007199254740992.0


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & MASK64


class Xoshiro256StarStar:
    """Pure-Python xoshiro256**; the compiled simulation kernel mirrors it exactly."""

    def __init__(self, state):
        s = [int(v) & MASK64 for v in state]
        if len(s) != 4 or not any(s):
            raise ValueError("xoshiro256** needs four 64-bit words, not all zero")
        self.s = s

    def next(self) -> int:
        s = self.s
        result = (_rotl((s[1] * 5) & MASK64, 7) * 9) & MASK64
        t = (s[1] << 17) & MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform(self) -> float:
        return (self.next() >> 11) * TWO_M53


def stream_state(seed: int, run_index: int) -> np.ndarray:
    state = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(run_index),)).generate_state(
        4, np.uint64
    )
    if not state.any():  # pragma: no cover - probability 2**-256
        state[0] = 1
    return state


class BernoulliEnv:
    """Reward oracle for one run. Not shared between runs."""

    def __init__(self, instance: BanditInstance, state):
        self.instance = instance
        self.rng = Xoshiro256StarStar(state)
        self.pull_count = 0

    @property
    def state(self) -> np.ndarray:
        return np.array(self.rng.s, dtype=np.uint64)

    @state.setter
    def state(self, value) -> None:
        self.rng = Xoshiro256StarStar(value)

    def pull(self, arm: int) -> int:
        if not (0 <= arm < self.instance.K):
            raise IndexError(f"arm {arm} out of range for K={self.instance.K}")
        self.pull_count += 1
        return 1 if self.rng.uniform() < self.instance.arm_means[arm] else 0


def new_env(instance: BanditInstance, seed: int, run_index: int = 0) -> BernoulliEnv:
    return BernoulliEnv(instance, stream_state(seed, run_index))


def pull(env: BernoulliEnv, arm: int) -> int:
    return env.pull(arm)
