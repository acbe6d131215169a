import math

import pytest
from hypothesis import given, strategies as st

from goodarm.algorithms import IdentifyResult, identify_check, make_policy, replay_labels, run_gai
from goodarm.bounds import lil_params
from goodarm.core import Algorithm, AlgoConfig, ArmState, BanditInstance, ConfigError, Label
from goodarm.env import new_env


class RoundedEnv:
    """Deterministic oracle: arm i always pays round(mu_i)."""

    def __init__(self, instance):
        self.means = instance.arm_means
        self.log = []

    def pull(self, arm):
        self.log.append(arm)
        return int(round(self.means[arm]))


class RecordingEnv:
    def __init__(self, env):
        self.env = env
        self.log = []

    def pull(self, arm):
        self.log.append(arm)
        return self.env.pull(arm)


class TestIdentifyCheck:
    @pytest.mark.parametrize("mean,radius,xi,expected", [
        (0.9, 0.2, 0.5, IdentifyResult.GOOD),
        (0.1, 0.2, 0.5, IdentifyResult.BAD),
        (0.5, 0.2, 0.5, IdentifyResult.UNDECIDED),
        (0.9, math.inf, 0.5, IdentifyResult.UNDECIDED),
    ])
    def test_examples(self, mean, radius, xi, expected):
        assert identify_check(mean, radius, xi) is expected

    @given(st.floats(0, 1), st.floats(1e-9, 2), st.floats(0.001, 0.999))
    def test_exclusive(self, mean, radius, xi):
        good = mean - radius >= xi
        bad = mean + radius <= xi
        assert not (good and bad)
        res = identify_check(mean, radius, xi)
        assert (res is IdentifyResult.GOOD) == good
        assert (res is IdentifyResult.BAD) == bad


def reference_trace(means, xi, delta, algorithm):
    """Hand-written loop: init pulls with per-arm check, then argmax sampling."""
    K = len(means)
    if algorithm == "lilhdoc":
        p = lil_params(K, delta)
        init = p.T

        def radius(n):
            arg = math.log((1 + p.epsilon) * n) / p.omega
            return (1 + math.sqrt(p.epsilon)) * math.sqrt((1 + p.epsilon) / (2 * n) * math.log(arg))
    else:
        init = 1

        def radius(n):
            return math.sqrt(math.log(4 * K * n * n / delta) / (2 * n))

    N = [0] * K
    S = [0] * K
    active = set(range(K))
    t = 0
    events = []

    def check(i):
        mu = S[i] / N[i]
        rad = radius(N[i])
        if mu - rad >= xi:
            events.append((i, "good", t))
            active.discard(i)
        elif mu + rad <= xi:
            events.append((i, "bad", t))
            active.discard(i)

    for i in range(K):
        for _ in range(init):
            N[i] += 1
            S[i] += int(round(means[i]))
            t += 1
        check(i)
    while active:
        idx = {i: S[i] / N[i] + math.sqrt(math.log(t + 1) / (2 * N[i])) for i in sorted(active)}
        h = max(sorted(active), key=lambda i: (idx[i], -i))
        N[h] += 1
        S[h] += int(round(means[h]))
        t += 1
        check(h)
    return events, t


class TestDeterministicEnv:
    inst = BanditInstance((1.0, 0.0), 0.5, "det")

    @pytest.mark.parametrize("algo", ["lilhdoc", "hdoc"])
    def test_matches_reference(self, algo):
        out = run_gai(self.inst, AlgoConfig(algo, 0.1), RoundedEnv(self.inst))
        ref_events, ref_stop = reference_trace(self.inst.arm_means, 0.5, 0.1, algo)
        assert [(e.arm, e.label.value, e.round) for e in out.events] == ref_events
        assert out.tau_stop == ref_stop
        assert not out.misclassified and not out.truncated

    def test_lil_classifies_during_init(self):
        T = lil_params(2, 0.1).T
        out = run_gai(self.inst, AlgoConfig("lilhdoc", 0.1), RoundedEnv(self.inst))
        # both arms are decided the moment their warm-up pulls finish
        assert [(e.arm, e.round) for e in out.events] == [(0, T), (1, 2 * T)]
        assert out.tau_stop == 2 * T

    def test_hdoc_reference_values(self):
        ref_events, ref_stop = reference_trace((1.0, 0.0), 0.5, 0.1, "hdoc")
        # hand check: radius(n) = sqrt(log(80 n^2) / 2n) <= 0.5 first at n = 21 (n = 20 gives 0.509)
        n = next(n for n in range(1, 100) if math.sqrt(math.log(80 * n * n) / (2 * n)) <= 0.5)
        assert n == 21
        assert ref_stop == 2 * n


def test_single_arm_hdoc():
    inst = BanditInstance((0.9,), 0.5)
    out = run_gai(inst, AlgoConfig("hdoc", 0.1, seed=3))
    assert [(e.arm, e.label) for e in out.events] == [(0, Label.GOOD)]
    assert out.tau_lambda == [out.tau_stop]


def test_lil_rejects_single_arm():
    with pytest.raises(ConfigError, match="too small"):
        run_gai(BanditInstance((0.9,), 0.5), AlgoConfig("lilhdoc", 0.1))


MODERATE = BanditInstance((0.7, 0.6, 0.45, 0.3, 0.55), 0.5, "moderate")


@pytest.mark.parametrize("algo", list(Algorithm))
@pytest.mark.parametrize("seed", [0, 17])
def test_compiled_matches_python(algo, seed):
    cfg = AlgoConfig(algo, 0.05, seed)
    fast = run_gai(MODERATE, cfg, run_index=seed)
    slow = run_gai(MODERATE, cfg, run_index=seed, fast=False)
    assert fast == slow


def test_env_stream_continues_after_kernel():
    cfg = AlgoConfig("hdoc", 0.05, 4)
    a, b = new_env(MODERATE, 4, 0), new_env(MODERATE, 4, 0)
    run_gai(MODERATE, cfg, a)
    run_gai(MODERATE, cfg, b, fast=False)
    assert a.pull_count == b.pull_count
    assert a.state.tolist() == b.state.tolist()


@pytest.mark.parametrize("algo", list(Algorithm))
def test_bit_deterministic(algo):
    cfg = AlgoConfig(algo, 0.05, 123)
    assert run_gai(MODERATE, cfg, run_index=2) == run_gai(MODERATE, cfg, run_index=2)


@pytest.mark.parametrize("algo", list(Algorithm))
def test_outcome_invariants(algo):
    for run in range(5):
        out = run_gai(MODERATE, AlgoConfig(algo, 0.05, 9), run_index=run)
        assert not out.truncated
        assert sorted(e.arm for e in out.events) == list(range(MODERATE.K))
        assert out.tau_lambda == sorted(out.tau_lambda)
        assert out.tau_stop >= max(out.tau_lambda)
        assert sum(out.pulls_per_arm) == out.tau_stop
        assert replay_labels(out, MODERATE, AlgoConfig(algo, 0.05, 9))


def test_warm_up_precedes_adaptive_pulls():
    K = MODERATE.K
    T = lil_params(K, 0.05).T
    rec = RecordingEnv(new_env(MODERATE, 1, 0))
    out = run_gai(MODERATE, AlgoConfig("lilhdoc", 0.05), rec)
    assert rec.log[: K * T] == [i for i in range(K) for _ in range(T)]
    assert min(out.pulls_per_arm) >= T


def test_truncation():
    cfg = AlgoConfig("hdoc", 0.05, 0, max_total_pulls=50)
    out = run_gai(MODERATE, cfg)
    assert out.truncated and out.tau_stop is None
    assert out.total_pulls == 50
    assert len(out.events) < MODERATE.K
    assert run_gai(MODERATE, cfg, fast=False) == out


def test_truncation_during_warm_up():
    cfg = AlgoConfig("lilhdoc", 0.05, 0, max_total_pulls=100)
    out = run_gai(MODERATE, cfg)
    assert out.truncated and out.events == [] and out.pulls_per_arm[0] == 100


def test_zero_gap_arm_truncates():
    inst = BanditInstance((0.5, 0.9), 0.5)
    out = run_gai(inst, AlgoConfig("hdoc", 0.1, 0, max_total_pulls=20_000))
    assert out.truncated and out.tau_stop is None
    assert out.total_pulls == 20_000


def test_policy_table():
    K, d = 4, 0.1
    hd = make_policy("hdoc", K, d)
    lu = make_policy("lucbg", K, d)
    lil = make_policy("lilhdoc", K, d)
    assert hd.init_pulls == lu.init_pulls == 1
    assert lil.init_pulls == lil_params(K, d).T
    arm = ArmState(10, 4)
    assert hd.sampling_index(arm, 100) == pytest.approx(0.4 + math.sqrt(math.log(100) / 20))
    assert lu.sampling_index(arm, 100) == pytest.approx(0.4 + math.sqrt(math.log(4 * K * 100 / d) / 20))
    assert hd.id_radius(arm) == lu.id_radius(arm)
    p = lil.params
    assert lil.id_radius(arm) == pytest.approx(
        (1 + math.sqrt(p.epsilon)) * math.sqrt((1 + p.epsilon) / 20 * math.log(
            p.c_eps * K * math.log((1 + p.epsilon) * 10) / d)))
