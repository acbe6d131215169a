"""Good arm identification: lil'HDoC, HDoC and LUCB-G with a seeded Bernoulli simulator."""

from .algorithms import IdentifyResult, PolicySpec, identify_check, make_policy, run_gai
from .bounds import (
    LilParams,
    c_epsilon,
    hdoc_id_radius,
    lemma2_transform,
    lil_params,
    lil_radius,
    solve_epsilon,
    solve_T,
    theorem3_bound,
    ucb_sampling_bonus,
)
from .core import (
    AggregateStats,
    Algorithm,
    AlgoConfig,
    ArmState,
    BanditInstance,
    ConfigError,
    Event,
    Label,
    RunOutcome,
    ground_truth,
    load_instance,
    save_instance,
    score_outcome,
)
from .env import BernoulliEnv, new_env, pull

__version__ = "0.1.0"
