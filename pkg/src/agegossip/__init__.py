"""Simulator and analytics for version-age gossip networks.

The library models a source plus n fully connected nodes where freshness is
measured in versions behind the source. It provides the state primitives
(`core`), closed-form expectations and bounds (`analytics`), a seeded
discrete-event engine for the opportunistic, uniform, and no-gossip schemes
(`engine`), and a replicated sweep harness with CSV persistence (`harness`).
The `agegossip` command line fronts all of it.
"""

from .analytics import (
    RateParams,
    asymptotic_bound,
    gossip_phase_bound,
    min_age_mean,
    min_age_mean_limit,
    sensing_bound_limit,
    sensing_bound_seq,
    steady_state_bound_finite_n,
)
from .core import (
    AgeVector,
    MinAgeSet,
    gossip_merge,
    min_age_set,
    source_self_update,
    source_update_node,
)
from .engine import (
    Asuman,
    ConfigError,
    CRule,
    EventCounts,
    FixedC,
    IntervalStats,
    NoGossip,
    OverN,
    Scheme,
    SimConfig,
    SimResult,
    TraceMissingError,
    Uniform,
    c_value,
    epoch_min_age_trace,
    run_simulation,
    simulate_interval_asuman,
    simulate_interval_uniform,
)
from ._streams import EventStreams
from .harness import (
    SweepRow,
    SweepSpec,
    default_horizon,
    read_csv,
    run_sweep,
    scaling_fit,
    write_csv,
)

__all__ = [
    "AgeVector",
    "Asuman",
    "ConfigError",
    "CRule",
    "EventCounts",
    "EventStreams",
    "FixedC",
    "IntervalStats",
    "MinAgeSet",
    "NoGossip",
    "OverN",
    "RateParams",
    "Scheme",
    "SimConfig",
    "SimResult",
    "SweepRow",
    "SweepSpec",
    "TraceMissingError",
    "Uniform",
    "asymptotic_bound",
    "c_value",
    "default_horizon",
    "epoch_min_age_trace",
    "gossip_merge",
    "gossip_phase_bound",
    "min_age_mean",
    "min_age_mean_limit",
    "min_age_set",
    "read_csv",
    "run_simulation",
    "run_sweep",
    "scaling_fit",
    "sensing_bound_limit",
    "sensing_bound_seq",
    "simulate_interval_asuman",
    "simulate_interval_uniform",
    "source_self_update",
    "source_update_node",
    "steady_state_bound_finite_n",
    "write_csv",
]

__version__ = "0.1.0"
