"""Reference full-run driver built from the public interval operations.

Composes simulate_interval_* and the core self-update exactly the way
run_simulation's kernel walks a run, sharing its substreams and draw order.
Used to cross-validate the jitted engine event for event.
"""

from __future__ import annotations

from dataclasses import dataclass

from agegossip import (
    AgeVector,
    Asuman,
    EventStreams,
    SimConfig,
    Uniform,
    c_value,
    simulate_interval_asuman,
    simulate_interval_uniform,
    source_self_update,
)


@dataclass
class ReferenceResult:
    ages: AgeVector
    per_node_time_avg_age: tuple[float, ...]
    deliveries: int
    gossip_events: int
    suppressed: int
    intervals: int
    self_updates: int
    trace: tuple[tuple[int, int], ...]


def reference_run(config: SimConfig) -> ReferenceResult:
    """Run [0, horizon) by composing the interval operations (warmup 0 only)."""
    assert config.warmup_fraction == 0.0, "reference driver integrates from t=0"
    n = config.n
    streams = EventStreams(config.seed)
    ages = AgeVector((0,) * n)
    integrals = [0.0] * n
    t = 0.0
    self_updates = 0
    deliveries = gossip_events = suppressed = intervals = 0
    trace: list[tuple[int, int]] = []
    is_asuman = isinstance(config.scheme, Asuman)
    cc = c_value(config.scheme.c_rule, n) if is_asuman else 0.0
    while True:
        tau = streams.self_update.exp() / config.lambda_e
        t_next = t + tau
        truncated = t_next >= config.horizon
        t_end = config.horizon if truncated else t_next
        if self_updates >= 1:
            trace.append((self_updates, min(ages.ages)))
        if is_asuman:
            ages, stats = simulate_interval_asuman(
                ages, t_end - t, cc, config.B, config.lam, streams, start_time=t)
            suppressed += n - len(stats.members)
        elif isinstance(config.scheme, Uniform):
            ages, stats = simulate_interval_uniform(
                ages, t_end - t, config.B, config.lam, streams, start_time=t)
        else:
            ages, stats = simulate_interval_uniform(
                ages, t_end - t, 0.0, config.lam, streams, start_time=t)
        for i, v in enumerate(stats.age_integral):
            integrals[i] += v
        deliveries += stats.deliveries
        gossip_events += stats.gossip_events
        intervals += 1
        t = t_end
        if truncated:
            break
        self_updates += 1
        ages = source_self_update(ages)
    return ReferenceResult(
        ages=ages,
        per_node_time_avg_age=tuple(v / config.horizon for v in integrals),
        deliveries=deliveries,
        gossip_events=gossip_events,
        suppressed=suppressed,
        intervals=intervals,
        self_updates=self_updates,
        trace=tuple(trace),
    )
