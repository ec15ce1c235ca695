"""Deterministic-by-seed discrete-event simulation of the gossip network.

A run covers the time axis [0, horizon). Source self-updates at rate lambda_e
partition it into intervals; within an interval the active Poisson processes
are source deliveries (total rate lam, uniform over nodes) and, depending on
the scheme, gossip transmissions:

  * asuman    after each self-update the minimum-age nodes wait out a back-off
              of C times the network minimum age as held just before that
              update (the age sensing phase) and then gossip exclusively for
              the rest of the interval, splitting the total budget B evenly;
              everyone else stays silent.
  * uniform   every node gossips to every other node at per-link rate
              B / (n (n-1)) for the whole interval, no arbitration.
  * nogossip  deliveries and self-updates only.

A gossip transmission carries the sender's age at the moment it is sent, and
the receiver keeps the fresher version. Membership of the transmitting set is
frozen for the whole interval. Time-averaged ages use exact piecewise-constant
integration over [warmup_fraction * horizon, horizon]; identical config and
seed give a bit-identical result.

The interval operations below are the readable reference dynamics; they share
their substreams and draw-consumption order with the jitted kernel that
`run_simulation` uses, so composing them reproduces a full run event for
event. The shared discipline is: one exponential from the self-update stream
per interval; per phase, one pending exponential per active process, redrawn
after each event and discarded at the phase end; one uniform per delivery
(node pick) and two uniforms per transmission (sender, then receiver among the
remaining n-1); zero-rate processes and zero-length phases consume nothing.
Simultaneous events resolve as self-update, then delivery, then gossip.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import fmean

import numpy as np

from . import _kernel
from ._streams import ACTIVE, EventStreams, KernelBuffers
from .core import AgeVector, min_age_set

_INF = float("inf")
_TRACE_CHUNK = 65536


class ConfigError(ValueError):
    """A simulation configuration field failed validation."""


class TraceMissingError(RuntimeError):
    """The epoch trace was requested but not recorded for this run."""


# --------------------------------------------------------------------------
# Schemes
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class OverN:
    """Back-off coefficient C = 1/n for the configured network size."""


@dataclass(frozen=True)
class FixedC:
    """Back-off coefficient fixed at a positive constant."""

    c: float

    def __post_init__(self) -> None:
        if not self.c > 0:
            raise ConfigError(f"c_rule: fixed C must be > 0, got {self.c}")


CRule = OverN | FixedC


@dataclass(frozen=True)
class Asuman:
    """Opportunistic gossiping with age-proportional back-off arbitration."""

    c_rule: CRule = OverN()

    label = "asuman"


@dataclass(frozen=True)
class Uniform:
    """Blind gossiping: every node transmits at an equal share of the budget."""

    label = "uniform"


@dataclass(frozen=True)
class NoGossip:
    """Source updates only; the baseline for the per-node delivery rate."""

    label = "nogossip"


Scheme = Asuman | Uniform | NoGossip


def c_value(rule: CRule, n: int) -> float:
    """Numeric back-off coefficient for a network of n nodes."""
    if isinstance(rule, OverN):
        return 1.0 / n
    return rule.c


# --------------------------------------------------------------------------
# Configuration and results
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SimConfig:
    """Full parameterization of one simulation run.

    B defaults to n * lam when not given. horizon and rates are in the same
    time units; seed is a 64-bit unsigned integer.
    """

    n: int
    lambda_e: float
    lam: float
    scheme: Scheme
    horizon: float
    B: float | None = None
    warmup_fraction: float = 0.1
    seed: int = 0
    record_epoch_trace: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigError(f"n: must be a positive integer, got {self.n!r}")
        if not self.lambda_e > 0:
            raise ConfigError(f"lambda_e: must be > 0, got {self.lambda_e!r}")
        if not self.lam > 0:
            raise ConfigError(f"lam: must be > 0, got {self.lam!r}")
        if not isinstance(self.scheme, (Asuman, Uniform, NoGossip)):
            raise ConfigError(f"scheme: unknown scheme {self.scheme!r}")
        if self.B is None:
            object.__setattr__(self, "B", self.n * self.lam)
        if not self.B >= 0:
            raise ConfigError(f"B: must be >= 0, got {self.B!r}")
        if not self.horizon > 0:
            raise ConfigError(f"horizon: must be > 0, got {self.horizon!r}")
        if not 0.0 <= self.warmup_fraction < 1.0:
            raise ConfigError(
                f"warmup_fraction: must be in [0, 1), got {self.warmup_fraction!r}"
            )
        if not (isinstance(self.seed, int) and 0 <= self.seed < 2**64):
            raise ConfigError(
                f"seed: must be a 64-bit unsigned integer, got {self.seed!r}"
            )
        if isinstance(self.scheme, Uniform) and self.n < 2 and self.B > 0:
            raise ConfigError(
                f"scheme: uniform gossip needs n >= 2 or B = 0, got n={self.n}, B={self.B}"
            )


@dataclass(frozen=True)
class EventCounts:
    self_updates: int
    source_deliveries: int
    gossip_deliveries: int
    suppressed_node_intervals: int
    intervals: int


@dataclass(frozen=True)
class SimResult:
    """Outputs of one run.

    per_node_time_avg_age integrates each node's age over the measurement
    window; network_mean_age is their arithmetic mean. epoch_min_ages is the
    (k, min age after the k-th self-update) trace when recording was enabled.
    """

    per_node_time_avg_age: tuple[float, ...]
    network_mean_age: float
    epoch_min_ages: tuple[tuple[int, int], ...] | None
    counts: EventCounts
    effective_horizon: float


@dataclass(frozen=True)
class IntervalStats:
    """Per-interval diagnostics from the interval operations.

    members holds the nodes granted transmit rights for the interval (the
    minimum-age set under asuman, everyone under uniform); senders the subset
    that actually transmitted. age_integral is each node's exact age-time
    integral over the interval.
    """

    min_age: int
    members: frozenset[int]
    senders: frozenset[int]
    deliveries: int
    gossip_events: int
    sensing_duration: float
    gossip_duration: float
    age_integral: tuple[float, ...]


# --------------------------------------------------------------------------
# Interval operations (reference dynamics, shared draw discipline)
# --------------------------------------------------------------------------

class _IntervalState:
    __slots__ = ("ages", "integ", "t_end", "deliveries", "gossip_events", "senders")

    def __init__(self, ages: list[int], tau: float, t_end: float):
        self.ages = ages
        self.integ = [float(a) * tau for a in ages]
        self.t_end = t_end
        self.deliveries = 0
        self.gossip_events = 0
        self.senders: set[int] = set()


def _phase_py(st: _IntervalState, lo: float, hi: float, lam: float, G: float,
              members: list[int], uniform_sender: bool,
              streams: EventStreams) -> None:
    # Mirrors the jitted kernel's _phase draw for draw; see the module
    # docstring for the discipline.
    if hi <= lo:
        return
    n = len(st.ages)
    ages = st.ages
    integ = st.integ
    t_end = st.t_end
    m = len(members)
    if lam > 0.0:
        next_del = lo + streams.delivery.exp() / lam
    else:
        next_del = _INF
    has_gossip = G > 0.0 and m >= 1 and n >= 2
    if has_gossip:
        next_gos = lo + streams.gossip.exp() / G
    else:
        next_gos = _INF
    while True:
        if next_del <= next_gos:
            if next_del >= hi:
                break
            te = next_del
            u = streams.delivery.uni()
            r = int(u * n)
            if r >= n:
                r = n - 1
            if ages[r] != 0:
                integ[r] += -ages[r] * (t_end - te)
                ages[r] = 0
            st.deliveries += 1
            next_del = te + streams.delivery.exp() / lam
        else:
            if next_gos >= hi:
                break
            te = next_gos
            us = streams.gossip.uni()
            ur = streams.gossip.uni()
            if uniform_sender:
                s_node = int(us * n)
                if s_node >= n:
                    s_node = n - 1
            else:
                si = int(us * m)
                if si >= m:
                    si = m - 1
                s_node = members[si]
            ridx = int(ur * (n - 1))
            if ridx >= n - 1:
                ridx = n - 2
            r = ridx + 1 if ridx >= s_node else ridx
            st.gossip_events += 1
            st.senders.add(s_node)
            if ages[r] > ages[s_node]:
                integ[r] += (ages[s_node] - ages[r]) * (t_end - te)
                ages[r] = ages[s_node]
            next_gos = te + streams.gossip.exp() / G


def simulate_interval_asuman(ages: AgeVector, tau: float, c: float, B: float,
                             lam: float, streams: EventStreams,
                             start_time: float = 0.0) -> tuple[AgeVector, IntervalStats]:
    """One opportunistic interval: back-off, then exclusive min-age gossiping.

    The minimum-age set is frozen from `ages` at the interval start. No gossip
    occurs during the sensing window of min(c * (min_age - 1), tau) time units
    (the back-off counts the ages held just before the epoch's version bump,
    so a network that was fully synchronized senses for zero time); afterwards
    each member transmits to each other node at rate B / (|members| (n-1)),
    payload being the sender's age at the transmission instant. Source
    deliveries at total rate lam run for the whole interval. Returns the ages
    at the interval end, before any following self-update.

    start_time only offsets the clock so runs compose exactly; the dynamics
    are shift-invariant.
    """
    if not tau > 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    if c < 0:
        raise ValueError(f"backoff coefficient must be >= 0, got {c}")
    if B < 0:
        raise ValueError(f"B must be >= 0, got {B}")
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    mas = min_age_set(ages)
    members = sorted(i - 1 for i in mas.members)
    t_end = start_time + tau
    backoff_age = mas.min_age - 1
    if backoff_age < 0:
        backoff_age = 0
    backoff = c * backoff_age
    sense_end = start_time + backoff
    if sense_end > t_end:
        sense_end = t_end
    st = _IntervalState(list(ages.ages), tau, t_end)
    _phase_py(st, start_time, sense_end, lam, 0.0, members, False, streams)
    _phase_py(st, sense_end, t_end, lam, B, members, False, streams)
    stats = IntervalStats(
        min_age=mas.min_age,
        members=mas.members,
        senders=frozenset(s + 1 for s in st.senders),
        deliveries=st.deliveries,
        gossip_events=st.gossip_events,
        sensing_duration=sense_end - start_time,
        gossip_duration=t_end - sense_end,
        age_integral=tuple(st.integ),
    )
    return AgeVector(tuple(st.ages)), stats


def simulate_interval_uniform(ages: AgeVector, tau: float, B: float,
                              lam: float, streams: EventStreams,
                              start_time: float = 0.0) -> tuple[AgeVector, IntervalStats]:
    """One blind-gossip interval: every directed link at rate B / (n (n-1)).

    No phases and no suppression; source deliveries as under asuman. With
    B = 0 this degenerates to the no-gossip dynamics.
    """
    if not tau > 0:
        raise ValueError(f"tau must be > 0, got {tau}")
    if B < 0:
        raise ValueError(f"B must be >= 0, got {B}")
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    n = len(ages)
    if n < 2 and B > 0:
        raise ValueError(f"uniform gossip needs n >= 2 or B = 0, got n={n}")
    mas = min_age_set(ages)
    t_end = start_time + tau
    st = _IntervalState(list(ages.ages), tau, t_end)
    _phase_py(st, start_time, t_end, lam, B, list(range(n)), True, streams)
    stats = IntervalStats(
        min_age=mas.min_age,
        members=frozenset(range(1, n + 1)),
        senders=frozenset(s + 1 for s in st.senders),
        deliveries=st.deliveries,
        gossip_events=st.gossip_events,
        sensing_duration=0.0,
        gossip_duration=tau,
        age_integral=tuple(st.integ),
    )
    return AgeVector(tuple(st.ages)), stats


# --------------------------------------------------------------------------
# Full runs
# --------------------------------------------------------------------------

def _scheme_code(scheme: Scheme) -> int:
    if isinstance(scheme, Asuman):
        return _kernel.SCHEME_ASUMAN
    if isinstance(scheme, Uniform):
        return _kernel.SCHEME_UNIFORM
    return _kernel.SCHEME_NOGOSSIP


def run_simulation(config: SimConfig) -> SimResult:
    """Simulate [0, horizon) under `config` and return exact time-averages.

    Ages integrate over [warmup_fraction * horizon, horizon]. The epoch trace,
    when enabled, records the network minimum age immediately after each
    self-update, so from a cold start the first entry is (1, 1).
    """
    n = config.n
    scheme = config.scheme
    code = _scheme_code(scheme)
    c_coeff = c_value(scheme.c_rule, n) if isinstance(scheme, Asuman) else 0.0
    do_trace = config.record_epoch_trace

    streams = EventStreams(config.seed)
    bufs = KernelBuffers(streams)
    raw = np.zeros(n, dtype=np.int64)
    b = np.zeros(n, dtype=np.int64)
    lt = np.zeros(n, dtype=np.float64)
    s_r = np.zeros(n, dtype=np.int64)
    w_r = np.zeros(n, dtype=np.float64)
    integ = np.zeros(n, dtype=np.float64)
    members = np.empty(n, dtype=np.int64)
    cap = _TRACE_CHUNK if do_trace else 1
    trace_k = np.empty(cap, dtype=np.int64)
    trace_v = np.empty(cap, dtype=np.int64)
    out = np.zeros(8, dtype=np.int64)
    out[_kernel.OUT_FLUSH_PENDING] = 1
    warmup_t = config.warmup_fraction * config.horizon

    e0, e1, u1, e2, u2, cursors = bufs.arrays()
    ACTIVE.streams = streams
    ACTIVE.trace_chunks = []
    try:
        _kernel.run_kernel(
            n, float(config.lambda_e), float(config.lam), float(config.B),
            code, float(c_coeff), float(config.horizon), float(warmup_t),
            bool(do_trace),
            raw, b, lt, s_r, w_r, integ, members,
            e0, e1, u1, e2, u2, cursors,
            trace_k, trace_v, out,
        )
        chunks = ACTIVE.trace_chunks
    finally:
        ACTIVE.streams = None
        ACTIVE.trace_chunks = None
    bufs.sync_back()

    effective = config.horizon - warmup_t
    per_node = tuple(float(x) for x in integ / effective)
    trace = None
    if do_trace:
        pairs: list[tuple[int, int]] = []
        for ck, cv in chunks:
            pairs.extend(zip(ck.tolist(), cv.tolist()))
        used = int(out[_kernel.OUT_TRACE_USED])
        pairs.extend(zip(trace_k[:used].tolist(), trace_v[:used].tolist()))
        trace = tuple(pairs)
    counts = EventCounts(
        self_updates=int(out[_kernel.OUT_SELF_UPDATES]),
        source_deliveries=int(out[_kernel.OUT_DELIVERIES]),
        gossip_deliveries=int(out[_kernel.OUT_GOSSIP]),
        suppressed_node_intervals=int(out[_kernel.OUT_SUPPRESSED]),
        intervals=int(out[_kernel.OUT_INTERVALS]),
    )
    return SimResult(
        per_node_time_avg_age=per_node,
        network_mean_age=fmean(per_node),
        epoch_min_ages=trace,
        counts=counts,
        effective_horizon=effective,
    )


def epoch_min_age_trace(result: SimResult) -> tuple[tuple[int, int], ...]:
    """The (k, min age after the k-th self-update) trace of a run."""
    if result.epoch_min_ages is None:
        raise TraceMissingError(
            "epoch trace was not recorded; run with record_epoch_trace=True"
        )
    return result.epoch_min_ages
