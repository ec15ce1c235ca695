"""Named, counter-based random substreams for the event simulation.

One root seed expands into three independent substreams (self-updates, source
deliveries, gossip) via SeedSequence spawn keys over the counter-based Philox
generator. Instrumenting one event class therefore never perturbs the sample
path of another.

Draws are served from fixed-size buffers refilled in bulk. The buffer sizes
are constants, so the value sequence each consumer sees depends only on the
root seed, never on when refills happen. The jitted kernel consumes the same
buffers through `KernelBuffers`; refills from inside the kernel go through the
thread-local `ACTIVE` context (one simulation run is strictly sequential, and
concurrent runs on other threads get their own context).
"""

from __future__ import annotations

import threading

import numpy as np

STREAM_SELF = 0
STREAM_DELIVERY = 1
STREAM_GOSSIP = 2

# Buffer lengths per (stream, kind). Small for the rare event classes so
# short runs do not pay for bulk draws they never use; large for gossip.
EXP_BUF_LEN = (4096, 8192, 65536)
UNI_BUF_LEN = (16, 8192, 131072)

# Refill request codes passed from the kernel: stream * 2 + (0 exp | 1 uni).
REQ_EXP = 0
REQ_UNI = 1


class Substream:
    """Buffered draws from one named substream.

    `exp()` returns standard-exponential variates, `uni()` uniforms on [0, 1).
    Buffers start exhausted so construction draws nothing.
    """

    __slots__ = ("gen", "exp_buf", "exp_i", "uni_buf", "uni_i")

    def __init__(self, root_seed: int, stream_id: int):
        seq = np.random.SeedSequence(root_seed, spawn_key=(stream_id,))
        self.gen = np.random.Generator(np.random.Philox(seq))
        self.exp_buf = np.empty(EXP_BUF_LEN[stream_id], dtype=np.float64)
        self.uni_buf = np.empty(UNI_BUF_LEN[stream_id], dtype=np.float64)
        self.exp_i = len(self.exp_buf)
        self.uni_i = len(self.uni_buf)

    def refill_exp(self) -> None:
        self.gen.standard_exponential(out=self.exp_buf)
        self.exp_i = 0

    def refill_uni(self) -> None:
        self.gen.random(out=self.uni_buf)
        self.uni_i = 0

    def exp(self) -> float:
        if self.exp_i >= len(self.exp_buf):
            self.refill_exp()
        v = self.exp_buf[self.exp_i]
        self.exp_i += 1
        return float(v)

    def uni(self) -> float:
        if self.uni_i >= len(self.uni_buf):
            self.refill_uni()
        v = self.uni_buf[self.uni_i]
        self.uni_i += 1
        return float(v)


class EventStreams:
    """The three named substreams of a simulation run."""

    __slots__ = ("seed", "self_update", "delivery", "gossip")

    def __init__(self, seed: int):
        if not 0 <= int(seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self.self_update = Substream(self.seed, STREAM_SELF)
        self.delivery = Substream(self.seed, STREAM_DELIVERY)
        self.gossip = Substream(self.seed, STREAM_GOSSIP)

    def _by_id(self, stream_id: int) -> Substream:
        return (self.self_update, self.delivery, self.gossip)[stream_id]


class _KernelContext(threading.local):
    streams: EventStreams | None = None
    trace_chunks: list[tuple[np.ndarray, np.ndarray]] | None = None


ACTIVE = _KernelContext()


def kernel_refill(code: int) -> None:
    """Refill one buffer of the active run's streams (called from the kernel)."""
    stream = ACTIVE.streams._by_id(code >> 1)
    if code & 1:
        stream.refill_uni()
    else:
        stream.refill_exp()


def kernel_spill_trace(trace_k: np.ndarray, trace_v: np.ndarray, used: int) -> None:
    """Copy a full trace chunk out of the kernel so recording never truncates."""
    ACTIVE.trace_chunks.append((trace_k[:used].copy(), trace_v[:used].copy()))


class KernelBuffers:
    """View of an `EventStreams` as the flat arrays the jitted kernel takes.

    `cursors` holds the six buffer positions (stream-major: exp, uni). The
    kernel advances them in place; `sync_back` writes them into the Substream
    objects afterwards so Python-level consumers stay aligned.
    """

    __slots__ = ("streams", "cursors")

    def __init__(self, streams: EventStreams):
        self.streams = streams
        self.cursors = np.empty(6, dtype=np.int64)
        for sid in range(3):
            s = streams._by_id(sid)
            self.cursors[2 * sid] = s.exp_i
            self.cursors[2 * sid + 1] = s.uni_i

    def arrays(self) -> tuple[np.ndarray, ...]:
        s0, s1, s2 = (self.streams._by_id(i) for i in range(3))
        return (
            s0.exp_buf, s1.exp_buf, s1.uni_buf, s2.exp_buf, s2.uni_buf,
            self.cursors,
        )

    def sync_back(self) -> None:
        for sid in range(3):
            s = self.streams._by_id(sid)
            s.exp_i = int(self.cursors[2 * sid])
            s.uni_i = int(self.cursors[2 * sid + 1])
