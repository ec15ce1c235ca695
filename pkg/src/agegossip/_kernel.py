"""Jitted event loop for full simulation runs.

The kernel walks the event timeline for one run: per interval it draws the
next self-update time, resolves the scheme's phases, and processes source
deliveries and gossip transmissions as competing exponential clocks redrawn
fresh at every phase boundary. Random values come from the pre-filled
substream buffers; exhausted buffers are refilled in bulk through an objmode
callback, so the value sequence is identical to what the pure-Python interval
operations consume.

Age accounting is lazy: each node stores its age as of its last touch plus
the number of global self-updates since then (S and W are the running count
and time-sum of self-updates), so a self-update costs O(1) instead of O(n).

Tie-breaking between simultaneous clocks follows a fixed priority: self-update
(phase boundary), then source delivery, then gossip.
"""

from __future__ import annotations

from numba import njit, objmode

from ._streams import kernel_refill, kernel_spill_trace  # noqa: F401  (objmode)

INF = float("inf")

# cursor indices into the 6-slot cursor array (stream-major: exp, uni)
_C_SELF_EXP = 0
_C_DEL_EXP = 2
_C_DEL_UNI = 3
_C_GOS_EXP = 4
_C_GOS_UNI = 5

# out[] slots
OUT_DELIVERIES = 0
OUT_GOSSIP = 1
OUT_SUPPRESSED = 2
OUT_INTERVALS = 3
OUT_TRACE_USED = 4
OUT_SELF_UPDATES = 5
OUT_FLUSH_PENDING = 6

SCHEME_NOGOSSIP = 0
SCHEME_ASUMAN = 1
SCHEME_UNIFORM = 2


@njit(cache=True)
def _draw(buf, cursors, ci, code):
    i = cursors[ci]
    if i >= buf.shape[0]:
        with objmode():
            kernel_refill(code)
        i = 0
    cursors[ci] = i + 1
    return buf[i]


@njit(cache=True)
def _touch(b, lt, S_r, W_r, integ, r, te, S, W):
    dS = S - S_r[r]
    integ[r] += b[r] * (te - lt[r]) + dS * te - (W - W_r[r])
    b[r] += dS
    S_r[r] = S
    W_r[r] = W
    lt[r] = te


@njit(cache=True)
def _touch_all(b, lt, S_r, W_r, integ, n, x, S, W):
    for r in range(n):
        _touch(b, lt, S_r, W_r, integ, r, x, S, W)


@njit(cache=True)
def _maybe_flush(b, lt, S_r, W_r, integ, n, te, S, W, warmup_t, out):
    # First checkpoint at or past the warm-up boundary: close the pre-window
    # integrals and restart accumulation from the boundary.
    if out[OUT_FLUSH_PENDING] == 1 and te >= warmup_t:
        _touch_all(b, lt, S_r, W_r, integ, n, warmup_t, S, W)
        for r in range(n):
            integ[r] = 0.0
        out[OUT_FLUSH_PENDING] = 0


@njit(cache=True)
def _phase(raw, b, lt, S_r, W_r, integ, n, S, W, lo, hi, lam, G,
           members, m, uniform_sender,
           e1, u1, e2, u2, cursors, out, warmup_t):
    """Process deliveries (rate lam) and gossip (total rate G) over [lo, hi)."""
    if hi <= lo:
        return
    if lam > 0.0:
        next_del = lo + _draw(e1, cursors, _C_DEL_EXP, 2) / lam
    else:
        next_del = INF
    has_gossip = G > 0.0 and m >= 1 and n >= 2
    if has_gossip:
        next_gos = lo + _draw(e2, cursors, _C_GOS_EXP, 4) / G
    else:
        next_gos = INF
    while True:
        if next_del <= next_gos:
            if next_del >= hi:
                break
            te = next_del
            u = _draw(u1, cursors, _C_DEL_UNI, 3)
            r = int(u * n)
            if r >= n:
                r = n - 1
            _maybe_flush(b, lt, S_r, W_r, integ, n, te, S, W, warmup_t, out)
            _touch(b, lt, S_r, W_r, integ, r, te, S, W)
            raw[r] = -S
            b[r] = 0
            out[OUT_DELIVERIES] += 1
            next_del = te + _draw(e1, cursors, _C_DEL_EXP, 2) / lam
        else:
            if next_gos >= hi:
                break
            te = next_gos
            us = _draw(u2, cursors, _C_GOS_UNI, 5)
            ur = _draw(u2, cursors, _C_GOS_UNI, 5)
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
            out[OUT_GOSSIP] += 1
            _maybe_flush(b, lt, S_r, W_r, integ, n, te, S, W, warmup_t, out)
            if raw[r] > raw[s_node]:
                _touch(b, lt, S_r, W_r, integ, r, te, S, W)
                raw[r] = raw[s_node]
                b[r] = raw[s_node] + S
            next_gos = te + _draw(e2, cursors, _C_GOS_EXP, 4) / G


@njit(cache=True)
def run_kernel(n, lam_e, lam, B, scheme, c_coeff, horizon, warmup_t, do_trace,
               raw, b, lt, S_r, W_r, integ, members,
               e0, e1, u1, e2, u2, cursors,
               trace_k, trace_v, out):
    t = 0.0
    S = 0
    W = 0.0
    trace_cap = trace_k.shape[0]
    while True:
        tau = _draw(e0, cursors, _C_SELF_EXP, 0) / lam_e
        t_next = t + tau
        truncated = t_next >= horizon
        t_end = horizon if truncated else t_next

        m = 0
        min_raw = 0
        if scheme == SCHEME_ASUMAN or do_trace:
            min_raw = raw[0]
            for i in range(1, n):
                if raw[i] < min_raw:
                    min_raw = raw[i]
            if scheme == SCHEME_ASUMAN:
                for i in range(n):
                    if raw[i] == min_raw:
                        members[m] = i
                        m += 1
            if do_trace and S >= 1:
                if out[OUT_TRACE_USED] >= trace_cap:
                    used = out[OUT_TRACE_USED]
                    with objmode():
                        kernel_spill_trace(trace_k, trace_v, used)
                    out[OUT_TRACE_USED] = 0
                trace_k[out[OUT_TRACE_USED]] = S
                trace_v[out[OUT_TRACE_USED]] = min_raw + S
                out[OUT_TRACE_USED] += 1

        if scheme == SCHEME_ASUMAN:
            # Back-off counts the minimum age as of just before this
            # interval's opening self-update (left limit at the epoch).
            backoff_age = min_raw + S - 1
            if backoff_age < 0:
                backoff_age = 0
            backoff = c_coeff * backoff_age
            sense_end = t + backoff
            if sense_end > t_end:
                sense_end = t_end
            _phase(raw, b, lt, S_r, W_r, integ, n, S, W, t, sense_end,
                   lam, 0.0, members, 0, False,
                   e1, u1, e2, u2, cursors, out, warmup_t)
            _phase(raw, b, lt, S_r, W_r, integ, n, S, W, sense_end, t_end,
                   lam, B, members, m, False,
                   e1, u1, e2, u2, cursors, out, warmup_t)
            out[OUT_SUPPRESSED] += n - m
        elif scheme == SCHEME_UNIFORM:
            _phase(raw, b, lt, S_r, W_r, integ, n, S, W, t, t_end,
                   lam, B, members, n, True,
                   e1, u1, e2, u2, cursors, out, warmup_t)
        else:
            _phase(raw, b, lt, S_r, W_r, integ, n, S, W, t, t_end,
                   lam, 0.0, members, 0, False,
                   e1, u1, e2, u2, cursors, out, warmup_t)
        out[OUT_INTERVALS] += 1
        t = t_end
        if truncated:
            break
        _maybe_flush(b, lt, S_r, W_r, integ, n, t, S, W, warmup_t, out)
        S += 1
        W += t
        out[OUT_SELF_UPDATES] += 1

    if out[OUT_FLUSH_PENDING] == 1:
        _touch_all(b, lt, S_r, W_r, integ, n, warmup_t, S, W)
        for r in range(n):
            integ[r] = 0.0
        out[OUT_FLUSH_PENDING] = 0
    _touch_all(b, lt, S_r, W_r, integ, n, horizon, S, W)
