"""Pure-numpy walk kernel.

Fallback twin of the compiled kernel: consumes the identical per-trajectory
Philox streams, so hitting times agree bit-for-bit with the extension.  One
chunk of raw draws is turned into a prefix-xor path and tested against the
target set in a single vectorized pass; over-consuming draws past the hit is
harmless because every trajectory owns its stream.
"""
from __future__ import annotations

import numpy as np

from ..rng import DOMAIN_WALK, stream_state

CHUNK = 512


def _start_is_target(pos: int, sorted_targets: np.ndarray, bitmap) -> bool:
    if bitmap is not None:
        return bool(bitmap[pos])
    j = int(np.searchsorted(sorted_targets, pos))
    return j < sorted_targets.size and int(sorted_targets[j]) == pos


def run_trials(n, sorted_targets, bitmap, x0, seed, stream, trial_lo, trial_hi, cap):
    """Hitting steps for trajectories [trial_lo, trial_hi).

    Returns (steps, hit): steps[i] = min{k >= 1: Y(k) in target} for
    trajectory trial_lo + i, or cap when censored; steps = 0 with hit when
    the start itself is a target.
    """
    count = trial_hi - trial_lo
    steps = np.zeros(count, dtype=np.uint64)
    hit = np.zeros(count, dtype=bool)
    bg = np.random.Philox()
    nn = np.uint64(n)
    thirty_two = np.uint64(32)
    one = np.uint64(1)
    for i in range(count):
        bg.state = stream_state(seed, DOMAIN_WALK, (trial_lo + i, stream))
        pos = np.uint64(x0)
        if _start_is_target(int(pos), sorted_targets, bitmap):
            hit[i] = True
            continue
        base = 0
        while base < cap:
            ch = min(CHUNK, cap - base)
            raw = bg.random_raw(ch)
            coords = ((raw >> thirty_two) * nn) >> thirty_two
            flips = one << coords
            np.bitwise_xor.accumulate(flips, out=flips)
            path = pos ^ flips
            if bitmap is not None:
                on_target = bitmap[path.astype(np.int64)].view(bool)
            else:
                j = np.searchsorted(sorted_targets, path)
                inside = j < sorted_targets.size
                on_target = inside & (
                    sorted_targets[np.minimum(j, sorted_targets.size - 1)] == path
                )
            nz = np.nonzero(on_target)[0]
            if nz.size:
                steps[i] = base + int(nz[0]) + 1
                hit[i] = True
                break
            pos = path[-1]
            base += ch
        else:
            steps[i] = cap
    return steps, hit
