#cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled walk kernel.

Pulls raw 64-bit words straight from a Philox bit generator through the
numpy C capsule and steps the walk one flip at a time without leaving C.
Stream addressing is identical to the numpy fallback (per-trajectory counter
blocks), so both backends return bit-identical hitting times.
"""
import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from numpy.random cimport bitgen_t

cnp.import_array()

MASK64 = 0xFFFFFFFFFFFFFFFF
DOMAIN_WALK = 0x3A1C


def run_trials(Py_ssize_t n, object sorted_targets, object bitmap,
               object x0, object seed, object stream,
               object trial_lo, object trial_hi, object cap):
    cdef unsigned long long lo = int(trial_lo)
    cdef unsigned long long hi = int(trial_hi)
    cdef unsigned long long cap_c = int(cap)
    cdef unsigned long long x0_c = int(x0)
    cdef unsigned long long stream_c = int(stream)
    cdef Py_ssize_t count = <Py_ssize_t> (hi - lo)

    steps_arr = np.zeros(count, dtype=np.uint64)
    hit_arr = np.zeros(count, dtype=np.uint8)
    cdef cnp.uint64_t[::1] steps = steps_arr
    cdef cnp.uint8_t[::1] hit = hit_arr

    cdef bint use_bitmap = bitmap is not None
    cdef const cnp.uint8_t[::1] bm
    cdef const cnp.uint64_t[::1] st
    if use_bitmap:
        bm = bitmap
        st = np.empty(0, dtype=np.uint64)
    else:
        st = np.ascontiguousarray(sorted_targets, dtype=np.uint64)
        bm = np.empty(0, dtype=np.uint8)
    cdef unsigned long long n_targets = <unsigned long long> st.shape[0]

    philox = np.random.Philox()
    cdef bitgen_t *rng = <bitgen_t *> PyCapsule_GetPointer(philox.capsule, "BitGenerator")
    counter = np.zeros(4, dtype=np.uint64)
    counter[2] = stream_c
    key = np.array([int(seed) & MASK64, DOMAIN_WALK], dtype=np.uint64)
    state = {
        "bit_generator": "Philox",
        "state": {"counter": counter, "key": key},
        "buffer": np.zeros(4, dtype=np.uint64),
        "buffer_pos": 4,
        "has_uint32": 0,
        "uinteger": 0,
    }

    cdef Py_ssize_t i
    cdef unsigned long long nn = <unsigned long long> n
    cdef unsigned long long pos, u, c, hit_step, lo_s, hi_s, mid
    cdef bint member

    for i in range(count):
        counter[1] = lo + <unsigned long long> i
        philox.state = state  # re-seats the generator on this trajectory's stream

        pos = x0_c
        if use_bitmap:
            member = bm[pos] != 0
        else:
            member = _bsearch(st, n_targets, pos)
        if member:
            hit[i] = 1
            continue

        hit_step = 0
        with nogil:
            for c in range(1, cap_c + 1):
                u = rng.next_uint64(rng.state)
                pos ^= (<unsigned long long> 1) << (((u >> 32) * nn) >> 32)
                if use_bitmap:
                    if bm[pos] != 0:
                        hit_step = c
                        break
                else:
                    lo_s = 0
                    hi_s = n_targets
                    while lo_s < hi_s:
                        mid = (lo_s + hi_s) >> 1
                        if st[mid] < pos:
                            lo_s = mid + 1
                        else:
                            hi_s = mid
                    if lo_s < n_targets and st[lo_s] == pos:
                        hit_step = c
                        break
        if hit_step:
            steps[i] = hit_step
            hit[i] = 1
        else:
            steps[i] = cap_c
    return steps_arr, hit_arr.view(bool)


cdef inline bint _bsearch(const cnp.uint64_t[::1] st, unsigned long long n_targets,
                          unsigned long long pos) noexcept nogil:
    cdef unsigned long long lo = 0, hi = n_targets, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if st[mid] < pos:
            lo = mid + 1
        else:
            hi = mid
    return lo < n_targets and st[lo] == pos
