# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Bernoulli counting kernels (see ``_kernels_py`` for the contract)."""

from libc.stdint cimport uint64_t

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef uint64_t MIX1 = 0xBF58476D1CE4E5B9ULL
cdef uint64_t MIX2 = 0x94D049BB133111EBULL


cdef inline uint64_t _count(uint64_t seed, uint64_t start, uint64_t n,
                            uint64_t threshold) nogil:
    cdef uint64_t hits = 0
    cdef uint64_t state = seed + (start + 1) * GAMMA
    cdef uint64_t z
    cdef uint64_t i
    for i in range(n):
        z = state
        z = (z ^ (z >> 30)) * MIX1
        z = (z ^ (z >> 27)) * MIX2
        z = z ^ (z >> 31)
        if (z >> 11) < threshold:
            hits += 1
        state += GAMMA
    return hits


def count_below(seed, start, n, threshold):
    # threshold may equal 2**53, which still fits in uint64
    return int(_count(seed, start, n, threshold))


def batch_counts(seed, start, batch_size, thresholds):
    cdef uint64_t s = seed
    cdef uint64_t b = batch_size
    cdef uint64_t base = start
    cdef uint64_t j = 0
    out = []
    for t in thresholds:
        out.append(int(_count(s, base + j * b, b, t)))
        j += 1
    return out
