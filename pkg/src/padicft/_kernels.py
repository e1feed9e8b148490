"""Hot enumeration kernels for direct-phase character sums.

Everything exact lives upstream: the kernels only enumerate residue
vectors y over a cube grid and emit one packed int64 key per point,

    key = (tailmask * a_span + a) * phase_mod + j,

where j is the phase index (psi(phase(y)) = zeta_{p^m}^j), ``a`` the
accumulated weight-valuation exponent, and ``tailmask`` marks coordinates
sitting in the zero class.  Keys are aggregated with exact integer counts
and turned into cyclotomic numbers by the caller, so the numba and numpy
paths are bit-identical by construction.

The numba path is used when available; set PADICFT_NO_NUMBA=1 to force the
pure-numpy fallback (the benchmark in benchmarks/ compares the two).
"""

from __future__ import annotations

import os

import numpy as np

_ENV_FLAG = "PADICFT_NO_NUMBA"

try:  # pragma: no cover - exercised indirectly
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover
    HAS_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore[misc]
        def wrap(f):
            return f

        return wrap if not (args and callable(args[0])) else args[0]


def using_numba() -> bool:
    return HAS_NUMBA and os.environ.get(_ENV_FLAG, "") not in ("1", "true", "yes")


@njit(cache=True)
def _direct_keys_jit(coeffs, exps, flat_vals, flat_a, flat_tail, offsets, lens, phase_mod, a_span):
    n = lens.shape[0]
    nterms = coeffs.shape[0]
    total = 1
    for i in range(n):
        total *= lens[i]
    keys = np.empty(total, dtype=np.int64)
    idx = np.zeros(n, dtype=np.int64)
    for pt in range(total):
        # decode mixed-radix point index
        rem = pt
        for i in range(n):
            idx[i] = rem % lens[i]
            rem //= lens[i]
        j = np.int64(0)
        for t in range(nterms):
            term = coeffs[t] % phase_mod
            for i in range(n):
                e = exps[t, i]
                if e > 0:
                    y = flat_vals[offsets[i] + idx[i]] % phase_mod
                    for _ in range(e):
                        term = (term * y) % phase_mod
            j = (j + term) % phase_mod
        a = np.int64(0)
        mask = np.int64(0)
        for i in range(n):
            pos = offsets[i] + idx[i]
            if flat_tail[pos] != 0:
                mask |= np.int64(1) << np.int64(i)
            else:
                a += flat_a[pos]
        keys[pt] = (mask * a_span + a) * phase_mod + j
    return keys


def _direct_keys_numpy(coeffs, exps, flat_vals, flat_a, flat_tail, offsets, lens, phase_mod, a_span):
    n = len(lens)
    total = int(np.prod(lens))
    grid = np.arange(total, dtype=np.int64)
    col_idx = []
    rem = grid
    for i in range(n):
        col_idx.append(rem % lens[i])
        rem = rem // lens[i]
    j = np.zeros(total, dtype=np.int64)
    for t in range(coeffs.shape[0]):
        term = np.full(total, coeffs[t] % phase_mod, dtype=np.int64)
        for i in range(n):
            e = int(exps[t, i])
            if e > 0:
                y = flat_vals[offsets[i] + col_idx[i]] % phase_mod
                for _ in range(e):
                    term = (term * y) % phase_mod
        j = (j + term) % phase_mod
    a = np.zeros(total, dtype=np.int64)
    mask = np.zeros(total, dtype=np.int64)
    for i in range(n):
        pos = offsets[i] + col_idx[i]
        tail = flat_tail[pos]
        a += np.where(tail != 0, 0, flat_a[pos])
        mask |= (tail != 0).astype(np.int64) << i
    return (mask * a_span + a) * phase_mod + j


def direct_keys(coeffs, exps, per_coord_vals, per_coord_a, per_coord_tail, phase_mod, a_span):
    """Packed keys for every grid point; dispatches numba vs numpy path."""
    lens = np.array([len(v) for v in per_coord_vals], dtype=np.int64)
    offsets = np.zeros(len(lens), dtype=np.int64)
    if len(lens) > 1:
        offsets[1:] = np.cumsum(lens)[:-1]
    flat_vals = np.concatenate([np.asarray(v, dtype=np.int64) for v in per_coord_vals])
    flat_a = np.concatenate([np.asarray(v, dtype=np.int64) for v in per_coord_a])
    flat_tail = np.concatenate([np.asarray(v, dtype=np.int64) for v in per_coord_tail])
    coeffs = np.asarray(coeffs, dtype=np.int64)
    exps = np.asarray(exps, dtype=np.int64).reshape(len(coeffs), len(lens))
    # key packing must stay inside int64
    bound = (1 << len(lens)) * a_span * phase_mod
    if bound >= 2**62:
        raise OverflowError("key packing exceeds int64 range")
    fn = _direct_keys_jit if using_numba() else _direct_keys_numpy
    return fn(
        coeffs,
        exps,
        flat_vals,
        flat_a,
        flat_tail,
        offsets,
        lens,
        np.int64(phase_mod),
        np.int64(a_span),
    )


def aggregate_keys(keys):
    """Unique keys with exact integer multiplicities."""
    uniq, counts = np.unique(keys, return_counts=True)
    return [(int(k), int(c)) for k, c in zip(uniq, counts)]
