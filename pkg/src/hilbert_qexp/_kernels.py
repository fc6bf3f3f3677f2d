"""Hot integer kernels with a numba fast path and a pure-numpy fallback.

Set HILBERT_QEXP_DISABLE_NUMBA=1 to force the numpy path. Both paths feed the
same exact verification layer, so results are bit-identical either way; the
kernels only prefilter candidates (lattice box scans) or enumerate residue
tuples (norm-image oracle).
"""

import os

import numpy as np

DISABLE_NUMBA = os.environ.get("HILBERT_QEXP_DISABLE_NUMBA", "") not in ("", "0")

try:
    if DISABLE_NUMBA:
        raise ImportError("numba disabled by HILBERT_QEXP_DISABLE_NUMBA")
    from numba import njit
    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        if args and callable(args[0]):
            return args[0]
        return wrap


def _box_scan_numpy(emb, radii, tmax, margin):
    """Indices n in the integer box prod [-r_i, r_i] whose embedding images
    could be totally positive with trace <= tmax. Returns an int64 array of
    candidate coordinate rows."""
    g = len(radii)
    axes = [np.arange(-r, r + 1, dtype=np.int64) for r in radii]
    grids = np.meshgrid(*axes, indexing="ij")
    coords = np.stack([a.ravel() for a in grids], axis=1)
    x = coords.astype(np.float64) @ emb
    keep = np.all(x > -margin, axis=1) & (x.sum(axis=1) <= tmax + margin)
    keep &= np.any(coords != 0, axis=1)
    return coords[keep]


@njit(cache=True)
def _box_scan_numba_impl(emb, radii, tmax, margin):  # pragma: no cover - jit
    g = radii.shape[0]
    total = 1
    for i in range(g):
        total *= 2 * radii[i] + 1
    out = np.empty((total, g), dtype=np.int64)
    n = np.empty(g, dtype=np.int64)
    for i in range(g):
        n[i] = -radii[i]
    count = 0
    for _ in range(total):
        nonzero = False
        for i in range(g):
            if n[i] != 0:
                nonzero = True
        if nonzero:
            ok = True
            s = 0.0
            for j in range(g):
                xj = 0.0
                for i in range(g):
                    xj += n[i] * emb[i, j]
                if xj <= -margin:
                    ok = False
                    break
                s += xj
            if ok and s <= tmax + margin:
                for i in range(g):
                    out[count, i] = n[i]
                count += 1
        # odometer increment
        k = g - 1
        while k >= 0:
            n[k] += 1
            if n[k] <= radii[k]:
                break
            n[k] = -radii[k]
            k -= 1
    return out[:count]


def box_scan(emb, radii, tmax, margin):
    """Candidate lattice coordinates for the totally-positive enumeration.

    emb: g x g float64 matrix, row i = embedding values of basis vector i.
    """
    emb = np.asarray(emb, dtype=np.float64)
    radii_arr = np.asarray(radii, dtype=np.int64)
    if HAS_NUMBA:
        return _box_scan_numba_impl(emb, radii_arr, float(tmax), float(margin))
    return _box_scan_numpy(emb, radii_arr, float(tmax), float(margin))


def _norm_table_numpy(mul_tables, pn, g):
    """Norms of all residue vectors mod pn.

    mul_tables[i] is the g x g integer matrix of multiplication by basis
    vector i (mod pn). Returns a flat int64 array indexed by the base-pn
    encoding of the coordinate vector, entry = det of multiplication matrix
    mod pn (the ring norm).
    """
    total = pn ** g
    # coordinate columns, little-endian digits
    idx = np.arange(total, dtype=np.int64)
    digits = np.empty((total, g), dtype=np.int64)
    rest = idx.copy()
    for i in range(g):
        digits[:, i] = rest % pn
        rest //= pn
    # multiplication matrix per vector: sum_i c_i * mul_tables[i]; norm = det mod pn
    # determinant via fraction-free Gaussian elimination is awkward vectorized;
    # for g <= 3 expand explicitly.
    mats = np.zeros((total, g, g), dtype=np.int64)
    for i in range(g):
        mats += digits[:, i, None, None] * mul_tables[i][None, :, :]
    mats %= pn
    if g == 1:
        det = mats[:, 0, 0]
    elif g == 2:
        det = mats[:, 0, 0] * mats[:, 1, 1] - mats[:, 0, 1] * mats[:, 1, 0]
    elif g == 3:
        det = (mats[:, 0, 0] * (mats[:, 1, 1] * mats[:, 2, 2] - mats[:, 1, 2] * mats[:, 2, 1])
               - mats[:, 0, 1] * (mats[:, 1, 0] * mats[:, 2, 2] - mats[:, 1, 2] * mats[:, 2, 0])
               + mats[:, 0, 2] * (mats[:, 1, 0] * mats[:, 2, 1] - mats[:, 1, 1] * mats[:, 2, 0]))
    else:
        raise NotImplementedError("norm table kernel supports g <= 3")
    return det % pn


@njit(cache=True)
def _norm_table_numba_impl(mul_flat, pn, g):  # pragma: no cover - jit
    total = pn ** g
    out = np.empty(total, dtype=np.int64)
    mat = np.zeros((g, g), dtype=np.int64)
    digits = np.zeros(g, dtype=np.int64)
    for idx in range(total):
        rest = idx
        for i in range(g):
            digits[i] = rest % pn
            rest //= pn
        for r in range(g):
            for c in range(g):
                acc = 0
                for i in range(g):
                    acc += digits[i] * mul_flat[i, r, c]
                mat[r, c] = acc % pn
        if g == 1:
            det = mat[0, 0]
        elif g == 2:
            det = mat[0, 0] * mat[1, 1] - mat[0, 1] * mat[1, 0]
        else:
            det = (mat[0, 0] * (mat[1, 1] * mat[2, 2] - mat[1, 2] * mat[2, 1])
                   - mat[0, 1] * (mat[1, 0] * mat[2, 2] - mat[1, 2] * mat[2, 0])
                   + mat[0, 2] * (mat[1, 0] * mat[2, 1] - mat[1, 1] * mat[2, 0]))
        out[idx] = det % pn
    return out


def norm_table(mul_tables, pn, g):
    mul = np.asarray(mul_tables, dtype=np.int64) % pn
    if g > 3:
        raise NotImplementedError("norm table kernel supports g <= 3")
    if HAS_NUMBA:
        return _norm_table_numba_impl(mul, pn, g)
    return _norm_table_numpy(mul, pn, g)
