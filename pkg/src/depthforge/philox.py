"""Counter-based random streams (Philox-4x32-10).

Every random draw in the engine is addressed, not sequenced: a value is a pure
function of (key, counter), where the key encodes the user seed and the counter
words encode (block, direction index, refinement, query index).  Generation is
therefore reproducible regardless of execution order, worker count, or how many
values any other consumer drew.

The generator is the 10-round Philox-4x32 of Salmon et al.'s Random123 suite;
`test_directions.py` pins the published test vectors.
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_LO32 = np.uint64(0xFFFFFFFF)

# 2^-53 and half of it: maps u64 -> double strictly inside (0, 1).
_INV53 = float(2.0**-53)
_HALF_ULP = 0.5


def philox4x32(counter: np.ndarray, key0: int, key1: int) -> np.ndarray:
    """Run Philox-4x32-10 on an array of counters.

    Parameters
    ----------
    counter : uint32 array of shape (4, n)
        Counter words c0..c3 for n independent blocks.
    key0, key1 : int
        The two 32-bit key words.

    Returns
    -------
    uint32 array of shape (4, n): the four output words per block.
    """
    x0 = counter[0].astype(np.uint64)
    x1 = counter[1].astype(np.uint64)
    x2 = counter[2].astype(np.uint64)
    x3 = counter[3].astype(np.uint64)
    k0 = int(key0) & 0xFFFFFFFF
    k1 = int(key1) & 0xFFFFFFFF
    for _ in range(10):
        p0 = x0 * _M0
        p1 = x2 * _M1
        hi0 = p0 >> np.uint64(32)
        lo0 = p0 & _LO32
        hi1 = p1 >> np.uint64(32)
        lo1 = p1 & _LO32
        x0 = hi1 ^ x1 ^ np.uint64(k0)
        x1 = lo1
        x2 = hi0 ^ x3 ^ np.uint64(k1)
        x3 = lo0
        k0 = (k0 + 0x9E3779B9) & 0xFFFFFFFF
        k1 = (k1 + 0xBB67AE85) & 0xFFFFFFFF
    out = np.empty((4, counter.shape[1]), dtype=np.uint32)
    out[0] = x0.astype(np.uint32)
    out[1] = x1.astype(np.uint32)
    out[2] = x2.astype(np.uint32)
    out[3] = x3.astype(np.uint32)
    return out


def split_key(seed: int) -> tuple[int, int]:
    """Reduce an arbitrary Python integer seed to the two Philox key words."""
    s = seed % (1 << 64)
    return s & 0xFFFFFFFF, s >> 32


def _philox_engine():
    """Compiled counter engine when the extension is built, else the numpy
    reference above; both produce identical words."""
    try:
        from ._core import _kernels

        return _kernels.philox4x32_words
    except ImportError:
        return philox4x32


_engine = _philox_engine()


def uniforms(
    seed: int,
    block: np.ndarray,
    index: np.ndarray,
    refinement: int,
    query: int,
) -> np.ndarray:
    """Addressed uniform doubles in the open interval (0, 1).

    Each (block, index, refinement, query) address is one Philox counter; the
    first two output words form the 64 bits behind the double.  `block` and
    `index` arrays must broadcast to the same shape.
    """
    block = np.asarray(block, dtype=np.uint32)
    index = np.asarray(index, dtype=np.uint32)
    block, index = np.broadcast_arrays(block, index)
    shape = block.shape
    counter = np.empty((4, block.size), dtype=np.uint32)
    counter[0] = block.ravel()
    counter[1] = index.ravel()
    counter[2] = refinement % (1 << 32)
    counter[3] = query % (1 << 32)
    key0, key1 = split_key(seed)
    words = _engine(counter, key0, key1)
    bits = words[0].astype(np.uint64) | (words[1].astype(np.uint64) << np.uint64(32))
    u = ((bits >> np.uint64(11)).astype(np.float64) + _HALF_ULP) * _INV53
    return u.reshape(shape)


def normals(
    seed: int,
    block: np.ndarray,
    index: np.ndarray,
    refinement: int,
    query: int,
) -> np.ndarray:
    """Addressed standard normals via the inverse normal CDF."""
    return ndtri(uniforms(seed, block, index, refinement, query))
