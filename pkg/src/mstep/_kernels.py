"""Bit-packed Boolean matrix kernels with a selectable backend.

Rows are packed little-endian into 64-bit words: bit j of a row sits in
word ``j >> 6`` at position ``j & 63``.  The hot kernel is the row-gather
multiply: row i of the Boolean product is the OR of the rows of ``b``
picked out by the set bits of row i of ``a``.

Two interchangeable implementations exist: a numba-compiled one (default
whenever numba imports) and a pure numpy one.  Set ``MSTEP_KERNELS`` to
``numba`` or ``numpy`` to force a backend; the choice is fixed at import
time.  ``mstep bench`` times all available implementations side by side.
"""

from __future__ import annotations

import os

import numpy as np

WORD_BITS = 64


def words_per_row(n: int) -> int:
    return (n + WORD_BITS - 1) // WORD_BITS


def pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack an (n, m) 0/1 array into (n, words_per_row(m)) uint64 rows."""
    dense = np.asarray(dense)
    n, m = dense.shape
    nw = words_per_row(m)
    padded = np.zeros((n, nw * WORD_BITS), dtype=np.uint8)
    padded[:, :m] = dense != 0
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view(np.uint64).reshape(n, nw)


def unpack_rows(words: np.ndarray, m: int) -> np.ndarray:
    """Inverse of pack_rows; returns an (n, m) uint8 array of 0/1."""
    as_bytes = np.ascontiguousarray(words).view(np.uint8)
    bits = np.unpackbits(as_bytes, axis=1, bitorder="little")
    return bits[:, :m]


def transpose_words(words: np.ndarray, n: int) -> np.ndarray:
    return pack_rows(unpack_rows(words, n).T)


def _mul_into_numpy(aw: np.ndarray, bw: np.ndarray, out: np.ndarray) -> np.ndarray:
    n = out.shape[0]
    bits = unpack_rows(aw, n)
    for i in range(n):
        sel = np.flatnonzero(bits[i])
        if sel.size:
            out[i, :] = np.bitwise_or.reduce(bw[sel, :], axis=0)
    return out


def _build_numba_mul():
    import numba

    @numba.njit(cache=True)
    def _mul_into_numba(aw, bw, out):
        n = out.shape[0]
        nw = aw.shape[1]
        zero = np.uint64(0)
        one = np.uint64(1)
        for i in range(n):
            for wi in range(nw):
                chunk = aw[i, wi]
                base = wi << 6
                bit = 0
                while chunk != zero:
                    if (chunk & one) != zero:
                        row = base + bit
                        for w in range(nw):
                            out[i, w] |= bw[row, w]
                    chunk = chunk >> one
                    bit += 1
        return out

    return _mul_into_numba


def _discover():
    impls = {"numpy": _mul_into_numpy}
    try:
        impls["numba"] = _build_numba_mul()
    except ImportError:
        pass
    return impls


MUL_IMPLS = _discover()

_choice = os.environ.get("MSTEP_KERNELS", "auto").strip().lower() or "auto"
if _choice == "auto":
    BACKEND = "numba" if "numba" in MUL_IMPLS else "numpy"
elif _choice in MUL_IMPLS:
    BACKEND = _choice
else:
    raise ImportError(
        f"MSTEP_KERNELS={_choice!r} is not available; choices: {sorted(MUL_IMPLS)}"
    )

mul_into = MUL_IMPLS[BACKEND]
