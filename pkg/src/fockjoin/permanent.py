"""Permanent-based transition amplitudes, kept independent of optics.apply_unitary.

This is the cross-checking oracle: the amplitude <out|U|in> for photons
propagating through a mode unitary equals the permanent of the matrix
built by repeating row i of u per input photon and column j per output
photon, divided by sqrt(prod in! prod out!). No code is shared with the
polynomial-expansion path so normalization bugs cannot cancel.
"""
from __future__ import annotations

import math
from itertools import permutations

import numpy as np


def permanent(mat: np.ndarray) -> complex:
    """Permanent by Ryser's formula (naive sum for n <= 3)."""
    mat = np.asarray(mat, dtype=complex)
    n = mat.shape[0]
    if mat.shape != (n, n):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1.0 + 0j
    if n <= 3:
        return complex(sum(math.prod(mat[i, p[i]] for i in range(n)) for p in permutations(range(n))))
    total = 0j
    for mask in range(1, 1 << n):
        cols = [j for j in range(n) if mask >> j & 1]
        prod = np.prod(np.sum(mat[:, cols], axis=1))
        total += (-1) ** (n - len(cols)) * prod
    return complex(total)


def transition_amplitude(u: np.ndarray, occ_in, occ_out) -> complex:
    """<occ_out | U | occ_in> for a+_i -> sum_j u[i, j] a+_j."""
    occ_in = tuple(occ_in)
    occ_out = tuple(occ_out)
    if sum(occ_in) != sum(occ_out):
        return 0j
    rows = [i for i, n in enumerate(occ_in) for _ in range(n)]
    cols = [j for j, n in enumerate(occ_out) for _ in range(n)]
    sub = np.asarray(u, dtype=complex)[np.ix_(rows, cols)]
    denom = math.sqrt(
        math.prod(math.factorial(n) for n in occ_in) * math.prod(math.factorial(n) for n in occ_out)
    )
    return permanent(sub) / denom
