"""SU(2) representation bookkeeping on twice-integer spin labels.

All spins are passed around as twice their value (so spin 3/2 is the
int 3).  This keeps every label an exact integer and makes parity
checks trivial.  Nothing in here ever touches explicit recoupling
tensors; only dimensions and channel labels are needed.
"""

from __future__ import annotations


def dim_rep(twice_j: int) -> int:
    """Dimension 2j+1 of the spin-j irrep, j given as twice its value."""
    if twice_j < 0:
        raise ValueError(f"negative twice-spin {twice_j}")
    return twice_j + 1


def couple_range(twice_a: int, twice_b: int) -> range:
    """Twice-spins appearing in the tensor product of two irreps."""
    return range(abs(twice_a - twice_b), twice_a + twice_b + 1, 2)


def triangle_ok(twice_a: int, twice_b: int, twice_c: int) -> bool:
    """Triangle inequality + integer total spin for three irreps."""
    if (twice_a + twice_b + twice_c) % 2 != 0:
        return False
    return abs(twice_a - twice_b) <= twice_c <= twice_a + twice_b


def channel_spins(twice_js: tuple[int, int, int, int]) -> tuple[int, ...]:
    """Intermediate twice-spins of the (12)(34) recoupling channel.

    The channel spin k must appear both in j1 x j2 and in j3 x j4; the
    returned tuple is sorted increasingly and fixes the ordering of the
    intertwiner basis used everywhere else (block indices of the bulk
    state refer to this ordering).
    """
    j1, j2, j3, j4 = twice_js
    if any(j < 0 for j in twice_js):
        raise ValueError(f"negative twice-spin in {twice_js}")
    lo = max(abs(j1 - j2), abs(j3 - j4))
    hi = min(j1 + j2, j3 + j4)
    if (j1 + j2) % 2 != (j3 + j4) % 2:
        return ()
    # parity of k is fixed by j1+j2; start the scan on that parity
    if lo % 2 != (j1 + j2) % 2:
        lo += 1
    return tuple(range(lo, hi + 1, 2))


def intertwiner_dimension(twice_js: tuple[int, int, int, int]) -> int:
    """Dimension of the invariant subspace of a 4-valent vertex."""
    return len(channel_spins(twice_js))
