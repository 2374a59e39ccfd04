"""Dense linear algebra over prime fields, used by search and simulation.

Rows are plain lists of ints reduced mod p; sizes here are small (windows and
coefficient blocks), so clarity beats bit-packing.
"""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple


def rref(rows: Sequence[Sequence[int]], p: int, ncols: Optional[int] = None):
    """Reduced row echelon form mod p.

    Returns (reduced rows, pivot column list).  If ncols is given, only the
    first ncols columns are pivot-eligible (trailing columns act as an
    augmented right-hand side).
    """
    work = [list(r) for r in rows]
    width = len(work[0]) if work else 0
    limit = width if ncols is None else ncols
    pivots: List[int] = []
    row = 0
    for col in range(limit):
        pivot = next((r for r in range(row, len(work)) if work[r][col] % p != 0), None)
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        inv = pow(work[row][col], -1, p)
        work[row] = [(x * inv) % p for x in work[row]]
        for r in range(len(work)):
            if r != row and work[r][col] % p != 0:
                factor = work[r][col]
                work[r] = [(a - factor * b) % p for a, b in zip(work[r], work[row])]
        pivots.append(col)
        row += 1
        if row == len(work):
            break
    return work[:row] + work[row:], pivots


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    _, pivots = rref(rows, p)
    return len(pivots)


def affine_consistent_rank(rows_aug: Sequence[Sequence[int]], p: int) -> Tuple[bool, int]:
    """For augmented rows [A | b]: (consistent, rank of A)."""
    reduced, pivots = rref(rows_aug, p, ncols=len(rows_aug[0]) - 1)
    for r in reduced:
        if all(x % p == 0 for x in r[:-1]) and r[-1] % p != 0:
            return False, len(pivots)
    return True, len(pivots)


def nullspace(rows: Sequence[Sequence[int]], ncols: int, p: int) -> List[List[int]]:
    """Basis of the right kernel of the matrix mod p."""
    if not rows:
        rows = [[0] * ncols]
    reduced, pivots = rref(rows, p)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    nonzero_rows = [r for r in reduced if any(x % p for x in r)]
    for f in free:
        vec = [0] * ncols
        vec[f] = 1
        for r, pc in zip(nonzero_rows, pivots):
            vec[pc] = (-r[f]) % p
        basis.append(vec)
    return basis
