""" Sequence utilities that control demand heterogeneity. """
from typing import Sequence
import numpy as np

MATCH = 2
MISMATCH = -1
GAP = -1


def smith_waterman(
        seq_a: Sequence[int],
        seq_b: Sequence[int],
        match: int = MATCH,
        mismatch: int = MISMATCH,
        gap: int = GAP
) -> int:
    """
    Compute the Smith-Waterman local alignment score of two content-id
    sequences with a linear gap penalty.

    The scoring matrix is filled one row at a time. Within a row the
    horizontal (gap) dependency is resolved with a running maximum, which
    is exact for linear gap penalties:
    H[i][j] = max_k (T[k] + (j - k) * gap), where T holds the diagonal,
    vertical and zero candidates.

    Args:
        seq_a (sequence): The first sequence of content ids.
        seq_b (sequence): The second sequence of content ids.
        match (int): Score of aligning two equal ids.
        mismatch (int): Score of aligning two different ids.
        gap (int): Score of a single gap (negative).

    Returns:
        int: The maximum local alignment score, 0 for empty input.
    """
    a = np.asarray(seq_a, dtype=np.int64)
    b = np.asarray(seq_b, dtype=np.int64)

    if a.size == 0 or b.size == 0:
        return 0

    cols = np.arange(b.size + 1, dtype=np.int64)
    prev = np.zeros(b.size + 1, dtype=np.int64)
    best = 0

    for symbol in a:
        substitution = np.where(b == symbol, match, mismatch)
        candidates = np.zeros(b.size + 1, dtype=np.int64)
        candidates[1:] = np.maximum(prev[:-1] + substitution, prev[1:] + gap)
        np.maximum(candidates, 0, out=candidates)

        row = np.maximum.accumulate(candidates - cols * gap) + cols * gap
        best = max(best, int(row.max()))
        prev = row

    return best


def smith_waterman_distance(seq_a: Sequence[int],
                            seq_b: Sequence[int]) -> float:
    """
    Normalized dissimilarity of two equally long sequences:
    1 - score / (MATCH * length). Identical sequences give 0.
    """
    length = max(len(seq_a), len(seq_b))
    if length == 0:
        return 0.0
    return 1.0 - smith_waterman(seq_a, seq_b) / (MATCH * length)
