"""
How often is a random plane quartic ordinary?
=============================================

Draw dense quartics from a seeded stream, keep the smooth ones, and compare the
Ulrich verdict for B^1(1) with invertibility of the 3x3 Hasse-Witt matrix.
"""

import numpy as np

from charp import hasse_witt, mat_rank, mat_stable_rank, random_plane_curve, ulrich_check_curve

for p in (3, 5, 7):
    ranks = []
    for seed in range(25):
        X = random_plane_curve(p, 4, seed)
        hw = hasse_witt(X)
        assert ulrich_check_curve(X).value == (mat_rank(hw) == 3)
        ranks.append(mat_stable_rank(hw))
    counts = np.bincount(ranks, minlength=4)
    print(f"p={p}  p-rank counts 0..3: {counts.tolist()}  ordinary fraction {counts[3] / 25:.2f}")
