"""Shared test utilities: random valid PDA generation and manual XOR."""

import itertools

from rainbowcc import schemes
from rainbowcc.kernels import xor_bytes


def random_pda(rng, K, F, Z):
    """Greedy-fill a random valid PDA with Z stars per column.

    Stars are placed first; every remaining cell then takes the smallest
    color that keeps the per-row/per-column and cross-star axioms, so the
    result always validates.
    """
    stars = set()
    for k in range(K):
        for f in rng.sample(range(F), Z):
            stars.add((f, k))
    grid = [[None] * K for _ in range(F)]
    cells = [(f, k) for f in range(F) for k in range(K) if (f, k) not in stars]
    rng.shuffle(cells)
    placed = {}
    for f, k in cells:
        c = 0
        while True:
            ok = all(grid[f][k2] != c for k2 in range(K)) and \
                 all(grid[f2][k] != c for f2 in range(F))
            if ok:
                for f2, k2 in placed.get(c, ()):
                    if (f, k2) not in stars or (f2, k) not in stars:
                        ok = False
                        break
            if ok:
                break
            c += 1
        grid[f][k] = c
        placed.setdefault(c, []).append((f, k))
    return schemes.pda_from_rows(grid)


def man_pda_by_subset_rule(K, t):
    """Independent oracle: rows are t-subsets, colors are (t+1)-subsets."""
    rows = list(itertools.combinations(range(1, K + 1), t))
    colors = {c: i for i, c in enumerate(itertools.combinations(range(1, K + 1),
                                                                t + 1))}
    grid = []
    for row in rows:
        cells = []
        for k in range(1, K + 1):
            if k in row:
                cells.append(None)
            else:
                cells.append(colors[tuple(sorted(row + (k,)))])
        grid.append(cells)
    return schemes.pda_from_rows(grid)


def xor_all(packets):
    acc = packets[0]
    for p in packets[1:]:
        acc = xor_bytes(acc, p)
    return acc
