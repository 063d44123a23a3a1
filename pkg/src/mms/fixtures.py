"""Reference schemes over the integers, reduced into GF(p) on request.

Both tables use the C^T = AB convention: the third matrix of each row is the
transpose of the coefficient matrix that distributes the product into C.
"""

from __future__ import annotations

from typing import List

from .scheme import Scheme

# Strassen 1969, products M1..M7
STRASSEN = [
    ([[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 0], [0, 1]]),
    ([[0, 0], [1, 1]], [[1, 0], [0, 0]], [[0, 1], [0, -1]]),
    ([[1, 0], [0, 0]], [[0, 1], [0, -1]], [[0, 0], [1, 1]]),
    ([[0, 0], [0, 1]], [[-1, 0], [1, 0]], [[1, 1], [0, 0]]),
    ([[1, 1], [0, 0]], [[0, 0], [0, 1]], [[-1, 0], [1, 0]]),
    ([[-1, 0], [1, 0]], [[1, 1], [0, 0]], [[0, 0], [0, 1]]),
    ([[0, 1], [0, -1]], [[0, 0], [1, 1]], [[1, 0], [0, 0]]),
]

# Strassen's scheme exactly as commonly tabulated with the C coefficient
# matrices untransposed (C = AB convention). Valid only over GF(2).
STRASSEN_TABLE_C = [
    ([[1, 0], [0, 1]], [[1, 0], [0, 1]], [[1, 0], [0, 1]]),
    ([[0, 0], [1, 1]], [[1, 0], [0, 0]], [[0, 0], [1, -1]]),
    ([[1, 0], [0, 0]], [[0, 1], [0, -1]], [[0, 1], [0, 1]]),
    ([[0, 0], [0, 1]], [[1, 0], [-1, 0]], [[1, 0], [1, 0]]),
    ([[1, 1], [0, 0]], [[0, 0], [0, 1]], [[-1, 1], [0, 0]]),
    ([[-1, 0], [1, 0]], [[1, 1], [0, 0]], [[0, 0], [0, 1]]),
    ([[0, 1], [0, -1]], [[0, 0], [1, 1]], [[1, 0], [0, 0]]),
]


def _flat(rows: str) -> List:
    out = []
    for line in rows.strip().splitlines():
        v = [int(x) for x in line.split()]
        out.append(tuple([v[k * 9 + 3 * i:k * 9 + 3 * i + 3] for i in range(3)] for k in range(3)))
    return out


# Laderman 1976, products m1..m23; each line is A, B, C^T row-major
LADERMAN = _flat("""
1 1 1 -1 -1 0 0 -1 -1 0 0 0 0 1 0 0 0 0 0 0 0 1 0 0 0 0 0
1 0 0 -1 0 0 0 0 0 0 -1 0 0 1 0 0 0 0 0 1 0 0 1 0 0 0 0
0 0 0 0 1 0 0 0 0 -1 1 0 1 -1 -1 -1 0 1 0 1 0 0 0 0 0 0 0
-1 0 0 1 1 0 0 0 0 1 -1 0 0 1 0 0 0 0 0 1 0 1 1 0 0 0 0
0 0 0 1 1 0 0 0 0 -1 1 0 0 0 0 0 0 0 0 0 0 1 1 0 0 0 0
1 0 0 0 0 0 0 0 0 1 0 0 0 0 0 0 0 0 1 1 1 1 1 0 1 0 1
-1 0 0 0 0 0 1 1 0 1 0 -1 0 0 1 0 0 0 0 0 1 0 0 0 1 0 1
-1 0 0 0 0 0 1 0 0 0 0 1 0 0 -1 0 0 0 0 0 1 0 0 0 0 0 1
0 0 0 0 0 0 1 1 0 -1 0 1 0 0 0 0 0 0 0 0 0 0 0 0 1 0 1
1 1 1 0 -1 -1 -1 -1 0 0 0 0 0 0 1 0 0 0 0 0 0 0 0 0 1 0 0
0 0 0 0 0 0 0 1 0 -1 0 1 1 -1 -1 -1 1 0 0 0 1 0 0 0 0 0 0
0 0 -1 0 0 0 0 1 1 0 0 0 0 1 0 1 -1 0 0 0 1 1 0 1 0 0 0
0 0 1 0 0 0 0 0 -1 0 0 0 0 1 0 0 -1 0 0 0 1 0 0 1 0 0 0
0 0 1 0 0 0 0 0 0 0 0 0 0 0 0 1 0 0 1 1 1 1 0 1 1 1 0
0 0 0 0 0 0 0 1 1 0 0 0 0 0 0 -1 1 0 0 0 0 1 0 1 0 0 0
0 0 -1 0 1 1 0 0 0 0 0 0 0 0 1 1 0 -1 0 1 0 0 0 0 1 1 0
0 0 1 0 0 -1 0 0 0 0 0 0 0 0 1 0 0 -1 0 1 0 0 0 0 0 1 0
0 0 0 0 1 1 0 0 0 0 0 0 0 0 0 -1 0 1 0 0 0 0 0 0 1 1 0
0 1 0 0 0 0 0 0 0 0 0 0 1 0 0 0 0 0 1 0 0 0 0 0 0 0 0
0 0 0 0 0 1 0 0 0 0 0 0 0 0 0 0 1 0 0 0 0 0 1 0 0 0 0
0 0 0 1 0 0 0 0 0 0 0 1 0 0 0 0 0 0 0 0 0 0 0 0 0 1 0
0 0 0 0 0 0 1 0 0 0 1 0 0 0 0 0 0 0 0 0 0 0 0 1 0 0 0
0 0 0 0 0 0 0 0 1 0 0 0 0 0 0 0 0 1 0 0 0 0 0 0 0 0 1
""")


def strassen(p: int = 2) -> Scheme:
    return Scheme.from_matrices(STRASSEN, p)


def laderman(p: int = 2) -> Scheme:
    return Scheme.from_matrices(LADERMAN, p)


def naive(n: int, p: int = 2) -> Scheme:
    """The n^3-row schoolbook scheme."""
    rows = []
    for i in range(n):
        for j in range(n):
            for k in range(n):
                a = [[int((x, y) == (i, k)) for y in range(n)] for x in range(n)]
                b = [[int((x, y) == (k, j)) for y in range(n)] for x in range(n)]
                c = [[int((x, y) == (j, i)) for y in range(n)] for x in range(n)]
                rows.append((a, b, c))
    return Scheme.from_matrices(rows, p)
