"""Dense n x n matrices over GF(p), encoded as integers.

A matrix is stored as a single base-p integer (its *code*). The digits are
laid out most-significant first in the order

    column n (top to bottom), column n-1 (top to bottom), ..., column 1

so comparing codes as integers is exactly the colexicographic column order
used for normal forms: the last column decides first, columns compare
lexicographically top to bottom, and 0 < 1 < ... < p-1 on entries.

:class:`MatSpace` does the arithmetic on codes and is what the hot paths
use. :class:`Mat` is a small value type wrapping a code for the public API.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

from .field import Field, FieldError

MAX_N = 5
DEFAULT_MAX_GL = 2 * 10**7
DEFAULT_MAX_NULLSPACE = 2**24


class CapExceeded(RuntimeError):
    """An enumeration would exceed a configured resource cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class SingularMatrix(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# linear algebra on row lists (used for ranks, inverses and nullspaces)


def rref(rows: List[List[int]], p: int, ncols: int) -> Tuple[List[List[int]], List[int]]:
    """Reduced row echelon form over GF(p). Returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(work)):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        prow = work[rank]
        s = pow(prow[col], -1, p)
        if s != 1:
            prow = work[rank] = [x * s % p for x in prow]
        for i in range(len(work)):
            if i != rank and work[i][col]:
                f = work[i][col]
                row = work[i]
                work[i] = [(x - f * y) % p for x, y in zip(row, prow)]
        pivots.append(col)
        rank += 1
        if rank == len(work):
            break
    return work[:rank], pivots


def nullspace(rows: List[List[int]], p: int, ncols: int) -> List[List[int]]:
    """Basis of {x : rows . x = 0} over GF(p)."""
    red, pivots = rref(rows, p, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, pc in zip(red, pivots):
            v[pc] = -r[f] % p
        basis.append(v)
    return basis


def gray_walk(basis: List[List[int]], p: int, length: int) -> Iterator[List[int]]:
    """Yield every vector of span(basis), each exactly once.

    Uses the modular p-ary Gray code: consecutive vectors differ by adding a
    single basis vector. The yielded list is reused; copy it if you keep it.
    """
    d = len(basis)
    vec = [0] * length
    yield vec
    if d == 0:
        return
    digits = [0] * d
    total = p**d
    for step in range(1, total):
        # lowest digit position k where step is not divisible by p**(k+1)
        k = 0
        s = step
        while s % p == 0:
            s //= p
            k += 1
        digits[k] = (digits[k] + 1) % p
        b = basis[k]
        for i in range(length):
            if b[i]:
                vec[i] = (vec[i] + b[i]) % p
        yield vec


# ---------------------------------------------------------------------------


class MatSpace:
    """Arithmetic on encoded n x n matrices over GF(p)."""

    def __init__(self, n: int, p: int):
        if not 1 <= n <= MAX_N:
            raise ValueError(f"matrix dimension {n} out of range 1..{MAX_N}")
        self.field = Field(p)
        self.n = n
        self.p = p
        self.nn = n * n
        # weights[i*n + j] is the place value of entry (i, j)
        order = [i * n + j for j in reversed(range(n)) for i in range(n)]
        self.weights = [0] * self.nn
        for k, flat in enumerate(order):
            self.weights[flat] = p ** (self.nn - 1 - k)
        self.order = order
        self.count = p**self.nn
        self.zero = 0
        self.identity = self.encode([1 if i == j else 0 for i in range(n) for j in range(n)])
        self._gl = None
        self._gl_lock = threading.Lock()
        self.decode = lru_cache(maxsize=1 << 16)(self._decode)
        self.rank = lru_cache(maxsize=1 << 16)(self._rank)
        self._inverse = lru_cache(maxsize=1 << 16)(self._inverse_uncached)

    def __repr__(self):
        return f"MatSpace(n={self.n}, p={self.p})"

    def gl_order(self) -> int:
        q = self.p**self.n
        out = 1
        for i in range(self.n):
            out *= q - self.p**i
        return out

    # -- coding ------------------------------------------------------------

    def encode(self, entries: Sequence[int]) -> int:
        p = self.p
        return sum((e % p) * w for e, w in zip(entries, self.weights))

    def _decode(self, code: int) -> Tuple[int, ...]:
        out = [0] * self.nn
        p = self.p
        for k in range(self.nn - 1, -1, -1):
            code, out[self.order[k]] = divmod(code, p)
        return tuple(out)

    def from_rows(self, rows: Sequence[Sequence[int]]) -> int:
        if len(rows) != self.n or any(len(r) != self.n for r in rows):
            raise ValueError(f"expected a {self.n}x{self.n} matrix")
        return self.encode([x for r in rows for x in r])

    def to_rows(self, code: int) -> List[List[int]]:
        e = self.decode(code)
        n = self.n
        return [list(e[i * n:(i + 1) * n]) for i in range(n)]

    def columns(self, code: int) -> List[Tuple[int, ...]]:
        e = self.decode(code)
        n = self.n
        return [tuple(e[i * n + j] for i in range(n)) for j in range(n)]

    def from_columns(self, cols: Sequence[Sequence[int]]) -> int:
        n = self.n
        return self.encode([cols[j][i] for i in range(n) for j in range(n)])

    # -- arithmetic --------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        # rebinds to the selected kernel's multiply on first use
        self.mul = self._kernel().mul
        return self.mul(a, b)

    def add(self, a: int, b: int) -> int:
        x = self.decode(a)
        y = self.decode(b)
        return self.encode([u + v for u, v in zip(x, y)])

    def scale(self, a: int, s: int) -> int:
        return self.encode([s * u for u in self.decode(a)])

    def transpose(self, a: int) -> int:
        e = self.decode(a)
        n = self.n
        return self.encode([e[j * n + i] for i in range(n) for j in range(n)])

    def _rank(self, a: int) -> int:
        return len(rref(self.to_rows(a), self.p, self.n)[0])

    def _inverse_uncached(self, a: int) -> int:
        n, p = self.n, self.p
        rows = self.to_rows(a)
        aug = [rows[i] + [1 if i == j else 0 for j in range(n)] for i in range(n)]
        red, pivots = rref(aug, p, n)
        if pivots != list(range(n)):
            raise SingularMatrix("singular matrix")
        return self.encode([x for r in red for x in r[n:]])

    def inverse(self, a: int) -> int:
        return self._inverse(a)

    def is_invertible(self, a: int) -> bool:
        return self.rank(a) == self.n

    # -- structure ---------------------------------------------------------

    def minimal_biequivalent(self, r: int) -> int:
        """Block matrix with I_r in the bottom-left corner, zeros elsewhere."""
        n = self.n
        if not 0 <= r <= n:
            raise ValueError(f"rank {r} out of range 0..{n}")
        e = [0] * self.nn
        for k in range(r):
            e[(n - r + k) * n + k] = 1
        return self.encode(e)

    def _in_span(self, basis: List[List[int]], v: Sequence[int]) -> bool:
        if not any(v):
            return True
        if not basis:
            return False
        return len(rref(basis + [list(v)], self.p, self.n)[0]) == len(rref(basis, self.p, self.n)[0])

    def _smallest_outside(self, space: List[List[int]], sub: List[List[int]]) -> List[int]:
        """Lexicographically smallest vector of span(space) not in span(sub)."""
        n, p = self.n, self.p
        space_red, space_piv = rref(space, p, n)
        prefix: List[int] = []
        for pos in range(n):
            for val in range(p):
                if self._slice_escapes(space_red, space_piv, sub, prefix + [val]):
                    prefix.append(val)
                    break
            else:  # pragma: no cover - the caller guarantees a solution exists
                raise AssertionError("no vector outside the subspace")
        return prefix

    def _slice_escapes(self, red, piv, sub, prefix) -> bool:
        """Does {x in span(red) : x starts with prefix} contain a vector outside span(sub)?"""
        n, p = self.n, self.p
        k = len(prefix)
        # points of span(red) are sum c_i red_i; fix the coordinates 0..k-1
        # x[j] = sum c_i red_i[j]; solve for c (affine system)
        m = len(red)
        system = [[red[i][j] for i in range(m)] + [prefix[j]] for j in range(k)]
        sred, spiv = rref(system, p, m + 1)
        if m in spiv:
            return False
        c0 = [0] * m
        for row, pc in zip(sred, spiv):
            c0[pc] = row[m]
        hom = [row[:m] for row in sred]
        free_dirs = nullspace(hom, p, m)
        point = [sum(c0[i] * red[i][j] for i in range(m)) % p for j in range(n)]
        if not self._in_span(sub, point):
            return True
        for d in free_dirs:
            vec = [sum(d[i] * red[i][j] for i in range(m)) % p for j in range(n)]
            if not self._in_span(sub, vec):
                return True
        return False

    def minimize_columns(self, b: int) -> Tuple[int, int]:
        """Return (bmin, t) with bmin = b . t minimal under column operations.

        Column r = rank(b) is the smallest nonzero vector of the column space,
        column j < r the smallest vector outside the span of columns j+1..r,
        and columns r+1..n are zero.
        """
        n, p = self.n, self.p
        cols = [list(c) for c in self.columns(b)]
        r = self.rank(b)
        chosen: List[List[int]] = []
        new_cols = [[0] * n for _ in range(n)]
        for j in range(r - 1, -1, -1):
            v = self._smallest_outside(cols, chosen)
            new_cols[j] = v
            chosen.append(v)
        bmin = self.from_columns(new_cols)
        # t: express the nonzero target columns through a basis of b's columns
        # and fill the remaining columns with a nullspace basis of b
        _, pivots = rref([[cols[j][i] for j in range(n)] for i in range(n)], p, n)
        t_cols = []
        for j in range(r):
            # solve sum_k x_k cols[pivots[k]] = new_cols[j]
            system = [[cols[pc][i] for pc in pivots] + [new_cols[j][i]] for i in range(n)]
            red, piv = rref(system, p, r + 1)
            x = [0] * r
            for row, pc in zip(red, piv):
                x[pc] = row[r]
            tc = [0] * n
            for k, pc in enumerate(pivots):
                tc[pc] = x[k]
            t_cols.append(tc)
        t_cols.extend(nullspace([[cols[j][i] for j in range(n)] for i in range(n)], p, n))
        return bmin, self.from_columns(t_cols)

    def _kernel(self):
        from .kernels import get_kernel

        return get_kernel(self.n, self.p)

    # -- group enumeration -------------------------------------------------

    def gl(self, cap: int = DEFAULT_MAX_GL) -> List[int]:
        """All invertible matrices in ascending order (cached)."""
        size = self.gl_order()
        if size > cap:
            raise CapExceeded("GL too large", size, cap)
        if self._gl is not None:
            return self._gl
        with self._gl_lock:
            if self._gl is None:
                self._gl = self._enumerate_gl()
        return self._gl

    def _enumerate_gl(self) -> List[int]:
        # build column by column: column j must avoid the span of columns j+1..n
        n, p = self.n, self.p
        vectors = [tuple(v) for v in _all_vectors(n, p)]
        out = []

        def extend(cols_right: List[Tuple[int, ...]]):
            if len(cols_right) == n:
                out.append(self.from_columns(list(reversed(cols_right))))
                return
            basis = [list(c) for c in cols_right]
            for v in vectors:
                if not self._in_span(basis, v):
                    extend(cols_right + [v])

        extend([])
        out.sort()
        return out

    def right_stabilizer(self, b: int, cap: int = DEFAULT_MAX_NULLSPACE) -> List[int]:
        """All invertible x with b . x = b, ascending."""
        n, p = self.n, self.p
        bd = self.decode(b)
        # unknown z (n x n, row-major), equations (b z)[i, j] = 0
        eqs = []
        for i in range(n):
            for j in range(n):
                row = [0] * self.nn
                for k in range(n):
                    row[k * n + j] = bd[i * n + k]
                eqs.append(row)
        basis = nullspace(eqs, p, self.nn)
        if p ** len(basis) > cap:
            raise CapExceeded("solution space too large", p ** len(basis), cap)
        found = self._kernel().invertible_in_span(self.decode(self.identity), basis, 1)
        return sorted(x for (x,) in found)

    def solve_sandwich(self, x: int, y: int, cap: int = DEFAULT_MAX_NULLSPACE) -> List[Tuple[int, int]]:
        """All invertible (v, w) with v . x . w^-1 = y, i.e. v . x = y . w."""
        n, p, nn = self.n, self.p, self.nn
        xd = self.decode(x)
        yd = self.decode(y)
        eqs = []
        for i in range(n):
            for j in range(n):
                row = [0] * (2 * nn)
                for k in range(n):
                    # (v x)[i, j] = sum_k v[i, k] x[k, j]
                    row[i * n + k] = (row[i * n + k] + xd[k * n + j]) % p
                    # -(y w)[i, j] = -sum_k y[i, k] w[k, j]
                    row[nn + k * n + j] = (row[nn + k * n + j] - yd[i * n + k]) % p
                eqs.append(row)
        basis = nullspace(eqs, p, 2 * nn)
        size = p ** len(basis)
        if size > cap:
            raise CapExceeded("solution space too large", size, cap)
        return sorted(self._kernel().invertible_in_span([0] * (2 * nn), basis, 2))


def _all_vectors(n: int, p: int) -> Iterator[List[int]]:
    from itertools import product

    for v in product(range(p), repeat=n):
        yield list(v)


_spaces: dict = {}
_spaces_lock = threading.Lock()


def space(n: int, p: int) -> MatSpace:
    key = (n, p)
    s = _spaces.get(key)
    if s is None:
        with _spaces_lock:
            s = _spaces.get(key)
            if s is None:
                s = _spaces[key] = MatSpace(n, p)
    return s


# ---------------------------------------------------------------------------
# public value type


@dataclass(frozen=True, order=False)
class Mat:
    n: int
    p: int
    code: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int) -> "Mat":
        n = len(rows)
        return cls(n, p, space(n, p).from_rows(rows))

    @classmethod
    def identity(cls, n: int, p: int) -> "Mat":
        return cls(n, p, space(n, p).identity)

    @classmethod
    def zero(cls, n: int, p: int) -> "Mat":
        return cls(n, p, 0)

    @property
    def space(self) -> MatSpace:
        return space(self.n, self.p)

    @property
    def rows(self) -> List[List[int]]:
        return self.space.to_rows(self.code)

    @property
    def entries(self) -> Tuple[int, ...]:
        return self.space.decode(self.code)

    @property
    def T(self) -> "Mat":
        return Mat(self.n, self.p, self.space.transpose(self.code))

    def _same(self, other: "Mat") -> None:
        if (self.n, self.p) != (other.n, other.p):
            raise ValueError(f"shape/field mismatch: {self.n}/{self.p} vs {other.n}/{other.p}")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._same(other)
        return Mat(self.n, self.p, self.space.mul(self.code, other.code))

    def __lt__(self, other: "Mat") -> bool:
        self._same(other)
        return self.code < other.code

    def __le__(self, other: "Mat") -> bool:
        self._same(other)
        return self.code <= other.code

    def __gt__(self, other: "Mat") -> bool:
        return other < self

    def __ge__(self, other: "Mat") -> bool:
        return other <= self

    def __repr__(self):
        return f"Mat({self.rows}, p={self.p})"


def mat_rank(m: Mat) -> int:
    return m.space.rank(m.code)


def mat_inverse(m: Mat) -> Mat:
    return Mat(m.n, m.p, m.space.inverse(m.code))


def mat_cmp(m: Mat, m2: Mat) -> int:
    m._same(m2)
    return (m.code > m2.code) - (m.code < m2.code)


def minimal_biequivalent(n: int, r: int, field: Field) -> Mat:
    if r > n:
        raise ValueError(f"rank {r} exceeds dimension {n}")
    return Mat(n, field.p, space(n, field.p).minimal_biequivalent(r))


def minimize_columns(b: Mat) -> Tuple[Mat, Mat]:
    bmin, t = b.space.minimize_columns(b.code)
    return Mat(b.n, b.p, bmin), Mat(b.n, b.p, t)


def enumerate_gl(n: int, field: Field, cap: int = DEFAULT_MAX_GL) -> List[Mat]:
    return [Mat(n, field.p, c) for c in space(n, field.p).gl(cap)]


def solve_sandwich(x: Mat, y: Mat, cap: int = DEFAULT_MAX_NULLSPACE) -> List[Tuple[Mat, Mat]]:
    x._same(y)
    s = x.space
    return [(Mat(x.n, x.p, v), Mat(x.n, x.p, w)) for v, w in s.solve_sandwich(x.code, y.code, cap)]


__all__ = [
    "CapExceeded",
    "FieldError",
    "Mat",
    "MatSpace",
    "SingularMatrix",
    "enumerate_gl",
    "mat_cmp",
    "mat_inverse",
    "mat_rank",
    "minimal_biequivalent",
    "minimize_columns",
    "nullspace",
    "rref",
    "solve_sandwich",
    "space",
]
