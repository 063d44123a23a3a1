"""Matrix multiplication schemes: data model, Brent equations, rank patterns, I/O.

A scheme with ``r`` rows is a list of triples ``(A, B, C)`` of n x n matrices
over GF(p). It is valid when

    sum_l A_l (x) B_l (x) C_l  =  sum_{i,j,k} E_ik (x) E_kj (x) E_ji,

the tensor of the product C^T = A B. Schemes written for the usual
C = A B tensor become valid here after transposing every C.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .field import Field, FieldError
from .matrix import Mat, MatSpace, space

RowCodes = Tuple[int, int, int]

# column symmetries in a fixed order; perm[i] is the destination of column i
COLUMN_PERMS: Tuple[Tuple[int, int, int], ...] = tuple(permutations(range(3)))


def perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class Row:
    a: Mat
    b: Mat
    c: Mat

    def __post_init__(self):
        if not ((self.a.n, self.a.p) == (self.b.n, self.b.p) == (self.c.n, self.c.p)):
            raise ValueError("row matrices must share dimension and field")

    @property
    def codes(self) -> RowCodes:
        return (self.a.code, self.b.code, self.c.code)

    @classmethod
    def from_codes(cls, n: int, p: int, codes: Sequence[int]) -> "Row":
        a, b, c = codes
        return cls(Mat(n, p, a), Mat(n, p, b), Mat(n, p, c))


@dataclass(frozen=True)
class ColumnSymmetry:
    """A permutation of the three columns; odd permutations also transpose."""

    pi: Tuple[int, int, int]

    @property
    def transpose(self) -> bool:
        return perm_sign(self.pi) < 0

    def __str__(self):
        return "pi=" + "".join(str(x + 1) for x in self.pi) + (" (transposed)" if self.transpose else "")


@dataclass(frozen=True)
class Scheme:
    """An r x 3 table of n x n matrices over GF(p), stored as matrix codes."""

    n: int
    p: int
    rows: Tuple[RowCodes, ...]

    def __post_init__(self):
        Field(self.p)
        if not self.rows:
            raise ValueError("a scheme needs at least one row")
        limit = self.p ** (self.n * self.n)
        for row in self.rows:
            if len(row) != 3 or any(not 0 <= x < limit for x in row):
                raise ValueError(f"bad row {row!r}")

    @classmethod
    def from_matrices(cls, rows: Iterable[Sequence[Sequence[Sequence[int]]]], p: int) -> "Scheme":
        """Build from nested lists ``[[A, B, C], ...]``; entries are reduced mod p."""
        rows = list(rows)
        n = len(rows[0][0])
        s = space(n, p)
        return cls(n, p, tuple(tuple(s.from_rows(m) for m in row) for row in rows))

    @property
    def r(self) -> int:
        return len(self.rows)

    @property
    def field(self) -> Field:
        return Field(self.p)

    @property
    def space(self) -> MatSpace:
        return space(self.n, self.p)

    def row(self, i: int) -> Row:
        return Row.from_codes(self.n, self.p, self.rows[i])

    def matrix(self, i: int, j: int) -> Mat:
        return Mat(self.n, self.p, self.rows[i][j])

    def to_lists(self) -> List[List[List[List[int]]]]:
        s = self.space
        return [[s.to_rows(m) for m in row] for row in self.rows]

    def with_rows(self, rows: Iterable[RowCodes]) -> "Scheme":
        return Scheme(self.n, self.p, tuple(tuple(r) for r in rows))

    def _same_shape(self, other: "Scheme") -> None:
        if (self.n, self.r, self.p) != (other.n, other.r, other.p):
            raise ValueError(
                f"shape mismatch: (n={self.n}, r={self.r}, p={self.p}) vs "
                f"(n={other.n}, r={other.r}, p={other.p})"
            )

    def __lt__(self, other: "Scheme") -> bool:
        self._same_shape(other)
        return self.rows < other.rows

    def __le__(self, other: "Scheme") -> bool:
        self._same_shape(other)
        return self.rows <= other.rows

    def __str__(self):
        return serialize(self)


def scheme_cmp(s: Scheme, s2: Scheme) -> int:
    """Row by row, each row compared a, then b, then c."""
    s._same_shape(s2)
    return (s.rows > s2.rows) - (s.rows < s2.rows)


# ---------------------------------------------------------------------------
# Brent equations


@lru_cache(maxsize=None)
def _target_tensor(n: int) -> np.ndarray:
    t = np.zeros((n,) * 6, dtype=np.int64)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                t[i, k, k, j, j, i] = 1
    return t


def scheme_tensor(s: Scheme) -> np.ndarray:
    """The tensor sum_l A_l (x) B_l (x) C_l, reduced mod p, shape (n,)*6."""
    n = s.n
    mats = np.array([[s.space.decode(m) for m in row] for row in s.rows], dtype=np.int64)
    mats = mats.reshape(s.r, 3, n, n)
    t = np.einsum("lab,lcd,lef->abcdef", mats[:, 0], mats[:, 1], mats[:, 2])
    return t % s.p


def verify(s: Scheme) -> bool:
    return bool(np.array_equal(scheme_tensor(s), _target_tensor(s.n)))


# ---------------------------------------------------------------------------
# rank patterns


def rank_vector(sp: MatSpace, row: RowCodes) -> Tuple[int, int, int]:
    return (sp.rank(row[0]), sp.rank(row[1]), sp.rank(row[2]))


def rank_pattern(s: Scheme) -> Tuple[Tuple[int, int, int], ...]:
    sp = s.space
    return tuple(rank_vector(sp, row) for row in s.rows)


def permute_vector(vec: Sequence, pi: Sequence[int]) -> tuple:
    out = [None] * 3
    for i in range(3):
        out[pi[i]] = vec[i]
    return tuple(out)


def sorted_pattern(pattern: Iterable[Tuple[int, int, int]]) -> Tuple[Tuple[int, int, int], ...]:
    """Rows in non-increasing lexicographic order: the maximizing row order."""
    return tuple(sorted(pattern, reverse=True))


def maximal_pattern(s: Scheme) -> Tuple[Tuple[Tuple[int, int, int], ...], List[ColumnSymmetry]]:
    """The lexicographically largest sorted rank pattern and the column symmetries attaining it."""
    pattern = rank_pattern(s)
    best = None
    winners: List[ColumnSymmetry] = []
    for pi in COLUMN_PERMS:
        cand = sorted_pattern(permute_vector(v, pi) for v in pattern)
        if best is None or cand > best:
            best, winners = cand, [ColumnSymmetry(pi)]
        elif cand == best:
            winners.append(ColumnSymmetry(pi))
    return best, winners


def sorted_pattern_symmetries(s: Scheme) -> List[ColumnSymmetry]:
    return maximal_pattern(s)[1]


def permute_columns(s: Scheme, sym: ColumnSymmetry) -> Scheme:
    """Move column i to position pi[i], transposing everything if pi is odd."""
    sp = s.space
    tr = sym.transpose
    rows = []
    for row in s.rows:
        src = [sp.transpose(m) for m in row] if tr else row
        rows.append(permute_vector(src, sym.pi))
    return s.with_rows(rows)


def zero_rows(s: Scheme) -> List[int]:
    """Indices of rows whose three matrices are all zero (a lint, not a validity test)."""
    return [i for i, row in enumerate(s.rows) if row == (0, 0, 0)]


def transpose_c(s: Scheme) -> Scheme:
    """Switch between the C = AB and C^T = AB conventions."""
    sp = s.space
    return s.with_rows((a, b, sp.transpose(c)) for a, b, c in s.rows)


# ---------------------------------------------------------------------------
# text format
#
#   scheme <n> <r> <p>
#   <3 n^2 integers: A row-major, B row-major, C row-major>   (r lines)
#
# Blank lines and lines starting with '#' are skipped on input.


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.source = source


def _tokens(line: str) -> List[Tuple[str, int]]:
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def parse(text: str, source: str = "<input>") -> List[Scheme]:
    lines = text.split("\n")
    schemes: List[Scheme] = []
    header = None
    pending: List[RowCodes] = []

    def fail(msg, ln, col):
        raise ParseError(msg, ln, col, source)

    def as_int(tok, ln, col):
        try:
            return int(tok)
        except ValueError:
            fail(f"expected an integer, got {tok!r}", ln, col)

    for ln, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = _tokens(line)
        if header is None:
            if toks[0][0] != "scheme":
                fail("expected header 'scheme <n> <r> <p>'", ln, toks[0][1])
            if len(toks) != 4:
                fail(f"header needs 3 numbers, got {len(toks) - 1}", ln, toks[0][1])
            n, r, p = (as_int(t, ln, c) for t, c in toks[1:])
            if not 1 <= n <= 5:
                fail(f"dimension {n} out of range 1..5", ln, toks[1][1])
            if r < 1:
                fail(f"row count {r} must be positive", ln, toks[2][1])
            try:
                Field(p)
            except FieldError as e:
                fail(str(e), ln, toks[3][1])
            header = (n, r, p, space(n, p))
            pending = []
            continue
        n, r, p, sp = header
        if toks[0][0] == "scheme":
            fail(f"expected {r} rows, found {len(pending)} before the next header", ln, toks[0][1])
        want = 3 * n * n
        if len(toks) != want:
            col = toks[want][1] if len(toks) > want else len(line) + 1
            fail(f"expected {want} entries, got {len(toks)}", ln, col)
        vals = []
        for tok, col in toks:
            v = as_int(tok, ln, col)
            if not 0 <= v < p:
                fail(f"entry {v} not in [0, {p})", ln, col)
            vals.append(v)
        nn = n * n
        pending.append(tuple(sp.encode(vals[k * nn:(k + 1) * nn]) for k in range(3)))
        if len(pending) == r:
            schemes.append(Scheme(n, p, tuple(pending)))
            header = None
    if header is not None:
        fail(f"expected {header[1]} rows, found {len(pending)}", len(lines), 1)
    return schemes


def serialize(s: Scheme) -> str:
    sp = s.space
    out = [f"scheme {s.n} {s.r} {s.p}"]
    for row in s.rows:
        vals = [x for m in row for x in sp.decode(m)]
        out.append(" ".join(map(str, vals)))
    return "\n".join(out) + "\n"


def serialize_many(schemes: Iterable[Scheme]) -> str:
    return "".join(serialize(s) for s in schemes)


def canonical_digest(s: Scheme) -> bytes:
    return hashlib.sha256(serialize(s).encode("ascii")).digest()


# ---------------------------------------------------------------------------
# structured (JSON) format


def to_json_obj(s: Scheme) -> dict:
    sp = s.space
    return {
        "field": s.p,
        "n": s.n,
        "r": s.r,
        "rows": [{k: sp.to_rows(m) for k, m in zip("abc", row)} for row in s.rows],
    }


def from_json_obj(obj: dict) -> Scheme:
    try:
        p, n, r, rows = obj["field"], obj["n"], obj["r"], obj["rows"]
    except (KeyError, TypeError) as e:
        raise ValueError(f"missing key {e}") from None
    Field(p)
    if len(rows) != r:
        raise ValueError(f"r = {r} but {len(rows)} rows given")
    sp = space(n, p)
    out = []
    for i, row in enumerate(rows):
        codes = []
        for k in "abc":
            m = row[k]
            if len(m) != n or any(len(x) != n for x in m):
                raise ValueError(f"row {i + 1}, matrix {k}: expected {n}x{n}")
            if any(not (isinstance(x, int) and 0 <= x < p) for line in m for x in line):
                raise ValueError(f"row {i + 1}, matrix {k}: entries must be integers in [0, {p})")
            codes.append(sp.from_rows(m))
        out.append(tuple(codes))
    return Scheme(n, p, tuple(out))


def dumps_json(s: Scheme) -> str:
    return json.dumps(to_json_obj(s), sort_keys=True) + "\n"


def loads_json(text: str) -> Scheme:
    return from_json_obj(json.loads(text))


def load_text_or_json(text: str, source: str = "<input>", as_json: Optional[bool] = None) -> List[Scheme]:
    if as_json is None:
        as_json = text.lstrip().startswith("{")
    if as_json:
        return [loads_json(text)]
    return parse(text, source)
