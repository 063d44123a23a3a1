"""The symmetry group S_r x S_3 x| GL(n)^3 and its action on schemes.

Permutations act on positions: ``perm[i]`` is where item ``i`` goes, and
``(s1 * s2)[i] = s1[s2[i]]``. An element ``(sigma, pi, (U, V, W))`` acts by
moving rows with sigma, moving columns with pi (transposing every matrix
when pi is odd), then sandwiching each row:

    (A, B, C)  ->  (U A V^-1, V B W^-1, W C U^-1).

The product twists the second triple by pi: even pi moves its components,
odd pi moves (V^-T, W^-T, U^-T) instead.

Internally a triple is a 6-tuple of matrix codes
``(u, u_inv, v, v_inv, w, w_inv)`` so that the kernels never invert.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Sequence, Tuple

from .matrix import Mat, MatSpace, space
from .scheme import COLUMN_PERMS, ColumnSymmetry, Row, Scheme, perm_sign, permute_columns, permute_vector

Triple = Tuple[int, int, int, int, int, int]
Perm = Tuple[int, ...]


def perm_compose(p1: Sequence[int], p2: Sequence[int]) -> Perm:
    return tuple(p1[x] for x in p2)


def perm_inverse(p: Sequence[int]) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


# ---------------------------------------------------------------------------
# triples on codes


def triple_from(sp: MatSpace, u: int, v: int, w: int) -> Triple:
    return (u, sp.inverse(u), v, sp.inverse(v), w, sp.inverse(w))


def identity_triple(sp: MatSpace) -> Triple:
    i = sp.identity
    return (i, i, i, i, i, i)


def triple_mul(sp: MatSpace, t1: Triple, t2: Triple) -> Triple:
    """Componentwise product; acting by it is acting by t2 then t1."""
    mul = sp.mul
    return (
        mul(t1[0], t2[0]), mul(t2[1], t1[1]),
        mul(t1[2], t2[2]), mul(t2[3], t1[3]),
        mul(t1[4], t2[4]), mul(t2[5], t1[5]),
    )


def triple_inv(t: Triple) -> Triple:
    return (t[1], t[0], t[3], t[2], t[5], t[4])


def twist(sp: MatSpace, pi: Sequence[int], t: Triple) -> Triple:
    """phi(pi) applied to a triple."""
    mats = [(t[0], t[1]), (t[2], t[3]), (t[4], t[5])]
    if perm_sign(pi) < 0:
        tr = sp.transpose
        # (U, V, W) -> (V^-T, W^-T, U^-T)
        mats = [(tr(mats[k][1]), tr(mats[k][0])) for k in (1, 2, 0)]
    moved = permute_vector(mats, pi)
    return tuple(x for pair in moved for x in pair)


def apply_triple_codes(sp: MatSpace, t: Triple, row) -> Tuple[int, int, int]:
    mul = sp.mul
    u, ui, v, vi, w, wi = t
    a, b, c = row
    return (mul(mul(u, a), vi), mul(mul(v, b), wi), mul(mul(w, c), ui))


# ---------------------------------------------------------------------------
# public value types


@dataclass(frozen=True)
class SandwichTriple:
    u: Mat
    v: Mat
    w: Mat

    def __post_init__(self):
        for m in (self.u, self.v, self.w):
            if (m.n, m.p) != (self.u.n, self.u.p):
                raise ValueError("triple components must share dimension and field")
            if m.space.rank(m.code) != m.n:
                raise ValueError("triple components must be invertible")

    @property
    def codes(self) -> Triple:
        return triple_from(self.u.space, self.u.code, self.v.code, self.w.code)

    @classmethod
    def from_codes(cls, n: int, p: int, t: Sequence[int]) -> "SandwichTriple":
        return cls(Mat(n, p, t[0]), Mat(n, p, t[2]), Mat(n, p, t[4]))

    @classmethod
    def identity(cls, n: int, p: int) -> "SandwichTriple":
        i = Mat.identity(n, p)
        return cls(i, i, i)


@dataclass(frozen=True)
class SymmetryElement:
    sigma: Perm
    pi: Perm
    triple: SandwichTriple

    def __post_init__(self):
        if sorted(self.sigma) != list(range(len(self.sigma))):
            raise ValueError(f"sigma {self.sigma} is not a permutation")
        if tuple(self.pi) not in COLUMN_PERMS:
            raise ValueError(f"pi {self.pi} is not a permutation of 3 columns")

    @property
    def n(self) -> int:
        return self.triple.u.n

    @property
    def p(self) -> int:
        return self.triple.u.p

    @property
    def r(self) -> int:
        return len(self.sigma)

    def __str__(self):
        return format_element(self)


def identity_element(n: int, r: int, p: int) -> SymmetryElement:
    return SymmetryElement(tuple(range(r)), (0, 1, 2), SandwichTriple.identity(n, p))


def apply_triple(t: SandwichTriple, row: Row) -> Row:
    sp = t.u.space
    return Row.from_codes(t.u.n, t.u.p, apply_triple_codes(sp, t.codes, row.codes))


def permute_rows(s: Scheme, sigma: Sequence[int]) -> Scheme:
    if len(sigma) != s.r:
        raise ValueError(f"sigma has {len(sigma)} points, scheme has {s.r} rows")
    out = [None] * s.r
    for i, row in enumerate(s.rows):
        out[sigma[i]] = row
    return s.with_rows(out)


def apply(g: SymmetryElement, s: Scheme) -> Scheme:
    if (g.n, g.p, g.r) != (s.n, s.p, s.r):
        raise ValueError("group element and scheme have different shapes")
    moved = permute_columns(permute_rows(s, g.sigma), ColumnSymmetry(tuple(g.pi)))
    sp = s.space
    t = g.triple.codes
    return moved.with_rows(apply_triple_codes(sp, t, row) for row in moved.rows)


def compose(g1: SymmetryElement, g2: SymmetryElement) -> SymmetryElement:
    """The product g1 * g2; acting by it is acting by g2, then g1."""
    if (g1.n, g1.p, g1.r) != (g2.n, g2.p, g2.r):
        raise ValueError("group elements have different shapes")
    sp = space(g1.n, g1.p)
    t = triple_mul(sp, g1.triple.codes, twist(sp, g1.pi, g2.triple.codes))
    return SymmetryElement(
        perm_compose(g1.sigma, g2.sigma),
        perm_compose(g1.pi, g2.pi),
        SandwichTriple.from_codes(g1.n, g1.p, t),
    )


def invert(g: SymmetryElement) -> SymmetryElement:
    sp = space(g.n, g.p)
    pinv = perm_inverse(g.pi)
    t = twist(sp, pinv, triple_inv(g.triple.codes))
    return SymmetryElement(perm_inverse(g.sigma), pinv, SandwichTriple.from_codes(g.n, g.p, t))


def random_invertible(sp: MatSpace, rng: random.Random) -> int:
    while True:
        m = rng.randrange(sp.count)
        if sp.rank(m) == sp.n:
            return m


def random_element(n: int, r: int, p: int, seed) -> SymmetryElement:
    """Uniform random group element, deterministic in ``seed``.

    Seeds other than int, str or bytes are reduced to their repr, which keeps
    tuples like ``(seed, i)`` stable across processes.
    """
    if not isinstance(seed, (int, str, bytes)):
        seed = repr(seed)
    rng = random.Random(seed)
    sp = space(n, p)
    sigma = list(range(r))
    rng.shuffle(sigma)
    pi = COLUMN_PERMS[rng.randrange(6)]
    u, v, w = (random_invertible(sp, rng) for _ in range(3))
    return SymmetryElement(tuple(sigma), pi, SandwichTriple(Mat(n, p, u), Mat(n, p, v), Mat(n, p, w)))


# ---------------------------------------------------------------------------
# witness text form:
#   sigma:<cycles> pi:<cycles> U:<n^2 ints> V:<n^2 ints> W:<n^2 ints>
# cycles are 1-based, e.g. "(1,3,2)(4,5)"; the identity is "()".
# matrix entries are row-major, comma separated.


def format_cycles(perm: Sequence[int]) -> str:
    seen = [False] * len(perm)
    parts = []
    for i in range(len(perm)):
        if seen[i] or perm[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j + 1)
            j = perm[j]
        parts.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def parse_cycles(text: str, size: int) -> Perm:
    if not re.fullmatch(r"(\(\)|(\(\d+(,\d+)*\))+)", text):
        raise ValueError(f"bad cycle notation {text!r}")
    perm = list(range(size))
    seen = set()
    for cyc in re.findall(r"\(([\d,]+)\)", text):
        pts = [int(x) - 1 for x in cyc.split(",")]
        for x in pts:
            if not 0 <= x < size or x in seen:
                raise ValueError(f"bad cycle notation {text!r}")
            seen.add(x)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            perm[a] = b
    return tuple(perm)


def format_element(g: SymmetryElement) -> str:
    mats = []
    for name, m in zip("UVW", (g.triple.u, g.triple.v, g.triple.w)):
        mats.append(f"{name}:" + ",".join(map(str, m.entries)))
    return f"sigma:{format_cycles(g.sigma)} pi:{format_cycles(g.pi)} " + " ".join(mats)


def parse_element(text: str, n: int, r: int, p: int) -> SymmetryElement:
    fields = dict(tok.split(":", 1) for tok in text.split())
    try:
        sigma = parse_cycles(fields["sigma"], r)
        pi = parse_cycles(fields["pi"], 3)
        sp = space(n, p)
        mats = []
        for name in "UVW":
            vals = [int(x) for x in fields[name].split(",")]
            if len(vals) != n * n or any(not 0 <= x < p for x in vals):
                raise ValueError(f"{name} needs {n * n} entries in [0, {p})")
            mats.append(Mat(n, p, sp.encode(vals)))
    except KeyError as e:
        raise ValueError(f"witness is missing {e}") from None
    return SymmetryElement(sigma, pi, SandwichTriple(*mats))


__all__ = [
    "SandwichTriple",
    "SymmetryElement",
    "Triple",
    "apply",
    "apply_triple",
    "compose",
    "format_element",
    "identity_element",
    "invert",
    "parse_element",
    "random_element",
]
