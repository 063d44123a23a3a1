"""Normal forms of schemes under the full symmetry group.

The normal form of S is the smallest scheme (row by row, a/b/c, colex
matrix order) in the orbit of S among those whose rank pattern is sorted
and maximal. It is built one row at a time:

1. Pick the column symmetries that maximize the sorted rank pattern.
2. First row: minimize every candidate row over GL(n)^3 directly, using the
   structure of orbit minima (the a-matrix is a block identity, the
   b-matrix is column reduced) to avoid enumerating GL(n)^3.
3. Later rows: minimize candidates over the explicit stabilizer of the rows
   fixed so far, carrying every partial scheme ("tail") that can still
   reach the minimum, then shrink the stabilizer.

Every result carries a witness group element mapping the input to its
normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .kernels import get_kernel
from .matrix import DEFAULT_MAX_GL, DEFAULT_MAX_NULLSPACE, CapExceeded, MatSpace
from .scheme import (
    COLUMN_PERMS,
    ColumnSymmetry,
    Row,
    Scheme,
    maximal_pattern,
    permute_columns,
    rank_vector,
    sorted_pattern,
    permute_vector,
)
from .symmetry import (
    SandwichTriple,
    SymmetryElement,
    Triple,
    apply_triple_codes,
    compose,
    invert,
    triple_inv,
    triple_mul,
)

RowCodes = Tuple[int, int, int]


@dataclass(frozen=True)
class Limits:
    max_stabilizer: int = 10**7
    max_nullspace: int = DEFAULT_MAX_NULLSPACE
    max_gl: int = DEFAULT_MAX_GL
    max_group: int = 10**8


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class NormalFormResult:
    nf: Scheme
    witness: SymmetryElement


# ---------------------------------------------------------------------------
# first row


def _row_candidates(sp: MatSpace, row: RowCodes, limits: Limits) -> List[Triple]:
    """Triples that send row to a row whose a- and b-matrices are orbit-minimal.

    The returned set contains every triple mapping row to its orbit minimum.
    """
    a, b, c = row
    n = sp.n
    mul, inv = sp.mul, sp.inverse
    cap = limits.max_stabilizer
    if sp.rank(a) == n:
        ai = inv(a)
        if sp.rank(b) == n:
            # a -> I forces V = U A, b -> I forces W = V B; W is free
            bi = inv(b)
            ab = mul(a, b)
            out = []
            for x in sp.gl(limits.max_gl):
                xi = inv(x)
                out.append((mul(mul(x, bi), ai), mul(ab, xi), mul(x, bi), mul(b, xi), x, xi))
            return out
        # a -> I forces V = U A; (V, W) sends b to its two-sided minimum
        b1 = sp.minimal_biequivalent(sp.rank(b))
        pairs = sp.solve_sandwich(b, b1, limits.max_nullspace)
        if len(pairs) > cap:
            raise CapExceeded("row candidates", len(pairs), cap)
        out = []
        for v, w in pairs:
            vi = inv(v)
            out.append((mul(v, ai), mul(a, vi), v, vi, w, inv(w)))
        return out

    a1 = sp.minimal_biequivalent(sp.rank(a))
    pairs = sp.solve_sandwich(a, a1, limits.max_nullspace)
    reduced: Dict[int, Tuple[int, int]] = {}
    for _, v in pairs:
        if v not in reduced:
            reduced[v] = sp.minimize_columns(mul(v, b))
    b1 = min(bm for bm, _ in reduced.values())
    stab_b = sp.right_stabilizer(b1, limits.max_nullspace)
    hits = [(u, v) for u, v in pairs if reduced[v][0] == b1]
    if len(hits) * len(stab_b) > cap:
        raise CapExceeded("row candidates", len(hits) * len(stab_b), cap)
    stab_b = [(y, inv(y)) for y in stab_b]
    out = []
    for u, v in hits:
        t = reduced[v][1]  # v b t = b1
        ti = inv(t)
        ui, vi = inv(u), inv(v)
        for y, yi in stab_b:
            # w = y t^-1 gives v b w^-1 = b1 y^-1 = b1
            out.append((u, ui, v, vi, mul(y, ti), mul(t, yi)))
    return out


def minimize_row_codes(sp: MatSpace, row: RowCodes, limits: Limits = DEFAULT_LIMITS) -> Tuple[RowCodes, List[Triple]]:
    kern = get_kernel(sp.n, sp.p)
    cands = _row_candidates(sp, row, limits)
    best, idx = kern.orbit_min_all(row, kern.pack(cands))
    return best, [cands[i] for i in idx]


def row_stabilizer_codes(sp: MatSpace, witnesses: Sequence[Triple], limits: Limits = DEFAULT_LIMITS) -> List[Triple]:
    if not witnesses:
        raise ValueError("need at least one witness")
    if len(witnesses) > limits.max_stabilizer:
        raise CapExceeded("stabilizer", len(witnesses), limits.max_stabilizer)
    h0 = triple_inv(witnesses[0])
    return [triple_mul(sp, g, h0) for g in witnesses]


def minimize_row(row: Row, limits: Limits = DEFAULT_LIMITS) -> Tuple[Row, List[SandwichTriple]]:
    """Smallest row in the GL^3-orbit of ``row`` and every triple reaching it."""
    n, p = row.a.n, row.a.p
    sp = row.a.space
    best, wit = minimize_row_codes(sp, row.codes, limits)
    return Row.from_codes(n, p, best), [SandwichTriple.from_codes(n, p, t) for t in wit]


def row_stabilizer(min_row: Row, witnesses: Sequence[SandwichTriple], limits: Limits = DEFAULT_LIMITS) -> List[SandwichTriple]:
    n, p = min_row.a.n, min_row.a.p
    stab = row_stabilizer_codes(min_row.a.space, [t.codes for t in witnesses], limits)
    return [SandwichTriple.from_codes(n, p, t) for t in stab]


# ---------------------------------------------------------------------------
# the row-by-row loop

Tail = Tuple[Tuple[Tuple[int, RowCodes], ...], Triple, Tuple[int, ...]]


def _dedupe(tails: List[Tail]) -> List[Tail]:
    seen = set()
    out = []
    for t in tails:
        key = tuple(sorted(row for _, row in t[0]))
        if key not in seen:
            seen.add(key)
            out.append(t)
    return out


def _canonical_rows(
    sp: MatSpace, s: Scheme, target: Sequence[Tuple[int, int, int]], limits: Limits
) -> Tuple[Tuple[RowCodes, ...], Tuple[int, ...], Triple]:
    """Minimal sandwich image of s with rows ordered to match ``target``.

    Returns the rows, the original index of each output row, and the triple.
    """
    kern = get_kernel(sp.n, sp.p)
    rows = s.rows
    rv = [rank_vector(sp, row) for row in rows]

    # first row: direct minimization over GL^3
    best = None
    achievers: List[Tuple[int, List[Triple]]] = []
    done: Dict[RowCodes, Tuple[RowCodes, List[Triple]]] = {}
    for i, row in enumerate(rows):
        if rv[i] != target[0]:
            continue
        if row not in done:
            done[row] = minimize_row_codes(sp, row, limits)
        m, wit = done[row]
        if best is None or m < best:
            best, achievers = m, [(i, wit)]
        elif m == best:
            achievers.append((i, wit))
    stab = row_stabilizer_codes(sp, achievers[0][1], limits)
    tails: List[Tail] = []
    for i, wit in achievers:
        h = wit[0]
        rest = tuple((j, kern.apply(h, rows[j])) for j in range(len(rows)) if j != i)
        tails.append((rest, h, (i,)))
    tails = _dedupe(tails)
    candidate = [best]

    for k in range(1, len(rows)):
        want = target[k]
        packed = kern.pack(stab)
        cache: Dict[RowCodes, Tuple[RowCodes, int]] = {}
        best = None
        new: List[Tail] = []
        for rest, acc, used in tails:
            for pos, (j, row) in enumerate(rest):
                if rv[j] != want:
                    continue
                res = cache.get(row)
                if res is None:
                    res = cache[row] = kern.orbit_min(row, packed)
                m, gi = res
                if best is None or m < best:
                    best, new = m, []
                if m == best:
                    g = stab[gi]
                    left = tuple((jj, kern.apply(g, rr)) for q, (jj, rr) in enumerate(rest) if q != pos)
                    new.append((left, triple_mul(sp, g, acc), used + (j,)))
        candidate.append(best)
        stab = [stab[i] for i in kern.fixing(best, packed)]
        tails = _dedupe(new)

    _, acc, used = tails[0]
    return tuple(candidate), used, acc


def normal_form(s: Scheme, limits: Limits = DEFAULT_LIMITS) -> NormalFormResult:
    sp = s.space
    target, syms = maximal_pattern(s)
    best = None
    for sym in syms:
        moved = permute_columns(s, sym)
        rows, used, acc = _canonical_rows(sp, moved, target, limits)
        if best is None or rows < best[0]:
            best = (rows, used, acc, sym)
    rows, used, acc, sym = best
    sigma = [0] * s.r
    for pos, j in enumerate(used):
        sigma[j] = pos
    witness = SymmetryElement(tuple(sigma), sym.pi, SandwichTriple.from_codes(s.n, s.p, acc))
    return NormalFormResult(s.with_rows(rows), witness)


def is_normal_form(s: Scheme, limits: Limits = DEFAULT_LIMITS) -> bool:
    return normal_form(s, limits).nf == s


def equivalent(s1: Scheme, s2: Scheme, limits: Limits = DEFAULT_LIMITS) -> Optional[SymmetryElement]:
    """A group element mapping s1 to s2, or None when they lie in different orbits."""
    s1._same_shape(s2)
    if maximal_pattern(s1)[0] != maximal_pattern(s2)[0]:
        return None
    r1 = normal_form(s1, limits)
    r2 = normal_form(s2, limits)
    if r1.nf != r2.nf:
        return None
    return compose(invert(r2.witness), r1.witness)


# ---------------------------------------------------------------------------
# exhaustive reference


def group_order(n: int, r: int, p: int) -> int:
    q = p**n
    gl = 1
    for i in range(n):
        gl *= q - p**i
    return factorial(r) * 6 * gl**3


def brute_force_normal_form(s: Scheme, max_group: int = DEFAULT_LIMITS.max_group) -> Scheme:
    """Minimum over the whole group, for small groups only.

    Every (pi, U, V, W) is enumerated. For each, the best row permutation
    with a sorted pattern is found by sorting: rows must be grouped by
    non-increasing rank vector, and within a group ascending rows are
    smallest.
    """
    size = group_order(s.n, s.r, s.p)
    if size > max_group:
        raise CapExceeded("group too large for exhaustive search", size, max_group)
    sp = s.space
    gl = [(g, sp.inverse(g)) for g in sp.gl()]
    base = [rank_vector(sp, row) for row in s.rows]
    patterns = {pi: sorted_pattern(permute_vector(v, pi) for v in base) for pi in COLUMN_PERMS}
    top = max(patterns.values())
    best = None
    for pi in COLUMN_PERMS:
        if patterns[pi] != top:
            continue
        moved = permute_columns(s, ColumnSymmetry(pi)).rows
        keys = [tuple(-x for x in permute_vector(v, pi)) for v in base]
        for (u, ui), (v, vi), (w, wi) in product(gl, gl, gl):
            t = (u, ui, v, vi, w, wi)
            img = sorted((key, apply_triple_codes(sp, t, row)) for key, row in zip(keys, moved))
            cand = tuple(row for _, row in img)
            if best is None or cand < best:
                best = cand
    return s.with_rows(best)


__all__ = [
    "DEFAULT_LIMITS",
    "Limits",
    "NormalFormResult",
    "brute_force_normal_form",
    "equivalent",
    "group_order",
    "is_normal_form",
    "minimize_row",
    "normal_form",
    "row_stabilizer",
]
