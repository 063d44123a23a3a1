"""Pure-Python kernel: the reference implementation of the hot loops.

A *triple* is a 6-tuple of codes ``(u, u_inv, v, v_inv, w, w_inv)`` and a
*row* a 3-tuple ``(a, b, c)``. Applying a triple to a row gives
``(u a v^-1, v b w^-1, w c u^-1)``.

Triple sets are packed by :meth:`Kernel.pack` into whatever layout the
backend prefers; callers treat the packed object as opaque and index back
into their own list with the returned positions.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

BACKEND = "python"


class Kernel:
    def __init__(self, n: int, p: int, weights: Sequence[int], order: Sequence[int]):
        self.n = n
        self.p = p
        self.nn = n * n
        self.weights = list(weights)
        self.order = list(order)
        self._dec = {}
        self._mul = {}

    def decode(self, code: int) -> Tuple[int, ...]:
        d = self._dec.get(code)
        if d is None:
            out = [0] * self.nn
            c = code
            p = self.p
            for k in range(self.nn - 1, -1, -1):
                c, out[self.order[k]] = divmod(c, p)
            d = self._dec[code] = tuple(out)
        return d

    def mul(self, a: int, b: int) -> int:
        key = (a, b)
        r = self._mul.get(key)
        if r is not None:
            return r
        x = self.decode(a)
        y = self.decode(b)
        n, p, w = self.n, self.p, self.weights
        r = 0
        for i in range(n):
            for j in range(n):
                s = 0
                for k in range(n):
                    s += x[i * n + k] * y[k * n + j]
                r += (s % p) * w[i * n + j]
        if len(self._mul) < (1 << 20):
            self._mul[key] = r
        return r

    def apply(self, t, row) -> Tuple[int, int, int]:
        mul = self.mul
        u, ui, v, vi, w, wi = t
        a, b, c = row
        return (mul(mul(u, a), vi), mul(mul(v, b), wi), mul(mul(w, c), ui))

    def pack(self, triples: Sequence[tuple]):
        return list(triples)

    def orbit_min(self, row, packed) -> Tuple[Tuple[int, int, int], int]:
        """Smallest image of row over the set, and the first index reaching it."""
        mul = self.mul
        a, b, c = row
        best = None
        best_i = -1
        for i, (u, ui, v, vi, w, wi) in enumerate(packed):
            x = mul(mul(u, a), vi)
            if best is not None and x > best[0]:
                continue
            y = mul(mul(v, b), wi)
            if best is not None and x == best[0] and y > best[1]:
                continue
            z = mul(mul(w, c), ui)
            img = (x, y, z)
            if best is None or img < best:
                best = img
                best_i = i
        return best, best_i

    def orbit_min_all(self, row, packed) -> Tuple[Tuple[int, int, int], List[int]]:
        """Smallest image of row over the set, and every index reaching it."""
        mul = self.mul
        a, b, c = row
        best = None
        hits: List[int] = []
        for i, (u, ui, v, vi, w, wi) in enumerate(packed):
            x = mul(mul(u, a), vi)
            if best is not None and x > best[0]:
                continue
            y = mul(mul(v, b), wi)
            if best is not None and x == best[0] and y > best[1]:
                continue
            img = (x, y, mul(mul(w, c), ui))
            if best is None or img < best:
                best = img
                hits = [i]
            elif img == best:
                hits.append(i)
        return best, hits

    def fixing(self, row, packed) -> List[int]:
        """Indices of triples mapping row to itself."""
        mul = self.mul
        a, b, c = row
        out = []
        for i, (u, ui, v, vi, w, wi) in enumerate(packed):
            if mul(u, a) != mul(a, v):
                continue
            if mul(v, b) != mul(b, w):
                continue
            if mul(w, c) != mul(c, u):
                continue
            out.append(i)
        return out

    def apply_rows(self, t, rows) -> List[Tuple[int, int, int]]:
        return [self.apply(t, r) for r in rows]

    def invertible_in_span(self, offset: Sequence[int], basis: Sequence[Sequence[int]], blocks: int) -> List[tuple]:
        """Walk offset + span(basis) and keep points whose every n x n block is invertible.

        Points are vectors of ``blocks * n * n`` entries, each block a
        row-major matrix. Returns tuples of block codes in walk order.
        """
        from .matrix import gray_walk, space

        n, p, nn = self.n, self.p, self.nn
        w = self.weights
        rank = space(n, p).rank
        out = []
        length = blocks * nn
        off = list(offset)
        for z in gray_walk([list(b) for b in basis], p, length):
            vec = [(x + y) % p for x, y in zip(off, z)]
            codes = []
            for k in range(blocks):
                code = sum(x * y for x, y in zip(vec[k * nn:(k + 1) * nn], w))
                if rank(code) != n:
                    break
                codes.append(code)
            else:
                out.append(tuple(codes))
        return out
