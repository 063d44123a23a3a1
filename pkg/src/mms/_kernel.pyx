# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel mirroring :mod:`mms._kernel_py`.

Only used when every code fits a signed 64-bit integer, i.e. p**(n*n) < 2**63.
Packed triple sets keep each matrix pre-decoded so the inner loops never
touch Python objects.
"""

import numpy as np
cimport numpy as cnp

BACKEND = "cython"

ctypedef long long i64

cdef enum:
    MAXNN = 25
    MAXVEC = 50


cdef class Kernel:
    cdef public int n, p, nn
    cdef i64 w[MAXNN]
    cdef int order[MAXNN]
    cdef int invtab[256]

    def __init__(self, int n, int p, weights, order):
        self.n = n
        self.p = p
        self.nn = n * n
        for k in range(self.nn):
            self.w[k] = weights[k]
            self.order[k] = order[k]
        self.invtab[0] = 0
        for k in range(1, p):
            self.invtab[k] = pow(k, p - 2, p)

    cdef inline void _decode(self, i64 code, int *out) noexcept:
        cdef int k
        cdef i64 c = code
        for k in range(self.nn - 1, -1, -1):
            out[self.order[k]] = <int>(c % self.p)
            c = c // self.p

    cdef inline i64 _encode(self, int *e) noexcept:
        cdef i64 r = 0
        cdef int k
        for k in range(self.nn):
            r += e[k] * self.w[k]
        return r

    cdef inline void _mul(self, const int *x, const int *y, int *out) noexcept:
        cdef int n = self.n, p = self.p
        cdef int i, j, k, s
        for i in range(n):
            for j in range(n):
                s = 0
                for k in range(n):
                    s += x[i * n + k] * y[k * n + j]
                out[i * n + j] = s % p

    cdef inline void _sandwich(self, const int *l, const int *m, const int *r, int *out) noexcept:
        cdef int tmp[MAXNN]
        self._mul(l, m, tmp)
        self._mul(tmp, r, out)

    cdef int _full_rank(self, const int *m) noexcept:
        # Gaussian elimination on a copy; p is prime so every pivot inverts
        cdef int a[MAXNN]
        cdef int n = self.n, p = self.p
        cdef int i, j, r, piv, inv, f
        for i in range(self.nn):
            a[i] = m[i]
        for j in range(n):
            piv = -1
            for r in range(j, n):
                if a[r * n + j] != 0:
                    piv = r
                    break
            if piv < 0:
                return 0
            if piv != j:
                for i in range(n):
                    a[j * n + i], a[piv * n + i] = a[piv * n + i], a[j * n + i]
            inv = self.invtab[a[j * n + j]]
            for r in range(j + 1, n):
                f = (a[r * n + j] * inv) % p
                if f:
                    for i in range(j, n):
                        a[r * n + i] = (a[r * n + i] - f * a[j * n + i]) % p
                        if a[r * n + i] < 0:
                            a[r * n + i] += p
        return 1

    def invertible_in_span(self, offset, basis, int blocks):
        cdef int length = blocks * self.nn
        cdef int d = len(basis)
        cdef int p = self.p
        cdef int vec[MAXVEC]
        cdef int digits[MAXVEC]
        cdef cnp.ndarray[cnp.int32_t, ndim=2] barr = np.zeros((max(d, 1), length), dtype=np.int32)
        cdef int[:, ::1] bv = barr
        cdef long long step, total, s
        cdef int i, k, ok
        if length > MAXVEC:
            raise ValueError("vector too long for the compiled kernel")
        for k in range(d):
            for i in range(length):
                bv[k, i] = basis[k][i] % p
        for i in range(length):
            vec[i] = offset[i] % p
        for k in range(d):
            digits[k] = 0
        total = 1
        for k in range(d):
            total *= p
        out = []
        step = 0
        while True:
            ok = 1
            for k in range(blocks):
                if not self._full_rank(&vec[k * self.nn]):
                    ok = 0
                    break
            if ok:
                out.append(tuple([self._encode(&vec[k * self.nn]) for k in range(blocks)]))
            step += 1
            if step >= total:
                break
            k = 0
            s = step
            while s % p == 0:
                s //= p
                k += 1
            digits[k] = (digits[k] + 1) % p
            for i in range(length):
                if bv[k, i]:
                    vec[i] = (vec[i] + bv[k, i]) % p
        return out

    cdef inline int _cmp(self, const int *x, const int *y) noexcept:
        # compare in significance order, i.e. as codes
        cdef int k, f
        for k in range(self.nn):
            f = self.order[k]
            if x[f] != y[f]:
                return -1 if x[f] < y[f] else 1
        return 0

    def decode(self, i64 code):
        cdef int e[MAXNN]
        self._decode(code, e)
        return tuple([e[k] for k in range(self.nn)])

    def mul(self, i64 a, i64 b):
        cdef int x[MAXNN]
        cdef int y[MAXNN]
        cdef int z[MAXNN]
        self._decode(a, x)
        self._decode(b, y)
        self._mul(x, y, z)
        return self._encode(z)

    def apply(self, t, row):
        cdef int m[6][MAXNN]
        cdef int r[3][MAXNN]
        cdef int o[MAXNN]
        cdef int k
        for k in range(6):
            self._decode(t[k], m[k])
        for k in range(3):
            self._decode(row[k], r[k])
        self._sandwich(m[0], r[0], m[3], o)
        x = self._encode(o)
        self._sandwich(m[2], r[1], m[5], o)
        y = self._encode(o)
        self._sandwich(m[4], r[2], m[1], o)
        return (x, y, self._encode(o))

    def apply_rows(self, t, rows):
        return [self.apply(t, r) for r in rows]

    def pack(self, triples):
        cdef Py_ssize_t cnt = len(triples)
        cdef cnp.ndarray[cnp.int32_t, ndim=3] arr = np.zeros((max(cnt, 1), 6, self.nn), dtype=np.int32)
        cdef int e[MAXNN]
        cdef Py_ssize_t i
        cdef int k, f
        for i in range(cnt):
            t = triples[i]
            for k in range(6):
                self._decode(t[k], e)
                for f in range(self.nn):
                    arr[i, k, f] = e[f]
        return (cnt, arr)

    def orbit_min(self, row, packed):
        best, hits = self._orbit(row, packed, False)
        return best, (hits[0] if hits else -1)

    def orbit_min_all(self, row, packed):
        return self._orbit(row, packed, True)

    cdef _orbit(self, row, packed, bint collect):
        cdef Py_ssize_t cnt = packed[0]
        cdef cnp.ndarray[cnp.int32_t, ndim=3] arr = packed[1]
        cdef int[:, :, ::1] mv = arr
        cdef int a[MAXNN]
        cdef int b[MAXNN]
        cdef int c[MAXNN]
        cdef int best[3][MAXNN]
        cdef int cur[3][MAXNN]
        cdef Py_ssize_t i
        cdef int cmp, have = 0
        hits = []
        if cnt == 0:
            return None, hits
        self._decode(row[0], a)
        self._decode(row[1], b)
        self._decode(row[2], c)
        for i in range(cnt):
            self._sandwich(&mv[i, 0, 0], a, &mv[i, 3, 0], cur[0])
            if have:
                cmp = self._cmp(cur[0], best[0])
                if cmp > 0:
                    continue
            else:
                cmp = -1
            self._sandwich(&mv[i, 2, 0], b, &mv[i, 5, 0], cur[1])
            if cmp == 0:
                cmp = self._cmp(cur[1], best[1])
                if cmp > 0:
                    continue
            self._sandwich(&mv[i, 4, 0], c, &mv[i, 1, 0], cur[2])
            if cmp == 0:
                cmp = self._cmp(cur[2], best[2])
                if cmp > 0:
                    continue
            if cmp < 0:
                best[0] = cur[0]
                best[1] = cur[1]
                best[2] = cur[2]
                have = 1
                hits = [i]
            elif collect:
                hits.append(i)
        return (self._encode(best[0]), self._encode(best[1]), self._encode(best[2])), hits

    def fixing(self, row, packed):
        cdef Py_ssize_t cnt = packed[0]
        cdef cnp.ndarray[cnp.int32_t, ndim=3] arr = packed[1]
        cdef int[:, :, ::1] mv = arr
        cdef int r[3][MAXNN]
        cdef int x[MAXNN]
        cdef int y[MAXNN]
        cdef Py_ssize_t i
        cdef int k, f, ok
        # (U,V,W) fixes (A,B,C) iff UA = AV, VB = BW, WC = CU
        cdef int lft[3]
        cdef int rgt[3]
        lft[0] = 0; rgt[0] = 2
        lft[1] = 2; rgt[1] = 4
        lft[2] = 4; rgt[2] = 0
        out = []
        for k in range(3):
            self._decode(row[k], r[k])
        for i in range(cnt):
            ok = 1
            for k in range(3):
                self._mul(&mv[i, lft[k], 0], r[k], x)
                self._mul(r[k], &mv[i, rgt[k], 0], y)
                for f in range(self.nn):
                    if x[f] != y[f]:
                        ok = 0
                        break
                if not ok:
                    break
            if ok:
                out.append(i)
        return out
