# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Mirrors ``_pycore`` exactly, including iteration order."""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free

cnp.import_array()

BACKEND = "cython"


cdef class CoverSearch:
    cdef int m, k
    cdef int *row_ptr
    cdef int *row_cols
    cdef int *col_ptr
    cdef int *col_rows
    cdef int *demand
    cdef int *supply
    cdef char *avail
    cdef int *trail
    cdef int trail_len
    cdef int *chosen
    cdef int nchosen
    cdef int *st_row
    cdef int *st_mark
    cdef char *st_phase
    cdef int depth
    cdef bint done, started
    cdef object zero
    cdef list pending

    def __cinit__(self, rows, int ncols, targets):
        cdef int r, c, i, nnz = 0
        self.m = ncols
        self.k = len(rows)
        self.zero = [r for r in range(self.k) if not rows[r]]
        self.pending = []
        for cols in rows:
            nnz += len(cols)
        self.row_ptr = <int *>malloc((self.k + 1) * sizeof(int))
        self.row_cols = <int *>malloc((nnz + 1) * sizeof(int))
        self.col_ptr = <int *>malloc((self.m + 1) * sizeof(int))
        self.col_rows = <int *>malloc((nnz + 1) * sizeof(int))
        self.demand = <int *>malloc((self.m + 1) * sizeof(int))
        self.supply = <int *>malloc((self.m + 1) * sizeof(int))
        self.avail = <char *>malloc((self.k + 1) * sizeof(char))
        self.trail = <int *>malloc((self.k + 1) * sizeof(int))
        self.chosen = <int *>malloc((self.k + 1) * sizeof(int))
        self.st_row = <int *>malloc((self.k + 1) * sizeof(int))
        self.st_mark = <int *>malloc((self.k + 1) * sizeof(int))
        self.st_phase = <char *>malloc((self.k + 1) * sizeof(char))
        cdef int *fill = <int *>malloc((self.m + 1) * sizeof(int))
        for c in range(self.m + 1):
            self.col_ptr[c] = 0
        i = 0
        for r in range(self.k):
            self.row_ptr[r] = i
            for c in rows[r]:
                self.row_cols[i] = c
                self.col_ptr[c + 1] += 1
                i += 1
        self.row_ptr[self.k] = i
        for c in range(self.m):
            self.col_ptr[c + 1] += self.col_ptr[c]
            fill[c] = self.col_ptr[c]
        for r in range(self.k):
            for i in range(self.row_ptr[r], self.row_ptr[r + 1]):
                c = self.row_cols[i]
                self.col_rows[fill[c]] = r
                fill[c] += 1
        free(fill)
        self.done = False
        for c in range(self.m):
            self.demand[c] = targets[c]
            self.supply[c] = self.col_ptr[c + 1] - self.col_ptr[c]
            if self.demand[c] < 0:
                self.done = True
        for r in range(self.k):
            self.avail[r] = 1 if self.row_ptr[r + 1] > self.row_ptr[r] else 0
        self.trail_len = 0
        self.nchosen = 0
        self.depth = 0
        self.started = False
        if not self.done:
            for c in range(self.m):
                if self.demand[c] == 0:
                    self._clear_column(c)

    def __dealloc__(self):
        free(self.row_ptr); free(self.row_cols); free(self.col_ptr); free(self.col_rows)
        free(self.demand); free(self.supply); free(self.avail); free(self.trail)
        free(self.chosen); free(self.st_row); free(self.st_mark); free(self.st_phase)

    cdef inline void _remove(self, int r) nogil:
        cdef int i
        self.avail[r] = 0
        for i in range(self.row_ptr[r], self.row_ptr[r + 1]):
            self.supply[self.row_cols[i]] -= 1
        self.trail[self.trail_len] = r
        self.trail_len += 1

    cdef inline void _clear_column(self, int c) nogil:
        cdef int i, r
        for i in range(self.col_ptr[c], self.col_ptr[c + 1]):
            r = self.col_rows[i]
            if self.avail[r]:
                self._remove(r)

    cdef inline void _include(self, int r) nogil:
        cdef int i, c
        self._remove(r)
        self.chosen[self.nchosen] = r
        self.nchosen += 1
        for i in range(self.row_ptr[r], self.row_ptr[r + 1]):
            self.demand[self.row_cols[i]] -= 1
        for i in range(self.row_ptr[r], self.row_ptr[r + 1]):
            c = self.row_cols[i]
            if self.demand[c] == 0:
                self._clear_column(c)

    cdef inline void _undo_to(self, int mark) nogil:
        cdef int r, i
        while self.trail_len > mark:
            self.trail_len -= 1
            r = self.trail[self.trail_len]
            self.avail[r] = 1
            for i in range(self.row_ptr[r], self.row_ptr[r + 1]):
                self.supply[self.row_cols[i]] += 1

    cdef inline int _pick(self) nogil:
        cdef int c, d, s, best = -1, best_slack = 0
        for c in range(self.m):
            d = self.demand[c]
            if d > 0:
                s = self.supply[c] - d
                if s < 0:
                    return -2
                if best < 0 or s < best_slack:
                    best = c
                    best_slack = s
        return best

    cdef bint _descend(self) nogil:
        cdef int c, i, r
        while True:
            c = self._pick()
            if c == -2:
                return False
            if c == -1:
                return True
            r = -1
            for i in range(self.col_ptr[c], self.col_ptr[c + 1]):
                if self.avail[self.col_rows[i]]:
                    r = self.col_rows[i]
                    break
            self.st_row[self.depth] = r
            self.st_mark[self.depth] = self.trail_len
            self.st_phase[self.depth] = 0
            self.depth += 1
            self._include(r)

    cdef bint _backtrack(self) nogil:
        cdef int r, i
        while self.depth > 0:
            r = self.st_row[self.depth - 1]
            self._undo_to(self.st_mark[self.depth - 1])
            if self.st_phase[self.depth - 1] == 0:
                self.nchosen -= 1
                for i in range(self.row_ptr[r], self.row_ptr[r + 1]):
                    self.demand[self.row_cols[i]] += 1
                self.st_phase[self.depth - 1] = 1
                self._remove(r)
                return True
            self.depth -= 1
        return False

    cdef bint _advance(self) nogil:
        cdef bint ok
        if self.done:
            return False
        if not self.started:
            self.started = True
            ok = self._descend()
        else:
            ok = False
        while True:
            if ok:
                return True
            if not self._backtrack():
                self.done = True
                return False
            ok = self._descend()

    def __iter__(self):
        return self

    def __next__(self):
        cdef int i, mask, nz
        if not self.pending:
            if not self._advance():
                raise StopIteration
            core = tuple(sorted([self.chosen[i] for i in range(self.nchosen)]))
            zero = self.zero
            nz = len(zero)
            self.pending = [
                tuple(sorted(core + tuple(zero[i] for i in range(nz) if mask >> i & 1)))
                for mask in range(1 << nz)
            ]
            self.pending.reverse()
        return self.pending.pop()

    def count(self):
        cdef long long total = 0
        with nogil:
            while self._advance():
                total += 1
        return int(total) << len(self.zero)


def count_cover(rows, ncols, targets):
    return CoverSearch(rows, ncols, targets).count()


def neighbor_counts(chi, int n):
    cdef cnp.uint8_t[:] c = np.ascontiguousarray(chi, dtype=np.uint8)
    out_arr = np.zeros(1 << n, dtype=np.int32)
    cdef int[:] out = out_arr
    cdef int x, b, s, size = 1 << n
    with nogil:
        for x in range(size):
            s = 0
            for b in range(n):
                s += c[x ^ (1 << b)]
            out[x] = s
    return out_arr


def complete_upward(chi, int n, int start_w, long long num, long long den):
    out = np.array(chi, dtype=np.uint8)
    cdef cnp.uint8_t[:] c = out
    cdef int size = 1 << n, x, y, w
    cdef long long quota, cnt
    cdef bint ok = True
    for x in range(size):
        if _popcount(x) >= start_w:
            c[x] = 0
    for w in range(start_w, n + 1):
        if (num << w) % den:
            return False, out
        quota = (num << w) // den
        with nogil:
            for x in range(size):
                if _popcount(x) != w:
                    continue
                cnt = 0
                y = (x - 1) & x
                while x != 0:
                    cnt += c[y]
                    if y == 0:
                        break
                    y = (y - 1) & x
                if cnt > quota or quota - cnt > 1:
                    ok = False
                    break
                c[x] = <cnp.uint8_t>(quota - cnt)
        if not ok:
            return False, out
    return True, out


cdef inline int _popcount(int x) nogil:
    cdef int s = 0
    while x:
        x &= x - 1
        s += 1
    return s
