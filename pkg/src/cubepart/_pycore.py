"""Pure-Python kernels; the reference behaviour for ``_core.pyx``.

Both modules expose the same names and must produce identical results in
identical order.
"""

import numpy as np

BACKEND = "python"


class CoverSearch:
    """Iterate all row subsets whose column sums equal ``targets``.

    ``rows`` is a list of column-index lists. Each item is a sorted tuple of
    row indices. Branching picks the column with the least slack (candidate
    supply minus remaining demand, lowest index on ties) and then tries its
    lowest-indexed available row, included first, excluded second.
    """

    def __init__(self, rows, ncols, targets):
        self._zero = [r for r, cols in enumerate(rows) if not cols]
        self._rows = [list(cols) for cols in rows]
        self._m = ncols
        self._cols = [[] for _ in range(ncols)]
        for r, cols in enumerate(self._rows):
            for c in cols:
                self._cols[c].append(r)
        self._demand = list(targets)
        self._supply = [len(cs) for cs in self._cols]
        self._avail = [bool(cols) for cols in self._rows]
        self._trail = []
        self._chosen = []
        self._stack = []
        self._pending = []
        self._done = any(t < 0 for t in targets)
        self._started = False
        if not self._done:
            for c in range(ncols):
                if self._demand[c] == 0:
                    self._clear_column(c)

    def _remove(self, r):
        self._avail[r] = False
        for c in self._rows[r]:
            self._supply[c] -= 1
        self._trail.append(r)

    def _clear_column(self, c):
        for r in self._cols[c]:
            if self._avail[r]:
                self._remove(r)

    def _include(self, r):
        self._remove(r)
        self._chosen.append(r)
        for c in self._rows[r]:
            self._demand[c] -= 1
        for c in self._rows[r]:
            if self._demand[c] == 0:
                self._clear_column(c)

    def _undo_to(self, mark):
        trail = self._trail
        while len(trail) > mark:
            r = trail.pop()
            self._avail[r] = True
            for c in self._rows[r]:
                self._supply[c] += 1

    def _pick(self):
        best, best_slack = -1, None
        demand, supply = self._demand, self._supply
        for c in range(self._m):
            d = demand[c]
            if d > 0:
                s = supply[c] - d
                if s < 0:
                    return -2
                if best_slack is None or s < best_slack:
                    best, best_slack = c, s
        return best

    def _descend(self):
        """Run forward until a solution (True) or a dead end (False)."""
        while True:
            c = self._pick()
            if c == -2:
                return False
            if c == -1:
                return True
            for r in self._cols[c]:
                if self._avail[r]:
                    break
            self._stack.append([r, len(self._trail), 0])
            self._include(r)

    def _backtrack(self):
        """Move to the next unexplored branch; False when exhausted."""
        stack = self._stack
        while stack:
            frame = stack[-1]
            r, mark, phase = frame
            self._undo_to(mark)
            if phase == 0:
                self._chosen.pop()
                for c in self._rows[r]:
                    self._demand[c] += 1
                frame[2] = 1
                self._remove(r)
                return True
            stack.pop()
        return False

    def _next_core(self):
        if self._done:
            return None
        if not self._started:
            self._started = True
            ok = self._descend()
        else:
            ok = False
        while True:
            if ok:
                return tuple(sorted(self._chosen))
            if not self._backtrack():
                self._done = True
                return None
            ok = self._descend()

    def __iter__(self):
        return self

    def __next__(self):
        if not self._pending:
            core = self._next_core()
            if core is None:
                raise StopIteration
            zero = self._zero
            self._pending = [
                tuple(sorted(core + tuple(zero[i] for i in range(len(zero)) if mask >> i & 1)))
                for mask in range(1 << len(zero))
            ]
            self._pending.reverse()
        return self._pending.pop()


def count_cover(rows, ncols, targets):
    search = CoverSearch(rows, ncols, targets)
    total = 0
    while search._next_core() is not None:
        total += 1
    return total << len(search._zero)


def neighbor_counts(chi, n):
    """Number of neighbours inside the indicator ``chi`` for every word."""
    chi = np.asarray(chi, dtype=np.int32)
    idx = np.arange(1 << n)
    out = np.zeros(1 << n, dtype=np.int32)
    for b in range(n):
        out += chi[idx ^ (1 << b)]
    return out


def complete_upward(chi, n, start_w, num, den):
    """Fill weights ``start_w..n`` from the downset equation.

    A word ``x`` of weight ``w`` must see exactly ``num * 2**w / den`` ones in
    ``{y : y <= x}``. Returns ``(ok, chi)``; ``ok`` is False if some word's
    strict downset already exceeds the quota or falls short by more than one.
    """
    chi = np.array(chi, dtype=np.uint8)
    pc = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        pc[1 << b: 1 << (b + 1)] = pc[: 1 << b] + 1
    chi[pc >= start_w] = 0
    for w in range(start_w, n + 1):
        if (num << w) % den:
            return False, chi
        quota = (num << w) // den
        down = chi.astype(np.int64)
        for b in range(n):
            step = 1 << b
            view = down.reshape(-1, 2 * step)
            view[:, step:] += view[:, :step]
        layer = pc == w
        deficit = quota - down[layer]
        if np.any((deficit < 0) | (deficit > 1)):
            return False, chi
        chi[layer] = deficit.astype(np.uint8)
    return True, chi
