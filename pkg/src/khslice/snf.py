"""Exact integer linear algebra for chain-complex homology.

The workhorse is :func:`snf_diagonal`: unimodular unit-pivot sparse
elimination first (Khovanov differentials are dominated by +-1 entries,
so this kills almost everything), then a classical dense Smith normal
form with exact Python integers on the small remainder.  Eliminating a
+-1 pivot is a unimodular row/column operation followed by dropping a
diagonal 1, so the multiset of SNF invariant factors is preserved.
"""

from __future__ import annotations


class SparseIntMatrix:
    """Dict-of-rows sparse integer matrix, built from COO triplets."""

    def __init__(self, n_rows: int, n_cols: int):
        self.n_rows = n_rows
        self.n_cols = n_cols
        self.rows: dict[int, dict[int, int]] = {}
        self.col_index: dict[int, set[int]] = {}

    @staticmethod
    def from_coo(n_rows, n_cols, rows, cols, vals) -> "SparseIntMatrix":
        m = SparseIntMatrix(n_rows, n_cols)
        for r, c, v in zip(rows, cols, vals):
            if v:
                m._add(int(r), int(c), int(v))
        return m

    def _add(self, r: int, c: int, v: int) -> None:
        row = self.rows.setdefault(r, {})
        nv = row.get(c, 0) + v
        if nv:
            row[c] = nv
            self.col_index.setdefault(c, set()).add(r)
        else:
            del row[c]
            self.col_index[c].discard(r)
            if not row:
                del self.rows[r]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def mul_coo(self, other: "SparseIntMatrix"):
        """Triplets of self @ other (for d.d == 0 checks)."""
        out: dict[tuple[int, int], int] = {}
        for r, row in self.rows.items():
            for k, a in row.items():
                orow = other.rows.get(k)
                if not orow:
                    continue
                for c, b in orow.items():
                    key = (r, c)
                    out[key] = out.get(key, 0) + a * b
        return {k: v for k, v in out.items() if v}

    def _eliminate_unit(self, r: int, c: int) -> None:
        piv = self.rows[r][c]
        row_items = [(cc, vv) for cc, vv in self.rows[r].items() if cc != c]
        col_rows = [rr for rr in self.col_index[c] if rr != r]
        for rr in col_rows:
            factor = self.rows[rr][c] * piv  # piv is +-1, so this is exact
            self._add(rr, c, -self.rows[rr][c])
            for cc, vv in row_items:
                self._add(rr, cc, -factor * vv)
        for cc, _vv in row_items:
            self._add(r, cc, -self.rows[r][cc])
        self._add(r, c, -piv)

    def snf_diagonal(self, dense_limit: int = 4000) -> list[int]:
        """Nonzero diagonal entries of the Smith normal form (positive, but
        not sorted into divisibility order; callers need the multiset).

        Unit pivots are eliminated via a row worklist (no global rescans);
        the +-1-free remainder goes through the dense algorithm.
        """
        from collections import deque

        ones = 0
        work = deque(self.rows.keys())
        queued = set(work)
        while work:
            r = work.popleft()
            queued.discard(r)
            row = self.rows.get(r)
            if not row:
                continue
            # pick the unit entry in this row with the sparsest column
            best = None
            for c, v in row.items():
                if v == 1 or v == -1:
                    cost = len(self.col_index[c])
                    if best is None or cost < best[0]:
                        best = (cost, c)
            if best is None:
                continue
            c = best[1]
            affected = [rr for rr in self.col_index[c] if rr != r]
            self._eliminate_unit(r, c)
            ones += 1
            for rr in affected:
                if rr not in queued and rr in self.rows:
                    queued.add(rr)
                    work.append(rr)
        # elimination can re-create unit entries in rows processed before
        # their neighbours; sweep until stable
        while True:
            found = None
            for r, row in self.rows.items():
                for c, v in row.items():
                    if v == 1 or v == -1:
                        found = (r, c)
                        break
                if found:
                    break
            if not found:
                break
            self._eliminate_unit(*found)
            ones += 1
        dense = self._to_dense()
        if dense and len(dense) * len(dense[0]) > dense_limit * dense_limit:
            raise MemoryError("SNF remainder unexpectedly large")
        return [1] * ones + _dense_snf(dense)

    def _to_dense(self) -> list[list[int]]:
        if not self.rows:
            return []
        rs = sorted(self.rows)
        cs = sorted({c for row in self.rows.values() for c in row})
        cpos = {c: i for i, c in enumerate(cs)}
        out = [[0] * len(cs) for _ in rs]
        for i, r in enumerate(rs):
            for c, v in self.rows[r].items():
                out[i][cpos[c]] = v
        return out


def _dense_snf(a: list[list[int]]) -> list[int]:
    """Nonzero SNF diagonal of a small dense integer matrix."""
    if not a:
        return []
    a = [row[:] for row in a]
    m, n = len(a), len(a[0])
    diag: list[int] = []
    top = 0
    while True:
        # find the nonzero entry of smallest magnitude in the active block
        piv = None
        for i in range(top, m):
            for j in range(top, n):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        pi, pj = piv
        a[top], a[pi] = a[pi], a[top]
        for row in a:
            row[top], row[pj] = row[pj], row[top]
        clean = True
        p = a[top][top]
        for i in range(top + 1, m):
            q = a[i][top] // p
            if q:
                for j in range(top, n):
                    a[i][j] -= q * a[top][j]
            if a[i][top]:
                clean = False
        for j in range(top + 1, n):
            q = a[top][j] // p
            if q:
                for i in range(top, m):
                    a[i][j] -= q * a[i][top]
            if a[top][j]:
                clean = False
        if not clean:
            continue
        # ensure p divides the rest of the block; if not, fold a bad row in
        bad = None
        for i in range(top + 1, m):
            for j in range(top + 1, n):
                if a[i][j] % p:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            for j in range(top, n):
                a[top][j] += a[bad][j]
            continue
        diag.append(abs(p))
        top += 1
        if top >= m or top >= n:
            for i in range(top, m):
                if any(a[i][j] for j in range(top, n)):
                    raise AssertionError("snf sweep missed entries")
            break
    return diag


def factor_prime_powers(n: int) -> list[int]:
    """Prime-power factors of ``n`` (>1), e.g. 12 -> [3, 4]."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            pk = 1
            while n % d == 0:
                pk *= d
                n //= d
            out.append(pk)
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return sorted(out)
