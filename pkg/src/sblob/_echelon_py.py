"""Pure-Python twin of the compiled modular echelon (same API, sparse rows)."""
from __future__ import annotations

import heapq


class ModEchelon:
    def __init__(self, ncols: int, prime: int):
        if prime >= 1 << 31:
            raise ValueError("prime must be below 2**31")
        self.ncols = ncols
        self.prime = prime
        self.rank = 0
        self._rows: list[dict[int, int]] = []
        self._pivot_row: dict[int, int] = {}

    def _load(self, cols, vals) -> dict[int, int]:
        if len(cols) != len(vals):
            raise ValueError("cols and vals differ in length")
        p = self.prime
        work: dict[int, int] = {}
        for c, v in zip(cols, vals):
            if not 0 <= c < self.ncols:
                raise IndexError(f"column {c} out of range")
            s = (work.get(c, 0) + v) % p
            if s:
                work[c] = s
            else:
                work.pop(c, None)
        return work

    def _reduce(self, work: dict[int, int]) -> int | None:
        """Eliminate pivot columns in increasing order; return a free leading column."""
        p = self.prime
        heap = list(work)
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = work.get(c)
            if not a:
                continue
            r = self._pivot_row.get(c)
            if r is None:
                return c
            factor = p - a
            for j, x in self._rows[r].items():
                s = (work.get(j, 0) + factor * x) % p
                if s:
                    if j not in work:
                        heapq.heappush(heap, j)
                    work[j] = s
                else:
                    work.pop(j, None)
        return None

    def insert(self, cols, vals) -> bool:
        work = self._load(cols, vals)
        if not work:
            return False
        c = self._reduce(work)
        if c is None:
            return False
        p = self.prime
        inv = pow(work[c], -1, p)
        row = {j: x * inv % p for j, x in work.items() if j >= c and x}
        self._pivot_row[c] = len(self._rows)
        self._rows.append(row)
        self.rank += 1
        return True

    def contains(self, cols, vals) -> bool:
        work = self._load(cols, vals)
        return not work or self._reduce(work) is None

    def pivots(self) -> list[int]:
        return sorted(self._pivot_row)

    def row(self, i: int) -> list[tuple[int, int]]:
        if not 0 <= i < self.rank:
            raise IndexError(i)
        return sorted(self._rows[i].items())

    def row_for_pivot(self, c: int) -> list[tuple[int, int]]:
        return self.row(self._pivot_row[c])
