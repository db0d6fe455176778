# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Incremental row echelon over Z/pZ with sparse pivot rows.

Columns are local indices 0..ncols-1 of one elimination block.  Pivot rows
are stored as (column, residue) arrays normalised so the pivot entry is 1;
a row with pivot c is zero left of c.  Reduction uses one dense work vector
and only scans the column window a vector can reach.  Residues are < 2**31,
so a product of two fits in 62 bits and one reduction per multiply-add is
enough.
"""
from libc.stdint cimport uint32_t, uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, realloc, free
from libc.string cimport memset


cdef uint64_t _inv(uint64_t a, uint64_t p):
    # extended Euclid on signed values
    cdef int64_t t = 0, newt = 1, r = <int64_t>p, newr = <int64_t>a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += <int64_t>p
    return <uint64_t>t


cdef class ModEchelon:
    cdef readonly Py_ssize_t ncols
    cdef readonly uint64_t prime
    cdef readonly Py_ssize_t rank
    cdef Py_ssize_t capacity
    cdef uint32_t** rvals           # per row: residues after the pivot
    cdef Py_ssize_t** rcols         # per row: their columns, increasing
    cdef Py_ssize_t* rlen
    cdef Py_ssize_t* pivot_row      # per column: row index or -1
    cdef Py_ssize_t* pivot_col      # per row
    cdef uint64_t* work
    cdef Py_ssize_t hi              # last column of work that may be nonzero

    def __cinit__(self, Py_ssize_t ncols, uint64_t prime):
        cdef Py_ssize_t i
        if prime >= (1ULL << 31):
            raise ValueError("prime must be below 2**31")
        self.ncols = ncols
        self.prime = prime
        self.rank = 0
        self.capacity = 0
        self.rvals = NULL
        self.rcols = NULL
        self.rlen = NULL
        self.pivot_col = NULL
        self.hi = -1
        self.pivot_row = <Py_ssize_t*>malloc(max(ncols, 1) * sizeof(Py_ssize_t))
        self.work = <uint64_t*>calloc(max(ncols, 1), sizeof(uint64_t))
        if self.pivot_row == NULL or self.work == NULL:
            raise MemoryError()
        for i in range(ncols):
            self.pivot_row[i] = -1

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.rvals != NULL:
            for i in range(self.rank):
                free(self.rvals[i])
                free(self.rcols[i])
        free(self.rvals)
        free(self.rcols)
        free(self.rlen)
        free(self.pivot_row)
        free(self.pivot_col)
        free(self.work)

    cdef int _grow(self) except -1:
        cdef Py_ssize_t newcap = 16 if self.capacity == 0 else 2 * self.capacity
        cdef uint32_t** rv = <uint32_t**>realloc(self.rvals, newcap * sizeof(uint32_t*))
        if rv == NULL:
            raise MemoryError()
        self.rvals = rv
        cdef Py_ssize_t** rc = <Py_ssize_t**>realloc(self.rcols, newcap * sizeof(Py_ssize_t*))
        if rc == NULL:
            raise MemoryError()
        self.rcols = rc
        cdef Py_ssize_t* rl = <Py_ssize_t*>realloc(self.rlen, newcap * sizeof(Py_ssize_t))
        if rl == NULL:
            raise MemoryError()
        self.rlen = rl
        cdef Py_ssize_t* pc = <Py_ssize_t*>realloc(self.pivot_col, newcap * sizeof(Py_ssize_t))
        if pc == NULL:
            raise MemoryError()
        self.pivot_col = pc
        self.capacity = newcap
        return 0

    cdef void _clear(self) nogil:
        if self.hi >= 0:
            memset(self.work, 0, (self.hi + 1) * sizeof(uint64_t))
        self.hi = -1

    cdef Py_ssize_t _load(self, cols, vals) except -2:
        cdef Py_ssize_t lead = self.ncols, c, k
        cdef Py_ssize_t m = len(cols)
        cdef uint64_t p = self.prime
        cdef int64_t v
        if len(vals) != m:
            raise ValueError("cols and vals differ in length")
        for k in range(m):
            c = cols[k]
            if c < 0 or c >= self.ncols:
                self._clear()
                raise IndexError(f"column {c} out of range")
            v = vals[k] % <int64_t>p
            self.work[c] = (self.work[c] + <uint64_t>v) % p
            if c < lead:
                lead = c
            if c > self.hi:
                self.hi = c
        return lead

    cdef Py_ssize_t _reduce(self, Py_ssize_t lead) nogil:
        # returns first column that is nonzero and has no pivot, or ncols
        cdef Py_ssize_t c, k, r, m
        cdef uint64_t p = self.prime, factor
        cdef uint64_t* work = self.work
        cdef uint32_t* vals
        cdef Py_ssize_t* cols
        c = lead
        while c <= self.hi:
            if work[c] == 0:
                c += 1
                continue
            r = self.pivot_row[c]
            if r < 0:
                return c
            factor = p - work[c]
            work[c] = 0
            vals = self.rvals[r]
            cols = self.rcols[r]
            m = self.rlen[r]
            for k in range(m):
                work[cols[k]] = (work[cols[k]] + factor * vals[k]) % p
            if m and cols[m - 1] > self.hi:
                self.hi = cols[m - 1]
            c += 1
        self.hi = -1
        return self.ncols

    def insert(self, cols, vals):
        """Reduce a sparse vector; store it if independent.  True if rank grew."""
        cdef Py_ssize_t lead = self._load(cols, vals)
        cdef Py_ssize_t c, j, k, m, n = self.ncols
        cdef uint64_t p = self.prime, inv
        if lead >= n:
            return False
        c = self._reduce(lead)
        if c >= n:
            return False
        if self.rank == self.capacity:
            self._grow()
        m = 0
        for j in range(c + 1, self.hi + 1):
            if self.work[j]:
                m += 1
        cdef uint32_t* rv = <uint32_t*>malloc(max(m, 1) * sizeof(uint32_t))
        cdef Py_ssize_t* rc = <Py_ssize_t*>malloc(max(m, 1) * sizeof(Py_ssize_t))
        if rv == NULL or rc == NULL:
            free(rv)
            free(rc)
            self._clear()
            raise MemoryError()
        inv = _inv(self.work[c], p)
        k = 0
        for j in range(c + 1, self.hi + 1):
            if self.work[j]:
                rc[k] = j
                rv[k] = <uint32_t>((self.work[j] * inv) % p)
                k += 1
        self._clear()
        self.rvals[self.rank] = rv
        self.rcols[self.rank] = rc
        self.rlen[self.rank] = m
        self.pivot_row[c] = self.rank
        self.pivot_col[self.rank] = c
        self.rank += 1
        return True

    def contains(self, cols, vals):
        """True iff the vector lies in the span of the stored rows."""
        cdef Py_ssize_t lead = self._load(cols, vals)
        cdef Py_ssize_t c, n = self.ncols
        if lead >= n:
            return True
        c = self._reduce(lead)
        if c < n:
            self._clear()
            return False
        return True

    def pivots(self):
        return sorted(self.pivot_col[i] for i in range(self.rank))

    def row(self, Py_ssize_t i):
        """Stored row i (insertion order) as a list of (col, residue)."""
        cdef Py_ssize_t k
        if not 0 <= i < self.rank:
            raise IndexError(i)
        out = [(self.pivot_col[i], 1)]
        for k in range(self.rlen[i]):
            out.append((self.rcols[i][k], self.rvals[i][k]))
        return out

    def row_for_pivot(self, Py_ssize_t c):
        if not 0 <= c < self.ncols or self.pivot_row[c] < 0:
            raise KeyError(c)
        return self.row(self.pivot_row[c])
