# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled fraction-free echelon kernel.

Same contract as ``lbz._pykernels.PyEchelon``.  Basis rows are stored
sparsely (sorted column indices with int64 values); incoming vectors are
reduced in a dense int64 work buffer.  Every multiply and subtract is
overflow-checked.  On overflow ``OverflowError`` is raised before anything
is committed, so the basis stays valid and the caller can continue with
arbitrary-precision rows.
"""

from fractions import Fraction
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memset

cdef extern from *:
    """
    static inline int lbz_mul(long long a, long long b, long long *r) {
        return __builtin_mul_overflow(a, b, r);
    }
    static inline int lbz_sub(long long a, long long b, long long *r) {
        return __builtin_sub_overflow(a, b, r);
    }
    """
    int lbz_mul(long long a, long long b, long long *r) nogil
    int lbz_sub(long long a, long long b, long long *r) nogil


cdef struct Row:
    Py_ssize_t pivot
    Py_ssize_t length
    Py_ssize_t* cols
    long long* vals


cdef inline long long _gcd(long long a, long long b) nogil:
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef long long _dense_primitive(long long* v, Py_ssize_t n) nogil:
    cdef long long g = 0
    cdef Py_ssize_t k
    for k in range(n):
        if v[k]:
            g = _gcd(g, v[k])
            if g == 1:
                return 1
    if g > 1:
        for k in range(n):
            v[k] //= g
    return g if g else 1


cdef void _sparse_primitive(long long* vals, Py_ssize_t length) nogil:
    cdef long long g = 0
    cdef Py_ssize_t k
    for k in range(length):
        g = _gcd(g, vals[k])
        if g == 1:
            return
    if g > 1:
        for k in range(length):
            vals[k] //= g


cdef Py_ssize_t _find(Row* r, Py_ssize_t col) nogil:
    cdef Py_ssize_t lo = 0, hi = r.length, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if r.cols[mid] < col:
            lo = mid + 1
        else:
            hi = mid
    if lo < r.length and r.cols[lo] == col:
        return lo
    return -1


cdef int _combine(Row* r, long long a, Row* v, long long b, Row* out) nogil:
    """out <- a*r - b*v as a merged sparse row; 1 on overflow, 2 on no memory."""
    cdef Py_ssize_t cap = r.length + v.length, i = 0, j = 0, m = 0
    cdef long long s, t
    out.cols = <Py_ssize_t*> malloc(max(cap, 1) * sizeof(Py_ssize_t))
    out.vals = <long long*> malloc(max(cap, 1) * sizeof(long long))
    out.pivot = r.pivot
    if out.cols == NULL or out.vals == NULL:
        return 2
    while i < r.length or j < v.length:
        if j >= v.length or (i < r.length and r.cols[i] < v.cols[j]):
            if lbz_mul(a, r.vals[i], &s):
                return 1
            out.cols[m] = r.cols[i]
            i += 1
        elif i >= r.length or v.cols[j] < r.cols[i]:
            if lbz_mul(b, v.vals[j], &t):
                return 1
            s = -t
            out.cols[m] = v.cols[j]
            j += 1
        else:
            if lbz_mul(a, r.vals[i], &s) or lbz_mul(b, v.vals[j], &t) or lbz_sub(s, t, &s):
                return 1
            out.cols[m] = r.cols[i]
            i += 1
            j += 1
        if s:
            out.vals[m] = s
            m += 1
    out.length = m
    _sparse_primitive(out.vals, m)
    return 0


cdef inline void _free_row(Row* r) nogil:
    free(r.cols)
    free(r.vals)
    r.cols = NULL
    r.vals = NULL


cdef class CEchelon:
    cdef readonly Py_ssize_t ncols
    cdef Py_ssize_t nrows, cap
    cdef Row* rows_
    cdef Py_ssize_t* row_of_col
    cdef long long* tmp

    backend = "compiled"

    def __cinit__(self, Py_ssize_t ncols):
        self.ncols = ncols
        self.nrows = 0
        self.cap = 0
        self.rows_ = NULL
        self.row_of_col = <Py_ssize_t*> malloc(max(ncols, 1) * sizeof(Py_ssize_t))
        self.tmp = <long long*> malloc(max(ncols, 1) * sizeof(long long))
        if self.row_of_col == NULL or self.tmp == NULL:
            raise MemoryError()
        cdef Py_ssize_t k
        for k in range(ncols):
            self.row_of_col[k] = -1

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.rows_ != NULL:
            for i in range(self.nrows):
                _free_row(&self.rows_[i])
            free(self.rows_)
        free(self.row_of_col)
        free(self.tmp)

    @property
    def rank(self):
        return self.nrows

    cdef void _load(self, vec, long long* buf) except *:
        memset(buf, 0, self.ncols * sizeof(long long))
        cdef Py_ssize_t k
        for key, c in vec.items():
            k = key
            if k < 0 or k >= self.ncols:
                raise IndexError(f"column {k} out of range for {self.ncols} columns")
            buf[k] = c

    cdef object _eliminate(self, long long* v, bint track):
        """Reduce ``v`` in place; returns the Fraction scale when ``track``.

        Subtracting a row only creates entries in non-pivot columns, so one
        left-to-right pass clears every pivot column.
        """
        cdef Py_ssize_t c, i, k, n = self.ncols
        cdef long long a, b, s, t, g
        cdef Row* r
        scale = Fraction(1) if track else None
        for c in range(n):
            if v[c] == 0:
                continue
            i = self.row_of_col[c]
            if i < 0:
                continue
            r = &self.rows_[i]
            a = r.vals[_find(r, c)]
            b = v[c]
            if a != 1:
                for k in range(n):
                    if v[k] and lbz_mul(a, v[k], &v[k]):
                        raise OverflowError("int64 overflow in echelon reduction")
            for k in range(r.length):
                if lbz_mul(b, r.vals[k], &t) or lbz_sub(v[r.cols[k]], t, &s):
                    raise OverflowError("int64 overflow in echelon reduction")
                v[r.cols[k]] = s
            if a != 1:
                g = _dense_primitive(v, n)
                if track:
                    scale = scale * a / g
        return scale

    def reduce(self, vec):
        self._load(vec, self.tmp)
        scale = self._eliminate(self.tmp, True)
        cdef Py_ssize_t k
        out = {}
        for k in range(self.ncols):
            if self.tmp[k]:
                out[k] = self.tmp[k] / scale
        return out

    def contains(self, vec):
        self._load(vec, self.tmp)
        self._eliminate(self.tmp, False)
        cdef Py_ssize_t k
        for k in range(self.ncols):
            if self.tmp[k]:
                return False
        return True

    def add(self, vec):
        cdef Py_ssize_t k, m, q = -1, i, pos, n = self.ncols
        cdef long long a, b
        cdef long long* v = self.tmp
        cdef Row new
        cdef Row* staged
        cdef Py_ssize_t* touched
        cdef Py_ssize_t ntouched = 0
        cdef int err = 0
        self._load(vec, v)
        self._eliminate(v, False)
        for k in range(n):
            if v[k]:
                q = k
                break
        if q < 0:
            return False
        _dense_primitive(v, n)
        if v[q] < 0:
            for k in range(n):
                v[k] = -v[k]
        m = 0
        for k in range(n):
            if v[k]:
                m += 1
        new.pivot = q
        new.length = m
        new.cols = <Py_ssize_t*> malloc(m * sizeof(Py_ssize_t))
        new.vals = <long long*> malloc(m * sizeof(long long))
        staged = <Row*> malloc(max(self.nrows, 1) * sizeof(Row))
        touched = <Py_ssize_t*> malloc(max(self.nrows, 1) * sizeof(Py_ssize_t))
        if new.cols == NULL or new.vals == NULL or staged == NULL or touched == NULL:
            _free_row(&new)
            free(staged)
            free(touched)
            raise MemoryError()
        m = 0
        for k in range(n):
            if v[k]:
                new.cols[m] = k
                new.vals[m] = v[k]
                m += 1
        a = new.vals[0]
        # stage a*r - b*new for every row with an entry in column q
        for i in range(self.nrows):
            pos = _find(&self.rows_[i], q)
            if pos < 0:
                continue
            b = self.rows_[i].vals[pos]
            err = _combine(&self.rows_[i], a, &new, b, &staged[ntouched])
            touched[ntouched] = i
            ntouched += 1
            if err:
                break
        if err:
            for k in range(ntouched):
                _free_row(&staged[k])
            _free_row(&new)
            free(staged)
            free(touched)
            if err == 2:
                raise MemoryError()
            raise OverflowError("int64 overflow in echelon insertion")
        for k in range(ntouched):
            _free_row(&self.rows_[touched[k]])
            self.rows_[touched[k]] = staged[k]
        free(staged)
        free(touched)
        if self.nrows == self.cap:
            self._grow()
        self.rows_[self.nrows] = new
        self.row_of_col[q] = self.nrows
        self.nrows += 1
        return True

    cdef void _grow(self) except *:
        cdef Py_ssize_t newcap = self.cap * 2 if self.cap else 16
        cdef Row* nr = <Row*> realloc(self.rows_, newcap * sizeof(Row))
        if nr == NULL:
            raise MemoryError()
        self.rows_ = nr
        self.cap = newcap

    def rows(self):
        cdef Py_ssize_t i, k
        cdef Row* r
        out = []
        for i in range(self.nrows):
            r = &self.rows_[i]
            out.append((r.pivot, {r.cols[k]: r.vals[k] for k in range(r.length)}))
        out.sort(key=lambda pr: pr[0])
        return out

    def pivots(self):
        return sorted(self.rows_[i].pivot for i in range(self.nrows))
