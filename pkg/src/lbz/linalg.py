"""Exact rational linear algebra: RREF, rank, span membership, solving.

Matrices come in as dense rows of rationals.  Each row is scaled to a
primitive integer vector (row scaling does not change the row space) and
fed to the fraction-free :class:`~lbz.kernels.Echelon` kernel.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .kernels import Echelon

Vector = Sequence[Fraction]


class RationalMatrix:
    """Dense matrix of exact rationals."""

    __slots__ = ("rows", "ncols")

    def __init__(self, rows: Iterable[Sequence], ncols: Optional[int] = None):
        self.rows: Tuple[Tuple[Fraction, ...], ...] = tuple(tuple(Fraction(c) for c in r) for r in rows)
        if ncols is None:
            if not self.rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(self.rows[0])
        for r in self.rows:
            if len(r) != ncols:
                raise ValueError(f"row of length {len(r)} in a matrix with {ncols} columns")
        self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols)


def integer_row(row: Mapping[int, Fraction]) -> Dict[int, int]:
    """Scale a sparse rational row to integers (clearing denominators)."""
    den = 1
    for c in row.values():
        den = lcm(den, Fraction(c).denominator)
    return {k: int(Fraction(c) * den) for k, c in row.items() if c}


def _sparse(v: Sequence) -> Dict[int, Fraction]:
    return {k: Fraction(c) for k, c in enumerate(v) if c}


class Subspace:
    """Row space in reduced row-echelon form.

    ``rows[i]`` is a sparse map column -> value with a 1 at ``pivots[i]`` and
    zeros in every other pivot column.
    """

    def __init__(self, ncols: int, echelon: Echelon):
        self.ncols = ncols
        self._ech = echelon
        self.pivots: Tuple[int, ...] = tuple(echelon.pivots())
        self._rows: Optional[Tuple[Dict[int, Fraction], ...]] = None

    @property
    def rows(self) -> Tuple[Dict[int, Fraction], ...]:
        if self._rows is None:
            self._rows = tuple({k: Fraction(c, r[p]) for k, c in r.items()} for p, r in self._ech.rows())
        return self._rows

    @classmethod
    def from_echelon(cls, echelon: Echelon) -> "Subspace":
        return cls(echelon.ncols, echelon)

    @property
    def dim(self) -> int:
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def basis(self) -> List[List[Fraction]]:
        out = []
        for r in self.rows:
            dense = [Fraction(0)] * self.ncols
            for k, c in r.items():
                dense[k] = c
            out.append(dense)
        return out

    def nonpivots(self) -> List[int]:
        ps = set(self.pivots)
        return [k for k in range(self.ncols) if k not in ps]

    def _int(self, v) -> Dict[int, int]:
        if isinstance(v, Mapping):
            sparse = {k: Fraction(c) for k, c in v.items() if c}
            if any(not 0 <= k < self.ncols for k in sparse):
                raise ValueError("vector index out of range")
        else:
            if len(v) != self.ncols:
                raise ValueError(f"vector of length {len(v)} does not match {self.ncols} columns")
            sparse = _sparse(v)
        return integer_row(sparse)

    def contains(self, v) -> bool:
        return self._ech.contains(self._int(v))

    def normal_form(self, v) -> Dict[int, Fraction]:
        """Sparse remainder of ``v`` modulo the subspace (zero on pivot columns)."""
        if isinstance(v, Mapping):
            sparse = {k: Fraction(c) for k, c in v.items() if c}
        else:
            if len(v) != self.ncols:
                raise ValueError(f"vector of length {len(v)} does not match {self.ncols} columns")
            sparse = _sparse(v)
        den = 1
        for c in sparse.values():
            den = lcm(den, c.denominator)
        nf = self._ech.reduce({k: int(c * den) for k, c in sparse.items()})
        return {k: c / den for k, c in nf.items()}

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ncols == other.ncols and self.pivots == other.pivots and self.rows == other.rows

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ncols={self.ncols})"


def _as_matrix(m) -> RationalMatrix:
    return m if isinstance(m, RationalMatrix) else RationalMatrix(m)


def rref(m, backend: Optional[str] = None) -> Subspace:
    m = _as_matrix(m)
    ech = Echelon(m.ncols, backend)
    for r in m.rows:
        ech.add(integer_row(_sparse(r)))
    return Subspace.from_echelon(ech)


def rank(m, backend: Optional[str] = None) -> int:
    m = _as_matrix(m)
    ech = Echelon(m.ncols, backend)
    for r in m.rows:
        ech.add(integer_row(_sparse(r)))
    return ech.rank


def contains(s: Subspace, v: Sequence) -> bool:
    return s.contains(v)


def solve(a, b: Sequence) -> Optional[List[Fraction]]:
    """A solution ``x`` of ``a x = b`` with free variables set to 0, or None."""
    a = _as_matrix(a)
    if len(b) != a.nrows:
        raise ValueError("right-hand side length does not match the number of rows")
    k = a.ncols
    s = rref([list(row) + [bi] for row, bi in zip(a.rows, b)] or [[0] * (k + 1)])
    x = [Fraction(0)] * k
    for p, row in zip(s.pivots, s.rows):
        if p == k:
            return None
        x[p] = row.get(k, Fraction(0))
    return x


def nullspace(m) -> List[List[Fraction]]:
    """Basis of ``{x : m x = 0}``, one vector per free column."""
    m = _as_matrix(m)
    s = rref(m)
    pivot_rows = dict(zip(s.pivots, s.rows))
    out = []
    for free in s.nonpivots():
        v = [Fraction(0)] * m.ncols
        v[free] = Fraction(1)
        for p, row in pivot_rows.items():
            v[p] = -row.get(free, Fraction(0))
        out.append(v)
    return out
