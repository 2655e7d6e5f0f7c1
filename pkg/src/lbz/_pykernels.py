"""Pure-Python fraction-free echelon kernel (sparse integer rows)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, List, Mapping, Tuple

IntVec = Dict[int, int]


def _primitive(v: IntVec) -> Tuple[IntVec, int]:
    g = 0
    for c in v.values():
        g = gcd(g, c)
        if g == 1:
            return v, 1
    if g > 1:
        return {k: c // g for k, c in v.items()}, g
    return v, 1


class PyEchelon:
    """Fully reduced echelon basis of integer row vectors.

    Rows are primitive integer vectors with a positive pivot entry; every
    other row is zero in each pivot column, so row ``p`` divided by its
    pivot entry is the RREF row.
    """

    backend = "python"

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._rows: Dict[int, IntVec] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    def _check(self, vec: Mapping[int, int]) -> IntVec:
        v = {}
        for k, c in vec.items():
            if c:
                if not 0 <= k < self.ncols:
                    raise IndexError(f"column {k} out of range for {self.ncols} columns")
                v[k] = int(c)
        return v

    def _eliminate(self, v: IntVec) -> Tuple[IntVec, Fraction]:
        scale = Fraction(1)
        rows = self._rows
        for p in [c for c in v if c in rows]:
            r = rows[p]
            a, b = r[p], v[p]
            if a != 1:
                v = {k: a * c for k, c in v.items()}
                scale *= a
            for k, c in r.items():
                val = v.get(k, 0) - b * c
                if val:
                    v[k] = val
                else:
                    del v[k]
            v, g = _primitive(v)
            if g != 1:
                scale /= g
        return v, scale

    def reduce(self, vec: Mapping[int, int]) -> Dict[int, Fraction]:
        """Normal form of ``vec`` modulo the row space (supported off the pivots)."""
        v, scale = self._eliminate(self._check(vec))
        return {k: c / scale for k, c in v.items()}

    def contains(self, vec: Mapping[int, int]) -> bool:
        v, _ = self._eliminate(self._check(vec))
        return not v

    def add(self, vec: Mapping[int, int]) -> bool:
        v, _ = self._eliminate(self._check(vec))
        if not v:
            return False
        v, _ = _primitive(v)
        q = min(v)
        if v[q] < 0:
            v = {k: -c for k, c in v.items()}
        a = v[q]
        for p, r in self._rows.items():
            b = r.get(q)
            if not b:
                continue
            if a != 1:
                r = {k: a * c for k, c in r.items()}
            for k, c in v.items():
                val = r.get(k, 0) - b * c
                if val:
                    r[k] = val
                else:
                    del r[k]
            self._rows[p] = _primitive(r)[0]
        self._rows[q] = v
        return True

    def rows(self) -> List[Tuple[int, IntVec]]:
        return [(p, dict(self._rows[p])) for p in sorted(self._rows)]

    def pivots(self) -> List[int]:
        return sorted(self._rows)

    @classmethod
    def from_rows(cls, ncols: int, rows) -> "PyEchelon":
        """Adopt rows that already satisfy the fully-reduced invariant."""
        e = cls(ncols)
        for p, r in rows:
            e._rows[p] = dict(r)
        return e
