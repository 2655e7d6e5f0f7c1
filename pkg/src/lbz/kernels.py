"""Kernel selection: compiled echelon core with a pure-Python fallback.

The compiled extension ``lbz._ckernels`` is used when it imports; set
``LBZ_KERNEL=python`` to force the fallback.  The compiled rows are int64;
whenever an operation would overflow, the basis is migrated to the
arbitrary-precision Python kernel and the operation is replayed there, so
results never depend on which kernel ran.
"""

from __future__ import annotations

import logging
import os
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from ._pykernels import PyEchelon

log = logging.getLogger(__name__)

try:
    from ._ckernels import CEchelon
except ImportError:  # pragma: no cover - depends on the build
    CEchelon = None

COMPILED_AVAILABLE = CEchelon is not None


def default_backend() -> str:
    choice = os.environ.get("LBZ_KERNEL", "auto").lower()
    if choice == "python" or not COMPILED_AVAILABLE:
        return "python"
    return "compiled"


class Echelon:
    """Incremental exact row echelon basis over Q of integer vectors.

    Vectors are sparse ``{column: int}`` maps.  See :class:`PyEchelon` for the
    row invariant.
    """

    def __init__(self, ncols: int, backend: Optional[str] = None):
        backend = backend or default_backend()
        if backend == "compiled":
            if not COMPILED_AVAILABLE:
                raise RuntimeError("compiled kernel is not built")
            self._impl = CEchelon(ncols)
        elif backend == "python":
            self._impl = PyEchelon(ncols)
        else:
            raise ValueError(f"unknown backend {backend!r}")
        self.ncols = ncols

    @property
    def backend(self) -> str:
        return self._impl.backend

    @property
    def rank(self) -> int:
        return self._impl.rank

    def _migrate(self):
        log.info("int64 overflow in compiled kernel; switching to Python integers")
        self._impl = PyEchelon.from_rows(self.ncols, self._impl.rows())

    def _call(self, name, vec):
        try:
            return getattr(self._impl, name)(vec)
        except OverflowError:
            if self._impl.backend == "python":
                raise
            self._migrate()
            return getattr(self._impl, name)(vec)

    def add(self, vec: Mapping[int, int]) -> bool:
        return self._call("add", vec)

    def reduce(self, vec: Mapping[int, int]) -> Dict[int, Fraction]:
        return self._call("reduce", vec)

    def contains(self, vec: Mapping[int, int]) -> bool:
        return self._call("contains", vec)

    def rows(self) -> List[Tuple[int, Dict[int, int]]]:
        return self._impl.rows()

    def pivots(self) -> List[int]:
        return self._impl.pivots()
