"""Symmetric group characters and the S_n-module structure of ``P_n(V)``.

Partitions are plain tuples of weakly decreasing positive integers.
Irreducible characters come from the Murnaghan-Nakayama rule on beta-sets.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod
from typing import Dict, List, Sequence, Tuple

from .errors import InvariantViolation

Partition = Tuple[int, ...]
ClassFunction = Dict[Partition, Fraction]
CharacterDecomposition = Dict[Partition, int]


def validate_partition(parts: Sequence[int]) -> Partition:
    p = tuple(int(x) for x in parts)
    if any(x < 1 for x in p) or any(p[i] < p[i + 1] for i in range(len(p) - 1)):
        raise ValueError(f"{parts!r} is not a partition")
    return p


def partitions(n: int) -> List[Partition]:
    """All partitions of ``n`` in reverse lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    out: List[Partition] = []

    def rec(remaining: int, largest: int, prefix: Tuple[int, ...]):
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(remaining, largest), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(n, n, ())
    return out


def class_size(mu: Sequence[int]) -> int:
    """Number of permutations of cycle type ``mu``: ``n! / prod k^m_k m_k!``."""
    mu = validate_partition(mu)
    counts = Counter(mu)
    return factorial(sum(mu)) // prod(k ** m * factorial(m) for k, m in counts.items())


@lru_cache(maxsize=None)
def _mn(beta: Tuple[int, ...], mu: Tuple[int, ...]) -> int:
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    beads = set(beta)
    total = 0
    for b in beta:
        target = b - r
        if target < 0 or target in beads:
            continue
        between = sum(1 for c in beta if target < c < b)
        new_beta = tuple(sorted((beads - {b}) | {target}, reverse=True))
        total += (-1) ** between * _mn(new_beta, rest)
    return total


def irreducible_character(lam: Sequence[int], mu: Sequence[int]) -> int:
    """``chi_lambda`` at the class of cycle type ``mu`` (Murnaghan-Nakayama)."""
    lam, mu = validate_partition(lam), validate_partition(mu)
    if sum(lam) != sum(mu):
        raise ValueError(f"size mismatch: |{lam}| != |{mu}|")
    ell = len(lam)
    beta = tuple(lam[i] + ell - 1 - i for i in range(ell))
    return _mn(beta, tuple(sorted(mu, reverse=True)))


def dimension(lam: Sequence[int]) -> int:
    lam = validate_partition(lam)
    return irreducible_character(lam, (1,) * sum(lam))


def character_table(n: int) -> Dict[Partition, Dict[Partition, int]]:
    return {lam: {mu: irreducible_character(lam, mu) for mu in partitions(n)} for lam in partitions(n)}


def inner_product(chi: ClassFunction, psi: ClassFunction, n: int) -> Fraction:
    total = Fraction(0)
    for mu in partitions(n):
        total += class_size(mu) * Fraction(chi[mu]) * Fraction(psi[mu])
    return total / factorial(n)


def _size(chi: ClassFunction) -> int:
    sizes = {sum(mu) for mu in chi}
    if len(sizes) != 1:
        raise ValueError("class function must be defined on the classes of a single S_n")
    return sizes.pop()


def decompose(chi: ClassFunction) -> CharacterDecomposition:
    """Multiplicities ``m_lambda = <chi, chi_lambda>``; must be nonnegative integers."""
    n = _size(chi)
    missing = set(partitions(n)) - set(chi)
    if missing:
        raise ValueError(f"class function is missing classes {sorted(missing)}")
    out: CharacterDecomposition = {}
    for lam in partitions(n):
        m = inner_product(chi, {mu: irreducible_character(lam, mu) for mu in partitions(n)}, n)
        if m.denominator != 1 or m < 0:
            raise InvariantViolation(f"multiplicity of {lam} is {m}; not a genuine character")
        out[lam] = int(m)
    return out


def colength(d: CharacterDecomposition) -> int:
    return sum(d.values())


# --------------------------------------------------------------------------
# the S_n-module P_n(V)


def representative(mu: Sequence[int], variant: int = 0) -> Tuple[int, ...]:
    """A permutation of cycle type ``mu`` as a tuple ``sigma[i-1] = sigma(i)``.

    ``variant=0`` uses consecutive cycles ``(1 2 .. mu1)(..)``; ``variant=1``
    conjugates that by the reversal ``i -> n+1-i``.
    """
    mu = validate_partition(mu)
    n = sum(mu)
    sigma = list(range(1, n + 1))
    start = 1
    for length in mu:
        cycle = list(range(start, start + length))
        for pos, i in enumerate(cycle):
            sigma[i - 1] = cycle[(pos + 1) % length]
        start += length
    if variant == 0:
        return tuple(sigma)
    rev = lambda i: n + 1 - i  # noqa: E731
    return tuple(rev(sigma[rev(i) - 1]) for i in range(1, n + 1))


def module_character(v, n: int, max_n: int = None, variant: int = 0) -> ClassFunction:
    """Character of ``P_n(v)``: trace of each class representative on the quotient.

    The quotient basis is the set of non-pivot words of the echelonized
    ideal; a pivot word ``u`` has normal form ``-(row_u off its pivot)``.
    """
    from .variety import DEFAULT_MAX_DEGREE, tideal_multilinear

    q = tideal_multilinear(v, n, DEFAULT_MAX_DEGREE if max_n is None else max_n)
    pivot_rows = dict(zip(q.ideal.pivots, q.ideal.rows))
    basis = q.ideal.nonpivots()
    chi: ClassFunction = {}
    for mu in partitions(n):
        sigma = representative(mu, variant)
        trace = Fraction(0)
        for col in basis:
            image = q.index[tuple(sigma[i - 1] for i in q.words[col])]
            if image == col:
                trace += 1
            elif image in pivot_rows:
                trace -= pivot_rows[image].get(col, 0)
        chi[mu] = trace
    return chi
