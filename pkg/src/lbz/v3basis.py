"""The theta basis of ``P_n(V3~)`` and the rewriting normal form.

A theta element is ``x_i (x_i1 x_j1) ... (x_im x_jm) x_k1 ... x_kr`` with
``i_s < j_s``, ``i_1 < ... < i_m``, ``j_1 < ... < j_m`` and ``k_1 < ... < k_r``.

Rewriting works on monomials ``(head, pairs, singles)`` meaning
``x_head * pair_1 * ... * pair_m * single_1 * ... * single_r``.  Modulo
``x(y(zt)) = 0`` brackets commute with each other and with single letters,
so pairs are kept as a sorted tuple.  The rules are

* ``u (y z) = -u (z y)``                      (orient pairs)
* ``u y z = u z y + u (y z)``                  (sort singles)
* ``u (ad)(bc) = u (ac)(bd) - u (ab)(cd)``,  ``a<b<c<d``  (remove nestings)

For fixed ``m`` the last rule strictly decreases the sequence
``(j_1, ..., j_m)`` lexicographically, and the second one either removes an
inversion or removes two singles, so the process terminates.
"""

from __future__ import annotations

import itertools
import random
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import ParseError
from .heisenberg import evaluate, random_assignment, theorem2_assignment
from .kernels import Echelon
from .linalg import integer_row, solve
from .term import (
    Leaf,
    LinComb,
    Mul,
    Term,
    TermComb,
    leaves,
    leibniz_reduce,
    product,
    reduce_lincomb,
)

Pair = Tuple[int, int]


@dataclass(frozen=True, order=True)
class ThetaElement:
    n: int
    head: int
    pairs: Tuple[Pair, ...] = ()
    singles: Tuple[int, ...] = ()

    @property
    def m(self) -> int:
        return len(self.pairs)

    def sort_key(self):
        return (self.m, self.head, self.pairs, self.singles)

    def validate(self) -> "ThetaElement":
        used = [self.head] + [i for p in self.pairs for i in p] + list(self.singles)
        if sorted(used) != list(range(1, self.n + 1)):
            raise ValueError(f"{self} does not partition 1..{self.n}")
        if any(i >= j for i, j in self.pairs):
            raise ValueError(f"{self}: pairs must satisfy i_s < j_s")
        firsts = [i for i, _ in self.pairs]
        seconds = [j for _, j in self.pairs]
        if firsts != sorted(firsts) or seconds != sorted(seconds):
            raise ValueError(f"{self}: pair entries must increase")
        if list(self.singles) != sorted(self.singles):
            raise ValueError(f"{self}: singles must increase")
        return self

    def to_term(self) -> Term:
        factors = [Leaf(self.head)]
        factors += [Mul(Leaf(i), Leaf(j)) for i, j in self.pairs]
        factors += [Leaf(k) for k in self.singles]
        return product(*factors)

    def __str__(self):
        pairs = "".join(f"({i},{j})" for i, j in self.pairs)
        singles = ",".join(str(k) for k in self.singles)
        return f"theta({self.head}; {pairs}; {singles})"


ThetaCoordinates = Dict[ThetaElement, Fraction]

_THETA = re.compile(r"^\s*theta\s*\(\s*(\d+)\s*;([^;]*);([^;)]*)\)\s*$")
_PAIR = re.compile(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def parse_theta(text: str) -> ThetaElement:
    m = _THETA.match(text)
    if not m:
        raise ParseError(f"malformed theta element {text!r}")
    pair_text = m.group(2).strip()
    pairs = tuple((int(a), int(b)) for a, b in _PAIR.findall(pair_text))
    if _PAIR.sub("", pair_text).strip():
        raise ParseError(f"malformed pair list in {text!r}")
    singles_text = m.group(3).strip()
    singles = tuple(int(s) for s in singles_text.split(",")) if singles_text else ()
    head = int(m.group(1))
    n = 1 + 2 * len(pairs) + len(singles)
    try:
        return ThetaElement(n, head, pairs, singles).validate()
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _nonnesting_matchings(points: Sequence[int]):
    """Matchings of a sorted point list with increasing firsts and seconds."""
    size = len(points)
    m = size // 2

    def rec(pos: int, openers: Tuple[int, ...], closers: Tuple[int, ...]):
        if pos == size:
            yield tuple(zip(openers, closers))
            return
        p = points[pos]
        if len(openers) < m:
            yield from rec(pos + 1, openers + (p,), closers)
        if len(closers) < len(openers):
            yield from rec(pos + 1, openers, closers + (p,))

    yield from rec(0, (), ())


def enumerate_theta(n: int) -> List[ThetaElement]:
    """All theta elements of degree ``n``, ordered by ``m`` then lexicographically."""
    if n < 1:
        raise ValueError("n must be at least 1")
    out = []
    for head in range(1, n + 1):
        rest = [i for i in range(1, n + 1) if i != head]
        for m in range(0, len(rest) // 2 + 1):
            for chosen in itertools.combinations(rest, 2 * m):
                singles = tuple(i for i in rest if i not in chosen)
                for pairs in _nonnesting_matchings(chosen):
                    out.append(ThetaElement(n, head, pairs, singles))
    out.sort(key=ThetaElement.sort_key)
    return out


def theta_to_lincomb(theta: ThetaElement) -> LinComb:
    return leibniz_reduce(theta.to_term())


# --------------------------------------------------------------------------
# rewriting

Monomial = Tuple[int, Tuple[Pair, ...], Tuple[int, ...]]


def _orient(p: int, q: int) -> Tuple[Pair, int]:
    return ((p, q), 1) if p < q else ((q, p), -1)


def _with_pair(pairs: Tuple[Pair, ...], p: int, q: int) -> Tuple[Tuple[Pair, ...], int]:
    pair, sign = _orient(p, q)
    return tuple(sorted(pairs + (pair,))), sign


def _spine(t: Term) -> Tuple[int, List[Term]]:
    factors = []
    while isinstance(t, Mul):
        factors.append(t.right)
        t = t.left
    return t.index, factors[::-1]


def _to_monomials(t: Term, coeff: Fraction, out: Dict[Monomial, Fraction]):
    """Expand factors of degree >= 3 with ``u(PQ) = (uP)Q - (uQ)P``, then
    collect brackets in front of the single letters."""
    head, factors = _spine(t)
    stack = [(coeff, factors)]
    while stack:
        c, fs = stack.pop()
        big = next((k for k, f in enumerate(fs) if f.degree >= 3), None)
        if big is not None:
            p, q = fs[big].left, fs[big].right
            stack.append((c, fs[:big] + [p, q] + fs[big + 1:]))
            stack.append((-c, fs[:big] + [q, p] + fs[big + 1:]))
            continue
        pairs: Tuple[Pair, ...] = ()
        singles = []
        sign = 1
        for f in fs:
            if isinstance(f, Leaf):
                singles.append(f.index)
            else:
                pairs, s = _with_pair(pairs, f.left.index, f.right.index)
                sign *= s
        _accumulate(out, (head, pairs, tuple(singles)), sign * c)


def _accumulate(d: Dict, key, c):
    v = d.get(key, 0) + c
    if v:
        d[key] = v
    else:
        d.pop(key, None)


def _first_descent(singles: Tuple[int, ...]) -> Optional[int]:
    for s in range(len(singles) - 1):
        if singles[s] > singles[s + 1]:
            return s
    return None


def find_nesting(pairs: Tuple[Pair, ...]) -> Optional[Tuple[Pair, Pair]]:
    """A nested couple ``(a,d), (b,c)`` with ``a<b<c<d`` to rewrite, or None.

    Pairs are scanned from the bottom: take the two lowest indices; a
    bracket made of exactly those two cannot nest and is set aside.
    Otherwise, if the brackets of the two lowest indices nest, they are the
    pivot.  When they cross, any remaining nesting is taken instead.
    """
    rest = list(pairs)
    while len(rest) >= 2:
        (_, j1), (second, j2) = rest[0], rest[1]
        if j1 < second:
            rest = rest[1:]
            continue
        if j2 < j1:
            return rest[0], rest[1]
        break
    for s, (i_s, j_s) in enumerate(rest):
        for i_t, j_t in rest[s + 1:]:
            if j_t < j_s:
                return (i_s, j_s), (i_t, j_t)
    return None


def reduce_to_theta(e: Union[Term, TermComb, LinComb], n: Optional[int] = None) -> ThetaCoordinates:
    """Coordinates of a multilinear element in the theta basis (by rewriting)."""
    if isinstance(e, (Leaf, Mul)):
        e = TermComb.of(e)
    elif isinstance(e, LinComb):
        e = e.to_terms()
    variables = e.variables()
    for t, _ in e:
        ls = leaves(t)
        if len(set(ls)) != len(ls) or sorted(ls) != list(variables):
            raise ValueError(f"term {t} is not multilinear in {variables}")
    if n is None:
        n = len(variables)
    if variables and tuple(variables) != tuple(range(1, n + 1)):
        raise ValueError(f"expected a multilinear element in x1..x{n}, got variables {variables}")
    pending: Dict[Monomial, Fraction] = {}
    for t, c in e:
        _to_monomials(t, c, pending)
    result: Dict[Monomial, Fraction] = {}
    while pending:
        (head, pairs, singles), c = pending.popitem()
        s = _first_descent(singles)
        if s is not None:
            hi, lo = singles[s], singles[s + 1]
            swapped = singles[:s] + (lo, hi) + singles[s + 2:]
            _accumulate(pending, (head, pairs, swapped), c)
            new_pairs, sign = _with_pair(pairs, hi, lo)
            _accumulate(pending, (head, new_pairs, singles[:s] + singles[s + 2:]), sign * c)
            continue
        nest = find_nesting(pairs)
        if nest is not None:
            (a, d), (b, cc) = nest
            others = [p for p in pairs if p not in nest]
            _accumulate(pending, (head, tuple(sorted(others + [(a, cc), (b, d)])), singles), c)
            _accumulate(pending, (head, tuple(sorted(others + [(a, b), (cc, d)])), singles), -c)
            continue
        _accumulate(result, (head, pairs, singles), c)
    thetas = sorted((ThetaElement(n, h, p, s), c) for (h, p, s), c in result.items())
    return dict(sorted(thetas, key=lambda tc: tc[0].sort_key()))


def coordinates_to_termcomb(coords: ThetaCoordinates) -> TermComb:
    return TermComb({theta.to_term(): c for theta, c in coords.items()})


def coordinates_to_lincomb(coords: ThetaCoordinates) -> LinComb:
    out = LinComb()
    for theta, c in coords.items():
        out = out + theta_to_lincomb(theta) * c
    return out


def coordinates_by_linear_algebra(e: Union[TermComb, LinComb], n: int, max_n: int = 7) -> Optional[ThetaCoordinates]:
    """Coordinates of ``e`` obtained instead by solving modulo the T-ideal."""
    from .variety import builtin_variety, tideal_multilinear

    q = tideal_multilinear(builtin_variety("V3tilde"), n, max_n)
    lc = reduce_lincomb(e) if isinstance(e, TermComb) else e
    thetas = enumerate_theta(n)
    target = q.normal_form(lc)
    columns = [q.normal_form(theta_to_lincomb(t)) for t in thetas]
    support = sorted({w for w, _ in target} | {w for col in columns for w, _ in col})
    if not support:
        return {}
    x = solve([[col.coeff(w) for col in columns] for w in support], [target.coeff(w) for w in support])
    if x is None:
        return None
    return {t: c for t, c in zip(thetas, x) if c}


# --------------------------------------------------------------------------
# verification


def random_term(variables: Sequence[int], rng: random.Random) -> Term:
    vs = list(variables)
    rng.shuffle(vs)

    def build(letters):
        if len(letters) == 1:
            return Leaf(letters[0])
        cut = rng.randint(1, len(letters) - 1)
        return Mul(build(letters[:cut]), build(letters[cut:]))

    return build(vs)


def random_multilinear_element(n: int, rng: random.Random, terms: int = 4) -> TermComb:
    data = [(random_term(range(1, n + 1), rng), rng.choice([-3, -2, -1, 1, 2, 3])) for _ in range(terms)]
    return TermComb(data)


def evaluation_matrix_rank(n: int, fdeg: Optional[int] = None) -> Tuple[int, int]:
    """Rank of ``M[theta', theta] = value of theta' under theorem2_assignment(theta)``.

    Each H~ value contributes its coordinates ``(a, b, c, f_0, ..)``.
    Returns ``(rank, number of theta elements)``.
    """
    fdeg = n if fdeg is None else fdeg
    thetas = enumerate_theta(n)
    width = 3 + fdeg + n + 1
    assignments = [theorem2_assignment(t, n, fdeg) for t in thetas]
    terms = [t.to_term() for t in thetas]
    ech = Echelon(width * len(thetas))
    for term in terms:
        row = {}
        for col, a in enumerate(assignments):
            for k, c in enumerate(evaluate(term, a).coordinates(width - 3)):
                if c:
                    row[col * width + k] = c
        ech.add(integer_row(row))
    return ech.rank, len(thetas)


@dataclass
class Theorem2Report:
    n: int
    theta_count: int
    quotient_dimension: int
    evaluation_rank: int
    samples: int
    assignments_per_sample: int
    consistency_failures: int
    linear_algebra_failures: int
    seconds: float = 0.0
    details: List[str] = field(default_factory=list)

    @property
    def span_ok(self) -> bool:
        return self.theta_count == self.quotient_dimension

    @property
    def independence_ok(self) -> bool:
        return self.evaluation_rank == self.theta_count

    @property
    def consistency_ok(self) -> bool:
        return self.consistency_failures == 0 and self.linear_algebra_failures == 0

    @property
    def passed(self) -> bool:
        return self.span_ok and self.independence_ok and self.consistency_ok

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "theta_count": self.theta_count,
            "quotient_dimension": self.quotient_dimension,
            "span_ok": self.span_ok,
            "evaluation_rank": self.evaluation_rank,
            "independence_ok": self.independence_ok,
            "samples": self.samples,
            "assignments_per_sample": self.assignments_per_sample,
            "consistency_failures": self.consistency_failures,
            "linear_algebra_failures": self.linear_algebra_failures,
            "consistency_ok": self.consistency_ok,
            "passed": self.passed,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"{status}: n={self.n} span {self.theta_count}/{self.quotient_dimension} "
            f"({'OK' if self.span_ok else 'MISMATCH'}); independence rank {self.evaluation_rank}/"
            f"{self.theta_count} ({'OK' if self.independence_ok else 'DEFICIENT'}); normal form "
            f"{self.samples} samples x {self.assignments_per_sample} evaluations, "
            f"{self.consistency_failures} evaluation / {self.linear_algebra_failures} ideal failures"
        )


def verify_theorem2(n: int, samples: int = 50, assignments: int = 10, seed: int = 0,
                    fdeg: Optional[int] = None, max_n: int = 7) -> Theorem2Report:
    from .variety import builtin_variety, tideal_multilinear

    start = time.perf_counter()
    q = tideal_multilinear(builtin_variety("V3tilde"), n, max_n)
    thetas = enumerate_theta(n)
    rank, _ = evaluation_matrix_rank(n, fdeg)
    rng = random.Random(seed)
    eval_fail = ideal_fail = 0
    details = []
    for _ in range(samples):
        e = random_multilinear_element(n, rng)
        coords = reduce_to_theta(e, n)
        image = coordinates_to_termcomb(coords)
        if not q.contains(reduce_lincomb(e) - reduce_lincomb(image)):
            ideal_fail += 1
            details.append(f"not congruent modulo the ideal: {e}")
        for _ in range(assignments):
            a = random_assignment(range(1, n + 1), rng)
            if evaluate(e, a) != evaluate(image, a):
                eval_fail += 1
                details.append(f"H~ values differ: {e}")
                break
    return Theorem2Report(n, len(thetas), q.dimension, rank, samples, assignments, eval_fail,
                          ideal_fail, time.perf_counter() - start, details)
