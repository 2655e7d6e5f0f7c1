"""Free nonassociative terms, left-normed words and Leibniz reduction.

A :class:`Term` is a binary tree over indexed generators ``x1, x2, ...``.
Juxtaposition is left-associative, so ``x1x2x3`` is ``((x1 x2) x3)``.

In a Leibniz algebra ``(xy)z = (xz)y + x(yz)`` every element is a linear
combination of left-normed words, and those words form a basis of the free
algebra.  Words are stored as plain tuples of generator indices; a
:class:`LinComb` maps words to exact rational coefficients.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple, Union

from .errors import ParseError

Word = Tuple[int, ...]
Scalar = Union[int, Fraction]


# --------------------------------------------------------------------------
# terms


@dataclass(frozen=True, slots=True)
class Leaf:
    index: int

    def __post_init__(self):
        if self.index < 1:
            raise ValueError(f"generator index must be >= 1, got {self.index}")

    @property
    def degree(self) -> int:
        return 1

    def __str__(self):
        return format_term(self)


@dataclass(frozen=True, slots=True)
class Mul:
    left: "Term"
    right: "Term"

    @property
    def degree(self) -> int:
        return self.left.degree + self.right.degree

    def __str__(self):
        return format_term(self)


Term = Union[Leaf, Mul]


def x(i: int) -> Leaf:
    return Leaf(i)


def product(*factors: Term) -> Term:
    """Left-normed product of the given terms."""
    if not factors:
        raise ValueError("empty product")
    t = factors[0]
    for f in factors[1:]:
        t = Mul(t, f)
    return t


def word_term(word: Sequence[int]) -> Term:
    return product(*(Leaf(i) for i in word))


def leaves(t: Term) -> Word:
    """Generator indices of ``t`` read left to right."""
    out: List[int] = []
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Leaf):
            out.append(node.index)
        else:
            stack.append(node.right)
            stack.append(node.left)
    return tuple(out)


def head(t: Term) -> int:
    while isinstance(t, Mul):
        t = t.left
    return t.index


def is_left_normed(t: Term) -> bool:
    while isinstance(t, Mul):
        if not isinstance(t.right, Leaf):
            return False
        t = t.left
    return True


def is_multilinear(t: Term) -> bool:
    ls = leaves(t)
    return len(set(ls)) == len(ls)


def substitute(t: Term, mapping: Mapping[int, Term]) -> Term:
    """Replace generators by terms; unmapped generators are kept."""
    if isinstance(t, Leaf):
        return mapping.get(t.index, t)
    return Mul(substitute(t.left, mapping), substitute(t.right, mapping))


def relabel(t: Term, mapping: Mapping[int, int]) -> Term:
    if isinstance(t, Leaf):
        return Leaf(mapping.get(t.index, t.index))
    return Mul(relabel(t.left, mapping), relabel(t.right, mapping))


# --------------------------------------------------------------------------
# parsing and printing

_DIGITS = re.compile(r"\d+")


class _TermParser:
    def __init__(self, text: str, pos: int = 0):
        self.text = text
        self.pos = pos

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, message: str):
        raise ParseError(message, self.text, self.pos)

    def term(self) -> Term:
        t = self.factor()
        while self.peek() in ("x", "("):
            t = Mul(t, self.factor())
        return t

    def factor(self) -> Term:
        c = self.peek()
        if c == "(":
            self.pos += 1
            t = self.term()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return t
        if c == "x":
            start = self.pos
            self.pos += 1
            m = _DIGITS.match(self.text, self.pos)
            if not m:
                self.error("expected digits after 'x'")
            index = int(m.group())
            if index < 1:
                self.pos = start
                self.error("generator index must be >= 1")
            self.pos = m.end()
            return Leaf(index)
        if c == "":
            self.error("unexpected end of input")
        self.error(f"unexpected character {c!r}")


def parse_term(text: str) -> Term:
    """Parse the term grammar ``term := factor {factor}``,
    ``factor := "x" digits | "(" term ")"``."""
    p = _TermParser(text)
    t = p.term()
    if p.peek() != "":
        p.error("trailing input")
    return t


def format_term(t: Term) -> str:
    if isinstance(t, Leaf):
        return f"x{t.index}"
    right = format_term(t.right)
    if isinstance(t.right, Mul):
        right = f"({right})"
    return format_term(t.left) + right


def format_word(w: Word) -> str:
    return "".join(f"x{i}" for i in w)


# --------------------------------------------------------------------------
# linear combinations


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


class _Combination:
    """Finite formal Q-linear combination; zero coefficients are never stored."""

    __slots__ = ("_data",)

    def __init__(self, data=None):
        clean = {}
        if data:
            items = data.items() if isinstance(data, Mapping) else data
            for k, c in items:
                c = _as_fraction(c)
                if c:
                    c = clean.get(k, 0) + c
                    if c:
                        clean[k] = c
                    else:
                        clean.pop(k, None)
        self._data: Dict = clean

    @classmethod
    def _raw(cls, data: dict):
        obj = cls.__new__(cls)
        obj._data = data
        return obj

    @staticmethod
    def _sort_key(key):
        raise NotImplementedError

    @staticmethod
    def _format_key(key) -> str:
        raise NotImplementedError

    def items(self) -> List[Tuple[object, Fraction]]:
        return sorted(self._data.items(), key=lambda kv: self._sort_key(kv[0]))

    def keys(self):
        return [k for k, _ in self.items()]

    def coeff(self, key) -> Fraction:
        return self._data.get(key, Fraction(0))

    def as_dict(self) -> Dict:
        return dict(self._data)

    def __iter__(self) -> Iterator:
        return iter(self.items())

    def __len__(self):
        return len(self._data)

    def __bool__(self):
        return bool(self._data)

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self._data
        if type(other) is not type(self):
            return NotImplemented
        return self._data == other._data

    def __hash__(self):
        return hash(frozenset(self._data.items()))

    def _combine(self, other, sign):
        if type(other) is not type(self):
            return NotImplemented
        out = dict(self._data)
        for k, c in other._data.items():
            v = out.get(k, 0) + sign * c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return type(self)._raw(out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return type(self)._raw({k: -c for k, c in self._data.items()})

    def __mul__(self, scalar):
        if isinstance(scalar, _Combination):
            return NotImplemented
        s = _as_fraction(scalar)
        if not s:
            return type(self)()
        return type(self)._raw({k: s * c for k, c in self._data.items()})

    __rmul__ = __mul__

    def __str__(self):
        return format_combination(self.items(), self._format_key)

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"


def format_combination(items: Iterable[Tuple[object, Fraction]], fmt: Callable[[object], str]) -> str:
    parts = []
    for key, c in items:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        body = fmt(key) if mag == 1 else f"{mag} * {fmt(key)}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts) if parts else "0"


class LinComb(_Combination):
    """Combination of left-normed words (tuples of generator indices)."""

    __slots__ = ()

    @staticmethod
    def _sort_key(word):
        return (len(word), word)

    @staticmethod
    def _format_key(word) -> str:
        return format_word(word)

    @classmethod
    def word(cls, w: Sequence[int], coeff: Scalar = 1) -> "LinComb":
        return cls({tuple(w): coeff})

    def degree(self) -> int:
        degrees = {len(w) for w in self._data}
        if len(degrees) > 1:
            raise ValueError("inhomogeneous combination")
        return degrees.pop() if degrees else 0

    def relabel(self, mapping: Mapping[int, int]) -> "LinComb":
        return LinComb._raw({tuple(mapping.get(i, i) for i in w): c for w, c in self._data.items()})

    def to_terms(self) -> "TermComb":
        return TermComb._raw({word_term(w): c for w, c in self._data.items()})


class TermComb(_Combination):
    """Combination of arbitrary bracketed terms."""

    __slots__ = ()

    @staticmethod
    def _sort_key(t):
        return (t.degree, leaves(t), format_term(t))

    @staticmethod
    def _format_key(t) -> str:
        return format_term(t)

    @classmethod
    def of(cls, t: Term, coeff: Scalar = 1) -> "TermComb":
        return cls({t: coeff})

    def variables(self) -> Tuple[int, ...]:
        return tuple(sorted({i for t in self._data for i in leaves(t)}))

    def relabel(self, mapping: Mapping[int, int]) -> "TermComb":
        return TermComb({relabel(t, mapping): c for t, c in self._data.items()})

    def substitute(self, mapping: Mapping[int, Term]) -> "TermComb":
        return TermComb({substitute(t, mapping): c for t, c in self._data.items()})

    def is_multilinear(self) -> bool:
        return all(is_multilinear(t) for t in self._data)


_COEFF = re.compile(r"\s*(\d+)(?:\s*/\s*(\d+))?\s*\*?")


def parse_lincomb(text: str) -> TermComb:
    """Parse ``[sign] [p/q *] term {(+|-) [p/q *] term}``; ``0`` is the empty sum."""
    src = text.replace("−", "-")
    if src.strip() == "0":
        return TermComb()
    p = _TermParser(src)
    data: List[Tuple[Term, Fraction]] = []
    first = True
    while True:
        c = p.peek()
        sign = 1
        if c in "+-" and c:
            sign = -1 if c == "-" else 1
            p.pos += 1
        elif not first:
            if c == "":
                break
            p.error("expected '+' or '-'")
        elif c == "":
            p.error("empty combination")
        p._skip_ws()
        coeff = Fraction(1)
        m = _COEFF.match(src, p.pos)
        if m and m.group(1) is not None:
            den = int(m.group(2)) if m.group(2) else 1
            if den == 0:
                p.error("zero denominator")
            coeff = Fraction(int(m.group(1)), den)
            p.pos = m.end()
        data.append((p.term(), sign * coeff))
        first = False
        if p.peek() == "":
            break
    return TermComb(data)


# --------------------------------------------------------------------------
# Leibniz reduction


@lru_cache(maxsize=None)
def right_product_pattern(k: int) -> Tuple[Tuple[Tuple[int, ...], int], ...]:
    """Expansion of ``u * (y1 y2 ... yk)`` into left-normed words ``u y_p1 ... y_pk``.

    Returns pairs ``(positions, sign)``; built from
    ``u (V y) = (u V) y - (u y) V``.
    """
    if k == 1:
        return (((0,), 1),)
    prev = right_product_pattern(k - 1)
    last = k - 1
    out = [(perm + (last,), s) for perm, s in prev]
    out += [((last,) + perm, -s) for perm, s in prev]
    return tuple(out)


def word_product(u: Word, v: Word) -> List[Tuple[Word, int]]:
    """Left-normed expansion of the product of two left-normed words."""
    return [(u + tuple(v[p] for p in perm), s) for perm, s in right_product_pattern(len(v))]


def multiply(a: LinComb, b: LinComb) -> LinComb:
    out: Dict[Word, Fraction] = {}
    for u, cu in a._data.items():
        for v, cv in b._data.items():
            c = cu * cv
            for w, s in word_product(u, v):
                val = out.get(w, 0) + s * c
                if val:
                    out[w] = val
                else:
                    del out[w]
    return LinComb._raw(out)


def _reduce_bottom_up(t: Term) -> LinComb:
    if isinstance(t, Leaf):
        return LinComb._raw({(t.index,): Fraction(1)})
    if is_left_normed(t):
        return LinComb._raw({leaves(t): Fraction(1)})
    return multiply(_reduce_bottom_up(t.left), _reduce_bottom_up(t.right))


def _find_redex(t: Term):
    """Path to the innermost-rightmost node ``u (p q)``, or None."""
    if isinstance(t, Leaf):
        return None
    sub = _find_redex(t.right)
    if sub is not None:
        return ("R",) + sub
    sub = _find_redex(t.left)
    if sub is not None:
        return ("L",) + sub
    if isinstance(t.right, Mul):
        return ()
    return None


def _rewrite_at(t: Term, path) -> List[Tuple[Term, int]]:
    if not path:
        u, p, q = t.left, t.right.left, t.right.right
        return [(Mul(Mul(u, p), q), 1), (Mul(Mul(u, q), p), -1)]
    if path[0] == "L":
        return [(Mul(s, t.right), c) for s, c in _rewrite_at(t.left, path[1:])]
    return [(Mul(t.left, s), c) for s, c in _rewrite_at(t.right, path[1:])]


def _reduce_rewrite(t: Term) -> LinComb:
    pending: Dict[Term, Fraction] = {t: Fraction(1)}
    out: Dict[Word, Fraction] = {}
    while pending:
        s, c = pending.popitem()
        path = _find_redex(s)
        if path is None:
            w = leaves(s)
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                del out[w]
            continue
        for r, sign in _rewrite_at(s, path):
            v = pending.get(r, 0) + sign * c
            if v:
                pending[r] = v
            else:
                pending.pop(r, None)
    return LinComb._raw(out)


STRATEGIES = {"bottom-up": _reduce_bottom_up, "rewrite": _reduce_rewrite}


def leibniz_reduce(t: Term, strategy: str = "bottom-up") -> LinComb:
    """Rewrite ``t`` into left-normed words modulo the Leibniz identity.

    ``bottom-up`` multiplies reduced factors with :func:`word_product`;
    ``rewrite`` applies ``u(pq) -> (up)q - (uq)p`` at the innermost-rightmost
    redex.  Both produce the same normal form.
    """
    try:
        fn = STRATEGIES[strategy]
    except KeyError:
        raise ValueError(f"unknown strategy {strategy!r}; use one of {sorted(STRATEGIES)}") from None
    return fn(t)


def reduce_lincomb(c: TermComb, strategy: str = "bottom-up") -> LinComb:
    out = LinComb()
    for t, coeff in c._data.items():
        out = out + leibniz_reduce(t, strategy) * coeff
    return out


# --------------------------------------------------------------------------
# polarization and skew-symmetric elements


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    index = {v: i for i, v in enumerate(sorted(perm))}
    p = [index[v] for v in perm]
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def multidegree(t: Term) -> Tuple[Tuple[int, int], ...]:
    counts: Dict[int, int] = {}
    for i in leaves(t):
        counts[i] = counts.get(i, 0) + 1
    return tuple(sorted(counts.items()))


def _polarize_term(t: Term, fresh: Mapping[int, Sequence[int]]) -> List[Term]:
    """All ways of giving the repeated occurrences of each variable distinct fresh names."""
    ls = leaves(t)
    slots: Dict[int, List[int]] = {}
    for pos, i in enumerate(ls):
        slots.setdefault(i, []).append(pos)
    choices = []
    for i, positions in slots.items():
        names = fresh.get(i)
        if names is None:
            choices.append([tuple((p, i) for p in positions)])
        else:
            choices.append([tuple(zip(positions, perm)) for perm in itertools.permutations(names)])
    out = []
    for combo in itertools.product(*choices):
        assignment = {}
        for part in combo:
            assignment.update(dict(part))
        out.append(_rename_positions(t, assignment))
    return out


def _rename_positions(t: Term, assignment: Mapping[int, int]) -> Term:
    counter = itertools.count()

    def walk(s):
        if isinstance(s, Leaf):
            return Leaf(assignment[next(counter)])
        left = walk(s.left)
        return Mul(left, walk(s.right))

    return walk(t)


def multilinearize(identity: TermComb) -> List[TermComb]:
    """Full polarization of every multihomogeneous component.

    A variable of degree ``d > 1`` is replaced by ``d`` fresh variables
    (numbered after the largest index in use) summed over all placements.
    Components are returned in order of their multidegree.
    """
    components: Dict[Tuple, Dict[Term, Fraction]] = {}
    for t, c in identity._data.items():
        components.setdefault(multidegree(t), {})[t] = c
    top = max(identity.variables(), default=0)
    out = []
    for md in sorted(components):
        fresh: Dict[int, List[int]] = {}
        nxt = top + 1
        for i, d in md:
            if d > 1:
                fresh[i] = list(range(nxt, nxt + d))
                nxt += d
        data: List[Tuple[Term, Fraction]] = []
        for t, c in components[md].items():
            data.extend((s, c) for s in _polarize_term(t, fresh))
        comb = TermComb(data)
        if comb:
            out.append(comb)
    return out


def standardize(c: TermComb) -> TermComb:
    """Relabel the variables of ``c`` order-preservingly onto ``1..k``."""
    mapping = {v: i for i, v in enumerate(c.variables(), start=1)}
    return c.relabel(mapping)


def skew_symmetrize(template: Term, varset: Iterable[int]) -> TermComb:
    """Alternating sum over all permutations of ``varset`` inside ``template``."""
    vs = sorted(set(varset))
    missing = set(vs) - set(leaves(template))
    if missing:
        raise ValueError(f"variables {sorted(missing)} do not occur in the template")
    data = []
    for perm in itertools.permutations(vs):
        data.append((relabel(template, dict(zip(vs, perm))), permutation_sign(perm)))
    return TermComb(data)


def standard_polynomial(variables: Sequence[int]) -> TermComb:
    """``St_n``: alternating sum of all left-normed words in the given variables."""
    vs = list(variables)
    if len(set(vs)) != len(vs):
        raise ValueError("standard polynomial needs distinct variables")
    if not vs:
        raise ValueError("standard polynomial needs at least one variable")
    return skew_symmetrize(word_term(vs), vs)
