"""The Leibniz algebra H~ = H + Q[t].

``H`` is the Heisenberg algebra with basis ``a, b, c`` and ``ba = -ab = c``
(all other basis products zero).  Polynomials form a right ``H``-module via
``f.a = f'``, ``f.b = t f``, ``f.c = f`` and the product on the direct sum is
``(x + f)(y + g) = xy + f.y``.  Evaluating terms here is the semantic oracle
used to check reductions and independence claims.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from .errors import ParseError, UnassignedGeneratorError
from .term import LinComb, Leaf, Mul, Term, TermComb, Word, leaves

Poly = Tuple[Fraction, ...]


def _trim(coeffs: Iterable) -> Poly:
    out = [Fraction(c) for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def _poly_add(p: Poly, q: Poly, s: Fraction = Fraction(1)) -> Poly:
    n = max(len(p), len(q))
    return _trim((p[i] if i < len(p) else 0) + s * (q[i] if i < len(q) else 0) for i in range(n))


def _derivative(p: Poly) -> Poly:
    return tuple(i * p[i] for i in range(1, len(p)))


def _times_t(p: Poly) -> Poly:
    return (Fraction(0),) + p if p else p


@dataclass(frozen=True)
class HElement:
    """``ca*a + cb*b + cc*c + f(t)`` with ``f`` stored densely, lowest degree first."""

    ca: Fraction = Fraction(0)
    cb: Fraction = Fraction(0)
    cc: Fraction = Fraction(0)
    f: Poly = ()

    def __post_init__(self):
        object.__setattr__(self, "ca", Fraction(self.ca))
        object.__setattr__(self, "cb", Fraction(self.cb))
        object.__setattr__(self, "cc", Fraction(self.cc))
        object.__setattr__(self, "f", _trim(self.f))

    @classmethod
    def poly(cls, coeffs: Sequence) -> "HElement":
        return cls(f=tuple(coeffs))

    @classmethod
    def t_power(cls, k: int, coeff=1) -> "HElement":
        return cls(f=(0,) * k + (coeff,))

    def __bool__(self):
        return bool(self.ca or self.cb or self.cc or self.f)

    def __add__(self, other: "HElement") -> "HElement":
        return HElement(self.ca + other.ca, self.cb + other.cb, self.cc + other.cc, _poly_add(self.f, other.f))

    def __sub__(self, other: "HElement") -> "HElement":
        return HElement(self.ca - other.ca, self.cb - other.cb, self.cc - other.cc,
                        _poly_add(self.f, other.f, Fraction(-1)))

    def __neg__(self):
        return HElement(-self.ca, -self.cb, -self.cc, tuple(-c for c in self.f))

    def __mul__(self, s) -> "HElement":
        s = Fraction(s)
        return HElement(s * self.ca, s * self.cb, s * self.cc, tuple(s * c for c in self.f))

    __rmul__ = __mul__

    def coordinates(self, length: int) -> List[Fraction]:
        """``[ca, cb, cc, f_0, ..., f_{length-1}]``; ``length`` must cover ``deg f``."""
        if len(self.f) > length:
            raise ValueError(f"polynomial of degree {len(self.f) - 1} does not fit in {length} slots")
        return [self.ca, self.cb, self.cc] + list(self.f) + [Fraction(0)] * (length - len(self.f))

    def __str__(self):
        return format_helement(self)


ZERO = HElement()
A = HElement(ca=1)
B = HElement(cb=1)
C = HElement(cc=1)
ONE = HElement.t_power(0)


def h_mul(u: HElement, w: HElement) -> HElement:
    """Product in H~; the polynomial part of ``w`` is ignored."""
    cc = u.cb * w.ca - u.ca * w.cb
    f = u.f
    if not f:
        return HElement(cc=cc)
    g: Poly = ()
    if w.ca:
        g = _poly_add(g, _derivative(f), w.ca)
    if w.cb:
        g = _poly_add(g, _times_t(f), w.cb)
    if w.cc:
        g = _poly_add(g, f, w.cc)
    return HElement(cc=cc, f=g)


def leibniz_witness(u: HElement, v: HElement, w: HElement) -> HElement:
    """``(uv)w - (uw)v - u(vw)``; identically zero because H~ is Leibniz."""
    return h_mul(h_mul(u, v), w) - h_mul(h_mul(u, w), v) - h_mul(u, h_mul(v, w))


# --------------------------------------------------------------------------
# evaluation

Assignment = Mapping[int, HElement]


def _lookup(a: Assignment, i: int) -> HElement:
    try:
        return a[i]
    except KeyError:
        raise UnassignedGeneratorError(f"generator x{i} is not assigned") from None


def evaluate_term(t: Term, a: Assignment) -> HElement:
    if isinstance(t, Leaf):
        return _lookup(a, t.index)
    return h_mul(evaluate_term(t.left, a), evaluate_term(t.right, a))


def evaluate_word(w: Word, a: Assignment) -> HElement:
    value = _lookup(a, w[0])
    for i in w[1:]:
        value = h_mul(value, _lookup(a, i))
    return value


def evaluate(e: Union[Term, LinComb, TermComb], a: Assignment) -> HElement:
    """Value of a term or combination under the generator assignment ``a``."""
    if isinstance(e, (Leaf, Mul)):
        return evaluate_term(e, a)
    total = ZERO
    if isinstance(e, LinComb):
        for w, c in e.items():
            total = total + evaluate_word(w, a) * c
    elif isinstance(e, TermComb):
        for t, c in e.items():
            total = total + evaluate_term(t, a) * c
    else:
        raise TypeError(f"cannot evaluate {type(e).__name__}")
    return total


def evaluate_all_words(words: Sequence[Word], a: Assignment) -> List[HElement]:
    """Values of many left-normed words, sharing work on common prefixes."""
    cache: Dict[Word, HElement] = {}

    def value(w: Word) -> HElement:
        hit = cache.get(w)
        if hit is None:
            hit = _lookup(a, w[0]) if len(w) == 1 else h_mul(value(w[:-1]), _lookup(a, w[-1]))
            cache[w] = hit
        return hit

    return [value(w) for w in words]


def nonzero_substitutions(e: Union[Term, TermComb], elements: Sequence[HElement]) -> Dict[Tuple[int, ...], HElement]:
    """Values of a multilinear element under every substitution from ``elements``.

    Only nonzero values are returned, keyed by the tuple of element indices
    given to the variables in increasing order.  Each term is evaluated
    bottom-up on tables of partial products that drop zero entries, so the
    cost follows the number of nonzero products rather than
    ``len(elements) ** degree``.
    """
    comb = TermComb.of(e) if isinstance(e, (Leaf, Mul)) else e
    if not comb.is_multilinear():
        raise ValueError("substitution tables need a multilinear element")
    variables = comb.variables()

    def table(t: Term) -> Dict[Tuple[Tuple[int, int], ...], HElement]:
        if isinstance(t, Leaf):
            return {((t.index, k),): el for k, el in enumerate(elements) if el}
        left, right = table(t.left), table(t.right)
        out = {}
        for kl, vl in left.items():
            for kr, vr in right.items():
                p = h_mul(vl, vr)
                if p:
                    out[kl + kr] = p
        return out

    totals: Dict[Tuple[int, ...], HElement] = {}
    for t, c in comb.items():
        missing = [v for v in variables if v not in leaves(t)]
        if missing:
            raise ValueError("every term must contain every variable")
        for key, val in table(t).items():
            idx = tuple(k for _, k in sorted(key))
            totals[idx] = totals.get(idx, ZERO) + val * c
    return {k: v for k, v in sorted(totals.items()) if v}


def random_element(rng: random.Random, max_degree: int = 8, max_num: int = 5, max_den: int = 3) -> HElement:
    def q():
        return Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den))

    deg = rng.randint(0, max_degree)
    return HElement(q(), q(), q(), tuple(q() for _ in range(deg + 1)))


def random_assignment(variables: Iterable[int], rng: random.Random, max_degree: int = 8) -> Dict[int, HElement]:
    return {i: random_element(rng, max_degree) for i in variables}


def basis_elements(max_degree: int = 8) -> List[HElement]:
    """``a, b, c, 1, t, ..., t^max_degree``."""
    return [A, B, C] + [HElement.t_power(k) for k in range(max_degree + 1)]


def basis_assignments(variables: Sequence[int], max_degree: int = 8):
    """Every assignment of the variables to basis elements of H~."""
    elems = basis_elements(max_degree)
    for combo in itertools.product(elems, repeat=len(variables)):
        yield dict(zip(variables, combo))


def theorem2_assignment(theta, n: int, fdeg: int) -> Dict[int, HElement]:
    """Substitution that singles out ``theta``: head -> t^fdeg, first pair
    entries -> a, second pair entries -> b, remaining generators -> c."""
    theta.validate()
    if theta.n != n:
        raise ValueError(f"theta has degree {theta.n}, expected {n}")
    if fdeg < n:
        raise ValueError(f"fdeg={fdeg} must be at least n={n}")
    out = {theta.head: HElement.t_power(fdeg)}
    for i, j in theta.pairs:
        out[i] = A
        out[j] = B
    for k in theta.singles:
        out[k] = C
    return out


def multilinear_evaluation_rank(n: int, samples: int, seed: int = 0, max_degree: int = None) -> int:
    """Rank of the evaluation map from the free multilinear space ``P_n`` into H~.

    Rows are the n! left-normed words, columns the coordinates of their values
    under ``samples`` random assignments.  This is a lower bound for
    ``dim P_n(var H~)`` that is attained once enough samples are taken.
    """
    from .kernels import Echelon
    from .linalg import integer_row

    if max_degree is None:
        max_degree = n + 2
    rng = random.Random(seed)
    words = list(itertools.permutations(range(1, n + 1)))
    columns: List[List[Fraction]] = [[] for _ in words]
    width = max_degree + 1
    for _ in range(samples):
        a = random_assignment(range(1, n + 1), rng, max_degree)
        for col, val in zip(columns, evaluate_all_words(words, a)):
            col.extend(val.coordinates(width + n))
    ech = Echelon(len(columns[0]) if columns else 0)
    for col in columns:
        ech.add(integer_row({k: c for k, c in enumerate(col) if c}))
    return ech.rank


# --------------------------------------------------------------------------
# text form: "ca*a + cb*b + cc*c + [p(t)]"

_NUM = r"\d+(?:\s*/\s*\d+)?"
_ITEM = re.compile(rf"\s*([+-])?\s*({_NUM})?\s*\*?\s*(a|b|c|\[)")
_MONO = re.compile(rf"\s*([+-])?\s*({_NUM})?\s*\*?\s*(t(?:\s*\^\s*(\d+))?)?")


def _num(s) -> Fraction:
    if s is None:
        return Fraction(1)
    num, _, den = s.replace(" ", "").partition("/")
    if den and int(den) == 0:
        raise ParseError("zero denominator")
    return Fraction(int(num), int(den) if den else 1)


def parse_poly(text: str) -> Poly:
    src = text.replace("−", "-").strip()
    pos, coeffs, first = 0, {}, True
    if src in ("", "0"):
        return ()
    while pos < len(src):
        m = _MONO.match(src, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ParseError("malformed polynomial", src, pos)
        if not first and m.group(1) is None:
            raise ParseError("expected '+' or '-'", src, pos)
        sign = -1 if m.group(1) == "-" else 1
        deg = 0 if m.group(3) is None else int(m.group(4) or 1)
        coeffs[deg] = coeffs.get(deg, 0) + sign * _num(m.group(2))
        pos, first = m.end(), False
    return _trim(coeffs.get(i, 0) for i in range(max(coeffs) + 1))


def parse_helement(text: str) -> HElement:
    src = text.replace("−", "-").strip()
    if src == "0":
        return ZERO
    pos, first = 0, True
    parts = {"a": Fraction(0), "b": Fraction(0), "c": Fraction(0)}
    f: Poly = ()
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _ITEM.match(src, pos)
        if not m:
            raise ParseError("malformed H~ element", src, pos)
        if not first and m.group(1) is None:
            raise ParseError("expected '+' or '-'", src, pos)
        sign = -1 if m.group(1) == "-" else 1
        coeff = sign * _num(m.group(2))
        if m.group(3) == "[":
            close = src.find("]", m.end())
            if close < 0:
                raise ParseError("missing ']'", src, m.end())
            f = _poly_add(f, parse_poly(src[m.end():close]), coeff)
            pos = close + 1
        else:
            parts[m.group(3)] += coeff
            pos = m.end()
        first = False
    if first:
        raise ParseError("empty H~ element", src, 0)
    return HElement(parts["a"], parts["b"], parts["c"], f)


def _coeff_str(c: Fraction, symbol: str) -> str:
    mag = abs(c)
    return symbol if mag == 1 and symbol else (f"{mag}*{symbol}" if symbol else f"{mag}")


def format_poly(p: Poly) -> str:
    parts = []
    for deg in range(len(p) - 1, -1, -1):
        c = p[deg]
        if not c:
            continue
        sym = "" if deg == 0 else ("t" if deg == 1 else f"t^{deg}")
        body = _coeff_str(c, sym)
        if parts:
            parts.append(("- " if c < 0 else "+ ") + body)
        else:
            parts.append(("-" if c < 0 else "") + body)
    return " ".join(parts) if parts else "0"


def format_helement(h: HElement) -> str:
    parts = []
    for sym, c in (("a", h.ca), ("b", h.cb), ("c", h.cc)):
        if c:
            body = _coeff_str(c, sym)
            if parts:
                parts.append(("- " if c < 0 else "+ ") + body)
            else:
                parts.append(("-" if c < 0 else "") + body)
    if h.f:
        body = f"[{format_poly(h.f)}]"
        parts.append(f"+ {body}" if parts else body)
    return " ".join(parts) if parts else "0"
