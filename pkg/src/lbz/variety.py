"""Varieties given by identities and their multilinear parts ``P_n(V)``.

The degree-``n`` multilinear component of the T-ideal is built degree by
degree.  ``I_d`` is spanned by

* substitution instances ``f(m_1, ..., m_k)`` of each multilinear defining
  identity, the ``m_i`` being left-normed words on disjoint blocks of
  ``{1..d}`` (words span the free algebra, so no other monomials are needed);
* ``x.g`` and ``g.x`` for ``g`` in a copy of ``I_{d-1}`` on ``{1..d} - {x}``.

In a Leibniz algebra ``L_uv = R_v L_u + L_u L_v`` and
``R_uv = R_v R_u - R_u R_v``, so multiplications by generators already give
the ideal closure.  Everything is reduced to left-normed words and
eliminated exactly.
"""

from __future__ import annotations

import itertools
import json
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, gcd, lcm
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import ParseError, ResourceBoundError, UnknownVarietyError
from .kernels import Echelon
from .linalg import Subspace, solve
from .term import (
    LinComb,
    Term,
    TermComb,
    Word,
    format_term,
    multidegree,
    multilinearize,
    parse_lincomb,
    parse_term,
    product,
    reduce_lincomb,
    skew_symmetrize,
    standardize,
    word_product,
    word_term,
    x,
)

DEFAULT_MAX_DEGREE = 7


@dataclass(frozen=True)
class Identity:
    element: TermComb
    name: str = ""

    @property
    def degree(self) -> int:
        degrees = {t.degree for t, _ in self.element}
        if len(degrees) != 1:
            raise ValueError(f"identity {self.name!r} is not homogeneous")
        return degrees.pop()

    @property
    def multidegree(self):
        profiles = {multidegree(t) for t, _ in self.element}
        if len(profiles) != 1:
            raise ValueError(f"identity {self.name!r} is not multihomogeneous")
        return profiles.pop()

    @property
    def is_multilinear(self) -> bool:
        return self.element.is_multilinear()

    def __str__(self):
        return f"{self.name}: {self.element}" if self.name else str(self.element)


def identity(text: Union[str, TermComb, Term], name: str = "") -> Identity:
    if isinstance(text, str):
        return Identity(parse_lincomb(text), name)
    if isinstance(text, TermComb):
        return Identity(text, name)
    return Identity(TermComb.of(text), name)


@dataclass(frozen=True)
class VarietySpec:
    name: str
    identities: Tuple[Identity, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ValueError("variety needs a name")
        object.__setattr__(self, "identities", tuple(self.identities))

    def with_identity(self, ident: Identity, name: Optional[str] = None) -> "VarietySpec":
        return VarietySpec(name or f"{self.name}+{ident.name or 'f'}", self.identities + (ident,))


# --------------------------------------------------------------------------
# built-in identity systems


def nsa_identity(s: int) -> Identity:
    """``(x1x2)(x3x4)...(x_{2s+1}x_{2s+2})``."""
    if s < 1:
        raise ValueError("NsA needs s >= 1")
    brackets = [product(x(2 * r + 1), x(2 * r + 2)) for r in range(s + 1)]
    return identity(product(*brackets), f"NsA({s})")


RIGHT_NESTED = identity("x1(x2(x3x4))", "right-nested")
BRACKET_NESTING = identity("x1(x2x5)(x3x4) - x1(x2x4)(x3x5) + x1(x2x3)(x4x5)", "bracket-nesting")
IDENTITY_V1 = identity("x1(x2x3)(x4x5)", "V1tilde")


def skew_insertion_identity(a: Sequence[int] = (), b: Sequence[int] = (), c: Sequence[int] = (), d: Sequence[int] = ()) -> TermComb:
    """``x0 A x1 B x2 C x3 D x4`` skew-symmetrized in ``x1..x4``.

    Generators are renumbered from 1: ``x0 -> x1`` and the skew letters are
    ``x2..x5``; the words ``a, b, c, d`` must use indices above 5.
    """
    extra = list(a) + list(b) + list(c) + list(d)
    if any(i <= 5 for i in extra) or len(set(extra)) != len(extra):
        raise ValueError("insert words must use distinct indices greater than 5")
    letters = [1, *a, 2, *b, 3, *c, 4, *d, 5]
    return skew_symmetrize(word_term(letters), [2, 3, 4, 5])


_NSA = re.compile(r"^nsa\(?(\d+)\)?$")


def builtin_variety(name: str) -> VarietySpec:
    key = name.strip().lower().replace("_", "").replace("-", "")
    if key == "free":
        return VarietySpec("free", ())
    if key == "abelian":
        return VarietySpec("abelian", (identity("x1x2", "xy"),))
    if key in ("v1tilde", "v1"):
        return VarietySpec("V1tilde", (IDENTITY_V1,))
    if key in ("v3tilde", "v3"):
        return VarietySpec("V3tilde", (RIGHT_NESTED, BRACKET_NESTING))
    m = _NSA.match(key)
    if m:
        s = int(m.group(1))
        if s >= 1:
            return VarietySpec(f"NsA({s})", (nsa_identity(s),))
    raise UnknownVarietyError(f"unknown variety {name!r} (known: free, abelian, NsA(s), V1tilde, V3tilde)")


BUILTIN_NAMES = ("free", "abelian", "NsA(s)", "V1tilde", "V3tilde")


# --------------------------------------------------------------------------
# identity files


def _identity_from_record(rec, default_name: str) -> Identity:
    if isinstance(rec, str):
        return identity(rec, default_name)
    name = rec.get("name", default_name)
    if "terms" in rec:
        data = []
        for item in rec["terms"]:
            try:
                coeff = Fraction(str(item.get("coefficient", "1")))
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(f"bad coefficient in identity {name!r}: {exc}") from None
            data.append((parse_term(item["term"]), coeff))
        return Identity(TermComb(data), name)
    if "element" in rec:
        return identity(rec["element"], name)
    raise ParseError(f"identity record {name!r} needs 'terms' or 'element'")


def load_identities(path: Union[str, Path]) -> Tuple[str, List[Identity]]:
    """Read ``{"name": ..., "identities": [{"name", "terms": [{"coefficient", "term"}]}]}``."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None
    if isinstance(raw, list):
        raw = {"identities": raw}
    name = raw.get("name", path.stem)
    recs = raw.get("identities")
    if not isinstance(recs, list):
        raise ParseError(f"{path}: expected an 'identities' list")
    return name, [_identity_from_record(r, f"f{i + 1}") for i, r in enumerate(recs)]


def load_variety(path: Union[str, Path]) -> VarietySpec:
    name, idents = load_identities(path)
    return VarietySpec(name, tuple(idents))


def identity_record(ident: Identity) -> dict:
    return {
        "name": ident.name,
        "terms": [{"coefficient": str(c), "term": format_term(t)} for t, c in ident.element],
    }


def dump_variety(v: VarietySpec) -> dict:
    return {"schema": 1, "name": v.name, "identities": [identity_record(i) for i in v.identities]}


def resolve_variety(spec: str) -> VarietySpec:
    """Built-in name or path to an identity file."""
    try:
        return builtin_variety(spec)
    except UnknownVarietyError:
        if Path(spec).is_file():
            return load_variety(spec)
        raise


# --------------------------------------------------------------------------
# multilinear quotient


def word_basis(n: int) -> List[Word]:
    return list(itertools.permutations(range(1, n + 1)))


@dataclass
class MultilinearQuotient:
    """``P_n(V) = P_n / (Id(V) ∩ P_n)`` in the left-normed word basis."""

    n: int
    words: List[Word]
    index: Dict[Word, int]
    ideal: Subspace
    dimension: int = field(init=False)

    def __post_init__(self):
        self.dimension = len(self.words) - self.ideal.rank

    def vector(self, e: LinComb) -> Dict[int, Fraction]:
        out = {}
        for w, c in e.items():
            try:
                out[self.index[w]] = c
            except KeyError:
                raise ValueError(f"word {w} is not a multilinear word of degree {self.n}") from None
        return out

    def contains(self, e: LinComb) -> bool:
        return self.ideal.contains(self.vector(e))

    def normal_form(self, e: LinComb) -> LinComb:
        return LinComb({self.words[k]: c for k, c in self.ideal.normal_form(self.vector(e)).items()})

    def basis_words(self) -> List[Word]:
        return [self.words[k] for k in self.ideal.nonpivots()]


def _check_bound(n: int, max_n: int):
    if n < 1:
        raise ValueError("degree must be at least 1")
    if n > max_n:
        raise ResourceBoundError(f"degree {n} exceeds the configured bound {max_n} ({factorial(n)} columns)")


def _int_lincomb(e: LinComb) -> Tuple[Tuple[Word, int], ...]:
    den = 1
    for _, c in e.items():
        den = lcm(den, c.denominator)
    return tuple((w, int(c * den)) for w, c in e.items())


def multilinear_generators(v: VarietySpec) -> List[Tuple[int, Tuple[Tuple[Word, int], ...]]]:
    """Standardized, reduced multilinear components of every defining identity."""
    out = []
    seen = set()
    for ident in v.identities:
        for comp in multilinearize(ident.element):
            comp = standardize(comp)
            red = reduce_lincomb(comp)
            if not red:
                continue
            key = _int_lincomb(red)
            g = 0
            for _, c in key:
                g = gcd(g, c)
            key = tuple((w, c // g) for w, c in key)
            if key[0][1] < 0:
                key = tuple((w, -c) for w, c in key)
            if key not in seen:
                seen.add(key)
                out.append((red.degree(), key))
    out.sort()
    return out


def _compositions(d: int, k: int):
    for cuts in itertools.combinations(range(1, d), k - 1):
        bounds = (0,) + cuts + (d,)
        yield [tuple(range(bounds[i] + 1, bounds[i + 1] + 1)) for i in range(k)]


def _substitute_words(word: Word, blocks: Sequence[Word]) -> Dict[Word, int]:
    """Left-normed expansion of ``m_{w1} m_{w2} ... m_{wk}``."""
    acc = {blocks[word[0] - 1]: 1}
    for letter in word[1:]:
        block = blocks[letter - 1]
        nxt: Dict[Word, int] = {}
        for u, c in acc.items():
            for w, s in word_product(u, block):
                val = nxt.get(w, 0) + s * c
                if val:
                    nxt[w] = val
                else:
                    del nxt[w]
        acc = nxt
    return acc


def instance_bases(generator: Tuple[Tuple[Word, int], ...], k: int, d: int) -> List[Dict[Word, int]]:
    """``f(m_1..m_k)`` for consecutive blocks, one per composition of ``d``."""
    out = []
    for blocks in _compositions(d, k):
        total: Dict[Word, int] = {}
        for word, c in generator:
            for w, s in _substitute_words(word, blocks).items():
                val = total.get(w, 0) + c * s
                if val:
                    total[w] = val
                else:
                    del total[w]
        if total:
            out.append(total)
    return out


class IdealTower:
    """The echelonized components ``I_1, I_2, ...`` of one T-ideal."""

    def __init__(self, generators, backend: Optional[str] = None):
        self.generators = generators
        self.backend = backend
        self.levels: List[Echelon] = []
        self.stats: List[dict] = []
        self._lock = threading.Lock()

    def level(self, n: int) -> Echelon:
        with self._lock:
            while len(self.levels) < n:
                self._build(len(self.levels) + 1)
            return self.levels[n - 1]

    def _build(self, d: int):
        words = word_basis(d)
        index = {w: i for i, w in enumerate(words)}
        full = len(words)
        ech = Echelon(full, self.backend)
        tried = 0
        history = []

        def feed(vec: Dict[int, int]):
            nonlocal tried
            tried += 1
            ech.add(vec)

        if d > 1 and self.levels and self.levels[-1].rank:
            prev = self.levels[-1].rows()
            prev_words = word_basis(d - 1)
            for xv in range(1, d + 1):
                if ech.rank == full:
                    break
                others = [i for i in range(1, d + 1) if i != xv]
                for _, row in prev:
                    right: Dict[int, int] = {}
                    left: Dict[int, int] = {}
                    for col, c in row.items():
                        w = tuple(others[i - 1] for i in prev_words[col])
                        right[index[w + (xv,)]] = c
                        for lw, s in word_product((xv,), w):
                            key = index[lw]
                            val = left.get(key, 0) + s * c
                            if val:
                                left[key] = val
                            else:
                                del left[key]
                    feed(right)
                    if left:
                        feed(left)
            history.append(("closure", ech.rank))
        for k, gen in self.generators:
            if k > d or ech.rank == full:
                continue
            for base in instance_bases(gen, k, d):
                for perm in itertools.permutations(range(1, d + 1)):
                    if ech.rank == full:
                        break
                    feed({index[tuple(perm[i - 1] for i in w)]: c for w, c in base.items()})
            history.append((f"degree-{k} identity", ech.rank))
        self.levels.append(ech)
        self.stats.append({"degree": d, "vectors": tried, "rank": ech.rank, "history": history})


_TOWERS: Dict[Tuple, IdealTower] = {}
_TOWERS_LOCK = threading.Lock()


def ideal_tower(v: VarietySpec, backend: Optional[str] = None) -> IdealTower:
    gens = multilinear_generators(v)
    key = (tuple(gens), backend)
    with _TOWERS_LOCK:
        tower = _TOWERS.get(key)
        if tower is None:
            tower = _TOWERS[key] = IdealTower(gens, backend)
    return tower


def clear_cache():
    with _TOWERS_LOCK:
        _TOWERS.clear()


def tideal_multilinear(v: VarietySpec, n: int, max_n: int = DEFAULT_MAX_DEGREE,
                       backend: Optional[str] = None) -> MultilinearQuotient:
    _check_bound(n, max_n)
    ech = ideal_tower(v, backend).level(n)
    words = word_basis(n)
    return MultilinearQuotient(n, words, {w: i for i, w in enumerate(words)}, Subspace.from_echelon(ech))


def multilinear_dimension(v: VarietySpec, n: int, max_n: int = DEFAULT_MAX_DEGREE) -> int:
    return tideal_multilinear(v, n, max_n).dimension


# --------------------------------------------------------------------------
# membership


def is_identity(v: VarietySpec, f: Union[Identity, TermComb, str], max_n: int = DEFAULT_MAX_DEGREE) -> bool:
    """True iff every multilinear component of ``f`` lies in ``Id(V)``."""
    if isinstance(f, Identity):
        f = f.element
    elif isinstance(f, str):
        f = parse_lincomb(f)
    for comp in multilinearize(f):
        comp = standardize(comp)
        red = reduce_lincomb(comp)
        if not red:
            continue
        n = red.degree()
        _check_bound(n, max_n)
        if not tideal_multilinear(v, n, max_n).contains(red):
            return False
    return True


def condition3_pattern(j: int, m: int) -> TermComb:
    """``x Y^j z Y^(m-j)`` with ``x = x1``, ``z = x2``, ``y = x3``."""
    if not 0 <= j <= m:
        raise ValueError("need 0 <= j <= m")
    return TermComb.of(word_term([1] + [3] * j + [2] + [3] * (m - j)))


def condition3_element(k: int, m: int, alphas: Sequence) -> TermComb:
    """``xY^k zY^(m-k) - sum_i alpha_i xY^(k-i) zY^(m-k+i)``."""
    _check_km(k, m)
    if len(alphas) != k:
        raise ValueError(f"expected {k} coefficients, got {len(alphas)}")
    out = condition3_pattern(k, m)
    for i, a in enumerate(alphas, start=1):
        out = out - condition3_pattern(k - i, m) * Fraction(a)
    return out


def _check_km(k: int, m: int):
    if not 1 <= k <= m:
        raise ValueError(f"need 1 <= k <= m, got k={k}, m={m}")


def _polarized(j: int, m: int) -> LinComb:
    (comp,) = multilinearize(condition3_pattern(j, m))
    return reduce_lincomb(standardize(comp))


def check_condition_3(v: VarietySpec, k: int, m: int, alphas: Sequence,
                      max_n: int = DEFAULT_MAX_DEGREE) -> bool:
    _check_km(k, m)
    _check_bound(m + 2, max_n)
    return is_identity(v, condition3_element(k, m, alphas), max_n)


def solve_condition_3(v: VarietySpec, k: int, m: int,
                      max_n: int = DEFAULT_MAX_DEGREE) -> Optional[List[Fraction]]:
    """Some ``alpha`` making the condition an identity of ``v``, else None.

    Works in ``P_(m+2)(V)``: the normal form of the left side must be the
    matching combination of the normal forms of the shifted patterns.  Free
    parameters are set to zero.
    """
    _check_km(k, m)
    _check_bound(m + 2, max_n)
    q = tideal_multilinear(v, m + 2, max_n)
    target = q.normal_form(_polarized(k, m))
    columns = [q.normal_form(_polarized(k - i, m)) for i in range(1, k + 1)]
    support = sorted({w for w, _ in target} | {w for col in columns for w, _ in col})
    if not support:
        return [Fraction(0)] * k
    matrix = [[col.coeff(w) for col in columns] for w in support]
    return solve(matrix, [target.coeff(w) for w in support])


def colength_profile(v: VarietySpec, nmax: int, max_n: int = DEFAULT_MAX_DEGREE) -> List[Tuple[int, int]]:
    from .symfunc import colength, decompose, module_character

    _check_bound(nmax, max_n)
    return [(n, colength(decompose(module_character(v, n, max_n)))) for n in range(1, nmax + 1)]
