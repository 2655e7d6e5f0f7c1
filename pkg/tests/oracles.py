"""Independent cross-check computations shared by the unit and acceptance tests."""

import itertools
import random

from lbz.heisenberg import evaluate_all_words, random_assignment
from lbz.kernels import Echelon
from lbz.linalg import integer_row
from lbz.term import Leaf, Mul, leibniz_reduce


def bracketings(letters):
    """Every binary tree with the given left-to-right leaf sequence."""
    if len(letters) == 1:
        yield Leaf(letters[0])
        return
    for cut in range(1, len(letters)):
        for left in bracketings(letters[:cut]):
            for right in bracketings(letters[cut:]):
                yield Mul(left, right)


def free_rank_by_bracketings(n: int) -> int:
    """Rank of the span of all reduced bracketings of all permutations of 1..n."""
    words = list(itertools.permutations(range(1, n + 1)))
    index = {w: i for i, w in enumerate(words)}
    ech = Echelon(len(words), "python")
    for perm in words:
        for t in bracketings(perm):
            ech.add({index[w]: int(c) for w, c in leibniz_reduce(t)})
    return ech.rank


def h_evaluation_rank(n: int, samples: int, seed: int = 0) -> int:
    """Rank of P_n(free) -> H~ over random assignments (lower bound for dim P_n(var H~))."""
    rng = random.Random(seed)
    words = list(itertools.permutations(range(1, n + 1)))
    cols = [[] for _ in words]
    for _ in range(samples):
        a = random_assignment(range(1, n + 1), rng, n + 2)
        for col, val in zip(cols, evaluate_all_words(words, a)):
            col.extend(val.coordinates(2 * n + 3))
    ech = Echelon(len(cols[0]), "python")
    for col in cols:
        ech.add(integer_row({k: c for k, c in enumerate(col) if c}))
    return ech.rank
