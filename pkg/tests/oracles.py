"""Reference implementations used as test oracles.

Nothing here touches the package's composition code: generators are applied
letter by letter from their piecewise formulas over Fractions.
"""

from __future__ import annotations

import random
from fractions import Fraction as Q
from itertools import product
from typing import Dict, List, Sequence, Tuple

Letter = Tuple[str, int]

HALF, QUARTER = Q(1, 2), Q(1, 4)


def x0_table(p: Q) -> Q:
    if p <= QUARTER:
        return 2 * p
    if p <= HALF:
        return p + QUARTER
    return p / 2 + HALF


def x0_inv_table(p: Q) -> Q:
    if p <= HALF:
        return p / 2
    if p <= Q(3, 4):
        return p - QUARTER
    return 2 * p - 1


def x1_table(p: Q) -> Q:
    if p <= HALF:
        return p
    if p <= Q(5, 8):
        return 2 * p - HALF
    if p <= Q(3, 4):
        return p + Q(1, 8)
    return p / 2 + HALF


def x1_inv_table(p: Q) -> Q:
    if p <= HALF:
        return p
    if p <= Q(3, 4):
        return (p + HALF) / 2
    if p <= Q(7, 8):
        return p - Q(1, 8)
    return 2 * p - 1


_TABLES = {("x0", 1): x0_table, ("x0", -1): x0_inv_table, ("x1", 1): x1_table, ("x1", -1): x1_inv_table}


def unit_letters(word: Sequence[Letter]) -> List[Letter]:
    out = []
    for name, e in word:
        out.extend([(name, 1 if e > 0 else -1)] * abs(e))
    return out


def apply_word(word: Sequence[Letter], p) -> Q:
    """Right action: the leftmost letter acts first."""
    p = Q(p)
    for letter in unit_letters(word):
        p = _TABLES[letter](p)
    return p


def letter_counts(word: Sequence[Letter]) -> Tuple[int, int]:
    c = {"x0": 0, "x1": 0}
    for name, e in word:
        c[name] += e
    return c["x0"], c["x1"]


def word_text(word: Sequence[Letter]) -> str:
    return " ".join(f"{n}^{e}" for n, e in word) or "id"


def random_word(rng: random.Random, max_len: int) -> List[Letter]:
    n = rng.randint(0, max_len)
    return [(rng.choice(("x0", "x1")), rng.choice((1, -1))) for _ in range(n)]


def grid(level: int) -> List[Q]:
    return [Q(k, 2 ** level) for k in range(2 ** level + 1)]


def fingerprint(word: Sequence[Letter], points: Sequence[Q]) -> tuple:
    return tuple(apply_word(word, p) for p in points)


def naive_ball_size(radius: int, level: int = 10) -> int:
    """Enumerate every word of length <= radius and dedup by values on a dyadic grid."""
    letters = [("x0", 1), ("x0", -1), ("x1", 1), ("x1", -1)]
    pts = grid(level)
    seen = set()
    for n in range(radius + 1):
        for w in product(letters, repeat=n):
            seen.add(fingerprint(w, pts))
    return len(seen)


def brute_poly_solutions(check, names: Sequence[str], bound: int) -> List[Dict[str, int]]:
    out = []
    for vals in product(range(bound + 1), repeat=len(names)):
        env = dict(zip(names, vals))
        if check(env):
            out.append(env)
    return out
