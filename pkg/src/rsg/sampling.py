"""Seeded random generators for words, trees and semidirect elements.

Every function takes an explicit ``numpy.random.Generator`` (PCG64 via
:func:`make_rng`), so a run is reproducible from its seed alone.
"""
from __future__ import annotations

import numpy as np

from . import words as W
from .actions import Tree, neighbours, span
from .semidirect import SDElement
from .words import AbelianElement, Alphabet


def make_rng(seed: int | None = 0) -> np.random.Generator:
    return np.random.default_rng(seed)


def random_word(rng, alphabet: Alphabet, max_len: int, positive: bool = False, min_len: int = 0) -> str:
    n = int(rng.integers(min_len, max_len + 1))
    pool = alphabet.symbols if positive else alphabet.letters
    out: list[str] = []
    while len(out) < n:
        ch = pool[int(rng.integers(len(pool)))]
        if out and out[-1] == ch.swapcase():
            continue
        out.append(ch)
    return "".join(out)


def grow_tree(rng, alphabet: Alphabet, seed_vertices, size: int) -> Tree:
    """Span the seed vertices, then add random boundary vertices up to ``size``."""
    vs = set(span(seed_vertices).vertices)
    while len(vs) < size:
        border = sorted({w for v in vs for w in neighbours(v, alphabet) if w not in vs})
        vs.add(border[int(rng.integers(len(border)))])
    return Tree(frozenset(vs))


def random_tree(rng, alphabet: Alphabet, max_size: int, root: str = "") -> Tree:
    return grow_tree(rng, alphabet, [root], int(rng.integers(1, max_size + 1)))


def random_x(rng, alphabet: Alphabet, max_size: int = 5, shift_len: int = 2) -> Tree:
    """A tree anywhere in the Cayley graph, not necessarily through ε."""
    return random_tree(rng, alphabet, max_size, root=random_word(rng, alphabet, shift_len))


def random_r(rng, alphabet: Alphabet, max_size: int = 5, max_len: int = 3) -> SDElement:
    """A random element of R: ε and ā in the tree, ā positive."""
    a = random_word(rng, alphabet, max_len, positive=True)
    size = max(len(a) + 1, int(rng.integers(1, max_size + 1)))
    return SDElement(grow_tree(rng, alphabet, ["", a], size), a)


def random_sd(rng, alphabet: Alphabet, max_size: int = 5, max_len: int = 3, group: bool = False) -> SDElement:
    """A random element of X⋊T (or X⋊G with ``group=True``)."""
    return SDElement(random_x(rng, alphabet, max_size), random_word(rng, alphabet, max_len, positive=not group))


def random_abelian(rng, symbols, lo: int = -5, hi: int = 5) -> AbelianElement:
    exps = rng.integers(lo, hi + 1, size=len(symbols))
    return AbelianElement.from_map({s: int(e) for s, e in zip(symbols, exps)})


def random_group_word(rng, alphabet: Alphabet, max_len: int) -> str:
    return W.reduce(random_word(rng, alphabet, max_len))
