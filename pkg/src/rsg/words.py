"""Words in the free monoid, the free group and the free abelian group.

Free-group elements are plain strings in the wire syntax: a lowercase letter
is a generator and the matching uppercase letter is its inverse, so ``"aB"``
is a*b^-1.  The empty string is the identity.  Keeping words as ``str`` makes
them hashable, cheap to slice and directly printable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import AlphabetError, ParseError

IDENTITY = ""
_EPS_TOKENS = {"", "ε", "1"}


class Letter(NamedTuple):
    symbol: str
    sign: int = 1

    @property
    def char(self) -> str:
        return self.symbol if self.sign > 0 else self.symbol.upper()

    @classmethod
    def from_char(cls, ch: str) -> "Letter":
        return cls(ch.lower(), 1 if ch.islower() else -1)


class Alphabet:
    """A finite, ordered set of single-character generator symbols."""

    def __init__(self, symbols: Iterable[str]):
        symbols = tuple(symbols)
        for s in symbols:
            if len(s) != 1 or not s.isalpha() or not s.islower():
                raise AlphabetError(f"generator must be a single lowercase letter: {s!r}")
        if len(set(symbols)) != len(symbols):
            raise AlphabetError(f"duplicate generators in {symbols!r}")
        self.symbols = symbols
        self._set = frozenset(symbols)

    @classmethod
    def first(cls, n: int) -> "Alphabet":
        if not 1 <= n <= 26:
            raise AlphabetError(f"alphabet size must be in 1..26, got {n}")
        return cls("abcdefghijklmnopqrstuvwxyz"[:n])

    def __contains__(self, ch: str) -> bool:
        return ch.lower() in self._set

    def __iter__(self) -> Iterator[str]:
        return iter(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __repr__(self) -> str:
        return f"Alphabet({''.join(self.symbols)!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self) -> int:
        return hash(self.symbols)

    @property
    def letters(self) -> tuple[str, ...]:
        """Generators followed by their inverses, as characters."""
        return self.symbols + tuple(s.upper() for s in self.symbols)

    def check(self, word: str) -> str:
        for i, ch in enumerate(word):
            if ch not in self:
                raise AlphabetError(f"letter {ch!r} at position {i} is not in {self!r}")
        return word


def inverse_letter(ch: str) -> str:
    return ch.swapcase()


def is_reduced(word: str) -> bool:
    return all(word[i] != word[i + 1].swapcase() for i in range(len(word) - 1))


def is_positive(word: str) -> bool:
    return word == "" or word.islower()


def reduce(raw: Iterable[Letter] | str, alphabet: Alphabet | None = None) -> str:
    """Free reduction by a single left-to-right stack pass."""
    if isinstance(raw, str):
        chars: Iterable[str] = raw
    else:
        chars = (Letter(*l).char for l in raw)
    stack: list[str] = []
    for ch in chars:
        if alphabet is not None and ch not in alphabet:
            raise AlphabetError(f"letter {ch!r} is not in {alphabet!r}")
        if stack and stack[-1] == ch.swapcase():
            stack.pop()
        else:
            stack.append(ch)
    return "".join(stack)


def group_mul(g: str, h: str) -> str:
    # cancel the overlap between the tail of g and the head of h
    i, m = 0, min(len(g), len(h))
    while i < m and g[-1 - i] == h[i].swapcase():
        i += 1
    return g[: len(g) - i] + h[i:]


def invert(g: str) -> str:
    return g[::-1].swapcase()


def letters(word: str) -> list[Letter]:
    return [Letter.from_char(ch) for ch in word]


def nice_factorization_free(g: str) -> list[str]:
    """Split a reduced word into maximal runs of equal sign.

    ``"aBa"`` gives ``["a", "B", "a"]``.  Each block is a positive word or the
    inverse of one, and consecutive blocks have opposite signs.
    """
    blocks: list[str] = []
    for ch in g:
        if blocks and blocks[-1][-1].islower() == ch.islower():
            blocks[-1] += ch
        else:
            blocks.append(ch)
    return blocks


def enumerate_reduced(alphabet: Alphabet, max_len: int) -> Iterator[str]:
    """All reduced words of length <= max_len, in shortlex order."""
    yield ""
    layer = [""]
    for _ in range(max_len):
        nxt = []
        for w in layer:
            for ch in alphabet.letters:
                if not w or w[-1] != ch.swapcase():
                    nxt.append(w + ch)
        yield from nxt
        layer = nxt


def enumerate_positive(alphabet: Alphabet, max_len: int) -> Iterator[str]:
    yield ""
    layer = [""]
    for _ in range(max_len):
        layer = [w + s for w in layer for s in alphabet.symbols]
        yield from layer


def parse_word(text: str, alphabet: Alphabet | None = None) -> str:
    """Parse a word in wire syntax; accepts ``ε``/``1`` for the identity.

    Also accepts ``a⁻¹`` and ``a^-1`` for inverse letters so that pretty
    output can be fed back in.
    """
    s = text.strip()
    if s in _EPS_TOKENS:
        return IDENTITY
    s = s.replace("⁻¹", "^-1")
    out: list[str] = []
    i = 0
    while i < len(s):
        ch = s[i]
        if ch.isspace() or ch == "·":
            i += 1
            continue
        if not ch.isalpha():
            raise ParseError(f"unexpected character {ch!r}", text, i)
        if s.startswith("^-1", i + 1):
            out.append(ch.swapcase() if ch.islower() else ch.lower())
            i += 4
        else:
            out.append(ch)
            i += 1
    word = "".join(out)
    if alphabet is not None:
        alphabet.check(word)
    return reduce(word)


def format_word(word: str) -> str:
    return word if word else "ε"


def pretty_word(word: str) -> str:
    """Human form with superscript inverses: ``"aB"`` -> ``"ab⁻¹"``."""
    if not word:
        return "ε"
    return "".join(ch if ch.islower() else ch.lower() + "⁻¹" for ch in word)


# --- free abelian group -------------------------------------------------------


@dataclass(frozen=True, order=True)
class AbelianElement:
    """Sparse exponent vector; zero exponents are never stored."""

    exponents: tuple[tuple[str, int], ...] = ()

    @classmethod
    def from_map(cls, exps: Mapping[str, int]) -> "AbelianElement":
        return cls(tuple(sorted((s, e) for s, e in exps.items() if e != 0)))

    @classmethod
    def identity(cls) -> "AbelianElement":
        return cls()

    def as_dict(self) -> dict[str, int]:
        return dict(self.exponents)

    def exponent(self, symbol: str) -> int:
        for s, e in self.exponents:
            if s == symbol:
                return e
        return 0

    def __mul__(self, other: "AbelianElement") -> "AbelianElement":
        d = self.as_dict()
        for s, e in other.exponents:
            d[s] = d.get(s, 0) + e
        return AbelianElement.from_map(d)

    def inverse(self) -> "AbelianElement":
        return AbelianElement(tuple((s, -e) for s, e in self.exponents))

    def meet(self, other: "AbelianElement") -> "AbelianElement":
        """Coordinatewise minimum of exponents."""
        a, b = self.as_dict(), other.as_dict()
        return AbelianElement.from_map({s: min(a.get(s, 0), b.get(s, 0)) for s in a.keys() | b.keys()})

    def is_positive(self) -> bool:
        return all(e > 0 for _, e in self.exponents)

    def support(self) -> frozenset[str]:
        return frozenset(s for s, _ in self.exponents)

    def __str__(self) -> str:
        if not self.exponents:
            return "1"
        return " ".join(s if e == 1 else f"{s}^{e}" for s, e in self.exponents)


def abelian_normal_form(g: AbelianElement) -> tuple[AbelianElement, AbelianElement]:
    """Return (u, t) with nonnegative exponents, disjoint supports and g = u^-1 t."""
    u = AbelianElement.from_map({s: -e for s, e in g.exponents if e < 0})
    t = AbelianElement.from_map({s: e for s, e in g.exponents if e > 0})
    return u, t


def parse_abelian(text: str, alphabet: Alphabet | None = None) -> AbelianElement:
    """Parse ``x^2 y^-3``, ``x2y-3`` or a letter string like ``xxYYY``."""
    s = text.strip().replace("⁻¹", "^-1")
    if s in _EPS_TOKENS:
        return AbelianElement()
    exps: dict[str, int] = {}
    pos = 0
    for m in _ABELIAN_TOKEN.finditer(s):
        if s[pos:m.start()].strip():
            raise ParseError("unexpected input", text, pos)
        ch, num = m.group(1), m.group(2)
        if alphabet is not None and ch not in alphabet:
            raise AlphabetError(f"letter {ch!r} is not in {alphabet!r}")
        e = int(num) if num else 1
        if ch.isupper():
            e = -e
        exps[ch.lower()] = exps.get(ch.lower(), 0) + e
        pos = m.end()
    if s[pos:].strip():
        raise ParseError("unexpected input", text, pos)
    return AbelianElement.from_map(exps)


_ABELIAN_TOKEN = re.compile(r"([A-Za-z])\s*(?:\^?\s*([+-]?\d+))?")


def abelian_elements(symbols: Sequence[str], lo: int, hi: int) -> Iterator[AbelianElement]:
    """Every element with all exponents in [lo, hi] over the given symbols."""
    from itertools import product

    for exps in product(range(lo, hi + 1), repeat=len(symbols)):
        yield AbelianElement.from_map(dict(zip(symbols, exps)))
