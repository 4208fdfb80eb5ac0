"""Free-group words, turnover presentations and Fox calculus.

Letters are stored as pairs ``(generator, exponent)`` with exponent +1 or
-1. The string form uses ``a, b`` for generators and ``A, B`` for their
inverses.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import InvalidInputError

GENERATORS = ("a", "b")
_LETTERS = {"a": ("a", 1), "A": ("a", -1), "b": ("b", 1), "B": ("b", -1)}


def _reduce_letters(letters: Iterable[tuple[str, int]]) -> tuple:
    stack: list[tuple[str, int]] = []
    for g, e in letters:
        if stack and stack[-1][0] == g and stack[-1][1] == -e:
            stack.pop()
        else:
            stack.append((g, e))
    return tuple(stack)


@dataclass(frozen=True, order=True)
class Word:
    """A freely reduced word in the free group on ``a`` and ``b``."""

    letters: tuple = ()

    def __post_init__(self):
        for g, e in self.letters:
            if g not in GENERATORS or e not in (1, -1):
                raise InvalidInputError(f"bad letter {(g, e)!r}")
        object.__setattr__(self, "letters", _reduce_letters(self.letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"aaB"``-style text. The empty string or ``"1"`` is the identity."""
        text = text.strip()
        if text in ("", "1", "e"):
            return cls()
        try:
            return cls(tuple(_LETTERS[ch] for ch in text))
        except KeyError as exc:
            raise InvalidInputError(f"invalid letter {exc.args[0]!r} in word {text!r}") from None

    @classmethod
    def generator(cls, g: str) -> "Word":
        return cls.parse(g)

    def __str__(self) -> str:
        return "".join(g if e == 1 else g.upper() for g, e in self.letters) or "1"

    def __repr__(self) -> str:
        return f"Word({str(self)!r})"

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def prefixes(self):
        for i in range(len(self.letters)):
            yield Word(self.letters[:i]), self.letters[i]

    def cyclic_reduction(self) -> "Word":
        letters = list(self.letters)
        while len(letters) > 1 and letters[0][0] == letters[-1][0] and letters[0][1] == -letters[-1][1]:
            letters = letters[1:-1]
        return Word(tuple(letters))

    def is_conjugate_to(self, other: "Word") -> bool:
        """Conjugacy in the free group: cyclic reductions are rotations of each other."""
        u = self.cyclic_reduction().letters
        v = other.cyclic_reduction().letters
        if len(u) != len(v):
            return False
        if not u:
            return True
        doubled = u + u
        return any(doubled[i : i + len(v)] == v for i in range(len(u)))


def reduce(w) -> Word:
    """Freely reduce a word given as a :class:`Word`, a string or a letter tuple."""
    if isinstance(w, Word):
        return Word(w.letters)
    if isinstance(w, str):
        return Word.parse(w)
    return Word(tuple(w))


def as_word(w) -> Word:
    return w if isinstance(w, Word) else reduce(w)


IDENTITY = Word()
A = Word.parse("a")
B = Word.parse("b")


def word_ball(radius: int) -> list[Word]:
    """All reduced words of length at most ``radius``, shortlex ordered (a < A < b < B)."""
    order = "aAbB"
    out = [IDENTITY]
    frontier = [IDENTITY]
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for ch in order:
                v = w * Word.parse(ch)
                if len(v) == len(w) + 1:
                    nxt.append(v)
        out.extend(nxt)
        frontier = nxt
    return out


def gamma0_generators() -> tuple[Word, Word]:
    """Generators ``a^2 b`` and ``b a^2`` of the index-three translation subgroup."""
    return Word.parse("aab"), Word.parse("baa")


@dataclass(frozen=True)
class TurnoverPresentation:
    """``<a, b | a^n1, b^n2, (ab)^n3>``."""

    orders: tuple[int, int, int]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if len(orders) != 3 or any(n < 2 for n in orders):
            raise InvalidInputError(f"turnover orders must be three integers >= 2, got {self.orders!r}")
        object.__setattr__(self, "orders", orders)

    @property
    def curvature_sum(self) -> Fraction:
        return sum((Fraction(1, n) for n in self.orders), Fraction(0))

    @property
    def is_euclidean(self) -> bool:
        return self.curvature_sum == 1

    @property
    def is_hyperbolic(self) -> bool:
        return self.curvature_sum < 1

    @property
    def is_spherical(self) -> bool:
        return self.curvature_sum > 1

    @property
    def geometry(self) -> str:
        if self.is_euclidean:
            return "euclidean"
        return "hyperbolic" if self.is_hyperbolic else "spherical"

    @property
    def cone_generators(self) -> tuple[Word, Word, Word]:
        """Elements generating the three cone-point stabilizers."""
        return A, B, A * B

    @property
    def relators(self) -> tuple[Word, Word, Word]:
        n1, n2, n3 = self.orders
        return A**n1, B**n2, (A * B) ** n3

    def lattice_generators(self) -> tuple[Word, Word]:
        """Two words generating a finite-index translation lattice of a Euclidean turnover.

        For (3,3,3) these are ``a^2 b`` and ``b a^2``, which generate the whole
        lattice. Otherwise the commutator ``[a, b]`` is a translation, and its
        conjugate by a generator of order greater than two is an independent one.
        """
        if not self.is_euclidean:
            raise InvalidInputError(f"{self.label()} has no translation lattice")
        if self.orders == (3, 3, 3):
            return gamma0_generators()
        comm = A * B * A.inverse() * B.inverse()
        g = A if self.orders[0] > 2 else B
        return comm, g * comm * g.inverse()

    def label(self) -> str:
        return "S2({},{},{})".format(*self.orders)


class GroupRingElement:
    """Finite rational combination of words, with like terms merged."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple] = ()):
        acc: dict[Word, Fraction] = {}
        for coeff, w in terms:
            w = as_word(w)
            acc[w] = acc.get(w, Fraction(0)) + Fraction(coeff)
        self.terms = {w: c for w, c in acc.items() if c != 0}

    @classmethod
    def of(cls, w, coeff=1) -> "GroupRingElement":
        return cls([(coeff, w)])

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        return GroupRingElement(
            [(c, w) for w, c in self.terms.items()] + [(c, w) for w, c in other.terms.items()]
        )

    def __neg__(self):
        return GroupRingElement([(-c, w) for w, c in self.terms.items()])

    def __sub__(self, other):
        return self + (-other)

    def left_multiply(self, w: Word) -> "GroupRingElement":
        return GroupRingElement([(c, w * v) for v, c in self.terms.items()])

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __iter__(self):
        return iter(sorted(((c, w) for w, c in self.terms.items()), key=lambda t: (len(t[1]), t[1])))

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        if not self.terms:
            return "GroupRingElement(0)"
        parts = [f"{c}*{w}" for c, w in self]
        return "GroupRingElement(" + " + ".join(parts) + ")"

    def evaluate(self, image, add, scale, zero):
        """Linear extension of ``image`` (a map on words) to the group ring."""
        acc = zero
        for c, w in self:
            acc = add(acc, scale(c, image(w)))
        return acc


def fox_derivative(w, g: str) -> GroupRingElement:
    """Fox derivative of ``w`` with respect to generator ``g``.

    >>> fox_derivative("aaa", "a")
    GroupRingElement(1*1 + 1*a + 1*aa)
    """
    if g not in GENERATORS:
        raise InvalidInputError(f"unknown generator {g!r}")
    w = as_word(w)
    terms = []
    for prefix, (h, e) in w.prefixes():
        if h != g:
            continue
        if e == 1:
            terms.append((1, prefix))
        else:
            terms.append((-1, prefix * Word(((g, -1),))))
    return GroupRingElement(terms)
