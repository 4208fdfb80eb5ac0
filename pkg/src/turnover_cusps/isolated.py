"""Enumeration of the block-rotation representations off the surface component.

A candidate is a pair ``(rho(a^2 b), rho(a))`` of block sums ``R^i (+) R^j``
with ``R`` the rotation by a third of a turn; it is encoded by four
exponents mod 3. Conjugacy inside SL(4,R) between such pairs is realized
by the four even permutations preserving the block decomposition:
identity, the simultaneous flip of both planes, the block swap, and
their composite. A flip reverses a plane's orientation, sending ``R`` to
``R^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .errors import IsolatedPointCountError
from .holonomy import ISOLATED, R3, Representation, verify_relations
from .linalg import Matrix, block_diag
from .words import TurnoverPresentation

EXPECTED_ISOLATED_COUNT = 19

_BLOCKS = {0: Matrix.identity(2), 1: R3, 2: R3.inv()}

# permutation matrices (columns are images of basis vectors)
_PERMS = {
    "id": (0, 1, 2, 3),
    "flip": (1, 0, 3, 2),
    "swap": (2, 3, 0, 1),
    "swap_flip": (3, 2, 1, 0),
}


def _perm_matrix(p) -> Matrix:
    return Matrix([[1 if p[j] == i else 0 for j in range(4)] for i in range(4)])


def _act(name: str, pair):
    """Exponent-level action of a block-preserving permutation."""
    (x1, x2), (a1, a2) = pair
    if name in ("flip", "swap_flip"):
        x1, x2, a1, a2 = -x1 % 3, -x2 % 3, -a1 % 3, -a2 % 3
    if name in ("swap", "swap_flip"):
        x1, x2, a1, a2 = x2, x1, a2, a1
    return (x1, x2), (a1, a2)


def block_sum(exponents) -> Matrix:
    i, j = exponents
    return block_diag(_BLOCKS[i % 3], _BLOCKS[j % 3])


def _case(x) -> int:
    """Case label from the class of ``rho(a^2 b)``."""
    x1, x2 = x
    if x1 == 0 and x2 == 0:
        return 4
    if x1 == 0 or x2 == 0:
        return 3
    return 1 if x1 == x2 else 2


_SYMBOL = {0: "1", 1: "R", 2: "R^-1"}


def describe(exponents) -> str:
    return "{} (+) {}".format(_SYMBOL[exponents[0] % 3], _SYMBOL[exponents[1] % 3])


@dataclass(frozen=True)
class IsolatedClass:
    """One SL(4,R) conjugacy class of block-rotation representations."""

    index: int
    case: int
    representative: tuple
    members: tuple

    @property
    def a2b(self) -> tuple:
        return self.representative[0]

    @property
    def a(self) -> tuple:
        return self.representative[1]

    def describe(self) -> str:
        return f"rho(a^2b) = {describe(self.a2b)}, rho(a) = {describe(self.a)}"

    def representation(self) -> Representation:
        img_x = block_sum(self.a2b)
        img_a = block_sum(self.a)
        return Representation(
            TurnoverPresentation((3, 3, 3)),
            img_a,
            img_a @ img_x,
            ISOLATED,
            (("index", self.index), ("case", self.case)),
            self.describe(),
        )

    def conjugacy_witnesses(self):
        """Yield ``(P, member)`` with ``P rho_rep P^-1 = rho_member`` on both generators."""
        base = self.representative
        for name, perm in _PERMS.items():
            yield _perm_matrix(perm), _act(name, base)


#: Class of the reducible base point of the surface component.
SURFACE_CLASS_MEMBER = ((0, 0), (0, 1))


def _all_pairs():
    return [((x1, x2), (a1, a2)) for x1, x2, a1, a2 in product(range(3), repeat=4)]


def satisfies_relators(pair) -> bool:
    img_x = block_sum(pair[0])
    img_a = block_sum(pair[1])
    rep = Representation(TurnoverPresentation((3, 3, 3)), img_a, img_a @ img_x)
    return verify_relations(rep).passed


def conjugacy_orbits(pairs=None) -> list[tuple]:
    """Orbits of the block-preserving permutation group, in first-seen order."""
    pairs = _all_pairs() if pairs is None else pairs
    seen = set()
    orbits = []
    for p in pairs:
        if p in seen:
            continue
        orbit = tuple(sorted({_act(n, p) for n in _PERMS}))
        seen.update(orbit)
        orbits.append(orbit)
    return orbits


def isolated_point_classes() -> list[IsolatedClass]:
    """All block-rotation classes other than the one on the surface component."""
    return list(_isolated_point_classes())


@lru_cache(maxsize=1)
def _isolated_point_classes() -> tuple[IsolatedClass, ...]:
    pairs = [p for p in _all_pairs() if satisfies_relators(p)]
    orbits = [o for o in conjugacy_orbits(pairs) if SURFACE_CLASS_MEMBER not in o]
    orbits.sort(key=lambda o: (_case(o[0][0]), o[0]))
    return tuple(IsolatedClass(k, _case(o[0][0]), o[0], o) for k, o in enumerate(orbits))


def case_tallies(classes) -> dict[int, int]:
    tallies = {c: 0 for c in (1, 2, 3, 4)}
    for cls in classes:
        tallies[cls.case] += 1
    return tallies


def enumerate_isolated_points(expected: int = EXPECTED_ISOLATED_COUNT) -> list[Representation]:
    """Representatives of every isolated class.

    Raises :class:`IsolatedPointCountError` carrying the classes and per-case
    tallies when their number differs from ``expected``.
    """
    classes = isolated_point_classes()
    tallies = case_tallies(classes)
    if len(classes) != expected:
        raise IsolatedPointCountError(
            f"found {len(classes)} isolated classes, expected {expected}; per-case tallies {tallies}",
            classes,
            tallies,
            expected,
        )
    return [c.representation() for c in classes]


# The published list, expanded literally: (case, rho(a^2 b), rho(a)).
_R, _Ri = 1, 2
PUBLISHED_LIST = (
    *((1, (_R, _R), a) for a in [(0, 0), (0, _R), (0, _Ri), (_R, _R), (_R, _Ri), (_Ri, _R), (_Ri, _Ri), (_R, _Ri)]),
    *(
        (2, (_R, _Ri), a)
        for a in [(0, 0), (0, _R), (0, _Ri), (_R, 0), (_Ri, 0), (_R, _R), (_Ri, _Ri), (_R, _Ri), (_Ri, _R)]
    ),
    *((3, (_R, 0), a) for a in [(_R, 0), (_Ri, 0), (0, 0)]),
    (4, (0, 0), (0, 0)),
)


@dataclass(frozen=True)
class PublishedComparison:
    literal_entries: int
    distinct_classes: tuple[int, ...]
    duplicates: tuple
    missing: tuple
    published_tallies: dict
    computed_tallies: dict


def compare_with_published_list() -> PublishedComparison:
    """Map every entry of the published list onto a computed class."""
    classes = isolated_point_classes()
    index = {m: c.index for c in classes for m in c.members}
    hit: dict[int, list] = {}
    for case, x, a in PUBLISHED_LIST:
        hit.setdefault(index[(x, a)], []).append((case, x, a))
    duplicates = tuple((k, tuple(v)) for k, v in sorted(hit.items()) if len(v) > 1)
    missing = tuple(c for c in classes if c.index not in hit)
    published = {c: 0 for c in (1, 2, 3, 4)}
    for k in hit:
        published[classes[k].case] += 1
    return PublishedComparison(
        len(PUBLISHED_LIST),
        tuple(sorted(hit)),
        duplicates,
        missing,
        published,
        case_tallies(classes),
    )
