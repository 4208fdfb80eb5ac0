"""Trace coordinates and the surface component of the character variety."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, UnsupportedReductionError
from .field import QuadraticNumber, format_scalar, is_exact_scalar
from .holonomy import Representation, evaluate_word
from .linalg import EXACT, Matrix, kernel_basis, vstack
from .words import Word, as_word

S1 = "S1"
S2 = "S2"
OFF_SURFACE = "off-surface"

SL3_BLOCK = "sl3-block"
SL4_MINUS_ONE = "sl4-minus-one"

#: Words whose traces give (x, y, z, u, v, w, r, s, tau), in that order.
TRACE_WORDS = tuple(Word.parse(w) for w in ("a", "b", "ab", "A", "B", "BA", "aB", "Ab", "abAB"))
TRACE_NAMES = ("x", "y", "z", "u", "v", "w", "r", "s", "tau")

CSV_COLUMNS = ("x1", "x2", "x3", "canon_x1", "canon_x2", "canon_x3", "r", "s", "tau", "residual", "component")

DEFAULT_MAGNITUDES = tuple(
    Fraction(x) for x in ("1/4", "1/3", "1/2", "2/3", "1", "3/2", "2", "3", "4", "5")
)


def _is_exact(*xs) -> bool:
    return all(is_exact_scalar(x) for x in xs)


def _num(x):
    return x if is_exact_scalar(x) else float(x)


def surface_polynomial(r, s, tau):
    """``tau^2 - (rs - 3) tau + r^3 + s^3 - 6rs + 9``."""
    r, s, tau = _num(r), _num(s), _num(tau)
    return tau * tau - (r * s - 3) * tau + r**3 + s**3 - 6 * r * s + 9


def surface_gradient(r, s, tau) -> tuple:
    r, s, tau = _num(r), _num(s), _num(tau)
    return (
        3 * r * r - s * tau - 6 * s,
        3 * s * s - r * tau - 6 * r,
        2 * tau - r * s + 3,
    )


def tau_roots_symmetric(r, s) -> tuple:
    """Sum and product of the two roots of the surface polynomial in ``tau``."""
    r, s = _num(r), _num(s)
    return r * s - 3, r**3 + s**3 - 6 * r * s + 9


@dataclass(frozen=True)
class TraceCoordinates:
    x: object
    y: object
    z: object
    u: object
    v: object
    w: object
    r: object
    s: object
    tau: object
    source: str

    @property
    def rst(self) -> tuple:
        return self.r, self.s, self.tau

    @property
    def auxiliary(self) -> tuple:
        return self.x, self.y, self.z, self.u, self.v, self.w

    def as_dict(self) -> dict:
        fmt = lambda v: format_scalar(v) if is_exact_scalar(v) else float(v)  # noqa: E731
        return {**{n: fmt(getattr(self, n)) for n in TRACE_NAMES}, "source": self.source}


def trace_vector(rep: Representation, words: Sequence) -> tuple:
    """Traces of the 4x4 images of the given words.

    Images are built from the image of the word minus its last letter when
    that prefix was seen earlier, so a shortlex ball costs one product per word.
    """
    out = []
    images: dict = {}
    letters = {(g, e): evaluate_word(rep, Word(((g, e),))) for g in "ab" for e in (1, -1)}
    for w in words:
        w = as_word(w)
        prefix = Word(w.letters[:-1]) if w.letters else None
        if prefix is not None and prefix in images:
            m = images[prefix] @ letters[w.letters[-1]]
        else:
            m = evaluate_word(rep, w)
        images[w] = m
        out.append(m.trace() if isinstance(m, Matrix) else float(np.trace(m)))
    return tuple(out)


def _is_sl3_block(m, tol) -> bool:
    e4 = [0, 0, 0, 1]
    if isinstance(m, Matrix):
        return all(m[3, j] == e4[j] and m[j, 3] == e4[j] for j in range(4))
    return bool(np.allclose(m[3, :], e4, atol=tol, rtol=0) and np.allclose(m[:, 3], e4, atol=tol, rtol=0))


def _has_common_fixed_vector(rep: Representation, tol) -> bool:
    if rep.backend == EXACT:
        ident = Matrix.identity(4)
        return kernel_basis(vstack([rep.image_a - ident, rep.image_b - ident])).dim > 0
    ident = np.eye(4)
    return kernel_basis(np.vstack([rep.image_a - ident, rep.image_b - ident]), tol).dim > 0


def trace_coordinates(rep: Representation, tol: float = 1e-9) -> TraceCoordinates:
    """The nine SL(3) trace coordinates of a representation into SL(4).

    Block representations ``M (+) 1`` use the trace of the 3x3 block. If the
    images instead share a fixed vector, the SL(3) trace of the induced
    quotient action is the 4x4 trace minus one.
    """
    if _is_sl3_block(rep.image_a, tol) and _is_sl3_block(rep.image_b, tol):
        source = SL3_BLOCK
    elif _has_common_fixed_vector(rep, tol):
        source = SL4_MINUS_ONE
    else:
        raise UnsupportedReductionError(
            "representation neither preserves the SL(3) block nor fixes a vector; "
            "use traces of word images directly instead"
        )
    vals = []
    for w in TRACE_WORDS:
        m = evaluate_word(rep, w)
        t = m.trace() if isinstance(m, Matrix) else float(np.trace(m))
        if source == SL3_BLOCK:
            t = t - m[3, 3]
        else:
            t = t - 1
        vals.append(t)
    return TraceCoordinates(*vals, source=source)


def _check_product(xs, tol=1e-12):
    if any(x == 0 for x in xs):
        raise DomainError("entries must be nonzero")
    if _is_exact(*xs):
        if QuadraticNumber._coerce(xs[0]) * xs[1] * xs[2] != 1:
            raise DomainError(f"product of {xs} is not 1")
    elif abs(float(xs[0]) * float(xs[1]) * float(xs[2]) - 1.0) > tol:
        raise DomainError(f"product of {xs} is not 1")


def _frac(x):
    if isinstance(x, QuadraticNumber) and x.is_rational():
        return x.a
    return x


def diagonal_to_traces(x1, x2, x3) -> tuple:
    """Closed-form ``(r, s, tau)`` of the diagonal family."""
    xs = tuple(_frac(x) if _is_exact(x) else float(x) for x in (x1, x2, x3))
    _check_product(xs)
    if _is_exact(*xs):
        xs = tuple(Fraction(x) if not isinstance(x, QuadraticNumber) else x for x in xs)
    x1, x2, x3 = xs
    return x1 * x2 + x2 * x3 + x3 * x1, x1 + x2 + x3, x2 / x1 + x3 / x2 + x1 / x3


def conjugate_tau(x1, x2, x3):
    """The other root ``x1/x2 + x2/x3 + x3/x1``, reached by an odd permutation."""
    if _is_exact(x1, x2, x3):
        x1, x2, x3 = (Fraction(_frac(x)) if not isinstance(_frac(x), QuadraticNumber) else x for x in (x1, x2, x3))
    return x1 / x2 + x2 / x3 + x3 / x1


def cyclic_rotations(x) -> list[tuple]:
    x1, x2, x3 = x
    return [(x1, x2, x3), (x3, x1, x2), (x2, x3, x1)]


def cyclic_canonical_form(x1, x2, x3) -> tuple:
    """Lexicographically least cyclic rotation."""
    _check_product((x1, x2, x3))
    return min(cyclic_rotations((x1, x2, x3)))


def classify_component(r, s, tau, tol: float | None = None) -> str:
    """``S1`` when on the surface with ``r, s >= 3``; ``S2`` otherwise on it."""
    p = surface_polynomial(r, s, tau)
    exact = _is_exact(r, s, tau)
    eps = 0 if exact and tol is None else (tol if tol is not None else 1e-9)
    if abs(p) > eps:
        return OFF_SURFACE
    return S1 if r >= 3 - eps and s >= 3 - eps else S2


@dataclass(frozen=True)
class SurfacePoint:
    x: tuple
    canonical: tuple
    r: object
    s: object
    tau: object
    residual: object
    component: str

    @property
    def rst(self) -> tuple:
        return self.r, self.s, self.tau

    @property
    def gradient(self) -> tuple:
        return surface_gradient(self.r, self.s, self.tau)

    def csv_row(self) -> list[str]:
        vals = list(self.x) + list(self.canonical) + [self.r, self.s, self.tau, self.residual]
        return [format_value(v) for v in vals] + [self.component]


def format_value(v) -> str:
    if is_exact_scalar(v):
        return format_scalar(v)
    return format(float(v), ".17g")


def surface_point(x1, x2, x3, tol: float | None = None) -> SurfacePoint:
    r, s, tau = diagonal_to_traces(x1, x2, x3)
    xs = (r, s, tau)
    res = surface_polynomial(*xs)
    return SurfacePoint(
        (x1, x2, x3), cyclic_canonical_form(x1, x2, x3), r, s, tau, res, classify_component(r, s, tau, tol)
    )


SIGN_PATTERNS = {"++": (1, 1), "--": (-1, -1), "+-": (1, -1), "-+": (-1, 1)}


def sample_surface(
    magnitudes: Sequence = DEFAULT_MAGNITUDES,
    sign_patterns: Iterable[str] = ("++", "--"),
    exact: bool = True,
    tol: float | None = None,
) -> list[SurfacePoint]:
    """Points of the diagonal family on a grid over ``(x1, x2)``, ``x3 = 1/(x1 x2)``.

    Output is ordered by sign pattern and then row-major over the grid.
    """
    out = []
    for pattern in sign_patterns:
        try:
            e1, e2 = SIGN_PATTERNS[pattern]
        except KeyError:
            raise DomainError(f"unknown sign pattern {pattern!r}") from None
        for m1 in magnitudes:
            for m2 in magnitudes:
                if m1 == 0 or m2 == 0:
                    raise DomainError("grid must exclude zero")
                if exact:
                    x1, x2 = Fraction(m1) * e1, Fraction(m2) * e2
                    x3 = 1 / (x1 * x2)
                else:
                    x1, x2 = float(m1) * e1, float(m2) * e2
                    x3 = 1.0 / (x1 * x2)
                out.append(surface_point(x1, x2, x3, tol))
    return out


def write_csv(points: Iterable[SurfacePoint], stream=None) -> str:
    buf = stream if stream is not None else io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for p in points:
        writer.writerow(p.csv_row())
    return buf.getvalue() if stream is None else ""


@dataclass(frozen=True)
class SingularLocusReport:
    flagged: tuple
    radius: float
    contains_base_point: bool
    all_flagged_near_base_point: bool
    checked: int
    scope: str

    @property
    def passed(self) -> bool:
        return self.contains_base_point and self.all_flagged_near_base_point


BASE_POINT = (3, 3, 3)


def singular_locus_check(points: Sequence, tol: float = 0.0, radius: float = 1e-6) -> SingularLocusReport:
    """Flag sampled points with ``|grad p| <= tol`` and check they cluster at ``(3, 3, 3)``."""
    flagged = []
    for p in points:
        rst = p.rst if isinstance(p, SurfacePoint) else tuple(p)
        g = surface_gradient(*rst)
        if math.sqrt(sum(float(c) ** 2 for c in g)) <= tol:
            flagged.append(rst)
    dist = lambda q: math.dist([float(c) for c in q], BASE_POINT)  # noqa: E731
    return SingularLocusReport(
        tuple(flagged),
        radius,
        any(dist(q) <= radius for q in flagged),
        all(dist(q) <= radius for q in flagged),
        len(points),
        "sampled diagonal-family points only; real points of the surface outside that image are not sampled",
    )


def fiber_sizes(triples: Iterable[tuple]) -> dict:
    """Number of distinct triples over each ``(r, s, tau)``, closing the input under rotation."""
    closure = set()
    for t in triples:
        closure.update(cyclic_rotations(t))
    fibers: dict = {}
    for t in closure:
        fibers.setdefault(diagonal_to_traces(*t), set()).add(t)
    return {k: len(v) for k, v in fibers.items()}
