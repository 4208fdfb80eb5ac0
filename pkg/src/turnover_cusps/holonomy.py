"""Representation families of turnover groups into SL(4,R).

Every family is parametrized by the images of ``a`` and ``a^2 b``; the
image of ``b`` is always rebuilt as ``rho(a) @ rho(a^2 b)``, which is
legitimate because ``a^3 = 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Sequence

import numpy as np

from .errors import DeterminantError, DimensionError, DomainError, InvalidInputError
from .field import ExactAngle, QuadraticNumber, exact_cos_sin, format_scalar, is_exact_scalar, parse_scalar, turn
from .linalg import (
    EXACT,
    FLOAT,
    Matrix,
    backend_of,
    block_diag,
    determinant,
    from_entries,
    identity,
    inverse,
    matrix_exponential,
    max_deviation,
    nilpotent_exponential,
    traceless_coordinates,
)
from .words import A, B, TurnoverPresentation, Word, as_word, gamma0_generators

REPRESENTATION_FORMAT_VERSION = 1
DET_TOL = 1e-9
EXP_TOL = 1e-16

HYPERBOLIC = "hyperbolic"
SLICE = "slice"
DIAGONAL = "diagonal"
ISOLATED = "isolated"
CUSTOM = "custom"
FAMILIES = (HYPERBOLIC, SLICE, DIAGONAL, ISOLATED, CUSTOM)


# ---------------------------------------------------------------------------
# building blocks


def _all_exact(*xs) -> bool:
    return all(is_exact_scalar(x) or isinstance(x, ExactAngle) for x in xs)


def cusp_translation(x, y):
    """Unipotent cusp matrix ``M(x, y)``; exact iff both arguments are exact."""
    if _all_exact(x, y):
        x, y = QuadraticNumber._coerce(x), QuadraticNumber._coerce(y)
        half = Fraction(1, 2)
    else:
        x, y = float(x), float(y)
        half = 0.5
    rows = [
        [1, x, y, (x * x + y * y) * half],
        [0, 1, 0, x],
        [0, 0, 1, y],
        [0, 0, 0, 1],
    ]
    return from_entries(rows, EXACT if _all_exact(x, y) else FLOAT)


def rotation(theta):
    """2x2 rotation; exact when ``theta`` is an :class:`ExactAngle`."""
    if isinstance(theta, ExactAngle):
        c, s = exact_cos_sin(theta)
        return Matrix([[c, -s], [s, c]])
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def similarity(r, theta):
    """``Omega_(r, theta) = diag(r, R_theta, 1/r)``.

    Exact when ``r`` is rational and ``theta`` an :class:`ExactAngle`.
    """
    if r <= 0:
        raise DomainError(f"similarity needs r > 0, got {r!r}")
    rot = rotation(theta)
    if isinstance(theta, ExactAngle) and is_exact_scalar(r):
        r = QuadraticNumber._coerce(r)
        one = Matrix([[r]])
        return block_diag(one, rot, Matrix([[r.inverse()]]))
    if isinstance(rot, Matrix):
        rot = rot.to_numpy()
    r = float(r)
    return block_diag(np.array([[r]]), rot, np.array([[1.0 / r]]))


def include_sl3(m, tol: float = DET_TOL):
    """``M -> M (+) 1`` from SL(3) into SL(4)."""
    if m.shape != (3, 3):
        raise DimensionError("include_sl3 needs a 3x3 matrix")
    _check_unimodular(m, tol)
    one = Matrix([[1]]) if backend_of(m) == EXACT else np.eye(1)
    return block_diag(m, one)


def include_sl2_pair(a, b, tol: float = DET_TOL):
    """``(A, B) -> A (+) B`` from SL(2) x SL(2) into SL(4)."""
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise DimensionError("include_sl2_pair needs two 2x2 matrices")
    _check_unimodular(a, tol)
    _check_unimodular(b, tol)
    return block_diag(a, b)


def _check_unimodular(m, tol):
    det = determinant(m)
    ok = det == 1 if backend_of(m) == EXACT else abs(det - 1.0) <= tol
    if not ok:
        raise DomainError(f"determinant {det} is not 1")


#: Order-three permutation used by the diagonal family (e_i -> e_{i-1}).
P3 = Matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
#: Rotation by one third of a turn, exact over Q(sqrt 3).
R3 = rotation(turn(1, 3))


# ---------------------------------------------------------------------------
# representation value type


@dataclass(frozen=True)
class Representation:
    presentation: TurnoverPresentation
    image_a: Any
    image_b: Any
    family: str = CUSTOM
    parameters: tuple = ()
    label: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidInputError(f"unknown family {self.family!r}")
        if backend_of(self.image_a) != backend_of(self.image_b):
            raise InvalidInputError("generator images use different backends")
        if self.image_a.shape != (4, 4) or self.image_b.shape != (4, 4):
            raise DimensionError("generator images must be 4x4")
        if isinstance(self.parameters, Mapping):
            object.__setattr__(self, "parameters", tuple(self.parameters.items()))

    @property
    def backend(self) -> str:
        return backend_of(self.image_a)

    @property
    def orders(self) -> tuple[int, int, int]:
        return self.presentation.orders

    @property
    def params(self) -> dict:
        return dict(self.parameters)

    def image(self, w) -> Any:
        return evaluate_word(self, w)

    def check_determinants(self, tol: float = DET_TOL) -> None:
        for name, m in (("a", self.image_a), ("b", self.image_b)):
            det = determinant(m)
            ok = det == 1 if self.backend == EXACT else abs(det - 1.0) <= tol
            if not ok:
                raise DeterminantError(f"det rho({name}) = {det}")

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        def enc(m):
            if isinstance(m, Matrix):
                return [[format_scalar(x) for x in row] for row in m.rows]
            return [[float(x) for x in row] for row in m]

        def enc_param(v):
            if isinstance(v, ExactAngle):
                return {"turns": format_scalar(QuadraticNumber(v.turns))}
            if is_exact_scalar(v):
                return format_scalar(v)
            if isinstance(v, (tuple, list)):
                return [enc_param(x) for x in v]
            return v

        return {
            "format_version": REPRESENTATION_FORMAT_VERSION,
            "orders": list(self.orders),
            "family": self.family,
            "label": self.label,
            "backend": self.backend,
            "parameters": {k: enc_param(v) for k, v in self.parameters},
            "image_a": enc(self.image_a),
            "image_b": enc(self.image_b),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_json_dict(), **kwargs)

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Representation":
        try:
            version = data.get("format_version", REPRESENTATION_FORMAT_VERSION)
            if version != REPRESENTATION_FORMAT_VERSION:
                raise InvalidInputError(f"unsupported representation format {version}")
            backend = data.get("backend")
            images = [data["image_a"], data["image_b"]]
            orders = tuple(data["orders"])
        except (KeyError, AttributeError, TypeError) as exc:
            raise InvalidInputError(f"malformed representation document: {exc}") from None
        if backend is None:
            backend = EXACT if isinstance(images[0][0][0], str) else FLOAT

        def dec(rows):
            if backend == EXACT:
                return Matrix([[parse_scalar(str(x)) for x in row] for row in rows])
            return np.array(rows, dtype=float)

        def dec_param(v):
            if isinstance(v, dict) and "turns" in v:
                return ExactAngle(parse_scalar(v["turns"]).a)
            if isinstance(v, str):
                return parse_scalar(v)
            if isinstance(v, list):
                return tuple(dec_param(x) for x in v)
            return v

        try:
            mats = [dec(m) for m in images]
        except (ValueError, TypeError) as exc:
            raise InvalidInputError(f"malformed matrix entries: {exc}") from None
        return cls(
            TurnoverPresentation(orders),
            mats[0],
            mats[1],
            family=data.get("family", CUSTOM),
            parameters=tuple((k, dec_param(v)) for k, v in data.get("parameters", {}).items()),
            label=data.get("label", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> "Representation":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"invalid JSON: {exc}") from None
        return cls.from_json_dict(data)


def custom_representation(image_a, image_b, orders=(3, 3, 3), label: str = "") -> Representation:
    return Representation(TurnoverPresentation(orders), image_a, image_b, CUSTOM, (), label)


def from_a_and_a2b(image_a, image_a2b, orders=(3, 3, 3), **kwargs) -> Representation:
    """Build a representation from ``rho(a)`` and ``rho(a^2 b)``."""
    return Representation(TurnoverPresentation(orders), image_a, image_a @ image_a2b, **kwargs)


# ---------------------------------------------------------------------------
# evaluation


def evaluate_word(rep: Representation, w) -> Any:
    """Image of a word; inverse letters map to matrix inverses."""
    w = as_word(w)
    gens = {("a", 1): rep.image_a, ("b", 1): rep.image_b}
    result = identity(4, rep.backend)
    for letter in w.letters:
        if letter not in gens:
            g = letter[0]
            gens[letter] = inverse(gens[(g, 1)])
        result = result @ gens[letter]
    return result


@dataclass(frozen=True)
class RelationReport:
    """Per-relator sup-norm deviation of the image from the identity."""

    relators: tuple[str, ...]
    deviations: tuple[float, ...]
    exact: bool
    tol: float | None
    passed: bool

    @property
    def max_deviation(self) -> float:
        return max(self.deviations)

    def as_dict(self) -> dict:
        return {
            "relators": list(self.relators),
            "deviations": list(self.deviations),
            "exact": self.exact,
            "tol": self.tol,
            "passed": self.passed,
        }


def verify_relations(rep: Representation, tol: float | None = None) -> RelationReport:
    """Evaluate every relator; exact backends must give exactly the identity."""
    names, devs, ok = [], [], []
    ident = identity(4, rep.backend)
    for rel in rep.presentation.relators:
        img = evaluate_word(rep, rel)
        names.append(str(rel))
        if rep.backend == EXACT:
            devs.append(max_deviation(img, ident))
            ok.append(img == ident)
        else:
            if tol is None:
                tol = DET_TOL
            d = max_deviation(img, ident)
            devs.append(d)
            ok.append(d <= tol)
    return RelationReport(tuple(names), tuple(devs), rep.backend == EXACT, tol, all(ok))


# ---------------------------------------------------------------------------
# families


def hyperbolic_cusp_holonomy(n1: int = 3, n2: int = 3, n3: int = 3) -> Representation:
    """Exact holonomy of a Euclidean turnover inside the cusp normalizer.

    ``rho(a)`` is the rotation by ``2pi/n1`` about the origin and ``rho(b)``
    the rotation by ``2pi/n2`` about the point fixed by
    ``Omega_(1, 2pi/n2) M(1, 0)``. Their product rotates by
    ``2pi(1/n1 + 1/n2) = -2pi/n3``, so all three relators hold exactly.
    """
    pres = TurnoverPresentation((n1, n2, n3))
    if not pres.is_euclidean:
        raise DomainError(f"{pres.label()} is not a Euclidean turnover")
    rho_a = similarity(1, turn(1, pres.orders[0]))
    rho_b = similarity(1, turn(1, pres.orders[1])) @ cusp_translation(1, 0)
    return Representation(pres, rho_a, rho_b, HYPERBOLIC, (("x0", 1), ("y0", 0)), "rho_hyp")


def polar_to_slice(t: float, s: float) -> tuple[float, float]:
    """Convert the polar slice coordinates ``(t, s)`` to ``(u, v) = t(cos 3s, sin 3s)``."""
    return t * math.cos(3 * s), t * math.sin(3 * s)


def slice_generator(u: float, v: float) -> np.ndarray:
    """Logarithm of the slice image of ``a^2 b``."""
    w = 2.0 * (u * u + v * v)
    return np.array(
        [
            [0.0, 1.0, 0.0, 0.0],
            [0.0, u, v, 1.0],
            [0.0, v, -u, 0.0],
            [0.0, w, 0.0, 0.0],
        ]
    )


def slice_representation(u: float, v: float, tol: float = EXP_TOL) -> Representation:
    """Float representation of the two-parameter slice through ``rho_hyp``."""
    rho_a = similarity(1, turn(1, 3)).to_numpy()
    x = matrix_exponential(slice_generator(float(u), float(v)), tol)
    return Representation(
        TurnoverPresentation((3, 3, 3)),
        rho_a,
        rho_a @ x,
        SLICE,
        (("u", float(u)), ("v", float(v))),
        "Psi",
    )


_SLICE_DIRECTIONS = {
    "u": Matrix([[0, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 0]]),
    "v": Matrix([[0, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 0]]),
}


def slice_derivative(direction: str) -> Matrix:
    """Exact derivative of the slice image of ``a^2 b`` at the origin.

    Uses the block identity ``exp([[N, E], [0, N]]) = [[e^N, D], [0, e^N]]``
    where ``D`` is the directional derivative of ``exp`` at ``N`` along
    ``E``. Here ``N`` is nilpotent so the block matrix is too, and the
    finite series is exact.
    """
    try:
        e = _SLICE_DIRECTIONS[direction]
    except KeyError:
        raise InvalidInputError(f"direction must be 'u' or 'v', got {direction!r}") from None
    n = Matrix([[0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]])
    z = Matrix.zeros(4)
    big = Matrix([list(r1) + list(r2) for r1, r2 in zip(n.rows, e.rows)] + [list(r1) + list(r2) for r1, r2 in zip(z.rows, n.rows)])
    ex = nilpotent_exponential(big)
    return Matrix([row[4:] for row in ex.rows[:4]])


@dataclass(frozen=True)
class TransversalityCocycle:
    """A cocycle given by its values (traceless matrices) on ``a``, ``b`` and ``a^2 b``."""

    name: str
    values: dict = field(hash=False)

    def matrix(self, g: str) -> Matrix:
        return self.values[g]

    def vector(self, g: str) -> list:
        return traceless_coordinates(self.values[g])

    def generator_vectors(self) -> dict:
        return {g: self.vector(g) for g in ("a", "b")}


def transversality_cocycles() -> tuple[TransversalityCocycle, TransversalityCocycle]:
    """The two tangent cocycles of the slice at ``rho_hyp``.

    Each is ``z(g) = (d/dt rho_t(g)) rho(g)^-1``: zero on ``a``, the
    right-translated slice derivative on ``a^2 b``, and
    ``Ad(rho(a)) z(a^2 b)`` on ``b = a (a^2 b)``.
    """
    rho = hyperbolic_cusp_holonomy()
    m_inv = cusp_translation(-1, 0)
    out = []
    for name, direction in (("d1", "u"), ("d2", "v")):
        z_x = slice_derivative(direction) @ m_inv
        z_b = rho.image_a @ z_x @ inverse(rho.image_a)
        out.append(TransversalityCocycle(name, {"a": Matrix.zeros(4), "aab": z_x, "b": z_b}))
    return tuple(out)


def diagonal_representation(x1, x2, x3, tol: float = 1e-12) -> Representation:
    """``rho(a^2 b) = diag(x1, x2, x3, 1)`` and ``rho(a) = P3 (+) 1``."""
    xs = (x1, x2, x3)
    if any(x == 0 for x in xs):
        raise DomainError("diagonal entries must be nonzero")
    if _all_exact(*xs):
        if QuadraticNumber._coerce(x1) * x2 * x3 != 1:
            raise DomainError(f"product {x1}*{x2}*{x3} is not 1")
        d = Matrix.diag(list(xs) + [1])
        rho_a = include_sl3(P3)
    else:
        xs = tuple(float(x) for x in xs)
        if abs(xs[0] * xs[1] * xs[2] - 1.0) > tol:
            raise DomainError(f"product {xs[0] * xs[1] * xs[2]!r} is not 1")
        d = np.diag(list(xs) + [1.0])
        rho_a = include_sl3(P3).to_numpy()
    return Representation(
        TurnoverPresentation((3, 3, 3)), rho_a, rho_a @ d, DIAGONAL, (("x", tuple(xs)),), "rho_diag"
    )


def reducible_representation() -> Representation:
    """The base point of the diagonal family, ``rho(a^2 b) = 1``."""
    return diagonal_representation(1, 1, 1)


# ---------------------------------------------------------------------------
# degeneration


def degeneration_conjugator(x):
    if x <= 0:
        raise DomainError("degeneration parameter must be positive")
    if is_exact_scalar(x):
        return Matrix.diag([x, 1, 1, QuadraticNumber._coerce(x).inverse()])
    return np.diag([x, 1.0, 1.0, 1.0 / x])


@dataclass(frozen=True)
class DegenerationStep:
    x: Any
    deviation: float
    fixes_rho_a: bool


def degeneration_path(exponents: Sequence[int] = range(1, 7)) -> list[DegenerationStep]:
    """Conjugate ``rho_hyp`` by ``C_x = diag(x, 1, 1, 1/x)`` for ``x = 10^-k``.

    Reports the distance of ``C_x rho_hyp(a^2 b) C_x^-1`` from the identity
    and whether ``C_x`` commutes with ``rho_hyp(a)``. All arithmetic is exact.
    """
    rho = hyperbolic_cusp_holonomy()
    x_img = evaluate_word(rho, gamma0_generators()[0])
    ident = Matrix.identity(4)
    steps = []
    for k in exponents:
        x = Fraction(1, 10**k)
        c = degeneration_conjugator(x)
        c_inv = c.inv()
        conj = c @ x_img @ c_inv
        steps.append(DegenerationStep(x, max_deviation(conj, ident), c @ rho.image_a @ c_inv == rho.image_a))
    return steps
