"""Group cohomology of turnover groups with twisted coefficients, in low degree."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import CohomologyInconsistencyError, ConfigurationError, InvalidInputError
from .holonomy import Representation, evaluate_word
from .linalg import (
    DEFAULT_RANK_TOL,
    EXACT,
    Matrix,
    adjoint_action,
    exterior_square,
    from_entries,
    hstack,
    identity,
    kernel_basis,
    rank,
    vstack,
)
from .words import GENERATORS, Word, as_word, fox_derivative

ADJOINT = "adjoint"
STANDARD = "standard"
EXTERIOR_SQUARE = "exterior-square"

SMOOTHNESS_PREMISE = (
    "smoothness of the representation variety at the base point relies on an external theorem; "
    "only its dimension consequences are checked"
)


@dataclass(frozen=True)
class ModuleAction:
    """A linear action of SL(4) used as coefficient module."""

    name: str
    dim: int
    induce: Callable = field(compare=False)

    def __call__(self, g, tol: float | None = None):
        if self.name == ADJOINT:
            return self.induce(g, tol)
        return self.induce(g)


MODULES = {
    ADJOINT: ModuleAction(ADJOINT, 15, adjoint_action),
    STANDARD: ModuleAction(STANDARD, 4, lambda g: g),
    EXTERIOR_SQUARE: ModuleAction(EXTERIOR_SQUARE, 6, exterior_square),
}


def get_module(module) -> ModuleAction:
    if isinstance(module, ModuleAction):
        return module
    try:
        return MODULES[module]
    except KeyError:
        raise InvalidInputError(f"unknown module {module!r}; choose from {sorted(MODULES)}") from None


class _Evaluator:
    """Caches module matrices of word images for one representation."""

    def __init__(self, rep: Representation, module, tol):
        self.rep = rep
        self.module = get_module(module)
        self.backend = rep.backend
        if self.backend != EXACT and tol is None:
            tol = DEFAULT_RANK_TOL
        self.tol = tol
        self._cache: dict[Word, object] = {}

    def __call__(self, w) -> object:
        w = as_word(w)
        if w not in self._cache:
            self._cache[w] = self.module(evaluate_word(self.rep, w), self.tol)
        return self._cache[w]

    def identity(self):
        return identity(self.module.dim, self.backend)

    def rank(self, m) -> int:
        return rank(m, None if self.backend == EXACT else self.tol)

    def kernel(self, m):
        return kernel_basis(m, None if self.backend == EXACT else self.tol)


def _fixed_operator(ev: _Evaluator, elements: Sequence):
    ident = ev.identity()
    return vstack([ev(w) - ident for w in elements])


def h0_dimension(rep: Representation, module, elements: Sequence, tol: float | None = None) -> int:
    """Dimension of the subspace fixed by every listed group element."""
    if not elements:
        raise InvalidInputError("h0_dimension needs at least one element")
    ev = _Evaluator(rep, module, tol)
    return ev.kernel(_fixed_operator(ev, [as_word(w) for w in elements])).dim


def _group_ring_image(ev: _Evaluator, element):
    acc = None
    for c, w in element:
        term = ev(w) * c if ev.backend == EXACT else float(c) * ev(w)
        acc = term if acc is None else acc + term
    if acc is None:
        acc = ev.identity() * 0 if ev.backend == EXACT else 0.0 * ev.identity()
    return acc


def fox_matrix(rep: Representation, module, tol: float | None = None):
    """Stacked Fox conditions; its kernel is the space of cocycles ``(z(a), z(b))``."""
    ev = _Evaluator(rep, module, tol)
    rows = []
    for rel in rep.presentation.relators:
        rows.append(hstack([_group_ring_image(ev, fox_derivative(rel, g)) for g in GENERATORS]))
    return vstack(rows)


def coboundary_matrix(rep: Representation, module, tol: float | None = None):
    """Matrix of ``v -> (g v - v)_{g in (a, b)}``."""
    ev = _Evaluator(rep, module, tol)
    return _fixed_operator(ev, [Word.parse(g) for g in GENERATORS])


def z1_dimension(rep: Representation, module, tol: float | None = None) -> int:
    m = get_module(module)
    ev = _Evaluator(rep, m, tol)
    return 2 * m.dim - ev.rank(fox_matrix(rep, m, tol))


def b1_dimension(rep: Representation, module, tol: float | None = None) -> int:
    ev = _Evaluator(rep, module, tol)
    return ev.rank(coboundary_matrix(rep, module, tol))


def h1_dimension(rep: Representation, module, tol: float | None = None) -> int:
    h1 = z1_dimension(rep, module, tol) - b1_dimension(rep, module, tol)
    if h1 < 0:
        raise CohomologyInconsistencyError(f"negative first cohomology ({h1})")
    return h1


def twisted_euler_characteristic(module_dim: int, cone_point_h0_dims: Sequence[int]) -> int:
    """Euler characteristic of a turnover with twisted coefficients.

    The thrice-punctured sphere contributes ``-module_dim`` and each cone
    point contributes the dimension of its fixed subspace.
    """
    dims = list(cone_point_h0_dims)
    if len(dims) != 3:
        raise InvalidInputError("a turnover has exactly three cone points")
    return -module_dim + sum(dims)


def cone_point_h0(rep: Representation, module, tol: float | None = None) -> list[int]:
    return [h0_dimension(rep, module, [w], tol) for w in rep.presentation.cone_generators]


@dataclass(frozen=True)
class CohomologyReport:
    orders: tuple
    module: str
    module_dim: int
    backend: str
    h0: int
    z1: int
    b1: int
    h1: int
    h2: int
    cone_point_h0: tuple
    euler_characteristic: int
    premises: tuple = ()

    @property
    def duality_consistent(self) -> bool:
        return self.h0 - self.h1 + self.h2 == self.euler_characteristic

    def as_dict(self) -> dict:
        return {
            "orders": list(self.orders),
            "module": self.module,
            "module_dim": self.module_dim,
            "backend": self.backend,
            "h0": self.h0,
            "z1": self.z1,
            "b1": self.b1,
            "h1": self.h1,
            "h2": self.h2,
            "cone_point_h0": list(self.cone_point_h0),
            "euler_characteristic": self.euler_characteristic,
            "duality_consistent": self.duality_consistent,
            "premises": list(self.premises),
        }


def cohomology_report(rep: Representation, module=ADJOINT, tol: float | None = None) -> CohomologyReport:
    m = get_module(module)
    h0 = h0_dimension(rep, m, [Word.parse(g) for g in GENERATORS], tol)
    z1 = z1_dimension(rep, m, tol)
    b1 = b1_dimension(rep, m, tol)
    if b1 != m.dim - h0:
        raise CohomologyInconsistencyError(f"b1 = {b1} but module_dim - h0 = {m.dim - h0}")
    h1 = z1 - b1
    if h1 < 0:
        raise CohomologyInconsistencyError(f"negative first cohomology ({h1})")
    cones = cone_point_h0(rep, m, tol)
    premises = (SMOOTHNESS_PREMISE,) if m.name == ADJOINT else ()
    return CohomologyReport(
        rep.orders, m.name, m.dim, rep.backend, h0, z1, b1, h1, h0, tuple(cones),
        twisted_euler_characteristic(m.dim, cones), premises,
    )


@dataclass(frozen=True)
class StrongRegularity:
    regular: bool
    h0_gamma0: int
    commute: bool
    rank: int = 3


def is_strongly_regular(rep: Representation, tol: float | None = None) -> StrongRegularity:
    """Centralizer of the translation subgroup has dimension 3 and its images commute."""
    x, y = rep.presentation.lattice_generators()
    h0 = h0_dimension(rep, ADJOINT, [x, y], tol)
    mx, my = evaluate_word(rep, x), evaluate_word(rep, y)
    if rep.backend == EXACT:
        commute = mx @ my == my @ mx
    else:
        commute = bool(np.max(np.abs(mx @ my - my @ mx)) <= (tol or DEFAULT_RANK_TOL))
    return StrongRegularity(h0 == 3 and commute, h0, commute)


# ---------------------------------------------------------------------------
# individual cocycles


def _as_column(v, backend):
    if backend == EXACT:
        return Matrix.column(list(v))
    return np.asarray(v, dtype=float).reshape(-1, 1)


def extend_cocycle(rep: Representation, module, values: dict, w, tol: float | None = None):
    """Value of a cocycle on a word via ``z(uv) = z(u) + g(u) z(v)``."""
    ev = _Evaluator(rep, module, tol)
    dim = get_module(module).dim
    cols = {g: _as_column(values[g], rep.backend) for g in GENERATORS}
    acc = _as_column([0] * dim, rep.backend)
    for prefix, (g, e) in as_word(w).prefixes():
        if e == 1:
            acc = acc + ev(prefix) @ cols[g]
        else:
            acc = acc - ev(prefix * Word(((g, -1),))) @ cols[g]
    return acc


def is_cocycle(rep: Representation, module, values: dict, tol: float | None = None) -> bool:
    ev = _Evaluator(rep, module, tol)
    for rel in rep.presentation.relators:
        z = extend_cocycle(rep, module, values, rel, tol)
        if rep.backend == EXACT:
            if not z.is_zero():
                return False
        elif np.max(np.abs(z)) > ev.tol:
            return False
    return True


def stacked_vector(values: dict, backend: str):
    return _as_column(list(values["a"]) + list(values["b"]), backend)


def independent_modulo_coboundaries(rep: Representation, module, cocycles: Sequence[dict], tol=None) -> bool:
    """True iff the given cocycles span a space meeting the coboundaries only in 0."""
    ev = _Evaluator(rep, module, tol)
    b = coboundary_matrix(rep, module, tol)
    # coboundary of v is stacked (a v - v, b v - v)
    zs = hstack([stacked_vector(c, rep.backend) for c in cocycles])
    return ev.rank(hstack([b, zs])) == ev.rank(b) + len(cocycles)


def is_coboundary(rep: Representation, module, values: dict, tol=None) -> bool:
    return not independent_modulo_coboundaries(rep, module, [values], tol)
