"""Small dense linear algebra over an exact quadratic field or float64.

Two backends are supported:

* ``exact``: :class:`Matrix`, whose entries are
  :class:`~turnover_cusps.field.QuadraticNumber`. Ranks, kernels and
  identities are decided without tolerance.
* ``float``: plain ``numpy.ndarray`` of dtype float64. Every rank or
  equality decision takes an explicit tolerance argument.

Mixing the two in one operation raises :class:`BackendMismatchError`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BackendMismatchError,
    ConfigurationError,
    DeterminantError,
    DimensionError,
    InvalidInputError,
    NumericOverflowError,
)
from .field import QuadraticNumber, as_exact, format_scalar

EXACT = "exact"
FLOAT = "float"

#: Relative rank tolerance used by the higher-level modules for float data.
DEFAULT_RANK_TOL = 1e-9

_ZERO = QuadraticNumber(0)
_ONE = QuadraticNumber(1)


class Matrix:
    """Immutable dense matrix over Q(sqrt d).

    >>> m = Matrix([[1, 2], [3, 4]])
    >>> m.det()
    QuadraticNumber('-2')
    >>> (m @ m.inv()) == Matrix.identity(2)
    True
    """

    __slots__ = ("_rows", "shape")
    # numpy must defer to our reflected operators so mixing raises cleanly
    __array_ufunc__ = None

    def __init__(self, rows: Iterable[Iterable]):
        data = tuple(tuple(as_exact(x) for x in row) for row in rows)
        ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise DimensionError("ragged rows")
        object.__setattr__(self, "_rows", data)
        object.__setattr__(self, "shape", (len(data), ncols))

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, m: int, n: int | None = None) -> "Matrix":
        n = m if n is None else n
        return cls([[_ZERO] * n for _ in range(m)])

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else _ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def column(cls, entries: Sequence) -> "Matrix":
        return cls([[x] for x in entries])

    # -- access ----------------------------------------------------------

    @property
    def rows(self) -> tuple:
        return self._rows

    @property
    def n(self) -> int:
        return self.shape[0]

    @property
    def field_d(self) -> int:
        ds = {x.d for row in self._rows for x in row if x.b != 0}
        return ds.pop() if len(ds) == 1 else 1

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    @property
    def T(self) -> "Matrix":
        return Matrix(zip(*self._rows)) if self._rows else self

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self._rows], dtype=float)

    def __repr__(self):
        body = ", ".join("[" + ", ".join(format_scalar(x) for x in row) + "]" for row in self._rows)
        return f"Matrix([{body}])"

    # -- arithmetic ------------------------------------------------------

    def _check(self, other):
        if isinstance(other, np.ndarray):
            raise BackendMismatchError("cannot combine exact Matrix with a float array")
        if not isinstance(other, Matrix):
            return False
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionError(f"shape mismatch {self.shape} vs {other.shape}")
        return Matrix(
            [[x + y for x, y in zip(r, s)] for r, s in zip(self._rows, other._rows)]
        )

    def __radd__(self, other):
        self._check(other)
        return NotImplemented

    def __neg__(self):
        return Matrix([[-x for x in row] for row in self._rows])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        self._check(other)
        return NotImplemented

    def __mul__(self, scalar):
        if isinstance(scalar, (Matrix, np.ndarray)):
            raise TypeError("use @ for matrix products")
        if isinstance(scalar, float):
            raise BackendMismatchError("cannot scale an exact Matrix by a float")
        c = as_exact(scalar)
        return Matrix([[c * x for x in row] for row in self._rows])

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not self._check(other):
            return NotImplemented
        if self.shape[1] != other.shape[0]:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._rows))
        out = []
        for row in self._rows:
            out_row = []
            for col in cols:
                acc = _ZERO
                for x, y in zip(row, col):
                    if x.a or x.b:
                        if y.a or y.b:
                            acc = acc + x * y
                out_row.append(acc)
            out.append(out_row)
        return Matrix(out)

    def __rmatmul__(self, other):
        self._check(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = Matrix.identity(self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, np.ndarray):
            raise BackendMismatchError("cannot compare exact Matrix with a float array")
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    # -- elimination -----------------------------------------------------

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        rows = [list(r) for r in self._rows]
        m, n = self.shape
        pivots: list[int] = []
        r = 0
        for c in range(n):
            if r == m:
                break
            p = next((i for i in range(r, m) if rows[i][c]), None)
            if p is None:
                continue
            rows[r], rows[p] = rows[p], rows[r]
            inv = rows[r][c].inverse()
            rows[r] = [x * inv for x in rows[r]]
            for i in range(m):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
        return Matrix(rows) if rows else self, pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[tuple[QuadraticNumber, ...]]:
        """Basis of ``{v : self @ v = 0}`` as tuples of scalars."""
        m, n = self.shape
        red, pivots = self.rref()
        free = [c for c in range(n) if c not in pivots]
        basis = []
        for f in free:
            v = [_ZERO] * n
            v[f] = _ONE
            for i, pc in enumerate(pivots):
                v[pc] = -red[i, f]
            basis.append(tuple(v))
        return basis

    def det(self) -> QuadraticNumber:
        if self.shape[0] != self.shape[1]:
            raise DimensionError("determinant of a non-square matrix")
        rows = [list(r) for r in self._rows]
        n = self.n
        det = _ONE
        for c in range(n):
            p = next((i for i in range(c, n) if rows[i][c]), None)
            if p is None:
                return _ZERO
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                det = -det
            piv = rows[c][c]
            det = det * piv
            inv = piv.inverse()
            for i in range(c + 1, n):
                if rows[i][c]:
                    f = rows[i][c] * inv
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
        return det

    def inv(self) -> "Matrix":
        n = self.n
        if self.shape[0] != self.shape[1]:
            raise DimensionError("inverse of a non-square matrix")
        aug = Matrix([list(r) + list(e) for r, e in zip(self._rows, Matrix.identity(n)._rows)])
        red, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix([row[n:] for row in red.rows])

    def trace(self) -> QuadraticNumber:
        acc = _ZERO
        for i in range(min(self.shape)):
            acc = acc + self._rows[i][i]
        return acc

    def is_identity(self) -> bool:
        return self == Matrix.identity(self.n)

    def is_zero(self) -> bool:
        return all(not x for row in self._rows for x in row)

    def max_abs(self) -> float:
        return max((float(abs(x)) for row in self._rows for x in row), default=0.0)


# ---------------------------------------------------------------------------
# backend helpers


def backend_of(m) -> str:
    if isinstance(m, Matrix):
        return EXACT
    if isinstance(m, np.ndarray):
        return FLOAT
    raise TypeError(f"not a matrix: {type(m)!r}")


def same_backend(*mats) -> str:
    kinds = {backend_of(m) for m in mats}
    if len(kinds) != 1:
        raise BackendMismatchError(f"mixed backends: {sorted(kinds)}")
    return kinds.pop()


def identity(n: int, backend: str = EXACT):
    return Matrix.identity(n) if backend == EXACT else np.eye(n)


def identity_like(m):
    return identity(m.shape[0], backend_of(m))


def inverse(m):
    return m.inv() if isinstance(m, Matrix) else np.linalg.inv(m)


def determinant(m):
    return m.det() if isinstance(m, Matrix) else float(np.linalg.det(m))


def trace(m):
    return m.trace() if isinstance(m, Matrix) else float(np.trace(m))


def from_entries(rows, backend: str):
    if backend == EXACT:
        return Matrix(rows)
    return np.array([[float(x) for x in row] for row in rows], dtype=float)


def to_float(m) -> np.ndarray:
    return m.to_numpy() if isinstance(m, Matrix) else np.asarray(m, dtype=float)


def vstack(blocks: Sequence):
    backend = same_backend(*blocks)
    if backend == EXACT:
        return Matrix([row for b in blocks for row in b.rows])
    return np.vstack(blocks)


def hstack(blocks: Sequence):
    backend = same_backend(*blocks)
    if backend == EXACT:
        return Matrix([sum((list(b.rows[i]) for b in blocks), []) for i in range(blocks[0].shape[0])])
    return np.hstack(blocks)


def block_diag(*blocks):
    backend = same_backend(*blocks)
    n = sum(b.shape[0] for b in blocks)
    if backend == FLOAT:
        out = np.zeros((n, n))
        k = 0
        for b in blocks:
            out[k : k + b.shape[0], k : k + b.shape[0]] = b
            k += b.shape[0]
        return out
    rows = [[_ZERO] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i in range(b.shape[0]):
            for j in range(b.shape[1]):
                rows[k + i][k + j] = b[i, j]
        k += b.shape[0]
    return Matrix(rows)


def max_deviation(m, target) -> float:
    """Sup-norm distance ``max |m - target|`` as a float."""
    same_backend(m, target)
    if isinstance(m, Matrix):
        return (m - target).max_abs()
    return float(np.max(np.abs(m - target))) if m.size else 0.0


def matrices_equal(m1, m2, tol: float | None = None) -> bool:
    backend = same_backend(m1, m2)
    if backend == EXACT:
        return m1 == m2
    if tol is None:
        raise ConfigurationError("float comparison needs an explicit tolerance")
    return max_deviation(m1, m2) <= tol


def _require_tol(m, tol):
    if backend_of(m) == FLOAT and tol is None:
        raise ConfigurationError("float backend requires an explicit tolerance")


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class LinearSubspace:
    """A subspace of ``ambient_dim``-space given by a basis."""

    ambient_dim: int
    basis: tuple = field(default_factory=tuple)
    backend: str = EXACT

    @property
    def dim(self) -> int:
        return len(self.basis)

    rank = dim

    def as_matrix(self):
        """Basis vectors as the columns of a matrix."""
        if not self.basis:
            return Matrix.zeros(self.ambient_dim, 0) if self.backend == EXACT else np.zeros((self.ambient_dim, 0))
        if self.backend == EXACT:
            return Matrix(zip(*self.basis))
        return np.column_stack(self.basis)


def _float_rank(m: np.ndarray, tol: float) -> tuple[int, np.ndarray]:
    if m.size == 0:
        return 0, np.eye(m.shape[1]) if m.ndim == 2 else np.zeros((0, 0))
    u, s, vt = np.linalg.svd(m)
    if not np.all(np.isfinite(s)):
        raise NumericOverflowError("non-finite singular values")
    cutoff = tol * (s[0] if s.size and s[0] > 0 else 1.0)
    r = int(np.sum(s > cutoff))
    return r, vt


def rank(m, tol: float | None = None) -> int:
    """Rank; exact for :class:`Matrix`, relative-SVD cutoff for floats."""
    _require_tol(m, tol)
    if isinstance(m, Matrix):
        return m.rank()
    return _float_rank(np.asarray(m, dtype=float), tol)[0]


def kernel_basis(m, tol: float | None = None) -> LinearSubspace:
    """Null space of ``m``.

    ``tol`` is mandatory for float input and is interpreted relative to the
    largest singular value.
    """
    _require_tol(m, tol)
    n = m.shape[1]
    if isinstance(m, Matrix):
        return LinearSubspace(n, tuple(m.nullspace()), EXACT)
    arr = np.asarray(m, dtype=float)
    if arr.shape[0] == 0:
        return LinearSubspace(n, tuple(np.eye(n)), FLOAT)
    r, vt = _float_rank(arr, tol)
    return LinearSubspace(n, tuple(vt[r:].copy()), FLOAT)


# ---------------------------------------------------------------------------
# exponential


def _nilpotency_series(n_mat: Matrix) -> Matrix:
    n = n_mat.n
    acc = Matrix.identity(n)
    term = Matrix.identity(n)
    for k in range(1, n + 1):
        term = (term @ n_mat) * Fraction(1, k)
        if term.is_zero():
            return acc
        acc = acc + term
    raise InvalidInputError("matrix is not nilpotent")


def nilpotent_exponential(n_mat: Matrix) -> Matrix:
    """Exact ``exp(N)`` for a nilpotent exact matrix (finite series)."""
    if not isinstance(n_mat, Matrix):
        raise BackendMismatchError("nilpotent_exponential works on exact matrices")
    return _nilpotency_series(n_mat)


def matrix_exponential(m, tol: float) -> np.ndarray:
    """``exp(m)`` by scaling and squaring with a truncated Taylor series.

    The series is summed until the next term's norm falls below
    ``tol * norm(partial sum)``.
    """
    if isinstance(m, Matrix):
        raise BackendMismatchError("matrix_exponential needs float input; see nilpotent_exponential")
    if tol is None or tol <= 0:
        raise ConfigurationError("matrix_exponential needs a positive tolerance")
    a = np.asarray(m, dtype=float)
    if not np.all(np.isfinite(a)):
        raise NumericOverflowError("non-finite entries")
    norm = np.linalg.norm(a, 1)
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    a = a / (2.0**squarings)
    n = a.shape[0]
    acc = np.eye(n)
    term = np.eye(n)
    for k in range(1, 200):
        term = term @ a / k
        acc = acc + term
        if np.linalg.norm(term, 1) <= tol * np.linalg.norm(acc, 1):
            break
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(squarings):
            acc = acc @ acc
    if not np.all(np.isfinite(acc)):
        raise NumericOverflowError("matrix exponential overflowed")
    return acc


# ---------------------------------------------------------------------------
# eigen-decomposition


@dataclass(frozen=True)
class EigenDecomposition:
    """Result of :func:`eigen_decomposition`.

    ``pairs`` lists ``(eigenvalue, eigenvector)`` sorted by descending
    eigenvalue and is empty when the matrix is not diagonalizable over the
    reals at the given tolerance; ``reason`` then says why.
    """

    eigenvalues: tuple
    pairs: tuple
    real_diagonalizable: bool
    reason: str = ""

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __bool__(self):
        return self.real_diagonalizable


def _cluster(values: list[float], tol: float) -> list[list[int]]:
    order = sorted(range(len(values)), key=lambda i: -values[i])
    clusters: list[list[int]] = []
    for i in order:
        if clusters and abs(values[clusters[-1][-1]] - values[i]) <= tol * max(1.0, abs(values[i])):
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return clusters


def eigen_decomposition(m, tol: float) -> EigenDecomposition:
    """Real eigen-decomposition with an explicit diagonalizability verdict.

    Eigenvalues come from LAPACK; multiplicities are then decided by
    clustering at ``tol`` and comparing each cluster size with the nullity
    of ``m - lambda*I``. A defective or non-real spectrum is reported
    through ``real_diagonalizable=False`` rather than raised.
    """
    if tol is None:
        raise ConfigurationError("eigen_decomposition needs an explicit tolerance")
    a = to_float(m)
    if not np.all(np.isfinite(a)):
        raise NumericOverflowError("non-finite entries")
    w = np.linalg.eigvals(a)
    eigs = tuple(complex(x) for x in w)
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    if np.any(np.abs(w.imag) > tol * scale):
        return EigenDecomposition(eigs, (), False, "complex spectrum")
    real = [float(x) for x in w.real]
    n = a.shape[0]
    pairs = []
    for cluster in _cluster(real, tol):
        lam = float(np.mean([real[i] for i in cluster]))
        sub = kernel_basis(a - lam * np.eye(n), tol=max(tol, 1e-12) * 10)
        if sub.dim < len(cluster):
            return EigenDecomposition(eigs, (), False, f"defective eigenvalue {lam:.6g}")
        for v in sub.basis[: len(cluster)]:
            v = np.asarray(v)
            pairs.append((lam, v / np.linalg.norm(v)))
    pairs.sort(key=lambda p: -p[0])
    return EigenDecomposition(eigs, tuple(pairs), True)


# ---------------------------------------------------------------------------
# induced actions

WEDGE_BASIS = tuple(combinations(range(4), 2))


def exterior_square(m):
    """Matrix of the induced action on the second exterior power.

    The basis is ``e_i ^ e_j`` for ``i < j`` in lexicographic order.
    """
    if m.shape[0] != m.shape[1]:
        raise DimensionError("exterior_square needs a square matrix")
    n = m.shape[0]
    basis = tuple(combinations(range(n), 2))
    backend = backend_of(m)
    rows = []
    for k, l in basis:
        row = []
        for i, j in basis:
            row.append(m[k, i] * m[l, j] - m[l, i] * m[k, j])
        rows.append(row)
    return from_entries(rows, backend)


def _traceless_basis():
    """Ordered basis of 4x4 traceless matrices as (kind, i, j) triples."""
    off = [("E", i, j) for i in range(4) for j in range(4) if i != j]
    diag = [("H", k, k + 1) for k in range(3)]
    return tuple(off + diag)


TRACELESS_BASIS = _traceless_basis()


def basis_matrix(k: int, backend: str = EXACT):
    kind, i, j = TRACELESS_BASIS[k]
    rows = [[0] * 4 for _ in range(4)]
    if kind == "E":
        rows[i][j] = 1
    else:
        rows[i][i] = 1
        rows[j][j] = -1
    return from_entries(rows, backend)


def traceless_coordinates(x) -> list:
    """Coordinates of a traceless 4x4 matrix in ``TRACELESS_BASIS``."""
    coords = [x[i, j] for (_, i, j) in TRACELESS_BASIS[:12]]
    d = [x[i, i] for i in range(4)]
    coords += [d[0], d[0] + d[1], d[0] + d[1] + d[2]]
    return coords


def from_traceless_coordinates(coords, backend: str = EXACT):
    acc = None
    for k, c in enumerate(coords):
        term = basis_matrix(k, backend) * c
        acc = term if acc is None else acc + term
    return acc


def adjoint_action(g, tol: float | None = None):
    """15x15 matrix of ``X -> g X g^-1`` on traceless 4x4 matrices.

    The basis is ``E_ij`` (``i != j``, row-major) followed by
    ``E11-E22, E22-E33, E33-E44``. ``g`` must be unimodular, exactly for
    exact input or within ``tol`` for float input.
    """
    if g.shape != (4, 4):
        raise DimensionError("adjoint_action needs a 4x4 matrix")
    backend = backend_of(g)
    det = determinant(g)
    if backend == EXACT:
        if det != 1:
            raise DeterminantError(f"det = {det}, expected 1")
    else:
        if tol is None:
            raise ConfigurationError("float adjoint_action needs a tolerance")
        if abs(det - 1.0) > tol:
            raise DeterminantError(f"det = {det!r}, expected 1")
    g_inv = inverse(g)
    cols = []
    for k in range(15):
        cols.append(traceless_coordinates(g @ basis_matrix(k, backend) @ g_inv))
    return from_entries([list(r) for r in zip(*cols)], backend)


# ---------------------------------------------------------------------------
# real conjugators from complex ones


def realify_conjugator(re_part, im_part):
    """Invertible real combination ``Re + x0*Im`` of an intertwiner pair.

    If ``Re + i*Im`` is invertible then ``P(x) = det(Re + x*Im)`` is a
    nonzero polynomial of degree at most n, so one of ``x0 = 0, 1, ..., n``
    works. Returns ``(matrix, x0)``.
    """
    backend = same_backend(re_part, im_part)
    n = re_part.shape[0]
    for x0 in range(n + 1):
        cand = re_part + im_part * x0 if backend == EXACT else re_part + x0 * im_part
        det = determinant(cand)
        if (det != 0) if backend == EXACT else (abs(det) > 1e-12 * max(1.0, np.abs(cand).max() ** n)):
            return cand, x0
    raise InvalidInputError("det(Re + x*Im) vanishes identically; Re + i*Im is singular")
