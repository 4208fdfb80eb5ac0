"""End holonomy classification, slice eigenframes and faithfulness obstructions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import DomainError
from .field import ExactAngle, QuadraticNumber, is_exact_scalar, turn
from .holonomy import SLICE, Representation, evaluate_word, similarity, slice_representation
from .linalg import EXACT, Matrix, eigen_decomposition, identity, to_float
from .words import gamma0_generators

HYPERBOLIC_CUSP = "hyperbolic-cusp"
DIAGONALIZABLE_POSITIVE = "diagonalizable-positive"
OTHER = "other"

CLASSIFIER_TOL = 1e-7
NEAR_DEGENERATE_RADIUS = 1e-4


@dataclass(frozen=True)
class CuspVerdict:
    kind: str
    spectrum: tuple
    unipotency_degree: int | None
    eigenpairs: tuple = ()
    near_degenerate: bool = False
    reason: str = ""

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "spectrum": [[z.real, z.imag] for z in self.spectrum],
            "unipotency_degree": self.unipotency_degree,
            "eigenpairs": [[lam, [float(c) for c in vec]] for lam, vec in self.eigenpairs],
            "near_degenerate": self.near_degenerate,
            "reason": self.reason,
        }


def unipotency_degree(m, tol: float = CLASSIFIER_TOL) -> int | None:
    """Least ``k <= 4`` with ``(m - 1)^k = 0``, or ``None`` if not unipotent."""
    n = m - identity(4, EXACT if isinstance(m, Matrix) else "float")
    power = n
    for k in range(1, 5):
        if isinstance(power, Matrix):
            if power.is_zero():
                return k
        elif np.max(np.abs(power)) <= tol * max(1.0, float(np.max(np.abs(m)))):
            return k
        power = power @ n
    return None


def _commute(x, y, tol) -> bool:
    if isinstance(x, Matrix):
        return x @ y == y @ x
    return bool(np.max(np.abs(x @ y - y @ x)) <= tol)


def classify_end(rep: Representation, tol: float = CLASSIFIER_TOL) -> CuspVerdict:
    """Type of the restriction of ``rep`` to the translation subgroup."""
    w1, w2 = rep.presentation.lattice_generators()
    x, y = evaluate_word(rep, w1), evaluate_word(rep, w2)
    spectrum = tuple(complex(z) for z in np.linalg.eigvals(to_float(x)))
    deg_x, deg_y = unipotency_degree(x, tol), unipotency_degree(y, tol)
    if deg_x is not None and deg_x >= 2 and deg_x <= 3 and deg_y is not None and _commute(x, y, tol):
        return CuspVerdict(HYPERBOLIC_CUSP, spectrum, deg_x, reason="unipotent commuting translation images")

    if rep.family == SLICE:
        params = rep.params
        radius = math.hypot(params["u"], params["v"])
        if 0 < radius < NEAR_DEGENERATE_RADIUS:
            return CuspVerdict(OTHER, spectrum, deg_x, near_degenerate=True,
                               reason="slice parameter too close to the parabolic point to decide")
    elif deg_x is None and all(abs(z - 1) < NEAR_DEGENERATE_RADIUS for z in spectrum):
        return CuspVerdict(OTHER, spectrum, deg_x, near_degenerate=True,
                           reason="spectrum within 1e-4 of 1 but image is not unipotent")

    eig = eigen_decomposition(x, tol)
    if not eig.real_diagonalizable:
        return CuspVerdict(OTHER, spectrum, deg_x, reason=eig.reason)
    lams = [lam for lam, _ in eig.pairs]
    if min(lams) <= tol:
        return CuspVerdict(OTHER, spectrum, deg_x, eig.pairs, reason="non-positive eigenvalue")
    if not any(abs(lam - 1) <= tol for lam in lams):
        return CuspVerdict(OTHER, spectrum, deg_x, eig.pairs, reason="no eigenvalue equal to 1")
    return CuspVerdict(DIAGONALIZABLE_POSITIVE, spectrum, deg_x, eig.pairs, reason="real positive diagonalizable")


def product_of_other_eigenvalues(verdict: CuspVerdict) -> float:
    """Product of the spectrum after removing one eigenvalue closest to 1."""
    lams = sorted((lam for lam, _ in verdict.eigenpairs), key=lambda lam: abs(lam - 1))
    return float(np.prod(lams[1:]))


# ---------------------------------------------------------------------------
# eigenframes


@dataclass(frozen=True)
class EigenFrame:
    t: Any
    theta: Any
    p_inf: Any
    p1: Any
    p2: Any
    p3: Any

    @property
    def vectors(self) -> tuple:
        return self.p_inf, self.p1, self.p2, self.p3

    def matrix(self):
        """Frame vectors as columns."""
        if isinstance(self.p1, Matrix):
            return Matrix([[v[i, 0] for v in self.vectors] for i in range(4)])
        return np.column_stack(self.vectors)


def paper_eigenframe(t, theta) -> EigenFrame:
    """Vertex frame of the invariant triangle for slice parameter ``(t, theta)``.

    Exact when ``t`` is rational and ``theta`` an :class:`ExactAngle`.
    """
    if t <= 0:
        raise DomainError(f"t must be positive, got {t!r}")
    exact = is_exact_scalar(t) and isinstance(theta, ExactAngle)
    omega = similarity(1, turn(1, 3))
    if exact:
        t = QuadraticNumber._coerce(t)
        base = Matrix.column([1, 2 * t, 0, 2 * t * t])
        p_inf = Matrix.column([1, 0, 0, 0])
        p1 = similarity(1, theta) @ base
    else:
        t, theta = float(t), float(theta)
        omega = omega.to_numpy()
        base = np.array([1.0, 2 * t, 0.0, 2 * t * t])
        p_inf = np.array([1.0, 0.0, 0.0, 0.0])
        p1 = similarity(1.0, theta) @ base
    p2 = omega @ p1
    p3 = omega @ p2
    return EigenFrame(t, theta, p_inf, p1, p2, p3)


def line_deviation(v, w) -> float:
    """Sine of the angle between the lines through ``v`` and ``w``."""
    v = np.asarray(v, dtype=float).ravel()
    w = np.asarray(w, dtype=float).ravel()
    nv, nw = np.linalg.norm(v), np.linalg.norm(w)
    if nv == 0 or nw == 0:
        return 1.0
    v, w = v / nv, w / nw
    return float(np.linalg.norm(w - np.dot(v, w) * v))


@dataclass(frozen=True)
class FrameReport:
    t: float
    theta: float
    u: float
    v: float
    deviations: tuple
    permutation_deviation: float
    eigenvalues: tuple
    eigenvectors: tuple
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.deviations) < self.tol and self.permutation_deviation < self.tol

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "theta": self.theta,
            "u": self.u,
            "v": self.v,
            "deviations": list(self.deviations),
            "permutation_deviation": self.permutation_deviation,
            "eigenvalues": list(self.eigenvalues),
            "eigenvectors": [list(map(float, v)) for v in self.eigenvectors],
            "tol": self.tol,
            "passed": self.passed,
        }


def check_frame_against_slice(t, theta, tol: float = 1e-6) -> FrameReport:
    """Compare the closed-form frame with the slice image at ``(u, v) = t(cos 3theta, sin 3theta)``."""
    t_f, th = float(t), float(theta)
    u, v = t_f * math.cos(3 * th), t_f * math.sin(3 * th)
    rep = slice_representation(u, v)
    x = evaluate_word(rep, gamma0_generators()[0])
    frame = paper_eigenframe(t_f, th)
    devs = tuple(line_deviation(p, x @ p) for p in frame.vectors)
    perm = line_deviation(frame.p2, rep.image_a @ frame.p1)
    eig = eigen_decomposition(x, CLASSIFIER_TOL)
    return FrameReport(
        t_f, th, u, v, devs, perm,
        tuple(lam for lam, _ in eig.pairs), tuple(vec for _, vec in eig.pairs), tol,
    )


@dataclass(frozen=True)
class EigenlineReport:
    """Normalization-free check: ``rho(a)`` permutes the joint eigenlines of the translations."""

    eigenvalues: tuple
    eigenvector_deviation: float
    permutation: tuple
    permutation_deviation: float
    fixed_lines: tuple
    fixed_line_eigenvalue: float | None
    tol: float

    @property
    def passed(self) -> bool:
        return (
            self.eigenvector_deviation < self.tol
            and self.permutation_deviation < self.tol
            and len(self.fixed_lines) == 1
            and sorted(self.permutation) == list(range(4))
            and self.fixed_line_eigenvalue is not None
            and abs(self.fixed_line_eigenvalue - 1) < self.tol
        )


def eigenline_permutation_check(u: float, v: float, tol: float = 1e-6, mix: float = 0.3713) -> EigenlineReport:
    """Eigenlines of ``X = Psi(a^2 b)`` computed from a generic combination of its conjugates.

    ``X``, ``Y = Omega X Omega^-1`` and ``Z = Omega^2 X Omega^-2`` commute, so a
    generic combination ``X + cY + c^2 Z`` has simple spectrum even where
    ``X`` has repeated eigenvalues. Its eigenlines are the joint eigenlines.
    """
    rep = slice_representation(u, v)
    om = rep.image_a
    om_inv = np.linalg.inv(om)
    x = evaluate_word(rep, gamma0_generators()[0])
    y = om @ x @ om_inv
    z = om @ y @ om_inv
    w, vecs = np.linalg.eig(x + mix * y + mix * mix * z)
    vecs = np.real_if_close(vecs, tol=1e6).real
    lines = [vecs[:, i] / np.linalg.norm(vecs[:, i]) for i in range(4)]
    xeigs = tuple(float(np.dot(l, x @ l)) for l in lines)
    eig_dev = max(line_deviation(l, x @ l) for l in lines)
    perm, perm_dev, fixed = [], 0.0, []
    for i, l in enumerate(lines):
        img = om @ l
        devs = [line_deviation(m, img) for m in lines]
        j = int(np.argmin(devs))
        perm.append(j)
        perm_dev = max(perm_dev, devs[j])
        if j == i:
            fixed.append(i)
    fixed_eig = xeigs[fixed[0]] if len(fixed) == 1 else None
    return EigenlineReport(xeigs, eig_dev, tuple(perm), perm_dev, tuple(fixed), fixed_eig, tol)


# ---------------------------------------------------------------------------
# faithfulness


@dataclass(frozen=True)
class FaithfulnessVerdict:
    obstructed: bool
    witness: dict = field(default_factory=dict)

    @property
    def label(self) -> str:
        return "not-faithful" if self.obstructed else "no-obstruction-found"

    def as_dict(self) -> dict:
        return {"verdict": self.label, "witness": self.witness}


def _is_identity(m, tol) -> bool:
    if isinstance(m, Matrix):
        return m.is_identity()
    return bool(np.max(np.abs(m - np.eye(m.shape[0]))) <= tol)


def faithfulness_obstruction(rep: Representation, tol: float = 1e-9) -> FaithfulnessVerdict:
    """Finite order of a lattice translation (infinite order in the group) or trivial ``a`` rules out faithfulness."""
    w = rep.presentation.lattice_generators()[0]
    x = evaluate_word(rep, w)
    power = x
    for k in range(1, 4):
        if _is_identity(power, tol):
            return FaithfulnessVerdict(True, {"word": str(w), "order": k})
        power = power @ x
    if _is_identity(rep.image_a, tol):
        return FaithfulnessVerdict(True, {"word": "a", "order": 1})
    return FaithfulnessVerdict(False, {})
