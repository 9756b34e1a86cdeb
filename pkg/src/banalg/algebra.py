"""Finite-dimensional commutative algebras over C with weighted l1 norms.

An algebra is a basis e_0..e_{n-1}, a structure tensor c with
e_i e_j = sum_k c[i,j,k] e_k, and strictly positive weights w_i defining
||a|| = sum_i w_i |a_i|.  The weighted-l1 family makes the operator norm and
the dual norm exact (column formulas), so no norm evaluation below involves
an inner optimization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import AlgebraMismatchError, ValidationRejected

DEFAULT_TOL = 1e-9
DEFAULT_OPT_TOL = 1e-6


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    a.setflags(write=False)
    return a


@dataclass(eq=False)
class Algebra:
    """Structure constants + norm weights, immutable after construction.

    structure[i, j, k] is the e_k coefficient of e_i * e_j.
    """

    name: str
    weights: np.ndarray
    structure: np.ndarray
    unit: np.ndarray | None = None

    def __post_init__(self):
        self.weights = _readonly(np.asarray(self.weights, dtype=float))
        self.structure = _readonly(np.asarray(self.structure, dtype=complex))
        n = self.weights.shape[0]
        if self.structure.shape != (n, n, n):
            raise ValueError(
                f"structure tensor shape {self.structure.shape} does not match dim {n}"
            )
        if n < 1:
            raise ValueError("dim must be >= 1")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be strictly positive")
        if self.unit is not None:
            self.unit = _readonly(np.asarray(self.unit, dtype=complex))
            if self.unit.shape != (n,):
                raise ValueError("unit vector length does not match dim")

    @property
    def dim(self) -> int:
        return self.weights.shape[0]

    def element(self, coeffs) -> "Element":
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.shape != (self.dim,):
            raise ValueError(f"coefficient vector must have length {self.dim}")
        return Element(self, coeffs)

    def basis_element(self, i: int) -> "Element":
        coeffs = np.zeros(self.dim, dtype=complex)
        coeffs[i] = 1.0
        return Element(self, coeffs)

    def zero(self) -> "Element":
        return Element(self, np.zeros(self.dim, dtype=complex))

    def unit_element(self) -> "Element":
        if self.unit is None:
            raise ValueError(f"algebra {self.name!r} has no declared unit")
        return Element(self, np.array(self.unit))

    def multiply_coeffs(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """coeffs_k = sum_{i,j} a_i b_j c[i,j,k]"""
        return np.einsum("i,j,ijk->k", a, b, self.structure)

    def norm_coeffs(self, a: np.ndarray) -> float:
        return float(np.sum(self.weights * np.abs(a)))

    def left_mult_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of x -> a*x in the basis: M[k, j] = sum_i a_i c[i,j,k]."""
        return np.einsum("i,ijk->kj", a, self.structure)

    def right_mult_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of x -> x*a: M[k, i] = sum_j a_j c[i,j,k]."""
        return np.einsum("j,ijk->ki", a, self.structure)

    def __repr__(self):
        return f"Algebra({self.name!r}, dim={self.dim})"


@dataclass(eq=False)
class Element:
    algebra: Algebra
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = _readonly(np.asarray(self.coeffs, dtype=complex))
        if self.coeffs.shape != (self.algebra.dim,):
            raise ValueError("coefficient length mismatch")

    def _check_same(self, other: "Element"):
        if self.algebra is not other.algebra:
            raise AlgebraMismatchError(
                f"elements live in different algebras "
                f"({self.algebra.name!r} vs {other.algebra.name!r})"
            )

    def __add__(self, other: "Element") -> "Element":
        self._check_same(other)
        return Element(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: "Element") -> "Element":
        self._check_same(other)
        return Element(self.algebra, self.coeffs - other.coeffs)

    def __mul__(self, other):
        if isinstance(other, Element):
            self._check_same(other)
            return Element(
                self.algebra, self.algebra.multiply_coeffs(self.coeffs, other.coeffs)
            )
        return Element(self.algebra, self.coeffs * complex(other))

    def __rmul__(self, scalar) -> "Element":
        return Element(self.algebra, self.coeffs * complex(scalar))

    def __neg__(self) -> "Element":
        return Element(self.algebra, -self.coeffs)

    @property
    def norm(self) -> float:
        return self.algebra.norm_coeffs(self.coeffs)

    def __repr__(self):
        return f"Element({self.algebra.name!r}, {np.array2string(self.coeffs, precision=6)})"


def multiply(a: Element, b: Element) -> Element:
    return a * b


def norm(a: Element) -> float:
    return a.norm


def dual_norm(f: np.ndarray, algebra: Algebra) -> float:
    """Exact dual of the weighted l1 norm: max_i |f_i| / w_i.

    f holds the functional's values on the basis.
    """
    f = np.asarray(f, dtype=complex)
    if f.shape != (algebra.dim,):
        raise ValueError("functional vector length mismatch")
    return float(np.max(np.abs(f) / algebra.weights))


@dataclass(eq=False)
class LinearMap:
    """matrix is target-dim x source-dim; columns are images of source basis vectors."""

    source: Algebra
    target: Algebra
    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = _readonly(np.asarray(self.matrix, dtype=complex))
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} != "
                f"({self.target.dim}, {self.source.dim})"
            )

    def __call__(self, x: Element) -> Element:
        if x.algebra is not self.source:
            raise AlgebraMismatchError("element is not in the map's source algebra")
        return Element(self.target, self.matrix @ x.coeffs)

    def apply(self, coeffs: np.ndarray) -> np.ndarray:
        return self.matrix @ np.asarray(coeffs, dtype=complex)

    def compose(self, inner: "LinearMap") -> "LinearMap":
        if inner.target is not self.source:
            raise AlgebraMismatchError("composition source/target mismatch")
        return LinearMap(inner.source, self.target, self.matrix @ inner.matrix)

    @staticmethod
    def identity(algebra: Algebra) -> "LinearMap":
        return LinearMap(algebra, algebra, np.eye(algebra.dim, dtype=complex))

    def __repr__(self):
        return f"LinearMap({self.source.name!r} -> {self.target.name!r})"


def operator_norm(L: LinearMap) -> float:
    """Exact operator norm between weighted l1 spaces: max weighted column norm."""
    col_norms = L.target.weights @ np.abs(L.matrix)
    return float(np.max(col_norms / L.source.weights))


def left_mult_operator(a: Element) -> LinearMap:
    return LinearMap(a.algebra, a.algebra, a.algebra.left_mult_matrix(a.coeffs))


@dataclass
class ValidationReport:
    name: str
    tol: float
    max_associativity_residual: float
    max_commutativity_residual: float
    max_submultiplicativity_excess: float
    unit_residual: float | None
    failures: list[str] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not self.failures


def associativity_residual(algebra: Algebra) -> float:
    """max over basis triples of ||(e_i e_j) e_k - e_i (e_j e_k)|| (weighted l1)."""
    c = algebra.structure
    left = np.einsum("ijm,mkl->ijkl", c, c)
    right = np.einsum("jkm,iml->ijkl", c, c)
    diff = np.abs(left - right) @ algebra.weights
    return float(np.max(diff))


def validate(algebra: Algebra, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Check the algebra axioms; accepted iff every residual is within tol.

    Submultiplicativity is checked at basis level, ||e_i e_j|| <= w_i w_j,
    which implies ||ab|| <= ||a|| ||b|| for the weighted l1 norm.
    """
    c = algebra.structure
    w = algebra.weights
    failures = []

    assoc = associativity_residual(algebra)
    if assoc > tol:
        failures.append("associativity")

    comm = float(np.max(np.abs(c - c.transpose(1, 0, 2))))
    if comm > tol:
        failures.append("commutativity")

    prod_norms = np.abs(c) @ w  # ||e_i e_j|| indexed (i, j)
    excess = float(np.max(prod_norms - np.outer(w, w)))
    if excess > tol:
        failures.append("submultiplicativity")

    unit_res = None
    if algebra.unit is not None:
        images = np.einsum("i,ijk->jk", algebra.unit, c)  # row j: unit * e_j
        unit_res = float(np.max(np.abs(images - np.eye(algebra.dim)) @ w))
        if unit_res > tol:
            failures.append("unit")

    return ValidationReport(
        name=algebra.name,
        tol=tol,
        max_associativity_residual=assoc,
        max_commutativity_residual=comm,
        max_submultiplicativity_excess=max(excess, 0.0),
        unit_residual=unit_res,
        failures=failures,
    )


def require_valid(algebra: Algebra, tol: float = DEFAULT_TOL) -> ValidationReport:
    report = validate(algebra, tol)
    if not report.accepted:
        raise ValidationRejected(", ".join(report.failures), report)
    return report


def annihilator_basis(algebra: Algebra, cutoff: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (rows) of {a : a * x = 0 for all x}.

    Empty for without-order algebras.  Built from the null space of the
    stacked multiplication system a -> (a * e_j)_j.
    """
    n = algebra.dim
    # K[(j, k), i] = c[i, j, k]
    K = algebra.structure.transpose(1, 2, 0).reshape(n * n, n)
    _, s, vh = np.linalg.svd(K)
    rank = int(np.sum(s > cutoff * (s[0] if s.size and s[0] > 0 else 1.0)))
    return vh[rank:].conj()


def is_without_order(algebra: Algebra, cutoff: float = 1e-10) -> bool:
    return annihilator_basis(algebra, cutoff).shape[0] == 0
