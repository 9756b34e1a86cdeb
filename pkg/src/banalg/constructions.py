"""Product constructions with provenance.

Two block conventions, fixed once to avoid index bugs:
  * semidirect product of subalgebra B and ideal I: B block first, pairs (b, a);
  * lau product of A and B along phi: B -> A: A block first, pairs (a, b);
    the A block is an ideal, the B block a subalgebra.
A direct sum is the lau product with phi = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    Algebra,
    LinearMap,
    operator_norm,
    require_valid,
    validate,
)
from .errors import (
    InvalidActionError,
    NotContractiveError,
    NotHomomorphismError,
)


@dataclass(eq=False)
class SemidirectSpec:
    """B (dim m), I (dim p), and the module actions of B on I.

    action_bi[j, i, :] = coefficients (in I) of e_j^B * e_i^I
    action_ib[i, j, :] = coefficients (in I) of e_i^I * e_j^B
    """

    subalgebra: Algebra
    ideal: Algebra
    action_bi: np.ndarray
    action_ib: np.ndarray

    def __post_init__(self):
        m, p = self.subalgebra.dim, self.ideal.dim
        self.action_bi = np.asarray(self.action_bi, dtype=complex)
        self.action_ib = np.asarray(self.action_ib, dtype=complex)
        if self.action_bi.shape != (m, p, p):
            raise ValueError(f"action_bi must have shape {(m, p, p)}")
        if self.action_ib.shape != (p, m, p):
            raise ValueError(f"action_ib must have shape {(p, m, p)}")


@dataclass(eq=False)
class ProductDescriptor:
    """Provenance of a constructed product algebra.

    first/second are the parents in block order (B, I for semidirect;
    A, B for lau and direct_sum).  Embeddings are the isometric coordinate
    inclusions of the parents into the product.
    """

    kind: str  # "semidirect" | "lau" | "direct_sum"
    algebra: Algebra
    first: Algebra
    second: Algebra
    embed_first: LinearMap
    embed_second: LinearMap
    phi: LinearMap | None = None
    contractive: bool = True

    @property
    def first_slice(self) -> slice:
        return slice(0, self.first.dim)

    @property
    def second_slice(self) -> slice:
        return slice(self.first.dim, self.first.dim + self.second.dim)

    @property
    def subalgebra_slice(self) -> slice:
        """Block of the distinguished closed subalgebra."""
        return self.first_slice if self.kind == "semidirect" else self.second_slice

    @property
    def ideal_slice(self) -> slice:
        """Block of the distinguished closed two-sided ideal."""
        return self.second_slice if self.kind == "semidirect" else self.first_slice

    @property
    def subalgebra(self) -> Algebra:
        return self.first if self.kind == "semidirect" else self.second

    @property
    def ideal(self) -> Algebra:
        return self.second if self.kind == "semidirect" else self.first


def _embedding(parent: Algebra, product: Algebra, offset: int) -> LinearMap:
    m = np.zeros((product.dim, parent.dim), dtype=complex)
    m[offset : offset + parent.dim, :] = np.eye(parent.dim)
    return LinearMap(parent, product, m)


def semidirect(spec: SemidirectSpec, tol: float = DEFAULT_TOL,
               name: str | None = None) -> ProductDescriptor:
    """Assemble B (+) I with product (b,a)(b',a') = (bb', aa' + ba' + ab').

    The assembled structure tensor is validated; mixed associativity of the
    actions is exactly the associativity of the assembled tensor.
    """
    B, I = spec.subalgebra, spec.ideal
    require_valid(B, tol)
    require_valid(I, tol)
    m, p = B.dim, I.dim
    n = m + p
    c = np.zeros((n, n, n), dtype=complex)
    c[:m, :m, :m] = B.structure
    c[m:, m:, m:] = I.structure
    c[:m, m:, m:] = spec.action_bi
    c[m:, :m, m:] = spec.action_ib
    weights = np.concatenate([B.weights, I.weights])
    unit = None  # a semidirect product is unital only in special cases; not derived here
    algebra = Algebra(
        name=name or f"{B.name}(+){I.name}",
        weights=weights,
        structure=c,
        unit=unit,
    )
    report = validate(algebra, tol)
    if not report.accepted:
        raise InvalidActionError(
            "assembled semidirect product fails validation: "
            + ", ".join(report.failures),
            report=report,
        )
    return ProductDescriptor(
        kind="semidirect",
        algebra=algebra,
        first=B,
        second=I,
        embed_first=_embedding(B, algebra, 0),
        embed_second=_embedding(I, algebra, m),
    )


def homomorphism_residual(phi: LinearMap) -> float:
    """max over basis pairs of ||phi(e_i e_j) - phi(e_i) phi(e_j)|| in the target."""
    B, A = phi.source, phi.target
    res = 0.0
    images = [phi.matrix[:, j] for j in range(B.dim)]
    for i in range(B.dim):
        for j in range(B.dim):
            lhs = phi.matrix @ B.structure[i, j, :]
            rhs = A.multiply_coeffs(images[i], images[j])
            res = max(res, A.norm_coeffs(lhs - rhs))
    return res


@dataclass
class HomomorphismReport:
    residual: float
    norm: float
    is_homomorphism: bool
    is_contractive: bool


def check_homomorphism(phi: LinearMap, tol: float = DEFAULT_TOL) -> HomomorphismReport:
    res = homomorphism_residual(phi)
    nrm = operator_norm(phi)
    return HomomorphismReport(
        residual=res,
        norm=nrm,
        is_homomorphism=res <= tol,
        is_contractive=nrm <= 1.0 + tol,
    )


def lau_product(A: Algebra, B: Algebra, phi: LinearMap, tol: float = DEFAULT_TOL,
                force: bool = False, name: str | None = None) -> ProductDescriptor:
    """A x_phi B: product (a,b)(a',b') = (aa' + phi(b)a' + a phi(b'), bb').

    phi: B -> A must be an algebra homomorphism with operator norm <= 1.
    force=True admits non-contractive phi (still an algebra); the descriptor
    records it so norm-sensitive checks downstream can be skipped.
    """
    require_valid(A, tol)
    require_valid(B, tol)
    if phi.source is not B or phi.target is not A:
        raise ValueError("phi must map B into A")
    report = check_homomorphism(phi, tol)
    if not report.is_homomorphism:
        raise NotHomomorphismError(
            f"phi is not an algebra homomorphism (residual {report.residual:.3e})"
        )
    if not report.is_contractive and not force:
        raise NotContractiveError(report.norm)

    nA, nB = A.dim, B.dim
    n = nA + nB
    c = np.zeros((n, n, n), dtype=complex)
    c[:nA, :nA, :nA] = A.structure
    c[nA:, nA:, nA:] = B.structure
    for i in range(nA):
        for j in range(nB):
            prod = A.multiply_coeffs(_basis(nA, i), phi.matrix[:, j])
            c[i, nA + j, :nA] = prod
            c[nA + j, i, :nA] = A.multiply_coeffs(phi.matrix[:, j], _basis(nA, i))
    weights = np.concatenate([A.weights, B.weights])
    unit = None
    if A.unit is not None and B.unit is not None:
        # (u_A - phi(u_B), u_B) is the unit when both parents are unital
        cand = np.concatenate([A.unit - phi.matrix @ B.unit, B.unit])
        unit = cand
    algebra = Algebra(
        name=name or f"{A.name}x({B.name})",
        weights=weights,
        structure=c,
        unit=unit,
    )
    vrep = validate(algebra, tol)
    if not vrep.accepted:
        # a non-contractive phi only breaks submultiplicativity; under force
        # that is the one admissible failure
        if not (force and set(vrep.failures) <= {"submultiplicativity"}):
            raise InvalidActionError(
                "assembled lau product fails validation: " + ", ".join(vrep.failures),
                report=vrep,
            )
    kind = "direct_sum" if not np.any(phi.matrix) else "lau"
    return ProductDescriptor(
        kind=kind,
        algebra=algebra,
        first=A,
        second=B,
        embed_first=_embedding(A, algebra, 0),
        embed_second=_embedding(B, algebra, nA),
        phi=phi,
        contractive=report.is_contractive,
    )


def _basis(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=complex)
    v[i] = 1.0
    return v


def direct_sum(A: Algebra, B: Algebra, tol: float = DEFAULT_TOL,
               name: str | None = None) -> ProductDescriptor:
    zero = LinearMap(B, A, np.zeros((A.dim, B.dim), dtype=complex))
    desc = lau_product(A, B, zero, tol, name=name or f"{A.name}(+){B.name}")
    return desc


@dataclass(eq=False)
class PhiIsomorphism:
    """Phi: A x_0 B -> A x_phi B, (a, b) -> (a - phi(b), b), with inverse."""

    forward: LinearMap
    inverse: LinearMap
    direct: ProductDescriptor
    lau: ProductDescriptor

    @property
    def norm_bound(self) -> float:
        """Certified bound ||Phi|| <= ||phi|| + 1."""
        return operator_norm(self.lau.phi) + 1.0


def phi_isomorphism(A: Algebra, B: Algebra, phi: LinearMap,
                    tol: float = DEFAULT_TOL, force: bool = False) -> PhiIsomorphism:
    lau = lau_product(A, B, phi, tol, force=force)
    direct = direct_sum(A, B, tol)
    nA, nB = A.dim, B.dim
    n = nA + nB
    fwd = np.eye(n, dtype=complex)
    fwd[:nA, nA:] = -phi.matrix
    inv = np.eye(n, dtype=complex)
    inv[:nA, nA:] = phi.matrix
    return PhiIsomorphism(
        forward=LinearMap(direct.algebra, lau.algebra, fwd),
        inverse=LinearMap(lau.algebra, direct.algebra, inv),
        direct=direct,
        lau=lau,
    )


def finite_abelian_group_algebra(orders: list[int], name: str | None = None) -> Algebra:
    """Convolution algebra l1(H) for H = Z_{orders[0]} x ... : delta_g * delta_h = delta_{g+h}.

    Unital (delta_0), commutative, semisimple; all weights 1.
    """
    if not orders or any(o < 1 for o in orders):
        raise ValueError("orders must be a nonempty list of positive integers")
    dims = tuple(orders)
    n = int(np.prod(dims))
    index = {g: i for i, g in enumerate(np.ndindex(*dims))}
    c = np.zeros((n, n, n), dtype=complex)
    for g, i in index.items():
        for h, j in index.items():
            s = tuple((gg + hh) % o for gg, hh, o in zip(g, h, dims))
            c[i, j, index[s]] = 1.0
    unit = np.zeros(n, dtype=complex)
    unit[index[tuple(0 for _ in dims)]] = 1.0
    return Algebra(
        name=name or "l1(Z" + "xZ".join(str(o) for o in orders) + ")",
        weights=np.ones(n),
        structure=c,
        unit=unit,
    )


def group_character_values(orders: list[int]) -> np.ndarray:
    """Closed-form character table of l1(H): rows chi_t, chi_t(delta_g) = prod exp(2pi i t.g/o)."""
    dims = tuple(orders)
    n = int(np.prod(dims))
    gs = list(np.ndindex(*dims))
    table = np.zeros((n, n), dtype=complex)
    for r, t in enumerate(gs):
        for s, g in enumerate(gs):
            phase = sum(tt * gg / o for tt, gg, o in zip(t, g, dims))
            table[r, s] = np.exp(2j * np.pi * phase)
    return table


def split_algebra(A: Algebra, sub_basis: np.ndarray, ideal_basis: np.ndarray,
                  sub_weights: np.ndarray | None = None,
                  ideal_weights: np.ndarray | None = None,
                  tol: float = DEFAULT_TOL) -> tuple[SemidirectSpec, np.ndarray]:
    """Split A along complementary subspaces into (B, I) and derive the actions.

    sub_basis: n x m matrix whose columns span a subalgebra of A;
    ideal_basis: n x p columns spanning a two-sided ideal; together a basis of A.
    Returns the SemidirectSpec plus the n x n change-of-basis matrix U sending
    assembled (B-block, I-block) coordinates to A-coordinates, i.e. the pair
    (b, a) maps to b + a.  Raises InvalidActionError when the subspaces are
    not a subalgebra/ideal pair.
    """
    sub_basis = np.asarray(sub_basis, dtype=complex)
    ideal_basis = np.asarray(ideal_basis, dtype=complex)
    n = A.dim
    m = sub_basis.shape[1]
    p = ideal_basis.shape[1]
    if sub_basis.shape != (n, m) or ideal_basis.shape != (n, p) or m + p != n:
        raise ValueError("basis matrices must partition the algebra dimension")
    U = np.hstack([sub_basis, ideal_basis])
    if np.linalg.matrix_rank(U) < n:
        raise ValueError("sub_basis and ideal_basis do not span the algebra")
    Uinv = np.linalg.inv(U)

    def coords(vec: np.ndarray) -> np.ndarray:
        return Uinv @ vec

    def assert_block(coeff: np.ndarray, block: slice, other: slice, what: str):
        if np.max(np.abs(coeff[other]), initial=0.0) > tol:
            raise InvalidActionError(f"{what} does not stay in its block")

    cB = np.zeros((m, m, m), dtype=complex)
    cI = np.zeros((p, p, p), dtype=complex)
    act_bi = np.zeros((m, p, p), dtype=complex)
    act_ib = np.zeros((p, m, p), dtype=complex)
    sb, ib = slice(0, m), slice(m, n)
    for i in range(m):
        for j in range(m):
            z = coords(A.multiply_coeffs(sub_basis[:, i], sub_basis[:, j]))
            assert_block(z, sb, ib, "subalgebra product")
            cB[i, j, :] = z[sb]
    for i in range(p):
        for j in range(p):
            z = coords(A.multiply_coeffs(ideal_basis[:, i], ideal_basis[:, j]))
            assert_block(z, ib, sb, "ideal product")
            cI[i, j, :] = z[ib]
    for j in range(m):
        for i in range(p):
            z = coords(A.multiply_coeffs(sub_basis[:, j], ideal_basis[:, i]))
            assert_block(z, ib, sb, "B.I action")
            act_bi[j, i, :] = z[ib]
            z = coords(A.multiply_coeffs(ideal_basis[:, i], sub_basis[:, j]))
            assert_block(z, ib, sb, "I.B action")
            act_ib[i, j, :] = z[ib]

    wB = np.asarray(sub_weights, dtype=float) if sub_weights is not None else np.ones(m)
    wI = np.asarray(ideal_weights, dtype=float) if ideal_weights is not None else np.ones(p)
    B = Algebra(name=f"{A.name}|sub", weights=wB, structure=cB)
    I = Algebra(name=f"{A.name}|ideal", weights=wI, structure=cI)
    spec = SemidirectSpec(subalgebra=B, ideal=I, action_bi=act_bi, action_ib=act_ib)
    return spec, U


def ideal_span_rank(desc: ProductDescriptor, cutoff: float = 1e-10) -> int:
    """rank of span{a * b : a in I-basis, b in B-basis} inside the ideal block."""
    alg = desc.algebra
    isl, bsl = desc.ideal_slice, desc.subalgebra_slice
    cols = []
    for i in range(isl.start, isl.stop):
        for j in range(bsl.start, bsl.stop):
            prod = alg.structure[i, j, :]
            cols.append(prod[isl])
    M = np.array(cols)
    if not np.any(M):
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > cutoff * s[0]))


def ideal_span_is_full(desc: ProductDescriptor, cutoff: float = 1e-10) -> bool:
    return ideal_span_rank(desc, cutoff) == desc.ideal.dim
