"""Multiplier algebras as null spaces of linear constraint systems.

LM(A):  T(xy) = x T(y)        (left multipliers)
M(A):   T(x) y = x T(y)       (multipliers)
Hom_B(X, Y): T(b.x) = b.T(x)  (left B-module maps, actions given as tensors)

All spaces are computed by SVD of the stacked linearized constraints with a
relative singular-value cutoff, yielding Frobenius-orthonormal bases and
stable dimension counts.  The block machinery realizes the four-block form
(T_B, S_B, S_I, R_I) of a left multiplier on a subalgebra(+)ideal product
and the linear relations tying the blocks together.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import DEFAULT_TOL, Algebra, LinearMap
from .constructions import ProductDescriptor
from .errors import (
    MultiplierError,
    NotAMultiplierError,
    RelationsViolatedError,
    UndefinedHatError,
)
from .spectra import CharacterSet

SVD_CUTOFF = 1e-10


def _nullspace(M: np.ndarray, cutoff: float = SVD_CUTOFF) -> np.ndarray:
    """Rows form an orthonormal basis of ker(M)."""
    if M.shape[0] == 0:
        return np.eye(M.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(M)
    smax = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s > cutoff * smax))
    return vh[rank:].conj()


@dataclass(eq=False)
class MultiplierBasis:
    algebra: Algebra
    kind: str  # "LM" | "M" | "Hom"
    basis: list[LinearMap]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrices(self) -> np.ndarray:
        if not self.basis:
            shape = (0, 0, 0)
            return np.zeros(shape, dtype=complex)
        return np.array([b.matrix for b in self.basis])

    def contains(self, T: np.ndarray, tol: float = 1e-8) -> bool:
        """Whether T lies in the span of the basis (Frobenius projection residual)."""
        if not self.basis:
            return float(np.linalg.norm(T)) <= tol
        flat = np.array([b.matrix.reshape(-1) for b in self.basis])
        t = np.asarray(T, dtype=complex).reshape(-1)
        proj = flat.conj() @ t  # orthonormal rows
        resid = t - flat.T @ proj
        return float(np.linalg.norm(resid)) <= tol * max(1.0, float(np.linalg.norm(t)))


def left_multiplier_residual(algebra: Algebra, T: np.ndarray) -> float:
    """max_{i,j} || T(e_i e_j) - e_i T(e_j) ||."""
    n = algebra.dim
    c = algebra.structure
    res = 0.0
    for i in range(n):
        Li = algebra.left_mult_matrix(np.eye(n)[i])
        lhs = T @ c[i].T  # column j: T(e_i e_j)
        rhs = Li @ T
        res = max(res, float(np.max(algebra.weights @ np.abs(lhs - rhs))))
    return res


def multiplier_residual(algebra: Algebra, T: np.ndarray) -> float:
    """max_{i,j} || T(e_i) e_j - e_i T(e_j) ||."""
    n = algebra.dim
    eye = np.eye(n)
    left = [algebra.left_mult_matrix(eye[i]) for i in range(n)]
    res = 0.0
    for j in range(n):
        Rj = algebra.right_mult_matrix(eye[j])
        lhs = Rj @ T  # column i: T(e_i) e_j
        for i in range(n):
            diff = lhs[:, i] - left[i] @ T[:, j]
            res = max(res, algebra.norm_coeffs(diff))
    return res


def _left_constraints(algebra: Algebra) -> np.ndarray:
    """Linearize T(e_i e_j) = e_i T(e_j) over vec(T) (row-major)."""
    n = algebra.dim
    c = algebra.structure
    eye = np.eye(n)
    rows = []
    for i in range(n):
        Li = algebra.left_mult_matrix(eye[i])
        for j in range(n):
            # T(e_i e_j): sum_k c[i,j,k] T[:, k]  ->  (I (x) c[i,j,:])
            A1 = np.kron(eye, c[i, j, :].reshape(1, n))
            # e_i T(e_j): Li @ T[:, j]
            A2 = np.zeros((n, n * n), dtype=complex)
            A2[:, j::n] = Li
            rows.append(A1 - A2)
    return np.vstack(rows)


def _mult_constraints(algebra: Algebra) -> np.ndarray:
    """Linearize T(e_i) e_j = e_i T(e_j) over vec(T)."""
    n = algebra.dim
    eye = np.eye(n)
    rows = []
    for i in range(n):
        Li = algebra.left_mult_matrix(eye[i])
        for j in range(n):
            Rj = algebra.right_mult_matrix(eye[j])
            A1 = np.zeros((n, n * n), dtype=complex)
            A1[:, i::n] = Rj  # T(e_i) e_j
            A2 = np.zeros((n, n * n), dtype=complex)
            A2[:, j::n] = Li  # e_i T(e_j)
            rows.append(A1 - A2)
    return np.vstack(rows)


def _basis_from_null(algebra_src: Algebra, algebra_tgt: Algebra,
                     null_rows: np.ndarray) -> list[LinearMap]:
    maps = []
    for row in null_rows:
        mat = row.reshape(algebra_tgt.dim, algebra_src.dim)
        maps.append(LinearMap(algebra_src, algebra_tgt, mat))
    return maps


def left_multiplier_space(algebra: Algebra) -> MultiplierBasis:
    null = _nullspace(_left_constraints(algebra))
    return MultiplierBasis(algebra, "LM", _basis_from_null(algebra, algebra, null))


def right_multiplier_space(algebra: Algebra) -> MultiplierBasis:
    """T(xy) = T(x)y; computed as the left multipliers of the opposite algebra."""
    opposite = Algebra(
        algebra.name + ".op",
        np.array(algebra.weights),
        algebra.structure.transpose(1, 0, 2).copy(),
        unit=None if algebra.unit is None else np.array(algebra.unit),
    )
    null = _nullspace(_left_constraints(opposite))
    return MultiplierBasis(algebra, "RM", _basis_from_null(algebra, algebra, null))


def multiplier_space(algebra: Algebra) -> MultiplierBasis:
    null = _nullspace(_mult_constraints(algebra))
    return MultiplierBasis(algebra, "M", _basis_from_null(algebra, algebra, null))


def module_hom_constraints(actions_x: np.ndarray, actions_y: np.ndarray) -> np.ndarray:
    """Stack of T A^X_b - A^Y_b T = 0 over vec(T), T: X -> Y, for each acting basis b.

    actions_x[b] is the matrix of x -> b.x on X; actions_y[b] likewise on Y.
    """
    nb, dx, dy = actions_x.shape[0], actions_x.shape[1], actions_y.shape[1]
    rows = []
    for b in range(nb):
        AX = actions_x[b]
        AY = actions_y[b]
        # vec_rm(T @ AX) = (I_dy (x) AX^T) vec(T); vec_rm(AY @ T) = (AY (x) I_dx) vec(T)
        rows.append(np.kron(np.eye(dy), AX.T) - np.kron(AY, np.eye(dx)))
    return np.vstack(rows)


def module_hom_space(actions_x: np.ndarray, actions_y: np.ndarray,
                     cutoff: float = SVD_CUTOFF) -> np.ndarray:
    """Orthonormal rows spanning Hom_B(X, Y) as vec'd dy x dx matrices."""
    actions_x = np.asarray(actions_x, dtype=complex)
    actions_y = np.asarray(actions_y, dtype=complex)
    return _nullspace(module_hom_constraints(actions_x, actions_y), cutoff)


def subalgebra_action_matrices(desc: ProductDescriptor, block: slice) -> np.ndarray:
    """Matrices of b_j . x for x in the given block, one per subalgebra basis vector."""
    alg = desc.algebra
    bsl = desc.subalgebra_slice
    dim_block = block.stop - block.start
    out = np.zeros((bsl.stop - bsl.start, dim_block, dim_block), dtype=complex)
    for jj, j in enumerate(range(bsl.start, bsl.stop)):
        L = alg.left_mult_matrix(np.eye(alg.dim)[j])
        sub = L[block, block]
        out[jj] = sub
        # products must stay inside the block for the action to be well defined
        outside = np.delete(np.abs(L[:, block]), np.arange(block.start, block.stop), axis=0)
        if outside.size and np.max(outside) > 1e-12:
            raise MultiplierError("subalgebra action leaves the block")
    return out


@dataclass(eq=False)
class BlockDecomposition:
    """T(b, a) = (S_B(a) + T_B(b), R_I(a) + S_I(b)) with the relation residuals.

    relation_residuals holds the max residuals of items (ii), (iii), (iv).
    """

    descriptor: ProductDescriptor
    T_B: np.ndarray  # m x m
    S_B: np.ndarray  # m x p
    S_I: np.ndarray  # p x m
    R_I: np.ndarray  # p x p
    relation_residuals: dict[str, float]
    membership_residuals: dict[str, float]

    @property
    def max_relation_residual(self) -> float:
        return max(self.relation_residuals.values())

    @property
    def max_membership_residual(self) -> float:
        return max(self.membership_residuals.values())


def _block_relation_residuals(desc: ProductDescriptor, T_B, S_B, S_I, R_I
                              ) -> tuple[dict[str, float], dict[str, float]]:
    alg = desc.algebra
    bsl, isl = desc.subalgebra_slice, desc.ideal_slice
    m = bsl.stop - bsl.start
    p = isl.stop - isl.start
    wB = alg.weights[bsl]
    wI = alg.weights[isl]

    def ideal_product(x_ideal: np.ndarray, y_ideal: np.ndarray) -> np.ndarray:
        fx = np.zeros(alg.dim, dtype=complex); fx[isl] = x_ideal
        fy = np.zeros(alg.dim, dtype=complex); fy[isl] = y_ideal
        return alg.multiply_coeffs(fx, fy)[isl]

    def ideal_times_sub(x_ideal: np.ndarray, b_sub: np.ndarray) -> np.ndarray:
        fx = np.zeros(alg.dim, dtype=complex); fx[isl] = x_ideal
        fb = np.zeros(alg.dim, dtype=complex); fb[bsl] = b_sub
        return alg.multiply_coeffs(fx, fb)[isl]

    def sub_times_ideal(b_sub: np.ndarray, x_ideal: np.ndarray) -> np.ndarray:
        fb = np.zeros(alg.dim, dtype=complex); fb[bsl] = b_sub
        fx = np.zeros(alg.dim, dtype=complex); fx[isl] = x_ideal
        return alg.multiply_coeffs(fb, fx)[isl]

    def sub_product(b: np.ndarray, b2: np.ndarray) -> np.ndarray:
        fb = np.zeros(alg.dim, dtype=complex); fb[bsl] = b
        f2 = np.zeros(alg.dim, dtype=complex); f2[bsl] = b2
        full = alg.multiply_coeffs(fb, f2)
        return full[bsl]

    eyeI = np.eye(p)
    eyeB = np.eye(m)
    r_ii = r_iii = r_iv = 0.0
    for a in range(p):
        ea = eyeI[a]
        for a2 in range(p):
            prod = ideal_product(ea, eyeI[a2])  # a a'
            lhs = R_I @ prod
            rhs = ideal_product(ea, R_I @ eyeI[a2]) + ideal_times_sub(ea, S_B @ eyeI[a2])
            r_ii = max(r_ii, float(np.sum(wI * np.abs(lhs - rhs))))
            r_iv = max(r_iv, float(np.sum(wB * np.abs(S_B @ prod))))
        for b in range(m):
            prod = ideal_times_sub(ea, eyeB[b])  # a b
            lhs = R_I @ prod
            rhs = ideal_product(ea, S_I @ eyeB[b]) + ideal_times_sub(ea, T_B @ eyeB[b])
            r_iii = max(r_iii, float(np.sum(wI * np.abs(lhs - rhs))))
            r_iv = max(r_iv, float(np.sum(wB * np.abs(S_B @ prod))))

    m_tb = m_sb = m_si = m_ri = 0.0
    for b in range(m):
        eb = eyeB[b]
        for b2 in range(m):
            prod = sub_product(eb, eyeB[b2])
            diff = T_B @ prod - sub_product(eb, T_B @ eyeB[b2])
            m_tb = max(m_tb, float(np.sum(wB * np.abs(diff))))
            diff = S_I @ prod - sub_times_ideal(eb, S_I @ eyeB[b2])
            m_si = max(m_si, float(np.sum(wI * np.abs(diff))))
        for a in range(p):
            ba = sub_times_ideal(eb, eyeI[a])
            diff = R_I @ ba - sub_times_ideal(eb, R_I @ eyeI[a])
            m_ri = max(m_ri, float(np.sum(wI * np.abs(diff))))
            diff = S_B @ ba - sub_product(eb, S_B @ eyeI[a])
            m_sb = max(m_sb, float(np.sum(wB * np.abs(diff))))

    relations = {"ii": r_ii, "iii": r_iii, "iv": r_iv}
    memberships = {"T_B": m_tb, "S_B": m_sb, "S_I": m_si, "R_I": m_ri}
    return relations, memberships


def decompose_left_multiplier(T: LinearMap | np.ndarray, desc: ProductDescriptor,
                              tol: float = DEFAULT_TOL) -> BlockDecomposition:
    """Split T in LM(B (+) I) into its four blocks and certify the relations."""
    alg = desc.algebra
    mat = T.matrix if isinstance(T, LinearMap) else np.asarray(T, dtype=complex)
    if mat.shape != (alg.dim, alg.dim):
        raise ValueError("multiplier matrix has the wrong shape")
    res = left_multiplier_residual(alg, mat)
    if res > tol:
        raise NotAMultiplierError(
            f"input is not a left multiplier (residual {res:.3e} > {tol:g})"
        )
    bsl, isl = desc.subalgebra_slice, desc.ideal_slice
    blocks = BlockDecomposition(
        descriptor=desc,
        T_B=mat[bsl, bsl],
        S_B=mat[bsl, isl],
        S_I=mat[isl, bsl],
        R_I=mat[isl, isl],
        relation_residuals={},
        membership_residuals={},
    )
    rel, mem = _block_relation_residuals(desc, blocks.T_B, blocks.S_B,
                                         blocks.S_I, blocks.R_I)
    blocks.relation_residuals = rel
    blocks.membership_residuals = mem
    return blocks


def recompose(blocks: BlockDecomposition, desc: ProductDescriptor | None = None,
              tol: float = DEFAULT_TOL) -> LinearMap:
    """Assemble T from relation-satisfying blocks; certify T in LM(B (+) I)."""
    desc = desc or blocks.descriptor
    alg = desc.algebra
    rel, mem = _block_relation_residuals(desc, blocks.T_B, blocks.S_B,
                                         blocks.S_I, blocks.R_I)
    violated = [
        (item, value)
        for item, value in
        {**rel, **{f"membership {k}": v for k, v in mem.items()}}.items()
        if value > tol
    ]
    if violated:
        raise RelationsViolatedError(violated)
    bsl, isl = desc.subalgebra_slice, desc.ideal_slice
    T = np.zeros((alg.dim, alg.dim), dtype=complex)
    T[bsl, bsl] = blocks.T_B
    T[bsl, isl] = blocks.S_B
    T[isl, bsl] = blocks.S_I
    T[isl, isl] = blocks.R_I
    res = left_multiplier_residual(alg, T)
    if res > tol:
        raise NotAMultiplierError(
            f"recomposed map is not a left multiplier (residual {res:.3e})"
        )
    return LinearMap(alg, alg, T)


def block_space(desc: ProductDescriptor, cutoff: float = SVD_CUTOFF) -> np.ndarray:
    """Null space of the joint block constraints (memberships + relations).

    Unknown vector stacks vec(T_B), vec(S_B), vec(S_I), vec(R_I); the rows
    returned are an orthonormal basis, and the row count is the dimension of
    the relation-constrained block space (which the key equivalence says
    equals dim LM of the product).
    """
    alg = desc.algebra
    bsl, isl = desc.subalgebra_slice, desc.ideal_slice
    m = bsl.stop - bsl.start
    p = isl.stop - isl.start
    nb_tb, nb_sb, nb_si, nb_ri = m * m, m * p, p * m, p * p
    total = nb_tb + nb_sb + nb_si + nb_ri
    o_tb, o_sb, o_si, o_ri = (0, nb_tb, nb_tb + nb_sb, nb_tb + nb_sb + nb_si)

    def emb(offset: int, coeff: np.ndarray) -> np.ndarray:
        """Place a per-block coefficient matrix into the stacked unknown vector."""
        out = np.zeros((coeff.shape[0], total), dtype=complex)
        out[:, offset : offset + coeff.shape[1]] = coeff
        return out

    # action matrices inside each block
    LB = [alg.left_mult_matrix(np.eye(alg.dim)[j]) for j in range(bsl.start, bsl.stop)]
    LI = [alg.left_mult_matrix(np.eye(alg.dim)[i]) for i in range(isl.start, isl.stop)]
    B_on_B = [L[bsl, bsl] for L in LB]      # b . b'
    B_act_I = [L[isl, isl] for L in LB]     # b . a
    I_on_I = [L[isl, isl] for L in LI]      # a . a'
    I_act_B = [L[isl, bsl] for L in LI]     # a . b (lands in I)

    rows = []
    eye_m, eye_p = np.eye(m), np.eye(p)

    # membership T_B in LM(B): T_B (b b') = b T_B(b')  -- over vec(T_B)
    for j, Lb in enumerate(B_on_B):
        # column b': T_B @ (e_j^B e_b'): (I (x) row) minus Lb @ T_B columnwise
        for b2 in range(m):
            r = np.zeros((m, nb_tb), dtype=complex)
            prod = Lb[:, b2]  # e_j . e_b2 in B coordinates
            r += np.kron(eye_m, prod.reshape(1, m))
            r2 = np.zeros((m, nb_tb), dtype=complex)
            r2[:, b2::m] = Lb
            rows.append(emb(o_tb, r - r2))
    # membership S_I in Hom_B(B, I): S_I(b b') = b . S_I(b')
    for j in range(m):
        Lb_B = B_on_B[j]
        Lb_I = B_act_I[j]
        for b2 in range(m):
            prod = Lb_B[:, b2]
            r = np.kron(eye_p, prod.reshape(1, m))
            r2 = np.zeros((p, nb_si), dtype=complex)
            r2[:, b2::m] = Lb_I
            rows.append(emb(o_si, r - r2))
    # membership R_I in Hom_B(I, I): R_I(b . a) = b . R_I(a)
    for j in range(m):
        Act = B_act_I[j]
        for a in range(p):
            ba = Act[:, a]
            r = np.kron(eye_p, ba.reshape(1, p))
            r2 = np.zeros((p, nb_ri), dtype=complex)
            r2[:, a::p] = Act
            rows.append(emb(o_ri, r - r2))
    # membership S_B in Hom_B(I, B): S_B(b . a) = b S_B(a)
    for j in range(m):
        Act = B_act_I[j]
        LbB = B_on_B[j]
        for a in range(p):
            ba = Act[:, a]
            r = np.kron(eye_m, ba.reshape(1, p))
            r2 = np.zeros((m, nb_sb), dtype=complex)
            r2[:, a::p] = LbB
            rows.append(emb(o_sb, r - r2))
    # (ii) R_I(a a') = a R_I(a') + a S_B(a')
    for a in range(p):
        La_I = I_on_I[a]
        La_B = I_act_B[a]
        for a2 in range(p):
            prod = La_I[:, a2]
            r_ri = np.kron(eye_p, prod.reshape(1, p))
            r_ri2 = np.zeros((p, nb_ri), dtype=complex)
            r_ri2[:, a2::p] = La_I
            r_sb = np.zeros((p, nb_sb), dtype=complex)
            r_sb[:, a2::p] = La_B
            row = emb(o_ri, r_ri - r_ri2) - emb(o_sb, r_sb)
            rows.append(row)
    # (iii) R_I(a . b) = a . S_I(b) + a T_B(b)
    for a in range(p):
        La_B = I_act_B[a]   # b -> a . b in I coords
        La_I = I_on_I[a]
        for b in range(m):
            ab = La_B[:, b]
            r_ri = np.kron(eye_p, ab.reshape(1, p))
            r_si = np.zeros((p, nb_si), dtype=complex)
            r_si[:, b::m] = La_I
            r_tb = np.zeros((p, nb_tb), dtype=complex)
            r_tb[:, b::m] = La_B
            rows.append(
                emb(o_ri, r_ri)
                - emb(o_si, r_si)
                - emb(o_tb, r_tb)
            )
    # (iv) S_B(a a') = 0 and S_B(a . b) = 0
    for a in range(p):
        La_I = I_on_I[a]
        La_B = I_act_B[a]
        for a2 in range(p):
            r = np.kron(eye_m, La_I[:, a2].reshape(1, p))
            rows.append(emb(o_sb, r))
        for b in range(m):
            r = np.kron(eye_m, La_B[:, b].reshape(1, p))
            rows.append(emb(o_sb, r))

    system = np.vstack(rows) if rows else np.zeros((0, total), dtype=complex)
    return _nullspace(system, cutoff)


def blocks_from_vector(vec: np.ndarray, desc: ProductDescriptor) -> BlockDecomposition:
    """Unpack a block_space row into a BlockDecomposition (residuals recomputed)."""
    bsl, isl = desc.subalgebra_slice, desc.ideal_slice
    m = bsl.stop - bsl.start
    p = isl.stop - isl.start
    o1, o2, o3 = m * m, m * m + m * p, m * m + m * p + p * m
    T_B = vec[:o1].reshape(m, m)
    S_B = vec[o1:o2].reshape(m, p)
    S_I = vec[o2:o3].reshape(p, m)
    R_I = vec[o3:].reshape(p, p)
    rel, mem = _block_relation_residuals(desc, T_B, S_B, S_I, R_I)
    return BlockDecomposition(desc, T_B, S_B, S_I, R_I, rel, mem)


def hat(T: LinearMap | np.ndarray, S: CharacterSet, tol: float = DEFAULT_TOL,
        threshold: float = 1e-8) -> np.ndarray:
    """Gelfand transform of a multiplier: hat(T)(phi) = phi(T c) / phi(c).

    c runs over basis vectors; the one maximizing |phi(c)| defines the value
    and every other basis direction with |phi(c)| above threshold must agree
    within tol.
    """
    alg = S.algebra
    mat = T.matrix if isinstance(T, LinearMap) else np.asarray(T, dtype=complex)
    out = np.zeros(len(S), dtype=complex)
    for r, ch in enumerate(S):
        scores = np.abs(ch.values)
        top = float(np.max(scores))
        if top <= 0:
            raise UndefinedHatError("character vanishes on the whole basis")
        k = int(np.argmax(scores))
        value = (ch.values @ mat[:, k]) / ch.values[k]
        for i in range(alg.dim):
            if scores[i] > threshold * top and i != k:
                alt = (ch.values @ mat[:, i]) / ch.values[i]
                if abs(alt - value) > max(tol, 10 * tol * abs(value)):
                    raise UndefinedHatError(
                        f"hat value inconsistent across basis directions "
                        f"({abs(alt - value):.3e})"
                    )
        out[r] = value
    return out
