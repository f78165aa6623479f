"""Bimodules as pairs of commuting one-sided actions.

An A-B-bimodule M stores matrices for the generators of A acting on the left
(``m -> a m`` is ``m @ lact(a)``) and of B acting on the right.  The left side
is a right module over A^op, so both sides reuse the one-sided machinery;
``carrier`` packages the two as a right module over A^op (x) B.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import Algebra, Subalgebra, enveloping
from .exactcore import WorkbenchError, pivots_of
from .modrep import (
    RightModule,
    _module_generators_of,
    _opposite_with_data,
    is_projective,
    projection_matrix,
    restrict_actions,
    syzygy,
    zero_module,
)


class AlgebraMismatch(WorkbenchError):
    pass


class NotWellDefined(WorkbenchError):
    pass


class LiftFailsCommutation(NotWellDefined):
    pass


def prepare_opposite(A: Algebra) -> Algebra:
    """A^op carrying A's radical, idempotents and ideal generators."""
    A.radical
    A.radical_right_generators
    A.radical_left_generators
    A.basic_idempotents
    op = _opposite_with_data(A)
    op.__dict__.setdefault("radical_right_generators", A.radical_left_generators)
    return op


class Bimodule:
    def __init__(self, left_algebra: Algebra, right_algebra: Algebra, dim: int, left_gens, right_gens, name: str = ""):
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.field = left_algebra.field
        self.dim = int(dim)
        self.name = name
        self.meta: dict = {}
        d = self.dim
        self.left_gens = [np.asarray(g, np.uint8).reshape(d, d) for g in left_gens]
        self.right_gens = [np.asarray(g, np.uint8).reshape(d, d) for g in right_gens]

    def __repr__(self):
        return f"Bimodule(dim={self.dim}{', ' + self.name if self.name else ''})"

    @cached_property
    def left(self) -> RightModule:
        """The left action as a right module over the opposite algebra."""
        op = _opposite_with_data(self.left_algebra)
        return RightModule(op, self.dim, gen_actions=self.left_gens)

    @cached_property
    def right(self) -> RightModule:
        return RightModule(self.right_algebra, self.dim, gen_actions=self.right_gens)

    @cached_property
    def carrier(self) -> RightModule:
        E = enveloping(self.left_algebra, self.right_algebra)
        return RightModule(E, self.dim, gen_actions=self.left_gens + self.right_gens)

    def lact(self, a):
        """Matrix of m -> a m."""
        return self.left.act(a)

    def ract(self, b):
        """Matrix of m -> m b."""
        return self.right.act(b)

    def check(self) -> bool:
        """Left and right generator actions commute."""
        F = self.field
        for a in self.left_gens:
            for b in self.right_gens:
                if not np.array_equal(F.matmul(a, b), F.matmul(b, a)):
                    return False
        return True


def is_bimodule_hom(M: Bimodule, N: Bimodule, mat) -> bool:
    F = M.field
    for a, b in zip(M.left_gens, N.left_gens):
        if not np.array_equal(F.matmul(a, mat), F.matmul(mat, b)):
            return False
    for a, b in zip(M.right_gens, N.right_gens):
        if not np.array_equal(F.matmul(a, mat), F.matmul(mat, b)):
            return False
    return True


def regular_bimodule(A: Algebra) -> Bimodule:
    return Bimodule(A, A, A.dim, [A.lmul(g) for g in A.generators], [A.rmul(g) for g in A.generators], name="A")


def sub_bimodule(M: Bimodule, rows) -> tuple[Bimodule, np.ndarray]:
    """Sub-bimodule spanned by invariant ``rows``; returns (bimodule, RREF basis)."""
    F = M.field
    basis = F.span(rows, M.dim)
    out = Bimodule(
        M.left_algebra,
        M.right_algebra,
        basis.shape[0],
        restrict_actions(F, M.left_gens, basis),
        restrict_actions(F, M.right_gens, basis),
    )
    return out, basis


def quotient_bimodule(M: Bimodule, sub) -> tuple[Bimodule, np.ndarray]:
    F = M.field
    proj, free = projection_matrix(F, sub, M.dim)
    lg = [F.matmul(g[free], proj) for g in M.left_gens]
    rg = [F.matmul(g[free], proj) for g in M.right_gens]
    return Bimodule(M.left_algebra, M.right_algebra, len(free), lg, rg), proj


def direct_sum_bimodules(mods) -> Bimodule:
    mods = list(mods)
    M0 = mods[0]
    d = sum(m.dim for m in mods)

    def block(lists):
        out = []
        for gi in range(len(lists[0])):
            mat = np.zeros((d, d), np.uint8)
            o = 0
            for m, gens in zip(mods, lists):
                mat[o : o + m.dim, o : o + m.dim] = gens[gi]
                o += m.dim
            out.append(mat)
        return out

    return Bimodule(
        M0.left_algebra,
        M0.right_algebra,
        d,
        block([m.left_gens for m in mods]),
        block([m.right_gens for m in mods]),
    )


def left_right_projective(M: Bimodule) -> bool:
    """Both one-sided restrictions are projective."""
    if M.dim == 0:
        return True
    prepare_opposite(M.left_algebra)
    M.right_algebra.radical_left_generators
    return is_projective(M.left) and is_projective(M.right)


# ---------------------------------------------------------------------------
# the induced bimodule A (x)_R A


def induced_bimodule(A: Algebra, R: Subalgebra) -> Bimodule:
    """A (x)_R A as a quotient of A (x)_k A.

    ``meta`` records the projection ``proj`` (n^2 x d), the kept coordinates
    ``free`` and the RREF relation space ``relations``.
    """
    if R.parent is not A:
        raise AlgebraMismatch("R is not a subalgebra of A")
    F = A.field
    n = A.dim
    I = F.eye(n)
    rows = []
    for g in R.algebra.generators:
        r = R.embed(g)[0]
        rows.append(F.msub(F.kron(A.rmul(r), I), F.kron(I, A.lmul(r))))
    rel = F.span(np.vstack(rows), n * n) if rows else np.zeros((0, n * n), np.uint8)
    proj, free = projection_matrix(F, rel, n * n)
    lg = [F.matmul(F.kron(A.lmul(g), I)[free], proj) for g in A.generators]
    rg = [F.matmul(F.kron(I, A.rmul(g))[free], proj) for g in A.generators]
    T = Bimodule(A, A, len(free), lg, rg, name="A(x)_R A")
    T.meta.update(proj=proj, free=free, relations=rel, subalgebra=R)
    return T


def tensor_class(T: Bimodule, x):
    """Coordinates in A (x)_R A of x in A (x)_k A (flattened n^2 vector or n x n array)."""
    x = np.asarray(x, np.uint8).reshape(1, -1)
    return T.field.matmul(x, T.meta["proj"])[0]


def pure_tensor(A: Algebra, a, b):
    """a (x) b in A (x)_k A, flattened."""
    F = A.field
    return F.mul_table[np.asarray(a)[:, None], np.asarray(b)[None, :]].reshape(-1)


def _sandwich_rows(A: Algebra, y, rows_i, rows_j):
    """Rows b_i y b_j (elements of A) for the index pairs given."""
    F = A.field
    n = A.dim
    left = A.rmul(y)  # row i = b_i y
    full = F.matmul(left, A.structure.reshape(n, n * n)).reshape(n, n, n)
    return full[rows_i, rows_j]


def element_map(T: Bimodule, images) -> np.ndarray:
    """Bimodule map T^s -> A sending the s-th generator 1 (x) 1 to ``images[s]``."""
    A = T.left_algebra
    free = T.meta["free"]
    n = A.dim
    fi, fj = np.divmod(free, n)
    blocks = [_sandwich_rows(A, np.asarray(y, np.uint8), fi, fj) for y in images]
    return np.vstack(blocks)


def mult_map(T: Bimodule) -> np.ndarray:
    """d0: A (x)_R A -> A, a (x) b -> ab."""
    A = T.left_algebra
    return element_map(T, [A.unit])


def _tensor_map_full(A: Algebra, x):
    """Matrix on A (x)_k A of b_i (x) b_j -> b_i x b_j for x in A (x)_k A."""
    F = A.field
    n = A.dim
    X = np.asarray(x, np.uint8).reshape(n, n)
    out = np.zeros((n * n, n * n), np.uint8)
    for k, l in zip(*np.nonzero(X)):
        term = F.kron(A.rmul(A.basis_vector(k)), A.lmul(A.basis_vector(l)))
        if X[k, l] != 1:
            term = F.mul_table[X[k, l], term]
        out = F.add_table[out, term]
    return out


def generator_map(T: Bimodule, images, check: bool = True, error=NotWellDefined) -> np.ndarray:
    """Map T^s -> T^t with generator s sent to sum_t images[s][t].

    ``images[s][t]`` are elements of A (x)_k A (flattened n^2).  With ``check``
    the relation space of A (x)_R A is pushed through and must vanish.
    """
    F = T.field
    A = T.left_algebra
    proj, free, rel = T.meta["proj"], T.meta["free"], T.meta["relations"]
    d = T.dim
    ns, nt = len(images), len(images[0]) if images else 0
    out = np.zeros((ns * d, nt * d), np.uint8)
    for s, row in enumerate(images):
        for t, x in enumerate(row):
            x = np.asarray(x, np.uint8)
            if not x.any():
                continue
            full = _tensor_map_full(A, x)
            if check and rel.shape[0]:
                if F.matmul(F.matmul(rel, full), proj).any():
                    raise error(f"image of generator {s} does not commute with R")
            out[s * d : (s + 1) * d, t * d : (t + 1) * d] = F.matmul(full[free], proj)
    return out


def embed_tensor(B: Subalgebra, c):
    """Push an element of B (x)_k B (flattened nB^2, B coordinates) into A (x)_k A."""
    F = B.parent.field
    k = B.dim
    X = np.asarray(c, np.uint8).reshape(k, k)
    E = B.basis
    return F.matmul(F.matmul(E.T.copy(), X), E).reshape(-1)


def free_bimodule_map(C: Algebra, images) -> np.ndarray:
    """Matrix of the C-bimodule map (C(x)C)^s -> (C(x)C)^t given by generator images."""
    F = C.field
    n = C.dim
    d = n * n
    ns, nt = len(images), len(images[0]) if images else 0
    out = np.zeros((ns * d, nt * d), np.uint8)
    for s, row in enumerate(images):
        for t, x in enumerate(row):
            if np.asarray(x).any():
                out[s * d : (s + 1) * d, t * d : (t + 1) * d] = _tensor_map_full(C, x)
    return out


def free_to_algebra_map(C: Algebra, images) -> np.ndarray:
    """Matrix of (C(x)C)^s -> C, generator s -> images[s]."""
    n = C.dim
    ii, jj = np.divmod(np.arange(n * n), n)
    return np.vstack([_sandwich_rows(C, np.asarray(y, np.uint8), ii, jj) for y in images])


def _inclusion(T: Bimodule, B: Subalgebra, copies: int) -> np.ndarray:
    """(B(x)B)^copies -> (A(x)_R A)^copies, b (x) b' -> class of b (x) b'."""
    F = T.field
    E = B.basis
    k = B.dim
    one = F.matmul(F.kron(E, E), T.meta["proj"])  # (k^2, d)
    out = np.zeros((copies * k * k, copies * T.dim), np.uint8)
    for c in range(copies):
        out[c * k * k : (c + 1) * k * k, c * T.dim : (c + 1) * T.dim] = one
    return out


@dataclass
class Lift:
    matrix: np.ndarray
    square_commutes: bool


def _lift(T: Bimodule, B: Subalgebra, images, error) -> Lift:
    big = [[embed_tensor(B, x) for x in row] for row in images]
    mat = generator_map(T, big, check=True, error=error)
    F = T.field
    ns, nt = len(images), len(images[0])
    f = free_bimodule_map(B.algebra, images)
    lhs = F.matmul(_inclusion(T, B, ns), mat)
    rhs = F.matmul(f, _inclusion(T, B, nt))
    return Lift(mat, bool(np.array_equal(lhs, rhs)))


def lift_H(T: Bimodule, B: Subalgebra, images) -> Lift:
    """H(f) for f: (B(x)B)^s -> (B(x)B)^t given by generator images in B(x)B."""
    return _lift(T, B, images, NotWellDefined)


def twisted_lift(T: Bimodule, B: Subalgebra, images) -> Lift:
    """Lift of a map of Phi-form (generator images like sum h^-1 (x) h).

    Such images need not be fixed by R, only commute with it; the check is the
    same relation test, failing with LiftFailsCommutation.
    """
    return _lift(T, B, images, LiftFailsCommutation)


def commutes_with(T: Bimodule, R: Subalgebra, x_cls) -> bool:
    """Does r x = x r hold in T for every basis element r of R (x given in T coordinates)?"""
    F = T.field
    x = np.atleast_2d(x_cls)
    for r in R.basis:
        if not np.array_equal(F.matmul(x, T.lact(r)), F.matmul(x, T.ract(r))):
            return False
    return True


# ---------------------------------------------------------------------------
# tensoring a module with a bimodule


def apply_bimodule(X: RightModule, M: Bimodule) -> RightModule:
    """X (x)_A M from a projective presentation of X."""
    A = M.left_algebra
    if X.algebra is not A:
        raise AlgebraMismatch("module and bimodule live over different algebras")
    F = X.field
    Bq = M.right_algebra
    if X.dim == 0 or M.dim == 0:
        return zero_module(Bq)
    _K, kbasis, cov = syzygy(X, with_cover=True)
    rels = _module_generators_of(cov.module, kbasis) if kbasis.shape[0] else kbasis
    idems = A.basic_idempotents
    Ws = [F.span(M.lact(idems[i]), M.dim) for i, _m in cov.summands]
    pivs = [pivots_of(W) for W in Ws]
    widths = [W.shape[0] for W in Ws]
    w = sum(widths)
    if w == 0:
        return zero_module(Bq)
    offs = cov.offsets()
    rel_rows = []
    for t in rels:
        parts = []
        for W, piv, blk, o in zip(Ws, pivs, cov.blocks, offs):
            ts = F.matmul(t[None, o : o + blk.shape[0]], blk)[0]
            if W.shape[0] == 0:
                continue
            parts.append(M.lact(ts)[:, piv] if ts.any() else np.zeros((M.dim, W.shape[0]), np.uint8))
        rel_rows.append(np.hstack(parts))
    rel = F.span(np.vstack(rel_rows), w) if rel_rows else np.zeros((0, w), np.uint8)
    proj, free = projection_matrix(F, rel, w)
    acts = []
    for g in M.right_gens:
        mat = np.zeros((w, w), np.uint8)
        o = 0
        for W, piv in zip(Ws, pivs):
            k = W.shape[0]
            if k:
                mat[o : o + k, o : o + k] = F.matmul(W, g)[:, piv]
            o += k
        acts.append(F.matmul(mat[free], proj))
    return RightModule(Bq, len(free), gen_actions=acts)


# ---------------------------------------------------------------------------
# projective bimodule covers


def _projective_bimodule(A: Algebra, i: int, j: int):
    """A e_i (x) e_j A with bases (U of A e_i, V of e_j A)."""
    cache = A.meta.setdefault("_bimodcache", {})
    key = ("P", i, j)
    if key not in cache:
        F = A.field
        ei, ej = A.basic_idempotents[i], A.basic_idempotents[j]
        U = F.span(A.rmul(ei), A.dim)
        V = F.span(A.lmul(ej), A.dim)
        Lg = restrict_actions(F, [A.lmul(g) for g in A.generators], U)
        Rg = restrict_actions(F, [A.rmul(g) for g in A.generators], V)
        a, c = U.shape[0], V.shape[0]
        lg = [F.kron(m, F.eye(c)) for m in Lg]
        rg = [F.kron(F.eye(a), m) for m in Rg]
        P = Bimodule(A, A, a * c, lg, rg, name=f"Ae{i + 1}(x)e{j + 1}A")
        cache[key] = (P, U, V)
    return cache[key]


@dataclass
class BimoduleCover:
    module: Bimodule
    map: np.ndarray
    summands: list = field(default_factory=list)  # (i, j, generator)


def bimodule_radical(M: Bimodule):
    """RREF basis of rad(A) M + M rad(A)."""
    F = M.field
    A = M.left_algebra
    imgs = [M.lact(g) for g in A.radical_right_generators]
    imgs += [M.ract(g) for g in M.right_algebra.radical_left_generators]
    if not imgs:
        return np.zeros((0, M.dim), np.uint8)
    return F.span(np.vstack(imgs), M.dim)


def bimodule_projective_cover(M: Bimodule) -> BimoduleCover:
    """Minimal cover by summands A e_i (x) e_j A (A-A bimodules only)."""
    A = M.left_algebra
    if M.right_algebra is not A:
        raise AlgebraMismatch("covers are built for A-A bimodules")
    F = M.field
    prepare_opposite(A)
    rad = bimodule_radical(M)
    idems = A.basic_idempotents
    mods, maps, summands = [], [], []
    for i, ei in enumerate(idems):
        Li = M.lact(ei)
        for j, ej in enumerate(idems):
            proj_ij = F.matmul(Li, M.ract(ej))
            W = F.span(proj_ij, M.dim)
            if W.shape[0] == 0:
                continue
            U = F.span(F.matmul(rad, proj_ij), M.dim) if rad.shape[0] else rad
            if U.shape[0] == W.shape[0]:
                continue
            P, Ub, Vb = _projective_bimodule(A, i, j)
            for m in F.complement_in(W, U):
                left_imgs = F.matmul(Ub, M.left.orbit_images(m)[0])  # u m
                orb = M.right.orbit_images(left_imgs)  # (a, nA, dM)
                rows = np.vstack([F.matmul(Vb, orb[r]) for r in range(orb.shape[0])])
                mods.append(P)
                maps.append(rows)
                summands.append((i, j, m))
    if not mods:
        Z = Bimodule(A, A, 0, [np.zeros((0, 0), np.uint8)] * len(A.generators), [np.zeros((0, 0), np.uint8)] * len(A.generators))
        return BimoduleCover(Z, np.zeros((0, M.dim), np.uint8), [])
    return BimoduleCover(direct_sum_bimodules(mods), np.vstack(maps), summands)


def kernel_bimodule(M: Bimodule, mat) -> tuple[Bimodule, np.ndarray]:
    """Kernel of a bimodule map given by ``mat`` (rows: basis of M)."""
    ker = M.field.left_kernel(mat)
    return sub_bimodule(M, ker)


# ---------------------------------------------------------------------------
# complexes


@dataclass
class BimoduleComplex:
    """terms[0] <- terms[1] <- ...; differentials[p]: terms[p+1] -> terms[p].

    ``augmentation`` maps terms[0] onto the algebra itself (d0 of the
    twist complex); it is stored separately since A is not a term.
    """

    terms: list
    differentials: list
    augmentation: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    def composites_zero(self) -> bool:
        F = self.terms[0].field
        maps = ([self.augmentation] if self.augmentation is not None else []) + list(self.differentials)
        maps = maps[::-1]
        for f, g in zip(maps, maps[1:]):
            if F.matmul(f, g).any():
                return False
        return True
