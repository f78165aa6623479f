"""Right modules over finite-dimensional algebras.

A module stores matrices for the algebra generators; ``m . a = m @ act(a)``.
Full basis actions are expanded through the algebra's word basis on demand.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import Algebra, Corner, Subalgebra
from .exactcore import WorkbenchError, pivots_of
from . import permgroup as pg


class NotAModule(WorkbenchError):
    pass


class RightModule:
    def __init__(self, algebra: Algebra, dim: int, gen_actions=None, basis_actions=None, name: str = ""):
        self.algebra = algebra
        self.field = algebra.field
        self.dim = int(dim)
        self.name = name
        if basis_actions is not None:
            ba = np.asarray(basis_actions, dtype=np.uint8).reshape(algebra.dim, self.dim, self.dim)
            self.__dict__["basis_actions"] = ba
            if gen_actions is None:
                gen_actions = [self.field.lincomb(g, ba) for g in algebra.generators]
        if gen_actions is None:
            raise ValueError("need generator or basis actions")
        self.gen_actions = [np.asarray(g, dtype=np.uint8).reshape(self.dim, self.dim) for g in gen_actions]

    def __repr__(self):
        return f"RightModule(dim={self.dim}{', ' + self.name if self.name else ''})"

    @cached_property
    def basis_actions(self):
        F = self.field
        words, parents, change = self.algebra.word_basis
        d = self.dim
        if d == 0:
            return np.zeros((self.algebra.dim, 0, 0), dtype=np.uint8)
        mats = np.empty((len(words), d, d), dtype=np.uint8)
        mats[0] = F.eye(d)
        for w in range(1, len(words)):
            parent, gi = parents[w]
            mats[w] = F.matmul(mats[parent], self.gen_actions[gi])
        return F.matmul(change, mats.reshape(len(words), d * d)).reshape(-1, d, d)

    def act(self, a):
        return self.field.lincomb(a, self.basis_actions)

    def orbit_images(self, m):
        """Rows m . b_j for every algebra basis element (shape nA x dim)."""
        d = self.dim
        ba = self.basis_actions
        flat = ba.transpose(1, 0, 2).reshape(d, -1)
        return self.field.matmul(np.atleast_2d(m), flat).reshape(-1, ba.shape[0], d)

    def check(self) -> bool:
        """Verify the action against the algebra's structure constants (small cases)."""
        F = self.field
        A = self.algebra
        ba = self.basis_actions
        if not np.array_equal(self.act(A.unit), F.eye(self.dim)):
            return False
        for i in range(A.dim):
            for j in range(A.dim):
                lhs = F.matmul(ba[i], ba[j])
                rhs = F.lincomb(A.structure[i, j], ba)
                if not np.array_equal(lhs, rhs):
                    return False
        return True

    def is_zero(self) -> bool:
        return self.dim == 0


@dataclass
class ModuleHom:
    source: RightModule
    target: RightModule
    matrix: np.ndarray

    def is_homomorphism(self) -> bool:
        F = self.source.field
        for gs, gt in zip(self.source.gen_actions, self.target.gen_actions):
            if not np.array_equal(F.matmul(gs, self.matrix), F.matmul(self.matrix, gt)):
                return False
        return True


# ---------------------------------------------------------------------------
# construction


def regular_module(A: Algebra) -> RightModule:
    return RightModule(A, A.dim, basis_actions=A.right_regular, name="A")


def zero_module(A: Algebra) -> RightModule:
    return RightModule(A, 0, gen_actions=[np.zeros((0, 0), np.uint8) for _ in A.generators])


def from_generator_matrices(A: Algebra, mats) -> RightModule:
    mats = [A.field.asarray(m) for m in mats]
    if len(mats) != len(A.generators):
        raise NotAModule(f"expected {len(A.generators)} generator matrices, got {len(mats)}")
    d = mats[0].shape[0] if mats else 0
    return RightModule(A, d, gen_actions=mats)


def restrict_actions(F, actions, basis):
    """Actions on the row space ``basis`` (RREF, invariant)."""
    piv = pivots_of(basis)
    return [F.matmul(basis, g)[:, piv] for g in actions]


def submodule(M: RightModule, rows) -> tuple[RightModule, np.ndarray]:
    """Submodule spanned (as a vector space) by invariant ``rows``; returns (module, RREF basis)."""
    F = M.field
    basis = F.span(rows, M.dim)
    sub = RightModule(M.algebra, basis.shape[0], gen_actions=restrict_actions(F, M.gen_actions, basis))
    if "basis_actions" in M.__dict__ and basis.shape[0]:
        piv = pivots_of(basis)
        ba = F.matmul(basis[None, :, :], M.basis_actions)[:, :, piv]
        sub.__dict__["basis_actions"] = np.ascontiguousarray(ba)
    return sub, basis


def generated_submodule(M: RightModule, vectors):
    """RREF basis of the submodule generated by ``vectors``."""
    F = M.field
    span = F.span(vectors, M.dim)
    while True:
        imgs = [F.matmul(span, g) for g in M.gen_actions]
        new = F.span(np.vstack([span] + imgs), M.dim)
        if new.shape[0] == span.shape[0]:
            return new
        span = new


def projection_matrix(F, sub, dim):
    """Matrix of V -> V/sub in coordinates of the non-pivot columns of ``sub``."""
    piv = pivots_of(sub)
    free = np.setdiff1d(np.arange(dim), piv)
    proj = np.zeros((dim, len(free)), dtype=np.uint8)
    proj[free, np.arange(len(free))] = 1
    if len(piv):
        proj[piv] = F.neg_table[sub[:, free]]
    return proj, free


def quotient(M: RightModule, sub) -> tuple[RightModule, np.ndarray]:
    """M / sub for an invariant RREF ``sub``; returns (module, projection matrix)."""
    F = M.field
    proj, free = projection_matrix(F, sub, M.dim)
    acts = [F.matmul(g[free], proj) for g in M.gen_actions]
    Q = RightModule(M.algebra, len(free), gen_actions=acts)
    return Q, proj


def direct_sum(mods) -> RightModule:
    mods = list(mods)
    A = mods[0].algebra
    F = A.field
    d = sum(m.dim for m in mods)
    acts = []
    for gi in range(len(A.generators)):
        mat = np.zeros((d, d), dtype=np.uint8)
        o = 0
        for m in mods:
            mat[o : o + m.dim, o : o + m.dim] = m.gen_actions[gi]
            o += m.dim
        acts.append(mat)
    out = RightModule(A, d, gen_actions=acts)
    if all("basis_actions" in m.__dict__ for m in mods):
        ba = np.zeros((A.dim, d, d), dtype=np.uint8)
        o = 0
        for m in mods:
            ba[:, o : o + m.dim, o : o + m.dim] = m.basis_actions
            o += m.dim
        out.__dict__["basis_actions"] = ba
    return out


def _opposite_with_data(A: Algebra) -> Algebra:
    op = A.opposite()
    if "radical" in A.__dict__ and "radical" not in op.__dict__:
        op.__dict__["radical"] = A.radical
    if A._idempotents is not None and op._idempotents is None:
        op._idempotents = A._idempotents
    if "radical_left_generators" not in op.__dict__ and "radical_right_generators" in A.__dict__:
        op.__dict__["radical_left_generators"] = A.radical_right_generators
    if "simple_labels" in A.meta:
        op.meta["simple_labels"] = A.meta["simple_labels"]
    return op


def dual(M: RightModule) -> RightModule:
    """Dual module over the opposite algebra (actions transposed)."""
    op = _opposite_with_data(M.algebra)
    out = RightModule(op, M.dim, gen_actions=[g.T.copy() for g in M.gen_actions])
    if "basis_actions" in M.__dict__:
        out.__dict__["basis_actions"] = np.ascontiguousarray(M.basis_actions.transpose(0, 2, 1))
    return out


def restrict(M: RightModule, sub: Subalgebra) -> RightModule:
    B = sub.algebra
    F = M.field
    d = M.dim
    ba = F.matmul(sub.basis, M.basis_actions.reshape(M.algebra.dim, d * d)).reshape(sub.dim, d, d)
    return RightModule(B, d, basis_actions=ba)


def corner_module(M: RightModule, C: Corner) -> tuple[RightModule, np.ndarray]:
    """M e as a module over eAe; returns (module, RREF basis of M e inside M)."""
    F = M.field
    W = F.span(M.act(C.idempotent), M.dim)
    piv = pivots_of(W)
    d = M.dim
    acts = F.matmul(C.embedding, M.basis_actions.reshape(M.algebra.dim, d * d)).reshape(C.embedding.shape[0], d, d)
    ba = F.matmul(W[None, :, :], acts)[:, :, piv] if W.shape[0] else np.zeros((C.dim, 0, 0), np.uint8)
    return RightModule(C, W.shape[0], basis_actions=ba), W


def trivial_module(A: Algebra) -> RightModule:
    """The trivial module of a group algebra (every group element acts as 1)."""
    if "group" not in A.meta:
        raise NotAModule("trivial module needs a group algebra")
    return RightModule(A, 1, gen_actions=[np.ones((1, 1), np.uint8) for _ in A.generators], name="k")


def group_action(M: RightModule, g) -> np.ndarray:
    from .algebra import group_element

    return M.act(group_element(M.algebra, g))


def tensor_group_modules(M: RightModule, N: RightModule) -> RightModule:
    """M (x) N with the diagonal action of a group algebra."""
    F = M.field
    acts = [F.kron(a, b) for a, b in zip(M.gen_actions, N.gen_actions)]
    return RightModule(M.algebra, M.dim * N.dim, gen_actions=acts)


def contragredient(M: RightModule) -> RightModule:
    """M* over the same group algebra: g acts by rho(g^-1)^T."""
    G = M.algebra.meta["group"]
    acts = [group_action(M, pg.inverse(g)).T.copy() for g in G.generators]
    return RightModule(M.algebra, M.dim, gen_actions=acts)


# ---------------------------------------------------------------------------
# radical layers, simples, projectives


def radical_of(M: RightModule):
    """RREF basis of M . rad(A)."""
    F = M.field
    gens = M.algebra.radical_left_generators
    if not gens or M.dim == 0:
        return np.zeros((0, M.dim), np.uint8)
    imgs = [F.matmul(np.eye(M.dim, dtype=np.uint8), M.act(g)) for g in gens]
    return F.span(np.vstack(imgs), M.dim)


def _radical_of_space(M: RightModule, space):
    F = M.field
    gens = M.algebra.radical_left_generators
    if not gens or space.shape[0] == 0:
        return np.zeros((0, M.dim), np.uint8)
    return F.span(np.vstack([F.matmul(space, M.act(g)) for g in gens]), M.dim)


def _idempotent_space(M: RightModule, e, space=None):
    F = M.field
    img = M.act(e) if space is None else F.matmul(space, M.act(e))
    return F.span(img, M.dim)


def top_multiplicities(M: RightModule, rad=None):
    A = M.algebra
    rad = radical_of(M) if rad is None else rad
    out = []
    for e in A.basic_idempotents:
        We = _idempotent_space(M, e)
        Ue = _idempotent_space(M, e, rad) if rad.shape[0] else np.zeros((0, M.dim), np.uint8)
        out.append(We.shape[0] - Ue.shape[0])
    return out


def _cache(A: Algebra):
    return A.meta.setdefault("_modcache", {})


def projective_indecomposable(A: Algebra, i: int) -> tuple[RightModule, np.ndarray]:
    """e_i A for the i-th basic idempotent; returns (module, RREF basis in A)."""
    cache = _cache(A)
    key = ("P", i)
    if key not in cache:
        F = A.field
        e = A.basic_idempotents[i]
        basis = F.span(A.lmul(e), A.dim)
        P, _ = submodule(regular_module(A), basis)
        P.name = f"P{A.simple_labels[i]}"
        cache[key] = (P, basis)
    return cache[key]


def simple_modules(A: Algebra):
    out = []
    for i in range(len(A.basic_idempotents)):
        P, _ = projective_indecomposable(A, i)
        S, _ = quotient(P, radical_of(P))
        S.name = f"S{A.simple_labels[i]}"
        out.append(S)
    return out


def simple_module(A: Algebra, label) -> RightModule:
    return simple_modules(A)[A.simple_labels.index(str(label))]


@dataclass
class ProjectiveCover:
    module: RightModule  # the projective P
    map: np.ndarray  # P -> M
    summands: list  # (class index, generator in M)
    blocks: list  # RREF bases (in A) of the summands e_i A, in order

    def offsets(self):
        out, o = [], 0
        for b in self.blocks:
            out.append(o)
            o += b.shape[0]
        return out


def projective_cover(M: RightModule) -> ProjectiveCover:
    A = M.algebra
    F = M.field
    rad = radical_of(M)
    summands, blocks, maps, mods = [], [], [], []
    for i, e in enumerate(A.basic_idempotents):
        We = _idempotent_space(M, e)
        if We.shape[0] == 0:
            continue
        Ue = _idempotent_space(M, e, rad) if rad.shape[0] else np.zeros((0, M.dim), np.uint8)
        if Ue.shape[0] == We.shape[0]:
            continue
        gens = F.complement_in(We, Ue)
        P, basis = projective_indecomposable(A, i)
        for m in gens:
            summands.append((i, m))
            blocks.append(basis)
            mods.append(P)
            maps.append(F.matmul(basis, M.orbit_images(m)[0]))
    if not mods:
        return ProjectiveCover(zero_module(A), np.zeros((0, M.dim), np.uint8), [], [])
    P = direct_sum(mods)
    return ProjectiveCover(P, np.vstack(maps), summands, blocks)


def syzygy(M: RightModule, with_cover: bool = False):
    """Omega(M) = kernel of the projective cover."""
    cov = projective_cover(M)
    F = M.field
    ker = F.left_kernel(cov.map) if cov.map.shape[0] else np.zeros((0, 0), np.uint8)
    K, basis = submodule(cov.module, ker) if cov.map.shape[0] else (zero_module(M.algebra), ker)
    return (K, basis, cov) if with_cover else K


def cosyzygy(M: RightModule) -> RightModule:
    """Omega^-1(M) = D Omega D(M)."""
    D = dual(M)
    return dual(syzygy(D))


def injective_hull(M: RightModule):
    """(I, embedding M -> I) from the dual projective cover."""
    cov = projective_cover(dual(M))
    return dual(cov.module), cov.map.T.copy()


def strip_projectives(M: RightModule) -> RightModule:
    """Remove projective summands (self-injective algebras): Omega Omega^-1."""
    if M.dim == 0:
        return M
    C = cosyzygy(M)
    return syzygy(C) if C.dim else zero_module(M.algebra)


def syzygy_power(M: RightModule, n: int) -> RightModule:
    out = M
    if n >= 0:
        for _ in range(n):
            out = syzygy(out)
    else:
        for _ in range(-n):
            out = cosyzygy(out)
    return out


def projective_dims(A: Algebra):
    return [projective_indecomposable(A, i)[0].dim for i in range(len(A.basic_idempotents))]


def is_projective(M: RightModule) -> bool:
    tops = top_multiplicities(M)
    return sum(t * d for t, d in zip(tops, projective_dims(M.algebra))) == M.dim


# ---------------------------------------------------------------------------
# Loewy structure


@dataclass(frozen=True)
class LoewyProfile:
    labels: tuple
    layers: tuple  # tuple of per-simple multiplicity tuples, top first

    @property
    def length(self) -> int:
        return len(self.layers)

    def layer_multisets(self):
        return [{l: c for l, c in zip(self.labels, layer) if c} for layer in self.layers]

    def __str__(self):
        parts = []
        for layer in self.layers:
            items = [l for l, c in zip(self.labels, layer) for _ in range(c)]
            parts.append("[" + " ".join(items) + "]")
        return "/".join(parts) if parts else "0"

    def composition_factors(self):
        tot = [sum(col) for col in zip(*self.layers)] if self.layers else [0] * len(self.labels)
        return dict(zip(self.labels, tot))

    def to_json(self):
        return [dict(sorted(d.items())) for d in self.layer_multisets()]

    @staticmethod
    def parse(text: str, labels) -> "LoewyProfile":
        """Read ``[1 2]/[1 1 2]`` style diagrams (order inside a layer is ignored)."""
        labels = tuple(str(l) for l in labels)
        layers = []
        for chunk in text.split("/"):
            items = chunk.strip().strip("[]").split()
            layers.append(tuple(items.count(l) for l in labels))
        return LoewyProfile(labels, tuple(layers))


def radical_series(M: RightModule):
    """[M, M rad, M rad^2, ..., 0] as RREF bases."""
    F = M.field
    cur = F.eye(M.dim)
    out = [cur]
    while cur.shape[0]:
        cur = _radical_of_space(M, cur)
        out.append(cur)
    return out


def socle_series_length(M: RightModule) -> int:
    return len(radical_series(dual(M))) - 1


def loewy(M: RightModule) -> LoewyProfile:
    A = M.algebra
    series = radical_series(M)
    layers = []
    for hi, lo in zip(series, series[1:]):
        row = []
        for e in A.basic_idempotents:
            a = _idempotent_space(M, e, hi).shape[0] if hi.shape[0] else 0
            b = _idempotent_space(M, e, lo).shape[0] if lo.shape[0] else 0
            row.append(a - b)
        layers.append(tuple(row))
    return LoewyProfile(tuple(A.simple_labels), tuple(layers))


def socle_profile(M: RightModule) -> LoewyProfile:
    """Socle layers read from the top: the radical layers of D(M), reversed."""
    prof = loewy(dual(M))
    return LoewyProfile(tuple(M.algebra.simple_labels), tuple(reversed(prof.layers)))


def composition_factors(M: RightModule):
    return loewy(M).composition_factors()


# ---------------------------------------------------------------------------
# Hom spaces


def hom_sylvester(M: RightModule, N: RightModule):
    """Basis (k, dM, dN) of Hom_A(M, N) from the generator intertwining equations."""
    F = M.field
    dM, dN = M.dim, N.dim
    if dM == 0 or dN == 0:
        return np.zeros((0, dM, dN), np.uint8)
    rows = []
    for a, b in zip(M.gen_actions, N.gen_actions):
        rows.append(F.msub(F.kron(a, F.eye(dN)), F.kron(F.eye(dM), b.T)))
    if not rows:
        return F.eye(dM * dN).reshape(-1, dM, dN)
    sol = F.kernel_basis(np.vstack(rows))
    return sol.reshape(-1, dM, dN)


def _module_generators_of(P: RightModule, space):
    """Rows of ``space`` (a submodule of P) whose classes span its top."""
    F = P.field
    if space.shape[0] == 0:
        return space
    rad = _radical_of_space(P, space)
    return F.complement_in(space, rad)


def hom_presentation(M: RightModule, N: RightModule):
    """Basis of Hom_A(M, N) from a projective presentation of M."""
    F = M.field
    A = M.algebra
    dM, dN = M.dim, N.dim
    if dM == 0 or dN == 0:
        return np.zeros((0, dM, dN), np.uint8)
    cov = projective_cover(M)
    P = cov.module
    ker = F.left_kernel(cov.map)
    rels = _module_generators_of(P, ker) if ker.shape[0] else ker
    offs = cov.offsets()
    idems = A.basic_idempotents
    # unknowns n_s = z_s @ W_s with W_s a basis of N e_{i_s}
    Ws, Qs = [], []
    for (i, _m), blk in zip(cov.summands, cov.blocks):
        W = _idempotent_space(N, idems[i])
        Ws.append(W)
        Qs.append(N.orbit_images(W) if W.shape[0] else None)  # (w, nA, dN)
    nunk = sum(W.shape[0] for W in Ws)
    if nunk == 0:
        return np.zeros((0, dM, dN), np.uint8)
    if rels.shape[0]:
        k = rels.shape[0]
        blocks = []
        for s, (W, Q, blk, o) in enumerate(zip(Ws, Qs, cov.blocks, offs)):
            if W.shape[0] == 0:
                continue
            r_s = F.matmul(rels[:, o : o + blk.shape[0]], blk)  # (k, nA) elements of A
            # n_s . r_s = z_s W_s rho(r_s);  Q[w, j] = W_w . b_j
            img = F.matmul(r_s, Q.transpose(1, 0, 2).reshape(A.dim, -1))  # (k, w*dN)
            img = img.reshape(k, W.shape[0], dN).transpose(1, 0, 2).reshape(W.shape[0], k * dN)
            blocks.append(img)
        sols = F.left_kernel(np.vstack(blocks))
    else:
        sols = F.eye(nunk)
    if sols.shape[0] == 0:
        return np.zeros((0, dM, dN), np.uint8)
    section = F.solve_left(cov.map, F.eye(dM))  # (dM, dim P)
    out = []
    for z in sols:
        phi_rows = []
        o = 0
        for W, Q, blk in zip(Ws, Qs, cov.blocks):
            w = W.shape[0]
            if w == 0:
                phi_rows.append(np.zeros((blk.shape[0], dN), np.uint8))
                continue
            zs = z[o : o + w]
            o += w
            images = F.matmul(zs[None, :], Q.reshape(w, -1)).reshape(A.dim, dN)  # n_s . b_j
            phi_rows.append(F.matmul(blk, images))
        out.append(F.matmul(section, np.vstack(phi_rows)))
    return np.array(out, dtype=np.uint8)


def hom_space(M: RightModule, N: RightModule, method: str = "auto"):
    if M.algebra is not N.algebra:
        raise NotAModule("modules over different algebras")
    if method == "auto":
        method = "sylvester" if M.dim * N.dim <= 400 else "presentation"
    if method == "sylvester":
        return hom_sylvester(M, N)
    return hom_presentation(M, N)


def hom_dim(M, N, method="auto") -> int:
    return hom_space(M, N, method).shape[0]


def factors_through_projective_space(M: RightModule, N: RightModule):
    """Row space (flattened dM*dN) of maps M -> N factoring through a projective."""
    F = M.field
    cov = projective_cover(N)
    if cov.module.dim == 0 or M.dim == 0:
        return np.zeros((0, M.dim * N.dim), np.uint8)
    H = hom_space(M, cov.module)
    if H.shape[0] == 0:
        return np.zeros((0, M.dim * N.dim), np.uint8)
    comp = F.matmul(H, cov.map)
    return F.span(comp.reshape(H.shape[0], -1), M.dim * N.dim)


def stable_hom_dim(M: RightModule, N: RightModule) -> int:
    return hom_dim(M, N) - factors_through_projective_space(M, N).shape[0]


def endomorphism_algebra(M: RightModule) -> Algebra:
    """End_A(M) with product f * g = "f then g" (matrix F @ G)."""
    F = M.field
    H = hom_space(M, M)
    k = H.shape[0]
    d = M.dim
    flat = F.span(H.reshape(k, d * d), d * d)
    mats = flat.reshape(k, d, d)
    prods = F.matmul(np.repeat(mats, k, 0), np.tile(mats, (k, 1, 1))).reshape(k * k, d * d)
    struct = F.coords(flat, prods).reshape(k, k, k)
    unit = F.coords(flat, F.eye(d).reshape(1, -1))[0]
    E = Algebra(F, struct, unit, [f"f{i}" for i in range(k)], meta={"hom_basis": mats})
    return E


def cartan_matrix(modules, method="auto"):
    """C[i][j] = dim Hom(M_j, M_i)."""
    n = len(modules)
    return [[hom_dim(modules[j], modules[i], method) for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------
# isomorphism


@dataclass
class IsoResult:
    verdict: str  # "Isomorphic" | "NotIsomorphic" | "Inconclusive"
    reason: str = ""
    witness: np.ndarray | None = None

    def __bool__(self):
        return self.verdict == "Isomorphic"


def iso_test(
    M: RightModule, N: RightModule, seed: int = 0, trials: int = 200, exhaustive_limit: int = 2**20, max_trials: int = 10**6
) -> IsoResult:
    """Look for an invertible map in Hom(M, N).

    Cheap obstructions first, then ``trials`` seeded random combinations, an
    exhaustive pass when the Hom space has at most ``exhaustive_limit``
    elements, and otherwise random search up to ``max_trials``.
    """
    F = M.field
    if M.dim != N.dim:
        return IsoResult("NotIsomorphic", f"dimensions {M.dim} != {N.dim}")
    if M.dim == 0:
        return IsoResult("Isomorphic", "zero", np.zeros((0, 0), np.uint8))
    lm, ln = loewy(M), loewy(N)
    if lm != ln:
        return IsoResult("NotIsomorphic", f"Loewy profiles {lm} != {ln}")
    H = hom_space(M, N)
    k = H.shape[0]
    if k == 0:
        return IsoResult("NotIsomorphic", "Hom(M, N) = 0")
    d = M.dim
    flat = H.reshape(k, d * d)
    rng = np.random.default_rng(seed)
    for mat in H:
        if F.is_invertible(mat):
            return IsoResult("Isomorphic", "basis element invertible", mat)
    for _ in range(trials):
        c = F.random(rng, k)
        mat = F.matmul(c[None, :], flat).reshape(d, d)
        if F.is_invertible(mat):
            return IsoResult("Isomorphic", "random combination invertible", mat)
    hmm, hnn = hom_dim(M, M), hom_dim(N, N)
    if not (hmm == hnn == k):
        return IsoResult("NotIsomorphic", f"Hom dimensions {hmm}, {k}, {hnn} differ")
    if F.q**k <= exhaustive_limit:
        import itertools

        for c in itertools.product(range(F.q), repeat=k):
            mat = F.matmul(np.array([c], np.uint8), flat).reshape(d, d)
            if F.is_invertible(mat):
                return IsoResult("Isomorphic", "exhaustive search", mat)
        return IsoResult("NotIsomorphic", "no invertible homomorphism (exhaustive)")
    for _ in range(trials, max_trials):
        c = F.random(rng, k)
        mat = F.matmul(c[None, :], flat).reshape(d, d)
        if F.is_invertible(mat):
            return IsoResult("Isomorphic", "random combination invertible", mat)
    return IsoResult("Inconclusive", f"no invertible map in {max(trials, max_trials)} random trials")


def stably_isomorphic(M: RightModule, N: RightModule, seed: int = 0) -> IsoResult:
    return iso_test(strip_projectives(M), strip_projectives(N), seed)


def endo_trivial_test(M: RightModule, seed: int = 0) -> IsoResult:
    """Is M (x) M* = k (+) projective over a group algebra?"""
    T = tensor_group_modules(M, contragredient(M))
    core = strip_projectives(T)
    return iso_test(core, trivial_module(M.algebra), seed)


# ---------------------------------------------------------------------------
# induction from a subalgebra


def induce(X: RightModule, sub: Subalgebra):
    """X (x)_R A for a right R-module X.

    Returns (module, projection from X (x)_k A, indices of the kept coordinates).
    """
    A = sub.parent
    F = A.field
    R = sub.algebra
    dX, n = X.dim, A.dim
    rels = []
    for g in R.generators:
        r = sub.embed(g)[0]
        rels.append(F.msub(F.kron(X.act(g), F.eye(n)), F.kron(F.eye(dX), A.lmul(r))))
    rel = F.span(np.vstack(rels), dX * n) if rels else np.zeros((0, dX * n), np.uint8)
    proj, free = projection_matrix(F, rel, dX * n)
    acts = [F.matmul(F.kron(F.eye(dX), A.rmul(g))[free], proj) for g in A.generators]
    return RightModule(A, len(free), gen_actions=acts), proj, free


def relative_syzygy(M: RightModule, sub: Subalgebra) -> RightModule:
    """Kernel of the multiplication map M (x)_R A -> M."""
    A = sub.parent
    F = A.field
    X = restrict(M, sub)
    Ind, proj, free = induce(X, sub)
    d, n = M.dim, A.dim
    # counit on X (x) A: x_i (x) b_j -> x_i . b_j
    counit = M.basis_actions.transpose(1, 0, 2).reshape(d * n, d)
    on_quot = counit[free]
    ker = F.left_kernel(on_quot)
    K, _ = submodule(Ind, ker)
    return K
