"""Triples (A, R, B), the lifted complex, the cone chain and the twist functor.

Given a symmetric algebra A with subalgebras R and B and a periodic free
bimodule resolution of B of period q, the kernel chain

    M_1 = ker(d_0),   M_{p+1} = ker([f_p; v_p]: T^{m_p} (+) P_p -> M_p)

ends in an A-A-bimodule M_q, and X -> X (x)_A M_q is the candidate stable
auto-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import permgroup as pg
from .algebra import Algebra, Corner, Subalgebra, corner, symmetric_form
from .bimod import (
    Bimodule,
    BimoduleComplex,
    NotWellDefined,
    apply_bimodule,
    bimodule_projective_cover,
    commutes_with,
    direct_sum_bimodules,
    element_map,
    embed_tensor,
    induced_bimodule,
    kernel_bimodule,
    left_right_projective,
    lift_H,
    tensor_class,
    twisted_lift,
)
from .exactcore import WorkbenchError, pivots_of
from .modrep import (
    RightModule,
    corner_module,
    factors_through_projective_space,
    hom_space,
    is_projective,
    iso_test,
    quotient,
    regular_module,
    relative_syzygy,
    restrict,
    stable_hom_dim,
    strip_projectives,
    syzygy,
    syzygy_power,
    trivial_module,
)
from .resolutions import PeriodicResolution, verify_resolution


class ComplexNotFormed(WorkbenchError):
    pass


class LiftNotFound(WorkbenchError):
    pass


class Inapplicable(WorkbenchError):
    pass


@dataclass
class Verdict:
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"ok": bool(self.ok), "detail": self.detail}


ASSUMPTION1 = ("A_symmetric", "R_symmetric", "R_nonsemisimple", "A_R_projective", "a", "b", "c")
ASSUMPTION2 = ("A_symmetric", "R_symmetric", "R_nonsemisimple", "A_R_projective", "a_prime", "b", "c", "d", "e")


@dataclass
class TripleReport:
    conditions: dict
    semidirect: Verdict | None = None
    extra: dict = field(default_factory=dict)

    def passes(self, names) -> bool:
        return all(self.conditions[n].ok for n in names if n in self.conditions) and all(
            n in self.conditions for n in names
        )

    @property
    def assumption1(self) -> bool:
        return self.passes(ASSUMPTION1)

    @property
    def assumption2(self) -> bool:
        return self.passes(ASSUMPTION2)

    @property
    def level(self):
        if self.assumption1:
            return 1
        if self.assumption2:
            return 2
        return "fail"

    def failed(self, names=None):
        names = names or list(self.conditions)
        return [n for n in names if n in self.conditions and not self.conditions[n].ok]

    def to_json(self):
        out = {
            "conditions": {k: v.to_json() for k, v in self.conditions.items()},
            "assumption1": self.assumption1,
            "assumption2": self.assumption2,
            "level": self.level,
        }
        if self.semidirect is not None:
            out["semidirect"] = self.semidirect.to_json()
        out.update(self.extra)
        return out


# ---------------------------------------------------------------------------
# individual conditions


def _span_products(A: Algebra, xs, ys):
    F = A.field
    if len(xs) == 0 or len(ys) == 0:
        return np.zeros((0, A.dim), np.uint8)
    k, l = len(xs), len(ys)
    prods = A.mul_many(np.repeat(xs, l, axis=0), np.tile(ys, (k, 1)))
    return F.span(prods, A.dim)


def condition_a(A: Algebra, R: Subalgebra, B: Subalgebra) -> Verdict:
    F = A.field
    for b in B.basis:
        for r in R.basis:
            if not np.array_equal(A.mul(b, r), A.mul(r, b)):
                return Verdict(False, f"{A.format(b)} does not commute with {A.format(r)}")
    return Verdict(True, "every basis element of B commutes with every basis element of R")


def radical_in_parent(R: Subalgebra):
    Ralg = R.algebra
    if Ralg.radical.shape[0] == 0:
        return np.zeros((0, R.parent.dim), np.uint8)
    return R.embed(Ralg.radical)


def condition_a_prime(A: Algebra, R: Subalgebra, B: Subalgebra) -> Verdict:
    rad = radical_in_parent(R)
    left = _span_products(A, rad, B.basis)
    right = _span_products(A, B.basis, rad)
    if left.shape == right.shape and np.array_equal(left, right):
        return Verdict(True, f"(rad R)B = B(rad R), dimension {left.shape[0]}")
    return Verdict(False, f"(rad R)B has dimension {left.shape[0]}, B(rad R) has {right.shape[0]}, spans differ")


def _top_module(R: Subalgebra) -> tuple[RightModule, np.ndarray]:
    """R / rad R as a right R-module, with lifts of its basis into A."""
    Ralg = R.algebra
    reg = regular_module(Ralg)
    Q, proj = quotient(reg, Ralg.radical)
    free = np.setdiff1d(np.arange(Ralg.dim), pivots_of(Ralg.radical)) if Ralg.radical.shape[0] else np.arange(Ralg.dim)
    lifts = R.basis[free]
    return Q, lifts


def tensor_top(R: Subalgebra, B: Subalgebra) -> tuple[RightModule, np.ndarray]:
    """B (x)_k (R/rad R) as a right R-module and the lifted elements b_k s_l of A."""
    F = R.parent.field
    Q, lifts = _top_module(R)
    nB = B.dim
    acts = [F.kron(F.eye(nB), g) for g in Q.gen_actions]
    X = RightModule(R.algebra, nB * Q.dim, gen_actions=acts, name="B(x)R/radR")
    A = R.parent
    elems = np.array([A.mul(b, s) for b in B.basis for s in lifts], dtype=np.uint8)
    return X, elems


def top_quotient(A: Algebra, R: Subalgebra) -> tuple[RightModule, np.ndarray]:
    """T_A = A/(rad R)A with its projection from A."""
    F = A.field
    rad = radical_in_parent(R)
    if rad.shape[0]:
        sub = F.span(np.vstack([A.lmul(r) for r in rad]), A.dim)
    else:
        sub = np.zeros((0, A.dim), np.uint8)
    T, proj = quotient(regular_module(A), sub)
    T.name = "A/(radR)A"
    return T, proj


def _stable_inverse_exists(F, phi, hom_basis, proj_space, dim):
    """Is some sum c_k (phi o g_k) + p equal to the identity?  (row convention phi @ g)"""
    rows = []
    for g in hom_basis:
        rows.append(F.matmul(phi, g).reshape(-1))
    if proj_space.shape[0]:
        rows.extend(list(proj_space))
    if not rows:
        return dim == 0
    target = F.eye(dim).reshape(1, -1)
    return F.in_span(F.span(np.array(rows, np.uint8), dim * dim), target)


def condition_b(A: Algebra, R: Subalgebra, B: Subalgebra) -> tuple[Verdict, dict]:
    """Is phi: B (x) R/radR -> A/(radR)A, b (x) s -> bs, an isomorphism in the stable category of R?"""
    F = A.field
    X, elems = tensor_top(R, B)
    T, proj = top_quotient(A, R)
    Y = restrict(T, R)
    phi = F.matmul(elems, proj)
    info = {"source_dim": X.dim, "target_dim": Y.dim}
    for gx, gy in zip(X.gen_actions, Y.gen_actions):
        if not np.array_equal(F.matmul(gx, phi), F.matmul(phi, gy)):
            return Verdict(False, "phi is not an R-homomorphism"), info
    Hyx = hom_space(Y, X)
    right_inv = _stable_inverse_exists(F, phi, Hyx, factors_through_projective_space(X, X), X.dim)
    left_rows = [F.matmul(g, phi) for g in Hyx]
    pyy = factors_through_projective_space(Y, Y)
    rows = [r.reshape(-1) for r in left_rows] + list(pyy)
    left_inv = bool(rows) and F.in_span(F.span(np.array(rows, np.uint8), Y.dim * Y.dim), F.eye(Y.dim).reshape(1, -1))
    if Y.dim == 0:
        left_inv = True
    info.update(stable_right_inverse=bool(right_inv), stable_left_inverse=bool(left_inv))
    if right_inv and left_inv:
        return Verdict(True, f"phi ({X.dim} -> {Y.dim}) has stable inverses on both sides"), info
    return Verdict(False, f"phi ({X.dim} -> {Y.dim}) is not a stable isomorphism"), info


def semidirect_verdict(G: pg.PermGroup, N: pg.PermGroup, H: pg.PermGroup) -> Verdict:
    res = pg.semidirect_check(G, N)
    if isinstance(res, pg.SemidirectFailure):
        return Verdict(False, f"{res.condition}: {res.detail}")
    NG = pg.normalizer(G, N)
    hs, ns = set(H.elements), set(N.elements)
    ok = hs <= set(NG.elements) and len(hs & ns) == 1 and H.order * N.order == NG.order
    if not ok:
        return Verdict(False, "declared B group is not a complement of N in its normalizer")
    return Verdict(True, f"N_G(N) = N x| H with |N_G(N)| = {NG.order}; off-normalizer double cosets have size {N.order ** 2}")


# ---------------------------------------------------------------------------
# complex (3) and the cone chain


def _res_images_in_A(B: Subalgebra, res: PeriodicResolution):
    return [B.embed(y)[0] for y in res.differentials[0]]


def build_complex(A: Algebra, R: Subalgebra, B: Subalgebra, res: PeriodicResolution, T: Bimodule | None = None, twisted: bool = False) -> BimoduleComplex:
    """Lift the resolution of B to (A(x)_R A)^{m_{q-1}} -> ... -> (A(x)_R A)^{m_0} -> A."""
    F = A.field
    if res.algebra is not B.algebra:
        raise ComplexNotFormed("resolution is not over the declared B")
    T = induced_bimodule(A, R) if T is None else T
    q = res.period
    m = res.multiplicities
    terms = [direct_sum_bimodules([T] * m[i]) if m[i] > 1 else T for i in range(q)]
    d0 = element_map(T, _res_images_in_A(B, res))
    if F.rank(d0) != A.dim:
        raise ComplexNotFormed("d0 is not surjective")
    diffs, squares = [], []
    lift = twisted_lift if twisted else lift_H
    for i in range(1, q):
        try:
            L = lift(T, B, res.differentials[i])
        except NotWellDefined as exc:
            raise ComplexNotFormed(f"lift of delta_{i} failed: {exc}") from exc
        diffs.append(L.matrix)
        squares.append(L.square_commutes)
    x = np.concatenate([tensor_class(T, embed_tensor(B, t)) for t in res.differentials[q]])
    cx = BimoduleComplex(terms, diffs, augmentation=d0)
    last = diffs[-1] if diffs else d0
    cx.extra.update(
        induced=T,
        x=x,
        squares_commute=all(squares),
        x_in_kernel=not F.matmul(x[None, :], last).any(),
        composites_zero=cx.composites_zero(),
    )
    if not cx.extra["composites_zero"]:
        raise ComplexNotFormed("consecutive composites are nonzero")
    return cx


@dataclass
class ConeStep:
    p: int
    f: np.ndarray  # T^{m_p} -> M_p with f @ i_p = d_p
    cover_dim: int
    kernel_dim: int
    exact: bool


@dataclass
class TwistData:
    A: Algebra
    R: Subalgebra
    B: Subalgebra
    resolution: PeriodicResolution
    complex: BimoduleComplex
    chain: list  # M_1..M_q
    inclusions: list  # i_1..i_q as RREF bases
    steps: list
    report: TripleReport | None = None

    @property
    def Mq(self) -> Bimodule:
        return self.chain[-1]

    @property
    def q(self) -> int:
        return self.resolution.period


def multiple_cone(cx: BimoduleComplex, A: Algebra, R: Subalgebra, B: Subalgebra, res: PeriodicResolution) -> TwistData:
    F = A.field
    T0 = cx.terms[0]
    M, inc = kernel_bimodule(T0, cx.augmentation)
    if M.dim != T0.dim - A.dim:
        raise ComplexNotFormed("0 -> M_1 -> T -> A -> 0 is not exact")
    chain, incs, steps = [M], [inc], []
    for p in range(1, res.period):
        d = cx.differentials[p - 1]
        f = d[:, pivots_of(inc)] if inc.shape[0] else np.zeros((d.shape[0], 0), np.uint8)
        if not np.array_equal(F.matmul(f, inc), d):
            raise LiftNotFound(f"d_{p} does not factor through M_{p}")
        cov = bimodule_projective_cover(M)
        src = direct_sum_bimodules([cx.terms[p], cov.module]) if cov.module.dim else cx.terms[p]
        comb = np.vstack([f, cov.map]) if cov.module.dim else f
        surj = F.rank(comb) == M.dim
        Mn, incn = kernel_bimodule(src, comb)
        exact = surj and Mn.dim == src.dim - M.dim
        steps.append(ConeStep(p, f, cov.module.dim, Mn.dim, bool(exact)))
        if not exact:
            raise ComplexNotFormed(f"cone step {p} is not exact")
        M, inc = Mn, incn
        chain.append(M)
        incs.append(inc)
    return TwistData(A, R, B, res, cx, chain, incs, steps)


# ---------------------------------------------------------------------------
# full check


def check_triple(A: Algebra, R: Subalgebra, B: Subalgebra, res: PeriodicResolution, groups=None, seed: int = 0):
    """Verdicts for both assumptions; returns (TripleReport, TwistData or None)."""
    cond = {}
    cond["A_symmetric"] = Verdict(symmetric_form(A, seed) is not None, "symmetrizing form search on A")
    Ralg = R.algebra
    semisimple = Ralg.radical.shape[0] == 0
    cond["R_nonsemisimple"] = Verdict(not semisimple, "R semisimple" if semisimple else f"dim rad R = {Ralg.radical.shape[0]}")
    cond["R_symmetric"] = Verdict(symmetric_form(Ralg, seed) is not None, "symmetrizing form search on R")
    AR = restrict(regular_module(A), R)
    cond["A_R_projective"] = Verdict(bool(is_projective(AR)) if not semisimple else True, "A restricted to R")
    cond["a"] = condition_a(A, R, B)
    cond["a_prime"] = condition_a_prime(A, R, B)
    extra = {}
    if cond["a_prime"].ok and not semisimple:
        cond["b"], extra["b_info"] = condition_b(A, R, B)
    else:
        cond["b"] = Verdict(False, "not evaluated: needs (rad R)B = B(rad R) and R non-semisimple")
    rep = verify_resolution(res) if res.algebra is B.algebra else None
    if rep is None:
        cond["c"] = Verdict(False, "resolution is not over B")
    else:
        cond["c"] = Verdict(rep.ok, "; ".join(rep.problems) or f"exact, ranks {rep.ranks}")
        extra["resolution"] = rep.to_json()
    data = None
    pre = ("A_symmetric", "R_symmetric", "R_nonsemisimple", "A_R_projective", "a_prime", "b", "c")
    if all(cond[n].ok for n in pre):
        try:
            T = induced_bimodule(A, R)
            cx = build_complex(A, R, B, res, T, twisted=not cond["a"].ok)
            x = cx.extra["x"]
            dT = T.dim
            m_last = res.multiplicities[-1]
            comm = all(commutes_with(T, R, x[t * dT : (t + 1) * dT]) for t in range(m_last))
            cond["d"] = Verdict(comm, "image of delta_q(1) commutes with R" if comm else "r x != x r for some r in R")
            ok_e = cx.extra["squares_commute"] and cx.extra["composites_zero"] and cx.extra["x_in_kernel"]
            cond["e"] = Verdict(ok_e, "lifted complex built; squares commute" if ok_e else "lifted complex fails a square or composite")
            extra["induced_dim"] = dT
            if ok_e and comm:
                data = multiple_cone(cx, A, R, B, res)
        except (ComplexNotFormed, LiftNotFound, NotWellDefined) as exc:
            cond.setdefault("d", Verdict(False, str(exc)))
            cond["e"] = Verdict(False, str(exc))
    else:
        cond["d"] = Verdict(False, "not evaluated: " + ", ".join(n for n in pre if not cond[n].ok) + " failed")
        cond["e"] = Verdict(False, "not evaluated")
    semi = semidirect_verdict(*groups) if groups is not None else None
    report = TripleReport(cond, semi, extra)
    if data is not None:
        data.report = report
    return report, data


def build_twist(A, R, B, res, groups=None, seed: int = 0) -> TwistData:
    report, data = check_triple(A, R, B, res, groups, seed)
    if data is None:
        raise ComplexNotFormed("triple fails: " + ", ".join(report.failed()))
    return data


# ---------------------------------------------------------------------------
# applying and verifying


def apply_twist(X: RightModule, T: TwistData) -> RightModule:
    return strip_projectives(apply_bimodule(X, T.Mq))


def transport(X: RightModule, C: Corner) -> RightModule:
    """Morita transport X -> X f to the corner algebra."""
    return corner_module(X, C)[0]


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def to_json(self):
        return {"name": self.name, "ok": bool(self.ok), "detail": self.detail}


def verify_twist(T: TwistData, corpus: dict, seed: int = 0) -> list:
    """Evidence that -(x)_A M_q behaves like a stable auto-equivalence on ``corpus``."""
    A, R = T.A, T.R
    out = []
    out.append(Check("Mq_left_right_projective", left_right_projective(T.Mq), f"dim M_q = {T.Mq.dim}"))
    exact = all(s.exact for s in T.steps)
    out.append(Check("cone_chain_exact", exact, f"{1 + len(T.steps)} kernel sequences"))
    TA, _ = top_quotient(A, R)
    lhs, rhs = apply_twist(TA, T), strip_projectives(TA)
    r = iso_test(lhs, rhs, seed)
    out.append(Check("top_quotient_fixed", bool(r), f"strip(T (x) M_q) vs strip(T): {r.verdict} ({r.reason})"))
    images = {}
    for name, X in corpus.items():
        images[name] = apply_twist(X, T)
    for name, X in corpus.items():
        if X.dim == 0:
            continue
        if is_projective(restrict(X, R)):
            r = iso_test(images[name], strip_projectives(syzygy_power(X, T.q)), seed)
            out.append(Check(f"rho_vs_syzygy[{name}]", bool(r), r.verdict))
        if is_projective(X):
            out.append(Check(f"rho_kills_projective[{name}]", images[name].dim == 0, f"dim {images[name].dim}"))
    names = list(corpus)
    for a in names:
        for b in names:
            s1 = stable_hom_dim(corpus[a], corpus[b])
            s2 = stable_hom_dim(images[a], images[b])
            out.append(Check(f"stable_hom[{a},{b}]", s1 == s2, f"{s1} -> {s2}"))
    for name, X in corpus.items():
        if X.dim == 0 or is_projective(X):
            continue
        left = apply_twist(syzygy(X), T)
        right = strip_projectives(syzygy(apply_bimodule(X, T.Mq)))
        r = iso_test(left, right, seed)
        out.append(Check(f"commutes_with_omega[{name}]", bool(r), r.verdict))
    return out


@dataclass
class RelativeSyzygyReport:
    verdict: str
    dims: dict

    def to_json(self):
        return {"verdict": self.verdict, "dims": self.dims}


def rho_trivial_vs_relative_syzygy(T: TwistData, seed: int = 0) -> RelativeSyzygyReport:
    """Compare rho(k) with the q-th relative syzygy of k with respect to R."""
    A = T.A
    if "group" not in A.meta:
        raise Inapplicable("needs a group algebra")
    k = trivial_module(A)
    raw = apply_bimodule(k, T.Mq)
    rho = strip_projectives(raw)
    rel = k
    for _ in range(T.q):
        rel = relative_syzygy(rel, T.R)
    rel_s = strip_projectives(rel)
    r = iso_test(rho, rel_s, seed)
    dims = {"k_tensor_Mq": raw.dim, "rho_k": rho.dim, "relative_syzygy": rel.dim, "relative_syzygy_stripped": rel_s.dim}
    return RelativeSyzygyReport(r.verdict, dims)


def top_end_dimensions(T: TwistData) -> dict:
    """dim B * dim stable End_R(R/radR) against dim stable End_A(A/(radR)A)."""
    Q, _ = _top_module(T.R)
    TA, _ = top_quotient(T.A, T.R)
    return {"B_times_stable_end_top": T.B.dim * stable_hom_dim(Q, Q), "stable_end_TA": stable_hom_dim(TA, TA)}
