"""Periodic free bimodule resolutions of small algebras B.

A resolution is stored by generator images only.  For period q and
multiplicities m_0..m_{q-1} the differentials are

* ``delta[0][s]``: element of B, the image of the s-th generator of (B(x)B)^{m_0};
* ``delta[i][s][t]`` (0 < i < q): element of B(x)B, component t of the image
  of generator s of (B(x)B)^{m_i} in (B(x)B)^{m_{i-1}};
* ``delta[q][t]``: element of B(x)B, component t of the image of 1 in B.

Elements of B(x)B are flattened ``i * dim B + j`` arrays for b_i (x) b_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import Algebra, radical_power_series
from .bimod import Bimodule, free_bimodule_map, free_to_algebra_map, pure_tensor
from .exactcore import WorkbenchError
from .expr import element, tensor_element
from .modrep import RightModule


class NotTruncatedPoly(WorkbenchError):
    pass


class WrongCharacteristic(WorkbenchError):
    pass


class NotGroupAlgebra(WorkbenchError):
    pass


class NotCyclic(WorkbenchError):
    pass


class CharacteristicMismatch(WorkbenchError):
    pass


class ResolutionRejected(WorkbenchError):
    pass


@dataclass
class PeriodicResolution:
    algebra: Algebra
    period: int
    multiplicities: list
    differentials: list
    name: str = ""

    def matrices(self):
        """[D_q, D_{q-1}, ..., D_1, D_0] in the order they occur in the sequence."""
        B = self.algebra
        F = B.field
        q = self.period
        n = B.dim
        d0 = free_to_algebra_map(B, self.differentials[0])
        mids = [free_bimodule_map(B, self.differentials[i]) for i in range(1, q)]
        xs = self.differentials[q]
        rows = []
        for i in range(n):
            L = F.kron(B.lmul(B.basis_vector(i)), F.eye(n))
            rows.append(np.concatenate([F.matmul(np.asarray(x, np.uint8)[None, :], L)[0] for x in xs]))
        dq = np.array(rows, dtype=np.uint8)
        return [dq] + mids[::-1] + [d0]


@dataclass
class ResolutionReport:
    ok: bool
    ranks: list
    homology: list  # (position, dim) with positions q (left B), q-1..0 (free terms), -1 (right B)
    composites_zero: bool
    last_map_bimodule: bool
    problems: list = field(default_factory=list)

    def to_json(self):
        return {
            "ok": self.ok,
            "ranks": self.ranks,
            "homology": [[p, h] for p, h in self.homology],
            "composites_zero": self.composites_zero,
            "last_map_bimodule": self.last_map_bimodule,
            "problems": self.problems,
        }


def verify_resolution(res: PeriodicResolution) -> ResolutionReport:
    """Exactness of 0 -> B -> (B(x)B)^{m_{q-1}} -> ... -> (B(x)B)^{m_0} -> B -> 0."""
    B = res.algebra
    F = B.field
    n = B.dim
    q = res.period
    problems = []
    if len(res.multiplicities) != q or len(res.differentials) != q + 1:
        return ResolutionReport(False, [], [], False, False, ["shape mismatch between period and data"])
    mats = res.matrices()
    # delta_q must be a bimodule map out of B: b x = x b
    bim = True
    for g in B.generators:
        L = F.kron(B.lmul(g), F.eye(n))
        R = F.kron(F.eye(n), B.rmul(g))
        for x in res.differentials[q]:
            x = np.asarray(x, np.uint8)[None, :]
            if not np.array_equal(F.matmul(x, L), F.matmul(x, R)):
                bim = False
    if not bim:
        problems.append("image of 1 under the last map is not central in the bimodule")
    comp = True
    for f, g in zip(mats, mats[1:]):
        if F.matmul(f, g).any():
            comp = False
    if not comp:
        problems.append("a composite of consecutive maps is nonzero")
    ranks = [F.rank(m) for m in mats]
    dims = [n] + [res.multiplicities[i] * n * n for i in range(q - 1, -1, -1)] + [n]
    positions = [q] + list(range(q - 1, -1, -1)) + [-1]
    homology = []
    for k, (pos, dim) in enumerate(zip(positions, dims)):
        incoming = ranks[k - 1] if k > 0 else 0
        outgoing = ranks[k] if k < len(ranks) else 0
        h = dim - outgoing - incoming
        homology.append((pos, int(h)))
        if h:
            problems.append(f"homology of dimension {h} at position {pos}")
    ok = comp and bim and not problems
    return ResolutionReport(ok, [int(r) for r in ranks], homology, comp, bim, problems)


def accept(res: PeriodicResolution) -> PeriodicResolution:
    rep = verify_resolution(res)
    if not rep.ok:
        raise ResolutionRejected("; ".join(rep.problems))
    return res


# ---------------------------------------------------------------------------
# built-in families


def _find_nilpotent_generator(B: Algebra, x=None):
    F = B.field
    n = B.dim
    if x is None:
        series = radical_power_series(B)
        rad = series[0] if series else np.zeros((0, n), np.uint8)
        if rad.shape[0] == 0:
            raise NotTruncatedPoly("B is semisimple; no nilpotent generator")
        nxt = series[1] if len(series) > 1 else np.zeros((0, n), np.uint8)
        comp = F.complement_in(rad, nxt) if nxt.shape[0] else rad
        x = comp[0]
    x = np.asarray(x, np.uint8)
    powers = [B.unit]
    for _ in range(n - 1):
        powers.append(B.mul(powers[-1], x))
    if F.rank(np.array(powers)) != n or B.mul(powers[-1], x).any() or n < 2:
        raise NotTruncatedPoly("B is not k[X]/(X^n) on the given generator")
    return x, powers


def truncated_poly_resolution(B: Algebra, x=None) -> PeriodicResolution:
    """Period 2: delta_1(1(x)1) = 1(x)x - x(x)1, delta_2(1) = sum_{i+j=n-1} x^i (x) x^j."""
    F = B.field
    x, powers = _find_nilpotent_generator(B, x)
    n = B.dim
    one = B.unit
    d1 = F.msub(pure_tensor(B, one, x)[None, :], pure_tensor(B, x, one)[None, :])[0]
    d2 = np.zeros(n * n, np.uint8)
    for i in range(n):
        d2 = F.add_table[d2, pure_tensor(B, powers[i], powers[n - 1 - i])]
    res = PeriodicResolution(B, 2, [1, 1], [[one], [[d1]], [d2]], name=f"k[x]/(x^{n}) period 2")
    return accept(res)


def char_p_period1_resolution(B: Algebra, x=None) -> PeriodicResolution:
    """Period 1 for k[x]/(x^2) in characteristic 2: 1 -> 1(x)x + x(x)1."""
    F = B.field
    if F.p != 2:
        raise WrongCharacteristic(f"period-1 resolution needs characteristic 2, not {F.p}")
    x, _ = _find_nilpotent_generator(B, x)
    if B.dim != 2:
        raise NotTruncatedPoly("period-1 resolution needs x^2 = 0 with dim B = 2")
    one = B.unit
    d1 = F.add_table[pure_tensor(B, one, x), pure_tensor(B, x, one)]
    return accept(PeriodicResolution(B, 1, [1], [[one], [d1]], name="k[x]/(x^2) period 1"))


def _cyclic_powers(B: Algebra, g):
    F = B.field
    g = np.asarray(g, np.uint8)
    pw = [B.unit]
    while True:
        nxt = B.mul(pw[-1], g)
        if np.array_equal(nxt, B.unit):
            break
        pw.append(nxt)
        if len(pw) > B.dim:
            raise NotCyclic("element has no finite order within dim B")
    if len(pw) != B.dim or F.rank(np.array(pw)) != B.dim:
        raise NotCyclic("powers of the element do not form a basis of B")
    return pw


def _phi_image(B: Algebra, powers, coeffs):
    """Phi-transport of 1 -> sum c_i g^i: 1 (x) 1 -> sum c_i g^-i (x) g^i."""
    F = B.field
    n = len(powers)
    out = np.zeros(B.dim**2, np.uint8)
    for i, c in enumerate(coeffs):
        if c:
            t = pure_tensor(B, powers[(-i) % n], powers[i])
            out = F.add_table[out, F.mul_table[c, t]]
    return out


def group_trivial_resolution(B: Algebra, g=None, period: int | None = None) -> PeriodicResolution:
    """Bimodule resolution of B = kC_n obtained by pushing the trivial-module resolution through Phi.

    The module resolution uses multiplication by g - 1 and the norm sum g^i.
    For n = p = 2 the period-1 variant (norm only) is returned unless
    ``period=2`` is asked for.
    """
    F = B.field
    if g is None:
        G = B.meta.get("group")
        if G is None:
            raise NotGroupAlgebra("pass the generating group element")
        from .algebra import group_element

        gens = [h for h in G.elements if h != G.identity]
        cand = [h for h in gens if len(_orbit(h)) == G.order]
        if not cand:
            raise NotCyclic("group is not cyclic")
        g = group_element(B, cand[0])
    powers = _cyclic_powers(B, g)
    n = len(powers)
    if n % F.p:
        raise CharacteristicMismatch(f"characteristic {F.p} does not divide |H| = {n}")
    one = B.unit
    norm = _phi_image(B, powers, [1] * n)
    if period is None:
        period = 1 if n == 2 and F.p == 2 else 2
    if period == 1:
        if not (n == 2 and F.p == 2):
            raise CharacteristicMismatch("period 1 needs |H| = p = 2")
        return accept(PeriodicResolution(B, 1, [1], [[one], [norm]], name="kC2 period 1 via Phi"))
    gm1 = [F.neg_table[1]] + [1] + [0] * (n - 2)  # -1 + g
    d1 = _phi_image(B, powers, gm1)
    return accept(PeriodicResolution(B, 2, [1, 1], [[one], [[d1]], [norm]], name=f"kC{n} period 2 via Phi"))


def _orbit(h):
    from . import permgroup as pg

    out, x = [h], pg.mul(h, h)
    while x != h:
        out.append(x)
        x = pg.mul(x, h)
    return out


def phi_functor(X: RightModule) -> Bimodule:
    """Phi(X) = X (x)_k kH with h.(x(x)mu) = x(x)h mu and (x(x)mu).h = xh (x) mu h."""
    H = X.algebra
    G = H.meta.get("group")
    if G is None:
        raise NotGroupAlgebra("Phi needs a group algebra")
    F = H.field
    d = X.dim
    left = [F.kron(F.eye(d), H.lmul(a)) for a in H.generators]
    right = []
    for a in H.generators:
        acc = np.zeros((d * H.dim, d * H.dim), np.uint8)
        for hi in np.nonzero(a)[0]:
            hv = H.basis_vector(hi)
            term = F.kron(X.act(hv), H.rmul(hv))
            acc = F.add_table[acc, F.mul_table[a[hi], term]]
        right.append(acc)
    return Bimodule(H, H, d * H.dim, left, right, name=f"Phi({X.name or 'X'})")


def free_bimodule(B: Algebra, copies: int = 1) -> Bimodule:
    """(B (x)_k B)^copies with outer actions."""
    F = B.field
    n = B.dim
    I = F.eye(n)
    lg, rg = [], []
    for g in B.generators:
        L, R = F.kron(B.lmul(g), I), F.kron(I, B.rmul(g))
        lg.append(np.kron(np.eye(copies, dtype=np.uint8), L) if copies > 1 else L)
        rg.append(np.kron(np.eye(copies, dtype=np.uint8), R) if copies > 1 else R)
    return Bimodule(B, B, copies * n * n, lg, rg, name="B(x)B")


# ---------------------------------------------------------------------------
# declarations from input files


def resolution_from_declaration(B: Algebra, decl: dict, names=None) -> PeriodicResolution:
    """Build from ``{period, multiplicities, differentials}`` with tensor expressions.

    ``differentials[0]`` lists algebra elements, the middle entries are
    matrices of tensors (rows = source generators), the last lists tensors.
    """
    q = int(decl["period"])
    mult = [int(m) for m in decl["multiplicities"]]
    raw = decl["differentials"]
    if len(raw) != q + 1:
        raise ResolutionRejected(f"expected {q + 1} differentials, got {len(raw)}")
    d0 = [element(B, s, names) for s in raw[0]]
    mids = [[[tensor_element(B, s, names) for s in row] for row in raw[i]] for i in range(1, q)]
    last = [tensor_element(B, s, names) for s in raw[q]]
    return accept(PeriodicResolution(B, q, mult, [d0] + mids + [last], name="declared"))
