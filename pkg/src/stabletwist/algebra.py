"""Finite-dimensional associative algebras given by structure constants.

Elements are coordinate row vectors.  ``structure[i, j]`` holds the
coordinates of ``basis_i * basis_j``.  Algebras are treated as immutable;
derived data (radical, idempotents, ...) is cached on first use.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .exactcore import FieldSpec, WorkbenchError
from . import permgroup as pg


class NotIdempotent(WorkbenchError):
    pass


class BoundTooSmall(WorkbenchError):
    pass


class NotSplit(WorkbenchError):
    pass


class Algebra:
    def __init__(self, field: FieldSpec, structure, unit, labels=None, generators=None, meta=None):
        self.field = field
        self.structure = np.asarray(structure, dtype=np.uint8)
        self.dim = self.structure.shape[0]
        self.unit = np.asarray(unit, dtype=np.uint8)
        self.labels = list(labels) if labels is not None else [f"b{i}" for i in range(self.dim)]
        self._generators = None if generators is None else [np.asarray(g, np.uint8) for g in generators]
        self.meta = dict(meta or {})
        self._idempotents = None

    def __repr__(self):
        return f"Algebra(dim={self.dim}, field={self.field!r})"

    # -- arithmetic -------------------------------------------------------------

    def basis_vector(self, i: int):
        v = np.zeros(self.dim, dtype=np.uint8)
        v[i] = 1
        return v

    def zero(self):
        return np.zeros(self.dim, dtype=np.uint8)

    @cached_property
    def _flat(self):
        return self.structure.reshape(self.dim * self.dim, self.dim)

    def mul(self, x, y):
        F = self.field
        outer = F.mul_table[np.asarray(x)[:, None], np.asarray(y)[None, :]].reshape(1, -1)
        return F.matmul(outer, self._flat)[0]

    def mul_many(self, xs, ys):
        """Row-wise products of two stacks of elements."""
        F = self.field
        xs, ys = np.atleast_2d(xs), np.atleast_2d(ys)
        outer = F.mul_table[xs[:, :, None], ys[:, None, :]].reshape(xs.shape[0], -1)
        return F.matmul(outer, self._flat)

    def lmul(self, a):
        """Matrix L with x @ L = a * x."""
        n = self.dim
        flat = self.structure.reshape(n, n * n)
        return self.field.matmul(np.asarray(a)[None, :], flat).reshape(n, n)

    def rmul(self, a):
        """Matrix R with x @ R = x * a."""
        n = self.dim
        flat = self.structure.transpose(1, 0, 2).reshape(n, n * n)
        return self.field.matmul(np.asarray(a)[None, :], flat).reshape(n, n)

    @cached_property
    def right_regular(self):
        """Stack of rmul(b_j): right_regular[j][i] = b_i * b_j."""
        return self.structure.transpose(1, 0, 2).copy()

    @cached_property
    def left_regular(self):
        """Stack of lmul(b_j): left_regular[j][i] = b_j * b_i."""
        return self.structure.copy()

    def add(self, *xs):
        out = self.zero()
        for x in xs:
            out = self.field.add_table[out, x]
        return out

    def sub(self, x, y):
        return self.field.msub(x, y)

    def scale(self, c, x):
        return self.field.mul_table[c, x]

    def power(self, x, n):
        out = self.unit.copy()
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def is_associative(self) -> bool:
        F = self.field
        n = self.dim
        # ((b_i b_j) b_k) and (b_i (b_j b_k)), both indexed (i, j, k, :)
        left = F.matmul(self.structure.reshape(n * n, n), self.structure.reshape(n, n * n)).reshape(n, n, n, n)
        right = np.empty_like(left)
        for i in range(n):
            right[i] = F.matmul(self.structure.reshape(n * n, n), self.lmul(self.basis_vector(i))).reshape(n, n, n)
        return bool(np.array_equal(left, right))

    def unit_ok(self) -> bool:
        L, R = self.lmul(self.unit), self.rmul(self.unit)
        e = self.field.eye(self.dim)
        return np.array_equal(L, e) and np.array_equal(R, e)

    def is_commutative(self) -> bool:
        return np.array_equal(self.structure, self.structure.transpose(1, 0, 2))

    def opposite(self) -> "Algebra":
        op = self.meta.get("_opposite")
        if op is None:
            op = Algebra(
                self.field,
                self.structure.transpose(1, 0, 2),
                self.unit,
                self.labels,
                self._generators,
                {"opposite_of": self},
            )
            op.meta["_opposite"] = self
            op._generators = self.generators
            if self._idempotents is not None:
                op._idempotents = self._idempotents
            self.meta["_opposite"] = op
        return op

    def format(self, x) -> str:
        terms = []
        for i in np.nonzero(x)[0]:
            c = int(x[i])
            lab = self.labels[i]
            terms.append(lab if c == 1 else f"{self.field.format(c)}*{lab}")
        return " + ".join(terms) if terms else "0"

    # -- generators and word basis ------------------------------------------------

    @property
    def generators(self):
        if self._generators is None:
            self._generators = greedy_generators(self)
        return self._generators

    @cached_property
    def word_basis(self):
        """(words, parents, change) with basis_j = sum_w change[j, w] * prod(words[w]).

        ``parents[w] = (prefix_index, generator_index)`` for w > 0; word 0 is
        the empty word (the unit).
        """
        F = self.field
        gens = self.generators
        words = [()]
        parents = [(-1, -1)]
        vals = [self.unit.copy()]
        red, _ = F.rref(np.array(vals))
        frontier = [0]
        while frontier and len(words) < self.dim:
            nxt = []
            for w in frontier:
                for gi, g in enumerate(gens):
                    v = self.mul(vals[w], g)
                    if v.any() and not F.in_span(red, v):
                        words.append(words[w] + (gi,))
                        parents.append((w, gi))
                        vals.append(v)
                        red = F.span(np.vstack([red, v]))
                        nxt.append(len(words) - 1)
                        if len(words) == self.dim:
                            break
                if len(words) == self.dim:
                    break
            frontier = nxt
        if len(words) != self.dim:
            raise WorkbenchError("generators do not generate the algebra")
        vals = np.array(vals)
        change = F.inverse(vals)  # basis = change @ vals
        return words, parents, change

    # -- structure ----------------------------------------------------------------

    @cached_property
    def radical(self):
        """RREF basis of the Jacobson radical (char-p trace descent)."""
        return jacobson_radical(self)

    @cached_property
    def radical_left_generators(self):
        """Elements g with rad = sum_g A g."""
        return _ideal_generators(self, self.radical, side="left")

    @cached_property
    def radical_right_generators(self):
        """Elements g with rad = sum_g g A."""
        return _ideal_generators(self, self.radical, side="right")

    @cached_property
    def center(self):
        F = self.field
        gens = self.generators
        blocks = [F.msub(self.rmul(g), self.lmul(g)) for g in gens]
        return F.left_kernel(np.hstack(blocks)) if blocks else F.eye(self.dim)

    def is_semisimple(self) -> bool:
        return self.radical.shape[0] == 0

    @property
    def idempotents(self):
        """Complete list of primitive orthogonal idempotents summing to 1."""
        if self._idempotents is None:
            self._idempotents = primitive_idempotents(self)
        return self._idempotents

    def set_idempotents(self, idems):
        idems = [np.asarray(e, dtype=np.uint8) for e in idems]
        check_orthogonal_decomposition(self, idems)
        self._idempotents = idems
        self.__dict__.pop("idempotent_classes", None)

    @cached_property
    def idempotent_classes(self):
        """Class index per idempotent: e_i A iso e_j A iff e_i (A/rad) e_j != 0."""
        F = self.field
        idems = self.idempotents
        rad = self.radical
        classes = [-1] * len(idems)
        nxt = 0
        for i, ei in enumerate(idems):
            if classes[i] >= 0:
                continue
            classes[i] = nxt
            for j in range(i + 1, len(idems)):
                if classes[j] >= 0:
                    continue
                ejAei = corner_space(self, idems[j], idems[i])
                if ejAei.shape[0] == 0:
                    continue
                if rad.shape[0] == 0 or not F.in_span(rad, ejAei):
                    classes[j] = classes[i]
            nxt += 1
        return classes

    @property
    def basic_idempotents(self):
        """One primitive idempotent per isomorphism class of simple modules."""
        seen, out = set(), []
        for e, c in zip(self.idempotents, self.idempotent_classes):
            if c not in seen:
                seen.add(c)
                out.append(e)
        return out

    @property
    def simple_labels(self):
        labels = self.meta.get("simple_labels")
        if labels is None:
            labels = [str(i + 1) for i in range(len(self.basic_idempotents))]
        return list(labels)

    @property
    def simple_dims(self):
        classes = self.idempotent_classes
        return [classes.count(c) for c in sorted(set(classes))]


def corner_space(A: Algebra, e, f):
    """RREF basis of e A f."""
    F = A.field
    vals = A.mul_many(np.repeat(e[None, :], A.dim, axis=0), F.eye(A.dim))
    vals = F.matmul(vals, A.rmul(f))
    return F.span(vals, A.dim)


def greedy_generators(A: Algebra):
    """Basis elements chosen greedily until they generate A (with 1)."""
    F = A.field
    chosen = []
    span = F.span(A.unit[None, :])
    order = sorted(range(A.dim), key=lambda i: (int(A.unit[i] != 0), i))
    for i in order:
        if span.shape[0] == A.dim:
            break
        b = A.basis_vector(i)
        if F.in_span(span, b):
            continue
        chosen.append(b)
        span = generated_span(A, [A.unit] + chosen)
    return chosen


def generated_span(A: Algebra, elements):
    """RREF basis of the subalgebra generated by ``elements`` (closed under products)."""
    F = A.field
    span = F.span(np.array(elements), A.dim)
    gens = np.array(elements)
    while True:
        prods = []
        for g in gens:
            prods.append(F.matmul(span, A.rmul(g)))
        new = F.span(np.vstack([span] + prods), A.dim)
        if new.shape[0] == span.shape[0]:
            return new
        span = new


def _ideal_generators(A: Algebra, ideal, side: str):
    F = A.field
    if ideal.shape[0] == 0:
        return []
    chosen, span = [], np.zeros((0, A.dim), dtype=np.uint8)
    for v in ideal:
        if span.shape[0] and F.in_span(span, v):
            continue
        chosen.append(v)
        # A v (left) or v A (right)
        mat = A.rmul(v) if side == "left" else A.lmul(v)
        span = F.span(np.vstack([span, mat]), A.dim)
        if span.shape[0] == ideal.shape[0]:
            break
    return chosen


# ---------------------------------------------------------------------------
# radical


def _prime_expand(F: FieldSpec, mats):
    """Rewrite GF(p^m) matrices (..., n, n) as GF(p) matrices (..., nm, nm)."""
    if F.m == 1:
        return np.asarray(mats, dtype=np.int64)
    m = F.m
    # multiplication-by-alpha matrices on GF(p)^m, row convention
    mult = np.zeros((F.q, m, m), dtype=np.int64)
    for a in range(F.q):
        for t in range(m):
            mono = F.from_digits([1 if i == t else 0 for i in range(m)])
            mult[a, t] = F.digits(int(F.mul_table[mono, a]))
    blocks = mult[np.asarray(mats)]  # (..., n, n, m, m)
    sh = blocks.shape
    n = sh[-3]
    return blocks.swapaxes(-3, -2).reshape(sh[:-4] + (n * m, n * m))


def jacobson_radical(A: Algebra):
    """Radical via iterated p-power trace functionals over the prime field."""
    F = A.field
    p, m, n = F.p, F.m, A.dim
    N = n * m
    # GF(p)-basis elements omega^t b_j, coordinates (j, t)
    mono = [F.from_digits([1 if i == t else 0 for i in range(m)]) for t in range(m)]
    pbasis = np.zeros((N, n), dtype=np.uint8)
    for j in range(n):
        for t in range(m):
            pbasis[j * m + t, j] = mono[t]

    def to_prime(vecs):
        d = F._digit_arr[np.asarray(vecs)]  # (k, n, m)
        return d.reshape(d.shape[0], N)

    def from_prime(rows):
        rows = np.asarray(rows).reshape(-1, n, m)
        return np.array(
            [[F.from_digits(rows[r, j]) for j in range(n)] for r in range(rows.shape[0])],
            dtype=np.uint8,
        ).reshape(-1, n)

    Fp = FieldSpec(p)
    current = Fp.eye(N)  # basis of I_{i-1} over GF(p)
    left_reg = A.left_regular  # (n, n, n)
    i = 0
    while p**i <= N and current.shape[0]:
        pk = p**i
        mod = p ** (i + 1)
        xs = from_prime(current)  # elements of I_{i-1}
        prods = []
        for x in xs:
            prods.append(A.mul_many(np.repeat(x[None, :], N, axis=0), pbasis))
        prods = np.array(prods).reshape(-1, n)  # (s*N, n)
        L = F.matmul(prods, left_reg.reshape(n, n * n)).reshape(-1, n, n)
        # float64 products stay exact: entries < p^(i+1) <= p*N
        base = (_prime_expand(F, L) % mod).astype(np.float64)
        P, e = None, pk
        while e:
            if e & 1:
                P = base.copy() if P is None else np.mod(np.matmul(P, base), mod)
            e >>= 1
            if e:
                base = np.mod(np.matmul(base, base), mod)
        tr = np.trace(P, axis1=1, axis2=2).astype(np.int64) % mod
        g = (tr // pk) % p
        G = g.reshape(current.shape[0], N).astype(np.uint8)
        ker = Fp.left_kernel(G)
        current = Fp.span(Fp.matmul(ker, current), N) if ker.shape[0] else np.zeros((0, N), np.uint8)
        i += 1
    if current.shape[0] == 0:
        return np.zeros((0, n), np.uint8)
    return F.span(from_prime(current), n)


def radical_power_series(A: Algebra):
    """[rad, rad^2, ...] down to zero."""
    F = A.field
    out = []
    cur = A.radical
    while cur.shape[0]:
        out.append(cur)
        prods = [F.matmul(cur, A.rmul(r)) for r in A.radical]
        cur = F.span(np.vstack(prods), A.dim) if prods else np.zeros((0, A.dim), np.uint8)
        if len(out) > A.dim + 1:
            raise WorkbenchError("radical is not nilpotent")
    return out


def is_two_sided_ideal(A: Algebra, space) -> bool:
    F = A.field
    for g in A.generators:
        if space.shape[0] and not F.in_span(space, F.matmul(space, A.rmul(g))):
            return False
        if space.shape[0] and not F.in_span(space, F.matmul(space, A.lmul(g))):
            return False
    return True


# ---------------------------------------------------------------------------
# polynomials over GF(q), constant term first


def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _padd(F, a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _ptrim([int(F.add_table[x, y]) for x, y in zip(a, b)])


def _pscale(F, c, a):
    return _ptrim([int(F.mul_table[c, x]) for x in a])


def _pmul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = int(F.add_table[out[i + j], F.mul_table[x, y]])
    return _ptrim(out)


def _pdivmod(F, a, b):
    a, b = _ptrim(a), _ptrim(b)
    q = [0] * max(len(a) - len(b) + 1, 1)
    inv = int(F.inv_table[b[-1]])
    r = list(a)
    while len(r) >= len(b) and r:
        c = int(F.mul_table[r[-1], inv])
        shift = len(r) - len(b)
        q[shift] = c
        r = _padd(F, r, [0] * shift + _pscale(F, int(F.neg_table[c]), b))
    return _ptrim(q), r


def _pegcd(F, a, b):
    """(g, s, t) with s a + t b = g."""
    r0, r1 = _ptrim(a), _ptrim(b)
    s0, s1, t0, t1 = [1], [], [], [1]
    while r1:
        q, r = _pdivmod(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(F, s0, _pscale(F, int(F.neg_table[1]), _pmul(F, q, s1)))
        t0, t1 = t1, _padd(F, t0, _pscale(F, int(F.neg_table[1]), _pmul(F, q, t1)))
    return r0, s0, t0


def _peval(F, poly, x):
    return int(sum_field(F, [int(F.mul_table[c, F.power(x, i)]) for i, c in enumerate(poly)]))


def sum_field(F, xs):
    out = 0
    for x in xs:
        out = int(F.add_table[out, x])
    return out


def minimal_polynomial(A: Algebra, y, unit):
    """Monic minimal polynomial of ``y`` inside an algebra with identity ``unit``."""
    F = A.field
    powers = [np.asarray(unit, np.uint8)]
    while True:
        nxt = A.mul(powers[-1], y)
        mat = np.array(powers)
        red, _ = F.rref(mat)
        if F.in_span(red, nxt):
            coeffs = F.solve_left(mat, nxt[None, :])[0]
            return [int(F.neg_table[c]) for c in coeffs] + [1]
        powers.append(nxt)


def eval_poly(A: Algebra, poly, y, unit):
    F = A.field
    out = A.zero()
    pw = np.asarray(unit, np.uint8)
    for c in poly:
        out = F.add_table[out, F.mul_table[c, pw]]
        pw = A.mul(pw, y)
    return out


# ---------------------------------------------------------------------------
# idempotents


def _corner_dims(A, e, space):
    """dim e A e and dim e S e for a two-sided ideal S (RREF)."""
    F = A.field
    eAe = corner_space(A, e, e)
    if space.shape[0] == 0:
        return eAe.shape[0], 0
    return eAe.shape[0], F.intersect(eAe, space).shape[0]


def _split_idempotent(A, e, ambient, rad, rng, is_primitive, tries=400):
    """Split ``e`` into primitive orthogonal idempotents inside ``ambient`` (RREF)."""
    F = A.field
    if is_primitive(e):
        return [e]
    # e * ambient * e
    sub = F.span(F.matmul(F.matmul(ambient, A.lmul(e)), A.rmul(e)), A.dim)
    for _ in range(tries):
        c = F.random(rng, sub.shape[0])
        y = F.matmul(c[None, :], sub)[0]
        mp = minimal_polynomial(A, y, e)
        roots = [lam for lam in range(F.q) if _peval(F, mp, lam) == 0]
        for lam in roots:
            lin = [int(F.neg_table[lam]), 1]
            fac, rest = [1], list(mp)
            while True:
                q, r = _pdivmod(F, rest, lin)
                if r:
                    break
                fac, rest = _pmul(F, fac, lin), q
            if len(rest) <= 1:
                continue
            g, s, t = _pegcd(F, fac, rest)
            ginv = int(F.inv_table[g[0]])
            # idempotent: 1 mod fac, 0 mod rest  ->  t * rest evaluated at y
            poly = _pscale(F, ginv, _pmul(F, t, rest))
            eps = eval_poly(A, poly, y, e)
            eps2 = F.msub(e, eps)
            out = []
            for part in (eps, eps2):
                out.extend(_split_idempotent(A, part, ambient, rad, rng, is_primitive, tries))
            return out
    raise NotSplit("could not split an idempotent; the algebra may not be split over its field")


def primitive_idempotents(A: Algebra, seed: int = 0):
    """Orthogonal primitive idempotents summing to 1 (deterministic by seed)."""
    F = A.field
    rad = A.radical
    rng = np.random.default_rng(seed)

    def is_prim(e):
        d, dr = _corner_dims(A, e, rad)
        return d - dr == 1

    whole = F.eye(A.dim)
    idems = _split_idempotent(A, A.unit.copy(), whole, rad, rng, is_prim)
    check_orthogonal_decomposition(A, idems)
    return idems


def blocks(A: Algebra, seed: int = 0):
    """Central primitive idempotents."""
    F = A.field
    Z = A.center
    rad = A.radical
    rng = np.random.default_rng(seed)

    def is_prim(e):
        eZ = F.span(F.matmul(Z, A.rmul(e)), A.dim)
        if rad.shape[0] == 0:
            return eZ.shape[0] == 1
        return eZ.shape[0] - F.intersect(eZ, rad).shape[0] == 1

    out = _split_idempotent(A, A.unit.copy(), Z, rad, rng, is_prim)
    return out


def check_orthogonal_decomposition(A: Algebra, idems):
    F = A.field
    total = A.zero()
    for i, e in enumerate(idems):
        total = F.add_table[total, e]
        for j, f in enumerate(idems):
            prod = A.mul(e, f)
            want = e if i == j else A.zero()
            if not np.array_equal(prod, want):
                raise NotIdempotent(f"idempotents {i}, {j} not orthogonal idempotents")
    if not np.array_equal(total, A.unit):
        raise NotIdempotent("idempotents do not sum to 1")


def symmetric_form(A: Algebra, seed: int = 0, tries: int = 500):
    """A nondegenerate functional with lambda(ab) = lambda(ba), or None."""
    F = A.field
    n = A.dim
    comm = F.msub(A.structure, A.structure.transpose(1, 0, 2)).reshape(n * n, n)
    sols = F.kernel_basis(comm)  # functionals as row vectors of values on basis
    if sols.shape[0] == 0:
        return None

    def nondeg(lam):
        gram = F.matmul(A.structure.reshape(n * n, n), lam[:, None]).reshape(n, n)
        return F.rank(gram) == n

    for lam in sols:
        if nondeg(lam):
            return lam
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        lam = F.matmul(F.random(rng, sols.shape[0])[None, :], sols)[0]
        if lam.any() and nondeg(lam):
            return lam
    return None


# ---------------------------------------------------------------------------
# builders


def group_algebra(field: FieldSpec, G: pg.PermGroup) -> Algebra:
    n = G.order
    idx = G._index
    struct = np.zeros((n, n, n), dtype=np.uint8)
    for i, g in enumerate(G.elements):
        for j, h in enumerate(G.elements):
            struct[i, j, idx[pg.mul(g, h)]] = 1
    unit = np.zeros(n, dtype=np.uint8)
    unit[idx[G.identity]] = 1
    gens = []
    for g in G.generators:
        v = np.zeros(n, dtype=np.uint8)
        v[idx[g]] = 1
        gens.append(v)
    labels = [pg.cycle_str(g) for g in G.elements]
    A = Algebra(field, struct, unit, labels, gens or None, {"group": G})
    if not gens:
        A._generators = []
    return A


def group_element(A: Algebra, g):
    G = A.meta["group"]
    v = A.zero()
    v[G.index(tuple(g))] = 1
    return v


@dataclass
class Subalgebra:
    parent: Algebra
    basis: np.ndarray  # RREF rows, elements of the parent

    @property
    def dim(self):
        return self.basis.shape[0]

    def __eq__(self, other):
        return self.parent is other.parent and np.array_equal(self.basis, other.basis)

    def contains(self, x) -> bool:
        return self.parent.field.in_span(self.basis, x)

    def coords(self, x):
        return self.parent.field.coords(self.basis, x)

    def embed(self, c):
        return self.parent.field.matmul(np.atleast_2d(c), self.basis)

    @cached_property
    def algebra(self) -> Algebra:
        A, F = self.parent, self.parent.field
        k = self.dim
        prods = A.mul_many(np.repeat(self.basis, k, axis=0), np.tile(self.basis, (k, 1)))
        struct = F.coords(self.basis, prods).reshape(k, k, k)
        unit = F.coords(self.basis, A.unit[None, :])[0]
        labels = [A.format(b) for b in self.basis]
        B = Algebra(F, struct, unit, labels, meta={"embedding": self})
        return B


def subalgebra_gen(A: Algebra, elements) -> Subalgebra:
    """Smallest unital subalgebra containing ``elements``."""
    elems = [A.unit] + [np.asarray(e, np.uint8) for e in elements]
    return Subalgebra(A, generated_span(A, elems))


def is_subalgebra(A: Algebra, basis) -> bool:
    F = A.field
    if not F.in_span(basis, A.unit):
        return False
    k = basis.shape[0]
    prods = A.mul_many(np.repeat(basis, k, axis=0), np.tile(basis, (k, 1)))
    return F.in_span(basis, prods)


class Corner(Algebra):
    """eAe with the parent embedding recorded (``embedding`` rows are elements of A)."""

    def __init__(self, parent: Algebra, e):
        F = parent.field
        e = np.asarray(e, np.uint8)
        if not np.array_equal(parent.mul(e, e), e):
            raise NotIdempotent("corner needs an idempotent")
        basis = corner_space(parent, e, e)
        k = basis.shape[0]
        prods = parent.mul_many(np.repeat(basis, k, axis=0), np.tile(basis, (k, 1)))
        struct = F.coords(basis, prods).reshape(k, k, k)
        unit = F.coords(basis, e[None, :])[0]
        super().__init__(F, struct, unit, [parent.format(b) for b in basis])
        self.parent, self.idempotent, self.embedding = parent, e, basis

    def lift(self, c):
        return self.field.matmul(np.atleast_2d(c), self.embedding)[0]

    def restrict(self, x):
        return self.field.coords(self.embedding, np.atleast_2d(x))[0]


def corner(A: Algebra, e) -> Corner:
    return Corner(A, e)


class EnvelopingAlgebra(Algebra):
    """A^op (x) B, never materialised unless small.

    Element coordinates are indexed (i, j) -> i * dim B + j for a_i (x) b_j and
    (a (x) b)(a' (x) b') = a'a (x) bb'.
    """

    def __init__(self, left: Algebra, right: Algebra):
        self.left, self.right = left, right
        self.field = left.field
        self.dim = left.dim * right.dim
        F = self.field
        self.unit = F.mul_table[left.unit[:, None], right.unit[None, :]].reshape(-1)
        self.labels = [f"{a}#{b}" for a in left.labels for b in right.labels]
        gens = [self.pure(g, right.unit) for g in left.generators]
        gens += [self.pure(left.unit, g) for g in right.generators]
        self._generators = gens
        self.meta = {}
        self._idempotents = None

    def pure(self, a, b):
        return self.field.mul_table[np.asarray(a)[:, None], np.asarray(b)[None, :]].reshape(-1)

    @cached_property
    def structure(self):
        if self.dim > 144:
            raise WorkbenchError("enveloping algebra too large to materialise")
        n = self.dim
        out = np.zeros((n, n, n), dtype=np.uint8)
        for i in range(n):
            out[i] = self.mul_many(np.repeat(self.basis_vector(i)[None, :], n, 0), np.eye(n, dtype=np.uint8))
        return out

    def mul(self, x, y):
        return self.mul_many(np.atleast_2d(x), np.atleast_2d(y))[0]

    def mul_many(self, xs, ys):
        F = self.field
        L, R = self.left, self.right
        nl, nr = L.dim, R.dim
        out = []
        for x, y in zip(np.atleast_2d(xs), np.atleast_2d(ys)):
            X = x.reshape(nl, nr)
            Y = y.reshape(nl, nr)
            # sum X_ij Y_kl (a_k a_i) (x) (b_j b_l)
            acc = np.zeros((nl, nr), dtype=np.uint8)
            for i, j in zip(*np.nonzero(X)):
                for k, l in zip(*np.nonzero(Y)):
                    c = F.mul_table[X[i, j], Y[k, l]]
                    left = L.structure[k, i]
                    right = R.structure[j, l]
                    acc = F.add_table[acc, F.mul_table[c, F.mul_table[left[:, None], right[None, :]]]]
            out.append(acc.reshape(-1))
        return np.array(out, dtype=np.uint8)

    def lmul(self, a):
        return self.mul_many(np.repeat(np.asarray(a)[None, :], self.dim, 0), np.eye(self.dim, dtype=np.uint8))

    def rmul(self, a):
        return self.mul_many(np.eye(self.dim, dtype=np.uint8), np.repeat(np.asarray(a)[None, :], self.dim, 0))


def enveloping(A: Algebra, B: Algebra | None = None) -> EnvelopingAlgebra:
    """A^op (x) B, cached on A so repeated calls return the same object."""
    B = A if B is None else B
    cache = A.meta.setdefault("_enveloping", {})
    if id(B) not in cache:
        cache[id(B)] = (B, EnvelopingAlgebra(A, B))
    return cache[id(B)][1]


def semisimple_product(field: FieldSpec, copies: int) -> Algebra:
    """k x ... x k."""
    n = copies
    struct = np.zeros((n, n, n), dtype=np.uint8)
    for i in range(n):
        struct[i, i, i] = 1
    return Algebra(field, struct, np.ones(n, dtype=np.uint8), [f"f{i + 1}" for i in range(n)])


def truncated_polynomial(field: FieldSpec, n: int, var: str = "x") -> Algebra:
    """k[X]/(X^n) with basis 1, x, ..., x^(n-1)."""
    struct = np.zeros((n, n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(n):
            if i + j < n:
                struct[i, j, i + j] = 1
    labels = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, n)]
    unit = np.zeros(n, dtype=np.uint8)
    unit[0] = 1
    gens = [np.eye(n, dtype=np.uint8)[1]] if n > 1 else []
    A = Algebra(field, struct, unit, labels, gens, {"truncated": (n, 1 if n > 1 else None)})
    return A


def quotient_algebra(A: Algebra, ideal) -> Algebra:
    """A / ideal for a two-sided ideal given as RREF rows."""
    F = A.field
    n = A.dim
    from .exactcore import pivots_of

    piv = pivots_of(ideal)
    free = np.setdiff1d(np.arange(n), piv)
    k = len(free)

    def project(v):
        v = np.atleast_2d(v)
        out = v[:, free].copy()
        if len(piv):
            out = F.msub(out, F.matmul(v[:, piv], ideal[:, free]))
        return out

    basis = np.eye(n, dtype=np.uint8)[free]
    prods = A.mul_many(np.repeat(basis, k, 0), np.tile(basis, (k, 1)))
    struct = project(prods).reshape(k, k, k)
    unit = project(A.unit)[0]
    return Algebra(F, struct, unit, [A.labels[i] for i in free])


# ---------------------------------------------------------------------------
# quivers with relations
#
# A path is a tuple of arrow indices (a1, ..., ak) standing for the product
# a1 * a2 * ... * ak; a_i * a_(i+1) is nonzero only if source(a_i) equals
# target(a_(i+1)).  The trivial path at vertex v is encoded as (-(v + 1),).


@dataclass
class QuiverPresentation:
    vertices: list
    arrows: list  # (label, source, target) with vertex names
    relations: list  # expression strings
    bound: int

    def __post_init__(self):
        self.vertices = [str(v) for v in self.vertices]
        self.arrows = [(str(l), str(s), str(t)) for l, s, t in self.arrows]
        names = [a[0] for a in self.arrows]
        if len(set(names)) != len(names):
            raise WorkbenchError("duplicate arrow labels")
        for l, s, t in self.arrows:
            if s not in self.vertices or t not in self.vertices:
                raise WorkbenchError(f"arrow {l} uses an unknown vertex")


class _Paths:
    def __init__(self, Q: QuiverPresentation):
        self.Q = Q
        self.vidx = {v: i for i, v in enumerate(Q.vertices)}
        self.src = [self.vidx[s] for _, s, _ in Q.arrows]
        self.tgt = [self.vidx[t] for _, _, t in Q.arrows]
        self.names = {l: i for i, (l, _, _) in enumerate(Q.arrows)}

    @staticmethod
    def trivial(v):
        return (-(v + 1),)

    def is_trivial(self, p):
        return p[0] < 0

    def length(self, p):
        return 0 if self.is_trivial(p) else len(p)

    def target(self, p):
        return -p[0] - 1 if self.is_trivial(p) else self.tgt[p[0]]

    def source(self, p):
        return -p[0] - 1 if self.is_trivial(p) else self.src[p[-1]]

    def compose(self, p, q):
        if self.source(p) != self.target(q):
            return None
        if self.is_trivial(p):
            return q
        if self.is_trivial(q):
            return p
        return p + q

    def label(self, p):
        if self.is_trivial(p):
            return "e" + self.Q.vertices[-p[0] - 1]
        return "*".join(self.Q.arrows[a][0] for a in p)


class _PathContext:
    """Formal combinations {path: coeff} for parsing relations."""

    def __init__(self, F, paths: _Paths):
        self.F, self.P = F, paths

    def integer(self, n):
        c = self.F.coerce(n)
        return {self.P.trivial(v): c for v in range(len(self.P.Q.vertices))} if c else {}

    def name(self, s):
        P, F = self.P, self.F
        if s in P.names:
            return {(P.names[s],): 1}
        if s.startswith("e") and s[1:] in P.vidx:
            return {P.trivial(P.vidx[s[1:]]): 1}
        if s in ("w", "ω") and F.m > 1:
            return {P.trivial(v): F.gen for v in range(len(P.Q.vertices))}
        from .expr import ParseError

        raise ParseError(f"unknown arrow {s!r}")

    def cycles(self, cyc):
        from .expr import ParseError

        raise ParseError("cycle notation not allowed in quiver relations")

    def add(self, a, b):
        out = dict(a)
        for p, c in b.items():
            out[p] = int(self.F.add_table[out.get(p, 0), c])
            if out[p] == 0:
                del out[p]
        return out

    def neg(self, a):
        return {p: int(self.F.neg_table[c]) for p, c in a.items()}

    def mul(self, a, b):
        out = {}
        for p, c in a.items():
            for q, d in b.items():
                r = self.P.compose(p, q)
                if r is None:
                    continue
                out = self.add(out, {r: int(self.F.mul_table[c, d])})
        return out


def quiver_algebra(field: FieldSpec, Q: QuiverPresentation) -> Algebra:
    """Basis of reduced paths; raises BoundTooSmall if paths of length bound+1 survive."""
    from .expr import evaluate, parse

    F = field
    P = _Paths(Q)
    ctx = _PathContext(F, P)
    rels = [evaluate(parse(r), ctx) for r in Q.relations]
    zero_paths = [next(iter(r)) for r in rels if len(r) == 1]
    mixed = [r for r in rels if len(r) > 1]
    L = Q.bound + 1
    for r in rels:
        if any(P.length(p) > Q.bound for p in r):
            raise BoundTooSmall("bound is shorter than a relation term")

    def killed(p):
        if P.is_trivial(p):
            return p in zero_paths
        for z in zero_paths:
            k = len(z)
            if not P.is_trivial(z) and k <= len(p) and any(p[i : i + k] == z for i in range(len(p) - k + 1)):
                return True
        return False

    by_len = [[P.trivial(v) for v in range(len(Q.vertices)) if not killed(P.trivial(v))]]
    for _ in range(L):
        nxt = []
        for p in by_len[-1]:
            for a in range(len(Q.arrows)):
                q = P.compose(p, (a,))
                if q is not None and not killed(q):
                    nxt.append(q)
        by_len.append(sorted(set(nxt)))
    allpaths = [p for layer in by_len for p in layer]
    # columns: longest first, then lexicographic
    order = sorted(allpaths, key=lambda p: (-P.length(p), p))
    col = {p: i for i, p in enumerate(order)}

    rows = []
    for r in mixed:
        minlen = min(P.length(p) for p in r)
        for u in allpaths:
            for w in allpaths:
                if P.length(u) + P.length(w) + minlen > L:
                    continue
                row, ok = {}, True
                for p, c in r.items():
                    q = P.compose(u, p)
                    q = None if q is None else P.compose(q, w)
                    if q is None or killed(q):
                        continue
                    if q not in col:
                        ok = False  # a surviving term is longer than the window
                        break
                    row[col[q]] = int(F.add_table[row.get(col[q], 0), c])
                if not ok:
                    continue
                if any(row.values()):
                    vec = np.zeros(len(order), dtype=np.uint8)
                    for k, c in row.items():
                        vec[k] = c
                    rows.append(vec)
    if rows:
        red, piv = F.rref(np.array(rows))
    else:
        red, piv = np.zeros((0, len(order)), np.uint8), np.zeros(0, np.int64)
    pivset = set(int(i) for i in piv)
    basis_cols = [i for i in range(len(order)) if i not in pivset]
    for i in basis_cols:
        if P.length(order[i]) >= L:
            raise BoundTooSmall(f"path {P.label(order[i])} of length {L} does not reduce")
    # basis ordered by length then lexicographic for readability
    basis_paths = sorted((order[i] for i in basis_cols), key=lambda p: (P.length(p), p))
    bidx = {p: i for i, p in enumerate(basis_paths)}
    n = len(basis_paths)
    free_cols = np.array([col[p] for p in basis_paths], dtype=np.int64)
    pivot_row = {int(c): i for i, c in enumerate(piv)}

    def normal_form(p):
        v = np.zeros(n, dtype=np.uint8)
        if p is None or killed(p):
            return v
        if P.length(p) > L:
            raise BoundTooSmall("path longer than the enumeration bound")
        if p in bidx:
            v[bidx[p]] = 1
            return v
        row = red[pivot_row[col[p]]]
        return F.neg_table[row[free_cols]]

    def right_mult(atom):
        return np.array([normal_form(P.compose(b, atom)) for b in basis_paths], dtype=np.uint8).reshape(n, n)

    R_arrow = [right_mult((a,)) for a in range(len(Q.arrows))]
    R_vertex = [right_mult(P.trivial(v)) for v in range(len(Q.vertices))]
    struct = np.zeros((n, n, n), dtype=np.uint8)
    for j, b in enumerate(basis_paths):
        if P.is_trivial(b):
            M = R_vertex[-b[0] - 1]
        else:
            M = R_arrow[b[0]]
            for a in b[1:]:
                M = F.matmul(M, R_arrow[a])
        struct[:, j, :] = M
    vert = [normal_form(P.trivial(v)) for v in range(len(Q.vertices))]
    arrows = [normal_form((a,)) for a in range(len(Q.arrows))]
    unit = np.zeros(n, dtype=np.uint8)
    for v in vert:
        unit = F.add_table[unit, v]
    A = Algebra(
        F,
        struct,
        unit,
        [P.label(p) for p in basis_paths],
        generators=vert + arrows,
        meta={"quiver": Q, "simple_labels": list(Q.vertices), "paths": basis_paths},
    )
    A._idempotents = [v for v in vert if v.any()]
    A.__dict__["radical_left_generators"] = [a for a in arrows if a.any()]
    A.meta["arrow_elements"] = {l: a for (l, _, _), a in zip(Q.arrows, arrows)}
    A.meta["vertex_elements"] = {v: e for v, e in zip(Q.vertices, vert)}
    return A


def path_length_ideal(A: Algebra, k: int = 1):
    """Span of basis paths of length >= k (the k-th power of the arrow ideal)."""
    paths = A.meta["paths"]
    rows = [A.basis_vector(i) for i, p in enumerate(paths) if p[0] >= 0 and len(p) >= k]
    return A.field.span(np.array(rows).reshape(-1, A.dim), A.dim)
