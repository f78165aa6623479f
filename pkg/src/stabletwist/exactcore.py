"""Finite fields GF(p^m) and dense exact linear algebra over them.

Field elements are encoded as small integers ``0 <= x < q``: the base-p digits
of ``x`` are the coefficients (constant term first) of a polynomial reduced
modulo the defining polynomial.  Matrices are plain ``uint8`` numpy arrays.

Row reduction runs in numba kernels.  GF(2) rows are bit-packed into uint64
words; GF(4) uses two packed bit-planes; every other field goes through a
table-driven byte kernel.  Products use BLAS on the base-p digit planes.
"""

from __future__ import annotations

from itertools import product

import numba
import numpy as np


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class NotPrime(WorkbenchError):
    pass


class Reducible(WorkbenchError):
    pass


class NoSolution(WorkbenchError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_divides(divisor, poly, p):
    """True when ``divisor`` divides ``poly`` over GF(p) (constant term first)."""
    rem = list(poly)
    dd = len(divisor) - 1
    lead_inv = pow(divisor[-1], p - 2, p)
    for shift in range(len(rem) - 1 - dd, -1, -1):
        c = rem[shift + dd] * lead_inv % p
        if c:
            for i, d in enumerate(divisor):
                rem[shift + i] = (rem[shift + i] - c * d) % p
    return not any(rem)


# ---------------------------------------------------------------------------
# numba kernels


@numba.njit(cache=True)
def _rref_gf2(words, ncols):
    nrows, nwords = words.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        piv = -1
        for r in range(rank, nrows):
            if words[r, w] & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(w, nwords):
                t = words[piv, k]
                words[piv, k] = words[rank, k]
                words[rank, k] = t
        for r in range(nrows):
            if r != rank and (words[r, w] & bit):
                for k in range(w, nwords):
                    words[r, k] ^= words[rank, k]
        pivots[rank] = c
        rank += 1
    return pivots[:rank]


@numba.njit(cache=True)
def _gf4_get(lo, hi, r, w, bit):
    v = 0
    if lo[r, w] & bit:
        v |= 1
    if hi[r, w] & bit:
        v |= 2
    return v


@numba.njit(cache=True)
def _rref_gf4(lo, hi, ncols):
    # element a0 + a1*w with w^2 = w + 1; lo holds a0 bits, hi holds a1 bits
    nrows, nwords = lo.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        w = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        piv = -1
        for r in range(rank, nrows):
            if (lo[r, w] | hi[r, w]) & bit:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(w, nwords):
                t = lo[piv, k]
                lo[piv, k] = lo[rank, k]
                lo[rank, k] = t
                t = hi[piv, k]
                hi[piv, k] = hi[rank, k]
                hi[rank, k] = t
        v = _gf4_get(lo, hi, rank, w, bit)
        # scale pivot row by v^-1 (1 -> 1, w -> w^2, w^2 -> w)
        if v == 2:
            for k in range(w, nwords):
                a, b = lo[rank, k], hi[rank, k]
                lo[rank, k] = a ^ b
                hi[rank, k] = a
        elif v == 3:
            for k in range(w, nwords):
                a, b = lo[rank, k], hi[rank, k]
                lo[rank, k] = b
                hi[rank, k] = a ^ b
        for r in range(nrows):
            if r == rank:
                continue
            v = _gf4_get(lo, hi, r, w, bit)
            if v == 0:
                continue
            if v == 1:
                for k in range(w, nwords):
                    lo[r, k] ^= lo[rank, k]
                    hi[r, k] ^= hi[rank, k]
            elif v == 2:
                for k in range(w, nwords):
                    a, b = lo[rank, k], hi[rank, k]
                    lo[r, k] ^= b
                    hi[r, k] ^= a ^ b
            else:
                for k in range(w, nwords):
                    a, b = lo[rank, k], hi[rank, k]
                    lo[r, k] ^= a ^ b
                    hi[r, k] ^= a
        pivots[rank] = c
        rank += 1
    return pivots[:rank]


@numba.njit(cache=True)
def _rref_table(m, add, mul, neg, inv):
    nrows, ncols = m.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    rank = 0
    for c in range(ncols):
        if rank == nrows:
            break
        piv = -1
        for r in range(rank, nrows):
            if m[r, c] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(c, ncols):
                t = m[piv, k]
                m[piv, k] = m[rank, k]
                m[rank, k] = t
        s = inv[m[rank, c]]
        if s != 1:
            for k in range(c, ncols):
                m[rank, k] = mul[s, m[rank, k]]
        for r in range(nrows):
            if r != rank and m[r, c] != 0:
                f = neg[m[r, c]]
                for k in range(c, ncols):
                    if m[rank, k] != 0:
                        m[r, k] = add[m[r, k], mul[f, m[rank, k]]]
        pivots[rank] = c
        rank += 1
    return pivots[:rank]


def _pack(bits: np.ndarray) -> np.ndarray:
    rows, cols = bits.shape
    nbytes = max(1, (cols + 63) // 64) * 8
    packed = np.zeros((rows, nbytes), dtype=np.uint8)
    if cols:
        packed[:, : (cols + 7) // 8] = np.packbits(bits, axis=1, bitorder="little")
    return packed.view(np.uint64)


def _unpack(words: np.ndarray, cols: int) -> np.ndarray:
    if words.shape[0] == 0:
        return np.zeros((0, cols), dtype=np.uint8)
    raw = np.ascontiguousarray(words).view(np.uint8)
    return np.unpackbits(raw, axis=1, bitorder="little", count=cols)


# ---------------------------------------------------------------------------


class FieldSpec:
    """The finite field GF(p^m) with defining polynomial ``poly``.

    Besides element arithmetic the field object carries every dense linear
    algebra routine used by the workbench, so a matrix never needs to know
    which field it lives over.
    """

    def __init__(self, p: int, m: int = 1, poly=None):
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if poly is None:
            poly = [0, 1] if m == 1 else _default_poly(p, m)
        poly = [int(c) % p for c in poly]
        if len(poly) != m + 1 or poly[-1] != 1:
            raise ValueError(f"poly must be monic of degree {m}")
        if m > 1:
            for d in range(1, m // 2 + 1):
                for tail in product(range(p), repeat=d):
                    if _poly_divides(list(tail) + [1], poly, p):
                        raise Reducible(f"polynomial {poly} has a factor of degree {d}")
        self.p, self.m, self.poly = p, m, tuple(poly)
        self.q = p**m
        self._build_tables()

    def __repr__(self):
        if self.m == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.m})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.m, self.poly) == (
            other.p,
            other.m,
            other.poly,
        )

    def __hash__(self):
        return hash((self.p, self.m, self.poly))

    def to_dict(self):
        return {"p": self.p, "m": self.m, "poly": list(self.poly)}

    # -- tables ------------------------------------------------------------

    def digits(self, x: int):
        return [(x // self.p**i) % self.p for i in range(self.m)]

    def from_digits(self, ds) -> int:
        return sum(int(d) % self.p * self.p**i for i, d in enumerate(ds))

    def _polymul(self, a, b):
        p, m = self.p, self.m
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k]
            if c:
                for i in range(m + 1):
                    prod[k - m + i] = (prod[k - m + i] - c * self.poly[i]) % p
        return prod[:m]

    def _build_tables(self):
        q = self.q
        dig = [self.digits(x) for x in range(q)]
        add = np.zeros((q, q), dtype=np.uint8)
        mul = np.zeros((q, q), dtype=np.uint8)
        for a in range(q):
            for b in range(q):
                add[a, b] = self.from_digits([x + y for x, y in zip(dig[a], dig[b])])
                mul[a, b] = self.from_digits(self._polymul(dig[a], dig[b]))
        self.add_table, self.mul_table = add, mul
        self.neg_table = np.array(
            [self.from_digits([-d for d in dig[a]]) for a in range(q)], dtype=np.uint8
        )
        inv = np.zeros(q, dtype=np.uint8)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv_table = inv
        # digit planes for BLAS products and the reduction of X^k, k < 2m-1
        self._digit_arr = np.array(dig, dtype=np.int64).reshape(q, self.m)
        red = []
        for k in range(2 * self.m - 1):
            mono = [0] * (2 * self.m - 1)
            mono[k] = 1
            red.append(self._reduce_poly(mono))
        self._xpow = np.array(red, dtype=np.int64)

    def _reduce_poly(self, coeffs):
        prod = list(coeffs)
        m, p = self.m, self.p
        for k in range(len(prod) - 1, m - 1, -1):
            c = prod[k]
            if c:
                for i in range(m + 1):
                    prod[k - m + i] = (prod[k - m + i] - c * self.poly[i]) % p
        return prod[:m]

    # -- scalars ------------------------------------------------------------

    @property
    def elements(self):
        return list(range(self.q))

    @property
    def gen(self) -> int:
        """The class of X (for m = 1 this is 0, matching the X - 0 convention)."""
        return self.p if self.m > 1 else 0

    def coerce(self, n: int) -> int:
        """Image of the integer ``n`` in the prime field."""
        return int(n) % self.p

    def add(self, a, b):
        return self.add_table[a, b]

    def sub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    def mul(self, a, b):
        return self.mul_table[a, b]

    def neg(self, a):
        return self.neg_table[a]

    def inv(self, a):
        if np.any(np.asarray(a) == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.inv_table[a]

    def power(self, a: int, n: int) -> int:
        r = 1
        for _ in range(n):
            r = int(self.mul_table[r, a])
        return r

    # -- arrays ---------------------------------------------------------------

    def zeros(self, *shape):
        return np.zeros(shape, dtype=np.uint8)

    def eye(self, n):
        return np.eye(n, dtype=np.uint8)

    def asarray(self, a):
        arr = np.asarray(a, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise ValueError(f"entries outside 0..{self.q - 1}")
        return arr.astype(np.uint8)

    def scale(self, c, a):
        return self.mul_table[c, a]

    def random(self, rng, shape):
        return rng.integers(0, self.q, size=shape, dtype=np.uint8)

    def _planes(self, a):
        return np.moveaxis(self._digit_arr[a], -1, 0)

    def _encode(self, planes):
        planes = np.asarray(planes) % self.p
        out = np.zeros(planes.shape[1:], dtype=np.int64)
        for i in range(self.m):
            out += planes[i] * self.p**i
        return out.astype(np.uint8)

    def matmul(self, a, b):
        """Matrix product over the field (2-D or batched, numpy semantics)."""
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        inner = a.shape[-1]
        bound = max(inner, 1) * (self.p - 1) ** 2 * self.m
        ftype = np.float32 if bound < 2**24 else np.float64
        if self.m == 1:
            prod = np.matmul(a.astype(ftype), b.astype(ftype))
            return np.mod(prod, self.p).astype(np.uint8)
        pa = self._planes(a).astype(ftype)
        pb = self._planes(b).astype(ftype)
        m = self.m
        shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (a.shape[-2], b.shape[-1])
        acc = np.zeros((2 * m - 1,) + shape, dtype=np.int64)
        for i in range(m):
            for j in range(m):
                acc[i + j] += np.mod(np.matmul(pa[i], pb[j]), self.p).astype(np.int64)
        out = np.zeros((m,) + shape, dtype=np.int64)
        for k in range(2 * m - 1):
            for t in range(m):
                c = self._xpow[k, t]
                if c:
                    out[t] += c * acc[k]
        return self._encode(out)

    def lincomb(self, coeffs, mats):
        """sum_i coeffs[i] * mats[i] for a stack ``mats`` of shape (n, ...)."""
        coeffs = np.asarray(coeffs, dtype=np.uint8)
        mats = np.asarray(mats, dtype=np.uint8)
        flat = mats.reshape(mats.shape[0], -1)
        return self.matmul(coeffs[None, :], flat).reshape(mats.shape[1:])

    def kron(self, a, b):
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        out = self.mul_table[a[:, None, :, None], b[None, :, None, :]]
        return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])

    def madd(self, a, b):
        return self.add_table[a, b]

    def msub(self, a, b):
        return self.add_table[a, self.neg_table[b]]

    # -- row reduction ------------------------------------------------------------

    def rref(self, m):
        """Reduced row echelon form; returns (nonzero rows, pivot columns).

        Pivots are chosen at the first nonzero column, first nonzero row.
        """
        m = np.ascontiguousarray(m, dtype=np.uint8)
        rows, cols = m.shape
        if rows == 0 or cols == 0:
            return np.zeros((0, cols), dtype=np.uint8), np.zeros(0, dtype=np.int64)
        if self.q == 2:
            words = _pack(m)
            piv = _rref_gf2(words, cols)
            red = _unpack(words[: len(piv)], cols)
        elif self.q == 4 and self.p == 2:
            lo = _pack(m & 1)
            hi = _pack(m >> 1)
            piv = _rref_gf4(lo, hi, cols)
            red = _unpack(lo[: len(piv)], cols) | (_unpack(hi[: len(piv)], cols) << 1)
        else:
            work = m.copy()
            piv = _rref_table(work, self.add_table, self.mul_table, self.neg_table, self.inv_table)
            red = work[: len(piv)]
        return np.ascontiguousarray(red, dtype=np.uint8), np.asarray(piv, dtype=np.int64)

    def rank(self, m) -> int:
        return len(self.rref(m)[1])

    def kernel_basis(self, m):
        """Rows spanning the right null space {v : m v^T = 0}, in RREF."""
        m = np.asarray(m, dtype=np.uint8)
        cols = m.shape[1]
        red, piv = self.rref(m)
        free = np.setdiff1d(np.arange(cols), piv)
        basis = np.zeros((len(free), cols), dtype=np.uint8)
        if len(free) == 0:
            return basis
        basis[np.arange(len(free)), free] = 1
        if len(piv):
            basis[:, piv] = self.neg_table[red[:, free].T]
        return self.rref(basis)[0]

    def left_kernel(self, m):
        """Rows spanning {v : v m = 0}."""
        return self.kernel_basis(np.asarray(m, dtype=np.uint8).T)

    def solve_right(self, a, b):
        """A particular X with A X = B; raises NoSolution."""
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        if a.shape[0] != b.shape[0]:
            raise ValueError("row counts differ")
        n = a.shape[1]
        red, piv = self.rref(np.hstack([a, b]))
        if np.any(piv >= n):
            raise NoSolution("right-hand side outside the column space")
        x = np.zeros((n, b.shape[1]), dtype=np.uint8)
        x[piv] = red[:, n:]
        return x

    def solve_left(self, a, b):
        """A particular X with X A = B (row-vector convention)."""
        return self.solve_right(np.asarray(a).T, np.asarray(b).T).T.copy()

    # -- subspaces (row spaces kept in RREF) --------------------------------------

    def span(self, rows, ncols=None):
        rows = np.asarray(rows, dtype=np.uint8)
        if rows.ndim == 1:
            rows = rows[None, :]
        if ncols is not None and rows.shape[0] == 0:
            rows = rows.reshape(0, ncols)
        return self.rref(rows)[0]

    def coords(self, basis, vectors):
        """Coordinates of ``vectors`` w.r.t. an RREF ``basis`` (no membership check)."""
        piv = pivots_of(basis)
        return np.asarray(vectors, dtype=np.uint8)[..., piv]

    def in_span(self, basis, vectors) -> bool:
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.uint8))
        if basis.shape[0] == 0:
            return not vectors.any()
        c = self.coords(basis, vectors)
        return bool(np.array_equal(self.matmul(c, basis), vectors))

    def intersect(self, u, v):
        """Intersection of two row spaces."""
        if u.shape[0] == 0 or v.shape[0] == 0:
            return np.zeros((0, u.shape[1]), dtype=np.uint8)
        k = self.left_kernel(np.vstack([u, v]))
        return self.span(self.matmul(k[:, : u.shape[0]], u), u.shape[1])

    def complement_in(self, big, small):
        """Rows of ``big``'s span completing ``small`` to a basis of span(big).

        Both are row spaces; returned rows are chosen greedily from ``big``.
        """
        big = np.asarray(big, dtype=np.uint8)
        if small.shape[0] == 0:
            return self.span(big, big.shape[1])
        red, piv = self.rref(np.vstack([small, big]).T)
        chosen = [c - small.shape[0] for c in piv if c >= small.shape[0]]
        return big[chosen]

    def is_invertible(self, m) -> bool:
        m = np.asarray(m)
        return m.shape[0] == m.shape[1] and self.rank(m) == m.shape[0]

    def inverse(self, m):
        n = m.shape[0]
        return self.solve_right(m, self.eye(n))

    def format(self, x: int) -> str:
        if self.m == 1:
            return str(int(x))
        terms = []
        for i, d in enumerate(self.digits(int(x))):
            if d == 0:
                continue
            if i == 0:
                terms.append(str(d))
            else:
                mono = "w" if i == 1 else f"w^{i}"
                terms.append(mono if d == 1 else f"{d}*{mono}")
        return " + ".join(terms) if terms else "0"


def pivots_of(basis) -> np.ndarray:
    """Pivot columns of an RREF matrix."""
    basis = np.asarray(basis)
    if basis.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return np.argmax(basis != 0, axis=1)


def _default_poly(p, m):
    for tail in product(range(p), repeat=m):
        poly = list(tail) + [1]
        if tail[0] == 0:
            continue
        try:
            FieldSpec(p, m, poly)
            return poly
        except Reducible:
            continue
    raise Reducible("no irreducible polynomial found")


def make_field(p: int, m: int = 1, poly=None) -> FieldSpec:
    """Construct GF(p^m); ``poly`` is constant-term-first and monic."""
    return FieldSpec(p, m, poly)
