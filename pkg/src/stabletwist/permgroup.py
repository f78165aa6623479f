"""Small permutation groups by exhaustive enumeration.

Permutations are tuples of 0-based images.  Products compose left to right:
``i^(g*h) = (i^g)^h``.  Cycle notation on input and output is 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactcore import WorkbenchError

MAX_ORDER = 10**4


class TooLarge(WorkbenchError):
    pass


class NotSubgroup(WorkbenchError):
    pass


Perm = tuple


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def mul(g: Perm, h: Perm) -> Perm:
    return tuple(h[i] for i in g)


def inverse(g: Perm) -> Perm:
    out = [0] * len(g)
    for i, j in enumerate(g):
        out[j] = i
    return tuple(out)


def order_of(g: Perm) -> int:
    e, x, n = identity(len(g)), g, 1
    while x != e:
        x, n = mul(x, g), n + 1
    return n


def from_cycles(degree: int, cycles) -> Perm:
    img = list(range(degree))
    for cyc in cycles:
        cyc = [int(c) - 1 for c in cyc]
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if not 0 <= a < degree:
                raise ValueError(f"point {a + 1} outside degree {degree}")
            img[a] = b
    if sorted(img) != list(range(degree)):
        raise ValueError(f"cycles {cycles} do not define a permutation")
    return tuple(img)


def to_cycles(g: Perm):
    seen, out = set(), []
    for i in range(len(g)):
        if i in seen or g[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = g[j]
        out.append(cyc)
    return out


def cycle_str(g: Perm) -> str:
    cyc = to_cycles(g)
    if not cyc:
        return "()"
    return "".join("(" + ",".join(map(str, c)) + ")" for c in cyc)


@dataclass(frozen=True)
class PermGroup:
    degree: int
    elements: tuple
    generators: tuple = field(default=())

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Perm:
        return identity(self.degree)

    def __contains__(self, g) -> bool:
        return g in self._index

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def _index(self):
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {g: i for i, g in enumerate(self.elements)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def index(self, g) -> int:
        return self._index[g]

    def is_subgroup_of(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(g in other for g in self.elements)

    def __repr__(self):
        gens = ", ".join(cycle_str(g) for g in self.generators)
        return f"PermGroup(order={self.order}, gens=[{gens}])"


def enumerate_group(degree: int, generators=(), limit: int = MAX_ORDER) -> PermGroup:
    """Close ``generators`` (permutation tuples) under composition."""
    gens = tuple(tuple(g) for g in generators)
    e = identity(degree)
    seen = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        raise TooLarge(f"group order exceeds {limit}")
        frontier = nxt
    return PermGroup(degree, tuple(sorted(seen)), gens)


def group_from_cycles(degree: int, generators) -> PermGroup:
    """``generators`` is a list of cycle lists, e.g. [[[1, 2]], [[1, 2, 3, 4]]]."""
    return enumerate_group(degree, [from_cycles(degree, g) for g in generators])


def subgroup(G: PermGroup, gens) -> PermGroup:
    H = enumerate_group(G.degree, gens)
    if not H.is_subgroup_of(G):
        raise NotSubgroup("generators leave the ambient group")
    return H


def _check(G, H):
    if not H.is_subgroup_of(G):
        raise NotSubgroup(f"{H} is not a subgroup of {G}")


def conjugate(g: Perm, h: Perm) -> Perm:
    """g^-1 h g."""
    return mul(mul(inverse(g), h), g)


def normalizer(G: PermGroup, H: PermGroup) -> PermGroup:
    _check(G, H)
    hs = set(H.elements)
    els = [g for g in G if all(conjugate(g, h) in hs for h in H.generators or H.elements)]
    return PermGroup(G.degree, tuple(els), tuple(els))


def centralizer(G: PermGroup, H: PermGroup) -> PermGroup:
    _check(G, H)
    gens = H.generators or H.elements
    els = [g for g in G if all(mul(g, h) == mul(h, g) for h in gens)]
    return PermGroup(G.degree, tuple(els), tuple(els))


def center(G: PermGroup) -> PermGroup:
    return centralizer(G, G)


@dataclass(frozen=True)
class DoubleCosetDecomposition:
    subgroup: PermGroup
    representatives: tuple
    sizes: tuple
    cosets: tuple


def double_cosets(G: PermGroup, H: PermGroup) -> DoubleCosetDecomposition:
    """H\\G/H with lexicographically least representatives."""
    _check(G, H)
    left = set()
    reps, sizes, cosets = [], [], []
    for g in G:
        if g in left:
            continue
        cos = frozenset(mul(mul(a, g), b) for a in H for b in H)
        left |= cos
        reps.append(g)
        sizes.append(len(cos))
        cosets.append(cos)
    return DoubleCosetDecomposition(H, tuple(reps), tuple(sizes), tuple(cosets))


def all_subgroups(G: PermGroup):
    """Every subgroup of a small group (joins of cyclic subgroups to a fixpoint)."""
    cyclic = {}
    for g in G:
        H = enumerate_group(G.degree, [g])
        cyclic[H.elements] = H
    found = dict(cyclic)
    frontier = list(found.values())
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic.values():
                if set(C.elements) <= set(H.elements):
                    continue
                J = enumerate_group(G.degree, list(H.generators) + list(C.generators))
                if J.elements not in found:
                    found[J.elements] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda H: (H.order, H.elements))


@dataclass(frozen=True)
class SemidirectFailure:
    condition: str
    detail: str


def semidirect_check(G: PermGroup, N: PermGroup):
    """Find H with N_G(N) = N x| H and |NgN| = |N|^2 off the normalizer.

    Returns the complement H, or a SemidirectFailure naming the first
    violated condition.
    """
    _check(G, N)
    NG = normalizer(G, N)
    ns = set(N.elements)
    target = NG.order // N.order
    candidates = [
        H for H in all_subgroups(NG) if H.order == target and len(ns & set(H.elements)) == 1
    ]
    # ties: lexicographic on the cycle notation of the elements
    candidates.sort(key=lambda H: sorted(cycle_str(g) for g in H if g != H.identity))
    complement = candidates[0] if candidates else None
    if complement is None:
        return SemidirectFailure("complement", "no complement to N in N_G(N)")
    ngs = set(NG.elements)
    dc = double_cosets(G, N)
    for rep, size in zip(dc.representatives, dc.sizes):
        if rep not in ngs and size != N.order**2:
            return SemidirectFailure(
                "double_coset", f"|N{cycle_str(rep)}N| = {size} != {N.order ** 2}"
            )
    return complement


def is_p_group(G: PermGroup) -> bool:
    n = G.order
    if n == 1:
        return True
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return n == 1


def subgroups_of_prime_order(G: PermGroup, p: int):
    seen, out = set(), []
    for g in G:
        if g != G.identity and order_of(g) == p:
            H = enumerate_group(G.degree, [g])
            if H.elements not in seen:
                seen.add(H.elements)
                out.append(H)
    return out


# -- standard families ---------------------------------------------------------


def symmetric_group(n: int) -> PermGroup:
    if n == 1:
        return enumerate_group(1, [])
    gens = [from_cycles(n, [[1, 2]]), from_cycles(n, [list(range(1, n + 1))])]
    return enumerate_group(n, gens)


def cyclic_group(n: int) -> PermGroup:
    if n == 1:
        return enumerate_group(1, [])
    return enumerate_group(n, [from_cycles(n, [list(range(1, n + 1))])])


def _affine(modulus, mults):
    """Group of maps i -> a*i + b on Z/modulus with a in the generated unit set."""
    gens = [tuple((i + 1) % modulus for i in range(modulus))]
    gens += [tuple((a * i) % modulus for i in range(modulus)) for a in mults]
    return enumerate_group(modulus, gens)


def dihedral_group(order: int) -> PermGroup:
    """D_order = <x, y | x^(order/2) = y^2 = 1, yxy = x^-1>."""
    n = order // 2
    return _affine(n, [n - 1])


def semidihedral_group(order: int) -> PermGroup:
    """SD_order = <x, y | x^(order/2) = y^2 = 1, yxy = x^(order/4 - 1)>."""
    n = order // 2
    return _affine(n, [n // 2 - 1])


def sylow_subgroup(G: PermGroup, p: int) -> PermGroup:
    n = G.order
    pk = 1
    while n % (pk * p) == 0:
        pk *= p
    for H in all_subgroups(G):
        if H.order == pk:
            return H
    raise WorkbenchError("no Sylow subgroup found")


# -- order-p subgroups ---------------------------------------------------------


def double_coset_sizes_ok(G: PermGroup, H: PermGroup) -> bool:
    """|HgH| is p inside N_G(H) and p^2 outside, for H of prime order p."""
    p = H.order
    ng = set(normalizer(G, H).elements)
    dc = double_cosets(G, H)
    for rep, size in zip(dc.representatives, dc.sizes):
        for g in dc.cosets[dc.representatives.index(rep)]:
            if (g in ng) != (size == p):
                return False
        if size not in (p, p * p):
            return False
    return True


def centralizer_is_normalizer(P: PermGroup, H: PermGroup) -> bool:
    return set(centralizer(P, H).elements) == set(normalizer(P, H).elements)


def order_p_subgroup_checks(P: PermGroup, p: int) -> dict:
    """Check both statements on every subgroup of order p; returns counts."""
    subs = subgroups_of_prime_order(P, p)
    dc = sum(double_coset_sizes_ok(P, H) for H in subs)
    cn = sum(centralizer_is_normalizer(P, H) for H in subs)
    return {"subgroups": len(subs), "double_coset_ok": dc, "centralizer_ok": cn}
