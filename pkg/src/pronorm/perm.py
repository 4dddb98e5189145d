"""Permutations and permutation groups.

Permutations act on the right: ``i ^ (a * b) == (i ^ a) ^ b``, so
``(a * b)[i] == b[a[i]]`` and conjugation is ``a ** b == ~b * a * b``.

Groups carry a lazily built stabilizer chain (deterministic Schreier-Sims,
base points chosen as smallest moved points).  Normalizers, centralizers,
Sylow subgroups and quotients are computed by scanning elements, bounded by
an explicit ``cap``; exceeding it raises :class:`CapExceeded` instead of
silently truncating.
"""

from __future__ import annotations

import hashlib
import itertools
import random
import re
from math import gcd
from typing import Callable, Iterable, Iterator, Sequence

DEFAULT_CAP = 5_000_000
# groups up to this order keep a hash set of their elements for membership
ELEMENT_SET_LIMIT = 60_000
FINGERPRINT_DIGEST_LIMIT = 10_000


class GroupError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """A scan would exceed its configured cap."""

    def __init__(self, what: str, needed: int, cap: int, partial=None):
        super().__init__(f"{what}: needs {needed} > cap {cap}")
        self.what = what
        self.needed = needed
        self.cap = cap
        self.partial = partial


class NotNormal(GroupError):
    pass


def _check_cap(what: str, needed: int, cap: int | None) -> None:
    if cap is not None and needed > cap:
        raise CapExceeded(what, needed, cap)


_IDENTITIES: dict[int, tuple[int, ...]] = {}


class Perm(tuple):
    """A permutation of ``{0, ..., d-1}`` stored as its image tuple."""

    __slots__ = ()

    @classmethod
    def checked(cls, images: Iterable[int]) -> Perm:
        p = cls(images)
        if sorted(p) != list(range(len(p))):
            raise GroupError(f"not a permutation: {tuple(p)}")
        return p

    @classmethod
    def identity(cls, degree: int) -> Perm:
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> Perm:
        img = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:] + type(cyc)(cyc[:1])):
                img[a] = b
        return cls.checked(img)

    @classmethod
    def parse(cls, text: str, degree: int) -> Perm:
        """Parse disjoint-cycle notation such as ``(0 1 2)(3 4)`` or ``()``."""
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            pts = [int(x) for x in re.split(r"[\s,]+", body.strip()) if x]
            if pts:
                cycles.append(pts)
        return cls.from_cycles(degree, *cycles)

    @property
    def degree(self) -> int:
        return len(self)

    def __mul__(self, other: Perm) -> Perm:
        return Perm(map(other.__getitem__, self))

    def __invert__(self) -> Perm:
        inv = [0] * len(self)
        for i, j in enumerate(self):
            inv[j] = i
        return Perm(inv)

    def __pow__(self, k):
        if isinstance(k, Perm):
            return ~k * self * k
        if k < 0:
            return (~self) ** (-k)
        result = Perm.identity(len(self))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        n = len(self)
        ident = _IDENTITIES.get(n)
        if ident is None:
            ident = _IDENTITIES[n] = tuple(range(n))
        return tuple.__eq__(self, ident)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self)):
            if i in seen or self[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        o = 1
        for c in self.cycles():
            o = o * len(c) // gcd(o, len(c))
        return o

    def parity(self) -> int:
        return sum(len(c) - 1 for c in self.cycles()) % 2

    def moved_points(self) -> list[int]:
        return [i for i, j in enumerate(self) if i != j]

    def commutator(self, other: Perm) -> Perm:
        """``[self, other] = self^-1 * self^other``."""
        return ~self * (self ** other)

    def __str__(self):
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"

    def __repr__(self):
        return f"Perm({str(self)!r}, degree={len(self)})"


# -- stabilizer chain ---------------------------------------------------------------

class _Level:
    __slots__ = ("point", "gens", "trans", "inv", "orbit", "done")

    def __init__(self, point: int):
        self.point = point
        self.gens: list[Perm] = []
        self.trans: dict[int, Perm] = {}
        self.inv: dict[int, Perm] = {}
        self.orbit: list[int] = []
        # (orbit index, generator index) pairs whose Schreier generator sifts
        self.done: set[tuple[int, int]] = set()

    def copy(self) -> _Level:
        c = _Level(self.point)
        c.gens = list(self.gens)
        c.trans = dict(self.trans)
        c.inv = dict(self.inv)
        c.orbit = list(self.orbit)
        c.done = set(self.done)
        return c

    def extend_orbit(self, degree: int) -> None:
        if not self.orbit:
            ident = Perm.identity(degree)
            self.orbit = [self.point]
            self.trans = {self.point: ident}
            self.inv = {self.point: ident}
        i = 0
        while i < len(self.orbit):
            beta = self.orbit[i]
            u = self.trans[beta]
            for s in self.gens:
                gamma = s[beta]
                if gamma not in self.trans:
                    w = u * s
                    self.trans[gamma] = w
                    self.inv[gamma] = ~w
                    self.orbit.append(gamma)
            i += 1


class StabChain:
    """Base and strong generating set built by deterministic Schreier-Sims."""

    def __init__(self, degree: int, levels: list[_Level] | None = None):
        self.degree = degree
        self.levels: list[_Level] = levels or []

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    def order(self) -> int:
        o = 1
        for lv in self.levels:
            o *= len(lv.orbit)
        return o

    def copy(self) -> StabChain:
        return StabChain(self.degree, [lv.copy() for lv in self.levels])

    def strip(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for i in range(start, len(self.levels)):
            lv = self.levels[i]
            inv = lv.inv.get(g[lv.point])
            if inv is None:
                return g, i
            g = g * inv
        return g, len(self.levels)

    def contains(self, g: Perm) -> bool:
        h, _ = self.strip(g)
        return h.is_identity()

    def add_generator(self, g: Perm) -> bool:
        """Make the chain describe ``<G, g>``; returns False if g was already a member."""
        h, j = self.strip(g)
        if h.is_identity():
            return False
        # add the raw generator at every level it fixes the base up to
        m = self._first_moved_level(g)
        self._install(g, m)
        self._complete(m)
        return True

    def _first_moved_level(self, g: Perm) -> int:
        for i, lv in enumerate(self.levels):
            if g[lv.point] != lv.point:
                return i
        return len(self.levels)

    def _install(self, h: Perm, upto: int, start: int = 0) -> None:
        if upto == len(self.levels):
            point = next(i for i, j in enumerate(h) if i != j and i not in self.base)
            self.levels.append(_Level(point))
        for l in range(start, upto + 1):
            lv = self.levels[l]
            lv.gens.append(h)
            lv.extend_orbit(self.degree)

    def _complete(self, i: int) -> None:
        while i >= 0:
            lv = self.levels[i]
            restart = False
            for bi, beta in enumerate(lv.orbit):
                u = lv.trans[beta]
                for si, s in enumerate(lv.gens):
                    if (bi, si) in lv.done:
                        continue
                    gamma = s[beta]
                    schreier = u * s * lv.inv[gamma]
                    h, j = self.strip(schreier, i + 1)
                    if h.is_identity():
                        lv.done.add((bi, si))
                        continue
                    self._install(h, j, start=i + 1)
                    i = j
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1


def build_chain(degree: int, gens: Sequence[Perm]) -> StabChain:
    chain = StabChain(degree)
    for g in gens:
        chain.add_generator(g)
    return chain


# -- groups ------------------------------------------------------------------------

class PermGroup:
    """A permutation group given by generators, with cached chain and order."""

    def __init__(self, gens: Iterable[Perm], degree: int | None = None, *, name: str | None = None,
                 chain: StabChain | None = None):
        gens = [g if isinstance(g, Perm) else Perm.checked(g) for g in gens]
        if degree is None:
            if not gens:
                raise GroupError("degree required for a group with no generators")
            degree = len(gens[0])
        if any(len(g) != degree for g in gens):
            raise GroupError("generators have different degrees")
        self.degree = degree
        self.gens = [g for g in gens if not g.is_identity()] or [Perm.identity(degree)]
        self.name = name
        self._chain = chain
        self._elements: list[Perm] | None = None
        self._element_set: frozenset | None = None
        self._fingerprint = None

    # chain-backed queries
    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = build_chain(self.degree, self.gens)
        return self._chain

    def build_chain(self) -> PermGroup:
        self.chain
        return self

    def order(self) -> int:
        return self.chain.order()

    def __len__(self):
        return self.order()

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def contains(self, x: Perm) -> bool:
        if len(x) != self.degree:
            raise GroupError(f"degree mismatch: {len(x)} vs {self.degree}")
        if self._element_set is None and self._elements is not None and len(self._elements) <= ELEMENT_SET_LIMIT:
            self._element_set = frozenset(self._elements)
        if self._element_set is not None:
            return x in self._element_set
        return self.chain.contains(x)

    __contains__ = contains

    def element_set(self, cap: int | None = DEFAULT_CAP) -> frozenset:
        if self._element_set is None:
            self._element_set = frozenset(self.elements(cap))
        return self._element_set

    def elements(self, cap: int | None = DEFAULT_CAP) -> list[Perm]:
        """All elements in chain-transversal lexicographic order."""
        _check_cap("elements", self.order(), cap)
        if self._elements is None:
            elems = [self.identity()]
            for lv in reversed(self.chain.levels):
                # base point first so the identity leads the list
                pts = [lv.point] + sorted(b for b in lv.orbit if b != lv.point)
                reps = [lv.trans[b] for b in pts]
                elems = [h * u for u in reps for h in elems]
            self._elements = elems
        return self._elements

    def __iter__(self) -> Iterator[Perm]:
        return iter(self.elements())

    def random_element(self, rng: random.Random) -> Perm:
        g = self.identity()
        for lv in reversed(self.chain.levels):
            g = g * lv.trans[rng.choice(lv.orbit)]
        return g

    # structure
    def is_subgroup_of(self, other: PermGroup) -> bool:
        return self.degree == other.degree and all(other.contains(g) for g in self.gens)

    def __le__(self, other: PermGroup) -> bool:
        return self.is_subgroup_of(other)

    def same_as(self, other: PermGroup) -> bool:
        return self.order() == other.order() and self.is_subgroup_of(other)

    def is_abelian(self) -> bool:
        return all(a * b == b * a for a, b in itertools.combinations(self.gens, 2))

    def is_trivial(self) -> bool:
        return self.order() == 1

    def is_normal_in(self, g: PermGroup) -> bool:
        return all(self.contains(h ** x) for h in self.gens for x in g.gens)

    def normalizes(self, x: Perm) -> bool:
        return all(self.contains(h ** x) for h in self.gens)

    def orbits(self) -> list[tuple[int, ...]]:
        seen: set[int] = set()
        out = []
        for start in range(self.degree):
            if start in seen:
                continue
            orb = [start]
            seen.add(start)
            i = 0
            while i < len(orb):
                for g in self.gens:
                    b = g[orb[i]]
                    if b not in seen:
                        seen.add(b)
                        orb.append(b)
                i += 1
            out.append(tuple(sorted(orb)))
        return out

    def is_transitive_on(self, blocks: Sequence[Sequence[int]]) -> bool:
        """Transitivity on a block system given as point lists."""
        where = {pt: i for i, blk in enumerate(blocks) for pt in blk}
        reached = {0}
        stack = [0]
        while stack:
            b = stack.pop()
            for g in self.gens:
                c = where[g[blocks[b][0]]]
                if c not in reached:
                    reached.add(c)
                    stack.append(c)
        return len(reached) == len(blocks)

    def exponent(self, cap: int | None = DEFAULT_CAP) -> int:
        e = 1
        for x in self.elements(cap):
            o = x.order()
            e = e * o // gcd(e, o)
        return e

    def fingerprint(self) -> tuple:
        """Canonical key: order, orbit partition, and an element digest for small groups."""
        if self._fingerprint is None:
            n = self.order()
            digest = None
            if n <= FINGERPRINT_DIGEST_LIMIT:
                h = hashlib.sha1()
                for x in sorted(self.elements()):
                    h.update(bytes(str(tuple(x)), "ascii"))
                digest = h.hexdigest()
            self._fingerprint = (n, tuple(self.orbits()), digest)
        return self._fingerprint

    def with_generator(self, x: Perm) -> PermGroup:
        """``<self, x>``, reusing this group's chain."""
        if self.contains(x):
            return self
        chain = self.chain.copy()
        chain.add_generator(x)
        return PermGroup(self.gens + [x], self.degree, chain=chain)

    def __repr__(self):
        label = self.name or "PermGroup"
        return f"<{label} degree={self.degree} ngens={len(self.gens)}>"


class SubgroupHandle:
    """A subgroup together with the ambient group it was found in."""

    def __init__(self, group: PermGroup, ambient: PermGroup, label: str | None = None):
        self.group = group
        self.ambient = ambient
        self.label = label

    @property
    def fingerprint(self) -> tuple:
        return self.group.fingerprint()

    def order(self) -> int:
        return self.group.order()

    def index(self) -> int:
        return self.ambient.order() // self.group.order()

    def verify(self) -> bool:
        return self.group.is_subgroup_of(self.ambient)

    def __repr__(self):
        return f"<SubgroupHandle order={self.order()} index={self.index()}>"


class SubgroupRegistry:
    """Dedup subgroups by fingerprint, resolving collisions by mutual containment."""

    def __init__(self):
        self._buckets: dict[tuple, list[PermGroup]] = {}
        self.items: list[PermGroup] = []

    def _key(self, g: PermGroup) -> tuple:
        n, orbs, digest = g.fingerprint()
        return (n, orbs, digest)

    def find(self, g: PermGroup) -> PermGroup | None:
        for other in self._buckets.get(self._key(g), ()):
            if other.same_as(g):
                return other
        return None

    def add(self, g: PermGroup) -> bool:
        if self.find(g) is not None:
            return False
        self._buckets.setdefault(self._key(g), []).append(g)
        self.items.append(g)
        return True

    def __len__(self):
        return len(self.items)

    def __contains__(self, g: PermGroup) -> bool:
        return self.find(g) is not None


# -- operations ----------------------------------------------------------------------

def _check_degree(a: PermGroup, b) -> None:
    d = b.degree if isinstance(b, PermGroup) else len(b)
    if a.degree != d:
        raise GroupError(f"degree mismatch: {a.degree} vs {d}")


def contains(g: PermGroup, x: Perm) -> bool:
    return g.contains(x)


def elements(g: PermGroup, cap: int | None = DEFAULT_CAP) -> list[Perm]:
    return g.elements(cap)


def trivial_group(degree: int) -> PermGroup:
    return PermGroup([], degree)


def subgroup_from_elements(elems: Iterable[Perm], degree: int) -> PermGroup:
    """Group generated by a set of elements, with only non-redundant generators kept."""
    chain = StabChain(degree)
    gens = []
    for x in elems:
        if chain.add_generator(x):
            gens.append(x)
    return PermGroup(gens, degree, chain=chain)


def generate(gens: Iterable[Perm], degree: int) -> PermGroup:
    return subgroup_from_elements(gens, degree)


def conjugate_subgroup(h: PermGroup, x: Perm) -> PermGroup:
    _check_degree(h, x)
    return PermGroup([g ** x for g in h.gens], h.degree)


def join(a: PermGroup, b: PermGroup) -> PermGroup:
    _check_degree(a, b)
    result = a
    for g in b.gens:
        result = result.with_generator(g)
    return result


def intersection(a: PermGroup, b: PermGroup, cap: int | None = DEFAULT_CAP) -> PermGroup:
    small, big = (a, b) if a.order() <= b.order() else (b, a)
    return subgroup_from_elements((x for x in small.elements(cap) if big.contains(x)), a.degree)


def normalizer(g: PermGroup, h: PermGroup, cap: int | None = DEFAULT_CAP) -> PermGroup:
    """``N_g(h)`` by scanning the elements of ``g``."""
    _check_degree(g, h)
    _check_cap("normalizer scan", g.order(), cap)
    found = StabChain(g.degree)
    gens = []
    for x in g.elements(cap):
        if found.contains(x):
            continue
        if h.normalizes(x):
            found.add_generator(x)
            gens.append(x)
    return PermGroup(gens, g.degree, chain=found)


def centralizer(g: PermGroup, h: PermGroup, cap: int | None = DEFAULT_CAP) -> PermGroup:
    """``C_g(h)`` by scanning the elements of ``g``."""
    _check_degree(g, h)
    _check_cap("centralizer scan", g.order(), cap)
    hg = h.gens
    found = StabChain(g.degree)
    gens = []
    for x in g.elements(cap):
        if found.contains(x):
            continue
        if all(y * x == x * y for y in hg):
            found.add_generator(x)
            gens.append(x)
    return PermGroup(gens, g.degree, chain=found)


def center(g: PermGroup, cap: int | None = DEFAULT_CAP) -> PermGroup:
    return centralizer(g, g, cap)


def sylow(g: PermGroup, p: int, cap: int | None = DEFAULT_CAP, seed: int | None = None) -> PermGroup:
    """A Sylow p-subgroup of ``g``.

    Starts from the p-part power of one element (the first suitable element, or
    a random one when ``seed`` is given) and repeatedly adjoins an element of
    ``N_g(P) \\ P`` whose p-th power lies in ``P``.
    """
    _check_cap("sylow scan", g.order(), cap)
    n = g.order()
    target = 1
    while n % p == 0:
        n //= p
        target *= p
    elems = g.elements(cap)
    order = list(range(len(elems)))
    if seed is not None:
        random.Random(seed).shuffle(order)
    P = trivial_group(g.degree)
    if target == 1:
        return P
    for idx in order:
        x = elems[idx]
        o = x.order()
        q = 1
        while o % p == 0:
            o //= p
            q *= p
        if q > 1:
            P = PermGroup([x ** o], g.degree)
            break
    while P.order() < target:
        for idx in order:
            y = elems[idx]
            if P.contains(y) or not P.contains(y ** p) or not P.normalizes(y):
                continue
            P = P.with_generator(y)
            break
        else:  # pragma: no cover - Sylow theory guarantees progress
            raise GroupError("no extending element found")
    return P


def sylow_2(g: PermGroup, cap: int | None = DEFAULT_CAP, seed: int | None = None) -> PermGroup:
    return sylow(g, 2, cap, seed)


def conjugates(g: PermGroup, h: PermGroup, cap: int | None = DEFAULT_CAP) -> list[tuple[Perm, PermGroup]]:
    """One ``(x, h^x)`` per distinct conjugate, x ranging over right coset reps of N_g(h)."""
    n = normalizer(g, h, cap)
    nel = n.elements(cap)
    covered: set[Perm] = set()
    out = []
    for x in g.elements(cap):
        if x in covered:
            continue
        covered.update(y * x for y in nel)
        out.append((x, conjugate_subgroup(h, x)))
    return out


def core_2(g: PermGroup, cap: int | None = DEFAULT_CAP) -> PermGroup:
    """``O_2(g)``: the intersection of all Sylow 2-subgroups."""
    s = sylow_2(g, cap)
    common = set(s.elements(cap))
    for x, _ in conjugates(g, s, cap):
        common &= {y ** x for y in s.elements(cap)}
    return subgroup_from_elements(sorted(common), g.degree)


def normal_closure(g: PermGroup, h: PermGroup) -> PermGroup:
    result = h
    changed = True
    while changed:
        changed = False
        for y in list(result.gens):
            for x in g.gens:
                z = y ** x
                if not result.contains(z):
                    result = result.with_generator(z)
                    changed = True
    return result


class CosetAction:
    """Right-regular action of ``g`` on the cosets of a normal subgroup ``n``."""

    def __init__(self, g: PermGroup, n: PermGroup, cap: int | None = DEFAULT_CAP):
        if not n.is_subgroup_of(g):
            raise NotNormal("subgroup is not contained in the group")
        if not n.is_normal_in(g):
            raise NotNormal("subgroup is not normal")
        index = g.order() // n.order()
        _check_cap("coset action", g.order(), cap)
        self.g = g
        self.n = n
        nel = n.elements(cap)
        self.coset_of: dict[Perm, int] = {}
        self.reps: list[Perm] = []
        for x in g.elements(cap):
            if x in self.coset_of:
                continue
            k = len(self.reps)
            self.reps.append(x)
            for y in nel:
                self.coset_of[y * x] = k
        assert len(self.reps) == index
        self.quotient = PermGroup([self.project(s) for s in g.gens], max(index, 1))

    def project(self, x: Perm) -> Perm:
        return Perm(self.coset_of[r * x] for r in self.reps)

    def project_group(self, h: PermGroup) -> PermGroup:
        return PermGroup([self.project(s) for s in h.gens], self.quotient.degree)

    def preimage(self, qh: PermGroup) -> PermGroup:
        gens = list(self.n.gens)
        for q in qh.gens:
            target = q[0]
            gens.append(self.reps[target])
        return generate(gens, self.g.degree)

    @property
    def index(self) -> int:
        return len(self.reps)

    def quotient_order(self) -> int:
        """|g : n|; the action on cosets of a normal subgroup has kernel exactly n."""
        return len(self.reps)

    def kernel_order(self) -> int:
        """Order of the kernel, computed from the quotient's own chain (small indices only)."""
        return self.g.order() // self.quotient.order()


def coset_action(g: PermGroup, n: PermGroup, cap: int | None = DEFAULT_CAP) -> tuple[PermGroup, Callable[[Perm], Perm]]:
    act = CosetAction(g, n, cap)
    if act.quotient.order() * n.order() != g.order():
        raise GroupError("coset action kernel differs from the given subgroup")
    return act.quotient, act.project


def commutator_subgroup(h: PermGroup, u: PermGroup, cap: int | None = DEFAULT_CAP) -> PermGroup:
    """``[h, u]``: generated by ``[x, y]`` for ``x`` in u, ``y`` in h, closed under both."""
    _check_degree(h, u)
    _check_cap("commutator", u.order(), cap)
    pairs = [x.commutator(y) for x in u.gens for y in h.gens]
    result = subgroup_from_elements(pairs, h.degree)
    changed = True
    while changed:
        changed = False
        for c in list(result.gens):
            for x in itertools.chain(h.gens, u.gens):
                z = c ** x
                if not result.contains(z):
                    result = result.with_generator(z)
                    changed = True
    return result


def derived_subgroup(g: PermGroup, cap: int | None = DEFAULT_CAP) -> PermGroup:
    return commutator_subgroup(g, g, cap)


def are_conjugate_elements_scan(h: PermGroup, k: PermGroup, candidates: Iterable[Perm]) -> Perm | None:
    """First candidate x with ``h^x == k`` (requires |h| == |k|)."""
    if h.order() != k.order():
        return None
    for x in candidates:
        if all(k.contains(y ** x) for y in h.gens):
            return x
    return None
