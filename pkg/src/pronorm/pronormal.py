"""Pronormality checkers and the subgroup searches that feed them.

``H`` is pronormal in ``G`` when ``H`` and ``H^x`` are conjugate inside
``<H, H^x>`` for every ``x`` in ``G``.  Three routes are provided: the
definition itself, the reduction to conjugating elements from the normalizer
of a Sylow 2-subgroup contained in ``H``, and the abelian-complement criterion
for ``G = HV`` with ``V`` abelian normal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .algebra import two_part
from .perm import (
    DEFAULT_CAP,
    CapExceeded,
    GroupError,
    Perm,
    PermGroup,
    SubgroupHandle,
    SubgroupRegistry,
    _check_cap,
    commutator_subgroup,
    conjugate_subgroup,
    coset_action,
    join,
    normalizer,
    sylow,
    sylow_2,
    subgroup_from_elements,
)


class PreconditionViolated(GroupError):
    pass


class NotAbelian(PreconditionViolated):
    pass


class NotInvariant(PreconditionViolated):
    pass


@dataclass
class PronormalityVerdict:
    pronormal: bool
    route: str
    candidates: int = 0
    # (x, j): j lies in <H, H^x> and H^j == H^x
    witnesses: list[tuple[Perm, Perm]] = field(default_factory=list)
    # (x, |<H, H^x>|) for the first x whose conjugate is not conjugate in the join
    failure: tuple[Perm, int] | None = None

    def __bool__(self):
        return self.pronormal


@dataclass
class CriterionVerdict:
    holds: bool
    checked_subgroup_count: int
    failing_U: SubgroupHandle | None = None
    failing_orders: dict | None = None

    def __bool__(self):
        return self.holds


def are_conjugate_in(h: PermGroup, k: PermGroup, j: PermGroup, cap: int | None = DEFAULT_CAP) -> Perm | None:
    """An element x of ``j`` with ``h^x == k``, or None after scanning all of ``j``."""
    if h.order() != k.order():
        return None
    _check_cap("conjugacy scan", j.order(), cap)
    for x in j.elements(cap):
        if all(k.contains(y ** x) for y in h.gens):
            return x
    return None


def _conjugator_from_coset(h: PermGroup, x: Perm, k: PermGroup, n_elems) -> Perm | None:
    """First element of ``N_G(h) x`` lying in ``k``; these are all conjugators of h onto h^x."""
    for y in n_elems:
        cand = y * x
        if k.contains(cand):
            return cand
    return None


def is_pronormal(h: PermGroup, g: PermGroup, cap: int | None = DEFAULT_CAP) -> PronormalityVerdict:
    """Definition check over every element of ``g``.

    Elements in one right coset of ``N_g(h)`` give the same conjugate, so each
    conjugate is tested once; the conjugators of ``h`` onto ``h^x`` are exactly
    ``N_g(h) x``, which is scanned for a member of the join.
    """
    if not h.is_subgroup_of(g):
        raise PreconditionViolated("h is not a subgroup of g")
    _check_cap("pronormality scan", g.order(), cap)
    nh = normalizer(g, h, cap)
    n_elems = nh.elements(cap)
    verdict = PronormalityVerdict(True, "definition", candidates=g.order())
    covered: set[Perm] = set()
    for x in g.elements(cap):
        if x in covered:
            continue
        covered.update(y * x for y in n_elems)
        hx = conjugate_subgroup(h, x)
        k = join(h, hx)
        w = _conjugator_from_coset(h, x, k, n_elems)
        if w is None:
            verdict.pronormal = False
            verdict.failure = (x, k.order())
            return verdict
        verdict.witnesses.append((x, w))
    return verdict


def is_pronormal_sylow(h: PermGroup, g: PermGroup, s: PermGroup, cap: int | None = DEFAULT_CAP,
                       ns: PermGroup | None = None) -> PronormalityVerdict:
    """Pronormality of an odd-index ``h`` tested only on conjugators from ``N_g(s)``.

    ``s`` must be a Sylow 2-subgroup of ``g`` contained in ``h``.  ``ns`` may
    pass a precomputed ``N_g(s)``.
    """
    if s.order() != two_part(g.order()):
        raise PreconditionViolated(f"|s| = {s.order()} is not the 2-part of |g| = {g.order()}")
    if not s.is_subgroup_of(h):
        raise PreconditionViolated("s is not contained in h")
    if not h.is_subgroup_of(g):
        raise PreconditionViolated("h is not a subgroup of g")
    if ns is None:
        ns = normalizer(g, s, cap)
    verdict = PronormalityVerdict(True, "sylow-normalizer", candidates=ns.order())
    # conjugates of h by N_g(s) modulo N_{N_g(s)}(h)
    stab = normalizer(ns, h, cap).elements(cap)
    covered: set[Perm] = set()
    for x in ns.elements(cap):
        if x in covered:
            continue
        covered.update(y * x for y in stab)
        hx = conjugate_subgroup(h, x)
        k = join(h, hx)
        w = are_conjugate_in(h, hx, k, cap)
        if w is None:
            verdict.pronormal = False
            verdict.failure = (x, k.order())
            return verdict
        verdict.witnesses.append((x, w))
    return verdict


def recheck_failure(h: PermGroup, verdict: PronormalityVerdict, cap: int | None = DEFAULT_CAP) -> bool:
    """True when the recorded failing element really gives a non-conjugate pair."""
    if verdict.failure is None:
        return False
    x, join_order = verdict.failure
    hx = conjugate_subgroup(h, x)
    k = join(h, hx)
    return k.order() == join_order and are_conjugate_in(h, hx, k, cap) is None


def recheck_witness(h: PermGroup, x: Perm, w: Perm) -> bool:
    hx = conjugate_subgroup(h, x)
    return join(h, hx).contains(w) and conjugate_subgroup(h, w).same_as(hx)


# -- invariant subgroups of an abelian normal subgroup -----------------------------------

def _abelian_extend(elems: frozenset[Perm], gens) -> frozenset[Perm]:
    """Subgroup of an abelian group generated by a subgroup and extra elements."""
    current = set(elems)
    for g in gens:
        if g in current:
            continue
        # <E, g> is the union of the cosets E g^k until g^k falls back into E
        layer = list(current)
        step = g
        while step not in current:
            layer = [e * g for e in layer]
            current.update(layer)
            step = step * g
    return frozenset(current)


def _conjugation_orbit(x: Perm, h: PermGroup) -> set[Perm]:
    orb = {x}
    stack = [x]
    while stack:
        y = stack.pop()
        for s in h.gens:
            z = y ** s
            if z not in orb:
                orb.add(z)
                stack.append(z)
    return orb


def _check_abelian_invariant(h: PermGroup, v: PermGroup) -> None:
    if not v.is_abelian():
        raise NotAbelian("v is not abelian")
    if not all(v.normalizes(x) for x in h.gens):
        raise NotInvariant("h does not normalize v")


def _invariant_subgroup_sets(h: PermGroup, v: PermGroup, cap: int | None) -> list[frozenset[Perm]]:
    _check_abelian_invariant(h, v)
    velems = v.elements(cap)
    start = frozenset([v.identity()])
    found = [start]
    seen = {start}
    i = 0
    while i < len(found):
        u = found[i]
        i += 1
        covered = set(u)
        for x in velems:
            if x in covered:
                continue
            # <U, x^H> depends only on the coset U x
            covered.update(y * x for y in u)
            w = _abelian_extend(u, sorted(_conjugation_orbit(x, h)))
            if w not in seen:
                seen.add(w)
                found.append(w)
    found.sort(key=lambda s: (len(s), sorted(s)))
    return found


def h_invariant_subgroups(h: PermGroup, v: PermGroup, cap: int | None = DEFAULT_CAP) -> list[SubgroupHandle]:
    """All subgroups of the abelian group ``v`` normalized by ``h``, smallest first."""
    return [SubgroupHandle(subgroup_from_elements(sorted(u), v.degree), v)
            for u in _invariant_subgroup_sets(h, v, cap)]


def _product_order(a: frozenset, b: frozenset) -> int:
    return len(a) * len(b) // len(a & b)


def criterion_abelian_complement(h: PermGroup, v: PermGroup, g: PermGroup,
                                 cap: int | None = DEFAULT_CAP) -> CriterionVerdict:
    """Check ``U == N_U(h) [h, U]`` for every h-invariant ``U <= v``.

    Requires ``v`` abelian and normal in ``g`` with ``g = h v``.
    """
    _check_abelian_invariant(h, v)
    if not v.is_subgroup_of(g) or not v.is_normal_in(g):
        raise PreconditionViolated("v is not a normal subgroup of g")
    if not h.is_subgroup_of(g):
        raise PreconditionViolated("h is not a subgroup of g")
    h_cap_v = sum(1 for x in v.elements(cap) if h.contains(x))
    if g.order() * h_cap_v != h.order() * v.order():
        raise PreconditionViolated("g is not the product h v")
    subgroups = _invariant_subgroup_sets(h, v, cap)
    for u in subgroups:
        upg = subgroup_from_elements(sorted(u), v.degree)
        n_u = frozenset(x for x in u if h.normalizes(x))
        comm = frozenset(commutator_subgroup(h, upg, cap).elements(cap))
        if _product_order(n_u, comm) != len(u):
            return CriterionVerdict(False, len(subgroups), SubgroupHandle(upg, v),
                                    {"U": len(u), "N_U(H)": len(n_u), "[H,U]": len(comm),
                                     "N_U(H)[H,U]": _product_order(n_u, comm)})
    return CriterionVerdict(True, len(subgroups))


def block_factor_order(v: PermGroup, block: list[int]) -> int:
    restricted = [Perm(x[p] - block[0] for p in block) for x in v.gens]
    return PermGroup(restricted, len(block)).order()


def find_coprime_transitive(h: PermGroup, blocks: list[list[int]], a_order: int,
                            cap: int | None = DEFAULT_CAP) -> PermGroup | None:
    """A subgroup of ``h`` transitive on ``blocks`` with order coprime to ``a_order``."""
    if gcd(h.order(), a_order) == 1 and h.is_transitive_on(blocks):
        return h
    n = h.order()
    primes = [r for r in range(2, n + 1) if n % r == 0 and all(r % q for q in range(2, r))]
    for r in primes:
        if a_order % r == 0:
            continue
        p = sylow(h, r, cap)
        if p.is_transitive_on(blocks):
            return p
    return None


def coprime_factorization_check(h: PermGroup, v: PermGroup, blocks: list[list[int]],
                                k: PermGroup | None = None,
                                cap: int | None = DEFAULT_CAP) -> list[tuple[SubgroupHandle, bool]]:
    """``U == C_U(h) [h, U]`` for every h-invariant ``U <= v``.

    ``v`` is the base of a wreath-type action with the given blocks; ``k`` (found
    automatically when omitted) must be a subgroup of ``h`` transitive on the
    blocks and of order coprime to the base factor.
    """
    a_order = block_factor_order(v, blocks[0])
    if k is None:
        k = find_coprime_transitive(h, blocks, a_order, cap)
        if k is None:
            raise PreconditionViolated("no transitive subgroup of coprime order found")
    else:
        if not k.is_subgroup_of(h):
            raise PreconditionViolated("k is not a subgroup of h")
        if not k.is_transitive_on(blocks):
            raise PreconditionViolated("k is not transitive on the blocks")
        if gcd(k.order(), a_order) != 1:
            raise PreconditionViolated(f"gcd(|A|, |K|) = gcd({a_order}, {k.order()}) != 1")
    out = []
    for u in _invariant_subgroup_sets(h, v, cap):
        upg = subgroup_from_elements(sorted(u), v.degree)
        c_u = frozenset(x for x in u if all(x * y == y * x for y in h.gens))
        comm = frozenset(commutator_subgroup(h, upg, cap).elements(cap))
        out.append((SubgroupHandle(upg, v), _product_order(c_u, comm) == len(u)))
    return out


# -- odd-index subgroups ---------------------------------------------------------------

DOUBLE_COSET_LIMIT = 256
DEFAULT_MAX_SUBGROUPS = 5_000


def overgroups(g: PermGroup, s: PermGroup, cap: int | None = DEFAULT_CAP,
               max_subgroups: int | None = DEFAULT_MAX_SUBGROUPS) -> list[SubgroupHandle]:
    """Every subgroup of ``g`` containing ``s``, by BFS over one-element joins.

    Raises :class:`CapExceeded` with the partial list attached when more than
    ``max_subgroups`` are found.
    """
    if not s.is_subgroup_of(g):
        raise PreconditionViolated("s is not a subgroup of g")
    gelems = g.elements(cap)
    reg = SubgroupRegistry()
    reg.add(s)
    i = 0
    while i < len(reg.items):
        h = reg.items[i]
        i += 1
        helems = h.elements(cap)
        covered = set(helems)
        for x in gelems:
            if x in covered:
                continue
            k = h.with_generator(x)
            hx = [y * x for y in helems]
            if len(helems) <= DOUBLE_COSET_LIMIT:
                covered.update(z * y for z in hx for y in helems)
            else:
                covered.update(hx)
                covered.update(x * y for y in helems)
            if reg.add(k) and max_subgroups is not None and len(reg) > max_subgroups:
                partial = [SubgroupHandle(q, g) for q in reg.items]
                raise CapExceeded("overgroup enumeration", len(reg), max_subgroups, partial)
    items = sorted(reg.items, key=lambda q: (q.order(), q.fingerprint()))
    return [SubgroupHandle(q, g) for q in items]


def odd_index_overgroups(g: PermGroup, s: PermGroup, cap: int | None = DEFAULT_CAP,
                         max_subgroups: int | None = DEFAULT_MAX_SUBGROUPS) -> list[SubgroupHandle]:
    """Subgroups containing the Sylow 2-subgroup ``s``; these all have odd index."""
    if s.order() != two_part(g.order()):
        raise PreconditionViolated("s is not a Sylow 2-subgroup of g")
    return overgroups(g, s, cap, max_subgroups)


@dataclass
class SylowNormalizerStructure:
    order: int
    s_order: int
    ns_order: int
    index_over_s: int
    quotient_abelian: bool
    quotient_exponent: int
    ns_abelian: bool
    sylow: PermGroup = field(repr=False)
    normalizer: PermGroup = field(repr=False)

    @property
    def self_normalizing(self) -> bool:
        return self.index_over_s == 1


def sylow_normalizer_structure(g: PermGroup, cap: int | None = DEFAULT_CAP,
                               s: PermGroup | None = None) -> SylowNormalizerStructure:
    s = s if s is not None else sylow_2(g, cap)
    ns = normalizer(g, s, cap)
    quotient, _ = coset_action(ns, s, cap)
    return SylowNormalizerStructure(
        order=g.order(), s_order=s.order(), ns_order=ns.order(),
        index_over_s=ns.order() // s.order(),
        quotient_abelian=quotient.is_abelian(),
        quotient_exponent=quotient.exponent(cap),
        ns_abelian=ns.is_abelian(),
        sylow=s, normalizer=ns)


@dataclass
class OddIndexScan:
    group_order: int
    sylow_order: int
    subgroups: list[SubgroupHandle]
    verdicts: list[PronormalityVerdict]
    complete: bool

    @property
    def all_pronormal(self) -> bool:
        return all(v.pronormal for v in self.verdicts)

    def first_nonpronormal(self) -> SubgroupHandle | None:
        for hnd, v in zip(self.subgroups, self.verdicts):
            if not v.pronormal:
                return hnd
        return None


def scan_odd_index(g: PermGroup, cap: int | None = DEFAULT_CAP,
                   max_subgroups: int | None = DEFAULT_MAX_SUBGROUPS,
                   s: PermGroup | None = None, stop_at_first: bool = False) -> OddIndexScan:
    """Sylow-route pronormality of every overgroup of one Sylow 2-subgroup.

    A cap hit during enumeration yields ``complete=False`` over the partial list.
    """
    s = s if s is not None else sylow_2(g, cap)
    complete = True
    try:
        subs = odd_index_overgroups(g, s, cap, max_subgroups)
    except CapExceeded as exc:
        subs = exc.partial or []
        complete = False
    ns = normalizer(g, s, cap)
    verdicts = []
    kept = []
    for hnd in subs:
        v = is_pronormal_sylow(hnd.group, g, s, cap, ns=ns)
        verdicts.append(v)
        kept.append(hnd)
        if stop_at_first and not v.pronormal:
            break
    return OddIndexScan(g.order(), s.order(), kept, verdicts, complete)


def find_nonpronormal_odd_index(g: PermGroup, cap: int | None = DEFAULT_CAP,
                                max_subgroups: int | None = DEFAULT_MAX_SUBGROUPS) -> SubgroupHandle | None:
    """First odd-index subgroup failing pronormality, or None when all pass.

    Raises :class:`CapExceeded` (with the scan attached as ``partial``) when the
    enumeration was truncated and nothing was found.
    """
    scan = scan_odd_index(g, cap, max_subgroups, stop_at_first=True)
    found = scan.first_nonpronormal()
    if found is None and not scan.complete:
        raise CapExceeded("odd-index search", len(scan.subgroups), max_subgroups or 0, scan)
    return found


def is_self_normalizing_sylow(g: PermGroup, p: int = 2, cap: int | None = DEFAULT_CAP) -> bool:
    s = sylow(g, p, cap)
    return normalizer(g, s, cap).order() == s.order()
