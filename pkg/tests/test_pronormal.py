import itertools

import pytest

from pronorm.algebra import Matrix, binary_weight, two_part
from pronorm.constructors import (
    affine_group,
    alternating,
    cyclic,
    dihedral,
    psl2,
    psp_group,
    symmetric,
    wreath_product,
)
from pronorm.perm import (
    CapExceeded,
    Perm,
    PermGroup,
    commutator_subgroup,
    conjugate_subgroup,
    join,
    sylow_2,
    trivial_group,
)
from pronorm.pronormal import (
    NotAbelian,
    NotInvariant,
    PreconditionViolated,
    are_conjugate_in,
    coprime_factorization_check,
    criterion_abelian_complement,
    find_nonpronormal_odd_index,
    h_invariant_subgroups,
    is_pronormal,
    is_pronormal_sylow,
    odd_index_overgroups,
    overgroups,
    recheck_failure,
    recheck_witness,
    scan_odd_index,
    sylow_normalizer_structure,
)


# -- brute-force oracles ------------------------------------------------------------------

def closure(gens, degree):
    """Element set generated by ``gens`` (plain BFS, no stabilizer chain)."""
    ident = Perm.identity(degree)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = x * s
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def brute_pronormal(h: PermGroup, g: PermGroup) -> bool:
    """Literal definition: for every x, some element of <H, H^x> maps H onto H^x."""
    hset = closure(h.gens, g.degree)
    for x in closure(g.gens, g.degree):
        hx = frozenset(y ** x for y in hset)
        j = closure(list(hset | hx), g.degree)
        if not any(frozenset(y ** w for y in hset) == hx for w in j):
            return False
    return True


def brute_subgroups_containing(g: PermGroup, s: PermGroup) -> set[frozenset]:
    """All subgroups above ``s`` reached by adjoining up to two elements (enough for these groups)."""
    gel = sorted(closure(g.gens, g.degree))
    out = set()
    for a, b in itertools.combinations_with_replacement(gel, 2):
        out.add(closure(list(s.gens) + [a, b], g.degree))
    return out


def transposition(n, a, b):
    return Perm.from_cycles(n, (a, b))


# -- conjugacy inside a join -------------------------------------------------------------------

def test_are_conjugate_in_examples():
    s4 = symmetric(4)
    h = PermGroup([transposition(4, 0, 1)])
    assert are_conjugate_in(h, h, s4).is_identity()
    k = PermGroup([transposition(4, 2, 3)])
    assert are_conjugate_in(h, k, join(h, k)) is None
    g = psl2(5)
    s = sylow_2(g)
    x = next(x for x in g.elements() if not conjugate_subgroup(s, x).same_as(s))
    sx = conjugate_subgroup(s, x)
    w = are_conjugate_in(s, sx, join(s, sx))
    assert w is not None and conjugate_subgroup(s, w).same_as(sx)


# -- definition route ---------------------------------------------------------------------------

def test_normal_subgroup_pronormal():
    s4 = symmetric(4)
    v4 = PermGroup([Perm.from_cycles(4, (0, 1), (2, 3)), Perm.from_cycles(4, (0, 2), (1, 3))])
    v = is_pronormal(v4, s4)
    assert v.pronormal
    assert all(w.is_identity() or recheck_witness(v4, x, w) for x, w in v.witnesses)


def test_transposition_not_pronormal_in_s4():
    s4 = symmetric(4)
    h = PermGroup([transposition(4, 0, 1)])
    v = is_pronormal(h, s4)
    assert not v.pronormal
    x, order = v.failure
    assert order == 4
    assert conjugate_subgroup(h, x).same_as(PermGroup([transposition(4, 2, 3)]))
    assert recheck_failure(h, v)
    assert brute_pronormal(h, s4) is False


def test_sylow_pronormal_in_s4():
    s4 = symmetric(4)
    s = sylow_2(s4)
    v = is_pronormal(s, s4)
    assert v.pronormal and brute_pronormal(s, s4)
    for x, w in v.witnesses:
        assert recheck_witness(s, x, w)


def test_definition_matches_brute_force_on_s4_subgroups():
    s4 = symmetric(4)
    elems = s4.elements()
    seen = set()
    for a, b in itertools.combinations(elems, 2):
        h = PermGroup([a, b], 4)
        fp = h.fingerprint()
        if fp in seen:
            continue
        seen.add(fp)
        assert is_pronormal(h, s4).pronormal == brute_pronormal(h, s4)
    assert len(seen) > 10


def test_precondition_subgroup():
    with pytest.raises(PreconditionViolated):
        is_pronormal(symmetric(4), alternating(4))


# -- Sylow route --------------------------------------------------------------------------------

def test_sylow_route_matches_definition_on_s4():
    s4 = symmetric(4)
    s = sylow_2(s4)
    for hnd in odd_index_overgroups(s4, s):
        assert is_pronormal_sylow(hnd.group, s4, s).pronormal == is_pronormal(hnd.group, s4).pronormal


def test_sylow_route_preconditions():
    s4 = symmetric(4)
    s = sylow_2(s4)
    with pytest.raises(PreconditionViolated):
        is_pronormal_sylow(alternating(4), s4, s)
    with pytest.raises(PreconditionViolated):
        is_pronormal_sylow(s4, s4, PermGroup([transposition(4, 0, 1)]))


@pytest.mark.parametrize("build", [
    lambda: wreath_product(cyclic(3), symmetric(3)).group,
    lambda: wreath_product(cyclic(3), symmetric(2)).group,
    lambda: dihedral(6),
    lambda: psl2(7),
])
def test_sylow_route_matches_definition(build):
    g = build()
    s = sylow_2(g)
    for hnd in odd_index_overgroups(g, s):
        a = is_pronormal(hnd.group, g)
        b = is_pronormal_sylow(hnd.group, g, s)
        assert a.pronormal == b.pronormal
        if g.order() <= 200:
            assert a.pronormal == brute_pronormal(hnd.group, g)


def test_psp4_3_sylow_route_candidates():
    g = psp_group(2, 3)
    s = sylow_2(g)
    v = is_pronormal_sylow(s, g, s)
    assert v.candidates == 192 == 3 * 64


# -- invariant subgroups and the abelian criterion ------------------------------------------

def test_invariant_subgroups_trivial_h():
    c3 = cyclic(3)
    subs = h_invariant_subgroups(trivial_group(3), c3)
    assert [s.order() for s in subs] == [1, 3]


def test_invariant_subgroups_c3_wr_s4():
    w = wreath_product(cyclic(3), symmetric(4))
    subs = h_invariant_subgroups(w.top, w.base)
    orders = sorted(s.order() for s in subs)
    assert orders == [1, 3, 27, 81]
    diag = w.diagonal()
    assert any(s.group.same_as(diag) for s in subs)
    for s in subs:
        assert all(s.group.normalizes(x) for x in w.top.gens)


def test_invariant_subgroups_match_brute_force():
    w = wreath_product(cyclic(3), symmetric(2))
    velems = w.base.elements()
    brute = set()
    for a, b in itertools.combinations_with_replacement(velems, 2):
        u = closure([a, b], w.group.degree)
        if all(frozenset(x ** t for x in u) == u for t in w.top.gens):
            brute.add(u)
    found = {frozenset(s.group.elements()) for s in h_invariant_subgroups(w.top, w.base)}
    assert found == brute and len(found) == 4


def test_invariant_preconditions():
    with pytest.raises(NotAbelian):
        h_invariant_subgroups(trivial_group(3), symmetric(3))
    with pytest.raises(NotInvariant):
        h_invariant_subgroups(symmetric(3), PermGroup([transposition(3, 0, 1)]))


def test_criterion_s3():
    s3, a3 = symmetric(3), alternating(3)
    h = PermGroup([transposition(3, 0, 1)])
    v = criterion_abelian_complement(h, a3, s3)
    assert v.holds and v.checked_subgroup_count == 2
    assert criterion_abelian_complement(s3, trivial_group(3), s3).holds


def test_criterion_failure_recomputable():
    w = wreath_product(cyclic(2), symmetric(2))
    v = criterion_abelian_complement(w.top, w.base, w.group)
    assert not v.holds
    f = v.failing_orders
    assert f["N_U(H)[H,U]"] < f["U"] == v.failing_U.order()
    u = v.failing_U.group
    n_u = {x for x in u.elements() if w.top.normalizes(x)}
    comm = set(commutator_subgroup(w.top, u).elements())
    assert len({a * b for a in n_u for b in comm}) == f["N_U(H)[H,U]"]
    assert (len(n_u), len(comm)) == (f["N_U(H)"], f["[H,U]"])
    assert not is_pronormal(w.top, w.group).pronormal


@pytest.mark.parametrize("a,top", [(cyclic(3), symmetric(2)), (cyclic(3), symmetric(3)),
                                   (cyclic(2), symmetric(2)), (cyclic(5), cyclic(4)),
                                   (cyclic(3), cyclic(2))])
def test_criterion_equals_definition_wreath(a, top):
    w = wreath_product(a, top)
    assert criterion_abelian_complement(w.top, w.base, w.group).holds == is_pronormal(w.top, w.group).pronormal


def test_criterion_equals_definition_affine():
    ag = affine_group([Matrix.of([[3]], 7)])
    crit = criterion_abelian_complement(ag.linear, ag.translations, ag.group)
    assert crit.holds == is_pronormal(ag.linear, ag.group).pronormal == brute_pronormal(ag.linear, ag.group)


def test_criterion_preconditions():
    s4 = symmetric(4)
    v4 = PermGroup([Perm.from_cycles(4, (0, 1), (2, 3)), Perm.from_cycles(4, (0, 2), (1, 3))])
    h = PermGroup([transposition(4, 0, 1)])
    with pytest.raises(PreconditionViolated):
        criterion_abelian_complement(h, v4, s4)


# -- coprime factorization ----------------------------------------------------------------------

def test_coprime_c3_s2():
    w = wreath_product(cyclic(3), symmetric(2))
    res = coprime_factorization_check(w.top, w.base, w.blocks)
    assert len(res) == 4 and all(ok for _, ok in res)


def test_coprime_c3_s4():
    w = wreath_product(cyclic(3), symmetric(4))
    res = coprime_factorization_check(w.top, w.base, w.blocks)
    assert all(ok for _, ok in res)


def test_coprime_violation():
    w = wreath_product(cyclic(2), symmetric(2))
    with pytest.raises(PreconditionViolated):
        coprime_factorization_check(w.top, w.base, w.blocks, k=w.top)
    with pytest.raises(PreconditionViolated):
        coprime_factorization_check(w.top, w.base, w.blocks)


# -- overgroups and structure ------------------------------------------------------------------

def test_overgroups_s4():
    s4 = symmetric(4)
    s = sylow_2(s4)
    subs = odd_index_overgroups(s4, s)
    assert [h.order() for h in subs] == [8, 24]


def test_overgroups_c3_wr_s2():
    w = wreath_product(cyclic(3), symmetric(2))
    g = w.group
    s = sylow_2(g)
    subs = odd_index_overgroups(g, s)
    orders = [h.order() for h in subs]
    assert orders == [2, 6, 6, 18]
    assert all(g.order() // h.order() % 2 == 1 for h in subs)


@pytest.mark.parametrize("build", [lambda: symmetric(4), lambda: wreath_product(cyclic(3), symmetric(2)).group,
                                   lambda: dihedral(6), lambda: alternating(5)])
def test_overgroups_match_brute_force(build):
    g = build()
    s = sylow_2(g)
    ours = {frozenset(h.group.elements()) for h in overgroups(g, s)}
    assert ours == brute_subgroups_containing(g, s)


def test_overgroups_cap_flag():
    g = wreath_product(cyclic(3), symmetric(3)).group
    with pytest.raises(CapExceeded) as exc:
        overgroups(g, sylow_2(g), max_subgroups=3)
    assert exc.value.partial and len(exc.value.partial) >= 3
    scan = scan_odd_index(g, max_subgroups=3)
    assert not scan.complete


def test_sylow_normalizer_structure():
    st = sylow_normalizer_structure(psl2(5))
    assert st.ns_order == 12 and st.index_over_s == 3 and not st.ns_abelian
    st = sylow_normalizer_structure(psp_group(2, 3))
    assert st.index_over_s == 3 == 3 ** binary_weight(2)
    assert st.quotient_abelian and st.quotient_exponent == 3
    st = sylow_normalizer_structure(symmetric(8))
    assert st.index_over_s == 1 and st.s_order == two_part(40320)


def test_find_nonpronormal():
    assert find_nonpronormal_odd_index(symmetric(4)) is None
    assert find_nonpronormal_odd_index(wreath_product(cyclic(3), symmetric(2)).group) is None
    g = wreath_product(cyclic(3), symmetric(3)).group
    bad = find_nonpronormal_odd_index(g)
    assert bad is not None
    assert not brute_pronormal(bad.group, g)


def test_psp4_3_odd_index_subgroups():
    g = psp_group(2, 3)
    scan = scan_odd_index(g)
    assert scan.complete and scan.all_pronormal
    assert sorted(h.order() for h in scan.subgroups) == [64, 192, 192, 576, 960, 25920]
