"""Registry of reproducible verification scenarios and their JSON reports.

Each scenario builds its groups from scratch, runs one check, and returns an
:class:`Outcome`.  :func:`run_scenario` wraps that into a :class:`Report`
with timing and cap handling.  Reports serialize with sorted keys and
permutations in 0-based disjoint-cycle notation, so two runs differ only in
``wall_ms``.
"""

from __future__ import annotations

import fnmatch
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from math import gcd
from typing import Any, Callable

from . import constructors as C
from .algebra import Poly, binary_weight, min_poly, odd_part
from .perm import (
    CapExceeded,
    CosetAction,
    Perm,
    PermGroup,
    centralizer,
    core_2,
    normalizer,
    sylow_2,
    subgroup_from_elements,
)
from .pronormal import (
    PreconditionViolated,
    coprime_factorization_check,
    criterion_abelian_complement,
    is_pronormal,
    is_pronormal_sylow,
    odd_index_overgroups,
    scan_odd_index,
    sylow_normalizer_structure,
)

ENV_CAP_ELEMENTS = "PRONORM_CAP_ELEMENTS"


@dataclass(frozen=True)
class Caps:
    elements: int = 5_000_000
    order: int = 200_000
    subgroups: int = 5_000

    @classmethod
    def from_env(cls) -> Caps:
        caps = cls()
        if os.environ.get(ENV_CAP_ELEMENTS):
            caps = replace(caps, elements=int(os.environ[ENV_CAP_ELEMENTS]))
        return caps

    def merged(self, overrides: dict | None) -> Caps:
        if not overrides:
            return self
        known = {k: int(v) for k, v in overrides.items() if k in ("elements", "order", "subgroups") and v is not None}
        return replace(self, **known)


class UnknownScenario(KeyError):
    pass


@dataclass
class Outcome:
    passed: bool | None
    measured: dict[str, Any]
    expected: dict[str, Any] | None = None
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    status: str | None = None


@dataclass
class Scenario:
    id: str
    claim: str
    run: Callable[[Caps], Outcome]
    exploratory: bool = False


@dataclass
class Report:
    id: str
    claim: str
    status: str
    passed: bool
    exploratory: bool
    expected: dict | None
    measured: dict
    witnesses: list
    truncated: bool
    caps: dict
    wall_ms: float

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


REGISTRY: dict[str, Scenario] = {}


def scenario(id: str, claim: str, exploratory: bool = False):
    def deco(fn):
        if id in REGISTRY:
            raise ValueError(f"duplicate scenario id {id}")
        REGISTRY[id] = Scenario(id, claim, fn, exploratory)
        return fn
    return deco


def _admit(g: PermGroup, caps: Caps) -> PermGroup:
    if g.order() > caps.order:
        raise CapExceeded("group order", g.order(), caps.order)
    return g


def perm_str(x: Perm) -> str:
    return str(x)


def _gens(h: PermGroup) -> list[str]:
    return [str(x) for x in h.gens]


def _verdict_witness(h: PermGroup, v, label: str) -> dict:
    w = {"subgroup": label, "subgroup_gens": _gens(h), "degree": h.degree, "pronormal": v.pronormal}
    if v.failure is not None:
        w["failing_x"] = str(v.failure[0])
        w["join_order"] = v.failure[1]
    elif v.witnesses:
        x, j = v.witnesses[-1]
        w["x"] = str(x)
        w["conjugator"] = str(j)
    return w


# -- Sylow normalizer structure --------------------------------------------------------

def _ns_psl2(q: int):
    def run(caps: Caps) -> Outcome:
        g = _admit(C.psl2(q), caps)
        st = sylow_normalizer_structure(g, caps.elements)
        o2 = core_2(st.normalizer, caps.elements)
        quo = CosetAction(st.normalizer, o2, caps.elements).quotient
        measured = {"group_order": g.order(), "ns_order": st.ns_order, "ns_abelian": st.ns_abelian,
                    "o2_order": o2.order(), "o2_exponent": o2.exponent(), "ns_over_o2_order": quo.order(),
                    "index_over_s": st.index_over_s}
        expected = {"ns_order": 12, "ns_abelian": False, "o2_order": 4, "o2_exponent": 2,
                    "ns_over_o2_order": 3}
        passed = all(measured[k] == v for k, v in expected.items())
        return Outcome(passed, measured, expected, [{"sylow_gens": _gens(st.sylow)}])
    return run


for _q in (5, 11, 13):
    scenario(f"norm-syl-psl2-{_q}", "Lemma 3(4): N_G(S) = A4 in L2(q), q = +-3 mod 8, q > 3")(_ns_psl2(_q))


@scenario("norm-syl-psp4-3", "Lemma 3(6): N_G(S)/S elementary abelian of order 3^t in S_4(3), t = binary weight of 2")
def _ns_psp4(caps: Caps) -> Outcome:
    g = _admit(C.psp_group(2, 3), caps)
    st = sylow_normalizer_structure(g, caps.elements)
    t = binary_weight(2)
    measured = {"group_order": g.order(), "s_order": st.s_order, "ns_order": st.ns_order,
                "index_over_s": st.index_over_s, "quotient_abelian": st.quotient_abelian,
                "quotient_exponent": st.quotient_exponent, "t": t}
    expected = {"s_order": 64, "index_over_s": 3 ** t, "quotient_abelian": True, "quotient_exponent": 3}
    passed = all(measured[k] == v for k, v in expected.items())
    return Outcome(passed, measured, expected)


@scenario("norm-syl-l3-3", "Lemma 3(7): N_G(S) = S x C_1 in L_3(3) with |C_1| = (q-1)_{2'} = 1")
def _ns_l33(caps: Caps) -> Outcome:
    g = _admit(C.psl(3, 3), caps)
    st = sylow_normalizer_structure(g, caps.elements)
    c1 = odd_part(3 - 1) // odd_part(gcd(3 - 1, 3))
    measured = {"group_order": g.order(), "s_order": st.s_order, "ns_order": st.ns_order,
                "index_over_s": st.index_over_s, "predicted_index": c1}
    return Outcome(st.index_over_s == c1 == 1, measured, {"index_over_s": 1})


def _ns_symmetric(n: int):
    def run(caps: Caps) -> Outcome:
        g = _admit(C.symmetric(n), caps)
        st = sylow_normalizer_structure(g, caps.elements)
        measured = {"group_order": g.order(), "s_order": st.s_order, "ns_order": st.ns_order,
                    "index_over_s": st.index_over_s}
        return Outcome(st.index_over_s == 1, measured, {"index_over_s": 1})
    return run


for _n in range(4, 9):
    scenario(f"norm-syl-symmetric-{_n}", "Lemma 12(1)(a): Sylow 2-subgroup of S_n is self-normalizing")(_ns_symmetric(_n))


@scenario("norm-syl-dihedral-battery", "Lemma 12(1)(b): Sylow 2-subgroups of dihedral groups are self-normalizing")
def _ns_dihedral(caps: Caps) -> Outcome:
    rows = {}
    for m in range(3, 13):
        st = sylow_normalizer_structure(C.dihedral(m), caps.elements)
        rows[f"D{2 * m}"] = st.index_over_s
    return Outcome(all(v == 1 for v in rows.values()), {"index_over_s": rows}, {"index_over_s": "1 for all"})


@scenario("norm-syl-d-wr-s2", "Lemma 12(1)(c): Sylow 2-subgroup of D wr S_2 is self-normalizing")
def _ns_dwr(caps: Caps) -> Outcome:
    measured = {}
    for m in (3, 4, 5, 6):
        w = C.wreath_product(C.dihedral(m), C.symmetric(2))
        st = sylow_normalizer_structure(_admit(w.group, caps), caps.elements)
        measured[f"D{2 * m} wr S2"] = {"order": st.order, "index_over_s": st.index_over_s}
    return Outcome(all(v["index_over_s"] == 1 for v in measured.values()), measured, {"index_over_s": 1})


# -- wreath battery ---------------------------------------------------------------------

def _wreath_battery(factor: Callable[[], PermGroup], n: int, index3: bool = False):
    def run(caps: Caps) -> Outcome:
        w = C.wreath_product(factor(), C.symmetric(n))
        g = _admit(w.group, caps)
        s = sylow_2(g, caps.elements)
        scan = scan_odd_index(g, caps.elements, caps.subgroups, s=s)
        measured = {"group_order": g.order(), "s_order": s.order(),
                    "odd_index_subgroups": len(scan.subgroups),
                    "subgroup_orders": [h.order() for h in scan.subgroups],
                    "all_pronormal": scan.all_pronormal}
        expected = {"all_pronormal": True}
        if index3:
            ns = normalizer(g, s, caps.elements)
            measured["index_over_s"] = ns.order() // s.order()
            expected["index_over_s"] = 3
        pairs = list(enumerate(zip(scan.subgroups, scan.verdicts)))
        failing = [(i, hv) for i, hv in pairs if not hv[1].pronormal]
        # failures when present, otherwise one conjugator witness per subgroup
        witnesses = [_verdict_witness(h.group, v, f"H{i}") for i, (h, v) in (failing[:3] or pairs)]
        passed = scan.complete and all(measured[k] == v for k, v in expected.items())
        out = Outcome(passed, measured, expected, witnesses)
        if not scan.complete:
            out.status = "truncated"
        return out
    return run


scenario("wreath-pronormal-c3-s2", "Lemma 13 (n=2): odd-index subgroups of C3 wr S2 are pronormal")(
    _wreath_battery(lambda: C.cyclic(3), 2))
scenario("wreath-pronormal-c3-s4", "Lemma 13 (n=4): odd-index subgroups of C3 wr S4 are pronormal")(
    _wreath_battery(lambda: C.cyclic(3), 4))
scenario("wreath-pronormal-a4-s2", "Lemma 14 (n=2): odd-index subgroups of A4 wr S2 are pronormal")(
    _wreath_battery(lambda: C.alternating(4), 2))
scenario("wreath-pronormal-a5-s2", "Lemma 16 (n=2): odd-index subgroups of A5 wr S2 are pronormal; |N_G(S):S| = 3")(
    _wreath_battery(lambda: C.alternating(5), 2, index3=True))
scenario("wreath-pronormal-psl2-5-s2", "Lemma 17 (n=2, q=5): odd-index subgroups of L2(5) wr S2 are pronormal; |N_G(S):S| = 3")(
    _wreath_battery(lambda: C.psl2(5), 2, index3=True))


@scenario("transitive-action-diagonal", "Lemma 8: C_V(H) is the diagonal of V = A^n for transitive H")
def _diag(caps: Caps) -> Outcome:
    measured = {}
    ok = True
    for label, a, top in [("C3 wr S4", C.cyclic(3), C.symmetric(4)), ("C3 wr C4", C.cyclic(3), C.cyclic(4)),
                          ("A4 wr S2", C.alternating(4), C.symmetric(2)), ("S3 wr C3", C.symmetric(3), C.cyclic(3))]:
        w = C.wreath_product(a, top)
        cv = centralizer(w.base, w.top, caps.elements)
        diag = w.diagonal()
        same = cv.same_as(diag)
        measured[label] = {"centralizer_order": cv.order(), "factor_order": a.order(), "equals_diagonal": same}
        ok &= same and cv.order() == a.order()
    return Outcome(ok, measured, {"equals_diagonal": True})


@scenario("zavarn-product", "Lemma 15: odd-index Q in A5 x A5 with full projection onto L_i contains L_i")
def _zavarn(caps: Caps) -> Outcome:
    dp = C.direct_product(C.alternating(5), C.alternating(5))
    g = _admit(dp.group, caps)
    s = sylow_2(g, caps.elements)
    subs = odd_index_overgroups(g, s, caps.elements, caps.subgroups)
    full_proj = 0
    ok = True
    for hnd in subs:
        for i in range(2):
            if dp.project_group(i, hnd.group).order() == 60:
                full_proj += 1
                ok &= dp.embedded[i].is_subgroup_of(hnd.group)
    measured = {"odd_index_subgroups": len(subs), "full_projection_cases": full_proj, "all_contain_factor": ok}
    return Outcome(ok and full_proj > 0, measured, {"all_contain_factor": True})


# -- criterion / coprime batteries -----------------------------------------------------

def _s3_instance():
    g = C.symmetric(3)
    return "S3, V=A3, H=<(0 1)>", PermGroup([Perm.from_cycles(3, [0, 1])], 3), C.alternating(3), g


def _wreath_top_instance(a, top, label, sub=None):
    w = C.wreath_product(a, top)
    h = w.top
    if sub is not None:
        h = PermGroup([w.top_element(x) for x in sub.gens], w.group.degree)
    g = subgroup_from_elements(h.gens + w.base.gens, w.group.degree)
    return label, h, w.base, g


def _affine_instance(linear_gens, label):
    af = C.affine_group(linear_gens)
    return label, af.linear, af.translations, af.group


def criterion_instances():
    from .algebra import Matrix
    inst = [_s3_instance()]
    inst.append(_wreath_top_instance(C.cyclic(3), C.symmetric(2), "C3 wr S2, H=top"))
    inst.append(_wreath_top_instance(C.cyclic(3), C.symmetric(4), "C3 wr S4, H=top S4"))
    inst.append(_wreath_top_instance(C.cyclic(3), C.symmetric(4), "C3 wr S4, H=top D8",
                                     sylow_2(C.symmetric(4))))
    inst.append(_wreath_top_instance(C.cyclic(3), C.symmetric(4), "C3 wr S4, H=top C4", C.cyclic(4)))
    inst.append(_wreath_top_instance(C.cyclic(3), C.symmetric(3), "C3 wr S3, H=top S3"))
    inst.append(_wreath_top_instance(C.cyclic(3), C.symmetric(3), "C3 wr S3, H=top <(0 1)>",
                                     PermGroup([Perm.from_cycles(3, [0, 1])], 3)))
    inst.append(_wreath_top_instance(C.cyclic(2), C.symmetric(2), "C2 wr S2, H=top"))
    inst.append(_wreath_top_instance(C.cyclic(5), C.cyclic(4), "C5 wr C4, H=top"))
    a4 = C.alternating(4)
    inst.append(("A4, V=V4, H=C3", PermGroup([Perm.from_cycles(4, [1, 2, 3])], 4),
                 PermGroup([Perm.from_cycles(4, [0, 1], [2, 3]), Perm.from_cycles(4, [0, 2], [1, 3])], 4), a4))
    inst.append(("S4, V=V4, H=S3", PermGroup([Perm.from_cycles(4, [1, 2]), Perm.from_cycles(4, [1, 2, 3])], 4),
                 PermGroup([Perm.from_cycles(4, [0, 1], [2, 3]), Perm.from_cycles(4, [0, 2], [1, 3])], 4),
                 C.symmetric(4)))
    inst.append(_affine_instance([Matrix.of([[3]], 7)], "AGL1(7) = 7:6, H=C6"))
    inst.append(_affine_instance([Matrix.of([[2]], 7)], "7:3, H=C3"))
    inst.append(_affine_instance([Matrix.of([[6]], 7)], "D14 = 7:2, H=C2"))
    inst.append(_affine_instance([Matrix.of([[2]], 5)], "5:4, H=C4"))
    inst.append(_affine_instance(C.gl_generators(2, 3), "AGL2(3), H=GL2(3)"))
    inst.append(_affine_instance(C.sl_generators(2, 3), "ASL2(3), H=SL2(3)"))
    inst.append(_affine_instance([Matrix.of([[2, 0], [0, 1]], 3)], "3^2:<diag(-1,1)>"))
    inst.append(_affine_instance([Matrix.of([[0, 1], [1, 0]], 3)], "3^2:<swap>"))
    return inst


@scenario("criterion-equivalence-battery", "Lemma 9: H prn G iff U = N_U(H)[H,U] for all H-invariant U <= V")
def _criterion(caps: Caps) -> Outcome:
    rows = {}
    ok = True
    for label, h, v, g in criterion_instances():
        cv = criterion_abelian_complement(h, v, g, caps.elements)
        dv = is_pronormal(h, g, caps.elements)
        rows[label] = {"criterion": cv.holds, "definition": dv.pronormal,
                       "invariant_subgroups": cv.checked_subgroup_count}
        ok &= cv.holds == dv.pronormal
    measured = {"instances": len(rows), "rows": rows,
                "pronormal_count": sum(r["definition"] for r in rows.values())}
    return Outcome(ok and len(rows) >= 10, measured, {"criterion == definition": True, "instances": ">= 10"})


@scenario("lemma11-coprime-battery", "Lemma 11: U = C_U(H)[H,U] when H has a transitive subgroup of order coprime to |A|")
def _coprime_battery(caps: Caps) -> Outcome:
    rows = {}
    ok = True
    for label, a, top in [("C3^2 under S2", C.cyclic(3), C.symmetric(2)), ("C3^4 under S4", C.cyclic(3), C.symmetric(4)),
                          ("C5^2 under S2", C.cyclic(5), C.symmetric(2)), ("C5^4 under S4", C.cyclic(5), C.symmetric(4)),
                          ("C3^4 under C4", C.cyclic(3), C.cyclic(4)), ("C7^2 under S2", C.cyclic(7), C.symmetric(2))]:
        w = C.wreath_product(a, top)
        res = coprime_factorization_check(w.top, w.base, w.blocks, cap=caps.elements)
        rows[label] = {"invariant_subgroups": len(res), "all_factor": all(b for _, b in res)}
        ok &= rows[label]["all_factor"]
    w = C.wreath_product(C.cyclic(2), C.symmetric(2))
    try:
        coprime_factorization_check(w.top, w.base, w.blocks, k=w.top, cap=caps.elements)
        rejected = False
    except PreconditionViolated:
        rejected = True
    rows["C2^2 under C2 (not coprime)"] = {"precondition_rejected": rejected}
    return Outcome(ok and rejected, {"rows": rows}, {"all_factor": True, "non-coprime rejected": True})


# -- odd-order subgroups of PSL2(q) ------------------------------------------------------

def odd_order_subgroup_scan(g: PermGroup, q: int, cap: int) -> dict:
    """Odd-order, q-coprime subgroups generated by pairs of elements.

    Both members of a pair range over representatives of the cyclic subgroups
    generated by odd-order q-coprime elements, since ``<x, y>`` only depends on
    ``<x>`` and ``<y>``.  A pair whose product has even order or order divisible
    by q cannot generate such a subgroup and is skipped before any group is
    built.  Returns counts and whether every subgroup found was abelian and
    centralized by the odd-order part of its normalizer.
    """
    def admissible(k: int) -> bool:
        return k % 2 == 1 and gcd(k, q) == 1

    odd = [x for x in g.elements(cap) if admissible(x.order()) and not x.is_identity()]
    reps = []
    seen: set = set()
    for x in odd:
        if x in seen:
            continue
        seen |= {x ** k for k in range(1, x.order())}
        reps.append(x)
    found: dict = {}
    nonabelian = 0
    pairs = 0
    for i, x in enumerate(reps):
        for y in reps[i:]:
            if not admissible((x * y).order()):
                continue
            pairs += 1
            h = subgroup_from_elements([x, y], g.degree)
            if not admissible(h.order()):
                continue
            fp = h.fingerprint()
            if fp in found:
                continue
            found[fp] = h
            if not h.is_abelian():
                nonabelian += 1
    centralized = True
    for h in found.values():
        n = normalizer(g, h, cap)
        for z in n.elements(cap):
            if z.order() % 2 and not all(z * a == a * z for a in h.gens):
                centralized = False
                break
    return {"odd_elements": len(odd), "cyclic_reps": len(reps), "pairs_built": pairs, "subgroups": len(found), "orders": sorted({h.order() for h in found.values()}),
            "nonabelian": nonabelian, "normalizer_odd_centralizes": centralized}


def _odd_order_scan(q: int):
    def run(caps: Caps) -> Outcome:
        measured = {}
        for label, g in (("PSL2", C.psl2(q)), ("PGL2", C.pgl2(q))):
            measured[label] = odd_order_subgroup_scan(_admit(g, caps), q, caps.elements)
        ok = all(m["nonabelian"] == 0 and m["normalizer_odd_centralizes"] and m["subgroups"] > 0
                 for m in measured.values())
        return Outcome(ok, measured, {"nonabelian": 0, "normalizer_odd_centralizes": True})
    return run


for _q in (5, 11, 13):
    scenario(f"lemma5-oddorder-psl2-{_q}", "Lemma 5: odd-order q'-subgroups of L2(q) <= G <= PGL2(q) are abelian")(_odd_order_scan(_q))


# -- closure and transfer ----------------------------------------------------------------

def _self_normalizing(g: PermGroup, cap: int) -> bool:
    s = sylow_2(g, cap)
    return normalizer(g, s, cap).order() == s.order()


def closure_pairs():
    """(label, Y, X) with X normal in Y."""
    pairs = []
    s4 = C.symmetric(4)
    pairs.append(("S4 / V4", s4, PermGroup([Perm.from_cycles(4, [0, 1], [2, 3]), Perm.from_cycles(4, [0, 2], [1, 3])], 4)))
    dp = C.direct_product(C.symmetric(3), C.symmetric(3))
    pairs.append(("S3 x S3 / S3", dp.group, dp.embedded[0]))
    w = C.wreath_product(C.symmetric(3), C.symmetric(2))
    pairs.append(("S3 wr S2 / S3^2", w.group, w.base))
    d24 = C.dihedral(12)
    r = d24.gens[0]
    pairs.append(("D24 / D12", d24, PermGroup([r ** 2, d24.gens[1]], 12)))
    w2 = C.wreath_product(C.symmetric(4), C.symmetric(2))
    pairs.append(("S4 wr S2 / S4^2", w2.group, w2.base))
    dp2 = C.direct_product(C.symmetric(4), C.dihedral(5))
    pairs.append(("S4 x D10 / D10", dp2.group, dp2.embedded[1]))
    return pairs


@scenario("lemma2-closure-battery", "Lemma 2: the class of groups with self-normalizing Sylow 2-subgroup is extension-closed; odd-index subgroups there are pronormal")
def _closure_battery(caps: Caps) -> Outcome:
    part1 = {}
    ok = True
    for label, y, x in closure_pairs():
        assert x.is_normal_in(y)
        x_in = _self_normalizing(x, caps.elements)
        quo = CosetAction(y, x, caps.elements).quotient
        q_in = _self_normalizing(quo, caps.elements)
        y_in = _self_normalizing(y, caps.elements)
        part1[label] = {"X": x_in, "Y/X": q_in, "Y": y_in}
        if x_in and q_in:
            ok &= y_in
    part2 = {}
    groups = [("S4", C.symmetric(4)), ("S5", C.symmetric(5)), ("S6", C.symmetric(6)),
              ("D6 wr S2", C.wreath_product(C.dihedral(3), C.symmetric(2)).group),
              ("L3(3)", C.psl(3, 3))] + [(f"D{2 * m}", C.dihedral(m)) for m in range(3, 13)]
    for label, g in groups:
        _admit(g, caps)
        if not _self_normalizing(g, caps.elements):
            part2[label] = {"self_normalizing": False}
            continue
        scan = scan_odd_index(g, caps.elements, caps.subgroups)
        part2[label] = {"self_normalizing": True, "odd_index_subgroups": len(scan.subgroups),
                        "all_pronormal": scan.all_pronormal and scan.complete}
        ok &= part2[label]["all_pronormal"]
    return Outcome(ok, {"extension_closure": part1, "odd_index_pronormal": part2},
                   {"Y in class whenever X and Y/X are": True, "all_pronormal": True})


@scenario("lemma6-quotient-transfer", "Lemma 6: odd-index H is pronormal in G iff H/O_2(G) is pronormal in G/O_2(G) (A4 wr S2)")
def _quotient_transfer(caps: Caps) -> Outcome:
    w = C.wreath_product(C.alternating(4), C.symmetric(2))
    g = _admit(w.group, caps)
    o2 = core_2(g, caps.elements)
    act = CosetAction(g, o2, caps.elements)
    gbar = act.quotient
    s = sylow_2(g, caps.elements)
    rows = []
    ok = True
    for hnd in odd_index_overgroups(g, s, caps.elements, caps.subgroups):
        h = hnd.group
        hbar = act.project_group(h)
        up = is_pronormal(h, g, caps.elements).pronormal
        down = is_pronormal(hbar, gbar, caps.elements).pronormal
        rows.append({"order": h.order(), "image_order": hbar.order(), "in_G": up, "in_quotient": down})
        ok &= up == down
    # also a subgroup not of odd index, to exercise part (1) only
    measured = {"o2_order": o2.order(), "quotient_order": gbar.order(), "rows": rows}
    return Outcome(ok and o2.order() == 16 and gbar.order() == 18, measured,
                   {"o2_order": 16, "quotient_order": 18, "in_G == in_quotient": True})


@scenario("lemma7-overgroup-transfer", "Lemma 7: pronormality passes to intermediate subgroups and back up through overgroups of N_G(S)")
def _overgroup_transfer(caps: Caps) -> Outcome:
    checked1 = checked2 = 0
    ok = True
    for label, g in [("S4", C.symmetric(4)), ("C3 wr S2", C.wreath_product(C.cyclic(3), C.symmetric(2)).group),
                     ("C3 wr S3", C.wreath_product(C.cyclic(3), C.symmetric(3)).group),
                     ("A4 wr S2", C.wreath_product(C.alternating(4), C.symmetric(2)).group)]:
        s = sylow_2(g, caps.elements)
        ns = normalizer(g, s, caps.elements)
        subs = [h.group for h in odd_index_overgroups(g, s, caps.elements, caps.subgroups)]
        in_g = {i: is_pronormal(h, g, caps.elements).pronormal for i, h in enumerate(subs)}
        for i, h in enumerate(subs):
            for m in subs:
                if not h.is_subgroup_of(m):
                    continue
                in_m = is_pronormal(h, m, caps.elements).pronormal
                if in_g[i]:
                    checked1 += 1
                    ok &= in_m
                if ns.is_subgroup_of(m) and in_m:
                    checked2 += 1
                    ok &= in_g[i]
    return Outcome(ok, {"part1_triples": checked1, "part2_triples": checked2}, {"implications hold": True})


# -- Frobenius minimal polynomials -------------------------------------------------------

def _maz(p: int, n: int):
    def run(caps: Caps) -> Outcome:
        fr = C.frobenius_fc(p, n)
        act = fr.matrix_action()
        mp = min_poly(fr.complement_matrix)
        target = Poly.x_power_minus_one(n, fr.matrix_field)
        measured = {"group_order": fr.group.order(), "matrix_group_order": act.group.order(),
                    "field": fr.matrix_field, "dimension": fr.complement_matrix.dim,
                    "complement_order": fr.complement_gen.order(), "min_poly": str(mp),
                    "min_poly_coeffs": list(mp.coeffs)}
        passed = (mp == target and act.group.order() == p * n and fr.group.order() == p * n
                  and gcd(fr.matrix_field, p) == 1)
        return Outcome(passed, measured, {"min_poly": str(target), "faithful_order": p * n})
    return run


scenario("maz-frobenius-7-3", "Lemma 4: minimal polynomial of the complement generator is x^n - 1 (F7:C3)")(_maz(7, 3))
scenario("maz-frobenius-5-4", "Lemma 4: minimal polynomial of the complement generator is x^n - 1 (F5:C4)")(_maz(5, 4))


# -- odd-index subgroups of PSp4(3) ------------------------------------------------------

@scenario("theorem2-psp4-3", "Theorem 2: odd-index subgroups of S_4(3) = PSp4(3) are pronormal")
def _psp4_3_odd_index(caps: Caps) -> Outcome:
    g = _admit(C.psp_group(2, 3), caps)
    s = sylow_2(g, caps.elements)
    ns = normalizer(g, s, caps.elements)
    scan = scan_odd_index(g, caps.elements, caps.subgroups, s=s)
    agree = True
    compared = 0
    witnesses = []
    for i, (hnd, v) in enumerate(zip(scan.subgroups, scan.verdicts)):
        d = is_pronormal(hnd.group, g, caps.elements)
        compared += 1
        agree &= d.pronormal == v.pronormal
        witnesses.append(_verdict_witness(hnd.group, v, f"H{i}"))
    measured = {"group_order": g.order(), "s_order": s.order(), "ns_order": ns.order(),
                "odd_index_subgroups": len(scan.subgroups),
                "subgroup_orders": [h.order() for h in scan.subgroups],
                "sylow_route_candidates": [v.candidates for v in scan.verdicts],
                "all_pronormal": scan.all_pronormal, "definition_agrees": agree,
                "definition_compared": compared}
    passed = scan.complete and scan.all_pronormal and agree
    out = Outcome(passed, measured, {"all_pronormal": True, "definition_agrees": True}, witnesses)
    if not scan.complete:
        out.status = "truncated"
    return out


def projective_map(vec: C.MatrixAction, proj: C.MatrixAction) -> Callable[[Perm], Perm]:
    """Sends a permutation of nonzero vectors to the induced permutation of 1-spaces."""
    p = vec.matrices[0].p
    vindex = {v: i for i, v in enumerate(vec.points)}
    pindex = {v: i for i, v in enumerate(proj.points)}
    # the vector index of each projective point, and the point of each vector
    lift = [vindex[pt] for pt in proj.points]
    line = [pindex[C.normalize_point(v, p)] for v in vec.points]
    return lambda x: Perm(line[x[i]] for i in lift)


@scenario("sp-quotient-routes", "PSp4(3) on points equals Sp4(3)/Z on vectors (construction cross-check)")
def _sp_routes(caps: Caps) -> Outcome:
    sp = C.sp_group(2, 3)
    g = _admit(sp.group, caps)
    z = PermGroup([sp.perm_of(C.Matrix.identity(4, 3).scale(-1))], g.degree)
    act = CosetAction(g, z, caps.elements)
    proj = C.sp_group(2, 3, "projective")
    psp = proj.group
    to_points = projective_map(sp, proj)
    # second route: each vector permutation induces a point permutation; it must be
    # constant on cosets of Z and injective across cosets
    images = {}
    consistent = True
    for x in g.elements(caps.elements):
        img = to_points(x)
        k = act.coset_of[x]
        if images.setdefault(k, img) != img:
            consistent = False
    distinct = len(set(images.values()))
    members = all(psp.contains(y) for y in images.values())
    gens_agree = all(to_points(s) == t for s, t in zip(g.gens, psp.gens))
    measured = {"sp_order": g.order(), "center_order": z.order(), "quotient_order": act.quotient_order(),
                "psp_order": psp.order(), "formula": C.order_psp(2, 3), "cosets_to_points_injective": distinct == act.index,
                "constant_on_cosets": consistent, "images_in_psp": members, "generators_agree": gens_agree}
    passed = (act.quotient_order() == psp.order() == C.order_psp(2, 3) == 25920 and consistent
              and distinct == act.index and members and gens_agree)
    return Outcome(passed, measured, {"quotient_order": 25920, "cosets_to_points_injective": True})


@scenario("lemma1-equivalence-battery", "Lemma 1: for H containing a Sylow 2-subgroup S, testing N_G(S) suffices")
def _sylow_route_battery(caps: Caps) -> Outcome:
    rows = {}
    ok = True
    for label, g in battery_groups():
        if g.order() > 2000:
            continue
        s = sylow_2(g, caps.elements)
        ns = normalizer(g, s, caps.elements)
        subs = odd_index_overgroups(g, s, caps.elements, caps.subgroups)
        agree = 0
        for hnd in subs:
            a = is_pronormal(hnd.group, g, caps.elements).pronormal
            b = is_pronormal_sylow(hnd.group, g, s, caps.elements, ns=ns).pronormal
            agree += a == b
        rows[label] = {"order": g.order(), "subgroups": len(subs), "agree": agree}
        ok &= agree == len(subs)
    return Outcome(ok, {"groups": len(rows), "rows": rows}, {"sylow route == definition": True})


def battery_groups() -> list[tuple[str, PermGroup]]:
    out = [("S4", C.symmetric(4)), ("S5", C.symmetric(5)), ("A5", C.alternating(5)),
           ("PSL2(5)", C.psl2(5)), ("PGL2(5)", C.pgl2(5)), ("PSL2(11)", C.psl2(11)), ("PSL2(13)", C.psl2(13)),
           ("C3 wr S2", C.wreath_product(C.cyclic(3), C.symmetric(2)).group),
           ("C3 wr S3", C.wreath_product(C.cyclic(3), C.symmetric(3)).group),
           ("C3 wr S4", C.wreath_product(C.cyclic(3), C.symmetric(4)).group),
           ("A4 wr S2", C.wreath_product(C.alternating(4), C.symmetric(2)).group),
           ("S3 x S3", C.direct_product(C.symmetric(3), C.symmetric(3)).group),
           ("AGL1(7)", C.affine_group([C.Matrix.of([[3]], 7)]).group),
           ("AGL2(3)", C.affine_group(C.gl_generators(2, 3)).group),
           ("C2 wr S2", C.wreath_product(C.cyclic(2), C.symmetric(2)).group)]
    out += [(f"D{2 * m}", C.dihedral(m)) for m in (3, 5, 6, 9, 12)]
    return out


# -- searches and unreachable claims -------------------------------------------------------

def _search(build: Callable[[], PermGroup], expect_none: bool | None):
    def run(caps: Caps) -> Outcome:
        g = _admit(build(), caps)
        scan = scan_odd_index(g, caps.elements, caps.subgroups)
        bad = scan.first_nonpronormal()
        measured = {"group_order": g.order(), "odd_index_subgroups": len(scan.subgroups),
                    "nonpronormal_found": bad is not None,
                    "nonpronormal_count": sum(not v.pronormal for v in scan.verdicts)}
        witnesses = []
        if bad is not None:
            i = scan.subgroups.index(bad)
            witnesses.append(_verdict_witness(bad.group, scan.verdicts[i], f"H{i}"))
            measured["nonpronormal_order"] = bad.order()
        out = Outcome(None if expect_none is None else (not measured["nonpronormal_found"]) == expect_none,
                      measured, None if expect_none is None else {"nonpronormal_found": not expect_none},
                      witnesses)
        if not scan.complete:
            out.status = "truncated"
        return out
    return run


scenario("search-nonpronormal-s4", "Lemma 12(2)(a): no nonpronormal odd-index subgroup in S4")(
    _search(lambda: C.symmetric(4), True))
scenario("search-nonpronormal-c3-wr-s2", "Lemma 13 (n=2): no nonpronormal odd-index subgroup in C3 wr S2")(
    _search(lambda: C.wreath_product(C.cyclic(3), C.symmetric(2)).group, True))
scenario("search-nonpronormal-c3-wr-s3", "exploratory: C3 wr S3 probes n != 2^w in Lemma 13", exploratory=True)(
    _search(lambda: C.wreath_product(C.cyclic(3), C.symmetric(3)).group, None))


@scenario("nonpronormal-psp6-3", "Lemma 10 / Theorem 1: S_6(3) contains a nonpronormal odd-index subgroup")
def _psp6(caps: Caps) -> Outcome:
    order = C.order_psp(3, 3)
    return Outcome(None, {"group_order": order, "elements_cap": caps.elements,
                          "reason": "element scans over PSp6(3) exceed desk-scale caps"},
                   {"nonpronormal_found": True}, status="unreachable")


# -- running --------------------------------------------------------------------------------

def list_scenarios() -> list[dict]:
    return [{"id": s.id, "claim": s.claim, "exploratory": s.exploratory} for s in REGISTRY.values()]


def load_config(path: str | None) -> dict:
    """JSON object mapping scenario id (or ``"default"``) to cap overrides."""
    if not path:
        return {}
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    return data


def caps_for(id: str, overrides: dict | None = None, config: dict | None = None) -> Caps:
    caps = Caps.from_env()
    if config:
        caps = caps.merged(config.get("default")).merged(config.get(id))
    return caps.merged(overrides)


def run_scenario(id: str, overrides: dict | None = None, config: dict | None = None) -> Report:
    if id not in REGISTRY:
        raise UnknownScenario(id)
    sc = REGISTRY[id]
    caps = caps_for(id, overrides, config)
    t0 = time.perf_counter()
    truncated = False
    try:
        out = sc.run(caps)
    except CapExceeded as exc:
        truncated = True
        out = Outcome(None, {"cap_exceeded": exc.what, "needed": exc.needed, "cap": exc.cap})
    wall = (time.perf_counter() - t0) * 1000
    status = out.status
    if status is None:
        if truncated:
            status = "truncated"
        elif out.passed is None:
            status = "pass" if sc.exploratory else "fail"
        else:
            status = "pass" if out.passed else "fail"
    if status == "truncated":
        truncated = True
    passed = status == "pass"
    if status == "fail" and not out.witnesses and out.expected is None:
        out.expected = {"passed": True}
    return Report(id=id, claim=sc.claim, status=status, passed=passed, exploratory=sc.exploratory,
                  expected=out.expected, measured=out.measured, witnesses=out.witnesses,
                  truncated=truncated, caps=asdict(caps), wall_ms=round(wall, 3))


def _run_one(args) -> dict:
    id, overrides, config = args
    return run_scenario(id, overrides, config).to_dict()


def select(pattern: str | None) -> list[str]:
    ids = list(REGISTRY)
    if pattern:
        ids = [i for i in ids if fnmatch.fnmatchcase(i, pattern)]
    return ids


def run_all(pattern: str | None = None, jobs: int = 1, overrides: dict | None = None,
            config: dict | None = None) -> tuple[list[dict], dict]:
    ids = select(pattern)
    work = [(i, overrides, config) for i in ids]
    if jobs > 1 and len(ids) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_one, work))
    else:
        reports = [_run_one(w) for w in work]
    reports.sort(key=lambda r: r["id"])
    summary = summarize(reports)
    return reports, summary


def summarize(reports: list[dict]) -> dict:
    counts = {"pass": 0, "fail": 0, "truncated": 0, "unreachable": 0}
    for r in reports:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    counts["total"] = len(reports)
    return counts


def exit_code(reports: list[dict]) -> int:
    statuses = {r["status"] for r in reports}
    if "fail" in statuses:
        return 1
    if "truncated" in statuses:
        return 2
    return 0


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "wall_ms"}
