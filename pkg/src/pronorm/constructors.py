"""Named group families realised as permutation groups."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial, gcd, prod
from typing import Sequence

from .algebra import (
    AlgebraError,
    Matrix,
    Poly,
    check_prime,
    is_prime,
    preserves_form,
    symplectic_gram,
    transvection,
)
from .perm import DEFAULT_CAP, CapExceeded, GroupError, Perm, PermGroup


class NonInvertibleGenerator(GroupError):
    pass


class FormViolation(GroupError):
    pass


class UnsupportedParameters(GroupError):
    pass


# -- small families ------------------------------------------------------------------

def symmetric(n: int) -> PermGroup:
    if n < 1:
        raise UnsupportedParameters("n must be positive")
    gens = []
    if n >= 2:
        gens = [Perm.from_cycles(n, [0, 1]), Perm(list(range(1, n)) + [0])]
    return PermGroup(gens, n, name=f"S{n}")


def alternating(n: int) -> PermGroup:
    if n < 1:
        raise UnsupportedParameters("n must be positive")
    gens = [Perm.from_cycles(n, [0, 1, k]) for k in range(2, n)]
    return PermGroup(gens, n, name=f"A{n}")


def cyclic(n: int) -> PermGroup:
    if n < 1:
        raise UnsupportedParameters("n must be positive")
    return PermGroup([Perm(list(range(1, n)) + [0])], n, name=f"C{n}")


def dihedral(m: int) -> PermGroup:
    """Dihedral group of order 2m acting on the m vertices of a polygon."""
    if m < 3:
        raise UnsupportedParameters("dihedral(m) needs m >= 3")
    r = Perm([(i + 1) % m for i in range(m)])
    t = Perm([(-i) % m for i in range(m)])
    return PermGroup([r, t], m, name=f"D{2 * m}")


# -- products ------------------------------------------------------------------------

def _shift(x: Perm, offset: int, degree: int) -> Perm:
    img = list(range(degree))
    for i, j in enumerate(x):
        img[offset + i] = offset + j
    return Perm(img)


@dataclass
class DirectProduct:
    group: PermGroup
    factors: list[PermGroup]
    blocks: list[list[int]]
    embedded: list[PermGroup] = field(default_factory=list)

    def embed(self, i: int, x: Perm) -> Perm:
        return _shift(x, self.blocks[i][0], self.group.degree)

    def project(self, i: int, x: Perm) -> Perm:
        blk = self.blocks[i]
        off = blk[0]
        return Perm(x[p] - off for p in blk)

    def project_group(self, i: int, h: PermGroup) -> PermGroup:
        return PermGroup([self.project(i, g) for g in h.gens], len(self.blocks[i]))


def direct_product(*groups: PermGroup) -> DirectProduct:
    degree = sum(g.degree for g in groups)
    blocks = []
    off = 0
    for g in groups:
        blocks.append(list(range(off, off + g.degree)))
        off += g.degree
    gens = [_shift(x, blk[0], degree) for g, blk in zip(groups, blocks) for x in g.gens]
    dp = DirectProduct(PermGroup(gens, degree, name=" x ".join(g.name or "?" for g in groups)),
                       list(groups), blocks)
    dp.embedded = [PermGroup([_shift(x, blk[0], degree) for x in g.gens], degree)
                   for g, blk in zip(groups, blocks)]
    return dp


@dataclass
class WreathProduct:
    """``A wr T`` in its imprimitive action on ``n * deg(A)`` points.

    Block ``i`` is ``{i*d, ..., i*d + d - 1}``.  A top permutation ``pi`` sends
    block ``i`` to block ``i^pi``, which realises
    ``(x_1, ..., x_n)^pi = (x_{1 pi^-1}, ..., x_{n pi^-1})``.
    """

    group: PermGroup
    factor: PermGroup
    top_action: PermGroup
    blocks: list[list[int]]
    base_factors: list[PermGroup]
    base: PermGroup
    top: PermGroup

    @property
    def n(self) -> int:
        return len(self.blocks)

    def base_element(self, coords: Sequence[Perm]) -> Perm:
        d = self.factor.degree
        img = []
        for i, x in enumerate(coords):
            img.extend(i * d + j for j in x)
        return Perm(img)

    def top_element(self, pi: Perm) -> Perm:
        d = self.factor.degree
        return Perm(pi[i] * d + j for i in range(self.n) for j in range(d))

    def project(self, i: int, x: Perm) -> Perm:
        """Coordinate ``i`` of a base element."""
        d = self.factor.degree
        return Perm(x[i * d + j] - i * d for j in range(d))

    def project_group(self, i: int, h: PermGroup) -> PermGroup:
        return PermGroup([self.project(i, g) for g in h.gens], self.factor.degree)

    def coordinates(self, x: Perm) -> list[Perm]:
        return [self.project(i, x) for i in range(self.n)]

    def diagonal(self) -> PermGroup:
        return PermGroup([self.base_element([x] * self.n) for x in self.factor.gens], self.group.degree)


def wreath_product(a: PermGroup, top: PermGroup) -> WreathProduct:
    n, d = top.degree, a.degree
    if n < 1:
        raise UnsupportedParameters("top group must act on at least one point")
    degree = n * d
    ident = a.identity()

    def base_elem(i, x):
        coords = [ident] * n
        coords[i] = x
        img = []
        for k, y in enumerate(coords):
            img.extend(k * d + j for j in y)
        return Perm(img)

    def top_elem(pi):
        return Perm(pi[i] * d + j for i in range(n) for j in range(d))

    base_factors = [PermGroup([base_elem(i, x) for x in a.gens], degree) for i in range(n)]
    base = PermGroup([base_elem(i, x) for i in range(n) for x in a.gens], degree)
    top_copy = PermGroup([top_elem(pi) for pi in top.gens], degree)
    # first factor plus top suffices when top is transitive; keep all for safety
    group = PermGroup(base.gens + top_copy.gens, degree,
                      name=f"{a.name or 'A'} wr {top.name or 'T'}")
    return WreathProduct(group, a, top, [list(range(i * d, (i + 1) * d)) for i in range(n)],
                         base_factors, base, top_copy)


# -- matrix groups ---------------------------------------------------------------------

def _nonzero_vectors(dim: int, p: int) -> list[tuple[int, ...]]:
    return [v for v in itertools.product(range(p), repeat=dim) if any(v)]


def normalize_point(v: Sequence[int], p: int) -> tuple[int, ...]:
    lead = next(x for x in v if x)
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in v)


@dataclass
class MatrixAction:
    group: PermGroup
    points: list[tuple[int, ...]]
    matrices: list[Matrix]
    action: str

    def perm_of(self, m: Matrix) -> Perm:
        index = {v: i for i, v in enumerate(self.points)}
        return _matrix_perm(m, self.points, index, self.action)


def _matrix_perm(m: Matrix, points, index, action: str) -> Perm:
    p = m.p
    if action == "vectors":
        return Perm(index[m.apply(v)] for v in points)
    return Perm(index[normalize_point(m.apply(v), p)] for v in points)


def matrix_group(gens: Sequence[Matrix], action: str = "vectors", cap: int | None = DEFAULT_CAP,
                 name: str | None = None) -> MatrixAction:
    """Permutation group induced by matrices acting on nonzero vectors or on 1-spaces."""
    if not gens:
        raise GroupError("need at least one generator")
    dim, p = gens[0].dim, gens[0].p
    if any(m.dim != dim or m.p != p for m in gens):
        raise AlgebraError("generators must share dimension and modulus")
    for m in gens:
        if not m.is_invertible():
            raise NonInvertibleGenerator(f"singular generator {m!r}")
    size = p ** dim - 1 if action == "vectors" else (p ** dim - 1) // (p - 1)
    if action not in ("vectors", "projective"):
        raise GroupError(f"unknown action {action!r}")
    if cap is not None and size > cap:
        raise CapExceeded("matrix action domain", size, cap)
    points = _nonzero_vectors(dim, p)
    if action == "projective":
        points = [v for v in points if next(x for x in v if x) == 1]
    index = {v: i for i, v in enumerate(points)}
    perms = [_matrix_perm(m, points, index, action) for m in gens]
    return MatrixAction(PermGroup(perms, len(points), name=name), points, list(gens), action)


def elementary(dim: int, i: int, j: int, c: int, p: int) -> Matrix:
    rows = [[int(a == b) for b in range(dim)] for a in range(dim)]
    rows[i][j] = c
    return Matrix.of(rows, p)


def primitive_root(p: int) -> int:
    check_prime(p)
    if p == 2:
        return 1
    factors = {q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)}
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise AssertionError("unreachable")


def sl_generators(n: int, p: int) -> list[Matrix]:
    return [elementary(n, i, j, 1, p) for i in range(n) for j in range(n) if i != j]


def gl_generators(n: int, p: int) -> list[Matrix]:
    d = [[int(a == b) for b in range(n)] for a in range(n)]
    d[0][0] = primitive_root(p)
    return sl_generators(n, p) + [Matrix.of(d, p)]


def order_gl(n: int, q: int) -> int:
    return prod(q ** n - q ** i for i in range(n))


def order_sl(n: int, q: int) -> int:
    return order_gl(n, q) // (q - 1)


def order_psl(n: int, q: int) -> int:
    return order_sl(n, q) // gcd(n, q - 1)


def order_sp(n: int, q: int) -> int:
    """``|Sp_{2n}(q)| = q^(n^2) * prod_{i=1..n} (q^(2i) - 1)``."""
    return q ** (n * n) * prod(q ** (2 * i) - 1 for i in range(1, n + 1))


def order_psp(n: int, q: int) -> int:
    return order_sp(n, q) // gcd(2, q - 1)


def _require_order(g: PermGroup, expected: int, what: str) -> PermGroup:
    if g.order() != expected:
        raise FormViolation(f"{what}: constructed order {g.order()} != {expected}")
    return g


def sl(n: int, p: int, action: str = "vectors", cap: int | None = DEFAULT_CAP) -> MatrixAction:
    act = matrix_group(sl_generators(n, p), action, cap, name=f"SL{n}({p})" if action == "vectors" else f"L{n}({p})")
    expected = order_sl(n, p) if action == "vectors" else order_psl(n, p)
    _require_order(act.group, expected, act.group.name)
    return act


def psl(n: int, p: int, cap: int | None = DEFAULT_CAP) -> PermGroup:
    return sl(n, p, "projective", cap).group


def gl(n: int, p: int, action: str = "vectors", cap: int | None = DEFAULT_CAP) -> MatrixAction:
    act = matrix_group(gl_generators(n, p), action, cap, name=f"GL{n}({p})")
    expected = order_gl(n, p) if action == "vectors" else order_gl(n, p) // (p - 1)
    _require_order(act.group, expected, act.group.name)
    return act


MAX_PSL2_Q = 61


def _check_psl2_q(q: int) -> None:
    if not is_prime(q) or q == 2 or q > MAX_PSL2_Q:
        raise UnsupportedParameters(f"psl2/pgl2 need an odd prime q <= {MAX_PSL2_Q}, got {q}")


def psl2(q: int) -> PermGroup:
    """PSL_2(q) on the q+1 points of the projective line."""
    _check_psl2_q(q)
    g = sl(2, q, "projective").group
    g.name = f"PSL2({q})"
    return g


def pgl2(q: int) -> PermGroup:
    _check_psl2_q(q)
    g = gl(2, q, "projective").group
    g.name = f"PGL2({q})"
    return g


def symplectic_generators(n: int, p: int) -> list[Matrix]:
    """Transvections along ``e_i`` and ``e_i + e_j`` for the standard Gram form."""
    j = symplectic_gram(n, p)
    d = 2 * n
    vecs = []
    for i in range(d):
        vecs.append(tuple(int(k == i) for k in range(d)))
    for a, b in itertools.combinations(range(d), 2):
        vecs.append(tuple(int(k in (a, b)) for k in range(d)))
    gens = [transvection(v, 1, j) for v in vecs]
    for m in gens:
        if not preserves_form(m, j):
            raise FormViolation(f"generator {m!r} does not preserve the form")
    return gens


def sp_group(n: int, p: int, action: str = "vectors", cap: int | None = DEFAULT_CAP) -> MatrixAction:
    """Sp_{2n}(p) on nonzero vectors (or PSp on points with ``action='projective'``)."""
    check_prime(p)
    if p == 2:
        raise UnsupportedParameters("symplectic groups need odd p")
    act = matrix_group(symplectic_generators(n, p), action, cap,
                       name=f"Sp{2 * n}({p})" if action == "vectors" else f"PSp{2 * n}({p})")
    expected = order_sp(n, p) if action == "vectors" else order_psp(n, p)
    _require_order(act.group, expected, act.group.name)
    return act


def psp_group(n: int, p: int, cap: int | None = DEFAULT_CAP) -> PermGroup:
    return sp_group(n, p, "projective", cap).group


# -- Frobenius groups ----------------------------------------------------------------

def _mult_order(a: int, p: int) -> int:
    k, x = 1, a % p
    while x != 1:
        x = x * a % p
        k += 1
    return k


def _poly_mulmod(a: list[int], b: list[int], f: list[int], r: int) -> list[int]:
    n = len(f) - 1
    out = [0] * (2 * n)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % r
    for k in range(len(out) - 1, n - 1, -1):
        c = out[k]
        if c:
            for i in range(n + 1):
                out[k - n + i] = (out[k - n + i] - c * f[i]) % r
    return out[:n]


def _poly_powmod(a: list[int], e: int, f: list[int], r: int) -> list[int]:
    n = len(f) - 1
    result = [1] + [0] * (n - 1)
    while e:
        if e & 1:
            result = _poly_mulmod(result, a, f, r)
        a = _poly_mulmod(a, a, f, r)
        e >>= 1
    return result


def _irreducible(n: int, r: int) -> list[int]:
    """First monic irreducible of degree n over GF(r) (by absence of lower-degree factors)."""
    for tail in itertools.product(range(r), repeat=n):
        f = list(reversed(tail)) + [1]
        if f[0] == 0:
            continue
        fp = Poly(tuple(f), r)
        ok = True
        for d in range(1, n // 2 + 1):
            for gt in itertools.product(range(r), repeat=d):
                g = Poly(tuple(reversed(gt)) + (1,), r)
                if fp.divmod(g)[1].is_zero():
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return f
    raise AssertionError("no irreducible polynomial found")


@dataclass
class FrobeniusGroup:
    """Affine group ``x -> a*x + b`` over GF(p), ``a`` in the order-n subgroup."""

    group: PermGroup
    kernel: PermGroup
    complement: PermGroup
    kernel_gen: Perm
    complement_gen: Perm
    p: int
    n: int
    matrix_field: int
    kernel_matrix: Matrix
    complement_matrix: Matrix

    def matrix_action(self) -> MatrixAction:
        return matrix_group([self.kernel_matrix, self.complement_matrix], "vectors")


def frobenius_fc(p: int, n: int, max_field: int = 50) -> FrobeniusGroup:
    """Frobenius group of order p*n with a faithful matrix form in coprime characteristic.

    The matrix form lives on GF(r^n) viewed as GF(r)^n, with r a prime whose
    multiplicative order mod p is exactly n: the kernel acts as multiplication
    by an element of order p and the complement as the Frobenius map y -> y^r.
    """
    check_prime(p)
    if n <= 1 or (p - 1) % n:
        raise UnsupportedParameters(f"need n > 1 dividing p-1, got p={p}, n={n}")
    w = primitive_root(p)
    a = pow(w, (p - 1) // n, p)
    translate = Perm([(x + 1) % p for x in range(p)])
    scale = Perm([(a * x) % p for x in range(p)])
    group = PermGroup([translate, scale], p, name=f"F{p}:C{n}")
    kernel = PermGroup([translate], p)
    comp = PermGroup([scale], p)

    r = next((r for r in range(2, max_field) if is_prime(r) and r != p and _mult_order(r, p) == n), None)
    if r is None:
        raise UnsupportedParameters(f"no prime r < {max_field} with multiplicative order {n} mod {p}")
    f = _irreducible(n, r)
    # element of order p in GF(r^n)^*
    m = r ** n - 1
    omega = None
    for tail in itertools.product(range(r), repeat=n):
        x = list(reversed(tail))
        if not any(x):
            continue
        y = _poly_powmod(x, m // p, f, r)
        if y != [1] + [0] * (n - 1):
            omega = y
            break
    assert omega is not None

    def basis(k):
        return [int(i == k) for i in range(n)]

    mult_rows = [_poly_mulmod(basis(k), omega, f, r) for k in range(n)]
    frob_rows = [_poly_powmod(basis(k), r, f, r) for k in range(n)]
    return FrobeniusGroup(group, kernel, comp, translate, scale, p, n, r,
                          Matrix.of(mult_rows, r), Matrix.of(frob_rows, r))


def classical_orders() -> dict[str, int]:
    """Reference orders used by the acceptance checks."""
    return {
        "PSp4(3)": order_psp(2, 3),
        "PSL2(5)": order_psl(2, 5),
        "PSL2(11)": order_psl(2, 11),
        "PSL2(13)": order_psl(2, 13),
        "C3 wr S4": 3 ** 4 * factorial(4),
    }


@dataclass
class AffineGroup:
    """``x -> x M + b`` on GF(p)^dim for M in a given matrix group."""

    group: PermGroup
    translations: PermGroup
    linear: PermGroup
    points: list[tuple[int, ...]]


def affine_group(linear_gens: Sequence[Matrix], name: str | None = None) -> AffineGroup:
    dim, p = linear_gens[0].dim, linear_gens[0].p
    points = list(itertools.product(range(p), repeat=dim))
    index = {v: i for i, v in enumerate(points)}
    lin = [Perm(index[m.apply(v)] for v in points) for m in linear_gens]
    trans = []
    for k in range(dim):
        e = tuple(int(i == k) for i in range(dim))
        trans.append(Perm(index[tuple((a + b) % p for a, b in zip(v, e))] for v in points))
    deg = len(points)
    return AffineGroup(PermGroup(trans + lin, deg, name=name), PermGroup(trans, deg),
                       PermGroup(lin, deg), points)
