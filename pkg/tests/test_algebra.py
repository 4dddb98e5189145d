import itertools
import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from pronorm.algebra import (
    AlgebraError,
    FieldElem,
    Matrix,
    Poly,
    binary_weight,
    char_poly,
    check_prime,
    determinant,
    mat_inv,
    mat_mul,
    min_poly,
    nullspace,
    odd_part,
    preserves_form,
    rank,
    symplectic_gram,
    transvection,
    two_part,
)

PRIMES = [2, 3, 5, 7, 11]


def matrices(max_dim=4):
    @st.composite
    def build(draw):
        p = draw(st.sampled_from(PRIMES))
        n = draw(st.integers(1, max_dim))
        rows = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n))
        return Matrix.of(rows, p)
    return build()


def brute_min_poly(m: Matrix) -> tuple[int, ...]:
    """Oracle: smallest k with A^k a GF(p)-combination of lower powers, found by exhaustive search."""
    p, n = m.p, m.dim
    a = sympy.Matrix(m.rows)
    powers = [sympy.eye(n)]
    while True:
        nxt = (powers[-1] * a).applyfunc(lambda x: x % p)
        for coeffs in itertools.product(range(p), repeat=len(powers)):
            combo = sum((c * q for c, q in zip(coeffs, powers)), sympy.zeros(n, n))
            if (combo - nxt).applyfunc(lambda x: x % p) == sympy.zeros(n, n):
                return tuple((-c) % p for c in coeffs) + (1,)
        powers.append(nxt)


# -- field and matrix arithmetic ---------------------------------------------------------

def test_prime_fields_only():
    assert check_prime(7) == 7
    with pytest.raises(AlgebraError, match="extension"):
        check_prime(9)
    with pytest.raises(AlgebraError):
        check_prime(6)
    with pytest.raises(AlgebraError):
        FieldElem(1, 4)


def test_field_elem_arithmetic():
    a, b = FieldElem(3, 7), FieldElem(5, 7)
    assert int(a + b) == 1
    assert int(a * b) == 1
    assert int(a / b) == 3 * pow(5, -1, 7) % 7
    assert int(a.inverse() * a) == 1


def test_identity_product():
    i = Matrix.identity(2, 3)
    assert mat_mul(i, i) == i


def test_hand_multiplication_mod_3():
    a = Matrix.of([[1, 1], [0, 1]], 3)
    b = Matrix.of([[1, 0], [1, 1]], 3)
    assert mat_mul(a, b) == Matrix.of([[2, 1], [1, 1]], 3)


def test_mismatch_rejected():
    with pytest.raises(AlgebraError):
        mat_mul(Matrix.identity(2, 3), Matrix.identity(3, 3))
    with pytest.raises(AlgebraError):
        mat_mul(Matrix.identity(2, 3), Matrix.identity(2, 5))


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_determinant_matches_sympy(m):
    assert determinant(m) == int(sympy.Matrix(m.rows).det()) % m.p


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_inverse_axiom(m):
    if determinant(m) == 0:
        with pytest.raises(AlgebraError):
            mat_inv(m)
        return
    inv = mat_inv(m)
    assert m @ inv == Matrix.identity(m.dim, m.p) == inv @ m
    assert inv == Matrix.of(sympy.Matrix(m.rows).inv_mod(m.p).tolist(), m.p)


def test_rank_and_nullspace():
    vecs = [(1, 2, 0), (2, 4, 0), (0, 0, 1)]
    assert rank(vecs, 5) == 2
    null = nullspace(vecs, 5)
    assert len(null) == 1
    c = null[0]
    assert all(sum(c[i] * vecs[i][k] for i in range(3)) % 5 == 0 for k in range(3))


# -- polynomials ------------------------------------------------------------------------

def test_poly_normalization_and_division():
    f = Poly((1, 0, 1, 0, 0), 3)
    assert f.coeffs == (1, 0, 1) and f.degree == 2
    g = Poly((2, 1), 3)
    q, r = f.divmod(g)
    assert q * g + r == f and r.degree < g.degree


def test_min_poly_identity_and_zero():
    assert min_poly(Matrix.identity(3, 3)) == Poly((-1, 1), 3)
    assert min_poly(Matrix.zero(3, 3)) == Poly((0, 1), 3)


@given(matrices())
@settings(max_examples=120, deadline=None)
def test_min_poly_annihilates_and_divides_char_poly(m):
    mp = min_poly(m)
    assert mp.is_monic()
    assert mp(m) == Matrix.zero(m.dim, m.p)
    cp = char_poly(m)
    assert cp.degree == m.dim
    assert cp.divmod(mp)[1].is_zero()


@given(matrices(max_dim=2))
@settings(max_examples=60, deadline=None)
def test_min_poly_matches_independent_oracle(m):
    assert min_poly(m).coeffs == brute_min_poly(m)


@given(matrices())
@settings(max_examples=100, deadline=None)
def test_char_poly_matches_sympy(m):
    x = sympy.symbols("x")
    ref = sympy.Poly(sympy.Matrix(m.rows).charpoly(x).as_expr(), x, modulus=m.p)
    expected = tuple(int(c) % m.p for c in reversed(ref.all_coeffs()))
    assert char_poly(m) == Poly(expected, m.p)


def test_singer_normalizer_min_poly_over_gf2():
    # x^3 + x + 1 is irreducible over GF(2); the Frobenius map y -> y^2 on GF(8)
    # (basis 1, y, y^2; y^4 = y^2 + y) has order 3 and normalizes a Singer cycle of order 7
    frob = Matrix.of([[1, 0, 0], [0, 0, 1], [0, 1, 1]], 2)
    assert frob ** 3 == Matrix.identity(3, 2) and frob != Matrix.identity(3, 2)
    assert min_poly(frob) == Poly.x_power_minus_one(3, 2)
    assert str(min_poly(frob)) == "x^3 + 1"


# -- symplectic forms ------------------------------------------------------------------

def test_gram_n1_p3():
    assert symplectic_gram(1, 3) == Matrix.of([[0, 1], [2, 0]], 3)


@pytest.mark.parametrize("n,p", [(1, 3), (2, 3), (2, 5), (3, 3)])
def test_gram_skew_and_nondegenerate(n, p):
    j = symplectic_gram(n, p)
    assert j.transpose() == j.scale(-1)
    assert determinant(j) != 0
    assert all(j[i, i] == 0 for i in range(2 * n))


def test_preserves_form_examples():
    j2 = symplectic_gram(1, 3)
    assert preserves_form(Matrix.identity(2, 3), j2)
    assert preserves_form(Matrix.of([[2, 0], [0, 2]], 3), j2)
    j4 = symplectic_gram(2, 3)
    upper = Matrix.of([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], 3)
    assert not preserves_form(upper, j4)
    with pytest.raises(AlgebraError):
        preserves_form(Matrix.identity(2, 3), j4)


def test_preserving_matrices_form_a_group():
    rng = random.Random(20261017)
    j = symplectic_gram(2, 5)
    gens = [transvection(v, c, j) for v, c in [((1, 0, 0, 0), 1), ((0, 1, 0, 0), 2),
                                               ((1, 0, 0, 1), 1), ((0, 0, 1, 1), 3),
                                               ((0, 1, 1, 0), 1)]]
    for _ in range(200):
        a = rng.choice(gens) @ rng.choice(gens) @ rng.choice(gens)
        b = rng.choice(gens) @ rng.choice(gens)
        assert preserves_form(a, j) and preserves_form(b, j)
        assert preserves_form(a @ b, j)
        assert preserves_form(a.inverse(), j)


# -- integer utilities ---------------------------------------------------------------------

def test_odd_part_examples():
    assert odd_part(1) == 1
    assert odd_part(48) == 3
    assert odd_part(25) == 25


def test_binary_weight_examples():
    assert binary_weight(2) == 1
    assert binary_weight(3) == 2
    assert binary_weight(6) == 2


@given(st.integers(1, 10 ** 12))
def test_odd_part_times_two_part(n):
    assert odd_part(n) * two_part(n) == n
    assert odd_part(n) % 2 == 1
    assert two_part(n) & (two_part(n) - 1) == 0
    assert binary_weight(n) == bin(n).count("1")


def test_binary_weight_powers_of_two():
    assert all(binary_weight(2 ** k) == 1 for k in range(21))
