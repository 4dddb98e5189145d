"""Prime-field linear algebra: matrices, polynomials, symplectic forms.

Matrices store plain ``int`` residues in ``[0, p)``; :class:`FieldElem` is
available for scalar arithmetic when an explicit carrier is wanted.  Vectors
are rows and matrices act on the right (``v -> v @ m``), matching the
left-to-right composition of permutations in :mod:`pronorm.perm`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class AlgebraError(ValueError):
    """Malformed or incompatible algebraic input."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, math.isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def check_prime(p: int) -> int:
    if not is_prime(p):
        if p > 1 and _is_prime_power(p):
            raise AlgebraError(f"GF({p}) is an extension field; only prime fields are supported")
        raise AlgebraError(f"modulus {p} is not prime")
    return p


def _is_prime_power(n: int) -> bool:
    for d in range(2, n + 1):
        if n % d == 0:
            while n % d == 0:
                n //= d
            return n == 1
    return False


# -- integers ----------------------------------------------------------------

def two_part(n: int) -> int:
    """Largest power of 2 dividing ``n``."""
    if n < 1:
        raise AlgebraError("n must be positive")
    return n & -n


def odd_part(n: int) -> int:
    """``n`` with every factor 2 removed."""
    return n // two_part(n)


def p_part(n: int, p: int) -> int:
    if n < 1:
        raise AlgebraError("n must be positive")
    r = 1
    while n % p == 0:
        n //= p
        r *= p
    return r


def binary_weight(n: int) -> int:
    """Number of summands in the binary expansion of ``n``."""
    if n < 1:
        raise AlgebraError("n must be positive")
    return bin(n).count("1")


# -- scalars -----------------------------------------------------------------

@dataclass(frozen=True)
class FieldElem:
    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise AlgebraError("modulus mismatch")
            return other.value
        return other % self.p

    def __add__(self, other):
        return FieldElem(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.value - self._coerce(other), self.p)

    def __neg__(self):
        return FieldElem(-self.value, self.p)

    def __mul__(self, other):
        return FieldElem(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldElem(self._coerce(other), self.p).inverse()

    def __int__(self):
        return self.value


# -- matrices ----------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    rows: tuple[tuple[int, ...], ...]
    p: int

    def __post_init__(self):
        check_prime(self.p)
        rows = tuple(tuple(int(x) % self.p for x in r) for r in self.rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise AlgebraError("matrix must be square and nonempty")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]], p: int) -> Matrix:
        return cls(tuple(tuple(r) for r in rows), p)

    @classmethod
    def identity(cls, dim: int, p: int) -> Matrix:
        return cls(tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim)), p)

    @classmethod
    def zero(cls, dim: int, p: int) -> Matrix:
        return cls(tuple((0,) * dim for _ in range(dim)), p)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: Matrix) -> Matrix:
        return mat_mul(self, other)

    def __add__(self, other: Matrix) -> Matrix:
        _check_compatible(self, other)
        return Matrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.p)

    def __sub__(self, other: Matrix) -> Matrix:
        _check_compatible(self, other)
        return Matrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)), self.p)

    def scale(self, c: int) -> Matrix:
        return Matrix(tuple(tuple(c * a for a in r) for r in self.rows), self.p)

    def transpose(self) -> Matrix:
        return Matrix(tuple(zip(*self.rows)), self.p)

    def det(self) -> int:
        return determinant(self)

    def inverse(self) -> Matrix:
        return mat_inv(self)

    def is_invertible(self) -> bool:
        return determinant(self) != 0

    def __pow__(self, k: int) -> Matrix:
        if k < 0:
            return mat_inv(self) ** (-k)
        result = Matrix.identity(self.dim, self.p)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        """Row vector times matrix."""
        p = self.p
        return tuple(sum(v[i] * self.rows[i][j] for i in range(self.dim)) % p for j in range(self.dim))

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]}, p={self.p})"


def _check_compatible(a: Matrix, b: Matrix) -> None:
    if a.p != b.p:
        raise AlgebraError(f"modulus mismatch: {a.p} vs {b.p}")
    if a.dim != b.dim:
        raise AlgebraError(f"dimension mismatch: {a.dim} vs {b.dim}")


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    _check_compatible(a, b)
    cols = tuple(zip(*b.rows))
    return Matrix(tuple(tuple(sum(x * y for x, y in zip(r, c)) for c in cols) for r in a.rows), a.p)


def _row_reduce(rows: list[list[int]], p: int, ncols: int) -> tuple[list[list[int]], list[int], int]:
    """Reduced row echelon form in place; returns (rows, pivot columns, det factor sign*scale)."""
    pivots = []
    r = 0
    scale = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            scale = -scale
        lead = rows[r][c] % p
        scale = scale * lead % p
        inv = pow(lead, -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] % p:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots, scale % p


def determinant(m: Matrix) -> int:
    rows, pivots, scale = _row_reduce([list(r) for r in m.rows], m.p, m.dim)
    return scale if len(pivots) == m.dim else 0


def mat_inv(m: Matrix) -> Matrix:
    n, p = m.dim, m.p
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(m.rows)]
    rows, pivots, _ = _row_reduce(aug, p, n)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise AlgebraError("matrix is singular")
    return Matrix(tuple(tuple(r[n:]) for r in rows), p)


def rank(vectors: Sequence[Sequence[int]], p: int) -> int:
    if not vectors:
        return 0
    _, pivots, _ = _row_reduce([list(v) for v in vectors], p, len(vectors[0]))
    return len(pivots)


def nullspace(vectors: Sequence[Sequence[int]], p: int) -> list[tuple[int, ...]]:
    """Basis of ``{c : sum c_i * vectors[i] = 0}``."""
    k = len(vectors)
    # solve over the transpose: columns are the vectors
    cols = [list(col) for col in zip(*vectors)]
    rows, pivots, _ = _row_reduce(cols, p, k)
    free = [c for c in range(k) if c not in pivots]
    basis = []
    for f in free:
        sol = [0] * k
        sol[f] = 1
        for row, pc in zip(rows, pivots):
            sol[pc] = -row[f] % p
        basis.append(tuple(sol))
    return basis


# -- polynomials ---------------------------------------------------------------

@dataclass(frozen=True)
class Poly:
    """Dense polynomial over GF(p); ``coeffs[i]`` is the coefficient of x**i."""

    coeffs: tuple[int, ...]
    p: int

    def __post_init__(self):
        c = [int(x) % self.p for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def x_power_minus_one(cls, n: int, p: int) -> Poly:
        return cls((-1,) + (0,) * (n - 1) + (1,), p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other: Poly) -> Poly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly(tuple(x + y for x, y in zip(a, b)), self.p)

    def __neg__(self) -> Poly:
        return Poly(tuple(-x for x in self.coeffs), self.p)

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def __mul__(self, other: Poly) -> Poly:
        if self.is_zero() or other.is_zero():
            return Poly((), self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out), self.p)

    def divmod(self, other: Poly) -> tuple[Poly, Poly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        quot = [0] * max(0, len(rem) - len(other.coeffs) + 1)
        inv = pow(other.coeffs[-1], -1, p)
        for k in range(len(quot) - 1, -1, -1):
            c = rem[k + other.degree] * inv % p
            quot[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] = (rem[k + i] - c * b) % p
        return Poly(tuple(quot), p), Poly(tuple(rem), p)

    def __call__(self, m: Matrix) -> Matrix:
        """Evaluate at a square matrix (Horner)."""
        acc = Matrix.zero(m.dim, m.p)
        ident = Matrix.identity(m.dim, m.p)
        for c in reversed(self.coeffs):
            acc = acc @ m + ident.scale(c)
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if c == 1 and mono:
                terms.append(mono)
            else:
                terms.append(f"{c}{'*' if mono else ''}{mono}")
        return " + ".join(terms)


def min_poly(a: Matrix) -> Poly:
    """Monic annihilating polynomial of least degree.

    Finds the first power ``a**k`` linearly dependent on ``I, a, ..., a**(k-1)``.
    """
    p, n = a.p, a.dim
    powers = [Matrix.identity(n, p)]
    while True:
        vecs = [sum(m.rows, ()) for m in powers]
        null = nullspace(vecs, p)
        if null:
            # the relation involving the newest power; unique up to scale
            rel = null[0]
            lead = rel[-1]
            inv = pow(lead, -1, p)
            return Poly(tuple(c * inv for c in rel), p)
        powers.append(powers[-1] @ a)


def char_poly(a: Matrix) -> Poly:
    """Characteristic polynomial det(xI - a) via Hessenberg reduction."""
    p, n = a.p, a.dim
    h = [list(r) for r in a.rows]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if h[i][m - 1] % p), None)
        if piv is None:
            continue
        if piv != m:
            h[m], h[piv] = h[piv], h[m]
            for row in h:
                row[m], row[piv] = row[piv], row[m]
        inv = pow(h[m][m - 1], -1, p)
        for i in range(m + 1, n):
            u = h[i][m - 1] * inv % p
            if u:
                h[i] = [(x - u * y) % p for x, y in zip(h[i], h[m])]
                for row in h:
                    row[m] = (row[m] + u * row[i]) % p
    polys = [Poly((1,), p)]
    x = Poly((0, 1), p)
    for m in range(1, n + 1):
        acc = (x - Poly((h[m - 1][m - 1],), p)) * polys[m - 1]
        prod = 1
        for i in range(m - 1, 0, -1):
            prod = prod * h[i][i - 1] % p
            acc = acc - Poly((prod * h[i - 1][m - 1],), p) * polys[i - 1]
        polys.append(acc)
    return polys[n]


# -- symplectic forms ------------------------------------------------------------

def symplectic_gram(n: int, p: int) -> Matrix:
    """Gram matrix of the standard alternating form on GF(p)^(2n).

    ``J = antidiag(1, ..., 1, -1, ..., -1)`` with n entries of each sign, so
    ``B(e_i, e_{2n-1-i}) = 1`` for ``i < n``.
    """
    if n < 1:
        raise AlgebraError("n must be positive")
    check_prime(p)
    d = 2 * n
    rows = [[0] * d for _ in range(d)]
    for i in range(d):
        rows[i][d - 1 - i] = 1 if i < n else -1
    return Matrix.of(rows, p)


def bilinear(j: Matrix, u: Sequence[int], v: Sequence[int]) -> int:
    """``u J v^T``."""
    return sum(u[i] * j.rows[i][k] * v[k] for i in range(j.dim) for k in range(j.dim)) % j.p


def preserves_form(m: Matrix, j: Matrix) -> bool:
    """True iff ``m^T j m == j`` (equivalently ``m j m^T == j`` for alternating j)."""
    _check_compatible(m, j)
    return m.transpose() @ j @ m == j


def transvection(v: Sequence[int], c: int, j: Matrix) -> Matrix:
    """Symplectic transvection ``x -> x + c * B(x, v) * v`` in row convention."""
    p, d = j.p, j.dim
    # B(x, v) = x J v^T, so the matrix is I + c * (J v^T) v
    jv = [sum(j.rows[i][k] * v[k] for k in range(d)) % p for i in range(d)]
    rows = [[int(i == k) + c * jv[i] * v[k] for k in range(d)] for i in range(d)]
    return Matrix.of(rows, p)
