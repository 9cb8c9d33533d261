"""Exact scalar and linear algebra substrate.

Rationals are stdlib ``fractions.Fraction`` (big-integer backed, always
canonical).  On top of that this module provides the quadratic field Q(sqrt 2),
dense rational matrices, and univariate polynomials.  Everything here is
immutable and pure; no floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction


def rat(x) -> Fraction:
    """Coerce ints / strings / Fractions to Fraction."""
    return x if isinstance(x, Fraction) else Fraction(x)


def rat_str(x: Fraction) -> str:
    """Render as "p/q", eliding the denominator 1."""
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Q(sqrt 2)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QSqrt2:
    """Element a + b*sqrt(2) of the real quadratic field Q(sqrt 2)."""

    a: Fraction
    b: Fraction

    @staticmethod
    def of(a, b=0) -> "QSqrt2":
        return QSqrt2(rat(a), rat(b))

    def __add__(self, other: "QSqrt2") -> "QSqrt2":
        return QSqrt2(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "QSqrt2") -> "QSqrt2":
        return QSqrt2(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "QSqrt2":
        return QSqrt2(-self.a, -self.b)

    def __mul__(self, other: "QSqrt2") -> "QSqrt2":
        return QSqrt2(self.a * other.a + 2 * self.b * other.b,
                      self.a * other.b + self.b * other.a)

    def conjugate(self) -> "QSqrt2":
        """Galois conjugate over Q: a - b*sqrt2."""
        return QSqrt2(self.a, -self.b)

    def norm(self) -> Fraction:
        """Field norm a^2 - 2 b^2."""
        return self.a * self.a - 2 * self.b * self.b

    def inverse(self) -> "QSqrt2":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt2)")
        return QSqrt2(self.a / n, -self.b / n)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is not rational")
        return self.a

    def __str__(self) -> str:
        if self.b == 0:
            return rat_str(self.a)
        bs = f"{rat_str(self.b)}*sqrt2"
        if self.a == 0:
            return bs
        sign = "+" if self.b > 0 else "-"
        mag = f"{rat_str(abs(self.b))}*sqrt2"
        return f"{rat_str(self.a)}{sign}{mag}"

    @staticmethod
    def parse(text: str) -> "QSqrt2":
        text = text.strip().replace(" ", "")
        if "sqrt2" not in text:
            return QSqrt2(Fraction(text), Fraction(0))
        # split at the sign separating the rational and sqrt2 parts
        core, _, _ = text.partition("*sqrt2")
        # core may be "a+b" / "a-b" / "b"
        for idx in range(len(core) - 1, 0, -1):
            if core[idx] in "+-" and core[idx - 1] not in "+-/*":
                a = Fraction(core[:idx])
                b = Fraction(core[idx:].lstrip("+"))
                return QSqrt2(a, b)
        return QSqrt2(Fraction(0), Fraction(core))


Q2_ZERO = QSqrt2(Fraction(0), Fraction(0))
Q2_ONE = QSqrt2(Fraction(1), Fraction(0))
SQRT2 = QSqrt2(Fraction(0), Fraction(1))
HALF_SQRT2 = QSqrt2(Fraction(0), Fraction(1, 2))  # 1/sqrt2


# ---------------------------------------------------------------------------
# Dense rational matrices
# ---------------------------------------------------------------------------

class Matrix:
    """Immutable dense matrix over Q (rows of Fractions)."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable[Fraction]]):
        rows = tuple(tuple(rat(x) for x in row) for row in data)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "data", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", len(rows[0]) if rows else 0)

    def __setattr__(self, *_):
        raise AttributeError("Matrix is immutable")

    # -- constructors ------------------------------------------------------
    @staticmethod
    def identity(n: int) -> "Matrix":
        return Matrix([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(r: int, c: int) -> "Matrix":
        z = Fraction(0)
        return Matrix([[z] * c for _ in range(r)])

    @staticmethod
    def from_columns(cols: Sequence[Sequence[Fraction]]) -> "Matrix":
        if not cols:
            return Matrix([])
        n = len(cols[0])
        return Matrix([[rat(cols[j][i]) for j in range(len(cols))] for i in range(n)])

    # -- basics ------------------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def column(self, j: int) -> tuple:
        return tuple(self.data[i][j] for i in range(self.rows))

    def transpose(self) -> "Matrix":
        return Matrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.data, other.data)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in row] for row in self.data])

    def scale(self, c) -> "Matrix":
        c = rat(c)
        return Matrix([[c * a for a in row] for row in self.data])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        bt = other.transpose().data
        return Matrix([[sum(a * b for a, b in zip(row, col)) for col in bt] for row in self.data])

    def apply(self, vec: Sequence[Fraction]) -> tuple:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * v for a, v in zip(row, vec)) for row in self.data)

    def __pow__(self, n: int) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("power of non-square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        result = Matrix.identity(self.rows)
        base = self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return all(a == 0 for row in self.data for a in row)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return Matrix([[self.data[i][j] for j in col_idx] for i in row_idx])

    # -- elimination -------------------------------------------------------
    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row-echelon form and pivot column indices."""
        m = [list(row) for row in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            pr = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            pv = m[r][c]
            m[r] = [x / pv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix(m), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> list[tuple]:
        """Basis of the right null space, one vector per free column."""
        R, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        basis = []
        for fc in free:
            v = [Fraction(0)] * self.cols
            v[fc] = Fraction(1)
            for r, pc in enumerate(pivots):
                v[pc] = -R.data[r][fc]
            basis.append(tuple(v))
        return basis

    def solve(self, rhs: Sequence[Fraction]) -> tuple:
        """One solution of self @ x = rhs; raises ValueError if inconsistent."""
        aug = Matrix([list(row) + [rat(b)] for row, b in zip(self.data, rhs)])
        R, pivots = aug.rref()
        if self.cols in pivots:
            raise ValueError("inconsistent linear system")
        x = [Fraction(0)] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = R.data[r][self.cols]
        return tuple(x)

    def inverse(self) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("inverse of non-square matrix")
        n = self.rows
        aug = Matrix([list(self.data[i]) + [Fraction(int(i == j)) for j in range(n)]
                      for i in range(n)])
        R, pivots = aug.rref()
        if len(pivots) < n or pivots[-1] >= n:
            raise ValueError("singular matrix")
        return Matrix([row[n:] for row in R.data])

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        m = [list(row) for row in self.data]
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            pr = next((i for i in range(c, n) if m[i][c] != 0), None)
            if pr is None:
                return Fraction(0)
            if pr != c:
                m[c], m[pr] = m[pr], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    f = m[i][c] * inv
                    m[i] = [x - f * y for x, y in zip(m[i], m[c])]
        return det

    def trace(self) -> Fraction:
        return sum(self.data[i][i] for i in range(self.rows))

    def charpoly(self) -> "Poly":
        """Characteristic polynomial det(xI - M) via Faddeev-LeVerrier."""
        if self.rows != self.cols:
            raise ValueError("charpoly of non-square matrix")
        n = self.rows
        coeffs = [Fraction(0)] * (n + 1)
        coeffs[n] = Fraction(1)
        M = Matrix.identity(n)
        for k in range(1, n + 1):
            M = self @ M
            c = -M.trace() / k
            coeffs[n - k] = c
            if k < n:
                M = M + Matrix.identity(n).scale(c)
        return Poly(coeffs)

    def to_json(self) -> list[list[str]]:
        return [[rat_str(x) for x in row] for row in self.data]

    @staticmethod
    def from_json(data: Sequence[Sequence[str]]) -> "Matrix":
        return Matrix([[Fraction(x) for x in row] for row in data])

    def __repr__(self):
        return f"Matrix({self.rows}x{self.cols})"

    def pretty(self) -> str:
        strs = [[rat_str(x) for x in row] for row in self.data]
        width = max((len(s) for row in strs for s in row), default=1)
        return "\n".join(" ".join(s.rjust(width) for s in row) for row in strs)


def coords_mod_subspace(v: Sequence[Fraction],
                        quotient_basis: Sequence[Sequence[Fraction]],
                        subspace_basis: Sequence[Sequence[Fraction]]) -> tuple:
    """Coordinates c with v - sum c_i q_i in span(subspace_basis).

    Raises ValueError ("not in span") when v is outside the combined span.
    """
    cols = list(quotient_basis) + list(subspace_basis)
    A = Matrix.from_columns(cols)
    try:
        sol = A.solve(v)
    except ValueError:
        raise ValueError("not in span of quotient_basis + subspace_basis")
    return tuple(sol[: len(quotient_basis)])


# ---------------------------------------------------------------------------
# Polynomials over Q (ascending coefficients)
# ---------------------------------------------------------------------------

class Poly:
    """Univariate polynomial with Fraction coefficients, ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, *_):
        raise AttributeError("Poly is immutable")

    @staticmethod
    def from_ints(*coeffs) -> "Poly":
        return Poly(coeffs)

    @staticmethod
    def x_power(k: int) -> "Poly":
        return Poly([0] * k + [1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] - other[k] for k in range(n)])

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly([])
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    def scale(self, c) -> "Poly":
        c = rat(c)
        return Poly([c * a for a in self.coeffs])

    def __pow__(self, n: int) -> "Poly":
        result = Poly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        acc = Fraction(0) if isinstance(x, (int, Fraction)) else None
        if acc is not None:
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return acc
        # matrix evaluation (Cayley-Hamilton tests)
        if isinstance(x, Matrix):
            acc_m = Matrix.zeros(x.rows, x.cols)
            for c in reversed(self.coeffs):
                acc_m = acc_m @ x + Matrix.identity(x.rows).scale(c)
            return acc_m
        raise TypeError(f"cannot evaluate Poly at {type(x)}")

    def derivative(self) -> "Poly":
        return Poly([k * c for k, c in enumerate(self.coeffs)][1:])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        d = other.degree
        lc = other.coeffs[-1]
        while len(r) - 1 >= d and any(c != 0 for c in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            f = r[-1] / lc
            k = len(r) - 1 - d
            q[k] = f
            for i, c in enumerate(other.coeffs):
                r[k + i] -= f * c
        return Poly(q), Poly(r)

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        if a.is_zero():
            return a
        return a.scale(1 / a.coeffs[-1])

    def is_squarefree(self) -> bool:
        return self.gcd(self.derivative()).degree <= 0

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.coeffs[-1])

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def is_palindromic(self) -> bool:
        return self.coeffs == tuple(reversed(self.coeffs))

    def int_coeffs(self) -> list[int]:
        if any(c.denominator != 1 for c in self.coeffs):
            raise ValueError("polynomial has non-integer coefficients")
        return [c.numerator for c in self.coeffs]

    def resultant(self, other: "Poly") -> Fraction:
        """Resultant via the Sylvester matrix determinant."""
        m, n = self.degree, other.degree
        if m < 0 or n < 0:
            return Fraction(0)
        size = m + n
        if size == 0:
            return Fraction(1)
        rows = []
        a = list(reversed(self.coeffs))
        b = list(reversed(other.coeffs))
        for i in range(n):
            rows.append([Fraction(0)] * i + a + [Fraction(0)] * (size - i - m - 1))
        for i in range(m):
            rows.append([Fraction(0)] * i + b + [Fraction(0)] * (size - i - n - 1))
        return Matrix(rows).det()

    def to_json(self) -> list[str]:
        return [rat_str(c) for c in self.coeffs]

    def __repr__(self):
        if self.is_zero():
            return "Poly(0)"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self[k]
            if c == 0:
                continue
            if k == 0:
                terms.append(rat_str(c))
            else:
                cs = "" if c == 1 else ("-" if c == -1 else rat_str(c) + "*")
                terms.append(f"{cs}x^{k}" if k > 1 else f"{cs}x")
        return "Poly(" + " + ".join(terms).replace("+ -", "- ") + ")"
