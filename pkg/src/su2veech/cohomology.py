"""Twisted group cohomology via Fox calculus and induced monodromy matrices.

A cocycle u assigns to each generator a vector in R^3 (coordinates in the
adjoint basis u1, u2, u3 of the pure quaternions) subject to the relator
conditions: for every relator r, sum_g Ad(rho(dr/dg)) u(g) = 0, with the Fox
derivative extended linearly over the group ring.  Cocycle vectors are flat
tuples of Fractions, generator-major: entry 3*i + c is the c-th coordinate of
u(generators[i]).

An endomorphism phi fixing the conjugacy class of rho (rho∘phi = h rho h^-1)
induces u -> Ad_{h^-1}(u∘phi) on H^1; its matrix in the chosen basis is the
monodromy matrix of phi.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import Matrix, coords_mod_subspace
from .groups import (Presentation, Substitution, Word, builtin, compose,
                     fox_derivative, w)
from .quaternions import (FiniteGroup, Quaternion, Representation, ad_matrix,
                          binary_octahedral, check_fixed, restrict_along,
                          rho0_gamma)

Vector = tuple[Fraction, ...]


def _unit(n: int, k: int) -> Vector:
    return tuple(Fraction(int(i == k)) for i in range(n))


def fox_jacobian(pres: Presentation, rep: Representation) -> Matrix:
    """Stacked relator Jacobian: 3|relators| x 3|generators| over Q."""
    gens = pres.generators
    blocks: list[list[Matrix]] = []
    for r in pres.relators:
        row = []
        for g in gens:
            fs = fox_derivative(r, g)
            acc = Matrix.zeros(3, 3)
            for word, c in fs.items():
                acc = acc + ad_matrix(rep.evaluate(word)).scale(c)
            row.append(acc)
        blocks.append(row)
    rows = []
    for block_row in blocks:
        for i in range(3):
            rows.append([block_row[j][i, c] for j in range(len(gens)) for c in range(3)])
    return Matrix(rows)


def coboundary_vectors(pres: Presentation, rep: Representation) -> list[Vector]:
    """The vectors d_v(g) = Ad(rho(g)) v - v for v = u1, u2, u3."""
    gens = pres.generators
    ads = [ad_matrix(rep.value(g)) for g in gens]
    out = []
    for k in range(3):
        v = _unit(3, k)
        vec: list[Fraction] = []
        for A in ads:
            img = A.apply(v)
            vec.extend(x - y for x, y in zip(img, v))
        out.append(tuple(vec))
    return out


@dataclass(frozen=True)
class CohomologySpace:
    presentation: Presentation
    rep: Representation
    jacobian: Matrix
    z_basis: tuple[Vector, ...]
    b_basis: tuple[Vector, ...]
    h_basis: tuple[Vector, ...]
    basis_kind: str

    @property
    def dim_z(self) -> int:
        return len(self.z_basis)

    @property
    def dim_b(self) -> int:
        return len(self.b_basis)

    @property
    def dim_h(self) -> int:
        return len(self.h_basis)

    def is_cocycle(self, vec: Vector) -> bool:
        return all(x == 0 for x in self.jacobian.apply(vec))

    def reduce(self, vec: Vector) -> Vector:
        """Coordinates of a cocycle in the H^1 basis, modulo coboundaries."""
        return coords_mod_subspace(vec, self.h_basis, self.b_basis)


def cohomology(pres: Presentation, rep: Representation,
               basis: str = "auto") -> CohomologySpace:
    """Z^1, B^1 and a chosen complement basis for H^1 = Z^1 / B^1.

    ``basis="paper"`` installs the 18 hand-picked Platypus cocycles (only
    valid for the 9-generator Platypus presentation with its quaternionic
    representation); ``"auto"`` picks a deterministic reduced-echelon
    complement of B^1 inside Z^1.
    """
    if not rep.satisfies_relators():
        raise ValueError("representation does not satisfy the relators")
    J = fox_jacobian(pres, rep)
    z_basis = tuple(J.kernel())
    cb = coboundary_vectors(pres, rep)
    Bmat = Matrix.from_columns(cb)
    _, piv = Bmat.rref()
    b_basis = tuple(cb[j] for j in piv)

    if basis == "paper":
        e_vecs, d_vecs = plat_paper_basis(pres)
        for v in e_vecs + d_vecs:
            if any(x != 0 for x in J.apply(v)):
                raise AssertionError("paper basis vector is not a cocycle")
        if Matrix.from_columns(list(e_vecs) + list(b_basis)).rank() \
                != len(e_vecs) + len(b_basis):
            raise AssertionError("paper cocycles are dependent mod coboundaries")
        h_basis = tuple(e_vecs)
    else:
        # echelon complement: pivots of [B | Z] that land in the Z block
        cols = list(b_basis) + list(z_basis)
        _, piv = Matrix.from_columns(cols).rref()
        h_basis = tuple(cols[j] for j in piv if j >= len(b_basis))

    if len(h_basis) != len(z_basis) - len(b_basis):
        raise AssertionError("H^1 basis has the wrong dimension")
    return CohomologySpace(pres, rep, J, z_basis, b_basis, h_basis, basis)


# ---------------------------------------------------------------------------
# The hand-picked Platypus basis
# ---------------------------------------------------------------------------

# values of the 18 basis cocycles on (a..f | g,h,i); entries are (gen, axis)
# with axis in {1,2,3} meaning u1,u2,u3; coefficient +-1
_PLAT_E_DATA: tuple[tuple[tuple[str, int, int], ...], ...] = (
    (("a", 1, 1), ("d", 1, 1)),
    (("a", 3, 1), ("d", 3, -1)),
    (("b", 1, 1), ("f", 1, -1)),
    (("b", 2, 1), ("d", 2, 1)),
    (("b", 3, 1), ("f", 3, 1)),
    (("b", 1, 1), ("c", 1, 1)),
    (("c", 2, 1), ("e", 2, 1)),
    (("c", 3, 1), ("d", 3, 1)),
    (("c", 2, 1), ("d", 2, 1), ("e", 2, 1), ("f", 2, 1)),
    (("g", 1, 1),), (("g", 2, 1),), (("g", 3, 1),),
    (("h", 1, 1),), (("h", 2, 1),), (("h", 3, 1),),
    (("i", 1, 1),), (("i", 2, 1),), (("i", 3, 1),),
)


def plat_paper_basis(pres: Presentation) -> tuple[list[Vector], list[Vector]]:
    """The 18 basis cocycles e_1..e_18 and coboundaries d_1..d_3."""
    gens = pres.generators
    n = 3 * len(gens)

    def build(entries) -> Vector:
        vec = [Fraction(0)] * n
        for (g, axis, coeff) in entries:
            vec[3 * gens.index(g) + (axis - 1)] = Fraction(coeff)
        return tuple(vec)

    e_vecs = [build(entries) for entries in _PLAT_E_DATA]
    d_entries = (
        tuple((g, 1, -2) for g in "bcef"),
        tuple((g, 2, -2) for g in "abdf"),
        tuple((g, 3, -2) for g in "acde"),
    )
    d_vecs = [build(entries) for entries in d_entries]
    return e_vecs, d_vecs


# ---------------------------------------------------------------------------
# Monodromy of Veech-group generators
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonodromyMatrix:
    matrix: Matrix
    endo_name: str
    witness: Quaternion


def pullback_cocycle(space: CohomologySpace, endo: Substitution,
                     vec: Vector) -> Vector:
    """(u∘endo)(g) = sum over Fox terms of endo(g), per generator g."""
    gens = space.presentation.generators
    rep = space.rep
    out: list[Fraction] = []
    for g in gens:
        img = endo.image(g)
        acc = [Fraction(0)] * 3
        for h in gens:
            hv = vec[3 * gens.index(h): 3 * gens.index(h) + 3]
            if all(x == 0 for x in hv):
                continue
            for word, c in fox_derivative(img, h).items():
                contrib = ad_matrix(rep.evaluate(word)).apply(hv)
                acc = [a + c * x for a, x in zip(acc, contrib)]
        out.extend(acc)
    return tuple(out)


def induced_matrix(space: CohomologySpace, endo: Substitution,
                   ambient: FiniteGroup | None = None,
                   endo_name: str = "") -> MonodromyMatrix:
    """Matrix of u -> Ad_{h^-1}(u∘endo) on H^1 in the space's basis.

    The conjugating witness h (rho∘endo = h rho h^-1) is searched in the
    ambient finite group (binary octahedral by default).
    """
    if ambient is None:
        ambient = binary_octahedral()
    ok, h = check_fixed(space.rep, endo, ambient)
    if not ok:
        raise ValueError("endomorphism does not fix the representation class")
    adj = ad_matrix(h.inverse())
    gens = space.presentation.generators
    cols = []
    for e in space.h_basis:
        v = pullback_cocycle(space, endo, e)
        v = tuple(x for i in range(len(gens))
                  for x in adj.apply(v[3 * i: 3 * i + 3]))
        if not space.is_cocycle(v):
            raise AssertionError("pullback left the cocycle space")
        cols.append(space.reduce(v))
    return MonodromyMatrix(Matrix.from_columns(cols), endo_name or endo.name, h)


# index sets (1-based cocycle numbers) of the three invariant blocks
PLAT_BLOCKS: dict[str, tuple[int, ...]] = {
    "U1": (1, 3, 6, 10, 13, 16),
    "U2": (4, 7, 9, 11, 14, 17),
    "U3": (2, 5, 8, 12, 15, 18),
}


def block_permutation(matrix: Matrix,
                      blocks: dict[str, tuple[int, ...]]) -> dict[str, str]:
    """Which block each block maps into; raises if a block's image spreads."""
    idx = {name: tuple(k - 1 for k in ks) for name, ks in blocks.items()}
    out = {}
    for name, cols in idx.items():
        support = {i for j in cols for i in range(matrix.rows)
                   if matrix[i, j] != 0}
        hit = [tname for tname, tcols in idx.items() if support & set(tcols)]
        if len(hit) != 1 or not support <= set(idx[hit[0]]):
            raise ValueError(f"image of block {name} is not a single block")
        out[name] = hit[0]
    return out


def restrict_to_block(matrix: Matrix, block: tuple[int, ...]) -> Matrix:
    """Restriction to the span of the listed (1-based) coordinates.

    Raises if the block is not invariant.
    """
    cols = tuple(k - 1 for k in block)
    other = [i for i in range(matrix.rows) if i not in cols]
    for j in cols:
        for i in other:
            if matrix[i, j] != 0:
                raise ValueError("block is not invariant")
    return matrix.submatrix(cols, cols)


def parse_endo_word(text: str) -> list[tuple[str, int]]:
    """Parse words like "T6S4T4S6" into [("T", 6), ("S", 4), ...]."""
    out = []
    i = 0
    text = text.strip()
    while i < len(text):
        ch = text[i].upper()
        if ch not in ("T", "S"):
            raise ValueError(f"unknown letter {text[i]!r} in word {text!r}")
        i += 1
        j = i
        while j < len(text) and text[j].isdigit():
            j += 1
        if j == i:
            raise ValueError(f"missing exponent after {ch} in {text!r}")
        exp = int(text[i:j])
        if exp % 2:
            raise ValueError("only even powers of T and S act on the class")
        out.append((ch, exp))
        i = j
    return out


def word_monodromy(word: str, registry: dict[str, Matrix],
                   block: tuple[int, ...] | None = None) -> Matrix:
    """Product of registered square-generator matrices for a word like
    "T6S4T4S6"; letters compose right-to-left (the rightmost factor acts
    first), matching pullback composition.  Optionally restricted to an
    invariant coordinate block.
    """
    letters = parse_endo_word(word)
    dim = next(iter(registry.values())).rows if registry else 0
    M = Matrix.identity(dim)
    for (name, exp) in letters:
        base = registry[name]
        M = M @ (base ** (exp // 2))
    if block is not None:
        M = restrict_to_block(M, block)
    return M


def invariant_symplectic_form(mats: list[Matrix]) -> Matrix:
    """A nondegenerate antisymmetric J with M^T J M = J for all given M.

    Raises ValueError when no nondegenerate invariant form exists in the
    solution space.
    """
    n = mats[0].rows
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    var_index = {p: k for k, p in enumerate(pairs)}

    def entry(i, j, coeffs):
        if i == j:
            return Fraction(0)
        return coeffs[var_index[(i, j)]] if i < j else -coeffs[var_index[(j, i)]]

    rows = []
    for M in mats:
        for r in range(n):
            for s in range(n):
                # (M^T J M - J)[r,s] as a linear form in the J variables
                coeffs = [Fraction(0)] * len(pairs)
                for (i, j), k in var_index.items():
                    #  J_{ij} occurs in M^T J M with M[i,r]M[j,s] - M[j,r]M[i,s]
                    coeffs[k] += M[i, r] * M[j, s] - M[j, r] * M[i, s]
                if (r, s) in var_index:
                    coeffs[var_index[(r, s)]] -= 1
                elif (s, r) in var_index:
                    coeffs[var_index[(s, r)]] += 1
                rows.append(coeffs)
    kernel = Matrix(rows).kernel()
    if not kernel:
        raise ValueError("no invariant antisymmetric form")

    def to_matrix(coeffs) -> Matrix:
        return Matrix([[entry(i, j, coeffs) for j in range(n)] for i in range(n)])

    # deterministic search for a nondegenerate element of the solution space
    candidates = list(kernel)
    for a in range(len(kernel)):
        for b in range(a + 1, len(kernel)):
            candidates.append(tuple(x + y for x, y in zip(kernel[a], kernel[b])))
    for coeffs in candidates:
        J = to_matrix(coeffs)
        if J.det() != 0:
            return J
    raise ValueError("invariant forms exist but all found were degenerate")


# ---------------------------------------------------------------------------
# Cached builders for the two bundled settings
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def plat_space(basis: str = "paper") -> CohomologySpace:
    pres = builtin("plat")
    phi = builtin("phi_plat")
    rep = restrict_along(rho0_gamma(builtin("gamma6662")), phi, pres)
    return cohomology(pres, rep, basis=basis)


@lru_cache(maxsize=None)
def plat_monodromy(basis: str = "paper") -> dict[str, MonodromyMatrix]:
    space = plat_space(basis)
    return {
        "T": induced_matrix(space, builtin("t2_plat"), endo_name="T2"),
        "S": induced_matrix(space, builtin("s2_plat"), endo_name="S2"),
    }


@lru_cache(maxsize=None)
def plat_registry(basis: str = "paper") -> dict[str, Matrix]:
    return {k: v.matrix for k, v in plat_monodromy(basis).items()}


@lru_cache(maxsize=None)
def ew_space() -> CohomologySpace:
    """H^1 of the genus-3 surface group with the quaternionic representation
    pulled back through the pillowcase covers."""
    sigma3 = builtin("sigma3")
    chain = compose(builtin("torus_to_sphere"), builtin("sigma3_to_torus"))
    sphere = builtin("sphere4444")
    from .quaternions import I, J, K, ONE
    rho_hat = Representation(sphere, (I, J, K, -ONE))
    rep = restrict_along(rho_hat, chain, sigma3)
    return cohomology(sigma3, rep, basis="auto")


def axis_block_dimensions(space: CohomologySpace) -> tuple[int, int, int]:
    """Per-Pauli-axis H^1 dimensions, valid when every Ad rho(g) is diagonal.

    Splits the cocycle conditions coordinate-wise and computes each rank-one
    summand's cohomology separately.
    """
    gens = space.presentation.generators
    ads = [ad_matrix(space.rep.value(g)) for g in gens]
    for A in ads:
        for i in range(3):
            for j in range(3):
                if i != j and A[i, j] != 0:
                    raise ValueError("adjoint action is not axis-diagonal")
    dims = []
    J = space.jacobian
    n_gen = len(gens)
    for axis in range(3):
        cols = [3 * i + axis for i in range(n_gen)]
        rows = [r for r in range(J.rows)]
        sub = J.submatrix(rows, cols)
        dim_z = n_gen - sub.rank()
        # coboundary in this axis: vector (Ad(g)-1)_axis, nonzero iff some -2
        cb = [ads[i][axis, axis] - 1 for i in range(n_gen)]
        dim_b = 0 if all(x == 0 for x in cb) else 1
        dims.append(dim_z - dim_b)
    return tuple(dims)
