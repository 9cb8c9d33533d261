"""Symbolic divisor calculus on superelliptic curves w^N = prod (z-z_i)^{k_i}.

Branch points are symbolic labels; all computations are exact exponent
arithmetic.  A monomial differential is

    scalar * prod_i (z - z_i)^{a_i} * w^{-n} * dz^m      (a_i in (1/2)Z)

optionally tensored with one of the three orthonormal Lie-algebra axes.
Orders at the branch places and at infinity come from the local ramification
model; bases of holomorphic m-differentials are assembled per deck character
with sharp lattice bounds (one monomial family per residue class of w), which
yields linearly independent monomials and the exact expected dimensions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .exact import Matrix, rat


@dataclass(frozen=True)
class CurveSpec:
    """Cyclic cover of P^1: w^N = prod over branches (z - z_i)^{k_i}."""

    N: int
    branches: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("cover degree must be >= 2")
        labels = [lb for lb, _ in self.branches]
        if len(set(labels)) != len(labels):
            raise ValueError("branch labels must be distinct")
        if any(k < 1 for _, k in self.branches):
            raise ValueError("branch multiplicities must be >= 1")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lb for lb, _ in self.branches)

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.branches)

    @property
    def K(self) -> int:
        return sum(self.multiplicities)

    def d(self, i: int) -> int:
        return math.gcd(self.N, self.multiplicities[i])

    @property
    def d_inf(self) -> int:
        return math.gcd(self.N, self.K)

    def genus(self) -> int:
        # Riemann-Hurwitz over P^1 with d_i points above each branch place
        two_g_minus_2 = (-2 * self.N
                         + sum(self.N - self.d(i) for i in range(len(self.branches)))
                         + (self.N - self.d_inf))
        if two_g_minus_2 % 2:
            raise AssertionError("parity failure in Riemann-Hurwitz")
        return (two_g_minus_2 + 2) // 2

    def places(self) -> tuple[str, ...]:
        return self.labels + ("inf",)

    def points_above(self, place: str) -> int:
        if place == "inf":
            return self.d_inf
        return self.d(self.labels.index(place))


def ew_curve() -> CurveSpec:
    """y^4 = x (x-1) (x-lambda): the genus-3 surface."""
    return CurveSpec(4, (("0", 1), ("1", 1), ("lambda", 1)))


def plat_curve() -> CurveSpec:
    """w^6 = (z-z1)(z-z2)(z-z3)(z-z4)^3: the genus-4 surface."""
    return CurveSpec(6, (("z1", 1), ("z2", 1), ("z3", 1), ("z4", 3)))


@dataclass(frozen=True)
class MonomialDifferential:
    curve: CurveSpec
    exponents: tuple[Fraction, ...]  # a_i per branch, halves allowed
    w_power: int                     # meaning w^{-n}
    dz_power: int                    # m >= 0
    axis: int | None = None          # 1, 2 or 3: Lie-algebra direction
    scalar: Fraction = Fraction(1)

    def __post_init__(self):
        if len(self.exponents) != len(self.curve.branches):
            raise ValueError("one exponent per branch point required")
        for a in self.exponents:
            if (2 * a).denominator != 1:
                raise ValueError("exponents must lie in (1/2)Z")

    def key(self):
        return (self.exponents, self.w_power, self.dz_power)

    def __str__(self):
        parts = []
        if self.scalar != 1:
            parts.append(f"{self.scalar}*")
        for (lb, _), a in zip(self.curve.branches, self.exponents):
            if a != 0:
                e = f"^{a}" if a != 1 else ""
                parts.append(f"(z-{lb}){e}")
        if self.dz_power:
            parts.append("dz" if self.dz_power == 1 else f"dz^{self.dz_power}")
        if self.w_power:
            parts.append(f"/w^{self.w_power}" if self.w_power > 0
                         else f"*w^{-self.w_power}")
        body = " ".join(parts) if parts else "1"
        return body + (f" (x) u{self.axis}" if self.axis else "")


def monomial(curve: CurveSpec, exponents, w_power: int, dz_power: int,
             axis: int | None = None, scalar=1) -> MonomialDifferential:
    return MonomialDifferential(curve, tuple(rat(a) for a in exponents),
                                w_power, dz_power, axis, rat(scalar))


def order_at(eta: MonomialDifferential, place: str) -> Fraction:
    """Vanishing order at each point above the place (may be half-integral
    for multi-valued sections)."""
    c = eta.curve
    n, m = eta.w_power, eta.dz_power
    if place == "inf":
        e = Fraction(c.N, c.d_inf)
        return (-sum(eta.exponents) * e + Fraction(n * c.K, c.d_inf)
                - m * (e + 1))
    i = c.labels.index(place)
    e = Fraction(c.N, c.d(i))
    return (eta.exponents[i] * e - Fraction(n * c.multiplicities[i], c.d(i))
            + m * (e - 1))


def divisor(eta: MonomialDifferential) -> dict[str, Fraction]:
    return {pl: order_at(eta, pl) for pl in eta.curve.places()}


def degree(eta: MonomialDifferential) -> Fraction:
    """Total divisor degree, counting all points above each place."""
    return sum(order_at(eta, pl) * eta.curve.points_above(pl)
               for pl in eta.curve.places())


def is_holomorphic(eta: MonomialDifferential) -> bool:
    return all(order_at(eta, pl) >= 0 for pl in eta.curve.places())


def multiply(a: MonomialDifferential, b: MonomialDifferential) -> MonomialDifferential:
    """Exponentwise product; Lie-algebra coefficients are dropped (they pair
    only through the bilinear form in the second fundamental form)."""
    if a.curve != b.curve:
        raise ValueError("different curves")
    return MonomialDifferential(
        a.curve,
        tuple(x + y for x, y in zip(a.exponents, b.exponents)),
        a.w_power + b.w_power,
        a.dz_power + b.dz_power,
        None,
        a.scalar * b.scalar,
    )


def inverse_square(omega: MonomialDifferential) -> MonomialDifferential:
    """omega^{-2}, used to divide a quadratic differential by omega^2."""
    return MonomialDifferential(
        omega.curve,
        tuple(-2 * x for x in omega.exponents),
        -2 * omega.w_power,
        -2 * omega.dz_power,
        None,
        1 / (omega.scalar * omega.scalar),
    )


def reduce_by_relation(eta: MonomialDifferential) -> MonomialDifferential:
    """Canonical form with 0 <= n < N.

    When the fractional exponent pattern matches half the branch data (N
    even), the square root of the defining relation trades
    prod (z-z_i)^{k_i/2} for w^{N/2} first; then whole powers of the relation
    bring the w-exponent into range.
    """
    c = eta.curve
    exps = list(eta.exponents)
    n = eta.w_power
    ks = c.multiplicities
    frac = tuple(a - math.floor(a) for a in exps)
    if any(f != 0 for f in frac):
        half = tuple(Fraction(k, 2) - math.floor(Fraction(k, 2)) for k in ks)
        if c.N % 2 == 0 and frac == half:
            exps = [a - Fraction(k, 2) for a, k in zip(exps, ks)]
            n -= c.N // 2
    t = n // c.N  # floor division: brings n into [0, N)
    if t:
        n -= t * c.N
        exps = [a - t * k for a, k in zip(exps, ks)]
    return MonomialDifferential(c, tuple(exps), n, eta.dz_power,
                                eta.axis, eta.scalar)


def is_single_valued(eta: MonomialDifferential) -> bool:
    red = reduce_by_relation(eta)
    return all(a.denominator == 1 for a in red.exponents)


def character(eta: MonomialDifferential) -> tuple[int, ...]:
    """Z/2 monodromy character: doubled fractional exponents of the
    canonical form."""
    red = reduce_by_relation(eta)
    return tuple(int(2 * (a - math.floor(a))) for a in red.exponents)


def display_form(eta: MonomialDifferential) -> MonomialDifferential:
    """Equivalent form with all branch exponents >= 0 (lifting by whole
    powers of the defining relation)."""
    c = eta.curve
    t = 0
    for a, k in zip(eta.exponents, c.multiplicities):
        if a < 0:
            t = max(t, math.ceil(-a / k))
    if t == 0:
        return eta
    return MonomialDifferential(
        c, tuple(a + t * k for a, k in zip(eta.exponents, c.multiplicities)),
        eta.w_power + t * c.N, eta.dz_power, eta.axis, eta.scalar)


# ---------------------------------------------------------------------------
# Bases of holomorphic m-differentials
# ---------------------------------------------------------------------------

def _class_basis(curve: CurveSpec, m: int, n: int,
                 frac_class: tuple[Fraction, ...]) -> list[MonomialDifferential]:
    """All holomorphic monomials with w-power n and exponent residues
    frac_class (0 or 1/2 per branch), as a lattice family: minimal exponents
    plus a power of (z - last_label)."""
    ks = curve.multiplicities
    r = len(ks)
    lows = []
    for i in range(r):
        # order at z_i >= 0  <=>  a_i >= (n k_i - m (N - d_i)) / N
        bound = Fraction(n * ks[i] - m * (curve.N - curve.d(i)), curve.N)
        lo = math.ceil(bound - frac_class[i]) + frac_class[i]
        lows.append(lo)
    # order at infinity >= 0  <=>  sum a_i <= (n K - m (N + d_inf)) / N
    total_max = Fraction(n * curve.K - m * (curve.N + curve.d_inf), curve.N)
    budget = total_max - sum(lows)
    out = []
    j = 0
    while j <= budget:
        exps = list(lows)
        exps[-1] += j
        out.append(MonomialDifferential(curve, tuple(exps), n, m))
        j += 1
    return out


def basis_of_differentials(curve: CurveSpec, m: int) -> list[MonomialDifferential]:
    """Independent holomorphic single-valued monomial m-differentials, grouped
    by w-power class."""
    zero_class = tuple(Fraction(0) for _ in curve.branches)
    out = []
    for n in range(curve.N):
        out.extend(_class_basis(curve, m, n, zero_class))
    for eta in out:
        if not is_holomorphic(eta):
            raise AssertionError(f"basis element {eta} not holomorphic")
    return out


def holomorphic_basis(curve: CurveSpec) -> list[MonomialDifferential]:
    basis = basis_of_differentials(curve, 1)
    g = curve.genus()
    if len(basis) != g:
        raise ValueError(f"holomorphic basis count {len(basis)} != genus {g}")
    return basis


def quadratic_basis(curve: CurveSpec) -> list[MonomialDifferential]:
    basis = basis_of_differentials(curve, 2)
    g = curve.genus()
    if g < 2:
        raise ValueError("quadratic basis requires genus >= 2")
    if len(basis) != 3 * g - 3:
        raise ValueError(f"quadratic basis count {len(basis)} != 3g-3 = {3*g-3}")
    return basis


def in_basis_span(eta: MonomialDifferential) -> bool:
    """Whether a holomorphic single-valued monomial lies in the span of the
    class family returned by the lattice enumeration."""
    red = reduce_by_relation(eta)
    if not is_holomorphic(red) or not is_single_valued(red):
        return False
    fam = _class_basis(red.curve, red.dz_power, red.w_power,
                       tuple(Fraction(0) for _ in red.curve.branches))
    if not fam:
        return False
    lows = fam[0].exponents
    budget = len(fam) - 1
    diffs = [a - lo for a, lo in zip(red.exponents, lows)]
    return all(d >= 0 and d.denominator == 1 for d in diffs) \
        and sum(diffs) <= budget


# ---------------------------------------------------------------------------
# Square-root sections and compatible families
# ---------------------------------------------------------------------------

def _half_twist(eta: MonomialDifferential) -> MonomialDifferential:
    """Multiply by the half-relation unit w^{N/2} / prod (z-z_i)^{k_i/2} = 1
    (the branch choice fixing the square roots), then renormalize the
    w-power into [0, N)."""
    c = eta.curve
    if c.N % 2:
        raise ValueError("half-relation needs even cover degree")
    exps = [a - Fraction(k, 2) for a, k in zip(eta.exponents, c.multiplicities)]
    n = eta.w_power - c.N // 2
    t = n // c.N
    if t:
        n -= t * c.N
        exps = [a - t * k for a, k in zip(exps, c.multiplicities)]
    return MonomialDifferential(c, tuple(exps), n, eta.dz_power,
                                eta.axis, eta.scalar)


def section_presentations(eta: MonomialDifferential) -> list[MonomialDifferential]:
    """The monomial presentations of the section of eta (itself, plus the
    half-relation twist when the cover degree is even)."""
    c = eta.curve
    base = eta
    t = base.w_power // c.N
    if t:
        base = MonomialDifferential(
            c, tuple(a - t * k for a, k in zip(base.exponents, c.multiplicities)),
            base.w_power - t * c.N, base.dz_power, base.axis, base.scalar)
    if c.N % 2:
        return [base]
    return [base, _half_twist(base)]


def section_key(eta: MonomialDifferential):
    """Canonical key identifying a section up to the half-relation."""
    return min(p.key() for p in section_presentations(eta))


def _display_representative(eta: MonomialDifferential) -> MonomialDifferential:
    """Prefer the presentation with all exponents >= 0, then the smaller
    w-power."""
    pres = section_presentations(eta)
    pres.sort(key=lambda p: (not all(a >= 0 for a in p.exponents),
                             p.w_power, p.exponents))
    return pres[0]


def sqrt_sections(curve: CurveSpec) -> list[MonomialDifferential]:
    """Multi-valued 1-forms with integral w-power whose square is a
    single-valued holomorphic quadratic differential, one per section
    (presentations related by the half-relation are identified)."""
    r = len(curve.branches)
    ks = curve.multiplicities
    excluded = {tuple(0 for _ in range(r))}
    if curve.N % 2 == 0:
        excluded.add(tuple(k % 2 for k in ks))
    seen = {}
    for chi in product((0, 1), repeat=r):
        if chi in excluded:
            continue
        frac = tuple(Fraction(x, 2) for x in chi)
        for n in range(curve.N):
            for s in _class_basis(curve, 1, n, frac):
                seen.setdefault(section_key(s), _display_representative(s))
    out = list(seen.values())
    out.sort(key=lambda s: (s.w_power,
                            sum(1 for a in s.exponents if a.denominator == 2),
                            s.exponents))
    return out


def compatible_families(curve: CurveSpec) -> list[list[MonomialDifferential]]:
    """Group the square-root sections into families whose pairwise products
    are single-valued holomorphic quadratic differentials.

    Two sections are compatible iff their characters agree or are exchanged
    by the half-relation class; families are the resulting groups, sorted.
    """
    sections = sqrt_sections(curve)
    kbar = tuple(k % 2 for k in curve.multiplicities) if curve.N % 2 == 0 else None
    groups: dict[tuple, list[MonomialDifferential]] = {}
    for s in sections:
        chi = character(s)
        partner = tuple((a + b) % 2 for a, b in zip(chi, kbar)) if kbar else chi
        key = min(chi, partner)
        groups.setdefault(key, []).append(s)
    for fam in groups.values():
        fam.sort(key=lambda s: (s.w_power, -s.exponents[-1], s.exponents))
    return [groups[k] for k in sorted(groups)]


def compatible_triples(curve: CurveSpec) -> list[tuple[MonomialDifferential, ...]]:
    """All unordered triples of square-root sections whose three pairwise
    products are single-valued holomorphic quadratic differentials."""
    triples = []
    for fam in compatible_families(curve):
        for combo in combinations(fam, 3):
            ok = True
            for x, y in combinations(combo, 2):
                prod_xy = multiply(x, y)
                if not (is_single_valued(prod_xy) and is_holomorphic(prod_xy)):
                    ok = False
                    break
            if ok:
                triples.append(combo)
    return triples


def twisted_hodge_families(curve: CurveSpec) -> list[list[MonomialDifferential]]:
    """The compatible families of size g-1 (the per-axis Hodge dimension)."""
    size = curve.genus() - 1
    fams = [f for f in compatible_families(curve) if len(f) == size]
    return fams


def distinguished_form(curve: CurveSpec) -> MonomialDifferential:
    """The 1-form giving the translation structure: first basis element."""
    return holomorphic_basis(curve)[0]


# ---------------------------------------------------------------------------
# Second fundamental form
# ---------------------------------------------------------------------------

class IndeterminatePairing(ValueError):
    """The symmetry rule cannot decide the value of a pairing integral."""


@dataclass(frozen=True)
class SFFMatrix:
    labels: tuple[str, ...]
    matrix: Matrix
    rank: int
    block_size: int

    def kernel_dimension(self) -> int:
        return self.matrix.cols - self.rank

    def to_json(self) -> dict:
        return {
            "labels": list(self.labels),
            "matrix": self.matrix.to_json(),
            "rank": self.rank,
            "block_size": self.block_size,
        }


def pairing_value(eta1: MonomialDifferential, eta2: MonomialDifferential,
                  omega: MonomialDifferential) -> Fraction:
    """Integral of eta1*eta2 / omega^2 against the area form, in the
    unit-area normalization.

    The product is reduced by the curve relation: a nonzero residual deck
    character makes the integral vanish; a bare constant integrates to that
    constant; anything else is indeterminate here.
    """
    f = reduce_by_relation(multiply(multiply(eta1, eta2), inverse_square(omega)))
    if f.dz_power != 0:
        raise ValueError("pairing requires 1-forms against a 1-form omega")
    if not is_single_valued(f):
        return Fraction(0)
    if f.w_power % f.curve.N != 0:
        return Fraction(0)
    if all(a == 0 for a in f.exponents):
        return f.scalar
    raise IndeterminatePairing(f"cannot integrate {f}")


def second_fundamental_form(families: list[list[MonomialDifferential]],
                            omega: MonomialDifferential) -> SFFMatrix:
    """Pairing matrix of the twisted Hodge basis (families tensored with the
    three orthonormal Lie-algebra axes, family i against axis u_i)."""
    sections = []
    labels = []
    for axis, fam in enumerate(families, start=1):
        for s in fam:
            sections.append((axis, s))
            labels.append(f"{display_form(s)} (x) u{axis}")
    size = len(sections)
    rows = []
    for (ax1, s1) in sections:
        row = []
        for (ax2, s2) in sections:
            if ax1 != ax2:
                row.append(Fraction(0))  # orthogonal Lie-algebra directions
            else:
                row.append(pairing_value(s1, s2, omega))
        rows.append(row)
    M = Matrix(rows)
    if M.transpose() != M:
        raise AssertionError("second fundamental form not symmetric")
    block = len(families[0]) if families else 0
    return SFFMatrix(tuple(labels), M, M.rank(), block)


def sff_for_surface(which: str) -> tuple[SFFMatrix, CurveSpec]:
    curve = {"ew": ew_curve, "plat": plat_curve}[which]()
    fams = twisted_hodge_families(curve)
    if len(fams) != 3:
        raise ValueError(f"expected 3 twisted families, found {len(fams)}")
    omega = distinguished_form(curve)
    return second_fundamental_form(fams, omega), curve


# ---------------------------------------------------------------------------
# The Fermat-quartic coordinate-change identity
# ---------------------------------------------------------------------------

class Cyc16:
    """The ring Q[zeta]/(zeta^8 + 1), zeta a primitive 16th root of unity.

    Contains i = zeta^4 and sqrt2 = zeta^2 - zeta^6.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs):
        cs = [rat(x) for x in coeffs]
        if len(cs) > 8:
            raise ValueError("already-reduced coefficients expected")
        cs += [Fraction(0)] * (8 - len(cs))
        object.__setattr__(self, "c", tuple(cs))

    def __setattr__(self, *_):
        raise AttributeError("Cyc16 is immutable")

    @staticmethod
    def zeta(power: int = 1) -> "Cyc16":
        power %= 16
        sign = 1
        if power >= 8:
            power -= 8
            sign = -1
        return Cyc16([0] * power + [sign])

    @staticmethod
    def rational(x) -> "Cyc16":
        return Cyc16([rat(x)])

    def __add__(self, o):
        return Cyc16([a + b for a, b in zip(self.c, o.c)])

    def __sub__(self, o):
        return Cyc16([a - b for a, b in zip(self.c, o.c)])

    def __neg__(self):
        return Cyc16([-a for a in self.c])

    def __mul__(self, o):
        out = [Fraction(0)] * 15
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    out[i + j] += a * b
        for k in range(14, 7, -1):
            out[k - 8] -= out[k]  # zeta^8 = -1
        return Cyc16(out[:8])

    def __eq__(self, o):
        return isinstance(o, Cyc16) and self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.c)

    def __repr__(self):
        return f"Cyc16{self.c}"


CYC_I = Cyc16.zeta(4)
CYC_SQRT2 = Cyc16.zeta(2) - Cyc16.zeta(6)


def _binom_expand(coeff_x: Cyc16, coeff_z: Cyc16, power: int) -> dict[tuple[int, int], Cyc16]:
    """(coeff_x * X + coeff_z * Z)^power as {(deg_x, deg_z): coefficient}."""
    out = {}
    for k in range(power + 1):
        c = Cyc16.rational(math.comb(power, k))
        cx = Cyc16.rational(1)
        for _ in range(k):
            cx = cx * coeff_x
        cz = Cyc16.rational(1)
        for _ in range(power - k):
            cz = cz * coeff_z
        out[(k, power - k)] = c * cx * cz
    return out


def fermat_ew_identity(perturb: bool = False) -> bool:
    """Coefficientwise check that the quartic coordinate change identifies
    the Fermat quartic with the genus-3 curve: U^4 + V^4 = -XZ(X^2 - Z^2)
    for U = (-iX + Z)/(-8i)^{1/4}, V = (X - iZ)/(8i)^{1/4}.

    Only fourth powers of the root constants enter, so the check runs over
    Q[zeta]/(zeta^8+1).  With ``perturb`` the second denominator is replaced
    by 8 (dropping the i), which must break the identity.
    """
    i = CYC_I
    one = Cyc16.rational(1)
    # (-8i)(i/8) = -i^2 = 1 and (8i)(-i/8) = 1
    inv_m8i = i * Cyc16.rational(Fraction(1, 8))
    inv_8i = -i * Cyc16.rational(Fraction(1, 8))
    if perturb:
        inv_8i = Cyc16.rational(Fraction(1, 8))       # as if the root were 8^{1/4}

    u4 = _binom_expand(-i, one, 4)     # (-iX + Z)^4
    v4 = _binom_expand(one, -i, 4)     # (X - iZ)^4
    total: dict[tuple[int, int], Cyc16] = {}
    for mono, c in u4.items():
        total[mono] = total.get(mono, Cyc16.rational(0)) + c * inv_m8i
    for mono, c in v4.items():
        total[mono] = total.get(mono, Cyc16.rational(0)) + c * inv_8i

    # right side: -XZ(X^2 - Z^2) = -X^3 Z + X Z^3
    expected = {(3, 1): Cyc16.rational(-1), (1, 3): Cyc16.rational(1)}
    for mono in set(total) | set(expected):
        lhs = total.get(mono, Cyc16.rational(0))
        rhs = expected.get(mono, Cyc16.rational(0))
        if lhs != rhs:
            return False
    return True


def fermat_x4_coefficient() -> Cyc16:
    """The X^4 coefficient of U^4 + V^4 (must vanish: the right side has
    no X^4 term)."""
    i = CYC_I
    one = Cyc16.rational(1)
    inv_m8i = i * Cyc16.rational(Fraction(1, 8))
    inv_8i = -i * Cyc16.rational(Fraction(1, 8))
    u4 = _binom_expand(-i, one, 4)
    v4 = _binom_expand(one, -i, 4)
    return u4[(4, 0)] * inv_m8i + v4[(4, 0)] * inv_8i
