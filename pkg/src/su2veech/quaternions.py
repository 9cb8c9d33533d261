"""Exact unit quaternions over Q(sqrt2) and the finite subgroups of SU(2).

The SU(2) identification is the standard one: q0 + q1*i + q2*j + q3*k maps to
[[q0 + i q1, i q2 - q3], [i q2 + q3, q0 - i q1]], so that the basic
quaternions are the Pauli-type matrices i = diag(i, -i), j = [[0,i],[i,0]],
k = [[0,-1],[1,0]].  The adjoint action on the pure quaternions is expressed
in the ordered basis u1 = j, u2 = k, u3 = i.

Covers: the quaternion group Q (order 8), the binary tetrahedral group BTet
(order 24), the binary octahedral group BOct (order 48), representations of
finitely presented groups into these, and the counting / conjugation pipeline
over Hom(Gamma, BTet).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import Matrix, QSqrt2, Q2_ONE, Q2_ZERO, rat
from .groups import Presentation, Substitution, Word


@dataclass(frozen=True)
class Quaternion:
    """q0 + q1*i + q2*j + q3*k with components in Q(sqrt2)."""

    q0: QSqrt2
    q1: QSqrt2
    q2: QSqrt2
    q3: QSqrt2

    @staticmethod
    def of(q0, q1=0, q2=0, q3=0) -> "Quaternion":
        def c(x):
            if isinstance(x, QSqrt2):
                return x
            return QSqrt2(rat(x), Fraction(0))
        return Quaternion(c(q0), c(q1), c(q2), c(q3))

    def __mul__(self, o: "Quaternion") -> "Quaternion":
        a, b, c, d = self.q0, self.q1, self.q2, self.q3
        e, f, g, h = o.q0, o.q1, o.q2, o.q3
        return Quaternion(
            a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g - b * h + c * e + d * f,
            a * h + b * g - c * f + d * e,
        )

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.q0, -self.q1, -self.q2, -self.q3)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.q0, -self.q1, -self.q2, -self.q3)

    def norm_sq(self) -> QSqrt2:
        return (self.q0 * self.q0 + self.q1 * self.q1
                + self.q2 * self.q2 + self.q3 * self.q3)

    def is_unit(self) -> bool:
        return self.norm_sq() == Q2_ONE

    def inverse(self) -> "Quaternion":
        if not self.is_unit():
            raise ValueError("inverse implemented for unit quaternions only")
        return self.conjugate()

    def __pow__(self, n: int) -> "Quaternion":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = ONE
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def sort_key(self):
        return tuple((c.a, c.b) for c in (self.q0, self.q1, self.q2, self.q3))

    def to_json(self) -> list[str]:
        return [str(c) for c in (self.q0, self.q1, self.q2, self.q3)]

    def __str__(self):
        names = {ONE: "1", -ONE: "-1", I: "i", -I: "-i",
                 J: "j", -J: "-j", K: "k", -K: "-k"}
        if self in names:
            return names[self]
        return "(" + ",".join(str(c) for c in (self.q0, self.q1, self.q2, self.q3)) + ")"


ONE = Quaternion.of(1)
I = Quaternion.of(0, 1)
J = Quaternion.of(0, 0, 1)
K = Quaternion.of(0, 0, 0, 1)

# binary tetrahedral generators: t^3 = s^3 = (ts)^2 = -1
T_GEN = Quaternion.of(Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2), Fraction(-1, 2))
S_GEN = Quaternion.of(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2))
# order-8 element extending BTet to BOct: (1+i)/sqrt2
C8 = Quaternion(QSqrt2(Fraction(0), Fraction(1, 2)), QSqrt2(Fraction(0), Fraction(1, 2)),
                Q2_ZERO, Q2_ZERO)

# the SL(2,F3)-style generators used by the pillowcase representations
A_GEN = -T_GEN
B_GEN = -S_GEN

# adjoint-action basis u1, u2, u3 of the pure quaternions
PAULI = (J, K, I)


def ad(q: Quaternion) -> tuple[tuple[QSqrt2, ...], ...]:
    """Rotation x -> q x q^{-1} on span(u1,u2,u3), entries in Q(sqrt2)."""
    if not q.is_unit():
        raise ValueError("ad is defined for unit quaternions")
    qi = q.conjugate()
    cols = []
    for u in PAULI:
        v = q * u * qi
        cols.append((v.q2, v.q3, v.q1))  # coordinates along (j, k, i)
    return tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))


def ad_matrix(q: Quaternion) -> Matrix:
    """ad(q) as an exact rational matrix; raises if any entry is irrational."""
    rows = []
    for row in ad(q):
        rows.append([e.to_fraction() for e in row])
    return Matrix(rows)


def pure_inner(x: Quaternion, y: Quaternion) -> QSqrt2:
    """Inner product -1/2 tr(xy) on pure quaternions: the Euclidean one."""
    return x.q1 * y.q1 + x.q2 * y.q2 + x.q3 * y.q3


class FiniteGroup:
    """Finite subgroup of the unit quaternions with a closed multiplication table."""

    def __init__(self, elements: Sequence[Quaternion]):
        self.elements: tuple[Quaternion, ...] = tuple(elements)
        self.index: dict[Quaternion, int] = {g: i for i, g in enumerate(self.elements)}
        if ONE not in self.index:
            raise ValueError("group must contain the identity")
        n = len(self.elements)
        table = [[0] * n for _ in range(n)]
        for i, g in enumerate(self.elements):
            for j, h in enumerate(self.elements):
                p = g * h
                k = self.index.get(p)
                if k is None:
                    raise ValueError("element set is not closed under multiplication")
                table[i][j] = k
        self.table: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in table)
        self.identity_index = self.index[ONE]
        inv = [0] * n
        for i in range(n):
            inv[i] = self.table[i].index(self.identity_index)
        self.inv: tuple[int, ...] = tuple(inv)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, q: Quaternion) -> bool:
        return q in self.index

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    @staticmethod
    def generate(gens: Iterable[Quaternion], bound: int = 10_000) -> "FiniteGroup":
        gens = list(gens)
        for g in gens:
            if not g.is_unit():
                raise ValueError("generators must be unit quaternions")
        seen = {ONE}
        order = [ONE]
        frontier = [ONE]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = x * g
                    if y not in seen:
                        seen.add(y)
                        order.append(y)
                        nxt.append(y)
                        if len(seen) > bound:
                            raise ValueError(f"closure exceeds bound {bound}")
            frontier = nxt
        return FiniteGroup(order)

    def centralizer(self, sub: "FiniteGroup") -> "FiniteGroup":
        els = [g for g in self.elements
               if all(g * x == x * g for x in sub.elements)]
        return FiniteGroup(els)

    def normalizer(self, sub: "FiniteGroup") -> "FiniteGroup":
        subset = set(sub.elements)
        els = []
        for g in self.elements:
            gi = g.conjugate()
            if all((g * x * gi) in subset for x in sub.elements):
                els.append(g)
        return FiniteGroup(els)

    def element_order(self, q: Quaternion) -> int:
        k, p = 1, q
        while p != ONE:
            p = p * q
            k += 1
        return k

    def elements_with(self, predicate) -> list[Quaternion]:
        return [g for g in self.elements if predicate(g)]


def quaternion_group() -> FiniteGroup:
    return FiniteGroup.generate([I, J])


def binary_tetrahedral() -> FiniteGroup:
    return FiniteGroup.generate([T_GEN, S_GEN])


def binary_octahedral() -> FiniteGroup:
    return FiniteGroup.generate([T_GEN, S_GEN, C8])


def automorphism_count(group: FiniteGroup, gens: tuple[Quaternion, Quaternion]) -> int:
    """Number of automorphisms, by enumerating images of the two generators.

    A candidate pair extends to a homomorphism iff the partial map obtained by
    closing products is single-valued; the extension is an automorphism iff it
    is onto.
    """
    a, b = gens
    if len(FiniteGroup.generate([a, b])) != len(group):
        raise ValueError("gens do not generate the group")
    count = 0
    for x in group.elements:
        for y in group.elements:
            phi = {ONE: ONE, a: x, b: y}
            frontier = [(a, x), (b, y)]
            ok = True
            while frontier and ok:
                nxt = []
                for (g, im) in frontier:
                    for (h, jm) in list(phi.items()):
                        for (p, q) in ((g * h, im * jm), (h * g, jm * im)):
                            known = phi.get(p)
                            if known is None:
                                phi[p] = q
                                nxt.append((p, q))
                            elif known != q:
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        break
                frontier = nxt
            if ok and len(set(phi.values())) == len(group):
                count += 1
    return count


# ---------------------------------------------------------------------------
# Representations of presented groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Representation:
    presentation: Presentation
    values: tuple[Quaternion, ...]  # one per generator, in presentation order

    def value(self, gen: str) -> Quaternion:
        return self.values[self.presentation.generators.index(gen)]

    def evaluate(self, word: Word) -> Quaternion:
        idx = {g: i for i, g in enumerate(self.presentation.generators)}
        out = ONE
        for (g, e) in word:
            if g not in idx:
                raise ValueError(f"letter {g!r} not in alphabet")
            v = self.values[idx[g]]
            out = out * (v if e == 1 else v.inverse())
        return out

    def satisfies_relators(self) -> bool:
        return all(self.evaluate(r) == ONE for r in self.presentation.relators)

    def tuple_key(self):
        return tuple(v.sort_key() for v in self.values)


def enumerate_homs(pres: Presentation, group: FiniteGroup) -> list[Representation]:
    """All homomorphisms pres -> group, in lexicographic element order.

    Single-generator power relators (g^k) prune each generator's candidate
    list before the depth-first search over the remaining relators.
    """
    gens = pres.generators
    power_of: dict[str, list[int]] = {g: [] for g in gens}
    other_relators: list[Word] = []
    for r in pres.relators:
        letters = {g for (g, _) in r}
        if len(letters) == 1 and all(e == 1 for (_, e) in r):
            g = next(iter(letters))
            power_of[g].append(len(r))
        else:
            other_relators.append(r)

    def qpow(q: Quaternion, n: int) -> Quaternion:
        return q ** n

    candidates = []
    for g in gens:
        cand = [q for q in group.elements
                if all(qpow(q, k) == ONE for k in power_of[g])]
        cand.sort(key=lambda q: q.sort_key())
        candidates.append(cand)

    results: list[Representation] = []
    assignment: list[Quaternion] = [ONE] * len(gens)

    # relators checkable once the first m generators are assigned
    relator_ready: list[list[Word]] = [[] for _ in range(len(gens) + 1)]
    for r in other_relators:
        last = max(gens.index(g) for (g, _) in r)
        relator_ready[last + 1].append(r)

    def eval_word(word: Word) -> Quaternion:
        out = ONE
        for (g, e) in word:
            v = assignment[gens.index(g)]
            out = out * (v if e == 1 else v.inverse())
        return out

    def dfs(pos: int):
        if pos == len(gens):
            results.append(Representation(pres, tuple(assignment)))
            return
        for q in candidates[pos]:
            assignment[pos] = q
            if all(eval_word(r) == ONE for r in relator_ready[pos + 1]):
                dfs(pos + 1)

    dfs(0)
    return results


def pushforward(homs: Sequence[Representation], subst: Substitution,
                source_pres: Presentation) -> list[Representation]:
    """Precompose each hom with the substitution; exact-value deduplication."""
    seen = {}
    for hom in homs:
        vals = tuple(hom.evaluate(subst.image(g)) for g in source_pres.generators)
        rep = Representation(source_pres, vals)
        seen.setdefault(rep.tuple_key(), rep)
    return [seen[k] for k in sorted(seen)]


def filter_irreducible(homs: Sequence[Representation]) -> list[Representation]:
    """Keep homs whose image contains a non-commuting pair."""
    out = []
    for hom in homs:
        vals = hom.values
        if any(x * y != y * x for x in vals for y in vals):
            out.append(hom)
    return out


def conjugate_rep(g: Quaternion, hom: Representation) -> Representation:
    gi = g.conjugate()
    return Representation(hom.presentation,
                          tuple(g * v * gi for v in hom.values))


def classify_conjugacy(homs: Sequence[Representation],
                       group: FiniteGroup) -> list[list[Representation]]:
    """Orbit partition under simultaneous conjugation; orbits sorted by
    their lexicographically least member, members sorted likewise."""
    pool = {h.tuple_key(): h for h in homs}
    orbits = []
    remaining = set(pool)
    while remaining:
        start = min(remaining)
        orbit_keys = set()
        h0 = pool[start]
        for g in group.elements:
            hk = conjugate_rep(g, h0).tuple_key()
            if hk in pool:
                orbit_keys.add(hk)
        remaining -= orbit_keys
        orbits.append(sorted(orbit_keys))
    orbits.sort(key=lambda ks: ks[0])
    return [[pool[k] for k in ks] for ks in orbits]


def check_fixed(hom: Representation, action: Substitution,
                group: FiniteGroup) -> tuple[bool, Quaternion | None]:
    """Is hom∘action = h.hom.h^{-1} for some h in group?  Returns (flag, h)."""
    twisted = tuple(hom.evaluate(action.image(g))
                    for g in hom.presentation.generators)
    for h in sorted(group.elements, key=lambda q: q.sort_key()):
        hi = h.conjugate()
        if all(h * v * hi == tv for v, tv in zip(hom.values, twisted)):
            return True, h
    return False, None


# ---------------------------------------------------------------------------
# The two distinguished representations
# ---------------------------------------------------------------------------

def rho0_gamma(gamma_pres: Presentation) -> Representation:
    """The quaternionic representation of the (6,6,6,2)-orbifold group:
    p1 -> A, p2 -> B A B^{-1}, p3 -> B^{-1}, p4 -> -1."""
    vals = {
        "p1": A_GEN,
        "p2": B_GEN * A_GEN * B_GEN.inverse(),
        "p3": B_GEN.inverse(),
        "p4": -ONE,
    }
    return Representation(gamma_pres, tuple(vals[g] for g in gamma_pres.generators))


def restrict_along(rep: Representation, subst: Substitution,
                   source_pres: Presentation) -> Representation:
    """Pull a representation back along a substitution into its presentation."""
    vals = tuple(rep.evaluate(subst.image(g)) for g in source_pres.generators)
    return Representation(source_pres, vals)
