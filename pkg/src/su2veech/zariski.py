"""Exact certification of Zariski density in Sp(6,R) for a matrix pair.

The chain of checks, all in exact arithmetic:
  * the first matrix is Galois-pinching: simple real eigenvalues of distinct
    moduli and full hyperoctahedral Galois group, certified through the cubic
    trace polynomial (discriminant / Delta tests / a Dedekind cycle-type
    witness prime);
  * the second matrix has infinite order (a real eigenvalue off the unit
    circle, by Sturm count);
  * the two do not commute;
  * the second matrix moves the leading eigenplane of the first (rank-four
    test over the number field Q[x]/(charpoly)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Matrix, Poly


# ---------------------------------------------------------------------------
# Trace polynomial and friends
# ---------------------------------------------------------------------------

def trace_polynomial(P: Poly, shift: int) -> Poly:
    """The degree-n polynomial Q with x^n Q(x + 1/x + shift) = P(x).

    Requires P monic palindromic of even degree 2n; the result is verified by
    re-expansion.
    """
    if not P.is_palindromic() or P.degree % 2 or not P.is_monic():
        raise ValueError("P must be monic palindromic of even degree")
    n = P.degree // 2
    base = Poly([1, shift, 1])  # x^2 + shift*x + 1  (= x*(x + 1/x + shift))
    basis = [Poly.x_power(n - k) * base ** k for k in range(n + 1)]
    rows = [[basis[k][d] for k in range(n + 1)] for d in range(2 * n + 1)]
    rhs = [P[d] for d in range(2 * n + 1)]
    coeffs = Matrix(rows).solve(rhs)
    Q = Poly(coeffs)
    expanded = Poly([0])
    for k in range(n + 1):
        expanded = expanded + basis[k].scale(Q[k])
    if expanded != P:
        raise ValueError("re-expansion check failed; P is not of trace form")
    return Q


def discriminant(P: Poly) -> Fraction:
    if P.degree < 2:
        raise ValueError("discriminant needs degree >= 2")
    n = P.degree
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * P.resultant(P.derivative()) / P.coeffs[-1]


def is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def delta31(Q: Poly) -> Fraction:
    if Q.degree != 3:
        raise ValueError("delta31 is defined for cubics")
    return Q(Fraction(0)) * Q(Fraction(4))


def has_rational_root(P: Poly) -> bool:
    """Rational root test for integer polynomials."""
    cs = P.int_coeffs()
    if not cs:
        return True
    if cs[0] == 0:
        return True
    lead, const = abs(cs[-1]), abs(cs[0])

    def divisors(m):
        out = []
        for d in range(1, math.isqrt(m) + 1):
            if m % d == 0:
                out += [d, m // d]
        return sorted(set(out))

    for p in divisors(const):
        for q in divisors(lead):
            x = Fraction(p, q)
            if P(x) == 0 or P(-x) == 0:
                return True
    return False


# ---------------------------------------------------------------------------
# Factorization mod p (distinct-degree)
# ---------------------------------------------------------------------------

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for d in range(2, math.isqrt(p) + 1):
        if p % d == 0:
            return False
    return True


def _pmod(coeffs: list[int], p: int) -> list[int]:
    out = [c % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def _pmul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, p)


def _pdivmod(a: list[int], b: list[int], p: int) -> tuple[list[int], list[int]]:
    a = a[:]
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        f = a[-1] * inv % p
        k = len(a) - len(b)
        q[k] = f
        for i, c in enumerate(b):
            a[k + i] = (a[k + i] - f * c) % p
        while a and a[-1] == 0:
            a.pop()
    return q, a


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _ppowmod(base: list[int], e: int, mod: list[int], p: int) -> list[int]:
    result = [1]
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


class BadPrime(ValueError):
    """The prime divides the leading coefficient or the discriminant."""


def factor_degrees_mod_p(P: Poly, p: int) -> list[int]:
    """Degrees of the irreducible factors of P over F_p (sorted multiset).

    The prime must not divide the leading coefficient nor disc(P), so the
    reduction stays squarefree of full degree.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    cs = P.int_coeffs()
    if cs[-1] % p == 0:
        raise BadPrime(f"{p} divides the leading coefficient")
    disc = discriminant(P)
    if disc.denominator != 1 or disc.numerator % p == 0:
        raise BadPrime(f"{p} divides the discriminant; pick another witness")
    f = _pmod(cs, p)
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]

    def psub(a, b):
        n = max(len(a), len(b))
        a = a + [0] * (n - len(a))
        b = b + [0] * (n - len(b))
        return _pmod([(x - y) % p for x, y in zip(a, b)], p)

    degrees: list[int] = []
    h = [0, 1]  # x
    d = 0
    while len(f) - 1 > 0:
        d += 1
        if 2 * d > len(f) - 1:
            degrees.append(len(f) - 1)
            break
        h = _ppowmod(h, p, f, p)
        g = _pgcd(psub(h, [0, 1]), f, p)
        if len(g) - 1 > 0:
            degrees.extend([d] * ((len(g) - 1) // d))
            f, _ = _pdivmod(f, g, p)
            if len(f) - 1 > 0:
                h = _pdivmod(h, f, p)[1]
    return sorted(degrees)


# ---------------------------------------------------------------------------
# Sturm sequences and real root isolation
# ---------------------------------------------------------------------------

def sturm_chain(P: Poly) -> list[Poly]:
    chain = [P, P.derivative()]
    while chain[-1].degree > 0:
        rem = chain[-2].divmod(chain[-1])[1]
        if rem.is_zero():
            break
        chain.append(-rem)
    return chain


def _sign_variations(chain: list[Poly], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = q(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(P: Poly, a: Fraction, b: Fraction,
                chain: list[Poly] | None = None) -> int:
    """Number of distinct real roots in the half-open interval (a, b]."""
    if chain is None:
        chain = sturm_chain(P)
    return _sign_variations(chain, a) - _sign_variations(chain, b)


def root_bound(P: Poly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B]."""
    lead = abs(P.coeffs[-1])
    return 1 + max(abs(c) for c in P.coeffs) / lead


@dataclass(frozen=True)
class RootIntervals:
    intervals: tuple[tuple[Fraction, Fraction], ...]  # (lo, hi], ascending
    distinct_moduli: bool

    def midpoints(self) -> list[Fraction]:
        return [(lo + hi) / 2 for lo, hi in self.intervals]


def isolate_real_roots(P: Poly, width: Fraction = Fraction(1, 10_000),
                       max_refine: int = 200) -> RootIntervals:
    """Sturm isolation of all real roots into disjoint intervals of width
    < ``width``, refined until the root moduli are pairwise separated (or the
    refinement budget runs out, in which case distinct_moduli is False)."""
    if not P.is_squarefree():
        raise ValueError("P must be squarefree")
    chain = sturm_chain(P)
    B = root_bound(P)
    work = [(-B, B)]
    isolated: list[tuple[Fraction, Fraction]] = []
    while work:
        lo, hi = work.pop()
        cnt = sturm_count(P, lo, hi, chain)
        if cnt == 0:
            continue
        if cnt == 1:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        work.append((lo, mid))
        work.append((mid, hi))

    def refine(iv):
        lo, hi = iv
        while hi - lo > width:
            mid = (lo + hi) / 2
            if sturm_count(P, lo, mid, chain) == 1:
                hi = mid
            else:
                lo = mid
        return lo, hi

    isolated = sorted((refine(iv) for iv in isolated), key=lambda t: t[0])

    def moduli_ranges(ivs):
        out = []
        for lo, hi in ivs:
            if lo >= 0:
                out.append((lo, hi))
            elif hi <= 0:
                out.append((-hi, -lo))
            else:
                out.append((Fraction(0), max(-lo, hi)))
        return out

    def separated(ivs) -> bool:
        rngs = sorted(moduli_ranges(ivs))
        return all(a_hi < b_lo for (_, a_hi), (b_lo, _) in zip(rngs, rngs[1:]))

    def halve(lo, hi):
        mid = (lo + hi) / 2
        return (lo, mid) if sturm_count(P, lo, mid, chain) == 1 else (mid, hi)

    budget = max_refine
    while not separated(isolated) and budget > 0:
        isolated = [halve(lo, hi) for lo, hi in isolated]
        budget -= 1
    return RootIntervals(tuple(isolated), separated(isolated))


def count_roots_outside_unit_interval(P: Poly) -> int:
    """Real roots with |x| > 1, by Sturm count."""
    chain = sturm_chain(P)
    B = root_bound(P)
    return (sturm_count(P, Fraction(1), B, chain)
            + sturm_count(P, -B, Fraction(-1), chain))


# ---------------------------------------------------------------------------
# The quotient field Q[x]/(P)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuotientRingElement:
    """Element of Q[x]/(modulus), stored as a reduced polynomial."""

    poly: Poly
    modulus: Poly

    @staticmethod
    def of(poly: Poly, modulus: Poly) -> "QuotientRingElement":
        return QuotientRingElement(poly.divmod(modulus)[1], modulus)

    def __add__(self, o):
        return QuotientRingElement.of(self.poly + o.poly, self.modulus)

    def __sub__(self, o):
        return QuotientRingElement.of(self.poly - o.poly, self.modulus)

    def __neg__(self):
        return QuotientRingElement.of(-self.poly, self.modulus)

    def __mul__(self, o):
        if isinstance(o, (int, Fraction)):
            return QuotientRingElement.of(self.poly.scale(o), self.modulus)
        return QuotientRingElement.of(self.poly * o.poly, self.modulus)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def inverse(self) -> "QuotientRingElement":
        # extended Euclid in Q[x]
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in quotient ring")
        r0, r1 = self.modulus, self.poly
        s0, s1 = Poly([]), Poly([1])
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree != 0:
            raise ZeroDivisionError("element is a zero divisor (modulus reducible)")
        return QuotientRingElement.of(s0.scale(1 / r0.coeffs[0]), self.modulus)


def _field_matrix_rank(rows: list[list[QuotientRingElement]]) -> int:
    """Gaussian elimination rank over the quotient field."""
    if not rows:
        return 0
    m = [row[:] for row in rows]
    nrows, ncols = len(m), len(m[0])
    rank = 0
    for c in range(ncols):
        pr = next((r for r in range(rank, nrows) if not m[r][c].is_zero()), None)
        if pr is None:
            continue
        m[rank], m[pr] = m[pr], m[rank]
        inv = m[rank][c].inverse()
        m[rank] = [x * inv for x in m[rank]]
        for r in range(nrows):
            if r != rank and not m[r][c].is_zero():
                f = m[r][c]
                m[r] = [x - (f * y) for x, y in zip(m[r], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


def eigenplane_rank_test(g: Matrix, h: Matrix) -> int:
    """Rank over K = Q[x]/(charpoly g) of [v1 v2 h v1 h v2] where v1, v2 are
    eigenvectors of g for the class of x and its inverse."""
    P = g.charpoly()
    n = g.rows

    def kel(p: Poly) -> QuotientRingElement:
        return QuotientRingElement.of(p, P)

    theta = kel(Poly([0, 1]))
    zero = kel(Poly([]))

    def const(c: Fraction) -> QuotientRingElement:
        return kel(Poly([c]))

    def eigenvector(lam: QuotientRingElement) -> list[QuotientRingElement]:
        # kernel of (g - lam I) over K, taking the first free column
        rows = [[const(g[i, j]) - (lam if i == j else zero)
                 for j in range(n)] for i in range(n)]
        m = [row[:] for row in rows]
        pivots = []
        r = 0
        for c in range(n):
            pr = next((i for i in range(r, n) if not m[i][c].is_zero()), None)
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = m[r][c].inverse()
            m[r] = [x * inv for x in m[r]]
            for i in range(n):
                if i != r and not m[i][c].is_zero():
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        free = [c for c in range(n) if c not in pivots]
        if not free:
            raise ValueError("no eigenvector: charpoly not its own minimal poly?")
        fc = free[0]
        v = [zero] * n
        v[fc] = const(Fraction(1))
        for rr, pc in enumerate(pivots):
            v[pc] = -m[rr][fc]
        return v

    v1 = eigenvector(theta)
    v2 = eigenvector(theta.inverse())

    def apply(mat: Matrix, vec):
        return [sum((const(mat[i, j]) * vec[j] for j in range(n)),
                    start=zero) for i in range(n)]

    cols = [v1, v2, apply(h, v1), apply(h, v2)]
    rows = [[cols[j][i] for j in range(4)] for i in range(n)]
    return _field_matrix_rank(rows)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass
class PinchingCertificate:
    charpoly: Poly
    trace_poly: Poly | None = None
    disc_q: int | None = None
    disc_q_square: bool | None = None
    delta_31: int | None = None
    delta_31_square: bool | None = None
    delta_32: int | None = None
    delta_32_square: bool | None = None
    q_irreducible: bool | None = None
    roots: RootIntervals | None = None
    all_roots_real_simple: bool | None = None
    witness_prime: int | None = None
    witness_degrees: list[int] | None = None
    failures: list[str] = field(default_factory=list)

    @property
    def pinching(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "charpoly": self.charpoly.to_json(),
            "trace_poly": self.trace_poly.to_json() if self.trace_poly else None,
            "disc_q": str(self.disc_q) if self.disc_q is not None else None,
            "disc_q_square": self.disc_q_square,
            "delta_31": str(self.delta_31) if self.delta_31 is not None else None,
            "delta_31_square": self.delta_31_square,
            "delta_32": str(self.delta_32) if self.delta_32 is not None else None,
            "delta_32_square": self.delta_32_square,
            "q_irreducible": self.q_irreducible,
            "all_roots_real_simple": self.all_roots_real_simple,
            "root_intervals": [[str(a), str(b)] for a, b in
                               (self.roots.intervals if self.roots else [])],
            "distinct_moduli": self.roots.distinct_moduli if self.roots else None,
            "witness_prime": self.witness_prime,
            "witness_degrees": self.witness_degrees,
            "pinching": self.pinching,
            "failures": self.failures,
        }


def galois_pinching_certificate(M: Matrix, shift: int = 2,
                                prime_bound: int = 10_000) -> PinchingCertificate:
    """Certify (or refute, with reasons) that M is Galois-pinching."""
    P = M.charpoly()
    cert = PinchingCertificate(charpoly=P)
    if M.rows % 2 or not P.is_palindromic():
        cert.failures.append("charpoly not palindromic of even degree")
        return cert

    if P.is_squarefree():
        roots = isolate_real_roots(P)
        cert.roots = roots
        n_real = len(roots.intervals)
        cert.all_roots_real_simple = (n_real == P.degree)
        if n_real != P.degree:
            cert.failures.append("not all roots real and simple")
        elif not roots.distinct_moduli:
            cert.failures.append("root moduli not certified distinct")
    else:
        cert.all_roots_real_simple = False
        cert.failures.append("charpoly not squarefree")

    try:
        Q = trace_polynomial(P, shift)
    except ValueError as exc:
        cert.failures.append(f"trace polynomial: {exc}")
        return cert
    cert.trace_poly = Q

    cert.q_irreducible = not has_rational_root(Q)
    if not cert.q_irreducible:
        cert.failures.append("trace cubic has a rational root")

    disc_q = discriminant(Q)
    cert.disc_q = int(disc_q)
    cert.disc_q_square = is_square(int(disc_q))
    if disc_q <= 0:
        cert.failures.append("trace cubic discriminant not positive")
    elif cert.disc_q_square:
        cert.failures.append("trace cubic discriminant is a square (Galois C3)")

    d31 = delta31(Q)
    cert.delta_31 = int(d31)
    cert.delta_31_square = is_square(int(d31))
    if cert.delta_31_square:
        cert.failures.append("Delta_{3,1} is a square (H_{3,1} not excluded)")
    d32 = disc_q * d31
    cert.delta_32 = int(d32)
    cert.delta_32_square = is_square(int(d32))
    if cert.delta_32_square:
        cert.failures.append("Delta_{3,2} is a square (H_{3,2} not excluded)")

    # Dedekind witness: a prime with factor degrees {1,1,4}
    p = 2
    while p < prime_bound:
        if _is_prime(p):
            try:
                degs = factor_degrees_mod_p(P, p)
            except BadPrime:
                degs = None
            if degs == [1, 1, 4]:
                cert.witness_prime = p
                cert.witness_degrees = degs
                break
        p += 1
    if cert.witness_prime is None:
        cert.failures.append(
            f"no prime < {prime_bound} with cycle type (4,1,1) "
            "(S_3 and H_{3,3} not excluded)")
    return cert


@dataclass
class DensityCertificate:
    pinching: PinchingCertificate
    h_charpoly: Poly
    h_infinite_order: bool
    noncommuting: bool
    eigenplane_rank: int | None
    verdict: str  # "SP6" | "INCONCLUSIVE"
    reasons: list[str]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "g": self.pinching.to_json(),
            "h_charpoly": self.h_charpoly.to_json(),
            "h_infinite_order": self.h_infinite_order,
            "noncommuting": self.noncommuting,
            "eigenplane_rank": self.eigenplane_rank,
            "verdict": self.verdict,
            "reasons": self.reasons,
        }


def density_certificate(g: Matrix, h: Matrix) -> DensityCertificate:
    """Verdict SP6 iff g pinches, h has infinite order, they do not commute,
    and h moves g's leading eigenplane (rank 4)."""
    if g.rows != g.cols or g.rows != h.rows or h.rows != h.cols:
        raise ValueError("matrices must be square of equal size")
    reasons: list[str] = []
    pin = galois_pinching_certificate(g)
    if not pin.pinching:
        reasons.extend("pinching: " + f for f in pin.failures)

    h_cp = h.charpoly()
    h_inf = False
    if h_cp.is_squarefree():
        h_inf = count_roots_outside_unit_interval(h_cp) > 0
    if not h_inf:
        reasons.append("h: no certified real eigenvalue outside [-1,1]")

    noncomm = (g @ h) != (h @ g)
    if not noncomm:
        reasons.append("g and h commute")

    rank = None
    if pin.pinching:
        rank = eigenplane_rank_test(g, h)
        if rank != 4:
            reasons.append(f"eigenplane rank {rank} != 4 (SL(2)-product not excluded)")

    verdict = "SP6" if not reasons else "INCONCLUSIVE"
    return DensityCertificate(pin, h_cp, h_inf, noncomm, rank, verdict, reasons)
