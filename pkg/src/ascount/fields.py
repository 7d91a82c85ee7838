"""Exact arithmetic in F_q, dense polynomials over F_q, and places of F_q(t).

Conventions used throughout the package:

* An element of F_q (q = p^n) is stored as an integer code in [0, q).
  The element with coordinate vector (c_0, ..., c_{n-1}) over F_p, written
  in the power basis of the fixed modulus, has code c_0 + c_1 p + ... +
  c_{n-1} p^(n-1).  Codes 0 and 1 are the field's 0 and 1.
* A polynomial over F_q is a tuple of codes, lowest degree first, with no
  trailing zeros; the zero polynomial is the empty tuple.
* The modulus defining F_q is the lexicographically smallest monic
  irreducible of degree n over F_p, coefficients compared low-to-high as
  integers.  For n = 1 this degenerates to x, i.e. the prime field itself.
* Places of F_q(t) are the monic irreducible polynomials plus the place at
  infinity (uniformiser 1/t, degree 1).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Optional

Poly = tuple  # tuple of F_q codes, lowest degree first, no trailing zeros

PZERO: Poly = ()
PONE: Poly = (1,)
PX: Poly = (0, 1)


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


def mobius_int(m: int) -> int:
    """Number-theoretic Mobius function of a positive integer."""
    assert m >= 1
    result = 1
    d = 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            result = -result
        d += 1
    if m > 1:
        result = -result
    return result


# ---------------------------------------------------------------------------
# prime-field polynomial helpers, used only to select the F_q modulus
# ---------------------------------------------------------------------------


def _pf_trim(a):
    while a and a[-1] == 0:
        a = a[:-1]
    return tuple(a)


def _pf_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pf_trim(out)


def _pf_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        del a[-1]
    return _pf_trim(a)


def _pf_powmod(a, e, m, p):
    result = (1,)
    base = _pf_mod(a, m, p)
    while e:
        if e & 1:
            result = _pf_mod(_pf_mul(result, base, p), m, p)
        base = _pf_mod(_pf_mul(base, base, p), m, p)
        e >>= 1
    return result


def _pf_gcd(a, b, p):
    while b:
        a, b = b, _pf_mod(a, b, p)
    return a


def _pf_sub(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _pf_trim(out)


def _prime_factors(d: int) -> list:
    out, ell = [], 2
    while d > 1:
        if d % ell == 0:
            out.append(ell)
            while d % ell == 0:
                d //= ell
        ell += 1
    return out


def _pf_irreducible(f, p):
    """Rabin test for a monic polynomial over the prime field F_p."""
    d = len(f) - 1
    if d < 1:
        return False
    x = (0, 1)
    xmod = _pf_mod(x, f, p)
    if _pf_sub(_pf_powmod(x, p ** d, f, p), xmod, p) != ():
        return False
    for ell in _prime_factors(d):
        g = _pf_gcd(f, _pf_sub(_pf_powmod(x, p ** (d // ell), f, p), xmod, p), p)
        if len(g) - 1 != 0:
            return False
    return True


# ---------------------------------------------------------------------------
# contexts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeContext:
    """Fixed parameters (p, n, r): base prime, log_p of the constant field
    size, and the rank of the elementary-abelian Galois group C_p^r."""

    p: int
    n: int
    r: int

    @cached_property
    def q(self) -> int:
        return self.p ** self.n

    @cached_property
    def modulus(self) -> tuple:
        """Monic irreducible of degree n over F_p defining F_q.

        Coefficient tuples are compared low-to-high; the first irreducible
        in that order is chosen, so the convention is reproducible.
        """
        if self.n == 1:
            return (0, 1)
        for coeffs in itertools.product(range(self.p), repeat=self.n):
            f = coeffs + (1,)
            if _pf_irreducible(f, self.p):
                return f
        raise AssertionError("no irreducible modulus found")

    # --- F_q arithmetic on integer codes -----------------------------------

    @cached_property
    def _mul_table(self):
        p, n, q = self.p, self.n, self.q
        mod = self.modulus
        table = [[0] * q for _ in range(q)]
        for a in range(q):
            da = _decode(a, p, n)
            for b in range(a, q):
                db = _decode(b, p, n)
                prod = _pf_mod(_pf_mul(da, db, p), mod, p)
                c = _encode(prod, p)
                table[a][b] = c
                table[b][a] = c
        return table

    @cached_property
    def _add_table(self):
        p, n, q = self.p, self.n, self.q
        table = [[0] * q for _ in range(q)]
        for a in range(q):
            da = _decode_full(a, p, n)
            for b in range(a, q):
                db = _decode_full(b, p, n)
                s = _encode([(x + y) % p for x, y in zip(da, db)], p)
                table[a][b] = s
                table[b][a] = s
        return table

    @cached_property
    def _neg_table(self):
        p, n, q = self.p, self.n, self.q
        return [_encode([(-x) % p for x in _decode_full(a, p, n)], p)
                for a in range(q)]

    @cached_property
    def _pth_root_table(self):
        # x -> x^(p^(n-1)) inverts the Frobenius x -> x^p on F_q
        e = self.p ** (self.n - 1)
        return [self.fpow(a, e) for a in range(self.q)]

    def fadd(self, a: int, b: int) -> int:
        return self._add_table[a][b]

    def fneg(self, a: int) -> int:
        return self._neg_table[a]

    def fsub(self, a: int, b: int) -> int:
        return self._add_table[a][self._neg_table[b]]

    def fmul(self, a: int, b: int) -> int:
        return self._mul_table[a][b]

    def fpow(self, a: int, e: int) -> int:
        assert e >= 0
        result = 1
        while e:
            if e & 1:
                result = self.fmul(result, a)
            a = self.fmul(a, a)
            e >>= 1
        return result

    def finv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in F_q")
        return self.fpow(a, self.q - 2)

    def fsmul(self, k: int, a: int) -> int:
        """Scalar multiple by k in F_p (k an integer, reduced mod p)."""
        k %= self.p
        result = 0
        while k:
            result = self.fadd(result, a)
            k -= 1
        return result

    def pth_root(self, a: int) -> int:
        """The unique x in F_q with x^p = a."""
        return self._pth_root_table[a]

    def element_coords(self, a: int) -> tuple:
        """Coordinate vector of length n over F_p for the code a."""
        return tuple(_decode_full(a, self.p, self.n))

    def element_from_coords(self, coords) -> int:
        assert len(coords) == self.n
        return _encode(tuple(c % self.p for c in coords), self.p)

    @cached_property
    def _irreducible_cache(self) -> dict:
        return {}

    @cached_property
    def _residue_fields(self) -> dict:
        return {}


def _decode(a: int, p: int, n: int):
    out = []
    while a:
        out.append(a % p)
        a //= p
    return tuple(out)


def _decode_full(a: int, p: int, n: int):
    out = []
    for _ in range(n):
        out.append(a % p)
        a //= p
    return out


def _encode(coeffs, p: int) -> int:
    a = 0
    for c in reversed(coeffs):
        a = a * p + c
    return a


@lru_cache(maxsize=None)
def make_context(p: int, n: int, r: int) -> PrimeContext:
    """Build the shared context for (p, n, r).  q = p^n.

    Raises ValueError for non-prime p or non-positive n, r.
    """
    if not _is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if n < 1 or r < 1:
        raise ValueError("n and r must be at least 1")
    ctx = PrimeContext(p, n, r)
    ctx.modulus  # force validation early
    return ctx


# ---------------------------------------------------------------------------
# dense polynomials over F_q
# ---------------------------------------------------------------------------


def ptrim(a) -> Poly:
    a = tuple(a)
    while a and a[-1] == 0:
        a = a[:-1]
    return a


def pdeg(a: Poly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(a) - 1


def padd(ctx: PrimeContext, a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = ctx.fadd(out[i], c)
    return ptrim(out)


def pneg(ctx: PrimeContext, a: Poly) -> Poly:
    return tuple(ctx.fneg(c) for c in a)


def psub(ctx: PrimeContext, a: Poly, b: Poly) -> Poly:
    return padd(ctx, a, pneg(ctx, b))


def pmul(ctx: PrimeContext, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return PZERO
    out = [0] * (len(a) + len(b) - 1)
    fmul, fadd = ctx.fmul, ctx.fadd
    for i, ai in enumerate(a):
        if ai:
            row = ctx._mul_table[ai]
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = fadd(out[i + j], row[bj])
    return ptrim(out)


def pmulc(ctx: PrimeContext, a: Poly, c: int) -> Poly:
    if c == 0:
        return PZERO
    row = ctx._mul_table[c]
    return ptrim(row[x] for x in a)


def pdivmod(ctx: PrimeContext, a: Poly, b: Poly):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return PZERO, a
    rem = list(a)
    db = len(b) - 1
    inv_lead = ctx.finv(b[-1])
    quot = [0] * (len(a) - db)
    for shift in range(len(a) - db - 1, -1, -1):
        top = rem[shift + db]
        if top:
            c = ctx.fmul(top, inv_lead)
            quot[shift] = c
            for i, bi in enumerate(b):
                rem[shift + i] = ctx.fsub(rem[shift + i], ctx.fmul(c, bi))
    return ptrim(quot), ptrim(rem[:db])


def pmod(ctx: PrimeContext, a: Poly, b: Poly) -> Poly:
    return pdivmod(ctx, a, b)[1]


def pmonic(ctx: PrimeContext, a: Poly) -> Poly:
    if not a:
        return a
    return pmulc(ctx, a, ctx.finv(a[-1]))


def pgcd(ctx: PrimeContext, a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, pmod(ctx, a, b)
    return pmonic(ctx, a)


def pxgcd(ctx: PrimeContext, a: Poly, b: Poly):
    """Extended gcd: returns (g, u, v) monic g with u*a + v*b = g."""
    r0, r1 = a, b
    u0, u1 = PONE, PZERO
    v0, v1 = PZERO, PONE
    while r1:
        q, rem = pdivmod(ctx, r0, r1)
        r0, r1 = r1, rem
        u0, u1 = u1, psub(ctx, u0, pmul(ctx, q, u1))
        v0, v1 = v1, psub(ctx, v0, pmul(ctx, q, v1))
    if r0:
        lead_inv = ctx.finv(r0[-1])
        r0 = pmulc(ctx, r0, lead_inv)
        u0 = pmulc(ctx, u0, lead_inv)
        v0 = pmulc(ctx, v0, lead_inv)
    return r0, u0, v0


def ppowmod(ctx: PrimeContext, a: Poly, e: int, m: Poly) -> Poly:
    result = PONE
    a = pmod(ctx, a, m)
    while e:
        if e & 1:
            result = pmod(ctx, pmul(ctx, result, a), m)
        a = pmod(ctx, pmul(ctx, a, a), m)
        e >>= 1
    return result


def ppow(ctx: PrimeContext, a: Poly, e: int) -> Poly:
    result = PONE
    while e:
        if e & 1:
            result = pmul(ctx, result, a)
        a = pmul(ctx, a, a)
        e >>= 1
    return result


def is_irreducible(ctx: PrimeContext, f: Poly) -> bool:
    """Deterministic Rabin irreducibility test for monic f over F_q."""
    d = pdeg(f)
    if d < 1:
        return False
    if f[-1] != 1:
        raise ValueError("irreducibility test expects a monic polynomial")
    q = ctx.q
    xmod = pmod(ctx, PX, f)
    if psub(ctx, ppowmod(ctx, PX, q ** d, f), xmod) != PZERO:
        return False
    for ell in _prime_factors(d):
        g = pgcd(ctx, f, psub(ctx, ppowmod(ctx, PX, q ** (d // ell), f), xmod))
        if pdeg(g) != 0:
            return False
    return True


def _monic_polys(ctx: PrimeContext, d: int) -> Iterator[Poly]:
    # lexicographic in the coefficient tuple (c_0, ..., c_{d-1}), c_0 first
    for coeffs in itertools.product(range(ctx.q), repeat=d):
        yield coeffs + (1,)


def irreducibles(ctx: PrimeContext, d: int) -> list:
    """All monic irreducibles of degree d over F_q, lexicographic order.

    Computed by a sieve: every monic polynomial of degree d that factors
    does so as a product of lower-degree irreducibles, and each composite
    arises from exactly one multiset of factors.  Exhaustive, desk scale.
    """
    if d < 1:
        raise ValueError("degree must be at least 1")
    cache = ctx._irreducible_cache
    for e in range(1, d + 1):
        if e in cache:
            continue
        if e == 1:
            cache[1] = [f for f in _monic_polys(ctx, 1)]
            continue
        lower = []
        for d2 in range(1, e):
            lower.extend((d2, f) for f in cache[d2])
        composite = set()

        def rec(start, prod, deg_left):
            for i in range(start, len(lower)):
                d2, f = lower[i]
                if d2 > deg_left:
                    break
                nxt = pmul(ctx, prod, f)
                if d2 == deg_left:
                    composite.add(nxt)
                else:
                    rec(i, nxt, deg_left - d2)

        rec(0, PONE, e)
        cache[e] = [f for f in _monic_polys(ctx, e) if f not in composite]
    return list(cache[d])


def place_count(ctx: PrimeContext, d: int) -> int:
    """Number of places of F_q(t) of degree d (infinity counts at d = 1)."""
    if d < 1:
        raise ValueError("degree must be at least 1")
    total = sum(mobius_int(e) * ctx.q ** (d // e) for e in _divisors(d))
    assert total % d == 0
    count = total // d
    return count + 1 if d == 1 else count


def _divisors(d: int):
    return [e for e in range(1, d + 1) if d % e == 0]


# ---------------------------------------------------------------------------
# places and divisors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Place:
    """A place of F_q(t): a monic irreducible polynomial, or infinity.

    poly is None exactly for the place at infinity (uniformiser 1/t).
    """

    poly: Optional[Poly]

    @property
    def is_infinity(self) -> bool:
        return self.poly is None

    @property
    def degree(self) -> int:
        return 1 if self.poly is None else len(self.poly) - 1

    def sort_key(self):
        # infinity sorts first among the degree-1 places
        if self.poly is None:
            return (1, 0, ())
        return (self.degree, 1, self.poly)

    def __str__(self) -> str:
        return "inf" if self.poly is None else poly_str(self.poly)


INFINITY = Place(None)


def finite_place(ctx: PrimeContext, poly: Poly) -> Place:
    poly = ptrim(poly)
    if pdeg(poly) < 1 or poly[-1] != 1:
        raise ValueError("a finite place needs a monic polynomial of degree >= 1")
    if not is_irreducible(ctx, poly):
        raise ValueError(f"{poly_str(poly)} is not irreducible")
    return Place(poly)


def places(ctx: PrimeContext, d: int) -> list:
    """All places of degree d, deterministic order (infinity first at d=1)."""
    out = [INFINITY] if d == 1 else []
    out.extend(Place(f) for f in irreducibles(ctx, d))
    return out


def poly_str(a: Poly, var: str = "t") -> str:
    """Human-readable form, e.g. t2+t+1 for t^2 + t + 1 (codes as digits)."""
    if not a:
        return "0"
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c == 0:
            continue
        if i == 0:
            parts.append(str(c))
        else:
            coeff = "" if c == 1 else str(c)
            power = var if i == 1 else f"{var}{i}"
            parts.append(coeff + power)
    return "+".join(parts)


class Divisor:
    """An effective divisor of F_q(t): places with positive multiplicities."""

    __slots__ = ("_pairs",)

    def __init__(self, pairs):
        seen = {}
        for place, e in pairs:
            if not isinstance(place, Place):
                raise ValueError("divisor keys must be places")
            if e < 1:
                raise ValueError("divisor multiplicities must be positive")
            if place in seen:
                raise ValueError("repeated place in divisor")
            seen[place] = e
        self._pairs = tuple(sorted(seen.items(), key=lambda kv: kv[0].sort_key()))

    @classmethod
    def one(cls) -> "Divisor":
        return cls(())

    def items(self):
        return self._pairs

    def degree(self) -> int:
        return sum(place.degree * e for place, e in self._pairs)

    def __iter__(self):
        return iter(self._pairs)

    def __len__(self):
        return len(self._pairs)

    def __eq__(self, other):
        return isinstance(other, Divisor) and self._pairs == other._pairs

    def __hash__(self):
        return hash(self._pairs)

    def __str__(self):
        if not self._pairs:
            return "1"
        return ",".join(f"{place}^{e}" for place, e in self._pairs)

    def __repr__(self):
        return f"Divisor({self})"


# ---------------------------------------------------------------------------
# residue fields
# ---------------------------------------------------------------------------


class ResidueField:
    """The residue field F_{q^d} at a place, as polynomials modulo the place.

    Elements are tuples of F_q codes of fixed length d = deg(place); the
    residue field at infinity is F_q itself (d = 1).  Only the operations
    the reduction algorithm needs are provided.
    """

    __slots__ = ("ctx", "place", "degree")

    def __init__(self, ctx: PrimeContext, place: Place):
        self.ctx = ctx
        self.place = place
        self.degree = place.degree

    def _pad(self, a: Poly) -> tuple:
        return tuple(a) + (0,) * (self.degree - len(a))

    @property
    def zero(self) -> tuple:
        return (0,) * self.degree

    @property
    def one(self) -> tuple:
        return self._pad(PONE)

    def from_poly(self, a: Poly) -> tuple:
        if self.place.is_infinity:
            if pdeg(a) > 0:
                raise ValueError("the residue field at infinity holds constants")
            return self._pad(a)
        return self._pad(pmod(self.ctx, a, self.place.poly))

    def is_zero(self, a) -> bool:
        return not any(a)

    def add(self, a, b):
        fadd = self.ctx.fadd
        return tuple(fadd(x, y) for x, y in zip(a, b))

    def neg(self, a):
        fneg = self.ctx.fneg
        return tuple(fneg(x) for x in a)

    def smul(self, k: int, a):
        """Multiple by the prime-field scalar k (an integer mod p)."""
        fsmul = self.ctx.fsmul
        return tuple(fsmul(k, x) for x in a)

    def mul(self, a, b):
        prod = pmul(self.ctx, ptrim(a), ptrim(b))
        if self.place.is_infinity:
            return self._pad(prod)
        return self._pad(pmod(self.ctx, prod, self.place.poly))

    def pth_root(self, a):
        """Inverse Frobenius: the unique x with x^p = a in F_{q^d}."""
        e = self.ctx.p ** (self.ctx.n * self.degree - 1)
        result = self.one
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def basis(self) -> list:
        """F_p-basis, deterministic order: slot-major, then power basis of F_q."""
        out = []
        for j in range(self.degree):
            for k in range(self.ctx.n):
                vec = [0] * self.degree
                vec[j] = self.ctx.p ** k
                out.append(tuple(vec))
        return out

    def elements(self) -> Iterator[tuple]:
        for coeffs in itertools.product(range(self.ctx.q), repeat=self.degree):
            yield coeffs


def residue_field(ctx: PrimeContext, place: Place) -> ResidueField:
    cache = ctx._residue_fields
    if place not in cache:
        cache[place] = ResidueField(ctx, place)
    return cache[place]
