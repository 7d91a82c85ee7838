"""Field arithmetic, polynomial helpers, places, and divisors."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ascount.fields import (
    INFINITY,
    Divisor,
    finite_place,
    irreducibles,
    is_irreducible,
    make_context,
    mobius_int,
    pdeg,
    pdivmod,
    pgcd,
    place_count,
    places,
    pmod,
    pmul,
    pmonic,
    poly_str,
    ppowmod,
    ptrim,
    residue_field,
)

CTX2 = make_context(2, 1, 1)
CTX3 = make_context(3, 1, 1)
CTX4 = make_context(2, 2, 1)
CTX9 = make_context(3, 2, 1)


def necklace_count(q: int, d: int) -> int:
    """Monic irreducibles of degree d over F_q, by Mobius inversion.

    Written out independently of the library so the comparison means
    something."""
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += mobius_oracle(d // e) * q ** e
    return total // d


def mobius_oracle(m: int) -> int:
    factors = []
    k = 2
    while k * k <= m:
        if m % k == 0:
            factors.append(k)
            m //= k
            if m % k == 0:
                return 0
        else:
            k += 1
    if m > 1:
        factors.append(m)
    return (-1) ** len(factors)


def test_mobius_int_matches_oracle():
    for m in range(1, 60):
        assert mobius_int(m) == mobius_oracle(m)


def test_context_validation():
    with pytest.raises(ValueError):
        make_context(4, 1, 1)
    with pytest.raises(ValueError):
        make_context(2, 0, 1)
    with pytest.raises(ValueError):
        make_context(2, 1, 0)


def test_field_sizes_and_tables():
    assert CTX2.q == 2
    assert CTX4.q == 4
    assert CTX9.q == 9
    for ctx in (CTX2, CTX3, CTX4, CTX9):
        # inverses exist for every nonzero code
        for a in range(1, ctx.q):
            assert ctx.fmul(a, ctx.finv(a)) == 1
        # Frobenius is inverted by pth_root
        for a in range(ctx.q):
            assert ctx.pth_root(ctx.fpow(a, ctx.p)) == a


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_gf9_ring_axioms(a, b, c):
    ctx = CTX9
    assert ctx.fmul(a, b) == ctx.fmul(b, a)
    assert ctx.fadd(a, b) == ctx.fadd(b, a)
    assert ctx.fmul(a, ctx.fadd(b, c)) == ctx.fadd(ctx.fmul(a, b),
                                                   ctx.fmul(a, c))
    assert ctx.fmul(ctx.fmul(a, b), c) == ctx.fmul(a, ctx.fmul(b, c))


def test_element_coords_roundtrip():
    for ctx in (CTX4, CTX9):
        for a in range(ctx.q):
            coords = ctx.element_coords(a)
            assert len(coords) == ctx.n
            assert ctx.element_from_coords(coords) == a


def test_poly_divmod_invariant():
    a = [1, 0, 1, 1, 0, 1]
    b = [1, 1, 1]
    quot, rem = pdivmod(CTX2, a, b)
    recombined = [x for x in pmul(CTX2, quot, b)]
    # pad and add the remainder back
    for i, c in enumerate(rem):
        if i < len(recombined):
            recombined[i] = CTX2.fadd(recombined[i], c)
        else:
            recombined.append(c)
    assert ptrim(recombined) == ptrim(a)
    assert pdeg(rem) < pdeg(b)


def test_gcd_and_powmod():
    # gcd(t(t+1)^2, (t+1)^2) over F_2 = (t+1)^2 = t^2+1
    f = pmul(CTX2, [0, 1, 1], [1, 1])
    g = pmul(CTX2, [1, 1], [1, 1])
    assert tuple(pmonic(CTX2, pgcd(CTX2, f, g))) == (1, 0, 1)
    assert tuple(pmod(CTX2, f, g)) == ()
    # t^(2^2) mod t^2+t+1 == t, the Frobenius orbit closing up
    assert tuple(ppowmod(CTX2, [0, 1], 4, [1, 1, 1])) == (0, 1)


def test_irreducibility_known_cases():
    assert is_irreducible(CTX2, [1, 1, 1])        # t^2+t+1
    assert not is_irreducible(CTX2, [1, 0, 1])    # t^2+1 = (t+1)^2
    assert is_irreducible(CTX3, [1, 0, 1])        # t^2+1 over F_3
    assert not is_irreducible(CTX3, [2, 0, 1])    # t^2+2 = (t+1)(t+2)


def test_irreducible_counts_match_necklace_formula():
    for ctx, dmax in ((CTX2, 7), (CTX3, 5), (CTX4, 4)):
        for d in range(1, dmax + 1):
            got = irreducibles(ctx, d)
            assert len(got) == necklace_count(ctx.q, d)
            assert all(f[-1] == 1 and pdeg(f) == d for f in got)


def test_place_count_includes_infinity():
    # degree 1 gets the place at infinity on top of the q finite ones
    assert place_count(CTX2, 1) == 3
    assert place_count(CTX2, 2) == 1
    assert place_count(CTX2, 3) == 2
    assert place_count(CTX2, 4) == 3
    assert place_count(CTX4, 1) == 5
    for d in range(2, 5):
        assert place_count(CTX4, d) == necklace_count(4, d)


def test_places_ordering_and_str():
    one = places(CTX2, 1)
    assert one[0] is INFINITY
    assert str(one[0]) == "inf"
    assert [str(pl) for pl in one[1:]] == ["t", "t+1"]
    assert poly_str([1, 1, 1]) == "t2+t+1"
    assert poly_str([0, 2, 1], var="t") == "t2+2t"


def test_finite_place_rejects_bad_polys():
    with pytest.raises(ValueError):
        finite_place(CTX2, [1, 0, 1])    # reducible
    with pytest.raises(ValueError):
        finite_place(CTX2, [1])          # constant
    with pytest.raises(ValueError):
        finite_place(CTX3, [1, 2])       # not monic


def test_divisor_basics():
    t = finite_place(CTX2, [0, 1])
    t1 = finite_place(CTX2, [1, 1])
    d = Divisor([(t1, 2), (INFINITY, 1), (t, 3)])
    assert d.degree() == 6
    # canonical order: infinity first among degree-1 places
    assert [str(pl) for pl, _ in d.items()] == ["inf", "t", "t+1"]
    assert str(d) == "inf^1,t^3,t+1^2"
    assert Divisor.one().degree() == 0
    with pytest.raises(ValueError):
        Divisor([(t, 1), (t, 2)])
    with pytest.raises(ValueError):
        Divisor([(t, 0)])


@settings(max_examples=40)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_residue_field_gf4_structure(i, j, k):
    place = finite_place(CTX4, [3, 1])   # t + g^2 over F_4, degree 1
    fld = residue_field(CTX4, place)
    elems = list(fld.elements())
    assert len(elems) == 4
    a, b, c = elems[i], elems[j], elems[k]
    assert fld.add(a, b) == fld.add(b, a)
    assert fld.mul(a, fld.add(b, c)) == fld.add(fld.mul(a, b), fld.mul(a, c))


def test_residue_field_degree_two():
    place = finite_place(CTX2, [1, 1, 1])
    fld = residue_field(CTX2, place)
    elems = list(fld.elements())
    assert len(elems) == 4
    for a in elems:
        # pth_root inverts Frobenius in the residue field as well
        assert fld.pth_root(fld.mul(a, a)) == a
    # the place polynomial reduces to zero
    assert fld.is_zero(fld.from_poly([1, 1, 1]))
