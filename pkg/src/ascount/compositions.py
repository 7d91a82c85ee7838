"""Combinatorics of conductor chains.

A chain is a non-increasing tuple of positive integers (c_1 >= ... >= c_h),
the distinct per-step conductor exponents of a wildly ramified C_p^r
extension at one place, with h <= r.  The counting formulas attach to each
chain a composition (its runs of equal values), a flag count, and a signed
coefficient count; this module provides those pieces as exact integers,
plus the two-level refinement used for the closed-form Euler factors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .fields import PrimeContext


def gaussian_binomial(x: int, y: int, p: int) -> int:
    """Number of y-dimensional subspaces of F_p^x (exact integer)."""
    if x < 0 or y < 0:
        raise ValueError("gaussian_binomial needs non-negative arguments")
    if y > x:
        return 0
    num = 1
    for i in range(x - y + 1, x + 1):
        num *= p ** i - 1
    den = 1
    for i in range(1, y + 1):
        den *= p ** i - 1
    assert num % den == 0
    return num // den


def compositions(h: int):
    """All ordered tuples of positive integers summing to h (2^(h-1) many),
    first part varying slowest."""
    if h < 0:
        raise ValueError("compositions of a negative integer")
    if h == 0:
        return [()]
    out = []
    for first in range(1, h + 1):
        for rest in compositions(h - first):
            out.append((first,) + rest)
    return out


def prefix_sums(parts) -> tuple:
    total, out = 0, []
    for a in parts:
        total += a
        out.append(total)
    return tuple(out)


def flag_count(omega, p: int) -> int:
    """Number of flags of F_p-subspaces with successive dimensions given by
    the prefix sums of the composition omega."""
    if any(a < 1 for a in omega):
        raise ValueError("composition parts must be positive")
    result = 1
    for a_i, cum in zip(omega, prefix_sums(omega)):
        result *= gaussian_binomial(cum, a_i, p)
    return result


def mobius_cpk(k: int, p: int) -> int:
    """Moebius function of the subgroup lattice at C_p^k."""
    if k < 0:
        raise ValueError("negative rank")
    return (-1) ** k * p ** (k * (k - 1) // 2)


def aut_order(r: int, p: int) -> int:
    """|GL_r(F_p)|, the automorphism count of C_p^r."""
    return _prod(p ** r - p ** i for i in range(r))


def _prod(it):
    out = 1
    for x in it:
        out *= x
    return out


def delsarte_weight(f: int, ctx: PrimeContext) -> Fraction:
    """Weight of the rank-f homomorphism count in the inclusion-exclusion
    that isolates injections C_p^r -> quotient, divided by |Aut(C_p^r)|."""
    if f < 0 or f > ctx.r:
        raise ValueError("rank out of range")
    p, r = ctx.p, ctx.r
    num = p ** f * gaussian_binomial(r, f, p) * mobius_cpk(r - f, p)
    return Fraction(num, aut_order(r, p))


def free_index_count(c: int, p: int) -> int:
    """Number of integers in [1, c-1] not divisible by p.

    This is the count of free residue-field coefficients below the leading
    index of a reduced representative with conductor exponent c.
    """
    if c < 0:
        raise ValueError("conductor exponent must be non-negative")
    return c - 1 - (c - 1) // p


def leading_term_count(c: int, j: int, norm: int, p: int) -> int:
    """Signed count of principal parts with conductor exponent c whose
    leading coefficient avoids a j-dimensional F_p-span of earlier choices.

    Returns 1 for c = 0 (nothing to choose); vanishes iff j = 0 and
    c = 1 mod p, reflecting that such conductor exponents cannot occur.
    """
    if c < 0 or j < 0:
        raise ValueError("arguments must be non-negative")
    if c == 0:
        return 1
    return norm ** free_index_count(c, p) - p ** j * norm ** free_index_count(c - 1, p)


def run_composition(chain) -> tuple:
    """Runs of equal values of a chain, as a composition of its length."""
    _validate_chain(chain)
    out = []
    for value, grp in itertools.groupby(chain):
        out.append(sum(1 for _ in grp))
    return tuple(out)


def _validate_chain(chain):
    if any(c < 1 for c in chain):
        raise ValueError("chain entries must be positive")
    if any(chain[i] < chain[i + 1] for i in range(len(chain) - 1)):
        raise ValueError("chain entries must be non-increasing")


def chain_term_count(chain, omega, norm: int, ctx: PrimeContext) -> int:
    """Product of leading_term_count over a chain, blocks given by omega.

    Within a block of equal conductor exponents the j-th repetition must
    avoid the span of the j earlier leading coefficients, so j runs from 0
    to block length - 1 and resets at each new block.
    """
    if tuple(omega) != run_composition(chain):
        raise ValueError("omega does not match the chain's run structure")
    result = 1
    pos = 0
    for a_i in omega:
        c = chain[pos]
        for j in range(a_i):
            result *= leading_term_count(c, j, norm, ctx.p)
        pos += a_i
    return result


def chain_disc_exponent(chain, ctx: PrimeContext) -> int:
    """Discriminant exponent of a chain: (p-1) * sum_j p^(r-j) c_j."""
    _validate_chain(chain)
    if len(chain) > ctx.r:
        raise ValueError("chain longer than the group rank")
    p, r = ctx.p, ctx.r
    return (p - 1) * sum(p ** (r - j) * c for j, c in enumerate(chain, start=1))


def enumerate_chains(target: int, max_len: int, ctx: PrimeContext):
    """All chains C of length <= max_len with chain_disc_exponent(C) = target,
    sorted by (length, entries).  target = 0 yields only the empty chain."""
    if target < 0:
        raise ValueError("target exponent must be non-negative")
    if max_len < 0 or max_len > ctx.r:
        raise ValueError("max_len out of range")
    if target == 0:
        return [()]
    p, r = ctx.p, ctx.r
    found = []

    def rec(prefix, j, remaining, bound):
        if remaining == 0 and prefix:
            found.append(tuple(prefix))
            return
        if j > max_len:
            return
        weight = (p - 1) * p ** (r - j)
        top = min(bound, remaining // weight)
        for c in range(1, top + 1):
            prefix.append(c)
            rec(prefix, j + 1, remaining - weight * c, c)
            prefix.pop()

    rec([], 1, target, target)
    found.sort(key=lambda c: (len(c), c))
    return found


# ---------------------------------------------------------------------------
# two-level compositions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoLevelComposition:
    """A composition (outer) of h, each part refined by an inner composition.

    outer  -- runs of the coarse invariant (the quotient digit of c-1 by p)
    inner  -- per outer part, the runs of the fine invariant (the remainder)
    """

    outer: tuple
    inner: tuple

    def __post_init__(self):
        if len(self.outer) != len(self.inner):
            raise ValueError("outer and inner lengths differ")
        for b, theta in zip(self.outer, self.inner):
            if b < 1 or any(a < 1 for a in theta):
                raise ValueError("composition parts must be positive")
            if sum(theta) != b:
                raise ValueError("inner composition does not refine its part")

    @property
    def h(self) -> int:
        return sum(self.outer)

    @property
    def flattened(self) -> tuple:
        """The refinement composition theta_omega: all inner parts in order."""
        return tuple(a for theta in self.inner for a in theta)

    @property
    def outer_prefix(self) -> tuple:
        """Prefix sums B_1 < ... < B_(lambda) of the outer composition."""
        return prefix_sums(self.outer)

    @property
    def inner_counts(self) -> tuple:
        """Number of inner blocks within each outer part."""
        return tuple(len(theta) for theta in self.inner)

    def admissible(self, p: int) -> bool:
        """Whether each outer part carries at most p-1 inner blocks (the fine
        invariant takes values in [1, p-1] and strictly decreases)."""
        return all(len(theta) <= p - 1 for theta in self.inner)


def two_level_of(chain, ctx: PrimeContext) -> TwoLevelComposition:
    """Two-level structure of a chain: write c = p*k + l + 1 with l in
    [1, p-1]; outer blocks are runs of k, inner blocks runs of l within them.

    Raises ValueError if some entry has c = 1 mod p (no valid l exists; such
    chains carry coefficient count zero and never reach this refinement).
    """
    _validate_chain(chain)
    if not chain:
        raise ValueError("the empty chain has no two-level structure")
    profile = chain_profile(chain, ctx.p)
    outer, inner = [], []
    for _, krun in itertools.groupby(profile, key=lambda kl: kl[0]):
        krun = list(krun)
        outer.append(len(krun))
        inner.append(tuple(sum(1 for _ in grp)
                           for _, grp in itertools.groupby(kl[1] for kl in krun)))
    return TwoLevelComposition(tuple(outer), tuple(inner))


def chain_profile(chain, p: int):
    """Per-entry pairs (k, l) with c = p*k + l + 1, l in [1, p-1]."""
    out = []
    for c in chain:
        l = (c - 1) % p
        if l == 0:
            raise ValueError(f"conductor exponent {c} is 1 mod p")
        out.append(((c - 1 - l) // p, l))
    return out


def chain_from_profile(profile, p: int) -> tuple:
    """Inverse of chain_profile (the profile must give a valid chain)."""
    chain = tuple(p * k + l + 1 for k, l in profile)
    _validate_chain(chain)
    return chain


def enumerate_two_level(h: int):
    """All two-level compositions of h (3^(h-1) many), deterministic order."""
    if h < 1:
        raise ValueError("h must be positive")
    out = []
    for outer in compositions(h):
        for inners in itertools.product(*(compositions(b) for b in outer)):
            out.append(TwoLevelComposition(tuple(outer), tuple(inners)))
    return out


def enumerate_admissible_two_level(h: int, p: int):
    return [t for t in enumerate_two_level(h) if t.admissible(p)]


def structure_poly_value(theta: TwoLevelComposition, x, p: int):
    """The structure polynomial of theta evaluated at x: over all inner
    blocks of size a, the product of (x - p^j) for j = 0..a-1.

    Vanishes at x = norm exactly when some block is too large for the
    residue field to supply independent leading coefficients.
    """
    result = 1
    for a in theta.flattened:
        for j in range(a):
            result = result * (x - p ** j)
    return result
