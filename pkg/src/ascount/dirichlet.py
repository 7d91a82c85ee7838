"""Exact Dirichlet-series machinery in the variable t = q^(-s).

Everything here is exact rational arithmetic: truncated power series with
hard truncation horizons, rational functions with recurrence-based
expansion, the Euler factors of the counting series and their polynomial
closed forms, zeta factors of the rational function field, and the global
coefficient series assembled place by place.  Floating point is banned from
this module; the asymptotics layer is the only consumer of floats.
"""

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import lcm

from .compositions import (
    delsarte_weight,
    enumerate_admissible_two_level,
    flag_count,
    gaussian_binomial,
    prefix_sums,
    structure_poly_value,
)
from .counting import factor_coefficient
from .errors import InvariantViolation, TruncationError
from .fields import PrimeContext, place_count

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# polynomials over Q (dense coefficient tuples, index = power of t)
# ---------------------------------------------------------------------------


def poly_trim(a) -> tuple:
    a = [Fraction(c) for c in a]
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def poly_add(a, b) -> tuple:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return poly_trim(out)


def poly_mul(a, b) -> tuple:
    a, b = poly_trim(a), poly_trim(b)
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return tuple(out)


def poly_scale(a, c) -> tuple:
    c = Fraction(c)
    return poly_trim(x * c for x in a)


def poly_eval(a, x: Fraction) -> Fraction:
    result = Fraction(0)
    for c in reversed(poly_trim(a)):
        result = result * x + c
    return result


def poly_divmod(a, b):
    """Quotient and remainder in Q[t]; b must be nonzero."""
    a, b = list(poly_trim(a)), poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    inv_lead = 1 / b[-1]
    while len(a) >= len(b):
        c = a[-1] * inv_lead
        d = len(a) - len(b)
        quot[d] = c
        for i, cb in enumerate(b):
            a[d + i] -= c * cb
        while a and a[-1] == 0:
            a.pop()
        if not a:
            break
    return poly_trim(quot), poly_trim(a)


def poly_gcd(a, b) -> tuple:
    """Monic gcd in Q[t]."""
    a, b = poly_trim(a), poly_trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return ()
    return poly_scale(a, 1 / a[-1])


# ---------------------------------------------------------------------------
# truncated power series
# ---------------------------------------------------------------------------


class TruncatedSeries:
    """Power series known exactly up to degree `truncation`.

    Binary operations propagate the minimum truncation of the operands;
    asking for a coefficient past the horizon raises TruncationError rather
    than silently returning zero.
    """

    __slots__ = ("coeffs", "truncation")

    def __init__(self, coeffs, truncation: int):
        if truncation < 0:
            raise ValueError("truncation must be non-negative")
        cs = [Fraction(c) for c in coeffs]
        if len(cs) > truncation + 1:
            raise ValueError("more coefficients than the truncation admits")
        cs.extend([ZERO] * (truncation + 1 - len(cs)))
        self.coeffs = tuple(cs)
        self.truncation = truncation

    @classmethod
    def one(cls, truncation: int) -> "TruncatedSeries":
        return cls([ONE], truncation)

    def coefficient(self, m: int) -> Fraction:
        if m < 0:
            raise ValueError("negative degree")
        if m > self.truncation:
            raise TruncationError(
                f"coefficient {m} requested past truncation {self.truncation}")
        return self.coeffs[m]

    def coefficients(self) -> tuple:
        return self.coeffs

    def truncate(self, truncation: int) -> "TruncatedSeries":
        if truncation > self.truncation:
            raise TruncationError(
                f"cannot extend truncation {self.truncation} to {truncation}")
        return TruncatedSeries(self.coeffs[:truncation + 1], truncation)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.truncation == other.truncation and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.truncation))

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        m = min(self.truncation, other.truncation)
        return TruncatedSeries(
            [self.coeffs[i] + other.coeffs[i] for i in range(m + 1)], m)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        m = min(self.truncation, other.truncation)
        return TruncatedSeries(
            [self.coeffs[i] - other.coeffs[i] for i in range(m + 1)], m)

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.truncation)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries([c * other for c in self.coeffs],
                                   self.truncation)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        m = min(self.truncation, other.truncation)
        out = [ZERO] * (m + 1)
        for i in range(m + 1):
            ca = self.coeffs[i]
            if ca == 0:
                continue
            for j in range(m + 1 - i):
                cb = other.coeffs[j]
                if cb != 0:
                    out[i + j] += ca * cb
        return TruncatedSeries(out, m)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers need inverse()")
        result = TruncatedSeries.one(self.truncation)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base if exponent > 1 else base
            exponent >>= 1
        return result

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse; the constant term must be nonzero."""
        if self.coeffs[0] == 0:
            raise ZeroDivisionError("series has no inverse: constant term 0")
        m = self.truncation
        inv0 = 1 / self.coeffs[0]
        out = [inv0] + [ZERO] * m
        for k in range(1, m + 1):
            acc = ZERO
            for i in range(1, k + 1):
                if self.coeffs[i] != 0:
                    acc += self.coeffs[i] * out[k - i]
            out[k] = -inv0 * acc
        return TruncatedSeries(out, m)

    def inflate(self, d: int) -> "TruncatedSeries":
        """Substitute u -> t^d.  Knowing coefficients up to u^M pins every
        t-coefficient below t^(d(M+1)), so the horizon widens accordingly."""
        if d < 1:
            raise ValueError("inflation step must be positive")
        if d == 1:
            return self
        m = d * (self.truncation + 1) - 1
        out = [ZERO] * (m + 1)
        for i, c in enumerate(self.coeffs):
            out[d * i] = c
        return TruncatedSeries(out, m)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:8])
        tail = ", ..." if self.truncation >= 8 else ""
        return f"TruncatedSeries([{head}{tail}], M={self.truncation})"


def poly_to_series(poly, truncation: int) -> TruncatedSeries:
    """A polynomial as a series; coefficients past the horizon must vanish."""
    poly = poly_trim(poly)
    if len(poly) > truncation + 1:
        raise TruncationError("polynomial degree exceeds requested truncation")
    return TruncatedSeries(poly, truncation)


# ---------------------------------------------------------------------------
# rational series (numerator / denominator, recurrence-based expansion)
# ---------------------------------------------------------------------------


class RationalSeries:
    """A rational function num/den in t with den(0) != 0.

    Coefficients are produced by the linear recurrence the denominator
    induces, so expansion to any degree is exact and incremental:
        den[0]*c_m = num_m - sum_{k>=1} den[k]*c_{m-k}.
    """

    __slots__ = ("num", "den", "_cache")

    def __init__(self, num, den):
        self.num = poly_trim(num)
        self.den = poly_trim(den)
        if not self.den or self.den[0] == 0:
            raise ValueError("denominator needs a nonzero constant term")
        self._cache = []

    def coefficient(self, m: int) -> Fraction:
        if m < 0:
            raise ValueError("negative degree")
        inv0 = 1 / self.den[0]
        while len(self._cache) <= m:
            k = len(self._cache)
            acc = self.num[k] if k < len(self.num) else ZERO
            for i in range(1, min(k, len(self.den) - 1) + 1):
                acc -= self.den[i] * self._cache[k - i]
            self._cache.append(acc * inv0)
        return self._cache[m]

    def series(self, truncation: int) -> TruncatedSeries:
        return TruncatedSeries(
            [self.coefficient(m) for m in range(truncation + 1)], truncation)

    def recurrence(self) -> tuple:
        """Weights (w_1, ..., w_k): for m > deg num,
        c_m = w_1 c_{m-1} + ... + w_k c_{m-k}."""
        inv0 = 1 / self.den[0]
        return tuple(-c * inv0 for c in self.den[1:])

    def evaluate(self, t: Fraction) -> Fraction:
        den = poly_eval(self.den, t)
        if den == 0:
            raise ZeroDivisionError(f"pole at t = {t}")
        return poly_eval(self.num, t) / den

    def reduced(self) -> "RationalSeries":
        """Cancel the numerator/denominator gcd (denominator kept den(0)=1)."""
        g = poly_gcd(self.num, self.den)
        num, _ = poly_divmod(self.num, g)
        den, _ = poly_divmod(self.den, g)
        scale = 1 / den[0]
        return RationalSeries(poly_scale(num, scale), poly_scale(den, scale))

    def __repr__(self):
        return f"RationalSeries(num={self.num}, den={self.den})"


# ---------------------------------------------------------------------------
# delta factors and Euler factors
# ---------------------------------------------------------------------------


def delta_exponents(ctx: PrimeContext, j: int):
    """Exponent pair (a, A) of the j-th pole factor: 1 - norm^a * u^A with
    a = j(p-1) and A = p^(r+1-j) (p^j - 1); u = t^(deg of the place)."""
    if not 1 <= j <= ctx.r:
        raise ValueError(f"j = {j} outside [1, r]")
    p = ctx.p
    return j * (p - 1), p ** (ctx.r + 1 - j) * (p ** j - 1)


def delta_polynomial(ctx: PrimeContext, j: int, norm: int) -> tuple:
    """1 - norm^(j(p-1)) u^(A_j) as a polynomial in u."""
    a, big_a = delta_exponents(ctx, j)
    poly = [Fraction(0)] * (big_a + 1)
    poly[0] = ONE
    poly[big_a] = Fraction(-norm ** a)
    return tuple(poly)


def euler_factor_series(ctx: PrimeContext, f: int, norm: int,
                        truncation: int) -> TruncatedSeries:
    """The depth-f Euler factor 1 + sum_n factor_coefficient(n) u^n at a
    place of the given norm, truncated at the given u-degree."""
    if not 0 <= f <= ctx.r:
        raise ValueError(f"f = {f} outside [0, r]")
    return TruncatedSeries(
        [factor_coefficient(ctx, f, m, norm) for m in range(truncation + 1)],
        truncation)


def psi_polynomial(ctx: PrimeContext, f: int, norm: int) -> tuple:
    """Numerator polynomial of the depth-f Euler factor: the factor times
    prod_j delta_j, which the theory promises is a polynomial in u.

    Computed out to twice the structural degree sum(A_j); the trailing
    window of that length must be identically zero or the promise failed.
    """
    if not 0 <= f <= ctx.r:
        raise ValueError(f"f = {f} outside [0, r]")
    degree_bound = sum(delta_exponents(ctx, j)[1] for j in range(1, f + 1))
    horizon = 2 * degree_bound
    series = euler_factor_series(ctx, f, norm, horizon)
    for j in range(1, f + 1):
        series = series * poly_to_series(delta_polynomial(ctx, j, norm), horizon)
    tail = [m for m in range(degree_bound + 1, horizon + 1)
            if series.coefficient(m) != 0]
    if tail:
        raise InvariantViolation(
            f"Euler numerator not a polynomial: nonzero at degrees {tail}")
    return poly_trim(series.coefficients()[:degree_bound + 1])


def _ell_assignments(theta, p: int):
    """All assignments of a fine value in [1, p-1] to each inner block:
    strictly decreasing across inner blocks inside one outer part, free
    across outer parts.  Yields flat tuples, one value per inner block."""
    per_part = []
    for count in theta.inner_counts:
        per_part.append([tuple(reversed(combo)) for combo in
                         itertools.combinations(range(1, p), count)])
    for pick in itertools.product(*per_part):
        yield tuple(v for part in pick for v in part)


def psi_closed_form(ctx: PrimeContext, f: int, norm: int) -> tuple:
    """The same numerator polynomial assembled from the closed form: a sum
    over admissible two-level compositions with structure-polynomial values,
    flag counts, and monomials from the geometric-series prefactors."""
    if not 0 <= f <= ctx.r:
        raise ValueError(f"f = {f} outside [0, r]")
    p, r = ctx.p, ctx.r
    deltas = {j: delta_polynomial(ctx, j, norm) for j in range(1, f + 1)}
    result = (ONE,)
    for j in range(1, f + 1):
        result = poly_mul(result, deltas[j])
    for h in range(1, f + 1):
        binom = gaussian_binomial(f, h, p)
        for theta in enumerate_admissible_two_level(h, p):
            g_val = structure_poly_value(theta, norm, p)
            if g_val == 0:
                continue
            gamma = flag_count(theta.flattened, p)
            outer_prefix = theta.outer_prefix
            base = (Fraction(binom * gamma * g_val),)
            for j in range(1, f + 1):
                if j not in outer_prefix:
                    base = poly_mul(base, deltas[j])
            # one monomial norm^(B(p-1)) u^(A_B) per outer prefix except the last
            for b_prefix in outer_prefix[:-1]:
                a, big_a = delta_exponents(ctx, b_prefix)
                mono = [Fraction(0)] * (big_a + 1)
                mono[big_a] = Fraction(norm ** a)
                base = poly_mul(base, mono)
            # weights of the fine-value monomials per inner block
            flat = theta.flattened
            inner_prefix = prefix_sums(flat)
            weights = []
            for i, a_i in enumerate(flat):
                start = inner_prefix[i - 1] if i else 0
                weights.append(sum(p ** (r - pos)
                                   for pos in range(start + 1, inner_prefix[i] + 1)))
            ell_sum = ()
            for ells in _ell_assignments(theta, p):
                coeff = ONE
                degree = 0
                for a_i, w_i, ell in zip(flat, weights, ells):
                    coeff *= norm ** (a_i * (ell - 1))
                    degree += (p - 1) * w_i * (ell + 1)
                mono = [Fraction(0)] * (degree + 1)
                mono[degree] = coeff
                ell_sum = poly_add(ell_sum, mono)
            result = poly_add(result, poly_mul(base, ell_sum))
    return poly_trim(result)


# ---------------------------------------------------------------------------
# nested geometric series identity (exact check with a rigorous tail bound)
# ---------------------------------------------------------------------------


def _rational_root(x: Fraction, d: int) -> Fraction:
    """Exact d-th root of a positive rational, or ValueError."""
    def iroot(n: int) -> int:
        root = round(n ** (1.0 / d))
        for cand in (root - 1, root, root + 1):
            if cand > 0 and cand ** d == n:
                return cand
        raise ValueError(f"{n} has no integer {d}-th root")
    return Fraction(iroot(x.numerator), iroot(x.denominator))


def _stirling2(n: int, k: int) -> int:
    if k in (0, n):
        return 1 if k == n else 0
    table = [[0] * (k + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, min(i, k) + 1):
            table[i][j] = j * table[i - 1][j] + table[i - 1][j - 1]
    return table[n][k]


def _power_sum(e: int, ratio: Fraction) -> Fraction:
    """sum_{k>=0} k^e ratio^k for 0 < ratio < 1, exactly."""
    if e == 0:
        return 1 / (1 - ratio)
    total = ZERO
    for j in range(1, e + 1):
        numer = _stirling2(e, j) * _factorial(j) * ratio ** j
        total += numer / (1 - ratio) ** (j + 1)
    return total


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _power_tail(e: int, ratio: Fraction, cutoff: int) -> Fraction:
    """sum_{k>cutoff} k^e ratio^k, exactly (binomial shift of _power_sum)."""
    shift = cutoff + 1
    total = ZERO
    for m in range(e + 1):
        total += (_binomial(e, m) * shift ** (e - m)) * _power_sum(m, ratio)
    return ratio ** shift * total


def _binomial(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def nested_geometric_check(x, alphas, depth: int) -> bool:
    """Verify the closed form of the strictly-nested geometric sum
    sum_{k_1 > k_2 > ... > k_J >= 0} x^(sum alpha_i k_i), namely
    x^(sum (J-i) alpha_i) * prod_i (1 - x^(alpha_1+...+alpha_i))^(-1).

    Partial sums run the outer index up to `depth`; the discarded tail is
    bounded exactly (positive terms, every prefix exponent negative), and
    the check passes iff |closed form - partial sum| is within that bound.

    Raises ValueError if some prefix sum of the alphas is nonnegative (the
    sum diverges) or if x has no exact root of the needed order (exponents
    x^(k/D) must stay rational for the arithmetic to remain exact).
    """
    x = Fraction(x)
    alphas = [Fraction(a) for a in alphas]
    if x <= 1:
        raise ValueError("x must exceed 1")
    if not alphas:
        raise ValueError("need at least one exponent")
    prefixes = list(itertools.accumulate(alphas))
    if max(prefixes) >= 0:
        raise ValueError("nonnegative prefix exponent: series diverges")
    denom = lcm(*(a.denominator for a in alphas))
    root = _rational_root(x, denom)  # ValueError if irrational
    count = len(alphas)

    def power(exponent: Fraction) -> Fraction:
        scaled = exponent * denom
        assert scaled.denominator == 1
        return root ** scaled.numerator

    closed = power(sum((count - i) * alphas[i - 1] for i in range(1, count + 1)))
    for pre in prefixes:
        closed /= 1 - power(pre)

    ratios = [power(a) for a in alphas]

    def partial(level: int, upper: int) -> Fraction:
        # sum over k_level in [0, upper) of ratio^k * inner levels
        if level == count:
            return sum(ratios[level - 1] ** k for k in range(upper))
        return sum(ratios[level - 1] ** k * partial(level + 1, k)
                   for k in range(upper))

    observed = partial(1, depth + 1) if count > 1 else \
        sum(ratios[0] ** k for k in range(depth + 1))

    # fold a bound C * x^(beta k) * k^e for the inner levels, innermost out
    coeff, beta, degree = ONE, ZERO, 0
    for i in range(count, 1, -1):
        g = alphas[i - 1] + beta
        if g < 0:
            coeff *= _power_sum(degree, power(g))
            beta, degree = ZERO, 0
        elif g > 0:
            coeff /= power(g) - 1
            beta = g
        else:
            degree += 1
    outer_ratio = power(alphas[0] + beta)
    assert outer_ratio < 1  # guaranteed: alpha_1 + beta = max prefix sum < 0
    tail_bound = coeff * _power_tail(degree, outer_ratio, depth)
    return abs(closed - observed) <= tail_bound


# ---------------------------------------------------------------------------
# zeta factors of the rational function field (genus 0, L = 1)
# ---------------------------------------------------------------------------


def zeta_p1(ctx: PrimeContext) -> RationalSeries:
    """Zeta of F_q(t): 1 / ((1 - t)(1 - q t)); coefficient of t^m counts the
    effective divisors of degree m."""
    return RationalSeries((ONE,), poly_mul((1, -1), (1, -ctx.q)))


def zeta_shift(ctx: PrimeContext, a: int, b: int) -> RationalSeries:
    """Zeta of F_q(t) with s -> a*s - b as a rational function of t = q^(-s):
    1 / ((1 - q^b t^a)(1 - q^(b+1) t^a))."""
    if a < 1:
        raise ValueError("the s-coefficient must be positive")
    factor1 = [Fraction(0)] * (a + 1)
    factor1[0], factor1[a] = ONE, Fraction(-ctx.q ** b)
    factor2 = [Fraction(0)] * (a + 1)
    factor2[0], factor2[a] = ONE, Fraction(-ctx.q ** (b + 1))
    return RationalSeries((ONE,), poly_mul(factor1, factor2))


# ---------------------------------------------------------------------------
# the global series over F_q(t)
# ---------------------------------------------------------------------------


def powered_place_factor(ctx: PrimeContext, f: int, degree: int,
                         truncation: int) -> TruncatedSeries:
    """All degree-d places at once: the degree-d Euler factor raised to the
    number of such places, computed in u = t^d and then inflated."""
    in_u = truncation // degree
    factor = euler_factor_series(ctx, f, ctx.q ** degree, in_u)
    powered = factor ** place_count(ctx, degree)
    return powered.inflate(degree).truncate(truncation)


def global_factor_series(ctx: PrimeContext, f: int, truncation: int,
                         workers: int = 0) -> TruncatedSeries:
    """Product over all places of the depth-f Euler factor, aggregated per
    degree; the reduction runs in fixed degree order regardless of how the
    per-degree factors were scheduled."""
    if not 0 <= f <= ctx.r:
        raise ValueError(f"f = {f} outside [0, r]")
    if f == 0 or truncation == 0:
        return TruncatedSeries.one(truncation)
    degrees = range(1, truncation + 1)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            factors = list(pool.map(
                lambda d: powered_place_factor(ctx, f, d, truncation), degrees))
    else:
        factors = [powered_place_factor(ctx, f, d, truncation) for d in degrees]
    result = TruncatedSeries.one(truncation)
    for factor in factors:
        # sparse operand first: only multiples of its degree are nonzero
        result = factor * result
    return result


def global_dirichlet(ctx: PrimeContext, truncation: int,
                     workers: int = 0) -> TruncatedSeries:
    """Coefficient m counts the extensions of F_q(t) with discriminant
    degree m; the weighted sum over depths must be a nonnegative integer in
    every degree or the theory (or this code) is wrong."""
    total = TruncatedSeries([], truncation)
    for f in range(ctx.r + 1):
        weight = delsarte_weight(f, ctx)
        total = total + global_factor_series(ctx, f, truncation, workers) * weight
    bad = [m for m, c in enumerate(total.coefficients())
           if c.denominator != 1 or c < 0]
    if bad:
        raise InvariantViolation(
            f"global coefficients not in Z>=0 at degrees {bad}")
    return total


def local_rational(ctx: PrimeContext) -> RationalSeries:
    """The local counting series of F_q((t)) as an exact rational function:
    sum_f e_f (prod_{j>f} delta_j) Psi_f over prod_{j=1..r} delta_j."""
    norm = ctx.q
    numerator = ()
    for f in range(ctx.r + 1):
        term = poly_scale(psi_polynomial(ctx, f, norm), delsarte_weight(f, ctx))
        for j in range(f + 1, ctx.r + 1):
            term = poly_mul(term, delta_polynomial(ctx, j, norm))
        numerator = poly_add(numerator, term)
    denominator = (ONE,)
    for j in range(1, ctx.r + 1):
        denominator = poly_mul(denominator, delta_polynomial(ctx, j, norm))
    return RationalSeries(numerator, denominator)


def local_direct_series(ctx: PrimeContext, truncation: int) -> TruncatedSeries:
    """The same local series summed term by term, bypassing the rational
    closed form; agreement with local_rational is a theorem."""
    total = TruncatedSeries([], truncation)
    for f in range(ctx.r + 1):
        series = euler_factor_series(ctx, f, ctx.q, truncation)
        total = total + series * delsarte_weight(f, ctx)
    return total


def lambda_inverse(ctx: PrimeContext) -> tuple:
    """Inverse of the zeta-factor comparison function at depth f = r, as an
    exact polynomial in t.  Over F_q(t) every zeta factor contributes
    (1 - q^b t^a)(1 - q^(b+1) t^a); the case split mirrors the pole shape:
    r = 1 takes one factor per fine value, r = p = 2 takes a cubed factor.
    """
    p, r, q = ctx.p, ctx.r, ctx.q

    def zeta_inv(a: int, b: int) -> tuple:
        f1 = [Fraction(0)] * (a + 1)
        f1[0], f1[a] = ONE, Fraction(-q ** b)
        f2 = [Fraction(0)] * (a + 1)
        f2[0], f2[a] = ONE, Fraction(-q ** (b + 1))
        return poly_mul(f1, f2)

    if r == 1:
        result = (ONE,)
        for ell in range(1, p):
            result = poly_mul(result, zeta_inv((ell + 1) * (p - 1), ell))
        return result
    if r == 2 and p == 2:
        result = zeta_inv(6, 2)
        cube = zeta_inv(4, 1)
        for _ in range(3):
            result = poly_mul(result, cube)
        return result
    return zeta_inv(p * (p ** r - 1), r * (p - 1))


def holomorphy_radius_check(ctx: PrimeContext, truncation: int,
                            start: int = 20) -> bool:
    """After dividing out the expected pole-carrying factor, the remaining
    coefficients d_m must grow strictly slower than the main term: checks
    |d_m| <= q^((a - eps/2) m) for every m in [start, truncation], with
    a = (1 + r(p-1))/(p(p^r - 1)) and eps = 1/(p^2 (p^r - 1)), all exact."""
    p, r, q = ctx.p, ctx.r, ctx.q
    exponent = (Fraction(1 + r * (p - 1), p * (p ** r - 1))
                - Fraction(1, 2 * p ** 2 * (p ** r - 1)))
    series = global_dirichlet(ctx, truncation)
    reduced = series * poly_to_series(lambda_inverse(ctx), truncation)
    for m in range(start, truncation + 1):
        d_m = reduced.coefficient(m)
        assert d_m.denominator == 1
        lhs = abs(d_m.numerator) ** exponent.denominator
        rhs = q ** (exponent.numerator * m)
        if lhs > rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def _encode_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _decode_rational(s: str) -> Fraction:
    if "/" in s:
        num, den = s.split("/")
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def series_to_json(ctx: PrimeContext, series: TruncatedSeries) -> str:
    """Schema: {"p", "n", "r", "variable": "q^-s", "truncation",
    "coefficients": [decimal strings, rationals as "num/den"]}."""
    obj = {
        "p": ctx.p,
        "n": ctx.n,
        "r": ctx.r,
        "variable": "q^-s",
        "truncation": series.truncation,
        "coefficients": [_encode_rational(c) for c in series.coefficients()],
    }
    return json.dumps(obj, indent=2)


def series_from_json(text: str):
    """Inverse of series_to_json; returns ((p, n, r), TruncatedSeries)."""
    obj = json.loads(text)
    coeffs = [_decode_rational(s) for s in obj["coefficients"]]
    return ((obj["p"], obj["n"], obj["r"]),
            TruncatedSeries(coeffs, obj["truncation"]))
