"""Pole structure and main-term constants of the counting series.

The local and global counting series are rational, respectively
zeta-comparable, in t = q^(-s), so coefficient growth is governed by the
poles on the circle of convergence.  This module exposes the exact pole
data (abscissa, angular spacing, orders, certainty), residue-based
per-class leading constants, exact verification of the four abscissa
comparison lemmas, and desk-scale least-squares fits of exact
coefficients against the predicted main term.

Everything that can be exact is exact: pole positions, angular lattices
and the inequality checks use Fraction arithmetic, and positivity of the
numerator polynomial at the dominant pole is certified by rational
interval bisection.  Floats appear only in the leading constants and the
fits, computed with mpmath at twice double precision and cross-checked
against exact coefficients.
"""

import itertools
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy

from .compositions import compositions, delsarte_weight, prefix_sums
from .dirichlet import (
    delta_exponents,
    delta_polynomial,
    lambda_inverse,
    local_rational,
    poly_divmod,
    poly_gcd,
    poly_mul,
    poly_trim,
    psi_polynomial,
)
from .errors import InvariantViolation
from .fields import PrimeContext, place_count

ZERO = Fraction(0)


@dataclass(frozen=True)
class MainTermParams:
    """Exact main-term data for counts by discriminant degree m.

    The number of extensions of discriminant degree m grows like
    P(m log q) * q^(abscissa * m) where P is a real polynomial of degree
    pole_order - 1 whose coefficients depend on m mod class_modulus.  The
    leading coefficient of P only depends on m mod constant_modulus.
    Counts over the local field use local_modulus residue classes.
    prime_lcm is lcm(2, ..., p); error_exponent bounds the relative error
    term (the count minus the main term is O(q^(error_exponent*m + eps))).
    """

    abscissa: Fraction
    pole_order: int
    class_modulus: int
    local_modulus: int
    constant_modulus: int
    prime_lcm: int
    error_exponent: Fraction


def main_term_params(ctx: PrimeContext) -> MainTermParams:
    """Main-term parameters for counting C_p^r-extensions of F_q(t)."""
    p, r = ctx.p, ctx.r
    top = p * (p ** r - 1)
    abscissa = Fraction(1 + r * (p - 1), top)
    prime_lcm = math.lcm(*range(2, p + 1))
    if r == 1:
        order, period = p - 1, (p - 1) * prime_lcm
    elif r == p == 2:
        order, period = 4, 12
    else:
        order, period = 1, top
    if r == 1 and p != 2:
        constant_period = p - 1
    elif p == 2 and r <= 2:
        constant_period = 2
    else:
        constant_period = top
    error_exponent = Fraction(p * (1 + r * (p - 1)) - 1, p * top)
    if period % constant_period or not error_exponent < abscissa:
        raise InvariantViolation("inconsistent main-term case split")
    return MainTermParams(abscissa, order, period, top, constant_period,
                          prime_lcm, error_exponent)


@dataclass(frozen=True)
class PoleLine:
    """One circle of (candidate) poles in the t = q^(-s) plane.

    real_part is the common real part of the matching s-values; the
    candidate angles are spaced by angular_step in units of 2*pi/log(q).
    Lines flagged definite carry at least one pole of order max_order,
    backed by a non-vanishing argument; candidate lines bound the order
    from above but individual points may fail to be poles at all.
    """

    real_part: Fraction
    angular_step: Fraction
    max_order: int
    definite: bool


def local_pole_catalog(ctx: PrimeContext) -> tuple:
    """Pole lines of the local counting series, rightmost first.

    The series is rational with denominator prod_j (1 - q^(j(p-1)) t^(A_j)),
    A_j = p^(r+1-j) (p^j - 1); line j lies at real part j(p-1)/A_j.  Only
    the rightmost line (j = r) is definite: the numerator provably keeps a
    positive value there (see psi_lower_bound), which is verified here by
    an exact gcd against the reduced denominator.  Lines with j < r may be
    cancelled by the numerator and stay candidates.
    """
    lines = []
    for j in range(ctx.r, 0, -1):
        shift, degree = delta_exponents(ctx, j)
        lines.append(PoleLine(Fraction(shift, degree), Fraction(1, degree),
                              1, j == ctx.r))
    for upper, lower in zip(lines, lines[1:]):
        if not upper.real_part > lower.real_part:
            raise InvariantViolation("local pole lines out of order")
    reduced = local_rational(ctx).reduced()
    rightmost = delta_polynomial(ctx, ctx.r, ctx.q)
    if len(poly_gcd(reduced.den, rightmost)) < 2:
        raise InvariantViolation("rightmost local pole cancelled by the "
                                 "numerator")
    return tuple(lines)


def _interval_eval(poly, lo: Fraction, hi: Fraction):
    """Exact bounds of a polynomial over [lo, hi] with 0 <= lo <= hi."""
    lower = upper = ZERO
    lo_pow = hi_pow = Fraction(1)
    for c in poly:
        if c >= 0:
            lower += c * lo_pow
            upper += c * hi_pow
        else:
            lower += c * hi_pow
            upper += c * lo_pow
        lo_pow *= lo
        hi_pow *= hi
    return lower, upper


def value_bounds_at_real_root(poly, power, index: int, max_steps: int = 300):
    """Exact rational bounds on poly(x) at the positive real root of
    x**index = power, for power in (0, 1].

    Bisects until the bounds exclude 0, so the sign is certified.  Returns
    (0, 0) when poly is an exact polynomial multiple of x**index - power.
    Raises InvariantViolation when the bisection budget is exhausted,
    which happens only if the value is zero without the divisibility
    witness or absurdly close to it.
    """
    power = Fraction(power)
    if not 0 < power <= 1:
        raise ValueError("power must lie in (0, 1]")
    if index < 1:
        raise ValueError("index must be positive")
    modulus = (-power,) + (ZERO,) * (index - 1) + (Fraction(1),)
    if not poly_trim(poly_divmod(poly, modulus)[1]):
        return ZERO, ZERO
    lo, hi = ZERO, Fraction(1)
    for _ in range(max_steps):
        lower, upper = _interval_eval(poly, lo, hi)
        if lower > 0 or upper < 0:
            return lower, upper
        mid = (lo + hi) / 2
        if mid ** index <= power:
            lo = mid
        else:
            hi = mid
    raise InvariantViolation("sign not separated within the bisection "
                             "budget")


def sign_at_real_root(poly, power, index: int) -> int:
    """Certified sign (-1, 0, +1) of poly at the positive real root of
    x**index = power."""
    lower, upper = value_bounds_at_real_root(poly, power, index)
    if lower > 0:
        return 1
    if upper < 0:
        return -1
    return 0


def psi_lower_bound(ctx: PrimeContext, f: int) -> Fraction:
    """Certified positive rational lower bound for the depth-f numerator
    polynomial at its rightmost real pole point t = q^(-f(p-1)/A_f).

    The point is the positive real zero of 1 - q^(f(p-1)) t^(A_f); the
    numerator staying positive there is what makes the rightmost local
    pole line definite.  Raises InvariantViolation when positivity cannot
    be certified.
    """
    shift, degree = delta_exponents(ctx, f)
    poly = psi_polynomial(ctx, f, ctx.q)
    lower, upper = value_bounds_at_real_root(
        poly, Fraction(1, ctx.q ** shift), degree)
    if not lower > 0:
        raise InvariantViolation(
            f"depth-{f} numerator not positive at its pole point: "
            f"bounds [{lower}, {upper}]")
    return lower


def _poly_eval_complex(poly, z):
    """Horner evaluation of a Fraction polynomial at an mpmath number."""
    total = mpmath.mpc(0)
    for c in reversed(poly):
        total = total * z + mpmath.mpf(c.numerator) / c.denominator
    return total


def _sample_cap(ctx: PrimeContext) -> int:
    """Largest coefficient index used to validate the local constants.

    Far enough out that the subleading pole family has decayed to about
    1e-4 relative to the main term, rounded up to whole residue classes.
    """
    p, r = ctx.p, ctx.r
    period = p * (p ** r - 1)
    need = 60
    if r > 1:
        gap = (Fraction(r * (p - 1), period)
               - Fraction((r - 1) * (p - 1), p * p * (p ** (r - 1) - 1)))
        need = max(need, math.ceil(4 * math.log(10)
                                   / (float(gap) * math.log(ctx.q))))
    return period * math.ceil(need / period)


@dataclass(frozen=True)
class LocalConstants:
    """Per-class leading constants of the local counts, with diagnostics.

    constants maps m mod modulus to the constant in front of
    q^(m r(p-1)/modulus); relative_errors maps each class with a nonzero
    constant to the trailing (m, relative error) samples used for
    validation, ordered by m.
    """

    modulus: int
    constants: dict
    relative_errors: dict
    m_max: int


def local_leading_constants(ctx: PrimeContext, precision: int = 120,
                            m_max: int = None,
                            tolerance: float = 1e-2) -> LocalConstants:
    """Leading constants of the local count per residue class mod p(p^r-1).

    The count at discriminant exponent m behaves like
    constant(m mod L) * q^(m r(p-1)/L) with L = p(p^r - 1).  The constants
    come from summing the reciprocal-pole residues over the L equally
    spaced poles on the circle of convergence: constant(m mod L) =
    (e_r / L) * sum_j xi^(jm) * U(R xi^(-j)) where U(z) is the numerator
    polynomial at depth r divided by the j < r denominator factors,
    R = q^(-r(p-1)/L) and xi = exp(2 pi i / L).

    precision is the working precision in bits.  Each constant is
    certified nonnegative;  classes with vanishing constant must carry
    exactly zero coefficients, and for the others the constants are
    validated against the exact coefficients of local_rational out to
    m_max: the relative error at the largest sample must fall below
    tolerance and must not grow across the trailing samples.
    """
    if precision < 53:
        raise ValueError("precision below double precision")
    p, r, q = ctx.p, ctx.r, ctx.q
    period = p * (p ** r - 1)
    if m_max is None:
        m_max = _sample_cap(ctx)
    if m_max < 2 * period:
        raise ValueError("m_max leaves no room for validation samples")
    rational = local_rational(ctx)
    weight = delsarte_weight(r, ctx)
    poly = psi_polynomial(ctx, r, q)
    with mpmath.workprec(precision):
        radius = mpmath.power(q, -mpmath.mpf(r * (p - 1)) / period)
        values = []
        for j in range(1, period + 1):
            alpha = radius * mpmath.expjpi(mpmath.mpf(-2 * j) / period)
            value = _poly_eval_complex(poly, alpha)
            for i in range(1, r):
                shift, degree = delta_exponents(ctx, i)
                factor = 1 - q ** shift * alpha ** degree
                # cannot vanish: the j < r pole circles are strictly larger
                if abs(factor) < mpmath.mpf(2) ** (-(precision // 2)):
                    raise InvariantViolation("hit a subleading pole while "
                                             "evaluating residues")
                value /= factor
            values.append(value)
        scale = mpmath.mpf(weight.numerator) / weight.denominator / period
        constants = []
        for cls in range(period):
            total = mpmath.mpc(0)
            for j in range(1, period + 1):
                total += mpmath.expjpi(mpmath.mpf(2 * j * cls) / period) \
                    * values[j - 1]
            total *= scale
            if abs(total.imag) > mpmath.mpf(2) ** (-(precision // 3)) \
                    * max(mpmath.mpf(1), abs(total.real)):
                raise InvariantViolation(
                    f"constant for class {cls} has a nonreal component")
            constants.append(total.real)
        top = max(abs(c) for c in constants)
        zero_cut = mpmath.mpf(10) ** -25 * max(mpmath.mpf(1), top)
        if top < zero_cut:
            raise InvariantViolation("all leading constants vanish")
        exponent = mpmath.mpf(r * (p - 1)) / period
        errors = {}
        out = {}
        for cls in range(period):
            value = constants[cls]
            if value < -zero_cut:
                raise InvariantViolation(
                    f"negative leading constant on class {cls}: {value}")
            samples = [m for m in range(cls, m_max + 1, period) if m > 0]
            if abs(value) < zero_cut:
                bad = [m for m in samples if rational.coefficient(m) != 0]
                if bad:
                    raise InvariantViolation(
                        f"class {cls} has vanishing constant but nonzero "
                        f"coefficients at m = {bad[:4]}")
                out[cls] = 0.0
                continue
            window = samples[-10:]
            # early entries of a class may still be exact zeros (killed
            # coefficient chains); only the maximal positive suffix is
            # comparable against the main term
            while window and rational.coefficient(window[0]) == 0:
                window.pop(0)
            if not window:
                raise InvariantViolation(
                    f"class {cls} has a nonzero constant but no positive "
                    f"coefficients up to m = {m_max}")
            trail = []
            for m in window:
                exact = rational.coefficient(m)
                if exact <= 0:
                    raise InvariantViolation(
                        f"class {cls} expected positive coefficient at "
                        f"m = {m}")
                exact = mpmath.mpf(exact.numerator) / exact.denominator
                main = value * mpmath.power(q, exponent * m)
                trail.append((m, float(abs(exact - main) / exact)))
            if trail[-1][1] >= tolerance:
                raise InvariantViolation(
                    f"class {cls} relative error {trail[-1][1]:.3g} at "
                    f"m = {trail[-1][0]} exceeds {tolerance}")
            # only meaningful while above float rounding noise
            if trail[0][1] > 1e-20 and trail[-1][1] > trail[0][1]:
                raise InvariantViolation(
                    f"class {cls} error trend not decreasing: {trail}")
            errors[cls] = tuple(trail)
            out[cls] = float(value)
    return LocalConstants(period, out, errors, m_max)


def _lambda_zeta_shifts(ctx: PrimeContext) -> tuple:
    """(degree, shift) pairs so that the zeta-product comparison factor
    expands as prod (1 - q^shift t^degree)(1 - q^(shift+1) t^degree),
    matching dirichlet.lambda_inverse."""
    p, r = ctx.p, ctx.r
    if r == 1:
        return tuple(((v + 1) * (p - 1), v) for v in range(1, p))
    if r == 2 and p == 2:
        return ((6, 2), (4, 1), (4, 1), (4, 1))
    return ((p * (p ** r - 1), r * (p - 1)),)


def global_pole_catalog(ctx: PrimeContext) -> tuple:
    """Pole lines of the F_q(t) counting series on its abscissa.

    All entries share real part main_term_params(ctx).abscissa.  The
    definite line carries the poles of order exactly pole_order, spaced by
    1/constant_modulus; for parameter ranges where finer candidates exist
    (r = 1 with p odd, and r = p = 2) a second line with the candidate
    lattice 1/class_modulus and the order bound pole_order - 1 follows.
    Points of the candidate lattice that lie on the definite lattice are
    covered by the definite entry.

    The stated order and spacing are verified exactly against the factors
    of the zeta-product comparison polynomial that vanish at the real
    abscissa point.
    """
    params = main_term_params(ctx)
    q = ctx.q
    factors = []
    for degree, shift in _lambda_zeta_shifts(ctx):
        factors.append((degree, shift))
        factors.append((degree, shift + 1))
    product = (Fraction(1),)
    for degree, shift in factors:
        term = [ZERO] * (degree + 1)
        term[0] = Fraction(1)
        term[degree] = Fraction(-(q ** shift))
        product = poly_mul(product, tuple(term))
    if product != lambda_inverse(ctx):
        raise InvariantViolation("zeta-product factorisation mismatch")
    vanishing = [degree for degree, shift in factors
                 if Fraction(shift) == params.abscissa * degree]
    if len(vanishing) != params.pole_order:
        raise InvariantViolation(
            f"abscissa vanishing order {len(vanishing)} does not match the "
            f"stated pole order {params.pole_order}")
    if math.gcd(*vanishing) != params.constant_modulus:
        raise InvariantViolation("angular period of the top-order poles "
                                 "does not match constant_modulus")
    lines = [PoleLine(params.abscissa,
                      Fraction(1, params.constant_modulus),
                      params.pole_order, True)]
    if params.class_modulus != params.constant_modulus:
        lines.append(PoleLine(params.abscissa,
                              Fraction(1, params.class_modulus),
                              params.pole_order - 1, False))
    return tuple(lines)


def main_term_fit(ctx: PrimeContext, coefficients) -> dict:
    """Least-squares fit of exact coefficients against the main term.

    coefficients[m] must be the exact number of extensions of F_q(t) with
    discriminant degree m (the series.global_dirichlet output).  For each
    residue class mod class_modulus the rescaled values
    y_m = c_m * q^(-abscissa*m) are fitted by a polynomial of degree
    pole_order - 1 in m, by ordinary least squares over the last 60% of
    the class's points (early points carry transients from subleading
    poles).  Classes that are identically zero short-circuit to a zero
    fit.  Fitted coefficients are reported in ascending order; the
    residual trend lists |residual| / max|y| over the window, ordered
    by m.

    Raises ValueError when a nonzero class has fewer than 2*pole_order
    points.
    """
    params = main_term_params(ctx)
    period, order = params.class_modulus, params.pole_order
    a = params.abscissa
    top = len(coefficients) - 1
    classes = {}
    with mpmath.workprec(120):
        for cls in range(period):
            points = list(range(cls, top + 1, period))
            exact = [int(coefficients[m]) for m in points]
            if all(c == 0 for c in exact):
                classes[cls] = {"degree": order - 1,
                                "coefficients": (0.0,) * order,
                                "leading": 0.0,
                                "points": len(points),
                                "window": 0,
                                "residual_trend": (),
                                "zero": True}
                continue
            if len(points) < 2 * order:
                raise ValueError(
                    f"class {cls}: need at least {2 * order} points for a "
                    f"degree-{order - 1} fit, have {len(points)}")
            rescaled = [float(c * mpmath.power(
                ctx.q, -mpmath.mpf(m) * a.numerator / a.denominator))
                for m, c in zip(points, exact)]
            window = math.ceil(0.6 * len(points))
            xs = points[-window:]
            ys = rescaled[-window:]
            fit = numpy.polyfit(xs, ys, order - 1)
            scale = max(abs(y) for y in ys)
            trend = tuple(abs(y - float(numpy.polyval(fit, x))) / scale
                          for x, y in zip(xs, ys))
            classes[cls] = {"degree": order - 1,
                            "coefficients": tuple(float(c)
                                                  for c in fit[::-1]),
                            "leading": float(fit[0]),
                            "points": len(points),
                            "window": window,
                            "residual_trend": trend,
                            "zero": False}
    return {"modulus": period, "abscissa": a, "degree": order - 1,
            "classes": classes}


def _nonincreasing_tuples(length: int, top: int):
    """Non-increasing tuples of the given length with entries in [1, top]."""
    return itertools.combinations_with_replacement(range(top, 0, -1), length)


def _mid_abscissa(p: int, r: int, h: int) -> Fraction:
    """(1 - 1/p + h(p-1)) / (p^(r+1-h)(p^h - 1)) as an exact fraction."""
    return Fraction((p - 1) * (1 + h * p), p ** (r + 2 - h) * (p ** h - 1))


def verify_inequalities(p_max: int = 7, r_max: int = 6) -> dict:
    """Exact check of the four abscissa comparison lemmas.

    Families, each over primes p <= p_max and 2 <= r <= r_max:
      - local_abscissa_chain: successive local pole abscissas are strictly
        increasing in the depth f (2 <= f <= r).
      - zeta_abscissa_chain: for 2 <= j <= r the previous zeta abscissa is
        <= the depth-j comparison axis < the zeta abscissa, except that
        j = p = 2 collapses (outer terms equal, comparison axis below);
        left equality holds exactly for p = 2, j = 3.
      - single_block_bound: for a single run of h equal outer values and
        non-increasing inner values in [1, p-1], the growth exponent stays
        strictly below the comparison axis except at the all-(p-1) tuple,
        which lands exactly on the zeta abscissa.
      - multi_block_bound: with at least two outer runs (outer block sizes
        b_i, h = sum b_i <= min(r, 5)) the bound is strict for every
        admissible inner assignment.

    Returns a report mapping family name to counts, equality witnesses and
    violations; all violations lists are expected to stay empty.
    """
    primes = [v for v in range(2, p_max + 1)
              if all(v % d for d in range(2, v))]
    report = {}

    checked, equalities, violations = 0, [], []
    for p in primes:
        for r in range(2, r_max + 1):
            for f in range(2, r + 1):
                lhs = Fraction((f - 1) * (p - 1),
                               p ** (r + 2 - f) * (p ** (f - 1) - 1))
                rhs = Fraction(f * (p - 1), p ** (r + 1 - f) * (p ** f - 1))
                checked += 1
                if not lhs < rhs:
                    violations.append((p, r, f, str(lhs), str(rhs)))
    report["local_abscissa_chain"] = {"checked": checked,
                                      "equalities": equalities,
                                      "violations": violations}

    checked, equalities, violations = 0, [], []
    for p in primes:
        for r in range(2, r_max + 1):
            for j in range(2, r + 1):
                lhs = Fraction(1 + (j - 1) * (p - 1),
                               p ** (r + 2 - j) * (p ** (j - 1) - 1))
                mid = _mid_abscissa(p, r, j)
                rhs = Fraction(1 + j * (p - 1),
                               p ** (r + 1 - j) * (p ** j - 1))
                checked += 1
                if not mid < rhs:
                    violations.append((p, r, j, "mid >= rhs"))
                if j == 2 and p == 2:
                    if lhs == rhs == Fraction(1, 2 ** (r - 1)) and lhs > mid:
                        equalities.append(("collapse j=p=2", p, r, j))
                    else:
                        violations.append((p, r, j, "collapse shape broken"))
                elif lhs == mid:
                    if p == 2 and j == 3:
                        equalities.append(("left equality", p, r, j))
                    else:
                        violations.append((p, r, j, "unexpected left "
                                                    "equality"))
                elif not lhs < mid:
                    violations.append((p, r, j, "left inequality fails"))
                elif p == 2 and j == 3:
                    violations.append((p, r, j, "expected left equality "
                                                "missing"))
    report["zeta_abscissa_chain"] = {"checked": checked,
                                     "equalities": equalities,
                                     "violations": violations}

    checked, equalities, violations = 0, [], []
    for p in primes:
        for r in range(2, r_max + 1):
            for h in range(2, r + 1):
                mid = _mid_abscissa(p, r, h)
                edge = Fraction(1 + h * (p - 1),
                                p ** (r + 1 - h) * (p ** h - 1))
                for ell in _nonincreasing_tuples(h, p - 1):
                    value = Fraction(
                        1 + sum(ell),
                        (p - 1) * sum(p ** (r - i) * (v + 1)
                                      for i, v in enumerate(ell, start=1)))
                    checked += 1
                    if all(v == p - 1 for v in ell):
                        if value == edge:
                            equalities.append((p, r, h, ell))
                        else:
                            violations.append((p, r, h, ell,
                                               "edge equality broken"))
                    elif not value < mid:
                        violations.append((p, r, h, ell, str(value)))
    report["single_block_bound"] = {"checked": checked,
                                    "equalities": equalities,
                                    "violations": violations}

    checked, equalities, violations = 0, [], []
    for p in primes:
        for r in range(2, r_max + 1):
            for h in range(2, min(r, 5) + 1):
                mid = _mid_abscissa(p, r, h)
                for outer in compositions(h):
                    if len(outer) < 2:
                        continue
                    bounds = prefix_sums(outer)
                    spread = len(outer)
                    extra_num = (p - 1) * sum(
                        (spread - i) * outer[i - 1]
                        for i in range(1, spread))
                    extra_den = (p - 1) * sum(
                        (spread - i) * sum(p ** (r + 1 - j)
                                           for j in range(
                                               bounds[i - 1] - outer[i - 1]
                                               + 1, bounds[i - 1] + 1))
                        for i in range(1, spread))
                    pools = [_nonincreasing_tuples(b, p - 1) for b in outer]
                    for pieces in itertools.product(*pools):
                        ell = tuple(itertools.chain.from_iterable(pieces))
                        value = Fraction(
                            1 + sum(ell) + extra_num,
                            (p - 1) * sum(p ** (r - i) * (v + 1)
                                          for i, v in enumerate(ell,
                                                                start=1))
                            + extra_den)
                        checked += 1
                        if not value < mid:
                            violations.append((p, r, h, outer, ell,
                                               str(value)))
    report["multi_block_bound"] = {"checked": checked,
                                   "equalities": equalities,
                                   "violations": violations}

    report["ok"] = all(not fam["violations"] for fam in report.values()
                       if isinstance(fam, dict))
    return report


def klein_constant_check(ctx: PrimeContext, coefficients,
                         max_place_degree: int = 40) -> dict:
    """Compare the closed-form leading constant for the Klein four-group
    C_2 x C_2 over F_q(t) with the fitted cubic coefficient.

    Report only: the fit converges slowly (the error term trails the main
    term by a factor of only X^(1/12)), so agreement is logged rather than
    asserted.  The closed form is
        (|G| / |Aut G|) * (log q / 144) * rho^4 * E
    with rho the residue of the zeta function at s = 1, namely
    1/((1 - 1/q) log q), and E the Euler product of
    (1 + 4x + x^2)(1 - x)^4 over all places, x = norm^(-1).  The product
    is truncated at max_place_degree; the factor at degree d is
    1 + O(q^(-2d)), giving a certified tail bound which must come out
    below 1e-9.  The fitted value is the coefficient of m^3 in
    y_m = c_m q^(-m/2); the closed form multiplies (log X)^3 = (m log q)^3,
    so the comparison rescales by log(q)^3.
    """
    if ctx.p != 2 or ctx.r != 2:
        raise ValueError("closed form only covers p = 2, r = 2")
    if max_place_degree < 30:
        raise ValueError("need max_place_degree >= 30 for the tail bound")
    q = ctx.q
    fit = main_term_fit(ctx, coefficients)
    with mpmath.workprec(120):
        log_product = mpmath.mpf(0)
        for d in range(1, max_place_degree + 1):
            x = mpmath.mpf(1) / q ** d
            log_product += place_count(ctx, d) * mpmath.log(
                (1 + 4 * x + x * x) * (1 - x) ** 4)
        # |log factor| <= 24 x^2 for x <= 1/8 and N_d <= 2 q^d / d
        tail = mpmath.mpf(48) / ((max_place_degree + 1) * (q - 1)
                                 * q ** max_place_degree)
        euler = mpmath.e ** log_product
        log_q = mpmath.log(q)
        residue = 1 / ((1 - mpmath.mpf(1) / q) * log_q)
        predicted = mpmath.mpf(2) / 3 * log_q / 144 * residue ** 4 * euler
        rescale = float(log_q) ** 3
    fitted = {}
    ratios = {}
    for cls, entry in fit["classes"].items():
        fitted[cls] = entry["leading"]
        if not entry["zero"]:
            ratios[cls] = entry["leading"] / (float(predicted) * rescale)
    even = [ratios[cls] for cls in sorted(ratios)]
    return {"predicted": float(predicted),
            "fitted_by_class": fitted,
            "ratio_by_class": ratios,
            "ratio": sum(even) / len(even) if even else 0.0,
            "odd_classes_zero": all(
                fit["classes"][cls]["zero"]
                for cls in range(1, fit["modulus"], 2)),
            "tail_bound": float(tail),
            "max_place_degree": max_place_degree}


def _encode(value):
    """JSON-friendly form: Fractions as 'num/den' strings, containers
    recursively, mpmath floats as Python floats."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (tuple, list)):
        return [_encode(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, PoleLine):
        return {"real_part": str(value.real_part),
                "angular_step": str(value.angular_step),
                "max_order": value.max_order,
                "certainty": "definite" if value.definite else "candidate"}
    if isinstance(value, mpmath.mpf):
        return float(value)
    return value


def report_json(ctx: PrimeContext, coefficients=None, precision: int = 120,
                inequality_grid=None) -> str:
    """Full asymptotics report for one context as a JSON document.

    Includes the main-term parameters, both pole catalogs and the local
    leading constants; fits (and for p = r = 2 the Klein constant
    comparison) when exact coefficients are supplied; and the inequality
    report when inequality_grid = (p_max, r_max) is given.  Output is
    deterministic.
    """
    params = main_term_params(ctx)
    constants = local_leading_constants(ctx, precision)
    payload = {
        "p": ctx.p,
        "n": ctx.n,
        "r": ctx.r,
        "params": {
            "abscissa": params.abscissa,
            "pole_order": params.pole_order,
            "class_modulus": params.class_modulus,
            "local_modulus": params.local_modulus,
            "constant_modulus": params.constant_modulus,
            "prime_lcm": params.prime_lcm,
            "error_exponent": params.error_exponent,
        },
        "pole_catalog": {
            "local": list(local_pole_catalog(ctx)),
            "global": list(global_pole_catalog(ctx)),
        },
        "constants": {
            "modulus": constants.modulus,
            "values": constants.constants,
            "relative_errors": constants.relative_errors,
            "m_max": constants.m_max,
        },
        "fits": None,
        "inequality_report": None,
    }
    if coefficients is not None:
        payload["fits"] = main_term_fit(ctx, coefficients)
        if ctx.p == 2 and ctx.r == 2:
            payload["klein_constant"] = klein_constant_check(
                ctx, coefficients)
    if inequality_grid is not None:
        payload["inequality_report"] = verify_inequalities(*inequality_grid)
    return json.dumps(_encode(payload), indent=2)
