"""
From a rational function to a discriminant: reduce f modulo the
Artin-Schreier operator x^p - x, read off conductors place by place,
and assemble the discriminant divisor of the extension it generates.
"""

from ascount.artin_schreier import (chain_at_place, conductor_exponent,
                                    line_reps, reduce_global,
                                    rep_to_rational)
from ascount.counting import discriminant_divisor, global_count
from ascount.fields import INFINITY, finite_place, make_context

ctx = make_context(p=2, n=1, r=1)
T = finite_place(ctx, [0, 1])        # the place t = 0

## Reduction kills p-divisible pole orders
# 1/t^2 = (1/t)^2, so modulo ℘ = x^2 - x it is equivalent to 1/t:
# the square of any principal part can be absorbed into ℘(x).
rep = reduce_global(ctx, [1], [0, 0, 1])
print("1/t^2 reduces to principal part", rep.principal_at(T), "at t")
print("conductor exponent at t:", conductor_exponent(rep, T))
print("unramified elsewhere:", [pl.poly for pl in rep.support()] == [T.poly])

## Polynomial parts live at infinity
rep_poly = reduce_global(ctx, [0, 0, 0, 1], [1])     # f = t^3
print("\nt^3 has conductor", conductor_exponent(rep_poly, INFINITY),
      "at infinity")
# t^2 would reduce: t^2 = ℘(t^2) + t, leaving pole order 1, conductor 2

## A C_2 x C_2 extension and its chain structure
ctx2 = make_context(p=2, n=1, r=2)
u1 = reduce_global(ctx2, [1], [0, 1])                # 1/t
u2 = reduce_global(ctx2, [1], [0, 0, 0, 1])          # 1/t^3
lines = line_reps(ctx2, (u1, u2))
print("\nlines in the C_2 x C_2 class group span:", len(lines))

# at t the three lines have conductors 4, 2, 4; the chain records the
# block structure (one block of p^{r-1} lines, one of p^{r-2})
print("chain at t:", chain_at_place(ctx2, lines, T))

disc = discriminant_divisor(ctx2, lines)
print("discriminant divisor:", disc)
print("degree:", disc.degree())

## How many extensions share that discriminant?
print("extensions with this discriminant:", global_count(ctx2, disc))

## Round trip: a reduced representative is still an honest function
num, den = rep_to_rational(ctx, rep)
print("\nrep as a rational function: num", num, "den", den)
again = reduce_global(ctx, num, den)
print("reducing again is stable:", again == rep)
