"""
Where the counting series blows up and what that says about growth:
pole catalogs, per-class leading constants for the local field, a
polynomial fit of the exact global coefficients, and the slow-burning
Klein four-group constant.
"""

from ascount.asymptotics import (klein_constant_check,
                                 local_leading_constants,
                                 local_pole_catalog, global_pole_catalog,
                                 main_term_fit, main_term_params)
from ascount.dirichlet import global_dirichlet
from ascount.fields import make_context

## The easy regime: (q, r) = (2, 1)
ctx = make_context(p=2, n=1, r=1)
params = main_term_params(ctx)
print("abscissa a =", params.abscissa, " pole order b =", params.pole_order,
      " class period L =", params.class_modulus)

for line in global_pole_catalog(ctx):
    kind = "definite" if line.definite else "candidate"
    print(f"  {kind} pole line at Re(s) = {line.real_part}, "
          f"angular step {line.angular_step}, order <= {line.max_order}")

coeffs = global_dirichlet(ctx, 40).coefficients()
fit = main_term_fit(ctx, coeffs)
print("fitted even-class constant:", round(fit["classes"][0]["leading"], 6))
print("exact check: c_40 * 2^-40 =", coeffs[40] * 2 ** -40)
# the count is exactly (3/2) 2^m on even degrees from m = 2 on

## Local constants come from residues, not fits
lc = local_leading_constants(make_context(p=2, n=1, r=2))
print("\nlocal (q, r) = (2, 2) constants mod", lc.modulus, ":")
for cls, value in lc.constants.items():
    if value:
        tail = lc.relative_errors[cls][-1]
        print(f"  class {cls}: {value:.6f} "
              f"(rel. error {tail[1]:.1e} at m = {tail[0]})")
# 0.5 = e_2 * psi(R) residue data; the 2^(1/3)-flavored constants on
# classes 2 and 4 are 2^(-2/3) and 2^(-1/3)

for line in local_pole_catalog(make_context(p=2, n=1, r=2)):
    kind = "definite" if line.definite else "candidate"
    print(f"  {kind} local pole line at Re(s) = {line.real_part}")

## The hard regime: (q, r) = (2, 2) global, pole of order 4
ctx22 = make_context(p=2, n=1, r=2)
print("\nglobal (q, r) = (2, 2):", main_term_params(ctx22))

coeffs22 = global_dirichlet(ctx22, 96).coefficients()
report = klein_constant_check(ctx22, coeffs22)
print("Euler-product constant:", f"{report['predicted']:.6e}",
      f"(tail < {report['tail_bound']:.0e})")
print("fitted cubic / closed form:", round(report["ratio"], 4))
# the ratio is persistently ~ 1/8 across residue classes; the comparison
# is reported, not asserted, because the error term only trails the main
# term by X^(1/12) and desk-scale truncations cannot settle it
