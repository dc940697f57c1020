"""A complete two-ended model with a finite-energy 3-harmonic potential.

On the warped product with area A(t) = (1 + t^2)^2 the profile
u = arctan t + pi/2 is 3-harmonic with total 3-energy exactly pi.  Both
ends are 3-hyperbolic, the normalized two-end barrier has energy
pi^{-2}, and the barrier tail obeys the exponential-polynomial decay
bound derived from the spectral comparison.
"""

import numpy as np

import plap.capacity as cap
import plap.solver as sv
import plap.verifiers as vf

field, M = vf.arctan_model_field()

e3 = vf.analytic_q_energy(M, field.analytic.du, 3.0)
print(f"E_3(u)            : {e3:.12f}  (pi = {np.pi:.12f})")
print(f"end -> +inf       : {M.classify_end(3.0, +1)}")
print(f"end -> -inf       : {M.classify_end(3.0, -1)}")

barrier, meta = sv.two_end_barrier(M, 3.0, -500.0, 500.0, n=2001)
print(f"barrier sup / inf : {meta['sup']:.6f} / {meta['inf']:.6f}")
print(f"barrier energy    : {meta['E_p']:.10f}  "
      f"(pi^-2 = {np.pi**-2:.10f})")

print()
print("strong-form residual on the profile (FD truncation only):")
rep = vf.strong_form_residual(field, 3.0)
print(f"  max {rep.maximum:.3e}")

print()
# polynomial area growth means no spectral gap, so the only valid
# lower bound here is lambda_p = 0 (monotone decay, no exponential rate)
print("tail decay of the one-ended barrier from R0 = 1, lambda_p = 0:")
out = cap.tail_energy_profile(M, 3.0, 1.0, 0.0, [2.0, 4.0, 8.0, 16.0])
for row in out["rows"]:
    print(f"  R = {row['R']:5.1f}: tail {row['tail']:.6e}  "
          f"bound {row['bound']:.6e}  "
          f"{'ok' if row['pass'] else 'VIOLATED'}")
print(f"  overall: {'ok' if out['ok'] else 'VIOLATED'}")
