"""Parabolic vs hyperbolic ends across model geometries.

Prints the integral classification for a grid of (model, p) pairs and
then reproduces one of each kind experimentally with barrier sweeps:
barriers toward a parabolic end rise to 1, barriers toward a
hyperbolic end converge to a profile with positive energy.
"""

import plap.capacity as cap
from plap.geometry import Cosh, Exponential, PolyEven, euclidean, warped

cases = [
    ("R^2", euclidean(2), (1.5, 2.0, 3.0)),
    ("R^3", euclidean(3), (2.0, 3.0, 4.0)),
    ("eta = e^t, m=2", warped(2, Exponential(1.0)), (2.0, 3.0)),
    ("eta = cosh t, m=3", warped(3, Cosh()), (2.0, 4.0)),
    ("A = (1+t^2)^2", warped(3, PolyEven(2.0)), (2.0, 3.0, 5.0)),
]

print(f"{'model':>20} {'p':>5}  end -> +inf")
for name, M, ps in cases:
    for p in ps:
        print(f"{name:>20} {p:>5}  {M.classify_end(p, +1)}")

print()
print("barrier sweep, hyperbolic case (R^3, p = 2):")
out = cap.end_barrier_sweep(euclidean(3), 2.0, 1.0, [4.0, 16.0, 64.0])
for R, e, lo in zip([4.0, 16.0, 64.0], out["energies"], out["infima"]):
    print(f"  R = {R:6.1f}: barrier energy {e:.6f}, infimum {lo:.2e}")
print(f"  diagnosis: {out['diagnosis']}")

print()
print("barrier sweep, parabolic case (R^2, p = 3):")
out = cap.end_barrier_sweep(euclidean(2), 3.0, 1.0, [4.0, 16.0, 64.0])
for R, e in zip([4.0, 16.0, 64.0], out["energies"]):
    print(f"  R = {R:6.1f}: barrier energy {e:.6f}")
print(f"  collar deviation from 1: {out['sup_deviation_on_collar']:.3e}")
print(f"  diagnosis: {out['diagnosis']}")
