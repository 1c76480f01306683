"""Tour of the closed-form g2(0) landscape.

The mix of a heralded single photon (mean photon number eta) and a weak
coherent state (mean |alpha|^2) is controlled by two dials: the mixing ratio
r = |alpha|^2 / eta and the mode overlap k between the two sources.  Fully
distinguishable photons (k = 0) always give sub-Poissonian light; raising
the overlap turns on two-photon bunching and can push g2(0) past the
classical boundary at 1.
"""

import numpy as np

from photonmix import (
    g2_distinguishable,
    g2_full_eta,
    g2_partial,
    g2_weakfield_k1,
    transition_boundary,
)

print("g2(0) for a few mixing ratios, from no overlap to full overlap\n")
ratios = [0.1, 0.25, 0.5, 1.0, 2.0, 5.0, 20.0]
overlaps = [0.0, 0.25, 0.5, 0.86, 1.0]
header = "r      " + "".join(f"k={k:<6}" for k in overlaps)
print(header)
for r in ratios:
    row = f"{r:<7}" + "".join(f"{g2_partial(r, k):<8.4f}" for k in overlaps)
    print(row)

print("\nThe k = 0 column is always below 1 (antibunching survives mixing):")
print("  max over r of g2_distinguishable =",
      max(g2_distinguishable(float(r)) for r in np.linspace(0, 50, 2000)))

print("\nAt full overlap the classical boundary sits at r = 0.5 exactly:")
for r in (0.49, 0.5, 0.51):
    print(f"  g2(r={r}, k=1) = {g2_weakfield_k1(r):.6f}")

print("\nCrossing ratio r* = 1/(2k) for partial overlap:")
for k in overlaps[1:]:
    print(f"  k={k}: r* = {transition_boundary(k):.4f}"
          f"  -> g2(r*, k) = {g2_partial(transition_boundary(k), k):.12f}")
print("  k=0: ", transition_boundary(0.0), "(no crossing)")

print("\nBunching is bounded: the global maximum of g2 is 4/3 at (r=2, k=1):")
print(f"  g2(2, 1) = {g2_partial(2.0, 1.0):.15f}")

print("\nKeeping the heralded mean photon number eta to first order shifts")
print("the curve only slightly for realistic eta:")
for eta in (0.0, 0.02, 0.05):
    print(f"  eta={eta}: g2(1, 0.86) = {g2_full_eta(1.0, 0.86, eta):.5f}")
