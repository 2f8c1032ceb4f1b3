"""Closed Otto formulas against the definitional route on a periodic grid.

The definitional K, Amari and D tensors only use Phi, its inverse and its
Gateaux derivative.  On a compositional grid they agree with the explicit
formulas in terms of gradients and Laplacians up to O(h^2), which shows up as
an error ratio close to 4 per halving of h.
"""

import numpy as np

from densitymanifold import build_cycle_space
from densitymanifold.harness import closed_form_errors

rows = []
for n in (32, 64, 128, 256):
    errs = closed_form_errors(build_cycle_space(n, 2 * np.pi, "compositional"))
    rows.append((n, errs))

# %% Errors and ratios per tensor.
names = list(rows[0][1])
print("   n  " + "  ".join(f"{k:>10}" for k in names))
for n, errs in rows:
    print(f"{n:4d}  " + "  ".join(f"{errs[k]:10.3e}" for k in names))
print("ratio " + "  ".join(f"{rows[-2][1][k] / rows[-1][1][k]:10.3f}" for k in names))
