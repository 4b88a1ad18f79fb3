"""Evidence that the cone is not polyhedral: a curved boundary slice.

Walk the segment between the members 1 and x^2 and push each point along
the direction -x until refutation. On the scalar cone the boundary
offset is mu*(t) = 2 sqrt(t (1 - t)), an arc. A polyhedral cone would
trace a line; the collinearity residual quantifies the bend.
"""

import numpy as np

from nonnegcone import Polynomial, SearchConfig, trace_slice

cfg = SearchConfig(restarts=50, seed=0)
tr = trace_slice(Polynomial([1.0]), Polynomial([0.0, 0.0, 1.0]),
                 Polynomial([0.0, -1.0]), 1, 9, cfg)

print("t        mu(t)      2 sqrt(t(1-t))")
for t, mu in tr.points:
    print(f"{t:.3f}   {mu:.6f}   {2.0 * np.sqrt(t * (1 - t)):.6f}")
print("\nmissing points:", tr.missing)
print(f"collinearity residual: {tr.residual:.4f}"
      "  (a straight face would give ~0)")
assert tr.residual > 0.01
