"""Lie brackets and exact flows.

The bracket [X, Y] measures the failure of the flows of X and Y to
commute: running X, then Y, then backwards X, then backwards Y does not
return to the start, and the leading-order drift is t^2 [X, Y].  This
script computes brackets exactly and confirms the drift numerically.
"""

import numpy as np

from vfkit import VectorField, apply_word, flow, lie_bracket, parse


def field(name, comps, n):
    return VectorField(name, tuple(parse(c, n) for c in comps))


# the classic non-commuting pair: a vertical translation and a shear
X1 = field("X1", ["0", "1", "0"], 3)
X2 = field("X2", ["1", "0", "x2"], 3)

B = lie_bracket(X1, X2)
print("X1 =", X1)
print("X2 =", X2)
print("[X1, X2] =", B)

# commutator word from the origin: forward, forward, back, back
for t in (0.1, 0.2, 0.4):
    landed = apply_word([X1, X2], [(0, t), (1, t), (0, -t), (1, -t)], (0, 0, 0))
    print(f"t={t}: commutator word lands at {np.round(landed, 10)} "
          f"(t^2 = {t * t})")

# flows take closed forms when the field allows it
scaling = field("S", ["x1", "0"], 2)
print("\nflow of x1*d1 for time 1 from (2,0):", flow(scaling, 1.0, (2.0, 0.0)))
print("expected (2e, 0):", (2 * np.e, 0.0))

# brackets of commuting scalings vanish identically
diag1 = field("D1", ["x1", "0"], 2)
diag2 = field("D2", ["0", "x2"], 2)
print("\n[x1*d1, x2*d2] =", lie_bracket(diag1, diag2), "(zero: flows commute)")
