"""Degree-bounded membership in modules of polynomial vector fields.

Whether a field lies in the module generated by others (with polynomial
multipliers) is decided exactly, up to a chosen multiplier degree.  The
same distribution can have generators whose module is involutive and
generators whose module is not; membership separates the two.
"""

from vfkit import VectorField, lie_bracket, parse
from vfkit.membership import ideal_member_bounded, member_bounded


def field(name, comps, n):
    return VectorField(name, tuple(parse(c, n) for c in comps))


# the radial pair: the bracket falls back into the module
X1 = field("X1", ["x1^2+x2^2", "0"], 2)
X2 = field("X2", ["0", "x1^2+x2^2"], 2)
bracket = lie_bracket(X1, X2)
print("bracket of the radial pair:", [str(c) for c in bracket.components])
cert = member_bounded(bracket, [X1, X2], 1)
print("membership at degree 1:", cert)

# a mixed-degree pair generating the same distribution: the module breaks
Y1 = field("Y1", ["x1^2+x2^2", "0"], 2)
Y2 = field("Y2", ["0", "x1^4+x2^4"], 2)
cert = member_bounded(lie_bracket(Y1, Y2), [Y1, Y2], 8)
print("\nmixed-degree pair, bracket membership:", cert.verdict)
print("(the true multipliers are rational functions with poles, so no "
      "polynomial degree suffices)")

# one dimension, one lesson: x1^2 generates the right span on x1 != 0 but
# the wrong module
print("\nx1 in <x1^2>:", member_bounded(field("t", ["x1"], 1),
                                        [field("g", ["x1^2"], 1)], 10).verdict)
print("x1^2 in <x1>:", member_bounded(field("t", ["x1^2"], 1),
                                      [field("g", ["x1"], 1)], 10))

# a scalar ideal with a geometric bite: the umbrella surface
f = parse("x3*(x1^2+x2^2) - x2^3", 3)
print("\numbrella polynomial f =", f)
print("x1 in <f>:", ideal_member_bounded(parse("x1", 3), [f], 8).verdict)
print("x1*f in <f>:", ideal_member_bounded(parse("x1", 3) * f, [f], 8))
