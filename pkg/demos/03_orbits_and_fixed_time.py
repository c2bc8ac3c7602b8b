"""Orbits and fixed-time orbits, sampled with seeded flow words.

Two diagonal scalings partition the plane into nine orbits (the origin,
four half-axes, four open quadrants).  Restricting to words of zero net
time shrinks each quadrant orbit to a hyperbola x1*x2 = c: the product is
preserved because each flow scales one coordinate by e^t.
"""

from fractions import Fraction

from vfkit import DomainPredicate, VectorField, parse
from vfkit.orbits import WordSampler, fixed_time_dimension, orbit_dimension


def field(name, comps, n):
    return VectorField(name, tuple(parse(c, n) for c in comps))


family = [field("X1", ["x1", "0"], 2), field("X2", ["0", "x2"], 2)]
points = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, 1), (1, -1), (-1, -1)]

print("sampled orbit dimensions (nine representative points):")
for i, p in enumerate(points):
    rep = orbit_dimension(family, p, WordSampler(seed=i, count=200))
    print(f"  {str(p):10s} dim {rep.dimension}  (bracket rank {rep.linf_rank})")

print("\nfixed-time orbit through (1,1) at T=0:")
rep = fixed_time_dimension(
    family, (1, 1), 0.0, WordSampler(seed=42, count=200), invariant=parse("x1*x2", 2)
)
print(f"  sampled dimension {rep.dimension} (the hyperbola x1*x2 = 1)")
print(f"  x1*x2 drift across 200 zero-sum words: {rep.invariant_max_deviation:.2e}")
print(f"  orbit dimension {rep.orbit_dimension_at_reached} -> gap "
      f"{rep.dimension_gap} (always 0 or 1)")

print("\nfixed-time orbit through the axis point (1,0):")
rep = fixed_time_dimension(family, (1, 0), 0.5, WordSampler(seed=42, count=200))
print(f"  sampled dimension {rep.dimension}, zero-sum displacement up to "
      f"{rep.max_displacement:.3f}")
print("  (words may idle on the vanishing vertical field while the "
      "horizontal scaling runs, so the fixed-time orbit is the half-axis, "
      "not a singleton)")

# a family of partially defined fields: the orbit dimension drops where
# the horizontal translation switches off
partial = [
    VectorField("X1", (parse("1", 2), parse("0", 2)),
                DomainPredicate(((1, "<", Fraction(1)),))),
    VectorField("X2", (parse("0", 2), parse("1", 2)),
                DomainPredicate(((1, ">", Fraction(-1)),))),
]
print("\npartially defined translations:")
for p in [(0, 0), (2, 0)]:
    rep = orbit_dimension(partial, p, WordSampler(seed=7, count=150))
    print(f"  at {p}: dim {rep.dimension} "
          f"({rep.words_skipped} of 150 words exited a domain)")
