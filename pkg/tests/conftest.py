from fractions import Fraction

import pytest

from vfkit.expr import parse
from vfkit.fields import DomainPredicate, VectorField


def make_field(name, components, dim, constraints=()):
    dom = DomainPredicate(tuple(constraints))
    return VectorField(name, tuple(parse(c, dim) for c in components), dom)


@pytest.fixture
def vf():
    return make_field


def frac_grid(lo, hi, denom):
    return [Fraction(k, denom) for k in range(lo * denom, hi * denom + 1)]
