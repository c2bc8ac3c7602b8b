"""Bracket-generated Lie algebra of a finite family of vector fields.

Left-nested bracket words [X_ik, [..., [X_i2, X_i1]...]] span the whole
generated Lie algebra, so the filtration enumerates only those, pruning
symbolic zeros and rational multiples of words already kept.  For
polynomial families a stabilization certificate is attempted: once every
depth-(k+1) word is a degree-bounded member of the module spanned by the
words of depth <= k, no deeper word can leave that module, and pointwise
ranks are final.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .expr import Expr
from .fields import VectorField, lie_bracket
from .linalg import span_rank
from .membership import MembershipError, member_bounded

__all__ = [
    "BracketWord",
    "LieFiltration",
    "InvolutivityReport",
    "FixedTimeRankReport",
    "filtration",
    "involutive",
    "derived_algebra",
    "fixed_time_ideal_rank",
]

DEPTH_CAP_LIMIT = 10
DEFAULT_DEPTH_CAP = 6
RANK_REL_TOL = 1e-9


class LieAlgebraError(Exception):
    pass


@dataclass(frozen=True)
class BracketWord:
    """Indices (i1, ..., ik) standing for [X_ik, [..., [X_i2, X_i1]...]]."""

    indices: Tuple[int, ...]

    @property
    def depth(self):
        return len(self.indices)

    def __str__(self):
        if self.depth == 1:
            return f"X{self.indices[0] + 1}"
        inner = str(BracketWord(self.indices[:-1]))
        return f"[X{self.indices[-1] + 1},{inner}]"


def _normal_key(field_):
    """Key invariant under nonzero rational rescaling, for duplicate pruning."""
    for comp in field_.components:
        if comp.terms:
            lead = comp.terms[0][0]
            break
    else:
        return None
    scaled = tuple(
        (comp * Expr(((Fraction(1) / lead, ()),))).sort_key()
        for comp in field_.components
    )
    return (scaled, field_.domain.constraints)


@dataclass
class LieFiltration:
    family: Tuple[VectorField, ...]
    depth_cap: int
    levels: List[List[Tuple[BracketWord, VectorField]]]
    sample_ranks: Dict[tuple, List[int]]  # point -> rank at depth 1..K
    stabilized_at: Optional[int]  # certified depth; None = capped at depth_cap
    certificate: Optional[str]  # "symbolic-closure" | "module-degree-D"

    def fields_up_to(self, depth):
        out = []
        for level in self.levels[:depth]:
            out.extend(f for _, f in level)
        return out

    def rank_at(self, point, depth=None):
        depth = depth or self.depth_cap
        vectors = []
        for f in self.fields_up_to(depth):
            if f.domain.contains(point):
                vectors.append(f.value(point))
        return _mixed_span_rank(vectors)


def _mixed_span_rank(vectors):
    if not vectors:
        return 0
    exact = all(
        isinstance(x, (int, Fraction)) for v in vectors for x in v
    )
    if exact:
        return span_rank(vectors)
    return span_rank([[float(x) for x in v] for v in vectors], RANK_REL_TOL)


def filtration(
    family,
    depth_cap=DEFAULT_DEPTH_CAP,
    samples=(),
    module_degree=None,
):
    """Generate bracket words up to the cap; rank samples; try to certify
    stabilization for polynomial families (module_degree controls the
    multiplier degree bound, default 6)."""
    family = tuple(family)
    if depth_cap < 1 or depth_cap > DEPTH_CAP_LIMIT:
        raise LieAlgebraError(f"depth cap must lie in [1, {DEPTH_CAP_LIMIT}]")
    polynomial = all(g.is_polynomial() for g in family)
    if module_degree is None:
        module_degree = 6

    seen = set()
    levels: List[List[Tuple[BracketWord, VectorField]]] = []
    current = []
    for i, g in enumerate(family):
        key = _normal_key(g)
        if key is None or key in seen:
            continue
        seen.add(key)
        current.append((BracketWord((i,)), g))
    levels.append(current)

    stabilized_at = None
    certificate = None
    for depth in range(2, depth_cap + 1):
        new_level = []
        for word, f in levels[-1]:
            for i, g in enumerate(family):
                b = lie_bracket(g, f)
                w = BracketWord(word.indices + (i,))
                if b.is_zero():
                    continue
                key = _normal_key(b)
                if key in seen:
                    continue
                seen.add(key)
                new_level.append((w, VectorField(str(w), b.components, b.domain)))
        levels.append(new_level)
        if not new_level and stabilized_at is None:
            # every deeper word is zero or a rational multiple of a kept one
            stabilized_at = depth - 1
            certificate = "symbolic-closure"
    if polynomial and stabilized_at is None:
        # module containment certificate, cheapest depth first
        kept = [[f for _, f in level] for level in levels]
        for depth in range(1, depth_cap):
            basis = [f for lv in kept[:depth] for f in lv]
            nxt = kept[depth]
            try:
                if all(
                    member_bounded(f, basis, module_degree).member for f in nxt
                ):
                    stabilized_at = depth
                    certificate = f"module-degree-{module_degree}"
                    break
            except MembershipError:
                break

    sample_ranks = {}
    filt = LieFiltration(
        family, depth_cap, levels, sample_ranks, stabilized_at, certificate
    )
    for p in samples:
        sample_ranks[tuple(p)] = [
            filt.rank_at(p, depth) for depth in range(1, depth_cap + 1)
        ]
    return filt


@dataclass(frozen=True)
class InvolutivityReport:
    mode: str  # "pointwise" | "module"
    involutive: bool
    witness: Optional[tuple]  # (i, j, point) or (i, j) for module refutations
    degree: Optional[int] = None

    def __bool__(self):
        return self.involutive


def involutive(family, mode="pointwise", samples=(), degree=2):
    """Pairwise-bracket involutivity of the family.

    pointwise: every bracket value lies in the span of the generator values
    at each sample.  module: every bracket is a degree-bounded member of
    the generated module (polynomial families only).
    """
    family = tuple(family)
    pairs = list(itertools.combinations(range(len(family)), 2))
    if mode == "module":
        for i, j in pairs:
            b = lie_bracket(family[i], family[j])
            if b.is_zero():
                continue
            cert = member_bounded(b, list(family), degree)
            if not cert.member:
                return InvolutivityReport("module", False, (i, j), degree)
        return InvolutivityReport("module", True, None, degree)
    if mode != "pointwise":
        raise LieAlgebraError(f"unknown involutivity mode {mode!r}")
    if not samples:
        raise LieAlgebraError("pointwise involutivity needs sample points")
    for i, j in pairs:
        b = lie_bracket(family[i], family[j])
        if b.is_zero():
            continue
        for p in samples:
            if not b.domain.contains(p):
                continue
            fibre = [
                g.value(p) for g in family if g.domain.contains(p)
            ]
            bval = b.value(p)
            vectors = fibre + [bval]
            exact = all(isinstance(x, (int, Fraction)) for v in vectors for x in v)
            if not exact:
                fibre = [[float(x) for x in v] for v in fibre]
                bval = [float(x) for x in bval]
            before = _mixed_span_rank(fibre)
            after = _mixed_span_rank(fibre + [bval])
            if after > before:
                return InvolutivityReport("pointwise", False, (i, j, tuple(p)))
    return InvolutivityReport("pointwise", True, None)


def derived_algebra(family, depth_cap=DEFAULT_DEPTH_CAP):
    """All kept bracket words of depth >= 2 up to the cap."""
    filt = filtration(family, depth_cap)
    out = []
    for level in filt.levels[1:]:
        out.extend(level)
    return out


@dataclass(frozen=True)
class FixedTimeRankReport:
    point: tuple
    ideal_rank: int  # rank of I(X) at the point
    lie_rank: int  # rank of L^inf(X) at the point
    codim: int

    def __post_init__(self):
        if self.codim not in (0, 1):
            raise LieAlgebraError(
                f"codimension of the fixed-time ideal must be 0 or 1, got {self.codim}"
            )


def fixed_time_ideal_rank(family, point, depth_cap=DEFAULT_DEPTH_CAP):
    """Rank of the fixed-time ideal: zero-sum combinations of generators
    (the linear part of their affine hull at the point) plus the derived
    algebra; also the full Lie-algebra rank and the codimension."""
    family = tuple(family)
    filt = filtration(family, depth_cap)
    defined = [g for g in family if g.domain.contains(point)]
    if not defined:
        raise LieAlgebraError(f"no generator defined at {point}")
    values = [g.value(point) for g in defined]
    diffs = [
        [a - b for a, b in zip(v, values[0])] for v in values[1:]
    ]
    derived_vals = []
    for level in filt.levels[1:]:
        for _, f in level:
            if f.domain.contains(point):
                derived_vals.append(f.value(point))
    ideal_vectors = diffs + derived_vals
    lie_vectors = values + derived_vals
    i_rank = _mixed_span_rank(ideal_vectors)
    l_rank = _mixed_span_rank(lie_vectors)
    return FixedTimeRankReport(tuple(point), i_rank, l_rank, l_rank - i_rank)
