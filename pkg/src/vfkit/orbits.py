"""Monte-Carlo estimation of orbit and fixed-time-orbit tangent spaces.

Sampled flow words push the generators forward to a chosen point; the rank
of the collected vectors is a certified lower bound for the orbit
dimension (the tangent space is the span over the full diffeomorphism
group, which no finite sample exhausts).  Fixed-time orbits use zero-sum
words and the linear part of the affine hull of the collected vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .expr import Expr
from .fields import (
    DomainExitError,
    FlowError,
    FlowWord,
    apply_word,
    pushforward_along_word,
)
from .liealg import filtration, fixed_time_ideal_rank
from .linalg import svd_rank

__all__ = [
    "WordSampler",
    "OrbitTangentReport",
    "FixedTimeReport",
    "ChowReport",
    "SteeringReport",
    "orbit_dimension",
    "fixed_time_dimension",
    "chow_verdict",
    "steer_linear",
]

RANK_TOL = 1e-7


@dataclass(frozen=True)
class WordSampler:
    """Seeded sampler of flow words.

    Lengths are uniform on 1..max_len, field indices uniform, step times
    uniform on [-max_time, max_time].  The zero-sum constraint replaces
    the final time by minus the partial sum, so the word's net time is
    exactly zero; net-time words are built the same way.
    """

    seed: int
    max_len: int = 6
    max_time: float = 0.5
    count: int = 200
    constraint: object = "free"  # "free" | "zero-sum" | ("net-time", T)

    def words(self, n_fields):
        rng = np.random.default_rng(self.seed)
        out = []
        for _ in range(self.count):
            k = int(rng.integers(1, self.max_len + 1))
            idx = rng.integers(0, n_fields, size=k)
            times = rng.uniform(-self.max_time, self.max_time, size=k)
            if self.constraint == "zero-sum":
                times[-1] = -float(np.sum(times[:-1]))
            elif isinstance(self.constraint, tuple):
                kind, T = self.constraint
                if kind != "net-time":
                    raise ValueError(f"unknown constraint {self.constraint!r}")
                times[-1] = float(T) - float(np.sum(times[:-1]))
            elif self.constraint != "free":
                raise ValueError(f"unknown constraint {self.constraint!r}")
            out.append(FlowWord(tuple((int(i), float(t)) for i, t in zip(idx, times))))
        return out


@dataclass(frozen=True)
class OrbitTangentReport:
    point: tuple
    dimension: int
    vectors: Tuple[tuple, ...]
    linf_rank: int  # bracket-filtration rank at the same point
    words_used: int
    words_skipped: int
    rank_tol: float

    @property
    def certified_exact(self):
        n = len(self.point)
        return self.dimension == n or self.dimension == self.linf_rank


def _collect_pushforwards(family, words, point, skip_stats):
    vectors = []
    for X in family:
        if X.domain.contains(point):
            vectors.append(tuple(X.value_float(point)))
    used = 0
    skipped = 0
    for w in words:
        word_ok = False
        for X in family:
            try:
                v = pushforward_along_word(family, w, X, point)
            except FlowError:
                continue
            vectors.append(tuple(float(x) for x in v))
            word_ok = True
        if word_ok:
            used += 1
        else:
            skipped += 1
    skip_stats.extend([used, skipped])
    return vectors


def orbit_dimension(family, point, sampler, depth_cap=6, rank_tol=RANK_TOL):
    """Sampled orbit dimension at the point (a certified lower bound)."""
    family = tuple(family)
    if not any(X.domain.contains(point) for X in family):
        raise DomainExitError(f"no generator is defined at {point}")
    words = sampler.words(len(family))
    stats: List[int] = []
    vectors = _collect_pushforwards(family, words, point, stats)
    used, skipped = stats
    if not vectors:
        raise DomainExitError(
            f"all {len(words)} sampled words exited the domains "
            f"(used {used}, skipped {skipped})"
        )
    dim = svd_rank(np.array(vectors, dtype=float), rank_tol)
    linf = filtration(family, depth_cap).rank_at(point)
    return OrbitTangentReport(
        tuple(point), dim, tuple(vectors), linf, used, skipped, rank_tol
    )


@dataclass(frozen=True)
class FixedTimeReport:
    start: tuple
    reached: tuple
    net_time: float
    dimension: int  # rank of the affine-hull linear part
    orbit_dimension_at_reached: int
    ideal_rank: int  # I(X) rank at the reached point
    max_displacement: float  # max |word(x) - x| over the zero-sum words
    invariant_max_deviation: Optional[float]
    words_used: int
    words_skipped: int

    @property
    def dimension_gap(self):
        return self.orbit_dimension_at_reached - self.dimension


def _seed_word(family, point, T):
    """A net-time-T word from the point, trying single steps then pairs."""
    n = len(family)
    for i in range(n):
        try:
            apply_word(family, [(i, T)], point)
            return [(i, float(T))]
        except FlowError:
            continue
    for i in range(n):
        for j in range(n):
            try:
                apply_word(family, [(i, T / 2.0), (j, T / 2.0)], point)
                return [(i, float(T / 2.0)), (j, float(T / 2.0))]
            except FlowError:
                continue
    raise DomainExitError(f"no net-time-{T} seed word succeeds from {point}")


def fixed_time_dimension(
    family,
    point,
    T,
    sampler,
    invariant: Optional[Expr] = None,
    depth_cap=6,
    rank_tol=RANK_TOL,
):
    """Sampled tangent dimension of the fixed-time orbit through the point.

    Reaches x by one net-time-T word, then samples zero-sum words at x;
    the tangent estimate is the rank of the differences of the collected
    pushforward vectors (the linear part of their affine hull).
    """
    family = tuple(family)
    seed_word = _seed_word(family, point, T)
    reached = apply_word(family, seed_word, point)
    zs = sampler
    if zs.constraint != "zero-sum":
        zs = WordSampler(
            seed=sampler.seed,
            max_len=sampler.max_len,
            max_time=sampler.max_time,
            count=sampler.count,
            constraint="zero-sum",
        )
    words = zs.words(len(family))
    stats: List[int] = []
    vectors = _collect_pushforwards(family, words, reached, stats)
    used, skipped = stats
    if not vectors:
        raise DomainExitError("all zero-sum words exited the domains")
    base = np.array(vectors[0], dtype=float)
    diffs = np.array([np.array(v) - base for v in vectors[1:]], dtype=float)
    dim = svd_rank(diffs, rank_tol) if len(diffs) else 0

    max_disp = 0.0
    inv_dev = None
    if invariant is not None:
        inv_dev = 0.0
        inv_ref = invariant.eval_float(reached)
    for w in words:
        try:
            landed = apply_word(family, w, reached)
        except FlowError:
            continue
        max_disp = max(max_disp, float(np.max(np.abs(landed - reached))))
        if invariant is not None:
            inv_dev = max(inv_dev, abs(invariant.eval_float(landed) - inv_ref))

    orbit_rep = orbit_dimension(family, tuple(reached), sampler, depth_cap, rank_tol)
    ideal = fixed_time_ideal_rank(family, tuple(reached), depth_cap)
    return FixedTimeReport(
        start=tuple(point),
        reached=tuple(reached),
        net_time=float(T),
        dimension=dim,
        orbit_dimension_at_reached=orbit_rep.dimension,
        ideal_rank=ideal.ideal_rank,
        max_displacement=max_disp,
        invariant_max_deviation=inv_dev,
        words_used=used,
        words_skipped=skipped,
    )


@dataclass(frozen=True)
class ChowReport:
    bracket_generating: bool
    depth_cap: int
    verdict: str
    failing_samples: Tuple[tuple, ...]
    sampled_orbit_dims: Tuple[int, ...]  # at failing samples, when computed


def chow_verdict(family, samples, depth_cap=6, orbit_sampler=None):
    """Sufficiency test: full bracket rank everywhere sampled means any two
    points are joinable by flows.  Failure at the cap decides nothing."""
    family = tuple(family)
    n = family[0].dim
    filt = filtration(family, depth_cap)
    failing = [tuple(p) for p in samples if filt.rank_at(p) < n]
    if not failing:
        return ChowReport(
            True,
            depth_cap,
            "sufficient condition met: any two points joinable by flows",
            (),
            (),
        )
    dims = []
    if orbit_sampler is not None:
        for p in failing:
            try:
                dims.append(orbit_dimension(family, p, orbit_sampler, depth_cap).dimension)
            except FlowError:
                dims.append(-1)
    note = f"not established at depth cap {depth_cap}"
    if dims and all(d == n for d in dims):
        note += (
            "; sampled orbit dimension is full at every failing sample, so the "
            "family may still be controllable (the test is one-sided)"
        )
    return ChowReport(False, depth_cap, note, tuple(failing), tuple(dims))


@dataclass(frozen=True)
class SteeringReport:
    u1: float
    u2: float
    trajectory: Tuple[tuple, ...]
    landing_error: float


_STEER_A = ((0, 1), (0, 0))
_STEER_B = (0, 1)


def steer_linear(A, b, start, target, T):
    """Two-piece steering for the planar system x' = A x + b u with
    A = [[0,1],[0,0]], b = (0,1): closed-form u1, u2 drive start to target
    in time T (first input on [0, T/2], second on [T/2, T])."""
    if T == 0:
        raise ValueError("steering time T must be nonzero")
    A = tuple(tuple(Fraction(x) for x in row) for row in A)
    b = tuple(Fraction(x) for x in b)
    if A != tuple(tuple(map(Fraction, row)) for row in _STEER_A) or b != tuple(
        map(Fraction, _STEER_B)
    ):
        raise ValueError(
            "closed-form steering is derived for A=[[0,1],[0,0]], b=(0,1)"
        )
    x11, x12 = (float(v) for v in start)
    x21, x22 = (float(v) for v in target)
    T = float(T)
    u1 = (-3 * T * x12 - T * x22 - 4 * x11 + 4 * x21) / T**2
    u2 = (T * x12 + 3 * T * x22 + 4 * x11 - 4 * x21) / T**2

    def step(x, u, t):
        # exact flow of the double integrator: x1 += t x2 + u t^2/2, x2 += u t
        return np.array([x[0] + t * x[1] + u * t * t / 2.0, x[1] + u * t], dtype=float)

    samples = 8
    xs = [np.array([x11, x12])]
    for u in (u1, u2):
        base = xs[-1]
        for k in range(1, samples + 1):
            xs.append(step(base, u, (T / 2.0) * k / samples))
    landing = xs[-1]
    err = float(np.max(np.abs(landing - np.array([x21, x22]))))
    return SteeringReport(u1, u2, tuple(tuple(p) for p in xs), err)
