"""Integrability verdicts and flow-box integral-manifold charts.

The verdict combines three independent detectors:

* a pointwise bracket escaping the fibre at a sample rules integrability
  out near that sample (integrable implies involutive);
* pointwise involutivity plus sampled-constant rank, or plus a
  degree-bounded module-involutivity certificate, rules it in;
* otherwise the sampled orbit dimension is compared to the fibre rank: an
  integral manifold through a point would force the orbit tangent to equal
  the fibre, so sampled orbit dimension exceeding the rank rules
  integrability out even when every bracket test passes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .distributions import Distribution, rank_at, _orthogonal_residual
from .fields import FlowError, apply_word, pushforward_along_word
from .liealg import involutive
from .membership import MembershipError
from .orbits import WordSampler, orbit_dimension
from .linalg import svd_rank

__all__ = ["FrobeniusVerdict", "FlowBoxChart", "frobenius_verdict", "flow_box_chart"]

CHART_RESIDUAL_TOL = 1e-7
CHART_RADIUS = 0.2


@dataclass(frozen=True)
class FrobeniusVerdict:
    integrable: str  # "yes" | "no" | "undetermined"
    clause: str  # which part of the decision tree fired
    involutive_pointwise: bool
    involutive_witness: Optional[tuple]
    module_involutive: Optional[bool]  # None when not attempted
    module_degree: Optional[int]
    rank_constant_sampled: bool
    ranks: Tuple[int, ...]
    witnesses: Tuple[tuple, ...]  # points backing a "no"
    invariant_slice_samples: Tuple[tuple, ...]  # involutivity held there


def frobenius_verdict(
    D: Distribution,
    samples,
    depth_cap=6,
    module_degree=4,
    orbit_sampler: Optional[WordSampler] = None,
):
    samples = [tuple(p) for p in samples]
    family = list(D.generators)
    ranks = tuple(rank_at(D, p).rank for p in samples)
    rank_constant = len(set(ranks)) <= 1

    # pointwise involutivity, sample by sample so mixed outcomes are visible
    failing: List[tuple] = []
    holding: List[tuple] = []
    first_witness = None
    for p in samples:
        rep = involutive(family, "pointwise", samples=[p])
        if rep.involutive:
            holding.append(p)
        else:
            failing.append(p)
            if first_witness is None:
                first_witness = rep.witness

    if failing:
        return FrobeniusVerdict(
            integrable="no",
            clause=(
                "a bracket of generators leaves the fibre at a sample; an "
                "integrable distribution is involutive, so no integral "
                "manifold passes near the witness points"
            ),
            involutive_pointwise=False,
            involutive_witness=first_witness,
            module_involutive=None,
            module_degree=None,
            rank_constant_sampled=rank_constant,
            ranks=ranks,
            witnesses=tuple(failing),
            invariant_slice_samples=tuple(holding),
        )

    if rank_constant:
        return FrobeniusVerdict(
            integrable="yes",
            clause=(
                "pointwise involutive with sampled-constant rank: a locally "
                "constant-rank involutive distribution is integrable"
            ),
            involutive_pointwise=True,
            involutive_witness=None,
            module_involutive=None,
            module_degree=None,
            rank_constant_sampled=True,
            ranks=ranks,
            witnesses=(),
            invariant_slice_samples=tuple(holding),
        )

    module_ok: Optional[bool] = None
    if D.is_polynomial():
        try:
            module_ok = bool(involutive(family, "module", degree=module_degree))
        except MembershipError:
            module_ok = None
    if module_ok:
        return FrobeniusVerdict(
            integrable="yes",
            clause=(
                "pointwise involutive and the generator module is involutive "
                f"(multipliers of degree <= {module_degree}); a finitely "
                "generated involutive module of sections is integrable"
            ),
            involutive_pointwise=True,
            involutive_witness=None,
            module_involutive=True,
            module_degree=module_degree,
            rank_constant_sampled=False,
            ranks=ranks,
            witnesses=(),
            invariant_slice_samples=tuple(holding),
        )

    sampler = orbit_sampler or WordSampler(seed=0, count=200, max_len=8, max_time=1.0)
    orbit_witnesses = []
    for p, r in zip(samples, ranks):
        try:
            rep = orbit_dimension(family, p, sampler, depth_cap)
        except FlowError:
            continue
        if rep.dimension > r:
            orbit_witnesses.append((p, rep.dimension, r))
    if orbit_witnesses:
        return FrobeniusVerdict(
            integrable="no",
            clause=(
                "sampled orbit dimension exceeds the fibre rank at a witness "
                "point; generator flows cannot leave an integral manifold, so "
                "the orbit outrunning the fibre refutes integrability"
            ),
            involutive_pointwise=True,
            involutive_witness=None,
            module_involutive=module_ok,
            module_degree=module_degree if module_ok is not None else None,
            rank_constant_sampled=False,
            ranks=ranks,
            witnesses=tuple(w[0] for w in orbit_witnesses),
            invariant_slice_samples=tuple(holding),
        )
    return FrobeniusVerdict(
        integrable="undetermined",
        clause=(
            "pointwise involutive, rank varies across samples, and neither a "
            "module certificate nor an orbit-rank gap decided the question"
        ),
        involutive_pointwise=True,
        involutive_witness=None,
        module_involutive=module_ok,
        module_degree=module_degree if module_ok is not None else None,
        rank_constant_sampled=False,
        ranks=ranks,
        witnesses=(),
        invariant_slice_samples=tuple(holding),
    )


@dataclass(frozen=True)
class FlowBoxChart:
    base: tuple
    chart_rank: int  # fibre rank m at the base
    max_residual: float  # worst tangency defect of d(phi)/dt_j over the grid
    image_tangent_rank: int
    fibre_rank_constant: bool  # fibre rank stays m over the sampled image
    orbit_dimension: Optional[int]  # sampled orbit dimension at the base
    accepted: bool
    rejected_reason: Optional[str] = None


def flow_box_chart(
    D: Distribution,
    base,
    radius=CHART_RADIUS,
    grid_points=3,
    residual_tol=CHART_RESIDUAL_TOL,
    orbit_sampler: Optional[WordSampler] = None,
):
    """Chart candidate t -> flow_{Y_m, t_m} o ... o flow_{Y_1, t_1}(base)
    built from a fibre basis of generators at the base.

    Accepted only when the chart behaves like an integral-manifold chart on
    the sample: every coordinate tangent stays in the fibre, the fibre rank
    matches the chart rank over the sampled image, and the sampled orbit
    dimension at the base does not outrun the chart (generator flows cannot
    leave an integral manifold, so a larger sampled orbit refutes it)."""
    base = tuple(base)
    base_report = rank_at(D, base)
    m = base_report.rank
    sampler = orbit_sampler or WordSampler(seed=0, count=200, max_len=8, max_time=1.0)
    try:
        orbit_dim = orbit_dimension(list(D.generators), base, sampler).dimension
    except FlowError:
        orbit_dim = None
    if m == 0:
        ok = orbit_dim in (0, None)
        return FlowBoxChart(
            base, 0, 0.0, 0, True, orbit_dim, ok,
            None if ok else "sampled orbit dimension exceeds the chart rank",
        )
    frame = [D.generators[i] for i in base_report.witness]
    axes = np.linspace(-radius, radius, grid_points)
    grids = np.meshgrid(*([axes] * m), indexing="ij")
    t_list = np.stack([g.ravel() for g in grids], axis=-1)
    max_residual = 0.0
    fibre_ok = True
    tangents = []
    reason = None
    for t in t_list:
        word = [(j, float(t[j])) for j in range(m)]
        try:
            image_pt = apply_word(frame, word, base)
        except FlowError as err:
            return FlowBoxChart(
                base, m, float("inf"), 0, False, False, f"flow failure: {err}"
            )
        fibre_vals = np.array(
            [[float(x) for x in v] for _, v in D.defined_values(image_pt)]
        )
        if rank_at(D, tuple(image_pt)).rank != m:
            fibre_ok = False
        for j in range(m):
            tail = word[j + 1 :]
            # d(phi)/dt_j: the frame field Y_j after step j, pushed through
            # the remaining flows (the pushforward pulls back from the image)
            try:
                v = pushforward_along_word(frame, tail, frame[j], image_pt)
            except FlowError as err:
                return FlowBoxChart(
                    base, m, float("inf"), 0, False, orbit_dim, False,
                    f"flow failure: {err}",
                )
            tangents.append(tuple(float(x) for x in v))
            max_residual = max(max_residual, _orthogonal_residual(fibre_vals, v))
    tangent_rank = svd_rank(np.array(tangents, dtype=float), 1e-9)
    orbit_ok = orbit_dim is None or orbit_dim == m
    accepted = max_residual < residual_tol and fibre_ok and tangent_rank == m and orbit_ok
    if not accepted:
        if max_residual >= residual_tol:
            reason = f"tangency residual {max_residual:.3e} exceeds {residual_tol:.1e}"
        elif not fibre_ok:
            reason = "fibre rank varies over the sampled image"
        elif not orbit_ok:
            reason = (
                f"sampled orbit dimension {orbit_dim} at the base exceeds the "
                f"chart rank {m}"
            )
        else:
            reason = "sampled image degenerates (tangent rank below chart rank)"
    return FlowBoxChart(
        base, m, max_residual, tangent_rank, fibre_ok, orbit_dim, accepted, reason
    )
