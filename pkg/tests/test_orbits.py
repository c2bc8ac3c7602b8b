from fractions import Fraction

import numpy as np
import pytest

from vfkit.expr import parse
from vfkit.fields import DomainExitError, apply_word
from vfkit.orbits import (
    WordSampler,
    chow_verdict,
    fixed_time_dimension,
    orbit_dimension,
    steer_linear,
)



@pytest.fixture
def diag(vf):
    return [vf("X1", ["x1", "0"], 2), vf("X2", ["0", "x2"], 2)]


@pytest.fixture
def flat(vf):
    return [vf("X1", ["1", "0"], 2), vf("X2", ["0", "bumpp(x1)"], 2)]


@pytest.fixture
def partial(vf):
    return [
        vf("X1", ["1", "0"], 2, [(1, "<", Fraction(1))]),
        vf("X2", ["0", "1"], 2, [(1, ">", Fraction(-1))]),
    ]


NINE = [(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, 1), (1, -1), (-1, -1)]


class TestSampler:
    def test_deterministic(self):
        a = WordSampler(seed=5, count=10).words(2)
        b = WordSampler(seed=5, count=10).words(2)
        assert a == b
        assert WordSampler(seed=6, count=10).words(2) != a

    def test_zero_sum_exact(self):
        for w in WordSampler(seed=1, count=50, constraint="zero-sum").words(3):
            assert w.net_time == 0.0

    def test_net_time_exact(self):
        for w in WordSampler(seed=2, count=50, constraint=("net-time", 0.7)).words(2):
            assert w.net_time == pytest.approx(0.7, abs=1e-15)

    def test_lengths_within_bounds(self):
        for w in WordSampler(seed=3, count=100, max_len=4).words(2):
            assert 1 <= len(w) <= 4


class TestOrbitDimension:
    def test_nine_orbit_dimensions(self, diag):
        want = [0, 1, 1, 1, 1, 2, 2, 2, 2]
        got = [
            orbit_dimension(diag, p, WordSampler(seed=i, count=100)).dimension
            for i, p in enumerate(NINE)
        ]
        assert got == want

    def test_sampled_dim_at_least_bracket_rank(self, diag, flat, vf):
        shear = [vf("X1", ["1", "0"], 2), vf("X2", ["0", "x1"], 2)]
        fams = [diag, flat, shear]
        pts = [(0, 0), (1, 0), (1, 1), (-1, 0)]
        for fam in fams:
            for i, p in enumerate(pts):
                rep = orbit_dimension(
                    fam, p, WordSampler(seed=40 + i, count=200, max_len=8, max_time=1.5)
                )
                assert rep.dimension >= rep.linf_rank

    def test_flat_family_full_orbits(self, flat):
        s = WordSampler(seed=13, count=400, max_len=8, max_time=1.5)
        for p in [(-1, 0), (0, 0), (1, 0)]:
            rep = orbit_dimension(flat, p, s)
            assert rep.dimension == 2

    def test_partial_fields_skip_statistics(self, partial):
        rep = orbit_dimension(partial, (2, 0), WordSampler(seed=4, count=100))
        assert rep.dimension == 1
        assert rep.words_skipped > 0
        assert rep.words_used + rep.words_skipped == 100

    def test_all_words_exit(self, vf):
        lonely = [vf("X", ["1"], 1, [(1, "<", Fraction(0))])]
        with pytest.raises(DomainExitError):
            orbit_dimension(lonely, (1,), WordSampler(seed=1, count=10))

    def test_determinism_of_report(self, diag):
        a = orbit_dimension(diag, (1, 1), WordSampler(seed=11, count=50))
        b = orbit_dimension(diag, (1, 1), WordSampler(seed=11, count=50))
        assert a == b


class TestFixedTime:
    def test_hyperbola_dimension_and_invariant(self, diag):
        rep = fixed_time_dimension(
            diag, (1, 1), 0.0, WordSampler(seed=3, count=200),
            invariant=parse("x1*x2", 2),
        )
        assert rep.dimension == 1
        assert rep.invariant_max_deviation < 1e-8
        assert rep.orbit_dimension_at_reached - rep.dimension == 1

    def test_axis_point_reaches_scaled_point(self, diag):
        rep = fixed_time_dimension(diag, (1, 0), 1.0, WordSampler(seed=5, count=100))
        assert rep.reached == pytest.approx((np.e, 0.0))

    def test_dimension_at_least_ideal_rank(self, diag, vf):
        integrator = [vf("X0", ["x2", "0"], 2), vf("X1", ["x2", "1"], 2)]
        cases = [(diag, (1, 1), 0.0), (diag, (1, 0), 0.5), (integrator, (0, 0), 1.0)]
        for fam, p, T in cases:
            rep = fixed_time_dimension(fam, p, T, WordSampler(seed=8, count=150))
            assert rep.dimension >= rep.ideal_rank

    def test_gap_zero_or_one(self, diag, partial, vf):
        integrator = [vf("X0", ["x2", "0"], 2), vf("X1", ["x2", "1"], 2)]
        cases = [
            (diag, (1, 1), 0.0),
            (diag, (1, 0), 0.5),
            (integrator, (0, 0), 1.0),
            (partial, (0, 0), 0.0),
            (partial, (3, 4), 0.0),
        ]
        for fam, p, T in cases:
            rep = fixed_time_dimension(fam, p, T, WordSampler(seed=9, count=150))
            assert rep.dimension_gap in (0, 1)

    def test_true_singleton_for_frozen_point(self, partial):
        rep = fixed_time_dimension(partial, (3, 4), 0.0, WordSampler(seed=2, count=150))
        assert rep.dimension == 0
        assert rep.max_displacement < 1e-12

    def test_integrator_fixed_time_full(self, vf):
        integrator = [vf("X0", ["x2", "0"], 2), vf("X1", ["x2", "1"], 2)]
        rep = fixed_time_dimension(integrator, (0, 0), 1.0, WordSampler(seed=6, count=150))
        assert rep.dimension == 2


class TestChow:
    def test_shear_positive_at_depth_two(self, vf):
        fam = [vf("X1", ["1", "0"], 2), vf("X2", ["0", "x1"], 2)]
        rep = chow_verdict(fam, [(0, 0), (1, 1), (-2, 5)], 2)
        assert rep.bracket_generating
        assert "joinable" in rep.verdict

    def test_diag_not_established(self, diag):
        rep = chow_verdict(diag, [(0, 0), (1, 1)], 3)
        assert not rep.bracket_generating
        assert rep.failing_samples == ((0, 0),)

    def test_flat_family_gap_reported(self, flat):
        rep = chow_verdict(
            flat,
            [(-1, 0), (0, 0), (1, 0)],
            8,
            orbit_sampler=WordSampler(seed=13, count=400, max_len=8, max_time=1.5),
        )
        assert not rep.bracket_generating
        assert rep.sampled_orbit_dims == (2, 2)
        assert "one-sided" in rep.verdict  # never claims non-controllability


class TestSteering:
    def test_corner_case_from_formula(self):
        rep = steer_linear([[0, 1], [0, 0]], [0, 1], (0, 0), (1, 1), 1.0)
        assert rep.u1 == pytest.approx(3.0, abs=1e-12)
        assert rep.u2 == pytest.approx(-1.0, abs=1e-12)
        assert rep.landing_error < 1e-8

    def test_loops_exist(self):
        rep = steer_linear([[0, 1], [0, 0]], [0, 1], (1, 1), (1, 1), 1.0)
        assert abs(rep.u1) > 1e-9 and abs(rep.u2) > 1e-9
        assert rep.landing_error < 1e-8

    def test_random_targets_land(self):
        rng = np.random.default_rng(77)
        for _ in range(10):
            a = tuple(rng.uniform(-2, 2, size=2))
            b = tuple(rng.uniform(-2, 2, size=2))
            T = float(rng.uniform(0.2, 2.0))
            rep = steer_linear([[0, 1], [0, 0]], [0, 1], a, b, T)
            assert rep.landing_error < 1e-8

    def test_zero_time_rejected(self):
        with pytest.raises(ValueError):
            steer_linear([[0, 1], [0, 0]], [0, 1], (0, 0), (1, 1), 0.0)

    def test_other_matrices_rejected(self):
        with pytest.raises(ValueError):
            steer_linear([[0, 2], [0, 0]], [0, 1], (0, 0), (1, 1), 1.0)


class TestSignPatterns:
    def test_diag_words_preserve_signs(self, diag):
        def pattern(p):
            return tuple(0 if abs(x) < 1e-12 else (1 if x > 0 else -1) for x in p)

        for i, p in enumerate(NINE):
            ref = pattern(p)
            for w in WordSampler(seed=60 + i, count=200).words(2):
                assert pattern(apply_word(diag, w, p)) == ref
