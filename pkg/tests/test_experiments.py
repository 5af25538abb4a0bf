"""Nets, sweeps, escape detection, and the fixed-precision slope experiment.

Frozen constants in this file were measured once from the scalar reference
recursion and are locked here as regression anchors; every one of them is
reproducible because the binary64 paths use only IEEE multiply and add in
a fixed order.  The 2 - sqrt(2) reference is cross-checked against exact
integer arithmetic, never against math.sqrt.
"""

import math
from decimal import Decimal
from fractions import Fraction

import numpy as np
import pytest

from tentlab.backends import Binary64, DomainError, ParseError, Rational
from tentlab.experiments import (
    SQRT2_SLOPE_DIGITS,
    EscapeEvent,
    NetSpec,
    Outcome,
    OutcomeKind,
    build_net,
    chaotic_series,
    classify_outcome,
    detect_escape,
    sqrt2_experiment,
    sqrt2_reference,
    sweep,
)
from tentlab.stabilize import StabRun, build_coefficients, stabilized_orbit
from tentlab.tentmap import MapParams, tent_power_step

# measured once at the default parameters; see module docstring
ESCAPE_INDEX_04 = 90
FLAT_VALUE_04 = 0.5999999999999999
UNRESOLVED_UNIFORM_1E5 = [
    0.0, 1e-05, 0.05813, 0.06429, 0.07345, 0.19912, 0.29944, 0.35284,
    0.42137, 0.47074, 0.52926, 0.57863, 0.64716, 0.70056, 0.80088,
    0.92655, 0.93571, 0.94187, 0.99999, 1.0,
]
COUNT_LOW_UNIFORM_1E5 = 57022
COUNT_HIGH_UNIFORM_1E5 = 42957


def b64_setup(h=1.5):
    return MapParams(h, Binary64()), build_coefficients(1.2)


def rat_setup():
    b = Rational()
    return MapParams(b.parse("3/2"), b), build_coefficients(b.parse("6/5"), b)


@pytest.fixture(scope="module")
def uniform_1e5_sweep():
    params, coeffs = b64_setup()
    return sweep(NetSpec.uniform(100000), params, 2, coeffs, 50, 1e-3)


@pytest.fixture(scope="module")
def triadic5_sweep():
    params, coeffs = b64_setup()
    return sweep(NetSpec.triadic(5), params, 2, coeffs, 30, 1e-3)


@pytest.fixture(scope="module")
def run_04_b64():
    params, coeffs = b64_setup()
    return stabilized_orbit(0.4, params, 2, coeffs, 300)


class TestNetSpec:
    def test_parse_round_trip(self):
        spec = NetSpec.parse("uniform:100000")
        assert spec == NetSpec.uniform(100000)
        assert str(spec) == "uniform:100000"
        assert NetSpec.parse("triadic:5") == NetSpec.triadic(5)

    @pytest.mark.parametrize(
        "bad", ["uniform", "cubic:5", "uniform:", "uniform:-3", "triadic:2.5"]
    )
    def test_parse_rejects(self, bad):
        with pytest.raises(ParseError):
            NetSpec.parse(bad)

    def test_sizes(self):
        assert NetSpec.uniform(10).size == 11
        assert NetSpec.triadic(1).size == 16
        assert NetSpec.triadic(5).denominator == 1215

    def test_parameter_must_be_positive(self):
        with pytest.raises(DomainError):
            NetSpec.uniform(0)


class TestBuildNet:
    def test_uniform_10_rational(self):
        pts = build_net(NetSpec.uniform(10), Rational())
        assert pts == [Fraction(i, 10) for i in range(11)]

    def test_triadic_1_contains_known_fixed_point_starts(self):
        pts = build_net(NetSpec.triadic(1), Rational())
        assert Fraction(4, 15) in pts
        assert Fraction(11, 15) in pts
        assert pts == [Fraction(i, 15) for i in range(16)]

    def test_uniform_1e5_contains_04_and_06_exactly(self):
        pts = build_net(NetSpec.uniform(100000), Rational())
        assert Fraction(2, 5) in pts
        assert Fraction(3, 5) in pts

    def test_binary64_points_are_correctly_rounded(self):
        pts = build_net(NetSpec.uniform(7), Binary64())
        assert pts == [i / 7 for i in range(8)]

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
    def test_uniform_powers_of_ten_never_contain_4_15(self, m):
        pts = build_net(NetSpec.uniform(10**m), Rational())
        assert Fraction(4, 15) not in pts

    def test_size_cap(self):
        with pytest.raises(DomainError):
            build_net(NetSpec.uniform(10**7), Binary64())


class TestClassifyOutcome:
    def test_01_reaches_upper_cycle_point(self):
        params, coeffs = b64_setup()
        run = stabilized_orbit(0.1, params, 2, coeffs, 50)
        oc = classify_outcome(run, params, 1e-3)
        assert oc.variant is OutcomeKind.CYCLE_HIGH
        assert abs(run.starred[-1] - 9 / 13) < 1e-3

    def test_04_still_reads_as_fixed_point_at_step_50(self):
        params, coeffs = b64_setup()
        run = stabilized_orbit(0.4, params, 2, coeffs, 50)
        oc = classify_outcome(run, params, 1e-3)
        assert oc.variant is OutcomeKind.FIXED_POINT

    def test_far_value_unresolved(self):
        params, coeffs = b64_setup()
        fake = StabRun(
            params=params, power=2, coeffs=coeffs, x0=0.25, starred=(0.25,) * 7
        )
        oc = classify_outcome(fake, params, 1e-3)
        assert oc.variant is OutcomeKind.UNRESOLVED
        assert oc.distance == pytest.approx(abs(0.25 - 6 / 13), abs=1e-12)

    def test_exact_tie_prefers_cycle(self):
        params, coeffs = b64_setup()
        midpoint = (6 / 13 + 0.6) / 2
        fake = StabRun(
            params=params, power=2, coeffs=coeffs, x0=midpoint,
            starred=(midpoint,) * 7,
        )
        oc = classify_outcome(fake, params, 1.0)
        assert oc.variant is OutcomeKind.CYCLE_LOW

    def test_distance_strictly_inside_tolerance(self):
        params, coeffs = b64_setup()
        fake = StabRun(
            params=params, power=2, coeffs=coeffs, x0=0.7, starred=(0.7,) * 7
        )
        d = abs(0.7 - 9 / 13)
        assert classify_outcome(fake, params, d).variant is OutcomeKind.UNRESOLVED
        assert (
            classify_outcome(fake, params, d * 1.001).variant
            is OutcomeKind.CYCLE_HIGH
        )


class TestSweep:
    def test_small_uniform_bookkeeping(self):
        params, coeffs = b64_setup()
        result = sweep(NetSpec.uniform(10), params, 2, coeffs, 50, 1e-3)
        assert len(result.outcomes) == 11
        assert sum(result.counts.values()) == 11

    def test_vector_path_matches_scalar_recursion(self):
        params, coeffs = b64_setup()
        result = sweep(
            NetSpec.uniform(97), params, 2, coeffs, 40, 1e-3, chunk_size=16
        )
        for x0, oc in zip(result.points, result.outcomes):
            run = stabilized_orbit(x0, params, 2, coeffs, 40)
            assert oc.final_value == run.starred[-1]

    def test_thread_count_does_not_change_bits(self):
        params, coeffs = b64_setup()
        kw = dict(chunk_size=128)
        base = sweep(NetSpec.uniform(1500), params, 2, coeffs, 30, 1e-3,
                     threads=1, **kw)
        for threads in (2, 4):
            other = sweep(NetSpec.uniform(1500), params, 2, coeffs, 30, 1e-3,
                          threads=threads, **kw)
            assert other.outcomes == base.outcomes

    def test_thread_env_variable(self, monkeypatch):
        params, coeffs = b64_setup()
        monkeypatch.setenv("TENTLAB_THREADS", "3")
        result = sweep(NetSpec.uniform(300), params, 2, coeffs, 30, 1e-3)
        assert sum(result.counts.values()) == 301
        monkeypatch.setenv("TENTLAB_THREADS", "soon")
        with pytest.raises(DomainError):
            sweep(NetSpec.uniform(300), params, 2, coeffs, 30, 1e-3)

    def test_validation(self):
        params, coeffs = b64_setup()
        with pytest.raises(DomainError):
            sweep(NetSpec.uniform(10), params, 2, coeffs, 5, 1e-3)
        with pytest.raises(DomainError):
            sweep(NetSpec.uniform(10), params, 2, coeffs, 50, 0.0)
        with pytest.raises(DomainError):
            sweep(NetSpec.uniform(10), params, 2, coeffs, 50, 1e-3, chunk_size=0)

    def test_uniform_1e5_fixed_points_are_exactly_04_06(self, uniform_1e5_sweep):
        result = uniform_1e5_sweep
        fixed = [
            float(x)
            for x, oc in zip(result.points, result.outcomes)
            if oc.variant is OutcomeKind.FIXED_POINT
        ]
        assert fixed == [0.4, 0.6]

    def test_uniform_1e5_unresolved_set_frozen(self, uniform_1e5_sweep):
        result = uniform_1e5_sweep
        unresolved = [
            float(x)
            for x, oc in zip(result.points, result.outcomes)
            if oc.variant is OutcomeKind.UNRESOLVED
        ]
        assert unresolved == UNRESOLVED_UNIFORM_1E5

    def test_uniform_1e5_cycle_counts_frozen(self, uniform_1e5_sweep):
        result = uniform_1e5_sweep
        assert result.count(OutcomeKind.CYCLE_LOW) == COUNT_LOW_UNIFORM_1E5
        assert result.count(OutcomeKind.CYCLE_HIGH) == COUNT_HIGH_UNIFORM_1E5
        assert sum(result.counts.values()) == 100001

    def test_triadic5_fixed_point_set(self, triadic5_sweep):
        result = triadic5_sweep
        fixed = [
            float(x)
            for x, oc in zip(result.points, result.outcomes)
            if oc.variant is OutcomeKind.FIXED_POINT
        ]
        assert fixed == [324 / 1215, 486 / 1215, 729 / 1215, 891 / 1215]
        assert result.count(OutcomeKind.FIXED_POINT) == 4 > 2

    def test_triadic5_23_45_is_kicked_off_the_fixed_point(self, triadic5_sweep):
        result = triadic5_sweep
        idx = 621  # 23/45 = 621/1215
        assert float(result.points[idx]) == 621 / 1215
        oc = result.outcomes[idx]
        assert oc.variant is OutcomeKind.UNRESOLVED
        assert 2e-3 < oc.distance < 4e-3  # still closing in on the low point

    def test_fixed_point_rational_oracle(self, triadic5_sweep):
        # every point the sweep classified as FixedPoint must reach 3/5
        # exactly under exact rational arithmetic
        rat = Rational()
        rparams = MapParams(Fraction(3, 2), rat)
        for i, oc in enumerate(triadic5_sweep.outcomes):
            if oc.variant is not OutcomeKind.FIXED_POINT:
                continue
            x = Fraction(i, 1215)
            for _ in range(60):
                if x == Fraction(3, 5):
                    break
                x = tent_power_step(x, rparams, 2)
            assert x == Fraction(3, 5)


class TestDetectEscape:
    def test_flat_then_jump(self):
        series = [0.6] * 40 + [0.6 + 1e-6 * i for i in range(1, 21)] + [0.45]
        ev = detect_escape(series)
        assert ev is not None
        assert ev.flat_start == 0
        assert ev.flat_value == 0.6
        assert ev.escape_index == 60
        assert ev.terminal_value == 0.45

    def test_constant_series_never_escapes(self):
        assert detect_escape([0.6] * 100) is None

    def test_short_series(self):
        assert detect_escape([0.6] * 10) is None

    def test_pure_ramp_has_no_flat(self):
        series = [i * 1e-4 for i in range(100)]
        assert detect_escape(series) is None

    def test_longest_flat_wins(self):
        series = [0.3] * 35 + [0.7] * 50 + [0.2]
        ev = detect_escape(series)
        assert ev.flat_start == 35
        assert ev.flat_value == 0.7
        assert ev.escape_index == 85

    def test_tie_goes_to_earliest(self):
        series = [0.3] * 35 + [0.7] * 35 + [0.1]
        ev = detect_escape(series)
        assert ev.flat_start == 0
        assert ev.escape_index == 35

    def test_binary64_04_escapes_at_frozen_index(self, run_04_b64):
        ev = detect_escape(run_04_b64.starred)
        assert ev is not None
        assert ev.flat_start == 1
        assert ev.flat_value == FLAT_VALUE_04
        assert abs(ev.flat_value - 0.6) < 1e-9
        assert ev.escape_index == ESCAPE_INDEX_04
        assert abs(ev.terminal_value - 6 / 13) < 1e-12

    def test_rational_04_never_escapes(self):
        params, coeffs = rat_setup()
        run = stabilized_orbit(Fraction(2, 5), params, 2, coeffs, 300)
        assert detect_escape(run.starred) is None

    def test_escape_dichotomy_over_eventually_fixed_starts(self):
        b64p, b64c = b64_setup()
        ratp, ratc = rat_setup()
        for text in ("2/5", "3/5", "4/15", "11/15"):
            frac = Fraction(text)
            rrun = stabilized_orbit(frac, ratp, 2, ratc, 120)
            assert detect_escape(rrun.starred) is None
            assert rrun.starred[-1] == Fraction(3, 5)
            brun = stabilized_orbit(
                float(frac.numerator) / float(frac.denominator), b64p, 2, b64c, 500
            )
            bev = detect_escape(brun.starred)
            assert bev is not None
            assert bev.escape_index <= 500

    def test_23_45_leaves_in_exact_arithmetic_too(self):
        # the averaging window still holds f(23/45) = 2/5 when the first
        # averaged value is formed, so even exact arithmetic steps off the
        # fixed point: x*_6 = 3/5 - a_6/5, and the run drifts to the cycle
        params, coeffs = rat_setup()
        run = stabilized_orbit(Fraction(23, 45), params, 2, coeffs, 12)
        assert run.starred[2] == Fraction(3, 5)
        assert run.starred[5] == Fraction(3, 5)
        kicked = Fraction(3, 5) - coeffs.a[5] / 5
        assert run.starred[6] == kicked
        assert run.starred[7] != Fraction(3, 5)


class TestChaoticSeries:
    def test_first_points(self):
        params, _ = b64_setup()
        o = chaotic_series(params, 5)
        assert o.points == (0.5, 0.75, 0.375, 0.5625, 0.65625, 0.515625)

    def test_tail_confined_to_core_interval(self):
        params, _ = b64_setup()
        o = chaotic_series(params, 300)
        assert all(0.375 <= x <= 0.75 for x in o.points[1:])

    def test_rational_backend(self):
        params, _ = rat_setup()
        o = chaotic_series(params, 3)
        assert o.points == (
            Fraction(1, 2),
            Fraction(3, 4),
            Fraction(3, 8),
            Fraction(9, 16),
        )


class TestSqrt2Reference:
    def test_leading_digits(self):
        ref = sqrt2_reference(70)
        assert str(ref).startswith("0.58578643762690495119831127579")

    def test_exact_integer_oracle(self):
        # 2 - ref must be the 70-digit truncation of sqrt(2)
        ref = sqrt2_reference(70)
        r = 2 - Fraction(*ref.as_integer_ratio())
        assert r * r <= 2
        assert (r + Fraction(1, 10**70)) ** 2 > 2

    def test_precision_validation(self):
        with pytest.raises(DomainError):
            sqrt2_reference(0)


class TestSqrt2Experiment:
    @pytest.fixture(scope="class")
    @staticmethod
    def full_run():
        return sqrt2_experiment(steps=600)

    def test_third_point_lands_near_reference(self, full_run):
        run, _ = full_run
        ref = sqrt2_reference(70)
        dev = abs(Fraction(*run.points[3].as_integer_ratio())
                  - Fraction(*ref.as_integer_ratio()))
        assert dev < Fraction(1, 10**55)
        assert Fraction(1, 10**59) < dev < Fraction(1, 10**57)

    def test_deviation_growth_is_geometric(self, full_run):
        run, _ = full_run
        ref = Fraction(*sqrt2_reference(70).as_integer_ratio())
        devs = [
            abs(Fraction(*x.as_integer_ratio()) - ref) for x in run.points
        ]
        assert max(devs[3:121]) < Fraction(1, 10**40)
        assert devs[300] > Fraction(1, 10**40)
        # once the amplified gap dominates the constant offset between the
        # reference and the true fixed point, 100 steps multiply it by h^100
        assert float(devs[203] / devs[103]) == pytest.approx(2.0**50, rel=1e-6)

    def test_escape_event_window(self, full_run):
        _, event = full_run
        assert event is not None
        assert event.flat_start == 3
        assert 300 <= event.escape_index <= 450
        assert event.escape_index == 373

    def test_short_runs_report_no_escape(self):
        _, event = sqrt2_experiment(steps=3)
        assert event is None
        _, event = sqrt2_experiment(steps=40)
        assert event is None

    def test_precision_must_hold_slope(self):
        with pytest.raises(DomainError):
            sqrt2_experiment(precision=50)

    def test_custom_slope_string(self):
        run, _ = sqrt2_experiment(h_digits="1.5", precision=20, steps=10)
        assert run.points[1] == Decimal("0.75")
