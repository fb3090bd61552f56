from fractions import Fraction

import numpy as np
import pytest

from evorot import io
from evorot.errors import (
    DegenerateRowMean,
    LatticeViolation,
    MismatchedPopulationSize,
    TooShort,
)
from evorot.rotation import (
    PopulationState,
    Trajectory,
    accumulated_rotation,
    average_distance,
    build_report,
    cycle_rotation_index,
    instantaneous_rotation,
    mean_rotation,
    relative_rotation,
    response_coefficients,
    rotation_series,
    rotation_series_xy,
    tripwire_crossings,
)

F = Fraction


def traj(points, n=6, **kw):
    return Trajectory(tuple(PopulationState(p, q, n) for p, q in points), **kw)


UNIT_LOOP = [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]


def shoelace_trapezoid(points):
    """Independent signed-area oracle (trapezoid form of the shoelace rule)."""
    area = 0
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        area += (y1 + y2) * (x1 - x2)
    return area / 2


class TestInstantaneous:
    def test_published_worked_example(self):
        a = PopulationState(5, 1, 6)
        b = PopulationState(4, 3, 6)
        assert instantaneous_rotation(a, b) == F(11, 36)
        assert instantaneous_rotation(b, a) == F(-11, 36)

    def test_repeated_state_is_zero(self):
        s = PopulationState(2, 5, 6)
        assert instantaneous_rotation(s, s) == 0

    def test_mismatched_sizes(self):
        with pytest.raises(MismatchedPopulationSize):
            instantaneous_rotation(PopulationState(1, 1, 6), PopulationState(1, 1, 4))

    def test_antisymmetry_over_lattice(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            a = PopulationState(int(rng.integers(7)), int(rng.integers(7)), 6)
            b = PopulationState(int(rng.integers(7)), int(rng.integers(7)), 6)
            assert instantaneous_rotation(a, b) == -instantaneous_rotation(b, a)

    def test_collinear_states_give_zero(self):
        # origin-vectors that are scalar multiples
        assert rotation_series([(F(1, 6), F(2, 6)), (F(2, 6), F(4, 6))]) == [0]
        assert rotation_series([(F(1, 2), F(1, 2)), (F(1, 6), F(1, 6))]) == [0]


class TestAccumulated:
    def test_unit_square_loop_counterclockwise(self):
        t = traj(UNIT_LOOP, n=1)
        assert accumulated_rotation(t) == 2  # 2 x enclosed area

    def test_reversed_loop(self):
        t = traj(UNIT_LOOP[::-1], n=1)
        assert accumulated_rotation(t) == -2

    def test_constant_trajectory(self):
        t = traj([(3, 4)] * 10)
        assert accumulated_rotation(t) == 0

    def test_too_short(self):
        with pytest.raises(TooShort):
            accumulated_rotation(traj([(1, 1)]))

    def test_equals_sum_of_series(self):
        t = traj([(5, 1), (4, 3), (2, 4), (1, 1), (5, 1)])
        assert accumulated_rotation(t) == sum(rotation_series(t))


class TestMean:
    def test_unit_square_loop(self):
        assert mean_rotation(traj(UNIT_LOOP, n=1)) == F(1, 2)  # 2 over 4 transitions

    def test_constant(self):
        assert mean_rotation(traj([(2, 2)] * 7)) == 0

    def test_there_and_back(self):
        assert mean_rotation(traj([(5, 1), (4, 3), (5, 1)])) == 0


class TestShoelaceOracle:
    def test_closed_walks_match_twice_signed_area(self):
        rng = np.random.default_rng(20240501)
        n = 6
        for _ in range(200):
            length = int(rng.integers(3, 51))
            counts = [(int(rng.integers(n + 1)), int(rng.integers(n + 1)))
                      for _ in range(length)]
            counts.append(counts[0])
            walk = traj(counts, n=n)
            acc = accumulated_rotation(walk)
            assert acc == 2 * shoelace_trapezoid(walk.points())

    def test_translation_invariance_for_closed_paths(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            pts = [(F(int(rng.integers(7)), 6), F(int(rng.integers(7)), 6))
                   for _ in range(10)]
            pts.append(pts[0])
            base = sum(rotation_series(pts))
            dx, dy = F(int(rng.integers(-3, 4)), 6), F(int(rng.integers(-3, 4)), 6)
            moved = [(p + dx, q + dy) for p, q in pts]
            assert sum(rotation_series(moved)) == base

    def test_open_paths_depend_on_origin(self):
        pts = [(F(1, 6), F(1, 6)), (F(2, 6), F(5, 6)), (F(4, 6), F(3, 6))]
        moved = [(p + 1, q + 2) for p, q in pts]
        assert sum(rotation_series(pts)) != sum(rotation_series(moved))

    def test_optional_centering(self):
        pts = [(F(1, 6), F(1, 6)), (F(2, 6), F(5, 6)), (F(4, 6), F(3, 6))]
        center = (F(1, 2), F(1, 2))
        shifted = [(p - center[0], q - center[1]) for p, q in pts]
        assert rotation_series(pts, center=center) == rotation_series(shifted)
        assert accumulated_rotation(pts, center=center) == sum(
            rotation_series(shifted)
        )
        # closed paths are centering-invariant
        loop = pts + [pts[0]]
        assert accumulated_rotation(loop, center=center) == accumulated_rotation(loop)


class TestRelativeRotation:
    def test_benchmark_entries(self):
        _, table = io.load_l_table(io.data_path("rotation_table.csv"))
        phi = relative_rotation({g: table[g] for g in ("3", "5", "6", "7")})
        # game 3, group 1: 0.89 over the exact row mean 13.90/13
        assert phi["3"][0] == F("0.89") * 13 / F("13.90")
        assert abs(float(phi["3"][0]) - 0.832) < 1e-3
        # game 7, group 10 (T71): -4.33 over -29.58/13
        assert phi["7"][9] == F("4.33") * 13 / F("29.58")
        assert abs(float(phi["7"][9]) - 1.903) < 1e-3

    def test_identical_row_gives_ones(self):
        phi = relative_rotation({"g": [F(3, 7)] * 5})
        assert phi["g"] == [1] * 5

    def test_row_means_are_exactly_one(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            row = [F(int(rng.integers(-50, 50)), int(rng.integers(1, 9)))
                   for _ in range(13)]
            if sum(row) == 0:
                continue
            phi = relative_rotation({"g": row})
            assert sum(phi["g"]) / len(phi["g"]) == 1

    def test_zero_mean_row_raises(self):
        with pytest.raises(DegenerateRowMean):
            relative_rotation({"g": [F(1), F(-1)]})


class TestResponseCoefficients:
    def test_single_group_is_one(self):
        phi = relative_rotation({"3": [F(5, 2)], "7": [F(-3)]})
        assert response_coefficients(phi) == [1]

    def test_mean_of_coefficients_is_one(self):
        _, table = io.load_l_table(io.data_path("rotation_table.csv"))
        phi = relative_rotation({g: table[g] for g in ("3", "5", "6", "7")})
        rrc = response_coefficients(phi)
        assert sum(rrc) / len(rrc) == 1


NASH = (F(1, 2), F(1, 2))


class TestCycleRotationIndex:
    def test_full_counterclockwise_loop(self):
        loop = [(F(1, 6), F(1, 6)), (F(5, 6), F(1, 6)), (F(5, 6), F(5, 6)),
                (F(1, 6), F(5, 6)), (F(1, 6), F(1, 6))]
        assert cycle_rotation_index(loop, NASH) == 1.0

    def test_full_clockwise_loop(self):
        loop = [(F(1, 6), F(1, 6)), (F(1, 6), F(5, 6)), (F(5, 6), F(5, 6)),
                (F(5, 6), F(1, 6)), (F(1, 6), F(1, 6))]
        assert cycle_rotation_index(loop, NASH) == -1.0

    def test_back_and_forth_cancels(self):
        path = [(F(1, 3), F(1, 6)), (F(2, 3), F(1, 6)),
                (F(2, 3), F(1, 3)), (F(1, 3), F(1, 3))]
        cct, ct = tripwire_crossings(path, NASH)
        assert (cct, ct) == (1, 1)
        assert cycle_rotation_index(path, NASH) == 0.0
        assert (cct, ct) == brute_force_crossings(path, NASH)

    def test_no_crossings_is_zero(self):
        path = [(F(1, 6), F(1, 6)), (F(1, 6), F(2, 6)), (F(2, 6), F(2, 6))]
        assert cycle_rotation_index(path, NASH) == 0.0

    def test_landing_on_wire_counts_at_next_strict_crossing(self):
        path = [(F(1, 3), F(1, 6)), (F(1, 2), F(1, 6)), (F(2, 3), F(1, 6))]
        assert tripwire_crossings(path, NASH) == (1, 0)

    def test_touch_and_return_does_not_count(self):
        path = [(F(1, 3), F(1, 6)), (F(1, 2), F(1, 6)), (F(1, 3), F(2, 6))]
        assert tripwire_crossings(path, NASH) == (0, 0)

    def test_crossing_above_nash_ignored(self):
        path = [(F(1, 3), F(5, 6)), (F(2, 3), F(5, 6))]
        assert tripwire_crossings(path, NASH) == (0, 0)

    def test_bounds_and_unanimity_on_random_walks(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            pts = [(F(int(rng.integers(7)), 6), F(int(rng.integers(7)), 6))
                   for _ in range(20)]
            cct, ct = tripwire_crossings(pts, NASH)
            cri = cycle_rotation_index(pts, NASH)
            assert -1.0 <= cri <= 1.0
            if cct + ct:
                assert (abs(cri) == 1.0) == (cct == 0 or ct == 0)


def brute_force_crossings(points, nash, steps=2000):
    """Subdivide each transition finely and count sign flips of p - p*
    happening strictly below the equilibrium (float arithmetic)."""
    nx, ny = float(nash[0]), float(nash[1])
    cct = ct = 0
    for (x1, y1), (x2, y2) in zip(points, points[1:]):
        x1, y1, x2, y2 = float(x1), float(y1), float(x2), float(y2)
        prev_side = None
        for i in range(steps + 1):
            t = i / steps
            x = x1 + t * (x2 - x1)
            y = y1 + t * (y2 - y1)
            side = 1 if x > nx else (-1 if x < nx else 0)
            if side and prev_side and side != prev_side and y < ny:
                if side > 0:
                    cct += 1
                else:
                    ct += 1
            if side:
                prev_side = side
    return cct, ct


class TestAverageDistance:
    def test_pinned_at_nash(self):
        assert average_distance([(F(1, 3), F(1, 3))] * 5, (F(1, 3), F(1, 3))) == 0.0

    def test_single_corner(self):
        d = average_distance([(F(1), F(1))], NASH)
        assert abs(d - np.sqrt(2) / 2) < 1e-12

    def test_uniform_corner_visits(self):
        corners = [(F(0), F(0)), (F(1), F(0)), (F(1), F(1)), (F(0), F(1))]
        assert abs(average_distance(corners, NASH) - np.sqrt(2) / 2) < 1e-12


class TestMinimaxNull:
    def test_uniform_play_has_zero_mean_rotation(self):
        # i.i.d. binomial(6, 1/2) counts in both populations, 1e4 runs of
        # 100 rounds: the grand mean rotation sits within 3 SE of 0
        rng = np.random.default_rng(2024)
        p = rng.binomial(6, 0.5, size=(10_000, 100)) / 6.0
        q = rng.binomial(6, 0.5, size=(10_000, 100)) / 6.0
        lbar = rotation_series_xy(p, q).mean(axis=1)
        se = lbar.std(ddof=1) / np.sqrt(len(lbar))
        assert abs(lbar.mean()) < 3 * se


class TestReport:
    def test_invariants_and_fields(self):
        t = traj([(5, 1), (4, 3), (2, 4), (1, 1)], group_id="g", game_id="3")
        rep = build_report(t, nash=(F(1, 6), F(5, 6)))
        assert rep.l_accumulated == sum(rep.l_series)
        assert rep.l_mean == rep.l_accumulated / (len(t) - 1)
        assert rep.cri is not None and rep.crossings is not None
        assert rep.avg_distance is not None

    def test_corner_nash_gets_distance_but_no_tripwire(self):
        t = traj([(5, 1), (4, 3), (2, 4)])
        rep = build_report(t, nash=(F(0), F(0)))
        assert rep.cri is None and rep.crossings is None
        assert rep.avg_distance is not None

    def test_no_nash(self):
        rep = build_report(traj([(5, 1), (4, 3)]))
        assert rep.cri is None and rep.avg_distance is None


class TestValidation:
    def test_lattice_bounds(self):
        with pytest.raises(LatticeViolation):
            PopulationState(7, 1, 6)

    def test_mixed_population_sizes(self):
        with pytest.raises(MismatchedPopulationSize):
            Trajectory((PopulationState(1, 1, 6), PopulationState(1, 1, 4)))
