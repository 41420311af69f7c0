"""Enumeration, torus distance, and threshold comparison semantics."""

import random
from fractions import Fraction
from math import gcd

import numpy as np
import pytest
import sympy

from powersieve.rationals import (
    FractionSet,
    PowerFraction,
    TorusDistance,
    compare_distance_to_threshold,
    enumerate_set,
    expected_cardinality,
    torus_distance,
)


def brute_count(Q: int, k: int) -> int:
    """Independent double-loop count of coprime pairs (a, q)."""
    n = 0
    for q in range(Q + 1, 2 * Q + 1):
        for a in range(1, q ** k):
            if gcd(a, q) == 1:
                n += 1
    return n


class TestEnumeration:
    def test_smallest_window(self):
        fs = enumerate_set(1, 2)
        assert [(p.a, p.q) for p in fs] == [(1, 2), (3, 2)]
        assert [p.as_fraction() for p in fs] == [Fraction(1, 4), Fraction(3, 4)]

    def test_q2_cardinality(self):
        fs = enumerate_set(2, 2)
        assert len(fs) == 14  # q=3 gives 6, q=4 gives 8

    @pytest.mark.parametrize("Q", range(1, 11))
    @pytest.mark.parametrize("k", [2, 3])
    def test_cardinality_vs_double_loop(self, Q, k):
        assert len(enumerate_set(Q, k)) == brute_count(Q, k)

    def test_cardinality_vs_totient_formula(self):
        # compare the phi-sum closed form against an independent totient
        fs = enumerate_set(10, 2)
        formula = sum(q * sympy.totient(q) for q in range(11, 21))
        assert len(fs) == formula == expected_cardinality(10, 2)

    @pytest.mark.parametrize("Q,k", [(1, 2), (4, 2), (9, 2), (3, 3), (6, 3)])
    def test_sorted_strictly_increasing(self, Q, k):
        fs = enumerate_set(Q, k)
        vals = [p.as_fraction() for p in fs]
        assert all(a < b for a, b in zip(vals, vals[1:]))

    def test_all_elements_valid(self):
        for p in enumerate_set(3, 2):
            assert gcd(p.a, p.q) == 1
            assert 1 <= p.a < p.q ** p.k
            assert 3 < p.q <= 6

    def test_window_never_empty(self):
        assert len(enumerate_set(1, 3)) == 4  # q=2: a in {1,3,5,7}

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            enumerate_set(0, 2)
        with pytest.raises(ValueError):
            enumerate_set(3, 1)

    def test_overflow_guard_names_the_denominator(self):
        with pytest.raises(OverflowError, match=r"q\*\*k"):
            enumerate_set(2 ** 32, 2)


class TestPowerFraction:
    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            PowerFraction(2, 4, 2)  # gcd(2, 4) != 1
        with pytest.raises(ValueError):
            PowerFraction(9, 3, 2)  # a = q**k
        with pytest.raises(ValueError):
            PowerFraction(0, 3, 2)
        with pytest.raises(ValueError):
            PowerFraction(1, 3, 1)

    def test_value_in_unit_interval(self):
        p = PowerFraction(7, 4, 2)
        assert 0 < float(p) < 1
        assert p.as_fraction() == Fraction(7, 16)


class TestTorusDistance:
    def test_antipodal(self):
        d = torus_distance(PowerFraction(1, 2, 2), PowerFraction(3, 2, 2))
        assert (d.num, d.den) == (1, 2)

    def test_identity(self):
        p = PowerFraction(5, 3, 2)
        d = torus_distance(p, p)
        assert d.num == 0

    def test_wraps_to_nearer_integer(self):
        # 1/4 - 7/9 = -19/36; the nearer integer is -1, giving 17/36
        d = torus_distance(PowerFraction(1, 2, 2), PowerFraction(7, 3, 2))
        assert (d.num, d.den) == (17, 36)

    def test_symmetry_random_pairs(self):
        rng = random.Random(20240811)
        pool = enumerate_set(4, 2).elements
        for _ in range(1000):
            x, y = rng.choice(pool), rng.choice(pool)
            dxy = torus_distance(x, y)
            dyx = torus_distance(y, x)
            assert (dxy.num, dxy.den) == (dyx.num, dyx.den)

    def test_triangle_inequality_random_triples(self):
        rng = random.Random(7)
        pool = enumerate_set(3, 2).elements + enumerate_set(2, 3).elements
        for _ in range(500):
            x, y, z = (rng.choice(pool) for _ in range(3))
            dxz = torus_distance(x, z).as_fraction()
            dxy = torus_distance(x, y).as_fraction()
            dyz = torus_distance(y, z).as_fraction()
            assert dxz <= dxy + dyz

    def test_reduced_and_folded(self):
        d = torus_distance(PowerFraction(7, 4, 2), PowerFraction(4, 3, 2))
        assert (d.num, d.den) == (1, 144)
        assert 0 <= 2 * d.num <= d.den

    def test_overflow_guard(self):
        big = PowerFraction(3, 2 ** 33, 2)  # q**k = 2**66 busts the budget
        with pytest.raises(OverflowError, match=r"q\*\*k"):
            torus_distance(big, PowerFraction(1, 2, 2))

    def test_invalid_distance_rejected(self):
        with pytest.raises(ValueError):
            TorusDistance(3, 4)  # 3/4 > 1/2
        with pytest.raises(ValueError):
            TorusDistance(2, 8)  # not reduced


class TestThresholdComparison:
    def test_boundary_is_strict(self):
        assert not compare_distance_to_threshold(TorusDistance(1, 2), 1)

    def test_minimal_gap_boundary(self):
        # the minimal gap of S(2, 2) is exactly 1/144 (63/144 vs 64/144)
        d = torus_distance(PowerFraction(7, 4, 2), PowerFraction(4, 3, 2))
        assert not compare_distance_to_threshold(d, 72)  # 1/144 < 1/144 fails
        assert compare_distance_to_threshold(d, 71)      # 142 < 144

    def test_requires_positive_N(self):
        with pytest.raises(ValueError):
            compare_distance_to_threshold(TorusDistance(1, 3), 0)


class TestSpacingFloor:
    @pytest.mark.parametrize("Q", range(1, 7))
    def test_exact_floor_for_quadratic_sets(self, Q):
        """Distinct elements are at least 1/(2Q)**4 apart; report the min."""
        fs = enumerate_set(Q, 2)
        vals = [p.as_fraction() for p in fs]
        gaps = [b - a for a, b in zip(vals, vals[1:])]
        gaps.append(1 - (vals[-1] - vals[0]))
        min_gap = min(min(g, 1 - g) for g in gaps)
        floor = Fraction(1, (2 * Q) ** 4)
        assert min_gap >= floor
        # the constant-free Q**-4 statement is reported, not asserted
        print(f"Q={Q}: exact min gap {min_gap} (floor {floor}, Q**-4 = {Fraction(1, Q**4)})")


class TestSerialization:
    def test_csv_roundtrip_values(self, tmp_path):
        fs = enumerate_set(2, 2)
        path = tmp_path / "s22.csv"
        fs.write_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "a,q,k,value"
        assert len(lines) == 15
        a, q, k, value = lines[1].split(",")
        assert (int(a), int(q), int(k)) == (1, 4, 2)
        assert value == "0.062500000000000000"

    def test_binary_cache_roundtrip(self, tmp_path):
        fs = enumerate_set(3, 2)
        path = tmp_path / "s32.bin"
        fs.write_cache(path)
        back = FractionSet.read_cache(path)
        assert back.Q == 3 and back.k == 2 and len(back) == len(fs)
        assert np.array_equal(
            np.asarray(back.numerators, dtype=np.int64),
            np.asarray(fs.numerators, dtype=np.int64),
        )
        assert np.array_equal(
            np.asarray(back.bases, dtype=np.int64),
            np.asarray(fs.bases, dtype=np.int64),
        )

    def test_cache_rejects_foreign_files(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"not a cache at all")
        with pytest.raises(ValueError, match="not a fraction-set cache"):
            FractionSet.read_cache(path)

    def test_cache_rejects_truncation(self, tmp_path):
        fs = enumerate_set(2, 2)
        path = tmp_path / "s22.bin"
        fs.write_cache(path)
        data = path.read_bytes()
        path.write_bytes(data[:-8])
        with pytest.raises(ValueError, match="truncated"):
            FractionSet.read_cache(path)
