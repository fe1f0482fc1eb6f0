#!/usr/bin/env python3
"""
Correlation kernel: exact extraction against enumeration, quadrature and mpmath engines.
"""

import sys
import os
import itertools
import math
import random
from fractions import Fraction

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from qvolume import arctic, equilibrium, kernel, sampler
from qvolume.constants import REFERENCE
from qvolume.exceptions import DegenerateInputError
from qvolume.objects.lattice import ContourSpec, KernelQuery

Q = Fraction(13, 10)


def test_one_point_against_enumeration():
    """K_N(x, y; x, y) is the probability that (x, y + 1/2) carries a path"""
    print("🧪 Testing one-point correlations")
    print("=" * 50)
    for N in (1, 2, 3):
        states, _ = sampler.enumerate_tilings(N, Q)
        worst = 0
        for x in range(2 * N + 1):
            for y in kernel.y_range(x, N):
                value = kernel.correlation_kernel_exact(KernelQuery.diagonal(x, y), N, Q)
                expected = sampler.occupancy_probability([(x, y)], N, Q, states)
                worst = max(worst, abs(float(value - expected)))
        print(f"   N={N}: worst deviation {worst:.2e}")
        assert worst < 1e-7
    print("✅ one-point correlations")


def _points(N):
    return [(x, y) for x in range(2 * N + 1) for y in kernel.y_range(x, N)]


def test_multi_point_against_enumeration():
    """Every 1-, 2- and 3-point determinant at N = 2 for q = 13/10 and q = 2"""
    print("🧪 Testing k-point correlations at N = 2")
    print("=" * 50)
    N = 2
    for q in (Q, Fraction(2)):
        states, _ = sampler.enumerate_tilings(N, q)
        checked = 0
        for k in (1, 2, 3):
            for points in itertools.combinations(_points(N), k):
                value = kernel.correlation(list(points), N, q)
                expected = sampler.occupancy_probability(points, N, q, states)
                assert abs(float(value - expected)) < 1e-12, (q, points, value, expected)
                checked += 1
        print(f"   q={q}: {checked} subsets")
    print("✅ determinantal correlations")


def test_three_point_correlations_at_N3():
    """One-point values and sampled 2- and 3-point subsets at N = 3"""
    print("🧪 Testing k-point correlations at N = 3")
    print("=" * 50)
    N = 3
    rng = random.Random(20240917)
    points = _points(N)
    for q in (Q, Fraction(2)):
        states, _ = sampler.enumerate_tilings(N, q)
        subsets = [[p] for p in points]
        for k in (2, 3):
            subsets += [rng.sample(points, k) for _ in range(25)]
        for subset in subsets:
            value = kernel.correlation(subset, N, q)
            expected = sampler.occupancy_probability(subset, N, q, states)
            assert abs(float(value - expected)) < 1e-12, (q, subset, value, expected)
        print(f"   q={q}: {len(subsets)} subsets")
    print("✅ N = 3 correlations")


def test_columns_carry_N_paths():
    for N in (2, 3):
        table = kernel.kernel_table(N, Q)
        sums = table.groupby("x1")["K"].sum()
        assert all(abs(total - N) < 1e-9 for total in sums)
    print("✅ every column holds N paths")


def test_christoffel_darboux():
    """Two-term form against the sum and the reproducing property"""
    print("🧪 Testing the Christoffel-Darboux kernel")
    print("=" * 50)
    N, q = 3, Fraction(3, 2)
    for w, z in ((Fraction(1, 2), Fraction(3)), (Fraction(-2), Fraction(5, 7)), (Fraction(4), Fraction(4))):
        assert kernel.cd_kernel(w, z, N, q) == kernel.cd_kernel_sum(w, z, N, q)
    w = Fraction(2, 3)
    for k in range(N):
        assert kernel.reproducing_residue(w, k, N, q) == w ** k
    print("✅ reproducing kernel")


def test_quadrature_matches_exact():
    """Trapezoid rule on two circles against coefficient extraction"""
    print("🧪 Testing contour quadrature")
    print("=" * 50)
    N = 2
    for query in (KernelQuery(2, 1, 2, 1), KernelQuery(3, 2, 1, 1), KernelQuery(1, 0, 3, 2)):
        exact = float(kernel.correlation_kernel_exact(query, N, Q))
        numeric = kernel.correlation_kernel(query, N, Q)
        print(f"   {query.as_tuple()} case {kernel.contour_case(query)}: {numeric:.12f} vs {exact:.12f}")
        assert abs(numeric - exact) < 1e-8
    radius = float(Q) ** N
    try:
        kernel.correlation_kernel(KernelQuery(2, 1, 2, 1), N, Q, ContourSpec(radius, radius))
    except ValueError:
        pass
    else:
        raise AssertionError("equal circles should fail")
    print("✅ quadrature agrees")


def test_quadrature_radius_stability():
    """Moving either circle leaves K_N unchanged; the integrand is a Laurent polynomial"""
    print("🧪 Testing contour radius stability")
    print("=" * 50)
    N = 2
    queries = (KernelQuery(2, 1, 2, 1), KernelQuery(3, 2, 1, 1), KernelQuery(1, 0, 3, 2), KernelQuery(4, 3, 0, 0))
    for q in (Q, Fraction(2)):
        scale = float(q) ** N
        for query in queries:
            exact = float(kernel.correlation_kernel_exact(query, N, q))
            for z_factor, w_factor in ((1.0, 1.5), (0.7, 1.3), (1.2, 2.0), (1.6, 0.8)):
                contours = ContourSpec(z_factor * scale, w_factor * scale)
                numeric = kernel.correlation_kernel(query, N, q, contours)
                assert abs(numeric - exact) < 1e-8, (q, query.as_tuple(), z_factor, w_factor, numeric, exact)
        print(f"   q={q}: four radius pairs agree")
    print("✅ quadrature is radius independent")


def test_mp_engine_matches_exact():
    N = 3
    c = 2 * N * math.log(1.3)
    for query in (KernelQuery(3, 2, 3, 2), KernelQuery(4, 3, 2, 2)):
        exact = float(kernel.correlation_kernel_exact(query, N, Q))
        assert abs(kernel.correlation_kernel_mp(query, N, c) - exact) < 1e-9
    print("✅ mpmath engine agrees")


def test_avatar_guards():
    c = 1.0
    r = math.exp(c / 2)
    try:
        kernel.avatar_normalization(8, c, 1.2 * r, 0.5 * r)
    except DegenerateInputError:
        pass
    else:
        raise AssertionError("w outside the disk should fail")
    value = kernel.avatar_normalization(8, c, 0.5 * r + 0.05, 0.5 * r)
    assert math.isfinite(abs(value))
    print("✅ avatar domain")


def test_avatar_identity_and_first_degree():
    """tilde R_N(z, z) = 1, and tilde R_1(w, z) = 1 + (w - z) / (q + q^2)"""
    print("🧪 Testing the avatar at w = z and N = 1")
    print("=" * 50)
    c = 1.0
    r = math.exp(c / 2)
    for N in (1, 4, 16):
        for z in (0.5 * r, 0.3 * r * np.exp(1j), -0.6 * r + 0.2j):
            value = kernel.avatar_normalization(N, c, z, z)
            assert abs(value - 1.0) < 1e-12, (N, z, value)
    geo = equilibrium.arc_geometry(c)
    q = math.exp(c / 2)
    for w, z in ((0.5 * r + 0.1, 0.5 * r), (0.2 * r * np.exp(2j), 0.4 * r)):
        g_w, g_z = equilibrium.g(np.array([w, z], dtype=complex), geo)
        expected = (1.0 + (w - z) / (q + q * q)) * np.exp(g_w - g_z)
        assert abs(kernel.avatar_normalization(1, c, w, z) - expected) < 1e-10
    print("✅ avatar identities")


def test_avatar_error_decreases():
    """|value - 1| shrinks under N doubling at a fixed pair and along w = z + d N^(-1/3)"""
    print("🧪 Testing avatar convergence")
    print("=" * 50)
    c = 1.0
    r = math.exp(c / 2)
    z, w = 0.5 * r, 0.5 * r + 0.1
    errors = [abs(kernel.avatar_normalization(N, c, w, z) - 1.0) for N in (16, 32, 64)]
    print(f"   fixed pair: {errors}")
    assert errors[0] > errors[1] > errors[2]
    table = kernel.avatar_study(c, z, Ns=(16, 32, 64))
    print(table[["N", "error"]])
    assert list(table["N"]) == [16, 32, 64]
    assert table["error"].is_monotonic_decreasing
    print("✅ avatar error decreasing")


def test_edge_scaling_table():
    """Rescaled kernel next to the Airy target at a convex arctic point"""
    print("🧪 Testing edge scaling at a convex point")
    print("=" * 50)
    c = 1.0
    s = 0.5 * math.exp(c / 2)
    table = kernel.edge_scaling_diagnostic(s, c, Ns=(32, 64, 128))
    print(table[["N", "x1", "y1", "scaled", "target"]])
    assert list(table["N"]) == [32, 64, 128]
    assert np.all(np.isfinite(table["scaled"].to_numpy(dtype=float)))
    assert abs(table["target"].iloc[0] - REFERENCE().AIRY_PRIME_ZERO_SQ) < 1e-6
    assert table["target"].nunique() == 1
    assert table.attrs["improves"]
    print("✅ edge scaling table")


def test_edge_scaling_at_the_inflection_point():
    """c = 5: shifted beta at the inflection point of the upper boundary"""
    print("🧪 Testing edge scaling at the inflection point")
    print("=" * 50)
    c = 5.0
    s = arctic.find_inflection(c)
    table = kernel.edge_scaling_diagnostic(s, c, Ns=(32, 64, 128), inflection=True)
    print(table[["N", "x1", "y1", "scaled", "target"]])
    assert list(table["N"]) == [32, 64, 128]
    assert np.all(np.isfinite(table["scaled"].to_numpy(dtype=float)))
    assert table.attrs["improves"]
    print("✅ inflection edge scaling")


def test_degenerate_inputs():
    try:
        kernel.cd_kernel(0, 1, 2, 1)
    except DegenerateInputError:
        pass
    else:
        raise AssertionError("q = 1 should fail")
    try:
        kernel.correlation_kernel_exact(KernelQuery(7, 0, 0, 0), 2, Q)
    except ValueError:
        pass
    else:
        raise AssertionError("column outside the hexagon should fail")
    print("✅ degenerate inputs rejected")


if __name__ == "__main__":
    test_one_point_against_enumeration()
    test_multi_point_against_enumeration()
    test_three_point_correlations_at_N3()
    test_columns_carry_N_paths()
    test_christoffel_darboux()
    test_quadrature_matches_exact()
    test_quadrature_radius_stability()
    test_mp_engine_matches_exact()
    test_avatar_guards()
    test_avatar_identity_and_first_degree()
    test_avatar_error_decreases()
    test_edge_scaling_table()
    test_edge_scaling_at_the_inflection_point()
    test_degenerate_inputs()
