#!/usr/bin/env python3
"""
Plane partitions, paths, tiles and the Glauber chain.
"""

import sys
import os
import math
from fractions import Fraction

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from qvolume import sampler
from qvolume.constants import REFERENCE
from qvolume.exceptions import DegenerateInputError
from qvolume.objects.tiling import PlanePartition


def test_enumeration_counts():
    """MacMahon counts and the partition function"""
    print("🧪 Testing enumeration")
    print("=" * 50)
    for N in (1, 2, 3):
        count = REFERENCE.STATE_COUNTS[N]
        states, Z = sampler.enumerate_tilings(N, Fraction(6, 5))
        assert len(states) == count == sampler.macmahon_count(N)
        assert Z == sampler.macmahon_partition_function(N, Fraction(6, 5))
        assert len({state.key() for state, _ in states}) == count
        print(f"✅ N={N}: {count} plane partitions")
    _, Z = sampler.enumerate_tilings(1, Fraction(3, 2))
    assert Z == 1 + Fraction(2, 3)
    assert sampler.macmahon_count(4) == REFERENCE.STATE_COUNTS[4]
    try:
        sampler.enumerate_tilings(5, 2)
    except ValueError:
        pass
    else:
        raise AssertionError("N beyond the enumeration cap should fail")


def test_paths_round_trip():
    """to_paths and from_paths invert each other on every N = 3 state"""
    states, _ = sampler.enumerate_tilings(3, 2)
    for state, _ in states:
        paths = sampler.to_paths(state)
        paths.validate()
        assert sampler.from_paths(paths) == state
    empty = sampler.to_paths(PlanePartition.empty(2))
    assert empty.positions.tolist() == [[0, 1, 2, 2, 2], [1, 2, 3, 3, 3]]
    print("✅ path bijection")


def test_path_weight_constant():
    """Path weight = q^{-|pi|} q^{-N^2(N+1)/2}"""
    for N in (1, 2):
        q = Fraction(3, 2)
        constants = sampler.measured_path_constants(N, q)
        assert constants == {q ** (-sampler.path_weight_exponent(N))}
    print("✅ path weight offset is constant")


def test_occupancy_columns():
    for N in (2, 3):
        states, _ = sampler.enumerate_tilings(N, 2)
        for x in range(2 * N + 1):
            total = sum(sampler.occupancy_probability([(x, y)], N, 2, states) for y in range(2 * N))
            assert total == N
    print("✅ N paths per column")


def test_tiles_and_complement():
    """Tile counts, frozen blocks of the empty box and complement volume"""
    print("🧪 Testing tiles")
    print("=" * 50)
    N = 3
    for state, _ in sampler.enumerate_tilings(N, 2)[0][::97]:
        types = sampler.tile_types(state)
        counts = [int(np.count_nonzero(types == t)) for t in (sampler.TYPE_I, sampler.TYPE_II, sampler.TYPE_III)]
        assert counts[0] + counts[1] == 2 * N * N
        assert sum(counts) == int(sampler.site_mask(N).sum())
        assert state.volume + sampler.complement(state).volume == N ** 3
    types = sampler.tile_types(PlanePartition.empty(N))
    assert np.all(types[N:, N:] == sampler.TYPE_II)
    polygons = sampler.tile_polygons(PlanePartition.full(N), frame="symmetric")
    assert sum(len(v) for v in polygons.values()) == int(sampler.site_mask(N).sum())
    q = Fraction(3, 2)
    states, Z = sampler.enumerate_tilings(2, q)
    flipped, Z_flipped = sampler.enumerate_tilings(2, 1 / q)
    lookup = dict(zip((s.key() for s, _ in flipped), sampler.probabilities(flipped, Z_flipped)))
    for (state, _), p in zip(states, sampler.probabilities(states, Z)):
        assert lookup[sampler.complement(state).key()] == p
    frequencies, _ = sampler.exact_marginals(2, 2)
    assert np.allclose(frequencies[sampler.site_mask(2)].sum(axis=-1), 1.0)
    print("✅ tile checks")


def test_detailed_balance():
    """Exact transition matrix is reversible for q^{-Vol}"""
    print("🧪 Testing detailed balance")
    print("=" * 50)
    assert sampler.detailed_balance_defect(2, Fraction(6, 5)) == 0
    assert sampler.stationarity_defect(2, Fraction(6, 5)) == 0
    states, _, P = sampler.transition_matrix(2, Fraction(3, 2))
    assert all(sum(row) == 1 for row in P)
    assert all(entry >= 0 for row in P for entry in row)
    print("✅ reversible chain")


def test_glauber_step_respects_constraints():
    rng = sampler.make_rng(5)
    state = PlanePartition.empty(3)
    for _ in range(500):
        state = sampler.glauber_step(state, rng, 1.2)
        state.validate()
    full = PlanePartition.full(2)
    for _ in range(50):
        step = sampler.glauber_step(full, rng, 1.2)
        assert step.volume in (7, 8)
    try:
        sampler.glauber_step(state, rng, 1.0)
    except DegenerateInputError:
        pass
    else:
        raise AssertionError("q = 1 should fail")
    print("✅ Glauber moves stay valid")


def test_seed_reproducibility():
    a = sampler.sample(4, 1.1, 50, seed=11, burn_in=10, progress=False)
    b = sampler.sample(4, 1.1, 50, seed=11, burn_in=10, progress=False)
    c = sampler.sample(4, 1.1, 50, seed=11, burn_in=10, progress=False, stream=1)
    assert a == b
    a.validate()
    assert c.N == 4
    chains = sampler.sample_chains(4, 1.1, 20, 3, seed=11, burn_in=5, threads=2)
    assert len(chains) == 3
    print("✅ seeded chains reproduce")


def test_chain_matches_exact_marginals():
    """Per-site tile frequencies at N = 3 within 0.02 of the exact ones"""
    print("🧪 Testing chain marginals")
    print("=" * 50)
    tv, result = sampler.compare_with_exact(3, Fraction(6, 5), 100000, seed=1, progress=False)
    print(f"   worst per-site TV distance {tv:.4f}")
    assert result.samples == 100000
    assert result.normalization_defect() < 1e-12
    assert tv < 0.02
    print("✅ marginals agree")


def test_chain_state_histogram():
    _, tv = sampler.state_histogram(2, Fraction(6, 5), 200000, seed=2, progress=False)
    print(f"   state TV distance {tv:.4f}")
    assert tv < 0.02
    print("✅ stationary distribution reached")


def test_frozen_corner():
    """Type-II density near (2N, 2N) at N = 40, c = 5"""
    N, c = 40, 5.0
    q = math.exp(c / (2 * N))
    result = sampler.stats(sampler.chain(N, q, 200, seed=3, progress=False))
    density = sampler.frozen_corner_density(result)
    print(f"   corner type-II density {density:.4f}")
    assert density > 0.95
    print("✅ frozen corner")


if __name__ == "__main__":
    test_enumeration_counts()
    test_paths_round_trip()
    test_path_weight_constant()
    test_occupancy_columns()
    test_tiles_and_complement()
    test_detailed_balance()
    test_glauber_step_respects_constraints()
    test_seed_reproducibility()
    test_chain_matches_exact_marginals()
    test_chain_state_histogram()
    test_frozen_corner()
