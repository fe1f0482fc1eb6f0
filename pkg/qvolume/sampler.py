"""
Ground truth for the q^{-Volume} tiling measure.

Exhaustive enumeration of boxed plane partitions for N <= 4, the bijection
with non-intersecting paths, single-site Glauber dynamics with its exact
transition matrix, and a checkerboard-sweep chain for moderate N whose
samples are reduced to per-site tile statistics.
"""

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import pandas as pd
from tqdm import tqdm

from qvolume import global_value
from qvolume.config import SAMPLER_CONFIG
from qvolume.exceptions import DegenerateInputError
from qvolume.objects.tiling import PathEnsemble, PlanePartition, TilingStats, TILE_TYPES
from qvolume.qcore import as_exact

logger = logging.getLogger(__name__)

TYPE_I, TYPE_II, TYPE_III = 0, 1, 2
HALF_SQRT3 = 0.5 * math.sqrt(3.0)


def _require_chain(N, q):
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if q <= 1:
        raise DegenerateInputError(f"the Glauber chain needs q > 1, got {q}")


# =============================================
# enumeration
# =============================================

def _decreasing_rows(N):
    """All weakly decreasing rows of length N with entries in 0..N, in lexicographic descending order."""
    return list(itertools.combinations_with_replacement(range(N, -1, -1), N))


def _stack_rows(N, rows, prefix):
    if len(prefix) == N:
        yield prefix
        return
    top = prefix[-1] if prefix else None
    for row in rows:
        if top is None or all(a <= b for a, b in zip(row, top)):
            yield from _stack_rows(N, rows, prefix + [row])


def enumerate_tilings(N, q):
    """Every plane partition in the N x N x N box with weight q^{-|pi|}.

    Returns (states, Z) with states a list of (PlanePartition, weight) in a
    fixed order; weights are exact when q is.
    """
    cap = SAMPLER_CONFIG['max_enumeration_N']
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if N > cap:
        raise ValueError(f"enumeration is capped at N={cap}, got {N}")
    q = as_exact(q)
    if q <= 0:
        raise DegenerateInputError(f"q must be positive, got {q}")
    inverse_powers = [q ** (-v) for v in range(N ** 3 + 1)]
    rows = _decreasing_rows(N)
    states = []
    Z = 0
    for stacked in _stack_rows(N, rows, []):
        state = PlanePartition(stacked, check=False)
        weight = inverse_powers[state.volume]
        states.append((state, weight))
        Z += weight
    logger.debug(f"enumerated {len(states)} plane partitions for N={N}")
    return states, Z


def macmahon_count(N):
    """prod_{i,j,k=1}^{N} (i+j+k-1)/(i+j+k-2)."""
    total = Fraction(1)
    for i, j, k in itertools.product(range(1, N + 1), repeat=3):
        total *= Fraction(i + j + k - 1, i + j + k - 2)
    return int(total)


def macmahon_partition_function(N, q):
    """Z = sum q^{-|pi|} from the box product with t = q^{-1}."""
    t = 1 / as_exact(q)
    total = 1
    for i, j, k in itertools.product(range(1, N + 1), repeat=3):
        total = total * (1 - t ** (i + j + k - 1)) / (1 - t ** (i + j + k - 2))
    return total


def probabilities(states, Z):
    return [weight / Z for _, weight in states]


# =============================================
# paths
# =============================================

def to_paths(partition):
    """Row j of pi becomes path j; its up-steps sit at u_j(k) = pi_{j,N-1-k} + k."""
    h = partition.heights
    N = partition.N
    up_times = h[:, ::-1] + np.arange(N)
    m = np.arange(2 * N + 1)
    counts = (up_times[:, :, None] < m[None, None, :]).sum(axis=1)
    return PathEnsemble(np.arange(N)[:, None] + counts)


def from_paths(paths):
    """Inverse of to_paths; raises ValueError on an invalid ensemble."""
    paths.validate()
    N = paths.N
    heights = np.zeros((N, N), dtype=np.int64)
    for j in range(N):
        up_times = np.flatnonzero(paths.steps()[j])
        heights[j, ::-1] = up_times - np.arange(N)
    return PlanePartition(heights)


def path_weight(paths, q):
    """Product of q^{-(m+1)} over the up-steps from column m to m + 1."""
    q = as_exact(q)
    exponent = int(((np.arange(2 * paths.N) + 1) * paths.steps()).sum())
    return q ** (-exponent)


def path_weight_exponent(N):
    """Tiling-independent offset: path weight = q^{-|pi|} q^{-N^2(N+1)/2}."""
    return N * N * (N + 1) // 2


def measured_path_constants(N, q):
    """The set of ratios path_weight / q^{-|pi|} over the whole ensemble."""
    q = as_exact(q)
    states, _ = enumerate_tilings(N, q)
    return {path_weight(to_paths(state), q) / weight for state, weight in states}


def occupancy(paths):
    """Lattice points (m, y) with (m, y + 1/2) on a path."""
    p = paths.positions
    return {(m, int(p[j, m])) for j in range(paths.N) for m in range(p.shape[1])}


def occupancy_probability(points, N, q, states=None):
    """Probability that every point (x, y) carries a path, from the enumeration."""
    if states is None:
        states, Z = enumerate_tilings(N, q)
    else:
        Z = sum(weight for _, weight in states)
    points = set(points)
    total = 0
    for state, weight in states:
        if points <= occupancy(to_paths(state)):
            total += weight
    return total / Z


# =============================================
# tiles and height function
# =============================================

def site_mask(N):
    """Sites (m, y), m < 2N, on the path lattice inside the hexagon."""
    m = np.arange(2 * N)[:, None]
    y = np.arange(2 * N)[None, :]
    return (y >= np.maximum(0, m - N)) & (y <= np.minimum(m, N) + N - 1)


def height_function(paths):
    """h[m, y] = number of paths below (m, y) for m, y in 0..2N."""
    N = paths.N
    levels = np.arange(2 * N + 1)
    return (paths.positions.T[:, :, None] < levels[None, None, :]).sum(axis=1)


def tile_types(partition):
    """Tile type per site from height differences: I (up-step), II (flat), III (no path).

    Entries outside the hexagon are -1.
    """
    h = height_function(to_paths(partition))
    particle = h[:-1, 1:] - h[:-1, :-1]
    flat = h[1:, 1:] - h[:-1, :-1]
    types = np.where(particle == 1, np.where(flat == 1, TYPE_II, TYPE_I), TYPE_III)
    return np.where(site_mask(partition.N), types, -1)


def _one_hot(types):
    return np.stack([types == t for t in (TYPE_I, TYPE_II, TYPE_III)], axis=-1)


def exact_marginals(N, q, states=None):
    """Per-site tile-type probabilities and mean heights under q^{-|pi|}."""
    if states is None:
        states, Z = enumerate_tilings(N, q)
    else:
        Z = sum(weight for _, weight in states)
    frequencies = np.zeros((2 * N, 2 * N, 3))
    heights = np.zeros((N, N))
    for state, weight in states:
        p = float(weight / Z)
        frequencies += p * _one_hot(tile_types(state))
        heights += p * state.heights
    return frequencies, heights


def tile_polygons(partition, frame="sheared"):
    """Lozenge corners per tile type, in sheared (m, y) or symmetric coordinates."""
    types = tile_types(partition)
    polygons = {name: [] for name in TILE_TYPES}
    shapes = {
        TYPE_I: ((0, 0), (1, 1), (1, 2), (0, 1)),
        TYPE_II: ((0, 0), (1, 0), (1, 1), (0, 1)),
        TYPE_III: ((-1, 0), (0, 0), (1, 1), (0, 1)),
    }
    for m, y in zip(*np.nonzero(types >= 0)):
        t = int(types[m, y])
        corners = [(m + dx, y + dy) for dx, dy in shapes[t]]
        if frame == "symmetric":
            corners = [(HALF_SQRT3 * a, b - 0.5 * a) for a, b in corners]
        elif frame != "sheared":
            raise ValueError(f"unknown frame {frame!r}")
        polygons[TILE_TYPES[t]].append([(float(a), float(b)) for a, b in corners])
    return polygons


def complement(partition):
    return partition.complement()


# =============================================
# Glauber dynamics
# =============================================

def _bounds(h):
    """Largest and smallest admissible height at every cell given its neighbours."""
    N = h.shape[0]
    padded = np.pad(h, 1, mode='constant', constant_values=0)
    padded[0, :] = N
    padded[:, 0] = N
    upper = np.minimum(padded[:-2, 1:-1], padded[1:-1, :-2])
    lower = np.maximum(padded[2:, 1:-1], padded[1:-1, 2:])
    return lower, upper


def _move_probability(q, direction):
    """Metropolis acceptance for the target q^{-Vol}."""
    return 1 / as_exact(q) if direction > 0 else 1


def glauber_step(state, rng, q):
    """One Metropolis move: uniform cell and direction, pi_ij -> pi_ij +- 1."""
    _require_chain(state.N, q)
    N = state.N
    i, j = rng.integers(N, size=2)
    direction = 1 if rng.integers(2) else -1
    lower, upper = _bounds(state.heights)
    proposal = state.heights[i, j] + direction
    if proposal < lower[i, j] or proposal > upper[i, j]:
        return state
    if direction > 0 and rng.random() >= float(_move_probability(q, direction)):
        return state
    heights = state.heights.copy()
    heights[i, j] = proposal
    return PlanePartition(heights, check=False)


def transition_matrix(N, q):
    """Exact single-site Glauber transition matrix on the enumerated states."""
    q = as_exact(q)
    _require_chain(N, q)
    states, Z = enumerate_tilings(N, q)
    index = {state.key(): k for k, (state, _) in enumerate(states)}
    proposal = Fraction(1, 2 * N * N)
    P = [[0] * len(states) for _ in states]
    for a, (state, _) in enumerate(states):
        lower, upper = _bounds(state.heights)
        stay = 1
        for i, j in itertools.product(range(N), repeat=2):
            for direction in (1, -1):
                target = state.heights[i, j] + direction
                if lower[i, j] <= target <= upper[i, j]:
                    heights = state.heights.copy()
                    heights[i, j] = target
                    b = index[heights.tobytes()]
                    move = proposal * _move_probability(q, direction)
                    P[a][b] += move
                    stay -= move
        P[a][a] += stay
    return states, Z, P


def detailed_balance_defect(N, q):
    """max |pi(a) P(a,b) - pi(b) P(b,a)|; zero for rational q."""
    states, Z, P = transition_matrix(N, q)
    weights = [weight / Z for _, weight in states]
    defect = 0
    for a, b in itertools.combinations(range(len(states)), 2):
        defect = max(defect, abs(weights[a] * P[a][b] - weights[b] * P[b][a]))
    return defect


def stationarity_defect(N, q):
    """max_b |sum_a pi(a) P(a,b) - pi(b)|."""
    states, Z, P = transition_matrix(N, q)
    weights = [weight / Z for _, weight in states]
    return max(abs(sum(weights[a] * P[a][b] for a in range(len(states))) - weights[b])
               for b in range(len(states)))


def make_rng(seed=None, stream=0):
    """Philox generator for one chain; streams are spawned from the seed."""
    if seed is None:
        seed = SAMPLER_CONFIG['seed']
    sequence = np.random.SeedSequence(int(seed))
    if stream:
        sequence = sequence.spawn(stream + 1)[stream]
    return np.random.Generator(np.random.Philox(sequence))


def _checkerboard_sweep(h, rng, accept_up):
    """Metropolis update of every cell, one colour class at a time, in place."""
    N = h.shape[0]
    parity = np.add.outer(np.arange(N), np.arange(N)) % 2
    for colour in (0, 1):
        cells = parity == colour
        lower, upper = _bounds(h)
        direction = np.where(rng.random((N, N)) < 0.5, 1, -1)
        proposal = h + direction
        accepted = (proposal >= lower) & (proposal <= upper)
        accepted &= (direction < 0) | (rng.random((N, N)) < accept_up)
        np.copyto(h, proposal, where=cells & accepted)


def chain(N, q, sweeps, seed=None, burn_in=None, start=None, progress=None, stream=0):
    """Yield the state after each of `sweeps` sweeps that follow the burn-in.

    A sweep updates all N^2 cells; burn-in defaults to burn_in_factor * N^3 sweeps.
    """
    _require_chain(N, q)
    if sweeps < 1:
        raise ValueError(f"sweeps must be >= 1, got {sweeps}")
    if burn_in is None:
        burn_in = SAMPLER_CONFIG['burn_in_factor'] * N ** 3
    if progress is None:
        progress = not global_value.quiet
    rng = make_rng(seed, stream)
    h = np.array(start.heights if start is not None else np.zeros((N, N)), dtype=np.int64)
    accept_up = 1.0 / float(q)
    with tqdm(total=burn_in + sweeps, desc=f"Glauber N={N}", unit=" sweeps",
              disable=not progress) as bar:
        for _ in range(burn_in):
            _checkerboard_sweep(h, rng, accept_up)
            bar.update(1)
        for _ in range(sweeps):
            _checkerboard_sweep(h, rng, accept_up)
            bar.update(1)
            yield PlanePartition(h, check=False)


def sample(N, q, sweeps, seed=None, burn_in=None, progress=None, stream=0):
    """The state after burn-in plus `sweeps` sweeps; deterministic given the seed."""
    last = None
    for last in chain(N, q, sweeps, seed, burn_in, progress=progress, stream=stream):
        pass
    return last


def sample_chains(N, q, sweeps, chains, seed=None, burn_in=None, threads=None):
    """Final states of independent chains, one Philox stream each."""
    def run(stream):
        return sample(N, q, sweeps, seed, burn_in, progress=False, stream=stream)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, range(chains)))


def stats(samples, seed=None):
    """Tile-type frequencies per site and mean heights over an iterable of states."""
    counts = None
    heights = None
    total = 0
    N = None
    for state in samples:
        if counts is None:
            N = state.N
            counts = np.zeros((2 * N, 2 * N, 3))
            heights = np.zeros((N, N))
        counts += _one_hot(tile_types(state))
        heights += state.heights
        total += 1
    if total == 0:
        raise ValueError("stats needs at least one sample")
    return TilingStats(N, counts / total, site_mask(N), heights / total, total, seed)


def stats_frame(tiling_stats):
    """One row per site: m, y and the three frequencies."""
    m, y = np.nonzero(tiling_stats.mask)
    f = tiling_stats.frequencies[m, y]
    return pd.DataFrame({"m": m, "y": y, "I": f[:, 0], "II": f[:, 1], "III": f[:, 2]})


def corner_window(N, size=None):
    """Sites within `size` of the hexagon corner (2N, 2N)."""
    if size is None:
        size = max(2, N // 10)
    return (2 * N - size, 2 * N), (2 * N - size, 2 * N)


def frozen_corner_density(tiling_stats, size=None):
    """Type-II frequency averaged over the corner window at (2N, 2N)."""
    m_range, y_range = corner_window(tiling_stats.N, size)
    return float(tiling_stats.window(m_range, y_range)[TYPE_II])


def compare_with_exact(N, q, sweeps, seed=None, burn_in=None, progress=None):
    """Largest per-site total-variation distance between chain frequencies and exact marginals."""
    exact, _ = exact_marginals(N, q)
    result = stats(chain(N, q, sweeps, seed, burn_in, progress=progress), seed)
    return result.total_variation(exact), result


def state_histogram(N, q, sweeps, seed=None, burn_in=None, progress=None):
    """Empirical distribution over the enumerated states along one chain, and its TV distance to the exact one."""
    states, Z = enumerate_tilings(N, q)
    index = {state.key(): k for k, (state, _) in enumerate(states)}
    tally = np.zeros(len(states))
    for state in chain(N, q, sweeps, seed, burn_in, progress=progress):
        tally[index[state.key()]] += 1
    empirical = tally / tally.sum()
    exact = np.array([float(p) for p in probabilities(states, Z)])
    return empirical, 0.5 * float(np.abs(empirical - exact).sum())
