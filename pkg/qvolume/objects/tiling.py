import numpy as np

from qvolume.objects.base import Base

# tile types along a path: up-step, flat step, no path
TILE_TYPES = ("I", "II", "III")


class PlanePartition(Base):
    """Heights pi_ij of an N x N stack of unit cubes inside the N x N x N box."""

    def __init__(self, heights, check=True):
        super(PlanePartition, self).__init__("plane_partition")
        heights = np.array(heights, dtype=np.int64)
        if heights.ndim != 2 or heights.shape[0] != heights.shape[1]:
            raise ValueError(f"plane partition must be a square array, got shape {heights.shape}")
        self.__heights = heights
        self.__heights.setflags(write=False)
        if check:
            self.validate()

    @property
    def heights(self):
        return self.__heights

    @property
    def N(self):
        return self.__heights.shape[0]

    @property
    def volume(self):
        return int(self.__heights.sum())

    @classmethod
    def empty(cls, N):
        return cls(np.zeros((N, N), dtype=np.int64))

    @classmethod
    def full(cls, N):
        return cls(np.full((N, N), N, dtype=np.int64))

    def validate(self):
        h = self.__heights
        N = self.N
        if N < 1:
            raise ValueError("plane partition needs N >= 1")
        if h.min() < 0 or h.max() > N:
            raise ValueError(f"heights must lie in 0..{N}")
        if np.any(np.diff(h, axis=0) > 0) or np.any(np.diff(h, axis=1) > 0):
            raise ValueError("heights must weakly decrease along rows and columns")

    def complement(self):
        """Fill the rest of the cube: pi~_ij = N - pi_{N-1-i, N-1-j}."""
        return PlanePartition(self.N - self.__heights[::-1, ::-1], check=False)

    def key(self):
        return self.__heights.tobytes()

    def __eq__(self, other):
        return isinstance(other, PlanePartition) and np.array_equal(self.__heights, other.heights)

    def __hash__(self):
        return hash((self.N, self.key()))

    def __repr__(self):
        return f"PlanePartition({self.__heights.tolist()})"

    def to_dict(self):
        return {"name": self.name, "N": self.N, "volume": self.volume,
                "heights": self.__heights.tolist()}


class PathEnsemble(Base):
    """N non-intersecting up-right paths; positions[j, m] = x_j^m - 1/2."""

    def __init__(self, positions, check=True):
        super(PathEnsemble, self).__init__("path_ensemble")
        positions = np.array(positions, dtype=np.int64)
        if positions.ndim != 2 or positions.shape[1] != 2 * positions.shape[0] + 1:
            raise ValueError(f"path array must have shape (N, 2N+1), got {positions.shape}")
        self.__positions = positions
        self.__positions.setflags(write=False)
        if check:
            self.validate()

    @property
    def positions(self):
        return self.__positions

    @property
    def N(self):
        return self.__positions.shape[0]

    def x(self, j, m):
        """The half-integer position x_j^m."""
        return self.__positions[j, m] + 0.5

    def steps(self):
        """Up-step indicators, shape (N, 2N)."""
        return np.diff(self.__positions, axis=1)

    def occupied(self, m):
        """Integer heights y with (m, y + 1/2) on a path."""
        return self.__positions[:, m].tolist()

    def validate(self):
        p = self.__positions
        N = self.N
        j = np.arange(N)
        if not np.array_equal(p[:, 0], j) or not np.array_equal(p[:, -1], j + N):
            raise ValueError("paths must start at j + 1/2 and end at N + j + 1/2")
        steps = np.diff(p, axis=1)
        if np.any((steps != 0) & (steps != 1)):
            raise ValueError("path steps must be 0 or 1")
        if N > 1 and np.any(np.diff(p, axis=0) <= 0):
            raise ValueError("paths must be strictly interlaced")

    def to_dict(self):
        return {"name": self.name, "N": self.N, "positions": self.__positions.tolist()}


class TilingStats(Base):
    """Per-site tile-type frequencies on the path lattice and the mean height of each stack.

    Sites are (m, y) for m = 0..2N-1 and y in the column's reachable range;
    frequencies has shape (2N, 2N, 3) and is zero outside the mask.
    """

    def __init__(self, N, frequencies, mask, height_mean, samples, seed=None):
        super(TilingStats, self).__init__("tiling_stats")
        self.__N = int(N)
        self.__frequencies = np.asarray(frequencies, dtype=float)
        self.__mask = np.asarray(mask, dtype=bool)
        self.__height_mean = np.asarray(height_mean, dtype=float)
        self.__samples = int(samples)
        self.__seed = seed

    @property
    def N(self):
        return self.__N

    @property
    def frequencies(self):
        return self.__frequencies

    @property
    def mask(self):
        return self.__mask

    @property
    def height_mean(self):
        return self.__height_mean

    @property
    def samples(self):
        return self.__samples

    @property
    def seed(self):
        return self.__seed

    def normalization_defect(self):
        total = self.__frequencies.sum(axis=-1)
        return float(np.max(np.abs(total[self.__mask] - 1.0)))

    def window(self, m_range, y_range):
        """Mean frequencies over the masked sites of a rectangular window."""
        m0, m1 = m_range
        y0, y1 = y_range
        block = self.__frequencies[m0:m1, y0:y1]
        inside = self.__mask[m0:m1, y0:y1]
        if not inside.any():
            raise ValueError(f"window {m_range} x {y_range} holds no sites")
        return block[inside].mean(axis=0)

    def total_variation(self, exact):
        """Largest per-site total-variation distance to another frequency array."""
        tv = 0.5 * np.abs(self.__frequencies - np.asarray(exact, dtype=float)).sum(axis=-1)
        return float(tv[self.__mask].max())

    def to_dict(self):
        return {"name": self.name, "N": self.__N, "samples": self.__samples, "seed": self.__seed,
                "height_mean": self.__height_mean.tolist()}
