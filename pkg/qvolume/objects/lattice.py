from qvolume.objects.base import Base


class KernelQuery(Base):
    """Two path points (x1, y1 + 1/2) and (x2, y2 + 1/2) of the lattice."""

    def __init__(self, x1, y1, x2, y2):
        super(KernelQuery, self).__init__("kernel_query")
        self.__x1 = int(x1)
        self.__y1 = int(y1)
        self.__x2 = int(x2)
        self.__y2 = int(y2)

    @property
    def x1(self):
        return self.__x1

    @property
    def y1(self):
        return self.__y1

    @property
    def x2(self):
        return self.__x2

    @property
    def y2(self):
        return self.__y2

    @classmethod
    def diagonal(cls, x, y):
        return cls(x, y, x, y)

    def validate(self, N):
        for x in (self.__x1, self.__x2):
            if not 0 <= x <= 2 * N:
                raise ValueError(f"column {x} outside 0..{2 * N}")

    def as_tuple(self):
        return (self.__x1, self.__y1, self.__x2, self.__y2)

    def to_dict(self):
        return {"name": self.name, "x1": self.__x1, "y1": self.__y1, "x2": self.__x2, "y2": self.__y2}


class ContourSpec(Base):
    """Two origin-centred circles for the z and w integrals and the node count per circle."""

    def __init__(self, z_radius, w_radius, nodes=32):
        super(ContourSpec, self).__init__("contour_spec")
        if z_radius <= 0 or w_radius <= 0:
            raise ValueError("contour radii must be positive")
        if nodes < 1 or nodes & (nodes - 1):
            raise ValueError(f"node count must be a power of two, got {nodes}")
        self.__z_radius = float(z_radius)
        self.__w_radius = float(w_radius)
        self.__nodes = int(nodes)

    @property
    def z_radius(self):
        return self.__z_radius

    @property
    def w_radius(self):
        return self.__w_radius

    @property
    def nodes(self):
        return self.__nodes

    def with_nodes(self, nodes):
        return ContourSpec(self.__z_radius, self.__w_radius, nodes)

    def to_dict(self):
        return {"name": self.name, "z_radius": self.__z_radius, "w_radius": self.__w_radius,
                "nodes": self.__nodes}
