import math

import numpy as np

from qvolume.objects.base import Base


class ArcGeometry(Base):
    """The arc gamma_0 = {e^{c/2} e^{i theta}: |theta| < theta_c} and its endpoints."""

    def __init__(self, c, theta):
        super(ArcGeometry, self).__init__("arc_geometry")
        self.__c = float(c)
        self.__theta = float(theta)
        self.__radius = math.exp(self.__c / 2.0)
        self.__z_plus = self.__radius * complex(math.cos(self.__theta), math.sin(self.__theta))

    @property
    def c(self):
        return self.__c

    @property
    def theta(self):
        return self.__theta

    @property
    def radius(self):
        return self.__radius

    @property
    def z_plus(self):
        return self.__z_plus

    @property
    def z_minus(self):
        return self.__z_plus.conjugate()

    def on_arc(self, theta):
        return abs(theta) < self.__theta

    def distance_to_arc(self, z):
        """Euclidean distance from z to the closed arc."""
        z = np.asarray(z, dtype=complex)
        rho = np.abs(z)
        ang = np.angle(z)
        inside = np.abs(ang) <= self.__theta
        radial = np.abs(rho - self.__radius)
        to_ends = np.minimum(np.abs(z - self.z_plus), np.abs(z - self.z_minus))
        return np.where(inside, radial, to_ends)

    def to_dict(self):
        return {
            "name": self.name,
            "c": self.__c,
            "theta_c": self.__theta,
            "radius": self.__radius,
            "z_plus": [self.__z_plus.real, self.__z_plus.imag],
            "z_minus": [self.z_minus.real, self.z_minus.imag],
        }


class HexPoint(Base):
    """Rescaled hexagon coordinates (xi, eta)."""

    def __init__(self, xi, eta):
        super(HexPoint, self).__init__("hex_point")
        self.__xi = float(xi)
        self.__eta = float(eta)

    @property
    def xi(self):
        return self.__xi

    @property
    def eta(self):
        return self.__eta

    def in_hexagon(self, strict=False):
        xi, eta = self.__xi, self.__eta
        if strict:
            return abs(xi) < 1 and abs(eta) < 1 and abs(eta - xi) < 1
        return abs(xi) <= 1 and abs(eta) <= 1 and abs(eta - xi) <= 1

    def as_tuple(self):
        return (self.__xi, self.__eta)

    def to_dict(self):
        return {"name": self.name, "xi": self.__xi, "eta": self.__eta}


class ZeroSet(Base):
    """Zeros of P_N(z; e^{c/2N}, N) and their distances to the arc."""

    def __init__(self, N, c, zeros, distances, residuals=None, method="aberth"):
        super(ZeroSet, self).__init__("zero_set")
        self.__N = N
        self.__c = c
        self.__zeros = np.asarray(zeros, dtype=complex)
        self.__distances = np.asarray(distances, dtype=float)
        self.__residuals = None if residuals is None else np.asarray(residuals, dtype=float)
        self.__method = method

    @property
    def N(self):
        return self.__N

    @property
    def c(self):
        return self.__c

    @property
    def zeros(self):
        return self.__zeros

    @property
    def distances(self):
        return self.__distances

    @property
    def residuals(self):
        return self.__residuals

    @property
    def method(self):
        return self.__method

    @property
    def max_distance(self):
        return float(self.__distances.max()) if self.__distances.size else 0.0

    def to_dict(self):
        return {"name": self.name, "N": self.__N, "c": self.__c, "method": self.__method,
                "max_distance": self.max_distance}


class SaddleData(Base):
    """Quartic p(s; xi, eta), its roots and the upper half-plane saddle."""

    TWO_REAL = "two-real+conjugate-pair"
    FOUR_REAL = "four-real"
    # no real root at all; not expected inside the hexagon
    NO_REAL = "two-conjugate-pairs"

    def __init__(self, xi, eta, c, coefficients, roots, classification, s_plus=None):
        super(SaddleData, self).__init__("saddle_data")
        self.__xi = xi
        self.__eta = eta
        self.__c = c
        self.__coefficients = np.asarray(coefficients)
        self.__roots = np.asarray(roots, dtype=complex)
        self.__classification = classification
        self.__s_plus = s_plus

    @property
    def xi(self):
        return self.__xi

    @property
    def eta(self):
        return self.__eta

    @property
    def c(self):
        return self.__c

    @property
    def coefficients(self):
        """Descending coefficients as returned by numpy.polydiv."""
        return self.__coefficients

    @property
    def roots(self):
        return self.__roots

    @property
    def classification(self):
        return self.__classification

    @property
    def s_plus(self):
        return self.__s_plus

    def to_dict(self):
        s = self.__s_plus
        return {
            "name": self.name,
            "xi": self.__xi,
            "eta": self.__eta,
            "c": self.__c,
            "classification": self.__classification,
            "roots": [[r.real, r.imag] for r in self.__roots],
            "s_plus": None if s is None else [s.real, s.imag],
        }


class EdgeFrame(Base):
    """Phase derivatives, normal frame and constants k_1..k_6 at an arctic point."""

    def __init__(self, s, c, xi, eta, phi, normal, tangent, k):
        super(EdgeFrame, self).__init__("edge_frame")
        self.__s = s
        self.__c = c
        self.__xi = xi
        self.__eta = eta
        self.__phi = dict(phi)
        self.__normal = tuple(normal)
        self.__tangent = tuple(tangent)
        self.__k = dict(k)

    @property
    def s(self):
        return self.__s

    @property
    def c(self):
        return self.__c

    @property
    def xi(self):
        return self.__xi

    @property
    def eta(self):
        return self.__eta

    @property
    def phi(self):
        """Mapping 'ijk' -> d^i_z d^j_xi d^k_eta Phi at (s, xi, eta)."""
        return self.__phi

    @property
    def normal(self):
        return self.__normal

    @property
    def tangent(self):
        return self.__tangent

    @property
    def k(self):
        return self.__k

    @property
    def determinant(self):
        p = self.__phi
        return p['201'] * p['110'] - p['210'] * p['101']

    def tau(self, beta):
        p300 = self.__phi['300']
        return beta * np.cbrt(p300 / 2.0) * self.determinant / p300

    def r(self, alpha, beta):
        p = self.__phi
        norm2 = self.__normal[0] ** 2 + self.__normal[1] ** 2
        beta_coefficient = 0.5 * p['120'] * p['101'] ** 2 - 0.5 * self.determinant ** 2 / p['300']
        return -self.__k['k6'] * (alpha * norm2 + beta ** 2 * beta_coefficient)

    def beta_squared_coefficient(self):
        p = self.__phi
        return 0.5 * p['120'] * p['101'] ** 2 - 0.5 * self.determinant ** 2 / p['300']

    def to_dict(self):
        return {
            "name": self.name,
            "s": self.__s,
            "c": self.__c,
            "xi": self.__xi,
            "eta": self.__eta,
            "phi": {key: float(v) for key, v in sorted(self.__phi.items())},
            "normal": list(self.__normal),
            "tangent": list(self.__tangent),
            "k": {key: float(v) for key, v in sorted(self.__k.items())},
        }


class BranchedFn(Base):
    """A multivalued function with its declared cut and boundary-value rule."""

    def __init__(self, name, rule, cut, side_rule=None):
        super(BranchedFn, self).__init__(name)
        self.__rule = rule
        self.__cut = cut
        self.__side_rule = side_rule

    @property
    def cut(self):
        return self.__cut

    def __call__(self, z, side=None):
        if side is None:
            return self.__rule(z)
        if self.__side_rule is None:
            raise ValueError(f"{self.name} has no boundary-value rule")
        return self.__side_rule(z, side)

    def continuity_defect(self, points, step=1e-7):
        """Largest change over small steps in four directions at off-cut points."""
        points = np.asarray(points, dtype=complex)
        base = self.__rule(points)
        worst = 0.0
        for direction in (1, -1, 1j, -1j):
            moved = self.__rule(points + step * direction * np.maximum(np.abs(points), 1.0))
            worst = max(worst, float(np.max(np.abs(moved - base))))
        return worst

    def to_dict(self):
        return {"name": self.name, "cut": self.__cut}
