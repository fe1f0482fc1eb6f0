import math
from fractions import Fraction

from qvolume.objects.base import Base


def exact_string(value):
    """Render a coefficient so that exact values survive a JSON round trip."""
    if isinstance(value, Fraction):
        return {"num": str(value.numerator), "den": str(value.denominator)}
    if isinstance(value, int):
        return {"num": str(value), "den": "1"}
    if isinstance(value, complex):
        return {"re": repr(value.real), "im": repr(value.imag)}
    return {"value": str(value)}


class ExactPoly(Base):
    """Dense polynomial, ascending coefficients of any number type."""

    def __init__(self, coefficients, variable="z"):
        super(ExactPoly, self).__init__("exact_poly")
        coeffs = list(coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [0]
        self.__coefficients = tuple(coeffs)
        self.__variable = variable

    @property
    def coefficients(self):
        return self.__coefficients

    @property
    def variable(self):
        return self.__variable

    @property
    def degree(self):
        if len(self.__coefficients) == 1 and self.__coefficients[0] == 0:
            return -1
        return len(self.__coefficients) - 1

    @property
    def leading(self):
        return self.__coefficients[-1]

    def is_monic(self):
        return self.leading == 1

    def coefficient(self, k):
        if 0 <= k < len(self.__coefficients):
            return self.__coefficients[k]
        return 0

    def __call__(self, z):
        result = 0
        for a in reversed(self.__coefficients):
            result = result * z + a
        return result

    def derivative(self):
        return ExactPoly([k * a for k, a in enumerate(self.__coefficients)][1:] or [0],
                         self.__variable)

    def shift(self, k):
        """Multiply by variable^k."""
        return ExactPoly([0] * k + list(self.__coefficients), self.__variable)

    def map_coefficients(self, func):
        return ExactPoly([func(k, a) for k, a in enumerate(self.__coefficients)], self.__variable)

    def __add__(self, other):
        if not isinstance(other, ExactPoly):
            other = ExactPoly([other], self.__variable)
        n = max(len(self.__coefficients), len(other.coefficients))
        return ExactPoly([self.coefficient(k) + other.coefficient(k) for k in range(n)],
                         self.__variable)

    __radd__ = __add__

    def __neg__(self):
        return ExactPoly([-a for a in self.__coefficients], self.__variable)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, ExactPoly):
            return ExactPoly([a * other for a in self.__coefficients], self.__variable)
        out = [0] * (len(self.__coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.__coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return ExactPoly(out, self.__variable)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ExactPoly):
            return NotImplemented
        return self.__coefficients == other.coefficients

    def __hash__(self):
        return hash(self.__coefficients)

    def __repr__(self):
        terms = []
        for k, a in enumerate(self.__coefficients):
            if a == 0 and self.degree >= 0:
                continue
            terms.append(f"({a})*{self.__variable}^{k}")
        return "ExactPoly[" + " + ".join(terms or ["0"]) + "]"

    def to_dict(self):
        return {
            "name": self.name,
            "variable": self.__variable,
            "degree": self.degree,
            "coefficients": [exact_string(a) for a in self.__coefficients],
        }


class MomentTable(Base):
    """Moments mu'_k (coefficient of 2 pi i) of the orthogonality weight."""

    def __init__(self, N, q, values):
        super(MomentTable, self).__init__("moment_table")
        self.__N = N
        self.__q = q
        self.__values = tuple(values)

    @property
    def N(self):
        return self.__N

    @property
    def q(self):
        return self.__q

    @property
    def values(self):
        return self.__values

    def moment(self, k):
        if 0 <= k < len(self.__values):
            return self.__values[k]
        return 0

    def to_dict(self):
        return {
            "name": self.name,
            "N": self.__N,
            "q": exact_string(self.__q),
            "moments": [exact_string(v) for v in self.__values],
        }


class QJacobiParams(Base):
    """Parameters a, b, q of the little q-Jacobi family up to index n."""

    def __init__(self, a, b, q, n):
        super(QJacobiParams, self).__init__("qjacobi_params")
        if q == 1:
            raise ValueError("little q-Jacobi recurrence needs q != 1")
        self.__a = a
        self.__b = b
        self.__q = q
        self.__n = n

    @classmethod
    def for_model(cls, N, q, n):
        """a = q^{-2N}, b = q^{2N}: the values tied to the hexagon weight."""
        return cls(q ** (-2 * N), q ** (2 * N), q, n)

    @property
    def a(self):
        return self.__a

    @property
    def b(self):
        return self.__b

    @property
    def q(self):
        return self.__q

    @property
    def n(self):
        return self.__n

    def to_dict(self):
        return {"name": self.name, "a": exact_string(self.__a), "b": exact_string(self.__b),
                "q": exact_string(self.__q), "n": self.__n}


class ModelParams(Base):
    """Finite model (N, q) or scaling model (N, c) with q = e^{c/2N}."""

    def __init__(self, N, q=None, c=None):
        super(ModelParams, self).__init__("model_params")
        if (q is None) == (c is None):
            raise ValueError("exactly one of q and c must be given")
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        self.__N = int(N)
        if c is not None:
            self.__c = float(c)
            self.__q = math.exp(self.__c / (2 * self.__N))
            self.__exact = False
        else:
            self.__q = q
            self.__c = 2 * self.__N * math.log(float(q))
            self.__exact = isinstance(q, (Fraction, int))

    @property
    def N(self):
        return self.__N

    @property
    def q(self):
        return self.__q

    @property
    def c(self):
        return self.__c

    @property
    def is_exact(self):
        return self.__exact

    def to_dict(self):
        return {"name": self.name, "N": self.__N, "q": exact_string(self.__q), "c": self.__c}
