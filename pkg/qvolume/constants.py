import math


class REFERENCE:
    VALUES = {
        "C_STAR": 3.32577,
        "AIRY_PRIME_ZERO_SQ": 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(1.0 / 3.0) ** 2),   # Ai'(0)^2
        "ELLIPSE": (4.0, -4.0, 4.0, 3.0),            # 4x^2 - 4xy + 4y^2 = 3
        "THETA_ZERO": 2.0 * math.pi / 3.0,
    }

    # number of boxed plane partitions in an N x N x N box
    STATE_COUNTS = {1: 2, 2: 20, 3: 980, 4: 232848}

    def __getattr__(self, key):
        try:
            return self.VALUES[key]
        except KeyError:
            raise AttributeError(f"REFERENCE has no value '{key}'")


class EXIT:
    OK = 0
    UNEXPECTED = 1
    USAGE = 2
    NUMERICAL = 3
    INTERRUPTED = 130


# commands that reproduce a figure, used by --describe
FIGURES = {
    "moments": "moment table and orthogonal polynomial coefficients",
    "op-check": "orthogonality and agreement of the polynomial constructions",
    "zeros": "zeros of P_N accumulating on the arc",
    "density": "equilibrium density profiles for several c",
    "arctic": "arctic curve over the hexagon, optionally with the small-c ellipse",
    "cstar": "critical c where the first inflection point appears",
    "levelsets": "level lines Re(Phi - Phi(s)) = 0 at an arctic point",
    "kernel": "finite-N correlation kernel tables",
    "edge": "rescaled kernel against the extended Airy kernel",
    "sample": "Glauber sample of the tiling and tile statistics",
    "render": "SVG rendering of a stored plane partition",
}
