"""
Exact q-series arithmetic, moments of the hexagon weight and the monic
orthogonal polynomials P_n(z; q, N).

The weight is W(z) = prod_{j=1}^{2N} (1 + q^j / z) on a contour around the
origin. Every pairing below is the coefficient of 2*pi*i, i.e. the residue at
infinity read off the Laurent expansion, so exact inputs give exact outputs.

Four constructions of P_n are provided and must agree coefficientwise:
Hankel elimination on the moments, the closed-form determinant ratios, the
little q-Jacobi 2phi1 sum and the little q-Jacobi three-term recurrence.
"""

import functools
import logging
import math
from fractions import Fraction

import mpmath
import numpy as np

from qvolume.config import ROOT_CONFIG
from qvolume.exceptions import DegenerateInputError
from qvolume.objects.polynomial import ExactPoly, MomentTable, QJacobiParams

logger = logging.getLogger(__name__)


def as_exact(q):
    """Parse q into a Fraction when it is given exactly ("3/2", 2, Fraction)."""
    if isinstance(q, Fraction):
        return q
    if isinstance(q, bool):
        raise ValueError("q must be a number")
    if isinstance(q, int):
        return Fraction(q)
    if isinstance(q, str):
        return Fraction(q.strip())
    return q


def _require_model(N, q):
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if q <= 1:
        raise DegenerateInputError(f"the hexagon weight needs q > 1, got {q}")


# =============================================
# q-series
# =============================================

def q_pochhammer(a, q, k):
    """(a; q)_k = prod_{j=1}^{k} (1 - a q^{j-1}); the empty product is 1."""
    if k < 0:
        raise ValueError(f"q_pochhammer needs k >= 0, got {k}")
    result = a ** 0
    term = a
    for _ in range(k):
        result = result * (1 - term)
        term = term * q
    return result


def q_binomial(n, m, q):
    """Gaussian binomial [n choose m]_q; zero outside 0 <= m <= n."""
    if m < 0 or m > n:
        return 0
    if q == 1:
        return math.comb(n, m)
    m = min(m, n - m)
    num = 1
    den = 1
    for j in range(1, m + 1):
        num = num * (1 - q ** (n - m + j))
        den = den * (1 - q ** j)
    return num / den if not isinstance(num, int) else Fraction(num, den)


def weight_laurent(N, q):
    """Coefficients c_j of prod_{j=1}^{2N}(1 + q^j/z) = sum_j c_j z^{-j}."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    q = as_exact(q)
    coeffs = [q_binomial(2 * N, j, q) * q ** (j * (j + 1) // 2) for j in range(2 * N + 1)]
    return ExactPoly(coeffs, variable="1/z")


def weight_product(N, q):
    """The same expansion obtained by multiplying the 2N linear factors out."""
    q = as_exact(q)
    poly = ExactPoly([1], variable="1/z")
    for j in range(1, 2 * N + 1):
        poly = poly * ExactPoly([1, q ** j], variable="1/z")
    return poly


def moments(N, q):
    """mu'_k = q^{(k+1)(k+2)/2} [2N choose k+1]_q for k = 0..2N-1."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    q = as_exact(q)
    values = [q ** ((k + 1) * (k + 2) // 2) * q_binomial(2 * N, k + 1, q) for k in range(2 * N)]
    return MomentTable(N, q, values)


def pairing(left, right, table):
    """Residue pairing <left, right> = sum_{i,j} left_i right_j mu'_{i+j}."""
    total = 0
    for i, a in enumerate(left.coefficients):
        if a == 0:
            continue
        for j, b in enumerate(right.coefficients):
            if b == 0:
                continue
            total = total + a * b * table.moment(i + j)
    return total


def monomial(k):
    return ExactPoly([0] * k + [1])


# =============================================
# Hankel route
# =============================================

def _solve_exact(matrix, rhs):
    """Gaussian elimination over the field of the entries."""
    n = len(rhs)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise DegenerateInputError(f"Hankel matrix is singular at column {col}")
        a[col], a[pivot] = a[pivot], a[col]
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            factor = a[r][col] / a[col][col]
            for k in range(col, n + 1):
                a[r][k] = a[r][k] - factor * a[col][k]
    x = [0] * n
    for r in range(n - 1, -1, -1):
        acc = a[r][n]
        for k in range(r + 1, n):
            acc = acc - a[r][k] * x[k]
        x[r] = acc / a[r][r]
    return x


def hankel_matrix(n, table):
    return [[table.moment(i + j) for i in range(n)] for j in range(n)]


def op_via_hankel(n, N, q):
    """Monic P_n from sum_i a_i mu'_{i+j} = -mu'_{n+j}, j < n."""
    q = as_exact(q)
    _require_model(N, q)
    if n >= 2 * N:
        raise DegenerateInputError(f"P_n is only defined for n < 2N, got n={n}, N={N}")
    if n == 0:
        return ExactPoly([Fraction(1)])
    table = moments(N, q)
    rhs = [-table.moment(n + j) for j in range(n)]
    lower = _solve_exact(hankel_matrix(n, table), rhs)
    return ExactPoly(lower + [Fraction(1)])


def op_via_closed_form(n, N, q):
    """Coefficients from the product formula for the Hankel determinant ratios."""
    q = as_exact(q)
    _require_model(N, q)
    if n >= 2 * N:
        raise DegenerateInputError(f"P_n is only defined for n < 2N, got n={n}, N={N}")
    norm = (q_pochhammer(q ** (1 - 2 * N), q, n) * q_pochhammer(q, q, n)
            / (q_pochhammer(q ** (n + 1), q, n) * q_pochhammer(q ** (-n), q, n)))
    coeffs = []
    for k in range(n + 1):
        ratio = (q_pochhammer(q ** (n + 1), q, k) * q_pochhammer(q ** (-n), q, k)
                 / (q_pochhammer(q ** (1 - 2 * N), q, k) * q_pochhammer(q, q, k)))
        coeffs.append((-q ** (2 * N)) ** (n - k) * ratio * norm)
    return ExactPoly(coeffs)


# =============================================
# little q-Jacobi routes
# =============================================

def jacobi_coefficients(params):
    """A_k, C_k (k < params.n) of the little q-Jacobi three-term recurrence."""
    a, b, q = params.a, params.b, params.q
    ab = a * b
    A, C = [], []
    for k in range(params.n):
        den_a = (1 - ab * q ** (2 * k + 1)) * (1 - ab * q ** (2 * k + 2))
        if den_a == 0:
            raise DegenerateInputError(f"recurrence denominator vanishes for A at index {k}")
        A.append(q ** k * (1 - a * q ** (k + 1)) * (1 - ab * q ** (k + 1)) / den_a)
        if k == 0:
            C.append(0 * q)
            continue
        den_c = (1 - ab * q ** (2 * k)) * (1 - ab * q ** (2 * k + 1))
        if den_c == 0:
            raise DegenerateInputError(f"recurrence denominator vanishes for C at index {k}")
        C.append(a * q ** k * (1 - q ** k) * (1 - b * q ** k) / den_c)
    return A, C


def op_via_recurrence(n, params):
    """Monic little q-Jacobi J_n(x) built by x J_k = J_{k+1} + (A_k+C_k) J_k + A_{k-1} C_k J_{k-1}."""
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    A, C = jacobi_coefficients(QJacobiParams(params.a, params.b, params.q, max(n, 1)))
    x = ExactPoly([0, 1], variable="x")
    previous = ExactPoly([0], variable="x")
    current = ExactPoly([1], variable="x")
    for k in range(n):
        following = (x - (A[k] + C[k])) * current
        if k > 0:
            following = following - previous * (A[k - 1] * C[k])
        previous, current = current, following
    return current


def jacobi_to_op(J, N, q):
    """P_n(z) = (-q^{2N+1})^n J_n(-z / q^{2N+1})."""
    n = J.degree
    scale = -q ** (2 * N + 1)
    return ExactPoly([a * scale ** (n - k) for k, a in enumerate(J.coefficients)])


def op_via_qjacobi(n, N, q):
    """Monic little q-Jacobi J_n with a = q^{-2N}, b = q^{2N} from its 2phi1 sum, then rescaled."""
    q = as_exact(q)
    _require_model(N, q)
    if n >= 2 * N:
        raise DegenerateInputError(f"P_n is only defined for n < 2N, got n={n}, N={N}")
    a, b = q ** (-2 * N), q ** (2 * N)
    terms = []
    for k in range(n + 1):
        terms.append(q_pochhammer(q ** (-n), q, k) * q_pochhammer(a * b * q ** (n + 1), q, k)
                     / (q_pochhammer(a * q, q, k) * q_pochhammer(q, q, k)) * q ** k)
    normal = ((-1) ** n * q ** (n * (n - 1) // 2) * q_pochhammer(a * q, q, n)
              / q_pochhammer(a * b * q ** (n + 1), q, n))
    J = ExactPoly([t * normal for t in terms], variable="x")
    return jacobi_to_op(J, N, q)


def recurrence_coefficients(n_max, N, q):
    """beta_k, gamma_k with P_{k+1} = (z - beta_k) P_k - gamma_k P_{k-1}, k < n_max.

    Works for Fraction, float and mpmath numbers alike.
    """
    params = QJacobiParams.for_model(N, q, max(n_max, 1))
    A, C = jacobi_coefficients(params)
    lam = -(q ** (-(2 * N + 1)))
    beta = [(A[k] + C[k]) / lam for k in range(n_max)]
    gamma = [0 * q] + [A[k - 1] * C[k] / lam ** 2 for k in range(1, n_max)]
    return beta, gamma


def op_family(n_max, N, q):
    """[P_0, ..., P_{n_max}] by the recurrence, in the number type of q."""
    q = as_exact(q)
    beta, gamma = recurrence_coefficients(n_max, N, q)
    z = ExactPoly([0, 1])
    family = [ExactPoly([1 + 0 * q])]
    previous = ExactPoly([0 * q])
    for k in range(n_max):
        following = (z - beta[k]) * family[-1] - previous * gamma[k]
        previous = family[-1]
        family.append(following)
    return family


def op_via_model_recurrence(n, N, q):
    q = as_exact(q)
    _require_model(N, q)
    if n >= 2 * N:
        raise DegenerateInputError(f"P_n is only defined for n < 2N, got n={n}, N={N}")
    return jacobi_to_op(op_via_recurrence(n, QJacobiParams.for_model(N, q, n)), N, q)


def kappa(n, N, q):
    """kappa_n / (2 pi i) = <P_n, P_n>; never zero for n < 2N."""
    q = as_exact(q)
    P = op_via_hankel(n, N, q)
    value = pairing(P, P, moments(N, q))
    if value == 0:
        raise DegenerateInputError(f"kappa_{n} vanishes for N={N}, q={q}: orthogonality is broken")
    return value


def orthogonality_residues(n, N, q):
    """[<z^k, P_n> for k < n]; all exactly zero for a valid family."""
    q = as_exact(q)
    P = op_via_hankel(n, N, q)
    table = moments(N, q)
    return [pairing(monomial(k), P, table) for k in range(n)]


# =============================================
# high precision layer for q = e^{c/2N}
# =============================================

def evaluation_digits(N, c):
    """Decimal digits that keep P_N accurate on and inside |z| = e^{c/2}."""
    return ROOT_CONFIG['extra_digits'] + int(N * (c + 1.0))


@functools.lru_cache(maxsize=16)
def _mp_coefficients(N, c, dps):
    # one context per key; zeros_batch evaluates from several threads
    ctx = mpmath.MPContext()
    ctx.dps = dps
    q = ctx.exp(ctx.mpf(c) / (2 * N))
    return ctx, op_via_closed_form(N, N, q).coefficients


def op_mp_coefficients(N, c, dps=None):
    """(context, ascending coefficients of P_N) for q = e^{c/2N} from the closed form."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if c <= 0:
        raise DegenerateInputError(f"the scaling q = e^(c/2N) needs c > 0, got {c}")
    if dps is None:
        dps = evaluation_digits(N, c)
    return _mp_coefficients(N, float(c), dps)


def _horner(coefficients, z):
    p = 0
    dp = 0
    for a in reversed(coefficients):
        dp = dp * z + p
        p = p * z + a
    return p, dp


def op_mp_evaluate(z, N, c, dps=None):
    """[(P_N(z), P_N'(z))] as context numbers for every z in a flat iterable."""
    ctx, coefficients = op_mp_coefficients(N, c, dps)
    values = []
    for point in np.ravel(np.asarray(z, dtype=complex)):
        values.append(_horner(coefficients, ctx.mpc(point.real, point.imag)))
    return ctx, values


def op_newton_ratio(z, N, c, dps=None):
    """P_N / P_N' at z (any shape), NaN where P_N' vanishes."""
    z = np.asarray(z, dtype=complex)
    ctx, values = op_mp_evaluate(z, N, c, dps)
    ratio = [complex(p / dp) if dp != 0 else complex(np.nan, np.nan) for p, dp in values]
    return np.array(ratio, dtype=complex).reshape(z.shape)


def op_log_value(z, N, c, dps=None):
    """Complex log P_N(z) (imaginary part modulo 2 pi)."""
    z = np.asarray(z, dtype=complex)
    ctx, values = op_mp_evaluate(z, N, c, dps)
    logs = [complex(ctx.log(p)) if p != 0 else complex(-np.inf, 0.0) for p, _ in values]
    return np.array(logs, dtype=complex).reshape(z.shape)


def to_json_table(N, q, n_max=None):
    """Moments and P_0..P_{n_max} as a JSON-ready dict of exact strings."""
    q = as_exact(q)
    if n_max is None:
        n_max = min(2 * N - 1, 6)
    table = moments(N, q)
    return {
        "moments": table.to_dict(),
        "polynomials": [op_via_hankel(n, N, q).to_dict() for n in range(n_max + 1)],
        "kappa": [str(kappa(n, N, q)) for n in range(n_max + 1)],
    }
