"""
The finite-N correlation kernel of the path ensemble.

K_N(x1, y1; x2, y2) = -chi_{x1 > x2} [z^{y1-y2}] prod_{j=x2+1}^{x1} (1 + q^{-j} z)
    + q^{N(2N+1)} (2 pi i)^{-2} oint oint A(w) R_N(w, z) B(z) w^{y2 - 2N} z^{-y1-1} dz dw

with A(w) = prod_{j=x2+1}^{2N} (1 + q^{-j} w), B(z) = prod_{j=1}^{x1} (1 + q^{-j} z)
and R_N the Christoffel-Darboux kernel of P_0..P_{N-1} with kappa_n taken per
unit residue. Three engines are provided: exact coefficient extraction over
the number type of q, trapezoid quadrature on two circles, and the same
extraction in mpmath for q = e^{c/2N}.
"""

import functools
import logging
import math

import mpmath
import numpy as np
import pandas as pd

from qvolume import arctic, equilibrium
from qvolume.config import EDGE_CONFIG, KERNEL_CONFIG
from qvolume.exceptions import ConvergenceError, DegenerateInputError
from qvolume.objects.lattice import ContourSpec, KernelQuery
from qvolume.qcore import as_exact, moments, op_family, recurrence_coefficients, weight_laurent

logger = logging.getLogger(__name__)


def _require(N, q):
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if q <= 1:
        raise DegenerateInputError(f"the kernel needs q > 1, got {q}")


def kappas(N, q, family_size=None):
    """kappa_0..kappa_{n-1} from kappa_0 = mu'_0 and kappa_n = gamma_n kappa_{n-1}."""
    if family_size is None:
        family_size = N
    _, gamma = recurrence_coefficients(family_size, N, q)
    values = [moments(N, q).moment(0)]
    for n in range(1, family_size):
        values.append(values[-1] * gamma[n])
    for n, value in enumerate(values):
        if value == 0:
            raise DegenerateInputError(f"kappa_{n} vanishes for N={N}, q={q}")
    return values


def y_range(x, N):
    """Heights y with (x, y + 1/2) reachable by some path."""
    return range(max(0, x - N), min(x, N) + N)


# =============================================
# Christoffel-Darboux kernel
# =============================================

def cd_kernel(w, z, N, q):
    """R_N(w, z) in two-term form; confluent form at w = z."""
    q = as_exact(q)
    _require(N, q)
    family = op_family(N, N, q)
    kappa = kappas(N, q)[N - 1]
    PN, PN1 = family[N], family[N - 1]
    if w == z:
        return (PN.derivative()(z) * PN1(z) - PN(z) * PN1.derivative()(z)) / kappa
    return (PN(z) * PN1(w) - PN(w) * PN1(z)) / (kappa * (z - w))


def cd_kernel_sum(w, z, N, q):
    """R_N(w, z) = sum_{n<N} P_n(w) P_n(z) / kappa_n."""
    q = as_exact(q)
    _require(N, q)
    family = op_family(N - 1, N, q)
    total = 0
    for P, kappa in zip(family, kappas(N, q)):
        total = total + P(w) * P(z) / kappa
    return total


def reproducing_residue(w, k, N, q):
    """(1/2 pi i) oint R_N(w, z) z^k W(z) dz by exact residues; equals w^k for k < N."""
    q = as_exact(q)
    _require(N, q)
    family = op_family(N - 1, N, q)
    table = moments(N, q)
    total = 0
    for P, kappa in zip(family, kappas(N, q)):
        scale = P(w) / kappa
        for i, a in enumerate(P.coefficients):
            total = total + scale * a * table.moment(i + k)
    return total


# =============================================
# coefficient extraction
# =============================================

def _linear_product(q, lo, hi, one=1):
    """Ascending coefficients of prod_{j=lo}^{hi} (1 + q^{-j} t)."""
    coeffs = [one]
    for j in range(lo, hi + 1):
        factor = q ** (-j)
        grown = list(coeffs) + [0 * one]
        for i, a in enumerate(coeffs):
            grown[i + 1] = grown[i + 1] + a * factor
        coeffs = grown
    return coeffs


def _product_coefficient(a, b, k):
    total = 0
    for i in range(max(0, k - len(b) + 1), min(k, len(a) - 1) + 1):
        total = total + a[i] * b[k - i]
    return total


def _kernel_by_extraction(query, N, q, family, kappa_list, one=1):
    x1, y1, x2, y2 = query.as_tuple()
    total = 0 * one
    if x1 > x2:
        single = _linear_product(q, x2 + 1, x1, one)
        if 0 <= y1 - y2 < len(single):
            total = total - single[y1 - y2]
    A = _linear_product(q, x2 + 1, 2 * N, one)
    B = _linear_product(q, 1, x1, one)
    double = 0 * one
    for P, kappa in zip(family, kappa_list):
        left = _product_coefficient(A, P.coefficients, 2 * N - y2 - 1)
        if left == 0:
            continue
        double = double + left * _product_coefficient(B, P.coefficients, y1) / kappa
    return total + q ** (N * (2 * N + 1)) * double


def correlation_kernel_exact(query, N, q):
    """K_N by exact residues in the number type of q (Fraction for rational q)."""
    q = as_exact(q)
    _require(N, q)
    query.validate(N)
    return _kernel_by_extraction(query, N, q, op_family(N - 1, N, q), kappas(N, q))


def determinant(matrix):
    """Determinant by elimination over the field of the entries."""
    a = [list(row) for row in matrix]
    n = len(a)
    result = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return 0 * result
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            result = -result
        result = result * a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] / a[col][col]
            for k in range(col, n):
                a[r][k] = a[r][k] - factor * a[col][k]
    return result


def correlation(points, N, q):
    """det[K_N(p_i; p_j)] for distinct lattice points p = (x, y), exactly."""
    q = as_exact(q)
    family = op_family(N - 1, N, q)
    kappa_list = kappas(N, q)
    matrix = [[_kernel_by_extraction(KernelQuery(xi, yi, xj, yj), N, q, family, kappa_list)
               for (xj, yj) in points] for (xi, yi) in points]
    return determinant(matrix)


def kernel_table(N, q):
    """One-point values K_N(x, y; x, y) over every reachable (x, y)."""
    q = as_exact(q)
    family = op_family(N - 1, N, q)
    kappa_list = kappas(N, q)
    rows = []
    for x in range(2 * N + 1):
        for y in y_range(x, N):
            value = _kernel_by_extraction(KernelQuery.diagonal(x, y), N, q, family, kappa_list)
            rows.append((x, y, x, y, float(value)))
    return pd.DataFrame(rows, columns=["x1", "y1", "x2", "y2", "K"])


# =============================================
# contour quadrature
# =============================================

def default_contours(N, q, nodes=None):
    """Circles of radius factor * q^N, the radius of the arc carrying the zeros."""
    if nodes is None:
        nodes = KERNEL_CONFIG['start_nodes']
    scale = float(as_exact(q)) ** N
    return ContourSpec(KERNEL_CONFIG['z_radius_factor'] * scale,
                       KERNEL_CONFIG['w_radius_factor'] * scale, nodes)


def contour_case(query):
    """Case 2 carries the single integral (x1 > x2); Case 1 is the double integral alone."""
    return 2 if query.x1 > query.x2 else 1


def _float_family(N, q):
    q = as_exact(q)
    family = op_family(N, N, q)
    PN = np.array([complex(a) for a in family[N].coefficients])[::-1]
    PN1 = np.array([complex(a) for a in family[N - 1].coefficients])[::-1]
    return PN, PN1, float(kappas(N, q)[N - 1])


def _quadrature(query, N, qf, log_q, family, contours):
    PN, PN1, kappa = family
    x1, y1, x2, y2 = query.as_tuple()
    M = contours.nodes
    nodes = np.exp(2j * math.pi * (np.arange(M) + 0.5) / M)
    z = (contours.z_radius * nodes)[None, :]
    w = (contours.w_radius * nodes)[:, None]
    A = np.ones_like(w)
    for j in range(x2 + 1, 2 * N + 1):
        A = A * (1.0 + qf ** (-j) * w)
    B = np.ones_like(z)
    for j in range(1, x1 + 1):
        B = B * (1.0 + qf ** (-j) * z)
    R = (np.polyval(PN, z) * np.polyval(PN1, w) - np.polyval(PN, w) * np.polyval(PN1, z)) / (kappa * (z - w))
    log_factor = N * (2 * N + 1) * log_q + (y2 - 2 * N + 1) * np.log(w) - y1 * np.log(z)
    double = np.mean(A * R * B * np.exp(log_factor))
    single = 0.0
    if x1 > x2:
        zs = contours.z_radius * nodes
        C = np.ones_like(zs)
        for j in range(x2 + 1, x1 + 1):
            C = C * (1.0 + qf ** (-j) * zs)
        single = np.mean(C * zs ** (-(y1 - y2)))
    return complex(double - single)


def correlation_kernel(query, N, q, contours=None):
    """K_N by trapezoid quadrature on two circles with node doubling."""
    q = as_exact(q)
    _require(N, q)
    query.validate(N)
    if contours is None:
        contours = default_contours(N, q)
    if contours.z_radius == contours.w_radius:
        raise ValueError("the z and w circles must differ, R_N is evaluated off the diagonal")
    qf = float(q)
    family = _float_family(N, q)
    tol = KERNEL_CONFIG['relative_tol']
    previous = _quadrature(query, N, qf, math.log(qf), family, contours)
    nodes = contours.nodes
    while True:
        nodes *= 2
        if nodes > KERNEL_CONFIG['node_cap']:
            raise ConvergenceError(f"kernel quadrature did not settle by {KERNEL_CONFIG['node_cap']} nodes",
                                   detail={"query": query.as_tuple(), "last": previous})
        current = _quadrature(query, N, qf, math.log(qf), family, contours.with_nodes(nodes))
        if abs(current - previous) <= tol * max(1.0, abs(current)):
            break
        previous = current
    if abs(current.imag) > KERNEL_CONFIG['imag_tol'] * max(1.0, abs(current)):
        raise ConvergenceError(f"kernel value {current} is not real", detail={"query": query.as_tuple()})
    logger.debug(f"K{query.as_tuple()} = {current.real} with {nodes} nodes")
    return current.real


# =============================================
# mpmath engine for q = e^{c/2N}
# =============================================

def working_digits(N, c):
    return EDGE_CONFIG['extra_digits'] + int(N * (c + 1.0))


@functools.lru_cache(maxsize=8)
def _mp_family(N, c, dps):
    with mpmath.workdps(dps):
        q = mpmath.exp(mpmath.mpf(c) / (2 * N))
        return q, op_family(N - 1, N, q), kappas(N, q)


def correlation_kernel_mp(query, N, c, dps=None):
    """K_N for q = e^{c/2N} by coefficient extraction in high precision."""
    if c <= 0:
        raise DegenerateInputError(f"c must be > 0, got {c}")
    query.validate(N)
    if dps is None:
        dps = working_digits(N, c)
    q, family, kappa_list = _mp_family(N, float(c), dps)
    with mpmath.workdps(dps):
        value = _kernel_by_extraction(query, N, q, family, kappa_list, mpmath.mpf(1))
        return float(value)


# =============================================
# avatar of R_N
# =============================================

def avatar_normalization(N, c, w, z, dps=None):
    """tilde R_N(w, z) e^{N(g(w) - g(z))} with tilde R_N(w, z) = sum_k G_k w^k.

    G_k = sum_j H_{k+j} c_j, H(t) = R_N(t, z)(t - z) and c_j the Laurent
    coefficients of the weight.
    """
    geo = equilibrium.arc_geometry(c)
    w, z = complex(w), complex(z)
    if abs(w) >= geo.radius:
        raise DegenerateInputError(f"w={w} lies outside the disk where tilde R_N is continued")
    if min(abs(z - geo.z_plus), abs(z - geo.z_minus)) < 0.1 * geo.radius:
        raise DegenerateInputError(f"z={z} is inside an endpoint disk")
    if dps is None:
        dps = working_digits(N, c)
    with mpmath.workdps(dps):
        q = mpmath.exp(mpmath.mpf(c) / (2 * N))
        family = op_family(N, N, q)
        kappa = kappas(N, q)[N - 1]
        zz, ww = mpmath.mpc(z), mpmath.mpc(w)
        PN, PN1 = family[N], family[N - 1]
        H = (PN * (PN1(zz) / kappa) - PN1 * (PN(zz) / kappa)).coefficients
        weights = weight_laurent(N, q).coefficients
        value = mpmath.mpc(0)
        for k in range(N + 1):
            G = mpmath.fsum(H[k + j] * weights[j] for j in range(len(weights)) if k + j < len(H))
            value += G * ww ** k
        log_value = complex(mpmath.log(value))
    g_w = complex(equilibrium.g(np.array([w]), geo)[0])
    g_z = complex(equilibrium.g(np.array([z]), geo)[0])
    return complex(np.exp(log_value + N * (g_w - g_z)))


def avatar_study(c, z, Ns=(16, 32, 64), d=0.1):
    """|value - 1| along w = z + d N^{-1/3}."""
    rows = []
    for N in Ns:
        w = complex(z) + d * N ** (-1.0 / 3.0)
        value = avatar_normalization(N, c, w, z)
        rows.append((N, w.real, w.imag, value.real, value.imag, abs(value - 1.0)))
    return pd.DataFrame(rows, columns=["N", "w_re", "w_im", "value_re", "value_im", "error"])


# =============================================
# edge scaling
# =============================================

def edge_contours(frame, N, tau1, tau2, sigma=None, sigma_prime=None):
    """Vertical lines Re z = s + N^{-1/3} k6 (sigma - tau1), Re w = s - N^{-1/3} k6 (sigma' + tau2).

    When tau1 > tau2 the offsets are scaled so that sigma + sigma' + tau2 - tau1 < 0.
    """
    if sigma is None:
        sigma = EDGE_CONFIG['sigma']
    if sigma_prime is None:
        sigma_prime = EDGE_CONFIG['sigma_prime']
    case = 2 if tau1 > tau2 else 1
    if case == 2 and sigma + sigma_prime + tau2 - tau1 >= 0:
        scale = 0.5 * (tau1 - tau2) / (sigma + sigma_prime)
        sigma, sigma_prime = sigma * scale, sigma_prime * scale
    k6 = frame.k["k6"]
    return {
        "case": case,
        "sigma": sigma,
        "sigma_prime": sigma_prime,
        "z_line": frame.s + N ** (-1.0 / 3.0) * k6 * (sigma - tau1),
        "w_line": frame.s - N ** (-1.0 / 3.0) * k6 * (sigma_prime + tau2),
    }


def _lattice_point(frame, alpha, beta, N):
    _, _, x, y = arctic.edge_point(frame, alpha, beta, N)
    x, y = int(round(x)), int(round(y))
    if not 0 <= x <= 2 * N or y not in y_range(x, N):
        raise DegenerateInputError(f"rounded point ({x}, {y}) leaves the hexagon for N={N}")
    return x, y


def edge_prefactor(frame, point1, point2, N):
    """Conjugation and scale factor of the rescaled kernel, times N^{1/3}."""
    k = frame.k
    (a1, b1), (a2, b2) = point1, point2

    def drift(a, b):
        return N ** (2.0 / 3.0) * k["k5"] * b + N ** (1.0 / 3.0) * (k["k3"] * a + k["k4"] * b ** 2)

    exponent = -drift(a1, b1) + drift(a2, b2) + (k["k1"] * b2 ** 3 - k["k2"] * a2 * b2) \
        - (k["k1"] * b1 ** 3 - k["k2"] * a1 * b1)
    return -frame.s * k["k6"] * N ** (1.0 / 3.0) * math.exp(exponent)


def edge_scaling_diagnostic(s, c, offsets=((0.0, 0.0, 0.0, 0.0),), Ns=None, inflection=False,
                            omega=None, delta=None):
    """N^{1/3} tilde K_N next to the extended Airy target at the arctic point of parameter s."""
    if Ns is None:
        Ns = EDGE_CONFIG['N_list']
    if omega is None:
        omega = EDGE_CONFIG['omega']
    if delta is None:
        delta = EDGE_CONFIG['delta']
    frame = arctic.edge_frame(s, c)
    rows = []
    for N in Ns:
        for a1, b1, a2, b2 in offsets:
            if inflection:
                shifted1 = arctic.inflection_beta(b1, N, omega, delta)
                shifted2 = arctic.inflection_beta(b2, N, omega, delta)
                r1, r2 = frame.r(a1, 0.0), frame.r(a2, 0.0)
            else:
                shifted1, shifted2 = b1, b2
                r1, r2 = frame.r(a1, b1), frame.r(a2, b2)
            tau1, tau2 = frame.tau(b1), frame.tau(b2)
            x1, y1 = _lattice_point(frame, a1, shifted1, N)
            x2, y2 = _lattice_point(frame, a2, shifted2, N)
            query = KernelQuery(x1, y1, x2, y2)
            value = correlation_kernel_mp(query, N, c)
            scaled = edge_prefactor(frame, (a1, shifted1), (a2, shifted2), N) * value
            target = arctic.extended_airy(tau1, r1, tau2, r2)
            contours = edge_contours(frame, N, tau1, tau2)
            rows.append({
                "N": N, "alpha1": a1, "beta1": b1, "alpha2": a2, "beta2": b2,
                "x1": x1, "y1": y1, "x2": x2, "y2": y2, "case": contours["case"],
                "K": value, "scaled": scaled, "target": target, "deviation": scaled - target,
            })
    table = pd.DataFrame(rows)
    first = table[table["N"] == min(Ns)]["deviation"].abs().iloc[0]
    last = table[table["N"] == max(Ns)]["deviation"].abs().iloc[0]
    table.attrs["improves"] = bool(last < first)
    if last >= first:
        logger.warning(f"edge deviation did not shrink from N={min(Ns)} to N={max(Ns)} (c={c}, s={s})")
    return table
