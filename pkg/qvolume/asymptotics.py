"""
Finite N against the c-scaling limit q = e^{c/2N}: the weight approximation,
the zeros of P_N and the strong asymptotics of P_N off the arc.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from qvolume import equilibrium
from qvolume.config import ROOT_CONFIG
from qvolume.exceptions import BranchCutError, ConvergenceError, DegenerateInputError
from qvolume.objects.geometry import ZeroSet
from qvolume.qcore import op_log_value, op_mp_coefficients, op_newton_ratio

logger = logging.getLogger(__name__)


def _require_scaling(N, c):
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if c <= 0:
        raise DegenerateInputError(f"the scaling q = e^(c/2N) needs c > 0, got {c}")


def circle_grid(c, m=64, span=0.9):
    """m points of |z| = e^{c/2} with |arg z| <= span * pi."""
    theta = np.linspace(-span * math.pi, span * math.pi, m)
    return math.exp(c / 2.0) * np.exp(1j * theta)


# =============================================
# weight approximation
# =============================================

def weight_log_product(z, N, c):
    """sum_{j=1}^{2N} Log(1 + q^j / z) for q = e^{c/2N}."""
    z = np.asarray(z, dtype=complex)
    q_pow = np.exp(c * np.arange(1, 2 * N + 1) / (2.0 * N))
    return np.sum(np.log1p(q_pow / z[..., None]), axis=-1)


def weight_approx_error(N, c, grid=None):
    """max |e^{N V + nu} prod_j (1 + q^j / z) - 1| over the grid."""
    _require_scaling(N, c)
    geo = equilibrium.arc_geometry(c)
    if grid is None:
        grid = circle_grid(c)
    grid = np.asarray(grid, dtype=complex)
    if np.any(np.abs(grid + geo.radius) <= 1e-12 * geo.radius):
        raise BranchCutError("the weight approximation is not evaluated at -e^{c/2}")
    total = N * equilibrium.V(grid, geo) + equilibrium.nu(grid, geo) + weight_log_product(grid, N, c)
    return float(np.max(np.abs(np.expm1(total))))


def convergence_table(errors):
    """DataFrame of (N, error, ratio to the previous N) from a {N: error} mapping."""
    Ns = sorted(errors)
    values = [errors[n] for n in Ns]
    ratios = [np.nan] + [b / a if a else np.nan for a, b in zip(values[:-1], values[1:])]
    return pd.DataFrame({"N": Ns, "error": values, "ratio": ratios})


def weight_approx_study(c, Ns=(25, 50, 100), grid=None):
    return convergence_table({N: weight_approx_error(N, c, grid) for N in Ns})


# =============================================
# zeros
# =============================================

def aberth(N, c, max_iterations=None, tol=None):
    """Simultaneous Aberth-Ehrlich iteration started on the circle |z| = e^{c/2}.

    Positions are kept in double precision; P_N / P_N' comes from the high
    precision evaluator and is only recomputed for roots still moving.
    Returns (roots, residuals, converged) with residual |P_N / P_N'| / e^{c/2}.
    """
    if max_iterations is None:
        max_iterations = ROOT_CONFIG['max_iterations']
    if tol is None:
        tol = ROOT_CONFIG['step_tol']
    r = math.exp(c / 2.0)
    k = np.arange(N)
    x = r * np.exp(1j * (2.0 * math.pi * k + ROOT_CONFIG['start_offset']) / N)
    converged = np.zeros(N, dtype=bool)
    for iteration in range(max_iterations):
        active = np.flatnonzero(~converged)
        ratio = op_newton_ratio(x[active], N, c)
        diff = x[active, None] - x[None, :]
        diff[np.arange(active.size), active] = 1.0
        repulsion = np.sum(1.0 / diff, axis=1) - 1.0
        with np.errstate(divide='ignore', invalid='ignore'):
            delta = ratio / (1.0 - ratio * repulsion)
        finite = np.isfinite(delta)
        step = np.where(finite, delta, 0.0)
        x[active] = x[active] - step
        converged[active] = finite & (np.abs(step) <= tol * r)
        if converged.all():
            logger.debug(f"aberth N={N} c={c} converged after {iteration + 1} sweeps")
            break
    residuals = np.abs(op_newton_ratio(x, N, c)) / r
    return x, residuals, converged


def _polyroots(N, c, start):
    """mpmath Durand-Kerner from the Aberth positions."""
    r = math.exp(c / 2.0)
    ctx, coefficients = op_mp_coefficients(N, c)
    try:
        found = ctx.polyroots(list(reversed(coefficients)), maxsteps=ROOT_CONFIG['polyroots_steps'],
                              roots_init=[ctx.mpc(z.real, z.imag) for z in start])
    except ctx.NoConvergence as err:
        raise ConvergenceError(f"polyroots did not converge for N={N}, c={c}",
                               detail={"error": str(err)}) from err
    roots = np.array([complex(z) for z in found], dtype=complex)
    return roots, np.abs(op_newton_ratio(roots, N, c)) / r


def zeros(N, c):
    """All N zeros of P_N(z; e^{c/2N}, N) with their distances to the arc."""
    _require_scaling(N, c)
    if N > ROOT_CONFIG['max_degree']:
        raise ValueError(f"degree {N} exceeds the root-finding cap {ROOT_CONFIG['max_degree']}")
    geo = equilibrium.arc_geometry(c)
    tol = ROOT_CONFIG['residual_tol']
    roots, residuals, converged = aberth(N, c)
    method = "aberth"
    bad = np.flatnonzero(~(residuals < tol))
    if not converged.all():
        logger.debug(f"aberth stopped at the iteration cap for N={N}, c={c}")
    if bad.size:
        logger.warning(f"aberth left {bad.size} roots unconverged for N={N}, c={c}; trying polyroots")
        roots, residuals = _polyroots(N, c, roots)
        method = "polyroots"
        bad = np.flatnonzero(~(residuals < tol))
        if bad.size:
            raise ConvergenceError(f"zeros of P_{N} did not converge for c={c}",
                                   detail={"unconverged": bad.tolist()})
    order = np.lexsort((roots.imag, np.angle(roots)))
    roots = roots[order]
    return ZeroSet(N, c, roots, geo.distance_to_arc(roots), residuals[order], method=method)


def zeros_batch(jobs, threads=None):
    """zeros() for a list of (N, c) pairs; the pairs run in parallel."""
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda job: zeros(*job), jobs))


def zeros_frame(zero_set):
    z = zero_set.zeros
    return pd.DataFrame({
        "N": zero_set.N,
        "c": zero_set.c,
        "zero_re": z.real,
        "zero_im": z.imag,
        "dist": zero_set.distances,
    })


def conjugate_defect(zero_set):
    """Largest distance from a conjugated zero to the zero set."""
    z = zero_set.zeros
    return float(np.max(np.min(np.abs(z.conj()[:, None] - z[None, :]), axis=1)))


def annulus_check(zero_set, inner=0.5, outer=1.5):
    rho = np.abs(zero_set.zeros) / math.exp(zero_set.c / 2.0)
    return bool(np.all((rho > inner) & (rho < outer)))


def real_interval_margin(zero_set):
    """Distance from the zeros to the real segment [-e^c, -1]."""
    z = zero_set.zeros
    x = np.clip(z.real, -math.exp(zero_set.c), -1.0)
    return float(np.min(np.abs(z - x)))


# =============================================
# strong asymptotics off the arc
# =============================================

def default_base_points(c):
    """Three base points off the arc, inside and outside the circle."""
    r = math.exp(c / 2.0)
    return [2.0 * r, 0.4 * r * np.exp(0.2j * math.pi), 1.8 * r * np.exp(2.5j)]


def leading_term(z, geo):
    """log of (1/2)(varsigma(inf)/varsigma(z))(a + 1/a), and |a + 1/a|."""
    z = complex(z)
    a = complex(equilibrium.a_fun(z, geo))
    factor = a + 1.0 / a
    if abs(factor) <= 0.1:
        raise DegenerateInputError(f"a + 1/a nearly vanishes at z={z}")
    log_ratio = np.log(equilibrium.szego_at_infinity(geo)) - equilibrium.szego_log(z, geo)
    return complex(np.log(0.5 * factor) + log_ratio), abs(factor)


def _check_base_point(z, geo):
    if min(abs(z - geo.z_plus), abs(z - geo.z_minus)) < 0.1 * geo.radius:
        raise DegenerateInputError(f"z={z} is within 0.1 e^(c/2) of an arc endpoint")
    if equilibrium._on_gamma(np.array([z]), geo)[0]:
        raise BranchCutError(f"z={z} lies on the cut of g")


def plancherel_rotach(z, N, c, geo=None, leading=None):
    """Exact log P_N(z) against N g(z) + log of the leading factor.

    Values are returned as complex logarithms; the relative error is
    |P_N / asymptotic - 1|.
    """
    _require_scaling(N, c)
    if geo is None:
        geo = equilibrium.arc_geometry(c)
    z = complex(z)
    _check_base_point(z, geo)
    if leading is None:
        leading = (complex(equilibrium.g(np.array([z]), geo)[0]),) + leading_term(z, geo)
    g_z, log_factor, size = leading
    exact = complex(op_log_value(np.array([z]), N, c)[0])
    asymptotic = N * g_z + log_factor
    error = abs(np.expm1(exact - asymptotic))
    return {"z": z, "N": N, "c": c, "exact_log": exact, "asymptotic_log": asymptotic,
            "relative_error": float(error), "leading_modulus": size}


def plancherel_rotach_study(z, c, Ns=(20, 40, 80)):
    """Relative errors at one base point for a ladder of N."""
    geo = equilibrium.arc_geometry(c)
    z = complex(z)
    _check_base_point(z, geo)
    leading = (complex(equilibrium.g(np.array([z]), geo)[0]),) + leading_term(z, geo)
    rows = [plancherel_rotach(z, N, c, geo, leading) for N in Ns]
    frame = convergence_table({row["N"]: row["relative_error"] for row in rows})
    frame.insert(0, "z_im", z.imag)
    frame.insert(0, "z_re", z.real)
    return frame
