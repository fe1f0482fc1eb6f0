"""
Saddle points of the phase Phi_c(z; xi, eta), the frozen boundary and the
local edge constants.

Phi_c(z) = g(z) + (2/c)(Li2(-z e^{-c(1+xi)/2}) - Li2(-z)) - (1+eta) Log z + l/2.
Below E always stands for e^{c(1+xi)/2}. Derivatives are labelled 'ijk' for
d^i_z d^j_xi d^k_eta Phi, evaluated at a real point s of the arctic curve.
"""

import logging
import math

import numpy as np
import pandas as pd
from scipy import integrate, optimize, special

from qvolume import equilibrium
from qvolume.config import ARCTIC_CONFIG
from qvolume.constants import REFERENCE
from qvolume.exceptions import BranchCutError, ConvergenceError, DegenerateInputError
from qvolume.objects.geometry import EdgeFrame, HexPoint, SaddleData

logger = logging.getLogger(__name__)

HEXAGON_VERTICES = [(1.0, 1.0), (1.0, 0.0), (0.0, -1.0), (-1.0, -1.0), (-1.0, 0.0), (0.0, 1.0)]


def _geometry(c, geo=None):
    if geo is None:
        geo = equilibrium.arc_geometry(c)
    return geo


# =============================================
# phase
# =============================================

def phase(z, xi, eta, c, geo=None, lagrange=None):
    """Phi_c(z; xi, eta); z and xi broadcast against each other."""
    geo = _geometry(c, geo)
    z = np.asarray(z, dtype=complex)
    if np.any((np.abs(z.imag) <= 1e-14 * np.maximum(np.abs(z), 1.0)) & (z.real <= 0)):
        raise BranchCutError("the phase is not evaluated on (-inf, 0]")
    if lagrange is None:
        lagrange = equilibrium.ell(geo)
    E = np.exp(c * (1.0 + np.asarray(xi, dtype=complex)) / 2.0)
    integral = (2.0 / c) * (equilibrium.dilog(-z / E) - equilibrium.dilog(-z))
    return equilibrium.g(z, geo) + integral - (1.0 + eta) * np.log(z) + 0.5 * lagrange


def phase_prime(z, xi, eta, c, geo=None):
    """Phi_c'(z) = V'/2 + psi + (2/(c z))(Log(1+z) - Log(1+z/E)) - (1+eta)/z."""
    geo = _geometry(c, geo)
    z = np.asarray(z, dtype=complex)
    E = math.exp(c * (1.0 + xi) / 2.0)
    return (equilibrium.g_prime(z, geo) + (2.0 / (c * z)) * (np.log1p(z) - np.log1p(z / E))
            - (1.0 + eta) / z)


def _L_prime(z, geo):
    Rc = complex(equilibrium.R(-math.exp(geo.c), geo))
    R1 = complex(equilibrium.R(-1.0, geo))
    z = np.asarray(z, dtype=complex)
    return (-Rc / (z + math.exp(geo.c)) + R1 / (z + 1.0)) / equilibrium.R(z, geo)


def _L_second(z, geo):
    ec = math.exp(geo.c)
    Rc = complex(equilibrium.R(-ec, geo))
    R1 = complex(equilibrium.R(-1.0, geo))
    z = np.asarray(z, dtype=complex)
    Rz = equilibrium.R(z, geo)
    Rp = equilibrium.R_prime(z, geo)
    return (Rc * (Rp / (Rz ** 2 * (z + ec)) + 1.0 / (Rz * (z + ec) ** 2))
            - R1 * (Rp / (Rz ** 2 * (z + 1.0)) + 1.0 / (Rz * (z + 1.0) ** 2)))


def phase_second(z, xi, eta, c, geo=None):
    """Phi_c''(z) from (c z Phi')' = 1/(z+e^c) + 1/(z+1) + L'(z) - 2/(z+E)."""
    geo = _geometry(c, geo)
    z = np.asarray(z, dtype=complex)
    E = math.exp(c * (1.0 + xi) / 2.0)
    G_prime = 1.0 / (z + math.exp(c)) + 1.0 / (z + 1.0) + _L_prime(z, geo) - 2.0 / (z + E)
    return (G_prime / z - c * phase_prime(z, xi, eta, c, geo) / z) / c


def phase_derivative(s, xi, eta, c, order, variable="z", radius=None, nodes=None, geo=None):
    """Derivative of the phase by the Cauchy integral on a circle of nodes."""
    geo = _geometry(c, geo)
    if nodes is None:
        nodes = ARCTIC_CONFIG['cauchy_nodes']
    s = complex(s)
    theta = 2.0 * math.pi * np.arange(nodes) / nodes
    if variable == "z":
        if radius is None:
            gap = min(abs(s), abs(abs(s) - geo.radius))
            if abs(s.imag) > 0:
                gap = min(gap, abs(s.imag))
            radius = ARCTIC_CONFIG['cauchy_radius'] * gap
        if radius <= 0:
            raise BranchCutError(f"the Cauchy circle around s={s} touches a cut")
        values = phase(s + radius * np.exp(1j * theta), xi, eta, c, geo)
    elif variable == "xi":
        radius = ARCTIC_CONFIG['cauchy_radius'] if radius is None else radius
        values = phase(s, xi + radius * np.exp(1j * theta), eta, c, geo)
    elif variable == "eta":
        radius = ARCTIC_CONFIG['cauchy_radius'] if radius is None else radius
        values = phase(s, xi, eta + radius * np.exp(1j * theta), c, geo)
    else:
        raise ValueError(f"unknown variable {variable!r}")
    coefficient = np.mean(values * np.exp(-1j * order * theta))
    return complex(math.factorial(order) * coefficient / radius ** order)


# =============================================
# saddle points
# =============================================

def saddle_polynomial(xi, eta, c):
    """Sextic Pi(s) and the quartic p(s) = Pi(s) / ((s+1)(s+e^c)), descending coefficients."""
    geo = equilibrium.arc_geometry(c)
    r = geo.radius
    ec = math.exp(c)
    a = math.exp(c * (eta - xi))
    b = 2.0 * math.exp(c * (2.0 * eta - xi + 1.0) / 2.0)
    d = math.exp(c * eta + c)
    pi1 = np.array([a + 1.0, b + ec + 1.0, d + ec])
    pi2 = np.array([a - 1.0, b - ec - 1.0, d - ec])
    circle = np.array([1.0, -2.0 * r * math.cos(geo.theta), r * r])
    shift = np.array([1.0, r])
    coth2 = 1.0 / math.tanh(c / 2.0) ** 2
    sextic = np.polysub(np.polymul(circle, np.polymul(pi1, pi1)),
                        coth2 * np.polymul(np.polymul(shift, shift), np.polymul(pi2, pi2)))
    quartic, remainder = np.polydiv(sextic, np.array([1.0, 1.0 + ec, ec]))
    return sextic, quartic, remainder


def _polish(roots, coefficients, steps=3):
    derivative = np.polyder(coefficients)
    for _ in range(steps):
        slope = np.polyval(derivative, roots)
        step = np.where(slope != 0, np.polyval(coefficients, roots) / np.where(slope != 0, slope, 1.0), 0.0)
        roots = roots - step
    return roots


def upper_saddles(xi, eta, c, geo=None):
    """Quartic roots in the upper half plane that are genuine critical points."""
    geo = _geometry(c, geo)
    _, quartic, _ = saddle_polynomial(xi, eta, c)
    roots = _polish(np.roots(quartic).astype(complex), quartic)
    upper = roots[roots.imag > 1e-9 * np.maximum(np.abs(roots), 1.0)]
    if upper.size == 0:
        return upper
    residual = np.abs(phase_prime(upper, xi, eta, c, geo))
    return upper[residual < ARCTIC_CONFIG['saddle_tol']]


def _real_mask(roots):
    return np.abs(roots.imag) <= 1e-9 * np.maximum(np.abs(roots), 1.0)


def classify_roots(roots):
    """Label the four roots of a real quartic by the number of conjugate pairs."""
    roots = np.asarray(roots, dtype=complex)
    pairs = int(np.count_nonzero(~_real_mask(roots) & (roots.imag > 0)))
    return (SaddleData.FOUR_REAL, SaddleData.TWO_REAL, SaddleData.NO_REAL)[min(pairs, 2)]


def saddle(xi, eta, c, geo=None):
    if not HexPoint(xi, eta).in_hexagon(strict=True):
        raise DegenerateInputError(f"({xi}, {eta}) is not in the open hexagon")
    geo = _geometry(c, geo)
    _, quartic, _ = saddle_polynomial(xi, eta, c)
    roots = _polish(np.roots(quartic).astype(complex), quartic)
    real = _real_mask(roots)
    classification = classify_roots(roots)
    if classification == SaddleData.NO_REAL:
        logger.warning(f"quartic at ({xi}, {eta}), c={c} has no real root: {roots}")
    candidates = roots[~real & (roots.imag > 0)]
    s_plus = None
    if candidates.size:
        residual = np.abs(phase_prime(candidates, xi, eta, c, geo))
        genuine = candidates[residual < ARCTIC_CONFIG['saddle_tol']]
        if genuine.size > 1:
            logger.warning(f"{genuine.size} upper saddles at ({xi}, {eta}), c={c}; keeping the best")
        if genuine.size:
            s_plus = complex(candidates[np.argmin(residual)])
    return SaddleData(xi, eta, c, quartic, roots, classification, s_plus)


def liquid_membership(xi, eta, c, geo=None):
    if not HexPoint(xi, eta).in_hexagon(strict=True):
        raise DegenerateInputError(f"({xi}, {eta}) is not in the open hexagon")
    return upper_saddles(xi, eta, c, geo).size > 0


def real_root_separation(data):
    """True when the real roots lie on both sides of -e^{c(1+xi)/2}."""
    roots = data.roots[_real_mask(data.roots)].real
    E = math.exp(data.c * (1.0 + data.xi) / 2.0)
    return bool(np.any(roots < -E) and np.any(roots > -E))


def liquid_grid(c, points=41):
    """Liquid-region indicator on a grid of the open hexagon."""
    geo = equilibrium.arc_geometry(c)
    axis = np.linspace(-1.0, 1.0, points + 2)[1:-1]
    rows = []
    for xi in axis:
        for eta in axis:
            if HexPoint(xi, eta).in_hexagon(strict=True):
                rows.append((xi, eta, liquid_membership(xi, eta, c, geo)))
    return pd.DataFrame(rows, columns=["xi", "eta", "liquid"])


# =============================================
# arctic curve
# =============================================

def _curve_arrays(s, c, geo=None):
    """E(s), xi(s), eta(s) and the pieces of L along real s."""
    geo = _geometry(c, geo)
    s = np.asarray(s, dtype=float)
    ec = math.exp(c)
    if np.any(np.abs(s - geo.radius) <= 1e-9 * geo.radius):
        raise BranchCutError(f"s = e^(c/2) lies on the arc, parametrization is one-sided there")
    for bad in (0.0, -1.0, -ec):
        if np.any(s == bad):
            raise DegenerateInputError(f"the parametrization is singular at s={bad}")
    L = equilibrium.L_fun(s, geo).real
    Lp = _L_prime(s, geo).real
    T = 1.0 / (s + ec) + 1.0 / (s + 1.0) + Lp
    if np.any(np.abs(T) < 1e-14):
        raise DegenerateInputError(f"the xi formula degenerates at s={s[np.abs(T) < 1e-14]}")
    E = 2.0 / T - s
    if np.any(E <= 0):
        raise DegenerateInputError(f"s={s[E <= 0]} is outside the range of the parametrization")
    xi = 2.0 * np.log(E) / c - 1.0
    log_eta = np.log(s + ec) + np.log(s + 1.0) + L + 2.0 * np.log(E / (s + E))
    eta = log_eta / c - 1.0
    return {"s": s, "E": E, "xi": xi, "eta": eta, "L": L, "L_prime": Lp}


def arctic_curve(s, c, geo=None, check=True):
    """Point (xi(s), eta(s)) of the frozen boundary where Phi' and Phi'' vanish at s."""
    geo = _geometry(c, geo)
    values = _curve_arrays(float(s), c, geo)
    point = HexPoint(float(values["xi"]), float(values["eta"]))
    if check:
        first = abs(complex(phase_prime(s, point.xi, point.eta, c, geo)))
        second = abs(complex(phase_second(s, point.xi, point.eta, c, geo)))
        tol = ARCTIC_CONFIG['saddle_tol']
        if first > tol or second > tol:
            logger.warning(f"arctic point at s={s}, c={c} has |Phi'|={first:.3e}, |Phi''|={second:.3e}")
    return point


def arctic_curve_frame(c, m=400, upper=None):
    """Samples of the segment s in (0, e^c), skipping e^{c/2}."""
    geo = equilibrium.arc_geometry(c)
    if upper is None:
        upper = math.exp(c)
    s = np.linspace(0.0, upper, m + 2)[1:-1]
    s = s[np.abs(s - geo.radius) > 1e-6 * geo.radius]
    values = _curve_arrays(s, c, geo)
    return pd.DataFrame({
        "s": s,
        "xi": values["xi"],
        "eta": values["eta"],
        "curvature": curvature(s, c, geo),
    })


def ellipse_defect(c, samples=100):
    """Largest first-order distance from the segment to 4 xi^2 - 4 xi eta + 4 eta^2 = 3."""
    frame = arctic_curve_frame(c, samples)
    xi, eta = frame["xi"].to_numpy(), frame["eta"].to_numpy()
    a, b, d, rhs = REFERENCE().ELLIPSE
    residual = a * xi ** 2 + b * xi * eta + d * eta ** 2 - rhs
    gradient = np.hypot(2 * a * xi + b * eta, b * xi + 2 * d * eta)
    return float(np.max(np.abs(residual) / gradient))


def curve_endpoints(c, eps=1e-13):
    """eta as s -> 0+ (expected -1) and xi at s = e^c (expected 0)."""
    geo = equilibrium.arc_geometry(c)
    start = _curve_arrays(np.array([eps * geo.radius]), c, geo)
    end = _curve_arrays(np.array([math.exp(c)]), c, geo)
    return {"eta_at_zero": float(start["eta"][0]), "xi_at_e_c": float(end["xi"][0])}


# =============================================
# curvature, inflection and c*
# =============================================

def _phi_table(s, c, geo=None):
    """Closed-form phase derivatives at the arctic point of parameter s."""
    geo = _geometry(c, geo)
    values = _curve_arrays(s, c, geo)
    s = values["s"]
    E = values["E"]
    ec = math.exp(c)
    Lpp = _L_second(s, geo).real
    F2 = Lpp - 1.0 / (s + 1.0) ** 2 - 1.0 / (s + ec) ** 2 + 2.0 / (s + E) ** 2
    return {
        "xi": values["xi"],
        "eta": values["eta"],
        "E": E,
        "101": -1.0 / s,
        "110": 1.0 / (s + E),
        "201": 1.0 / s ** 2,
        "210": -1.0 / (s + E) ** 2,
        "120": -(c / 2.0) * E / (s + E) ** 2,
        "300": F2 / (c * s),
        "001": -np.log(s),
        "010": np.log1p(s / E),
        "020": -(c / 2.0) * s / (s + E),
        "030": (c ** 2 / 4.0) * s * E / (s + E) ** 2,
        "220": c * E / (s + E) ** 3,
        "310": 2.0 / (s + E) ** 3,
        "301": -2.0 / s ** 3,
    }


def determinant(s, c, geo=None):
    """phi_201 phi_110 - phi_210 phi_101 = E / (s^2 (s+E)^2)."""
    p = _phi_table(s, c, geo)
    return p["201"] * p["110"] - p["210"] * p["101"]


def curvature(s, c, geo=None):
    """(xi' eta'' - xi'' eta')(s) = phi_300^2 (D^2 - phi_101^2 phi_120 phi_300) / D^3."""
    p = _phi_table(s, c, geo)
    D = p["201"] * p["110"] - p["210"] * p["101"]
    if np.any(D == 0):
        raise DegenerateInputError(f"the frame determinant vanishes at s={s}")
    return p["300"] ** 2 * (D ** 2 - p["101"] ** 2 * p["120"] * p["300"]) / D ** 3


def curvature_fd(s, c, h=None, geo=None):
    """The same quantity from central differences of (xi(s), eta(s))."""
    geo = _geometry(c, geo)
    s = float(s)
    if h is None:
        h = 1e-4 * min(s, abs(geo.radius - s))
    grid = s + h * np.array([-1.0, 0.0, 1.0])
    values = _curve_arrays(grid, c, geo)
    xi, eta = values["xi"], values["eta"]
    xi1, eta1 = (xi[2] - xi[0]) / (2 * h), (eta[2] - eta[0]) / (2 * h)
    xi2, eta2 = (xi[2] - 2 * xi[1] + xi[0]) / h ** 2, (eta[2] - 2 * eta[1] + eta[0]) / h ** 2
    return xi1 * eta2 - xi2 * eta1


def inflection_function(s, c, geo=None):
    """c s^2 phi_300 + 2E/(s+E)^2; its zeros on (0, e^{c/2}) are the inflection points."""
    p = _phi_table(s, c, geo)
    s = np.asarray(s, dtype=float)
    return c * s ** 2 * p["300"] + 2.0 * p["E"] / (s + p["E"]) ** 2


def inflection_scan(c, points=None):
    """All sign changes of the inflection function on (0, e^{c/2}), refined by brentq."""
    if points is None:
        points = ARCTIC_CONFIG['scan_points']
    geo = equilibrium.arc_geometry(c)
    s = np.linspace(0.0, geo.radius, points + 2)[1:-1]
    values = inflection_function(s, c, geo)
    roots = []
    for k in np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0):
        roots.append(optimize.brentq(lambda t: float(inflection_function(t, c, geo)), s[k], s[k + 1],
                                     xtol=1e-14))
    return roots


def find_inflection(c):
    roots = inflection_scan(c)
    if len(roots) != 1:
        raise DegenerateInputError(f"expected one inflection point on the segment for c={c}, found {len(roots)}")
    return roots[0]


def c_star_function(c):
    """R(-1)/R_+(e^{c/2}) - 2/(e^{c/2} - 1), in moduli."""
    geo = equilibrium.arc_geometry(c)
    return abs(1.0 + geo.z_plus) / (2.0 * geo.radius * math.sin(geo.theta / 2.0)) - 2.0 / (geo.radius - 1.0)


def find_c_star(bracket=None, xtol=None):
    if bracket is None:
        bracket = ARCTIC_CONFIG['c_star_bracket']
    if xtol is None:
        xtol = ARCTIC_CONFIG['c_star_xtol']
    lo, hi = bracket
    f_lo, f_hi = c_star_function(lo), c_star_function(hi)
    if f_lo * f_hi > 0:
        raise ConvergenceError(f"no sign change of the c* equation on [{lo}, {hi}]",
                               detail={"f_lo": f_lo, "f_hi": f_hi})
    root = optimize.bisect(c_star_function, lo, hi, xtol=xtol)
    logger.info(f"c* = {root:.10f}")
    return root


# =============================================
# edge frame
# =============================================

def edge_frame(s, c, geo=None):
    """Phase derivatives, frame and k-constants at the arctic point of parameter s."""
    geo = _geometry(c, geo)
    if not 0.0 < s < geo.radius:
        raise DegenerateInputError(f"the edge frame is built for s in (0, e^(c/2)), got {s}")
    table = _phi_table(float(s), c, geo)
    phi = {key: float(value) for key, value in table.items() if key.isdigit()}
    D = phi["201"] * phi["110"] - phi["210"] * phi["101"]
    p300 = phi["300"]
    norm2 = phi["110"] ** 2 + phi["101"] ** 2
    k = {
        "k1": D ** 3 / (3.0 * p300 ** 2) - 0.5 * (D / p300) * phi["120"] * phi["101"] ** 2
              - phi["030"] * phi["101"] ** 3 / 6.0,
        "k2": norm2 * D / p300 + phi["020"] * phi["110"] * phi["101"],
        "k3": phi["001"] * phi["110"] + phi["010"] * phi["101"],
        "k4": 0.5 * phi["020"] * phi["101"] ** 2,
        "k5": phi["001"] * phi["110"] - phi["010"] * phi["101"],
        # real cube root; phi_300 < 0 makes k6 negative
        "k6": float(np.cbrt(2.0 / p300)),
    }
    return EdgeFrame(float(s), c, float(table["xi"]), float(table["eta"]), phi,
                     (phi["110"], phi["101"]), (-phi["101"], phi["110"]), k)


def cross_validate_frame(frame, geo=None):
    """Relative differences between closed forms and Cauchy-integral derivatives of phase()."""
    geo = _geometry(frame.c, geo)
    s, xi, eta, c = frame.s, frame.xi, frame.eta, frame.c
    checks = {
        "100": (0.0, phase_derivative(s, xi, eta, c, 1, geo=geo)),
        "300": (frame.phi["300"], phase_derivative(s, xi, eta, c, 3, geo=geo)),
        "010": (frame.phi["010"], phase_derivative(s, xi, eta, c, 1, "xi", geo=geo)),
        "020": (frame.phi["020"], phase_derivative(s, xi, eta, c, 2, "xi", geo=geo)),
        "030": (frame.phi["030"], phase_derivative(s, xi, eta, c, 3, "xi", geo=geo)),
        "001": (frame.phi["001"], phase_derivative(s, xi, eta, c, 1, "eta", geo=geo)),
    }
    report = {}
    for key, (closed, numeric) in checks.items():
        report[key] = abs(numeric - closed) / max(1.0, abs(closed))
    worst = max(report.values())
    if worst > 1e-6:
        logger.warning(f"phase derivative cross-check at s={s}, c={c}: worst {worst:.3e}")
    return report


def edge_point(frame, alpha, beta, N):
    """(xi_N, eta_N) = (xi, eta) + alpha N^{-2/3} n + beta N^{-1/3} n_perp and lattice (x, y)."""
    n, t = frame.normal, frame.tangent
    xi = frame.xi + alpha * N ** (-2.0 / 3.0) * n[0] + beta * N ** (-1.0 / 3.0) * t[0]
    eta = frame.eta + alpha * N ** (-2.0 / 3.0) * n[1] + beta * N ** (-1.0 / 3.0) * t[1]
    return xi, eta, N * (1.0 + xi), N * (1.0 + eta)


def inflection_beta(beta_tilde, N, omega, delta):
    """Tangent shift beta_tilde + omega N^delta used at an inflection point."""
    if delta >= 1.0 / 9.0:
        logger.warning(f"tangent exponent delta={delta} is not below 1/9")
    return beta_tilde + omega * N ** delta


# =============================================
# level sets of Re Phi
# =============================================

def level_set_trace(s, c, xi=None, eta=None, step=None, budget=None, geo=None):
    """March the three upper branches of Re(Phi(z) - Phi(s)) = 0 leaving a real s."""
    geo = _geometry(c, geo)
    if xi is None or eta is None:
        point = arctic_curve(s, c, geo, check=False)
        xi, eta = point.xi, point.eta
    if step is None:
        step = ARCTIC_CONFIG['level_step']
    if budget is None:
        budget = ARCTIC_CONFIG['level_arc_budget']
    lagrange = equilibrium.ell(geo)
    base = complex(phase(s, xi, eta, c, geo, lagrange))

    def level(z):
        return float((complex(phase(z, xi, eta, c, geo, lagrange)) - base).real)

    def gradient(z):
        return complex(phase_prime(z, xi, eta, c, geo)).conjugate()

    r = geo.radius
    traces = []
    for angle in (math.pi / 6.0, math.pi / 2.0, 5.0 * math.pi / 6.0):
        h = step * r
        z = s + 10.0 * h * complex(math.cos(angle), math.sin(angle))
        direction = complex(math.cos(angle), math.sin(angle))
        points = [complex(s), z]
        length = abs(z - s)
        status = "budget"
        crossing = None
        while length < budget * r:
            try:
                grad = gradient(z)
                tangent = 1j * grad / abs(grad)
                if (tangent * direction.conjugate()).real < 0:
                    tangent = -tangent
                trial = z + h * tangent
                iterations = 0
                while iterations < 8:
                    value = level(trial)
                    if abs(value) < 1e-10:
                        break
                    grad_t = gradient(trial)
                    trial = trial - value * grad_t / abs(grad_t) ** 2
                    iterations += 1
                else:
                    raise ConvergenceError("corrector did not converge")
            except (ConvergenceError, BranchCutError, ZeroDivisionError):
                h *= 0.5
                if h < 1e-8 * r:
                    status = "truncated"
                    break
                continue
            if trial.imag <= 0:
                t = z.imag / (z.imag - trial.imag)
                crossing = z.real + t * (trial.real - z.real)
                points.append(complex(crossing, 0.0))
                status = "real-axis"
                break
            direction = trial - z
            length += abs(direction)
            z = trial
            points.append(z)
            if iterations <= 1:
                h = min(2.0 * h, 0.05 * r)
        traces.append({"angle": angle, "points": np.array(points), "status": status,
                       "real_crossing": crossing})
    return traces


def level_set_frame(traces):
    rows = []
    for index, trace in enumerate(traces):
        for z in trace["points"]:
            rows.append((index, z.real, z.imag, trace["status"]))
    return pd.DataFrame(rows, columns=["branch", "re", "im", "status"])


# =============================================
# Airy kernels
# =============================================

def _airy_parts(y):
    """Ai(y) as (mantissa, log factor), scaled on y > 0 to avoid underflow."""
    if y > 0:
        return special.airye(y)[0], -(2.0 / 3.0) * y ** 1.5
    return special.airy(y)[0], 0.0


def _airy_product_integral(rate, r1, r2):
    """int_0^inf e^{-t rate} Ai(r1+t) Ai(r2+t) dt."""
    def integrand(t):
        m1, e1 = _airy_parts(r1 + t)
        m2, e2 = _airy_parts(r2 + t)
        exponent = -t * rate + e1 + e2
        return m1 * m2 * math.exp(exponent) if exponent > -700.0 else 0.0
    return integrate.quad(integrand, 0.0, np.inf, epsabs=1e-14, epsrel=1e-12, limit=400)[0]


def airy_heat_integral(x, r1, r2):
    """int_R e^{x t} Ai(r1+t) Ai(r2+t) dt for x > 0."""
    return (math.exp(x ** 3 / 12.0 - (r1 + r2) * x / 2.0 - (r1 - r2) ** 2 / (4.0 * x))
            / (2.0 * math.sqrt(math.pi * x)))


def extended_airy(tau1, r1, tau2, r2):
    """Extended Airy kernel A(tau1, r1; tau2, r2).

    The tau1 < tau2 branch -int_{-inf}^0 is evaluated as the half-line
    integral minus the full-line Gaussian identity.
    """
    half = _airy_product_integral(tau1 - tau2, r1, r2)
    if tau1 >= tau2:
        return half
    return half - airy_heat_integral(tau2 - tau1, r1, r2)


def extended_airy_direct(tau1, r1, tau2, r2, cutoff=40.0):
    """-int_{-T}^0 of the tau1 < tau2 branch with T = cutoff / (tau2 - tau1)."""
    if tau1 >= tau2:
        return _airy_product_integral(tau1 - tau2, r1, r2)
    x = tau2 - tau1

    def integrand(t):
        return math.exp(t * x) * special.airy(r1 + t)[0] * special.airy(r2 + t)[0]
    return -integrate.quad(integrand, -cutoff / x, 0.0, epsabs=1e-14, epsrel=1e-12, limit=2000)[0]


def classical_airy_kernel(r1, r2):
    ai1, aip1, _, _ = special.airy(r1)
    ai2, aip2, _, _ = special.airy(r2)
    if r1 == r2:
        return aip1 ** 2 - r1 * ai1 ** 2
    return (ai1 * aip2 - aip1 * ai2) / (r1 - r2)
