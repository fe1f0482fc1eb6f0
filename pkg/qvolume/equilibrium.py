"""
Equilibrium problem on the arc gamma_0 = {e^{c/2} e^{i theta} : |theta| < theta_c}.

Branch conventions used throughout:
  * R(z) = sqrt((z - z_-)(z - z_+)), cut on gamma_0, R(z) ~ z at infinity.
  * The "+" boundary value of anything cut by gamma_0 is the limit from inside
    the circle (left of gamma_0 oriented counterclockwise), "-" from outside.
  * On (-e^c, -1) the "+" side is the upper half plane.
  * All logarithms are principal.
  * g is analytic off Gamma = (-inf, -e^{c/2}] U {e^{c/2} e^{i theta}: theta in [-pi, theta_c]},
    g(z) = log z + O(1/z).
  * phi = g - V/2 + l/2 with Re phi = 0 on gamma_0 and Re phi < 0 on the rest of the circle.
"""

import logging
import math

import numpy as np
import pandas as pd
from scipy import integrate, special

from qvolume.config import QUADRATURE_CONFIG
from qvolume.exceptions import BranchCutError, DegenerateInputError
from qvolume.objects.geometry import ArcGeometry, BranchedFn

logger = logging.getLogger(__name__)

INSIDE = "+"
OUTSIDE = "-"


def arc_geometry(c):
    """theta_c from cos(theta_c) = -cosh(c/2) / (1 + cosh(c/2))."""
    if c < 0:
        raise DegenerateInputError(f"c must be >= 0, got {c}")
    ch = math.cosh(c / 2.0)
    return ArcGeometry(c, math.acos(-ch / (1.0 + ch)))


def _require_positive(geo):
    if geo.c <= 0:
        raise DegenerateInputError("the density and the potentials need c > 0")


def _check_side(side):
    if side not in (INSIDE, OUTSIDE):
        raise ValueError(f"side must be '+' or '-', got {side!r}")


def gauss_legendre(n, a=0.0, b=1.0):
    x, w = special.roots_legendre(n)
    return 0.5 * (b - a) * x + 0.5 * (b + a), 0.5 * (b - a) * w


def lagrange_weights_at_zero(offsets):
    offsets = np.asarray(offsets, dtype=float)
    weights = np.ones(len(offsets))
    for i, di in enumerate(offsets):
        for j, dj in enumerate(offsets):
            if i != j:
                weights[i] *= -dj / (di - dj)
    return weights


def boundary_value(func, x, direction, offsets=None):
    """Limit of func(x + delta * direction), delta -> 0+, by polynomial extrapolation."""
    if offsets is None:
        offsets = QUADRATURE_CONFIG['boundary_offsets']
    x = np.asarray(x, dtype=complex)
    values = np.array([func(x + d * direction) for d in offsets])
    weights = lagrange_weights_at_zero(offsets)
    return np.tensordot(weights, values, axes=1)


# =============================================
# R and a
# =============================================

def _arc_ratio(theta, geo):
    """|z - z_+| / |z - z_-| on the circle, as a function of the angle."""
    return np.sin((geo.theta - theta) / 2.0) / np.sin((geo.theta + theta) / 2.0)


def _u(z, geo):
    z = np.asarray(z, dtype=complex)
    with np.errstate(divide='ignore', invalid='ignore'):
        m = (z - geo.z_plus) / (z - geo.z_minus)
    return m * np.exp(-1j * geo.theta)


def a_squared(z, geo, side=None):
    """a(z)^2 = ((z - z_+)/(z - z_-))^{1/2}, equal to 1 at infinity."""
    if side is None:
        return np.exp(0.5j * geo.theta) * np.sqrt(_u(z, geo))
    _check_side(side)
    theta = np.angle(np.asarray(z, dtype=complex))
    turn = math.pi if side == INSIDE else -math.pi
    return np.exp(0.5j * (geo.theta + turn)) * np.sqrt(_arc_ratio(theta, geo))


def a_fun(z, geo, side=None):
    """a(z) = ((z - z_+)/(z - z_-))^{1/4}, analytic off gamma_0, a(inf) = 1."""
    if side is None:
        return np.exp(0.25j * geo.theta) * np.power(_u(z, geo), 0.25)
    _check_side(side)
    theta = np.angle(np.asarray(z, dtype=complex))
    turn = math.pi if side == INSIDE else -math.pi
    return np.exp(0.25j * (geo.theta + turn)) * np.power(_arc_ratio(theta, geo), 0.25)


def R(z, geo, side=None):
    z = np.asarray(z, dtype=complex)
    with np.errstate(invalid='ignore'):
        value = (z - geo.z_minus) * a_squared(z, geo, side)
    return np.where(z == geo.z_minus, 0.0, value)


def R_prime(z, geo):
    z = np.asarray(z, dtype=complex)
    return (z - geo.radius * math.cos(geo.theta)) / R(z, geo)


def R_real(s, geo):
    """R on the real axis: -|s - z_+| left of e^{c/2}, +|s - z_+| right of it."""
    s = np.asarray(s, dtype=float)
    dist = np.abs(s - geo.z_plus)
    return np.where(s > geo.radius, dist, -dist)


# =============================================
# h and psi
# =============================================

def _anchors(geo):
    A = complex(a_squared(-1.0, geo))
    B = complex(a_squared(-math.exp(geo.c), geo))
    return A, B


def L_of_a(a2, geo):
    """Log of ((a^2 - A)(a^2 + B)) / ((a^2 + A)(a^2 - B)), A = a^2(-1), B = a^2(-e^c).

    The two factors -i (a^2 - A)/(a^2 + A) and -i (a^2 - B)/(a^2 + B) lie in
    the same half plane off the real axis and are real on it, so their
    quotient is negative real only on (-e^c, -1), the one cut of L besides gamma_0.
    """
    A, B = _anchors(geo)
    a2 = np.asarray(a2, dtype=complex)
    with np.errstate(divide='ignore', invalid='ignore'):
        return np.log((a2 - A) * (a2 + B) / ((a2 + A) * (a2 - B)))


def L_fun(z, geo, side=None):
    return L_of_a(a_squared(z, geo, side), geo)


def h_coefficients(geo):
    """h_1 and h_2 of h(z) = h_1/z + h_2/z^2 + ... from the closed forms."""
    _require_positive(geo)
    R0 = complex(R(0.0, geo))
    h1 = -complex(L_of_a(np.exp(1j * geo.theta), geo)) / R0
    h2 = complex(L_of_a(1.0, geo))
    return {"h1": h1, "h2": h2, "R0": R0}


def _on_arc(z, geo):
    z = np.asarray(z, dtype=complex)
    tol = 1e-12 * geo.radius
    return (np.abs(np.abs(z) - geo.radius) <= tol) & (np.abs(np.angle(z)) <= geo.theta + 1e-12)


def _on_interval(z, geo):
    z = np.asarray(z, dtype=complex)
    tol = 1e-12 * geo.radius
    return (np.abs(z.imag) <= tol) & (z.real >= -math.exp(geo.c) - tol) & (z.real <= -1.0 + tol)


def _check_off_cuts(z, geo, name):
    if np.any(_on_arc(z, geo) | _on_interval(z, geo)):
        raise BranchCutError(f"{name} evaluated on gamma_0 or [-e^c, -1] without a side")


def h(z, geo):
    """Closed form of h(z) = int_{-e^c}^{-1} dt / (t R(t) (t - z))."""
    _require_positive(geo)
    z = np.asarray(z, dtype=complex)
    _check_off_cuts(z, geo, "h")
    h1 = h_coefficients(geo)["h1"]
    Rz = R(z, geo)
    return (L_fun(z, geo) + h1 * Rz) / (z * Rz)


def h_integral(z, geo):
    """Adaptive-quadrature evaluation of the defining integral of h at one point."""
    z = complex(z)
    lo, hi = -math.exp(geo.c), -1.0

    def integrand(t):
        return 1.0 / (t * float(R_real(t, geo)) * (t - z))

    opts = dict(epsabs=1e-14, epsrel=1e-13, limit=400)
    re = integrate.quad(lambda t: integrand(t).real, lo, hi, **opts)[0]
    im = integrate.quad(lambda t: integrand(t).imag, lo, hi, **opts)[0]
    return complex(re, im)


def h_laurent(geo, radius=None, nodes=256):
    """Laurent coefficients h_1, h_2 by the trapezoid rule on a large circle."""
    if radius is None:
        radius = 2.0 * math.exp(geo.c)
    z = radius * np.exp(2j * math.pi * (np.arange(nodes) + 0.5) / nodes)
    values = h(z, geo)
    return {"h1": complex(np.mean(values * z)), "h2": complex(np.mean(values * z ** 2))}


def _psi_value(z, geo, side=None):
    z = np.asarray(z, dtype=complex)
    return L_fun(z, geo, side) / (geo.c * z)


def psi(z, geo, side=None):
    """psi = L / (c z): residue -1 at 0, psi(z) = 1/z + O(1/z^2) at infinity.

    side picks the boundary value on gamma_0; on (-e^c, -1) use boundary_value.
    """
    _require_positive(geo)
    z = np.asarray(z, dtype=complex)
    if side is None:
        _check_off_cuts(z, geo, "psi")
    else:
        _check_side(side)
    return _psi_value(z, geo, side)


def density(theta, geo):
    """d mu / d theta = L_-(e^{c/2} e^{i theta}) / (pi c) on gamma_0."""
    _require_positive(geo)
    x = geo.radius * np.exp(1j * np.asarray(theta, dtype=float))
    return L_fun(x, geo, OUTSIDE) / (math.pi * geo.c)


def density_profile(geo, m=200):
    theta = np.linspace(-geo.theta, geo.theta, m + 2)[1:-1]
    values = density(theta, geo)
    return pd.DataFrame({"theta": theta, "density": values.real, "density_imag": values.imag})


def equilibrium_measure_check(geo, m=64, tol=1e-8):
    """Positivity on an m-point interior grid and total mass of (1/(pi i)) psi_- dz."""
    if m < 8:
        raise ValueError(f"grid size must be >= 8, got {m}")
    _require_positive(geo)
    theta = np.linspace(-geo.theta, geo.theta, m + 2)[1:-1]
    values = density(theta, geo)
    masses = []
    for n in (QUADRATURE_CONFIG['measure_nodes'] * 2, QUADRATURE_CONFIG['measure_nodes'] * 4):
        phi, w = gauss_legendre(n, 0.0, math.pi)
        th = -geo.theta * np.cos(phi)
        masses.append(complex(np.sum(density(th, geo) * geo.theta * np.sin(phi) * w)))
    mass = masses[-1]
    worst = np.argsort(values.real)[:3]
    report = {
        "c": geo.c,
        "mass": mass.real,
        "mass_imag": mass.imag,
        "mass_change": abs(masses[-1] - masses[0]),
        "min_density": float(values.real.min()),
        "max_imag": float(np.abs(values.imag).max()),
        "positive": bool(np.all(values.real > 0)),
        "worst_points": [(float(theta[i]), float(values[i].real)) for i in worst],
    }
    report["passed"] = report["positive"] and abs(mass - 1.0) <= tol
    if not report["passed"]:
        logger.warning(f"equilibrium measure check failed for c={geo.c}: {report}")
    return report


def endpoint_exponent(geo, offsets=(1e-4, 1e-5)):
    """Local power of the density at theta_c, expected 1/2."""
    d1, d2 = (float(density(geo.theta - d, geo).real) for d in offsets)
    return math.log(d1 / d2) / math.log(offsets[0] / offsets[1])


# =============================================
# V, nu, g, phi
# =============================================

def dilog(w):
    """Principal dilogarithm Li2(w), cut on [1, inf)."""
    return special.spence(1.0 - np.asarray(w, dtype=complex))


def V(z, geo):
    """V(z) = (2/c) (Li2(-e^c/z) - Li2(-1/z))."""
    _require_positive(geo)
    z = np.asarray(z, dtype=complex)
    return (2.0 / geo.c) * (dilog(-math.exp(geo.c) / z) - dilog(-1.0 / z))


def V_prime(z, geo):
    z = np.asarray(z, dtype=complex)
    return (2.0 / (geo.c * z)) * (np.log(1.0 + math.exp(geo.c) / z) - np.log(1.0 + 1.0 / z))


def nu(z, geo):
    """nu(z) = (1/2) Log(1 + 1/z) - (1/2) Log(1 + e^c/z).

    With this sign e^{N V + nu} prod_j (1 + q^j / z) -> 1 for q = e^{c/2N}.
    """
    z = np.asarray(z, dtype=complex)
    return 0.5 * np.log(1.0 + 1.0 / z) - 0.5 * np.log(1.0 + math.exp(geo.c) / z)


def g_prime(z, geo):
    """g'(z) = V'(z)/2 + psi(z), the Cauchy transform of the equilibrium measure."""
    return 0.5 * V_prime(z, geo) + _psi_value(z, geo)


def _g_outside(z, geo, nodes):
    z = np.asarray(z, dtype=complex)
    w, wt = gauss_legendre(nodes)
    u = 1.0 - w ** 2
    zz = z[..., None]
    s = zz / u
    f = g_prime(s, geo) - 1.0 / s
    integral = np.sum(f * zz / u ** 2 * 2.0 * w * wt, axis=-1)
    return np.log(z) - integral


def _segment(z0, z1, geo, nodes):
    """int_{z0}^{z1} g'(t) dt, nodes clustered at z1."""
    z0 = np.asarray(z0, dtype=complex)
    z1 = np.asarray(z1, dtype=complex)
    w, wt = gauss_legendre(nodes)
    t = 1.0 - (1.0 - w) ** 2
    dt = 2.0 * (1.0 - w) * wt
    a = z0[..., None]
    b = z1[..., None]
    points = a + (b - a) * t
    return np.sum(g_prime(points, geo) * (b - a) * dt, axis=-1)


def _on_gamma(z, geo):
    z = np.asarray(z, dtype=complex)
    rho = np.abs(z)
    tol = 1e-12 * geo.radius
    on_ray = (np.abs(z.imag) <= tol) & (z.real <= -geo.radius + tol)
    ang = np.angle(z)
    on_circle = (np.abs(rho - geo.radius) <= tol) & (ang <= geo.theta + 1e-12)
    return on_ray | on_circle


def g(z, geo, side=None, nodes=None):
    """g(z) = int log(z - t) d mu(t) by path integration of g'."""
    _require_positive(geo)
    if nodes is None:
        nodes = QUADRATURE_CONFIG['gauss_legendre_nodes']
    z = np.asarray(z, dtype=complex)
    if side is not None:
        _check_side(side)
        direction = -z / np.abs(z) if side == INSIDE else z / np.abs(z)
        scale = geo.radius
        return boundary_value(lambda p: g(p, geo, nodes=nodes), z, direction * scale)
    if np.any(_on_gamma(z, geo)):
        raise BranchCutError("g evaluated on its cut without a side")
    outside = np.abs(z) >= geo.radius
    result = np.empty(z.shape, dtype=complex)
    if np.any(outside):
        result[outside] = _g_outside(z[outside], geo, nodes)
    if np.any(~outside):
        beta = 0.5 * (geo.theta + math.pi)
        za = 2.0 * geo.radius * np.exp(1j * beta)
        zb = 0.5 * geo.radius * np.exp(1j * beta)
        g_b = complex(_g_outside(np.array([za]), geo, nodes)[0]) + complex(_segment(za, zb, geo, nodes))
        result[~outside] = g_b + _segment(np.full(np.count_nonzero(~outside), zb), z[~outside], geo, nodes)
    return result


def ell(geo):
    """l = -2 g(z_+) + V(z_+), g taken from outside the circle."""
    zp = np.array([geo.z_plus])
    return complex(-2.0 * _g_outside(zp, geo, QUADRATURE_CONFIG['gauss_legendre_nodes'])[0]
                   + V(zp, geo)[0])


def phi(z, geo, side=None, lagrange=None):
    if lagrange is None:
        lagrange = ell(geo)
    return g(z, geo, side) - 0.5 * V(z, geo) + 0.5 * lagrange


def phi_on_arc(geo, m=16):
    """Re(g_+ + g_- - V + l) on an interior grid of gamma_0 (expected 0)."""
    lagrange = ell(geo)
    theta = np.linspace(-geo.theta, geo.theta, m + 2)[1:-1]
    x = geo.radius * np.exp(1j * theta)
    total = g(x, geo, INSIDE) + g(x, geo, OUTSIDE) - V(x, geo) + lagrange
    return pd.DataFrame({"theta": theta, "value": total.real})


def arc_inequality(geo, m=32):
    """Re(g_+ + g_- - V + l) on the circle away from gamma_0 (expected <= 0)."""
    lagrange = ell(geo)
    upper = np.linspace(geo.theta, math.pi, m + 2)[1:-1]
    theta = np.concatenate([-upper[::-1], upper])
    x = geo.radius * np.exp(1j * theta) * (1.0 + 1e-9)
    value = 2.0 * g(x, geo).real - V(x, geo).real + lagrange.real
    return pd.DataFrame({"theta": theta, "value": value})


def re_phi_reflection_point(geo):
    """Re phi at -e^{c/2} (Re phi is continuous there)."""
    z = np.array([geo.radius * np.exp(1j * (math.pi - 1e-9)) * (1.0 + 1e-9)])
    return float(phi(z, geo).real[0])


def phi_sign_map(geo, extent=2.0, points=41):
    """Sign of Re phi on a square grid around the circle (reported, not asserted)."""
    axis = np.linspace(-extent, extent, points) * geo.radius
    X, Y = np.meshgrid(axis, axis + 0.5 * (axis[1] - axis[0]))
    Z = X + 1j * Y
    values = np.full(Z.shape, np.nan)
    ok = ~_on_gamma(Z, geo) & (np.abs(Z) > 1e-9)
    values[ok] = phi(Z[ok], geo).real
    return pd.DataFrame({"re": X.ravel(), "im": Y.ravel(), "re_phi": values.ravel()})


# =============================================
# Szego function
# =============================================

def _arc_point(phi_var, geo):
    theta = -geo.theta * np.cos(phi_var)
    x = geo.radius * np.exp(1j * theta)
    dx = 1j * x * geo.theta * np.sin(phi_var)
    return x, dx


def _jump_density(x, geo, weight):
    return weight(x, geo) / R(x, geo, OUTSIDE)


def _cauchy_log(z, geo):
    """int_{gamma_0} dx / (x - z), analytic off gamma_0 and zero at infinity."""
    return np.log(_u(z, geo)) + 1j * geo.theta


def _panels(phi0, width, n):
    edges = [0.0, math.pi]
    k = 0
    while True:
        step = width * 2.0 ** k
        if step > math.pi:
            break
        for e in (phi0 - step, phi0 + step):
            if 0.0 < e < math.pi:
                edges.append(e)
        k += 1
    if 0.0 < phi0 < math.pi:
        edges.append(phi0)
    edges = np.unique(edges)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = gauss_legendre(n, a, b)
        nodes.append(x)
        weights.append(w)
    return np.concatenate(nodes), np.concatenate(weights)


def cauchy_transform(z, geo, weight=None):
    """C(z) = (1/2 pi i) int_{gamma_0} f(x) dx / (x - z) with f = weight / R_-."""
    if weight is None:
        weight = nu
    z = complex(z)
    theta0 = float(np.clip(np.angle(z), -geo.theta, geo.theta))
    dist = abs(z - geo.radius * np.exp(1j * theta0))
    near = dist < 0.25 * geo.radius and abs(theta0) < geo.theta * (1 - 1e-9)
    if not near:
        phi_var, w = gauss_legendre(4 * QUADRATURE_CONFIG['measure_nodes'], 0.0, math.pi)
        x, dx = _arc_point(phi_var, geo)
        return complex(np.sum(_jump_density(x, geo, weight) * dx / (x - z) * w) / (2j * math.pi))
    x0 = geo.radius * np.exp(1j * theta0)
    f0 = complex(_jump_density(np.array([x0]), geo, weight)[0])
    phi0 = math.acos(-theta0 / geo.theta)
    width = max(dist / geo.radius, 1e-8)
    phi_var, w = _panels(phi0, width, 20)
    x, dx = _arc_point(phi_var, geo)
    smooth = (_jump_density(x, geo, weight) - f0) / (x - z)
    total = np.sum(smooth * dx * w) + f0 * complex(_cauchy_log(z, geo))
    return complex(total / (2j * math.pi))


def szego_log(z, geo, weight=None):
    z = complex(z)
    if min(abs(z - geo.z_plus), abs(z - geo.z_minus)) < 1e-9 * geo.radius:
        raise BranchCutError("the Szego function is not evaluated at the arc endpoints")
    return complex(R(z, geo)) * cauchy_transform(z, geo, weight)


def szego(z, geo, weight=None):
    """varsigma(z) = exp(R(z) C(z)), solving varsigma_+ varsigma_- = e^{-nu} on gamma_0."""
    _require_positive(geo)
    return complex(np.exp(szego_log(z, geo, weight)))


def szego_at_infinity(geo, weight=None):
    if weight is None:
        weight = nu
    phi_var, w = gauss_legendre(4 * QUADRATURE_CONFIG['measure_nodes'], 0.0, math.pi)
    x, dx = _arc_point(phi_var, geo)
    total = np.sum(_jump_density(x, geo, weight) * dx * w) / (2j * math.pi)
    return complex(np.exp(-total))


def szego_boundary(theta, geo, side, weight=None):
    """One-sided value of log varsigma at e^{c/2} e^{i theta} by extrapolation."""
    _check_side(side)
    x0 = geo.radius * np.exp(1j * theta)
    sign = -1.0 if side == INSIDE else 1.0
    offsets = QUADRATURE_CONFIG['boundary_offsets']
    values = [szego_log(x0 * (1.0 + sign * d), geo, weight) for d in offsets]
    return complex(np.dot(lagrange_weights_at_zero(offsets), values))


def szego_jump_check(geo, m=9, weight=None):
    """max |varsigma_+ varsigma_- e^{nu} - 1| over an interior grid of gamma_0."""
    if weight is None:
        weight = nu
    theta = np.linspace(-geo.theta, geo.theta, m + 2)[1:-1] * 0.9
    errors = []
    for t in theta:
        x0 = geo.radius * np.exp(1j * t)
        total = szego_boundary(t, geo, INSIDE, weight) + szego_boundary(t, geo, OUTSIDE, weight)
        errors.append(abs(np.exp(total + complex(weight(np.array([x0]), geo)[0])) - 1.0))
    return float(max(errors))


# =============================================
# registry of the multivalued functions
# =============================================

def branched_functions(geo):
    """R, a, L, psi and g of one geometry with their cuts and boundary-value rules."""
    arc = "gamma_0"
    arc_interval = "gamma_0 and [-e^c, -1]"
    return {
        "R": BranchedFn("R", lambda z: R(z, geo), arc, lambda z, side: R(z, geo, side)),
        "a": BranchedFn("a", lambda z: a_fun(z, geo), arc, lambda z, side: a_fun(z, geo, side)),
        "L": BranchedFn("L", lambda z: L_fun(z, geo), arc_interval, lambda z, side: L_fun(z, geo, side)),
        "psi": BranchedFn("psi", lambda z: psi(z, geo), arc_interval, lambda z, side: psi(z, geo, side)),
        "g": BranchedFn("g", lambda z: g(z, geo), "(-inf, -e^(c/2)] and the circle off gamma_0",
                        lambda z, side: g(z, geo, side)),
    }
