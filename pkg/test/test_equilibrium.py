#!/usr/bin/env python3
"""
Arc geometry, the closed forms R, a, h, psi and the potentials g, phi, Szego.
"""

import sys
import os
import math

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from qvolume import equilibrium
from qvolume.constants import REFERENCE
from qvolume.exceptions import BranchCutError, DegenerateInputError


def test_arc_geometry():
    """theta_c from the cosine relation, the c = 0 limit and the endpoints"""
    print("🧪 Testing arc geometry")
    print("=" * 50)
    geo = equilibrium.arc_geometry(0.0)
    assert abs(geo.z_plus - np.exp(2j * math.pi / 3)) < 1e-14
    assert abs(geo.theta - REFERENCE().THETA_ZERO) < 1e-14
    geo = equilibrium.arc_geometry(1.0)
    ch = math.cosh(0.5)
    assert abs(math.cos(geo.theta) + ch / (1 + ch)) < 1e-14
    assert abs(abs(geo.z_plus) - math.exp(0.5)) < 1e-14
    assert geo.z_minus == geo.z_plus.conjugate()
    assert 0 < math.pi - equilibrium.arc_geometry(40.0).theta < 1e-3
    try:
        equilibrium.arc_geometry(-1.0)
    except DegenerateInputError:
        pass
    else:
        raise AssertionError("negative c should fail")
    print("✅ geometry checks")


def test_R_and_a():
    """Branch point, normalization at infinity and the reflection identities"""
    print("🧪 Testing R and a")
    print("=" * 50)
    geo = equilibrium.arc_geometry(1.0)
    assert abs(complex(equilibrium.R(geo.z_plus, geo))) < 1e-12
    assert abs(complex(equilibrium.R(geo.z_minus, geo))) < 1e-12
    big = 1e6 * np.exp(0.4j)
    assert abs(complex(equilibrium.R(big, geo)) / big - 1.0) < 1e-5
    ratio = complex(equilibrium.R(-math.e, geo)) / complex(equilibrium.R(-1.0, geo))
    assert abs(ratio - math.exp(0.5)) < 1e-12
    for c in (0.5, 1.0, 2.0, 5.0):
        geo = equilibrium.arc_geometry(c)
        a0 = complex(equilibrium.a_squared(0.0, geo))
        a1 = complex(equilibrium.a_squared(-1.0, geo))
        ac = complex(equilibrium.a_squared(-math.exp(c), geo))
        assert abs(a0 - np.exp(1j * geo.theta)) < 1e-12
        assert abs(a1 * ac - a0) < 1e-12
    print("✅ R and a identities")


def test_h_closed_form_against_quadrature():
    """h(3i) from the closed form and from its defining integral, c = 1"""
    geo = equilibrium.arc_geometry(1.0)
    closed = complex(equilibrium.h(3j, geo))
    numeric = equilibrium.h_integral(3j, geo)
    print(f"   closed {closed}, quadrature {numeric}")
    assert abs(closed - numeric) < 1e-9
    print("✅ h matches its integral")


def test_h_identities():
    """h_1 R(0) = c and h_2 = c, closed forms and large-circle fits"""
    print("🧪 Testing h identities")
    print("=" * 50)
    for c in (0.5, 1.0, 2.0, 5.0):
        geo = equilibrium.arc_geometry(c)
        coeffs = equilibrium.h_coefficients(geo)
        assert abs(coeffs["h1"] * coeffs["R0"] - c) < 1e-10
        assert abs(coeffs["h2"] - c) < 1e-10
        fit = equilibrium.h_laurent(geo)
        assert abs(fit["h1"] - coeffs["h1"]) < 1e-8
        assert abs(fit["h2"] - coeffs["h2"]) < 1e-8
        print(f"✅ c={c}")


def test_psi_residues():
    """z psi(z) -> 1 at infinity and -> -1 at the origin"""
    geo = equilibrium.arc_geometry(1.0)
    far = 1e4 * np.exp(0.3j)
    near = 1e-4 * np.exp(0.3j)
    assert abs(far * complex(equilibrium.psi(far, geo)) - 1.0) < 1e-3
    assert abs(near * complex(equilibrium.psi(near, geo)) + 1.0) < 1e-3
    print("✅ psi residues")


def test_psi_jump_on_interval():
    """psi_+ - psi_- = 2 pi i / (c x) on (-e^c, -1), upper side minus lower side"""
    for c in (1.0, 2.0):
        geo = equilibrium.arc_geometry(c)
        for x in (-1.3, -0.5 * (1 + math.exp(c)), -0.9 * math.exp(c)):
            up = complex(equilibrium.boundary_value(lambda p: equilibrium.psi(p, geo), x, 1j))
            down = complex(equilibrium.boundary_value(lambda p: equilibrium.psi(p, geo), x, -1j))
            expected = 2j * math.pi / (c * x)
            assert abs((up - down) - expected) < 1e-6, (c, x, up - down)
    print("✅ psi jump on the interval")


def test_psi_on_gamma_and_reflection():
    """psi_+ = -psi_- on gamma_0 and c (e^c/z) psi(e^c/z) = -c z psi(z)"""
    print("🧪 Testing psi symmetries")
    print("=" * 50)
    c = 1.0
    geo = equilibrium.arc_geometry(c)
    for t in (-0.8, -0.2, 0.0, 0.5, 0.9):
        x = geo.radius * np.exp(1j * t * geo.theta)
        plus = complex(equilibrium.psi(x, geo, "+"))
        minus = complex(equilibrium.psi(x, geo, "-"))
        assert abs(plus + minus) < 1e-12 * max(1.0, abs(plus))
        inside = complex(equilibrium.boundary_value(lambda p: equilibrium.psi(p, geo), x, -x))
        outside = complex(equilibrium.boundary_value(lambda p: equilibrium.psi(p, geo), x, x))
        assert abs(inside - plus) < 1e-6 * max(1.0, abs(plus)), t
        assert abs(outside - minus) < 1e-6 * max(1.0, abs(minus)), t
    rng = np.random.default_rng(11)
    rho = geo.radius * rng.uniform(0.3, 3.0, 20)
    z = rho * np.exp(1j * rng.uniform(-math.pi, math.pi, 20))
    w = math.exp(c) / z
    left = c * w * equilibrium.psi(w, geo)
    right = -c * z * equilibrium.psi(z, geo)
    assert np.max(np.abs(left - right)) < 1e-10
    print("✅ psi symmetries")


def test_L_on_the_positive_real_axis():
    """L is real and continuous on (0, inf) apart from the arc crossing"""
    for c in (0.5, 1.0, 2.0, 5.0):
        geo = equilibrium.arc_geometry(c)
        x = np.array([0.3, 0.5, 0.9, 1.5, 2.0, 4.0, 100.0]) * geo.radius
        values = equilibrium.L_fun(x, geo)
        assert np.max(np.abs(values.imag)) < 1e-10, c
        up = equilibrium.L_fun(x + 1e-9j, geo)
        down = equilibrium.L_fun(x - 1e-9j, geo)
        assert np.max(np.abs(up - down)) < 1e-6, c
    geo = equilibrium.arc_geometry(1.0)
    z_psi = 3.0 * complex(equilibrium.psi(3.0, geo))
    assert abs(z_psi.imag) < 1e-10 and 0 < z_psi.real < 1
    print("✅ L real on the positive axis")


def test_cut_guards():
    """psi and h refuse points on gamma_0 or [-e^c, -1] without a side"""
    geo = equilibrium.arc_geometry(1.0)
    for func in (equilibrium.psi, equilibrium.h):
        for point in (geo.radius + 0j, geo.radius * np.exp(0.5j), -2.0 + 0j, -1.0 + 0j):
            try:
                func(point, geo)
            except BranchCutError:
                pass
            else:
                raise AssertionError(f"{func.__name__}({point}) should fail")
    assert np.isfinite(complex(equilibrium.psi(geo.radius + 0j, geo, "+")))
    assert np.isfinite(complex(equilibrium.psi(-0.5 + 0j, geo)))
    assert np.isfinite(complex(equilibrium.h(-3.0 + 0j, geo)))
    print("✅ cut guards")


def test_V_jump():
    """V_+ - V_- = 4 pi i (1 - log|x| / c) on (-e^c, -1)"""
    c = 2.0
    geo = equilibrium.arc_geometry(c)
    for x in (-1.5, -3.0, -6.0):
        up = complex(equilibrium.boundary_value(lambda p: equilibrium.V(p, geo), x, 1j))
        down = complex(equilibrium.boundary_value(lambda p: equilibrium.V(p, geo), x, -1j))
        expected = 4j * math.pi * (1 - math.log(abs(x)) / c)
        assert abs((up - down) - expected) < 1e-6
    print("✅ V jump")


def test_equilibrium_measure():
    """Unit mass and positive density on the 64-point grid"""
    print("🧪 Testing the equilibrium measure")
    print("=" * 50)
    for c in (1.0, 5.0, 25.0):
        report = equilibrium.equilibrium_measure_check(equilibrium.arc_geometry(c))
        print(f"   c={c}: mass={report['mass']:.12f}, min density={report['min_density']:.3e}")
        assert report["positive"]
        assert abs(report["mass"] - 1.0) < 1e-8
        assert report["passed"]
    exponent = equilibrium.endpoint_exponent(equilibrium.arc_geometry(1.0))
    assert abs(exponent - 0.5) < 0.05
    try:
        equilibrium.equilibrium_measure_check(equilibrium.arc_geometry(1.0), m=4)
    except ValueError:
        pass
    else:
        raise AssertionError("grid below 8 should fail")
    print("✅ probability measure")


def test_g_normalization_and_derivative():
    """g(z) - log z -> 0 and g' from finite differences"""
    geo = equilibrium.arc_geometry(1.0)
    far = np.array([1e4 + 0j])
    g_far = complex(equilibrium.g(far, geo)[0])
    assert abs(g_far - math.log(1e4)) < 2e-4
    assert abs(g_far.imag) < 1e-10
    assert abs(complex(equilibrium.g(np.array([3.0 * geo.radius + 0j]), geo)[0]).imag) < 1e-10
    for z in (2.0 * geo.radius * np.exp(0.5j), 0.5 * geo.radius * np.exp(-0.7j)):
        step = 1e-4 * geo.radius
        diff = (equilibrium.g(np.array([z + step]), geo)[0] - equilibrium.g(np.array([z - step]), geo)[0]) / (2 * step)
        assert abs(complex(diff) - complex(equilibrium.g_prime(z, geo))) < 1e-6
    try:
        equilibrium.g(np.array([geo.radius + 0j]), geo)
    except BranchCutError:
        pass
    else:
        raise AssertionError("g on the arc without a side should fail")
    print("✅ g normalization and derivative")


def test_phi_on_and_off_the_arc():
    """Re phi vanishes on gamma_0 and is negative on the rest of the circle"""
    print("🧪 Testing Re phi")
    print("=" * 50)
    geo = equilibrium.arc_geometry(1.0)
    midpoint = equilibrium.phi_on_arc(geo, m=1)
    assert abs(midpoint["value"].iloc[0]) < 1e-7
    assert equilibrium.phi_on_arc(geo, m=8)["value"].abs().max() < 1e-6
    assert equilibrium.arc_inequality(geo, m=8)["value"].max() <= 1e-8
    for c in (1.0, 2.0, 5.0):
        value = equilibrium.re_phi_reflection_point(equilibrium.arc_geometry(c))
        print(f"   Re phi(-e^(c/2)) = {value:.6f} at c={c}")
        assert value < 0
    signs = equilibrium.phi_sign_map(geo, points=21)["re_phi"].dropna()
    assert (signs > 0).any() and (signs < 0).any()
    print("✅ Re phi signs")


def test_szego():
    """Jump product, Schwarz symmetry and the trivial weight"""
    print("🧪 Testing the Szego function")
    print("=" * 50)
    geo = equilibrium.arc_geometry(1.0)
    assert equilibrium.szego_jump_check(geo, m=5) < 1e-7
    z = 1.7 * geo.radius * np.exp(0.9j)
    assert abs(equilibrium.szego(z.conjugate(), geo) - equilibrium.szego(z, geo).conjugate()) < 1e-10
    s_inf = equilibrium.szego_at_infinity(geo)
    assert abs(s_inf) > 0 and np.isfinite(abs(s_inf))

    def zero_weight(x, g):
        return 0.0 * np.asarray(x)

    assert abs(equilibrium.szego(z, geo, zero_weight) - 1.0) < 1e-14
    try:
        equilibrium.szego(geo.z_plus, geo)
    except BranchCutError:
        pass
    else:
        raise AssertionError("szego at an endpoint should fail")
    print("✅ Szego checks")


def test_branched_functions():
    """Continuity off the cuts and opposite boundary values of R on gamma_0"""
    geo = equilibrium.arc_geometry(1.0)
    functions = equilibrium.branched_functions(geo)
    rng = np.random.default_rng(7)
    angles = rng.uniform(-2.5, 2.5, 12)
    points = np.concatenate([2.0 * geo.radius * np.exp(1j * angles), 0.5 * geo.radius * np.exp(1j * angles)])
    for name in ("R", "a", "L", "psi"):
        assert functions[name].continuity_defect(points) < 1e-4, name
    x = geo.radius * np.exp(0.3j)
    plus = complex(functions["R"](x, "+"))
    minus = complex(functions["R"](x, "-"))
    assert abs(plus + minus) < 1e-12
    assert functions["g"].cut.startswith("(-inf")
    print("✅ branched functions")


if __name__ == "__main__":
    test_arc_geometry()
    test_R_and_a()
    test_h_closed_form_against_quadrature()
    test_h_identities()
    test_psi_residues()
    test_psi_jump_on_interval()
    test_psi_on_gamma_and_reflection()
    test_L_on_the_positive_real_axis()
    test_cut_guards()
    test_V_jump()
    test_equilibrium_measure()
    test_g_normalization_and_derivative()
    test_phi_on_and_off_the_arc()
    test_szego()
    test_branched_functions()
