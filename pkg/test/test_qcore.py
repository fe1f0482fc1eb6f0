#!/usr/bin/env python3
"""
Exact q-series, moments and the orthogonal polynomial constructions.
"""

import sys
import os
from fractions import Fraction

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from qvolume import qcore
from qvolume.exceptions import DegenerateInputError
from qvolume.objects.polynomial import QJacobiParams


def test_q_series():
    """Pochhammer and Gaussian binomial examples"""
    print("🧪 Testing q-series")
    print("=" * 50)
    assert qcore.q_pochhammer(5, 7, 0) == 1
    assert qcore.q_pochhammer(2, 2, 2) == 3
    assert qcore.q_pochhammer(1, 1, 3) == 0
    assert qcore.q_binomial(2, 1, 2) == 3
    assert qcore.q_binomial(7, 0, Fraction(3, 2)) == 1
    assert qcore.q_binomial(4, 2, 1) == 6
    assert qcore.q_binomial(3, 4, 2) == 0
    for n in range(1, 7):
        for m in range(n + 1):
            assert qcore.q_binomial(n, m, Fraction(5, 3)) == qcore.q_binomial(n, n - m, Fraction(5, 3))
    print("✅ q-series examples hold")


def test_weight_and_moments():
    """Laurent expansion of the weight and the moment table read from it"""
    print("🧪 Testing weight and moments")
    print("=" * 50)
    assert qcore.weight_laurent(1, 2).coefficients == (1, 6, 8)
    assert qcore.weight_laurent(1, 1).coefficients == (1, 2, 1)
    for N in (1, 2, 3):
        for q in (Fraction(3, 2), 2):
            laurent = qcore.weight_laurent(N, q)
            assert len(laurent.coefficients) == 2 * N + 1
            assert laurent.coefficients == qcore.weight_product(N, q).coefficients
            table = qcore.moments(N, q)
            for k in range(2 * N + 2):
                assert table.moment(k) == laurent.coefficient(k + 1)
    table = qcore.moments(1, 2)
    assert table.moment(0) == 6
    assert table.moment(1) == 8
    assert table.moment(2) == 0
    print("✅ moments agree with the residues of the weight")


def test_small_polynomials():
    """P_1 for N = 1, q = 2 and the kappa values"""
    print("🧪 Testing P_1 and kappa")
    print("=" * 50)
    assert qcore.op_via_hankel(0, 1, 2).coefficients == (1,)
    assert qcore.op_via_hankel(1, 1, 2).coefficients == (Fraction(-4, 3), 1)
    assert qcore.op_via_qjacobi(1, 1, 2).coefficients == (Fraction(-4, 3), 1)
    for route in (qcore.op_via_closed_form, qcore.op_via_qjacobi):
        assert all(isinstance(a, Fraction) for a in route(3, 2, Fraction(13, 10)).coefficients)
    assert isinstance(qcore.q_pochhammer(Fraction(1, 2), Fraction(3, 2), 0), Fraction)
    assert qcore.kappa(0, 1, 2) == 6
    assert qcore.kappa(1, 1, 2) == Fraction(-32, 3)
    print("✅ kappa_0 = 6, kappa_1 = -32/3")


def test_hankel_two_by_two():
    """P_2 for N = 2, q = 3/2 from Cramer's rule on the 2 x 2 moment system"""
    q = Fraction(3, 2)
    m = qcore.moments(2, q).moment
    det = m(0) * m(2) - m(1) * m(1)
    a0 = (-m(2) * m(2) + m(3) * m(1)) / det
    a1 = (-m(0) * m(3) + m(1) * m(2)) / det
    assert qcore.op_via_hankel(2, 2, q).coefficients == (a0, a1, 1)
    print("✅ Hankel route matches the 2 x 2 determinant")


def test_exact_orthogonality():
    """<z^k, P_n> = 0 exactly for n < 2N"""
    print("🧪 Testing exact orthogonality")
    print("=" * 50)
    for N in (2, 3, 4, 5):
        for q in (Fraction(3, 2), Fraction(2)):
            for n in range(1, 2 * N):
                assert all(r == 0 for r in qcore.orthogonality_residues(n, N, q)), (N, q, n)
                P = qcore.op_via_hankel(n, N, q)
                assert P.degree == n and P.is_monic()
        print(f"✅ N={N}")


def test_route_agreement():
    """Hankel, closed form, 2phi1 and recurrence routes agree coefficientwise"""
    print("🧪 Testing route agreement")
    print("=" * 50)
    for q in (Fraction(3, 2), Fraction(2), Fraction(3)):
        for N in range(1, 6):
            for n in range(min(6, 2 * N - 1) + 1):
                hankel = qcore.op_via_hankel(n, N, q).coefficients
                assert qcore.op_via_closed_form(n, N, q).coefficients == hankel
                assert qcore.op_via_qjacobi(n, N, q).coefficients == hankel
                assert qcore.op_via_model_recurrence(n, N, q).coefficients == hankel
    print("✅ all routes agree")


def test_recurrence_endpoint():
    """A_{2N-1} vanishes for the hexagon parameters; J_1 = x - (A_0 + C_0)"""
    for N in (1, 2, 3):
        q = Fraction(3, 2)
        A, C = qcore.jacobi_coefficients(QJacobiParams.for_model(N, q, 2 * N))
        assert A[2 * N - 1] == 0
        J1 = qcore.op_via_recurrence(1, QJacobiParams.for_model(N, q, 1))
        assert J1.coefficients == (-(A[0] + C[0]), 1)
    P = qcore.op_via_model_recurrence(3, 3, Fraction(3, 2))
    assert P.coefficients == qcore.op_via_hankel(3, 3, Fraction(3, 2)).coefficients
    print("✅ recurrence base and endpoint")


def test_degenerate_inputs():
    """n >= 2N and q <= 1 are rejected"""
    for bad in ((2, 1, 2), (4, 2, Fraction(3, 2))):
        try:
            qcore.op_via_hankel(*bad)
        except DegenerateInputError:
            pass
        else:
            raise AssertionError(f"op_via_hankel{bad} should fail")
    try:
        qcore.op_via_hankel(1, 1, 1)
    except DegenerateInputError:
        pass
    else:
        raise AssertionError("q = 1 should fail")
    print("✅ degenerate inputs rejected")


def test_high_precision_layer_matches_exact():
    """mpmath evaluator against the exact family at q = e^{c/2N}"""
    print("🧪 Testing the high precision evaluator")
    print("=" * 50)
    N, c = 3, 1.2
    q = np.exp(c / (2 * N))
    family = qcore.op_family(N, N, float(q))
    ctx, coefficients = qcore.op_mp_coefficients(N, c)
    assert np.allclose([float(a) for a in coefficients], family[N].coefficients, rtol=1e-12)
    z = np.array([0.7 + 0.3j, -2.0 + 1.0j])
    exact = np.array([family[N](complex(v)) for v in z])
    assert np.allclose(np.exp(qcore.op_log_value(z, N, c)), exact, rtol=1e-10)
    slope = np.array([family[N].derivative()(complex(v)) for v in z])
    assert np.allclose(qcore.op_newton_ratio(z, N, c), exact / slope, rtol=1e-10)
    print("✅ high precision evaluator agrees with the exact family")


def test_high_precision_layer_inside_the_circle():
    """log P_40 on and inside |z| = e^{c/2} does not move when the digits double"""
    N, c = 40, 1.0
    r = np.exp(c / 2)
    z = np.array([0.4 * r * np.exp(1j * np.pi / 5), r * np.exp(0.3j), -0.5 * r + 0.1j])
    digits = qcore.evaluation_digits(N, c)
    assert digits == 30 + 80
    base = qcore.op_log_value(z, N, c)
    fine = qcore.op_log_value(z, N, c, dps=2 * digits)
    assert np.allclose(np.exp(base - fine), 1.0, atol=1e-12)
    assert qcore.op_newton_ratio(z, N, c).shape == z.shape
    try:
        qcore.op_mp_coefficients(5, 0.0)
    except DegenerateInputError:
        pass
    else:
        raise AssertionError("c = 0 should fail")
    print("✅ digits are sufficient at N = 40")


def test_json_table():
    table = qcore.to_json_table(2, "3/2")
    assert table["moments"]["q"] == {"num": "3", "den": "2"}
    assert len(table["polynomials"]) == 4
    print("✅ JSON table")


if __name__ == "__main__":
    test_q_series()
    test_weight_and_moments()
    test_small_polynomials()
    test_hankel_two_by_two()
    test_exact_orthogonality()
    test_route_agreement()
    test_recurrence_endpoint()
    test_degenerate_inputs()
    test_high_precision_layer_matches_exact()
    test_high_precision_layer_inside_the_circle()
    test_json_table()
