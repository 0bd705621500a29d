import cmath

import numpy as np
import pytest

from ttolab import (Atom, BlaschkeProduct, BlaschkeZero, BoundaryPoint,
                    Monomial, ProductInner, SingularAtomic, cohn_sum, divides,
                    from_json, has_angular_derivative, power)
from ttolab.errors import AtomAtPoint, UndefinedBoundaryValue, UnsupportedVariant
from ttolab.inner import cohn_terms, square


def family_zeros(count):
    return [BlaschkeZero(8.0 ** -k, 2.0 ** -k) for k in range(1, count + 1)]


def test_monomial_eval():
    th = Monomial(3)
    assert abs(th.eval(0.5) - 0.125) < 1e-15
    with pytest.raises(ValueError):
        Monomial(0)


def test_blaschke_zero_eval():
    a = 0.4 + 0.3j
    th = BlaschkeProduct([a])
    assert abs(th.eval(a)) < 1e-15
    # paper normalization: b_a(0) = a
    assert abs(th.eval(0.0) - a) < 1e-15


def test_singular_at_origin():
    th = SingularAtomic([Atom(0.7, 0.8)])
    assert abs(th.eval(0.0) - np.exp(-0.8)) < 1e-15


def test_modulus_bounds(rng):
    th = ProductInner([Monomial(2), BlaschkeProduct([0.5, -0.3 + 0.2j]),
                       SingularAtomic([Atom(1.0, 0.4)])])
    for _ in range(50):
        z = 0.97 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        assert abs(th.eval(z)) < 1.0
    # unimodular on the boundary away from the atom
    for t in (0.3, 2.0, 4.0):
        assert abs(abs(th.eval(cmath.exp(1j * t))) - 1.0) < 1e-12


def test_boundary_value_at_atom_undefined():
    th = SingularAtomic([Atom(0.0, 1.0)])
    with pytest.raises(UndefinedBoundaryValue):
        th.eval(1.0 + 0j)


def test_product_multiplicativity(rng):
    a = BlaschkeProduct([0.3, -0.2 + 0.4j])
    b = SingularAtomic([Atom(2.0, 0.5)])
    prod = ProductInner([a, b])
    for _ in range(20):
        z = 0.9 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        assert abs(prod.eval(z) - a.eval(z) * b.eval(z)) < 1e-12


def test_cohn_sum_single_zero():
    th = BlaschkeProduct([0.0])
    assert abs(cohn_sum(th, 0.0, 2.0, 1) - 1.0) < 1e-15


def test_cohn_sum_monotone_in_terms():
    th = BlaschkeProduct(family_zeros(20), truncated=True)
    sums = [cohn_sum(th, 0.0, 2.0, k) for k in range(1, 21)]
    assert all(b >= a for a, b in zip(sums, sums[1:]))


def test_family_p2_cauchy_p3_divergent():
    # partial-sum oracle: S_2K - S_K -> 0 at p=2, S_K >= c K at p=3
    th = BlaschkeProduct(family_zeros(40), truncated=True)
    for K in (10, 20):
        gap = cohn_sum(th, 0.0, 2.0, 2 * K) - cohn_sum(th, 0.0, 2.0, K)
        assert gap < 2.4 * 2.0 ** -K  # explicit termwise bound
    s3 = [cohn_sum(th, 0.0, 3.0, K) for K in (10, 20, 40)]
    for K, s in zip((10, 20, 40), s3):
        assert s >= 0.5 * K
    # each p=3 term individually sits in [0.5, 2.2]
    bl, _ = cohn_terms(th, 0.0, 3.0)
    assert bl.min() >= 0.5 and bl.max() <= 2.2


def test_cohn_atom_at_point():
    th = SingularAtomic([Atom(0.0, 1.0)])
    with pytest.raises(AtomAtPoint):
        cohn_sum(th, 0.0, 2.0, 1)


def test_angular_derivative_monomial():
    for n in (1, 2, 7):
        cert = has_angular_derivative(Monomial(n), 0.0)
        assert cert.verdict == "yes"
        assert abs(cert.value - n) < 1e-14


def test_angular_derivative_divergent_family():
    zeros = [BlaschkeZero(2.0 ** -k, 0.0) for k in range(1, 21)]  # 1 - 2^-k real
    th = BlaschkeProduct(zeros, truncated=True)
    assert has_angular_derivative(th, 0.0).verdict == "no"


def test_angular_derivative_convergent_family():
    th = BlaschkeProduct(family_zeros(64), truncated=True)
    cert = has_angular_derivative(th, 0.0)
    assert cert.verdict == "yes"
    # limit value agrees with the plain partial sum
    assert abs(cert.value - cohn_sum(th, 0.0, 2.0, 64)) < 1e-12


def test_angular_derivative_singular_factor_two():
    # |Theta'(zeta)| = 2 c / |zeta - atom|^2 for one atom
    th = SingularAtomic([Atom(0.0, 1.0)])
    cert = has_angular_derivative(th, np.pi)  # zeta = -1
    assert cert.verdict == "yes"
    assert abs(cert.value - 2.0 * 1.0 / 4.0) < 1e-14


def test_angular_derivative_squared_agrees():
    # E(Theta^2) = E(Theta); the certificate value doubles
    th = BlaschkeProduct(family_zeros(64), truncated=True)
    c1 = has_angular_derivative(th, 0.0)
    c2 = has_angular_derivative(square(th), 0.0)
    assert c1.verdict == c2.verdict == "yes"
    assert abs(c2.value - 2.0 * c1.value) < 1e-10
    # termwise: each zero is doubled
    b1, _ = cohn_terms(th, 0.0, 2.0)
    b2, _ = cohn_terms(square(th), 0.0, 2.0)
    assert len(b2) == 2 * len(b1)


def test_divides_monomials():
    assert divides(Monomial(3), ProductInner([Monomial(1), Monomial(4)]))
    assert not divides(Monomial(5), Monomial(4))


def test_divides_blaschke():
    a, b = 0.3 + 0.1j, -0.5
    assert divides(BlaschkeProduct([a]), BlaschkeProduct([a, b]))
    assert not divides(BlaschkeProduct([b, b]), BlaschkeProduct([a, b]))


def test_divides_singular_mass():
    th = SingularAtomic([Atom(0.0, 1.0)])
    half = power(th, 0.5)
    assert not divides(th, half)
    assert divides(half, th)


def test_divides_power_mismatched_bases():
    p1 = power(SingularAtomic([Atom(0.0, 1.0)]), 0.5)
    p2 = power(SingularAtomic([Atom(1.0, 1.0)]), 0.5)
    with pytest.raises(UnsupportedVariant):
        divides(p1, p2)


def test_power_basics(rng):
    th = SingularAtomic([Atom(0.0, 0.8), Atom(2.0, 0.3)])
    assert power(th, 1.0) is th
    half = power(th, 0.5)
    assert abs(half.eval(0.0) - np.exp(-0.55)) < 1e-15
    with pytest.raises(UnsupportedVariant):
        power(BlaschkeProduct([0.5]), 0.5)
    for _ in range(100):
        z = 0.95 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        assert abs(abs(half.eval(z)) - abs(th.eval(z)) ** 0.5) < 1e-12


def test_json_roundtrip():
    specs = [
        {"type": "monomial", "degree": 4},
        {"type": "blaschke", "zeros": [{"re": 0.3, "im": -0.2, "mult": 2}]},
        {"type": "singular", "atoms": [{"angle": 0.5, "mass": 1.2}]},
        {"type": "product", "factors": [{"type": "monomial", "degree": 1},
                                        {"type": "singular",
                                         "atoms": [{"angle": 0.0, "mass": 1.0}]}]},
        {"type": "power", "base": {"type": "singular",
                                   "atoms": [{"angle": 0.0, "mass": 1.0}]},
         "s": 0.5},
    ]
    for spec in specs:
        th = from_json(spec)
        again = from_json(th.to_json())
        z = 0.4 + 0.2j
        assert abs(th.eval(z) - again.eval(z)) < 1e-15


def test_json_delta_zeros():
    # high-precision zeros survive the delta/angle form
    spec = {"type": "blaschke",
            "zeros": [{"delta": 8.0 ** -20, "angle": 2.0 ** -20, "mult": 1}],
            "truncated": True}
    th = from_json(spec)
    assert th.zeros()[0].delta == 8.0 ** -20
    assert th.truncated


def test_boundary_point():
    p = BoundaryPoint(np.pi)
    assert abs(p.value + 1.0) < 1e-15


def test_cohn_termwise_p3_vs_p2():
    # for |zeta - a| <= 2 each p=3 term dominates half the p=2 term
    th = BlaschkeProduct(family_zeros(20), truncated=True)
    t2, _ = cohn_terms(th, 0.0, 2.0)
    t3, _ = cohn_terms(th, 0.0, 3.0)
    assert np.all(t3 >= 0.5 * t2)
