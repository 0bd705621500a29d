import numpy as np
import pytest

from ttolab import (BlaschkeProduct, BoundaryPoint, CircleFunction,
                    ModelSpace, Monomial, ProductInner, tm_basis)
from ttolab.circle import inner_product, lp_norm
from ttolab.errors import BoundaryPointNotNormalizable, NoAngularDerivative
from ttolab.inner import square
from ttolab.modelspace import product_into

from conftest import random_blaschke_space


def test_tm_basis_monomials():
    basis = tm_basis(Monomial(4))
    for j, e in enumerate(basis):
        assert abs(e.coeff(j) - 1.0) < 1e-13
        assert sum(abs(e.coeff(k)) for k in range(8) if k != j) < 1e-12


def test_tm_basis_gram_identity(rng):
    space = random_blaschke_space(rng, 8)
    assert space.gram_residual() < 1e-10


def test_tm_basis_orthogonal_to_theta_h2(rng):
    space = random_blaschke_space(rng, 8)
    th = space.theta_samples
    g = space.grid
    for m in range(6):
        f = CircleFunction(g, th * g.points ** m)
        for j in range(space.dim):
            e = CircleFunction(g, space.basis_samples[:, j])
            assert abs(inner_product(e, f)) < 1e-10


def test_project_kills_theta_h2(rng):
    space = random_blaschke_space(rng, 5)
    f = CircleFunction(space.grid, space.theta_samples * space.grid.points)
    assert space.project(f).norm() < 1e-10


def test_project_constant(rng):
    # P_Theta 1 = 1 - conj(Theta(0)) Theta
    space = random_blaschke_space(rng, 5)
    one = CircleFunction(space.grid, np.ones(space.grid.n))
    proj = space.project(one)
    th0 = complex(space.theta.eval(0.0))
    expect = 1.0 - np.conj(th0) * space.theta_samples
    assert np.max(np.abs(proj.samples() - expect)) < 1e-10
    # monomial case: Theta(0) = 0 so the projection is 1
    sp = ModelSpace(Monomial(3))
    assert np.max(np.abs(sp.project(
        CircleFunction(sp.grid, np.ones(sp.grid.n))).samples() - 1.0)) < 1e-12


def test_project_idempotent_selfadjoint(rng):
    space = random_blaschke_space(rng, 6)
    g = space.grid
    f = CircleFunction(g, rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n))
    h = CircleFunction(g, rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n))
    pf = space.project(f)
    ph = space.project(h)
    assert (space.project(pf.as_circle()) - pf).norm() < 1e-10
    lhs = inner_product(pf.as_circle(), h)
    rhs = inner_product(f, ph.as_circle())
    assert abs(lhs - rhs) < 1e-10


def test_project_squared_kernel(rng):
    # P_Theta k_lambda^{Theta^2} = k_lambda^Theta
    space = random_blaschke_space(rng, 5)
    th2 = square(space.theta)
    for lam in (0.2 + 0.1j, -0.4j, 0.55):
        tv2 = complex(th2.eval(lam))
        k2 = CircleFunction(space.grid,
                            (1.0 - np.conj(tv2) * space.theta_samples ** 2)
                            / (1.0 - np.conj(lam) * space.grid.points))
        proj = space.project(k2)
        k1 = space.kernel(lam)
        assert (proj - k1).norm() < 1e-9


def test_kernel_at_origin_monomial():
    sp = ModelSpace(Monomial(4))
    k0 = sp.kernel(0.0)
    assert np.max(np.abs(k0.samples() - 1.0)) < 1e-12


def test_kernel_reproduces(rng):
    space = random_blaschke_space(rng, 8)
    f = space.from_coeffs(rng.standard_normal(8) + 1j * rng.standard_normal(8))
    for _ in range(200):
        lam = 0.95 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        k = space.kernel(lam)
        assert abs(f.inner(k) - f.eval(lam)) < 1e-9


def test_boundary_kernel_norm_monomial():
    N = 6
    sp = ModelSpace(Monomial(N))
    for t in (0.0, 1.1, 3.7):
        k = sp.kernel(BoundaryPoint(t))
        assert abs(k.norm() ** 2 - N) < 1e-10


def test_boundary_kernel_requires_certificate():
    from ttolab.inner import BlaschkeZero
    zeros = [BlaschkeZero(2.0 ** -k, 0.0) for k in range(1, 16)]
    space = ModelSpace(BlaschkeProduct(zeros, truncated=True))
    with pytest.raises(NoAngularDerivative):
        space.kernel(BoundaryPoint(0.0))


def test_orthogonal_kernel_split(rng):
    # k_lambda = k_lambda^Theta + Theta conj(Theta(lambda)) k_lambda at grid points
    space = random_blaschke_space(rng, 6)
    g = space.grid
    for lam in (0.3, -0.2 + 0.4j):
        cauchy = 1.0 / (1.0 - np.conj(lam) * g.points)
        tv = complex(space.theta.eval(lam))
        lhs = cauchy
        rhs = space.kernel(lam).samples() + space.theta_samples * np.conj(tv) * cauchy
        assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_normalized_kernel_unit_norm(rng):
    space = random_blaschke_space(rng, 7)
    for _ in range(200):
        lam = 0.97 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        assert abs(space.normalized_kernel(lam).norm() - 1.0) < 1e-10
    with pytest.raises(BoundaryPointNotNormalizable):
        space.normalized_kernel(BoundaryPoint(0.3))


def test_kernel_norm_lower_bound(rng):
    # ||k_lambda|| >= sqrt((1-|Theta(0)|)/(1+|Theta(0)|))
    space = random_blaschke_space(rng, 6)
    t0 = abs(complex(space.theta.eval(0.0)))
    floor = np.sqrt((1.0 - t0) / (1.0 + t0))
    for _ in range(100):
        lam = 0.98 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        assert space.kernel(lam).norm() >= floor - 1e-12


def test_omega_involution(rng):
    space = random_blaschke_space(rng, 6)
    f = space.from_coeffs(rng.standard_normal(6) + 1j * rng.standard_normal(6))
    back = space.omega(space.omega(f))
    assert np.max(np.abs(back.coeffs - f.coeffs)) < 1e-12


def test_omega_commutes_with_projection(rng):
    space = random_blaschke_space(rng, 6)
    g = space.grid
    f = CircleFunction(g, rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n))
    a = space.omega(space.project(f))
    b = space.project(space.omega(f))
    assert (a - b).norm() < 1e-10


def test_omega_kernel_is_difference_quotient(rng):
    space = random_blaschke_space(rng, 6)
    for lam in (0.0, 0.3 - 0.5j):
        dq = space.difference_quotient(lam)
        om = space.omega(space.kernel(lam))
        assert (dq - om).norm() < 1e-12
        # samplewise closed form
        tv = complex(space.theta.eval(lam))
        expect = (space.theta_samples - tv) / (space.grid.points - lam)
        assert np.max(np.abs(dq.samples() - expect)) < 1e-9


def test_omega_boundary_kernel(rng):
    # omega(k_zeta) = conj(zeta) Theta(zeta) k_zeta on E(Theta)
    space = random_blaschke_space(rng, 5)
    zeta = BoundaryPoint(1.234)
    k = space.kernel(zeta)
    om = space.omega(k)
    tv = complex(space.theta.eval(zeta.value))
    expect = np.conj(zeta.value) * tv * k.coeffs
    assert np.max(np.abs(om.coeffs - expect)) < 1e-9


def test_difference_quotient_monomials():
    sp = ModelSpace(Monomial(2))
    dq0 = sp.difference_quotient(0.0)
    assert np.max(np.abs(dq0.samples() - sp.grid.points)) < 1e-12
    dq = sp.difference_quotient(0.5)
    assert np.max(np.abs(dq.samples() - (sp.grid.points + 0.5))) < 1e-12


def test_difference_quotient_equals_omega_kernel_random(rng):
    space = random_blaschke_space(rng, 8)
    for _ in range(100):
        lam = 0.9 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        a = space.difference_quotient(lam)
        b = space.omega(space.kernel(lam))
        assert (a - b).norm() < 1e-10


def test_product_lemma(rng):
    # f1 in K_Theta1, bounded f2 in K_Theta2 => f1 f2, z f1 f2 in K_{Theta1 Theta2}
    s1 = random_blaschke_space(rng, 3)
    s2 = random_blaschke_space(rng, 4)
    big = ModelSpace(ProductInner([s1.theta, s2.theta]))
    f1 = s1.from_coeffs(rng.standard_normal(3) + 1j * rng.standard_normal(3))
    f2 = s2.from_coeffs(rng.standard_normal(4) + 1j * rng.standard_normal(4))
    for with_z in (False, True):
        proj = product_into(big, f1, f2, with_z=with_z)
        raw = f1.as_circle().on_grid(big.grid).samples \
            * f2.as_circle().on_grid(big.grid).samples
        if with_z:
            raw = big.grid.points * raw
        resid = np.sqrt(np.mean(np.abs(proj.samples() - raw) ** 2))
        assert resid < 1e-9


def test_nesting_lemma(rng):
    # theta^3 | z Theta: theta K_theta subset K_{theta^2} subset K_Theta
    theta = ModelSpace(Monomial(2))
    big = ModelSpace(Monomial(7))
    mid = ModelSpace(Monomial(4))
    f = theta.from_coeffs(rng.standard_normal(2) + 1j * rng.standard_normal(2))
    tf = CircleFunction(theta.grid,
                        theta.theta_samples * f.samples())
    for target in (mid, big):
        proj = target.project(tf)
        resid = np.sqrt(np.mean(np.abs(
            proj.samples() - tf.on_grid(target.grid).samples) ** 2))
        assert resid < 1e-9


def test_kernel_comparison_pointwise(rng):
    # k^{Theta^2} = (1 + conj(Theta(lam)) Theta) k^Theta and the 2x bound
    space = random_blaschke_space(rng, 5)
    th2 = square(space.theta)
    for lam in (0.25, -0.3 + 0.45j):
        tv = complex(space.theta.eval(lam))
        tv2 = complex(th2.eval(lam))
        k1 = space.kernel(lam).samples()
        k2 = ((1.0 - np.conj(tv2) * space.theta_samples ** 2)
              / (1.0 - np.conj(lam) * space.grid.points))
        expect = (1.0 + np.conj(tv) * space.theta_samples) * k1
        assert np.max(np.abs(k2 - expect)) < 1e-10
        g = space.grid
        for p in (2.0, 3.0, 4.0):
            a = lp_norm(CircleFunction(g, k2), p)
            b = lp_norm(CircleFunction(g, k1), p)
            assert a <= 2.0 * b * (1.0 + 1e-12)


def test_projection_independent_of_zero_ordering(rng):
    zeros = [0.3, -0.2 + 0.4j, 0.5j, -0.45]
    s1 = ModelSpace(BlaschkeProduct(zeros))
    s2 = ModelSpace(BlaschkeProduct(zeros[::-1]))
    g = s1.grid
    f = CircleFunction(g, rng.standard_normal(g.n) + 1j * rng.standard_normal(g.n))
    p1 = s1.project(f).samples()
    p2 = s2.project(f.on_grid(s2.grid)).samples()
    assert np.max(np.abs(p1 - p2)) < 1e-10


def test_truncated_mode_projection_smooth():
    # truncated-mode projection is spectrally accurate for smooth Theta
    space = ModelSpace(BlaschkeProduct([0.4, -0.3 + 0.2j]), mode="truncated")
    f = CircleFunction(space.grid, space.theta_samples * space.grid.points)
    assert space.project(f).norm() < 1e-12
    k = space.kernel(0.3 + 0.1j)
    assert (space.project(k.as_circle()) - k).norm() < 1e-12


def test_truncated_mode_projection_singular():
    from ttolab import SingularAtomic, Atom
    space = ModelSpace(SingularAtomic([Atom(0.0, 1.0)]), n=4096)
    assert space.mode == "truncated"
    f = CircleFunction(space.grid, space.theta_samples * space.grid.points)
    # Theta z lies in Theta H^2; the atomic singular function's Fourier tail
    # (~ k^{-3/4}) caps the honest grid accuracy at the percent level
    assert space.project(f).norm() < 0.15


def test_tm_basis_rejects_singular():
    from ttolab import SingularAtomic, Atom
    from ttolab.errors import UnsupportedVariant
    with pytest.raises(UnsupportedVariant):
        tm_basis(SingularAtomic([Atom(0.0, 1.0)]))


def test_projection_residual_reporting():
    from ttolab.modelspace import projection_residual
    from ttolab import SingularAtomic, Atom
    import numpy as np
    theta = SingularAtomic([Atom(0.0, 1.0)])

    def sampler(grid):
        return CircleFunction(grid, 1.0 / (1.0 - 0.3 * grid.points))

    f, resid, n = projection_residual(theta, sampler, n=4096, tol=1e-8,
                                      max_n=2 ** 14)
    assert np.isfinite(resid)
    assert n == 2 ** 14  # slow singular tails: budget exhausted, residual reported
    # smooth case converges immediately
    f2, resid2, n2 = projection_residual(BlaschkeProduct([0.4]), sampler,
                                         n=4096, tol=1e-8, max_n=2 ** 14)
    assert resid2 <= 1e-8
